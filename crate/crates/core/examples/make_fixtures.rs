//! Regenerates the synthetic fixture files under `tests/fixtures`.
//!
//! cargo run -p tablescore --example make_fixtures

#[path = "../tests/common/mod.rs"]
mod common;

use common::{annotations, corpus60, fixture_path, identity_predictions, mixed_predictions, to_jsonl};

fn main() -> std::io::Result<()> {
    std::fs::create_dir_all(fixture_path(""))?;
    let items = corpus60();
    std::fs::write(fixture_path("corpus60.jsonl"), to_jsonl(&items))?;
    std::fs::write(fixture_path("predictions_identity.jsonl"), to_jsonl(&identity_predictions(&items)))?;
    std::fs::write(fixture_path("predictions_mixed.jsonl"), to_jsonl(&mixed_predictions(&items)))?;
    std::fs::write(fixture_path("annotations.jsonl"), to_jsonl(&annotations()))?;
    println!("wrote fixtures to {}", fixture_path("").display());
    Ok(())
}
