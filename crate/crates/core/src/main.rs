use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use tablescore::corpus::{
    self, emit_ability_map, emit_report, evaluate, AggregateReport, EvalOptions, Loaded, ReportFormat,
};
use tablescore::gpt::{
    build_description_prompt, build_gptscore_prompt, ChatEndpointConfig, ChatTransport, GptScorer, HttpTransport,
    RecordingTransport, ReplayTransport,
};
use tablescore::hscore::score_pair;
use tablescore::model::TableFormat;

#[derive(Parser)]
#[command(name = "tablescore", version, about = "Score generated tables against references")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Content and structure scores for one prediction/gold pair.
    Score {
        #[arg(long)]
        format: TableFormat,
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Score a prediction file against a corpus and write a report.
    Eval(EvalArgs),
    /// Error-type totals for a prediction file.
    Errors {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print a prompt exactly as it would be sent.
    #[command(subcommand)]
    Prompt(PromptCommand),
    /// Render ability annotations as an SVG radar chart.
    AbilityMap {
        #[arg(long)]
        annotations: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mean gold table shape per format.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
    },
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    /// Also query a chat-completion endpoint for model-based scores.
    #[arg(long)]
    gptscore: bool,
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "json")]
    report_format: ReportFormat,
    /// Environment variable holding the bearer token.
    #[arg(long, default_value = tablescore::gpt::client::DEFAULT_AUTH_ENV)]
    auth_env: String,
    /// Record exchanges to this JSONL file, or read them back with --replay.
    #[arg(long)]
    transcript: Option<PathBuf>,
    /// Answer prompts from --transcript instead of the network.
    #[arg(long, requires = "transcript")]
    replay: bool,
    #[arg(long, default_value_t = 3)]
    max_retries: u32,
    #[arg(long, default_value_t = 4)]
    max_in_flight: usize,
    /// Request timeout in seconds.
    #[arg(long, default_value_t = 60)]
    timeout: u64,
}

#[derive(Subcommand)]
enum PromptCommand {
    /// Pairwise similarity prompt.
    Gptscore {
        #[arg(long)]
        t1: PathBuf,
        #[arg(long)]
        t2: PathBuf,
    },
    /// Format-description prompt for a table.
    Describe {
        #[arg(long)]
        format: TableFormat,
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn warn_rejected<T>(what: &str, loaded: &Loaded<T>) {
    for e in &loaded.errors {
        eprintln!("warning: {what}: {e}");
    }
}

fn load_pair(corpus: &Path, pred: &Path) -> Result<(Vec<corpus::CorpusItem>, Vec<corpus::PredictionRecord>)> {
    let c = corpus::load_corpus(corpus)?;
    warn_rejected("corpus", &c);
    let p = corpus::load_predictions(pred)?;
    warn_rejected("predictions", &p);
    Ok((c.records, p.records))
}

fn build_scorer(args: &EvalArgs) -> Result<GptScorer<Box<dyn ChatTransport>>> {
    let mut cfg =
        ChatEndpointConfig::new(args.endpoint.clone().unwrap_or_default(), args.model.clone().unwrap_or_default());
    cfg.auth_env = args.auth_env.clone();
    cfg.max_retries = args.max_retries;
    cfg.max_in_flight = args.max_in_flight;
    cfg.timeout = Duration::from_secs(args.timeout);
    let transport: Box<dyn ChatTransport> = if args.replay {
        let path = args.transcript.as_ref().expect("clap enforces --transcript");
        cfg.retry_base_delay = Duration::ZERO;
        Box::new(ReplayTransport::load(path).with_context(|| format!("loading {}", path.display()))?)
    } else {
        if args.endpoint.is_none() || args.model.is_none() {
            bail!("--gptscore needs --endpoint and --model (or --replay with --transcript)");
        }
        let http = HttpTransport::new(&cfg);
        match &args.transcript {
            Some(path) => {
                Box::new(RecordingTransport::new(http, path).with_context(|| format!("opening {}", path.display()))?)
            }
            None => Box::new(http),
        }
    };
    Ok(GptScorer::new(transport, cfg)?)
}

fn run_eval(args: &EvalArgs) -> Result<()> {
    let (items, preds) = load_pair(&args.corpus, &args.pred)?;
    let scorer = if args.gptscore { Some(build_scorer(args)?) } else { None };
    let opts = EvalOptions { parallelism: args.jobs, gptscore: scorer.as_ref() };
    let evaluation = evaluate(&items, &preds, &opts)?;

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let report_path = args.out.join(format!("report.{}", args.report_format.extension()));
    fs::write(&report_path, emit_report(&evaluation.report, args.report_format))
        .with_context(|| format!("writing {}", report_path.display()))?;
    let mut lines = String::new();
    for item in &evaluation.items {
        lines.push_str(&serde_json::to_string(item)?);
        lines.push('\n');
    }
    let items_path = args.out.join("items.jsonl");
    fs::write(&items_path, lines).with_context(|| format!("writing {}", items_path.display()))?;
    eprintln!("wrote {} and {}", report_path.display(), items_path.display());
    Ok(())
}

fn print_error_table(report: &AggregateReport) {
    let counts = [
        ("structure_errors", report.error_totals.structure_errors, report.error_proportions.structure_errors),
        (
            "structure_naming_errors",
            report.error_totals.structure_naming_errors,
            report.error_proportions.structure_naming_errors,
        ),
        ("element_errors", report.error_totals.element_errors, report.error_proportions.element_errors),
        (
            "element_format_errors",
            report.error_totals.element_format_errors,
            report.error_proportions.element_format_errors,
        ),
    ];
    println!("{:<24} {:>8} {:>10}", "error type", "count", "proportion");
    for (name, n, p) in counts {
        println!("{name:<24} {n:>8} {p:>10.4}");
    }
    println!("{:<24} {:>8}", "total", report.error_totals.total());
}

fn run(cli: Cli) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Score { format, gold, pred, json } => {
            let report = score_pair(&read(&pred)?, &read(&gold)?, format);
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                writeln!(out, "content    {:.6}", report.content.value())?;
                writeln!(out, "structure  {:.6}", report.structure.value())?;
                for (name, v) in &report.components {
                    writeln!(out, "  {name:<14} {:.6}", v.value())?;
                }
                for d in &report.diagnostics {
                    writeln!(out, "note: {d}")?;
                }
            }
        }
        Command::Eval(args) => run_eval(&args)?,
        Command::Errors { corpus, pred, json } => {
            let (items, preds) = load_pair(&corpus, &pred)?;
            let evaluation = evaluate(&items, &preds, &EvalOptions::default())?;
            if json {
                let body = serde_json::json!({
                    "totals": evaluation.report.error_totals,
                    "proportions": evaluation.report.error_proportions,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&body)?)?;
            } else {
                print_error_table(&evaluation.report);
            }
        }
        Command::Prompt(PromptCommand::Gptscore { t1, t2 }) => {
            write!(out, "{}", build_gptscore_prompt(&read(&t1)?, &read(&t2)?))?;
        }
        Command::Prompt(PromptCommand::Describe { format, input }) => {
            write!(out, "{}", build_description_prompt(format, &read(&input)?))?;
        }
        Command::AbilityMap { annotations, out: path } => {
            let loaded = corpus::load_annotations(&annotations)?;
            warn_rejected("annotations", &loaded);
            let svg = emit_ability_map(&loaded.records)?;
            fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?;
        }
        Command::Stats { corpus: path } => {
            let loaded = corpus::load_corpus(&path)?;
            warn_rejected("corpus", &loaded);
            writeln!(out, "{:<9} {:>6} {:>7} {:>10} {:>10}", "format", "items", "tables", "mean_rows", "mean_cols")?;
            for s in corpus::corpus_stats(&loaded.records) {
                writeln!(
                    out,
                    "{:<9} {:>6} {:>7} {:>10.2} {:>10.2}",
                    s.format.as_str(),
                    s.items,
                    s.tables,
                    s.mean_rows,
                    s.mean_cols
                )?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
