//! Six-axis radar chart of annotated model abilities.

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const AXES: [&str; 6] =
    ["coverage", "formatting", "reasoning", "comprehension", "pragmatics", "hallucination_control"];
pub const MAX_ABILITY: f64 = 10.0;

const CENTER: f64 = 200.0;
const RADIUS: f64 = 150.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbilityAnnotation {
    pub model: String,
    pub coverage: f64,
    pub formatting: f64,
    pub reasoning: f64,
    pub comprehension: f64,
    pub pragmatics: f64,
    pub hallucination_control: f64,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AbilityError {
    #[error("{model}: {axis} = {value} is outside [0, 10]")]
    OutOfRange { model: String, axis: &'static str, value: f64 },
    #[error("no annotations")]
    NoModels,
}

impl AbilityAnnotation {
    /// Scores in [`AXES`] order.
    pub fn scores(&self) -> [f64; 6] {
        [
            self.coverage,
            self.formatting,
            self.reasoning,
            self.comprehension,
            self.pragmatics,
            self.hallucination_control,
        ]
    }

    pub fn check(&self) -> Result<(), AbilityError> {
        for (axis, value) in AXES.iter().zip(self.scores()) {
            if !(0.0..=MAX_ABILITY).contains(&value) {
                return Err(AbilityError::OutOfRange { model: self.model.clone(), axis, value });
            }
        }
        Ok(())
    }
}

fn coord(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

/// Position of `value` on axis `i`: the first axis points up and the rest
/// follow clockwise.
pub fn radar_point(i: usize, value: f64) -> (f64, f64) {
    let angle = (-90.0 + 60.0 * i as f64).to_radians();
    let r = RADIUS * value / MAX_ABILITY;
    (CENTER + r * angle.cos(), CENTER + r * angle.sin())
}

fn polygon_points(values: &[f64; 6]) -> String {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let (x, y) = radar_point(i, v);
            format!("{},{}", coord(x), coord(y))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// SVG radar chart with one closed polygon per model.
pub fn emit_ability_map(annotations: &[AbilityAnnotation]) -> Result<String, AbilityError> {
    if annotations.is_empty() {
        return Err(AbilityError::NoModels);
    }
    for a in annotations {
        a.check()?;
    }
    let height = 420 + 20 * annotations.len();
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="400" height="{height}" viewBox="0 0 400 {height}" font-family="sans-serif" font-size="11">"#
    );
    svg.push_str("  <g class=\"grid\" fill=\"none\" stroke=\"#cccccc\">\n");
    for ring in [2.0, 4.0, 6.0, 8.0, 10.0] {
        let _ = writeln!(svg, "    <polygon points=\"{}\"/>", polygon_points(&[ring; 6]));
    }
    for i in 0..AXES.len() {
        let (x, y) = radar_point(i, MAX_ABILITY);
        let _ = writeln!(
            svg,
            "    <line x1=\"{c}\" y1=\"{c}\" x2=\"{}\" y2=\"{}\"/>",
            coord(x),
            coord(y),
            c = coord(CENTER)
        );
    }
    svg.push_str("  </g>\n  <g class=\"labels\" text-anchor=\"middle\">\n");
    for (i, axis) in AXES.iter().enumerate() {
        let (x, y) = radar_point(i, MAX_ABILITY * 1.12);
        let _ = writeln!(svg, "    <text x=\"{}\" y=\"{}\">{axis}</text>", coord(x), coord(y + 4.0));
    }
    svg.push_str("  </g>\n");
    for (n, a) in annotations.iter().enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        let _ = writeln!(
            svg,
            "  <polygon class=\"model\" data-model=\"{}\" points=\"{}\" fill=\"{color}\" fill-opacity=\"0.2\" stroke=\"{color}\" stroke-width=\"2\"/>",
            escape(&a.model),
            polygon_points(&a.scores())
        );
    }
    svg.push_str("  <g class=\"legend\">\n");
    for (n, a) in annotations.iter().enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        let y = 410 + 20 * n;
        let _ = writeln!(svg, "    <rect x=\"20\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{color}\"/>", y);
        let _ = writeln!(svg, "    <text x=\"38\" y=\"{}\">{}</text>", y + 10, escape(&a.model));
    }
    svg.push_str("  </g>\n</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(model: &str, v: f64) -> AbilityAnnotation {
        AbilityAnnotation {
            model: model.into(),
            coverage: v,
            formatting: v,
            reasoning: v,
            comprehension: v,
            pragmatics: v,
            hallucination_control: v,
        }
    }

    fn model_points(svg: &str) -> String {
        let line = svg.lines().find(|l| l.contains("class=\"model\"")).unwrap();
        let start = line.find("points=\"").unwrap() + 8;
        line[start..start + line[start..].find('"').unwrap()].to_string()
    }

    #[test]
    fn all_ten_touches_axis_ends() {
        let svg = emit_ability_map(&[uniform("m", 10.0)]).unwrap();
        assert_eq!(
            model_points(&svg),
            "200.000,50.000 329.904,125.000 329.904,275.000 200.000,350.000 70.096,275.000 70.096,125.000"
        );
    }

    #[test]
    fn all_zero_collapses_to_center() {
        let svg = emit_ability_map(&[uniform("m", 0.0)]).unwrap();
        assert_eq!(model_points(&svg), ["200.000,200.000"; 6].join(" "));
    }

    #[test]
    fn out_of_range() {
        let mut a = uniform("m", 5.0);
        a.reasoning = 10.5;
        assert_eq!(
            emit_ability_map(&[a]),
            Err(AbilityError::OutOfRange { model: "m".into(), axis: "reasoning", value: 10.5 })
        );
        assert_eq!(emit_ability_map(&[]), Err(AbilityError::NoModels));
    }

    #[test]
    fn deterministic_and_escaped() {
        let a = [uniform("a<b>", 3.0), uniform("c", 7.0)];
        let svg = emit_ability_map(&a).unwrap();
        assert_eq!(svg, emit_ability_map(&a).unwrap());
        assert!(svg.contains("a&lt;b&gt;"));
        assert_eq!(svg.matches("class=\"model\"").count(), 2);
    }
}
