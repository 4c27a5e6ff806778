//! Rendering of evaluation and delta reports.
//!
//! Human-facing cells (CSV, markdown) are percentages with two decimals;
//! JSON carries fractions rounded to four decimals. Formatting is fixed
//! `{:.N}` so output bytes do not depend on locale.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::json;

use super::{DeltaReport, Distribution, EvalReport};
use crate::categorize::ReasoningCategory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
    Markdown,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
            ReportFormat::Markdown => "md",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            _ => Err(format!("unknown format {s:?} (csv, json, markdown)")),
        }
    }
}

fn pct(x: Option<f64>) -> String {
    x.map(|v| format!("{:.2}", v * 100.0)).unwrap_or_default()
}

fn round4(x: f64) -> f64 {
    (x * 10_000.0).round() / 10_000.0
}

fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub fn emit_eval_report(report: &EvalReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => {
            let mut out = String::from("Type,Fraction,QA,NLI\n");
            for row in &report.rows {
                let _ = writeln!(
                    out,
                    "{},{:.2},{},{}",
                    row.category.label(),
                    row.fraction,
                    pct(row.accuracy_qa),
                    pct(row.accuracy_nli)
                );
            }
            out
        }
        ReportFormat::Json => {
            let rows: Vec<_> = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "type": r.category.label(),
                        "count": r.count,
                        "fraction": round4(r.fraction),
                        "qa": r.accuracy_qa.map(round4),
                        "nli": r.accuracy_nli.map(round4),
                    })
                })
                .collect();
            to_json_string(&json!({
                "dataset_size": report.dataset_size,
                "overall": { "qa": round4(report.overall_qa), "nli": round4(report.overall_nli) },
                "rows": rows,
            }))
        }
        ReportFormat::Markdown => {
            let mut out = String::from("| Dataset | QA | NLI |\n|---|---|---|\n");
            let _ = writeln!(
                out,
                "| Overall (n={}) | {} | {} |\n",
                report.dataset_size,
                pct(Some(report.overall_qa)),
                pct(Some(report.overall_nli))
            );
            out.push_str("| Type | Fraction | QA | NLI |\n|---|---|---|---|\n");
            let or_dash = |s: String| if s.is_empty() { "-".to_owned() } else { s };
            for row in &report.rows {
                let _ = writeln!(
                    out,
                    "| {} | {:.2} | {} | {} |",
                    row.category.label(),
                    row.fraction,
                    or_dash(pct(row.accuracy_qa)),
                    or_dash(pct(row.accuracy_nli))
                );
            }
            out
        }
    }
}

fn distribution_json(d: &Distribution) -> serde_json::Value {
    let counts: serde_json::Map<String, serde_json::Value> = ReasoningCategory::ALL
        .iter()
        .map(|c| (c.label().to_owned(), json!(d.counts[c])))
        .collect();
    json!({
        "counted": d.counted,
        "excluded_improper": d.excluded_improper,
        "unannotated": d.unannotated,
        "counts": counts,
    })
}

/// The delta itself. CSV lists one row per delta example; the
/// distribution (when attached) has its own renderer,
/// [`emit_distribution_table`].
pub fn emit_delta_report(report: &DeltaReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => {
            let mut out = String::from("example_id,subset,qa_prediction,nli_prediction,gold\n");
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            for e in &report.entries {
                let side = match e.side {
                    super::DeltaSide::Gain => "gain",
                    super::DeltaSide::Loss => "loss",
                };
                w.write_record([
                    e.example_id.as_str(),
                    side,
                    &e.qa_prediction.to_string(),
                    &e.nli_prediction.to_string(),
                    &e.gold.to_string(),
                ])
                .expect("in-memory csv write");
            }
            out.push_str(&String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("utf-8"));
            out
        }
        ReportFormat::Json => {
            let mut value = json!({
                "delta": report.delta_ids.len(),
                "gain": report.gain_ids.len(),
                "loss": report.loss_ids.len(),
                "both_wrong_differ": report.both_wrong_ids.len(),
                "delta_ids": report.delta_ids,
                "gain_ids": report.gain_ids,
                "loss_ids": report.loss_ids,
                "both_wrong_ids": report.both_wrong_ids,
            });
            if let Some(d) = &report.distributions {
                value["distribution"] = json!({
                    "include_improper": d.include_improper,
                    "gain": distribution_json(&d.gain),
                    "loss": distribution_json(&d.loss),
                });
            }
            to_json_string(&value)
        }
        ReportFormat::Markdown => {
            let mut out = String::from("| Subset | Count |\n|---|---|\n");
            let _ = writeln!(out, "| Delta | {} |", report.delta_ids.len());
            let _ = writeln!(out, "| Gain | {} |", report.gain_ids.len());
            let _ = writeln!(out, "| Loss | {} |", report.loss_ids.len());
            let _ = writeln!(out, "| Loss, both wrong | {} |", report.both_wrong_ids.len());
            if report.distributions.is_some() {
                out.push('\n');
                out.push_str(&emit_distribution_table(report, ReportFormat::Markdown).unwrap_or_default());
            }
            out
        }
    }
}

/// Gain/loss counts per reasoning category; `None` without annotations.
pub fn emit_distribution_table(report: &DeltaReport, format: ReportFormat) -> Option<String> {
    let d = report.distributions.as_ref()?;
    let rows = ReasoningCategory::ALL
        .iter()
        .map(|c| (c.label(), d.gain.counts[c], d.loss.counts[c]));
    Some(match format {
        ReportFormat::Csv => {
            let mut out = String::from("Category,Gain,Loss\n");
            for (label, g, l) in rows {
                let _ = writeln!(out, "{label},{g},{l}");
            }
            let _ = writeln!(out, "Total,{},{}", d.gain.counted, d.loss.counted);
            out
        }
        ReportFormat::Json => to_json_string(&json!({
            "include_improper": d.include_improper,
            "gain": distribution_json(&d.gain),
            "loss": distribution_json(&d.loss),
        })),
        ReportFormat::Markdown => {
            let mut out = String::from("| Category | Gain | Loss |\n|---|---|---|\n");
            for (label, g, l) in rows {
                let _ = writeln!(out, "| {label} | {g} | {l} |");
            }
            let _ = writeln!(out, "| Total | {} | {} |", d.gain.counted, d.loss.counted);
            let unannotated = d.gain.unannotated.len() + d.loss.unannotated.len();
            if unannotated > 0 {
                let _ = writeln!(
                    out,
                    "\n{unannotated} delta example(s) have no annotation and are not counted."
                );
            }
            out
        }
    })
}

/// Whitespace-separated columns for gnuplot's `histogram` style.
pub fn write_distribution_plot_data(report: &DeltaReport) -> Option<String> {
    let d = report.distributions.as_ref()?;
    let mut out = String::from("# category gain loss\n");
    for c in ReasoningCategory::ALL {
        let _ = writeln!(out, "\"{}\" {} {}", c.label(), d.gain.counts[&c], d.loss.counts[&c]);
    }
    Some(out)
}
