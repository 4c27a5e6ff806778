//! The `rcnli` command line: filter → convert → categorize → evaluate / delta.
//!
//! Exit codes: 0 on success, 1 on I/O failure, 2 on invalid input or
//! configuration.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{self, GoldSet, ReportFormat};
use crate::categorize::{self, FlagRecord, HeuristicFlags};
use crate::converter::{ConversionAudit, Converter};
use crate::corpus::{self, LoadOptions, RCExample, Split, SubsetMode};
use crate::io::{to_jsonl, write_atomic};
use crate::parsetree::{self, ParseBundle};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "rcnli",
    version,
    about = "Reading comprehension to NLI conversion and QA/NLI model comparison"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load RACE files and write the non-cloze subset as dataset JSONL.
    Filter(FilterArgs),
    /// Print cloze/subset counts for RACE files.
    Stats(StatsArgs),
    /// Build NLI and QA forms from dataset JSONL.
    Convert(ConvertArgs),
    /// Tag each question with the keyword question types.
    Categorize(CategorizeArgs),
    /// Overall and per-category accuracy for two prediction files.
    Evaluate(CompareArgs),
    /// Delta / gain / loss subsets for two prediction files.
    Delta(DeltaArgs),
    /// Validate a CoNLL-U file.
    ParseCheck(ParseCheckArgs),
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Also require subset questions to end in `?`.
    #[arg(long)]
    pub strict_question_mark: bool,
    /// Split for every loaded file instead of inferring it from the path.
    #[arg(long)]
    pub split: Option<Split>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub split: Option<Split>,
    /// Write the stats JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    /// Dataset JSONL as written by `filter`.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output directory for nli.jsonl, qa.jsonl and audit.csv.
    #[arg(long)]
    pub out: PathBuf,
    /// CoNLL-U parses keyed `<example_id>/q` and `<example_id>/o<k>`.
    #[arg(long)]
    pub parses: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CategorizeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Dataset JSONL holding the gold answers.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub preds_qa: PathBuf,
    #[arg(long)]
    pub preds_nli: PathBuf,
    #[arg(long, default_value = "csv")]
    pub format: ReportFormat,
    /// Only use gold examples from this split.
    #[arg(long)]
    pub split: Option<Split>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DeltaArgs {
    #[command(flatten)]
    pub compare: CompareArgs,
    /// Reasoning-category annotation CSV.
    #[arg(long)]
    pub annotations: Option<PathBuf>,
    /// Count examples whose conversion was annotated as improper.
    #[arg(long)]
    pub include_improper: bool,
    /// Write gnuplot-ready distribution data here.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ParseCheckArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

/// Input paths a command reads, checked before any work is done.
#[derive(Debug, Default)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for p in &self.inputs {
            if !p.exists() {
                return Err(Error::Config(format!("input {} does not exist", p.display())));
            }
        }
        Ok(())
    }
}

fn require(paths: impl IntoIterator<Item = PathBuf>) -> Result<()> {
    RunConfig {
        inputs: paths.into_iter().collect(),
    }
    .validate()
}

/// Run a parsed command. Informational lines go to `log`.
pub fn run(cli: Cli, log: &mut dyn std::io::Write) -> Result<()> {
    match cli.command {
        Command::Filter(a) => cmd_filter(&a, log),
        Command::Stats(a) => cmd_stats(&a, log),
        Command::Convert(a) => cmd_convert(&a, log),
        Command::Categorize(a) => cmd_categorize(&a, log),
        Command::Evaluate(a) => cmd_evaluate(&a, log),
        Command::Delta(a) => cmd_delta(&a, log),
        Command::ParseCheck(a) => cmd_parse_check(&a, log),
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn main_with_args<I, T>(args: I, log: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli, log) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn say(log: &mut dyn std::io::Write, line: String) {
    let _ = writeln!(log, "{line}");
}

fn stats_json(stats: &corpus::DatasetStats) -> String {
    let mut s = serde_json::to_string_pretty(stats).expect("stats serialize");
    s.push('\n');
    s
}

pub fn cmd_filter(a: &FilterArgs, log: &mut dyn std::io::Write) -> Result<()> {
    require([a.input.clone()])?;
    let examples = corpus::load_race(&a.input, &LoadOptions { split: a.split })?;
    let mode = if a.strict_question_mark {
        SubsetMode::StrictQuestionMark
    } else {
        SubsetMode::NoBlank
    };
    let subset = corpus::filter_subset_with(&examples, mode);
    let stats = corpus::compute_stats(&examples);
    write_atomic(&a.out, corpus::dataset_to_jsonl(&subset).as_bytes())?;
    let stats_path = a.out.with_extension("stats.json");
    write_atomic(&stats_path, stats_json(&stats).as_bytes())?;
    say(
        log,
        format!(
            "loaded {} questions, kept {} ({}), wrote {} and {}",
            examples.len(),
            subset.len(),
            if a.strict_question_mark { "strict" } else { "no-blank" },
            a.out.display(),
            stats_path.display()
        ),
    );
    Ok(())
}

pub fn cmd_stats(a: &StatsArgs, log: &mut dyn std::io::Write) -> Result<()> {
    require([a.input.clone()])?;
    let examples = corpus::load_race(&a.input, &LoadOptions { split: a.split })?;
    let json = stats_json(&corpus::compute_stats(&examples));
    match &a.out {
        Some(path) => write_atomic(path, json.as_bytes())?,
        None => {
            let _ = log.write_all(json.as_bytes());
        }
    }
    Ok(())
}

fn load_bundle(path: &Path) -> Result<ParseBundle> {
    let text = crate::io::read_to_string(path)?;
    Ok(ParseBundle::from_conllu(&text)?)
}

pub fn cmd_convert(a: &ConvertArgs, log: &mut dyn std::io::Write) -> Result<()> {
    require(std::iter::once(a.input.clone()).chain(a.parses.clone()))?;
    let examples = corpus::read_dataset(&a.input)?;
    let bundle = a.parses.as_deref().map(load_bundle).transpose()?;
    let out = Converter::default().convert_dataset(&examples, bundle.as_ref());
    let audit = ConversionAudit::from_records(&out.nli);
    write_atomic(&a.out.join("nli.jsonl"), to_jsonl(&out.nli).as_bytes())?;
    write_atomic(&a.out.join("qa.jsonl"), to_jsonl(&out.qa).as_bytes())?;
    write_atomic(&a.out.join("audit.csv"), audit.to_csv().as_bytes())?;
    say(
        log,
        format!(
            "converted {} examples into {} NLI and {} QA records; fallback rate {}",
            examples.len(),
            out.nli.len(),
            out.qa.len(),
            audit
                .fallback_rate()
                .map(|r| format!("{r:.4}"))
                .unwrap_or_else(|| "n/a".into())
        ),
    );
    Ok(())
}

fn flags_for(examples: &[RCExample]) -> Vec<FlagRecord> {
    examples
        .iter()
        .map(|e| FlagRecord {
            example_id: e.example_id.clone(),
            flags: categorize::heuristic_categorize(&e.question, &e.passage),
        })
        .collect()
}

pub fn cmd_categorize(a: &CategorizeArgs, log: &mut dyn std::io::Write) -> Result<()> {
    require([a.input.clone()])?;
    let examples = corpus::read_dataset(&a.input)?;
    let records = flags_for(&examples);
    write_atomic(&a.out, to_jsonl(&records).as_bytes())?;
    say(
        log,
        format!("categorized {} questions into {}", records.len(), a.out.display()),
    );
    Ok(())
}

struct Loaded {
    examples: Vec<RCExample>,
    gold: GoldSet,
    qa: Vec<analysis::PredictionRecord>,
    nli: Vec<analysis::PredictionRecord>,
}

fn load_comparison(a: &CompareArgs) -> Result<Loaded> {
    require([a.input.clone(), a.preds_qa.clone(), a.preds_nli.clone()])?;
    let mut examples = corpus::read_dataset(&a.input)?;
    if let Some(split) = a.split {
        examples.retain(|e| e.split == split);
    }
    Ok(Loaded {
        gold: GoldSet::from_examples(&examples),
        qa: analysis::read_predictions(&a.preds_qa, "QA")?,
        nli: analysis::read_predictions(&a.preds_nli, "NLI")?,
        examples,
    })
}

pub fn cmd_evaluate(a: &CompareArgs, log: &mut dyn std::io::Write) -> Result<()> {
    let data = load_comparison(a)?;
    let flags: HashMap<String, HeuristicFlags> = flags_for(&data.examples)
        .into_iter()
        .map(|r| (r.example_id, r.flags))
        .collect();
    let report = analysis::per_category_report(&data.qa, &data.nli, &data.gold, &flags)?;
    write_atomic(&a.out, analysis::emit_eval_report(&report, a.format).as_bytes())?;
    say(
        log,
        format!(
            "n={} QA {:.2} NLI {:.2}; wrote {}",
            report.dataset_size,
            report.overall_qa * 100.0,
            report.overall_nli * 100.0,
            a.out.display()
        ),
    );
    Ok(())
}

pub fn cmd_delta(a: &DeltaArgs, log: &mut dyn std::io::Write) -> Result<()> {
    require(a.annotations.clone())?;
    let data = load_comparison(&a.compare)?;
    let mut report = analysis::delta(&data.qa, &data.nli, &data.gold)?;
    if let Some(path) = &a.annotations {
        let annotations = categorize::load_annotations(path)?;
        report.attach_distributions(&annotations, a.include_improper);
    }
    let dir = &a.compare.out;
    let format = a.compare.format;
    write_atomic(
        &dir.join(format!("delta.{}", format.extension())),
        analysis::emit_delta_report(&report, format).as_bytes(),
    )?;
    if let Some(table) = analysis::emit_distribution_table(&report, format) {
        write_atomic(
            &dir.join(format!("distribution.{}", format.extension())),
            table.as_bytes(),
        )?;
    }
    if let Some(plot) = &a.plot {
        match analysis::write_distribution_plot_data(&report) {
            Some(data) => write_atomic(plot, data.as_bytes())?,
            None => return Err(Error::Config("--plot needs --annotations".into())),
        }
    }
    let mut line = format!(
        "delta {} gain {} loss {} (both wrong {})",
        report.delta_ids.len(),
        report.gain_ids.len(),
        report.loss_ids.len(),
        report.both_wrong_ids.len()
    );
    if let Some(d) = &report.distributions {
        line.push_str(&format!("; annotated gain {} loss {}", d.gain.counted, d.loss.counted));
        let missing = d.gain.unannotated.len() + d.loss.unannotated.len();
        if missing > 0 {
            line.push_str(&format!("; {missing} unannotated"));
        }
    }
    say(log, line);
    Ok(())
}

pub fn cmd_parse_check(a: &ParseCheckArgs, log: &mut dyn std::io::Write) -> Result<()> {
    require([a.input.clone()])?;
    let text = crate::io::read_to_string(&a.input)?;
    let report = parsetree::validate_conllu(&text);
    let off_scheme = report
        .sentences
        .iter()
        .filter(|s| parsetree::split_sentence_id(&s.sentence_id).is_none())
        .count();
    for e in &report.errors {
        say(log, format!("error: {e}"));
    }
    say(
        log,
        format!(
            "{} sentences, {} errors, {} ids outside the <example_id>/q|o<k> scheme",
            report.sentences.len(),
            report.errors.len(),
            off_scheme
        ),
    );
    match report.errors.into_iter().next() {
        Some(first) => Err(first.into()),
        None => Ok(()),
    }
}
