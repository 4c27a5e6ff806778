//! Question + answer option → declarative hypothesis, and the two parallel
//! dataset forms built from it (NLI hypotheses and QA concatenations).

mod rules;
pub mod text;
pub mod verbs;

use std::collections::BTreeMap;
use std::fmt;

use once_cell::sync::Lazy;
use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::corpus::{is_cloze, RCExample};
use crate::parsetree::{ParseBundle, SentenceParse};

pub use rules::{rule_cloze, rule_fallback, rule_which_true};
pub use text::{finalize, normalize_answer};
pub use verbs::{inflect, VerbForm, VerbLexicon};

static SURFACE_WH: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"(?i)\b(who|whom|whose|what|which|when|where|why|how)\b").unwrap());

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuestionKind {
    Cloze,
    WhichOfFollowing,
    WhichOfFollowingNegated,
    Wh,
    Why,
    Other,
}

pub fn classify_question(question: &str) -> QuestionKind {
    if is_cloze(question) {
        return QuestionKind::Cloze;
    }
    match rules::which_true_polarity(question) {
        Some(true) => return QuestionKind::WhichOfFollowingNegated,
        Some(false) => return QuestionKind::WhichOfFollowing,
        None => {}
    }
    match SURFACE_WH.find(question) {
        Some(m) if m.as_str().eq_ignore_ascii_case("why") => QuestionKind::Why,
        Some(_) => QuestionKind::Wh,
        None => QuestionKind::Other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleId {
    Cloze,
    WhichTrue,
    Wh,
    Fallback,
}

impl RuleId {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::Cloze => "cloze",
            RuleId::WhichTrue => "which_true",
            RuleId::Wh => "wh",
            RuleId::Fallback => "fallback",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConversionResult {
    pub hypothesis: String,
    pub rule_id: RuleId,
    pub trace: Vec<String>,
}

/// Options shared by every conversion.
#[derive(Debug, Clone, Copy)]
pub struct Converter<'a> {
    pub lexicon: &'a VerbLexicon,
}

impl Default for Converter<'static> {
    fn default() -> Self {
        Converter {
            lexicon: VerbLexicon::builtin(),
        }
    }
}

impl Converter<'_> {
    /// Exactly one rule fires per question. Never fails: when the
    /// structural rule cannot apply, the fallback output is flagged
    /// `low-confidence` in the trace.
    pub fn convert(
        &self,
        question: &str,
        answer: &str,
        q_parse: Option<&SentenceParse>,
        a_parse: Option<&SentenceParse>,
    ) -> ConversionResult {
        let kind = classify_question(question);
        let mut trace = vec![format!("kind:{kind:?}")];
        match kind {
            QuestionKind::Cloze => {
                let (hypothesis, notes) = rule_cloze(question, answer, a_parse);
                trace.extend(notes);
                ConversionResult {
                    hypothesis,
                    rule_id: RuleId::Cloze,
                    trace,
                }
            }
            QuestionKind::WhichOfFollowing | QuestionKind::WhichOfFollowingNegated => ConversionResult {
                hypothesis: rule_which_true(question, answer),
                rule_id: RuleId::WhichTrue,
                trace,
            },
            QuestionKind::Wh | QuestionKind::Why => {
                let Some(parse) = q_parse else {
                    trace.push("no-question-parse".to_owned());
                    return fallback(question, answer, a_parse, trace);
                };
                match rules::rule_wh(parse, answer, a_parse, self.lexicon) {
                    Ok((hypothesis, notes)) => {
                        trace.extend(notes);
                        ConversionResult {
                            hypothesis,
                            rule_id: RuleId::Wh,
                            trace,
                        }
                    }
                    Err(rules::NoWhEvidence) => {
                        trace.push("no-wh-in-parse".to_owned());
                        fallback(question, answer, a_parse, trace)
                    }
                }
            }
            QuestionKind::Other => fallback(question, answer, a_parse, trace),
        }
    }
}

fn fallback(question: &str, answer: &str, a_parse: Option<&SentenceParse>, mut trace: Vec<String>) -> ConversionResult {
    trace.push("low-confidence".to_owned());
    ConversionResult {
        hypothesis: rule_fallback(question, answer, a_parse),
        rule_id: RuleId::Fallback,
        trace,
    }
}

/// [`Converter::convert`] with the bundled verb table.
pub fn convert(
    question: &str,
    answer: &str,
    q_parse: Option<&SentenceParse>,
    a_parse: Option<&SentenceParse>,
) -> ConversionResult {
    Converter::default().convert(question, answer, q_parse, a_parse)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Entailment,
    NotEntailment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NLIExample {
    pub example_id: String,
    pub option_index: u8,
    pub premise: String,
    pub hypothesis: String,
    pub label: Label,
    pub rule_id: RuleId,
    #[serde(skip)]
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QAExample {
    pub example_id: String,
    pub option_index: u8,
    pub premise: String,
    pub qa_text: String,
    pub label: Label,
}

pub fn qa_concat(question: &str, option: &str) -> String {
    format!("{question} {option}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleConversion {
    pub nli: Vec<NLIExample>,
    pub qa: Vec<QAExample>,
}

impl Converter<'_> {
    /// Four NLI records and four QA records; the gold option is the only
    /// entailment. Missing parses only disable the parse-driven rule.
    pub fn convert_example(&self, ex: &RCExample, parses: Option<&ParseBundle>) -> ExampleConversion {
        let q_parse = parses.and_then(|b| b.question(&ex.example_id));
        let mut nli = Vec::with_capacity(4);
        let mut qa = Vec::with_capacity(4);
        for (k, option) in ex.options.iter().enumerate() {
            let a_parse = parses.and_then(|b| b.option(&ex.example_id, k));
            let label = if k == ex.gold_index as usize {
                Label::Entailment
            } else {
                Label::NotEntailment
            };
            let result = self.convert(&ex.question, option, q_parse, a_parse);
            nli.push(NLIExample {
                example_id: ex.example_id.clone(),
                option_index: k as u8,
                premise: ex.passage.clone(),
                hypothesis: result.hypothesis,
                label,
                rule_id: result.rule_id,
                trace: result.trace,
            });
            qa.push(QAExample {
                example_id: ex.example_id.clone(),
                option_index: k as u8,
                premise: ex.passage.clone(),
                qa_text: qa_concat(&ex.question, option),
                label,
            });
        }
        ExampleConversion { nli, qa }
    }

    /// Convert a dataset in parallel; output order follows input order.
    pub fn convert_dataset(&self, examples: &[RCExample], parses: Option<&ParseBundle>) -> ExampleConversion {
        let parts: Vec<ExampleConversion> = examples.par_iter().map(|ex| self.convert_example(ex, parses)).collect();
        let mut out = ExampleConversion {
            nli: Vec::with_capacity(examples.len() * 4),
            qa: Vec::with_capacity(examples.len() * 4),
        };
        for part in parts {
            out.nli.extend(part.nli);
            out.qa.extend(part.qa);
        }
        out
    }
}

pub fn convert_example(ex: &RCExample, parses: Option<&ParseBundle>) -> ExampleConversion {
    Converter::default().convert_example(ex, parses)
}

/// Rule usage over a set of NLI records.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConversionAudit {
    pub total: usize,
    pub per_rule: BTreeMap<RuleId, usize>,
}

impl ConversionAudit {
    pub fn from_records(records: &[NLIExample]) -> Self {
        let mut audit = ConversionAudit {
            total: records.len(),
            ..Default::default()
        };
        for r in records {
            *audit.per_rule.entry(r.rule_id).or_default() += 1;
        }
        audit
    }

    pub fn fallback_rate(&self) -> Option<f64> {
        (self.total > 0).then(|| self.count(RuleId::Fallback) as f64 / self.total as f64)
    }

    pub fn count(&self, rule: RuleId) -> usize {
        self.per_rule.get(&rule).copied().unwrap_or(0)
    }

    /// `rule_id,count,fraction`, one row per rule (all four always
    /// present), fractions with four decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rule_id,count,fraction\n");
        for rule in [RuleId::Cloze, RuleId::WhichTrue, RuleId::Wh, RuleId::Fallback] {
            let n = self.count(rule);
            let frac = if self.total > 0 {
                format!("{:.4}", n as f64 / self.total as f64)
            } else {
                String::new()
            };
            out.push_str(&format!("{rule},{n},{frac}\n"));
        }
        out
    }
}
