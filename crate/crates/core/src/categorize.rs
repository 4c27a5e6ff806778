//! Keyword question types (non-exclusive) and the manual seven-way
//! reasoning annotation (exclusive).

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnnotationError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}, row {row}: {message}")]
    Row { path: PathBuf, row: usize, message: String },
    #[error("{path}: header must be example_id,category,properly_converted")]
    Header { path: PathBuf },
    #[error("{path}, row {row}: duplicate example_id {id}")]
    Duplicate { path: PathBuf, row: usize, id: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicFlags {
    pub main_idea: bool,
    pub negation: bool,
    pub dialogue: bool,
    pub math: bool,
    pub deductive: bool,
}

/// The five keyword categories, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HeuristicCategory {
    MainIdea,
    Negation,
    Dialogue,
    Math,
    Deductive,
}

impl HeuristicCategory {
    pub const ALL: [HeuristicCategory; 5] = [
        HeuristicCategory::MainIdea,
        HeuristicCategory::Negation,
        HeuristicCategory::Dialogue,
        HeuristicCategory::Math,
        HeuristicCategory::Deductive,
    ];

    pub fn label(self) -> &'static str {
        match self {
            HeuristicCategory::MainIdea => "Main Idea",
            HeuristicCategory::Negation => "Negation",
            HeuristicCategory::Dialogue => "Dialogue",
            HeuristicCategory::Math => "Math",
            HeuristicCategory::Deductive => "Deductive",
        }
    }
}

impl HeuristicFlags {
    pub fn get(&self, category: HeuristicCategory) -> bool {
        match category {
            HeuristicCategory::MainIdea => self.main_idea,
            HeuristicCategory::Negation => self.negation,
            HeuristicCategory::Dialogue => self.dialogue,
            HeuristicCategory::Math => self.math,
            HeuristicCategory::Deductive => self.deductive,
        }
    }
}

/// Case-insensitive word tokens of `text`.
fn words(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn has_phrase(tokens: &[String], phrase: &[&str]) -> bool {
    tokens
        .windows(phrase.len())
        .any(|w| w.iter().zip(phrase).all(|(a, b)| a == b))
}

fn has_any(tokens: &[String], keywords: &[&str]) -> bool {
    tokens.iter().any(|t| keywords.contains(&t.as_str()))
}

/// Double quotes in `passage`, counting curly `“”` as straight.
pub fn quote_count(passage: &str) -> usize {
    passage
        .chars()
        .filter(|c| matches!(c, '"' | '\u{201C}' | '\u{201D}'))
        .count()
}

pub fn heuristic_categorize(question: &str, passage: &str) -> HeuristicFlags {
    let q = words(question);
    HeuristicFlags {
        main_idea: has_any(&q, &["mainly", "title", "purpose", "topic"]),
        negation: has_any(&q, &["not", "except"])
            || has_phrase(&q, &["which", "of", "the", "following", "is", "wrong"]),
        dialogue: quote_count(passage) > 10,
        math: has_phrase(&q, &["how", "many"]) || has_phrase(&q, &["how", "old"]) || has_phrase(&q, &["how", "much"]),
        deductive: has_any(&q, &["true"]),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagRecord {
    pub example_id: String,
    #[serde(flatten)]
    pub flags: HeuristicFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ReasoningCategory {
    LinguisticMatching,
    MainIdea,
    Negation,
    Dialogue,
    Math,
    Deductive,
    Inductive,
}

impl ReasoningCategory {
    pub const ALL: [ReasoningCategory; 7] = [
        ReasoningCategory::LinguisticMatching,
        ReasoningCategory::MainIdea,
        ReasoningCategory::Negation,
        ReasoningCategory::Dialogue,
        ReasoningCategory::Math,
        ReasoningCategory::Deductive,
        ReasoningCategory::Inductive,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ReasoningCategory::LinguisticMatching => "Linguistic Matching",
            ReasoningCategory::MainIdea => "Main Idea",
            ReasoningCategory::Negation => "Negation",
            ReasoningCategory::Dialogue => "Dialogue",
            ReasoningCategory::Math => "Math",
            ReasoningCategory::Deductive => "Deductive",
            ReasoningCategory::Inductive => "Inductive",
        }
    }
}

impl fmt::Display for ReasoningCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ReasoningCategory {
    type Err = String;

    /// Accepts the display label or snake/camel variants, case-insensitive.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_alphanumeric())
            .collect::<String>()
            .to_lowercase();
        ReasoningCategory::ALL
            .into_iter()
            .find(|c| c.label().replace(' ', "").to_lowercase() == key)
            .ok_or_else(|| format!("unknown category {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationRecord {
    pub example_id: String,
    pub category: ReasoningCategory,
    pub properly_converted: bool,
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_lowercase().as_str() {
        "true" | "1" | "yes" | "y" => Some(true),
        "false" | "0" | "no" | "n" => Some(false),
        _ => None,
    }
}

/// Read `example_id,category,properly_converted`. Rows are numbered from 1
/// for the header, so the first data row is row 2.
pub fn load_annotations(path: &Path) -> Result<Vec<AnnotationRecord>, AnnotationError> {
    let text = std::fs::read_to_string(path).map_err(|source| AnnotationError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_annotations(&text, path)
}

pub fn parse_annotations(text: &str, origin: &Path) -> Result<Vec<AnnotationRecord>, AnnotationError> {
    let path = origin.to_path_buf();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header_ok = reader
        .headers()
        .map(|h| h.iter().collect::<Vec<_>>() == ["example_id", "category", "properly_converted"])
        .unwrap_or(false);
    if !header_ok {
        return Err(AnnotationError::Header { path });
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 2;
        let bad = |message: String| AnnotationError::Row {
            path: path.clone(),
            row: row_no,
            message,
        };
        let row = row.map_err(|e| bad(e.to_string()))?;
        if row.len() != 3 {
            return Err(bad(format!("expected 3 fields, found {}", row.len())));
        }
        let id = row[0].to_owned();
        let category = row[1].parse::<ReasoningCategory>().map_err(bad)?;
        let properly_converted =
            parse_bool(&row[2]).ok_or_else(|| bad(format!("properly_converted {:?} is not a boolean", &row[2])))?;
        if !seen.insert(id.clone()) {
            return Err(AnnotationError::Duplicate { path, row: row_no, id });
        }
        out.push(AnnotationRecord {
            example_id: id,
            category,
            properly_converted,
        });
    }
    Ok(out)
}
