//! RACE ingestion, cloze detection and the non-cloze subset.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use walkdir::WalkDir;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: not a RACE record: {message}")]
    Json { path: PathBuf, message: String },
    #[error("{path}, question {index}: {message}")]
    Malformed {
        path: PathBuf,
        index: usize,
        message: String,
    },
    #[error("{path}: cannot infer split from path; pass an explicit split")]
    UnknownSplit { path: PathBuf },
    #[error("duplicate example id {0}")]
    DuplicateId(String),
    #[error("unknown split {0:?} (expected train, dev or test)")]
    BadSplitName(String),
    #[error("{path}: no such file or directory")]
    Missing { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "train" => Ok(Split::Train),
            "dev" => Ok(Split::Dev),
            "test" => Ok(Split::Test),
            _ => Err(CorpusError::BadSplitName(s.to_owned())),
        }
    }
}

/// One multiple-choice question with its passage, in QA form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RCExample {
    pub example_id: String,
    pub split: Split,
    pub passage: String,
    pub question: String,
    pub options: [String; 4],
    pub gold_index: u8,
}

impl RCExample {
    pub fn gold_option(&self) -> &str {
        &self.options[self.gold_index as usize]
    }

    fn check(&self) -> Result<(), String> {
        if self.gold_index > 3 {
            return Err(format!("gold_index {} outside 0..=3", self.gold_index));
        }
        if self.passage.trim().is_empty() {
            return Err("empty passage".into());
        }
        if self.question.trim().is_empty() {
            return Err("empty question".into());
        }
        Ok(())
    }
}

/// How the non-cloze subset is selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubsetMode {
    /// Keep every question without a blank marker.
    #[default]
    NoBlank,
    /// Additionally require the question to end in `?`.
    StrictQuestionMark,
}

impl SubsetMode {
    pub fn keeps(self, question: &str) -> bool {
        match self {
            SubsetMode::NoBlank => !is_cloze(question),
            SubsetMode::StrictQuestionMark => !is_cloze(question) && question.trim_end().ends_with('?'),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Overrides split inference from directory names.
    pub split: Option<Split>,
}

#[derive(Deserialize)]
struct RaceFile {
    article: Option<String>,
    questions: Option<Vec<String>>,
    options: Option<Vec<Vec<String>>>,
    answers: Option<Vec<String>>,
    id: Option<String>,
}

/// Collapse internal whitespace runs to one space and trim the ends.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// A question is cloze-style iff it contains a blank, i.e. a run of one or
/// more underscores.
pub fn is_cloze(question: &str) -> bool {
    question.contains('_')
}

/// Load a RACE file or a directory tree of RACE files (`*.txt` / `*.json`).
///
/// Output is ordered by file path, then question index, so repeated loads of
/// the same tree give identical lists.
pub fn load_race(root: &Path, opts: &LoadOptions) -> Result<Vec<RCExample>, CorpusError> {
    if !root.exists() {
        return Err(CorpusError::Missing {
            path: root.to_path_buf(),
        });
    }
    let mut files = Vec::new();
    if root.is_file() {
        files.push(root.to_path_buf());
    } else {
        for entry in WalkDir::new(root).sort_by_file_name() {
            let entry = entry.map_err(|e| CorpusError::Io {
                path: e.path().unwrap_or(root).to_path_buf(),
                source: e
                    .into_io_error()
                    .unwrap_or_else(|| std::io::Error::other("walk failed")),
            })?;
            let path = entry.path();
            let hidden = entry.file_name().to_string_lossy().starts_with('.');
            let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
            if entry.file_type().is_file() && !hidden && matches!(ext, "txt" | "json") {
                files.push(path.to_path_buf());
            }
        }
        files.sort();
    }

    let per_file: Vec<Vec<RCExample>> = files
        .par_iter()
        .map(|path| load_race_file(path, opts))
        .collect::<Result<_, _>>()?;

    let examples: Vec<RCExample> = per_file.into_iter().flatten().collect();
    let mut seen = HashSet::new();
    for ex in &examples {
        if !seen.insert(ex.example_id.as_str()) {
            return Err(CorpusError::DuplicateId(ex.example_id.clone()));
        }
    }
    Ok(examples)
}

fn infer_split(path: &Path) -> Option<Split> {
    path.components()
        .filter_map(|c| c.as_os_str().to_str())
        .filter_map(|c| c.parse::<Split>().ok())
        .next_back()
}

fn load_race_file(path: &Path, opts: &LoadOptions) -> Result<Vec<RCExample>, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let record: RaceFile = serde_json::from_str(&text).map_err(|e| CorpusError::Json {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let split = opts
        .split
        .or_else(|| infer_split(path))
        .ok_or_else(|| CorpusError::UnknownSplit {
            path: path.to_path_buf(),
        })?;

    let malformed = |index: usize, message: String| CorpusError::Malformed {
        path: path.to_path_buf(),
        index,
        message,
    };
    let missing = |field: &str| CorpusError::Json {
        path: path.to_path_buf(),
        message: format!("missing field `{field}`"),
    };

    let article = normalize_whitespace(&record.article.ok_or_else(|| missing("article"))?);
    let questions = record.questions.ok_or_else(|| missing("questions"))?;
    let options = record.options.ok_or_else(|| missing("options"))?;
    let answers = record.answers.ok_or_else(|| missing("answers"))?;
    let file_id = record.id.unwrap_or_else(|| default_file_id(path));

    if article.is_empty() {
        return Err(CorpusError::Json {
            path: path.to_path_buf(),
            message: "empty article".into(),
        });
    }

    let mut out = Vec::with_capacity(questions.len());
    for (index, question) in questions.iter().enumerate() {
        let opts = options
            .get(index)
            .ok_or_else(|| malformed(index, "no options".into()))?;
        let opts: [String; 4] = opts
            .iter()
            .map(|o| normalize_whitespace(o))
            .collect::<Vec<_>>()
            .try_into()
            .map_err(|v: Vec<String>| malformed(index, format!("expected 4 options, found {}", v.len())))?;
        let answer = answers.get(index).ok_or_else(|| malformed(index, "no answer".into()))?;
        let gold_index = match answer.trim() {
            "A" => 0,
            "B" => 1,
            "C" => 2,
            "D" => 3,
            other => return Err(malformed(index, format!("answer {other:?} outside A-D"))),
        };
        let question = normalize_whitespace(question);
        if question.is_empty() {
            return Err(malformed(index, "empty question".into()));
        }
        out.push(RCExample {
            example_id: format!("{file_id}#{index}"),
            split,
            passage: article.clone(),
            question,
            options: opts,
            gold_index,
        });
    }
    if answers.len() != questions.len() || options.len() != questions.len() {
        return Err(malformed(
            questions.len(),
            format!(
                "{} questions, {} option lists, {} answers",
                questions.len(),
                options.len(),
                answers.len()
            ),
        ));
    }
    Ok(out)
}

/// RACE ids look like `high123.txt`: the level directory plus the file name.
fn default_file_id(path: &Path) -> String {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let parent = path
        .parent()
        .and_then(|p| p.file_name())
        .map(|n| n.to_string_lossy().into_owned())
        .filter(|p| p.parse::<Split>().is_err())
        .unwrap_or_default();
    format!("{parent}{name}")
}

/// The non-cloze subset, in input order.
pub fn filter_subset(examples: &[RCExample]) -> Vec<RCExample> {
    filter_subset_with(examples, SubsetMode::NoBlank)
}

pub fn filter_subset_with(examples: &[RCExample], mode: SubsetMode) -> Vec<RCExample> {
    examples.iter().filter(|e| mode.keeps(&e.question)).cloned().collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SplitCounts {
    pub total: usize,
    pub subset: usize,
    pub strict_subset: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DatasetStats {
    pub total: usize,
    pub cloze_count: usize,
    /// Non-cloze questions; `cloze_count + subset_count == total`.
    pub subset_count: usize,
    /// Non-cloze questions that also end in `?`.
    pub strict_subset_count: usize,
    pub per_split_counts: BTreeMap<Split, SplitCounts>,
    /// `None` for an empty dataset.
    pub cloze_fraction: Option<f64>,
}

pub fn compute_stats(examples: &[RCExample]) -> DatasetStats {
    let mut stats = DatasetStats::default();
    for ex in examples {
        let entry = stats.per_split_counts.entry(ex.split).or_default();
        entry.total += 1;
        stats.total += 1;
        if is_cloze(&ex.question) {
            stats.cloze_count += 1;
        } else {
            entry.subset += 1;
            stats.subset_count += 1;
        }
        if SubsetMode::StrictQuestionMark.keeps(&ex.question) {
            entry.strict_subset += 1;
            stats.strict_subset_count += 1;
        }
    }
    if stats.total > 0 {
        stats.cloze_fraction = Some(stats.cloze_count as f64 / stats.total as f64);
    }
    stats
}

/// Read the canonical dataset JSONL, re-checking the record invariants.
pub fn read_dataset(path: &Path) -> crate::Result<Vec<RCExample>> {
    let examples: Vec<RCExample> = crate::io::read_jsonl(path)?;
    let mut seen = HashSet::new();
    for (i, ex) in examples.iter().enumerate() {
        ex.check().map_err(|message| crate::Error::Record {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        })?;
        if !seen.insert(ex.example_id.as_str()) {
            return Err(CorpusError::DuplicateId(ex.example_id.clone()).into());
        }
    }
    Ok(examples)
}

pub fn dataset_to_jsonl(examples: &[RCExample]) -> String {
    crate::io::to_jsonl(examples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn ex(id: &str, question: &str) -> RCExample {
        RCExample {
            example_id: id.into(),
            split: Split::Dev,
            passage: "Some passage.".into(),
            question: question.into(),
            options: ["a".into(), "b".into(), "c".into(), "d".into()],
            gold_index: 0,
        }
    }

    fn write_race(dir: &Path, rel: &str, body: &str) -> PathBuf {
        let path = dir.join(rel);
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, body).unwrap();
        path
    }

    #[test]
    fn cloze_detection() {
        assert!(is_cloze("The sky is _."));
        assert!(is_cloze("He said ___ and left."));
        assert!(!is_cloze("What's the best title of the passage?"));
    }

    #[test]
    fn answer_letters_map_positionally() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_race(
            dir.path(),
            "dev/high/1.txt",
            r#"{"article": "A  short\n passage.", "id": "high1.txt",
                "questions": ["Who?", "What is _?", "Why?"],
                "options": [["a","b","c","d"],["a","b","c","d"],["a","b","c","d"]],
                "answers": ["A","C","D"]}"#,
        );
        let got = load_race(&path, &LoadOptions::default()).unwrap();
        assert_eq!(got.iter().map(|e| e.gold_index).collect::<Vec<_>>(), [0, 2, 3]);
        assert_eq!(got[2].example_id, "high1.txt#2");
        assert_eq!(got[0].passage, "A short passage.");
        assert!(got.iter().all(|e| e.split == Split::Dev));
    }

    #[test]
    fn empty_directory_loads_nothing() {
        let dir = tempfile::tempdir().unwrap();
        assert!(load_race(dir.path(), &LoadOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn three_options_is_rejected_with_location() {
        let dir = tempfile::tempdir().unwrap();
        write_race(
            dir.path(),
            "train/middle/7.txt",
            r#"{"article": "P.", "questions": ["Q1?", "Q2?"],
                "options": [["a","b","c","d"],["a","b","c"]], "answers": ["A","B"]}"#,
        );
        let err = load_race(dir.path(), &LoadOptions::default()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("7.txt") && msg.contains("question 1"), "{msg}");
        assert!(msg.contains("expected 4 options"), "{msg}");
    }

    #[test]
    fn bad_answer_letter_and_missing_field() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_race(
            dir.path(),
            "test/x.txt",
            r#"{"article": "P.", "questions": ["Q?"], "options": [["a","b","c","d"]], "answers": ["E"]}"#,
        );
        assert!(load_race(&path, &LoadOptions::default())
            .unwrap_err()
            .to_string()
            .contains("outside A-D"));
        fs::write(&path, r#"{"article": "P.", "questions": ["Q?"], "answers": ["A"]}"#).unwrap();
        assert!(load_race(&path, &LoadOptions::default())
            .unwrap_err()
            .to_string()
            .contains("`options`"));
    }

    #[test]
    fn split_override_and_missing_split() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_race(
            dir.path(),
            "loose/x.txt",
            r#"{"article": "P.", "questions": ["Q?"], "options": [["a","b","c","d"]], "answers": ["B"]}"#,
        );
        assert!(matches!(
            load_race(&path, &LoadOptions::default()),
            Err(CorpusError::UnknownSplit { .. })
        ));
        let got = load_race(
            &path,
            &LoadOptions {
                split: Some(Split::Test),
            },
        )
        .unwrap();
        assert_eq!(got[0].split, Split::Test);
        assert_eq!(got[0].example_id, "loosex.txt#0");
    }

    #[test]
    fn filter_keeps_order_and_is_idempotent() {
        let xs = vec![ex("1", "A _ b."), ex("2", "Why?"), ex("3", "__ c")];
        let kept = filter_subset(&xs);
        assert_eq!(kept, vec![ex("2", "Why?")]);
        assert_eq!(filter_subset(&kept), kept);
        let all = vec![ex("1", "Who?"), ex("2", "What?")];
        assert_eq!(filter_subset(&all), all);
    }

    #[test]
    fn strict_mode_requires_question_mark() {
        let xs = vec![ex("1", "Who went?"), ex("2", "The writer means"), ex("3", "x _")];
        assert_eq!(filter_subset(&xs).len(), 2);
        assert_eq!(filter_subset_with(&xs, SubsetMode::StrictQuestionMark).len(), 1);
    }

    #[test]
    fn stats_arithmetic() {
        let xs: Vec<_> = (0..10)
            .map(|i| ex(&i.to_string(), if i < 4 { "A _." } else { "Why?" }))
            .collect();
        let s = compute_stats(&xs);
        assert_eq!((s.total, s.cloze_count, s.subset_count), (10, 4, 6));
        assert_eq!(s.cloze_fraction, Some(0.4));
        assert_eq!(s.per_split_counts[&Split::Dev].subset, 6);

        let empty = compute_stats(&[]);
        assert_eq!((empty.total, empty.cloze_count, empty.subset_count), (0, 0, 0));
        assert_eq!(empty.cloze_fraction, None);
    }
}
