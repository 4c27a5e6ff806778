//! Comparing a QA-form model and an NLI-form model against gold answers.

mod report;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::categorize::{AnnotationRecord, HeuristicCategory, HeuristicFlags, ReasoningCategory};
use crate::corpus::RCExample;

pub use report::{
    emit_delta_report, emit_distribution_table, emit_eval_report, write_distribution_plot_data, ReportFormat,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverageError {
    #[error("{tag}: predictions missing for {} example(s): {}", missing.len(), preview(missing))]
    Missing { tag: String, missing: Vec<String> },
    #[error("{tag}: predictions for {} unknown example(s): {}", extra.len(), preview(extra))]
    Extra { tag: String, extra: Vec<String> },
    #[error("{tag}: more than one prediction for {}", preview(ids))]
    Duplicate { tag: String, ids: Vec<String> },
    #[error("{tag}: predicted_index {index} for {id} outside 0..=3")]
    BadIndex { tag: String, id: String, index: i64 },
    #[error("heuristic flags missing for {} example(s): {}", .0.len(), preview(.0))]
    MissingFlags(Vec<String>),
    #[error("gold set is empty")]
    EmptyGold,
}

fn preview(ids: &[String]) -> String {
    const SHOWN: usize = 10;
    let mut s = ids.iter().take(SHOWN).cloned().collect::<Vec<_>>().join(", ");
    if ids.len() > SHOWN {
        s.push_str(&format!(", ... ({} more)", ids.len() - SHOWN));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictionRecord {
    pub example_id: String,
    pub predicted_index: u8,
    pub model_tag: String,
}

#[derive(Deserialize)]
struct RawPrediction {
    example_id: String,
    predicted_index: i64,
}

/// Read predictions from JSONL (`{example_id, predicted_index}`) or CSV
/// with header `example_id,predicted_index`. The format is chosen by the
/// `.csv` extension; anything else is read as JSONL.
pub fn read_predictions(path: &Path, model_tag: &str) -> crate::Result<Vec<PredictionRecord>> {
    let text = crate::io::read_to_string(path)?;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let raw: Vec<RawPrediction> = if is_csv {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        reader
            .deserialize()
            .enumerate()
            .map(|(i, r)| {
                r.map_err(|e| crate::Error::Record {
                    path: path.to_path_buf(),
                    line: i + 2,
                    message: e.to_string(),
                })
            })
            .collect::<Result<_, _>>()?
    } else {
        crate::io::from_jsonl(&text, path)?
    };
    raw.into_iter()
        .map(|r| {
            let index = u8::try_from(r.predicted_index)
                .ok()
                .filter(|i| *i <= 3)
                .ok_or_else(|| CoverageError::BadIndex {
                    tag: model_tag.to_owned(),
                    id: r.example_id.clone(),
                    index: r.predicted_index,
                })?;
            Ok(PredictionRecord {
                example_id: r.example_id,
                predicted_index: index,
                model_tag: model_tag.to_owned(),
            })
        })
        .collect()
}

pub fn predictions_to_jsonl(preds: &[PredictionRecord]) -> String {
    #[derive(Serialize)]
    struct Out<'a> {
        example_id: &'a str,
        predicted_index: u8,
    }
    let rows: Vec<Out<'_>> = preds
        .iter()
        .map(|p| Out {
            example_id: &p.example_id,
            predicted_index: p.predicted_index,
        })
        .collect();
    crate::io::to_jsonl(&rows)
}

/// Gold answers keyed by example id, remembering dataset order.
#[derive(Debug, Clone, Default)]
pub struct GoldSet {
    order: Vec<String>,
    answers: HashMap<String, u8>,
}

impl GoldSet {
    pub fn from_examples(examples: &[RCExample]) -> Self {
        let mut gold = GoldSet::default();
        for ex in examples {
            gold.insert(&ex.example_id, ex.gold_index);
        }
        gold
    }

    pub fn insert(&mut self, id: &str, answer: u8) {
        if self.answers.insert(id.to_owned(), answer).is_none() {
            self.order.push(id.to_owned());
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn answer(&self, id: &str) -> Option<u8> {
        self.answers.get(id).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(String::as_str)
    }
}

impl FromIterator<(String, u8)> for GoldSet {
    fn from_iter<I: IntoIterator<Item = (String, u8)>>(iter: I) -> Self {
        let mut gold = GoldSet::default();
        for (id, a) in iter {
            gold.insert(&id, a);
        }
        gold
    }
}

/// Check that `preds` covers `gold` exactly once per id.
fn index_predictions<'a>(preds: &'a [PredictionRecord], gold: &GoldSet) -> Result<HashMap<&'a str, u8>, CoverageError> {
    let tag = preds.first().map(|p| p.model_tag.clone()).unwrap_or_default();
    let mut map = HashMap::with_capacity(preds.len());
    let mut dups = BTreeSet::new();
    let mut extra = BTreeSet::new();
    for p in preds {
        if gold.answer(&p.example_id).is_none() {
            extra.insert(p.example_id.clone());
        } else if map.insert(p.example_id.as_str(), p.predicted_index).is_some() {
            dups.insert(p.example_id.clone());
        }
    }
    if !extra.is_empty() {
        return Err(CoverageError::Extra {
            tag,
            extra: extra.into_iter().collect(),
        });
    }
    if !dups.is_empty() {
        return Err(CoverageError::Duplicate {
            tag,
            ids: dups.into_iter().collect(),
        });
    }
    let missing: Vec<String> = gold
        .ids()
        .filter(|id| !map.contains_key(id))
        .map(str::to_owned)
        .collect();
    if !missing.is_empty() {
        return Err(CoverageError::Missing { tag, missing });
    }
    Ok(map)
}

/// Fraction of gold examples predicted correctly.
pub fn accuracy(preds: &[PredictionRecord], gold: &GoldSet) -> Result<f64, CoverageError> {
    if gold.is_empty() {
        return Err(CoverageError::EmptyGold);
    }
    let map = index_predictions(preds, gold)?;
    let correct = gold.ids().filter(|id| map[id] == gold.answer(id).unwrap()).count();
    Ok(correct as f64 / gold.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaSide {
    Gain,
    Loss,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaEntry {
    pub example_id: String,
    pub side: DeltaSide,
    pub qa_prediction: u8,
    pub nli_prediction: u8,
    pub gold: u8,
}

/// Examples where the two models disagree. Gain: the NLI model is right.
/// Loss: everything else in the delta, which includes disagreements where
/// both models are wrong (also listed in `both_wrong_ids`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DeltaReport {
    pub entries: Vec<DeltaEntry>,
    pub delta_ids: BTreeSet<String>,
    pub gain_ids: BTreeSet<String>,
    pub loss_ids: BTreeSet<String>,
    pub both_wrong_ids: BTreeSet<String>,
    pub distributions: Option<DeltaDistributions>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaDistributions {
    pub include_improper: bool,
    pub gain: Distribution,
    pub loss: Distribution,
}

pub fn delta(
    preds_qa: &[PredictionRecord],
    preds_nli: &[PredictionRecord],
    gold: &GoldSet,
) -> Result<DeltaReport, CoverageError> {
    let qa = index_predictions(preds_qa, gold)?;
    let nli = index_predictions(preds_nli, gold)?;
    let mut report = DeltaReport::default();
    let mut ids: Vec<&str> = gold.ids().collect();
    ids.sort_unstable();
    for id in ids {
        let (q, n, g) = (qa[id], nli[id], gold.answer(id).unwrap());
        if q == n {
            continue;
        }
        let side = if n == g { DeltaSide::Gain } else { DeltaSide::Loss };
        report.delta_ids.insert(id.to_owned());
        match side {
            DeltaSide::Gain => report.gain_ids.insert(id.to_owned()),
            DeltaSide::Loss => report.loss_ids.insert(id.to_owned()),
        };
        if q != g && n != g {
            report.both_wrong_ids.insert(id.to_owned());
        }
        report.entries.push(DeltaEntry {
            example_id: id.to_owned(),
            side,
            qa_prediction: q,
            nli_prediction: n,
            gold: g,
        });
    }
    Ok(report)
}

impl DeltaReport {
    pub fn attach_distributions(&mut self, annotations: &[AnnotationRecord], include_improper: bool) {
        self.distributions = Some(DeltaDistributions {
            include_improper,
            gain: distribution(&self.gain_ids, annotations, include_improper),
            loss: distribution(&self.loss_ids, annotations, include_improper),
        });
    }
}

/// Reasoning-category histogram over a set of ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Distribution {
    pub counts: BTreeMap<ReasoningCategory, usize>,
    pub counted: usize,
    /// Ids dropped because their conversion was marked improper.
    pub excluded_improper: usize,
    /// Ids with no annotation; reported, never counted.
    pub unannotated: Vec<String>,
}

pub fn distribution(ids: &BTreeSet<String>, annotations: &[AnnotationRecord], include_improper: bool) -> Distribution {
    let by_id: HashMap<&str, &AnnotationRecord> = annotations.iter().map(|a| (a.example_id.as_str(), a)).collect();
    let mut out = Distribution {
        counts: ReasoningCategory::ALL.iter().map(|&c| (c, 0)).collect(),
        counted: 0,
        excluded_improper: 0,
        unannotated: Vec::new(),
    };
    for id in ids {
        match by_id.get(id.as_str()) {
            None => out.unannotated.push(id.clone()),
            Some(a) if !include_improper && !a.properly_converted => out.excluded_improper += 1,
            Some(a) => {
                *out.counts.get_mut(&a.category).unwrap() += 1;
                out.counted += 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategoryRow {
    pub category: HeuristicCategory,
    pub count: usize,
    pub fraction: f64,
    /// `None` when no example carries the flag.
    pub accuracy_qa: Option<f64>,
    pub accuracy_nli: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub dataset_size: usize,
    pub overall_qa: f64,
    pub overall_nli: f64,
    pub rows: Vec<CategoryRow>,
}

pub fn per_category_report(
    preds_qa: &[PredictionRecord],
    preds_nli: &[PredictionRecord],
    gold: &GoldSet,
    flags: &HashMap<String, HeuristicFlags>,
) -> Result<EvalReport, CoverageError> {
    if gold.is_empty() {
        return Err(CoverageError::EmptyGold);
    }
    let qa = index_predictions(preds_qa, gold)?;
    let nli = index_predictions(preds_nli, gold)?;
    let missing: Vec<String> = gold
        .ids()
        .filter(|id| !flags.contains_key(*id))
        .map(str::to_owned)
        .collect();
    if !missing.is_empty() {
        return Err(CoverageError::MissingFlags(missing));
    }
    let correct = |map: &HashMap<&str, u8>, id: &str| map[id] == gold.answer(id).unwrap();
    let n = gold.len();
    let rows = HeuristicCategory::ALL
        .iter()
        .map(|&category| {
            let members: Vec<&str> = gold.ids().filter(|id| flags[*id].get(category)).collect();
            let acc = |map: &HashMap<&str, u8>| {
                (!members.is_empty())
                    .then(|| members.iter().filter(|id| correct(map, id)).count() as f64 / members.len() as f64)
            };
            CategoryRow {
                category,
                count: members.len(),
                fraction: members.len() as f64 / n as f64,
                accuracy_qa: acc(&qa),
                accuracy_nli: acc(&nli),
            }
        })
        .collect();
    Ok(EvalReport {
        dataset_size: n,
        overall_qa: gold.ids().filter(|id| correct(&qa, id)).count() as f64 / n as f64,
        overall_nli: gold.ids().filter(|id| correct(&nli, id)).count() as f64 / n as f64,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn preds(tag: &str, xs: &[(&str, u8)]) -> Vec<PredictionRecord> {
        xs.iter()
            .map(|(id, p)| PredictionRecord {
                example_id: (*id).into(),
                predicted_index: *p,
                model_tag: tag.into(),
            })
            .collect()
    }

    /// Gold for ids a..f is 0 everywhere.
    fn gold6() -> GoldSet {
        ["a", "b", "c", "d", "e", "f"]
            .iter()
            .map(|id| (id.to_string(), 0))
            .collect()
    }

    #[test]
    fn accuracy_cases() {
        let gold = gold6();
        let perfect = preds("qa", &[("a", 0), ("b", 0), ("c", 0), ("d", 0), ("e", 0), ("f", 0)]);
        assert_eq!(accuracy(&perfect, &gold).unwrap(), 1.0);
        let four = preds("qa", &[("a", 0), ("b", 0), ("c", 0), ("d", 0), ("e", 1), ("f", 2)]);
        assert!((accuracy(&four, &gold).unwrap() - 0.6667).abs() < 1e-4);
        assert!((accuracy(&four, &gold).unwrap() - 4.0 / 6.0).abs() < 1e-9);
        let short = preds("qa", &[("a", 0), ("b", 0), ("c", 0), ("d", 0), ("e", 0)]);
        assert_eq!(
            accuracy(&short, &gold).unwrap_err(),
            CoverageError::Missing {
                tag: "qa".into(),
                missing: vec!["f".into()]
            }
        );
        let mut extra = perfect.clone();
        extra.extend(preds("qa", &[("zz", 0)]));
        assert!(matches!(accuracy(&extra, &gold), Err(CoverageError::Extra { .. })));
        let mut dup = perfect.clone();
        dup.extend(preds("qa", &[("a", 1)]));
        assert!(matches!(accuracy(&dup, &gold), Err(CoverageError::Duplicate { .. })));
    }

    #[test]
    fn delta_hand_fixture() {
        // a,b: NLI right, QA wrong. c: QA right, NLI wrong. d: both wrong,
        // different. e,f: agree.
        let gold = gold6();
        let qa = preds("qa", &[("a", 1), ("b", 2), ("c", 0), ("d", 1), ("e", 0), ("f", 3)]);
        let nli = preds("nli", &[("a", 0), ("b", 0), ("c", 3), ("d", 2), ("e", 0), ("f", 3)]);
        let r = delta(&qa, &nli, &gold).unwrap();
        assert_eq!((r.delta_ids.len(), r.gain_ids.len(), r.loss_ids.len()), (4, 2, 2));
        assert!(r.loss_ids.contains("d") && r.both_wrong_ids.contains("d"));
        assert_eq!(r.both_wrong_ids.len(), 1);

        let same = delta(&qa, &qa, &gold).unwrap();
        assert!(same.delta_ids.is_empty() && same.gain_ids.is_empty() && same.loss_ids.is_empty());
    }

    #[test]
    fn per_category_rows() {
        let gold = gold6();
        let qa = preds("qa", &[("a", 0), ("b", 1), ("c", 0), ("d", 0), ("e", 0), ("f", 0)]);
        let nli = preds("nli", &[("a", 0), ("b", 0), ("c", 0), ("d", 0), ("e", 0), ("f", 0)]);
        let mut flags: HashMap<String, HeuristicFlags> = gold
            .ids()
            .map(|id| {
                (
                    id.to_owned(),
                    HeuristicFlags {
                        main_idea: true,
                        ..Default::default()
                    },
                )
            })
            .collect();
        flags.get_mut("a").unwrap().math = true;
        flags.get_mut("b").unwrap().math = true;
        let r = per_category_report(&qa, &nli, &gold, &flags).unwrap();
        let row = |c| r.rows.iter().find(|row| row.category == c).unwrap();
        assert_eq!(row(HeuristicCategory::Math).accuracy_qa, Some(0.5));
        assert_eq!(row(HeuristicCategory::Math).fraction, 2.0 / 6.0);
        let ded = row(HeuristicCategory::Deductive);
        assert_eq!((ded.fraction, ded.accuracy_qa, ded.accuracy_nli), (0.0, None, None));
        let main = row(HeuristicCategory::MainIdea);
        assert_eq!((main.fraction, main.accuracy_nli), (1.0, Some(1.0)));
        assert_eq!(main.accuracy_qa, Some(r.overall_qa));

        flags.remove("f");
        assert!(matches!(
            per_category_report(&qa, &nli, &gold, &flags),
            Err(CoverageError::MissingFlags(_))
        ));
    }

    #[test]
    fn distribution_cases() {
        let ann = |id: &str, c, ok| AnnotationRecord {
            example_id: id.into(),
            category: c,
            properly_converted: ok,
        };
        let anns = vec![
            ann("a", ReasoningCategory::Math, true),
            ann("b", ReasoningCategory::Math, false),
            ann("c", ReasoningCategory::Dialogue, true),
        ];
        let ids: BTreeSet<String> = ["a", "b", "c", "x"].iter().map(|s| s.to_string()).collect();
        let d = distribution(&ids, &anns, false);
        assert_eq!((d.counted, d.excluded_improper), (2, 1));
        assert_eq!(d.unannotated, ["x"]);
        assert_eq!(d.counts[&ReasoningCategory::Math], 1);
        assert_eq!(d.counts.len(), 7);
        assert_eq!(distribution(&ids, &anns, true).counted, 3);
        let empty = distribution(&BTreeSet::new(), &anns, false);
        assert!(empty.counts.values().all(|&n| n == 0));
    }

    fn arb_pair() -> impl Strategy<Value = (Vec<u8>, Vec<u8>, Vec<u8>)> {
        (1usize..40).prop_flat_map(|n| {
            (
                proptest::collection::vec(0u8..4, n),
                proptest::collection::vec(0u8..4, n),
                proptest::collection::vec(0u8..4, n),
            )
        })
    }

    fn build(g: &[u8], q: &[u8], n: &[u8]) -> (GoldSet, Vec<PredictionRecord>, Vec<PredictionRecord>) {
        let ids: Vec<String> = (0..g.len()).map(|i| format!("id{i}")).collect();
        let gold = ids.iter().cloned().zip(g.iter().copied()).collect();
        let mk = |tag: &str, xs: &[u8]| {
            ids.iter()
                .zip(xs)
                .map(|(id, &p)| PredictionRecord {
                    example_id: id.clone(),
                    predicted_index: p,
                    model_tag: tag.into(),
                })
                .collect::<Vec<_>>()
        };
        (gold, mk("qa", q), mk("nli", n))
    }

    proptest! {
        #[test]
        fn delta_partition((g, q, n) in arb_pair()) {
            let (gold, qa, nli) = build(&g, &q, &n);
            let r = delta(&qa, &nli, &gold).unwrap();
            prop_assert!(r.gain_ids.is_disjoint(&r.loss_ids));
            let union: BTreeSet<String> = r.gain_ids.union(&r.loss_ids).cloned().collect();
            prop_assert_eq!(&union, &r.delta_ids);
            let expected: BTreeSet<String> = (0..g.len()).filter(|&i| q[i] != n[i]).map(|i| format!("id{i}")).collect();
            prop_assert_eq!(r.delta_ids, expected);
        }

        #[test]
        fn accuracy_permutation_invariant((g, q, _n) in arb_pair(), seed in any::<u64>()) {
            let (gold, mut qa, _) = build(&g, &q, &q);
            let before = accuracy(&qa, &gold).unwrap();
            let len = qa.len();
            qa.rotate_left((seed as usize) % len);
            qa.reverse();
            prop_assert_eq!(accuracy(&qa, &gold).unwrap(), before);
        }

        #[test]
        fn all_true_flag_matches_overall((g, q, n) in arb_pair()) {
            let (gold, qa, nli) = build(&g, &q, &n);
            let flags = gold.ids().map(|id| (id.to_owned(), HeuristicFlags { dialogue: true, ..Default::default() })).collect();
            let r = per_category_report(&qa, &nli, &gold, &flags).unwrap();
            let row = r.rows.iter().find(|row| row.category == HeuristicCategory::Dialogue).unwrap();
            prop_assert_eq!(row.accuracy_qa, Some(accuracy(&qa, &gold).unwrap()));
            prop_assert_eq!(row.accuracy_nli, Some(accuracy(&nli, &gold).unwrap()));
        }
    }
}
