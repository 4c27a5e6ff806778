//! The individual question → hypothesis rules.

use once_cell::sync::Lazy;
use regex::Regex;

use super::text::{finalize, join_pieces, normalize_answer, strip_terminal_punct};
use super::verbs::{VerbForm, VerbLexicon};
use crate::parsetree::{span_of, ParseToken, SentenceParse};

static BLANK: Lazy<Regex> = Lazy::new(|| Regex::new("_+").unwrap());

static WHICH_TRUE: Lazy<Regex> = Lazy::new(|| {
    Regex::new(r"(?i)\bwhich\s+of\s+the\s+following\b(?P<gap>.*?\b(?:is|are|was|were)(?:n't|\b).*?)\btrue\b").unwrap()
});

static NEGATION: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?i)\bnot\b|n't\b").unwrap());

/// `Some(negated)` when the question is a "which of the following is (not)
/// true" question.
pub(crate) fn which_true_polarity(question: &str) -> Option<bool> {
    WHICH_TRUE.captures(question).map(|c| NEGATION.is_match(&c["gap"]))
}

/// `<answer> is TRUE.` or `<answer> is NOT true.`; whatever the question
/// says after "true" (e.g. "about the report findings") is not carried over.
pub fn rule_which_true(question: &str, answer: &str) -> String {
    let negated = which_true_polarity(question).unwrap_or(false);
    let answer = normalize_answer(answer, false, None);
    let tail = if negated { "is NOT true." } else { "is TRUE." };
    finalize(&format!("{answer} {tail}"))
}

/// Replace the first blank with the answer.
pub fn rule_cloze(question: &str, answer: &str, a_parse: Option<&SentenceParse>) -> (String, Vec<String>) {
    let mut trace = Vec::new();
    let Some(blank) = BLANK.find(question) else {
        trace.push("no-blank".to_owned());
        return (
            finalize(&format!("{} {}", question, strip_terminal_punct(answer))),
            trace,
        );
    };
    if BLANK.find_iter(question).count() > 1 {
        trace.push("multiple-blanks".to_owned());
    }
    let before = &question[..blank.start()];
    let after = &question[blank.end()..];
    let mid_sentence = !before.trim().is_empty();
    let answer = if after.trim().is_empty() {
        let collapsed = answer.split_whitespace().collect::<Vec<_>>().join(" ");
        let kept = normalize_answer(&collapsed, mid_sentence, a_parse);
        // Keep the answer's own closing mark; nothing follows the blank.
        format!("{kept}{}", collapsed[strip_terminal_punct(&collapsed).len()..].trim())
    } else {
        normalize_answer(answer, mid_sentence, a_parse)
    };
    (finalize(&format!("{before}{answer}{after}")), trace)
}

/// Declarativize as "question minus `?`" + answer.
pub fn rule_fallback(question: &str, answer: &str, a_parse: Option<&SentenceParse>) -> String {
    let stem = question.replace('?', " ");
    let answer = normalize_answer(answer, true, a_parse);
    finalize(&format!("{} {answer}", stem.trim()))
}

/// Relations that stay inside a WH phrase when collecting its tokens.
fn phrase_internal(child: &ParseToken, parent_index: usize) -> bool {
    let base = base_rel(&child.deprel);
    match base {
        "det" | "amod" | "nummod" | "case" | "nmod" | "compound" | "fixed" | "flat" => true,
        "advmod" => child.index < parent_index,
        _ => false,
    }
}

fn base_rel(deprel: &str) -> &str {
    deprel.split(':').next().unwrap_or(deprel)
}

fn is_subject_rel(deprel: &str) -> bool {
    matches!(base_rel(deprel), "nsubj" | "csubj")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Placement {
    /// Where the WH phrase was.
    AtPhrase,
    /// Directly after the given predicate token.
    AfterVerb(usize),
    /// After the copula, once it has been moved behind the subject.
    AfterCopula(usize),
    /// At the end of the clause.
    ClauseEnd,
}

/// Why the parse-driven rule gave up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoWhEvidence;

/// Parse-driven WH rewrite. Returns the hypothesis and rule trace, or
/// [`NoWhEvidence`] when the parse carries no interrogative token.
pub fn rule_wh(
    q_parse: &SentenceParse,
    answer: &str,
    a_parse: Option<&SentenceParse>,
    lexicon: &VerbLexicon,
) -> Result<(String, Vec<String>), NoWhEvidence> {
    let s = q_parse;
    let wh = s.find_wh().ok_or(NoWhEvidence)?;
    let mut trace = vec![format!("wh-token:{}:{}", wh, s.token(wh).form)];
    let is_why = s.token(wh).form.eq_ignore_ascii_case("why");

    // Climb from a WH determiner / degree word to the phrase it modifies.
    let mut head = wh;
    loop {
        let tok = s.token(head);
        if tok.head == 0 {
            break;
        }
        let parent = s.token(tok.head);
        let modifier =
            matches!(base_rel(&tok.deprel), "det" | "amod" | "advmod" | "nummod") || tok.deprel == "nmod:poss";
        let nominal = matches!(
            parent.upos.as_str(),
            "NOUN" | "PROPN" | "ADJ" | "ADV" | "NUM" | "PRON" | "DET"
        );
        if modifier && nominal {
            head = parent.index;
        } else {
            break;
        }
    }
    let head_tok = s.token(head);
    let phrase = s.members_where(head, |c| phrase_internal(c, c.head));
    if !span_of(&phrase).projective {
        trace.push("non-projective-wh".to_owned());
    }
    let in_phrase = |i: usize| phrase.binary_search(&i).is_ok();

    // Prepositions heading the WH phrase travel with the answer.
    let case_marks: Vec<&ParseToken> = s
        .children(head)
        .filter(|c| base_rel(&c.deprel) == "case" && in_phrase(c.index))
        .collect();

    let has_cop = s.children(head).any(|c| c.deprel == "cop");
    let predicate = if head_tok.head == 0 { head } else { head_tok.head };
    let fronted = head < predicate;
    let role = base_rel(&head_tok.deprel);
    let placement = if is_subject_rel(&head_tok.deprel) {
        trace.push("wh-role:subject".to_owned());
        Placement::AtPhrase
    } else if head_tok.head == 0 && has_cop {
        trace.push("wh-role:attribute".to_owned());
        let cop = s.children(head).find(|c| c.deprel == "cop").map(|c| c.index).unwrap();
        Placement::AfterCopula(cop)
    } else if matches!(role, "obj" | "iobj" | "ccomp" | "xcomp") {
        trace.push("wh-role:object".to_owned());
        if fronted {
            Placement::AfterVerb(predicate)
        } else {
            Placement::AtPhrase
        }
    } else if matches!(role, "advmod" | "obl" | "advcl") || is_why {
        trace.push("wh-role:adjunct".to_owned());
        if fronted {
            Placement::ClauseEnd
        } else {
            Placement::AtPhrase
        }
    } else {
        trace.push(format!("wh-role:other:{}", head_tok.deprel));
        Placement::AtPhrase
    };

    // Undo subject-auxiliary inversion.
    let subject = s
        .children(predicate)
        .find(|c| is_subject_rel(&c.deprel) && !in_phrase(c.index))
        .map(|c| s.subtree_members(c.index));
    let negated = s
        .children(predicate)
        .any(|c| matches!(c.form.to_lowercase().as_str(), "not" | "n't"));
    let mut moved: Vec<usize> = Vec::new();
    let mut deleted: Vec<usize> = Vec::new();
    let mut verb_form: Option<String> = None;
    let subject_end = subject.as_ref().map(|m| *m.last().unwrap());
    if let Some(members) = &subject {
        let subject_start = members[0];
        for c in s.children(predicate) {
            let aux_like = matches!(c.deprel.as_str(), "aux" | "aux:pass" | "cop")
                || (matches!(c.form.to_lowercase().as_str(), "not" | "n't") && !moved.is_empty());
            if c.index < subject_start && aux_like && !in_phrase(c.index) {
                moved.push(c.index);
            }
        }
        if let Some(&first) = moved.first() {
            let aux = s.token(first);
            let do_form = if aux.deprel == "aux" && (aux.lemma.eq_ignore_ascii_case("do") || aux.lemma == "_") {
                VerbForm::for_do_auxiliary(&aux.form)
            } else {
                None
            };
            match do_form {
                Some(form) if !negated && s.token(predicate).upos != "AUX" => {
                    let pred = s.token(predicate);
                    let lemma = if pred.lemma == "_" {
                        pred.form.to_lowercase()
                    } else {
                        pred.lemma.to_lowercase()
                    };
                    let inflected = lexicon.inflect(&lemma, form);
                    trace.push(format!("do-support:{}+{}->{}", aux.form, pred.form, inflected));
                    verb_form = Some(inflected);
                    deleted.push(first);
                    moved.remove(0);
                }
                _ => {}
            }
            if !moved.is_empty() {
                trace.push(format!(
                    "inversion:{}",
                    moved
                        .iter()
                        .map(|&i| s.token(i).form.as_str())
                        .collect::<Vec<_>>()
                        .join("+")
                ));
            }
        }
    }

    let mid_sentence = !(placement == Placement::AtPhrase && phrase[0] == 1);
    let mut answer_text = normalize_answer(answer, mid_sentence, a_parse);
    if !case_marks.is_empty() {
        let first = super::text::alnum_tokens(&answer_text).into_iter().next();
        let prep = case_marks[0].form.to_lowercase();
        if first.as_deref() != Some(prep.as_str()) {
            let marks: Vec<&str> = case_marks.iter().map(|t| t.form.as_str()).collect();
            answer_text = format!("{} {answer_text}", marks.join(" ").to_lowercase());
        }
    }
    if is_why {
        let lower = answer_text.to_lowercase();
        if !lower.starts_with("because") {
            answer_text = format!("because {answer_text}");
        }
    }

    let mut pieces: Vec<String> = Vec::new();
    let mut answer_placed = false;
    let is_question_mark = |t: &ParseToken| t.form == "?";
    let emit = |i: usize, pieces: &mut Vec<String>| {
        if Some(i) == Some(predicate) {
            if let Some(v) = &verb_form {
                pieces.push(v.clone());
                return;
            }
        }
        pieces.push(s.token(i).form.clone());
    };
    for tok in &s.tokens {
        let i = tok.index;
        if placement == Placement::AtPhrase && i == phrase[0] && !answer_placed {
            pieces.push(answer_text.clone());
            answer_placed = true;
        }
        if in_phrase(i) || deleted.contains(&i) || moved.contains(&i) || is_question_mark(tok) {
            continue;
        }
        emit(i, &mut pieces);
        if Some(i) == subject_end {
            for &m in &moved {
                emit(m, &mut pieces);
                if placement == Placement::AfterCopula(m) {
                    pieces.push(answer_text.clone());
                    answer_placed = true;
                }
            }
        }
        match placement {
            Placement::AfterVerb(v) if v == i => {
                pieces.push(answer_text.clone());
                answer_placed = true;
            }
            Placement::AfterCopula(c) if c == i => {
                pieces.push(answer_text.clone());
                answer_placed = true;
            }
            _ => {}
        }
    }
    if !answer_placed {
        // Clause end: before trailing punctuation.
        let trailing = pieces
            .iter()
            .rev()
            .take_while(|p| p.chars().all(|c| c.is_ascii_punctuation()))
            .count();
        let at = pieces.len() - trailing;
        pieces.insert(at, answer_text);
    }
    Ok((finalize(&join_pieces(&pieces)), trace))
}
