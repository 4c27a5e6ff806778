//! Surface clean-up: hypothesis finalization, answer normalization and
//! token joining.

use crate::parsetree::SentenceParse;

/// Words whose capital letter at the start of an answer only marks the
/// sentence start. Used when no answer parse is available.
const FUNCTION_WORDS: &[&str] = &[
    "a",
    "about",
    "above",
    "across",
    "after",
    "against",
    "all",
    "almost",
    "along",
    "also",
    "although",
    "always",
    "among",
    "an",
    "and",
    "another",
    "any",
    "around",
    "as",
    "at",
    "because",
    "before",
    "behind",
    "being",
    "below",
    "between",
    "both",
    "but",
    "by",
    "each",
    "either",
    "enough",
    "even",
    "every",
    "everyone",
    "everything",
    "few",
    "for",
    "from",
    "he",
    "her",
    "here",
    "hers",
    "him",
    "his",
    "how",
    "if",
    "in",
    "inside",
    "into",
    "it",
    "its",
    "just",
    "least",
    "less",
    "many",
    "more",
    "most",
    "much",
    "my",
    "near",
    "neither",
    "never",
    "no",
    "nobody",
    "none",
    "nor",
    "not",
    "nothing",
    "now",
    "of",
    "off",
    "often",
    "on",
    "once",
    "one",
    "only",
    "or",
    "other",
    "others",
    "our",
    "out",
    "outside",
    "over",
    "own",
    "people",
    "quite",
    "rather",
    "several",
    "she",
    "since",
    "so",
    "some",
    "someone",
    "something",
    "sometimes",
    "soon",
    "still",
    "such",
    "than",
    "that",
    "the",
    "their",
    "them",
    "then",
    "there",
    "these",
    "they",
    "this",
    "those",
    "though",
    "through",
    "to",
    "today",
    "too",
    "towards",
    "two",
    "three",
    "four",
    "five",
    "six",
    "seven",
    "eight",
    "nine",
    "ten",
    "under",
    "unless",
    "until",
    "up",
    "usually",
    "very",
    "we",
    "what",
    "when",
    "where",
    "whether",
    "which",
    "while",
    "who",
    "why",
    "with",
    "within",
    "without",
    "yes",
    "yet",
    "you",
    "your",
];

/// Clean a hypothesis: no `?`, single spaces, no space before closing
/// punctuation, a sentence-final mark, and a capital first letter.
/// Idempotent; the empty string stays empty.
pub fn finalize(text: &str) -> String {
    let no_q: String = text.chars().map(|c| if c == '?' { ' ' } else { c }).collect();
    let collapsed = no_q.split_whitespace().collect::<Vec<_>>().join(" ");

    let mut attached = String::with_capacity(collapsed.len());
    for c in collapsed.chars() {
        if matches!(c, '.' | ',' | '!' | ';' | ':') && attached.ends_with(' ') {
            attached.pop();
        }
        attached.push(c);
    }

    let mut body = attached.trim_end_matches([',', ';', ':', ' ']).to_owned();
    if body.is_empty() {
        return body;
    }
    if !(body.ends_with('.') || body.ends_with('!') || body.ends_with(".\"")) {
        body.push('.');
    }
    capitalize_first_alpha(&body)
}

fn capitalize_first_alpha(text: &str) -> String {
    let Some((pos, c)) = text.char_indices().find(|(_, c)| c.is_alphabetic()) else {
        return text.to_owned();
    };
    let mut upper = c.to_uppercase();
    match (upper.next(), upper.next()) {
        (Some(u), None) if u != c => {
            let mut out = String::with_capacity(text.len());
            out.push_str(&text[..pos]);
            out.push(u);
            out.push_str(&text[pos + c.len_utf8()..]);
            out
        }
        _ => text.to_owned(),
    }
}

/// Drop trailing `.`, `!` and `?` (and surrounding whitespace).
pub fn strip_terminal_punct(text: &str) -> &str {
    text.trim().trim_end_matches(['.', '!', '?', ' ']).trim_end()
}

/// Prepare an answer for insertion. Trailing sentence punctuation is
/// dropped; when the answer lands mid-sentence its first letter is
/// lowercased unless it looks like a name.
pub fn normalize_answer(answer: &str, mid_sentence: bool, parse: Option<&SentenceParse>) -> String {
    let collapsed = answer.split_whitespace().collect::<Vec<_>>().join(" ");
    let stripped = strip_terminal_punct(&collapsed).to_owned();
    if mid_sentence && should_lowercase(&stripped, parse) {
        lowercase_first_alpha(&stripped)
    } else {
        stripped
    }
}

fn first_word(text: &str) -> Option<&str> {
    text.split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .find(|w| w.chars().any(char::is_alphabetic))
}

fn should_lowercase(answer: &str, parse: Option<&SentenceParse>) -> bool {
    let Some(word) = first_word(answer) else {
        return false;
    };
    if word == "I" || word.starts_with("I'") {
        return false;
    }
    if word.chars().filter(|c| c.is_uppercase()).count() > 1 {
        return false;
    }
    if !word.chars().next().is_some_and(char::is_uppercase) {
        return false;
    }
    match parse {
        Some(p) => !p
            .tokens
            .iter()
            .find(|t| t.form.chars().any(char::is_alphabetic))
            .is_some_and(|t| t.upos == "PROPN" || t.xpos == "NNP" || t.xpos == "NNPS"),
        None => FUNCTION_WORDS.contains(&word.to_lowercase().as_str()),
    }
}

fn lowercase_first_alpha(text: &str) -> String {
    let Some((pos, c)) = text.char_indices().find(|(_, c)| c.is_alphabetic()) else {
        return text.to_owned();
    };
    let mut lower = c.to_lowercase();
    match (lower.next(), lower.next()) {
        (Some(l), None) => {
            let mut out = String::with_capacity(text.len());
            out.push_str(&text[..pos]);
            out.push(l);
            out.push_str(&text[pos + c.len_utf8()..]);
            out
        }
        _ => text.to_owned(),
    }
}

fn attaches_left(piece: &str) -> bool {
    matches!(
        piece,
        "'s" | "'re" | "'ve" | "'ll" | "'d" | "'m" | "n't" | "'" | "," | "." | "!" | ";" | ":" | ")" | "%"
    )
}

/// Join parser tokens with single spaces, gluing clitics and closing
/// punctuation to the preceding word.
pub fn join_pieces<S: AsRef<str>>(pieces: &[S]) -> String {
    let mut out = String::new();
    for piece in pieces {
        let piece = piece.as_ref();
        if piece.is_empty() {
            continue;
        }
        if !out.is_empty() && !attaches_left(piece) && !out.ends_with('(') {
            out.push(' ');
        }
        out.push_str(piece);
    }
    out
}

/// Lowercased alphanumeric runs.
pub fn alnum_tokens(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn finalize_examples() {
        assert_eq!(finalize("the war ended in 1945 ?"), "The war ended in 1945.");
        assert_eq!(finalize("The war ended in 1945."), "The war ended in 1945.");
        assert_eq!(finalize(""), "");
        assert_eq!(finalize("  ?  "), "");
        assert_eq!(finalize("wow , it works !"), "Wow, it works!");
        assert_eq!(finalize("he said \"go.\""), "He said \"go.\"");
        assert_eq!(finalize("a list :"), "A list.");
        assert_eq!(finalize("\"quoted\" start"), "\"Quoted\" start.");
        assert_eq!(finalize("why?not"), "Why not.");
    }

    #[test]
    fn answer_normalization() {
        assert_eq!(normalize_answer("In 1945", true, None), "in 1945");
        assert_eq!(normalize_answer("In 1945", false, None), "In 1945");
        assert_eq!(normalize_answer("Tom.", true, None), "Tom");
        assert_eq!(normalize_answer("She left!", true, None), "she left");
        assert_eq!(normalize_answer("I did", true, None), "I did");
        assert_eq!(normalize_answer("NASA did", true, None), "NASA did");
        assert_eq!(
            normalize_answer("Blame! Blame! Blame!", true, None),
            "Blame! Blame! Blame"
        );
    }

    #[test]
    fn answer_normalization_with_parse() {
        let doc = "# sent_id = x/o0\n1\tParis\tParis\tPROPN\tNNP\t_\t0\troot\t_\t_\n";
        let p = crate::parsetree::parse_conllu(doc).unwrap().remove(0);
        assert_eq!(normalize_answer("Paris", true, Some(&p)), "Paris");
        let doc = "# sent_id = x/o0\n1\tBlame\tblame\tNOUN\tNN\t_\t0\troot\t_\t_\n";
        let p = crate::parsetree::parse_conllu(doc).unwrap().remove(0);
        assert_eq!(normalize_answer("Blame!", true, Some(&p)), "blame");
    }

    #[test]
    fn joining() {
        assert_eq!(
            join_pieces(&["the", "passage", "'s", "title", "?"]),
            "the passage's title ?"
        );
        assert_eq!(
            join_pieces(&["ca", "n't", "go", ",", "so"]),
            "ca n't go, so".replace(" n't", "n't")
        );
        assert_eq!(alnum_tokens("Hi, 'there' 1945!"), ["hi", "there", "1945"]);
    }

    proptest! {
        #[test]
        fn finalize_idempotent(s in "\\PC{0,40}") {
            let once = finalize(&s);
            prop_assert_eq!(finalize(&once), once.clone());
        }

        #[test]
        fn finalize_well_formed(s in "[a-zA-Z0-9 ,.!?;:'\"]{0,40}") {
            let out = finalize(&s);
            prop_assert!(!out.contains('?'));
            if !out.is_empty() {
                prop_assert!(out.ends_with('.') || out.ends_with('!') || out.ends_with(".\""));
            }
        }
    }
}
