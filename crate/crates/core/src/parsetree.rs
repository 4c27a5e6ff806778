//! CoNLL-U dependency parses: reading, writing, validation and the tree
//! queries the conversion rules rely on.
//!
//! Multiword-token ranges (`3-4`) and empty nodes (`3.1`) are skipped on
//! read; only basic syntactic words are modelled.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConlluError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("sentence {sentence_id}: {message}")]
    Structure { sentence_id: String, message: String },
    #[error("sentence id {0:?} does not follow <example_id>/q or <example_id>/o<k>")]
    BundleKey(String),
    #[error("duplicate sentence id {0:?}")]
    DuplicateSentence(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseToken {
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    /// Feature pairs in file order.
    pub feats: Vec<(String, String)>,
    /// 0 for the root.
    pub head: usize,
    pub deprel: String,
    /// DEPS and MISC are carried verbatim for round-tripping.
    pub deps: String,
    pub misc: String,
}

impl ParseToken {
    pub fn feat(&self, key: &str) -> Option<&str> {
        self.feats.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn space_after(&self) -> bool {
        !self.misc.split('|').any(|m| m == "SpaceAfter=No")
    }
}

/// Lowercased surface forms treated as interrogative when the parser gives
/// no feature or tag evidence either way.
pub const WH_WORDS: [&str; 9] = ["who", "whom", "whose", "what", "which", "when", "where", "why", "how"];

const WH_XPOS: [&str; 4] = ["WP", "WP$", "WDT", "WRB"];

/// Parser evidence first: `PronType=Int` is interrogative, any other
/// `PronType` (e.g. relative `which`) is not. Then PTB wh-tags, then the
/// closed lexicon.
pub fn is_interrogative(token: &ParseToken) -> bool {
    match token.feat("PronType") {
        Some("Int") | Some("Int,Rel") => return true,
        Some(_) => return false,
        None => {}
    }
    if WH_XPOS.contains(&token.xpos.as_str()) {
        return true;
    }
    WH_WORDS.contains(&token.form.to_lowercase().as_str())
}

/// An inclusive 1-based token range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    /// False when the subtree did not cover the range contiguously.
    pub projective: bool,
}

impl Span {
    pub fn contains(&self, index: usize) -> bool {
        (self.start..=self.end).contains(&index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceParse {
    pub sentence_id: String,
    pub tokens: Vec<ParseToken>,
    pub text: String,
    /// Comment lines other than `sent_id` and `text`, without the leading `#`.
    pub comments: Vec<String>,
}

impl SentenceParse {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token by 1-based index.
    pub fn token(&self, index: usize) -> &ParseToken {
        &self.tokens[index - 1]
    }

    pub fn root(&self) -> usize {
        self.tokens
            .iter()
            .find(|t| t.head == 0)
            .map(|t| t.index)
            .expect("validated sentence has a root")
    }

    pub fn children(&self, index: usize) -> impl Iterator<Item = &ParseToken> + '_ {
        self.tokens.iter().filter(move |t| t.head == index)
    }

    /// Leftmost interrogative token.
    pub fn find_wh(&self) -> Option<usize> {
        self.tokens.iter().find(|t| is_interrogative(t)).map(|t| t.index)
    }

    /// Sorted indices of `index` and its transitive dependents.
    pub fn subtree_members(&self, index: usize) -> Vec<usize> {
        self.members_where(index, |_| true)
    }

    /// Like [`subtree_members`](Self::subtree_members), but only descends
    /// through dependents for which `follow` holds.
    pub fn members_where<F>(&self, index: usize, follow: F) -> Vec<usize>
    where
        F: Fn(&ParseToken) -> bool,
    {
        let mut out = vec![index];
        let mut stack = vec![index];
        while let Some(node) = stack.pop() {
            for child in self.children(node).filter(|c| follow(c)) {
                out.push(child.index);
                stack.push(child.index);
            }
        }
        out.sort_unstable();
        out
    }

    /// Minimal range covering the subtree of `index`.
    pub fn subtree_span(&self, index: usize) -> Span {
        span_of(&self.subtree_members(index))
    }

    /// Surface string for the given token indices, in sentence order.
    pub fn surface(&self, indices: &[usize]) -> String {
        let mut out = String::new();
        for (n, &i) in indices.iter().enumerate() {
            let tok = self.token(i);
            out.push_str(&tok.form);
            if n + 1 < indices.len() && tok.space_after() {
                out.push(' ');
            }
        }
        out
    }

    fn reconstruct_text(&self) -> String {
        let all: Vec<usize> = (1..=self.len()).collect();
        self.surface(&all)
    }
}

pub fn span_of(members: &[usize]) -> Span {
    let start = *members.iter().min().expect("non-empty member set");
    let end = *members.iter().max().expect("non-empty member set");
    Span {
        start,
        end,
        projective: end - start + 1 == members.len(),
    }
}

/// Parse a CoNLL-U document. Fails on the first format or structural error.
pub fn parse_conllu(text: &str) -> Result<Vec<SentenceParse>, ConlluError> {
    let mut out = Vec::new();
    for (ordinal, block) in blocks(text).into_iter().enumerate() {
        if let Some(sentence) = parse_block(&block, ordinal)? {
            out.push(sentence);
        }
    }
    Ok(out)
}

/// Result of checking a whole document without stopping at the first error.
#[derive(Debug, Default)]
pub struct ValidationReport {
    pub sentences: Vec<SentenceParse>,
    pub errors: Vec<ConlluError>,
}

pub fn validate_conllu(text: &str) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut seen = std::collections::HashSet::new();
    for (ordinal, block) in blocks(text).into_iter().enumerate() {
        match parse_block(&block, ordinal) {
            Ok(Some(sentence)) => {
                if !seen.insert(sentence.sentence_id.clone()) {
                    report
                        .errors
                        .push(ConlluError::DuplicateSentence(sentence.sentence_id.clone()));
                }
                report.sentences.push(sentence);
            }
            Ok(None) => {}
            Err(e) => report.errors.push(e),
        }
    }
    report
}

/// Lines of one sentence block with their 1-based line numbers.
type Block<'a> = Vec<(usize, &'a str)>;

fn blocks(text: &str) -> Vec<Block<'_>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            if !current.is_empty() {
                out.push(std::mem::take(&mut current));
            }
        } else {
            current.push((i + 1, line));
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

fn parse_block(block: &Block<'_>, ordinal: usize) -> Result<Option<SentenceParse>, ConlluError> {
    let mut sentence_id = None;
    let mut text = None;
    let mut comments = Vec::new();
    let mut tokens = Vec::new();

    for &(line_no, line) in block {
        if let Some(comment) = line.strip_prefix('#') {
            let trimmed = comment.trim();
            if let Some(v) = trimmed.strip_prefix("sent_id").and_then(attr_value) {
                sentence_id = Some(v.to_owned());
            } else if let Some(v) = trimmed.strip_prefix("text").and_then(attr_value) {
                text = Some(v.to_owned());
            } else {
                comments.push(comment.to_owned());
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(ConlluError::Format {
                line: line_no,
                message: format!("expected 10 tab-separated columns, found {}", cols.len()),
            });
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let number = |field: &str, what: &str| {
            field.parse::<usize>().map_err(|_| ConlluError::Format {
                line: line_no,
                message: format!("{what} {field:?} is not a number"),
            })
        };
        let index = number(cols[0], "token id")?;
        let head = number(cols[6], "head")?;
        tokens.push(ParseToken {
            index,
            form: cols[1].to_owned(),
            lemma: cols[2].to_owned(),
            upos: cols[3].to_owned(),
            xpos: cols[4].to_owned(),
            feats: parse_feats(cols[5]).map_err(|message| ConlluError::Format { line: line_no, message })?,
            head,
            deprel: cols[7].to_owned(),
            deps: cols[8].to_owned(),
            misc: cols[9].to_owned(),
        });
    }

    if tokens.is_empty() {
        return Ok(None);
    }
    let mut sentence = SentenceParse {
        sentence_id: sentence_id.unwrap_or_else(|| (ordinal + 1).to_string()),
        tokens,
        text: String::new(),
        comments,
    };
    check_structure(&sentence)?;
    sentence.text = text.unwrap_or_else(|| sentence.reconstruct_text());
    Ok(Some(sentence))
}

fn attr_value(rest: &str) -> Option<&str> {
    rest.trim_start().strip_prefix('=').map(str::trim)
}

fn parse_feats(field: &str) -> Result<Vec<(String, String)>, String> {
    if field == "_" {
        return Ok(Vec::new());
    }
    field
        .split('|')
        .map(|pair| {
            pair.split_once('=')
                .map(|(k, v)| (k.to_owned(), v.to_owned()))
                .ok_or_else(|| format!("feature {pair:?} is not Key=Value"))
        })
        .collect()
}

fn check_structure(s: &SentenceParse) -> Result<(), ConlluError> {
    let fail = |message: String| ConlluError::Structure {
        sentence_id: s.sentence_id.clone(),
        message,
    };
    let n = s.tokens.len();
    for (i, tok) in s.tokens.iter().enumerate() {
        if tok.index != i + 1 {
            return Err(fail(format!(
                "token ids must be 1..{n} in order; found {} at position {}",
                tok.index,
                i + 1
            )));
        }
        if tok.head > n {
            return Err(fail(format!(
                "token {} has head {} beyond sentence length",
                tok.index, tok.head
            )));
        }
        if tok.head == tok.index {
            return Err(fail(format!("token {} is its own head", tok.index)));
        }
    }
    let roots: Vec<&ParseToken> = s.tokens.iter().filter(|t| t.head == 0).collect();
    match roots.as_slice() {
        [root] if root.deprel == "root" => {}
        [root] => {
            return Err(fail(format!(
                "root token {} has deprel {:?}, expected \"root\"",
                root.index, root.deprel
            )))
        }
        [] => return Err(fail("no root token".into())),
        many => return Err(fail(format!("{} root tokens", many.len()))),
    }
    for tok in &s.tokens {
        let mut node = tok.index;
        let mut steps = 0;
        while node != 0 {
            if steps > n {
                return Err(fail(format!("head cycle through token {}", tok.index)));
            }
            node = s.token(node).head;
            steps += 1;
        }
    }
    Ok(())
}

/// Emit CoNLL-U: `sent_id`, then `text`, then remaining comments, then tokens.
pub fn write_conllu(sentences: &[SentenceParse]) -> String {
    let mut out = String::new();
    for s in sentences {
        let _ = writeln!(out, "# sent_id = {}", s.sentence_id);
        let _ = writeln!(out, "# text = {}", s.text);
        for c in &s.comments {
            let _ = writeln!(out, "#{c}");
        }
        for t in &s.tokens {
            let feats = if t.feats.is_empty() {
                "_".to_owned()
            } else {
                t.feats
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join("|")
            };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                t.index, t.form, t.lemma, t.upos, t.xpos, feats, t.head, t.deprel, t.deps, t.misc
            );
        }
        out.push('\n');
    }
    out
}

/// Which part of an example a parse belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SentenceRole {
    Question,
    Option(u8),
}

/// Split `<example_id>/q` or `<example_id>/o<k>` into its parts.
pub fn split_sentence_id(id: &str) -> Option<(&str, SentenceRole)> {
    let (example, role) = id.rsplit_once('/')?;
    if example.is_empty() {
        return None;
    }
    let role = match role {
        "q" => SentenceRole::Question,
        _ => {
            let k: u8 = role.strip_prefix('o')?.parse().ok()?;
            if k > 3 {
                return None;
            }
            SentenceRole::Option(k)
        }
    };
    Some((example, role))
}

pub fn question_key(example_id: &str) -> String {
    format!("{example_id}/q")
}

pub fn option_key(example_id: &str, k: usize) -> String {
    format!("{example_id}/o{k}")
}

/// Parses keyed by sentence id.
#[derive(Debug, Clone, Default)]
pub struct ParseBundle {
    parses: BTreeMap<String, SentenceParse>,
}

impl ParseBundle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parses(parses: Vec<SentenceParse>) -> Result<Self, ConlluError> {
        let mut bundle = ParseBundle::new();
        for p in parses {
            bundle.insert(p)?;
        }
        Ok(bundle)
    }

    pub fn from_conllu(text: &str) -> Result<Self, ConlluError> {
        Self::from_parses(parse_conllu(text)?)
    }

    pub fn insert(&mut self, parse: SentenceParse) -> Result<(), ConlluError> {
        if split_sentence_id(&parse.sentence_id).is_none() {
            return Err(ConlluError::BundleKey(parse.sentence_id));
        }
        if self.parses.contains_key(&parse.sentence_id) {
            return Err(ConlluError::DuplicateSentence(parse.sentence_id));
        }
        self.parses.insert(parse.sentence_id.clone(), parse);
        Ok(())
    }

    pub fn get(&self, sentence_id: &str) -> Option<&SentenceParse> {
        self.parses.get(sentence_id)
    }

    pub fn question(&self, example_id: &str) -> Option<&SentenceParse> {
        self.get(&question_key(example_id))
    }

    pub fn option(&self, example_id: &str, k: usize) -> Option<&SentenceParse> {
        self.get(&option_key(example_id, k))
    }

    pub fn len(&self) -> usize {
        self.parses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parses.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOM: &str = "# sent_id = s1\n# text = Tom wrote books\n\
        1\tTom\tTom\tPROPN\tNNP\tNumber=Sing\t2\tnsubj\t_\t_\n\
        2\twrote\twrite\tVERB\tVBD\tTense=Past\t0\troot\t_\t_\n\
        3\tbooks\tbook\tNOUN\tNNS\tNumber=Plur\t2\tobj\t_\tSpaceAfter=No\n\n";

    const WHICH: &str = "# sent_id = w/q\n\
        1\tWhich\twhich\tPRON\tWDT\tPronType=Int\t6\tnsubj\t_\t_\n\
        2\tof\tof\tADP\tIN\t_\t4\tcase\t_\t_\n\
        3\tthe\tthe\tDET\tDT\tDefinite=Def|PronType=Art\t4\tdet\t_\t_\n\
        4\tfollowing\tfollowing\tNOUN\tNN\tNumber=Sing\t1\tnmod\t_\t_\n\
        5\tis\tbe\tAUX\tVBZ\tMood=Ind\t6\tcop\t_\t_\n\
        6\ttrue\ttrue\tADJ\tJJ\tDegree=Pos\t0\troot\t_\tSpaceAfter=No\n\
        7\t?\t?\tPUNCT\t.\t_\t6\tpunct\t_\t_\n\n";

    fn one(doc: &str) -> SentenceParse {
        let mut v = parse_conllu(doc).unwrap();
        assert_eq!(v.len(), 1);
        v.remove(0)
    }

    #[test]
    fn three_token_sentence() {
        let s = one(TOM);
        assert_eq!(s.sentence_id, "s1");
        assert_eq!(s.root(), 2);
        assert_eq!(s.token(3).feat("Number"), Some("Plur"));
        assert_eq!(
            s.subtree_span(2),
            Span {
                start: 1,
                end: 3,
                projective: true
            }
        );
        assert_eq!(
            s.subtree_span(3),
            Span {
                start: 3,
                end: 3,
                projective: true
            }
        );
    }

    #[test]
    fn empty_document() {
        assert!(parse_conllu("").unwrap().is_empty());
        assert!(parse_conllu("\n\n").unwrap().is_empty());
    }

    #[test]
    fn self_headed_token_is_structural_error() {
        let doc = "# sent_id = bad\n1\tA\ta\tX\tX\t_\t1\troot\t_\t_\n2\tB\tb\tX\tX\t_\t0\troot\t_\t_\n";
        let err = parse_conllu(doc).unwrap_err();
        assert!(
            matches!(&err, ConlluError::Structure { sentence_id, .. } if sentence_id == "bad"),
            "{err}"
        );
    }

    #[test]
    fn cycles_and_root_counts() {
        let cyc = "# sent_id = c\n1\tA\ta\tX\tX\t_\t2\tdep\t_\t_\n2\tB\tb\tX\tX\t_\t1\tdep\t_\t_\n3\tC\tc\tX\tX\t_\t0\troot\t_\t_\n";
        assert!(parse_conllu(cyc).unwrap_err().to_string().contains("cycle"));
        let two = "# sent_id = r\n1\tA\ta\tX\tX\t_\t0\troot\t_\t_\n2\tB\tb\tX\tX\t_\t0\troot\t_\t_\n";
        assert!(parse_conllu(two).unwrap_err().to_string().contains("2 root"));
        let none = "# sent_id = n\n1\tA\ta\tX\tX\t_\t0\tnsubj\t_\t_\n";
        assert!(parse_conllu(none)
            .unwrap_err()
            .to_string()
            .contains("expected \"root\""));
    }

    #[test]
    fn wrong_column_count_reports_line() {
        let doc = "# sent_id = x\n1\tA\ta\tX\tX\t_\t0\troot\t_\n";
        assert_eq!(
            parse_conllu(doc).unwrap_err(),
            ConlluError::Format {
                line: 2,
                message: "expected 10 tab-separated columns, found 9".into()
            }
        );
    }

    #[test]
    fn multiword_and_empty_nodes_skipped() {
        let doc = "# sent_id = m\n1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n\
            1\tdo\tdo\tAUX\tVBP\t_\t3\taux\t_\t_\n2\tn't\tnot\tPART\tRB\t_\t3\tadvmod\t_\t_\n\
            2.1\tx\tx\tX\tX\t_\t_\t_\t_\t_\n3\tgo\tgo\tVERB\tVB\t_\t0\troot\t_\t_\n";
        let s = one(doc);
        assert_eq!(s.len(), 3);
        assert_eq!(s.text, "do n't go");
    }

    #[test]
    fn wh_detection() {
        let s = one(WHICH);
        assert_eq!(s.find_wh(), Some(1));
        assert_eq!(
            s.subtree_span(1),
            Span {
                start: 1,
                end: 4,
                projective: true
            }
        );
        assert_eq!(s.text, "Which of the following is true?");
        assert_eq!(one(TOM).find_wh(), None);
    }

    #[test]
    fn feats_override_lexicon() {
        let doc = "# sent_id = rel\n1\tbooks\tbook\tNOUN\tNNS\t_\t0\troot\t_\t_\n\
            2\twhich\twhich\tPRON\tWDT\tPronType=Rel\t3\tnsubj\t_\t_\n\
            3\tfell\tfall\tVERB\tVBD\t_\t1\tacl:relcl\t_\t_\n";
        assert_eq!(one(doc).find_wh(), None);
        let lex = "# sent_id = lex\n1\tHow\thow\tADV\tRB\t_\t2\tadvmod\t_\t_\n2\tgo\tgo\tVERB\tVB\t_\t0\troot\t_\t_\n";
        assert_eq!(one(lex).find_wh(), Some(1));
    }

    #[test]
    fn non_projective_subtree_flagged() {
        // "What did he talk about": `about` hangs off `What` across the verb.
        let doc = "# sent_id = np\n1\tWhat\twhat\tPRON\tWP\tPronType=Int\t4\tobl\t_\t_\n\
            2\tdid\tdo\tAUX\tVBD\t_\t4\taux\t_\t_\n3\the\the\tPRON\tPRP\t_\t4\tnsubj\t_\t_\n\
            4\ttalk\ttalk\tVERB\tVB\t_\t0\troot\t_\t_\n5\tabout\tabout\tADP\tIN\t_\t1\tcase\t_\t_\n";
        let span = one(doc).subtree_span(1);
        assert_eq!(
            span,
            Span {
                start: 1,
                end: 5,
                projective: false
            }
        );
    }

    #[test]
    fn bundle_keys() {
        assert_eq!(
            split_sentence_id("high1.txt#2/q"),
            Some(("high1.txt#2", SentenceRole::Question))
        );
        assert_eq!(split_sentence_id("a/b/o3"), Some(("a/b", SentenceRole::Option(3))));
        assert_eq!(split_sentence_id("x/o4"), None);
        assert_eq!(split_sentence_id("x"), None);
        assert!(matches!(ParseBundle::from_conllu(TOM), Err(ConlluError::BundleKey(_))));
        let b = ParseBundle::from_conllu(WHICH).unwrap();
        assert!(b.question("w").is_some());
        let dup = format!("{WHICH}{WHICH}");
        assert!(matches!(
            ParseBundle::from_conllu(&dup),
            Err(ConlluError::DuplicateSentence(_))
        ));
    }

    #[test]
    fn validation_collects_every_error() {
        let bad = "# sent_id = bad\n1\tA\ta\tX\tX\t_\t1\troot\t_\t_\n\n";
        let doc = format!("{TOM}{bad}{WHICH}");
        let report = validate_conllu(&doc);
        assert_eq!(report.sentences.len(), 2);
        assert_eq!(report.errors.len(), 1);
    }

    #[test]
    fn emit_round_trip_is_byte_stable() {
        let doc = format!("{TOM}{WHICH}");
        let parsed = parse_conllu(&doc).unwrap();
        let emitted = write_conllu(&parsed);
        assert_eq!(parse_conllu(&emitted).unwrap(), parsed);
        assert_eq!(write_conllu(&parse_conllu(&emitted).unwrap()), emitted);
    }

    /// Random trees: token i > 1 attaches to some earlier token, which is
    /// acyclic by construction; then the root is permuted in.
    fn arb_tree() -> impl Strategy<Value = SentenceParse> {
        (1usize..12)
            .prop_flat_map(|n| {
                let heads: Vec<_> = (1..n).map(|i| 0..i).collect();
                (Just(n), heads, 0..n)
            })
            .prop_map(|(n, heads, shift)| {
                // Attach token (i+1) to heads[i-1], then rotate labels so the
                // root is not always index 1.
                let mut parent = vec![0usize; n];
                for i in 1..n {
                    parent[i] = heads[i - 1] + 1;
                }
                let relabel = |x: usize| (x - 1 + shift) % n + 1;
                let mut tokens: Vec<ParseToken> = (0..n)
                    .map(|i| ParseToken {
                        index: relabel(i + 1),
                        form: format!("w{i}"),
                        lemma: format!("w{i}"),
                        upos: "X".into(),
                        xpos: "X".into(),
                        feats: if i % 2 == 0 {
                            vec![("A".into(), "B".into())]
                        } else {
                            vec![]
                        },
                        head: if parent[i] == 0 { 0 } else { relabel(parent[i]) },
                        deprel: if parent[i] == 0 { "root".into() } else { "dep".into() },
                        deps: "_".into(),
                        misc: "_".into(),
                    })
                    .collect();
                tokens.sort_by_key(|t| t.index);
                let mut s = SentenceParse {
                    sentence_id: "p".into(),
                    tokens,
                    text: String::new(),
                    comments: vec![],
                };
                s.text = s.reconstruct_text();
                s
            })
    }

    proptest! {
        #[test]
        fn emitted_trees_reparse_equal(tree in arb_tree()) {
            let text = write_conllu(std::slice::from_ref(&tree));
            let back = parse_conllu(&text).unwrap();
            prop_assert_eq!(back, vec![tree]);
        }

        #[test]
        fn every_token_reaches_root_and_root_spans_all(tree in arb_tree()) {
            let n = tree.len();
            for t in &tree.tokens {
                let mut node = t.index;
                let mut steps = 0;
                while node != 0 { node = tree.token(node).head; steps += 1; }
                prop_assert!(steps <= n);
            }
            let span = tree.subtree_span(tree.root());
            prop_assert_eq!((span.start, span.end, span.projective), (1, n, true));
        }
    }
}
