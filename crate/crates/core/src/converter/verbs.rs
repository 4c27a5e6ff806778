//! Verb re-inflection for undoing do-support.
//!
//! The irregular table lives in `data/irregular_verbs.tsv` (lemma, past,
//! third-singular) and can be extended at runtime with
//! [`VerbLexicon::extend_from_tsv`].

use std::collections::HashMap;

use once_cell::sync::Lazy;

const BUILTIN_TABLE: &str = include_str!("../../data/irregular_verbs.tsv");

static BUILTIN: Lazy<VerbLexicon> =
    Lazy::new(|| VerbLexicon::from_tsv(BUILTIN_TABLE).expect("bundled verb table is well-formed"));

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerbForm {
    Past,
    ThirdSingular,
    Base,
}

impl VerbForm {
    /// The form the main verb takes once the supporting `do` is removed.
    pub fn for_do_auxiliary(aux: &str) -> Option<VerbForm> {
        match aux.to_lowercase().as_str() {
            "did" => Some(VerbForm::Past),
            "does" => Some(VerbForm::ThirdSingular),
            "do" => Some(VerbForm::Base),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerbLexicon {
    irregulars: HashMap<String, (String, String)>,
}

impl VerbLexicon {
    /// The bundled table.
    pub fn builtin() -> &'static VerbLexicon {
        &BUILTIN
    }

    pub fn from_tsv(text: &str) -> Result<Self, String> {
        let mut lexicon = VerbLexicon::default();
        lexicon.extend_from_tsv(text)?;
        Ok(lexicon)
    }

    /// Add or override entries. Lines are `lemma<TAB>past<TAB>third`; `#`
    /// starts a comment line.
    pub fn extend_from_tsv(&mut self, text: &str) -> Result<(), String> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            match cols.as_slice() {
                [lemma, past, third] if !lemma.is_empty() && !past.is_empty() && !third.is_empty() => {
                    self.irregulars
                        .insert(lemma.to_lowercase(), ((*past).to_owned(), (*third).to_owned()));
                }
                _ => {
                    return Err(format!(
                        "verb table line {}: expected lemma, past, third-singular",
                        i + 1
                    ))
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.irregulars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irregulars.is_empty()
    }

    pub fn inflect(&self, lemma: &str, target: VerbForm) -> String {
        if target == VerbForm::Base {
            return lemma.to_owned();
        }
        if let Some((past, third)) = self.irregulars.get(lemma) {
            return match target {
                VerbForm::Past => past.clone(),
                _ => third.clone(),
            };
        }
        match target {
            VerbForm::Past => regular_past(lemma),
            _ => regular_third_singular(lemma),
        }
    }
}

/// Inflect with the bundled table.
pub fn inflect(lemma: &str, target: VerbForm) -> String {
    VerbLexicon::builtin().inflect(lemma, target)
}

fn consonant_y(lemma: &str) -> bool {
    let mut rev = lemma.chars().rev();
    rev.next() == Some('y') && rev.next().is_some_and(|c| !"aeiou".contains(c))
}

fn regular_past(lemma: &str) -> String {
    if consonant_y(lemma) {
        format!("{}ied", &lemma[..lemma.len() - 1])
    } else if lemma.ends_with('e') {
        format!("{lemma}d")
    } else {
        format!("{lemma}ed")
    }
}

fn regular_third_singular(lemma: &str) -> String {
    if consonant_y(lemma) {
        format!("{}ies", &lemma[..lemma.len() - 1])
    } else if ["s", "x", "z", "ch", "sh"].iter().any(|s| lemma.ends_with(s)) {
        format!("{lemma}es")
    } else {
        format!("{lemma}s")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_and_irregular() {
        assert_eq!(inflect("end", VerbForm::Past), "ended");
        assert_eq!(inflect("go", VerbForm::Past), "went");
        assert_eq!(inflect("study", VerbForm::ThirdSingular), "studies");
        assert_eq!(inflect("study", VerbForm::Past), "studied");
        assert_eq!(inflect("close", VerbForm::Past), "closed");
        assert_eq!(inflect("play", VerbForm::Past), "played");
        assert_eq!(inflect("play", VerbForm::ThirdSingular), "plays");
        assert_eq!(inflect("teach", VerbForm::ThirdSingular), "teaches");
        assert_eq!(inflect("fix", VerbForm::ThirdSingular), "fixes");
        assert_eq!(inflect("have", VerbForm::ThirdSingular), "has");
        assert_eq!(inflect("stop", VerbForm::Past), "stopped");
        assert_eq!(inflect("go", VerbForm::Base), "go");
    }

    #[test]
    fn table_is_large_and_extensible() {
        assert!(VerbLexicon::builtin().len() >= 180);
        let mut lex = VerbLexicon::builtin().clone();
        lex.extend_from_tsv("# custom\nglorp\tglorped-irr\tglorpz\n").unwrap();
        assert_eq!(lex.inflect("glorp", VerbForm::Past), "glorped-irr");
        assert!(VerbLexicon::from_tsv("bad line").is_err());
        assert!(VerbLexicon::from_tsv("x\t\ty").is_err());
    }

    #[test]
    fn do_auxiliary_forms() {
        assert_eq!(VerbForm::for_do_auxiliary("Did"), Some(VerbForm::Past));
        assert_eq!(VerbForm::for_do_auxiliary("does"), Some(VerbForm::ThirdSingular));
        assert_eq!(VerbForm::for_do_auxiliary("do"), Some(VerbForm::Base));
        assert_eq!(VerbForm::for_do_auxiliary("is"), None);
    }
}
