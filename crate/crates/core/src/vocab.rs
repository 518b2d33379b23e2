//! Noun and verb dictionaries used to lexicalize abstract sentences.
//!
//! Vocabulary files are plain UTF-8 text:
//!
//! ```text
//! # comment
//! [nouns]
//! artist
//! beekeeper
//! [verbs]
//! chases/chase
//! ```
//!
//! Verb entries pair the third-person singular form with the infinitive used
//! after "does not".

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const DEFAULT_TRAIN: &str = include_str!("../data/train.vocab");
const DEFAULT_EVAL: &str = include_str!("../data/eval.vocab");

#[derive(Debug, Error, PartialEq)]
pub enum VocabError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate entry `{0}`")]
    DuplicateEntry(String),
    #[error("eval fraction {0} leaves one half of the split empty")]
    SplitTooSmall(f64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VerbForms {
    /// Third-person singular, e.g. `chases`.
    pub third: String,
    /// Infinitive, e.g. `chase`.
    pub infinitive: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    nouns: Vec<String>,
    verbs: Vec<VerbForms>,
}

fn is_word(w: &str) -> bool {
    let mut chars = w.chars();
    matches!(chars.next(), Some('a'..='z')) && chars.all(|c| c.is_ascii_lowercase() || c == '-')
}

impl Vocabulary {
    /// Builds a vocabulary, checking the word-shape and distinctness invariants.
    pub fn new(nouns: Vec<String>, verbs: Vec<VerbForms>) -> Result<Self, VocabError> {
        let mut seen = HashSet::new();
        for n in &nouns {
            claim(&mut seen, n, 0)?;
        }
        for v in &verbs {
            claim(&mut seen, &v.third, 0)?;
            if v.infinitive != v.third {
                claim(&mut seen, &v.infinitive, 0)?;
            }
        }
        Ok(Self { nouns, verbs })
    }

    /// The shipped training vocabulary (occupations, 60 nouns, 15 verbs).
    pub fn default_train() -> Self {
        Self::load(DEFAULT_TRAIN).expect("bundled training vocabulary is well formed")
    }

    /// The shipped evaluation vocabulary, disjoint from [`Vocabulary::default_train`].
    pub fn default_eval() -> Self {
        Self::load(DEFAULT_EVAL).expect("bundled evaluation vocabulary is well formed")
    }

    pub fn load(source: &str) -> Result<Self, VocabError> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Nouns,
            Verbs,
        }
        let mut section = Section::None;
        let mut nouns = Vec::new();
        let mut verbs = Vec::new();
        let mut seen = HashSet::new();
        for (idx, raw) in source.lines().enumerate() {
            let line = idx + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            match text {
                "[nouns]" => section = Section::Nouns,
                "[verbs]" => section = Section::Verbs,
                _ => match section {
                    Section::None => {
                        return Err(VocabError::Parse {
                            line,
                            message: "entry outside a [nouns] or [verbs] section".into(),
                        })
                    }
                    Section::Nouns => {
                        claim(&mut seen, text, line)?;
                        nouns.push(text.to_string());
                    }
                    Section::Verbs => {
                        let Some((third, inf)) = text.split_once('/') else {
                            return Err(VocabError::Parse {
                                line,
                                message: format!("verb entry `{text}` is not `third/infinitive`"),
                            });
                        };
                        let (third, inf) = (third.trim(), inf.trim());
                        claim(&mut seen, third, line)?;
                        if inf != third {
                            claim(&mut seen, inf, line)?;
                        }
                        verbs.push(VerbForms { third: third.to_string(), infinitive: inf.to_string() });
                    }
                },
            }
        }
        Ok(Self { nouns, verbs })
    }

    /// Serializes in the file format accepted by [`Vocabulary::load`].
    pub fn to_text(&self) -> String {
        let mut out = String::from("[nouns]\n");
        for n in &self.nouns {
            out.push_str(n);
            out.push('\n');
        }
        out.push_str("[verbs]\n");
        for v in &self.verbs {
            let _ = writeln!(out, "{}/{}", v.third, v.infinitive);
        }
        out
    }

    pub fn nouns(&self) -> &[String] {
        &self.nouns
    }

    pub fn verbs(&self) -> &[VerbForms] {
        &self.verbs
    }

    pub fn noun(&self, idx: usize) -> Option<&str> {
        self.nouns.get(idx).map(String::as_str)
    }

    pub fn verb(&self, idx: usize) -> Option<&VerbForms> {
        self.verbs.get(idx)
    }

    pub fn noun_index(&self, word: &str) -> Option<usize> {
        self.nouns.iter().position(|n| n == word)
    }

    pub fn verb_by_third(&self, word: &str) -> Option<usize> {
        self.verbs.iter().position(|v| v.third == word)
    }

    pub fn verb_by_infinitive(&self, word: &str) -> Option<usize> {
        self.verbs.iter().position(|v| v.infinitive == word)
    }

    /// Splits into disjoint (train, eval) vocabularies. The eval half receives
    /// `round(eval_fraction * len)` words of each kind.
    pub fn split(&self, eval_fraction: f64, seed: u64) -> Result<(Self, Self), VocabError> {
        if !(eval_fraction > 0.0 && eval_fraction < 1.0) {
            return Err(VocabError::SplitTooSmall(eval_fraction));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (train_nouns, eval_nouns) = split_list(&self.nouns, eval_fraction, &mut rng);
        let (train_verbs, eval_verbs) = split_list(&self.verbs, eval_fraction, &mut rng);
        if train_nouns.is_empty()
            || eval_nouns.is_empty()
            || (!self.verbs.is_empty() && (train_verbs.is_empty() || eval_verbs.is_empty()))
        {
            return Err(VocabError::SplitTooSmall(eval_fraction));
        }
        Ok((
            Self { nouns: train_nouns, verbs: train_verbs },
            Self { nouns: eval_nouns, verbs: eval_verbs },
        ))
    }
}

fn claim(seen: &mut HashSet<String>, w: &str, line: usize) -> Result<(), VocabError> {
    if !is_word(w) {
        return Err(VocabError::Parse { line, message: format!("malformed word `{w}`") });
    }
    if !seen.insert(w.to_string()) {
        return Err(VocabError::DuplicateEntry(w.to_string()));
    }
    Ok(())
}

fn split_list<T: Clone>(items: &[T], fraction: f64, rng: &mut ChaCha8Rng) -> (Vec<T>, Vec<T>) {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.shuffle(rng);
    let eval_len = (fraction * items.len() as f64).round() as usize;
    let mut eval_idx = order[..eval_len].to_vec();
    let mut train_idx = order[eval_len..].to_vec();
    // Keep the original relative order inside each half.
    eval_idx.sort_unstable();
    train_idx.sort_unstable();
    (
        train_idx.into_iter().map(|i| items[i].clone()).collect(),
        eval_idx.into_iter().map(|i| items[i].clone()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_minimal_file() {
        let v = Vocabulary::load("[nouns]\nartist\nbeekeeper\n[verbs]\nchases/chase\n").unwrap();
        assert_eq!(v.nouns().len(), 2);
        assert_eq!(v.verbs().len(), 1);
        assert_eq!(v.verbs()[0].infinitive, "chase");
    }

    #[test]
    fn rejects_duplicates_and_uppercase() {
        assert_eq!(
            Vocabulary::load("[nouns]\nartist\nartist\n"),
            Err(VocabError::DuplicateEntry("artist".into()))
        );
        assert!(matches!(
            Vocabulary::load("[nouns]\n# c\nArtist\n"),
            Err(VocabError::Parse { line: 3, .. })
        ));
        assert!(matches!(Vocabulary::load("[verbs]\nchases\n"), Err(VocabError::Parse { line: 2, .. })));
        // noun/verb overlap
        assert!(matches!(
            Vocabulary::load("[nouns]\nchase\n[verbs]\nchases/chase\n"),
            Err(VocabError::DuplicateEntry(_))
        ));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let v = Vocabulary::load("# header\n\n[nouns]\nsea-lion # marine\n").unwrap();
        assert_eq!(v.nouns(), ["sea-lion"]);
    }

    #[test]
    fn split_ten_nouns_in_half() {
        let nouns = (0..10).map(|i| format!("noun{}", char::from(b'a' + i))).collect();
        let v = Vocabulary::new(nouns, vec![]).unwrap();
        let (a, b) = v.split(0.5, 7).unwrap();
        assert_eq!(a.nouns().len(), 5);
        assert_eq!(b.nouns().len(), 5);
        assert!(a.nouns().iter().all(|n| !b.nouns().contains(n)));
        assert_eq!(v.split(0.5, 7).unwrap(), (a, b));
    }

    #[test]
    fn split_single_noun_is_too_small() {
        let v = Vocabulary::new(vec!["artist".into()], vec![]).unwrap();
        assert!(matches!(v.split(0.5, 1), Err(VocabError::SplitTooSmall(_))));
    }

    #[test]
    fn default_lists_are_disjoint_and_large_enough() {
        let train = Vocabulary::default_train();
        let eval = Vocabulary::default_eval();
        assert!(train.nouns().len() >= 40 && eval.nouns().len() >= 40);
        assert!(train.verbs().len() >= 10 && eval.verbs().len() >= 10);
        assert!(train.nouns().iter().all(|n| !eval.nouns().contains(n)));
        assert!(train.verbs().iter().all(|v| !eval.verbs().contains(v)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn vocab() -> impl Strategy<Value = Vocabulary> {
            (
                proptest::collection::hash_set("[a-z][a-z-]{0,6}", 2..30),
                proptest::collection::hash_set("[a-z]{1,6}", 0..8),
            )
                .prop_filter_map("words collide", |(nouns, verbs)| {
                    let verbs = verbs
                        .into_iter()
                        .map(|v| VerbForms { third: format!("{v}zs"), infinitive: format!("{v}z") })
                        .collect();
                    Vocabulary::new(nouns.into_iter().collect(), verbs).ok()
                })
        }

        proptest! {
            #[test]
            fn split_halves_are_disjoint(v in vocab(), frac in 0.05f64..0.95, seed: u64) {
                if let Ok((a, b)) = v.split(frac, seed) {
                    prop_assert!(a.nouns().iter().all(|n| !b.nouns().contains(n)));
                    prop_assert!(a.verbs().iter().all(|x| !b.verbs().contains(x)));
                    prop_assert_eq!(a.nouns().len() + b.nouns().len(), v.nouns().len());
                    prop_assert_eq!(a.verbs().len() + b.verbs().len(), v.verbs().len());
                }
            }

            #[test]
            fn load_inverts_to_text(v in vocab()) {
                prop_assert_eq!(Vocabulary::load(&v.to_text()).unwrap(), v);
            }
        }
    }
}
