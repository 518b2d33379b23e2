//! Sentence AST shared by every other module.
//!
//! Sentences are kept in logical normal form: a quantifier plus literal
//! polarities over abstract noun and verb indices. Surface choices such as
//! "No"/"any" are derived in [`crate::surface`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vocab::Vocabulary;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Noun(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Verb(pub u32);

impl Noun {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Verb {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A possibly negated noun.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub noun: Noun,
    pub positive: bool,
}

impl Literal {
    pub fn pos(noun: u32) -> Self {
        Self { noun: Noun(noun), positive: true }
    }

    pub fn neg(noun: u32) -> Self {
        Self { noun: Noun(noun), positive: false }
    }

    pub fn new(noun: u32, positive: bool) -> Self {
        Self { noun: Noun(noun), positive }
    }

    /// The opposite literal.
    pub fn complement(self) -> Self {
        Self { positive: !self.positive, ..self }
    }

    pub fn clashes_with(self, other: Literal) -> bool {
        self.noun == other.noun && self.positive != other.positive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quant {
    Universal,
    Existential,
}

impl Quant {
    pub fn flip(self) -> Self {
        match self {
            Quant::Universal => Quant::Existential,
            Quant::Existential => Quant::Universal,
        }
    }

    fn term(self) -> &'static str {
        match self {
            Quant::Universal => "all",
            Quant::Existential => "exists",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sentence {
    /// `∀x(±p → ±q)` or `∃x(±p ∧ ±q)`.
    Syllogistic { q: Quant, subject: Literal, predicate: Literal },
    /// `Qx(±p ∘ Q'y(±q ∘ ±r(x,y)))`.
    Relational {
        sq: Quant,
        subject: Literal,
        oq: Quant,
        object: Literal,
        verb: Verb,
        verb_positive: bool,
    },
    /// `∀x((o ∧ ±p) → ±q)` or `∃x(o ∧ ±p ∧ ±q)`.
    Relative { q: Quant, head: Noun, rel: Literal, predicate: Literal },
}

impl Sentence {
    pub fn syl(q: Quant, subject: Literal, predicate: Literal) -> Self {
        Sentence::Syllogistic { q, subject, predicate }
    }

    pub fn all(subject: Literal, predicate: Literal) -> Self {
        Self::syl(Quant::Universal, subject, predicate)
    }

    pub fn some(subject: Literal, predicate: Literal) -> Self {
        Self::syl(Quant::Existential, subject, predicate)
    }

    pub fn rel(sq: Quant, subject: Literal, oq: Quant, object: Literal, verb: u32, verb_positive: bool) -> Self {
        Sentence::Relational { sq, subject, oq, object, verb: Verb(verb), verb_positive }
    }

    pub fn relcl(q: Quant, head: u32, rel: Literal, predicate: Literal) -> Self {
        Sentence::Relative { q, head: Noun(head), rel, predicate }
    }

    /// The outermost quantifier.
    pub fn quant(&self) -> Quant {
        match *self {
            Sentence::Syllogistic { q, .. } | Sentence::Relative { q, .. } => q,
            Sentence::Relational { sq, .. } => sq,
        }
    }

    pub fn is_universal(&self) -> bool {
        self.quant() == Quant::Universal
    }

    pub fn is_relational(&self) -> bool {
        matches!(self, Sentence::Relational { .. })
    }

    /// Nouns mentioned by the sentence, in order of appearance.
    pub fn nouns(&self) -> Vec<Noun> {
        match *self {
            Sentence::Syllogistic { subject, predicate, .. } => vec![subject.noun, predicate.noun],
            Sentence::Relational { subject, object, .. } => vec![subject.noun, object.noun],
            Sentence::Relative { head, rel, predicate, .. } => vec![head, rel.noun, predicate.noun],
        }
    }

    pub fn verb(&self) -> Option<Verb> {
        match *self {
            Sentence::Relational { verb, .. } => Some(verb),
            _ => None,
        }
    }

    /// Applies index maps to every noun and verb (used to lexicalize abstract instances).
    pub fn map_symbols(&self, noun: impl Fn(Noun) -> Noun, verb: impl Fn(Verb) -> Verb) -> Sentence {
        let lit = |l: Literal| Literal { noun: noun(l.noun), ..l };
        match *self {
            Sentence::Syllogistic { q, subject, predicate } => {
                Sentence::Syllogistic { q, subject: lit(subject), predicate: lit(predicate) }
            }
            Sentence::Relational { sq, subject, oq, object, verb: v, verb_positive } => Sentence::Relational {
                sq,
                subject: lit(subject),
                oq,
                object: lit(object),
                verb: verb(v),
                verb_positive,
            },
            Sentence::Relative { q, head, rel, predicate } => {
                Sentence::Relative { q, head: noun(head), rel: lit(rel), predicate: lit(predicate) }
            }
        }
    }

    /// The least fragment containing this sentence.
    pub fn fragment(&self) -> Fragment {
        match *self {
            Sentence::Syllogistic { subject, .. } => {
                if subject.positive {
                    Fragment::S
                } else {
                    Fragment::SDag
                }
            }
            Sentence::Relational { subject, object, .. } => {
                if subject.positive && object.positive {
                    Fragment::R
                } else {
                    Fragment::RDag
                }
            }
            Sentence::Relative { rel, .. } => {
                if rel.positive {
                    Fragment::SRel
                } else {
                    Fragment::SRelNeg
                }
            }
        }
    }

    /// The sentence whose translation is equivalent to the negation of this one's.
    pub fn negate(&self) -> Sentence {
        match *self {
            Sentence::Syllogistic { q, subject, predicate } => {
                Sentence::Syllogistic { q: q.flip(), subject, predicate: predicate.complement() }
            }
            Sentence::Relational { sq, subject, oq, object, verb, verb_positive } => Sentence::Relational {
                sq: sq.flip(),
                subject,
                oq: oq.flip(),
                object,
                verb,
                verb_positive: !verb_positive,
            },
            Sentence::Relative { q, head, rel, predicate } => {
                Sentence::Relative { q: q.flip(), head, rel, predicate: predicate.complement() }
            }
        }
    }

    /// True iff an existential sentence asserts a complementary pair of unary
    /// literals of one element, e.g. "Some p is not a p".
    pub fn is_self_inconsistent(&self) -> bool {
        match *self {
            Sentence::Syllogistic { q: Quant::Existential, subject, predicate } => subject.clashes_with(predicate),
            Sentence::Relative { q: Quant::Existential, head, rel, predicate } => {
                let h = Literal { noun: head, positive: true };
                h.clashes_with(rel) || h.clashes_with(predicate) || rel.clashes_with(predicate)
            }
            _ => false,
        }
    }

    /// Canonical term syntax, e.g. `rel(all,+artist,exists,+beekeeper,+chase)`.
    pub fn to_term(&self, vocab: &Vocabulary) -> Result<String, TermError> {
        let noun = |n: Noun| vocab.noun(n.index()).ok_or(TermError::UnknownNoun(n.0));
        let lit = |l: Literal| -> Result<String, TermError> {
            Ok(format!("{}{}", if l.positive { '+' } else { '-' }, noun(l.noun)?))
        };
        Ok(match *self {
            Sentence::Syllogistic { q, subject, predicate } => {
                format!("{}({},{})", q.term(), lit(subject)?, lit(predicate)?)
            }
            Sentence::Relational { sq, subject, oq, object, verb, verb_positive } => {
                let v = vocab.verb(verb.index()).ok_or(TermError::UnknownVerb(verb.0))?;
                format!(
                    "rel({},{},{},{},{}{})",
                    sq.term(),
                    lit(subject)?,
                    oq.term(),
                    lit(object)?,
                    if verb_positive { '+' } else { '-' },
                    v.infinitive
                )
            }
            Sentence::Relative { q, head, rel, predicate } => {
                format!("relcl({},{},{},{})", q.term(), noun(head)?, lit(rel)?, lit(predicate)?)
            }
        })
    }

    /// Inverse of [`Sentence::to_term`].
    pub fn parse_term(term: &str, vocab: &Vocabulary) -> Result<Sentence, TermError> {
        let bad = || TermError::Malformed(term.to_string());
        let term = term.trim();
        let open = term.find('(').ok_or_else(bad)?;
        if !term.ends_with(')') {
            return Err(bad());
        }
        let head = &term[..open];
        let args: Vec<&str> = term[open + 1..term.len() - 1].split(',').map(str::trim).collect();
        let quant = |s: &str| match s {
            "all" => Ok(Quant::Universal),
            "exists" | "some" => Ok(Quant::Existential),
            _ => Err(bad()),
        };
        let signed = |s: &str| -> Result<(bool, String), TermError> {
            let (sign, word) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
            match sign {
                "+" => Ok((true, word.to_string())),
                "-" => Ok((false, word.to_string())),
                _ => Err(bad()),
            }
        };
        let noun = |w: &str| {
            vocab.noun_index(w).map(|i| i as u32).ok_or_else(|| TermError::UnknownWord(w.to_string()))
        };
        let lit = |s: &str| -> Result<Literal, TermError> {
            let (positive, w) = signed(s)?;
            Ok(Literal::new(noun(&w)?, positive))
        };
        match (head, args.as_slice()) {
            ("all", [a, b]) => Ok(Sentence::all(lit(a)?, lit(b)?)),
            ("exists" | "some", [a, b]) => Ok(Sentence::some(lit(a)?, lit(b)?)),
            ("rel", [sq, a, oq, b, v]) => {
                let (vp, w) = signed(v)?;
                let verb = vocab.verb_by_infinitive(&w).ok_or(TermError::UnknownWord(w))? as u32;
                Ok(Sentence::rel(quant(sq)?, lit(a)?, quant(oq)?, lit(b)?, verb, vp))
            }
            ("relcl", [q, h, a, b]) => Ok(Sentence::relcl(quant(q)?, noun(h)?, lit(a)?, lit(b)?)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("malformed sentence term `{0}`")]
    Malformed(String),
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("noun index {0} outside the vocabulary")]
    UnknownNoun(u32),
    #[error("verb index {0} outside the vocabulary")]
    UnknownVerb(u32),
}

/// The six fragments, partially ordered by inclusion:
/// `S ⊆ S† ⊆ R†`, `S ⊆ R ⊆ R†`, `Srel ⊆ SrelN`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Fragment {
    #[serde(rename = "s")]
    S,
    #[serde(rename = "sdag")]
    SDag,
    #[serde(rename = "r")]
    R,
    #[serde(rename = "rdag")]
    RDag,
    #[serde(rename = "srel")]
    SRel,
    #[serde(rename = "srelneg")]
    SRelNeg,
}

impl Fragment {
    pub const ALL: [Fragment; 6] =
        [Fragment::S, Fragment::SDag, Fragment::R, Fragment::RDag, Fragment::SRel, Fragment::SRelNeg];

    /// `self ⊆ other` in the inclusion order.
    pub fn is_subset_of(self, other: Fragment) -> bool {
        use Fragment::*;
        self == other
            || matches!(
                (self, other),
                (S, SDag) | (S, R) | (S, RDag) | (SDag, RDag) | (R, RDag) | (SRel, SRelNeg)
            )
    }

    pub fn contains(self, s: &Sentence) -> bool {
        s.fragment().is_subset_of(self)
    }

    pub fn tag(self) -> &'static str {
        match self {
            Fragment::S => "s",
            Fragment::SDag => "sdag",
            Fragment::R => "r",
            Fragment::RDag => "rdag",
            Fragment::SRel => "srel",
            Fragment::SRelNeg => "srelneg",
        }
    }

    /// Stable small integer used in seed derivation.
    pub fn id(self) -> u64 {
        Fragment::ALL.iter().position(|f| *f == self).unwrap() as u64
    }

    pub fn is_relational(self) -> bool {
        matches!(self, Fragment::R | Fragment::RDag)
    }

    pub fn has_relative_clauses(self) -> bool {
        matches!(self, Fragment::SRel | Fragment::SRelNeg)
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Fragment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "s" => Ok(Fragment::S),
            "sdag" | "s+" => Ok(Fragment::SDag),
            "r" => Ok(Fragment::R),
            "rdag" | "r+" => Ok(Fragment::RDag),
            "srel" => Ok(Fragment::SRel),
            "srelneg" | "sreln" => Ok(Fragment::SRelNeg),
            other => Err(format!("unknown fragment `{other}`")),
        }
    }
}
