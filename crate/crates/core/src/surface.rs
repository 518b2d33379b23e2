//! English realization and parsing of sentences.
//!
//! The relational templates are fixed by a bijection between the eight
//! logical forms and eight surface forms:
//!
//! | subj q | obj q | verb | template                          |
//! |--------|-------|------|-----------------------------------|
//! | ∀      | ∀     | +    | Every p VERBs every q             |
//! | ∀      | ∃     | +    | Every p VERBs some q              |
//! | ∃      | ∀     | +    | Some p VERBs every q              |
//! | ∃      | ∃     | +    | Some p VERBs some q               |
//! | ∀      | ∀     | −    | No p VERBs any q                  |
//! | ∀      | ∃     | −    | No p VERBs every q                |
//! | ∃      | ∀     | −    | Some p does not VERB any q        |
//! | ∃      | ∃     | −    | Some p does not VERB every q      |
//!
//! "No p rs every q" reads `¬∃x(p ∧ ∀y(q → r))`, i.e. `∀x(p → ∃y(q ∧ ¬r))`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::syntax::{Literal, Noun, Quant, Sentence, Verb};
use crate::vocab::Vocabulary;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("no template matches (at token {position})")]
    NotInFragment { position: usize },
}

fn article(word: &str) -> &'static str {
    if word.starts_with(['a', 'e', 'i', 'o', 'u']) {
        "an"
    } else {
        "a"
    }
}

struct Words<'v> {
    vocab: &'v Vocabulary,
}

impl Words<'_> {
    fn noun(&self, n: Noun) -> Result<&str, SurfaceError> {
        self.vocab.noun(n.index()).ok_or_else(|| SurfaceError::UnknownWord(format!("noun #{}", n.0)))
    }

    fn literal(&self, l: Literal) -> Result<String, SurfaceError> {
        let w = self.noun(l.noun)?;
        Ok(if l.positive { w.to_string() } else { format!("non-{w}") })
    }

    fn verb(&self, v: Verb) -> Result<(&str, &str), SurfaceError> {
        self.vocab
            .verb(v.index())
            .map(|f| (f.third.as_str(), f.infinitive.as_str()))
            .ok_or_else(|| SurfaceError::UnknownWord(format!("verb #{}", v.0)))
    }
}

/// Renders one sentence as English, ending in a full stop.
pub fn realize(s: &Sentence, vocab: &Vocabulary) -> Result<String, SurfaceError> {
    use Quant::*;
    let w = Words { vocab };
    let text = match *s {
        Sentence::Syllogistic { q, subject, predicate } => {
            let subj = w.literal(subject)?;
            let pred = w.noun(predicate.noun)?;
            let a = article(pred);
            match (q, predicate.positive) {
                (Universal, true) => format!("Every {subj} is {a} {pred}."),
                (Universal, false) => format!("No {subj} is {a} {pred}."),
                (Existential, true) => format!("Some {subj} is {a} {pred}."),
                (Existential, false) => format!("Some {subj} is not {a} {pred}."),
            }
        }
        Sentence::Relational { sq, subject, oq, object, verb, verb_positive } => {
            let subj = w.literal(subject)?;
            let obj = w.literal(object)?;
            let (third, inf) = w.verb(verb)?;
            match (sq, oq, verb_positive) {
                (Universal, Universal, true) => format!("Every {subj} {third} every {obj}."),
                (Universal, Existential, true) => format!("Every {subj} {third} some {obj}."),
                (Existential, Universal, true) => format!("Some {subj} {third} every {obj}."),
                (Existential, Existential, true) => format!("Some {subj} {third} some {obj}."),
                (Universal, Universal, false) => format!("No {subj} {third} any {obj}."),
                (Universal, Existential, false) => format!("No {subj} {third} every {obj}."),
                (Existential, Universal, false) => format!("Some {subj} does not {inf} any {obj}."),
                (Existential, Existential, false) => format!("Some {subj} does not {inf} every {obj}."),
            }
        }
        Sentence::Relative { q, head, rel, predicate } => {
            let head = w.noun(head)?;
            let rel_noun = w.noun(rel.noun)?;
            let clause = if rel.positive {
                format!("who is {} {rel_noun}", article(rel_noun))
            } else {
                format!("who is not {} {rel_noun}", article(rel_noun))
            };
            let pred = w.noun(predicate.noun)?;
            let a = article(pred);
            match (q, predicate.positive) {
                (Universal, true) => format!("Every {head} {clause} is {a} {pred}."),
                (Universal, false) => format!("No {head} {clause} is {a} {pred}."),
                (Existential, true) => format!("Some {head} {clause} is {a} {pred}."),
                (Existential, false) => format!("Some {head} {clause} is not {a} {pred}."),
            }
        }
    };
    Ok(text)
}

/// One realized sentence per line; empty input gives an empty string.
pub fn realize_instance(sentences: &[Sentence], vocab: &Vocabulary) -> Result<String, SurfaceError> {
    let lines = sentences.iter().map(|s| realize(s, vocab)).collect::<Result<Vec<_>, _>>()?;
    Ok(lines.join("\n"))
}

/// Parses a block produced by [`realize_instance`].
pub fn parse_instance(text: &str, vocab: &Vocabulary) -> Result<Vec<Sentence>, SurfaceError> {
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| parse(l, vocab)).collect()
}

struct Cursor<'a, 'v> {
    tokens: Vec<&'a str>,
    pos: usize,
    vocab: &'v Vocabulary,
}

impl<'a> Cursor<'a, '_> {
    fn fail(&self) -> SurfaceError {
        SurfaceError::NotInFragment { position: self.pos }
    }

    fn peek(&self) -> Option<&'a str> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self) -> Result<&'a str, SurfaceError> {
        let t = self.peek().ok_or_else(|| self.fail())?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, word: &str) -> Result<(), SurfaceError> {
        if self.peek() == Some(word) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.fail())
        }
    }

    fn eat(&mut self, word: &str) -> bool {
        if self.peek() == Some(word) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn article(&mut self) -> Result<(), SurfaceError> {
        if self.eat("a") || self.eat("an") {
            Ok(())
        } else {
            Err(self.fail())
        }
    }

    fn noun(&mut self) -> Result<Noun, SurfaceError> {
        let t = self.next()?;
        self.vocab
            .noun_index(t)
            .map(|i| Noun(i as u32))
            .ok_or_else(|| SurfaceError::UnknownWord(t.to_string()))
    }

    /// A noun optionally carrying the `non-` prefix.
    fn literal(&mut self) -> Result<Literal, SurfaceError> {
        let t = self.next()?;
        if let Some(i) = self.vocab.noun_index(t) {
            return Ok(Literal::new(i as u32, true));
        }
        if let Some(i) = t.strip_prefix("non-").and_then(|rest| self.vocab.noun_index(rest)) {
            return Ok(Literal::new(i as u32, false));
        }
        Err(SurfaceError::UnknownWord(t.to_string()))
    }

    fn finish(&self) -> Result<(), SurfaceError> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(self.fail())
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Det {
    Every,
    Some,
    No,
}

/// Parses one English sentence. Accepts `a`/`an` interchangeably and both
/// "who is not a p" and "who is a not p" for negative relative clauses.
pub fn parse(text: &str, vocab: &Vocabulary) -> Result<Sentence, SurfaceError> {
    use Quant::*;
    let body = text.trim();
    let body = body.strip_suffix('.').unwrap_or(body);
    let mut c = Cursor { tokens: body.split_whitespace().collect(), pos: 0, vocab };
    let det = match c.next()?.to_ascii_lowercase().as_str() {
        "every" => Det::Every,
        "some" => Det::Some,
        "no" => Det::No,
        _ => return Err(SurfaceError::NotInFragment { position: 0 }),
    };
    let subject = c.literal()?;
    let verb_pos = c.pos;
    let word = c.next()?;
    let sentence = match word {
        "is" => {
            let (q, positive) = copula(&mut c, det)?;
            let pred = c.noun()?;
            Sentence::syl(q, subject, Literal { noun: pred, positive })
        }
        "who" => {
            if !subject.positive {
                c.pos = verb_pos - 1;
                return Err(c.fail());
            }
            c.expect("is")?;
            let mut rel_positive = !c.eat("not");
            c.article()?;
            if rel_positive && c.eat("not") {
                rel_positive = false;
            }
            let rel = c.noun()?;
            c.expect("is")?;
            let (q, positive) = copula(&mut c, det)?;
            let pred = c.noun()?;
            Sentence::Relative {
                q,
                head: subject.noun,
                rel: Literal { noun: rel, positive: rel_positive },
                predicate: Literal { noun: pred, positive },
            }
        }
        "does" => {
            if det != Det::Some {
                c.pos = verb_pos;
                return Err(c.fail());
            }
            c.expect("not")?;
            let inf = c.next()?;
            let verb = vocab.verb_by_infinitive(inf).ok_or_else(|| SurfaceError::UnknownWord(inf.to_string()))?;
            let oq = match c.next()? {
                "any" => Universal,
                "every" => Existential,
                _ => {
                    c.pos -= 1;
                    return Err(c.fail());
                }
            };
            let object = c.literal()?;
            Sentence::rel(Existential, subject, oq, object, verb as u32, false)
        }
        third => {
            let verb =
                vocab.verb_by_third(third).ok_or_else(|| SurfaceError::UnknownWord(third.to_string()))?;
            let obj_pos = c.pos;
            let (sq, oq, positive) = match (det, c.next()?) {
                (Det::Every, "every") => (Universal, Universal, true),
                (Det::Every, "some") => (Universal, Existential, true),
                (Det::Some, "every") => (Existential, Universal, true),
                (Det::Some, "some") => (Existential, Existential, true),
                (Det::No, "any") => (Universal, Universal, false),
                (Det::No, "every") => (Universal, Existential, false),
                _ => return Err(SurfaceError::NotInFragment { position: obj_pos }),
            };
            let object = c.literal()?;
            Sentence::rel(sq, subject, oq, object, verb as u32, positive)
        }
    };
    c.finish()?;
    Ok(sentence)
}

/// Consumes `[not] a|an` after a copula and maps the determiner onto a quantifier and polarity.
fn copula(c: &mut Cursor<'_, '_>, det: Det) -> Result<(Quant, bool), SurfaceError> {
    let at = c.pos;
    let negated = c.eat("not");
    c.article()?;
    match (det, negated) {
        (Det::Every, false) => Ok((Quant::Universal, true)),
        (Det::No, false) => Ok((Quant::Universal, false)),
        (Det::Some, false) => Ok((Quant::Existential, true)),
        (Det::Some, true) => Ok((Quant::Existential, false)),
        _ => Err(SurfaceError::NotInFragment { position: at }),
    }
}

/// The template ↔ normal-form mapping as a markdown table.
pub fn grammar_markdown() -> String {
    let rows: &[(&str, &str, &str, &str)] = &[
        ("S", "Every p is a q.", "all(+p,+q)", "∀x(p(x) → q(x))"),
        ("S", "No p is a q.", "all(+p,-q)", "∀x(p(x) → ¬q(x))"),
        ("S", "Some p is a q.", "exists(+p,+q)", "∃x(p(x) ∧ q(x))"),
        ("S", "Some p is not a q.", "exists(+p,-q)", "∃x(p(x) ∧ ¬q(x))"),
        ("S†", "Every non-p is a q.", "all(-p,+q)", "∀x(¬p(x) → q(x))"),
        ("S†", "No non-p is a q.", "all(-p,-q)", "∀x(¬p(x) → ¬q(x))"),
        ("S†", "Some non-p is a q.", "exists(-p,+q)", "∃x(¬p(x) ∧ q(x))"),
        ("S†", "Some non-p is not a q.", "exists(-p,-q)", "∃x(¬p(x) ∧ ¬q(x))"),
        ("R", "Every p rs every q.", "rel(all,+p,all,+q,+r)", "∀x(p(x) → ∀y(q(y) → r(x,y)))"),
        ("R", "Every p rs some q.", "rel(all,+p,exists,+q,+r)", "∀x(p(x) → ∃y(q(y) ∧ r(x,y)))"),
        ("R", "Some p rs every q.", "rel(exists,+p,all,+q,+r)", "∃x(p(x) ∧ ∀y(q(y) → r(x,y)))"),
        ("R", "Some p rs some q.", "rel(exists,+p,exists,+q,+r)", "∃x(p(x) ∧ ∃y(q(y) ∧ r(x,y)))"),
        ("R", "No p rs any q.", "rel(all,+p,all,+q,-r)", "∀x(p(x) → ∀y(q(y) → ¬r(x,y)))"),
        ("R", "No p rs every q.", "rel(all,+p,exists,+q,-r)", "∀x(p(x) → ∃y(q(y) ∧ ¬r(x,y)))"),
        ("R", "Some p does not r any q.", "rel(exists,+p,all,+q,-r)", "∃x(p(x) ∧ ∀y(q(y) → ¬r(x,y)))"),
        ("R", "Some p does not r every q.", "rel(exists,+p,exists,+q,-r)", "∃x(p(x) ∧ ∃y(q(y) ∧ ¬r(x,y)))"),
        ("R†", "(as R, with non-p and/or non-q)", "rel(.., -p, .., -q, ..)", "¬p(x) / ¬q(y) in place of p(x) / q(y)"),
        ("Srel", "Every o who is a p is a q.", "relcl(all,o,+p,+q)", "∀x((o(x) ∧ p(x)) → q(x))"),
        ("Srel", "No o who is a p is a q.", "relcl(all,o,+p,-q)", "∀x((o(x) ∧ p(x)) → ¬q(x))"),
        ("Srel", "Some o who is a p is a q.", "relcl(exists,o,+p,+q)", "∃x(o(x) ∧ p(x) ∧ q(x))"),
        ("Srel", "Some o who is a p is not a q.", "relcl(exists,o,+p,-q)", "∃x(o(x) ∧ p(x) ∧ ¬q(x))"),
        ("SrelN", "Every o who is not a p is a q.", "relcl(all,o,-p,+q)", "∀x((o(x) ∧ ¬p(x)) → q(x))"),
        ("SrelN", "No o who is not a p is a q.", "relcl(all,o,-p,-q)", "∀x((o(x) ∧ ¬p(x)) → ¬q(x))"),
        ("SrelN", "Some o who is not a p is a q.", "relcl(exists,o,-p,+q)", "∃x(o(x) ∧ ¬p(x) ∧ q(x))"),
        ("SrelN", "Some o who is not a p is not a q.", "relcl(exists,o,-p,-q)", "∃x(o(x) ∧ ¬p(x) ∧ ¬q(x))"),
    ];
    let mut out = String::from("| fragment | template | term | first-order form |\n|---|---|---|---|\n");
    for (frag, template, term, fol) in rows {
        let _ = writeln!(out, "| {frag} | {template} | `{term}` | {fol} |");
    }
    out.push_str(
        "\n`a` becomes `an` before a vowel. On input, \"who is a not p\" is accepted as a spelling of \"who is not a p\".\n",
    );
    out
}
