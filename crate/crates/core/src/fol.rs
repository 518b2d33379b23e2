//! First-order translation and TPTP FOF export.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::syntax::{Literal, Noun, Quant, Sentence, Verb};
use crate::vocab::Vocabulary;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Unary(Noun, Var),
    Binary(Verb, Var, Var),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

/// A finite structure over domain `0..domain_size()`.
pub trait Interpretation {
    fn domain_size(&self) -> usize;
    fn unary(&self, noun: Noun, e: usize) -> bool;
    fn binary(&self, verb: Verb, a: usize, b: usize) -> bool;
}

impl Formula {
    fn signed(atom: Formula, positive: bool) -> Formula {
        if positive {
            atom
        } else {
            Formula::Not(Box::new(atom))
        }
    }

    fn lit(l: Literal, v: Var) -> Formula {
        Self::signed(Formula::Unary(l.noun, v), l.positive)
    }

    fn quantified(q: Quant, v: Var, guard: Formula, body: Formula) -> Formula {
        match q {
            Quant::Universal => Formula::Forall(v, Box::new(Formula::Implies(Box::new(guard), Box::new(body)))),
            Quant::Existential => Formula::Exists(v, Box::new(Formula::And(vec![guard, body]))),
        }
    }

    /// Truth in `m` under the assignment `(x, y)`.
    pub fn eval(&self, m: &impl Interpretation, env: [usize; 2]) -> bool {
        let get = |v: Var| match v {
            Var::X => env[0],
            Var::Y => env[1],
        };
        let with = |v: Var, e: usize| match v {
            Var::X => [e, env[1]],
            Var::Y => [env[0], e],
        };
        match self {
            Formula::Unary(n, v) => m.unary(*n, get(*v)),
            Formula::Binary(r, a, b) => m.binary(*r, get(*a), get(*b)),
            Formula::Not(f) => !f.eval(m, env),
            Formula::And(fs) => fs.iter().all(|f| f.eval(m, env)),
            Formula::Implies(a, b) => !a.eval(m, env) || b.eval(m, env),
            Formula::Forall(v, f) => (0..m.domain_size()).all(|e| f.eval(m, with(*v, e))),
            Formula::Exists(v, f) => (0..m.domain_size()).any(|e| f.eval(m, with(*v, e))),
        }
    }

    /// Evaluates a closed formula.
    pub fn holds_in(&self, m: &impl Interpretation) -> bool {
        self.eval(m, [0, 0])
    }

    /// Renders TPTP FOF syntax with symbol names supplied by `names`.
    pub fn to_tptp(&self, names: &Names<'_>) -> String {
        let mut out = String::new();
        self.write_tptp(names, &mut out, false);
        out
    }

    fn write_tptp(&self, names: &Names<'_>, out: &mut String, operand: bool) {
        match self {
            Formula::Unary(n, v) => {
                let _ = write!(out, "{}({v})", names.noun(*n));
            }
            Formula::Binary(r, a, b) => {
                let _ = write!(out, "{}({a},{b})", names.verb(*r));
            }
            Formula::Not(f) => {
                out.push('~');
                f.write_tptp(names, out, true);
            }
            Formula::And(fs) => {
                out.push('(');
                for (i, f) in fs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" & ");
                    }
                    f.write_tptp(names, out, true);
                }
                out.push(')');
            }
            Formula::Implies(a, b) => {
                out.push('(');
                a.write_tptp(names, out, true);
                out.push_str(" => ");
                b.write_tptp(names, out, true);
                out.push(')');
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                if operand {
                    out.push('(');
                }
                out.push(if matches!(self, Formula::Forall(..)) { '!' } else { '?' });
                let _ = write!(out, "[{v}]: ");
                f.write_tptp(names, out, false);
                if operand {
                    out.push(')');
                }
            }
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "X",
            Var::Y => "Y",
        })
    }
}

/// First-order translation of a sentence.
pub fn translate(s: &Sentence) -> Formula {
    match *s {
        Sentence::Syllogistic { q, subject, predicate } => {
            Formula::quantified(q, Var::X, Formula::lit(subject, Var::X), Formula::lit(predicate, Var::X))
        }
        Sentence::Relational { sq, subject, oq, object, verb, verb_positive } => {
            let inner = Formula::quantified(
                oq,
                Var::Y,
                Formula::lit(object, Var::Y),
                Formula::signed(Formula::Binary(verb, Var::X, Var::Y), verb_positive),
            );
            Formula::quantified(sq, Var::X, Formula::lit(subject, Var::X), inner)
        }
        Sentence::Relative { q, head, rel, predicate } => {
            let head = Formula::Unary(head, Var::X);
            let rel = Formula::lit(rel, Var::X);
            let pred = Formula::lit(predicate, Var::X);
            match q {
                Quant::Universal => Formula::Forall(
                    Var::X,
                    Box::new(Formula::Implies(Box::new(Formula::And(vec![head, rel])), Box::new(pred))),
                ),
                Quant::Existential => Formula::Exists(Var::X, Box::new(Formula::And(vec![head, rel, pred]))),
            }
        }
    }
}

/// Symbol naming for export: vocabulary words, or `n<i>`/`v<i>` for abstract instances.
#[derive(Clone, Copy, Debug)]
pub enum Names<'a> {
    Abstract,
    Vocab(&'a Vocabulary),
}

impl Names<'_> {
    pub fn noun(&self, n: Noun) -> String {
        match self {
            Names::Vocab(v) => match v.noun(n.index()) {
                Some(w) => tptp_word(w),
                None => format!("n{}", n.0),
            },
            Names::Abstract => format!("n{}", n.0),
        }
    }

    pub fn verb(&self, r: Verb) -> String {
        match self {
            Names::Vocab(v) => match v.verb(r.index()) {
                Some(w) => tptp_word(&w.infinitive),
                None => format!("v{}", r.0),
            },
            Names::Abstract => format!("v{}", r.0),
        }
    }
}

/// Hyphens are not legal in TPTP lower words; vocabulary words never contain `_`.
fn tptp_word(w: &str) -> String {
    w.replace('-', "_")
}

/// The axiom name of the `i`-th (0-based) sentence.
pub fn axiom_name(prefix: &str, i: usize) -> String {
    format!("{prefix}{}", i + 1)
}

/// One `fof(<prefix><i>, axiom, ...)` line per sentence, numbered from 1.
pub fn to_tptp(sentences: &[Sentence], names: Names<'_>, prefix: Option<&str>) -> String {
    let prefix = prefix.unwrap_or("s");
    let mut out = String::new();
    for (i, s) in sentences.iter().enumerate() {
        let _ = writeln!(out, "fof({}, axiom, {}).", axiom_name(prefix, i), translate(s).to_tptp(&names));
    }
    out
}

/// Parsed FOF formula with symbolic names, as produced by [`read_fof`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FofTree {
    Atom(String, Vec<String>),
    Not(Box<FofTree>),
    And(Vec<FofTree>),
    Or(Vec<FofTree>),
    Implies(Box<FofTree>, Box<FofTree>),
    Forall(Vec<String>, Box<FofTree>),
    Exists(Vec<String>, Box<FofTree>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FofStatement {
    pub name: String,
    pub role: String,
    pub formula: FofTree,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("FOF syntax error at byte {offset}: {message}")]
pub struct FofError {
    pub offset: usize,
    pub message: String,
}

impl Formula {
    /// Converts into the symbolic tree the FOF reader produces, for comparison.
    pub fn to_fof_tree(&self, names: &Names<'_>) -> FofTree {
        match self {
            Formula::Unary(n, v) => FofTree::Atom(names.noun(*n), vec![v.to_string()]),
            Formula::Binary(r, a, b) => FofTree::Atom(names.verb(*r), vec![a.to_string(), b.to_string()]),
            Formula::Not(f) => FofTree::Not(Box::new(f.to_fof_tree(names))),
            Formula::And(fs) => FofTree::And(fs.iter().map(|f| f.to_fof_tree(names)).collect()),
            Formula::Implies(a, b) => {
                FofTree::Implies(Box::new(a.to_fof_tree(names)), Box::new(b.to_fof_tree(names)))
            }
            Formula::Forall(v, f) => FofTree::Forall(vec![v.to_string()], Box::new(f.to_fof_tree(names))),
            Formula::Exists(v, f) => FofTree::Exists(vec![v.to_string()], Box::new(f.to_fof_tree(names))),
        }
    }
}

/// A minimal reader for the FOF subset used here: `fof(name, role, formula).`
/// statements with `~ & | => ! ?`, `%` comments and blank lines.
pub fn read_fof(text: &str) -> Result<Vec<FofStatement>, FofError> {
    let mut p = FofParser { src: text.as_bytes(), pos: 0 };
    let mut out = Vec::new();
    loop {
        p.skip_ws();
        if p.pos >= p.src.len() {
            return Ok(out);
        }
        p.keyword("fof")?;
        p.expect(b'(')?;
        let name = p.word()?;
        p.expect(b',')?;
        let role = p.word()?;
        p.expect(b',')?;
        let formula = p.formula()?;
        p.expect(b')')?;
        p.expect(b'.')?;
        out.push(FofStatement { name, role, formula });
    }
}

struct FofParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl FofParser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, FofError> {
        Err(FofError { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b' ' | b'\t' | b'\n' | b'\r' => self.pos += 1,
                b'%' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), FofError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), FofError> {
        if self.word()? == kw {
            Ok(())
        } else {
            self.err(format!("expected `{kw}`"))
        }
    }

    fn word(&mut self) -> Result<String, FofError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a word");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    /// `unit (op unit)*` where a chain of one associative operator is flattened.
    fn formula(&mut self) -> Result<FofTree, FofError> {
        let first = self.unit()?;
        if self.eat_str("=>") {
            let rhs = self.unit()?;
            return Ok(FofTree::Implies(Box::new(first), Box::new(rhs)));
        }
        for (op, is_and) in [(b'&', true), (b'|', false)] {
            if self.peek() == Some(op) {
                let mut parts = vec![first];
                while self.peek() == Some(op) {
                    self.pos += 1;
                    parts.push(self.unit()?);
                }
                return Ok(if is_and { FofTree::And(parts) } else { FofTree::Or(parts) });
            }
        }
        Ok(first)
    }

    fn unit(&mut self) -> Result<FofTree, FofError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(b')')?;
                Ok(f)
            }
            Some(b'~') => {
                self.pos += 1;
                Ok(FofTree::Not(Box::new(self.unit()?)))
            }
            Some(q @ (b'!' | b'?')) => {
                self.pos += 1;
                self.expect(b'[')?;
                let mut vars = vec![self.word()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    vars.push(self.word()?);
                }
                self.expect(b']')?;
                self.expect(b':')?;
                let body = Box::new(self.unit()?);
                Ok(if q == b'!' { FofTree::Forall(vars, body) } else { FofTree::Exists(vars, body) })
            }
            Some(c) if c.is_ascii_lowercase() => {
                let name = self.word()?;
                let mut args = Vec::new();
                if self.peek() == Some(b'(') {
                    self.pos += 1;
                    args.push(self.word()?);
                    while self.peek() == Some(b',') {
                        self.pos += 1;
                        args.push(self.word()?);
                    }
                    self.expect(b')')?;
                }
                Ok(FofTree::Atom(name, args))
            }
            _ => self.err("expected a formula"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::tests::arb_sentence;
    use proptest::prelude::*;
    use Quant::*;

    fn vocab() -> Vocabulary {
        Vocabulary::load("[nouns]\nartist\nbeekeeper\np\nq\n[verbs]\nhates/hate\nrs/r\n").unwrap()
    }

    #[test]
    fn translates_displayed_example() {
        // "Some artist hates no beekeeper"
        let s = Sentence::rel(Existential, Literal::pos(0), Universal, Literal::pos(1), 0, false);
        let expected = Formula::Exists(
            Var::X,
            Box::new(Formula::And(vec![
                Formula::Unary(Noun(0), Var::X),
                Formula::Forall(
                    Var::Y,
                    Box::new(Formula::Implies(
                        Box::new(Formula::Unary(Noun(1), Var::Y)),
                        Box::new(Formula::Not(Box::new(Formula::Binary(Verb(0), Var::X, Var::Y)))),
                    )),
                ),
            ])),
        );
        assert_eq!(translate(&s), expected);
        let v = vocab();
        assert_eq!(
            translate(&s).to_tptp(&Names::Vocab(&v)),
            "?[X]: (artist(X) & (![Y]: (beekeeper(Y) => ~hate(X,Y))))"
        );
    }

    #[test]
    fn translates_negated_subject_and_relative() {
        let v = vocab();
        let f = translate(&Sentence::all(Literal::neg(2), Literal::pos(3)));
        assert_eq!(f.to_tptp(&Names::Vocab(&v)), "![X]: (~p(X) => q(X))");
        let f = translate(&Sentence::relcl(Existential, 0, Literal::pos(2), Literal::neg(3)));
        assert_eq!(f.to_tptp(&Names::Vocab(&v)), "?[X]: (artist(X) & p(X) & ~q(X))");
        let f = translate(&Sentence::relcl(Universal, 0, Literal::neg(2), Literal::pos(3)));
        assert_eq!(f.to_tptp(&Names::Vocab(&v)), "![X]: ((artist(X) & ~p(X)) => q(X))");
    }

    #[test]
    fn tptp_documents() {
        let v = vocab();
        assert_eq!(
            to_tptp(&[Sentence::all(Literal::pos(0), Literal::pos(1))], Names::Vocab(&v), None),
            "fof(s1, axiom, ![X]: (artist(X) => beekeeper(X))).\n"
        );
        assert_eq!(
            to_tptp(
                &[Sentence::rel(Universal, Literal::pos(2), Universal, Literal::pos(3), 1, false)],
                Names::Vocab(&v),
                None
            ),
            "fof(s1, axiom, ![X]: (p(X) => (![Y]: (q(Y) => ~r(X,Y))))).\n"
        );
        assert_eq!(to_tptp(&[], Names::Vocab(&v), None), "");
        assert_eq!(
            to_tptp(&[Sentence::some(Literal::pos(0), Literal::pos(1))], Names::Abstract, Some("ax")),
            "fof(ax1, axiom, ?[X]: (n0(X) & n1(X))).\n"
        );
    }

    #[test]
    fn hyphenated_words_become_legal_symbols() {
        let v = Vocabulary::load("[nouns]\nsea-lion\nbee\n").unwrap();
        let doc = to_tptp(&[Sentence::all(Literal::pos(0), Literal::pos(1))], Names::Vocab(&v), None);
        assert!(doc.contains("sea_lion(X)"));
        assert!(read_fof(&doc).is_ok());
    }

    #[test]
    fn reader_rejects_garbage() {
        assert!(read_fof("fof(a, axiom, p(X)").is_err());
        assert!(read_fof("cnf(a, axiom, p).").is_err());
        assert_eq!(read_fof("% only a comment\n").unwrap(), vec![]);
    }

    proptest! {
        #[test]
        fn export_reads_back_as_the_translation(ss in proptest::collection::vec(arb_sentence(4, 2), 0..6)) {
            let v = vocab();
            let doc = to_tptp(&ss, Names::Vocab(&v), None);
            let stmts = read_fof(&doc).unwrap();
            prop_assert_eq!(stmts.len(), ss.len());
            for (i, (stmt, s)) in stmts.iter().zip(&ss).enumerate() {
                prop_assert_eq!(&stmt.name, &format!("s{}", i + 1));
                prop_assert_eq!(stmt.role.as_str(), "axiom");
                prop_assert_eq!(&stmt.formula, &translate(s).to_fof_tree(&Names::Vocab(&v)));
            }
        }
    }
}
