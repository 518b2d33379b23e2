//! Brute-force finite model search, used as a testing oracle.
//!
//! Models are enumerated by domain size, then by the (sorted) sequence of
//! element types, then by the bits of every verb's relation. Sorting the
//! element types loses no models up to isomorphism.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use super::Verdict;
use crate::fol::Interpretation;
use crate::syntax::{Literal, Noun, Quant, Sentence, Verb};

/// An explicit finite structure. Symbols absent from the maps are empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Model {
    size: usize,
    unary: BTreeMap<Noun, Vec<bool>>,
    /// Row-major `size × size` matrices.
    binary: BTreeMap<Verb, Vec<bool>>,
}

impl Model {
    pub fn new(size: usize, unary: BTreeMap<Noun, Vec<bool>>, binary: BTreeMap<Verb, Vec<bool>>) -> Self {
        Self { size, unary, binary }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Direct evaluation of a sentence, independent of the first-order translation.
    pub fn satisfies(&self, s: &Sentence) -> bool {
        holds(s, self)
    }
}

impl Interpretation for Model {
    fn domain_size(&self) -> usize {
        self.size
    }

    fn unary(&self, noun: Noun, e: usize) -> bool {
        self.unary.get(&noun).is_some_and(|ext| ext[e])
    }

    fn binary(&self, verb: Verb, a: usize, b: usize) -> bool {
        self.binary.get(&verb).is_some_and(|m| m[a * self.size + b])
    }
}

fn lit_holds(m: &impl Interpretation, l: Literal, e: usize) -> bool {
    m.unary(l.noun, e) == l.positive
}

fn some_or_all(q: Quant, n: usize, mut guard: impl FnMut(usize) -> bool, mut body: impl FnMut(usize) -> bool) -> bool {
    match q {
        Quant::Universal => (0..n).all(|e| !guard(e) || body(e)),
        Quant::Existential => (0..n).any(|e| guard(e) && body(e)),
    }
}

/// Truth of a sentence in a structure, read off the sentence shape.
pub fn holds(s: &Sentence, m: &impl Interpretation) -> bool {
    let n = m.domain_size();
    match *s {
        Sentence::Syllogistic { q, subject, predicate } => {
            some_or_all(q, n, |e| lit_holds(m, subject, e), |e| lit_holds(m, predicate, e))
        }
        Sentence::Relational { sq, subject, oq, object, verb, verb_positive } => some_or_all(
            sq,
            n,
            |x| lit_holds(m, subject, x),
            |x| some_or_all(oq, n, |y| lit_holds(m, object, y), |y| m.binary(verb, x, y) == verb_positive),
        ),
        Sentence::Relative { q, head, rel, predicate } => some_or_all(
            q,
            n,
            |e| m.unary(head, e) && lit_holds(m, rel, e),
            |e| lit_holds(m, predicate, e),
        ),
    }
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub max_domain: usize,
    /// Largest `max_domain` accepted.
    pub domain_limit: usize,
    /// Largest number of candidate structures the search may visit.
    pub budget: f64,
}

impl OracleConfig {
    pub fn new(max_domain: usize) -> Self {
        Self { max_domain, ..Self::default() }
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { max_domain: 2, domain_limit: 4, budget: (1u64 << 26) as f64 }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("domain size {requested} exceeds the configured limit {limit}")]
    DomainLimit { requested: usize, limit: usize },
    #[error("search space of about {estimate:.3e} structures exceeds the budget {budget:.3e}")]
    BudgetExceeded { estimate: f64, budget: f64 },
}

/// Compact structure over local symbol indices: bit `i` of `types[e]` is noun
/// `i`; relation bit `v·k² + a·k + b` is verb `v` on `(a, b)`.
struct Compact<'a> {
    types: &'a [u32],
    rel: u64,
}

impl Interpretation for Compact<'_> {
    fn domain_size(&self) -> usize {
        self.types.len()
    }

    fn unary(&self, noun: Noun, e: usize) -> bool {
        self.types[e] >> noun.0 & 1 == 1
    }

    fn binary(&self, verb: Verb, a: usize, b: usize) -> bool {
        let k = self.types.len();
        self.rel >> (verb.index() * k * k + a * k + b) & 1 == 1
    }
}

fn multichoose(n: usize, k: usize) -> f64 {
    // C(n + k - 1, k)
    (0..k).fold(1.0, |acc, i| acc * (n + i) as f64 / (i + 1) as f64)
}

/// Searches all structures of size `1..=cfg.max_domain`.
///
/// For purely monadic input with `max_domain ≥ max(1, #existentials)` an
/// exhausted search is conclusive; otherwise it yields [`Verdict::Unknown`].
pub fn bounded_model_search(sentences: &[Sentence], cfg: &OracleConfig) -> Result<Verdict, OracleError> {
    if cfg.max_domain > cfg.domain_limit {
        return Err(OracleError::DomainLimit { requested: cfg.max_domain, limit: cfg.domain_limit });
    }
    let nouns: Vec<Noun> = sentences.iter().flat_map(Sentence::nouns).collect::<BTreeSet<_>>().into_iter().collect();
    let verbs: Vec<Verb> = sentences.iter().filter_map(Sentence::verb).collect::<BTreeSet<_>>().into_iter().collect();
    let local: Vec<Sentence> = sentences
        .iter()
        .map(|s| {
            s.map_symbols(
                |n| Noun(nouns.binary_search(&n).unwrap() as u32),
                |v| Verb(verbs.binary_search(&v).unwrap() as u32),
            )
        })
        .collect();
    let monadic = verbs.is_empty();
    let existentials = local.iter().filter(|s| !s.is_universal()).count();

    let unary_budget_exceeded = nouns.len() > 24;
    if unary_budget_exceeded {
        return Err(OracleError::BudgetExceeded { estimate: 2f64.powi(nouns.len() as i32), budget: cfg.budget });
    }
    // Per-element pruning: a type must satisfy every non-relational universal sentence on its own.
    let allowed: Vec<u32> = (0..1u32 << nouns.len())
        .filter(|t| {
            let one = Compact { types: std::slice::from_ref(t), rel: 0 };
            local.iter().filter(|s| s.is_universal() && !s.is_relational()).all(|s| holds(s, &one))
        })
        .collect();

    let estimate: f64 = (1..=cfg.max_domain)
        .map(|k| multichoose(allowed.len(), k) * 2f64.powi((k * k * verbs.len()) as i32))
        .sum();
    if estimate > cfg.budget {
        return Err(OracleError::BudgetExceeded { estimate, budget: cfg.budget });
    }
    if !monadic && cfg.max_domain * cfg.max_domain * verbs.len() > 63 {
        return Err(OracleError::BudgetExceeded { estimate, budget: cfg.budget });
    }

    let found = if monadic {
        // which existential sentences each type witnesses
        let masks: Vec<u64> = allowed
            .iter()
            .map(|t| {
                let one = Compact { types: std::slice::from_ref(t), rel: 0 };
                local
                    .iter()
                    .filter(|s| !s.is_universal())
                    .enumerate()
                    .filter(|(_, s)| holds(s, &one))
                    .fold(0u64, |m, (i, _)| m | 1 << (i % 64))
            })
            .collect();
        let all: u64 = if existentials >= 64 { u64::MAX } else { (1u64 << existentials) - 1 };
        (1..=cfg.max_domain).find_map(|k| {
            let mut seq = Vec::with_capacity(k);
            search_monadic(&masks, all, k, 0, 0, &mut seq).map(|idx| {
                let types: Vec<u32> = idx.iter().map(|&i| allowed[i]).collect();
                (types, 0)
            })
        })
    } else {
        (1..=cfg.max_domain).find_map(|k| {
            let mut seq = Vec::with_capacity(k);
            search_relational(&local, &allowed, k, verbs.len(), 0, &mut seq)
        })
    };

    Ok(match found {
        Some((types, rel)) => Verdict::Satisfiable { witness: Some(to_model(&types, rel, &nouns, &verbs)) },
        None if monadic && cfg.max_domain >= existentials.max(1) => {
            Verdict::Unsatisfiable { config: None, proof: None }
        }
        None => Verdict::Unknown,
    })
}

fn search_monadic(masks: &[u64], all: u64, k: usize, from: usize, acc: u64, seq: &mut Vec<usize>) -> Option<Vec<usize>> {
    if seq.len() == k {
        return (acc & all == all).then(|| seq.clone());
    }
    for i in from..masks.len() {
        seq.push(i);
        if let Some(found) = search_monadic(masks, all, k, i, acc | masks[i], seq) {
            return Some(found);
        }
        seq.pop();
    }
    None
}

fn search_relational(
    local: &[Sentence],
    allowed: &[u32],
    k: usize,
    verbs: usize,
    from: usize,
    seq: &mut Vec<u32>,
) -> Option<(Vec<u32>, u64)> {
    if seq.len() == k {
        let bits = k * k * verbs;
        for rel in 0..1u64 << bits {
            let m = Compact { types: seq, rel };
            if local.iter().all(|s| holds(s, &m)) {
                return Some((seq.clone(), rel));
            }
        }
        return None;
    }
    for i in from..allowed.len() {
        seq.push(allowed[i]);
        if let Some(found) = search_relational(local, allowed, k, verbs, i, seq) {
            return Some(found);
        }
        seq.pop();
    }
    None
}

fn to_model(types: &[u32], rel: u64, nouns: &[Noun], verbs: &[Verb]) -> Model {
    let k = types.len();
    let unary = nouns
        .iter()
        .enumerate()
        .map(|(i, n)| (*n, types.iter().map(|t| t >> i & 1 == 1).collect()))
        .collect();
    let binary = verbs
        .iter()
        .enumerate()
        .map(|(v, verb)| (*verb, (0..k * k).map(|ab| rel >> (v * k * k + ab) & 1 == 1).collect()))
        .collect();
    Model::new(k, unary, binary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::tests::arb_sentence;
    use crate::syntax::Literal as L;
    use proptest::prelude::*;
    use Quant::*;

    fn artist_chain() -> Vec<Sentence> {
        vec![
            Sentence::all(L::pos(0), L::pos(1)),
            Sentence::all(L::pos(1), L::pos(2)),
            Sentence::all(L::pos(2), L::neg(3)),
            Sentence::some(L::pos(0), L::pos(3)),
        ]
    }

    #[test]
    fn single_existential_has_one_element_witness() {
        let ss = [Sentence::some(L::pos(0), L::pos(1))];
        let Verdict::Satisfiable { witness: Some(m) } = bounded_model_search(&ss, &OracleConfig::new(1)).unwrap() else {
            panic!("expected sat");
        };
        assert_eq!(m.size(), 1);
        assert!(m.unary(Noun(0), 0) && m.unary(Noun(1), 0));
    }

    #[test]
    fn artist_chain_is_conclusively_unsat_at_size_one() {
        assert!(bounded_model_search(&artist_chain(), &OracleConfig::new(1)).unwrap().is_unsat());
    }

    #[test]
    fn universal_self_contradiction_is_satisfiable() {
        // "No p is a p" holds when p is empty.
        let ss = [Sentence::all(L::pos(0), L::neg(0))];
        assert!(bounded_model_search(&ss, &OracleConfig::new(1)).unwrap().is_sat());
    }

    #[test]
    fn valid_relational_argument_is_unknown_at_two() {
        // Some artist hates no beekeeper; every beekeeper hates some artist;
        // negation of "some artist is not a beekeeper".
        let ss = [
            Sentence::rel(Existential, L::pos(0), Universal, L::pos(1), 0, false),
            Sentence::rel(Universal, L::pos(1), Existential, L::pos(0), 0, true),
            Sentence::some(L::pos(0), L::neg(1)).negate(),
        ];
        assert_eq!(bounded_model_search(&ss, &OracleConfig::new(2)).unwrap(), Verdict::Unknown);
    }

    #[test]
    fn relational_witness_is_found() {
        // Every p rs some q; Some p is a p; No q rs any q.
        let ss = [
            Sentence::rel(Universal, L::pos(0), Existential, L::pos(1), 0, true),
            Sentence::some(L::pos(0), L::pos(0)),
            Sentence::rel(Universal, L::pos(1), Universal, L::pos(1), 0, false),
        ];
        let Verdict::Satisfiable { witness: Some(m) } = bounded_model_search(&ss, &OracleConfig::new(2)).unwrap() else {
            panic!("expected sat");
        };
        assert!(ss.iter().all(|s| m.satisfies(s)));
    }

    #[test]
    fn limits_are_enforced() {
        let cfg = OracleConfig { max_domain: 5, ..OracleConfig::default() };
        assert!(matches!(bounded_model_search(&[], &cfg), Err(OracleError::DomainLimit { .. })));
        let ss: Vec<Sentence> = (0..4)
            .map(|v| Sentence::rel(Universal, L::pos(v), Universal, L::pos(v + 1), v, true))
            .collect();
        let cfg = OracleConfig::new(4);
        assert!(matches!(bounded_model_search(&ss, &cfg), Err(OracleError::BudgetExceeded { .. })));
    }

    proptest! {
        /// Any existential that is not self-inconsistent is satisfiable on its own within two elements.
        #[test]
        fn consistent_existentials_are_satisfiable(s in arb_sentence(3, 1)) {
            let s = if s.is_universal() { s.negate() } else { s };
            prop_assume!(!s.is_self_inconsistent());
            prop_assert!(bounded_model_search(&[s], &OracleConfig::new(2)).unwrap().is_sat());
        }

        /// Every universal sentence holds in some one-element model.
        #[test]
        fn universals_are_satisfiable(s in arb_sentence(3, 1)) {
            let s = if s.is_universal() { s } else { s.negate() };
            prop_assert!(bounded_model_search(&[s], &OracleConfig::new(1)).unwrap().is_sat());
        }
    }
}
