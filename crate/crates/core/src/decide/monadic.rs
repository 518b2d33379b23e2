//! Propositional reduction for the monadic fragments (S†, Srel, SrelN).
//!
//! Each universal sentence is a clause over noun atoms that every element's
//! 1-type must satisfy. The set is satisfiable iff the clauses admit some
//! type (the domain is non-empty) and, for every existential sentence, the
//! clauses plus that sentence's conjuncts as unit clauses admit a type.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::oracle::Model;
use super::{DecideError, Verdict};
use crate::syntax::{Literal, Noun, Quant, Sentence};

type Lit = (usize, bool);

/// Complete DPLL search over a small clause set. Returns a satisfying
/// assignment (unassigned variables default to `false`).
pub(crate) fn solve(vars: usize, clauses: &[Vec<Lit>]) -> Option<Vec<bool>> {
    let mut assign = vec![None; vars];
    if dpll(clauses, &mut assign) {
        Some(assign.into_iter().map(|a| a.unwrap_or(false)).collect())
    } else {
        None
    }
}

fn dpll(clauses: &[Vec<Lit>], assign: &mut Vec<Option<bool>>) -> bool {
    let mut trail = Vec::new();
    // unit propagation to fixpoint
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut unassigned = None;
            let mut open = 0;
            let mut satisfied = false;
            for &(v, pol) in clause {
                match assign[v] {
                    Some(val) if val == pol => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open += 1;
                        unassigned = Some((v, pol));
                    }
                }
            }
            if satisfied {
                continue;
            }
            match (open, unassigned) {
                (0, _) => {
                    for v in trail {
                        assign[v] = None;
                    }
                    return false;
                }
                (1, Some((v, pol))) => {
                    assign[v] = Some(pol);
                    trail.push(v);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let branch = clauses
        .iter()
        .filter(|c| !c.iter().any(|&(v, p)| assign[v] == Some(p)))
        .flat_map(|c| c.iter())
        .find(|(v, _)| assign[*v].is_none())
        .map(|&(v, p)| (v, p));
    let Some((v, first)) = branch else {
        return true;
    };
    for value in [first, !first] {
        assign[v] = Some(value);
        if dpll(clauses, assign) {
            return true;
        }
    }
    assign[v] = None;
    for v in trail {
        assign[v] = None;
    }
    false
}

/// Decides a set of syllogistic and relative-clause sentences. A satisfiable
/// verdict carries a witness with one element per existential sentence.
pub fn decide_monadic(sentences: &[Sentence]) -> Result<Verdict, DecideError> {
    let nouns: BTreeSet<Noun> = sentences.iter().flat_map(Sentence::nouns).collect();
    let index: HashMap<Noun, usize> = nouns.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let lit = |l: Literal| (index[&l.noun], l.positive);
    let mut clauses = Vec::new();
    let mut existentials = Vec::new();
    for (i, s) in sentences.iter().enumerate() {
        match *s {
            Sentence::Syllogistic { q: Quant::Universal, subject, predicate } => {
                let (v, p) = lit(subject);
                clauses.push(vec![(v, !p), lit(predicate)]);
            }
            Sentence::Relative { q: Quant::Universal, head, rel, predicate } => {
                let (r, p) = lit(rel);
                clauses.push(vec![(index[&head], false), (r, !p), lit(predicate)]);
            }
            Sentence::Syllogistic { q: Quant::Existential, subject, predicate } => {
                existentials.push(vec![lit(subject), lit(predicate)]);
            }
            Sentence::Relative { q: Quant::Existential, head, rel, predicate } => {
                existentials.push(vec![(index[&head], true), lit(rel), lit(predicate)]);
            }
            Sentence::Relational { .. } => return Err(DecideError::WrongFragment { method: "monadic", sentence: i }),
        }
    }
    let mut types = Vec::new();
    if existentials.is_empty() {
        match solve(nouns.len(), &clauses) {
            Some(t) => types.push(t),
            None => return Ok(Verdict::Unsatisfiable { config: None, proof: None }),
        }
    }
    for units in existentials {
        let mut cs = clauses.clone();
        cs.extend(units.into_iter().map(|u| vec![u]));
        match solve(nouns.len(), &cs) {
            Some(t) => types.push(t),
            None => return Ok(Verdict::Unsatisfiable { config: None, proof: None }),
        }
    }
    let unary: BTreeMap<Noun, Vec<bool>> =
        nouns.iter().enumerate().map(|(i, n)| (*n, types.iter().map(|t| t[i]).collect())).collect();
    Ok(Verdict::Satisfiable { witness: Some(Model::new(types.len(), unary, BTreeMap::new())) })
}
