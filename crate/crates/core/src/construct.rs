//! Constructed instances of controlled difficulty.
//!
//! Syllogistic instances embed a literal-graph chain of length `d`;
//! relational ones embed a ∀∀-configuration with parameter `d` (6d
//! sentences). Satisfiable counterparts reverse one chain implication.

use std::collections::BTreeSet;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::atp::{self, AtpError, Prover, SzsStatus};
use crate::decide::{decide_graph, min_config_size, DecideError};
use crate::fol::{to_tptp, Names};
use crate::gen::{sample_sentence, Construction, GenError, GenParams, Instance, Label, Meta};
use crate::syntax::{Fragment, Literal, Noun, Quant, Sentence};

/// Padding resamples allowed per instance.
pub const RETRY_BUDGET: usize = 10_000;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("need {needed} nouns, have {available}")]
    VocabTooSmall { needed: usize, available: usize },
    #[error("invalid construction: {0}")]
    InvalidSpec(String),
    #[error("construction gave up after {attempts} resamples")]
    ConstructionStuck { attempts: usize },
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Decide(#[from] DecideError),
    #[error(transparent)]
    Prover(#[from] AtpError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChainKind {
    /// `ℓ ⇒ ℓ̄` against `∃(ℓ ∧ m)`.
    I,
    /// `m ⇒ m̄` against `∃(ℓ ∧ m)`.
    II,
    /// `ℓ ⇒ m̄` against `∃(ℓ ∧ m)`.
    III,
    /// `o ⇒ ō` and `ō ⇒ o`.
    Mutual,
}

impl ChainKind {
    pub const PATHS: [ChainKind; 3] = [ChainKind::I, ChainKind::II, ChainKind::III];
}

impl FromStr for ChainKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "i" => Ok(ChainKind::I),
            "ii" => Ok(ChainKind::II),
            "iii" => Ok(ChainKind::III),
            "mutual" => Ok(ChainKind::Mutual),
            _ => Err(format!("unknown chain kind {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSpec {
    pub d: usize,
    pub kind: ChainKind,
    pub target: Label,
    pub s: usize,
}

impl ChainSpec {
    fn core_len(&self) -> usize {
        match self.kind {
            ChainKind::Mutual => 2 * self.d,
            _ => self.d + 1,
        }
    }

    fn nouns_needed(&self) -> usize {
        match self.kind {
            ChainKind::Mutual => 2 * self.d - 1,
            _ => self.d + 1,
        }
    }

    fn validate(&self) -> Result<(), ConstructError> {
        if self.d == 0 || self.core_len() > self.s {
            return Err(ConstructError::InvalidSpec(format!("d={} does not fit in s={}", self.d, self.s)));
        }
        Ok(())
    }
}

fn random_literals(nouns: usize, count: usize, rng: &mut impl Rng) -> Result<Vec<Literal>, ConstructError> {
    if nouns < count {
        return Err(ConstructError::VocabTooSmall { needed: count, available: nouns });
    }
    Ok(sample(rng, nouns, count).into_iter().map(|n| Literal::new(n as u32, rng.gen_bool(0.5))).collect())
}

fn implication_chain(lits: &[Literal]) -> impl Iterator<Item = Sentence> + '_ {
    lits.windows(2).map(|w| Sentence::all(w[0], w[1]))
}

/// The unsatisfiable core of a chain specification over nouns `0..nouns`.
///
/// The universal chain sentences come first; path kinds end with the
/// triggering existential. The minimal forbidden configuration has size `d`.
pub fn build_chain(spec: &ChainSpec, nouns: usize, rng: &mut impl Rng) -> Result<Vec<Sentence>, ConstructError> {
    spec.validate()?;
    let d = spec.d;
    let lits = random_literals(nouns, spec.nouns_needed(), rng)?;
    Ok(match spec.kind {
        ChainKind::III => {
            // ℓ0 → ℓ1 → … → ℓd with ∃(ℓ0 ∧ ℓ̄d)
            let mut out: Vec<Sentence> = implication_chain(&lits).collect();
            out.push(Sentence::some(lits[0], lits[d].complement()));
            out
        }
        ChainKind::I | ChainKind::II => {
            // ℓ0 → … → ℓ(d-1) → ℓ̄0, with a fresh literal beside ℓ0 in the existential
            let mut path = lits[..d].to_vec();
            path.push(lits[0].complement());
            let mut out: Vec<Sentence> = implication_chain(&path).collect();
            let fresh = lits[d];
            out.push(match spec.kind {
                ChainKind::I => Sentence::some(lits[0], fresh),
                _ => Sentence::some(fresh, lits[0]),
            });
            out
        }
        ChainKind::Mutual => {
            // o → a1 → … → ō and ō → b1 → … → o, both of length d
            let o = lits[0];
            let mut fwd = vec![o];
            fwd.extend(&lits[1..d]);
            fwd.push(o.complement());
            let mut back = vec![o.complement()];
            back.extend(&lits[d..]);
            back.push(o);
            implication_chain(&fwd).chain(implication_chain(&back)).collect()
        }
    })
}

/// Indices of the core's universal chain sentences.
fn chain_implications(spec: &ChainSpec) -> std::ops::Range<usize> {
    match spec.kind {
        ChainKind::Mutual => 0..2 * spec.d,
        _ => 0..spec.d,
    }
}

/// `∀(p, q)` becomes `∀(q, p)`; other sentences are returned unchanged.
pub fn reverse(s: Sentence) -> Sentence {
    match s {
        Sentence::Syllogistic { q: Quant::Universal, subject, predicate } => Sentence::all(predicate, subject),
        other => other,
    }
}

fn instance(
    f: Fragment,
    mut sentences: Vec<Sentence>,
    label: Label,
    params: &GenParams,
    seed: u64,
    construction: Construction,
    rng: &mut impl Rng,
) -> Instance {
    sentences.shuffle(rng);
    Instance {
        fragment: f,
        sentences,
        label: Some(label),
        meta: Meta { seed, params: GenParams { s: params.s, ..params.clone() }, construction },
        proof: None,
    }
}

/// A syllogistic (S†) instance of size `spec.s` around a chain of length `spec.d`.
///
/// Unsatisfiable targets keep the minimal configuration size at exactly `d`;
/// satisfiable ones reverse a uniformly chosen chain implication and keep
/// the whole set satisfiable. Padding is drawn from `params`.
pub fn make_constructed_syllogistic(spec: &ChainSpec, params: &GenParams, seed: u64) -> Result<Instance, ConstructError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core = build_chain(spec, params.n, &mut rng)?;
    let core = match spec.target {
        Label::Unsat => core,
        Label::Sat => {
            let mut c = core;
            let k = rng.gen_range(chain_implications(spec));
            c[k] = reverse(c[k]);
            c
        }
    };
    let mut budget = RETRY_BUDGET;
    let accept = |set: &[Sentence]| -> Result<bool, ConstructError> {
        Ok(match spec.target {
            Label::Unsat => min_config_size(set)? == Some(spec.d),
            Label::Sat => decide_graph(set)?.is_sat(),
        })
    };
    if !accept(&core)? {
        return Err(ConstructError::ConstructionStuck { attempts: 0 });
    }
    let mut set = core;
    while set.len() < spec.s {
        set.push(sample_sentence(Fragment::SDag, params, &mut rng)?);
        if !accept(&set)? {
            set.pop();
            budget -= 1;
            if budget == 0 {
                return Err(ConstructError::ConstructionStuck { attempts: RETRY_BUDGET });
            }
        }
    }
    let inst = instance(Fragment::SDag, set, spec.target, params, seed, Construction::Chain, &mut rng);
    debug_assert_eq!(decide_graph(&inst.sentences)?.is_sat(), spec.target == Label::Sat);
    Ok(inst)
}

/// An unsatisfiable instance and its satisfiable twin sharing the same padding.
pub fn make_constructed_pair(spec: &ChainSpec, params: &GenParams, seed: u64) -> Result<(Instance, Instance), ConstructError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unsat_core = build_chain(spec, params.n, &mut rng)?;
    let mut sat_core = unsat_core.clone();
    let k = rng.gen_range(chain_implications(spec));
    sat_core[k] = reverse(sat_core[k]);
    let mut padding = Vec::new();
    let mut budget = RETRY_BUDGET;
    let with = |core: &[Sentence], pad: &[Sentence]| -> Vec<Sentence> { core.iter().chain(pad).copied().collect() };
    while unsat_core.len() + padding.len() < spec.s {
        padding.push(sample_sentence(Fragment::SDag, params, &mut rng)?);
        let ok = min_config_size(&with(&unsat_core, &padding))? == Some(spec.d)
            && decide_graph(&with(&sat_core, &padding))?.is_sat();
        if !ok {
            padding.pop();
            budget -= 1;
            if budget == 0 {
                return Err(ConstructError::ConstructionStuck { attempts: RETRY_BUDGET });
            }
        }
    }
    let unsat = instance(Fragment::SDag, with(&unsat_core, &padding), Label::Unsat, params, seed, Construction::Chain, &mut rng);
    let sat = instance(Fragment::SDag, with(&sat_core, &padding), Label::Sat, params, seed, Construction::Chain, &mut rng);
    Ok((unsat, sat))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForallForallSpec {
    pub d: usize,
    pub target: Label,
    pub s: usize,
    /// Polarity of `r` in the witness chains; `None` draws each uniformly.
    pub witness_polarity: Option<bool>,
}

impl ForallForallSpec {
    pub fn nouns_needed(&self) -> usize {
        6 * self.d
    }
}

/// The 6d-sentence ∀∀-configuration over nouns `0..nouns` and verbs `0..verbs`.
///
/// Sentences come in six consecutive blocks of `d`: the two chains from
/// `p` to `o1` and `o2`, the two chains from `q` ending in `∀(o1, r)` and
/// `∀(o2, ¬r)`, and the witness chains for `p` and for `q`.
pub fn build_forall_forall(
    spec: &ForallForallSpec,
    nouns: usize,
    verbs: usize,
    rng: &mut impl Rng,
) -> Result<Vec<Sentence>, ConstructError> {
    let d = spec.d;
    if d == 0 || 6 * d > spec.s {
        return Err(ConstructError::InvalidSpec(format!("d={d} does not fit in s={}", spec.s)));
    }
    if verbs == 0 {
        return Err(ConstructError::InvalidSpec("a verb is required".into()));
    }
    if nouns < spec.nouns_needed() {
        return Err(ConstructError::VocabTooSmall { needed: spec.nouns_needed(), available: nouns });
    }
    let pool: Vec<Noun> = sample(rng, nouns, 6 * d).into_iter().map(|n| Noun(n as u32)).collect();
    let mut next = pool.into_iter();
    let mut take = |k: usize| -> Vec<Noun> { next.by_ref().take(k).collect() };
    let (p, o1, o2, q) = (take(1)[0], take(1)[0], take(1)[0], take(1)[0]);
    let (pm, pm2, qm, qm2) = (take(d - 1), take(d - 1), take(d - 1), take(d - 1));
    let (u0, w0) = (take(1)[0], take(1)[0]);
    let (um, wm) = (take(d - 1), take(d - 1));
    let r = rng.gen_range(0..verbs as u32);
    let pos = |n: Noun| Literal::pos(n.0);
    let chain = |from: Noun, mid: &[Noun], to: Noun| -> Vec<Sentence> {
        let lits: Vec<Literal> = std::iter::once(from).chain(mid.iter().copied()).chain([to]).map(pos).collect();
        implication_chain(&lits).collect()
    };
    let all_r = |from: Noun, mid: &[Noun], o: Noun, positive: bool| -> Vec<Sentence> {
        let lits: Vec<Literal> = std::iter::once(from).chain(mid.iter().copied()).map(pos).collect();
        let mut out: Vec<Sentence> = implication_chain(&lits).collect();
        out.push(Sentence::rel(Quant::Universal, *lits.last().unwrap(), Quant::Universal, pos(o), r, positive));
        out
    };
    let polarity = |rng: &mut dyn rand::RngCore| spec.witness_polarity.unwrap_or_else(|| rng.gen_bool(0.5));
    let witness = |start: Noun, mid: &[Noun], target: Noun, rng: &mut dyn rand::RngCore| -> Vec<Sentence> {
        // ∃(u0, u1), ∀(u1, ∃(u2, ±r)), …, ∀(u(d-1), ∃(target, ±r))
        let seq: Vec<Noun> = mid.iter().copied().chain([target]).collect();
        let mut out = vec![Sentence::some(pos(start), pos(seq[0]))];
        for w in seq.windows(2) {
            out.push(Sentence::rel(Quant::Universal, pos(w[0]), Quant::Existential, pos(w[1]), r, polarity(rng)));
        }
        out
    };
    let mut core = chain(p, &pm, o1);
    core.extend(chain(p, &pm2, o2));
    core.extend(all_r(q, &qm, o1, true));
    core.extend(all_r(q, &qm2, o2, false));
    core.extend(witness(u0, &um, p, rng));
    core.extend(witness(w0, &wm, q, rng));
    debug_assert_eq!(core.len(), 6 * d);
    Ok(core)
}

/// Indices of the reversible implications of a ∀∀ core: the syllogistic
/// sentences of the first four blocks.
pub fn forall_forall_implications(d: usize) -> Vec<usize> {
    (0..2 * d).chain(2 * d..3 * d - 1).chain(3 * d..4 * d - 1).collect()
}

fn axiom_index(name: &str) -> Option<usize> {
    name.strip_prefix('s')?.parse::<usize>().ok()?.checked_sub(1)
}

/// A relational (R) instance around a ∀∀-configuration, checked with the prover.
///
/// Unsatisfiable targets require the full set to be refuted using only core
/// premises and the padding alone to be satisfiable; satisfiable targets
/// reverse one implication and require the full set to be satisfiable.
pub fn make_constructed_relational(
    spec: &ForallForallSpec,
    params: &GenParams,
    seed: u64,
    prover: &Prover,
) -> Result<Instance, ConstructError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nouns = params.n.max(spec.nouns_needed());
    let verbs = params.v.max(1);
    let mut core = build_forall_forall(spec, nouns, verbs, &mut rng)?;
    if spec.target == Label::Sat {
        let cand = forall_forall_implications(spec.d);
        let k = cand[rng.gen_range(0..cand.len())];
        core[k] = reverse(core[k]);
    }
    let params = GenParams { n: nouns, v: verbs, ..params.clone() };
    for _ in 0..RETRY_BUDGET {
        let padding: Vec<Sentence> = (core.len()..spec.s)
            .map(|_| sample_sentence(Fragment::R, &params, &mut rng))
            .collect::<Result<_, _>>()?;
        let mut order: Vec<usize> = (0..spec.s).collect();
        order.shuffle(&mut rng);
        // order[i] < core.len() marks a core sentence
        let sentences: Vec<Sentence> =
            order.iter().map(|&j| if j < core.len() { core[j] } else { padding[j - core.len()] }).collect();
        let out = prover.run(&to_tptp(&sentences, Names::Abstract, None))?;
        match (spec.target, &out.status) {
            (Label::Sat, SzsStatus::Satisfiable) => {
                return Ok(finish(sentences, Label::Sat, None, &params, seed));
            }
            (Label::Unsat, SzsStatus::Unsatisfiable) => {
                let used = atp::used_axioms(&out.raw);
                let in_core = used.iter().all(|a| axiom_index(a).is_some_and(|i| order[i] < core.len()));
                if !in_core || used.is_empty() {
                    continue;
                }
                let pad = prover.run(&to_tptp(&padding, Names::Abstract, None))?;
                if pad.status != SzsStatus::Satisfiable {
                    continue;
                }
                let proof = atp::proof_stats(&out.raw, sentences.len()).ok();
                return Ok(finish(sentences, Label::Unsat, proof, &params, seed));
            }
            (_, SzsStatus::Error(e)) => return Err(AtpError::ProverError(e.clone()).into()),
            _ => continue,
        }
    }
    Err(ConstructError::ConstructionStuck { attempts: RETRY_BUDGET })
}

fn finish(sentences: Vec<Sentence>, label: Label, proof: Option<atp::ProofStats>, params: &GenParams, seed: u64) -> Instance {
    Instance {
        fragment: Fragment::R,
        sentences,
        label: Some(label),
        meta: Meta { seed, params: params.clone(), construction: Construction::Forallforall },
        proof,
    }
}

/// The sentences not accounted for by `core`, matched by value with multiplicity.
pub fn padding_of(sentences: &[Sentence], core: &[Sentence]) -> Vec<Sentence> {
    let mut core: Vec<Sentence> = core.to_vec();
    sentences
        .iter()
        .filter(|s| match core.iter().position(|c| c == *s) {
            Some(i) => {
                core.swap_remove(i);
                false
            }
            None => true,
        })
        .copied()
        .collect()
}

/// Distinct nouns used by a set of sentences.
pub fn noun_set(sentences: &[Sentence]) -> BTreeSet<Noun> {
    sentences.iter().flat_map(Sentence::nouns).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelMode {
    Sat,
    Unsat,
    /// Alternating, starting with unsatisfiable.
    Balanced,
}

#[derive(Clone, Debug)]
pub struct ConstructSpec {
    /// [`Fragment::SDag`] for chains, [`Fragment::R`] for ∀∀-configurations.
    pub fragment: Fragment,
    pub d_min: usize,
    pub d_max: usize,
    pub s: usize,
    pub count: usize,
    pub label: LabelMode,
    /// Sample mutual-opposite chains alongside the three path kinds.
    pub mutual: bool,
    /// Emit unsatisfiable/satisfiable twins with shared padding (chains only).
    pub paired: bool,
    pub master_seed: u64,
}

const CONSTRUCT_SALT: u64 = 0xc0_457c;

/// `count` constructed instances, each with `d` uniform in `[d_min, d_max]`
/// and, for chains, a uniformly drawn violation kind.
pub fn construct_corpus(spec: &ConstructSpec, prover: Option<&Prover>) -> Result<Vec<Instance>, ConstructError> {
    if spec.d_min == 0 || spec.d_min > spec.d_max {
        return Err(ConstructError::InvalidSpec(format!("bad difficulty range [{}, {}]", spec.d_min, spec.d_max)));
    }
    let master = crate::gen::mix(spec.master_seed, CONSTRUCT_SALT);
    let slots = if spec.paired { spec.count.div_ceil(2) } else { spec.count };
    let kinds: Vec<ChainKind> =
        ChainKind::PATHS.iter().copied().chain(spec.mutual.then_some(ChainKind::Mutual)).collect();
    let build = |i: usize| -> Result<Vec<Instance>, ConstructError> {
        let seed = crate::gen::instance_seed(master, spec.fragment, spec.s, i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.gen_range(spec.d_min..=spec.d_max);
        let target = match spec.label {
            LabelMode::Sat => Label::Sat,
            LabelMode::Unsat => Label::Unsat,
            LabelMode::Balanced if i.is_multiple_of(2) => Label::Unsat,
            LabelMode::Balanced => Label::Sat,
        };
        let inner = rng.gen::<u64>();
        match spec.fragment {
            Fragment::SDag => {
                let kind = kinds[rng.gen_range(0..kinds.len())];
                let chain = ChainSpec { d, kind, target, s: spec.s };
                let mut params = crate::gen::default_params(Fragment::SDag, spec.s);
                // long mutual chains can outgrow the default noun pool
                params.n = params.n.max(chain.nouns_needed());
                if spec.paired {
                    let (u, s) = make_constructed_pair(&ChainSpec { target: Label::Unsat, ..chain }, &params, inner)?;
                    Ok(vec![u, s])
                } else {
                    Ok(vec![make_constructed_syllogistic(&chain, &params, inner)?])
                }
            }
            Fragment::R => {
                let prover = prover.ok_or(DecideError::ProverUnavailable)?;
                let params = crate::gen::default_params(Fragment::R, spec.s);
                let ff = ForallForallSpec { d, target, s: spec.s, witness_polarity: None };
                Ok(vec![make_constructed_relational(&ff, &params, inner, prover)?])
            }
            other => Err(ConstructError::InvalidSpec(format!("no constructed instances for {other}"))),
        }
    };
    use rayon::prelude::*;
    let nested: Vec<Vec<Instance>> = (0..slots).into_par_iter().map(build).collect::<Result<_, _>>()?;
    Ok(nested.into_iter().flatten().take(spec.count).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::{bounded_model_search, decide_monadic, OracleConfig, Verdict};
    use crate::gen::default_params;
    use crate::syntax::Literal as L;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn spec(d: usize, kind: ChainKind, target: Label) -> ChainSpec {
        ChainSpec { d, kind, target, s: 20 }
    }

    #[test]
    fn chain_of_length_two_matches_the_textbook_form() {
        let core = build_chain(&spec(2, ChainKind::III, Label::Unsat), 3, &mut rng(1)).unwrap();
        assert_eq!(core.len(), 3);
        // ℓ0 → ℓ1 → ℓ2 and ∃(ℓ0 ∧ ℓ̄2)
        let Sentence::Syllogistic { subject: l0, predicate: l1, .. } = core[0] else { panic!() };
        let Sentence::Syllogistic { subject: m1, predicate: l2, .. } = core[1] else { panic!() };
        assert_eq!(l1, m1);
        assert_eq!(core[2], Sentence::some(l0, l2.complement()));
        assert_eq!(min_config_size(&core).unwrap(), Some(2));
    }

    #[test]
    fn every_kind_has_exact_size() {
        for kind in [ChainKind::I, ChainKind::II, ChainKind::III, ChainKind::Mutual] {
            for d in 1..=8 {
                let core = build_chain(&spec(d, kind, Label::Unsat), 16, &mut rng(d as u64)).unwrap();
                assert_eq!(min_config_size(&core).unwrap(), Some(d), "{kind:?} d={d}");
                assert!(decide_monadic(&core).unwrap().is_unsat());
            }
        }
    }

    #[test]
    fn kind_i_with_one_step() {
        let core = build_chain(&spec(1, ChainKind::I, Label::Unsat), 2, &mut rng(0)).unwrap();
        let Sentence::Syllogistic { subject, predicate, .. } = core[0] else { panic!() };
        assert_eq!(predicate, subject.complement());
        let cfg = OracleConfig::new(1);
        assert!(bounded_model_search(&core, &cfg).unwrap().is_unsat());
    }

    #[test]
    fn small_vocabulary_is_reported() {
        let r = build_chain(&spec(5, ChainKind::III, Label::Unsat), 4, &mut rng(0));
        assert!(matches!(r, Err(ConstructError::VocabTooSmall { needed: 6, available: 4 })));
    }

    #[test]
    fn constructed_syllogistic_instances() {
        let params = default_params(Fragment::SDag, 20);
        for (i, d) in (2..=6).enumerate() {
            for kind in ChainKind::PATHS {
                let u = make_constructed_syllogistic(&spec(d, kind, Label::Unsat), &params, i as u64).unwrap();
                assert_eq!(u.sentences.len(), 20);
                assert_eq!(min_config_size(&u.sentences).unwrap(), Some(d));
                let s = make_constructed_syllogistic(&spec(d, kind, Label::Sat), &params, i as u64).unwrap();
                assert!(decide_graph(&s.sentences).unwrap().is_sat());
                assert_eq!(s.label, Some(Label::Sat));
            }
        }
    }

    #[test]
    fn paired_twins_share_padding() {
        let params = default_params(Fragment::SDag, 20);
        let (u, s) = make_constructed_pair(&spec(4, ChainKind::III, Label::Unsat), &params, 5).unwrap();
        assert_eq!(min_config_size(&u.sentences).unwrap(), Some(4));
        assert!(decide_graph(&s.sentences).unwrap().is_sat());
        let mut a = u.sentences.clone();
        let mut b = s.sentences.clone();
        a.sort();
        b.sort();
        let common = a.iter().filter(|x| b.contains(x)).count();
        assert!(common >= 19);
    }

    #[test]
    fn construction_is_deterministic() {
        let params = default_params(Fragment::SDag, 20);
        let sp = spec(3, ChainKind::II, Label::Unsat);
        assert_eq!(
            make_constructed_syllogistic(&sp, &params, 11).unwrap(),
            make_constructed_syllogistic(&sp, &params, 11).unwrap()
        );
    }

    fn ff(d: usize, target: Label) -> ForallForallSpec {
        ForallForallSpec { d, target, s: 6 * d, witness_polarity: None }
    }

    #[test]
    fn forall_forall_shape() {
        for d in 1..=3 {
            let core = build_forall_forall(&ff(d, Label::Unsat), 6 * d, 1, &mut rng(d as u64)).unwrap();
            assert_eq!(core.len(), 6 * d);
            assert_eq!(noun_set(&core).len(), 6 * d);
            assert!(core.iter().all(|s| Fragment::R.contains(s)));
            let relational = core.iter().filter(|s| s.is_relational()).count();
            assert_eq!(relational, 2 + 2 * (d - 1));
            for i in forall_forall_implications(d) {
                assert!(matches!(core[i], Sentence::Syllogistic { q: Quant::Universal, .. }));
            }
        }
    }

    #[test]
    fn forall_forall_with_one_has_no_small_model() {
        let core = build_forall_forall(&ff(1, Label::Unsat), 6, 1, &mut rng(2)).unwrap();
        let cfg = OracleConfig { max_domain: 3, domain_limit: 4, budget: 1e9 };
        assert_eq!(bounded_model_search(&core, &cfg).unwrap(), Verdict::Unknown);
        let mut rev = core.clone();
        rev[0] = reverse(rev[0]);
        assert!(bounded_model_search(&rev, &cfg).unwrap().is_sat());
    }

    #[test]
    fn forall_forall_needs_room() {
        let r = build_forall_forall(&ForallForallSpec { s: 20, ..ff(3, Label::Unsat) }, 12, 1, &mut rng(0));
        assert!(matches!(r, Err(ConstructError::VocabTooSmall { needed: 18, available: 12 })));
        let r = build_forall_forall(&ForallForallSpec { s: 5, ..ff(1, Label::Unsat) }, 12, 1, &mut rng(0));
        assert!(matches!(r, Err(ConstructError::InvalidSpec(_))));
    }

    #[test]
    fn padding_split() {
        let a = Sentence::all(L::pos(0), L::pos(1));
        let b = Sentence::some(L::pos(1), L::pos(2));
        assert_eq!(padding_of(&[b, a, a], &[a]), vec![b, a]);
    }

    #[test]
    fn balanced_chain_corpus() {
        let spec = ConstructSpec {
            fragment: Fragment::SDag,
            d_min: 2,
            d_max: 6,
            s: 20,
            count: 40,
            label: LabelMode::Balanced,
            mutual: true,
            paired: false,
            master_seed: 1,
        };
        let c = construct_corpus(&spec, None).unwrap();
        assert_eq!(c.len(), 40);
        let sat = c.iter().filter(|i| i.label == Some(Label::Sat)).count();
        assert_eq!(sat, 20);
        for inst in &c {
            let size = min_config_size(&inst.sentences).unwrap();
            assert_eq!(size.is_none(), inst.label == Some(Label::Sat));
            assert!(size.is_none_or(|d| (2..=6).contains(&d)));
        }
        let paired = construct_corpus(&ConstructSpec { paired: true, count: 5, ..spec.clone() }, None).unwrap();
        assert_eq!(paired.len(), 5);
        let r = construct_corpus(&ConstructSpec { fragment: Fragment::R, ..spec }, None);
        assert!(matches!(r, Err(ConstructError::Decide(DecideError::ProverUnavailable))));
    }

    #[test]
    fn axiom_names_map_to_positions() {
        assert_eq!(axiom_index("s1"), Some(0));
        assert_eq!(axiom_index("s12"), Some(11));
        assert_eq!(axiom_index("s0"), None);
        assert_eq!(axiom_index("f3"), None);
    }
}
