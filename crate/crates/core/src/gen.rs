//! Random instance generation, labelling and hard-instance filtering.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atp::{ProofStats, Prover};
use crate::decide::{self, Backend, DecideError, Method, OracleConfig, Verdict};
use crate::syntax::{Fragment, Literal, Quant, Sentence};

/// Rejection-sampling attempts per sentence before giving up.
pub const MAX_SENTENCE_ATTEMPTS: usize = 1000;
/// Fresh draws per corpus slot when the labeller returns no verdict.
pub const MAX_RELABEL_ATTEMPTS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    /// Universal (outer) quantifier.
    pub p_u: f64,
    /// Negated subject noun.
    pub p_sbar: f64,
    /// Negated object: the predicate of a syllogistic or relative-clause
    /// sentence, the object noun of a relational one.
    pub p_obar: f64,
    /// Negated predicate of the syllogistic sentences of R and R†. Its defaults
    /// are calibrated for a satisfiable fraction near one half.
    pub p_pbar: f64,
    /// Relational sentence.
    pub p_r: f64,
    /// Negated verb.
    pub p_vbar: f64,
    /// Universal inner quantifier.
    pub p_uu: f64,
    /// Negated relative clause.
    pub p_rbar: f64,
    pub n: usize,
    pub v: usize,
    pub s: usize,
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no admissible sentence after {attempts} draws")]
    GenerationStuck { attempts: usize },
    #[error("no verdict for s={s}, index {index} after {attempts} fresh instances")]
    LabelingFailed { s: usize, index: usize, attempts: usize },
    #[error("instance {index} is unsatisfiable but has no proof statistics")]
    MissingProof { index: usize },
    #[error("no unsatisfiable instance meets the proof-length threshold")]
    EmptyHardSet,
    #[error(transparent)]
    Decide(#[from] DecideError),
}

fn round_half_up(x: f64) -> usize {
    (x + 0.5 + 1e-9).floor().max(0.0) as usize
}

/// Default parameters for a fragment at instance size `s`.
pub fn default_params(f: Fragment, s: usize) -> GenParams {
    let base = GenParams {
        p_u: 0.8,
        p_sbar: 0.0,
        p_obar: 0.5,
        p_pbar: 0.0,
        p_r: 0.0,
        p_vbar: 0.0,
        p_uu: 0.0,
        p_rbar: 0.0,
        n: round_half_up(0.8 * s as f64),
        v: 0,
        s,
    };
    let v = round_half_up(0.15 * s as f64).max(1);
    match f {
        Fragment::S => base,
        Fragment::SDag => GenParams { p_sbar: 0.5, ..base },
        Fragment::R => GenParams {
            p_obar: 0.0,
            p_pbar: 0.125,
            p_r: 0.2,
            p_vbar: 0.5,
            p_uu: 0.8,
            n: round_half_up(0.6 * s as f64),
            v,
            ..base
        },
        Fragment::RDag => GenParams {
            p_sbar: 0.5,
            p_obar: 0.0,
            p_pbar: 0.3,
            p_r: 0.2,
            p_vbar: 0.5,
            p_uu: 0.8,
            n: round_half_up(0.64 * s as f64),
            v,
            ..base
        },
        Fragment::SRel => GenParams { n: round_half_up(0.59 * s as f64 + 0.225), ..base },
        Fragment::SRelNeg => GenParams { p_rbar: 0.5, n: round_half_up(0.59 * s as f64 + 0.225), ..base },
    }
}

impl GenParams {
    pub fn validate(&self, f: Fragment) -> Result<(), GenError> {
        let bad = |m: String| Err(GenError::InvalidParams(m));
        let probs = [
            ("p_u", self.p_u),
            ("p_sbar", self.p_sbar),
            ("p_obar", self.p_obar),
            ("p_pbar", self.p_pbar),
            ("p_r", self.p_r),
            ("p_vbar", self.p_vbar),
            ("p_uu", self.p_uu),
            ("p_rbar", self.p_rbar),
        ];
        if let Some((name, p)) = probs.iter().find(|(_, p)| !(0.0..=1.0).contains(p)) {
            return bad(format!("{name}={p} is not a probability"));
        }
        if self.n == 0 || self.s == 0 {
            return bad("n and s must be positive".into());
        }
        if f.is_relational() && self.p_r > 0.0 && self.v == 0 {
            return bad("v must be positive when p_r > 0".into());
        }
        if !f.is_relational() && self.p_r > 0.0 {
            return bad(format!("p_r must be 0 for {f}"));
        }
        if f != Fragment::SRelNeg && self.p_rbar > 0.0 {
            return bad(format!("p_rbar must be 0 for {f}"));
        }
        let positive_nouns = matches!(f, Fragment::S | Fragment::R);
        if positive_nouns && self.p_sbar > 0.0 {
            return bad(format!("p_sbar must be 0 for {f}"));
        }
        if f == Fragment::R && self.p_obar > 0.0 {
            return bad("p_obar must be 0 for r".into());
        }
        Ok(())
    }
}

/// One draw from the sentence distribution, resampled while self-inconsistent.
pub fn sample_sentence(f: Fragment, p: &GenParams, rng: &mut impl Rng) -> Result<Sentence, GenError> {
    for _ in 0..MAX_SENTENCE_ATTEMPTS {
        let s = draw(f, p, rng);
        if !s.is_self_inconsistent() {
            debug_assert!(f.contains(&s), "{s:?} escapes {f}");
            return Ok(s);
        }
    }
    Err(GenError::GenerationStuck { attempts: MAX_SENTENCE_ATTEMPTS })
}

fn draw(f: Fragment, p: &GenParams, rng: &mut impl Rng) -> Sentence {
    let n = p.n as u32;
    let quant = |rng: &mut _, pu| if Rng::gen_bool(rng, pu) { Quant::Universal } else { Quant::Existential };
    let lit = |rng: &mut _, pneg| {
        let noun = Rng::gen_range(rng, 0..n);
        Literal::new(noun, !Rng::gen_bool(rng, pneg))
    };
    match f {
        Fragment::S | Fragment::SDag => {
            let q = quant(rng, p.p_u);
            let a = lit(rng, p.p_sbar);
            Sentence::syl(q, a, lit(rng, p.p_obar))
        }
        Fragment::R | Fragment::RDag if rng.gen_bool(p.p_r) => {
            let sq = quant(rng, p.p_u);
            let a = lit(rng, p.p_sbar);
            let oq = quant(rng, p.p_uu);
            let b = lit(rng, p.p_obar);
            let verb = rng.gen_range(0..p.v as u32);
            Sentence::rel(sq, a, oq, b, verb, !rng.gen_bool(p.p_vbar))
        }
        Fragment::R | Fragment::RDag => {
            let q = quant(rng, p.p_u);
            let a = lit(rng, p.p_sbar);
            Sentence::syl(q, a, lit(rng, p.p_pbar))
        }
        Fragment::SRel | Fragment::SRelNeg => {
            let q = quant(rng, p.p_u);
            let head = rng.gen_range(0..n);
            let rel = lit(rng, p.p_rbar);
            Sentence::relcl(q, head, rel, lit(rng, p.p_obar))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Sat,
    Unsat,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Sat => "sat",
            Label::Unsat => "unsat",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Random,
    Chain,
    Forallforall,
    HardFiltered,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub seed: u64,
    pub params: GenParams,
    pub construction: Construction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub fragment: Fragment,
    pub sentences: Vec<Sentence>,
    pub label: Option<Label>,
    pub meta: Meta,
    pub proof: Option<ProofStats>,
}

impl Instance {
    /// Number of distinct nouns and verbs occurring in the sentences.
    pub fn symbol_counts(&self) -> (usize, usize) {
        let nouns: std::collections::BTreeSet<_> = self.sentences.iter().flat_map(Sentence::nouns).collect();
        let verbs: std::collections::BTreeSet<_> = self.sentences.iter().filter_map(Sentence::verb).collect();
        (nouns.len(), verbs.len())
    }
}

/// `s` independent sentence draws, deterministic in `seed`.
pub fn generate_instance(f: Fragment, p: &GenParams, seed: u64) -> Result<Instance, GenError> {
    p.validate(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sentences = (0..p.s).map(|_| sample_sentence(f, p, &mut rng)).collect::<Result<_, _>>()?;
    Ok(Instance {
        fragment: f,
        sentences,
        label: None,
        meta: Meta { seed, params: p.clone(), construction: Construction::Random },
        proof: None,
    })
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Combines a running seed with one more component.
pub fn mix(seed: u64, component: u64) -> u64 {
    splitmix64(seed ^ splitmix64(component))
}

/// Seed of instance `index` of size `s`:
/// `mix(mix(mix(master, fragment id), s), index)`.
pub fn instance_seed(master: u64, f: Fragment, s: usize, index: usize) -> u64 {
    mix(mix(mix(master, f.id()), s as u64), index as u64)
}

/// Seed of the `attempt`-th replacement for an instance whose labelling yielded no verdict.
pub fn retry_seed(seed: u64, attempt: usize) -> u64 {
    if attempt == 0 {
        seed
    } else {
        mix(seed, attempt as u64)
    }
}

#[derive(Clone, Debug)]
pub enum Labeler {
    Graph,
    Monadic,
    /// Bounded model search with domain bound `max(1, #existentials)`, capped at the config's limit.
    Oracle(OracleConfig),
    Atp(Option<Prover>),
}

impl Labeler {
    pub fn for_method(m: Method, prover: Option<Prover>, max_domain: Option<usize>) -> Self {
        match m {
            Method::Graph => Labeler::Graph,
            Method::Monadic => Labeler::Monadic,
            Method::Oracle => Labeler::Oracle(OracleConfig {
                max_domain: max_domain.unwrap_or(0),
                domain_limit: 8,
                ..OracleConfig::default()
            }),
            Method::Atp => Labeler::Atp(prover),
        }
    }

    /// The complete internal decider for a monadic fragment, the prover otherwise.
    pub fn default_for(f: Fragment, prover: Option<Prover>) -> Self {
        match f {
            Fragment::S | Fragment::SDag => Labeler::Graph,
            Fragment::SRel | Fragment::SRelNeg => Labeler::Monadic,
            Fragment::R | Fragment::RDag => Labeler::Atp(prover),
        }
    }

    pub fn decide(&self, sentences: &[Sentence]) -> Result<Verdict, DecideError> {
        match self {
            Labeler::Graph => decide::decide(sentences, Backend::Graph),
            Labeler::Monadic => decide::decide(sentences, Backend::Monadic),
            Labeler::Oracle(cfg) => {
                let mut cfg = cfg.clone();
                if cfg.max_domain == 0 {
                    let ex = sentences.iter().filter(|s| !s.is_universal()).count();
                    cfg.max_domain = ex.max(1).min(cfg.domain_limit);
                }
                decide::decide(sentences, Backend::Oracle(&cfg))
            }
            Labeler::Atp(p) => decide::decide(sentences, Backend::Atp(p.as_ref())),
        }
    }

    /// Labels the instance; `Ok(false)` when the decider gave no verdict.
    pub fn label(&self, inst: &mut Instance) -> Result<bool, DecideError> {
        match self.decide(&inst.sentences)? {
            Verdict::Satisfiable { .. } => {
                inst.label = Some(Label::Sat);
                inst.proof = None;
            }
            Verdict::Unsatisfiable { proof, .. } => {
                inst.label = Some(Label::Unsat);
                inst.proof = proof;
            }
            Verdict::Unknown => return Ok(false),
        }
        Ok(true)
    }
}

#[derive(Clone, Debug)]
pub struct CorpusSpec {
    pub fragment: Fragment,
    pub min_s: usize,
    pub max_s: usize,
    pub per_size: usize,
    pub master_seed: u64,
}

/// Parameter overrides applied on top of [`default_params`] for every size.
#[derive(Clone, Debug, Default)]
pub struct ParamOverrides {
    pub p_u: Option<f64>,
    pub p_sbar: Option<f64>,
    pub p_obar: Option<f64>,
    pub p_pbar: Option<f64>,
    pub p_r: Option<f64>,
    pub p_vbar: Option<f64>,
    pub p_uu: Option<f64>,
    pub p_rbar: Option<f64>,
    pub n: Option<usize>,
    pub v: Option<usize>,
}

impl ParamOverrides {
    pub fn apply(&self, mut p: GenParams) -> GenParams {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(x) = self.$f { p.$f = x; } )* };
        }
        set!(p_u, p_sbar, p_obar, p_pbar, p_r, p_vbar, p_uu, p_rbar, n, v);
        p
    }
}

/// Labelled instances for every `s` in the range, `per_size` each, ordered
/// by `(s, index)`. Undecided instances are replaced by fresh draws.
pub fn generate_corpus(
    spec: &CorpusSpec,
    overrides: &ParamOverrides,
    labeler: &Labeler,
) -> Result<Vec<Instance>, GenError> {
    if spec.min_s == 0 || spec.min_s > spec.max_s {
        return Err(GenError::InvalidParams(format!("bad size range [{}, {}]", spec.min_s, spec.max_s)));
    }
    if matches!(labeler, Labeler::Atp(None)) {
        return Err(DecideError::ProverUnavailable.into());
    }
    let jobs: Vec<(usize, usize)> =
        (spec.min_s..=spec.max_s).flat_map(|s| (0..spec.per_size).map(move |i| (s, i))).collect();
    jobs.par_iter()
        .map(|&(s, index)| {
            let params = overrides.apply(default_params(spec.fragment, s));
            let seed = instance_seed(spec.master_seed, spec.fragment, s, index);
            for attempt in 0..MAX_RELABEL_ATTEMPTS {
                let mut inst = generate_instance(spec.fragment, &params, retry_seed(seed, attempt))?;
                if labeler.label(&mut inst)? {
                    return Ok(inst);
                }
            }
            Err(GenError::LabelingFailed { s, index, attempts: MAX_RELABEL_ATTEMPTS })
        })
        .collect()
}

/// Drops unsatisfiable instances with proof length below `l_min`, then
/// subsamples satisfiable ones to restore the input satisfiable fraction.
pub fn filter_hard(corpus: Vec<Instance>, l_min: usize, seed: u64) -> Result<Vec<Instance>, GenError> {
    if l_min == 0 {
        return Ok(corpus);
    }
    let mut sat = Vec::new();
    let mut hard = Vec::new();
    for (i, inst) in corpus.iter().enumerate() {
        match inst.label {
            Some(Label::Unsat) => {
                let proof = inst.proof.ok_or(GenError::MissingProof { index: i })?;
                if proof.l >= l_min {
                    hard.push(i);
                }
            }
            Some(Label::Sat) => sat.push(i),
            None => {}
        }
    }
    if hard.is_empty() {
        return Err(GenError::EmptyHardSet);
    }
    let unsat_total = corpus.len() - sat.len();
    let fraction = sat.len() as f64 / (sat.len() + unsat_total).max(1) as f64;
    let want = round_half_up(fraction * hard.len() as f64 / (1.0 - fraction).max(f64::EPSILON)).min(sat.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep: Vec<usize> = sample(&mut rng, sat.len(), want).into_iter().map(|k| sat[k]).collect();
    keep.extend(hard);
    keep.sort_unstable();
    let mut slots: Vec<Option<Instance>> = corpus.into_iter().map(Some).collect();
    Ok(keep
        .into_iter()
        .map(|i| {
            let mut inst = slots[i].take().expect("index kept once");
            inst.meta.construction = Construction::HardFiltered;
            inst
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn defaults_follow_the_ratios() {
        let p = default_params(Fragment::SDag, 20);
        assert_eq!((p.p_u, p.p_sbar, p.p_obar, p.n), (0.8, 0.5, 0.5, 16));
        let p = default_params(Fragment::R, 20);
        assert_eq!((p.p_r, p.p_sbar, p.p_obar, p.p_vbar, p.p_u, p.p_uu), (0.2, 0.0, 0.0, 0.5, 0.8, 0.8));
        assert_eq!((p.n, p.v), (12, 3));
        assert_eq!(default_params(Fragment::SRel, 30).n, 18);
        assert_eq!(default_params(Fragment::RDag, 25).n, 16);
        assert_eq!(default_params(Fragment::R, 2).v, 1);
        for f in Fragment::ALL {
            default_params(f, 15).validate(f).unwrap();
        }
    }

    #[test]
    fn forced_branches() {
        let mut p = default_params(Fragment::SDag, 10);
        (p.p_u, p.p_sbar, p.p_obar) = (1.0, 0.0, 0.0);
        let mut r = rng(3);
        for _ in 0..200 {
            let s = sample_sentence(Fragment::SDag, &p, &mut r).unwrap();
            let Sentence::Syllogistic { q, subject, predicate } = s else { panic!() };
            assert!(q == Quant::Universal && subject.positive && predicate.positive);
        }
    }

    #[test]
    fn relational_fragment_never_negates_nouns_of_relational_sentences() {
        let p = default_params(Fragment::R, 30);
        let mut r = rng(4);
        for _ in 0..2000 {
            let s = sample_sentence(Fragment::R, &p, &mut r).unwrap();
            assert!(Fragment::R.contains(&s));
            if let Sentence::Relational { subject, object, .. } = s {
                assert!(subject.positive && object.positive);
            }
        }
    }

    #[test]
    fn single_noun_existentials_get_stuck() {
        let p = GenParams { n: 1, p_u: 0.0, ..default_params(Fragment::SDag, 4) };
        // ∃(+p,+p) and ∃(−p,−p) are admissible; forcing opposite polarities leaves only clashes.
        let p = GenParams { p_sbar: 0.0, p_obar: 1.0, ..p };
        assert!(matches!(sample_sentence(Fragment::SDag, &p, &mut rng(5)), Err(GenError::GenerationStuck { .. })));
        let p = GenParams { p_u: 1.0, ..p };
        assert!(sample_sentence(Fragment::SDag, &p, &mut rng(5)).is_ok());
    }

    #[test]
    fn instances_are_deterministic() {
        let p = default_params(Fragment::SDag, 15);
        let a = generate_instance(Fragment::SDag, &p, 1).unwrap();
        assert_eq!(a, generate_instance(Fragment::SDag, &p, 1).unwrap());
        assert_eq!(a.sentences.len(), 15);
        assert_eq!(p.n, 12);
        assert!(a.sentences.iter().all(|s| s.nouns().iter().all(|n| n.0 < 12)));
        assert_ne!(a, generate_instance(Fragment::SDag, &p, 2).unwrap());
    }

    #[test]
    fn universal_rate_matches_p_u() {
        let p = default_params(Fragment::SDag, 20);
        let mut r = rng(6);
        let draws = 100_000;
        let u = (0..draws).filter(|_| sample_sentence(Fragment::SDag, &p, &mut r).unwrap().is_universal()).count();
        let rate = u as f64 / draws as f64;
        // rejection only removes existentials, so the rate sits slightly above p_u
        assert!((rate - 0.8).abs() < 0.01, "rate {rate}");
    }

    #[test]
    fn invalid_params_are_rejected() {
        let p = GenParams { p_u: 1.5, ..default_params(Fragment::SDag, 10) };
        assert!(matches!(p.validate(Fragment::SDag), Err(GenError::InvalidParams(_))));
        let p = GenParams { p_r: 0.2, ..default_params(Fragment::SDag, 10) };
        assert!(p.validate(Fragment::SDag).is_err());
        let p = GenParams { v: 0, ..default_params(Fragment::R, 10) };
        assert!(p.validate(Fragment::R).is_err());
        let p = GenParams { p_sbar: 0.5, ..default_params(Fragment::S, 10) };
        assert!(p.validate(Fragment::S).is_err());
    }

    #[test]
    fn seeds_are_distinct_across_coordinates() {
        let mut seen = std::collections::HashSet::new();
        for f in Fragment::ALL {
            for s in 15..=30 {
                for i in 0..50 {
                    assert!(seen.insert(instance_seed(7, f, s, i)));
                }
            }
        }
    }

    #[test]
    fn small_corpus_is_ordered_and_labelled() {
        let spec = CorpusSpec { fragment: Fragment::SDag, min_s: 15, max_s: 17, per_size: 4, master_seed: 9 };
        let c = generate_corpus(&spec, &ParamOverrides::default(), &Labeler::Graph).unwrap();
        assert_eq!(c.len(), 12);
        assert!(c.iter().all(|i| i.label.is_some()));
        let sizes: Vec<usize> = c.iter().map(|i| i.sentences.len()).collect();
        assert_eq!(sizes, [15, 15, 15, 15, 16, 16, 16, 16, 17, 17, 17, 17]);
        let again = generate_corpus(&spec, &ParamOverrides::default(), &Labeler::Graph).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn srel_corpus_labels_agree_with_oracle() {
        let spec = CorpusSpec { fragment: Fragment::SRel, min_s: 4, max_s: 6, per_size: 10, master_seed: 3 };
        let o = ParamOverrides { n: Some(4), ..Default::default() };
        let c = generate_corpus(&spec, &o, &Labeler::Monadic).unwrap();
        let oracle = Labeler::for_method(Method::Oracle, None, None);
        for inst in &c {
            let bit = oracle.decide(&inst.sentences).unwrap().bit();
            assert_eq!(bit, Some(inst.label == Some(Label::Sat)));
        }
    }

    #[test]
    fn atp_labelling_needs_a_prover() {
        let spec = CorpusSpec { fragment: Fragment::R, min_s: 15, max_s: 15, per_size: 1, master_seed: 0 };
        let r = generate_corpus(&spec, &ParamOverrides::default(), &Labeler::Atp(None));
        assert!(matches!(r, Err(GenError::Decide(DecideError::ProverUnavailable))));
    }

    fn fake(label: Label, l: Option<usize>) -> Instance {
        Instance {
            fragment: Fragment::SDag,
            sentences: vec![],
            label: Some(label),
            meta: Meta { seed: 0, params: default_params(Fragment::SDag, 1), construction: Construction::Random },
            proof: l.map(|l| ProofStats { l, d: 1 }),
        }
    }

    #[test]
    fn hard_filter_keeps_the_ratio() {
        let mut c: Vec<Instance> = (0..100).map(|_| fake(Label::Sat, None)).collect();
        c.extend((0..100).map(|i| fake(Label::Unsat, Some(i))));
        let out = filter_hard(c.clone(), 50, 1).unwrap();
        let sat = out.iter().filter(|i| i.label == Some(Label::Sat)).count();
        assert_eq!(out.len() - sat, 50);
        assert!((sat as f64 / out.len() as f64 - 0.5).abs() <= 0.01);
        assert!(out.iter().all(|i| i.meta.construction == Construction::HardFiltered));
        assert_eq!(filter_hard(c.clone(), 0, 1).unwrap(), c);
        assert!(matches!(filter_hard(c, 1000, 1), Err(GenError::EmptyHardSet)));
        assert!(matches!(filter_hard(vec![fake(Label::Unsat, None)], 5, 1), Err(GenError::MissingProof { index: 0 })));
    }
}
