//! JSONL records and corpus statistics.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gen::{mix, Construction, Instance, Label};
use crate::surface::{realize_instance, SurfaceError};
use crate::syntax::{Fragment, Noun, Sentence, TermError, Verb};
use crate::vocab::Vocabulary;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Eval,
}

impl std::str::FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "train" => Ok(Split::Train),
            "eval" => Ok(Split::Eval),
            _ => Err(format!("unknown split {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub fragment: Fragment,
    pub sentences: Vec<String>,
    pub text: String,
    pub label: Label,
    pub s: usize,
    pub n: usize,
    pub v: usize,
    pub l: Option<usize>,
    pub d: Option<usize>,
    pub seed: u64,
    pub construction: Construction,
    pub split: Split,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("instance is unlabelled")]
    Unlabelled,
    #[error("instance needs {needed} {kind}, the vocabulary has {available}")]
    VocabTooSmall { kind: &'static str, needed: usize, available: usize },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// Maps the abstract symbols of `inst` injectively into the vocabulary,
/// choosing the words at random from `seed`.
pub fn lexicalize(sentences: &[Sentence], vocab: &Vocabulary, seed: u64) -> Result<Vec<Sentence>, CorpusError> {
    let nouns: Vec<Noun> = sentences.iter().flat_map(Sentence::nouns).collect::<BTreeSet<_>>().into_iter().collect();
    let verbs: Vec<Verb> = sentences.iter().filter_map(Sentence::verb).collect::<BTreeSet<_>>().into_iter().collect();
    let (nv, vv) = (vocab.nouns().len(), vocab.verbs().len());
    if nouns.len() > nv {
        return Err(CorpusError::VocabTooSmall { kind: "nouns", needed: nouns.len(), available: nv });
    }
    if verbs.len() > vv {
        return Err(CorpusError::VocabTooSmall { kind: "verbs", needed: verbs.len(), available: vv });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noun_words = sample(&mut rng, nv, nouns.len()).into_vec();
    let verb_words = sample(&mut rng, vv, verbs.len()).into_vec();
    let nmap: BTreeMap<Noun, Noun> = nouns.iter().zip(noun_words).map(|(a, w)| (*a, Noun(w as u32))).collect();
    let vmap: BTreeMap<Verb, Verb> = verbs.iter().zip(verb_words).map(|(a, w)| (*a, Verb(w as u32))).collect();
    Ok(sentences.iter().map(|s| s.map_symbols(|n| nmap[&n], |v| vmap[&v])).collect())
}

/// Seed of the word choice for an instance.
pub fn lexical_seed(instance_seed: u64) -> u64 {
    mix(instance_seed, 0x01e7_1ca1)
}

/// The record of a labelled instance realised in `vocab`.
pub fn to_record(inst: &Instance, id: String, split: Split, vocab: &Vocabulary) -> Result<Record, CorpusError> {
    let label = inst.label.ok_or(CorpusError::Unlabelled)?;
    let words = lexicalize(&inst.sentences, vocab, lexical_seed(inst.meta.seed))?;
    let sentences = words.iter().map(|s| s.to_term(vocab)).collect::<Result<_, _>>()?;
    let proof = inst.proof.filter(|_| label == Label::Unsat);
    Ok(Record {
        id,
        fragment: inst.fragment,
        sentences,
        text: realize_instance(&words, vocab)?,
        label,
        s: inst.sentences.len(),
        n: inst.meta.params.n,
        v: inst.meta.params.v,
        l: proof.map(|p| p.l),
        d: proof.map(|p| p.d),
        seed: inst.meta.seed,
        construction: inst.meta.construction,
        split,
    })
}

impl Record {
    /// The record's sentences, read back with the vocabulary of its split.
    pub fn parse_sentences(&self, vocab: &Vocabulary) -> Result<Vec<Sentence>, CorpusError> {
        Ok(self.sentences.iter().map(|t| Sentence::parse_term(t, vocab)).collect::<Result<_, _>>()?)
    }
}

pub fn write_jsonl<'a>(records: impl IntoIterator<Item = &'a Record>, out: impl Write) -> Result<(), CorpusError> {
    let mut out = BufWriter::new(out);
    for r in records {
        serde_json::to_writer(&mut out, r).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit_jsonl(records: &[Record], path: &Path) -> Result<(), CorpusError> {
    write_jsonl(records, File::create(path)?)
}

/// Reads one record per non-blank line; unknown fields are ignored.
pub fn parse_jsonl(input: impl BufRead) -> Result<Vec<Record>, CorpusError> {
    parse_jsonl_values(input)?
        .into_iter()
        .map(|(line, v)| {
            serde_json::from_value(v).map_err(|e| CorpusError::Schema { line, message: e.to_string() })
        })
        .collect()
}

/// Reads each non-blank line as a JSON object, paired with its 1-based line number.
pub fn parse_jsonl_values(input: impl BufRead) -> Result<Vec<(usize, serde_json::Value)>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v: serde_json::Value =
            serde_json::from_str(&line).map_err(|e| CorpusError::Schema { line: i + 1, message: e.to_string() })?;
        if !v.is_object() {
            return Err(CorpusError::Schema { line: i + 1, message: "expected a JSON object".into() });
        }
        out.push((i + 1, v));
    }
    Ok(out)
}

pub fn read_jsonl(path: &Path) -> Result<Vec<Record>, CorpusError> {
    parse_jsonl(BufReader::new(File::open(path)?))
}

/// Upper bounds of the proof-length buckets; the last bucket is open.
pub const L_BUCKETS: [usize; 4] = [10, 20, 30, 40];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bucket {
    pub range: String,
    pub count: usize,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SizeStats {
    pub count: usize,
    pub satisfiable_fraction: f64,
}

/// Aggregate statistics. Histogram fractions are relative to the
/// unsatisfiable records carrying `l` (resp. `d`), all zero when none do.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusStats {
    pub count: usize,
    pub satisfiable_fraction: f64,
    pub unsat_with_proof: usize,
    pub l_histogram: Vec<Bucket>,
    pub mean_d: Option<f64>,
    pub d_histogram: BTreeMap<usize, f64>,
    pub per_s: BTreeMap<usize, SizeStats>,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

pub fn stats(records: &[Record]) -> CorpusStats {
    let count = records.len();
    let sat = records.iter().filter(|r| r.label == Label::Sat).count();
    let ls: Vec<usize> = records.iter().filter(|r| r.label == Label::Unsat).filter_map(|r| r.l).collect();
    let ds: Vec<usize> = records.iter().filter(|r| r.label == Label::Unsat).filter_map(|r| r.d).collect();
    let mut counts = [0usize; L_BUCKETS.len() + 1];
    for &l in &ls {
        counts[L_BUCKETS.iter().position(|&hi| l < hi).unwrap_or(L_BUCKETS.len())] += 1;
    }
    let l_histogram = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let lo = if i == 0 { 0 } else { L_BUCKETS[i - 1] };
            let range = match L_BUCKETS.get(i) {
                Some(hi) => format!("[{lo},{hi})"),
                None => format!("[{lo},inf)"),
            };
            Bucket { range, count: c, fraction: ratio(c, ls.len()) }
        })
        .collect();
    let mut d_counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &d in &ds {
        *d_counts.entry(d).or_default() += 1;
    }
    let mut per_s_counts: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for r in records {
        let e = per_s_counts.entry(r.s).or_default();
        e.0 += 1;
        e.1 += usize::from(r.label == Label::Sat);
    }
    CorpusStats {
        count,
        satisfiable_fraction: ratio(sat, count),
        unsat_with_proof: ls.len(),
        l_histogram,
        mean_d: (!ds.is_empty()).then(|| ratio(ds.iter().sum(), ds.len())),
        d_histogram: d_counts.into_iter().map(|(d, c)| (d, ratio(c, ds.len()))).collect(),
        per_s: per_s_counts
            .into_iter()
            .map(|(s, (c, k))| (s, SizeStats { count: c, satisfiable_fraction: ratio(k, c) }))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{default_params, generate_corpus, CorpusSpec, Labeler, ParamOverrides};
    use crate::surface::parse_instance;
    use proptest::prelude::*;

    fn record(i: usize, label: Label, l: Option<usize>) -> Record {
        Record {
            id: format!("r{i}"),
            fragment: Fragment::SDag,
            sentences: vec!["all(+artist,+beekeeper)".into()],
            text: "Every artist is a beekeeper.".into(),
            label,
            s: 1 + i % 3,
            n: 2,
            v: 0,
            l,
            d: l.map(|l| l.min(3)),
            seed: i as u64 * 7919,
            construction: Construction::Random,
            split: Split::Train,
        }
    }

    fn sample_records() -> Vec<Record> {
        let spec = CorpusSpec { fragment: Fragment::SDag, min_s: 15, max_s: 18, per_size: 3, master_seed: 2 };
        let vocab = Vocabulary::default_train();
        generate_corpus(&spec, &ParamOverrides::default(), &Labeler::Graph)
            .unwrap()
            .iter()
            .enumerate()
            .map(|(i, inst)| to_record(inst, format!("sdag-{i}"), Split::Train, &vocab).unwrap())
            .collect()
    }

    #[test]
    fn jsonl_round_trip() {
        let records: Vec<Record> = (0..1000)
            .map(|i| record(i, if i % 2 == 0 { Label::Sat } else { Label::Unsat }, (i % 2 == 1).then_some(i)))
            .collect();
        let mut buf = Vec::new();
        write_jsonl(&records, &mut buf).unwrap();
        assert_eq!(parse_jsonl(&buf[..]).unwrap(), records);
        let mut empty = Vec::new();
        write_jsonl(&[], &mut empty).unwrap();
        assert!(empty.is_empty());
        assert!(parse_jsonl(&empty[..]).unwrap().is_empty());
    }

    #[test]
    fn exact_field_names() {
        let v = serde_json::to_value(record(0, Label::Unsat, Some(4))).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut want =
            ["id", "fragment", "sentences", "text", "label", "s", "n", "v", "l", "d", "seed", "construction", "split"];
        want.sort();
        let mut got = keys.clone();
        got.sort();
        assert_eq!(got, want);
        assert_eq!(v["label"], "unsat");
        assert_eq!(v["construction"], "random");
        assert_eq!(serde_json::to_value(Construction::HardFiltered).unwrap(), "hard-filtered");
    }

    #[test]
    fn missing_field_is_a_schema_error_with_line() {
        let good = serde_json::to_string(&record(0, Label::Sat, None)).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&good).unwrap();
        v.as_object_mut().unwrap().remove("label");
        let text = format!("{good}\n{v}\n");
        match parse_jsonl(text.as_bytes()) {
            Err(CorpusError::Schema { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("label"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_tolerated() {
        let mut v = serde_json::to_value(record(0, Label::Sat, None)).unwrap();
        v["verdict"] = "sat".into();
        assert_eq!(parse_jsonl(v.to_string().as_bytes()).unwrap()[0], record(0, Label::Sat, None));
    }

    #[test]
    fn stats_arithmetic() {
        let rs = vec![
            record(0, Label::Sat, None),
            record(1, Label::Sat, None),
            record(2, Label::Unsat, Some(5)),
            record(3, Label::Unsat, Some(45)),
        ];
        let st = stats(&rs);
        assert_eq!(st.count, 4);
        assert_eq!(st.satisfiable_fraction, 0.5);
        let fr: Vec<f64> = st.l_histogram.iter().map(|b| b.fraction).collect();
        assert_eq!(fr, vec![0.5, 0.0, 0.0, 0.0, 0.5]);
        assert_eq!(st.l_histogram[4].range, "[40,inf)");
        assert_eq!(st.mean_d, Some(3.0));
        assert_eq!(st.d_histogram.values().sum::<f64>(), 1.0);
    }

    #[test]
    fn records_realise_their_sentences() {
        let vocab = Vocabulary::default_train();
        for r in sample_records() {
            let parsed = parse_instance(&r.text, &vocab).unwrap();
            assert_eq!(parsed, r.parse_sentences(&vocab).unwrap());
            assert_eq!(parsed.len(), r.s);
        }
    }

    #[test]
    fn lexicalisation_is_injective() {
        let vocab = Vocabulary::default_eval();
        let p = default_params(Fragment::RDag, 30);
        let inst = crate::gen::generate_instance(Fragment::RDag, &p, 4).unwrap();
        let words = lexicalize(&inst.sentences, &vocab, 1).unwrap();
        let a: BTreeSet<_> = inst.sentences.iter().flat_map(Sentence::nouns).collect();
        let b: BTreeSet<_> = words.iter().flat_map(Sentence::nouns).collect();
        assert_eq!(a.len(), b.len());
        let tiny = Vocabulary::new(vec!["ant".into()], vec![]).unwrap();
        assert!(matches!(lexicalize(&inst.sentences, &tiny, 1), Err(CorpusError::VocabTooSmall { .. })));
    }

    proptest! {
        #[test]
        fn stats_are_permutation_invariant(seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let mut rs: Vec<Record> = (0..40)
                .map(|i| record(i, if i % 3 == 0 { Label::Sat } else { Label::Unsat }, (i % 3 != 0).then_some(i * 3)))
                .collect();
            let before = stats(&rs);
            rs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(before, stats(&rs));
        }
    }
}
