use fragsat_core::corpus::{parse_jsonl, stats, to_record, write_jsonl, Split};
use fragsat_core::decide::{decide_graph, decide_monadic};
use fragsat_core::gen::{generate_corpus, CorpusSpec, Label, Labeler, ParamOverrides};
use fragsat_core::surface::parse_instance;
use fragsat_core::{Fragment, Vocabulary};

#[test]
fn generated_corpus_survives_serialisation_and_redecision() {
    let vocab = Vocabulary::default_eval();
    for (f, labeler) in [(Fragment::SDag, Labeler::Graph), (Fragment::SRelNeg, Labeler::Monadic)] {
        let spec = CorpusSpec { fragment: f, min_s: 10, max_s: 14, per_size: 20, master_seed: 3 };
        let insts = generate_corpus(&spec, &ParamOverrides::default(), &labeler).unwrap();
        let records: Vec<_> = insts
            .iter()
            .enumerate()
            .map(|(i, inst)| to_record(inst, format!("{f}-{i}"), Split::Eval, &vocab).unwrap())
            .collect();
        let mut buf = Vec::new();
        write_jsonl(&records, &mut buf).unwrap();
        let back = parse_jsonl(buf.as_slice()).unwrap();
        assert_eq!(back, records);
        for r in &back {
            let from_terms = r.parse_sentences(&vocab).unwrap();
            assert_eq!(parse_instance(&r.text, &vocab).unwrap(), from_terms);
            let sat = match f {
                Fragment::SDag => decide_graph(&from_terms).unwrap().is_sat(),
                _ => decide_monadic(&from_terms).unwrap().is_sat(),
            };
            assert_eq!(sat, r.label == Label::Sat, "{}", r.id);
        }
        assert_eq!(stats(&back).count, 100);
    }
}
