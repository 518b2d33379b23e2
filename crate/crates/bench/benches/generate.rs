use criterion::{black_box, criterion_group, criterion_main, Criterion};
use fragsat_core::construct::{make_constructed_syllogistic, ChainKind, ChainSpec};
use fragsat_core::gen::{default_params, generate_instance, Label};
use fragsat_core::surface::{parse_instance, realize_instance};
use fragsat_core::{Fragment, Vocabulary};

fn generate(c: &mut Criterion) {
    let p = default_params(Fragment::RDag, 30);
    c.bench_function("generate/rdag s=30", |b| {
        let mut seed = 0;
        b.iter(|| {
            seed += 1;
            generate_instance(Fragment::RDag, black_box(&p), seed).unwrap()
        })
    });

    let p = default_params(Fragment::SDag, 20);
    c.bench_function("construct/chain d=6 s=20", |b| {
        let mut seed = 0;
        b.iter(|| {
            seed += 1;
            let spec = ChainSpec { d: 6, kind: ChainKind::III, target: Label::Unsat, s: 20 };
            make_constructed_syllogistic(&spec, &p, seed).unwrap()
        })
    });

    let vocab = Vocabulary::default_train();
    let inst = generate_instance(Fragment::RDag, &default_params(Fragment::RDag, 30), 7).unwrap();
    let text = realize_instance(&inst.sentences, &vocab).unwrap();
    c.bench_function("surface/round-trip s=30", |b| {
        b.iter(|| parse_instance(&realize_instance(black_box(&inst.sentences), &vocab).unwrap(), &vocab).unwrap())
    });
    c.bench_function("surface/parse s=30", |b| b.iter(|| parse_instance(black_box(&text), &vocab).unwrap()));
}

criterion_group!(benches, generate);
criterion_main!(benches);
