use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use fragsat_core::decide::{bounded_model_search, decide_graph, decide_monadic, OracleConfig};
use fragsat_core::gen::{default_params, generate_instance, GenParams};
use fragsat_core::Fragment;

fn instances(f: Fragment, p: &GenParams, count: u64) -> Vec<Vec<fragsat_core::Sentence>> {
    (0..count).map(|i| generate_instance(f, p, i).unwrap().sentences).collect()
}

fn decide(c: &mut Criterion) {
    let sdag = instances(Fragment::SDag, &default_params(Fragment::SDag, 30), 10_000);
    c.bench_function("graph/sdag s=30 x10^4", |b| {
        b.iter(|| sdag.iter().filter(|s| decide_graph(black_box(s)).unwrap().is_sat()).count())
    });
    c.bench_function("monadic/sdag s=30 x10^4", |b| {
        b.iter(|| sdag.iter().filter(|s| decide_monadic(black_box(s)).unwrap().is_sat()).count())
    });

    let srel = instances(Fragment::SRelNeg, &default_params(Fragment::SRelNeg, 30), 1_000);
    c.bench_function("monadic/srelneg s=30 x10^3", |b| {
        b.iter(|| srel.iter().filter(|s| decide_monadic(black_box(s)).unwrap().is_sat()).count())
    });

    let small = GenParams { n: 4, ..default_params(Fragment::SDag, 8) };
    let tiny = instances(Fragment::SDag, &small, 200);
    c.bench_function("oracle/sdag n=4 s=8 x200", |b| {
        b.iter_batched(
            || OracleConfig { domain_limit: 8, ..OracleConfig::new(3) },
            |cfg| tiny.iter().filter(|s| bounded_model_search(s, &cfg).unwrap().is_sat()).count(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, decide);
criterion_main!(benches);
