use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kjnn_core::{
    build_composite, build_rgg, build_symmetric_kj, build_symmetric_knn, critical_radius, is_connected,
    pairwise_rankings, run_trial, sample_uniform_points, ExperimentConfig, TopologyKind, TopologyParams,
};

fn rankings(c: &mut Criterion) {
    let mut group = c.benchmark_group("pairwise_rankings");
    for n in [100, 500, 1000] {
        let cloud = sample_uniform_points(n, 1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &cloud, |b, cloud| {
            b.iter(|| pairwise_rankings(cloud))
        });
    }
    group.finish();
}

fn builders(c: &mut Criterion) {
    let n = 1000;
    let cloud = sample_uniform_points(n, 2).unwrap();
    let ranking = pairwise_rankings(&cloud);
    let params = TopologyParams::new(5, 3).unwrap();
    let r = critical_radius(n, 5, 3.0).unwrap().r_n;

    let mut group = c.benchmark_group("build_n1000");
    group.bench_function("sym_knn_k5", |b| b.iter(|| build_symmetric_knn(&ranking, 5).unwrap()));
    group.bench_function("kj_5_3", |b| b.iter(|| build_symmetric_kj(&ranking, params).unwrap()));
    group.bench_function("rgg_formula", |b| b.iter(|| build_rgg(&cloud, r).unwrap()));
    group.bench_function("composite_5_3", |b| {
        b.iter(|| build_composite(&cloud, &ranking, params, r).unwrap())
    });
    let g = build_symmetric_kj(&ranking, params).unwrap();
    group.bench_function("is_connected", |b| b.iter(|| is_connected(&g)));
    group.finish();
}

fn trial(c: &mut Criterion) {
    let config = ExperimentConfig::new(TopologyKind::KjNnRgg, 5, 3).with_n_values(vec![500]);
    c.bench_function("run_trial_composite_n500", |b| b.iter(|| run_trial(&config, 500, 0).unwrap()));
}

criterion_group!(benches, rankings, builders, trial);
criterion_main!(benches);
