use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use colearn_core::instances::{gen_class_dup, gen_psi};
use colearn_core::learners::{erm_learn, tree_learn, FiniteHypothesisClass};
use colearn_core::mw::{run, Algorithm, RunConfig, TestMode};
use colearn_core::{Hypothesis, LabeledExample, Point, SampleSizeProfile};

fn erm(c: &mut Criterion) {
    let class = FiniteHypothesisClass::all_binary(12, Some(11)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sample: Vec<_> = (0..2000)
        .map(|_| {
            let x = rng.random_range(0..12u32);
            LabeledExample::indexed(x, (x % 3 == 0) as u32)
        })
        .collect();
    c.bench_function("erm_all_binary_12_n2000", |b| {
        b.iter(|| erm_learn(black_box(&sample), &class).unwrap())
    });
}

fn tree(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let sample: Vec<_> = (0..2000)
        .map(|_| {
            let v: Vec<f64> = (0..4).map(|_| rng.random::<f64>()).collect();
            let label = ((v[0] > 0.5) ^ (v[1] > 0.3)) as u32;
            LabeledExample::new(Point::features(v), label)
        })
        .collect();
    c.bench_function("tree_depth6_n2000_f4", |b| {
        b.iter(|| tree_learn(black_box(&sample), 6, 1).unwrap())
    });
}

fn plurality(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let children: Vec<_> = (0..50)
        .map(|_| {
            Hypothesis::member(
                0,
                None,
                (0..64).map(|_| rng.random_range(0..2u32)).collect(),
            )
        })
        .collect();
    let points: Vec<_> = (0..64).map(Point::Index).collect();
    let plain = Hypothesis::plurality(children.clone());
    let cached = Hypothesis::plurality_cached(children, 64);
    let mut group = c.benchmark_group("plurality_50x64");
    group.bench_function("vote", |b| {
        b.iter(|| points.iter().map(|p| plain.predict(p)).sum::<u32>())
    });
    group.bench_function("cached", |b| {
        b.iter(|| points.iter().map(|p| cached.predict(p)).sum::<u32>())
    });
    group.finish();
}

fn mw_run(c: &mut Criterion) {
    let mut group = c.benchmark_group("mweights_tuned");
    group.sample_size(20);
    for k in [8usize, 32] {
        let inst = gen_psi(k, 2, 0.1, 5).unwrap().to_instance();
        let cfg = RunConfig::new(Algorithm::MWeights, 0.1, 0.1, 3)
            .with_profile(SampleSizeProfile::tuned())
            .with_seed(9);
        group.bench_with_input(BenchmarkId::new("psi_d2", k), &inst, |b, inst| {
            b.iter(|| run(inst, &cfg).unwrap())
        });
    }
    let dup = gen_class_dup(32, 20, 20, 5).unwrap().to_instance();
    let cfg = RunConfig::new(Algorithm::MWeights, 0.1, 0.9, 40)
        .with_profile(SampleSizeProfile::tuned())
        .with_test_mode(TestMode::Exact);
    group.bench_function("class_dup_k32_exact", |b| {
        b.iter(|| run(&dup, &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, erm, tree, plurality, mw_run);
criterion_main!(benches);
