use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use knotcrypt::invariants::{jones_batch, kauffman_bracket_with, BracketEngine};
use knotcrypt::table::KnotTable;
use knotcrypt::{connected_sum, Diagram, Parallelism};

const MODES: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)];

fn fixtures(t: &KnotTable) -> Vec<(String, Diagram)> {
    let pd = |n: &str| t.get(n).unwrap().pd.clone();
    vec![
        ("8_19".into(), pd("8_19")),
        ("11n34".into(), pd("11n34")),
        ("8_2#7_7".into(), connected_sum(&pd("8_2"), &pd("7_7")).unwrap()),
        ("8_17#8_18".into(), connected_sum(&pd("8_17"), &pd("8_18")).unwrap()),
    ]
}

fn enumeration(c: &mut Criterion) {
    let t = KnotTable::bundled();
    let mut g = c.benchmark_group("enumeration");
    g.sample_size(10);
    for (name, d) in fixtures(&t) {
        for (label, mode) in MODES {
            g.bench_with_input(BenchmarkId::new(label, &name), &d, |b, d| {
                b.iter(|| kauffman_bracket_with(black_box(d), BracketEngine::Enumeration(mode)).unwrap())
            });
        }
    }
    g.finish();
}

fn contraction(c: &mut Criterion) {
    let t = KnotTable::bundled();
    let mut g = c.benchmark_group("contraction");
    for (name, d) in fixtures(&t) {
        g.bench_with_input(BenchmarkId::from_parameter(&name), &d, |b, d| {
            b.iter(|| kauffman_bracket_with(black_box(d), BracketEngine::Contraction).unwrap())
        });
    }
    g.finish();
}

fn batch(c: &mut Criterion) {
    let t = KnotTable::bundled();
    let small: Vec<Diagram> = t.entries().iter().filter(|e| e.crossing_number <= 7).map(|e| e.pd.clone()).collect();
    let pairs: Vec<Diagram> = small
        .iter()
        .flat_map(|a| small.iter().map(move |b| connected_sum(a, b).unwrap()))
        .collect();
    let mut g = c.benchmark_group("jones_batch");
    g.sample_size(10);
    for (label, mode) in MODES {
        g.bench_function(BenchmarkId::new(label, pairs.len()), |b| {
            b.iter(|| jones_batch(black_box(&pairs), mode))
        });
    }
    g.finish();
}

criterion_group!(benches, enumeration, contraction, batch);
criterion_main!(benches);
