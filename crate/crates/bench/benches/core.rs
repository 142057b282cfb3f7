use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wcolim_bench::{bar_instance, bk_instance, complex};
use wcolim_core::chain::{homology_full, tensor};
use wcolim_core::colim::{bar_compare, bk_hocolim, weighted_colimit, Cofibrancy};
use wcolim_core::simplicial::{dold_kan_gamma, dold_kan_normalize};

fn chain(c: &mut Criterion) {
    let mut g = c.benchmark_group("homology");
    for rank in [2, 4, 8] {
        let x = complex(11, 4, rank);
        g.bench_with_input(BenchmarkId::new("random complex", rank), &x, |b, x| b.iter(|| homology_full(black_box(x))));
    }
    let (a, b) = (complex(3, 2, 3), complex(4, 2, 3));
    g.bench_function("tensor product", |bn| bn.iter(|| homology_full(&tensor(black_box(&a), black_box(&b)))));
    g.finish();
}

fn colimits(c: &mut Criterion) {
    let mut g = c.benchmark_group("colimits");
    g.sample_size(20);
    for objects in [2, 3] {
        let i = bar_instance(7, objects, 3);
        g.bench_with_input(BenchmarkId::new("strict", objects), &i, |b, i| {
            b.iter(|| weighted_colimit(&i.weight, &i.diagram).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("bar compare", objects), &i, |b, i| {
            b.iter(|| {
                bar_compare(i.weight.clone(), i.diagram.clone(), i.truncation, i.window, Cofibrancy::Certified, false)
                    .unwrap()
            })
        });
    }
    for n in [2, 3, 4] {
        let i = bk_instance(5, 3);
        g.bench_with_input(BenchmarkId::new("Bousfield-Kan", n), &i, |b, i| {
            b.iter(|| bk_hocolim(&i.category, &i.diagram, n, (-1, 4)).unwrap())
        });
    }
    g.finish();
}

fn dold_kan(c: &mut Criterion) {
    let mut g = c.benchmark_group("dold-kan");
    for top in [2, 3, 4] {
        let x = Arc::new(complex(9, top as i32, 2));
        g.bench_with_input(BenchmarkId::new("round trip", top), &x, |b, x| {
            b.iter(|| dold_kan_normalize(&dold_kan_gamma(x, top).unwrap()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, chain, colimits, dold_kan);
criterion_main!(benches);
