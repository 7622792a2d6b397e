use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pillowvol::genfun::pillow::bracket_numerator;
use pillowvol::oracle::count_pillow_covers;
use pillowvol::partitions::WeightVariant;
use pillowvol::{Exec, ProfilePair};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn brackets(c: &mut Criterion) {
    let mut g = c.benchmark_group("bracket_numerator");
    g.sample_size(10);
    let p = ProfilePair::new(vec![2], vec![1, 1, 3, 3]).unwrap();
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "(2),(3,3,1,1) prec 12"), &exec, |b, &e| {
            b.iter(|| bracket_numerator(&p, 12, WeightVariant::Frobenius, e).unwrap())
        });
    }
    g.finish();
}

fn covers(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_pillow_covers");
    g.sample_size(10);
    let p = ProfilePair::new(vec![], vec![1, 1, 1, 1]).unwrap();
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "(),(1,1,1,1) degree 6"), &exec, |b, &e| {
            b.iter(|| count_pillow_covers(&p, 6, e).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, brackets, covers);
criterion_main!(benches);
