//! Compares sequential and rayon execution of the two bulk kernels: the
//! 512-shading avoidance sweep on one host level, and full avoider-set
//! signatures across levels. Run with `cargo bench -p meshpat`.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use meshpat::avoidance::{generate_dominating_avoiders, signature_with_mode};
use meshpat::engine::sweep_shadings;
use meshpat::{AvoidanceTask, ExecMode, MeshPattern, Permutation};

fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn sweep_one_level(c: &mut Criterion) {
    let underlying = perm("21");
    let dominating = perm("231");
    let mut group = c.benchmark_group("sweep_shadings");
    for n in [8usize, 9, 10] {
        let hosts = generate_dominating_avoiders(&dominating, n).unwrap();
        for mode in [ExecMode::Sequential, ExecMode::Parallel] {
            group.bench_with_input(
                BenchmarkId::new(format!("{mode:?}"), n),
                &hosts,
                |b, hosts| b.iter(|| sweep_shadings(&underlying, hosts, mode)),
            );
        }
    }
    group.finish();
}

fn signature_all_levels(c: &mut Criterion) {
    let task = AvoidanceTask::new(
        perm("231"),
        "21|0,1;1,0".parse::<MeshPattern>().unwrap(),
    )
    .unwrap();
    let mut group = c.benchmark_group("signature");
    group.sample_size(10);
    for mode in [ExecMode::Sequential, ExecMode::Parallel] {
        group.bench_function(format!("{mode:?}_n9"), |b| {
            b.iter(|| signature_with_mode(&task, 9, mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweep_one_level, signature_all_levels);
criterion_main!(benches);
