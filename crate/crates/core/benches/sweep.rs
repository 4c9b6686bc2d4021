//! Scale-sweep throughput. Run once with default features and once with
//! `--no-default-features` to compare the rayon and sequential builds; the
//! parallel build additionally reports a single-thread pool.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use medoidnet::bounds::default_schedules;
use medoidnet::harness::{make_distribution, Params};
use medoidnet::{medoid_net, SweepConfig};

fn sweep(c: &mut Criterion) {
    let dist = make_distribution("laplace_regression", &Params::new()).expect("known distribution");
    let mode = if medoidnet::is_parallel() { "parallel" } else { "sequential" };
    let mut group = c.benchmark_group("medoid_net");
    group.sample_size(10);
    for n in [256usize, 1024] {
        let sample = dist.sample_real(7, n).expect("real-valued distribution");
        let (x, y) = dist.real_spaces().expect("real-valued distribution");
        let run = || medoid_net(&sample, &default_schedules(), x, y, &SweepConfig::default()).unwrap();
        group.bench_with_input(BenchmarkId::new(mode, n), &n, |b, _| b.iter(run));
        #[cfg(feature = "parallel")]
        {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
            group.bench_with_input(BenchmarkId::new("one-thread", n), &n, |b, _| b.iter(|| pool.install(run)));
        }
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
