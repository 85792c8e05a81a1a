//! Wigner, STFT and cone diagnostics on a one-thread pool versus the default
//! pool. Build with `--no-default-features` for the sequential backend.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tfcore::cone::classify_vcon;
use tfcore::{fixtures, stft, wigner, Boundary, Window};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("1-thread", one), ("default", all)]
}

fn bench_wigner(c: &mut Criterion) {
    let mut group = c.benchmark_group("wigner");
    for n in [256usize, 1024] {
        let g = tfcore::Grid::centered(16.0 / n as f64, n).unwrap();
        let f = tfcore::gen_bandlimited(g, [-(n as f64) / 64.0, n as f64 / 64.0], 1).unwrap();
        for (name, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(name, n), &f, |b, f| {
                b.iter(|| pool.install(|| wigner(f, Boundary::Zero).unwrap()))
            });
        }
    }
    group.finish();
}

fn bench_stft(c: &mut Criterion) {
    let mut group = c.benchmark_group("stft");
    let f = fixtures::enveloped_chirp_512(0.5);
    let w = Window::gaussian(2.0, f.grid().dt, 511).unwrap();
    for (name, pool) in pools() {
        group.bench_function(name, |b| b.iter(|| pool.install(|| stft(&f, &w, 2).unwrap())));
    }
    group.finish();
}

fn bench_cone(c: &mut Criterion) {
    let mut group = c.benchmark_group("cone");
    group.sample_size(10);
    let f = fixtures::cone_chirp(1.0).unwrap();
    let w = fixtures::cone_window(2.0).unwrap();
    let slopes = [0.5, 1.0, 1.5, 2.5, 3.0, 4.0];
    for (name, pool) in pools() {
        group.bench_function(name, |b| b.iter(|| pool.install(|| classify_vcon(&f, &w, &slopes).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, bench_wigner, bench_stft, bench_cone);
criterion_main!(benches);
