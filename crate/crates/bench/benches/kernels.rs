use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use knap_core::{
    bounded_range_conv, classic_dp, knapsack_via_conv, naive_conv, ExtVal, KnapsackInstance,
    MaxPlusVec, SolverConfig, SplitMix64,
};

fn random_vector(len: usize, e_max: u64, rng: &mut SplitMix64) -> MaxPlusVec {
    MaxPlusVec::new(
        (0..len)
            .map(|_| ExtVal::Finite(rng.next_below(e_max + 1) as i64))
            .collect(),
    )
    .unwrap()
}

fn bench_conv(c: &mut Criterion) {
    let mut group = c.benchmark_group("conv");
    for &n in &[1usize << 10, 1 << 12] {
        let mut rng = SplitMix64::new(n as u64);
        let a = random_vector(n, 4, &mut rng);
        let b = random_vector(n, 4, &mut rng);
        group.bench_with_input(BenchmarkId::new("naive", n), &n, |bench, _| {
            bench.iter(|| naive_conv(&a, &b).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("bounded", n), &n, |bench, _| {
            bench.iter(|| bounded_range_conv(&a, &b, 4).unwrap())
        });
    }
    group.finish();
}

fn bench_knapsack(c: &mut Criterion) {
    let mut group = c.benchmark_group("knapsack");
    group.sample_size(10);
    for &t in &[96u64, 160] {
        let mut rng = SplitMix64::new(t);
        let items: Vec<(u64, u64)> = (0..t / 2)
            .map(|_| (rng.next_range(1, t), rng.next_below(6)))
            .collect();
        group.bench_with_input(BenchmarkId::new("classic-dp", t), &t, |bench, _| {
            let inst = KnapsackInstance::zero_one(t, &items).unwrap();
            bench.iter(|| classic_dp(&inst).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("via-conv", t), &t, |bench, _| {
            let cfg = SolverConfig::seeded(t);
            bench.iter(|| knapsack_via_conv(t, &items, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_conv, bench_knapsack);
criterion_main!(benches);
