use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use teich_core::ansatz::make_ansatz;
use teich_core::loglink::log_property_trials;
use teich_core::pilot::{sweep_bound, theta_set_sample_with};
use teich_core::rat::odd_primes_up_to;
use teich_core::theta::{quasi_periodicity_sweep, theta_value, SignConvention, ThetaSeriesTrunc};
use teich_core::{Exec, Rat, TiltElement};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn bound_sweep(c: &mut Criterion) {
    let ells = odd_primes_up_to(997);
    let v_q = Rat::new(3, 2);
    let mut g = c.benchmark_group("sweep_bound");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, ells.len()), |b| {
            b.iter(|| sweep_bound(black_box(&ells), &v_q, exec))
        });
    }
    g.finish();
}

fn quasi_periodicity(c: &mut Criterion) {
    let mut g = c.benchmark_group("quasi_periodicity");
    for radius in [12u32, 48] {
        let series = ThetaSeriesTrunc::symmetric(radius, SignConvention::Signed);
        let js: Vec<i64> = (-(radius as i64)..=radius as i64).collect();
        for (name, exec) in MODES {
            g.bench_function(BenchmarkId::new(name, radius), |b| {
                b.iter(|| quasi_periodicity_sweep(black_box(&series), &js, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn log_trials(c: &mut Criterion) {
    let mut g = c.benchmark_group("log_property_trials");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, "p3_n12_x500"), |b| {
            b.iter(|| log_property_trials(3, 12, 500, black_box(7), exec).unwrap())
        });
    }
    g.finish();
}

fn theta_sample(c: &mut Criterion) {
    let gens: Vec<_> = (1..=8)
        .map(|k| make_ansatz(&TiltElement::monomial(2, 1, Rat::new(k, 4)).unwrap(), 13).unwrap())
        .collect();
    let xi = theta_value(1, 13).unwrap().valuation(&Rat::one());
    let mut g = c.benchmark_group("theta_set_sample");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, "8gens_depth6"), |b| {
            b.iter(|| theta_set_sample_with(black_box(&gens), &xi, 6, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bound_sweep, quasi_periodicity, log_trials, theta_sample);
criterion_main!(benches);
