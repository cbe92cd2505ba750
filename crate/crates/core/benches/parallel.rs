use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gsschannel::channel::{trajectory, uniform_grid};
use gsschannel::fock_stats::photon_number_distribution;
use gsschannel::par::{self, Execution};
use gsschannel::phase_space::{wigner_grid, GridBounds, SeriesVariant, WignerForm};
use gsschannel::{characteristic_time_numeric, ChannelParams, Complex64, GaussianParams};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn wigner(c: &mut Criterion) {
    let s = GaussianParams::new(Complex64::new(0.5, -0.3), 1.0, 0.7, 0.5).unwrap();
    let mut group = c.benchmark_group("wigner_grid");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("gaussian_256x256", name), |b| {
            b.iter(|| wigner_grid(&s, GridBounds::square(6.0), 256, 256, WignerForm::Gaussian, exec).unwrap())
        });
        group.bench_function(BenchmarkId::new("series_64x64", name), |b| {
            b.iter(|| {
                wigner_grid(
                    &s,
                    GridBounds::square(6.0),
                    64,
                    64,
                    WignerForm::Series(SeriesVariant::Corrected),
                    exec,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn sweeps(c: &mut Criterion) {
    let states: Vec<_> = (0..1000)
        .map(|i| {
            let (a, b, l) = (i / 100, (i / 10) % 10, i % 10);
            (
                GaussianParams::new(Complex64::new(0.0, 0.0), 0.2 * a as f64, 0.0, 0.5 * b as f64).unwrap(),
                ChannelParams::new(1.0, 0.1, 0.2 * l as f64).unwrap(),
            )
        })
        .collect();
    let s0 = GaussianParams::new(Complex64::new(1.0, 0.0), 1.0, 0.0, 0.0).unwrap();
    let ch = ChannelParams::new(1.0, 0.1, 0.0).unwrap();
    let times = uniform_grid(0.0, 30.0, 4096);

    let mut group = c.benchmark_group("sweeps");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("tc_grid_1000", name), |b| {
            b.iter(|| {
                par::map_indexed(exec, states.len(), |i| {
                    characteristic_time_numeric(&states[i].0, &states[i].1)
                })
            })
        });
        group.bench_function(BenchmarkId::new("pnd_512_times_64", name), |b| {
            b.iter(|| {
                par::map_indexed(exec, 64, |i| {
                    let e = gsschannel::evolve(&s0, &ch, 0.5 * i as f64).unwrap();
                    photon_number_distribution(&e.params, 512)
                })
            })
        });
        group.bench_function(BenchmarkId::new("trajectory_4096", name), |b| {
            b.iter(|| trajectory(&s0, &ch, &times, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, wigner, sweeps);
criterion_main!(benches);
