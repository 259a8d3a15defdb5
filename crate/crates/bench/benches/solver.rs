use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use numerov_bench::fixture;
use numerov_core::{assemble_constant_mass, assemble_pdm, effective_potential, solve};

fn assembly(c: &mut Criterion) {
    let mut g = c.benchmark_group("assemble");
    for n in [501, 1001] {
        let (config, well) = fixture("infinite_well_delta", n);
        let grid = config.grid.build().unwrap();
        g.bench_with_input(BenchmarkId::new("constant_mass", n), &n, |b, _| {
            b.iter(|| assemble_constant_mass(&grid, black_box(&well.potential), 0.067).unwrap())
        });
        let (config, pdm) = fixture("pdm_harmonic_gauss", n);
        let grid = config.grid.build().unwrap();
        let v_eff = effective_potential(
            &pdm.potential,
            &config.mass.profile,
            &grid,
            config.solve.pdm_r,
            config.solve.pdm_s,
        )
        .unwrap();
        g.bench_with_input(BenchmarkId::new("pdm", n), &n, |b, _| {
            b.iter(|| assemble_pdm(&grid, black_box(&v_eff), &pdm.m_rel).unwrap())
        });
    }
    g.finish();
}

fn eigensolve(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    g.sample_size(10);
    for n in [501, 1001] {
        let (_, well) = fixture("infinite_well_delta", n);
        for modes in [10, 30] {
            g.bench_with_input(BenchmarkId::new(format!("modes_{modes}"), n), &n, |b, _| {
                b.iter(|| solve(black_box(&well.system), modes).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, assembly, eigensolve);
criterion_main!(benches);
