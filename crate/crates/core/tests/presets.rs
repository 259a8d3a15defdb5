use numerov_core::delta_analysis::{even_mode_energies, jump_residual, parity, Parity};
use numerov_core::scenarios::prepare_variant;
use numerov_core::{
    delta_shape_convergence, preset, run_scenario, solve, PhysicalConstants, PseudoDeltaShape,
};

#[test]
fn triple_barrier_parity_structure() {
    let config = preset("triple_barrier_well").unwrap();
    let grid = config.grid.build().unwrap();
    let spec = &config.effective_variants()[0];
    let prepared = prepare_variant(&config, spec).unwrap();
    let s = solve(&prepared.system, 10).unwrap();
    let mut seen = (0, 0);
    for p in &s.pairs {
        let jumps: Vec<_> = prepared
            .barriers
            .iter()
            .map(|b| jump_residual(p, b, &grid, 0.067).unwrap())
            .collect();
        match parity(p, &grid, 10.5).unwrap() {
            Parity::Odd => {
                seen.0 += 1;
                assert!(jumps[1].g2.abs() < 1e-8, "mode {}", p.mode_index);
                assert!(jumps[0].g1.abs() > 1e-3 && jumps[2].g1.abs() > 1e-3);
            }
            Parity::Even => {
                seen.1 += 1;
                assert!(
                    jumps.iter().all(|j| j.g1.abs() > 1e-3),
                    "mode {}",
                    p.mode_index
                );
            }
            Parity::Mixed => panic!("mode {} has no definite parity", p.mode_index),
        }
    }
    assert_eq!(seen, (5, 5));
}

#[test]
fn pdm_gauss_levels_grow_more_slowly() {
    let mut config = preset("pdm_harmonic_gauss").unwrap();
    config.grid.n_points = 1201;
    config.validate.spectral_terms = 40;
    let r = run_scenario(&config).unwrap();
    let hw = PhysicalConstants::codata().quantum_energy(1e15);
    let varying = r.table.column("II").unwrap();
    let constant = r.table.column("IV").unwrap();
    for k in 0..6 {
        assert!(varying[k + 1] - varying[k] < hw);
        assert!((constant[k + 1] - constant[k] - hw).abs() < 1e-3 * hw);
    }
    // The barrier variants are validated against their own mass.
    assert_eq!(r.reports().count(), 2);
}

#[test]
fn finite_well_preset_has_nineteen_bound_modes() {
    let mut config = preset("finite_well_delta").unwrap();
    config.grid.n_points = 1501;
    config.validate.spectral_terms = 19;
    let r = run_scenario(&config).unwrap();
    let free = r.table.column("no_delta").unwrap();
    assert_eq!(free.len(), 19);
    assert!(free.iter().all(|&e| e < 0.0), "{free:?}");
}

fn even_roots(count: usize) -> Vec<f64> {
    even_mode_energies(10.0, 0.067, 0.7, count).unwrap()
}

#[test]
fn rectangular_epsilon_halving_approaches_delta_roots() {
    let mut config = preset("infinite_well_delta").unwrap();
    config.grid.n_points = 1201;
    let dx = 20.0 / 1200.0;
    let eps = [8.0 * dx, 4.0 * dx, 2.0 * dx, 1.0 * dx];
    let table = delta_shape_convergence(&config, PseudoDeltaShape::Rectangular, &eps, 3).unwrap();
    let roots = even_roots(3);
    for (j, root) in roots.iter().enumerate() {
        let column: Vec<f64> = table.even_energies.iter().map(|row| row[j]).collect();
        assert!(column.windows(2).all(|w| w[1] < w[0]), "{column:?}");
        let dist: Vec<f64> = column.iter().map(|e| (e - root).abs()).collect();
        assert!(dist.windows(2).all(|w| w[1] < w[0]), "{dist:?}");
        let limit = table.limit[j].unwrap();
        assert!((limit - root).abs() < dist[3], "limit {limit} root {root}");
    }
    assert!(table.observed_order.iter().all(|o| o.is_some()));
}

#[test]
fn matched_width_shape_comparison() {
    let mut config = preset("infinite_well_delta").unwrap();
    config.grid.n_points = 1201;
    let hwhm = 5.0 * 20.0 / 1200.0;
    let roots = even_roots(3);
    let mut dist = Vec::new();
    for shape in PseudoDeltaShape::ALL {
        let eps = shape.epsilon_for_hwhm(hwhm);
        let t = delta_shape_convergence(&config, shape, &[eps], 3).unwrap();
        let worst = t.even_energies[0]
            .iter()
            .zip(&roots)
            .map(|(e, r)| (e / r - 1.0).abs())
            .fold(0.0, f64::max);
        dist.push(worst);
    }
    // Observed: rectangular 8.3e-3, Gaussian 1.2e-2, Lorentzian 6.2e-2.
    assert!(dist[0] < dist[1] && dist[0] < dist[2], "{dist:?}");
}

#[test]
fn fixed_epsilon_is_stable_under_grid_refinement() {
    let mut config = preset("infinite_well_delta").unwrap();
    config.barriers[0].width_over_dx = None;
    config.barriers[0].epsilon = Some(0.1);
    let mut energies = Vec::new();
    for n in [401, 801, 1601] {
        config.grid.n_points = n;
        let t = delta_shape_convergence(&config, PseudoDeltaShape::Rectangular, &[0.1], 2).unwrap();
        energies.push(t.even_energies[0].clone());
    }
    let [coarse, mid, fine] = [&energies[0], &energies[1], &energies[2]];
    for j in 0..2 {
        let d1 = (mid[j] - coarse[j]).abs();
        let d2 = (fine[j] - mid[j]).abs();
        // The barrier edges are discontinuities, which cap the observed
        // order at two rather than four.
        assert!(d1 / d2 > 3.5 && d2 / fine[j] < 5e-4, "{d1} {d2}");
    }
}
