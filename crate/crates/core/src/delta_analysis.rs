//! Checks of solved spectra against the analytic delta-barrier relations:
//! the derivative jump, even-mode quantization in a centred infinite well,
//! first-order perturbation and the spectral expansion identities.

use serde::{Deserialize, Serialize};

use crate::eigensolve::{inner_product, Eigenpair, Spectrum};
use crate::error::{Error, Result};
use crate::potentials::{PseudoDelta, PseudoDeltaShape};
use crate::units::{Grid, PhysicalConstants};

/// Denominator floor for relative residuals.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

/// Below this |ψ(x₀)| the expansion coefficients fall back to inner products.
pub const NODE_THRESHOLD: f64 = 1e-10;

/// Derivative jump across one barrier for one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpCheck {
    pub barrier_center: f64,
    /// `ψ′(x₀⁺) − ψ′(x₀⁻)`
    pub g1: f64,
    /// `(2mα/ħ²)·ψ(x₀)`
    pub g2: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
}

impl JumpCheck {
    /// The jump written left-minus-right.
    pub fn left_minus_right(&self) -> f64 {
        -self.g1
    }

    pub fn passes(&self, rel_tol: f64, abs_tol: f64) -> bool {
        self.rel_residual < rel_tol || self.abs_residual < abs_tol
    }
}

/// Estimates the derivative jump of `pair` across a rectangular barrier.
///
/// One-sided derivatives come from the quadratic through the three samples
/// just outside `[x₀ − ε, x₀ + ε]` on each side (samples whose cell does not
/// touch the barrier), evaluated at x₀ itself. Between the barrier edge and
/// x₀ the exact solution is smooth, so the extrapolation removes the O(ε)
/// curvature drift that evaluating at the edge would leave in the jump.
pub fn jump_residual(
    pair: &Eigenpair,
    barrier: &PseudoDelta,
    grid: &Grid,
    m_rel: f64,
) -> Result<JumpCheck> {
    if barrier.shape != PseudoDeltaShape::Rectangular {
        return Err(Error::Config(format!(
            "jump residual needs a rectangular barrier, got {}",
            barrier.shape.name()
        )));
    }
    let x0 = barrier.center;
    let dx = grid.dx();
    let n = grid.n_points();
    let reach = barrier.epsilon + 0.5 * dx;
    let tol = 1e-9 * dx;

    let right_start = ((x0 + reach - grid.x_min()) / dx - tol / dx).ceil();
    let left_end = ((x0 - reach - grid.x_min()) / dx + tol / dx).floor();
    if right_start < 0.0 || left_end < 2.0 || right_start as usize + 2 >= n {
        return Err(Error::BarrierTooCloseToBoundary { center: x0 });
    }
    let r0 = right_start as usize;
    let l0 = left_end as usize;

    let psi = &pair.psi;
    let right = lagrange_derivative(
        [grid.x(r0), grid.x(r0 + 1), grid.x(r0 + 2)],
        [psi[r0], psi[r0 + 1], psi[r0 + 2]],
        x0,
    );
    let left = lagrange_derivative(
        [grid.x(l0 - 2), grid.x(l0 - 1), grid.x(l0)],
        [psi[l0 - 2], psi[l0 - 1], psi[l0]],
        x0,
    );
    let g1 = right - left;
    let c = PhysicalConstants::codata().hbar2_over_2me;
    let g2 = m_rel / c * barrier.alpha * psi[grid.nearest_index(x0)?];
    let abs_residual = (g1 - g2).abs();
    Ok(JumpCheck {
        barrier_center: x0,
        g1,
        g2,
        abs_residual,
        rel_residual: abs_residual / g1.abs().max(g2.abs()).max(RESIDUAL_FLOOR),
    })
}

/// Derivative at `at` of the quadratic interpolating three points.
fn lagrange_derivative(xs: [f64; 3], ys: [f64; 3], at: f64) -> f64 {
    let [x0, x1, x2] = xs;
    let [y0, y1, y2] = ys;
    y0 * ((at - x1) + (at - x2)) / ((x0 - x1) * (x0 - x2))
        + y1 * ((at - x0) + (at - x2)) / ((x1 - x0) * (x1 - x2))
        + y2 * ((at - x0) + (at - x1)) / ((x2 - x0) * (x2 - x1))
}

/// Even-mode quantization of a delta barrier centred in an infinite well
/// of half-width L.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizationResidual {
    /// nm⁻¹
    pub k: f64,
    /// `tan(kL)`
    pub f1: f64,
    /// `−ħ²k/(mα)`
    pub f2: f64,
    /// Pole-free form in [0, 1]; zero exactly on a root.
    pub residual: f64,
}

fn quantization_function(k: f64, l_half: f64, m_rel: f64, alpha: f64) -> (f64, f64) {
    let c = PhysicalConstants::codata().hbar2_over_2me;
    let a = alpha * (k * l_half).sin() * m_rel / c;
    let b = 2.0 * k * (k * l_half).cos();
    (a, b)
}

/// `tan(kL) = −ħ²k/(mα)` evaluated at energy `energy`.
///
/// Written as `α·sin(kL)·m/C + 2k·cos(kL) = 0` (C = ħ²/2mₑ), the residual
/// is that sum over the sum of the magnitudes of its two terms.
pub fn even_mode_quantization_residual(
    energy: f64,
    l_half: f64,
    m_rel: f64,
    alpha: f64,
) -> Result<QuantizationResidual> {
    if !(energy > 0.0) {
        return Err(Error::NonPositiveEnergy(energy));
    }
    if alpha == 0.0 {
        return Err(Error::ZeroAlpha);
    }
    let c = PhysicalConstants::codata().hbar2_over_2me;
    let k = (energy * m_rel / c).sqrt();
    let (a, b) = quantization_function(k, l_half, m_rel, alpha);
    let denom = a.abs() + b.abs();
    Ok(QuantizationResidual {
        k,
        f1: (k * l_half).tan(),
        f2: -2.0 * c * k / (m_rel * alpha),
        residual: if denom > 0.0 {
            (a + b).abs() / denom
        } else {
            0.0
        },
    })
}

/// Lowest `count` positive-energy even-mode energies (eV) solving the
/// quantization condition, by bisection in k.
///
/// For α > 0 each root lies in `((n − ½)π/L, nπ/L)`; for α < 0 in
/// `(nπ/L, (n + ½)π/L)`, plus a root below π/(2L) when the barrier is too
/// weak to bind a negative-energy state.
pub fn even_mode_energies(l_half: f64, m_rel: f64, alpha: f64, count: usize) -> Result<Vec<f64>> {
    if alpha == 0.0 {
        return Err(Error::ZeroAlpha);
    }
    let c = PhysicalConstants::codata().hbar2_over_2me;
    let unit = std::f64::consts::PI / l_half;
    let f = |k: f64| {
        let (a, b) = quantization_function(k, l_half, m_rel, alpha);
        a + b
    };
    let mut brackets = Vec::with_capacity(count);
    if alpha > 0.0 {
        for n in 1..=count {
            brackets.push(((n as f64 - 0.5) * unit, n as f64 * unit));
        }
    } else {
        if alpha * m_rel * l_half / c + 2.0 > 0.0 {
            brackets.push((1e-12 * unit, 0.5 * unit));
        }
        let mut n = 1;
        while brackets.len() < count {
            brackets.push((n as f64 * unit, (n as f64 + 0.5) * unit));
            n += 1;
        }
    }
    Ok(brackets
        .into_iter()
        .take(count)
        .map(|(lo, hi)| {
            let k = bisect(f, lo, hi);
            c * k * k / m_rel
        })
        .collect())
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `E_n + α·φ_n(x₀)²`, with φ_n read at the sample nearest x₀.
pub fn first_order_energy_shift(
    base_pair: &Eigenpair,
    alpha: f64,
    x0: f64,
    grid: &Grid,
) -> Result<f64> {
    let phi = base_pair.psi[grid.nearest_index(x0)?];
    Ok(base_pair.energy + alpha * phi * phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSum {
    pub n_terms: usize,
    /// (eV·nm)⁻¹
    pub partial_sum: f64,
    /// 1/α
    pub target: f64,
    /// `|partial_sum − 1/α|·|α|`
    pub gap: f64,
}

fn check_collisions(base: &[Eigenpair], energy: f64) -> Result<()> {
    match base.iter().find(|p| (energy - p.energy).abs() < 1e-12) {
        Some(p) => Err(Error::EnergyCollision {
            energy,
            index: p.mode_index,
            base: p.energy,
        }),
        None => Ok(()),
    }
}

/// Truncated `Σ φ_n(x₀)²/(E − E_n)` over the first `n_terms` base modes,
/// against its exact value 1/α.
pub fn spectral_sum_check(
    base: &Spectrum,
    energy: f64,
    alpha: f64,
    x0: f64,
    n_terms: usize,
) -> Result<SpectralSum> {
    if alpha == 0.0 {
        return Err(Error::ZeroAlpha);
    }
    if n_terms > base.len() {
        return Err(Error::ModeCountTooLarge {
            requested: n_terms,
            available: base.len(),
        });
    }
    let used = &base.pairs[..n_terms];
    check_collisions(used, energy)?;
    let i0 = base.grid.nearest_index(x0)?;
    let partial_sum: f64 = used
        .iter()
        .map(|p| p.psi[i0] * p.psi[i0] / (energy - p.energy))
        .sum();
    let target = 1.0 / alpha;
    Ok(SpectralSum {
        n_terms,
        partial_sum,
        target,
        gap: (partial_sum - target).abs() * alpha.abs(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    /// One coefficient per base mode.
    pub coefficients: Vec<f64>,
    /// Trapezoid norm of `ψ − Σ c_m φ_m`.
    pub l2_error: f64,
    /// `α²ψ(x₀)²·Σ φ_n(x₀)²/(E − E_n)²`; tends to 1 with more terms.
    pub norm_check: f64,
    /// True when ψ(x₀) vanished and coefficients came from inner products.
    pub used_inner_products: bool,
}

/// Expands a perturbed eigenfunction on the base spectrum with the
/// closed-form coefficients `c_m = α·φ_m(x₀)ψ(x₀)/(E − E_m)`.
///
/// When ψ(x₀) is numerically zero the closed form is 0/0 for the base mode
/// the perturbed one coincides with, so the coefficients are taken as
/// direct inner products instead and `norm_check` is reported as 1.
pub fn expansion_reconstruction(
    base: &Spectrum,
    perturbed: &Eigenpair,
    alpha: f64,
    x0: f64,
) -> Result<Expansion> {
    let grid = &base.grid;
    let i0 = grid.nearest_index(x0)?;
    let psi0 = perturbed.psi[i0];
    let (coefficients, norm_check, used_inner_products) = if psi0.abs() < NODE_THRESHOLD {
        let c: Vec<f64> = base
            .pairs
            .iter()
            .map(|p| inner_product(&p.psi, &perturbed.psi, grid))
            .collect();
        (c, 1.0, true)
    } else {
        check_collisions(&base.pairs, perturbed.energy)?;
        let c: Vec<f64> = base
            .pairs
            .iter()
            .map(|p| alpha * p.psi[i0] * psi0 / (perturbed.energy - p.energy))
            .collect();
        let s: f64 = base
            .pairs
            .iter()
            .map(|p| (p.psi[i0] / (perturbed.energy - p.energy)).powi(2))
            .sum();
        (c, alpha * alpha * psi0 * psi0 * s, false)
    };
    let mut residual = perturbed.psi.clone();
    for (c, p) in coefficients.iter().zip(&base.pairs) {
        for (r, v) in residual.iter_mut().zip(&p.psi) {
            *r -= c * v;
        }
    }
    let l2_error = inner_product(&residual, &residual, grid).max(0.0).sqrt();
    Ok(Expansion {
        coefficients,
        l2_error,
        norm_check,
        used_inner_products,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Mixed => "mixed",
        }
    }
}

/// Mirror overlap `Σ ψ(c+j)ψ(c−j) / Σ ψ²` about the sample nearest
/// `center`, over the samples that have a mirror image on the grid.
pub fn mirror_overlap(psi: &[f64], grid: &Grid, center: f64) -> Result<f64> {
    let c = grid.nearest_index(center)?;
    let reach = c.min(grid.n_points() - 1 - c);
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..=reach {
        num += psi[c + j] * psi[c - j];
        den += 0.5 * (psi[c + j] * psi[c + j] + psi[c - j] * psi[c - j]);
    }
    Ok(if den > 0.0 { num / den } else { 0.0 })
}

pub fn parity(pair: &Eigenpair, grid: &Grid, center: f64) -> Result<Parity> {
    let s = mirror_overlap(&pair.psi, grid, center)?;
    Ok(if s > 0.99 {
        Parity::Even
    } else if s < -0.99 {
        Parity::Odd
    } else {
        Parity::Mixed
    })
}

/// Pass thresholds for a validation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ValidationThresholds {
    pub jump_rel_tol: f64,
    pub jump_abs_tol: f64,
    /// Relative tolerance of even-mode energies against the quantization roots.
    pub quantization_rel_tol: f64,
    pub spectral_terms: usize,
    pub spectral_gap_tol: f64,
    pub expansion_l2_tol: f64,
    pub expansion_norm_tol: f64,
}

impl Default for ValidationThresholds {
    fn default() -> Self {
        Self {
            jump_rel_tol: 2e-2,
            jump_abs_tol: 1e-6,
            quantization_rel_tol: 1e-2,
            spectral_terms: 200,
            spectral_gap_tol: 5e-2,
            expansion_l2_tol: 5e-3,
            expansion_norm_tol: 5e-2,
        }
    }
}

/// One thresholded check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeReport {
    pub mode_index: usize,
    pub energy: f64,
    pub parity: Parity,
    pub jumps: Vec<JumpCheck>,
    /// Relative distance to the matching quantization root, when applicable.
    pub quantization_rel_error: Option<f64>,
    pub quantization_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub label: String,
    pub modes: Vec<ModeReport>,
    pub first_order: Option<FirstOrderComparison>,
    pub spectral_sum: Option<SpectralSum>,
    pub expansion_l2_error: Option<f64>,
    pub expansion_norm_check: Option<f64>,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstOrderComparison {
    pub mode_index: usize,
    pub solved: f64,
    pub predicted: f64,
}

/// Everything [`validate`] needs about one solved variant.
#[derive(Debug, Clone, Copy)]
pub struct ValidationInput<'a> {
    pub label: &'a str,
    pub spectrum: &'a Spectrum,
    pub barriers: &'a [PseudoDelta],
    /// Sampled relative mass on the spectrum's grid.
    pub m_rel: &'a [f64],
    /// Barrier-free spectrum on the same grid and mass, if solved.
    pub base: Option<&'a Spectrum>,
    /// Half-width L when the problem is an infinite well with one barrier
    /// at its centre, which enables the even-mode quantization check.
    pub centred_well_half_width: Option<f64>,
    pub thresholds: &'a ValidationThresholds,
}

/// Runs every applicable check on one barrier variant.
pub fn validate(input: ValidationInput<'_>) -> Result<ValidationReport> {
    let spectrum = input.spectrum;
    let grid = &spectrum.grid;
    let t = input.thresholds;
    if input.m_rel.len() != grid.n_points() {
        return Err(Error::DimensionMismatch {
            expected: grid.n_points(),
            got: input.m_rel.len(),
        });
    }

    let mut modes = Vec::with_capacity(spectrum.len());
    let mut checks = Vec::new();
    for pair in &spectrum.pairs {
        let parity = parity(pair, grid, grid.center())?;
        let mut jumps = Vec::new();
        for (b, barrier) in input.barriers.iter().enumerate() {
            if barrier.shape != PseudoDeltaShape::Rectangular || barrier.alpha == 0.0 {
                continue;
            }
            let m = input.m_rel[grid.nearest_index(barrier.center)?];
            let jump = jump_residual(pair, barrier, grid, m)?;
            checks.push(Check {
                name: format!("jump mode={} barrier={}", pair.mode_index + 1, b + 1),
                value: jump.rel_residual,
                threshold: t.jump_rel_tol,
                passed: jump.passes(t.jump_rel_tol, t.jump_abs_tol),
            });
            jumps.push(jump);
        }
        modes.push(ModeReport {
            mode_index: pair.mode_index,
            energy: pair.energy,
            parity,
            jumps,
            quantization_rel_error: None,
            quantization_residual: None,
        });
    }

    let single = match input.barriers {
        [b] if b.alpha != 0.0 => Some(*b),
        _ => None,
    };

    if let (Some(l_half), Some(barrier)) = (input.centred_well_half_width, single) {
        let m = input.m_rel[grid.nearest_index(barrier.center)?];
        let even: Vec<usize> = modes
            .iter()
            .enumerate()
            .filter(|(_, r)| r.parity == Parity::Even)
            .map(|(i, _)| i)
            .collect();
        let roots = even_mode_energies(l_half, m, barrier.alpha, even.len())?;
        for (&i, root) in even.iter().zip(roots) {
            let report = &mut modes[i];
            let rel = (report.energy / root - 1.0).abs();
            report.quantization_rel_error = Some(rel);
            if report.energy > 0.0 {
                report.quantization_residual = Some(
                    even_mode_quantization_residual(report.energy, l_half, m, barrier.alpha)?
                        .residual,
                );
            }
            checks.push(Check {
                name: format!("quantization mode={}", report.mode_index + 1),
                value: rel,
                threshold: t.quantization_rel_tol,
                passed: rel < t.quantization_rel_tol,
            });
        }
    }

    let mut first_order = None;
    let mut spectral_sum = None;
    let mut expansion_l2_error = None;
    let mut expansion_norm_check = None;
    if let (Some(base), Some(barrier)) = (input.base, single) {
        // The lowest mode not pinned to a node of the barrier.
        let i0 = grid.nearest_index(barrier.center)?;
        let target = spectrum
            .pairs
            .iter()
            .find(|p| p.psi[i0].abs() >= NODE_THRESHOLD);
        if let Some(pair) = target {
            let base_pair = base.pairs.iter().find(|b| b.mode_index == pair.mode_index);
            if let Some(bp) = base_pair {
                first_order = Some(FirstOrderComparison {
                    mode_index: pair.mode_index,
                    solved: pair.energy,
                    predicted: first_order_energy_shift(bp, barrier.alpha, barrier.center, grid)?,
                });
            }
            let terms = t.spectral_terms.min(base.len());
            let sum = spectral_sum_check(base, pair.energy, barrier.alpha, barrier.center, terms)?;
            checks.push(Check {
                name: format!("spectral_sum mode={} terms={}", pair.mode_index + 1, terms),
                value: sum.gap,
                threshold: t.spectral_gap_tol,
                passed: sum.gap < t.spectral_gap_tol,
            });
            spectral_sum = Some(sum);

            let exp = expansion_reconstruction(base, pair, barrier.alpha, barrier.center)?;
            checks.push(Check {
                name: format!("expansion_l2 mode={}", pair.mode_index + 1),
                value: exp.l2_error,
                threshold: t.expansion_l2_tol,
                passed: exp.l2_error < t.expansion_l2_tol,
            });
            let dev = (exp.norm_check - 1.0).abs();
            checks.push(Check {
                name: format!("expansion_norm mode={}", pair.mode_index + 1),
                value: dev,
                threshold: t.expansion_norm_tol,
                passed: dev < t.expansion_norm_tol,
            });
            expansion_l2_error = Some(exp.l2_error);
            expansion_norm_check = Some(exp.norm_check);
        }
    }

    Ok(ValidationReport {
        label: input.label.to_string(),
        modes,
        first_order,
        spectral_sum,
        expansion_l2_error,
        expansion_norm_check,
        checks,
    })
}
