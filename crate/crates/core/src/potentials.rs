//! Potential and mass-profile specifications and their sampling on a [`Grid`].
//!
//! A potential is a base term plus an ordered list of pseudo-delta barriers,
//! `V(x) + Σᵢ αᵢ·δ_p(x − xᵢ)`. Three regularizations of the delta are
//! available; the rectangular one is the default.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{Grid, PhysicalConstants, ELECTRON_MASS_KG, JOULE_PER_EV, M_PER_NM};

/// Regularization family for a delta barrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PseudoDeltaShape {
    /// `1/(2ε)` on the closed interval `[−ε, ε]`, zero outside.
    #[default]
    Rectangular,
    /// `exp(−x²/(4ε)) / (2√(πε))`; here ε carries units of nm².
    Gaussian,
    /// `ε / (π(x² + ε²))`.
    Lorentzian,
}

impl PseudoDeltaShape {
    pub const ALL: [PseudoDeltaShape; 3] = [
        PseudoDeltaShape::Rectangular,
        PseudoDeltaShape::Gaussian,
        PseudoDeltaShape::Lorentzian,
    ];

    /// Shape parameter ε giving a half-width at half-maximum of `hwhm` nm.
    ///
    /// The rectangular barrier's half-width is its ε; for the Gaussian the
    /// parameter has units of nm².
    pub fn epsilon_for_hwhm(self, hwhm: f64) -> f64 {
        match self {
            PseudoDeltaShape::Rectangular | PseudoDeltaShape::Lorentzian => hwhm,
            PseudoDeltaShape::Gaussian => hwhm * hwhm / (4.0 * std::f64::consts::LN_2),
        }
    }

    pub fn hwhm(self, epsilon: f64) -> f64 {
        match self {
            PseudoDeltaShape::Rectangular | PseudoDeltaShape::Lorentzian => epsilon,
            PseudoDeltaShape::Gaussian => (4.0 * std::f64::consts::LN_2 * epsilon).sqrt(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PseudoDeltaShape::Rectangular => "rectangular",
            PseudoDeltaShape::Gaussian => "gaussian",
            PseudoDeltaShape::Lorentzian => "lorentzian",
        }
    }
}

impl std::str::FromStr for PseudoDeltaShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rectangular" => Ok(Self::Rectangular),
            "gaussian" => Ok(Self::Gaussian),
            "lorentzian" => Ok(Self::Lorentzian),
            other => Err(Error::Config(format!("unknown barrier shape `{other}`"))),
        }
    }
}

/// A single regularized delta barrier `α·δ_p(x − center)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudoDelta {
    /// nm
    pub center: f64,
    /// eV·nm; positive is repulsive.
    pub alpha: f64,
    /// nm (nm² for the Gaussian shape).
    pub epsilon: f64,
    pub shape: PseudoDeltaShape,
}

impl PseudoDelta {
    pub fn rectangular(center: f64, alpha: f64, epsilon: f64) -> Self {
        Self {
            center,
            alpha,
            epsilon,
            shape: PseudoDeltaShape::Rectangular,
        }
    }

    /// Unit-strength profile `δ_p(x − center)` in nm⁻¹.
    pub fn profile(&self, x: f64) -> f64 {
        pseudo_delta_value(self, x)
    }

    /// Rectangular support `[center − ε, center + ε]`; `None` for smooth shapes.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self.shape {
            PseudoDeltaShape::Rectangular => {
                Some((self.center - self.epsilon, self.center + self.epsilon))
            }
            _ => None,
        }
    }

    /// Barrier contribution (eV) at every grid sample.
    ///
    /// Smooth shapes are sampled pointwise. The rectangular shape is sampled
    /// as its average over each sample's cell `[x_k − dx/2, x_k + dx/2]`, so
    /// the discrete sum `dx·Σ V_k` equals α exactly whatever the alignment
    /// of the barrier edges with the grid.
    pub fn sample(&self, grid: &Grid) -> Result<Vec<f64>> {
        if !(self.epsilon > 0.0) {
            return Err(Error::Config(format!(
                "barrier epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.center > grid.x_min() && self.center < grid.x_max()) {
            return Err(Error::BarrierOutsideDomain {
                center: self.center,
            });
        }
        let dx = grid.dx();
        match self.shape {
            PseudoDeltaShape::Rectangular => {
                let inside = samples_in_closed_interval(grid, self.center, self.epsilon);
                if inside < 3 {
                    return Err(Error::BarrierUnderResolved {
                        center: self.center,
                        samples: inside,
                    });
                }
                let height = self.alpha / (2.0 * self.epsilon);
                Ok((0..grid.n_points())
                    .map(|k| {
                        let u = grid.x(k) - self.center;
                        let lo = (u - 0.5 * dx).max(-self.epsilon);
                        let hi = (u + 0.5 * dx).min(self.epsilon);
                        if hi > lo {
                            height * (hi - lo) / dx
                        } else {
                            0.0
                        }
                    })
                    .collect())
            }
            PseudoDeltaShape::Gaussian | PseudoDeltaShape::Lorentzian => Ok((0..grid.n_points())
                .map(|k| self.alpha * self.profile(grid.x(k)))
                .collect()),
        }
    }
}

fn samples_in_closed_interval(grid: &Grid, center: f64, half_width: f64) -> usize {
    let tol = 1e-9 * grid.dx();
    grid.points()
        .iter()
        .filter(|&&x| (x - center).abs() <= half_width + tol)
        .count()
}

/// `δ_p(x − center)` for the barrier's shape, in nm⁻¹.
pub fn pseudo_delta_value(spec: &PseudoDelta, x: f64) -> f64 {
    let u = x - spec.center;
    let eps = spec.epsilon;
    match spec.shape {
        PseudoDeltaShape::Rectangular => {
            if u.abs() <= eps {
                1.0 / (2.0 * eps)
            } else {
                0.0
            }
        }
        PseudoDeltaShape::Gaussian => (-u * u / (4.0 * eps)).exp() / (2.0 * (PI * eps).sqrt()),
        PseudoDeltaShape::Lorentzian => eps / (PI * (u * u + eps * eps)),
    }
}

/// The smooth part `V(x)` of the potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasePotential {
    /// Zero inside; the walls are the Dirichlet ends of the grid.
    InfiniteWell,
    /// `−depth` for `|x − center| ≤ half_width`, zero elsewhere.
    FiniteWell {
        #[serde(rename = "depth_ev")]
        depth: f64,
        #[serde(rename = "half_width_nm")]
        half_width: f64,
        #[serde(rename = "center_nm", default)]
        center: f64,
    },
    /// `½·m·ω²·(x − center)²`.
    Harmonic {
        /// s⁻¹
        omega: f64,
        #[serde(rename = "center_nm", default)]
        center: f64,
    },
    Flat {
        #[serde(rename = "offset_ev", default)]
        offset: f64,
    },
}

impl BasePotential {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BasePotential::FiniteWell {
                depth, half_width, ..
            } if !(depth > 0.0 && half_width > 0.0) => Err(Error::Config(format!(
                "finite well needs depth > 0 and half_width > 0, got {depth}, {half_width}"
            ))),
            BasePotential::Harmonic { omega, .. } if !(omega > 0.0) => Err(Error::Config(format!(
                "harmonic omega must be positive, got {omega}"
            ))),
            _ => Ok(()),
        }
    }

    /// `V(x)` in eV. `m_rel` only matters for the harmonic variant.
    pub fn value(&self, x: f64, m_rel: f64) -> f64 {
        match *self {
            BasePotential::InfiniteWell => 0.0,
            BasePotential::FiniteWell {
                depth,
                half_width,
                center,
            } => {
                if (x - center).abs() <= half_width {
                    -depth
                } else {
                    0.0
                }
            }
            BasePotential::Harmonic { omega, center } => {
                let dx_m = (x - center) * M_PER_NM;
                0.5 * m_rel * ELECTRON_MASS_KG * omega * omega * dx_m * dx_m / JOULE_PER_EV
            }
            BasePotential::Flat { offset } => offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub base: BasePotential,
    pub barriers: Vec<PseudoDelta>,
}

impl PotentialSpec {
    pub fn new(base: BasePotential) -> Self {
        Self {
            base,
            barriers: Vec::new(),
        }
    }

    pub fn with_barrier(mut self, barrier: PseudoDelta) -> Self {
        self.barriers.push(barrier);
        self
    }
}

/// `V_k = V(x_k) + Σᵢ αᵢ·δ_p(x_k − xᵢ)` in eV.
pub fn sample_potential(
    spec: &PotentialSpec,
    grid: &Grid,
    m_rel_for_harmonic: f64,
) -> Result<Vec<f64>> {
    spec.base.validate()?;
    let mut v: Vec<f64> = grid
        .points()
        .iter()
        .map(|&x| spec.base.value(x, m_rel_for_harmonic))
        .collect();
    for barrier in &spec.barriers {
        for (vk, bk) in v.iter_mut().zip(barrier.sample(grid)?) {
            *vk += bk;
        }
    }
    Ok(v)
}

/// Relative effective mass `m_rel(x) = m(x)/mₑ`.
///
/// Closed-form profiles measure x (nm) from the grid's midpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MassProfile {
    Constant {
        m_rel: f64,
    },
    /// `a + b·x²`
    Quadratic {
        a: f64,
        /// nm⁻²
        b: f64,
    },
    /// `base + amp·exp(−x²/w²)`
    GaussianBump {
        base: f64,
        amp: f64,
        #[serde(rename = "width_nm")]
        width: f64,
    },
    /// One value per grid sample.
    Sampled {
        values: Vec<f64>,
    },
}

impl MassProfile {
    pub fn constant(m_rel: f64) -> Self {
        MassProfile::Constant { m_rel }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, MassProfile::Constant { .. })
    }

    /// Mass used for the constant-mass comparison of a variable profile:
    /// the profile's value far from (quadratic: at) the centre term.
    pub fn reference_m_rel(&self) -> f64 {
        match self {
            MassProfile::Constant { m_rel } => *m_rel,
            MassProfile::Quadratic { a, .. } => *a,
            MassProfile::GaussianBump { base, .. } => *base,
            MassProfile::Sampled { values } => values[values.len() / 2],
        }
    }
}

/// `m_rel` at every grid sample.
pub fn sample_mass(profile: &MassProfile, grid: &Grid) -> Result<Vec<f64>> {
    let c = grid.center();
    let values: Vec<f64> = match profile {
        MassProfile::Constant { m_rel } => vec![*m_rel; grid.n_points()],
        MassProfile::Quadratic { a, b } => grid
            .points()
            .iter()
            .map(|&x| a + b * (x - c) * (x - c))
            .collect(),
        MassProfile::GaussianBump { base, amp, width } => grid
            .points()
            .iter()
            .map(|&x| {
                let u = (x - c) / width;
                base + amp * (-u * u).exp()
            })
            .collect(),
        MassProfile::Sampled { values } => {
            if values.len() != grid.n_points() {
                return Err(Error::DimensionMismatch {
                    expected: grid.n_points(),
                    got: values.len(),
                });
            }
            values.clone()
        }
    };
    check_positive_mass(&values)?;
    Ok(values)
}

pub(crate) fn check_positive_mass(values: &[f64]) -> Result<()> {
    match values.iter().position(|&m| !(m > 0.0)) {
        Some(index) => Err(Error::NonPositiveMass {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

/// `(m′, m″)` of `m_rel` in nm⁻¹ and nm⁻².
///
/// Closed-form profiles use analytic derivatives; sampled profiles use
/// second-order central differences with one-sided stencils at the ends.
pub fn mass_derivatives(profile: &MassProfile, grid: &Grid) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = grid.n_points();
    let c = grid.center();
    Ok(match profile {
        MassProfile::Constant { .. } => (vec![0.0; n], vec![0.0; n]),
        MassProfile::Quadratic { b, .. } => (
            grid.points().iter().map(|&x| 2.0 * b * (x - c)).collect(),
            vec![2.0 * b; n],
        ),
        MassProfile::GaussianBump { amp, width, .. } => {
            let w2 = width * width;
            grid.points()
                .iter()
                .map(|&x| {
                    let u = x - c;
                    let e = amp * (-u * u / w2).exp();
                    (-2.0 * u / w2 * e, e * (4.0 * u * u / (w2 * w2) - 2.0 / w2))
                })
                .unzip()
        }
        MassProfile::Sampled { values } => {
            if values.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: values.len(),
                });
            }
            sampled_derivatives(values, grid.dx())
        }
    })
}

fn sampled_derivatives(m: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    let n = m.len();
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for k in 1..n - 1 {
        d1[k] = (m[k + 1] - m[k - 1]) / (2.0 * h);
        d2[k] = (m[k + 1] - 2.0 * m[k] + m[k - 1]) / (h * h);
    }
    d1[0] = (-3.0 * m[0] + 4.0 * m[1] - m[2]) / (2.0 * h);
    d1[n - 1] = (3.0 * m[n - 1] - 4.0 * m[n - 2] + m[n - 3]) / (2.0 * h);
    if n >= 4 {
        d2[0] = (2.0 * m[0] - 5.0 * m[1] + 4.0 * m[2] - m[3]) / (h * h);
        d2[n - 1] = (2.0 * m[n - 1] - 5.0 * m[n - 2] + 4.0 * m[n - 3] - m[n - 4]) / (h * h);
    } else {
        d2[0] = d2[1];
        d2[n - 1] = d2[n - 2];
    }
    (d1, d2)
}

/// Characteristic oscillator length `√(ħ/(mω))` in nm.
pub fn oscillator_length(consts: &PhysicalConstants, m_rel: f64, omega: f64) -> f64 {
    // ħ/(mω) = ħ²/(2m) · 2/(ħω)
    (2.0 * consts.kinetic_prefactor(m_rel) / consts.quantum_energy(omega)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::trapezoid;
    use proptest::prelude::*;

    fn shape_spec(shape: PseudoDeltaShape, epsilon: f64) -> PseudoDelta {
        PseudoDelta {
            center: 0.0,
            alpha: 1.0,
            epsilon,
            shape,
        }
    }

    #[test]
    fn peak_values() {
        let r = shape_spec(PseudoDeltaShape::Rectangular, 0.05);
        assert!((pseudo_delta_value(&r, 0.0) - 10.0).abs() < 1e-12);
        let l = shape_spec(PseudoDeltaShape::Lorentzian, 0.1);
        assert!((pseudo_delta_value(&l, 0.0) - 3.183_098_861_837_907).abs() < 1e-12);
        let g = shape_spec(PseudoDeltaShape::Gaussian, 0.01);
        assert!((pseudo_delta_value(&g, 0.0) - 2.820_947_917_738_781).abs() < 1e-12);
    }

    #[test]
    fn rectangular_interval_is_closed() {
        let r = shape_spec(PseudoDeltaShape::Rectangular, 0.5);
        assert_eq!(pseudo_delta_value(&r, 0.5), 1.0);
        assert_eq!(pseudo_delta_value(&r, -0.5), 1.0);
        assert_eq!(pseudo_delta_value(&r, 0.500_001), 0.0);
    }

    #[test]
    fn infinite_well_without_barriers_is_zero() {
        let grid = Grid::new(-10.0, 10.0, 101).unwrap();
        let v =
            sample_potential(&PotentialSpec::new(BasePotential::InfiniteWell), &grid, 1.0).unwrap();
        assert!(v.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rectangular_barrier_sampling() {
        let grid = Grid::new(-10.0, 10.0, 2001).unwrap();
        let spec = PotentialSpec::new(BasePotential::InfiniteWell)
            .with_barrier(PseudoDelta::rectangular(0.0, 1.0, 0.05));
        let v = sample_potential(&spec, &grid, 1.0).unwrap();
        let nonzero: Vec<f64> = v.iter().copied().filter(|&x| x != 0.0).collect();
        assert_eq!(nonzero.len(), 11);
        // Interior cells sit at the full height, the two edge cells at half.
        assert!((v[1000] - 10.0).abs() < 1e-9);
        assert!((v[1004] - 10.0).abs() < 1e-9);
        assert!((v[1005] - 5.0).abs() < 1e-9);
        assert!((v[995] - 5.0).abs() < 1e-9);
        // Trapezoid oracle on the sampled barrier.
        let integral = trapezoid(&v, &grid);
        assert!((integral - 1.0).abs() < 0.02, "integral {integral}");
    }

    #[test]
    fn rectangular_strength_exact_for_misaligned_edges() {
        let grid = Grid::new(-10.0, 10.0, 2001).unwrap();
        for &eps in &[0.0234, 0.037, 0.05, 0.0777] {
            let b = PseudoDelta::rectangular(0.003, 2.5, eps);
            let v = b.sample(&grid).unwrap();
            let sum: f64 = v.iter().sum::<f64>() * grid.dx();
            assert!((sum - 2.5).abs() < 1e-10, "eps {eps}: {sum}");
        }
    }

    #[test]
    fn under_resolved_and_outside_barriers() {
        let grid = Grid::new(-10.0, 10.0, 2001).unwrap();
        let thin = PseudoDelta::rectangular(0.0, 1.0, 0.004);
        assert!(matches!(
            thin.sample(&grid),
            Err(Error::BarrierUnderResolved { samples: 1, .. })
        ));
        let outside = PseudoDelta::rectangular(10.0, 1.0, 0.05);
        assert!(matches!(
            outside.sample(&grid),
            Err(Error::BarrierOutsideDomain { .. })
        ));
    }

    #[test]
    fn harmonic_value_from_si() {
        let v = BasePotential::Harmonic {
            omega: 1e15,
            center: 0.0,
        };
        // ½·mₑ·ω²·(1 nm)² in eV, written out in SI.
        let oracle = 0.5 * 9.109_383_701_5e-31 * 1e30 * 1e-18 / 1.602_176_634e-19;
        assert!((v.value(1.0, 1.0) - oracle).abs() < 1e-12);
        assert!((v.value(1.0, 1.0) - 2.8428).abs() < 1e-4);
        // Same number through ħω and ħ²/2mₑ.
        let c = PhysicalConstants::codata();
        let hw = c.quantum_energy(1e15);
        assert!((hw * hw / (4.0 * c.hbar2_over_2me) - oracle).abs() < 1e-12);
    }

    #[test]
    fn finite_well_depth() {
        let grid = Grid::new(-30.0, 30.0, 601).unwrap();
        let spec = PotentialSpec::new(BasePotential::FiniteWell {
            depth: 0.6,
            half_width: 10.0,
            center: 0.0,
        });
        let v = sample_potential(&spec, &grid, 0.067).unwrap();
        assert_eq!(v[300], -0.6);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[200], -0.6);
        assert_eq!(v[199], 0.0);
    }

    #[test]
    fn invalid_base_potentials() {
        let grid = Grid::new(-1.0, 1.0, 11).unwrap();
        let bad = PotentialSpec::new(BasePotential::Harmonic {
            omega: 0.0,
            center: 0.0,
        });
        assert!(sample_potential(&bad, &grid, 1.0).is_err());
        let bad = PotentialSpec::new(BasePotential::FiniteWell {
            depth: -1.0,
            half_width: 1.0,
            center: 0.0,
        });
        assert!(sample_potential(&bad, &grid, 1.0).is_err());
    }

    #[test]
    fn mass_profiles_at_center() {
        let grid = Grid::new(-10.0, 10.0, 2001).unwrap();
        let poly = MassProfile::Quadratic {
            a: 0.0665,
            b: 0.0835,
        };
        let m = sample_mass(&poly, &grid).unwrap();
        assert!((m[1000] - 0.0665).abs() < 1e-15);
        let gauss = MassProfile::GaussianBump {
            base: 1.0,
            amp: 0.67,
            width: 1.0,
        };
        let m = sample_mass(&gauss, &grid).unwrap();
        assert!((m[1000] - 1.67).abs() < 1e-15);
        let m = sample_mass(&MassProfile::constant(1.0), &grid).unwrap();
        assert!(m.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn non_positive_mass_rejected() {
        let grid = Grid::new(-10.0, 10.0, 21).unwrap();
        let bad = MassProfile::Quadratic { a: -0.1, b: 0.01 };
        assert!(matches!(
            sample_mass(&bad, &grid),
            Err(Error::NonPositiveMass { .. })
        ));
        let short = MassProfile::Sampled {
            values: vec![1.0; 3],
        };
        assert!(matches!(
            sample_mass(&short, &grid),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn quadratic_mass_derivatives() {
        let grid = Grid::new(-10.0, 10.0, 2001).unwrap();
        let poly = MassProfile::Quadratic {
            a: 0.0665,
            b: 0.0835,
        };
        let (d1, d2) = mass_derivatives(&poly, &grid).unwrap();
        let k = grid.nearest_index(2.0).unwrap();
        assert!((d1[k] - 0.334).abs() < 1e-12);
        assert!((d2[k] - 0.167).abs() < 1e-12);

        let (c1, c2) = mass_derivatives(&MassProfile::constant(0.5), &grid).unwrap();
        assert!(c1.iter().chain(c2.iter()).all(|&v| v == 0.0));
    }

    #[test]
    fn sampled_derivatives_match_closed_forms() {
        for &n in &[201usize, 401] {
            let grid = Grid::new(-5.0, 5.0, n).unwrap();
            let poly = MassProfile::Quadratic {
                a: 0.0665,
                b: 0.0835,
            };
            let sampled = MassProfile::Sampled {
                values: sample_mass(&poly, &grid).unwrap(),
            };
            let (a1, a2) = mass_derivatives(&poly, &grid).unwrap();
            let (s1, s2) = mass_derivatives(&sampled, &grid).unwrap();
            for k in 0..n {
                assert!((a1[k] - s1[k]).abs() < 1e-9);
                assert!((a2[k] - s2[k]).abs() < 1e-7);
            }
        }
        // Gaussian bump: O(dx²) error, so halving dx cuts it ~4×.
        let errs: Vec<f64> = [201usize, 401]
            .iter()
            .map(|&n| {
                let grid = Grid::new(-5.0, 5.0, n).unwrap();
                let g = MassProfile::GaussianBump {
                    base: 1.0,
                    amp: 0.67,
                    width: 1.0,
                };
                let sampled = MassProfile::Sampled {
                    values: sample_mass(&g, &grid).unwrap(),
                };
                let (_, a2) = mass_derivatives(&g, &grid).unwrap();
                let (_, s2) = mass_derivatives(&sampled, &grid).unwrap();
                (1..n - 1)
                    .map(|k| (a2[k] - s2[k]).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(errs[0] / errs[1] > 3.5, "{errs:?}");
    }

    #[test]
    fn unit_integrals_of_each_shape() {
        // Rectangular over exactly [−ε, ε].
        let eps = 0.05;
        let grid = Grid::new(-eps, eps, 51).unwrap();
        let r = shape_spec(PseudoDeltaShape::Rectangular, eps);
        let f: Vec<f64> = grid.points().iter().map(|&x| r.profile(x)).collect();
        assert!((trapezoid(&f, &grid) - 1.0).abs() < 0.01);

        // Gaussian over ±6√ε with dx ≤ ε/5 (ε in nm², dx compared numerically).
        let eps_g: f64 = 0.01;
        let half = 6.0 * eps_g.sqrt();
        let grid = Grid::new(-half, half, 2001).unwrap();
        assert!(grid.dx() <= eps_g / 5.0);
        let g = shape_spec(PseudoDeltaShape::Gaussian, eps_g);
        let f: Vec<f64> = grid.points().iter().map(|&x| g.profile(x)).collect();
        assert!((trapezoid(&f, &grid) - 1.0).abs() < 0.01);

        // Lorentzian over ±100ε.
        let eps_l = 0.1;
        let grid = Grid::new(-100.0 * eps_l, 100.0 * eps_l, 10_001).unwrap();
        let l = shape_spec(PseudoDeltaShape::Lorentzian, eps_l);
        let f: Vec<f64> = grid.points().iter().map(|&x| l.profile(x)).collect();
        assert!((trapezoid(&f, &grid) - 1.0).abs() < 0.01);
    }

    #[test]
    fn hwhm_roundtrip() {
        for shape in PseudoDeltaShape::ALL {
            let eps = shape.epsilon_for_hwhm(0.05);
            assert!((shape.hwhm(eps) - 0.05).abs() < 1e-15);
            let spec = shape_spec(shape, eps);
            if shape != PseudoDeltaShape::Rectangular {
                let ratio = spec.profile(0.05) / spec.profile(0.0);
                assert!((ratio - 0.5).abs() < 1e-12, "{shape:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn shapes_are_even(u in 0.0..1.0f64, eps in 0.01..0.5f64) {
            for shape in PseudoDeltaShape::ALL {
                let s = shape_spec(shape, eps);
                prop_assert_eq!(s.profile(u), s.profile(-u));
            }
        }

        #[test]
        fn sampling_is_linear_in_barriers(
            c1 in -5.0..5.0f64, c2 in -5.0..5.0f64,
            a1 in -3.0..3.0f64, a2 in -3.0..3.0f64,
        ) {
            let grid = Grid::new(-10.0, 10.0, 401).unwrap();
            let base = BasePotential::Harmonic { omega: 1e15, center: 0.0 };
            let b1 = PseudoDelta::rectangular(c1, a1, 0.2);
            let b2 = PseudoDelta { center: c2, alpha: a2, epsilon: 0.1, shape: PseudoDeltaShape::Lorentzian };
            let both = sample_potential(&PotentialSpec::new(base).with_barrier(b1).with_barrier(b2), &grid, 0.5).unwrap();
            let one = sample_potential(&PotentialSpec::new(base).with_barrier(b1), &grid, 0.5).unwrap();
            let two = sample_potential(&PotentialSpec::new(base).with_barrier(b2), &grid, 0.5).unwrap();
            let none = sample_potential(&PotentialSpec::new(base), &grid, 0.5).unwrap();
            for k in 0..grid.n_points() {
                prop_assert!((both[k] - (one[k] + two[k] - none[k])).abs() < 1e-9 * (1.0 + both[k].abs()));
            }
        }
    }
}
