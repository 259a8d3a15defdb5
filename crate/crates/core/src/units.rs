//! Physical constants and the uniform spatial grid.
//!
//! Units are fixed across the crate: lengths in nm, energies in eV, masses as
//! `m_rel = m / m_e`, angular frequencies in s⁻¹.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant (J·s), CODATA 2018.
pub const HBAR_J_S: f64 = 1.054_571_817e-34;
/// Electron rest mass (kg), CODATA 2018.
pub const ELECTRON_MASS_KG: f64 = 9.109_383_701_5e-31;
/// Elementary charge (J per eV), exact.
pub const JOULE_PER_EV: f64 = 1.602_176_634e-19;
/// Metres per nanometre.
pub const M_PER_NM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// ħ²/(2mₑ) in eV·nm².
    pub hbar2_over_2me: f64,
    /// ħ in eV·s.
    pub hbar_ev_s: f64,
}

impl PhysicalConstants {
    pub fn codata() -> Self {
        let hbar2_over_2me =
            HBAR_J_S * HBAR_J_S / (2.0 * ELECTRON_MASS_KG) / JOULE_PER_EV / (M_PER_NM * M_PER_NM);
        Self {
            hbar2_over_2me,
            hbar_ev_s: HBAR_J_S / JOULE_PER_EV,
        }
    }

    /// ħ²/(2m) in eV·nm² for a particle of relative mass `m_rel`.
    pub fn kinetic_prefactor(&self, m_rel: f64) -> f64 {
        self.hbar2_over_2me / m_rel
    }

    /// ħω in eV.
    pub fn quantum_energy(&self, omega: f64) -> f64 {
        self.hbar_ev_s * omega
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata()
    }
}

/// Uniform grid `x_k = x_min + k·dx`, `k ∈ [0, n_points)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
    dx: f64,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::InvalidGrid(format!(
                "n_points must be at least 3, got {n_points}"
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::InvalidGrid(format!(
                "need x_max > x_min, got [{x_min}, {x_max}]"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
            dx: (x_max - x_min) / (n_points - 1) as f64,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Number of unknowns once the Dirichlet endpoints are removed.
    pub fn n_interior(&self) -> usize {
        self.n_points - 2
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    /// Midpoint of the domain; closed-form mass profiles are centred here.
    pub fn center(&self) -> f64 {
        0.5 * (self.x_min + self.x_max)
    }

    /// Sample position, from the closed form so the last point lands on `x_max`.
    pub fn x(&self, k: usize) -> f64 {
        if k + 1 == self.n_points {
            return self.x_max;
        }
        self.x_min + k as f64 * self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.x(k)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_min && x <= self.x_max
    }

    /// Index of the sample closest to `x`; ties go to the lower index.
    pub fn nearest_index(&self, x: f64) -> Result<usize> {
        if !self.contains(x) {
            return Err(Error::OutOfDomain {
                x,
                x_min: self.x_min,
                x_max: self.x_max,
            });
        }
        let t = (x - self.x_min) / self.dx;
        let lower = (t.floor() as usize).min(self.n_points - 1);
        if lower + 1 >= self.n_points {
            return Ok(lower);
        }
        let d_lo = (x - self.x(lower)).abs();
        let d_hi = (self.x(lower + 1) - x).abs();
        Ok(if d_hi < d_lo { lower + 1 } else { lower })
    }
}

/// Composite trapezoid rule on the grid.
pub fn trapezoid(values: &[f64], grid: &Grid) -> f64 {
    debug_assert_eq!(values.len(), grid.n_points());
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..n - 1].iter().sum();
    grid.dx() * (inner + 0.5 * (values[0] + values[n - 1]))
}
