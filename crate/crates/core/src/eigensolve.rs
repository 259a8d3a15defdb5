//! Lowest eigenpairs of an assembled system, with normalization, sign
//! convention and derivative sampling.

use std::os::raw::{c_char, c_int};

use serde::{Deserialize, Serialize};

use crate::assembly::{DenseMatrix, HamiltonianSystem, SystemKind};
use crate::error::{Error, Result};
use crate::units::{trapezoid, Grid};

/// One solved mode. `mode_index` is 0-based in ascending energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenpair {
    pub mode_index: usize,
    /// eV
    pub energy: f64,
    /// Physical wavefunction on every grid sample, trapezoid-normalized.
    pub psi: Vec<f64>,
    /// nm⁻¹ · (units of ψ)
    pub dpsi_dx: Vec<f64>,
    /// `ξ = ψ/√m_rel` for position-dependent-mass solves.
    pub xi: Option<Vec<f64>>,
}

impl Eigenpair {
    pub fn value_at(&self, grid: &Grid, x: f64) -> Result<f64> {
        Ok(self.psi[grid.nearest_index(x)?])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub pairs: Vec<Eigenpair>,
    pub system_kind: SystemKind,
    pub grid: Grid,
}

impl Spectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.energy).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Trapezoid inner products `∫ψᵢψⱼ dx`.
    pub fn gram_matrix(&self) -> Vec<Vec<f64>> {
        self.pairs
            .iter()
            .map(|a| {
                self.pairs
                    .iter()
                    .map(|b| inner_product(&a.psi, &b.psi, &self.grid))
                    .collect()
            })
            .collect()
    }
}

pub fn inner_product(a: &[f64], b: &[f64], grid: &Grid) -> f64 {
    let prod: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    trapezoid(&prod, grid)
}

/// Lowest `n_modes` eigenpairs of `system`.
pub fn solve(system: &HamiltonianSystem, n_modes: usize) -> Result<Spectrum> {
    let grid = system.grid;
    let n = grid.n_interior();
    if n_modes > n {
        return Err(Error::ModeCountTooLarge {
            requested: n_modes,
            available: n,
        });
    }
    if n_modes == 0 {
        return Ok(Spectrum {
            pairs: Vec::new(),
            system_kind: system.kind,
            grid,
        });
    }
    let op = system.symmetric_operator();
    let (values, vectors) = lowest_eigenpairs(op, n_modes)?;

    let mut pairs = Vec::with_capacity(n_modes);
    for (mode_index, &energy) in values.iter().enumerate() {
        let y = &vectors[mode_index * n..(mode_index + 1) * n];
        let mut raw = vec![0.0; grid.n_points()];
        raw[1..=n].copy_from_slice(y);
        // For constant mass y is ψ directly. For position-dependent mass the
        // solver returns y = D^{1/2}ξ, and ψ = √m_rel·ξ = y: the similarity
        // factor and the ψ/ξ substitution cancel, so ψ is y up to scale.
        let psi = normalize(&raw, &grid)?;
        let xi = match system.kind {
            SystemKind::ConstantMass => None,
            SystemKind::PositionDependentMass => Some(
                psi.iter()
                    .zip(&system.m_rel)
                    .map(|(p, m)| p / m.sqrt())
                    .collect(),
            ),
        };
        let dpsi_dx = derivative(&psi, &grid);
        pairs.push(Eigenpair {
            mode_index,
            energy,
            psi,
            dpsi_dx,
            xi,
        });
    }
    Ok(Spectrum {
        pairs,
        system_kind: system.kind,
        grid,
    })
}

/// Lowest `k` eigenvalues (ascending) and eigenvectors (column-major `n×k`)
/// of a symmetric matrix, via LAPACK `dsyevr`.
pub fn lowest_eigenpairs(matrix: DenseMatrix, k: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = matrix.dim();
    let mut a = matrix.into_vec();
    let n_i = n as c_int;
    let il: c_int = 1;
    let iu = k as c_int;
    let (vl, vu, abstol) = (0.0f64, 0.0f64, 0.0f64);
    let mut found: c_int = 0;
    let mut w = vec![0.0; n];
    let mut z = vec![0.0; n * k.max(1)];
    let mut isuppz = vec![0 as c_int; 2 * k.max(1)];
    let mut info: c_int = 0;
    let jobz = b'V' as c_char;
    let range = b'I' as c_char;
    let uplo = b'L' as c_char;

    // Workspace query.
    let mut work_size = [0.0f64];
    let mut iwork_size = [0 as c_int];
    let query: c_int = -1;
    unsafe {
        lapack_sys::dsyevr_(
            &jobz,
            &range,
            &uplo,
            &n_i,
            a.as_mut_ptr(),
            &n_i,
            &vl,
            &vu,
            &il,
            &iu,
            &abstol,
            &mut found,
            w.as_mut_ptr(),
            z.as_mut_ptr(),
            &n_i,
            isuppz.as_mut_ptr(),
            work_size.as_mut_ptr(),
            &query,
            iwork_size.as_mut_ptr(),
            &query,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::SolverFailure(format!(
            "dsyevr workspace query returned info = {info}"
        )));
    }
    let lwork = work_size[0] as c_int;
    let liwork = iwork_size[0];
    let mut work = vec![0.0; lwork.max(1) as usize];
    let mut iwork = vec![0 as c_int; liwork.max(1) as usize];
    unsafe {
        lapack_sys::dsyevr_(
            &jobz,
            &range,
            &uplo,
            &n_i,
            a.as_mut_ptr(),
            &n_i,
            &vl,
            &vu,
            &il,
            &iu,
            &abstol,
            &mut found,
            w.as_mut_ptr(),
            z.as_mut_ptr(),
            &n_i,
            isuppz.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::SolverFailure(format!(
            "dsyevr returned info = {info}"
        )));
    }
    if found as usize != k {
        return Err(Error::SolverFailure(format!(
            "dsyevr found {found} eigenvalues, expected {k}"
        )));
    }
    w.truncate(k);
    Ok((w, z))
}

/// `dψ/dx`: second-order central differences inside, second-order one-sided
/// stencils at the two endpoints.
pub fn derivative(psi: &[f64], grid: &Grid) -> Vec<f64> {
    let n = psi.len();
    let h = grid.dx();
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        d[k] = (psi[k + 1] - psi[k - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * psi[0] + 4.0 * psi[1] - psi[2]) / (2.0 * h);
    d[n - 1] = (3.0 * psi[n - 1] - 4.0 * psi[n - 2] + psi[n - 3]) / (2.0 * h);
    d
}

/// Scale to unit trapezoid norm and make the largest-|ψ| sample positive.
///
/// Near-ties for the largest magnitude (mirror-symmetric modes) resolve to
/// the leftmost candidate so the sign is stable across runs.
pub fn normalize(psi: &[f64], grid: &Grid) -> Result<Vec<f64>> {
    let sq: Vec<f64> = psi.iter().map(|v| v * v).collect();
    let norm2 = trapezoid(&sq, grid);
    if !(norm2 > 0.0) || !norm2.is_finite() {
        return Err(Error::ZeroVector);
    }
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let anchor = psi
        .iter()
        .find(|v| v.abs() >= peak * (1.0 - 1e-9))
        .copied()
        .unwrap_or(1.0);
    let scale = anchor.signum() / norm2.sqrt();
    Ok(psi.iter().map(|v| v * scale).collect())
}
