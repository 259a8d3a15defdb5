//! Numerov matrices and Hamiltonian assembly.
//!
//! On the interior samples (the two Dirichlet endpoints are dropped) the
//! Numerov stencil reads `A·ψ = B·(f·ψ)` with
//!
//! * `A = (I₋₁ − 2I₀ + I₁)/dx²`
//! * `B = (I₋₁ + 10I₀ + I₁)/12`
//!
//! so the constant-mass Hamiltonian is `H = −(ħ²/2m)·B⁻¹A + diag(V)`. Both `A`
//! and `B` are polynomials in the shift matrix `I₋₁ + I₁`, hence they commute
//! and `B⁻¹A` is symmetric. With a position-dependent mass the Numerov weight
//! matrix becomes `M = B·diag(m_rel)` and
//! `H = −(ħ²/2mₑ)·M⁻¹A + diag(V_eff)` acts on `ξ = ψ/√m_rel`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::{check_positive_mass, mass_derivatives, MassProfile};
use crate::units::{Grid, PhysicalConstants};

/// Symmetric tridiagonal matrix stored as its diagonal and one off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSymmetric {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
}

impl TridiagonalSymmetric {
    pub fn constant(n: usize, diag: f64, off: f64) -> Self {
        Self {
            diagonal: vec![diag; n],
            off_diagonal: vec![off; n.saturating_sub(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.diagonal[i] * x[i];
                if i > 0 {
                    y += self.off_diagonal[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off_diagonal[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, self.diagonal[i]);
            if i + 1 < n {
                m.set(i, i + 1, self.off_diagonal[i]);
                m.set(i + 1, i, self.off_diagonal[i]);
            }
        }
        m
    }

    /// Thomas factorization, valid for the diagonally dominant `B`.
    fn factor(&self) -> TridiagonalFactor {
        let n = self.dim();
        let mut pivots = vec![0.0; n];
        let mut multipliers = vec![0.0; n.saturating_sub(1)];
        pivots[0] = self.diagonal[0];
        for i in 1..n {
            multipliers[i - 1] = self.off_diagonal[i - 1] / pivots[i - 1];
            pivots[i] = self.diagonal[i] - multipliers[i - 1] * self.off_diagonal[i - 1];
        }
        TridiagonalFactor {
            pivots,
            multipliers,
            upper: self.off_diagonal.clone(),
        }
    }
}

struct TridiagonalFactor {
    pivots: Vec<f64>,
    multipliers: Vec<f64>,
    upper: Vec<f64>,
}

impl TridiagonalFactor {
    fn solve_in_place(&self, rhs: &mut [f64]) {
        let n = rhs.len();
        for i in 1..n {
            rhs[i] -= self.multipliers[i - 1] * rhs[i - 1];
        }
        rhs[n - 1] /= self.pivots[n - 1];
        for i in (0..n - 1).rev() {
            rhs[i] = (rhs[i] - self.upper[i] * rhs[i + 1]) / self.pivots[i];
        }
    }
}

/// Square column-major matrix, the layout LAPACK expects.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[col * self.n + row]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[col * self.n + row] = value;
    }

    pub fn column(&self, col: usize) -> &[f64] {
        &self.data[col * self.n..(col + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |Mᵢⱼ − Mⱼᵢ|`
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.n {
            for i in j + 1..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                for (yi, mij) in y.iter_mut().zip(self.column(j)) {
                    *yi += mij * xj;
                }
            }
        }
        y
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.n);
        for j in 0..self.n {
            let col = self.matvec(other.column(j));
            out.data[j * self.n..(j + 1) * self.n].copy_from_slice(&col);
        }
        out
    }

    /// Replace the matrix by `(M + Mᵀ)/2`.
    pub fn symmetrize(&mut self) {
        for j in 0..self.n {
            for i in j + 1..self.n {
                let avg = 0.5 * (self.get(i, j) + self.get(j, i));
                self.set(i, j, avg);
                self.set(j, i, avg);
            }
        }
    }
}

/// `A = (I₋₁ − 2I₀ + I₁)/dx²` on the interior samples, in nm⁻².
pub fn build_a(grid: &Grid) -> TridiagonalSymmetric {
    let h2 = grid.dx() * grid.dx();
    TridiagonalSymmetric::constant(grid.n_interior(), -2.0 / h2, 1.0 / h2)
}

/// `B = (I₋₁ + 10I₀ + I₁)/12` on the interior samples.
pub fn build_b(grid: &Grid) -> TridiagonalSymmetric {
    TridiagonalSymmetric::constant(grid.n_interior(), 10.0 / 12.0, 1.0 / 12.0)
}

/// Dense `B⁻¹A` (nm⁻²), formed by solving `B·X = A` column by column.
pub fn numerov_laplacian(grid: &Grid) -> DenseMatrix {
    let a = build_a(grid);
    let factor = build_b(grid).factor();
    let n = a.dim();
    let mut x = DenseMatrix::zeros(n);
    for j in 0..n {
        let col = &mut x.data[j * n..(j + 1) * n];
        col[j] = a.diagonal[j];
        if j > 0 {
            col[j - 1] = a.off_diagonal[j - 1];
        }
        if j + 1 < n {
            col[j + 1] = a.off_diagonal[j];
        }
        factor.solve_in_place(col);
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    ConstantMass,
    PositionDependentMass,
}

/// An assembled, solvable Numerov system.
///
/// `potential` and `m_rel` hold one value per grid sample (endpoints
/// included); the matrices act on the interior samples only.
#[derive(Debug, Clone)]
pub struct HamiltonianSystem {
    pub kind: SystemKind,
    pub a: TridiagonalSymmetric,
    pub b: TridiagonalSymmetric,
    /// V (constant mass) or V_eff (position-dependent mass), eV.
    pub potential: Vec<f64>,
    pub m_rel: Vec<f64>,
    pub grid: Grid,
    pub constants: PhysicalConstants,
}

impl HamiltonianSystem {
    fn interior<'a>(&self, v: &'a [f64]) -> &'a [f64] {
        &v[1..v.len() - 1]
    }

    /// `H` exactly as written: `−(ħ²/2m)B⁻¹A + V` or `−(ħ²/2mₑ)M⁻¹A + V_eff`.
    pub fn dense_hamiltonian(&self) -> DenseMatrix {
        let mut h = numerov_laplacian(&self.grid);
        let c = self.constants.hbar2_over_2me;
        let m = self.interior(&self.m_rel);
        let v = self.interior(&self.potential);
        // Row i of M⁻¹A = D⁻¹B⁻¹A is scaled by 1/m_i; for constant mass this is ħ²/2m.
        for (j, vj) in v.iter().enumerate() {
            for (i, mi) in m.iter().enumerate() {
                let val = -c / mi * h.get(i, j);
                h.set(i, j, val);
            }
            let d = h.get(j, j) + vj;
            h.set(j, j, d);
        }
        h
    }

    /// Symmetric matrix whose eigenpairs the solver computes.
    ///
    /// Constant mass: `H` itself. Position-dependent mass: the similarity
    /// transform `D^{1/2}·H·D^{−1/2}` with `D = diag(m_rel)`, which equals
    /// `−(ħ²/2mₑ)·D^{−1/2}(B⁻¹A)D^{−1/2} + diag(V_eff)`. Its eigenvectors are
    /// `y = D^{1/2}ξ`.
    pub fn symmetric_operator(&self) -> DenseMatrix {
        let mut h = numerov_laplacian(&self.grid);
        let n = h.dim();
        let c = self.constants.hbar2_over_2me;
        let inv_sqrt_m: Vec<f64> = self
            .interior(&self.m_rel)
            .iter()
            .map(|m| 1.0 / m.sqrt())
            .collect();
        let v = self.interior(&self.potential);
        for j in 0..n {
            for i in 0..n {
                let val = -c * inv_sqrt_m[i] * inv_sqrt_m[j] * h.get(i, j);
                h.set(i, j, val);
            }
            let d = h.get(j, j) + v[j];
            h.set(j, j, d);
        }
        h.symmetrize();
        h
    }

    /// `M = (M₋₁ + 10M₀ + M₁)/12`, with `m_rel(x_k)` placed in column k.
    pub fn dense_mass_matrix(&self) -> DenseMatrix {
        let m = self.interior(&self.m_rel);
        let n = m.len();
        let mut out = DenseMatrix::zeros(n);
        for k in 0..n {
            out.set(k, k, 10.0 * m[k] / 12.0);
            if k + 1 < n {
                // M₋₁: subdiagonal entry (k+1, k) carries m(x_k).
                out.set(k + 1, k, m[k] / 12.0);
                // M₁: superdiagonal entry (k, k+1) carries m(x_{k+1}).
                out.set(k, k + 1, m[k + 1] / 12.0);
            }
        }
        out
    }
}

fn check_len(grid: &Grid, v: &[f64]) -> Result<()> {
    if v.len() != grid.n_points() {
        return Err(Error::DimensionMismatch {
            expected: grid.n_points(),
            got: v.len(),
        });
    }
    Ok(())
}

/// Constant-mass system `H = −(ħ²/2m)·B⁻¹A + diag(V)` with ψ = 0 at both ends.
pub fn assemble_constant_mass(
    grid: &Grid,
    potential: &[f64],
    m_rel: f64,
) -> Result<HamiltonianSystem> {
    check_len(grid, potential)?;
    if !(m_rel > 0.0) {
        return Err(Error::NonPositiveMass {
            index: 0,
            value: m_rel,
        });
    }
    Ok(HamiltonianSystem {
        kind: SystemKind::ConstantMass,
        a: build_a(grid),
        b: build_b(grid),
        potential: potential.to_vec(),
        m_rel: vec![m_rel; grid.n_points()],
        grid: *grid,
        constants: PhysicalConstants::codata(),
    })
}

/// Position-dependent-mass system `[−(ħ²/2mₑ)·M⁻¹A + diag(V_eff)]ξ = Eξ`.
pub fn assemble_pdm(
    grid: &Grid,
    effective_potential: &[f64],
    m_rel: &[f64],
) -> Result<HamiltonianSystem> {
    check_len(grid, effective_potential)?;
    check_len(grid, m_rel)?;
    check_positive_mass(m_rel)?;
    Ok(HamiltonianSystem {
        kind: SystemKind::PositionDependentMass,
        a: build_a(grid),
        b: build_b(grid),
        potential: effective_potential.to_vec(),
        m_rel: m_rel.to_vec(),
        grid: *grid,
        constants: PhysicalConstants::codata(),
    })
}

/// Ordering parameters `(r, s)` of the von Roos kinetic operator that make
/// the mass-derivative correction vanish.
pub const VANISHING_CORRECTION_RS: (f64, f64) = (-1.0, -1.5);

/// `V_eff = V − [ħ²(1+r)m″/(4m²) − ħ²(3/4 + s/2)m′²/(2m³)]`, in eV.
///
/// With `m = mₑ·m_rel` the bracket reduces to
/// `C·(1+r)·m_rel″/(2m_rel²) − C·(3/4 + s/2)·m_rel′²/m_rel³`, `C = ħ²/2mₑ`.
pub fn effective_potential(
    potential: &[f64],
    profile: &MassProfile,
    grid: &Grid,
    r: f64,
    s: f64,
) -> Result<Vec<f64>> {
    check_len(grid, potential)?;
    let m = crate::potentials::sample_mass(profile, grid)?;
    let (d1, d2) = mass_derivatives(profile, grid)?;
    let c = PhysicalConstants::codata().hbar2_over_2me;
    Ok(potential
        .iter()
        .zip(m.iter().zip(d1.iter().zip(&d2)))
        .map(|(&v, (&mk, (&m1, &m2)))| {
            let curvature = c * (1.0 + r) * m2 / (2.0 * mk * mk);
            let slope = c * (0.75 + 0.5 * s) * m1 * m1 / (mk * mk * mk);
            v - (curvature - slope)
        })
        .collect())
}
