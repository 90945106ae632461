//! Brute-force perturbation theory on a truncated axial Fock basis.
//!
//! The ladder operators are materialised as dense matrices and the
//! relativistic Hamiltonians are assembled by matrix products, so nothing
//! here depends on the closed-form expressions it is used to check.
//!
//! `p_z` only ever appears squared. With `p_z = i√(ħ m ω_z / 2)(a† − a)` the
//! dimensionless kinetic operator is `K = p_z²/(2 m ħω_z) = −(a† − a)²/4`,
//! which is real symmetric, so all matrices stay real.
//!
//! Truncation corrupts matrix elements within a few rows of the cut; only
//! indices at most `dim − guard_band` are trusted.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Dense real matrix of an operator on the first `dim` oscillator states.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    matrix: DMatrix<f64>,
}

impl TruncatedOperator {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Self {
        assert!(matrix.is_square(), "operator matrices are square");
        TruncatedOperator { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Element `⟨row|O|col⟩`.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.matrix[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn transpose(&self) -> Self {
        Self::from_matrix(self.matrix.transpose())
    }

    pub fn mul(&self, other: &TruncatedOperator) -> Self {
        Self::from_matrix(&self.matrix * &other.matrix)
    }

    /// Largest `|M[i,j] − M[j,i]|`.
    pub fn asymmetry(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i + 1..d {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)]).abs());
            }
        }
        worst
    }

    /// Commutator `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &TruncatedOperator) -> Self {
        Self::from_matrix(&self.matrix * &other.matrix - &other.matrix * &self.matrix)
    }
}

/// Truncation size and trust settings for the oracle.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct OracleConfig {
    pub dim: usize,
    /// Rows/columns at the top of the basis excluded from results.
    pub guard_band: usize,
    /// Relative tolerance used when comparing against closed forms.
    pub tol: f64,
}

impl OracleConfig {
    pub const DEFAULT_GUARD_BAND: usize = 8;
    pub const DEFAULT_TOL: f64 = 1e-10;

    pub fn new(dim: usize) -> Result<Self> {
        Self::with_guard_band(dim, Self::DEFAULT_GUARD_BAND)
    }

    pub fn with_guard_band(dim: usize, guard_band: usize) -> Result<Self> {
        let cfg = OracleConfig {
            dim,
            guard_band,
            tol: Self::DEFAULT_TOL,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 || self.dim < self.guard_band + 1 {
            return Err(Error::InvalidConfig(format!(
                "truncation dim {} must be at least max(2, guard band + 1 = {})",
                self.dim,
                self.guard_band + 1
            )));
        }
        Ok(())
    }

    /// Largest trusted axial index.
    pub fn max_trusted(&self) -> usize {
        self.dim - self.guard_band
    }

    pub fn check_trusted(&self, index: usize) -> Result<()> {
        if index > self.max_trusted() {
            return Err(Error::Truncation {
                index,
                max_trusted: self.max_trusted(),
                dim: self.dim,
            });
        }
        Ok(())
    }
}

/// Lowering and raising operators `(a, a†)` with `a[i, i+1] = √(i+1)`.
pub fn build_ladder(dim: usize) -> Result<(TruncatedOperator, TruncatedOperator)> {
    if dim < 2 {
        return Err(Error::InvalidConfig(format!(
            "ladder dim must be at least 2, got {dim}"
        )));
    }
    let a = DMatrix::from_fn(dim, dim, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 });
    let a = TruncatedOperator::from_matrix(a);
    let a_dag = a.transpose();
    Ok((a, a_dag))
}

/// `a† − a`, the anti-Hermitian part of `p_z` up to the factor `i√(ħmω_z/2)`.
fn momentum_quadrature(dim: usize) -> Result<DMatrix<f64>> {
    let (a, a_dag) = build_ladder(dim)?;
    Ok(a_dag.matrix() - a.matrix())
}

/// Dimensionless axial kinetic energy `K = −(a† − a)²/4`.
pub fn build_axial_kinetic(dim: usize) -> Result<TruncatedOperator> {
    let d = momentum_quadrature(dim)?;
    Ok(TruncatedOperator::from_matrix(&d * &d * -0.25))
}

/// First- and second-order relativistic Hamiltonians at fixed `n`, in `ħω_z` units.
#[derive(Debug, Clone)]
pub struct PerturbationMatrices {
    pub h1: TruncatedOperator,
    pub h2: TruncatedOperator,
}

/// `H1 = −(ε/2)(n w + K)²`, `H2 = (ε²/2)(n w + K)³`.
pub fn perturbation_matrices(n: u32, w: f64, eps: f64, dim: usize) -> Result<PerturbationMatrices> {
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::Domain(format!("w must be positive, got {w}")));
    }
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::Domain(format!("eps must be non-negative, got {eps}")));
    }
    let k = build_axial_kinetic(dim)?;
    let shifted = DMatrix::<f64>::identity(dim, dim) * (n as f64 * w) + k.matrix();
    let sq = &shifted * &shifted;
    let cube = &sq * &shifted;
    Ok(PerturbationMatrices {
        h1: TruncatedOperator::from_matrix(sq * (-0.5 * eps)),
        h2: TruncatedOperator::from_matrix(cube * (0.5 * eps * eps)),
    })
}

impl PerturbationMatrices {
    pub fn new(n: u32, w: f64, eps: f64, cfg: &OracleConfig) -> Result<Self> {
        cfg.validate()?;
        perturbation_matrices(n, w, eps, cfg.dim)
    }

    /// `⟨n_z|H1|n_z⟩`.
    pub fn first_order(&self, nz: usize, cfg: &OracleConfig) -> Result<f64> {
        cfg.check_trusted(nz)?;
        Ok(self.h1.get(nz, nz))
    }

    /// `⟨n_z|H2|n_z⟩ + Σ_{p≠n_z} ⟨p|H1|n_z⟩² / (n_z − p)` over the whole basis.
    pub fn second_order(&self, nz: usize, cfg: &OracleConfig) -> Result<f64> {
        cfg.check_trusted(nz)?;
        let sum: f64 = (0..self.h1.dim())
            .filter(|&p| p != nz)
            .map(|p| {
                let v = self.h1.get(p, nz);
                v * v / (nz as f64 - p as f64)
            })
            .sum();
        Ok(self.h2.get(nz, nz) + sum)
    }

    /// `⟨p|H1|n_z⟩`.
    pub fn matrix_element(&self, nz: usize, p: usize, cfg: &OracleConfig) -> Result<f64> {
        cfg.check_trusted(nz)?;
        cfg.check_trusted(p)?;
        Ok(self.h1.get(p, nz))
    }
}

pub fn first_order_oracle(n: u32, nz: usize, w: f64, eps: f64, cfg: &OracleConfig) -> Result<f64> {
    cfg.check_trusted(nz)?;
    PerturbationMatrices::new(n, w, eps, cfg)?.first_order(nz, cfg)
}

pub fn second_order_oracle(n: u32, nz: usize, w: f64, eps: f64, cfg: &OracleConfig) -> Result<f64> {
    cfg.check_trusted(nz)?;
    PerturbationMatrices::new(n, w, eps, cfg)?.second_order(nz, cfg)
}

pub fn matrix_element(n: u32, nz: usize, p: usize, w: f64, eps: f64, cfg: &OracleConfig) -> Result<f64> {
    cfg.check_trusted(nz)?;
    cfg.check_trusted(p)?;
    PerturbationMatrices::new(n, w, eps, cfg)?.matrix_element(nz, p, cfg)
}

/// `⟨n_z|(a† − a)^k|n_z⟩` by repeated matrix multiplication, `k ≤ 6`.
pub fn centered_moment(k: u32, nz: usize, cfg: &OracleConfig) -> Result<f64> {
    if k > 6 {
        return Err(Error::Domain(format!("moment power must be at most 6, got {k}")));
    }
    cfg.validate()?;
    cfg.check_trusted(nz)?;
    let d = momentum_quadrature(cfg.dim)?;
    let mut acc = DMatrix::<f64>::identity(cfg.dim, cfg.dim);
    for _ in 0..k {
        acc = &acc * &d;
    }
    Ok(acc[(nz, nz)])
}
