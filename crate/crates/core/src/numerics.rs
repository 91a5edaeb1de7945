//! Shared numerical kernels: PSD handling, Hermitian square roots, orthonormal
//! range bases, least-squares solves on subspaces, operator norms.
//!
//! Everything here is spectral (dense eigen/SVD); at desk scale that is the
//! simplest correct choice.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Shared tolerance registry. Every report carries the values actually used,
/// and the CLI can override any entry by name.
#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    /// Accepted deviation of twist entries from unit modulus at load time.
    pub unimodular: f64,
    /// Relative clip window for negative eigenvalues in `psd_floor`.
    pub psd_floor: f64,
    /// Relative tolerance for "operator >= 0" acceptance checks.
    pub psd_check: f64,
    /// Relative singular/eigen value cutoff for ranks and range bases.
    pub rank_cutoff: f64,
    /// Membership flag tolerance (commutation residuals, grid eigenvalues).
    pub membership: f64,
    /// Interior flag: least eigenvalue of the defect must exceed this.
    pub interior: f64,
    /// Purity: the CP-iteration curve must fall below this by `p_max`.
    pub purity: f64,
    /// c.n.c. flag: least eigenvalue of the box defect must exceed this.
    pub cnc: f64,
    /// Residual tolerance for the factorization/model pipelines.
    pub residual: f64,
    /// Residual tolerance for identities expected exact under truncation.
    pub identity: f64,
    /// Acceptance threshold for subspace least-squares solve residuals.
    pub solve: f64,
    /// Default certified-tail target for radial evaluation.
    pub tail: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unimodular: 1e-9,
            psd_floor: 1e-10,
            psd_check: 1e-9,
            rank_cutoff: 1e-10,
            membership: 1e-10,
            interior: 1e-10,
            purity: 1e-12,
            cnc: 1e-9,
            residual: 1e-8,
            identity: 1e-12,
            solve: 1e-8,
            tail: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tolerance `{name}` must be positive, got {value}"
            )));
        }
        match name {
            "unimodular" => self.unimodular = value,
            "psd_floor" => self.psd_floor = value,
            "psd_check" => self.psd_check = value,
            "rank_cutoff" => self.rank_cutoff = value,
            "membership" => self.membership = value,
            "interior" => self.interior = value,
            "purity" => self.purity = value,
            "cnc" => self.cnc = value,
            "residual" => self.residual = value,
            "identity" => self.identity = value,
            "solve" => self.solve = value,
            "tail" => self.tail = value,
            _ => return Err(Error::UnknownTolerance(name.to_string())),
        }
        Ok(())
    }
}

/// Diagnostics attached to a `psd_floor` call.
#[derive(Debug, Clone, Serialize)]
pub struct PsdReport {
    pub least_eigenvalue: f64,
    pub norm: f64,
    pub clip_count: usize,
    pub rel_tol: f64,
}

fn hermitian_defect(x: &CMatrix) -> f64 {
    (x - x.adjoint()).norm()
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending.
pub fn hermitian_eigen(x: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let scale = x.norm().max(1.0);
    let defect = hermitian_defect(x);
    if defect > 1e-10 * scale {
        return Err(Error::NotHermitian { defect });
    }
    // Symmetrize to wash out rounding before the solver.
    let h = (x + x.adjoint()).scale(0.5);
    let se = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&j| se.eigenvalues[j]).collect();
    let vecs = CMatrix::from_fn(x.nrows(), x.ncols(), |r, c| se.eigenvectors[(r, order[c])]);
    Ok((vals, vecs))
}

/// Least eigenvalue of a Hermitian matrix.
pub fn least_eigenvalue(x: &CMatrix) -> Result<f64> {
    let (vals, _) = hermitian_eigen(x)?;
    Ok(vals.first().copied().unwrap_or(0.0))
}

/// Clip eigenvalues in `[-rel_tol * norm, 0)` to zero; reject anything more
/// negative as genuinely indefinite.
pub fn psd_floor(x: &CMatrix, rel_tol: f64) -> Result<(CMatrix, PsdReport)> {
    let (vals, vecs) = hermitian_eigen(x)?;
    let norm = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let least = vals.first().copied().unwrap_or(0.0);
    let window = rel_tol * norm.max(1.0);
    if least < -window {
        return Err(Error::Indefinite { least, tol: window });
    }
    let mut clip_count = 0;
    let clipped: Vec<f64> = vals
        .iter()
        .map(|&v| {
            if v < 0.0 {
                clip_count += 1;
                0.0
            } else {
                v
            }
        })
        .collect();
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(
        clipped.len(),
        clipped.iter().map(|&v| Complex64::new(v, 0.0)),
    ));
    let floored = &vecs * diag * vecs.adjoint();
    Ok((
        floored,
        PsdReport { least_eigenvalue: least, norm, clip_count, rel_tol },
    ))
}

/// Hermitian square root of a PSD matrix (after `psd_floor`).
pub fn sqrt_psd(x: &CMatrix) -> Result<CMatrix> {
    sqrt_psd_with(x, Tolerances::default().psd_floor)
}

pub fn sqrt_psd_with(x: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    let (floored, _) = psd_floor(x, rel_tol)?;
    let (vals, vecs) = hermitian_eigen(&floored)?;
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| Complex64::new(v.max(0.0).sqrt(), 0.0)),
    ));
    Ok(&vecs * diag * vecs.adjoint())
}

/// Largest singular value.
pub fn operator_norm(x: &CMatrix) -> f64 {
    if x.nrows() == 0 || x.ncols() == 0 {
        return 0.0;
    }
    let sv = x.clone().singular_values();
    sv.iter().fold(0.0f64, |m, &s| m.max(s))
}

/// SVD-based column-space basis with relative singular-value cutoff.
/// Returns the orthonormal columns and the rank.
pub fn orthonormal_range(x: &CMatrix, eps_rank: f64) -> (CMatrix, usize) {
    if x.nrows() == 0 || x.ncols() == 0 {
        return (CMatrix::zeros(x.nrows(), 0), 0);
    }
    let svd = x.clone().svd(true, false);
    let u = svd.u.expect("svd with u requested");
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    if smax == 0.0 {
        return (CMatrix::zeros(x.nrows(), 0), 0);
    }
    let cutoff = eps_rank * smax;
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&j| svd.singular_values[j] > cutoff)
        .collect();
    let basis = CMatrix::from_fn(x.nrows(), keep.len(), |r, c| u[(r, keep[c])]);
    (basis, keep.len())
}

/// Orthonormal basis of the orthogonal complement of `range(x)`.
pub fn orthonormal_complement(x: &CMatrix, eps_rank: f64) -> CMatrix {
    let n = x.nrows();
    let (q, rank) = orthonormal_range(x, eps_rank);
    if rank == 0 {
        return CMatrix::identity(n, n);
    }
    let proj = CMatrix::identity(n, n) - &q * q.adjoint();
    let (c, _) = orthonormal_range(&proj, 0.5);
    c
}

/// Least-squares solve for `X` with `X * (U^h B) ~ U^h C` in the coordinates of
/// the orthonormal `range_basis` `U`. The columns of `C` must already lie in
/// `span(U)`; the leakage is checked first. Returns `X` together with the
/// condition number of the coordinate matrix `U^h B`.
pub fn solve_on_range(
    b: &CMatrix,
    c: &CMatrix,
    range_basis: &CMatrix,
    tol: f64,
) -> Result<(CMatrix, f64)> {
    let u = range_basis;
    let scale = operator_norm(c).max(1.0);
    let leakage = operator_norm(&(c - u * (u.adjoint() * c)));
    if leakage > 1e-8 * scale {
        return Err(Error::RangeLeakage { leakage: leakage / scale });
    }
    let bg = u.adjoint() * b;
    let cg = u.adjoint() * c;
    let svd = bg.clone().svd(true, true);
    let uu = svd.u.as_ref().expect("svd u");
    let vt = svd.v_t.as_ref().expect("svd v_t");
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    let cut = 1e-13 * smax.max(1.0);
    let smin = svd
        .singular_values
        .iter()
        .filter(|&&s| s > cut)
        .fold(f64::INFINITY, |m, &s| m.min(s));
    let cond = if smin.is_finite() && smin > 0.0 { smax / smin } else { f64::INFINITY };
    // X = Cg * pinv(Bg); pinv via the SVD with the same cutoff.
    let mut pinv = CMatrix::zeros(bg.ncols(), bg.nrows());
    for j in 0..svd.singular_values.len() {
        let s = svd.singular_values[j];
        if s > cut {
            let vj = vt.row(j).adjoint();
            let uj = uu.column(j);
            pinv += (vj * uj.adjoint()).scale(1.0 / s);
        }
    }
    let x = &cg * &pinv;
    let residual = operator_norm(&(&x * &bg - &cg)) / scale;
    if residual > tol {
        return Err(Error::SolveResidual { residual, cond, tol });
    }
    Ok((x, cond))
}

/// `(A ⊗ I_m) * X` without materializing the Kronecker factor. `X` has
/// `A.ncols() * m` rows; blocks of `m` consecutive rows share a basis index.
pub fn kron_apply_left(a: &CMatrix, x: &CMatrix, m: usize) -> CMatrix {
    let bn = a.ncols();
    assert_eq!(x.nrows(), bn * m, "row count must be ncols(A) * m");
    let cols = x.ncols();
    let mut out = CMatrix::zeros(a.nrows() * m, cols);
    for br in 0..a.nrows() {
        for bc in 0..bn {
            let w = a[(br, bc)];
            if w == ZERO {
                continue;
            }
            for l in 0..m {
                for c in 0..cols {
                    out[(br * m + l, c)] += w * x[(bc * m + l, c)];
                }
            }
        }
    }
    out
}

/// Frobenius-orthonormality defect `‖U^h U − I‖` of a column frame.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let g = u.adjoint() * u;
    (g - CMatrix::identity(u.ncols(), u.ncols())).norm()
}
