//! Completely positive maps, defect maps, and the membership / purity /
//! c.n.c. / interior predicates for tuples of twisted-commuting row
//! contractions.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigen, least_eigenvalue, operator_norm, CMatrix};
use crate::twist::TwistSpec;
use crate::words::{enumerate_basis, MultiWord, Word};

/// A k-tuple of rows of complex d×d matrices acting on a common space.
#[derive(Debug, Clone)]
pub struct OperatorTuple {
    arities: Vec<usize>,
    dim: usize,
    /// ops[i-1][s-1] is the matrix of slot s in factor i.
    ops: Vec<Vec<CMatrix>>,
}

impl OperatorTuple {
    pub fn new(arities: Vec<usize>, ops: Vec<Vec<CMatrix>>) -> Result<Self> {
        if arities.len() != ops.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} factors", arities.len()),
                got: format!("{} rows", ops.len()),
            });
        }
        let dim = ops
            .first()
            .and_then(|row| row.first())
            .map(|m| m.nrows())
            .ok_or_else(|| Error::InvalidInput("tuple needs at least one operator".into()))?;
        if dim == 0 {
            return Err(Error::InvalidInput("operator dimension must be at least 1".into()));
        }
        for (idx, (&n, row)) in arities.iter().zip(&ops).enumerate() {
            if n == 0 {
                return Err(Error::InvalidArity { factor: idx + 1 });
            }
            if row.len() != n {
                return Err(Error::ShapeMismatch {
                    expected: format!("{n} slots in factor {}", idx + 1),
                    got: format!("{}", row.len()),
                });
            }
            for m in row {
                if m.nrows() != dim || m.ncols() != dim {
                    return Err(Error::ShapeMismatch {
                        expected: format!("{dim}x{dim}"),
                        got: format!("{}x{}", m.nrows(), m.ncols()),
                    });
                }
            }
        }
        Ok(OperatorTuple { arities, dim, ops })
    }

    /// Single factor, single slot.
    pub fn scalar(value: Complex64) -> Self {
        OperatorTuple {
            arities: vec![1],
            dim: 1,
            ops: vec![vec![CMatrix::from_element(1, 1, value)]],
        }
    }

    /// One scalar slot per factor (the commuting-contractions case).
    pub fn scalars(values: &[Complex64]) -> Self {
        OperatorTuple {
            arities: vec![1; values.len()],
            dim: 1,
            ops: values
                .iter()
                .map(|&v| vec![CMatrix::from_element(1, 1, v)])
                .collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.arities.len()
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn op(&self, factor: usize, slot: usize) -> &CMatrix {
        &self.ops[factor - 1][slot - 1]
    }

    pub fn row(&self, factor: usize) -> &[CMatrix] {
        &self.ops[factor - 1]
    }

    /// Word product `T_{i,α} = T_{i,p₁} ⋯ T_{i,p_m}`; identity for the empty word.
    pub fn word_product(&self, factor: usize, word: &Word) -> CMatrix {
        let mut out = CMatrix::identity(self.dim, self.dim);
        for &letter in word.letters() {
            out = out * self.op(factor, letter);
        }
        out
    }

    /// Ordered monomial `T_{1,β₁} ⋯ T_{k,β_k}`.
    pub fn multiword_product(&self, beta: &MultiWord) -> CMatrix {
        let mut out = CMatrix::identity(self.dim, self.dim);
        for i in 1..=self.k() {
            out = out * self.word_product(i, beta.component(i));
        }
        out
    }

    /// Every matrix multiplied by `r`.
    pub fn scaled(&self, r: f64) -> OperatorTuple {
        OperatorTuple {
            arities: self.arities.clone(),
            dim: self.dim,
            ops: self
                .ops
                .iter()
                .map(|row| row.iter().map(|m| m.scale(r)).collect())
                .collect(),
        }
    }

    /// Componentwise conjugation `W T W*`.
    pub fn conjugated(&self, w: &CMatrix) -> OperatorTuple {
        OperatorTuple {
            arities: self.arities.clone(),
            dim: self.dim,
            ops: self
                .ops
                .iter()
                .map(|row| row.iter().map(|m| w * m * w.adjoint()).collect())
                .collect(),
        }
    }
}

/// Alias kept close to the formula: `scaled_tuple(T, r) = rT`.
pub fn scaled_tuple(tuple: &OperatorTuple, r: f64) -> OperatorTuple {
    tuple.scaled(r)
}

/// `Φ_{rT_i}(X) = Σ_s r² T_{i,s} X T_{i,s}*`.
pub fn phi_map(tuple: &OperatorTuple, factor: usize, x: &CMatrix, r: f64) -> Result<CMatrix> {
    if x.nrows() != tuple.dim || x.ncols() != tuple.dim {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{}", tuple.dim, tuple.dim),
            got: format!("{}x{}", x.nrows(), x.ncols()),
        });
    }
    if factor == 0 || factor > tuple.k() {
        return Err(Error::FactorOutOfRange { factor, k: tuple.k() });
    }
    let mut out = CMatrix::zeros(tuple.dim, tuple.dim);
    for t in tuple.row(factor) {
        out += (t * x * t.adjoint()).scale(r * r);
    }
    Ok(out)
}

fn phi_power(tuple: &OperatorTuple, factor: usize, x: &CMatrix, power: usize) -> Result<CMatrix> {
    let mut out = x.clone();
    for _ in 0..power {
        out = phi_map(tuple, factor, &out, 1.0)?;
    }
    Ok(out)
}

/// `Δ_{rT}(I) = (id − Φ_{rT_k}) ∘ ⋯ ∘ (id − Φ_{rT_1})(I)`, factor 1 first.
pub fn defect_delta(tuple: &OperatorTuple, r: f64) -> Result<CMatrix> {
    let order: Vec<usize> = (1..=tuple.k()).collect();
    defect_delta_ordered(tuple, r, &order)
}

/// Same with an explicit factor application order (for the order-independence
/// checks; the CP maps commute for twisted-commuting tuples).
pub fn defect_delta_ordered(tuple: &OperatorTuple, r: f64, order: &[usize]) -> Result<CMatrix> {
    let mut x = CMatrix::identity(tuple.dim, tuple.dim);
    for &i in order {
        let phi = phi_map(tuple, i, &x, r)?;
        x -= phi;
    }
    Ok(x)
}

/// The finite box defect `(id − Φ_{T_k}^{p_k}) ∘ ⋯ ∘ (id − Φ_{T_1}^{p_1})(I)`.
pub fn box_defect(tuple: &OperatorTuple, powers: &[usize]) -> Result<CMatrix> {
    if powers.len() != tuple.k() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} box exponents", tuple.k()),
            got: format!("{}", powers.len()),
        });
    }
    if powers.iter().any(|&p| p == 0) {
        return Err(Error::InvalidInput("box exponents must be at least 1".into()));
    }
    let mut x = CMatrix::identity(tuple.dim, tuple.dim);
    for i in 1..=tuple.k() {
        let phi = phi_power(tuple, i, &x, powers[i - 1])?;
        x -= phi;
    }
    Ok(x)
}

/// `Σ_{|β| ≤ total} T_β Δ_T(I) T_β*` over the total-grade simplex, computed by
/// the word-prefix recursion. This is the Gram matrix `K*K` of the Berezin
/// kernel truncated at `total`, and the building block of tail certificates.
pub fn simplex_gram(tuple: &OperatorTuple, total: usize, cap: usize) -> Result<CMatrix> {
    let basis = enumerate_basis(&tuple.arities, total, cap)?;
    let delta = defect_delta(tuple, 1.0)?;
    let mut products: Vec<CMatrix> = Vec::with_capacity(basis.size());
    let mut gram = CMatrix::zeros(tuple.dim, tuple.dim);
    for p in 0..basis.size() {
        let word = basis.word_at(p)?;
        let v = match word.leading_split() {
            None => CMatrix::identity(tuple.dim, tuple.dim),
            Some((factor, letter, parent)) => {
                let parent_idx = basis
                    .index_of(&parent)
                    .expect("parent of a basis word is in the basis");
                tuple.op(factor, letter) * &products[parent_idx]
            }
        };
        gram += &v * &delta * v.adjoint();
        products.push(v);
    }
    Ok(gram)
}

/// Membership diagnostics for a candidate tuple.
#[derive(Debug, Clone, Serialize)]
pub struct MembershipReport {
    pub commutation_residual: f64,
    pub row_contraction_margins: Vec<f64>,
    pub delta_min_eigs: Vec<(f64, f64)>,
    pub is_member: bool,
    pub tolerance: f64,
}

/// Default grid on which the defect positivity is sampled.
pub fn default_r_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=19).map(|j| j as f64 * 0.05).collect();
    grid.push(0.99);
    grid
}

/// Evaluate the twisted-commutation residuals, the row-contraction margins,
/// and the least eigenvalue of `Δ_{rT}(I)` across the grid.
pub fn check_membership(
    tuple: &OperatorTuple,
    spec: &TwistSpec,
    r_grid: &[f64],
    tol: f64,
) -> Result<MembershipReport> {
    if spec.arities() != tuple.arities() {
        return Err(Error::ArityMismatch {
            left: spec.arities().to_vec(),
            right: tuple.arities().to_vec(),
        });
    }
    let mut commutation_residual: f64 = 0.0;
    for i in 1..=tuple.k() {
        for j in (i + 1)..=tuple.k() {
            for s in 1..=tuple.arities[i - 1] {
                for t in 1..=tuple.arities[j - 1] {
                    let lambda = spec.lambda(i, j, s, t)?;
                    let lhs = tuple.op(i, s) * tuple.op(j, t);
                    let rhs = (tuple.op(j, t) * tuple.op(i, s)).scale(1.0) * lambda;
                    commutation_residual = commutation_residual.max(operator_norm(&(lhs - rhs)));
                }
            }
        }
    }

    let id = CMatrix::identity(tuple.dim, tuple.dim);
    let mut row_contraction_margins = Vec::with_capacity(tuple.k());
    for i in 1..=tuple.k() {
        let gram = phi_map(tuple, i, &id, 1.0)?;
        row_contraction_margins.push(least_eigenvalue(&(&id - gram))?);
    }

    let delta_min_eigs: Vec<(f64, f64)> = r_grid
        .par_iter()
        .map(|&r| {
            let delta = defect_delta(tuple, r)?;
            Ok((r, least_eigenvalue(&delta)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let scale = delta_min_eigs
        .iter()
        .map(|&(_, e)| e.abs())
        .fold(1.0f64, f64::max);
    let psd_ok = delta_min_eigs.iter().all(|&(_, e)| e >= -tol * scale);
    let rows_ok = row_contraction_margins.iter().all(|&m| m >= -tol);
    let is_member = commutation_residual <= tol && psd_ok && rows_ok;

    Ok(MembershipReport {
        commutation_residual,
        row_contraction_margins,
        delta_min_eigs,
        is_member,
        tolerance: tol,
    })
}

/// Interior test: least eigenvalue of `Δ_T(I)` strictly above `tol`.
pub fn check_interior(tuple: &OperatorTuple, tol: f64) -> Result<(bool, f64)> {
    let margin = least_eigenvalue(&defect_delta(tuple, 1.0)?)?;
    Ok((margin > tol, margin))
}

/// Per-factor decay curves of `‖Φ_{T_i}^p(I)‖`.
#[derive(Debug, Clone, Serialize)]
pub struct PurityReport {
    pub curves: Vec<Vec<f64>>,
    pub is_pure: bool,
    pub p_max: usize,
    pub tolerance: f64,
}

pub fn purity_report(tuple: &OperatorTuple, p_max: usize, tol: f64) -> Result<PurityReport> {
    let id = CMatrix::identity(tuple.dim, tuple.dim);
    let mut curves = Vec::with_capacity(tuple.k());
    for i in 1..=tuple.k() {
        let mut x = id.clone();
        let mut curve = Vec::with_capacity(p_max);
        for _ in 1..=p_max {
            x = phi_map(tuple, i, &x, 1.0)?;
            curve.push(operator_norm(&x));
        }
        curves.push(curve);
    }
    let is_pure = curves
        .iter()
        .all(|c| c.last().map(|&v| v <= tol).unwrap_or(false));
    Ok(PurityReport { curves, is_pure, p_max, tolerance: tol })
}

/// Iterate `X ← Φ_{T_i}(X)` from the identity until successive iterates are
/// within `tol`; reports convergence rather than failing.
pub fn phi_limit(
    tuple: &OperatorTuple,
    factor: usize,
    iterations: usize,
    tol: f64,
) -> Result<(CMatrix, bool)> {
    let mut x = CMatrix::identity(tuple.dim, tuple.dim);
    for _ in 0..iterations {
        let next = phi_map(tuple, factor, &x, 1.0)?;
        let step = operator_norm(&(&next - &x));
        x = next;
        if step <= tol {
            return Ok((x, true));
        }
    }
    Ok((x, false))
}

/// One-sided c.n.c. proxy at the supplied box: least eigenvalue of the box
/// defect must exceed `tol`. The box used is the caller's claim that the
/// purity curves have plateaued.
pub fn cnc_check(tuple: &OperatorTuple, powers: &[usize], tol: f64) -> Result<(bool, f64)> {
    let least = least_eigenvalue(&box_defect(tuple, powers)?)?;
    Ok((least > tol, least))
}

/// Least eigenvalue shortcut used in a few reports.
pub fn min_eig(x: &CMatrix) -> Result<f64> {
    least_eigenvalue(x)
}

/// Hermitian spectrum, ascending (report helper).
pub fn spectrum(x: &CMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(x)?.0)
}
