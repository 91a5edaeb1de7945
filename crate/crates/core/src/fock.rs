//! Twisted multi-shift matrices on a truncated basis, grade projections, and
//! the residual checks quantifying where the exact isometry/commutation
//! relations survive compression.
//!
//! Compression semantics: the matrices represent `P_N S P_N`, so images past
//! the top grade are zeroed. Grade-lowering identities are then exact on the
//! whole truncation, grade-raising ones on the interior (total grade ≤ N−1).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{operator_norm, CMatrix, ONE, ZERO};
use crate::twist::TwistSpec;
use crate::words::{concat_left, MultiWord, TruncatedBasis};

/// A compressed creation operator `S_{i,s}` stored column-sparse: each column
/// carries at most one nonzero entry, of modulus one.
#[derive(Debug, Clone)]
pub struct ShiftOperator {
    factor: usize,
    slot: usize,
    dim: usize,
    /// cols[c] = (r, phase) means `S e_c = phase · e_r`.
    cols: Vec<Option<(usize, Complex64)>>,
    /// rows[r] = (c, phase) is the inverse map (columns hit distinct rows).
    rows: Vec<Option<(usize, Complex64)>>,
}

impl ShiftOperator {
    pub fn factor(&self) -> usize {
        self.factor
    }

    pub fn slot(&self) -> usize {
        self.slot
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column_entry(&self, col: usize) -> Option<(usize, Complex64)> {
        self.cols[col]
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (c, entry) in self.cols.iter().enumerate() {
            if let Some((r, phase)) = entry {
                m[(*r, c)] = *phase;
            }
        }
        m
    }

    pub fn adjoint_dense(&self) -> CMatrix {
        self.to_dense().adjoint()
    }

    /// `S · X`.
    pub fn apply_left(&self, x: &CMatrix) -> CMatrix {
        self.apply_tensor_left(1, x)
    }

    /// `S* · X`.
    pub fn apply_adjoint_left(&self, x: &CMatrix) -> CMatrix {
        self.apply_tensor_adjoint_left(1, x)
    }

    /// `X · S`.
    pub fn apply_right(&self, x: &CMatrix) -> CMatrix {
        self.apply_tensor_right(1, x)
    }

    /// `X · S*`.
    pub fn apply_adjoint_right(&self, x: &CMatrix) -> CMatrix {
        self.apply_tensor_adjoint_right(1, x)
    }

    /// `(S ⊗ I_m) · X`.
    pub fn apply_tensor_left(&self, m: usize, x: &CMatrix) -> CMatrix {
        assert_eq!(x.nrows(), self.dim * m);
        let mut out = CMatrix::zeros(x.nrows(), x.ncols());
        for (c, entry) in self.cols.iter().enumerate() {
            if let Some((r, phase)) = entry {
                for l in 0..m {
                    for col in 0..x.ncols() {
                        out[(r * m + l, col)] = phase * x[(c * m + l, col)];
                    }
                }
            }
        }
        out
    }

    /// `(S* ⊗ I_m) · X`.
    pub fn apply_tensor_adjoint_left(&self, m: usize, x: &CMatrix) -> CMatrix {
        assert_eq!(x.nrows(), self.dim * m);
        let mut out = CMatrix::zeros(x.nrows(), x.ncols());
        for (r, entry) in self.rows.iter().enumerate() {
            if let Some((c, phase)) = entry {
                let w = phase.conj();
                for l in 0..m {
                    for col in 0..x.ncols() {
                        out[(c * m + l, col)] = w * x[(r * m + l, col)];
                    }
                }
            }
        }
        out
    }

    /// `X · (S ⊗ I_m)`.
    pub fn apply_tensor_right(&self, m: usize, x: &CMatrix) -> CMatrix {
        assert_eq!(x.ncols(), self.dim * m);
        let mut out = CMatrix::zeros(x.nrows(), x.ncols());
        for (c, entry) in self.cols.iter().enumerate() {
            if let Some((r, phase)) = entry {
                for l in 0..m {
                    for row in 0..x.nrows() {
                        out[(row, c * m + l)] = phase * x[(row, r * m + l)];
                    }
                }
            }
        }
        out
    }

    /// `X · (S* ⊗ I_m)`.
    pub fn apply_tensor_adjoint_right(&self, m: usize, x: &CMatrix) -> CMatrix {
        assert_eq!(x.ncols(), self.dim * m);
        let mut out = CMatrix::zeros(x.nrows(), x.ncols());
        for (r, entry) in self.rows.iter().enumerate() {
            if let Some((c, phase)) = entry {
                let w = phase.conj();
                for l in 0..m {
                    for row in 0..x.nrows() {
                        out[(row, r * m + l)] = w * x[(row, c * m + l)];
                    }
                }
            }
        }
        out
    }
}

/// Build the compressed shift `S_{i,s}` on the truncated basis.
pub fn build_shift(
    basis: &TruncatedBasis,
    spec: &TwistSpec,
    factor: usize,
    slot: usize,
) -> Result<ShiftOperator> {
    if factor == 0 || factor > basis.k() {
        return Err(Error::FactorOutOfRange { factor, k: basis.k() });
    }
    let arity = basis.arities()[factor - 1];
    if slot == 0 || slot > arity {
        return Err(Error::SlotOutOfRange { slot, factor, arity });
    }
    let dim = basis.size();
    let mut cols: Vec<Option<(usize, Complex64)>> = vec![None; dim];
    let mut rows: Vec<Option<(usize, Complex64)>> = vec![None; dim];
    for c in 0..dim {
        let alpha = basis.word_at(c)?;
        let image = alpha.with_component(factor, alpha.component(factor).prepend(slot)?);
        if let Some(r) = basis.index_of(&image) {
            let phase = spec.mu_letter(factor, slot, alpha)?;
            cols[c] = Some((r, phase));
            rows[r] = Some((c, phase));
        }
    }
    Ok(ShiftOperator { factor, slot, dim, cols, rows })
}

/// Conjugate transpose of the shift matrix — the annihilation action.
pub fn build_adjoint(shift: &ShiftOperator) -> CMatrix {
    shift.adjoint_dense()
}

/// All shifts of one factor.
pub fn build_row(basis: &TruncatedBasis, spec: &TwistSpec, factor: usize) -> Result<Vec<ShiftOperator>> {
    (1..=basis.arities()[factor - 1])
        .map(|s| build_shift(basis, spec, factor, s))
        .collect()
}

/// All shifts, indexed `[factor-1][slot-1]`.
pub fn build_all(basis: &TruncatedBasis, spec: &TwistSpec) -> Result<Vec<Vec<ShiftOperator>>> {
    (1..=basis.k()).map(|i| build_row(basis, spec, i)).collect()
}

/// Orthogonal projection onto the truncation interior (total grade ≤ N−1).
pub fn interior_projection(basis: &TruncatedBasis) -> Result<CMatrix> {
    if basis.truncation() == 0 {
        return Err(Error::TruncationTooSmall);
    }
    let boundary = basis.grade_range(basis.truncation())?;
    let mut p = CMatrix::identity(basis.size(), basis.size());
    for j in boundary {
        p[(j, j)] = ZERO;
    }
    Ok(p)
}

/// Zero out the columns at the top grade: `X · P_interior`.
pub fn restrict_to_interior(basis: &TruncatedBasis, x: &CMatrix) -> Result<CMatrix> {
    restrict_to_interior_tensor(basis, x, 1)
}

/// Same with a tensor factor of size `m` on the column index.
pub fn restrict_to_interior_tensor(basis: &TruncatedBasis, x: &CMatrix, m: usize) -> Result<CMatrix> {
    if basis.truncation() == 0 {
        return Err(Error::TruncationTooSmall);
    }
    let mut out = x.clone();
    for j in basis.grade_range(basis.truncation())? {
        for l in 0..m {
            for r in 0..x.nrows() {
                out[(r, j * m + l)] = ZERO;
            }
        }
    }
    Ok(out)
}

/// Diagonal 0/1 projection onto the grade-`n` multi-words.
pub fn grade_projection(basis: &TruncatedBasis, grade: usize) -> Result<CMatrix> {
    let range = basis.grade_range(grade)?;
    let mut p = CMatrix::zeros(basis.size(), basis.size());
    for j in range {
        p[(j, j)] = ONE;
    }
    Ok(p)
}

/// Row-isometry defect of factor `i` on the interior: the maximum over slot
/// pairs (s, t) of `‖(S_{i,s}* S_{i,t} − δ_{st} I) P_interior‖`.
pub fn row_isometry_defect(basis: &TruncatedBasis, spec: &TwistSpec, factor: usize) -> Result<f64> {
    let shifts = build_row(basis, spec, factor)?;
    let id = CMatrix::identity(basis.size(), basis.size());
    let mut worst: f64 = 0.0;
    for (si, s) in shifts.iter().enumerate() {
        for (ti, t) in shifts.iter().enumerate() {
            let mut m = s.apply_adjoint_left(&t.to_dense());
            if si == ti {
                m -= &id;
            }
            let restricted = restrict_to_interior(basis, &m)?;
            worst = worst.max(operator_norm(&restricted));
        }
    }
    Ok(worst)
}

/// One entry of the doubly-twisted-commutation report.
#[derive(Debug, Clone, Serialize)]
pub struct CommutationResidual {
    pub i: usize,
    pub j: usize,
    pub s: usize,
    pub t: usize,
    /// `‖(S_{i,s}* S_{j,t} − conj(λ_{ij}(s,t)) S_{j,t} S_{i,s}*) P_interior‖`
    pub adjoint_residual: f64,
    /// `‖(S_{i,s} S_{j,t} − λ_{ij}(s,t) S_{j,t} S_{i,s}) P_interior‖`
    pub commutation_residual: f64,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct DoublyCommutingReport {
    pub entries: Vec<CommutationResidual>,
    pub max_adjoint_residual: f64,
    pub max_commutation_residual: f64,
}

/// Residuals of the doubly twisted commutation relations across all factor
/// pairs, compressed to the interior. Empty for k = 1.
pub fn doubly_commuting_defect(basis: &TruncatedBasis, spec: &TwistSpec) -> Result<DoublyCommutingReport> {
    let shifts = build_all(basis, spec)?;
    let mut report = DoublyCommutingReport::default();
    for i in 1..=basis.k() {
        for j in 1..=basis.k() {
            if i == j {
                continue;
            }
            for s in 1..=basis.arities()[i - 1] {
                for t in 1..=basis.arities()[j - 1] {
                    let si = &shifts[i - 1][s - 1];
                    let sj = &shifts[j - 1][t - 1];
                    let lambda = spec.lambda(i, j, s, t)?;
                    let sj_dense = sj.to_dense();
                    let si_adj = si.adjoint_dense();

                    let lhs_a = si.apply_adjoint_left(&sj_dense);
                    let rhs_a = sj.apply_left(&si_adj).scale_by(lambda.conj());
                    let adjoint_residual =
                        operator_norm(&restrict_to_interior(basis, &(lhs_a - rhs_a))?);

                    let lhs_c = si.apply_left(&sj_dense);
                    let rhs_c = sj.apply_left(&si.to_dense()).scale_by(lambda);
                    let commutation_residual =
                        operator_norm(&restrict_to_interior(basis, &(lhs_c - rhs_c))?);

                    report.max_adjoint_residual = report.max_adjoint_residual.max(adjoint_residual);
                    report.max_commutation_residual =
                        report.max_commutation_residual.max(commutation_residual);
                    report.entries.push(CommutationResidual {
                        i,
                        j,
                        s,
                        t,
                        adjoint_residual,
                        commutation_residual,
                    });
                }
            }
        }
    }
    Ok(report)
}

trait ScaleBy {
    fn scale_by(self, w: Complex64) -> Self;
}

impl ScaleBy for CMatrix {
    fn scale_by(mut self, w: Complex64) -> Self {
        for v in self.iter_mut() {
            *v *= w;
        }
        self
    }
}

/// Kronecker product with the identity: index order is basis-major,
/// coefficient-space minor.
pub fn tensor_with_identity(a: &CMatrix, d: usize) -> CMatrix {
    a.kronecker(&CMatrix::identity(d, d))
}

/// `Φ_{S_i ⊗ I_m}(Y) = Σ_s (S_{i,s} ⊗ I_m) Y (S_{i,s} ⊗ I_m)*`.
pub fn phi_shift_tensor(row: &[ShiftOperator], m: usize, y: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(y.nrows(), y.ncols());
    for s in row {
        let z = s.apply_tensor_adjoint_right(m, y);
        out += s.apply_tensor_left(m, &z);
    }
    out
}

/// The composed defect `(id − Φ_{S_{σ(1)}⊗I}) ∘ … ∘ (id − Φ_{S_{σ(k)}⊗I})(Y)`
/// with the rightmost factor applied first. `order` lists σ as 1-based factor
/// indices in application order.
pub fn delta_shift_tensor_ordered(
    basis: &TruncatedBasis,
    spec: &TwistSpec,
    m: usize,
    y: &CMatrix,
    order: &[usize],
) -> Result<CMatrix> {
    let shifts = build_all(basis, spec)?;
    let mut x = y.clone();
    for &i in order {
        if i == 0 || i > basis.k() {
            return Err(Error::FactorOutOfRange { factor: i, k: basis.k() });
        }
        let phi = phi_shift_tensor(&shifts[i - 1], m, &x);
        x -= phi;
    }
    Ok(x)
}

/// `Δ_{S⊗I}(Y)` with factor k applied first (the factorization-criterion
/// order); the factors commute, so any order agrees to rounding.
pub fn delta_shift_tensor(
    basis: &TruncatedBasis,
    spec: &TwistSpec,
    m: usize,
    y: &CMatrix,
) -> Result<CMatrix> {
    let order: Vec<usize> = (1..=basis.k()).rev().collect();
    delta_shift_tensor_ordered(basis, spec, m, y, &order)
}

/// `Δ_S(I)` on the truncated space; equals the projection onto the neutral
/// basis vector exactly.
pub fn delta_shift_identity(basis: &TruncatedBasis, spec: &TwistSpec) -> Result<CMatrix> {
    let id = CMatrix::identity(basis.size(), basis.size());
    let order: Vec<usize> = (1..=basis.k()).collect();
    delta_shift_tensor_ordered(basis, spec, 1, &id, &order)
}

/// Matrix of the ordered monomial `S_{1,β₁} ⋯ S_{k,β_k}` assembled directly
/// from its action `χ_γ ↦ μ(β,γ) χ_{βγ}`.
pub fn monomial_matrix(
    basis: &TruncatedBasis,
    spec: &TwistSpec,
    beta: &MultiWord,
) -> Result<CMatrix> {
    let mut m = CMatrix::zeros(basis.size(), basis.size());
    for c in 0..basis.size() {
        let gamma = basis.word_at(c)?;
        let image = concat_left(beta, gamma)?;
        if let Some(r) = basis.index_of(&image) {
            m[(r, c)] = spec.mu_multi(beta, gamma)?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{enumerate_basis, Word, DEFAULT_BASIS_CAP};

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single_shift_basis(trunc: usize) -> TruncatedBasis {
        enumerate_basis(&[1], trunc, DEFAULT_BASIS_CAP).unwrap()
    }

    #[test]
    fn untwisted_single_shift_is_nilpotent_forward_shift() {
        let basis = single_shift_basis(4);
        let spec = TwistSpec::trivial(&[1]);
        let s = build_shift(&basis, &spec, 1, 1).unwrap().to_dense();
        for m in 0..4 {
            assert_eq!(s[(m + 1, m)], ONE);
        }
        // top grade maps to zero
        assert!(s.column(4).iter().all(|v| *v == ZERO));
        // S*S = I on the whole truncation (S* lowers grade)
        let sh = build_shift(&basis, &spec, 1, 1).unwrap();
        let sts = sh.apply_adjoint_left(&sh.to_dense());
        assert!((sts - CMatrix::identity(5, 5)).norm() < 1e-15);
    }

    #[test]
    fn adjoint_kills_the_vacuum() {
        let basis = enumerate_basis(&[2, 2], 2, DEFAULT_BASIS_CAP).unwrap();
        let spec = TwistSpec::trivial(&[2, 2]);
        for i in 1..=2 {
            for s in 1..=2 {
                let sh = build_shift(&basis, &spec, i, s).unwrap();
                let adj = build_adjoint(&sh);
                assert!(adj.column(0).iter().all(|v| *v == ZERO));
            }
        }
    }

    #[test]
    fn twisted_pair_action_and_adjoint() {
        // k = 2, n = (1,1), λ₁₂(1,1) = λ: S₂ e_{(m,n)} = conj(λ)^m e_{(m,n+1)}
        let lambda = Complex64::from_polar(1.0, 0.8);
        let spec = TwistSpec::single_phase(lambda).unwrap();
        let basis = enumerate_basis(&[1, 1], 4, DEFAULT_BASIS_CAP).unwrap();
        let s2 = build_shift(&basis, &spec, 2, 1).unwrap();
        let dense = s2.to_dense();
        let adj = build_adjoint(&s2);
        for c in 0..basis.size() {
            let w = basis.word_at(c).unwrap();
            let (m, n) = (w.component(1).len(), w.component(2).len());
            let image = w.with_component(2, w.component(2).prepend(1).unwrap());
            match basis.index_of(&image) {
                Some(r) => {
                    let expected = lambda.conj().powu(m as u32);
                    assert!((dense[(r, c)] - expected).norm() < 1e-13, "at ({m},{n})");
                    assert!((adj[(c, r)] - expected.conj()).norm() < 1e-13);
                }
                None => assert!(dense.column(c).iter().all(|v| *v == ZERO)),
            }
        }
    }

    #[test]
    fn trivial_twist_shifts_commute_on_interior() {
        let basis = enumerate_basis(&[1, 1], 4, DEFAULT_BASIS_CAP).unwrap();
        let spec = TwistSpec::trivial(&[1, 1]);
        let report = doubly_commuting_defect(&basis, &spec).unwrap();
        assert!(report.max_adjoint_residual < 1e-14);
        assert!(report.max_commutation_residual < 1e-14);
    }

    #[test]
    fn twisted_residuals_vanish_on_interior() {
        let spec = TwistSpec::single_phase(cx(0.0, 1.0)).unwrap();
        let basis = enumerate_basis(&[1, 1], 4, DEFAULT_BASIS_CAP).unwrap();
        let report = doubly_commuting_defect(&basis, &spec).unwrap();
        assert_eq!(report.entries.len(), 2);
        assert!(report.max_adjoint_residual < 1e-14);
        assert!(report.max_commutation_residual < 1e-14);
    }

    #[test]
    fn single_factor_report_is_empty() {
        let basis = single_shift_basis(3);
        let spec = TwistSpec::trivial(&[1]);
        let report = doubly_commuting_defect(&basis, &spec).unwrap();
        assert!(report.entries.is_empty());
    }

    #[test]
    fn row_isometry_defect_small_and_twisted() {
        let basis = enumerate_basis(&[2], 3, DEFAULT_BASIS_CAP).unwrap();
        let spec = TwistSpec::trivial(&[2]);
        assert!(row_isometry_defect(&basis, &spec, 1).unwrap() < 1e-14);

        let spec2 = TwistSpec::single_phase(cx(0.0, 1.0)).unwrap();
        let basis2 = enumerate_basis(&[1, 1], 4, DEFAULT_BASIS_CAP).unwrap();
        assert!(row_isometry_defect(&basis2, &spec2, 1).unwrap() < 1e-14);
        assert!(row_isometry_defect(&basis2, &spec2, 2).unwrap() < 1e-14);
    }

    #[test]
    fn without_interior_restriction_defect_is_one() {
        // Top-grade columns are zeroed by compression, so S*S − I has a full
        // unit column there.
        let basis = single_shift_basis(3);
        let spec = TwistSpec::trivial(&[1]);
        let sh = build_shift(&basis, &spec, 1, 1).unwrap();
        let sts = sh.apply_adjoint_left(&sh.to_dense());
        let defect = operator_norm(&(sts - CMatrix::identity(4, 4)));
        assert!((defect - 1.0).abs() < 1e-14);
    }

    #[test]
    fn interior_projection_shape() {
        let basis = single_shift_basis(1);
        let p = interior_projection(&basis).unwrap();
        let rank: f64 = p.diagonal().iter().map(|v| v.re).sum();
        assert_eq!(rank as usize, 1);

        let basis2 = enumerate_basis(&[2, 1], 3, DEFAULT_BASIS_CAP).unwrap();
        let p2 = interior_projection(&basis2).unwrap();
        let inner = enumerate_basis(&[2, 1], 2, DEFAULT_BASIS_CAP).unwrap();
        let rank2: f64 = p2.diagonal().iter().map(|v| v.re).sum();
        assert_eq!(rank2 as usize, inner.size());
        assert!((&p2 * &p2 - &p2).norm() < 1e-14);
        assert!((&p2 - p2.adjoint()).norm() < 1e-14);

        let basis0 = single_shift_basis(0);
        assert!(interior_projection(&basis0).is_err());
    }

    #[test]
    fn grade_projections_partition_identity() {
        let basis = enumerate_basis(&[2, 1], 3, DEFAULT_BASIS_CAP).unwrap();
        let mut sum = CMatrix::zeros(basis.size(), basis.size());
        for g in 0..=3 {
            let p = grade_projection(&basis, g).unwrap();
            let trace: f64 = p.diagonal().iter().map(|v| v.re).sum();
            assert_eq!(trace as usize, basis.grade_count(g).unwrap());
            sum += p;
        }
        assert!((sum - CMatrix::identity(basis.size(), basis.size())).norm() < 1e-15);
        let p0 = grade_projection(&basis, 0).unwrap();
        assert_eq!(p0[(0, 0)], ONE);
        assert!((p0.diagonal().iter().map(|v| v.re).sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(grade_projection(&basis, 4).is_err());
    }

    #[test]
    fn tensor_with_identity_cases() {
        let basis = single_shift_basis(2);
        let spec = TwistSpec::trivial(&[1]);
        let s = build_shift(&basis, &spec, 1, 1).unwrap().to_dense();
        assert_eq!(tensor_with_identity(&s, 1), s);
        let a = &s + CMatrix::identity(3, 3);
        let b = s.adjoint();
        let lhs = tensor_with_identity(&a, 2) * tensor_with_identity(&b, 2);
        let rhs = tensor_with_identity(&(&a * &b), 2);
        assert!((lhs - rhs).norm() < 1e-14);
        assert!((operator_norm(&tensor_with_identity(&a, 3)) - operator_norm(&a)).abs() < 1e-12);
    }

    #[test]
    fn shift_tensor_application_matches_dense() {
        let spec = TwistSpec::single_phase(cx(0.0, 1.0)).unwrap();
        let basis = enumerate_basis(&[1, 1], 3, DEFAULT_BASIS_CAP).unwrap();
        let sh = build_shift(&basis, &spec, 2, 1).unwrap();
        let m = 2;
        let big = tensor_with_identity(&sh.to_dense(), m);
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let x = CMatrix::from_fn(basis.size() * m, basis.size() * m, |_, _| {
            cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        assert!((sh.apply_tensor_left(m, &x) - &big * &x).norm() < 1e-12);
        assert!((sh.apply_tensor_adjoint_left(m, &x) - big.adjoint() * &x).norm() < 1e-12);
        assert!((sh.apply_tensor_right(m, &x) - &x * &big).norm() < 1e-12);
        assert!((sh.apply_tensor_adjoint_right(m, &x) - &x * big.adjoint()).norm() < 1e-12);
    }

    #[test]
    fn delta_of_identity_is_vacuum_projection() {
        for (arities, spec) in [
            (vec![2usize], TwistSpec::trivial(&[2])),
            (vec![1, 1], TwistSpec::single_phase(cx(0.0, 1.0)).unwrap()),
            (vec![2, 2], TwistSpec::trivial(&[2, 2])),
        ] {
            let basis = enumerate_basis(&arities, 3, DEFAULT_BASIS_CAP).unwrap();
            let delta = delta_shift_identity(&basis, &spec).unwrap();
            let p0 = grade_projection(&basis, 0).unwrap();
            assert!((delta - p0).norm() < 1e-14);
        }
    }

    #[test]
    fn monomial_matrix_matches_shift_products() {
        let spec = TwistSpec::single_phase(cx(0.0, 1.0)).unwrap();
        let basis = enumerate_basis(&[1, 1], 4, DEFAULT_BASIS_CAP).unwrap();
        let shifts = build_all(&basis, &spec).unwrap();
        let beta = MultiWord::new(vec![
            Word::new(1, vec![1, 1]).unwrap(),
            Word::new(1, vec![1]).unwrap(),
        ]);
        // S_{1,(1,1)} S_{2,(1)} as an explicit matrix product
        let product = shifts[0][0]
            .apply_left(&shifts[0][0].apply_left(&shifts[1][0].to_dense()));
        let direct = monomial_matrix(&basis, &spec, &beta).unwrap();
        assert!((product - direct).norm() < 1e-13);
    }

    #[test]
    fn monomial_bands_respect_the_grading() {
        let spec = TwistSpec::trivial(&[2, 1]);
        let basis = enumerate_basis(&[2, 1], 3, DEFAULT_BASIS_CAP).unwrap();
        let beta = MultiWord::new(vec![
            Word::new(2, vec![2]).unwrap(),
            Word::new(1, vec![1]).unwrap(),
        ]);
        let a = monomial_matrix(&basis, &spec, &beta).unwrap();
        let len = beta.total_length();
        for p in 0..=3usize {
            for q in 0..=3usize {
                let block = grade_projection(&basis, p).unwrap() * &a * grade_projection(&basis, q).unwrap();
                if block.norm() > 1e-14 {
                    assert_eq!(p, q + len);
                }
            }
        }
    }
}
