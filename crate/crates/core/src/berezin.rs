//! Noncommutative Berezin kernels on the truncated basis: contraction and
//! intertwining diagnostics, the associated transform / polynomial and radial
//! functional calculus, and the von Neumann inequality harness.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{build_all, monomial_matrix};
use crate::hardy::{tail_bound, FormalSeries};
use crate::numerics::{
    hermitian_eigen, kron_apply_left, operator_norm, psd_floor, CMatrix, CVector, ZERO,
};
use crate::polyball::{defect_delta, simplex_gram, OperatorTuple};
use crate::twist::TwistSpec;
use crate::words::{TruncatedBasis, Word, DEFAULT_BASIS_CAP};

/// Spectral realization of the defect space `D(T)`.
#[derive(Debug, Clone)]
pub struct DefectSpace {
    /// d×m orthonormal eigenvector columns spanning the retained range.
    pub basis: CMatrix,
    /// Retained eigenvalues (descending), all above the rank cutoff.
    pub eigenvalues: Vec<f64>,
    /// Hermitian square root of the (floored) defect operator, d×d.
    pub sqrt: CMatrix,
    pub rank: usize,
}

impl DefectSpace {
    /// Coordinate map `C^d → C^m`.
    pub fn coords(&self, x: &CMatrix) -> CMatrix {
        self.basis.adjoint() * x
    }
}

/// Eigendecompose `Δ_T(I)`, clip rounding-level negatives, and keep the
/// eigenvalues above the relative cutoff. Genuinely indefinite defects are
/// rejected: the tuple is not a member.
pub fn defect_space(tuple: &OperatorTuple, eps_rank: f64) -> Result<DefectSpace> {
    let delta = defect_delta(tuple, 1.0)?;
    let (floored, report) = psd_floor(&delta, 1e-8).map_err(|e| match e {
        Error::Indefinite { least, .. } => Error::NotMember {
            reason: format!("defect operator has eigenvalue {least:.3e}"),
        },
        other => other,
    })?;
    let _ = report;
    let (vals, vecs) = hermitian_eigen(&floored)?;
    let max = vals.iter().fold(0.0f64, |m, &v| m.max(v));
    let cutoff = eps_rank * max.max(1.0);
    let keep: Vec<usize> = (0..vals.len()).filter(|&j| vals[j] > cutoff).collect();
    let d = tuple.dim();
    // descending order for the defect coordinates
    let mut order = keep.clone();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let basis = CMatrix::from_fn(d, order.len(), |r, c| vecs[(r, order[c])]);
    let eigenvalues: Vec<f64> = order.iter().map(|&j| vals[j]).collect();
    let sqrt = {
        let diag = CMatrix::from_diagonal(&CVector::from_iterator(
            vals.len(),
            vals.iter().map(|&v| Complex64::new(v.max(0.0).sqrt(), 0.0)),
        ));
        &vecs * diag * vecs.adjoint()
    };
    Ok(DefectSpace { basis, eigenvalues, sqrt, rank: order.len() })
}

/// The truncated Berezin kernel: block row at the multi-word `β` holds
/// `U* Δ^{1/2} T_{k,β_k}* ⋯ T_{1,β_1}*` in defect coordinates.
#[derive(Debug, Clone)]
pub struct BerezinKernel {
    pub matrix: CMatrix,
    pub defect: DefectSpace,
    pub basis_size: usize,
    pub truncation: usize,
    /// Defect rank (tensor block height).
    pub m: usize,
    /// Dimension of the underlying space.
    pub d: usize,
}

pub fn build_kernel(
    tuple: &OperatorTuple,
    basis: &TruncatedBasis,
    eps_rank: f64,
) -> Result<BerezinKernel> {
    if basis.arities() != tuple.arities() {
        return Err(Error::ArityMismatch {
            left: basis.arities().to_vec(),
            right: tuple.arities().to_vec(),
        });
    }
    let defect = defect_space(tuple, eps_rank)?;
    let d = tuple.dim();
    let m = defect.rank;
    let b = basis.size();
    let seed = defect.coords(&defect.sqrt);
    // blocks[p] = U* Δ^{1/2} (T_β)* built by the word-prefix recursion
    let mut blocks: Vec<CMatrix> = Vec::with_capacity(b);
    for p in 0..b {
        let word = basis.word_at(p)?;
        let block = match word.leading_split() {
            None => seed.clone(),
            Some((factor, letter, parent)) => {
                let parent_idx = basis.index_of(&parent).expect("parent in basis");
                &blocks[parent_idx] * tuple.op(factor, letter).adjoint()
            }
        };
        blocks.push(block);
    }
    let mut matrix = CMatrix::zeros(b * m, d);
    for (p, block) in blocks.iter().enumerate() {
        for l in 0..m {
            for c in 0..d {
                matrix[(p * m + l, c)] = block[(l, c)];
            }
        }
    }
    Ok(BerezinKernel {
        matrix,
        defect,
        basis_size: b,
        truncation: basis.truncation(),
        m,
        d,
    })
}

/// `max(0, ‖K‖ − 1)`.
pub fn kernel_contraction_defect(kernel: &BerezinKernel) -> f64 {
    (operator_norm(&kernel.matrix) - 1.0).max(0.0)
}

/// Zero the rows of the top-grade blocks (the range-side interior cut).
fn interior_rows(basis: &TruncatedBasis, x: &CMatrix, m: usize) -> Result<CMatrix> {
    if basis.truncation() == 0 {
        return Err(Error::TruncationTooSmall);
    }
    let mut out = x.clone();
    for p in basis.grade_range(basis.truncation())? {
        for l in 0..m {
            for c in 0..x.ncols() {
                out[(p * m + l, c)] = ZERO;
            }
        }
    }
    Ok(out)
}

/// Interior residual of `K T_{i,s}* = (S_{i,s}* ⊗ I) K`, maximized over all
/// slots. The identity is exact on interior rows because the adjoint shift
/// lowers the grade; the top-grade rows carry the truncation tail and are
/// excluded.
pub fn intertwining_residual(
    tuple: &OperatorTuple,
    kernel: &BerezinKernel,
    spec: &TwistSpec,
    basis: &TruncatedBasis,
) -> Result<f64> {
    let shifts = build_all(basis, spec)?;
    let mut worst: f64 = 0.0;
    for i in 1..=tuple.k() {
        for s in 1..=tuple.arities()[i - 1] {
            let lhs = &kernel.matrix * tuple.op(i, s).adjoint();
            let rhs = shifts[i - 1][s - 1].apply_tensor_adjoint_left(kernel.m, &kernel.matrix);
            let diff = interior_rows(basis, &(lhs - rhs), kernel.m)?;
            worst = worst.max(operator_norm(&diff));
        }
    }
    Ok(worst)
}

/// `Ψ_T(A) = K*(A ⊗ I_m)K` without forming the Kronecker factor.
pub fn berezin_transform(kernel: &BerezinKernel, a: &CMatrix) -> Result<CMatrix> {
    if a.nrows() != kernel.basis_size || a.ncols() != kernel.basis_size {
        return Err(Error::ShapeMismatch {
            expected: format!("{0}x{0}", kernel.basis_size),
            got: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    let w = kron_apply_left(a, &kernel.matrix, kernel.m);
    Ok(kernel.matrix.adjoint() * w)
}

/// `Σ c_β T_{1,β₁} ⋯ T_{k,β_k}` for a finitely supported coefficient map.
pub fn functional_calculus_poly(tuple: &OperatorTuple, series: &FormalSeries) -> Result<CMatrix> {
    if series.arities() != tuple.arities() {
        return Err(Error::ArityMismatch {
            left: series.arities().to_vec(),
            right: tuple.arities().to_vec(),
        });
    }
    let mut out = CMatrix::zeros(tuple.dim(), tuple.dim());
    for (beta, &c) in series.iter() {
        out += tuple.multiword_product(beta).scale(1.0) * c;
    }
    Ok(out)
}

/// Partial radial sum with a certified operator-norm tail bound.
#[derive(Debug, Clone)]
pub struct RadialEval {
    pub value: CMatrix,
    pub tail: f64,
    pub grade_used: usize,
}

/// Evaluate `Σ r^{|β|} c_β T_β` over grades up to the first `P ≤ grade_cap`
/// whose certified tail falls below `tail_tol`.
pub fn radial_calculus(
    tuple: &OperatorTuple,
    series: &FormalSeries,
    r: f64,
    tail_tol: f64,
    grade_cap: usize,
) -> Result<RadialEval> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidInput(format!("radius must lie in [0,1), got {r}")));
    }
    let k = tuple.k();
    let mut chosen = None;
    for p in 0..=grade_cap {
        let t = tail_bound(series, r, k, p);
        if t <= tail_tol {
            chosen = Some((p, t));
            break;
        }
    }
    let (grade_used, tail) = chosen.ok_or(Error::TailNotCertifiable {
        requested: tail_tol,
        achieved: tail_bound(series, r, k, grade_cap),
        cap: grade_cap,
    })?;
    let mut value = CMatrix::zeros(tuple.dim(), tuple.dim());
    for (beta, &c) in series.iter() {
        let g = beta.total_length();
        if g <= grade_used {
            value += tuple.multiword_product(beta).scale(r.powi(g as i32)) * c;
        }
    }
    Ok(RadialEval { value, tail, grade_used })
}

/// Certified bound on `‖K*(p(S) ⊗ I)K − p(T)‖` for an analytic polynomial of
/// maximal grade `g` at truncation `N`:
/// `(Σ|c|) · τ + ε · ‖p(T)‖` with `τ² = ‖G(N+g) − G(N−g)‖`, `ε = ‖I − G(N)‖`,
/// where `G(P)` is the simplex Gram `Σ_{|β|≤P} T_β Δ T_β*`.
pub fn poly_tail_certificate(
    tuple: &OperatorTuple,
    series: &FormalSeries,
    truncation: usize,
    cap: usize,
) -> Result<f64> {
    let g = series.max_grade();
    let id = CMatrix::identity(tuple.dim(), tuple.dim());
    let gram_n = simplex_gram(tuple, truncation, cap)?;
    let eps = operator_norm(&(&id - &gram_n));
    let low = truncation.saturating_sub(g);
    let gram_low = if low == truncation {
        gram_n.clone()
    } else {
        simplex_gram(tuple, low, cap)?
    };
    let gram_high = simplex_gram(tuple, truncation + g, cap)?;
    let tau = operator_norm(&(&gram_high - &gram_low)).sqrt();
    let c1: f64 = series.iter().map(|(_, c)| c.norm()).sum();
    let p_norm = operator_norm(&functional_calculus_poly(tuple, series)?);
    Ok(c1 * tau + eps * p_norm)
}

/// One term `coeff · S_{i₁,α₁} ⋯ S_{i_p,α_p} S*_{j₁,β₁} ⋯ S*_{j_m,β_m}` of a
/// mixed polynomial in the shifts and their adjoints.
#[derive(Debug, Clone)]
pub struct MixedTerm {
    pub coeff: Complex64,
    pub creators: Vec<(usize, Word)>,
    pub annihilators: Vec<(usize, Word)>,
}

impl MixedTerm {
    pub fn grade(&self) -> usize {
        let c: usize = self.creators.iter().map(|(_, w)| w.len()).sum();
        let a: usize = self.annihilators.iter().map(|(_, w)| w.len()).sum();
        c + a
    }
}

#[derive(Debug, Clone)]
pub struct MixedPoly {
    pub arities: Vec<usize>,
    pub terms: Vec<MixedTerm>,
}

impl MixedPoly {
    pub fn identity(arities: &[usize]) -> Self {
        MixedPoly {
            arities: arities.to_vec(),
            terms: vec![MixedTerm {
                coeff: Complex64::new(1.0, 0.0),
                creators: Vec::new(),
                annihilators: Vec::new(),
            }],
        }
    }

    pub fn max_grade(&self) -> usize {
        self.terms.iter().map(|t| t.grade()).max().unwrap_or(0)
    }
}

/// `p(T, T*)` on the tuple.
pub fn eval_mixed_on_tuple(tuple: &OperatorTuple, poly: &MixedPoly) -> Result<CMatrix> {
    if poly.arities != tuple.arities() {
        return Err(Error::ArityMismatch {
            left: poly.arities.clone(),
            right: tuple.arities().to_vec(),
        });
    }
    let d = tuple.dim();
    let mut out = CMatrix::zeros(d, d);
    for term in &poly.terms {
        let mut m = CMatrix::identity(d, d);
        for (i, w) in &term.creators {
            m = m * tuple.word_product(*i, w);
        }
        for (j, w) in &term.annihilators {
            m = m * tuple.word_product(*j, w).adjoint();
        }
        out += m.scale(1.0) * term.coeff;
    }
    Ok(out)
}

/// `p(S^{(N)}, S^{(N)*})` on the compressed shifts of the given basis.
pub fn eval_mixed_on_shifts(
    basis: &TruncatedBasis,
    spec: &TwistSpec,
    poly: &MixedPoly,
) -> Result<CMatrix> {
    if poly.arities != basis.arities() {
        return Err(Error::ArityMismatch {
            left: poly.arities.clone(),
            right: basis.arities().to_vec(),
        });
    }
    let shifts = build_all(basis, spec)?;
    let b = basis.size();
    let mut out = CMatrix::zeros(b, b);
    for term in &poly.terms {
        let mut m = CMatrix::identity(b, b);
        // right-to-left application keeps the products sparse-friendly
        for (j, w) in term.annihilators.iter().rev() {
            for &letter in w.letters().iter().rev() {
                m = shifts[*j - 1][letter - 1].apply_adjoint_left(&m);
            }
        }
        for (i, w) in term.creators.iter().rev() {
            for &letter in w.letters().iter().rev() {
                m = shifts[*i - 1][letter - 1].apply_left(&m);
            }
        }
        out += m.scale(1.0) * term.coeff;
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct VonNeumannRow {
    pub truncation: usize,
    pub shift_norm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VonNeumannTable {
    pub tuple_norm: f64,
    pub rows: Vec<VonNeumannRow>,
    /// Shift norms are non-decreasing in the truncation.
    pub monotone: bool,
    /// `‖p(T,T*)‖ ≤ ‖p(S^{(N_max)},·)‖ + slack`. The compressed shift norm
    /// under-approximates the limit, so the comparison uses the largest N.
    pub satisfied: bool,
    pub slack: f64,
}

pub fn von_neumann_check(
    tuple: &OperatorTuple,
    spec: &TwistSpec,
    poly: &MixedPoly,
    truncations: &[usize],
    slack: f64,
    cap: usize,
) -> Result<VonNeumannTable> {
    let tuple_norm = operator_norm(&eval_mixed_on_tuple(tuple, poly)?);
    let mut sorted = truncations.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let rows: Vec<VonNeumannRow> = sorted
        .par_iter()
        .map(|&n| {
            let basis = crate::words::enumerate_basis(tuple.arities(), n, cap)?;
            let m = eval_mixed_on_shifts(&basis, spec, poly)?;
            Ok(VonNeumannRow { truncation: n, shift_norm: operator_norm(&m) })
        })
        .collect::<Result<Vec<_>>>()?;
    let monotone = rows
        .windows(2)
        .all(|w| w[1].shift_norm >= w[0].shift_norm - 1e-10);
    let satisfied = rows
        .last()
        .map(|row| tuple_norm <= row.shift_norm + slack)
        .unwrap_or(false);
    Ok(VonNeumannTable { tuple_norm, rows, monotone, satisfied, slack })
}

/// Monomial matrix on the basis (re-export convenience for gallery tests).
pub fn shift_monomial(
    basis: &TruncatedBasis,
    spec: &TwistSpec,
    beta: &crate::words::MultiWord,
) -> Result<CMatrix> {
    monomial_matrix(basis, spec, beta)
}

/// Gram comparison `K*K` against the simplex word sum at the same truncation.
pub fn kernel_gram_residual(tuple: &OperatorTuple, kernel: &BerezinKernel) -> Result<f64> {
    let gram = kernel.matrix.adjoint() * &kernel.matrix;
    let words = simplex_gram(tuple, kernel.truncation, DEFAULT_BASIS_CAP)?;
    Ok(operator_norm(&(gram - words)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::FormalSeries;
    use crate::words::{enumerate_basis, MultiWord, DEFAULT_BASIS_CAP};
    use num_complex::Complex64;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn defect_space_zero_tuple_is_full() {
        let t = OperatorTuple::new(
            vec![1, 1],
            vec![
                vec![CMatrix::zeros(3, 3)],
                vec![CMatrix::zeros(3, 3)],
            ],
        )
        .unwrap();
        let ds = defect_space(&t, 1e-10).unwrap();
        assert_eq!(ds.rank, 3);
        assert!((ds.sqrt.clone() - CMatrix::identity(3, 3)).norm() < 1e-13);
    }

    #[test]
    fn defect_space_scalar_pair() {
        let t = OperatorTuple::scalars(&[cx(0.6, 0.0), cx(0.0, 0.5)]);
        let ds = defect_space(&t, 1e-10).unwrap();
        assert_eq!(ds.rank, 1);
        let expected = ((1.0 - 0.36) * (1.0 - 0.25)).sqrt();
        assert!((ds.sqrt[(0, 0)].re - expected).abs() < 1e-14);
    }

    #[test]
    fn defect_space_coisometric_row_is_rank_deficient() {
        let t = OperatorTuple::new(
            vec![2],
            vec![vec![
                CMatrix::from_element(1, 1, cx(1.0 / 2f64.sqrt(), 0.0)),
                CMatrix::from_element(1, 1, cx(1.0 / 2f64.sqrt(), 0.0)),
            ]],
        )
        .unwrap();
        let ds = defect_space(&t, 1e-10).unwrap();
        assert_eq!(ds.rank, 0);
    }

    #[test]
    fn zero_tuple_kernel_is_vacuum_embedding() {
        let t = OperatorTuple::new(vec![1], vec![vec![CMatrix::zeros(2, 2)]]).unwrap();
        let basis = enumerate_basis(&[1], 5, DEFAULT_BASIS_CAP).unwrap();
        let k = build_kernel(&t, &basis, 1e-10).unwrap();
        assert_eq!(k.m, 2);
        // K*K = I exactly and the only nonzero block sits at the neutral word.
        let gram = k.matrix.adjoint() * &k.matrix;
        assert!((gram - CMatrix::identity(2, 2)).norm() < 1e-14);
        for p in 1..basis.size() {
            for l in 0..k.m {
                assert!(k.matrix.row(p * k.m + l).iter().all(|v| v.norm() < 1e-15));
            }
        }
        assert!((operator_norm(&k.matrix) - 1.0).abs() < 1e-12);
        assert_eq!(kernel_contraction_defect(&k), 0.0);
    }

    #[test]
    fn kernel_gram_matches_word_sum_and_shrinks() {
        let t = OperatorTuple::scalars(&[cx(0.5, 0.0), cx(0.5, 0.0)]);
        let mut last = f64::INFINITY;
        for n in [2usize, 4, 6, 8] {
            let basis = enumerate_basis(&[1, 1], n, DEFAULT_BASIS_CAP).unwrap();
            let k = build_kernel(&t, &basis, 1e-10).unwrap();
            assert!(kernel_gram_residual(&t, &k).unwrap() < 1e-13);
            let gram = k.matrix.adjoint() * &k.matrix;
            let defect = operator_norm(&(gram - CMatrix::identity(1, 1)));
            assert!(defect <= last + 1e-15);
            last = defect;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn intertwining_residual_is_interior_exact() {
        // twisted rotation pair on C^4
        let omega = cx(0.0, 1.0);
        let q = 4usize;
        let u = CMatrix::from_fn(q, q, |r, c| {
            if r == c { omega.powu(r as u32) } else { ZERO }
        });
        let v = CMatrix::from_fn(q, q, |r, c| {
            if r == (c + 1) % q { cx(1.0, 0.0) } else { ZERO }
        });
        let t = OperatorTuple::new(vec![1, 1], vec![vec![u.scale(0.55)], vec![v.scale(0.45)]]).unwrap();
        let spec = TwistSpec::single_phase(omega).unwrap();
        let basis = enumerate_basis(&[1, 1], 4, DEFAULT_BASIS_CAP).unwrap();
        let k = build_kernel(&t, &basis, 1e-10).unwrap();
        assert!(intertwining_residual(&t, &k, &spec, &basis).unwrap() < 1e-12);
        assert!(kernel_contraction_defect(&k) <= 1e-10);

        // zero tuple: exactly zero
        let z = OperatorTuple::scalars(&[ZERO, ZERO]);
        let kz = build_kernel(&z, &basis, 1e-10).unwrap();
        let triv = TwistSpec::trivial(&[1, 1]);
        assert!(intertwining_residual(&z, &kz, &triv, &basis).unwrap() == 0.0);
    }

    #[test]
    fn transform_of_identity_is_gram() {
        let t = OperatorTuple::scalar(cx(0.5, 0.0));
        let basis = enumerate_basis(&[1], 6, DEFAULT_BASIS_CAP).unwrap();
        let k = build_kernel(&t, &basis, 1e-10).unwrap();
        let id = CMatrix::identity(basis.size(), basis.size());
        let psi = berezin_transform(&k, &id).unwrap();
        let gram = k.matrix.adjoint() * &k.matrix;
        assert!((psi - gram).norm() < 1e-14);
    }

    #[test]
    fn transform_maps_psd_to_psd() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let t = OperatorTuple::scalars(&[cx(0.4, 0.1), cx(0.3, 0.0)]);
        let basis = enumerate_basis(&[1, 1], 4, DEFAULT_BASIS_CAP).unwrap();
        let k = build_kernel(&t, &basis, 1e-10).unwrap();
        for _ in 0..3 {
            let g = CMatrix::from_fn(basis.size(), basis.size(), |_, _| {
                cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let psd = &g * g.adjoint();
            let out = berezin_transform(&k, &psd).unwrap();
            assert!(crate::numerics::least_eigenvalue(&out).unwrap() >= -1e-12 * psd.norm());
        }
    }

    #[test]
    fn poly_calculus_basics() {
        let t = OperatorTuple::scalar(cx(0.7, 0.1));
        let one = FormalSeries::constant(&[1], cx(1.0, 0.0));
        let id = functional_calculus_poly(&t, &one).unwrap();
        assert!((id - CMatrix::identity(1, 1)).norm() < 1e-15);

        let z = FormalSeries::monomial(
            MultiWord::new(vec![Word::new(1, vec![1]).unwrap()]),
            cx(1.0, 0.0),
        )
        .unwrap();
        let val = functional_calculus_poly(&t, &z).unwrap();
        assert!((val[(0, 0)] - cx(0.7, 0.1)).norm() < 1e-15);
    }

    #[test]
    fn poly_transform_matches_tuple_within_certificate() {
        let t = OperatorTuple::scalars(&[cx(0.5, 0.0), cx(0.5, 0.0)]);
        let trunc = 14;
        let basis = enumerate_basis(&[1, 1], trunc, DEFAULT_BASIS_CAP).unwrap();
        let spec = TwistSpec::trivial(&[1, 1]);
        let k = build_kernel(&t, &basis, 1e-10).unwrap();
        // p = Z_{1} Z_{2} + 2 Z_{1}²
        let mut series = FormalSeries::zero(&[1, 1]);
        series.set(
            MultiWord::new(vec![Word::new(1, vec![1]).unwrap(), Word::new(1, vec![1]).unwrap()]),
            cx(1.0, 0.0),
        );
        series.set(
            MultiWord::new(vec![Word::new(1, vec![1, 1]).unwrap(), Word::empty(1)]),
            cx(2.0, 0.0),
        );
        let a = crate::hardy::series_to_matrix(&series, &basis, &spec, 1.0).unwrap();
        let via_kernel = berezin_transform(&k, &a).unwrap();
        let direct = functional_calculus_poly(&t, &series).unwrap();
        let residual = operator_norm(&(via_kernel - direct));
        let certificate = poly_tail_certificate(&t, &series, trunc, DEFAULT_BASIS_CAP).unwrap();
        assert!(residual <= certificate + 1e-12, "{residual} vs {certificate}");
        assert!(certificate < 1e-5);
    }

    #[test]
    fn radial_calculus_cases() {
        let t = OperatorTuple::scalar(cx(0.9, 0.0));
        let mut series = FormalSeries::constant(&[1], cx(2.0, 0.0));
        series.set(
            MultiWord::new(vec![Word::new(1, vec![1, 1]).unwrap()]),
            cx(1.0, 0.0),
        );
        // r = 0 keeps only the constant term
        let at_zero = radial_calculus(&t, &series, 0.0, 1e-12, 10).unwrap();
        assert!((at_zero.value[(0, 0)] - cx(2.0, 0.0)).norm() < 1e-15);
        // finite support: exact once the cap passes the support grade
        let full = radial_calculus(&t, &series, 0.5, 1e-12, 10).unwrap();
        let expected = cx(2.0, 0.0) + cx(0.25 * 0.81, 0.0);
        assert!((full.value[(0, 0)] - expected).norm() < 1e-14);
        assert_eq!(full.tail, 0.0);
        // grade cap below the support grade with a tight tolerance fails
        assert!(matches!(
            radial_calculus(&t, &series, 0.5, 1e-15, 1),
            Err(Error::TailNotCertifiable { .. })
        ));
        // r outside [0,1) is rejected
        assert!(radial_calculus(&t, &series, 1.0, 1e-12, 10).is_err());
    }

    #[test]
    fn radial_matches_kernel_route() {
        // Lemma-style identity: φ(rT) = K_{rT}*(φ(S) ⊗ I)K_{rT}
        let t = OperatorTuple::scalars(&[cx(0.6, 0.0), cx(0.4, 0.3)]);
        let r = 0.5;
        let trunc = 24;
        let basis = enumerate_basis(&[1, 1], trunc, DEFAULT_BASIS_CAP).unwrap();
        let spec = TwistSpec::trivial(&[1, 1]);
        let mut series = FormalSeries::constant(&[1, 1], cx(0.3, 0.0));
        series.set(
            MultiWord::new(vec![Word::new(1, vec![1]).unwrap(), Word::empty(1)]),
            cx(1.0, 0.0),
        );
        series.set(
            MultiWord::new(vec![Word::new(1, vec![1]).unwrap(), Word::new(1, vec![1]).unwrap()]),
            cx(-0.7, 0.2),
        );
        let scaled = t.scaled(r);
        let k = build_kernel(&scaled, &basis, 1e-10).unwrap();
        let a = crate::hardy::series_to_matrix(&series, &basis, &spec, 1.0).unwrap();
        let via_kernel = berezin_transform(&k, &a).unwrap();
        let direct = radial_calculus(&t, &series, r, 1e-12, 10).unwrap();
        let residual = operator_norm(&(via_kernel - direct.value));
        assert!(residual < 1e-10 + direct.tail, "residual {residual}");
    }

    #[test]
    fn tridiagonal_norm_oracle() {
        // p = S + S*, k = 1, n = 1: the compressed matrix is the (N+1)×(N+1)
        // 0/1 tridiagonal whose largest eigenvalue is 2 cos(π / (N + 2)).
        let spec = TwistSpec::trivial(&[1]);
        let poly = MixedPoly {
            arities: vec![1],
            terms: vec![
                MixedTerm {
                    coeff: cx(1.0, 0.0),
                    creators: vec![(1, Word::new(1, vec![1]).unwrap())],
                    annihilators: vec![],
                },
                MixedTerm {
                    coeff: cx(1.0, 0.0),
                    creators: vec![],
                    annihilators: vec![(1, Word::new(1, vec![1]).unwrap())],
                },
            ],
        };
        for n in [3usize, 6, 11] {
            let basis = enumerate_basis(&[1], n, DEFAULT_BASIS_CAP).unwrap();
            let m = eval_mixed_on_shifts(&basis, &spec, &poly).unwrap();
            let norm = operator_norm(&m);
            let exact = 2.0 * (std::f64::consts::PI / (n as f64 + 2.0)).cos();
            assert!((norm - exact).abs() < 1e-10, "N={n}: {norm} vs {exact}");
        }
        // and the zero tuple gives ‖p(T)‖ = 0
        let t = OperatorTuple::scalar(ZERO);
        let table = von_neumann_check(&t, &spec, &poly, &[3, 6, 11], 1e-8, DEFAULT_BASIS_CAP).unwrap();
        assert!(table.tuple_norm < 1e-15);
        assert!(table.monotone);
        assert!(table.satisfied);
    }

    #[test]
    fn von_neumann_identity_polynomial() {
        let spec = TwistSpec::trivial(&[1]);
        let t = OperatorTuple::scalar(cx(0.3, 0.4));
        let poly = MixedPoly::identity(&[1]);
        let table = von_neumann_check(&t, &spec, &poly, &[2, 4], 1e-10, DEFAULT_BASIS_CAP).unwrap();
        assert!((table.tuple_norm - 1.0).abs() < 1e-14);
        for row in &table.rows {
            assert!((row.shift_norm - 1.0).abs() < 1e-14);
        }
        assert!(table.satisfied);
    }
}
