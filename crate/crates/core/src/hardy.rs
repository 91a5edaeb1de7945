//! Formal Fourier series over the twisted shifts: coefficient extraction,
//! band projections and Cesàro means, radial evaluation and norms, certified
//! tail bounds, and free-holomorphic evaluation on interior tuples.
//!
//! Band sign convention: with `Q_m(A) = Σ_n P_n A P_{n+m}`, analytic
//! monomials of grade p live in the band m = −p.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::berezin::{berezin_transform, build_kernel, functional_calculus_poly};
use crate::error::{Error, Result};
use crate::numerics::{operator_norm, CMatrix, ONE, ZERO};
use crate::polyball::{check_interior, OperatorTuple};
use crate::twist::TwistSpec;
use crate::words::{concat_left, MultiWord, TruncatedBasis};

/// Finitely supported coefficient map `β ↦ c_β` over declared arities.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSeries {
    arities: Vec<usize>,
    coeffs: BTreeMap<MultiWord, Complex64>,
}

impl FormalSeries {
    pub fn zero(arities: &[usize]) -> Self {
        FormalSeries { arities: arities.to_vec(), coeffs: BTreeMap::new() }
    }

    pub fn constant(arities: &[usize], c: Complex64) -> Self {
        let mut s = FormalSeries::zero(arities);
        s.set(MultiWord::empty(arities), c);
        s
    }

    pub fn monomial(beta: MultiWord, c: Complex64) -> Result<Self> {
        let arities = beta.arities();
        let mut s = FormalSeries::zero(&arities);
        s.set(beta, c);
        Ok(s)
    }

    pub fn from_coeffs(
        arities: &[usize],
        entries: impl IntoIterator<Item = (MultiWord, Complex64)>,
    ) -> Result<Self> {
        let mut s = FormalSeries::zero(arities);
        for (beta, c) in entries {
            if beta.arities() != arities {
                return Err(Error::ArityMismatch {
                    left: beta.arities(),
                    right: arities.to_vec(),
                });
            }
            s.set(beta, c);
        }
        Ok(s)
    }

    /// Insert or overwrite a coefficient; zeros are dropped.
    pub fn set(&mut self, beta: MultiWord, c: Complex64) {
        debug_assert_eq!(beta.arities(), self.arities);
        if c == ZERO {
            self.coeffs.remove(&beta);
        } else {
            self.coeffs.insert(beta, c);
        }
    }

    pub fn coeff(&self, beta: &MultiWord) -> Complex64 {
        self.coeffs.get(beta).copied().unwrap_or(ZERO)
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn k(&self) -> usize {
        self.arities.len()
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiWord, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn max_grade(&self) -> usize {
        self.coeffs.keys().map(|w| w.total_length()).max().unwrap_or(0)
    }

    /// ℓ² norm of the grade-p coefficient slice.
    pub fn slice_l2(&self, grade: usize) -> f64 {
        self.coeffs
            .iter()
            .filter(|(w, _)| w.total_length() == grade)
            .map(|(_, c)| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Matrix of `φ(rS)` on the truncated basis: the column at `γ` carries
/// `Σ_β c_β r^{|β|} μ(β,γ) χ_{βγ}`, entries past the top grade dropped.
pub fn series_to_matrix(
    series: &FormalSeries,
    basis: &TruncatedBasis,
    spec: &TwistSpec,
    r: f64,
) -> Result<CMatrix> {
    if series.arities() != basis.arities() {
        return Err(Error::ArityMismatch {
            left: series.arities().to_vec(),
            right: basis.arities().to_vec(),
        });
    }
    let b = basis.size();
    let mut out = CMatrix::zeros(b, b);
    for (beta, &c) in series.iter() {
        let weight = c * r.powi(beta.total_length() as i32);
        if weight == ZERO {
            continue;
        }
        for col in 0..b {
            let gamma = basis.word_at(col)?;
            let image = concat_left(beta, gamma)?;
            if let Some(row) = basis.index_of(&image) {
                out[(row, col)] += weight * spec.mu_multi(beta, gamma)?;
            }
        }
    }
    Ok(out)
}

/// Coefficient extraction `c_β = ⟨A χ_{g₀}, χ_β⟩ / μ(β, g₀)`.
pub fn fourier_extract(
    a: &CMatrix,
    basis: &TruncatedBasis,
    spec: &TwistSpec,
) -> Result<FormalSeries> {
    if a.nrows() != basis.size() || a.ncols() != basis.size() {
        return Err(Error::ShapeMismatch {
            expected: format!("{0}x{0}", basis.size()),
            got: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    let neutral = MultiWord::empty(basis.arities());
    let mut series = FormalSeries::zero(basis.arities());
    for p in 0..basis.size() {
        let beta = basis.word_at(p)?;
        let mu = spec.mu_multi(beta, &neutral)?;
        debug_assert!((mu - ONE).norm() < 1e-14, "phases at the vacuum are trivial");
        let c = a[(p, 0)] / mu;
        if c.norm() > 0.0 {
            series.set(beta.clone(), c);
        }
    }
    Ok(series)
}

/// Band extraction `Q_m(A) = Σ_{n ≥ max(0,−m)} P_n A P_{n+m}`.
pub fn q_projection(a: &CMatrix, band: i64, basis: &TruncatedBasis) -> Result<CMatrix> {
    let n = basis.truncation() as i64;
    if band.abs() > n {
        return Err(Error::IndexOutOfRange {
            index: band.unsigned_abs() as usize,
            size: basis.truncation() + 1,
        });
    }
    let mut out = CMatrix::zeros(basis.size(), basis.size());
    for row in 0..basis.size() {
        let gr = basis.grade(row)? as i64;
        for col in 0..basis.size() {
            let gc = basis.grade(col)? as i64;
            if gc == gr + band {
                out[(row, col)] = a[(row, col)];
            }
        }
    }
    Ok(out)
}

/// Fejér-weighted band sum `C_n(A) = Σ_{|m|<n} (1 − |m|/n) Q_m(A)`.
pub fn cesaro(a: &CMatrix, n_cesaro: usize, basis: &TruncatedBasis) -> Result<CMatrix> {
    if n_cesaro == 0 {
        return Err(Error::InvalidInput("Cesàro order must be at least 1".into()));
    }
    let top = basis.truncation() as i64;
    let mut out = CMatrix::zeros(basis.size(), basis.size());
    let n = n_cesaro as i64;
    for band in -(n - 1)..=(n - 1) {
        if band.abs() > top {
            continue;
        }
        let weight = 1.0 - band.unsigned_abs() as f64 / n_cesaro as f64;
        out += q_projection(a, band, basis)?.scale(weight);
    }
    Ok(out)
}

/// Operator norms of `φ(rS)` across the grid.
pub fn radial_norms(
    series: &FormalSeries,
    basis: &TruncatedBasis,
    spec: &TwistSpec,
    r_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    r_grid
        .iter()
        .map(|&r| Ok((r, operator_norm(&series_to_matrix(series, basis, spec, r)?))))
        .collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut out = 1.0f64;
    for j in 0..k {
        out = out * (n - j) as f64 / (j + 1) as f64;
    }
    out
}

/// Certified upper bound on the operator norm of the dropped tail
/// `Σ_{|β| > P} r^{|β|} c_β S_β`: Cauchy–Schwarz across the grade-p
/// compositions gives `Σ_{p>P} r^p √C(p+k−1, k−1) ‖c_p‖₂`.
pub fn tail_bound(series: &FormalSeries, r: f64, k: usize, p_cut: usize) -> f64 {
    let mut total = 0.0;
    for p in (p_cut + 1)..=series.max_grade() {
        let slice = series.slice_l2(p);
        if slice > 0.0 {
            total += r.powi(p as i32) * binomial(p + k - 1, k - 1).sqrt() * slice;
        }
    }
    total
}

/// Result of the two evaluation routes for a free-holomorphic series at an
/// interior tuple: grade-truncated substitution against the kernel transform.
#[derive(Debug, Clone)]
pub struct HoloEval {
    pub direct: CMatrix,
    pub via_kernel: CMatrix,
    pub discrepancy: f64,
    pub tail: f64,
}

/// Evaluate by direct substitution and through `K_X*(φ(S) ⊗ I)K_X`, reporting
/// the discrepancy together with the certified truncation tail.
pub fn holo_eval(
    series: &FormalSeries,
    x: &OperatorTuple,
    basis: &TruncatedBasis,
    spec: &TwistSpec,
    eps_rank: f64,
    interior_tol: f64,
    cap: usize,
) -> Result<HoloEval> {
    let (interior, margin) = check_interior(x, interior_tol)?;
    if !interior {
        return Err(Error::NotInterior { margin });
    }
    let direct = functional_calculus_poly(x, series)?;
    let kernel = build_kernel(x, basis, eps_rank)?;
    let a = series_to_matrix(series, basis, spec, 1.0)?;
    let via_kernel = berezin_transform(&kernel, &a)?;
    let discrepancy = operator_norm(&(&direct - &via_kernel));
    let tail = crate::berezin::poly_tail_certificate(x, series, basis.truncation(), cap)?;
    Ok(HoloEval { direct, via_kernel, discrepancy, tail })
}

/// Consistency report for radial coefficient recovery.
#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    pub consistent: bool,
    pub max_deviation: f64,
}

/// Extract coefficients from `φ(rS) χ_{g₀}` at each sample radius, divide out
/// `r^{grade}`, and check consistency across the samples.
pub fn coefficient_uniqueness_check(
    series: &FormalSeries,
    basis: &TruncatedBasis,
    spec: &TwistSpec,
    r_samples: &[f64],
) -> Result<UniquenessReport> {
    if r_samples.len() < 2 {
        return Err(Error::InvalidInput("need at least two radius samples".into()));
    }
    for &r in r_samples {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidInput(format!("radius {r} must lie in (0,1)")));
        }
    }
    let mut recovered: Vec<Vec<Complex64>> = Vec::new();
    for &r in r_samples {
        let a = series_to_matrix(series, basis, spec, r)?;
        let extracted = fourier_extract(&a, basis, spec)?;
        let mut row = Vec::with_capacity(basis.size());
        for p in 0..basis.size() {
            let beta = basis.word_at(p)?;
            let grade = beta.total_length() as i32;
            row.push(extracted.coeff(beta) / r.powi(grade));
        }
        recovered.push(row);
    }
    let mut max_deviation = 0.0f64;
    for row in &recovered[1..] {
        for (a, b) in row.iter().zip(&recovered[0]) {
            max_deviation = max_deviation.max((a - b).norm());
        }
    }
    Ok(UniquenessReport { consistent: max_deviation <= 1e-10, max_deviation })
}
