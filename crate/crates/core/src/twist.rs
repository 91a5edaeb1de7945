//! Phase data for the twisted commutation relations and the phase products
//! entering the shift action.
//!
//! Only the blocks with `i < j` are stored; the `i > j` blocks are derived
//! from the adjoint symmetry `λ_{ji}(t,s) = conj(λ_{ij}(s,t))`, so inconsistent
//! input cannot be represented.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{CMatrix, ONE};
use crate::words::{MultiWord, Word};

#[derive(Debug, Clone)]
pub struct TwistSpec {
    k: usize,
    arities: Vec<usize>,
    /// Blocks keyed by (i, j) with i < j, 1-based; block (i,j) is n_i × n_j.
    blocks: HashMap<(usize, usize), CMatrix>,
}

impl TwistSpec {
    /// The untwisted case: every phase equals 1.
    pub fn trivial(arities: &[usize]) -> Self {
        let k = arities.len();
        let mut blocks = HashMap::new();
        for i in 1..=k {
            for j in (i + 1)..=k {
                blocks.insert(
                    (i, j),
                    CMatrix::from_element(arities[i - 1], arities[j - 1], ONE),
                );
            }
        }
        TwistSpec { k, arities: arities.to_vec(), blocks }
    }

    /// Build from the upper blocks, normalizing entries to unit modulus.
    /// Entries farther than `unimodular_tol` from the unit circle are rejected.
    pub fn new(
        arities: &[usize],
        upper_blocks: HashMap<(usize, usize), CMatrix>,
        unimodular_tol: f64,
    ) -> Result<Self> {
        let k = arities.len();
        for (idx, &n) in arities.iter().enumerate() {
            if n == 0 {
                return Err(Error::InvalidArity { factor: idx + 1 });
            }
        }
        let mut blocks = HashMap::new();
        for i in 1..=k {
            for j in (i + 1)..=k {
                let raw = upper_blocks.get(&(i, j)).cloned().unwrap_or_else(|| {
                    CMatrix::from_element(arities[i - 1], arities[j - 1], ONE)
                });
                if raw.nrows() != arities[i - 1] || raw.ncols() != arities[j - 1] {
                    return Err(Error::ShapeMismatch {
                        expected: format!("{}x{}", arities[i - 1], arities[j - 1]),
                        got: format!("{}x{}", raw.nrows(), raw.ncols()),
                    });
                }
                let mut block = raw.clone();
                for s in 0..block.nrows() {
                    for t in 0..block.ncols() {
                        let entry = block[(s, t)];
                        let modulus = entry.norm();
                        if (modulus - 1.0).abs() > unimodular_tol {
                            return Err(Error::NotUnimodular {
                                i,
                                j,
                                s: s + 1,
                                t: t + 1,
                                modulus,
                            });
                        }
                        block[(s, t)] = entry / modulus;
                    }
                }
                blocks.insert((i, j), block);
            }
        }
        for &(i, j) in upper_blocks.keys() {
            if i >= j || j > k {
                return Err(Error::TwistSymmetry { i, j });
            }
        }
        Ok(TwistSpec { k, arities: arities.to_vec(), blocks })
    }

    /// Single-phase twist for k = 2, n = (1, 1): λ₁₂(1,1) = phase.
    pub fn single_phase(phase: Complex64) -> Result<Self> {
        let mut blocks = HashMap::new();
        blocks.insert((1, 2), CMatrix::from_element(1, 1, phase));
        TwistSpec::new(&[1, 1], blocks, 1e-9)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    /// Stored upper blocks, for serialization.
    pub fn upper_blocks(&self) -> &HashMap<(usize, usize), CMatrix> {
        &self.blocks
    }

    fn check_factor(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.k {
            return Err(Error::FactorOutOfRange { factor: i, k: self.k });
        }
        Ok(())
    }

    fn check_slot(&self, i: usize, s: usize) -> Result<()> {
        self.check_factor(i)?;
        let n = self.arities[i - 1];
        if s == 0 || s > n {
            return Err(Error::SlotOutOfRange { slot: s, factor: i, arity: n });
        }
        Ok(())
    }

    /// λ_{ij}(s,t) for i ≠ j, via the adjoint symmetry when i > j.
    pub fn lambda(&self, i: usize, j: usize, s: usize, t: usize) -> Result<Complex64> {
        self.check_slot(i, s)?;
        self.check_slot(j, t)?;
        if i == j {
            return Err(Error::InvalidInput("lambda requires i != j".into()));
        }
        if i < j {
            Ok(self.blocks[&(i, j)][(s - 1, t - 1)])
        } else {
            Ok(self.blocks[&(j, i)][(t - 1, s - 1)].conj())
        }
    }

    /// Phase product over a word: ∏_b λ_{ij}(s, β_b); 1 for the empty word.
    pub fn lambda_word(&self, i: usize, j: usize, s: usize, beta: &Word) -> Result<Complex64> {
        let mut product = ONE;
        for &t in beta.letters() {
            product *= self.lambda(i, j, s, t)?;
        }
        Ok(product)
    }

    /// Phase picked up by `S_{i,s}` acting on `χ_α`: the product of
    /// `lambda_word(i, j, s, α_j)` over j < i. Equals 1 for i = 1.
    pub fn mu_letter(&self, i: usize, s: usize, alpha: &MultiWord) -> Result<Complex64> {
        self.check_slot(i, s)?;
        let mut product = ONE;
        for j in 1..i {
            product *= self.lambda_word(i, j, s, alpha.component(j))?;
        }
        Ok(product)
    }

    /// ∏ over the letters of γ of `mu_letter(i, ·, α)` at fixed α.
    pub fn mu_word(&self, i: usize, gamma: &Word, alpha: &MultiWord) -> Result<Complex64> {
        let mut product = ONE;
        for &s in gamma.letters() {
            product *= self.mu_letter(i, s, alpha)?;
        }
        Ok(product)
    }

    /// ∏_i `mu_word(i, γ_i, α)` — the total phase of the ordered monomial
    /// action `S_{1,γ₁} ⋯ S_{k,γ_k} χ_α = mu_multi(γ, α) χ_{γα}`.
    pub fn mu_multi(&self, gamma: &MultiWord, alpha: &MultiWord) -> Result<Complex64> {
        if gamma.arities() != alpha.arities() || gamma.k() != self.k {
            return Err(Error::ArityMismatch {
                left: gamma.arities(),
                right: alpha.arities(),
            });
        }
        let mut product = ONE;
        for i in 1..=self.k {
            product *= self.mu_word(i, gamma.component(i), alpha)?;
        }
        Ok(product)
    }
}
