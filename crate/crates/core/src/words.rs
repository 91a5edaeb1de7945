//! Free-semigroup combinatorics and the graded enumeration of the truncated
//! multi-word basis of `ℓ²(F⁺_{n₁} × … × F⁺_{n_k})`.
//!
//! Conventions used throughout the crate: factors, slots and letters are
//! 1-based (matching the usual generator labels `g_1, …, g_n`); basis
//! positions are plain 0-based array indices. Position 0 is always the empty
//! multi-word.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Default resource guard for basis enumeration.
pub const DEFAULT_BASIS_CAP: usize = 20_000;

/// A word in the unital free semigroup on `arity` generators.
/// Letters are 1-based; the empty word is the neutral element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    arity: usize,
    letters: Vec<usize>,
}

impl Word {
    pub fn empty(arity: usize) -> Self {
        Word { arity, letters: Vec::new() }
    }

    pub fn new(arity: usize, letters: Vec<usize>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidArity { factor: 0 });
        }
        for &l in &letters {
            if l == 0 || l > arity {
                return Err(Error::LetterOutOfRange { letter: l, arity });
            }
        }
        Ok(Word { arity, letters })
    }

    pub fn single(arity: usize, letter: usize) -> Result<Self> {
        Word::new(arity, vec![letter])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    /// `self` followed by `other` (left concatenation `self·other`).
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: vec![self.arity],
                right: vec![other.arity],
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { arity: self.arity, letters })
    }

    /// Prepend a single letter.
    pub fn prepend(&self, letter: usize) -> Result<Word> {
        if letter == 0 || letter > self.arity {
            return Err(Error::LetterOutOfRange { letter, arity: self.arity });
        }
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.letters);
        Ok(Word { arity: self.arity, letters })
    }

    /// Split off the first letter, if any.
    pub fn split_first(&self) -> Option<(usize, Word)> {
        self.letters.split_first().map(|(&l, rest)| {
            (l, Word { arity: self.arity, letters: rest.to_vec() })
        })
    }
}

/// An element of `F⁺_{n₁} × … × F⁺_{n_k}`: one word per factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiWord {
    components: Vec<Word>,
}

impl MultiWord {
    pub fn empty(arities: &[usize]) -> Self {
        MultiWord {
            components: arities.iter().map(|&n| Word::empty(n)).collect(),
        }
    }

    pub fn new(components: Vec<Word>) -> Self {
        MultiWord { components }
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn arities(&self) -> Vec<usize> {
        self.components.iter().map(|w| w.arity()).collect()
    }

    pub fn component(&self, factor: usize) -> &Word {
        &self.components[factor - 1]
    }

    pub fn components(&self) -> &[Word] {
        &self.components
    }

    pub fn total_length(&self) -> usize {
        self.components.iter().map(|w| w.len()).sum()
    }

    pub fn is_neutral(&self) -> bool {
        self.components.iter().all(|w| w.is_empty())
    }

    /// Replace component `factor` (1-based).
    pub fn with_component(&self, factor: usize, word: Word) -> MultiWord {
        let mut components = self.components.clone();
        components[factor - 1] = word;
        MultiWord { components }
    }

    /// Smallest-index non-empty factor and its first letter, with the rest
    /// removed; `None` for the neutral element. This is the unique parent in
    /// the prefix recursion used for word-product memoization.
    pub fn leading_split(&self) -> Option<(usize, usize, MultiWord)> {
        for (idx, w) in self.components.iter().enumerate() {
            if let Some((letter, rest)) = w.split_first() {
                return Some((idx + 1, letter, self.with_component(idx + 1, rest)));
            }
        }
        None
    }
}

/// Componentwise left concatenation: component `i` is `γ_i` followed by `α_i`.
pub fn concat_left(gamma: &MultiWord, alpha: &MultiWord) -> Result<MultiWord> {
    if gamma.arities() != alpha.arities() {
        return Err(Error::ArityMismatch {
            left: gamma.arities(),
            right: alpha.arities(),
        });
    }
    let components = gamma
        .components
        .iter()
        .zip(&alpha.components)
        .map(|(g, a)| g.concat(a))
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiWord { components })
}

/// All multi-words of total length ≤ N in graded-lexicographic order
/// (grade first, then componentwise on letter sequences, factor 1 varying
/// slowest), with an index map back to positions.
#[derive(Debug, Clone)]
pub struct TruncatedBasis {
    k: usize,
    arities: Vec<usize>,
    truncation: usize,
    words: Vec<MultiWord>,
    index: HashMap<MultiWord, usize>,
    grade_starts: Vec<usize>,
}

/// Closed-form basis size: Σ_{p=0}^{N} Σ_{p₁+…+p_k=p} ∏ n_i^{p_i}.
pub fn expected_basis_size(arities: &[usize], truncation: usize) -> usize {
    // counts[p] = number of multi-words of total length p, built factor by factor.
    let mut counts = vec![0usize; truncation + 1];
    counts[0] = 1;
    for &n in arities {
        let mut next = vec![0usize; truncation + 1];
        for p in 0..=truncation {
            let mut pw = 1usize;
            for q in 0..=p {
                next[p] += counts[p - q] * pw;
                pw = pw.saturating_mul(n);
            }
        }
        counts = next;
    }
    counts.iter().sum()
}

/// Enumerate the truncated basis. Rejects zero arities and sizes above `cap`.
pub fn enumerate_basis(arities: &[usize], truncation: usize, cap: usize) -> Result<TruncatedBasis> {
    if arities.is_empty() {
        return Err(Error::InvalidArity { factor: 0 });
    }
    for (idx, &n) in arities.iter().enumerate() {
        if n == 0 {
            return Err(Error::InvalidArity { factor: idx + 1 });
        }
    }
    let size = expected_basis_size(arities, truncation);
    if size > cap {
        return Err(Error::BasisCap { size, cap });
    }

    let mut words = Vec::with_capacity(size);
    let mut current = Vec::with_capacity(arities.len());
    collect(arities, 0, truncation, &mut current, &mut words);
    words.sort_by(|a, b| {
        (a.total_length(), &a.components).cmp(&(b.total_length(), &b.components))
    });

    let index: HashMap<MultiWord, usize> =
        words.iter().enumerate().map(|(p, w)| (w.clone(), p)).collect();

    let mut grade_starts = vec![0usize; truncation + 2];
    for w in &words {
        grade_starts[w.total_length() + 1] += 1;
    }
    for g in 0..=truncation {
        grade_starts[g + 1] += grade_starts[g];
    }

    Ok(TruncatedBasis {
        k: arities.len(),
        arities: arities.to_vec(),
        truncation,
        words,
        index,
        grade_starts,
    })
}

fn collect(
    arities: &[usize],
    factor: usize,
    budget: usize,
    current: &mut Vec<Word>,
    out: &mut Vec<MultiWord>,
) {
    if factor == arities.len() {
        out.push(MultiWord::new(current.clone()));
        return;
    }
    let n = arities[factor];
    let mut stack: Vec<Word> = vec![Word::empty(n)];
    while let Some(w) = stack.pop() {
        if w.len() < budget {
            for letter in (1..=n).rev() {
                let mut letters = w.letters().to_vec();
                letters.push(letter);
                stack.push(Word { arity: n, letters });
            }
        }
        let remaining = budget - w.len();
        current.push(w);
        collect(arities, factor + 1, remaining, current, out);
        current.pop();
    }
}

impl TruncatedBasis {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn word_at(&self, position: usize) -> Result<&MultiWord> {
        self.words.get(position).ok_or(Error::IndexOutOfRange {
            index: position,
            size: self.words.len(),
        })
    }

    pub fn words(&self) -> &[MultiWord] {
        &self.words
    }

    /// Position of a multi-word, if it lies inside the truncation.
    pub fn index_of(&self, word: &MultiWord) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Total length of the multi-word at `position`.
    pub fn grade(&self, position: usize) -> Result<usize> {
        Ok(self.word_at(position)?.total_length())
    }

    /// Half-open position range of the given grade.
    pub fn grade_range(&self, grade: usize) -> Result<std::ops::Range<usize>> {
        if grade > self.truncation {
            return Err(Error::IndexOutOfRange { index: grade, size: self.truncation + 1 });
        }
        Ok(self.grade_starts[grade]..self.grade_starts[grade + 1])
    }

    /// Number of basis words of the given grade.
    pub fn grade_count(&self, grade: usize) -> Result<usize> {
        Ok(self.grade_range(grade)?.len())
    }
}
