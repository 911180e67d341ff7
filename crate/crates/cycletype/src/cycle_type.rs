//! The cycle type of a permutation: how many cycles of each length it has.

use crate::error::{Error, Result};
use crate::index_set::IndexSet;

/// Multiplicity vector (m_1, …, m_n) of the cycle lengths of a permutation of
/// degree n, stored sparsely as sorted (length, multiplicity) pairs. The
/// defining invariant Σ j·m_j = n is checked on every construction; the total
/// cycle count C = Σ m_j then automatically satisfies 1 ≤ C ≤ n.
///
/// Sparse storage keeps sampled types at degree 10⁶⁺ cheap: a typical
/// permutation has only ~log n cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleType {
    n: usize,
    /// Sorted by length, multiplicities all positive.
    parts: Vec<(usize, usize)>,
    total: usize,
}

impl CycleType {
    /// From a dense multiplicity vector `mult[j-1] = m_j` of length `n`.
    pub fn from_multiplicities(n: usize, mult: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("cycle type degree must be positive"));
        }
        if mult.len() != n {
            return Err(Error::domain(format!(
                "multiplicity vector has length {}, expected {}",
                mult.len(),
                n
            )));
        }
        let weighted: usize = mult.iter().enumerate().map(|(i, &m)| (i + 1) * m).sum();
        if weighted != n {
            return Err(Error::domain(format!(
                "multiplicities weigh to {weighted}, expected {n}"
            )));
        }
        let parts: Vec<(usize, usize)> = mult
            .iter()
            .enumerate()
            .filter(|&(_, &m)| m > 0)
            .map(|(i, &m)| (i + 1, m))
            .collect();
        let total = parts.iter().map(|&(_, m)| m).sum();
        Ok(CycleType { n, parts, total })
    }

    /// From a list of cycle lengths (order irrelevant, repeats allowed).
    pub fn from_parts(n: usize, lengths: &[usize]) -> Result<Self> {
        let mut sorted = lengths.to_vec();
        sorted.sort_unstable();
        let mut parts: Vec<(usize, usize)> = Vec::new();
        for &len in &sorted {
            if len == 0 {
                return Err(Error::domain("cycle length must be positive"));
            }
            match parts.last_mut() {
                Some((l, m)) if *l == len => *m += 1,
                _ => parts.push((len, 1)),
            }
        }
        let weighted: usize = parts.iter().map(|&(l, m)| l * m).sum();
        if n == 0 || weighted != n {
            return Err(Error::domain(format!(
                "cycle lengths sum to {weighted}, expected {n}"
            )));
        }
        let total = parts.iter().map(|&(_, m)| m).sum();
        Ok(CycleType { n, parts, total })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// m_j: the number of cycles of length `j`.
    pub fn multiplicity(&self, j: usize) -> usize {
        self.parts
            .binary_search_by_key(&j, |&(l, _)| l)
            .map(|i| self.parts[i].1)
            .unwrap_or(0)
    }

    /// C(σ): the total number of cycles.
    pub fn total_cycles(&self) -> usize {
        self.total
    }

    /// Sorted (length, multiplicity) pairs with positive multiplicity.
    pub fn parts(&self) -> &[(usize, usize)] {
        &self.parts
    }

    /// Cycle lengths in nondecreasing order, with repeats.
    pub fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.parts
            .iter()
            .flat_map(|&(l, m)| std::iter::repeat_n(l, m))
    }

    /// Dense multiplicity vector of length `n`.
    pub fn to_multiplicities(&self) -> Vec<usize> {
        let mut mult = vec![0usize; self.n];
        for &(l, m) in &self.parts {
            mult[l - 1] = m;
        }
        mult
    }

    /// C_I(σ): the number of cycles whose length lies in `set`.
    pub fn count_in(&self, set: &IndexSet) -> usize {
        self.parts
            .iter()
            .filter(|&&(l, _)| set.contains(l))
            .map(|&(_, m)| m)
            .sum()
    }

    /// Number of cycles with length in [lo, hi].
    pub fn count_in_range(&self, lo: usize, hi: usize) -> usize {
        self.parts
            .iter()
            .filter(|&&(l, _)| lo <= l && l <= hi)
            .map(|&(_, m)| m)
            .sum()
    }
}
