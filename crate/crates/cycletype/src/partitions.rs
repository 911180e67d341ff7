//! Enumeration of all cycle types of degree n (equivalently, partitions of n
//! encoded as multiplicity vectors), together with the exact number of
//! permutations of each type.
//!
//! The enumeration recurses on part sizes from largest to smallest with the
//! multiplicity of each part increasing, so the visit order is deterministic
//! and test transcripts are stable. The per-type permutation count
//! n!/Π_j j^{m_j} m_j! is maintained incrementally as a big integer; weights
//! are exact and summing them reproduces n! (Cauchy's identity).

use num::{BigInt, One};

use crate::error::{Error, Result};
use crate::rational::factorial;

/// Default cap on the degree for full cycle-type enumeration. The cost grows
/// like the partition count p(n) (~10⁶ at n = 60).
pub const DEFAULT_ENUM_CAP: usize = 60;

/// Hard ceiling for the configurable cap; p(120) ≈ 1.8·10⁹ makes anything
/// beyond this unusable regardless of patience.
pub const MAX_ENUM_CAP: usize = 120;

/// Rejects degrees beyond the configured enumeration cap.
pub fn check_cap(n: usize, cap: usize) -> Result<()> {
    let cap = cap.min(MAX_ENUM_CAP);
    if n > cap {
        return Err(Error::CapExceeded { requested: n, cap });
    }
    Ok(())
}

/// A cycle type as seen mid-enumeration. Borrowed views stay valid only for
/// the duration of the visitor call.
pub struct TypeVisit<'a> {
    pub n: usize,
    /// Dense multiplicity vector of length n: `mult[j-1] = m_j`.
    pub mult: &'a [usize],
    /// Σ m_j.
    pub total_cycles: usize,
    /// Number of permutations of 𝔖_n with this cycle type.
    pub perm_count: &'a BigInt,
}

impl TypeVisit<'_> {
    /// Number of cycles with length in the (sorted) member list.
    pub fn count_in_members(&self, members: &[usize]) -> usize {
        members.iter().map(|&j| self.mult[j - 1]).sum()
    }

    pub fn count_le(&self, k: usize) -> usize {
        self.mult[..k.min(self.n)].iter().sum()
    }
}

/// Visits every cycle type of degree n exactly once. The caller is
/// responsible for cap checks; cost is proportional to p(n).
pub fn for_each_cycle_type<F: FnMut(&TypeVisit)>(n: usize, mut f: F) {
    assert!(n >= 1, "degree must be positive");
    let n_fact = factorial(n);
    let fact: Vec<BigInt> = {
        let mut v = Vec::with_capacity(n + 1);
        let mut acc = BigInt::one();
        v.push(acc.clone());
        for i in 1..=n {
            acc *= i;
            v.push(acc.clone());
        }
        v
    };
    let mut mult = vec![0usize; n];
    let mut denom = BigInt::one();
    let mut total = 0usize;
    rec(n, n, &mut mult, &mut denom, &mut total, &n_fact, &fact, &mut f);

    #[allow(clippy::too_many_arguments)]
    fn rec<F: FnMut(&TypeVisit)>(
        j: usize,
        remaining: usize,
        mult: &mut Vec<usize>,
        denom: &mut BigInt,
        total: &mut usize,
        n_fact: &BigInt,
        fact: &[BigInt],
        f: &mut F,
    ) {
        if remaining == 0 {
            let perm_count = n_fact / &*denom;
            f(&TypeVisit {
                n: mult.len(),
                mult,
                total_cycles: *total,
                perm_count: &perm_count,
            });
            return;
        }
        if j == 1 {
            // all remaining mass becomes fixed points
            mult[0] = remaining;
            let saved = denom.clone();
            *denom *= &fact[remaining];
            *total += remaining;
            let perm_count = n_fact / &*denom;
            f(&TypeVisit {
                n: mult.len(),
                mult,
                total_cycles: *total,
                perm_count: &perm_count,
            });
            *total -= remaining;
            *denom = saved;
            mult[0] = 0;
            return;
        }
        let saved = denom.clone();
        let max_m = remaining / j;
        for m in 0..=max_m {
            if m > 0 {
                mult[j - 1] = m;
                *denom *= j * m;
                *total += 1;
            }
            rec(j - 1, remaining - j * m, mult, denom, total, n_fact, fact, f);
        }
        if max_m > 0 {
            mult[j - 1] = 0;
            *total -= max_m;
            *denom = saved;
        }
    }
}

/// A materialized cycle type for repeated passes over the same degree.
#[derive(Debug, Clone)]
pub struct TypeEntry {
    /// Sorted (length, multiplicity) pairs with positive multiplicity.
    pub parts: Vec<(usize, usize)>,
    pub total_cycles: usize,
    /// Number of permutations of 𝔖_n with this type.
    pub perm_count: BigInt,
}

impl TypeEntry {
    pub fn multiplicity(&self, j: usize) -> usize {
        self.parts
            .binary_search_by_key(&j, |&(l, _)| l)
            .map(|i| self.parts[i].1)
            .unwrap_or(0)
    }

    pub fn count_in_members(&self, members: &[usize]) -> usize {
        // whichever side is smaller drives the scan
        if members.len() <= self.parts.len() {
            members.iter().map(|&j| self.multiplicity(j)).sum()
        } else {
            self.parts
                .iter()
                .filter(|&&(l, _)| members.binary_search(&l).is_ok())
                .map(|&(_, m)| m)
                .sum()
        }
    }
}

/// Collects all cycle types of degree n. Memory grows like p(n); intended for
/// n up to ~40 where repeated passes amortize the cost.
pub fn cycle_types_table(n: usize) -> Vec<TypeEntry> {
    let mut out = Vec::new();
    for_each_cycle_type(n, |t| {
        let parts: Vec<(usize, usize)> = t
            .mult
            .iter()
            .enumerate()
            .filter(|&(_, &m)| m > 0)
            .map(|(i, &m)| (i + 1, m))
            .collect();
        out.push(TypeEntry {
            parts,
            total_cycles: t.total_cycles,
            perm_count: t.perm_count.clone(),
        });
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;

    fn count_types(n: usize) -> usize {
        let mut c = 0;
        for_each_cycle_type(n, |_| c += 1);
        c
    }

    #[test]
    fn partition_counts() {
        // p(1..10), p(20), p(40)
        let expect = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(count_types(i + 1), e, "n={}", i + 1);
        }
        assert_eq!(count_types(20), 627);
        assert_eq!(count_types(40), 37338);
    }

    #[test]
    fn counts_sum_to_n_factorial() {
        for n in 1..=12usize {
            let mut sum = BigInt::zero();
            for_each_cycle_type(n, |t| sum += t.perm_count);
            assert_eq!(sum, factorial(n), "n={n}");
        }
    }

    #[test]
    fn known_counts_at_4() {
        // types of 4: 1^4, 2·1^2, 2^2, 3·1, 4 with 1, 6, 3, 8, 6 permutations
        let table = cycle_types_table(4);
        assert_eq!(table.len(), 5);
        let mut by_parts: Vec<(Vec<(usize, usize)>, u64)> = table
            .iter()
            .map(|e| (e.parts.clone(), u64::try_from(&e.perm_count).unwrap()))
            .collect();
        by_parts.sort();
        assert_eq!(
            by_parts,
            vec![
                (vec![(1, 1), (3, 1)], 8),
                (vec![(1, 2), (2, 1)], 6),
                (vec![(1, 4)], 1),
                (vec![(2, 2)], 3),
                (vec![(4, 1)], 6),
            ]
        );
    }

    #[test]
    fn cap_check() {
        assert!(check_cap(60, DEFAULT_ENUM_CAP).is_ok());
        assert!(check_cap(61, DEFAULT_ENUM_CAP).is_err());
        assert!(check_cap(121, 300).is_err()); // hard ceiling applies
    }
}
