//! Brute-force oracles: exact probabilities by exhaustive enumeration, used
//! to validate every other exact law.
//!
//! Two modes. Partition mode enumerates cycle types with their weights and
//! shares the enumeration machinery (cheap, degrees up to 14 allowed here).
//! Element mode enumerates all n! permutations of [n] one by one and reads
//! the cycle type off each — fully independent of the weighted enumeration,
//! which is the point.

use num::BigInt;
use num::Zero;

use crate::cycle_type::CycleType;
use crate::error::{Error, Result};
use crate::partitions::for_each_cycle_type;
use crate::rational::{factorial, Rational};

pub const PARTITION_MODE_CAP: usize = 14;
pub const ELEMENT_MODE_CAP: usize = 9;

/// Exact probability of `pred` by enumerating cycle types with weights.
pub fn partition_mode<F: Fn(&CycleType) -> bool>(n: usize, pred: F) -> Result<Rational> {
    if n == 0 || n > PARTITION_MODE_CAP {
        return Err(Error::domain(format!(
            "partition-mode oracle supports 1 <= n <= {PARTITION_MODE_CAP}, got {n}"
        )));
    }
    let mut acc = BigInt::zero();
    for_each_cycle_type(n, |t| {
        let ct = CycleType::from_multiplicities(n, t.mult).expect("enumerator emits valid types");
        if pred(&ct) {
            acc += t.perm_count;
        }
    });
    Ok(Rational::new(acc, factorial(n)))
}

/// Exact probability of `pred` by walking all n! permutations.
pub fn element_mode<F: Fn(&CycleType) -> bool>(n: usize, pred: F) -> Result<Rational> {
    let census = element_census(n)?;
    let mut acc = BigInt::zero();
    for (ct, count) in &census {
        if pred(ct) {
            acc += *count;
        }
    }
    Ok(Rational::new(acc, factorial(n)))
}

/// Tally of every cycle type over all of 𝔖_n, by explicit enumeration of the
/// n! permutations (Heap's algorithm) and cycle extraction.
pub fn element_census(n: usize) -> Result<Vec<(CycleType, u64)>> {
    if n == 0 || n > ELEMENT_MODE_CAP {
        return Err(Error::domain(format!(
            "element-mode oracle supports 1 <= n <= {ELEMENT_MODE_CAP}, got {n}"
        )));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counts: std::collections::HashMap<Vec<usize>, u64> = std::collections::HashMap::new();
    let mut tally = |p: &[usize]| {
        let mut mult = vec![0usize; n];
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = p[cur];
                len += 1;
            }
            mult[len - 1] += 1;
        }
        *counts.entry(mult).or_insert(0) += 1;
    };

    // Heap's algorithm, iterative form
    tally(&perm);
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            tally(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }

    let mut out: Vec<(CycleType, u64)> = counts
        .into_iter()
        .map(|(mult, count)| (CycleType::from_multiplicities(n, &mult).unwrap(), count))
        .collect();
    out.sort_by(|a, b| a.0.parts().cmp(b.0.parts()));
    Ok(out)
}
