//! Exact laws of cycle-type statistics, all computed in arbitrary-precision
//! rational arithmetic.
//!
//! Everything here reduces to one of three devices:
//!
//! * the product formula for the probability of a single cycle type
//!   (Cauchy's formula), summed over enumerated cycle types;
//! * alternating inclusion–exclusion sums (the derangement-style local law);
//! * "first cycle" recursions on integer permutation counts, dividing by n!
//!   only at the end so no deep rational towers build up.

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::cycle_type::CycleType;
use crate::index_set::IndexSet;
use crate::partitions::{check_cap, for_each_cycle_type, TypeVisit};
use crate::pmf::Pmf;
use crate::rational::{factorial, Rational};

pub mod brute;

/// A request for the joint law of cycle counts over disjoint index sets:
/// P(C_{I_1} = m_1, …, C_{I_r} = m_r).
#[derive(Debug, Clone)]
pub struct JointSpec {
    n: usize,
    sets: Vec<IndexSet>,
    counts: Vec<usize>,
}

impl JointSpec {
    pub fn new(n: usize, sets: Vec<IndexSet>, counts: Vec<usize>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::domain("joint spec needs at least one set"));
        }
        if sets.len() != counts.len() {
            return Err(Error::domain(format!(
                "{} sets but {} counts",
                sets.len(),
                counts.len()
            )));
        }
        for (i, s) in sets.iter().enumerate() {
            if s.degree() != n {
                return Err(Error::domain(format!(
                    "set {} has degree {}, expected {n}",
                    i + 1,
                    s.degree()
                )));
            }
            if s.is_empty() {
                return Err(Error::domain(format!("set {} is empty", i + 1)));
            }
        }
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                if !sets[i].is_disjoint(&sets[j]) {
                    return Err(Error::domain(format!(
                        "sets {} and {} are not disjoint",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(JointSpec { n, sets, counts })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[IndexSet] {
        &self.sets
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }
}

/// P(σ has cycle type t) = Π_j (1/j)^{m_j} / m_j!  (Cauchy's formula).
pub fn cauchy_pmf(t: &CycleType) -> Rational {
    let mut denom = BigInt::one();
    for &(len, mult) in t.parts() {
        for i in 1..=mult {
            denom *= len * i;
        }
    }
    Rational::new(BigInt::one(), denom)
}

/// Exact probability of the event `pred` under a uniform random permutation
/// of degree n, by enumerating all cycle types with their weights.
pub fn probability_of<F: Fn(&TypeVisit) -> bool>(n: usize, cap: usize, pred: F) -> Result<Rational> {
    check_cap(n, cap)?;
    if n == 0 {
        return Err(Error::domain("degree must be positive"));
    }
    let mut acc = BigInt::zero();
    for_each_cycle_type(n, |t| {
        if pred(t) {
            acc += t.perm_count;
        }
    });
    Ok(Rational::new(acc, factorial(n)))
}

/// Goncharov's local law: P(C_j(σ) = m) as the exact alternating sum
/// (1/j)^m/m! · Σ_{h≤⌊n/j⌋−m} (−1/j)^h/h!.
pub fn goncharov_pmf(n: usize, j: usize, m: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::domain("degree must be positive"));
    }
    if j == 0 || j > n {
        return Err(Error::domain(format!("cycle length {j} outside [1, {n}]")));
    }
    if m > n / j {
        return Ok(Rational::zero());
    }
    let mut inner = Rational::zero();
    let mut term = Rational::one();
    for h in 0..=(n / j - m) {
        if h > 0 {
            term *= Rational::new(-BigInt::one(), BigInt::from(j * h));
        }
        inner += &term;
    }
    let mut lead = BigInt::one();
    for i in 1..=m {
        lead *= j * i;
    }
    Ok(inner / Rational::from_integer(lead))
}

/// E Π_j C(C_{I_j}(σ), m_j), the joint binomial moment, by direct summation
/// over all cycle types. Equals Π H(I_j)^{m_j}/m_j! iff Σ m_j·max(I_j) ≤ n.
pub fn binomial_moment(spec: &JointSpec, cap: usize) -> Result<Rational> {
    check_cap(spec.n, cap)?;
    let members: Vec<&[usize]> = spec.sets.iter().map(|s| s.members()).collect();
    let mut acc = BigInt::zero();
    for_each_cycle_type(spec.n, |t| {
        let mut factor = BigInt::one();
        for (mem, &m) in members.iter().zip(&spec.counts) {
            let c = t.count_in_members(mem);
            factor *= crate::rational::binomial_small(c, m);
            if factor.is_zero() {
                break;
            }
        }
        if !factor.is_zero() {
            acc += factor * t.perm_count;
        }
    });
    Ok(Rational::new(acc, factorial(spec.n)))
}

/// The right side of the moment bound: Π_j H(I_j)^{m_j} / m_j!, exactly.
pub fn binomial_moment_bound(spec: &JointSpec) -> Rational {
    let mut acc = Rational::one();
    for (s, &m) in spec.sets.iter().zip(&spec.counts) {
        let h = s.harmonic_mass();
        acc *= crate::rational::pow(&h, m);
        acc /= Rational::from_integer(factorial(m));
    }
    acc
}

/// Whether the moment bound is attained: Σ m_j·max(I_j) ≤ n.
pub fn binomial_moment_is_tight(spec: &JointSpec) -> bool {
    let weighted: usize = spec
        .sets
        .iter()
        .zip(&spec.counts)
        .map(|(s, &m)| m * s.max().unwrap_or(0))
        .sum();
    weighted <= spec.n
}

/// P(C_{I_1} = m_1, …, C_{I_r} = m_r), exactly, by cycle-type enumeration.
pub fn joint_pmf(spec: &JointSpec, cap: usize) -> Result<Rational> {
    check_cap(spec.n, cap)?;
    let members: Vec<&[usize]> = spec.sets.iter().map(|s| s.members()).collect();
    let mut acc = BigInt::zero();
    for_each_cycle_type(spec.n, |t| {
        let hit = members
            .iter()
            .zip(&spec.counts)
            .all(|(mem, &m)| t.count_in_members(mem) == m);
        if hit {
            acc += t.perm_count;
        }
    });
    Ok(Rational::new(acc, factorial(spec.n)))
}

/// Row n of the unsigned Stirling numbers of the first kind: entry k counts
/// the permutations of 𝔖_n with exactly k cycles (k = 0, …, n).
pub fn unsigned_stirling_row(n: usize) -> Vec<BigInt> {
    let mut row: Vec<BigInt> = vec![BigInt::one()];
    for t in 1..=n {
        let mut next = vec![BigInt::zero(); t + 1];
        for k in 0..row.len() {
            if !row[k].is_zero() {
                // c(t, k+1) += c(t-1, k); c(t, k) += (t-1)·c(t-1, k)
                let carry = &row[k] * (t - 1);
                next[k] += carry;
                next[k + 1] += &row[k];
            }
        }
        row = next;
    }
    row
}

/// The exact law of the total cycle count C(σ) on {1, …, n}:
/// P(C = k) = |s(n, k)| / n!.
pub fn total_cycles_pmf(n: usize) -> Result<Pmf> {
    if n == 0 {
        return Err(Error::domain("degree must be positive"));
    }
    let row = unsigned_stirling_row(n);
    let n_fact = factorial(n);
    let weights: Vec<Rational> = row[1..]
        .iter()
        .map(|c| Rational::new(c.clone(), n_fact.clone()))
        .collect();
    Pmf::exact(1, weights)
}

/// P_n(C_I(σ) = k, C_{[n]∖I}(σ) = 0): the probability that σ has exactly k
/// cycles and every cycle length lies in I. Realized as a first-cycle
/// recursion over parts drawn from I (the coefficient extraction from the
/// exponential generating function for such permutations).
pub fn gruder_count(n: usize, k: usize, set: &IndexSet) -> Rational {
    if n == 0 {
        return if k == 0 { Rational::one() } else { Rational::zero() };
    }
    let parts: Vec<usize> = set.members().iter().copied().filter(|&j| j <= n).collect();
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
    let kk = k.min(n);
    // a[t][c]: permutations of [t] with all cycle lengths in `parts`, c cycles
    let mut a = vec![vec![BigInt::zero(); kk + 1]; n + 1];
    a[0][0] = BigInt::one();
    for t in 1..=n {
        for &j in &parts {
            if j > t {
                break;
            }
            // ways to pick the cycle through the lowest element: (t−1)!/(t−j)!
            let ways = &fact[t - 1] / &fact[t - j];
            for c in 1..=kk {
                if !a[t - j][c - 1].is_zero() {
                    let add = &ways * &a[t - j][c - 1];
                    a[t][c] += add;
                }
            }
        }
    }
    if k > n {
        return Rational::zero();
    }
    Rational::new(a[n][k].clone(), fact[n].clone())
}

/// U(n, m) = P(every cycle of σ has length > m). U(0, m) = 1.
///
/// First-cycle recursion on permutation counts: the cycle containing a fixed
/// element has some length h > m, giving A(t) = Σ_{h>m} (t−1)!/(t−h)!·A(t−h).
pub fn no_small_prob(n: usize, m: usize) -> Rational {
    if n == 0 {
        return Rational::one();
    }
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
    let mut a = vec![BigInt::zero(); n + 1];
    a[0] = BigInt::one();
    for t in 1..=n {
        if t <= m {
            continue; // no admissible first cycle fits
        }
        // h runs over m+1..=t; (t−1)!/(t−h)! built up incrementally
        let mut ways = &fact[t - 1] / &fact[t - 1 - m];
        for h in m + 1..=t {
            if !a[t - h].is_zero() {
                let add = &ways * &a[t - h];
                a[t] += add;
            }
            if h < t {
                ways *= t - h;
            }
        }
    }
    Rational::new(a[n].clone(), fact[n].clone())
}

/// ν(i, m) for every degree i = 0, …, n_max at a fixed cutoff m ≥ 1, where
/// ν(i, m) = P(no cycle of σ ∈ 𝔖_i is longer than m). ν = 1 for i ≤ m.
pub fn no_large_table(n_max: usize, m: usize) -> Result<Vec<Rational>> {
    if m == 0 {
        return Err(Error::domain("cutoff m must be at least 1"));
    }
    let fact: Vec<BigInt> = {
        let mut v = Vec::with_capacity(n_max + 1);
        let mut acc = BigInt::one();
        v.push(acc.clone());
        for i in 1..=n_max {
            acc *= i;
            v.push(acc.clone());
        }
        v
    };
    let mut b = vec![BigInt::zero(); n_max + 1];
    b[0] = BigInt::one();
    for t in 1..=n_max {
        let mut ways = BigInt::one(); // (t−1)!/(t−h)! at h = 1
        for h in 1..=m.min(t) {
            if !b[t - h].is_zero() {
                let add = &ways * &b[t - h];
                b[t] += add;
            }
            if h < t {
                ways *= t - h;
            }
        }
    }
    Ok(b.iter()
        .enumerate()
        .map(|(i, c)| Rational::new(c.clone(), fact[i].clone()))
        .collect())
}

/// ν(n, m) = P(no cycle longer than m), 1 ≤ m ≤ n.
///
/// The classical texts sometimes index this quantity by the cutoff alone
/// (writing ν(1, m), ν(2, m) for the cases m = 1, 2 with the degree left
/// implicit); here the degree is always the first argument.
pub fn no_large_prob(n: usize, m: usize) -> Result<Rational> {
    if m < 1 || m > n {
        return Err(Error::domain(format!("cutoff m={m} outside [1, n={n}]")));
    }
    Ok(no_large_table(n, m)?.pop().unwrap())
}

/// i(n, k) for every k = 0, …, n in one enumeration pass: the probability
/// that some sub-multiset of σ's cycle lengths sums to k (σ fixes a set of
/// size k). A bitset subset-sum over the cycle lengths decides each type.
pub fn fixed_set_profile(n: usize, cap: usize) -> Result<Vec<Rational>> {
    check_cap(n, cap)?;
    if n == 0 {
        return Err(Error::domain("degree must be positive"));
    }
    if n > 127 {
        return Err(Error::domain("subset-sum bitset supports degree <= 127"));
    }
    let mut acc = vec![BigInt::zero(); n + 1];
    for_each_cycle_type(n, |t| {
        let mut bits: u128 = 1;
        for (i, &m) in t.mult.iter().enumerate() {
            for _ in 0..m {
                bits |= bits << (i + 1);
            }
        }
        for (k, a) in acc.iter_mut().enumerate() {
            if bits >> k & 1 == 1 {
                *a += t.perm_count;
            }
        }
    });
    let n_fact = factorial(n);
    Ok(acc
        .into_iter()
        .map(|c| Rational::new(c, n_fact.clone()))
        .collect())
}

/// i(n, k): probability that σ fixes some set of size k. i(n,0) = i(n,n) = 1.
pub fn fixed_set_prob(n: usize, k: usize, cap: usize) -> Result<Rational> {
    if k > n {
        return Err(Error::domain(format!("set size {k} exceeds degree {n}")));
    }
    Ok(fixed_set_profile(n, cap)?.swap_remove(k))
}

/// E 2^{C(σ)}, which counts the expected number of fixed sets. Always n + 1.
pub fn expected_divisor_count(n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::domain("degree must be positive"));
    }
    let row = unsigned_stirling_row(n);
    let mut acc = BigInt::zero();
    let mut pow2 = BigInt::one();
    for c in row {
        // k = 0 term is zero anyway (c(n,0) = 0 for n ≥ 1)
        acc += c * &pow2;
        pow2 *= 2;
    }
    Ok(Rational::new(acc, factorial(n)))
}

/// P(D_j(σ) ≤ k): the j-th smallest cycle has length at most k, equivalently
/// C_{[k]}(σ) ≥ j.
pub fn smallest_cycle_cdf(n: usize, j: usize, k: usize, cap: usize) -> Result<Rational> {
    if j < 1 || j > n {
        return Err(Error::domain(format!("rank j={j} outside [1, {n}]")));
    }
    if k < 1 || k > n {
        return Err(Error::domain(format!("length bound k={k} outside [1, {n}]")));
    }
    probability_of(n, cap, |t| t.count_le(k) >= j)
}

/// The conditional law of C_I(σ) given C(σ) = k, on {0, …, k}.
pub fn conditional_pmf(n: usize, set: &IndexSet, k: usize, cap: usize) -> Result<Pmf> {
    check_cap(n, cap)?;
    if set.degree() != n {
        return Err(Error::domain(format!(
            "set degree {} does not match n = {n}",
            set.degree()
        )));
    }
    if k < 1 || k > n {
        return Err(Error::domain(format!(
            "conditioning on C = {k} is impossible at degree {n}"
        )));
    }
    let members = set.members();
    let mut buckets = vec![BigInt::zero(); k + 1];
    for_each_cycle_type(n, |t| {
        if t.total_cycles == k {
            buckets[t.count_in_members(members)] += t.perm_count;
        }
    });
    let total: BigInt = buckets.iter().sum();
    if total.is_zero() {
        return Err(Error::domain(format!(
            "conditioning event C = {k} has probability zero"
        )));
    }
    let weights = buckets
        .into_iter()
        .map(|b| Rational::new(b, total.clone()))
        .collect();
    Pmf::exact(0, weights)
}

/// The full law of C_I(σ) as a weight vector indexed 0..=n (entries beyond
/// the attainable maximum are zero). One enumeration pass.
pub fn count_distribution(n: usize, set: &IndexSet, cap: usize) -> Result<Vec<Rational>> {
    check_cap(n, cap)?;
    if set.degree() != n {
        return Err(Error::domain(format!(
            "set degree {} does not match n = {n}",
            set.degree()
        )));
    }
    let members = set.members();
    let mut buckets = vec![BigInt::zero(); n + 1];
    for_each_cycle_type(n, |t| {
        buckets[t.count_in_members(members)] += t.perm_count;
    });
    let n_fact = factorial(n);
    Ok(buckets
        .into_iter()
        .map(|b| Rational::new(b, n_fact.clone()))
        .collect())
}
