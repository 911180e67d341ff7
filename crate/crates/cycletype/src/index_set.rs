//! Subsets of [n] = {1, …, n} and their harmonic mass H(I) = Σ_{j∈I} 1/j.

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A subset I ⊆ [n], stored as an explicit sorted member list. All sets used
/// by the exact laws have n at most a few hundred, so no interval compression
/// is attempted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    n: usize,
    members: Vec<usize>,
}

impl IndexSet {
    /// Builds I from arbitrary members; duplicates are rejected.
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(Error::domain(format!("duplicate member {}", w[0])));
            }
        }
        if let Some(&first) = members.first() {
            if first == 0 {
                return Err(Error::domain("set members must be in [1, n]"));
            }
        }
        if let Some(&last) = members.last() {
            if last > n {
                return Err(Error::domain(format!("member {last} exceeds degree {n}")));
            }
        }
        Ok(IndexSet { n, members })
    }

    /// The full set [n].
    pub fn full(n: usize) -> Self {
        IndexSet {
            n,
            members: (1..=n).collect(),
        }
    }

    /// The interval [lo, hi] ∩ [1, n].
    pub fn interval(n: usize, lo: usize, hi: usize) -> Result<Self> {
        let lo = lo.max(1);
        if hi > n {
            return Err(Error::domain(format!("interval end {hi} exceeds degree {n}")));
        }
        Ok(IndexSet {
            n,
            members: (lo..=hi).collect(),
        })
    }

    pub fn empty(n: usize) -> Self {
        IndexSet { n, members: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.n
    }

    pub fn contains(&self, j: usize) -> bool {
        self.members.binary_search(&j).is_ok()
    }

    pub fn max(&self) -> Option<usize> {
        self.members.last().copied()
    }

    pub fn complement(&self) -> IndexSet {
        let members = (1..=self.n).filter(|j| !self.contains(*j)).collect();
        IndexSet { n: self.n, members }
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        // member lists are tiny; a merge walk would be overkill
        self.members.iter().all(|&j| !other.contains(j))
    }

    /// H(I) = Σ_{j∈I} 1/j, exactly. The empty set has mass 0.
    pub fn harmonic_mass(&self) -> Rational {
        let mut acc = Rational::zero();
        for &j in &self.members {
            acc += Rational::new(BigInt::one(), BigInt::from(j));
        }
        acc
    }

    /// H(I) as a float, for bound formulas and thresholds. Kahan-summed
    /// directly in f64 — the exact rational route would be quadratic in the
    /// member count and sets at sampling scale have millions of members.
    pub fn harmonic_mass_f64(&self) -> f64 {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for &j in &self.members {
            let y = 1.0 / j as f64 - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }

    /// Renders as the CLI set syntax, e.g. `1-5,8`.
    pub fn to_spec_string(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.members.len() {
            let start = self.members[i];
            let mut end = start;
            while i + 1 < self.members.len() && self.members[i + 1] == end + 1 {
                i += 1;
                end = self.members[i];
            }
            if !out.is_empty() {
                out.push(',');
            }
            if start == end {
                out.push_str(&start.to_string());
            } else {
                out.push_str(&format!("{start}-{end}"));
            }
            i += 1;
        }
        out
    }
}

/// H_n = Σ_{i=1}^n 1/i, exactly. Rejects n = 0.
pub fn harmonic(n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::domain("harmonic number requires n >= 1"));
    }
    Ok(IndexSet::full(n).harmonic_mass())
}
