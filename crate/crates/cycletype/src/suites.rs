//! Reusable verification suites: the small-degree oracle grid, the theorem
//! bound sweep, and the total-variation cross-validation grid. The CLI
//! `report` command and the acceptance tests both run these.

use num::{BigInt, One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{BoundContext, BoundReport, TheoremBound};
use crate::cycle_type::CycleType;
use crate::dickman::DickmanTable;
use crate::error::Result;
use crate::exact::{self, brute, JointSpec};
use crate::index_set::IndexSet;
use crate::partitions::{cycle_types_table, TypeEntry};
use crate::rational::{binomial_small, factorial, Rational};

/// Outcome of one named cross-check.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub label: String,
    pub ok: bool,
    pub detail: String,
}

impl CheckRecord {
    fn new(label: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        CheckRecord {
            label: label.into(),
            ok,
            detail: detail.into(),
        }
    }
}

/// The exact laws of one degree, recomputed directly from the element-mode
/// census (all n! permutations walked one by one).
struct Census {
    types: Vec<(CycleType, u64)>,
    n_fact: BigInt,
}

impl Census {
    fn build(n: usize) -> Result<Self> {
        Ok(Census {
            types: brute::element_census(n)?,
            n_fact: factorial(n),
        })
    }

    fn probability<F: Fn(&CycleType) -> bool>(&self, pred: F) -> Rational {
        let mut acc = BigInt::zero();
        for (t, c) in &self.types {
            if pred(t) {
                acc += *c;
            }
        }
        Rational::new(acc, self.n_fact.clone())
    }

    fn expectation<F: Fn(&CycleType) -> BigInt>(&self, f: F) -> Rational {
        let mut acc = BigInt::zero();
        for (t, c) in &self.types {
            acc += f(t) * *c;
        }
        Rational::new(acc, self.n_fact.clone())
    }
}

/// Recursive subset-sum over the multiset of cycle lengths; deliberately a
/// different algorithm from the bitset used by the implementation.
fn has_fixed_set_of_size(t: &CycleType, k: usize) -> bool {
    fn rec(lengths: &[usize], k: usize) -> bool {
        if k == 0 {
            return true;
        }
        match lengths.split_first() {
            None => false,
            Some((&first, rest)) => {
                (first <= k && rec(rest, k - first)) || rec(rest, k)
            }
        }
    }
    let lengths: Vec<usize> = t.lengths().collect();
    rec(&lengths, k)
}

/// Deterministic family of index sets at degree n: every interval, plus
/// `extra` seeded random subsets.
pub fn set_family(n: usize, extra: usize, seed: u64) -> Vec<IndexSet> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a..=n {
            out.push(IndexSet::interval(n, a, b).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..extra {
        let members: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
        if !members.is_empty() {
            out.push(IndexSet::new(n, members).unwrap());
        }
    }
    out
}

/// Cross-validates every exact operation against the element-mode census for
/// all degrees up to `n_max` (at most 8; runtime grows like n!).
pub fn small_grid_suite(n_max: usize, cap: usize) -> Result<Vec<CheckRecord>> {
    let n_max = n_max.min(8);
    let mut out = Vec::new();
    for n in 1..=n_max {
        let census = Census::build(n)?;
        let sets = set_family(n, 4, 0xC0FFEE ^ n as u64);

        // cauchy: per-type probabilities
        let mut ok = true;
        for (t, c) in &census.types {
            ok &= exact::cauchy_pmf(t) == Rational::new(BigInt::from(*c), census.n_fact.clone());
        }
        out.push(CheckRecord::new(
            format!("n={n} cauchy_pmf"),
            ok,
            format!("{} types", census.types.len()),
        ));

        // goncharov: all (j, m)
        let mut ok = true;
        let mut cases = 0;
        for j in 1..=n {
            for m in 0..=n / j {
                let lhs = exact::goncharov_pmf(n, j, m)?;
                let rhs = census.probability(|t| t.multiplicity(j) == m);
                ok &= lhs == rhs;
                cases += 1;
            }
        }
        out.push(CheckRecord::new(
            format!("n={n} goncharov_pmf"),
            ok,
            format!("{cases} cases"),
        ));

        // joint over singleton pairs and disjoint interval pairs
        let mut ok = true;
        let mut cases = 0;
        for a in 1..=n {
            for b in 1..=n {
                if a == b {
                    continue;
                }
                for ma in 0..=n / a {
                    for mb in 0..=n / b {
                        let spec = JointSpec::new(
                            n,
                            vec![
                                IndexSet::new(n, [a])?,
                                IndexSet::new(n, [b])?,
                            ],
                            vec![ma, mb],
                        )?;
                        let lhs = exact::joint_pmf(&spec, cap)?;
                        let rhs = census.probability(|t| {
                            t.multiplicity(a) == ma && t.multiplicity(b) == mb
                        });
                        ok &= lhs == rhs;
                        cases += 1;
                    }
                }
            }
        }
        for mid in 1..n {
            let left = IndexSet::interval(n, 1, mid)?;
            let right = IndexSet::interval(n, mid + 1, n)?;
            for ml in 0..=n {
                for mr in 0..=n {
                    let spec = JointSpec::new(n, vec![left.clone(), right.clone()], vec![ml, mr])?;
                    let lhs = exact::joint_pmf(&spec, cap)?;
                    let rhs = census.probability(|t| {
                        t.count_in(&left) == ml && t.count_in(&right) == mr
                    });
                    ok &= lhs == rhs;
                    cases += 1;
                }
            }
        }
        out.push(CheckRecord::new(
            format!("n={n} joint_pmf"),
            ok,
            format!("{cases} cases"),
        ));

        // binomial moments over the same families
        let mut ok = true;
        let mut cases = 0;
        for set in &sets {
            for m in 0..=3usize {
                let spec = JointSpec::new(n, vec![set.clone()], vec![m])?;
                let lhs = exact::binomial_moment(&spec, cap)?;
                let rhs =
                    census.expectation(|t| binomial_small(t.count_in(set), m));
                ok &= lhs == rhs;
                cases += 1;
            }
        }
        out.push(CheckRecord::new(
            format!("n={n} binomial_moment"),
            ok,
            format!("{cases} cases"),
        ));

        // total cycle count law
        let pmf = exact::total_cycles_pmf(n)?;
        let mut ok = true;
        for k in 1..=n {
            ok &= pmf.prob(k) == census.probability(|t| t.total_cycles() == k);
        }
        out.push(CheckRecord::new(format!("n={n} total_cycles_pmf"), ok, format!("{n} cases")));

        // no small / no large cycles
        let mut ok = true;
        for m in 0..=n {
            ok &= exact::no_small_prob(n, m)
                == census.probability(|t| t.count_in_range(1, m) == 0);
        }
        out.push(CheckRecord::new(format!("n={n} no_small_prob"), ok, format!("{} cases", n + 1)));
        let mut ok = true;
        for m in 1..=n {
            ok &= exact::no_large_prob(n, m)?
                == census.probability(|t| t.count_in_range(m + 1, n) == 0);
        }
        out.push(CheckRecord::new(format!("n={n} no_large_prob"), ok, format!("{n} cases")));

        // fixed sets, against an independent subset-sum
        let profile = exact::fixed_set_profile(n, cap)?;
        let mut ok = true;
        for (k, value) in profile.iter().enumerate() {
            ok &= *value == census.probability(|t| has_fixed_set_of_size(t, k));
        }
        out.push(CheckRecord::new(
            format!("n={n} fixed_set_prob"),
            ok,
            format!("{} cases", n + 1),
        ));

        // divisor count expectation
        let ok = exact::expected_divisor_count(n)?
            == census.expectation(|t| BigInt::one() << t.total_cycles());
        out.push(CheckRecord::new(format!("n={n} expected_divisor_count"), ok, "1 case"));

        // smallest-cycle CDF
        let mut ok = true;
        let mut cases = 0;
        for j in 1..=n {
            for k in 1..=n {
                let lhs = exact::smallest_cycle_cdf(n, j, k, cap)?;
                let rhs = census.probability(|t| t.count_in_range(1, k) >= j);
                ok &= lhs == rhs;
                cases += 1;
            }
        }
        out.push(CheckRecord::new(
            format!("n={n} smallest_cycle_cdf"),
            ok,
            format!("{cases} cases"),
        ));

        // conditional law given C = k
        let mut ok = true;
        let mut cases = 0;
        for set in &sets {
            for k in 1..=n {
                let pmf = exact::conditional_pmf(n, set, k, cap)?;
                let denom = census.probability(|t| t.total_cycles() == k);
                for h in 0..=k {
                    let joint =
                        census.probability(|t| t.total_cycles() == k && t.count_in(set) == h);
                    ok &= pmf.prob(h) == joint / denom.clone();
                    cases += 1;
                }
            }
        }
        out.push(CheckRecord::new(
            format!("n={n} conditional_pmf"),
            ok,
            format!("{cases} cases"),
        ));

        // restricted-support law (all cycles inside I, exactly k of them)
        let mut ok = true;
        let mut cases = 0;
        for set in &sets {
            for k in 0..=n {
                let lhs = exact::gruder_count(n, k, set);
                let rhs = census.probability(|t| {
                    t.total_cycles() == k && t.parts().iter().all(|&(l, _)| set.contains(l))
                });
                ok &= lhs == rhs;
                cases += 1;
            }
        }
        out.push(CheckRecord::new(
            format!("n={n} gruder_count"),
            ok,
            format!("{cases} cases"),
        ));
    }
    Ok(out)
}

fn histogram_from_table(table: &[TypeEntry], n: usize, set: &IndexSet) -> Vec<Rational> {
    let mut buckets = vec![BigInt::zero(); n + 1];
    for e in table {
        buckets[e.count_in_members(set.members())] += &e.perm_count;
    }
    let n_fact = factorial(n);
    buckets
        .into_iter()
        .map(|b| Rational::new(b, n_fact.clone()))
        .collect()
}

/// Sweeps every theorem bound over interval and random index sets at the
/// given degrees, verifying each against exact values. Returns one report
/// per evaluated parameter point.
pub fn bounds_suite(
    degrees: &[usize],
    random_sets: usize,
    seed: u64,
    table: &DickmanTable,
    cap: usize,
) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for &n in degrees {
        let types = cycle_types_table(n);
        let ctx = BoundContext {
            exact_cap: cap,
            verify: true,
            dickman: Some(table),
        };
        // moderate interval grid for larger degrees, everything for small
        let sets: Vec<IndexSet> = if n <= 12 {
            set_family(n, random_sets, seed ^ n as u64)
        } else {
            let anchors: Vec<usize> = [1usize, 2, 3, 5, 8, 13, 21, 34]
                .iter()
                .copied()
                .filter(|&a| a <= n)
                .collect();
            let mut v = Vec::new();
            for &a in &anchors {
                for &b in anchors.iter().chain(std::iter::once(&n)) {
                    if b >= a {
                        v.push(IndexSet::interval(n, a, b)?);
                    }
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
            for _ in 0..random_sets {
                let members: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
                if !members.is_empty() {
                    v.push(IndexSet::new(n, members)?);
                }
            }
            v
        };

        for set in &sets {
            let h = set.harmonic_mass_f64();
            let hist = histogram_from_table(&types, n, set);
            let cdf_leq = |a: f64| -> Rational {
                let mut acc = Rational::zero();
                for (m, w) in hist.iter().enumerate() {
                    if (m as f64) <= a {
                        acc += w;
                    }
                }
                acc
            };

            // single-set local bounds
            for m in 0..=4usize.min(n) {
                let mut r = TheoremBound::Cor6Single {
                    set: set.clone(),
                    m,
                }
                .evaluate(&BoundContext {
                    exact_cap: cap,
                    verify: false,
                    dickman: Some(table),
                })?;
                let exact = crate::rational::to_f64(&hist[m]);
                r.exact_value = Some(exact);
                r.holds = Some(exact <= r.bound_value + crate::bounds::VERIFY_TOLERANCE);
                out.push(r);
            }
            let mut r = TheoremBound::Cor6Zero { set: set.clone() }.evaluate(&BoundContext {
                exact_cap: cap,
                verify: false,
                dickman: Some(table),
            })?;
            let exact = crate::rational::to_f64(&hist[0]);
            r.exact_value = Some(exact);
            r.holds = Some(exact <= r.bound_value + crate::bounds::VERIFY_TOLERANCE);
            out.push(r);

            // tail bounds
            for lambda in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let mut r = TheoremBound::Thm7Lower {
                    set: set.clone(),
                    lambda,
                }
                .evaluate(&BoundContext {
                    exact_cap: cap,
                    verify: false,
                    dickman: Some(table),
                })?;
                let exact = crate::rational::to_f64(&cdf_leq(lambda * h));
                r.exact_value = Some(exact);
                r.holds = Some(exact <= r.bound_value + crate::bounds::VERIFY_TOLERANCE);
                out.push(r);
            }
            for lambda in [1.0, 1.5, 2.0, 3.0] {
                let mut r = TheoremBound::Thm7Upper {
                    set: set.clone(),
                    lambda,
                }
                .evaluate(&BoundContext {
                    exact_cap: cap,
                    verify: false,
                    dickman: Some(table),
                })?;
                let threshold = lambda * h + 1.0;
                let mut tail = Rational::zero();
                for (m, w) in hist.iter().enumerate() {
                    if (m as f64) >= threshold {
                        tail += w;
                    }
                }
                let exact = crate::rational::to_f64(&tail);
                r.exact_value = Some(exact);
                r.holds = Some(exact <= r.bound_value + crate::bounds::VERIFY_TOLERANCE);
                out.push(r);
            }
            for frac in [0.0, 0.5, 1.0] {
                let psi = frac * h.sqrt();
                let mut r = TheoremBound::Thm7TwoSided {
                    set: set.clone(),
                    psi,
                }
                .evaluate(&BoundContext {
                    exact_cap: cap,
                    verify: false,
                    dickman: Some(table),
                })?;
                let mut mass = Rational::zero();
                for (m, w) in hist.iter().enumerate() {
                    if (m as f64 - h).abs() >= psi * h.sqrt() {
                        mass += w;
                    }
                }
                let exact = crate::rational::to_f64(&mass);
                r.exact_value = Some(exact);
                r.holds = Some(exact <= r.bound_value + crate::bounds::VERIFY_TOLERANCE);
                out.push(r);
            }
            for k in 0..=4usize {
                let mut r = TheoremBound::Thm8Strict {
                    set: set.clone(),
                    k,
                }
                .evaluate(&BoundContext {
                    exact_cap: cap,
                    verify: false,
                    dickman: Some(table),
                })?;
                let tail: Rational = hist.iter().skip(k).sum();
                let exact = crate::rational::to_f64(&tail);
                r.exact_value = Some(exact);
                r.holds = Some(exact <= r.bound_value + crate::bounds::VERIFY_TOLERANCE);
                out.push(r);
            }
        }

        // joint bound over disjoint halves of a split interval
        for mid in [n / 3, n / 2, 2 * n / 3] {
            if mid < 1 || mid + 1 > n {
                continue;
            }
            let left = IndexSet::interval(n, 1, mid)?;
            let right = IndexSet::interval(n, mid + 1, n)?;
            for ml in 0..=2usize {
                for mr in 0..=2usize {
                    let spec = JointSpec::new(n, vec![left.clone(), right.clone()], vec![ml, mr])?;
                    let mut r = TheoremBound::Thm5Joint { spec: spec.clone() }.evaluate(
                        &BoundContext {
                            exact_cap: cap,
                            verify: false,
                            dickman: Some(table),
                        },
                    )?;
                    let mut hit = BigInt::zero();
                    for e in &types {
                        if e.count_in_members(left.members()) == ml
                            && e.count_in_members(right.members()) == mr
                        {
                            hit += &e.perm_count;
                        }
                    }
                    let exact =
                        crate::rational::to_f64(&Rational::new(hit, factorial(n)));
                    r.exact_value = Some(exact);
                    r.holds = Some(exact <= r.bound_value + crate::bounds::VERIFY_TOLERANCE);
                    out.push(r);
                }
            }
        }

        // repeated long cycle lengths
        for ell in (2..=n.min(8)).chain(std::iter::once(n)).filter(|&l| l >= 2) {
            let mut r = TheoremBound::CorTwoEqual { n, ell }.evaluate(&BoundContext {
                exact_cap: cap,
                verify: false,
                dickman: Some(table),
            })?;
            let mut hit = BigInt::zero();
            for e in &types {
                if e.parts.iter().any(|&(l, m)| l >= ell && m >= 2) {
                    hit += &e.perm_count;
                }
            }
            let exact = crate::rational::to_f64(&Rational::new(hit, factorial(n)));
            r.exact_value = Some(exact);
            r.holds = Some(exact <= r.bound_value + crate::bounds::VERIFY_TOLERANCE);
            out.push(r);
        }

        // lower bound on the total-count law, within its hypothesis range
        if n >= 3 {
            let kmax = ((n as f64).ln().ceil() as usize).saturating_sub(1).max(1);
            for k in 1..=kmax {
                if (k as f64) < (n as f64).ln() {
                    out.push(TheoremBound::Thm11Lower { n, k }.evaluate(&ctx)?);
                }
            }
        }

        // no-long-cycle bounds
        for m in 1..=n {
            out.push(TheoremBound::Thm12Large { n, m }.evaluate(&ctx)?);
            out.push(TheoremBound::Thm13Sandwich { n, m }.evaluate(&ctx)?);
        }
    }
    Ok(out)
}

/// One row of the total-variation grid.
#[derive(Debug, Clone)]
pub struct TvdRow {
    pub n: usize,
    pub k: usize,
    pub tvd: f64,
    pub oracle: Option<f64>,
}

/// Computes d_TV(𝒞_k, 𝒵_k) over the grid k ≤ k_max, k ≤ n ≤ n_max, attaching
/// the definition-oracle value wherever that is feasible.
pub fn tvd_suite(n_max: usize, k_max: usize) -> Result<Vec<TvdRow>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for k in 1..=k_max.min(n) {
            let tvd = crate::tvd::tvd_small_cycles(n, k)?;
            let oracle = if n <= 14 && k <= 4 {
                Some(crate::tvd::tvd_definition_oracle(n, k)?)
            } else {
                None
            };
            out.push(TvdRow { n, k, tvd, oracle });
        }
    }
    Ok(out)
}
