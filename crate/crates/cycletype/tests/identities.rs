//! Structural identities that tie independent code paths together: the
//! divide-out-one-cycle decomposition of the joint law, the generating
//! function for permutations with restricted cycle supports, singleton
//! binomial moments, and recursion cross-checks.

use num::{BigInt, One, Zero};

use cycletype::exact::{
    binomial_moment, conditional_pmf, goncharov_pmf, joint_pmf, gruder_count, no_large_prob,
    no_large_table, no_small_prob, JointSpec,
};
use cycletype::index_set::{harmonic, IndexSet};
use cycletype::partitions::DEFAULT_ENUM_CAP;
use cycletype::rational::{factorial, pow, to_f64, Rational};
use cycletype::{harmonic as harmonic_full, IndexSet as Set};

const CAP: usize = DEFAULT_ENUM_CAP;

fn interval(n: usize, a: usize, b: usize) -> IndexSet {
    IndexSet::interval(n, a, b).unwrap()
}

/// The joint law decomposes by removing the cycle through a distinguished
/// element: n·P_n(C_{I_j} = m_j ∀j) = Σ_{t∈𝒯} Σ_{h∈I_t} (lower-degree joint
/// law with m_t decremented), where 𝒯 collects the indices with m_t > 0 and
/// the complement when it is nonempty. Both sides are computed by separate
/// enumerations (at degree n and at degrees n − h).
#[test]
fn remove_one_cycle_decomposition() {
    let cases: Vec<(usize, Vec<IndexSet>, Vec<usize>)> = vec![
        (5, vec![interval(5, 1, 2)], vec![1]),
        (5, vec![interval(5, 1, 2)], vec![0]),
        (6, vec![interval(6, 1, 3), interval(6, 4, 6)], vec![2, 0]),
        (7, vec![interval(7, 1, 1), interval(7, 3, 5)], vec![1, 1]),
        (8, vec![interval(8, 2, 4), interval(8, 5, 8)], vec![0, 1]),
        (8, vec![interval(8, 1, 8)], vec![3]),
    ];
    for (n, sets, counts) in cases {
        let lhs = joint_pmf(&JointSpec::new(n, sets.clone(), counts.clone()).unwrap(), CAP)
            .unwrap()
            * Rational::from_integer(n.into());

        // complement of the union
        let mut in_union = vec![false; n + 1];
        for s in &sets {
            for &j in s.members() {
                in_union[j] = true;
            }
        }
        let complement: Vec<usize> = (1..=n).filter(|&j| !in_union[j]).collect();

        let mut rhs = Rational::zero();
        let mut contributions: Vec<(Vec<usize>, Option<usize>)> = Vec::new();
        for (t, &m) in counts.iter().enumerate() {
            if m > 0 {
                contributions.push((sets[t].members().to_vec(), Some(t)));
            }
        }
        if !complement.is_empty() {
            contributions.push((complement, None));
        }
        for (lengths, decremented) in contributions {
            for h in lengths {
                let reduced = n - h;
                // the lower-degree joint law, with sets clipped to [reduced]
                let mut new_sets = Vec::new();
                let mut new_counts = Vec::new();
                let mut impossible = false;
                for (i, s) in sets.iter().enumerate() {
                    let want = counts[i] - usize::from(decremented == Some(i));
                    let members: Vec<usize> =
                        s.members().iter().copied().filter(|&j| j <= reduced).collect();
                    if members.is_empty() {
                        if want != 0 {
                            impossible = true;
                        }
                        continue;
                    }
                    new_sets.push(IndexSet::new(reduced, members).unwrap());
                    new_counts.push(want);
                }
                if impossible {
                    continue;
                }
                let term = if reduced == 0 {
                    if new_counts.iter().all(|&c| c == 0) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                } else if new_sets.is_empty() {
                    // no constraints below the removed cycle
                    Rational::one()
                } else {
                    joint_pmf(
                        &JointSpec::new(reduced, new_sets, new_counts).unwrap(),
                        CAP,
                    )
                    .unwrap()
                };
                rhs += term;
            }
        }
        assert_eq!(lhs, rhs, "n={n}");
    }
}

/// Coefficient extraction from exp(y Σ_{m∈I} x^m/m) matches gruder_count:
/// the coefficient of x^n y^k times n! counts the permutations whose cycle
/// lengths all lie in I with exactly k cycles. The series is expanded here
/// by direct power-series multiplication, an independent route.
#[test]
fn restricted_support_generating_function() {
    let n_max = 10usize;
    let families: Vec<Vec<usize>> = vec![
        vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        vec![2],
        vec![1, 3],
        vec![2, 4, 6],
        vec![3, 5, 7],
    ];
    for members in families {
        // series[n][k] = coefficient of x^n y^k
        let mut series = vec![vec![Rational::zero(); n_max + 1]; n_max + 1];
        series[0][0] = Rational::one();
        for &m in &members {
            if m > n_max {
                continue;
            }
            // multiply by Σ_j (x^m y / m)^j / j!
            let mut next = vec![vec![Rational::zero(); n_max + 1]; n_max + 1];
            for j in 0..=(n_max / m) {
                let mut coeff = Rational::one();
                for i in 1..=j {
                    coeff /= Rational::from_integer((m * i).into());
                }
                for n in 0..=(n_max - m * j) {
                    for k in 0..=(n_max - j).min(n_max) {
                        if series[n][k].is_zero() {
                            continue;
                        }
                        if k + j <= n_max {
                            let add = &series[n][k] * &coeff;
                            next[n + m * j][k + j] += add;
                        }
                    }
                }
            }
            series = next;
        }
        let ambient = n_max;
        let set = IndexSet::new(ambient, members.iter().copied()).unwrap();
        for n in 0..=n_max {
            for k in 0..=n_max {
                let from_series = series[n][k].clone();
                let direct = gruder_count(n, k, &set);
                assert_eq!(direct, from_series, "I={members:?} n={n} k={k}");
            }
        }
    }
}

/// Singleton binomial moments: E Π_j C(C_j, m_j) equals Π (1/j)^{m_j}/m_j!
/// exactly when Σ j·m_j ≤ n and vanishes otherwise.
#[test]
fn singleton_moments() {
    for n in 2..=9usize {
        for j1 in 1..=n {
            for j2 in j1 + 1..=n {
                for m1 in 0..=3usize {
                    for m2 in 0..=3usize {
                        if m1 == 0 && m2 == 0 {
                            continue;
                        }
                        let mut sets = Vec::new();
                        let mut counts = Vec::new();
                        if m1 > 0 || true {
                            sets.push(IndexSet::new(n, [j1]).unwrap());
                            counts.push(m1);
                        }
                        sets.push(IndexSet::new(n, [j2]).unwrap());
                        counts.push(m2);
                        let spec = JointSpec::new(n, sets, counts).unwrap();
                        let lhs = binomial_moment(&spec, CAP).unwrap();
                        let expect = if j1 * m1 + j2 * m2 <= n {
                            let mut acc = Rational::one();
                            for (j, m) in [(j1, m1), (j2, m2)] {
                                for i in 1..=m {
                                    acc /= Rational::from_integer((j * i).into());
                                }
                            }
                            acc
                        } else {
                            Rational::zero()
                        };
                        assert_eq!(lhs, expect, "n={n} j=({j1},{j2}) m=({m1},{m2})");
                    }
                }
            }
        }
    }
}

/// When m ≥ n/2 at most one cycle can exceed m, so the no-long-cycle
/// probability collapses to 1 − (H_n − H_m). Exact over the whole range of
/// degrees up to 200.
#[test]
fn no_large_single_long_cycle_closed_form() {
    let h: Vec<Rational> = {
        let mut v = vec![Rational::zero()];
        for i in 1..=200usize {
            let next = v.last().unwrap() + Rational::new(BigInt::one(), BigInt::from(i));
            v.push(next);
        }
        v
    };
    for m in 1..=200usize {
        let n_hi = (2 * m).min(200);
        let table = no_large_table(n_hi, m).unwrap();
        for n in m..=n_hi {
            let expect = Rational::one() - (&h[n] - &h[m]);
            assert_eq!(table[n], expect, "n={n} m={m}");
        }
    }
}

/// The no-long-cycle probability satisfies its averaging recursion
/// ν(n, m) = (1/n) Σ_{k=n−m}^{n−1} ν(k, m), with ν = 1 at degrees ≤ m.
#[test]
fn no_large_averaging_recursion() {
    for m in 1..=6usize {
        let table = no_large_table(40, m).unwrap();
        for n in m + 1..=40 {
            let mut avg = Rational::zero();
            for k in n - m..=n - 1 {
                avg += &table[k];
            }
            avg /= Rational::from_integer(n.into());
            assert_eq!(table[n], avg, "n={n} m={m}");
        }
    }
}

/// Goncharov's alternating sum telescopes to the derangement series at j = 1.
#[test]
fn derangement_series() {
    for n in 1..=20usize {
        let mut expect = Rational::zero();
        let mut term = Rational::one();
        for j in 0..=n {
            if j > 0 {
                term = -term / Rational::from_integer(j.into());
            }
            expect += &term;
        }
        assert_eq!(goncharov_pmf(n, 1, 0).unwrap(), expect, "n={n}");
        assert_eq!(no_small_prob(n, 1), expect, "n={n}");
    }
}

/// |U(n, m) − e^{−H_m}| shrinks as n/m grows (shape check only; the decay
/// exponent carries no pinned constant).
#[test]
fn no_small_approaches_poisson_prediction() {
    for m in 1..=3usize {
        let h_m = to_f64(&harmonic(m).unwrap());
        let err = |n: usize| (to_f64(&no_small_prob(n, m)) - (-h_m).exp()).abs();
        let e1 = err(10 * m);
        let e2 = err(20 * m);
        let e3 = err(40 * m);
        // strict decay until the difference sinks under float resolution
        let floor = 1e-13;
        assert!(e2 <= e1 + floor && e3 <= e2 + floor, "m={m}: {e1} {e2} {e3}");
        assert!(e2 < e1 || e1 < floor, "m={m}: {e1} {e2}");
        assert!(e3 < 1e-12, "m={m}: residual {e3}");
    }
}

/// The conditional mean of C_I given C = k tracks its binomial heuristic
/// p(k−1) + O(1), with p = H(I)/H_n.
#[test]
fn conditional_mean_tracks_binomial() {
    let n = 12usize;
    let h_n = to_f64(&harmonic_full(n).unwrap());
    for k in 2..=6usize {
        for hi in [3usize, 6, 9] {
            let set = Set::interval(n, 1, hi).unwrap();
            let p = set.harmonic_mass_f64() / h_n;
            let pmf = conditional_pmf(n, &set, k, CAP).unwrap();
            let mean = to_f64(&pmf.mean());
            let sd = (p * (1.0 - p) * (k as f64 - 1.0)).sqrt();
            assert!(
                (mean - p * (k as f64 - 1.0)).abs() <= 2.0 * sd + 1.0,
                "n={n} k={k} hi={hi}: mean={mean} p(k-1)={}",
                p * (k as f64 - 1.0)
            );
        }
    }
}

/// ν sandwiched by the Dickman function at u = 3, with the table cross-checked
/// by step halving: ρ(3) ≤ ν(3m, m) ≤ ρ((3m+1)/(m+1)) at m = 200.
#[test]
fn dickman_sandwich_anchor_at_three() {
    let table = cycletype::dickman::DickmanTable::build(4.0, 1024).unwrap();
    let halved = cycletype::dickman::DickmanTable::build(4.0, 2048).unwrap();
    let rho3 = table.eval(3.0).unwrap();
    assert!((rho3 - halved.eval(3.0).unwrap()).abs() < 1e-8);
    let m = 200usize;
    let nu = to_f64(&no_large_prob(3 * m, m).unwrap());
    let upper = table.eval((3 * m + 1) as f64 / (m + 1) as f64).unwrap();
    assert!(rho3 <= nu + 1e-9, "rho(3)={rho3} nu={nu}");
    assert!(nu <= upper + 1e-9, "nu={nu} upper={upper}");
    // the sandwich pins rho(3) to ~1e-3 at this m; the table is far tighter
    assert!((nu - rho3).abs() < 2e-3);
}

/// Exact small-degree spot values frozen from first principles: the full
/// table of degree-4 statistics derived by hand from the 24 permutations.
#[test]
fn degree_four_by_hand() {
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    assert_eq!(
        joint_pmf(
            &JointSpec::new(4, vec![IndexSet::new(4, [2]).unwrap()], vec![1]).unwrap(),
            CAP
        )
        .unwrap(),
        quarter
    );
    assert_eq!(no_small_prob(4, 1), Rational::new(3.into(), 8.into()));
    assert_eq!(
        no_large_prob(4, 2).unwrap(),
        Rational::new(5.into(), 12.into())
    );
    assert_eq!(factorial(4), BigInt::from(24));
    assert_eq!(
        pow(&Rational::new(1.into(), 2.into()), 2),
        Rational::new(1.into(), 4.into())
    );
}
