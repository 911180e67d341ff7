//! Seeded sampling of cycle types at large degree and statistical checks for
//! the statements that are out of exact reach.
//!
//! Reproducibility contract: trial i derives its random substream from
//! (seed, i) alone, so aggregate statistics are a pure function of
//! (n, trials, seed) no matter how trials are scheduled across workers.
//! Worker parallelism only partitions the trial range; partial tallies are
//! integers combined by addition.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cycle_type::CycleType;
use crate::error::{Error, Result};
use crate::exact;
use crate::index_set::IndexSet;
use crate::partitions::check_cap;
use crate::rational::to_f64;
use crate::special::normal_cdf;

/// Trials below this make the normal-approximation interval meaningless.
pub const MIN_TRIALS: usize = 1000;

const BATCH: usize = 4096;

/// A sampling request. `workers` affects scheduling only, never results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub workers: usize,
}

impl SampleConfig {
    pub fn new(n: usize, trials: usize, seed: u64, workers: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("degree must be positive"));
        }
        if trials < MIN_TRIALS {
            return Err(Error::domain(format!(
                "need at least {MIN_TRIALS} trials for the confidence interval, got {trials}"
            )));
        }
        if workers == 0 {
            return Err(Error::domain("need at least one worker"));
        }
        Ok(SampleConfig {
            n,
            trials,
            seed,
            workers,
        })
    }
}

/// A frequency estimate with its 95% normal-approximation half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub point: f64,
    pub half_width_95: f64,
    pub trials: usize,
}

impl Estimate {
    fn from_successes(successes: usize, trials: usize) -> Self {
        let p = successes as f64 / trials as f64;
        Estimate {
            point: p,
            half_width_95: 1.96 * (p * (1.0 - p) / trials as f64).sqrt(),
            trials,
        }
    }
}

/// The substream for trial `i` under `seed`.
fn trial_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

/// Draws one cycle type with the exact uniform-permutation law: while r
/// elements remain unplaced, the cycle containing the lowest of them has
/// length uniform on {1, …, r}. Memory is O(number of cycles).
pub fn sample_cycle_type(n: usize, rng: &mut impl Rng) -> CycleType {
    let mut lengths = Vec::with_capacity(16);
    let mut r = n;
    while r > 0 {
        let len = rng.gen_range(1..=r);
        lengths.push(len);
        r -= len;
    }
    CycleType::from_parts(n, &lengths).expect("sampled lengths sum to n")
}

/// Runs `pred` over all trials in deterministic batches, in parallel over
/// `workers`, and counts successes. The count is independent of `workers`.
fn count_successes<F>(config: &SampleConfig, pred: F) -> usize
where
    F: Fn(&CycleType) -> bool + Sync,
{
    let batches = config.trials.div_ceil(BATCH);
    let run_batch = |b: usize| -> usize {
        let lo = b * BATCH;
        let hi = ((b + 1) * BATCH).min(config.trials);
        let mut hits = 0usize;
        for i in lo..hi {
            let mut rng = trial_rng(config.seed, i);
            let t = sample_cycle_type(config.n, &mut rng);
            if pred(&t) {
                hits += 1;
            }
        }
        hits
    };
    if config.workers == 1 {
        (0..batches).map(run_batch).sum()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .expect("thread pool");
        pool.install(|| (0..batches).into_par_iter().map(run_batch).sum())
    }
}

/// Frequency of `event` with a 95% half-width. Deterministic given the
/// config; `workers` never changes the result.
pub fn estimate_event<F>(config: &SampleConfig, event: F) -> Result<Estimate>
where
    F: Fn(&CycleType) -> bool + Sync,
{
    if config.trials == 0 {
        return Err(Error::domain("trials must be positive"));
    }
    Ok(Estimate::from_successes(
        count_successes(config, event),
        config.trials,
    ))
}

/// Sample mean of `f` over sampled cycle types, with a 95% half-width from
/// the sample standard deviation.
pub fn estimate_mean<F>(config: &SampleConfig, f: F) -> Result<Estimate>
where
    F: Fn(&CycleType) -> f64 + Sync,
{
    let batches = config.trials.div_ceil(BATCH);
    let run_batch = |b: usize| -> (f64, f64) {
        let lo = b * BATCH;
        let hi = ((b + 1) * BATCH).min(config.trials);
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for i in lo..hi {
            let mut rng = trial_rng(config.seed, i);
            let x = f(&sample_cycle_type(config.n, &mut rng));
            sum += x;
            sum_sq += x * x;
        }
        (sum, sum_sq)
    };
    let (sum, sum_sq): (f64, f64) = if config.workers == 1 {
        (0..batches)
            .map(run_batch)
            .fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d))
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .expect("thread pool");
        pool.install(|| {
            (0..batches)
                .into_par_iter()
                .map(run_batch)
                .reduce(|| (0.0, 0.0), |(a, b), (c, d)| (a + c, b + d))
        })
    };
    let t = config.trials as f64;
    let mean = sum / t;
    let var = (sum_sq / t - mean * mean).max(0.0);
    Ok(Estimate {
        point: mean,
        half_width_95: 1.96 * (var / t).sqrt(),
        trials: config.trials,
    })
}

/// Estimates P(|C_{[m]} − log m| < 2√(log m · log log m) for all m in [ξ, n]).
///
/// The band is undefined (negative radicand) for m = 2, the only integer
/// where log log m < 0; such m are treated as vacuously satisfied. The
/// theorem's failure rate has shape c/(log ξ)^{1/3} with an unspecified
/// constant; callers display it next to the estimate rather than assert it.
pub fn uniform_growth_experiment(config: &SampleConfig, xi: usize) -> Result<Estimate> {
    let n = config.n;
    if !(2..=n).contains(&xi) {
        return Err(Error::domain(format!("need 2 <= xi <= n, got xi={xi}")));
    }
    // per-m thresholds shared across trials
    let mut lo_band = vec![f64::NEG_INFINITY; n + 1];
    let mut hi_band = vec![f64::INFINITY; n + 1];
    for m in xi..=n {
        let lm = (m as f64).ln();
        if lm.ln() <= 0.0 {
            continue; // band undefined below m = 3
        }
        let band = 2.0 * (lm * lm.ln()).sqrt();
        lo_band[m] = lm - band;
        hi_band[m] = lm + band;
    }
    let event = move |t: &CycleType| -> bool {
        let mut counts = vec![0usize; n + 1];
        for &(len, mult) in t.parts() {
            counts[len] += mult;
        }
        let mut c = 0usize;
        for m in 1..=n {
            c += counts[m];
            if m >= xi {
                let cf = c as f64;
                if !(lo_band[m] < cf && cf < hi_band[m]) {
                    return false;
                }
            }
        }
        true
    };
    estimate_event(config, event)
}

/// Estimates P(|log D_j − j| < 3√(j log j) for all j in [θ, C(σ)]), where
/// D_j is the j-th smallest cycle length (ties allowed).
///
/// At j = 1 the band is exactly zero and the strict inequality fails, so
/// θ = 1 gives an almost-surely-false event; meaningful runs use θ ≥ 2.
pub fn smallest_cycle_experiment(config: &SampleConfig, theta: usize) -> Result<Estimate> {
    let n = config.n;
    if theta < 1 || (theta as f64) > (n as f64).ln() {
        return Err(Error::domain(format!(
            "need 1 <= theta <= log n = {:.3}, got {theta}",
            (n as f64).ln()
        )));
    }
    let event = move |t: &CycleType| -> bool {
        let mut j = 0usize;
        for len in t.lengths() {
            j += 1;
            if j < theta {
                continue;
            }
            let jf = j as f64;
            let band = 3.0 * (jf * jf.ln()).sqrt();
            if ((len as f64).ln() - jf).abs() >= band {
                return false;
            }
        }
        true
    };
    estimate_event(config, event)
}

/// sup over the w-grid of |P(C_I ≤ H(I) + w√H(I)) − Φ(w)|. The CDF is exact
/// (full enumeration) when the degree fits under `exact_cap`, and empirical
/// otherwise. The theorem hypothesis H(I) ≥ 3 is enforced.
pub fn clt_empirical_error(
    config: &SampleConfig,
    set: &IndexSet,
    w_grid: &[f64],
    exact_cap: usize,
) -> Result<f64> {
    let n = config.n;
    if set.degree() != n {
        return Err(Error::domain(format!(
            "set degree {} does not match n = {n}",
            set.degree()
        )));
    }
    let h = set.harmonic_mass_f64();
    if h < 3.0 {
        return Err(Error::domain(format!(
            "the normal approximation needs H(I) >= 3, got {h:.4}"
        )));
    }
    if w_grid.is_empty() {
        return Err(Error::domain("w grid is empty"));
    }
    let thresholds: Vec<f64> = w_grid.iter().map(|w| h + w * h.sqrt()).collect();
    let cdf_at: Vec<f64> = if check_cap(n, exact_cap).is_ok() {
        let dist = exact::count_distribution(n, set, exact_cap)?;
        let dist: Vec<f64> = dist.iter().map(to_f64).collect();
        thresholds
            .iter()
            .map(|&a| {
                dist.iter()
                    .enumerate()
                    .filter(|&(m, _)| (m as f64) <= a)
                    .map(|(_, p)| p)
                    .sum()
            })
            .collect()
    } else {
        let members = set.members();
        let counts: Vec<usize> = {
            // one histogram pass over sampled counts
            let batches = config.trials.div_ceil(BATCH);
            let run_batch = |b: usize| -> Vec<usize> {
                let lo = b * BATCH;
                let hi = ((b + 1) * BATCH).min(config.trials);
                let mut hist = vec![0usize; n + 2];
                for i in lo..hi {
                    let mut rng = trial_rng(config.seed, i);
                    let t = sample_cycle_type(n, &mut rng);
                    let c: usize = t
                        .parts()
                        .iter()
                        .filter(|&&(l, _)| members.binary_search(&l).is_ok())
                        .map(|&(_, m)| m)
                        .sum();
                    hist[c.min(n + 1)] += 1;
                }
                hist
            };
            let add = |mut a: Vec<usize>, b: Vec<usize>| {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
                a
            };
            if config.workers == 1 {
                (0..batches).map(run_batch).fold(vec![0; n + 2], add)
            } else {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(config.workers)
                    .build()
                    .expect("thread pool");
                pool.install(|| {
                    (0..batches)
                        .into_par_iter()
                        .map(run_batch)
                        .reduce(|| vec![0; n + 2], add)
                })
            }
        };
        thresholds
            .iter()
            .map(|&a| {
                let hits: usize = counts
                    .iter()
                    .enumerate()
                    .filter(|&(m, _)| (m as f64) <= a)
                    .map(|(_, c)| c)
                    .sum();
                hits as f64 / config.trials as f64
            })
            .collect()
    };
    let sup = w_grid
        .iter()
        .zip(&cdf_at)
        .map(|(&w, &p)| (p - normal_cdf(w)).abs())
        .fold(0.0f64, f64::max);
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::DEFAULT_ENUM_CAP;

    #[test]
    fn config_validation() {
        assert!(SampleConfig::new(5, 1000, 1, 1).is_ok());
        assert!(SampleConfig::new(5, 999, 1, 1).is_err());
        assert!(SampleConfig::new(0, 1000, 1, 1).is_err());
        assert!(SampleConfig::new(5, 1000, 1, 0).is_err());
    }

    #[test]
    fn degree_one_is_deterministic() {
        let mut rng = trial_rng(7, 0);
        for _ in 0..10 {
            let t = sample_cycle_type(1, &mut rng);
            assert_eq!(t.parts(), &[(1, 1)]);
        }
    }

    #[test]
    fn trivial_event_estimates() {
        let config = SampleConfig::new(8, 1000, 42, 1).unwrap();
        let e = estimate_event(&config, |_| true).unwrap();
        assert_eq!(e.point, 1.0);
        assert_eq!(e.half_width_95, 0.0);
    }

    #[test]
    fn derangement_frequency_matches_exact() {
        let config = SampleConfig::new(4, 200_000, 1234, 2).unwrap();
        let e = estimate_event(&config, |t| t.multiplicity(1) == 0).unwrap();
        let exact = to_f64(&exact::no_small_prob(4, 1));
        assert!((e.point - exact).abs() < 3.0 * e.half_width_95, "{e:?}");
    }

    #[test]
    fn single_cycle_frequency() {
        let config = SampleConfig::new(8, 200_000, 99, 2).unwrap();
        let e = estimate_event(&config, |t| t.total_cycles() == 1).unwrap();
        assert!((e.point - 0.125).abs() < 3.0 * e.half_width_95, "{e:?}");
    }

    #[test]
    fn workers_do_not_change_results() {
        for trials in [1000usize, 5000] {
            let c1 = SampleConfig::new(30, trials, 777, 1).unwrap();
            let c4 = SampleConfig::new(30, trials, 777, 4).unwrap();
            let e1 = estimate_event(&c1, |t| t.multiplicity(1) == 0).unwrap();
            let e4 = estimate_event(&c4, |t| t.multiplicity(1) == 0).unwrap();
            assert_eq!(e1, e4);
        }
    }

    #[test]
    fn mean_divisor_count() {
        // E 2^C = n+1 at n = 50
        let config = SampleConfig::new(50, 100_000, 2024, 2).unwrap();
        let e = estimate_mean(&config, |t| 2f64.powi(t.total_cycles() as i32)).unwrap();
        assert!(
            (e.point - 51.0).abs() < 5.0 * e.half_width_95,
            "point={} hw={}",
            e.point,
            e.half_width_95
        );
    }

    #[test]
    fn hundred_prisoners_frequency() {
        // P(no cycle longer than 50) at n = 100
        let config = SampleConfig::new(100, 100_000, 31, 2).unwrap();
        let e = estimate_event(&config, |t| t.count_in_range(51, 100) == 0).unwrap();
        let exact = to_f64(&exact::no_large_prob(100, 50).unwrap());
        assert!((e.point - exact).abs() < 3.0 * e.half_width_95, "{e:?} vs {exact}");
    }

    #[test]
    fn growth_experiment_single_endpoint() {
        // xi = n reduces the event to the single index m = n
        let config = SampleConfig::new(10_000, 10_000, 17, 4).unwrap();
        let e = uniform_growth_experiment(&config, 10_000).unwrap();
        assert!(e.point >= 0.9, "{e:?}");
    }

    #[test]
    fn clt_error_shrinks_with_degree() {
        // sampled mode at two degrees: the sup error tracks 1/sqrt(H)
        let grid: Vec<f64> = (-30..=30).map(|i| i as f64 / 10.0).collect();
        let small = SampleConfig::new(1000, 100_000, 8, 4).unwrap();
        let big = SampleConfig::new(1_000_000, 100_000, 8, 4).unwrap();
        let e_small =
            clt_empirical_error(&small, &IndexSet::full(1000), &grid, DEFAULT_ENUM_CAP).unwrap();
        let e_big =
            clt_empirical_error(&big, &IndexSet::full(1_000_000), &grid, DEFAULT_ENUM_CAP)
                .unwrap();
        assert!(e_big < e_small, "{e_big} vs {e_small}");
    }

    #[test]
    fn growth_experiment_monotone_in_xi() {
        let config = SampleConfig::new(1000, 2000, 5, 2).unwrap();
        let wide = uniform_growth_experiment(&config, 10).unwrap();
        let narrow = uniform_growth_experiment(&config, 1000).unwrap();
        assert!(
            narrow.point >= wide.point - 3.0 * (narrow.half_width_95 + wide.half_width_95),
            "narrow={narrow:?} wide={wide:?}"
        );
        // determinism
        let again = uniform_growth_experiment(&config, 10).unwrap();
        assert_eq!(again, wide);
    }

    #[test]
    fn smallest_cycle_experiment_runs() {
        let config = SampleConfig::new(10_000, 2000, 11, 2).unwrap();
        let theta_max = (10_000f64).ln().floor() as usize; // 9
        let loose = smallest_cycle_experiment(&config, theta_max).unwrap();
        assert!(loose.point >= 0.99, "{loose:?}");
        let tighter = smallest_cycle_experiment(&config, 3).unwrap();
        assert!(tighter.point >= 0.5, "{tighter:?}");
        assert_eq!(
            smallest_cycle_experiment(&config, 3).unwrap(),
            tighter
        );
        assert!(smallest_cycle_experiment(&config, 100).is_err());
    }

    #[test]
    fn clt_exact_mode_envelope() {
        // full set at n = 40: exact CDF against the normal law
        let config = SampleConfig::new(40, 1000, 3, 1).unwrap();
        let grid: Vec<f64> = (-30..=30).map(|i| i as f64 / 10.0).collect();
        let sup =
            clt_empirical_error(&config, &IndexSet::full(40), &grid, DEFAULT_ENUM_CAP).unwrap();
        assert!(sup <= 0.2, "sup={sup}");
        let h = IndexSet::full(40).harmonic_mass_f64();
        assert!(sup <= 2.0 * h.ln() / h.sqrt());
    }

    #[test]
    fn clt_rejects_small_mass() {
        let config = SampleConfig::new(10, 1000, 3, 1).unwrap();
        let err = clt_empirical_error(
            &config,
            &IndexSet::full(10),
            &[0.0],
            DEFAULT_ENUM_CAP,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }
}
