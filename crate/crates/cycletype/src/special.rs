//! Special functions and tail-bound formulas: the large-deviation rate Q,
//! the normal CDF, Poisson and binomial tail envelopes, and log-factorials.

use crate::error::{Error, Result};

/// Q(λ) = λ log λ − λ + 1, the Poisson large-deviation rate. Q(0) = 1 by
/// continuity, Q(1) = 0, and Q is convex and nonnegative.
pub fn q_function(lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::domain(format!("Q requires lambda >= 0, got {lambda}")));
    }
    if lambda == 0.0 {
        return Ok(1.0);
    }
    Ok(lambda * lambda.ln() - lambda + 1.0)
}

/// Φ(z), the standard normal CDF, to absolute accuracy well inside 10⁻¹⁰.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Complementary error function. Taylor series of erf for small |x|, a
/// continued fraction (modified Lentz) for the tail; both near machine
/// precision in their ranges.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        return 1.0 - erf_series(x);
    }
    let x2 = x * x;
    if x2 > 700.0 {
        return 0.0; // e^{-x^2} underflows
    }
    // erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let tiny = 1e-300;
    let mut f = x;
    let mut c = f;
    let mut d = 0.0;
    for k in 1..200 {
        let a = k as f64 / 2.0;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    (-x2).exp() / (std::f64::consts::PI.sqrt() * f)
}

fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for k in 1..200 {
        term *= -x2 / k as f64;
        let add = term / (2 * k + 1) as f64;
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

/// Which tail of a distribution a bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    Lower,
    Upper,
}

/// The Poisson tail envelope min(1, prefactor)·e^{−Q(α)λ}:
/// P(X ≤ αλ) for the lower side (0 ≤ α ≤ 1) with prefactor 1/((1−α)√(αλ)),
/// P(X ≥ αλ) for the upper side (α ≥ 1) with prefactor √(α/(2πλ))/(α−1).
pub fn poisson_tail_bound(lambda: f64, alpha: f64, side: TailSide) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::domain(format!("lambda must be positive, got {lambda}")));
    }
    let prefactor = match side {
        TailSide::Lower => {
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Error::domain(format!(
                    "lower tail requires 0 <= alpha <= 1, got {alpha}"
                )));
            }
            1.0 / ((1.0 - alpha) * (alpha * lambda).sqrt())
        }
        TailSide::Upper => {
            if !(alpha >= 1.0) {
                return Err(Error::domain(format!(
                    "upper tail requires alpha >= 1, got {alpha}"
                )));
            }
            (alpha / (2.0 * std::f64::consts::PI * lambda)).sqrt() / (alpha - 1.0)
        }
    };
    Ok(prefactor.min(1.0) * (-q_function(alpha)? * lambda).exp())
}

/// Chernoff envelopes for binomial tails: P(Bin(n,p) ≤ βn) (lower, β ≤ p) or
/// P(Bin(n,p) ≥ βn) (upper, β ≥ p). The entropy form is the primary bound;
/// the weaker quadratic form e^{−(p−β)²n/(3p(1−p))} rides along.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialTailBound {
    pub entropy: f64,
    pub quadratic: f64,
}

pub fn binomial_tail_bound(
    n_trials: usize,
    p: f64,
    beta: f64,
    side: TailSide,
) -> Result<BinomialTailBound> {
    if !(0.0 < p && p < 1.0) {
        return Err(Error::domain(format!("need 0 < p < 1, got {p}")));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::domain(format!("need 0 <= beta <= 1, got {beta}")));
    }
    let (b, q) = match side {
        TailSide::Lower => {
            if beta > p {
                return Err(Error::domain(format!(
                    "lower tail requires beta <= p ({beta} > {p})"
                )));
            }
            (beta, p)
        }
        // the upper tail is the lower tail of the complementary count
        TailSide::Upper => {
            if beta < p {
                return Err(Error::domain(format!(
                    "upper tail requires beta >= p ({beta} < {p})"
                )));
            }
            (1.0 - beta, 1.0 - p)
        }
    };
    let n = n_trials as f64;
    let xlogx = |x: f64, y: f64| if x == 0.0 { 0.0 } else { x * (x / y).ln() };
    let divergence = xlogx(b, q) + xlogx(1.0 - b, 1.0 - q);
    let entropy = (-n * divergence).exp();
    let quadratic = (-(p - beta).powi(2) * n / (3.0 * p * (1.0 - p))).exp();
    Ok(BinomialTailBound { entropy, quadratic })
}

/// log n!, exact below 20 and by the Stirling series above; relative error
/// well under 10⁻¹⁰ everywhere.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 20 {
        let mut acc = 1.0f64;
        for i in 2..=n {
            acc *= i as f64;
        }
        return acc.ln();
    }
    let x = n as f64;
    let x2 = x * x;
    0.5 * (2.0 * std::f64::consts::PI * x).ln() + x * (x.ln() - 1.0) + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x * x2)
        + 1.0 / (1260.0 * x * x2 * x2)
        - 1.0 / (1680.0 * x * x2 * x2 * x2)
}

/// Poisson pmf e^{−λ}λ^k/k! in log space.
pub fn poisson_pmf(lambda: f64, k: u64) -> f64 {
    if lambda == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (-lambda + k as f64 * lambda.ln() - ln_factorial(k)).exp()
}

/// Reference error-exponent shape x log x − x log log log x + c·x (zero for
/// x ≤ 20), governing both the relative error of the no-small-cycle
/// probability against e^{−H_m} and the Poisson-approximation distance.
/// The linear coefficient is not pinned by theory; `c` is a display knob and
/// nothing in the crate asserts against this function.
pub fn decay_exponent_shape(x: f64, c: f64) -> f64 {
    if x <= 20.0 {
        return 0.0;
    }
    x * x.ln() - x * x.ln().ln().ln() + c * x
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite-Simpson quadrature of the normal density: the independent
    /// reference that normal_cdf is checked against.
    fn normal_cdf_quadrature(z: f64) -> f64 {
        let lo = -12.0f64;
        if z <= lo {
            return 0.0;
        }
        let steps = ((z - lo) / 5e-4).ceil() as usize;
        let steps = steps + steps % 2;
        let h = (z - lo) / steps as f64;
        let phi = |t: f64| (-0.5 * t * t).exp();
        let mut acc = phi(lo) + phi(z);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * phi(lo + i as f64 * h);
        }
        acc * h / 3.0 / (2.0 * std::f64::consts::PI).sqrt()
    }

    #[test]
    fn q_values() {
        assert_eq!(q_function(1.0).unwrap(), 0.0);
        assert!((q_function(2.0).unwrap() - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-15);
        assert_eq!(q_function(0.0).unwrap(), 1.0);
        assert!(q_function(-0.1).is_err());
        // Q(1/log 2) is the fixed-set exponent
        let e = q_function(1.0 / std::f64::consts::LN_2).unwrap();
        assert!((e - crate::constants::fixed_set_exponent()).abs() < 1e-14);
        assert!((e - 0.08607).abs() < 1e-4);
    }

    /// x²/3 ≤ Q(1+x) ≤ x² on |x| ≤ 1, and the near-zero difference bound
    /// Q(x₁) − Q(x₂) ≤ (−log x₁)(x₂ − x₁) for 0 < x₁ ≤ x₂ ≤ 1.
    #[test]
    fn q_envelopes() {
        let mut x = -1.0f64;
        while x <= 1.0 {
            let q = q_function(1.0 + x).unwrap();
            assert!(x * x / 3.0 <= q + 1e-15, "x={x}");
            assert!(q <= x * x + 1e-15, "x={x}");
            x += 1e-3;
        }
        let grid: Vec<f64> = (1..=200).map(|i| i as f64 / 200.0).collect();
        for (i, &x1) in grid.iter().enumerate() {
            for &x2 in &grid[i..] {
                let lhs = q_function(x1).unwrap() - q_function(x2).unwrap();
                assert!(lhs <= -x1.ln() * (x2 - x1) + 1e-12, "x1={x1} x2={x2}");
            }
        }
    }

    #[test]
    fn q_convex_on_grid() {
        let q = |x: f64| q_function(x).unwrap();
        let mut x = 0.05f64;
        while x < 5.0 {
            assert!(q(x) + q(x + 0.1) >= 2.0 * q(x + 0.05) - 1e-12, "x={x}");
            x += 0.05;
        }
    }

    #[test]
    fn normal_cdf_against_quadrature() {
        for &z in &[-4.0, -2.5, -1.0, -0.3, 0.0, 0.5, 1.0, 2.0, 3.7] {
            let err = (normal_cdf(z) - normal_cdf_quadrature(z)).abs();
            assert!(err < 1e-10, "z={z} err={err}");
        }
        assert!((normal_cdf(1.0) - 0.8413447461).abs() < 1e-9);
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(40.0) - 1.0).abs() < 1e-10);
        assert!(normal_cdf(-40.0) < 1e-10);
    }

    #[test]
    fn normal_cdf_symmetry() {
        let mut z = -6.0f64;
        while z <= 6.0 {
            assert!((normal_cdf(z) + normal_cdf(-z) - 1.0).abs() < 1e-10, "z={z}");
            z += 0.01;
        }
    }

    #[test]
    fn poisson_tail_examples() {
        assert_eq!(poisson_tail_bound(10.0, 1.0, TailSide::Lower).unwrap(), 1.0);
        assert_eq!(poisson_tail_bound(10.0, 1.0, TailSide::Upper).unwrap(), 1.0);
        let b = poisson_tail_bound(10.0, 0.5, TailSide::Lower).unwrap();
        let expect =
            (1.0 / (0.5 * 5f64.sqrt())).min(1.0) * (-10.0 * q_function(0.5).unwrap()).exp();
        assert!((b - expect).abs() < 1e-15);
        let b = poisson_tail_bound(4.0, 2.0, TailSide::Upper).unwrap();
        let expect = (2.0 / (8.0 * std::f64::consts::PI)).sqrt().min(1.0)
            * (-4.0 * q_function(2.0).unwrap()).exp();
        assert!((b - expect).abs() < 1e-15);
        assert!(poisson_tail_bound(10.0, 1.5, TailSide::Lower).is_err());
        assert!(poisson_tail_bound(10.0, 0.5, TailSide::Upper).is_err());
    }

    /// The envelope actually dominates exact Poisson tails on a grid.
    #[test]
    fn poisson_tail_dominates() {
        for &lambda in &[0.7, 2.0, 5.0, 13.0] {
            let pmf: Vec<f64> = (0..200).map(|k| poisson_pmf(lambda, k)).collect();
            for a in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let exact: f64 = pmf
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k as f64 <= a * lambda)
                    .map(|(_, p)| p)
                    .sum();
                let bound = poisson_tail_bound(lambda, a, TailSide::Lower).unwrap();
                assert!(exact <= bound + 1e-12, "lambda={lambda} a={a}");
            }
            for a in [1.0, 1.5, 2.0, 3.0] {
                let exact: f64 = pmf
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k as f64 >= a * lambda)
                    .map(|(_, p)| p)
                    .sum();
                let bound = poisson_tail_bound(lambda, a, TailSide::Upper).unwrap();
                assert!(exact <= bound + 1e-12, "lambda={lambda} a={a}");
            }
        }
    }

    #[test]
    fn binomial_tail_examples() {
        let b = binomial_tail_bound(7, 0.3, 0.3, TailSide::Lower).unwrap();
        assert!((b.entropy - 1.0).abs() < 1e-15);
        let b = binomial_tail_bound(10, 0.5, 0.0, TailSide::Lower).unwrap();
        assert!((b.entropy - 2f64.powi(-10)).abs() < 1e-15);
        let b = binomial_tail_bound(20, 0.25, 0.5, TailSide::Upper).unwrap();
        let expect = (-20.0 * (0.5 * 2f64.ln() + 0.5 * (2f64 / 3.0).ln())).exp();
        assert!((b.entropy - expect).abs() < 1e-15);
        assert!(b.entropy <= b.quadratic + 1e-15);
        assert!(binomial_tail_bound(10, 0.5, 0.7, TailSide::Lower).is_err());
        assert!(binomial_tail_bound(10, 1.0, 0.7, TailSide::Upper).is_err());
    }

    #[test]
    fn ln_factorial_accuracy() {
        // Kahan-summed reference Σ log i
        let mut reference = 0.0f64;
        let mut comp = 0.0f64;
        for n in 1..=300u64 {
            let y = (n as f64).ln() - comp;
            let t = reference + y;
            comp = (t - reference) - y;
            reference = t;
            let err = (ln_factorial(n) - reference).abs() / reference.max(1.0);
            assert!(err < 1e-11, "n={n} err={err}");
        }
    }

    /// Poisson CDF approaches Φ at the 1/√λ rate: the observed normalized
    /// error stays bounded and the raw error shrinks as λ grows.
    #[test]
    fn poisson_clt_error_scaling() {
        let sup_err = |lambda: f64| -> f64 {
            let pmf: Vec<f64> = (0..4000).map(|k| poisson_pmf(lambda, k)).collect();
            let mut cdf = vec![0.0; pmf.len()];
            let mut acc = 0.0;
            for (k, p) in pmf.iter().enumerate() {
                acc += p;
                cdf[k] = acc;
            }
            let mut worst: f64 = 0.0;
            let mut z = -3.0f64;
            while z <= 3.0 {
                let t = lambda + z * lambda.sqrt();
                let exact = if t < 0.0 { 0.0 } else { cdf[t.floor() as usize] };
                worst = worst.max((exact - normal_cdf(z)).abs());
                z += 0.05;
            }
            worst
        };
        let lambdas = [4.0, 16.0, 64.0, 256.0];
        let errs: Vec<f64> = lambdas.iter().map(|&l| sup_err(l)).collect();
        for w in errs.windows(2) {
            assert!(w[1] < w[0], "error should shrink with lambda: {errs:?}");
        }
        for (i, &lambda) in lambdas.iter().enumerate() {
            assert!(errs[i] * lambda.sqrt() < 1.0, "normalized error too large");
        }
    }

    #[test]
    fn decay_shape() {
        assert_eq!(decay_exponent_shape(3.0, 1.0), 0.0);
        assert!(decay_exponent_shape(50.0, 0.0) > 0.0);
        // increasing in x once past the cutoff
        assert!(decay_exponent_shape(80.0, 0.0) > decay_exponent_shape(40.0, 0.0));
    }
}
