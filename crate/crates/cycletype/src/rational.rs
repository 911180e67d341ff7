//! Exact rational arithmetic and its presentation-boundary conversions.
//!
//! All exact laws in this crate are rational numbers with arbitrary-precision
//! integer parts. `num::BigRational` already provides the canonical-form
//! contract we need (denominator > 0, fully reduced on construction, exact
//! comparison by cross-multiplication), so the type is re-exported rather
//! than wrapped. Floats appear only at presentation boundaries.

use num::bigint::{BigInt, Sign};
use num::{BigRational, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Exact `p/q` from integer parts. Panics if `denom` is zero.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical string form `p/q` with `q > 0`, e.g. `-3/8`, `5/1`.
pub fn to_canonical_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses the canonical `p/q` form (or a bare integer `p`).
pub fn parse_canonical(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let numer: BigInt = n.trim().parse().ok()?;
    let denom: BigInt = d.trim().parse().ok()?;
    if denom.is_zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

/// Nearest-f64 conversion that also works when numerator and denominator are
/// individually too large for `f64`. Values beyond the f64 range come back as
/// `0.0` or `±inf`; this is a presentation boundary, never an exact path.
pub fn to_f64(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // Shift both parts down together; keeps ~1000 bits, far beyond f64.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let s = (nb.max(db) - 1000).max(0) as u64;
    let n = (q.numer() >> s).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> s).to_f64().unwrap_or(f64::NAN);
    if d == 0.0 {
        return if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    n / d
}

/// n! as a big integer.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Falling factorial n·(n−1)⋯(n−k+1).
pub fn falling_factorial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in (n - k + 1)..=n {
        acc *= i;
    }
    acc
}

/// Exact binomial coefficient C(n, k) for machine-sized inputs.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Binomial coefficient with the first argument a nonnegative machine integer,
/// used for C(count, m) factors in moment sums.
pub fn binomial_small(n: usize, k: usize) -> BigInt {
    binomial(n, k)
}

/// Sign-aware power of a rational: `q^k` for nonnegative k.
pub fn pow(q: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= q;
    }
    acc
}

pub fn is_nonnegative(q: &Rational) -> bool {
    q.numer().sign() != Sign::Minus
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form_is_reduced() {
        let q = ratio(6, -8);
        assert_eq!(to_canonical_string(&q), "-3/4");
        assert_eq!(parse_canonical("-3/4"), Some(q));
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(falling_factorial(3, 5), BigInt::zero());
        assert_eq!(binomial(10, 3), BigInt::from(120));
    }

    #[test]
    fn huge_ratio_to_f64() {
        // 300! / (300! + 1) should be ~1.0 even though both parts overflow f64
        let f = factorial(300);
        let q = Rational::new(f.clone(), f + 1);
        let x = to_f64(&q);
        assert!((x - 1.0).abs() < 1e-12, "{x}");
        // true underflow comes back as 0
        let tiny = Rational::new(BigInt::one(), factorial(300));
        assert_eq!(to_f64(&tiny), 0.0);
    }

    proptest! {
        #[test]
        fn parse_roundtrip(n in -1000i64..1000, d in 1i64..1000) {
            let q = ratio(n, d);
            prop_assert_eq!(parse_canonical(&to_canonical_string(&q)), Some(q));
        }

        #[test]
        fn to_f64_matches_small(n in -10_000i64..10_000, d in 1i64..10_000) {
            let q = ratio(n, d);
            let expect = n as f64 / d as f64;
            prop_assert!((to_f64(&q) - expect).abs() <= 1e-12 * expect.abs().max(1.0));
        }
    }
}
