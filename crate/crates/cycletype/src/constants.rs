//! Shared numeric constants.

/// Euler's constant γ.
pub const GAMMA: f64 = 0.577_215_664_901_532_9;

/// The exponent 𝓔 = 1 − (1 + log log 2)/log 2 ≈ 0.08607 governing the decay
/// of the fixed-set probability i(n,k). Not typed as a literal: derived from
/// its definition so it provably matches Q(1/log 2).
pub fn fixed_set_exponent() -> f64 {
    let ln2 = std::f64::consts::LN_2;
    1.0 - (1.0 + ln2.ln()) / ln2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_value() {
        assert!((fixed_set_exponent() - 0.08607).abs() < 1e-4);
    }

    #[test]
    fn gamma_value() {
        // γ = lim H_n − log n; crude numeric cross-check
        let n = 2_000_000u64;
        let h: f64 = (1..=n).map(|i| 1.0 / i as f64).sum();
        let approx = h - (n as f64).ln();
        assert!((approx - GAMMA).abs() < 1e-6);
    }
}
