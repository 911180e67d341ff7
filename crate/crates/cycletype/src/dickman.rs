//! The Dickman function ρ(u): ρ = 1 on [0,1] and uρ′(u) = −ρ(u−1) beyond.
//! ρ(n/m) is the limit of the probability that a permutation of degree n has
//! no cycle longer than m.
//!
//! The table is built by marching the equivalent integral equation
//! vρ(v) = ∫_{v−1}^{v} ρ(u) du forward on a uniform grid: a trailing window
//! of one unit is kept as a sum of per-panel quadratures (one new panel in,
//! one old panel out per step). Marching the integral form is numerically
//! stable where the raw differential form is not. Each panel uses the
//! three-point quadratic rule through the two previous grid points and the
//! new one, solved implicitly for the new value; the single panel whose
//! stencil would straddle the derivative kink at u = 1 falls back to an
//! implicit trapezoid.

use std::io::Write;

use crate::error::{Error, Result};

/// Sampled ρ values on the uniform grid 0, h, 2h, …, u_max with h = 1/steps
/// per unit. Immutable after construction; evaluation is interpolation only.
#[derive(Debug, Clone)]
pub struct DickmanTable {
    steps_per_unit: u32,
    values: Vec<f64>,
}

impl DickmanTable {
    /// Builds the table up to `u_max` with `steps_per_unit` grid points per
    /// unit interval (the default elsewhere is 1024).
    pub fn build(u_max: f64, steps_per_unit: u32) -> Result<Self> {
        if u_max.is_nan() || u_max < 1.0 {
            return Err(Error::domain("u_max must be at least 1"));
        }
        if steps_per_unit < 8 {
            return Err(Error::domain("need at least 8 grid steps per unit"));
        }
        let n = steps_per_unit as usize;
        let h = 1.0 / n as f64;
        let len = (u_max * n as f64).ceil() as usize + 1;
        let mut values = vec![1.0f64; len.min(n + 1)];
        values.reserve(len);
        let mut panels = vec![h; values.len()]; // panels[i] = ∫ over [u_{i-1}, u_i]
        panels[0] = 0.0;
        let mut window = 1.0; // ∫ over the trailing unit interval

        for i in values.len()..len {
            let u = i as f64 * h;
            let dropped = panels[i - n];
            let (rho, panel) = if i == n + 1 {
                // stencil would cross the kink at u = 1: implicit trapezoid
                let prev = values[i - 1];
                let rho = (window - dropped + 0.5 * h * prev) / (u - 0.5 * h);
                (rho, 0.5 * h * (prev + rho))
            } else {
                // implicit 3-point rule: ∫ = h(−f₋₂ + 8f₋₁ + 5f₀)/12
                let f2 = values[i - 2];
                let f1 = values[i - 1];
                let rho = (window - dropped + h / 12.0 * (8.0 * f1 - f2)) / (u - 5.0 * h / 12.0);
                (rho, h / 12.0 * (-f2 + 8.0 * f1 + 5.0 * rho))
            };
            values.push(rho);
            panels.push(panel);
            window += panel - dropped;
            if i % n == 0 {
                // refresh the window sum so float drift never compounds
                window = panels[i + 1 - n..=i].iter().sum();
            }
        }
        Ok(DickmanTable {
            steps_per_unit,
            values,
        })
    }

    pub fn step(&self) -> f64 {
        1.0 / self.steps_per_unit as f64
    }

    pub fn steps_per_unit(&self) -> u32 {
        self.steps_per_unit
    }

    pub fn u_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.step()
    }

    /// Grid values as (u, ρ(u)) pairs.
    pub fn grid(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = self.step();
        self.values.iter().enumerate().map(move |(i, &v)| (i as f64 * h, v))
    }

    pub fn value_at_index(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// ρ(u) by cubic interpolation between grid points (exact 1 for u ≤ 1;
    /// the interpolation stencil never crosses the kink at u = 1).
    pub fn eval(&self, u: f64) -> Result<f64> {
        if !(0.0..=self.u_max() + 1e-12).contains(&u) {
            return Err(Error::domain(format!(
                "u = {u} outside the table range [0, {}]",
                self.u_max()
            )));
        }
        if u <= 1.0 {
            return Ok(1.0);
        }
        let n = self.steps_per_unit as usize;
        let h = self.step();
        let last = self.values.len() - 1;
        let i = ((u / h) as usize).min(last - 1);
        // 4-point Lagrange stencil clamped to the smooth branch [n, last]
        let lo = i.saturating_sub(1).max(n).min(last - 3);
        let t = u / h - lo as f64;
        let f = &self.values[lo..lo + 4];
        let c0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
        let c1 = t * (t - 2.0) * (t - 3.0) / 2.0;
        let c2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
        let c3 = t * (t - 1.0) * (t - 2.0) / 6.0;
        Ok(c0 * f[0] + c1 * f[1] + c2 * f[2] + c3 * f[3])
    }

    /// CSV rows `u,rho` at 15 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "u,rho")?;
        for (u, v) in self.grid() {
            writeln!(w, "{},{}", format_sig(u, 15), format_sig(v, 15))?;
        }
        Ok(())
    }
}

/// ρ(u) from a prebuilt table; rejects u outside [0, u_max].
pub fn dickman_rho(u: f64, table: &DickmanTable) -> Result<f64> {
    table.eval(u)
}

/// Result of scanning −ρ′/ρ over a grid range. `sup_normalized` is the
/// largest value of (−ρ′(u)/ρ(u))/(1 + log u); `max_low_range` is the
/// largest −ρ′/ρ seen on (1, 2], whose true value is 1/(2(1−log 2)) ≈ 1.6294.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDerivCheck {
    pub sup_normalized: f64,
    pub max_low_range: f64,
}

/// Scans the log-derivative of ρ on (u_lo, u_hi], with ρ′(u) = −ρ(u−1)/u
/// read off the recurrence on grid points.
pub fn log_deriv_check(table: &DickmanTable, u_lo: f64, u_hi: f64) -> Result<LogDerivCheck> {
    if !(u_lo >= 1.0 && u_hi > u_lo && u_hi <= table.u_max() + 1e-12) {
        return Err(Error::domain(format!(
            "log-derivative range ({u_lo}, {u_hi}] must sit inside (1, {}]",
            table.u_max()
        )));
    }
    let n = table.steps_per_unit as usize;
    let h = table.step();
    let first = ((u_lo / h).floor() as usize + 1).max(n + 1);
    let last = (u_hi / h).round() as usize;
    let mut sup_normalized = f64::MIN;
    let mut max_low_range = f64::MIN;
    for i in first..=last.min(table.values.len() - 1) {
        let u = i as f64 * h;
        let neg_log_deriv = table.values[i - n] / (u * table.values[i]);
        sup_normalized = sup_normalized.max(neg_log_deriv / (1.0 + u.ln()));
        if u <= 2.0 + 1e-12 {
            max_low_range = max_low_range.max(neg_log_deriv);
        }
    }
    Ok(LogDerivCheck {
        sup_normalized,
        max_low_range,
    })
}

/// Renders with exactly `sig` significant digits (shared with the CLI
/// envelope format; duplicated here to keep the table self-contained).
fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{:.*e}", sig - 1, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_below_one() {
        let t = DickmanTable::build(3.0, 256).unwrap();
        for (u, v) in t.grid() {
            if u <= 1.0 {
                assert_eq!(v, 1.0, "u={u}");
            }
        }
        assert_eq!(t.eval(0.5).unwrap(), 1.0);
    }

    #[test]
    fn value_at_two() {
        // ρ(u) = 1 − log u on [1, 2]
        let t = DickmanTable::build(4.0, 1024).unwrap();
        let expect = 1.0 - 2f64.ln();
        assert!((t.eval(2.0).unwrap() - expect).abs() < 1e-8);
        // a few off-grid points on the same closed-form branch
        for &u in &[1.25, 1.5, 1.9] {
            assert!((t.eval(u).unwrap() - (1.0 - u.ln())).abs() < 1e-8, "u={u}");
        }
    }

    #[test]
    fn positive_and_nonincreasing() {
        let t = DickmanTable::build(30.0, 1024).unwrap();
        let mut prev = f64::INFINITY;
        for (u, v) in t.grid() {
            assert!(v > 0.0, "u={u}");
            if u >= 1.0 {
                assert!(v <= prev + 1e-15, "u={u}");
            }
            prev = v;
        }
    }

    /// Step halving changes grid values by less than 1e-8 up to u = 10.
    #[test]
    fn step_halving_stability() {
        let coarse = DickmanTable::build(10.0, 1024).unwrap();
        let fine = DickmanTable::build(10.0, 2048).unwrap();
        for (i, (u, v)) in coarse.grid().enumerate() {
            let w = fine.value_at_index(2 * i);
            assert!((v - w).abs() < 1e-8, "u={u}: {v} vs {w}");
        }
        // spot value stability at u = 3
        let a = coarse.eval(3.0).unwrap();
        let b = fine.eval(3.0).unwrap();
        assert!((a - b).abs() < 1e-8);
    }

    /// Deep-tail values stay positive and far below 1/n! comparisons.
    #[test]
    fn deep_tail_positive() {
        let t = DickmanTable::build(121.0, 1024).unwrap();
        let v = t.eval(120.0).unwrap();
        assert!(v > 0.0 && v < 1e-250, "{v}");
    }

    #[test]
    fn log_deriv_low_range_constant() {
        let t = DickmanTable::build(10.0, 1024).unwrap();
        let check = log_deriv_check(&t, 1.0, 10.0).unwrap();
        let b4 = 1.0 / (2.0 * (1.0 - 2f64.ln()));
        assert!((check.max_low_range - b4).abs() < 1e-3, "{check:?}");
        assert!(check.sup_normalized.is_finite() && check.sup_normalized > 0.0);
        // the scan just above u = 1 approaches −ρ'/ρ → 1
        let near_one = log_deriv_check(&t, 1.0, 1.01).unwrap();
        assert!((near_one.max_low_range - 1.0).abs() < 0.02, "{near_one:?}");
        // normalized sup is stable under step halving
        let fine = DickmanTable::build(10.0, 2048).unwrap();
        let check2 = log_deriv_check(&fine, 1.0, 10.0).unwrap();
        assert!((check.sup_normalized - check2.sup_normalized).abs() < 1e-3);
    }

    #[test]
    fn eval_rejects_out_of_range() {
        let t = DickmanTable::build(5.0, 256).unwrap();
        assert!(t.eval(-0.1).is_err());
        assert!(t.eval(5.5).is_err());
        assert!(log_deriv_check(&t, 4.0, 6.0).is_err());
    }

    #[test]
    fn csv_shape() {
        let t = DickmanTable::build(1.0, 8).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "u,rho");
        assert_eq!(lines.len(), 10); // header + 9 grid points
    }
}
