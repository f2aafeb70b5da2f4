//! Special functions: trigamma, log-factorials and multinomial coefficients.

use statrs::function::gamma::ln_gamma;

/// Trigamma ψ₁(x) = Σ_{k≥0} 1/(x+k)² for x > 0.
///
/// Upward recurrence to x ≥ 20, then the asymptotic Bernoulli series through
/// the x⁻¹⁵ term (truncation error below 1e-19 relative at the switch point).
pub fn trigamma(x: f64) -> f64 {
    assert!(x > 0.0, "trigamma needs x > 0");
    let mut acc = 0.0;
    let mut y = x;
    while y < 20.0 {
        acc += 1.0 / (y * y);
        y += 1.0;
    }
    let z = 1.0 / y;
    let z2 = z * z;
    // Bernoulli tail: 1/6, -1/30, 1/42, -1/30, 5/66, -691/2730, 7/6
    let series = z2
        * (1.0 / 6.0
            + z2 * (-1.0 / 30.0
                + z2 * (1.0 / 42.0
                    + z2 * (-1.0 / 30.0
                        + z2 * (5.0 / 66.0 + z2 * (-691.0 / 2730.0 + z2 * (7.0 / 6.0)))))));
    acc + z + 0.5 * z2 + z * series
}

/// Σ_{k>m} 1/k² = ψ₁(m+1).
pub fn tail_inverse_squares(m: u64) -> f64 {
    trigamma(m as f64 + 1.0)
}

/// ln(n!).
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// ln of the multinomial coefficient n! / Π kᵢ!.
pub fn ln_multinomial(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    let mut acc = ln_factorial(n as u64);
    for &k in counts {
        acc -= ln_factorial(k as u64);
    }
    acc
}

/// Binomial coefficient as `u128`, saturating on overflow.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trigamma_special_values() {
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((trigamma(1.0) - pi2_6).abs() < 1e-15);
        // ψ₁(1/2) = π²/2
        assert!((trigamma(0.5) - 3.0 * pi2_6).abs() < 1e-14);
    }

    #[test]
    fn tail_matches_direct_sum() {
        for m in [1u64, 5, 21, 100] {
            let direct: f64 = (m + 1..m + 2_000_000).map(|k| 1.0 / (k as f64).powi(2)).sum::<f64>()
                + 1.0 / (m as f64 + 2_000_000.0 - 0.5);
            let t = tail_inverse_squares(m);
            assert!((t - direct).abs() < 1e-13 * t.max(1.0), "m={m} {t} {direct}");
        }
    }

    #[test]
    fn multinomial_small_cases() {
        assert!((ln_multinomial(&[2, 2]) - 6f64.ln()).abs() < 1e-14);
        assert_eq!(binomial(7, 2), 21);
        assert_eq!(binomial(3, 5), 0);
    }
}
