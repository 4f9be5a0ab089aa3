//! Exponentially scaled modified Bessel function of the first kind.

use crate::error::{domain, Result};
use crate::scalar::{cst, from_usize, Real};

use super::gamma::ln_factorial;

/// Arguments below this always use the power series.
const SERIES_LIMIT: f64 = 50.0;

/// `e^(-x) I_order(x)` for integer `order >= 0` and `x >= 0`.
///
/// Small arguments (and arguments not large compared to `order²`) sum the
/// ascending power series starting from a log-space leading term; large
/// arguments use the Hankel asymptotic expansion, truncated at its smallest
/// term.
pub fn bessel_i_scaled<T: Real>(order: i32, x: T) -> Result<T> {
    if order < 0 {
        return Err(domain(
            "bessel_i_scaled",
            format!("order {order} must be >= 0"),
        ));
    }
    if !(x >= T::zero()) {
        return Err(domain("bessel_i_scaled", format!("x = {x} must be >= 0")));
    }
    let n = order as usize;
    if x == T::zero() {
        return Ok(if n == 0 { T::one() } else { T::zero() });
    }
    let n_sq: T = from_usize(n * n);
    if x < cst(SERIES_LIMIT) || x < n_sq {
        Ok(scaled_series(n, x))
    } else {
        Ok(scaled_asymptotic(n, x))
    }
}

/// `ln(e^(-x) I_order(x))`, finite for every `x > 0`.
pub fn ln_bessel_i_scaled<T: Real>(order: i32, x: T) -> Result<T> {
    let n = order.max(0) as usize;
    if x > T::zero() && x < cst(1e-150) {
        // (x/2)^n / n! underflows before the logarithm can be taken.
        let half: T = x * cst(0.5);
        return Ok(from_usize::<T>(n) * half.ln() - ln_factorial::<T>(n) - x);
    }
    bessel_i_scaled(order, x).map(|v| v.ln())
}

fn scaled_series<T: Real>(n: usize, x: T) -> T {
    let half = x * cst(0.5);
    let quarter_sq = half * half;
    let ln_lead = if n == 0 {
        -x
    } else {
        from_usize::<T>(n) * half.ln() - ln_factorial::<T>(n) - x
    };
    let mut term = ln_lead.exp();
    if term == T::zero() {
        return T::zero();
    }
    let mut sum = term;
    let n_t: T = from_usize(n);
    let mut p = 1usize;
    loop {
        let p_t: T = from_usize(p);
        term = term * quarter_sq / (p_t * (n_t + p_t));
        sum = sum + term;
        // terms grow until p ≈ x/2, then decay
        if p_t > half && term <= T::epsilon() * cst(0.5) * sum {
            break;
        }
        p += 1;
        if p > 100_000 {
            break;
        }
    }
    sum
}

fn scaled_asymptotic<T: Real>(n: usize, x: T) -> T {
    let mu: T = from_usize(4 * n * n);
    let eight_x = x * cst(8.0);
    let mut term = T::one();
    let mut sum = T::one();
    let mut k = 1usize;
    loop {
        let odd: T = from_usize(2 * k - 1);
        let next = -term * (mu - odd * odd) / (from_usize::<T>(k) * eight_x);
        if next.abs() >= term.abs() && k > 1 {
            break;
        }
        term = next;
        sum = sum + term;
        if term.abs() <= T::epsilon() * cst(0.25) * sum.abs() || term == T::zero() {
            break;
        }
        k += 1;
        if k > 500 {
            break;
        }
    }
    sum / (T::TAU() * x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_i_scaled(0, 0.0_f64).unwrap(), 1.0);
        assert_eq!(bessel_i_scaled(1, 0.0_f64).unwrap(), 0.0);
        assert_eq!(bessel_i_scaled(4, 0.0_f64).unwrap(), 0.0);
    }

    #[test]
    fn order_zero_at_one_matches_truncated_series() {
        // Σ (x/2)^{2p} / (p!)² at x = 1, summed until terms vanish.
        let mut term = 1.0_f64;
        let mut sum = 1.0_f64;
        for p in 1..40 {
            term *= 0.25 / (p as f64 * p as f64);
            sum += term;
        }
        let expected = sum * (-1.0_f64).exp();
        let got = bessel_i_scaled(0, 1.0_f64).unwrap();
        assert!((got - expected).abs() <= 1e-15);
        assert!((got - 0.465_759_6).abs() < 1e-7);
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_i_scaled(0, -1.0_f64).is_err());
        assert!(bessel_i_scaled(-1, 1.0_f64).is_err());
    }

    #[test]
    fn branches_agree_at_switch() {
        // Both evaluation paths are accurate near the switch point.
        for n in 0..5usize {
            let x = 60.0_f64;
            let a = scaled_series(n, x);
            let b = scaled_asymptotic(n, x);
            assert!(((a - b) / b).abs() < 1e-13, "n={n} series={a} asym={b}");
        }
    }

    #[test]
    fn order_zero_is_decreasing() {
        let mut prev = 1.0_f64;
        for i in 1..4000 {
            let x = i as f64 * 0.2;
            let v = bessel_i_scaled(0, x).unwrap();
            assert!(v < prev, "x={x}");
            assert!(v > 0.0 && v <= 1.0);
            prev = v;
        }
    }

    #[test]
    fn log_form_handles_tiny_arguments() {
        let v: f64 = ln_bessel_i_scaled(2, 1e-200).unwrap();
        let expected = 2.0 * (0.5e-200_f64).ln() - 2.0_f64.ln();
        assert!((v - expected).abs() < 1e-12 * expected.abs());
    }
}
