//! Factorials and the regularized incomplete gamma function for integer shape.

use crate::error::{domain, Result};
use crate::scalar::{cst, from_usize, Real};

/// `ln(n!)`: exact product for small `n`, Stirling series beyond.
pub fn ln_factorial<T: Real>(n: usize) -> T {
    if n <= 20 {
        let mut acc = 1.0_f64;
        for k in 2..=n {
            acc *= k as f64;
        }
        return cst::<T>(acc).ln();
    }
    let x: T = from_usize(n + 1);
    // ln Γ(x) for x > 21; truncation error below 1e-20.
    let inv = x.recip();
    let inv2 = inv * inv;
    let series = inv
        * (cst::<T>(1.0 / 12.0)
            - inv2
                * (cst::<T>(1.0 / 360.0)
                    - inv2 * (cst::<T>(1.0 / 1260.0) - inv2 * cst::<T>(1.0 / 1680.0))));
    (x - cst(0.5)) * x.ln() - x + cst::<T>(0.918_938_533_204_672_8) + series
}

/// `n!` as a scalar; overflows to infinity for large `n`.
pub fn factorial<T: Real>(n: usize) -> T {
    ln_factorial::<T>(n).exp()
}

/// Regularized upper incomplete gamma `Γ(s, x) / (s-1)!` for integer `s >= 1`.
///
/// Evaluated as the finite sum `e^(-x) Σ_{k<s} x^k / k!`, with each term formed
/// in log space so large `x` does not underflow the prefactor on its own.
pub fn upper_gamma_regularized<T: Real>(s: u32, x: T) -> Result<T> {
    if s < 1 {
        return Err(domain("upper_gamma_regularized", "shape s must be >= 1"));
    }
    if !(x >= T::zero()) {
        return Err(domain(
            "upper_gamma_regularized",
            format!("x = {x} must be >= 0"),
        ));
    }
    if x == T::zero() {
        return Ok(T::one());
    }
    let ln_x = x.ln();
    let mut ln_term = -x;
    let mut sum = ln_term.exp();
    for k in 1..s as usize {
        ln_term = ln_term + ln_x - from_usize::<T>(k).ln();
        sum = sum + ln_term.exp();
    }
    Ok(sum.min(T::one()))
}

/// Regularized lower incomplete gamma `γ(s, x) / (s-1)!` for integer `s >= 1`.
///
/// Computed from the convergent tail series
/// `e^(-x) x^s / s! · Σ_{j>=0} x^j / ((s+1)…(s+j))`, which does not share any
/// arithmetic with [`upper_gamma_regularized`].
pub fn lower_gamma_regularized<T: Real>(s: u32, x: T) -> Result<T> {
    if s < 1 {
        return Err(domain("lower_gamma_regularized", "shape s must be >= 1"));
    }
    if !(x >= T::zero()) {
        return Err(domain(
            "lower_gamma_regularized",
            format!("x = {x} must be >= 0"),
        ));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    let s_t: T = from_usize(s as usize);
    let prefactor = (s_t * x.ln() - x - ln_factorial::<T>(s as usize)).exp();
    let mut term = T::one();
    let mut sum = T::one();
    let mut j = 1usize;
    loop {
        term = term * x / (s_t + from_usize(j));
        sum = sum + term;
        if term < T::epsilon() * sum || j > 100_000 {
            break;
        }
        j += 1;
    }
    Ok((prefactor * sum).min(T::one()))
}
