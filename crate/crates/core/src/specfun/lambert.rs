//! Real branches of the Lambert W function, `w · e^w = x`.
//!
//! Both branches start from a branch-specific guess (branch-point series near
//! `-1/e`, iterated logarithms far from it) and polish with Halley steps.

use crate::error::{domain, Result};
use crate::scalar::{cst, Real};

/// Arguments within this distance below `-1/e` are treated as the branch point.
pub const BRANCH_POINT_GUARD: f64 = 1e-12;

const MAX_HALLEY_STEPS: usize = 64;

fn neg_inv_e<T: Real>() -> T {
    -T::one() / T::E()
}

/// `p = sqrt(2 (e x + 1))`, the local coordinate around the branch point.
fn branch_coordinate<T: Real>(x: T) -> T {
    (cst::<T>(2.0) * (T::E() * x + T::one()))
        .max(T::zero())
        .sqrt()
}

/// Principal branch `W₀(x)` for `x >= -1/e`; result `>= -1`.
pub fn lambert_w0<T: Real>(x: T) -> Result<T> {
    if x.is_nan() || x < neg_inv_e::<T>() - cst(BRANCH_POINT_GUARD) {
        return Err(domain("lambert_w0", format!("x = {x} is below -1/e")));
    }
    if x <= neg_inv_e::<T>() {
        return Ok(-T::one());
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    if x.is_infinite() {
        return Ok(x);
    }
    let guess = if x < cst(-0.25) {
        let p = branch_coordinate(x);
        -T::one() + p - p * p / cst(3.0) + cst::<T>(11.0 / 72.0) * p * p * p
    } else if x < cst(3.0) {
        // W(x) ≈ x (1 - x) near zero, log1p is a decent global fit here
        x.ln_1p() * (T::one() - x.ln_1p() / (cst::<T>(2.0) + x.ln_1p()))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    Ok(halley(x, guess).max(-T::one()))
}

/// Lower branch `W₋₁(x)` for `-1/e <= x < 0`; result `<= -1`.
pub fn lambert_wm1<T: Real>(x: T) -> Result<T> {
    if x.is_nan() || x >= T::zero() || x < neg_inv_e::<T>() - cst(BRANCH_POINT_GUARD) {
        return Err(domain("lambert_wm1", format!("x = {x} outside [-1/e, 0)")));
    }
    if x <= neg_inv_e::<T>() {
        return Ok(-T::one());
    }
    let guess = if x < cst(-0.25) {
        let p = branch_coordinate(x);
        -T::one() - p - p * p / cst(3.0) - cst::<T>(11.0 / 72.0) * p * p * p
    } else {
        let l1 = (-x).ln();
        let l2 = (-l1).ln();
        l1 - l2 + l2 / l1
    };
    Ok(halley(x, guess).min(-T::one()))
}

fn halley<T: Real>(x: T, mut w: T) -> T {
    let two = cst::<T>(2.0);
    for _ in 0..MAX_HALLEY_STEPS {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + T::one();
        if f == T::zero() || wp1 == T::zero() {
            break;
        }
        let denom = ew * wp1 - (w + two) * f / (two * wp1);
        if denom == T::zero() || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        let next = w - step;
        if !next.is_finite() {
            break;
        }
        w = next;
        if step.abs() <= T::epsilon() * cst::<T>(4.0) * (T::one() + w.abs()) {
            break;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn principal_trivial() {
        assert_eq!(lambert_w0(0.0_f64).unwrap(), 0.0);
        assert!((lambert_w0(E).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(lambert_w0(-1.0 / E).unwrap(), -1.0);
    }

    #[test]
    fn lower_branch_point() {
        assert_eq!(lambert_wm1(-1.0 / E).unwrap(), -1.0);
    }

    #[test]
    fn guard_band() {
        let x = -1.0 / E - 5e-13;
        assert_eq!(lambert_w0(x).unwrap(), -1.0);
        assert_eq!(lambert_wm1(x).unwrap(), -1.0);
        assert!(lambert_w0(-1.0 / E - 1e-9).is_err());
        assert!(lambert_wm1(-1.0 / E - 1e-9).is_err());
    }

    #[test]
    fn lower_branch_domain() {
        assert!(lambert_wm1(0.0_f64).is_err());
        assert!(lambert_wm1(0.5_f64).is_err());
        assert!(lambert_w0(-1.0_f64).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let w: f32 = lambert_w0(10.0_f32).unwrap();
        assert!((w * w.exp() - 10.0).abs() < 1e-5);
        let w: f32 = lambert_wm1(-0.1_f32).unwrap();
        assert!((w * w.exp() + 0.1).abs() < 1e-6);
    }
}
