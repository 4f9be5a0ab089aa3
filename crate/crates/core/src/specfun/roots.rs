//! Root finding for strictly decreasing scalar functions.

use crate::error::{domain, Error, Result};
use crate::scalar::{cst, to_f64, Real};

use super::config::NumericConfig;

/// Finds `x > 0` with `f(x) = target` for a strictly decreasing, continuous `f`.
///
/// The bracket is grown geometrically (factor 2) from `bracket_seed` until it
/// straddles `target`, then refined with Brent's method. The search stops once
/// `|f(x) - target| <= max(abs_tol, rel_tol · |target|)` or the bracket has
/// collapsed to machine precision.
pub fn solve_monotone_decreasing<T, F>(
    mut f: F,
    target: T,
    bracket_seed: T,
    cfg: &NumericConfig<T>,
) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    if !(bracket_seed > T::zero()) || !bracket_seed.is_finite() {
        return Err(domain(
            "solve_monotone_decreasing",
            "bracket seed must be a positive finite number",
        ));
    }
    let tol = cfg.tolerance_for(target);
    let two = cst::<T>(2.0);

    let f_seed = f(bracket_seed)?;
    if (f_seed - target).abs() <= tol {
        return Ok(bracket_seed);
    }

    // (lo, f_lo) has f above target; (hi, f_hi) below.
    let (mut lo, mut f_lo, mut hi, mut f_hi);
    if f_seed > target {
        lo = bracket_seed;
        f_lo = f_seed;
        hi = bracket_seed * two;
        f_hi = f(hi)?;
        let mut expansions = 1;
        while f_hi > target {
            if f_hi > f_lo {
                return Err(non_monotone(lo, f_lo, hi, f_hi));
            }
            if expansions >= cfg.max_iter || !hi.is_finite() {
                return Err(bracket_err(target, lo, hi, expansions));
            }
            lo = hi;
            f_lo = f_hi;
            hi = hi * two;
            f_hi = f(hi)?;
            expansions += 1;
        }
        if f_hi > f_lo {
            return Err(non_monotone(lo, f_lo, hi, f_hi));
        }
    } else {
        hi = bracket_seed;
        f_hi = f_seed;
        lo = bracket_seed / two;
        f_lo = f(lo)?;
        let mut expansions = 1;
        while f_lo < target {
            if f_lo < f_hi {
                return Err(non_monotone(lo, f_lo, hi, f_hi));
            }
            if expansions >= cfg.max_iter || lo <= T::min_positive_value() {
                return Err(bracket_err(target, lo, hi, expansions));
            }
            hi = lo;
            f_hi = f_lo;
            lo = lo / two;
            f_lo = f(lo)?;
            expansions += 1;
        }
        if f_lo < f_hi {
            return Err(non_monotone(lo, f_lo, hi, f_hi));
        }
    }
    if (f_lo - target).abs() <= tol {
        return Ok(lo);
    }
    if (f_hi - target).abs() <= tol {
        return Ok(hi);
    }
    brent(&mut f, target, (lo, f_lo), (hi, f_hi), tol, cfg.max_iter)
}

fn non_monotone<T: Real>(x0: T, f0: T, x1: T, f1: T) -> Error {
    Error::NonMonotone {
        x0: to_f64(x0),
        f0: to_f64(f0),
        x1: to_f64(x1),
        f1: to_f64(f1),
    }
}

fn bracket_err<T: Real>(target: T, lo: T, hi: T, expansions: usize) -> Error {
    Error::Bracketing {
        target: to_f64(target),
        lo: to_f64(lo),
        hi: to_f64(hi),
        expansions,
    }
}

/// Brent–Dekker iteration on `h(x) = f(x) - target` over a sign-changing bracket.
fn brent<T, F>(f: &mut F, target: T, lo: (T, T), hi: (T, T), tol: T, max_iter: usize) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let two = cst::<T>(2.0);
    let half = cst::<T>(0.5);
    let (mut a, mut fa) = (lo.0, lo.1 - target);
    let (mut b, mut fb) = (hi.0, hi.1 - target);
    let (upper_f, lower_f) = (lo.1, hi.1);
    let slack = tol;
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..max_iter {
        if (fb > T::zero()) == (fc > T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let x_tol = two * T::epsilon() * b.abs();
        let m = half * (c - b);
        if fb.abs() <= tol || m.abs() <= x_tol || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= x_tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            let min1 = cst::<T>(3.0) * m * q - (x_tol * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > x_tol {
            b + d
        } else if m > T::zero() {
            b + x_tol
        } else {
            b - x_tol
        };
        let fx = f(b)?;
        if fx > upper_f + slack || fx < lower_f - slack {
            return Err(non_monotone(a, fa + target, b, fx));
        }
        fb = fx - target;
    }
    Err(Error::RootNonConvergence {
        best: to_f64(b),
        residual: to_f64(fb),
        iterations: max_iter,
    })
}
