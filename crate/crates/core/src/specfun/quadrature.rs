//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.
//!
//! Semi-infinite ranges are mapped onto `[0, 1)` with
//! `x = lower + scale · t / (1 - t)` before integrating.

use crate::error::{Error, Result};
use crate::scalar::{cst, to_f64, Real};

use super::config::NumericConfig;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights paired with `XGK[1], XGK[3], XGK[5], XGK[7]`.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Value and error estimate of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate<T> {
    pub value: T,
    pub error: T,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn gauss_kronrod<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Result<Segment<T>> {
    let half = (b - a) * cst(0.5);
    let center = (a + b) * cst(0.5);
    let eval = |x: T| -> Result<T> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand { at: to_f64(x) })
        }
    };

    let fc = eval(center)?;
    let mut kronrod = fc * cst(WGK[7]);
    let mut gauss = fc * cst(WG[3]);
    let mut abs_sum = fc.abs() * cst(WGK[7]);
    let mut values = [(T::zero(), T::zero()); 7];
    for (j, pair) in values.iter_mut().enumerate() {
        let dx = half * cst(XGK[j]);
        let lo = eval(center - dx)?;
        let hi = eval(center + dx)?;
        let w = cst::<T>(WGK[j]);
        kronrod = kronrod + w * (lo + hi);
        abs_sum = abs_sum + w * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss = gauss + cst::<T>(WG[j / 2]) * (lo + hi);
        }
        *pair = (lo, hi);
    }
    let mean = kronrod * cst(0.5);
    let mut asc = cst::<T>(WGK[7]) * (fc - mean).abs();
    for (j, (lo, hi)) in values.iter().enumerate() {
        asc = asc + cst::<T>(WGK[j]) * ((*lo - mean).abs() + (*hi - mean).abs());
    }

    let width = half.abs();
    let value = kronrod * half;
    let res_abs = abs_sum * width;
    let res_asc = asc * width;
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != T::zero() && error != T::zero() {
        let scaled = (cst::<T>(200.0) * error / res_asc).powf(cst(1.5));
        error = res_asc * scaled.min(T::one());
    }
    let roundoff = cst::<T>(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (cst::<T>(50.0) * T::epsilon()) {
        error = error.max(roundoff);
    }
    Ok(Segment { a, b, value, error })
}

fn adaptive<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    cfg: &NumericConfig<T>,
) -> Result<QuadEstimate<T>> {
    let first = gauss_kronrod(f, a, b)?;
    let mut segments = vec![first];
    let mut value = first.value;
    let mut error = first.error;
    loop {
        if error <= cfg.tolerance_for(value) {
            return Ok(QuadEstimate {
                value,
                error,
                intervals: segments.len(),
            });
        }
        if segments.len() >= cfg.max_subdivisions {
            return Err(Error::QuadratureNonConvergence {
                estimate: to_f64(value),
                error_bound: to_f64(error),
                subdivisions: segments.len(),
            });
        }
        let (worst, _) =
            segments
                .iter()
                .enumerate()
                .fold((0, T::neg_infinity()), |(bi, be), (i, s)| {
                    if s.error > be {
                        (i, s.error)
                    } else {
                        (bi, be)
                    }
                });
        let seg = segments.swap_remove(worst);
        let mid = (seg.a + seg.b) * cst(0.5);
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            // interval cannot be split further in this precision
            return Err(Error::QuadratureNonConvergence {
                estimate: to_f64(value),
                error_bound: to_f64(error),
                subdivisions: segments.len() + 1,
            });
        }
        let left = gauss_kronrod(f, seg.a, mid)?;
        let right = gauss_kronrod(f, mid, seg.b)?;
        segments.push(left);
        segments.push(right);
        value = segments.iter().fold(T::zero(), |acc, s| acc + s.value);
        error = segments.iter().fold(T::zero(), |acc, s| acc + s.error);
    }
}

/// Adaptive estimate of `∫_a^b f(x) dx` with its error bound.
pub fn integrate_finite_estimate<T, F>(
    f: F,
    a: T,
    b: T,
    cfg: &NumericConfig<T>,
) -> Result<QuadEstimate<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    if a == b {
        return Ok(QuadEstimate {
            value: T::zero(),
            error: T::zero(),
            intervals: 0,
        });
    }
    adaptive(&f, a, b, cfg)
}

/// `∫_a^b f(x) dx`.
pub fn integrate_finite<T, F>(f: F, a: T, b: T, cfg: &NumericConfig<T>) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate_finite_estimate(f, a, b, cfg).map(|e| e.value)
}

/// Adaptive estimate of `∫_lower^∞ f(x) dx` using the map `x = lower + scale·t/(1-t)`.
///
/// `scale` should be on the order of the distance over which `f` decays.
pub fn integrate_semi_infinite_estimate<T, F>(
    f: F,
    lower: T,
    scale: T,
    cfg: &NumericConfig<T>,
) -> Result<QuadEstimate<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    let scale = if scale > T::zero() && scale.is_finite() {
        scale
    } else {
        T::one()
    };
    let mapped = |t: T| {
        let one_minus = T::one() - t;
        let x = lower + scale * t / one_minus;
        if !x.is_finite() {
            return T::zero();
        }
        let v = f(x);
        if v == T::zero() {
            T::zero()
        } else {
            v * scale / (one_minus * one_minus)
        }
    };
    adaptive(&mapped, T::zero(), T::one(), cfg)
}

/// `∫_lower^∞ f(x) dx` with unit mapping scale.
pub fn integrate_semi_infinite<T, F>(f: F, lower: T, cfg: &NumericConfig<T>) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate_semi_infinite_estimate(f, lower, T::one(), cfg).map(|e| e.value)
}

/// `∫_lower^∞ f(x) dx` with an explicit mapping scale.
pub fn integrate_semi_infinite_scaled<T, F>(
    f: F,
    lower: T,
    scale: T,
    cfg: &NumericConfig<T>,
) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate_semi_infinite_estimate(f, lower, scale, cfg).map(|e| e.value)
}
