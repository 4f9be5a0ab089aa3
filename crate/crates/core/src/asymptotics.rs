//! Closed-form low-SNR characterizations.
//!
//! Keeping only the leading term of the density series, the power constraint
//! reads `SNR ≈ A λ^(L-3) e^(-cλ)` with `A = e^(-K) c^(L-2) / (L-1)!` and
//! `c = (K+L)/(LΩ)`, and the capacity is `C ≈ SNR · λ`. Inverting gives
//!
//! * `L < 3`: `λ = (3-L)/c · W₀(α · SNR^(-1/(3-L)))`
//! * `L = 3`: `λ = ln(c e^(-K) / (2 SNR)) / c`
//! * `L > 3`: `λ = (3-L)/c · W₋₁(α · SNR^(-1/(3-L)))`
//!
//! with `α = (1/(3-L)) (e^(-K) c / (L-1)!)^(1/(3-L))` ("refined" forms). The
//! simplified forms drop `α` (`α → 1` for `L < 3`, `α → -1` for `L > 3`, no
//! constant for `L = 3`), and all of them collapse to
//! `C ≈ SNR ln(1/SNR) / c`.
//!
//! These forms are only leading order in `λ`: for `K > 0` they ignore the
//! `e^(2 sqrt(K c λ))` growth of the Bessel factor, so the ratio to the exact
//! capacity approaches one only logarithmically slowly.

use crate::channel::ChannelSpec;
use crate::error::{domain, Error, Result};
use crate::exact::{capacity_exact, Method, WaterfillSolution};
use crate::scalar::{cst, to_f64, Real};
use crate::specfun::{lambert_w0, lambert_wm1, ln_factorial, NumericConfig, BRANCH_POINT_GUARD};

/// Which Lambert-W branch governs the water level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    BelowThree,
    Three,
    AboveThree,
}

impl Regime {
    pub fn of(l: u32) -> Self {
        match l {
            0..=2 => Regime::BelowThree,
            3 => Regime::Three,
            _ => Regime::AboveThree,
        }
    }
}

/// Regime, refinement and validity range of an asymptotic water level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticForm<T> {
    pub regime: Regime,
    pub refined: bool,
    /// Largest `snr` for which the refined form is defined; `None` when unbounded
    /// or for simplified forms.
    pub validity_snr_max: Option<T>,
}

impl<T: Real> AsymptoticForm<T> {
    pub fn new(spec: &ChannelSpec<T>, refined: bool) -> Self {
        Self {
            regime: Regime::of(spec.l()),
            refined,
            validity_snr_max: if refined { validity_bound(spec) } else { None },
        }
    }
}

/// `α = (1/(3-L)) · (e^(-K) c / (L-1)!)^(1/(3-L))`, negative when `L > 3`.
pub fn alpha_constant<T: Real>(spec: &ChannelSpec<T>) -> Result<T> {
    if spec.l() == 3 {
        return Err(domain("alpha_constant", "undefined for L = 3"));
    }
    let m = cst::<T>(3.0) - spec.l_real();
    let ln_base = -spec.k() + spec.decay_rate().ln() - ln_factorial::<T>(spec.l() as usize - 1);
    Ok((ln_base / m).exp() / m)
}

/// Upper `snr` limit of the refined water level.
///
/// `L = 3`: `(L+K)/(2LΩ) e^(-K)`, where the logarithm turns negative.
/// `L > 3`: `(e |α|)^(-(L-3))`, where the `W₋₁` argument reaches `-1/e`.
/// `L < 3`: no bound.
pub fn validity_bound<T: Real>(spec: &ChannelSpec<T>) -> Option<T> {
    match Regime::of(spec.l()) {
        Regime::BelowThree => None,
        Regime::Three => Some(spec.decay_rate() * (-spec.k()).exp() / cst(2.0)),
        Regime::AboveThree => {
            let alpha = alpha_constant(spec).ok()?;
            let power = spec.l_real() - cst(3.0);
            Some((T::E() * alpha.abs()).powf(-power))
        }
    }
}

fn check_snr<T: Real>(context: &'static str, snr: T) -> Result<()> {
    if !(snr > T::zero()) || !snr.is_finite() {
        return Err(domain(
            context,
            format!("snr = {snr} must be finite and > 0"),
        ));
    }
    Ok(())
}

/// Asymptotic water level `λ(snr)`.
///
/// Refined forms reject `snr` beyond [`validity_bound`]; the simplified `L > 3`
/// form rejects `snr > e^(-(L-3))` where its `W₋₁` argument leaves the domain.
pub fn lambda_asymptotic<T: Real>(spec: &ChannelSpec<T>, snr: T, refined: bool) -> Result<T> {
    check_snr("lambda_asymptotic", snr)?;
    let c = spec.decay_rate();
    if refined {
        if let Some(bound) = validity_bound(spec) {
            if snr > bound {
                return Err(Error::Validity {
                    snr: to_f64(snr),
                    bound: to_f64(bound),
                });
            }
        }
    }
    let m = cst::<T>(3.0) - spec.l_real();
    match Regime::of(spec.l()) {
        Regime::Three => {
            let inner = if refined {
                c * (-spec.k()).exp() / (cst::<T>(2.0) * snr)
            } else {
                snr.recip()
            };
            Ok(inner.ln() / c)
        }
        Regime::BelowThree => {
            let scale = if refined {
                alpha_constant(spec)?
            } else {
                T::one()
            };
            let arg = scale * (-snr.ln() / m).exp();
            Ok(m / c * lambert_w0(arg)?)
        }
        Regime::AboveThree => {
            let scale = if refined {
                alpha_constant(spec)?
            } else {
                -T::one()
            };
            let arg = scale * (-snr.ln() / m).exp();
            if arg < -T::one() / T::E() - cst(BRANCH_POINT_GUARD) {
                let power = spec.l_real() - cst(3.0);
                let bound = if refined {
                    validity_bound(spec).unwrap_or(T::zero())
                } else {
                    (-power).exp()
                };
                return Err(Error::Validity {
                    snr: to_f64(snr),
                    bound: to_f64(bound),
                });
            }
            Ok(m / c * lambert_wm1(arg)?)
        }
    }
}

/// `C ≈ snr · λ(snr)` with the regime-specific water level.
pub fn capacity_asymptotic<T: Real>(
    spec: &ChannelSpec<T>,
    snr: T,
    refined: bool,
) -> Result<WaterfillSolution<T>> {
    let lambda = lambda_asymptotic(spec, snr, refined)?;
    if lambda < T::zero() {
        return Err(domain(
            "capacity_asymptotic",
            format!("snr = {snr} gives a negative water level"),
        ));
    }
    Ok(WaterfillSolution {
        snr,
        lambda,
        capacity_nats: snr * lambda,
        method: Method::AsymptoticRegime,
        in_regime: snr < (-T::one()).exp(),
    })
}

/// `C ≈ (LΩ/(K+L)) · snr · ln(1/snr)` for `0 < snr <= 1`.
///
/// Points at or above `snr = e^(-1)` (where the curve stops increasing) are
/// still computed but flagged with `in_regime = false`.
pub fn capacity_asymptotic_simple<T: Real>(
    spec: &ChannelSpec<T>,
    snr: T,
) -> Result<WaterfillSolution<T>> {
    check_snr("capacity_asymptotic_simple", snr)?;
    if snr > T::one() {
        return Err(domain(
            "capacity_asymptotic_simple",
            format!("snr = {snr} must be <= 1"),
        ));
    }
    let lambda = snr.recip().ln() / spec.decay_rate();
    Ok(WaterfillSolution {
        snr,
        lambda,
        capacity_nats: snr * lambda,
        method: Method::AsymptoticSimple,
        in_regime: snr < (-T::one()).exp(),
    })
}

/// Non-fading limit `K → ∞`: the channel becomes `L` parallel AWGN branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwgnLimit<T> {
    /// Exact limit `ln(1 + snr L Ω)` with water level `1/(snr + 1/(LΩ))`.
    pub solution: WaterfillSolution<T>,
    /// Low-SNR linearization `L Ω snr`.
    pub linearized_nats: T,
}

pub fn capacity_awgn_limit<T: Real>(spec: &ChannelSpec<T>, snr: T) -> Result<AwgnLimit<T>> {
    check_snr("capacity_awgn_limit", snr)?;
    let gain = spec.mean();
    Ok(AwgnLimit {
        solution: WaterfillSolution {
            snr,
            lambda: (snr + gain.recip()).recip(),
            capacity_nats: (snr * gain).ln_1p(),
            method: Method::AwgnLimit,
            in_regime: true,
        },
        linearized_nats: gain * snr,
    })
}

/// Which energy-per-nat figure to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnergyMode {
    /// `((K+L)/(LΩ)) / ln(1/snr)`.
    CsitrAsymptotic,
    /// `snr / capacity_exact`.
    CsitrExact,
    /// `1 / (LΩ)`, independent of `snr`.
    Csir,
}

/// Transmitted energy per nat normalized by the noise variance.
pub fn energy_efficiency<T: Real>(
    spec: &ChannelSpec<T>,
    snr: T,
    mode: EnergyMode,
    cfg: &NumericConfig<T>,
) -> Result<T> {
    check_snr("energy_efficiency", snr)?;
    match mode {
        EnergyMode::Csir => Ok(spec.mean().recip()),
        EnergyMode::CsitrAsymptotic => {
            if snr >= T::one() {
                return Err(domain(
                    "energy_efficiency",
                    "asymptotic mode requires snr < 1",
                ));
            }
            Ok(spec.decay_rate() / snr.recip().ln())
        }
        EnergyMode::CsitrExact => {
            let c = capacity_exact(spec, snr, cfg)?.capacity_nats;
            if !(c > T::min_positive_value()) {
                return Err(Error::Underflow {
                    context: "energy_efficiency: capacity",
                    value: to_f64(c),
                });
            }
            Ok(snr / c)
        }
    }
}

/// Leading-order expansions of capacity and power in the water level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTerms<T> {
    pub capacity: T,
    pub snr: T,
}

/// `C(λ) ≈ A e^(-cλ) λ^(L-2)` and `SNR(λ) ≈ A e^(-cλ) λ^(L-3)`.
///
/// With `second_order`, the capacity carries the factor `1 + (2L-3)/(cλ)`.
/// Intended for large `λ` (`λ >= 5/c`).
pub fn series_leading_terms<T: Real>(
    spec: &ChannelSpec<T>,
    lambda: T,
    second_order: bool,
) -> SeriesTerms<T> {
    let l = spec.l_real();
    let c = spec.decay_rate();
    let two = cst::<T>(2.0);
    let ln_a = -spec.k() + (l - two) * c.ln() - ln_factorial::<T>(spec.l() as usize - 1);
    let ln_common = ln_a - c * lambda;
    let snr = (ln_common + (l - cst(3.0)) * lambda.ln()).exp();
    let mut capacity = (ln_common + (l - two) * lambda.ln()).exp();
    if second_order {
        capacity = capacity * (T::one() + (two * l - cst(3.0)) / (c * lambda));
    }
    SeriesTerms { capacity, snr }
}
