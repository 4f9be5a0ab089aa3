//! Rician fading with maximum ratio combining.
//!
//! The post-combining gain `γ = ‖h‖²` follows a scaled noncentral chi-square
//! law with `2L` degrees of freedom:
//!
//! ```text
//! f(x) = c^((L+1)/2) (x/K)^((L-1)/2) e^(-c x - K) I_{L-1}(2 sqrt(K c x)),   c = (L+K)/(LΩ)
//! ```
//!
//! Every analytic routine in the crate uses this density. The vector model in
//! [`sampling`] only reproduces it for a single branch.

mod sampling;

pub use sampling::{
    mrc_combine, sample_channel_vector, sample_gamma, ChannelVectorSampler, GainSample,
    GainSampler, RandomStream,
};

use crate::error::{domain, Result};
use crate::scalar::{cst, from_usize, Real};
use crate::specfun::{
    integrate_finite, integrate_semi_infinite_scaled, ln_bessel_i_scaled, ln_factorial,
    NumericConfig,
};

/// Rician factor `K`, branch count `L` and per-branch mean gain `Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec<T> {
    k: T,
    l: u32,
    omega: T,
}

impl<T: Real> ChannelSpec<T> {
    /// `K = 0` is accepted as the Rayleigh limit.
    pub fn new(k: T, l: u32, omega: T) -> Result<Self> {
        if !(k >= T::zero()) || !k.is_finite() {
            return Err(domain(
                "ChannelSpec",
                format!("Rician factor K = {k} must be finite and >= 0"),
            ));
        }
        if l < 1 {
            return Err(domain("ChannelSpec", "branch count L must be >= 1"));
        }
        if !(omega > T::zero()) || !omega.is_finite() {
            return Err(domain(
                "ChannelSpec",
                format!("per-branch gain Ω = {omega} must be finite and > 0"),
            ));
        }
        Ok(Self { k, l, omega })
    }

    pub fn k(&self) -> T {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn l_real(&self) -> T {
        from_usize(self.l as usize)
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    /// Copy with `Ω` replaced.
    pub fn with_omega(&self, omega: T) -> Result<Self> {
        Self::new(self.k, self.l, omega)
    }

    /// `c = (L + K) / (L Ω)`, the exponential decay rate of the density.
    pub fn decay_rate(&self) -> T {
        (self.l_real() + self.k) / (self.l_real() * self.omega)
    }

    /// `E[γ] = L Ω`.
    pub fn mean(&self) -> T {
        self.l_real() * self.omega
    }

    /// `Var[γ] = (L + 2K) / c²`.
    pub fn variance(&self) -> T {
        let c = self.decay_rate();
        (self.l_real() + cst::<T>(2.0) * self.k) / (c * c)
    }
}

/// `ln f_γ(x)` for `x > 0`.
pub fn ln_pdf_gamma<T: Real>(spec: &ChannelSpec<T>, x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(domain("pdf_gamma", format!("x = {x} must be > 0")));
    }
    Ok(ln_density(spec, x))
}

/// Density of the post-combining gain, `f_γ(x)` for `x > 0`.
pub fn pdf_gamma<T: Real>(spec: &ChannelSpec<T>, x: T) -> Result<T> {
    ln_pdf_gamma(spec, x).map(|v| v.exp())
}

fn ln_density<T: Real>(spec: &ChannelSpec<T>, x: T) -> T {
    let l = spec.l_real();
    let c = spec.decay_rate();
    let order = spec.l as i32 - 1;
    if spec.k == T::zero() {
        // Gamma(L, Ω) density
        return l * c.ln() + (l - T::one()) * x.ln() - c * x - ln_factorial::<T>(order as usize);
    }
    let half = cst::<T>(0.5);
    let cx = c * x;
    let z = cst::<T>(2.0) * (spec.k * cx).sqrt();
    // -c x - K + z = -(sqrt(c x) - sqrt(K))², exact for the scaled Bessel factor
    let gap = cx.sqrt() - spec.k.sqrt();
    let ln_i = ln_bessel_i_scaled(order, z).unwrap_or(T::neg_infinity());
    (l + T::one()) * half * c.ln() + (l - T::one()) * half * (x / spec.k).ln() - gap * gap + ln_i
}

/// Density at `x`, zero for `x <= 0`; the form handed to quadrature.
pub(crate) fn density<T: Real>(spec: &ChannelSpec<T>, x: T) -> T {
    if x > T::zero() {
        ln_density(spec, x).exp()
    } else {
        T::zero()
    }
}

/// Points that split the support into well-conditioned quadrature pieces.
fn breakpoints<T: Real>(spec: &ChannelSpec<T>) -> [T; 3] {
    let m = spec.mean();
    let s = spec.variance().sqrt();
    let four = cst::<T>(4.0);
    [m - four * s, m, m + four * s]
}

fn tail_scale<T: Real>(spec: &ChannelSpec<T>) -> T {
    spec.variance().sqrt().max(spec.decay_rate().recip())
}

/// `∫_lower^∞ g(x) f_γ(x) dx`, split at the bulk of the distribution.
pub fn expectation_above<T, G>(
    spec: &ChannelSpec<T>,
    lower: T,
    g: G,
    cfg: &NumericConfig<T>,
) -> Result<T>
where
    T: Real,
    G: Fn(T) -> T,
{
    let lower = lower.max(T::zero());
    let integrand = |x: T| {
        let d = density(spec, x);
        if d == T::zero() {
            T::zero()
        } else {
            g(x) * d
        }
    };
    let mut total = T::zero();
    let mut from = lower;
    for p in breakpoints(spec) {
        if p > from {
            total = total + integrate_finite(integrand, from, p, cfg)?;
            from = p;
        }
    }
    total = total + integrate_semi_infinite_scaled(integrand, from, tail_scale(spec), cfg)?;
    Ok(total)
}

/// `∫_a^b g(x) f_γ(x) dx` for `0 <= a <= b`, split at the same breakpoints.
pub fn expectation_between<T, G>(
    spec: &ChannelSpec<T>,
    a: T,
    b: T,
    g: G,
    cfg: &NumericConfig<T>,
) -> Result<T>
where
    T: Real,
    G: Fn(T) -> T,
{
    let integrand = |x: T| {
        let d = density(spec, x);
        if d == T::zero() {
            T::zero()
        } else {
            g(x) * d
        }
    };
    let mut total = T::zero();
    let mut from = a.max(T::zero());
    for p in breakpoints(spec) {
        if p > from && p < b {
            total = total + integrate_finite(integrand, from, p, cfg)?;
            from = p;
        }
    }
    if b > from {
        total = total + integrate_finite(integrand, from, b, cfg)?;
    }
    Ok(total)
}

/// `Prob(γ >= threshold)` by quadrature of the density over the tail, to
/// `rel_tol` relative accuracy however small the tail is.
pub fn ccdf_gamma<T: Real>(
    spec: &ChannelSpec<T>,
    threshold: T,
    cfg: &NumericConfig<T>,
) -> Result<T> {
    if !(threshold >= T::zero()) {
        return Err(domain(
            "ccdf_gamma",
            format!("threshold = {threshold} must be >= 0"),
        ));
    }
    if threshold == T::zero() {
        return Ok(T::one());
    }
    // relative accuracy only: the tail feeds `snr / Prob(γ >= λ)`
    let mut relative = *cfg;
    relative.abs_tol = T::zero();
    let v = expectation_above(spec, threshold, |_| T::one(), &relative)?;
    Ok(v.max(T::zero()).min(T::one()))
}

/// `Prob(γ < threshold)` by quadrature over `[0, threshold]`.
pub fn cdf_gamma<T: Real>(
    spec: &ChannelSpec<T>,
    threshold: T,
    cfg: &NumericConfig<T>,
) -> Result<T> {
    if !(threshold >= T::zero()) {
        return Err(domain(
            "cdf_gamma",
            format!("threshold = {threshold} must be >= 0"),
        ));
    }
    let v = expectation_between(spec, T::zero(), threshold, |_| T::one(), cfg)?;
    Ok(v.max(T::zero()).min(T::one()))
}

/// CDF at each point of an ascending slice, accumulated gap by gap.
pub fn cdf_at_sorted<T: Real>(
    spec: &ChannelSpec<T>,
    sorted: &[T],
    cfg: &NumericConfig<T>,
) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(sorted.len());
    let Some(&first) = sorted.first() else {
        return Ok(out);
    };
    let mut acc = cdf_gamma(spec, first.max(T::zero()), cfg)?;
    let mut prev = first.max(T::zero());
    out.push(acc);
    let f = |x: T| density(spec, x);
    for &x in &sorted[1..] {
        if x < prev {
            return Err(domain("cdf_at_sorted", "input must be sorted ascending"));
        }
        if x > prev {
            acc = acc + integrate_finite(f, prev, x, cfg)?;
            prev = x;
        }
        out.push(acc.min(T::one()));
    }
    Ok(out)
}

/// `E[γ] = L Ω`.
pub fn mean_gamma<T: Real>(spec: &ChannelSpec<T>) -> T {
    spec.mean()
}

/// First moment by quadrature of `x f_γ(x)`, for validating the density.
pub fn mean_gamma_quadrature<T: Real>(spec: &ChannelSpec<T>, cfg: &NumericConfig<T>) -> Result<T> {
    expectation_above(spec, T::zero(), |x| x, cfg)
}
