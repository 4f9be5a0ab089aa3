//! On-off power control driven by a single feedback bit per fading block.
//!
//! The transmitter is silent when `γ < λ` and sends at
//! `SNR / Prob(γ >= λ)` otherwise, so the average power is exactly `SNR`.

use crate::asymptotics::lambda_asymptotic;
use crate::channel::{ccdf_gamma, expectation_above, ChannelSpec, GainSampler, RandomStream};
use crate::error::{domain, Error, Result};
use crate::exact::solve_lambda;
use crate::scalar::{cst, to_f64, Real};
use crate::specfun::{factorial, upper_gamma_regularized, NumericConfig};
use crate::stats::{binomial_std_error, RunningStats};

/// Where the on-off threshold comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThresholdSource {
    /// Exact water-filling level.
    ExactLambda,
    /// Refined asymptotic water level (subject to its validity range).
    AsymptoticLambda,
}

/// Threshold policy `P(γ) = on_power · 1[γ >= threshold]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnOffPolicy<T> {
    pub threshold: T,
    pub on_power: T,
    pub snr: T,
    /// `Prob(γ >= threshold)`, by quadrature.
    pub active_probability: T,
}

impl<T: Real> OnOffPolicy<T> {
    /// Average transmit power `on_power · Prob(γ >= threshold)`.
    pub fn average_power(&self) -> T {
        self.on_power * self.active_probability
    }
}

const MIN_ACTIVE_PROBABILITY: f64 = 1e-300;

pub fn build_policy<T: Real>(
    spec: &ChannelSpec<T>,
    snr: T,
    source: ThresholdSource,
    cfg: &NumericConfig<T>,
) -> Result<OnOffPolicy<T>> {
    if !(snr > T::zero()) || !snr.is_finite() {
        return Err(domain(
            "build_policy",
            format!("snr = {snr} must be finite and > 0"),
        ));
    }
    let threshold = match source {
        ThresholdSource::ExactLambda => solve_lambda(spec, snr, cfg)?,
        ThresholdSource::AsymptoticLambda => lambda_asymptotic(spec, snr, true)?,
    };
    if !(threshold > T::zero()) {
        return Err(domain(
            "build_policy",
            format!("threshold {threshold} must be > 0"),
        ));
    }
    let p = ccdf_gamma(spec, threshold, cfg)?;
    if !(p > cst(MIN_ACTIVE_PROBABILITY)) {
        return Err(Error::Underflow {
            context: "build_policy: Prob(γ >= threshold)",
            value: to_f64(p),
        });
    }
    Ok(OnOffPolicy {
        threshold,
        on_power: snr / p,
        snr,
        active_probability: p,
    })
}

/// The feedback bit: `true` (transmit) iff `gamma >= threshold`.
pub fn feedback_bit<T: Real>(gamma: T, policy: &OnOffPolicy<T>) -> bool {
    gamma >= policy.threshold
}

/// `R = ∫_threshold^∞ ln(1 + on_power · t) f_γ(t) dt`.
pub fn rate<T: Real>(
    spec: &ChannelSpec<T>,
    policy: &OnOffPolicy<T>,
    cfg: &NumericConfig<T>,
) -> Result<T> {
    let mut scaled = *cfg;
    scaled.abs_tol = cfg.abs_tol.min(cfg.rel_tol * policy.snr * cst(0.01));
    let p = policy.on_power;
    expectation_above(spec, policy.threshold, |t| (p * t).ln_1p(), &scaled)
}

/// `ln(1 + threshold · on_power) · Prob(γ >= threshold)`, a lower bound on [`rate`].
pub fn rate_lower_bound<T: Real>(policy: &OnOffPolicy<T>) -> T {
    (policy.threshold * policy.on_power).ln_1p() * policy.active_probability
}

/// Successive approximations of `Prob(γ >= λ)` used to argue optimality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailApproximations<T> {
    /// Line-of-sight term dropped: `Prob(‖h_w‖² >= (1+K) λ / Ω)` for the
    /// diffuse part of the branch vector, i.e. `Q(L, (1+K) λ / Ω)`.
    pub rayleigh_form: T,
    /// `Γ(L, (K+1) λ / (LΩ)) / (L-1)!`.
    pub gamma_form: T,
    /// `((K+1) λ / (LΩ))^(L-1) e^(-(K+1) λ/(LΩ)) / (L-1)!`.
    pub tail_form: T,
}

pub fn ccdf_approx_chain<T: Real>(
    spec: &ChannelSpec<T>,
    threshold: T,
) -> Result<TailApproximations<T>> {
    if !(threshold > T::zero()) {
        return Err(domain(
            "ccdf_approx_chain",
            format!("threshold = {threshold} must be > 0"),
        ));
    }
    let kp1 = spec.k() + T::one();
    let rayleigh_form = upper_gamma_regularized(spec.l(), kp1 * threshold / spec.omega())?;
    let arg = kp1 * threshold / spec.mean();
    let gamma_form = upper_gamma_regularized(spec.l(), arg)?;
    let l_minus_1 = spec.l() as usize - 1;
    let tail_form = ((spec.l_real() - T::one()) * arg.ln() - arg).exp() / factorial::<T>(l_minus_1);
    Ok(TailApproximations {
        rayleigh_form,
        gamma_form,
        tail_form,
    })
}

/// `e^(-K) (LΩ/(K+1)) ((K+L)/(K+1))^(L-2) e^(-(L-1)λ/(LΩ)) / λ`, the
/// asymptotic value of `λ · SNR / Prob(γ >= λ)`; tends to zero as `λ → ∞`.
pub fn vanishing_ratio<T: Real>(spec: &ChannelSpec<T>, threshold: T) -> Result<T> {
    if !(threshold > T::zero()) {
        return Err(domain(
            "vanishing_ratio",
            format!("threshold = {threshold} must be > 0"),
        ));
    }
    let k = spec.k();
    let l = spec.l_real();
    let kp1 = k + T::one();
    let ln_v = -k + (spec.mean() / kp1).ln() + (l - cst(2.0)) * ((k + l) / kp1).ln()
        - (l - T::one()) * threshold / spec.mean()
        - threshold.ln();
    Ok(ln_v.exp())
}

/// Result of a slot-by-slot simulation of the on-off scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputEstimate {
    pub rate_estimate: f64,
    pub active_fraction: f64,
    /// Standard error of `rate_estimate`.
    pub stderr: f64,
    pub slots: u64,
    rate_stats: RunningStats,
    active: u64,
}

impl ThroughputEstimate {
    fn from_parts(rate_stats: RunningStats, active: u64) -> Self {
        let slots = rate_stats.count();
        Self {
            rate_estimate: rate_stats.mean(),
            active_fraction: active as f64 / slots as f64,
            stderr: rate_stats.std_error(),
            slots,
            rate_stats,
            active,
        }
    }

    /// Count-weighted merge of two shards.
    pub fn merge(&self, other: &Self) -> Self {
        Self::from_parts(
            self.rate_stats.merge(&other.rate_stats),
            self.active + other.active,
        )
    }

    /// Binomial standard error of `active_fraction`.
    pub fn active_fraction_stderr(&self) -> f64 {
        binomial_std_error(self.active_fraction, self.slots as usize)
    }
}

pub const MIN_SIMULATION_SLOTS: usize = 10_000;

/// Monte Carlo estimate of the on-off rate over `n_slots` fading blocks.
pub fn simulate_throughput<T: Real>(
    spec: &ChannelSpec<T>,
    policy: &OnOffPolicy<T>,
    stream: RandomStream,
    n_slots: usize,
) -> Result<ThroughputEstimate> {
    if n_slots < MIN_SIMULATION_SLOTS {
        return Err(domain(
            "simulate_throughput",
            format!("n_slots = {n_slots} must be >= {MIN_SIMULATION_SLOTS}"),
        ));
    }
    let mut sampler = GainSampler::new(*spec, stream);
    let on_power = to_f64(policy.on_power);
    let mut stats = RunningStats::new();
    let mut active = 0u64;
    for _ in 0..n_slots {
        let gamma = sampler.next_gain();
        if feedback_bit(gamma, policy) {
            active += 1;
            stats.push((on_power * to_f64(gamma)).ln_1p());
        } else {
            stats.push(0.0);
        }
    }
    Ok(ThroughputEstimate::from_parts(stats, active))
}
