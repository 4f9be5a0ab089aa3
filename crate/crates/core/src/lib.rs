//! Ergodic capacity of an `L`-branch maximum-ratio-combining Rician fading
//! channel with channel state information at both ends, in the low-SNR regime.
//!
//! * [`specfun`]: scaled Bessel `I_n`, both real Lambert W branches, integer
//!   incomplete gamma, adaptive quadrature and monotone root finding.
//! * [`channel`]: the density of the combined gain, its tail, moments and
//!   samplers.
//! * [`exact`]: water-filling power, the power-constraint function `G(λ)`,
//!   its inversion and the capacity integral.
//! * [`asymptotics`]: Lambert-W and logarithmic low-SNR forms, AWGN limit,
//!   energy efficiency and leading-order series.
//! * [`onoff`]: the on-off (one feedback bit) power control scheme.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

// `!(x > 0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod channel;
mod error;
pub mod exact;
pub mod onoff;
mod scalar;
pub mod specfun;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Real;

pub use asymptotics::{AsymptoticForm, EnergyMode, Regime};
pub use channel::{ChannelSpec, GainSample, RandomStream};
pub use exact::{Method, WaterfillSolution};
pub use onoff::{OnOffPolicy, ThresholdSource};
pub use specfun::NumericConfig;

pub type ChannelSpec64 = ChannelSpec<f64>;
pub type ChannelSpec32 = ChannelSpec<f32>;
pub type NumericConfig64 = NumericConfig<f64>;
pub type NumericConfig32 = NumericConfig<f32>;
pub type WaterfillSolution64 = WaterfillSolution<f64>;
pub type OnOffPolicy64 = OnOffPolicy<f64>;
pub type AsymptoticForm64 = AsymptoticForm<f64>;
