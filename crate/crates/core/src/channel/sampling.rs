//! Random draws of the gain and of the branch vector.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{domain, Error, Result};
use crate::scalar::{cst, Real};

use super::ChannelSpec;

/// Seed plus stream index of a reproducible random sequence.
///
/// The same pair always yields the same sequence; different `stream_id`s under
/// one seed select independent ChaCha20 streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// One realization of the post-combining gain `γ = ‖h‖²`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GainSample<T> {
    pub gamma: T,
}

/// Endless sampler of `γ` following the canonical density exactly.
///
/// `γ = Y / (2c)` with `Y ~ χ'²(2L, 2K)`, the noncentrality placed on the first
/// of the `2L` Gaussian coordinates.
#[derive(Debug, Clone)]
pub struct GainSampler<T> {
    spec: ChannelSpec<T>,
    shift: f64,
    scale: f64,
    rng: ChaCha20Rng,
}

impl<T: Real> GainSampler<T> {
    pub fn new(spec: ChannelSpec<T>, stream: RandomStream) -> Self {
        let k = spec.k().to_f64().unwrap_or(0.0);
        let c = spec.decay_rate().to_f64().unwrap_or(1.0);
        Self {
            spec,
            shift: (2.0 * k).sqrt(),
            scale: 0.5 / c,
            rng: stream.rng(),
        }
    }

    pub fn spec(&self) -> &ChannelSpec<T> {
        &self.spec
    }

    pub fn next_gain(&mut self) -> T {
        let z: f64 = StandardNormal.sample(&mut self.rng);
        let mut y = (z + self.shift) * (z + self.shift);
        for _ in 1..2 * self.spec.l() {
            let z: f64 = StandardNormal.sample(&mut self.rng);
            y += z * z;
        }
        cst(self.scale * y)
    }
}

impl<T: Real> Iterator for GainSampler<T> {
    type Item = GainSample<T>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(GainSample {
            gamma: self.next_gain(),
        })
    }
}

/// `n` independent draws of `γ` from `stream`.
pub fn sample_gamma<T: Real>(
    spec: &ChannelSpec<T>,
    stream: RandomStream,
    n: usize,
) -> Result<Vec<GainSample<T>>> {
    if n == 0 {
        return Err(domain("sample_gamma", "sample count must be >= 1"));
    }
    Ok(GainSampler::new(*spec, stream).take(n).collect())
}

/// Sampler of the branch vector
/// `h = sqrt(Ω) · (sqrt(K/(1+K)) h̄ + sqrt(1/(1+K)) h_w)`, `h̄ = (1, …, 1)`,
/// `h_w ~ CN(0, I_L)`.
#[derive(Debug, Clone)]
pub struct ChannelVectorSampler<T> {
    spec: ChannelSpec<T>,
    los: f64,
    diffuse: f64,
    rng: ChaCha20Rng,
}

impl<T: Real> ChannelVectorSampler<T> {
    pub fn new(spec: ChannelSpec<T>, stream: RandomStream) -> Self {
        let k = spec.k().to_f64().unwrap_or(0.0);
        let omega = spec.omega().to_f64().unwrap_or(1.0);
        Self {
            spec,
            los: (omega * k / (1.0 + k)).sqrt(),
            diffuse: (omega / (1.0 + k) / 2.0).sqrt(),
            rng: stream.rng(),
        }
    }

    pub fn next_vector(&mut self) -> Vec<Complex<T>> {
        (0..self.spec.l())
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut self.rng);
                let im: f64 = StandardNormal.sample(&mut self.rng);
                Complex::new(cst(self.los + self.diffuse * re), cst(self.diffuse * im))
            })
            .collect()
    }
}

/// One draw of the branch vector; `E[‖h‖²] = L Ω`.
pub fn sample_channel_vector<T: Real>(
    spec: &ChannelSpec<T>,
    stream: RandomStream,
) -> Vec<Complex<T>> {
    ChannelVectorSampler::new(*spec, stream).next_vector()
}

/// Maximum ratio combining `hᴴ y`.
pub fn mrc_combine<T: Real>(h: &[Complex<T>], y: &[Complex<T>]) -> Result<Complex<T>> {
    if h.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: h.len(),
            right: y.len(),
        });
    }
    Ok(h.iter()
        .zip(y)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (hi, yi)| {
            acc + hi.conj() * yi
        }))
}
