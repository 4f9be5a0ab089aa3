use num_complex::Complex;
use proptest::prelude::*;
use rician_lowsnr::channel::*;
use rician_lowsnr::specfun::{ln_factorial, NumericConfig};
use rician_lowsnr::stats::{ks_critical_value, ks_statistic, RunningStats};

const L_GRID: [u32; 5] = [1, 2, 3, 4, 6];
const K_GRID: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0];
const OMEGA_GRID: [f64; 3] = [0.5, 1.0, 2.0];

fn grid() -> Vec<ChannelSpec<f64>> {
    let mut out = Vec::new();
    for &l in &L_GRID {
        for &k in &K_GRID {
            for &omega in &OMEGA_GRID {
                out.push(ChannelSpec::new(k, l, omega).unwrap());
            }
        }
    }
    out
}

fn spec(k: f64, l: u32, omega: f64) -> ChannelSpec<f64> {
    ChannelSpec::new(k, l, omega).unwrap()
}

/// Poisson(K) mixture of Gamma(L + p, rate c) densities, summed until the
/// terms drop below 1e-18 of the running total.
fn poisson_mixture_pdf(k: f64, l: u32, omega: f64, x: f64) -> f64 {
    let c = (k + l as f64) / (l as f64 * omega);
    let mut sum = 0.0;
    for p in 0..10_000u32 {
        let shape = (l + p) as f64;
        let ln_kp = if p == 0 { 0.0 } else { p as f64 * k.ln() };
        let ln_term =
            -k + ln_kp - ln_factorial::<f64>(p as usize) + shape * c.ln() + (shape - 1.0) * x.ln()
                - c * x
                - ln_factorial::<f64>((l + p - 1) as usize);
        let term = if k == 0.0 && p > 0 {
            0.0
        } else {
            ln_term.exp()
        };
        sum += term;
        if p > 5 && term < 1e-18 * sum {
            break;
        }
    }
    sum
}

fn gamma_density(l: u32, omega: f64, x: f64) -> f64 {
    (-(l as f64) * omega.ln() + (l as f64 - 1.0) * x.ln()
        - x / omega
        - ln_factorial::<f64>(l as usize - 1))
    .exp()
}

#[test]
fn pdf_examples() {
    let rayleigh = spec(0.0, 1, 1.0);
    assert!((pdf_gamma(&rayleigh, 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);

    let s = spec(1.0, 3, 1.0);
    let oracle = poisson_mixture_pdf(1.0, 3, 1.0, 2.0);
    let got = pdf_gamma(&s, 2.0).unwrap();
    assert!(((got - oracle) / oracle).abs() < 1e-12, "{got} vs {oracle}");

    assert!(pdf_gamma(&s, 0.0).is_err());
    assert!(pdf_gamma(&s, -1.0).is_err());
}

#[test]
fn pdf_matches_mixture_oracle_over_grid() {
    for s in grid() {
        for &x in &[1e-3, 0.1, 0.7, 2.0, 5.0, 12.0, 30.0] {
            let oracle = poisson_mixture_pdf(s.k(), s.l(), s.omega(), x);
            if oracle < 1e-280 {
                continue;
            }
            let got = pdf_gamma(&s, x).unwrap();
            assert!(
                ((got - oracle) / oracle).abs() < 1e-11,
                "{s:?} x={x}: {got} vs {oracle}"
            );
        }
    }
}

#[test]
fn zero_k_reduces_to_gamma_density() {
    for &l in &L_GRID {
        for &omega in &OMEGA_GRID {
            let s = spec(0.0, l, omega);
            for i in 1..200 {
                let x = 0.05 * i as f64 * omega;
                let expected = gamma_density(l, omega, x);
                let got = pdf_gamma(&s, x).unwrap();
                assert!(
                    ((got - expected) / expected).abs() <= 1e-10,
                    "L={l} Ω={omega} x={x}"
                );
            }
        }
    }
}

#[test]
fn normalization_and_first_moment_over_grid() {
    let cfg = NumericConfig::default();
    for s in grid() {
        let total = expectation_above(&s, 0.0, |_| 1.0, &cfg).unwrap();
        assert!((total - 1.0).abs() <= 1e-8, "{s:?}: ∫f = {total}");
        let m = mean_gamma_quadrature(&s, &cfg).unwrap();
        let lw = s.l() as f64 * s.omega();
        assert!(((m - lw) / lw).abs() <= 1e-6, "{s:?}: E[γ] = {m}");
        assert_eq!(mean_gamma(&s), lw);
    }
}

#[test]
fn mean_examples() {
    let cfg = NumericConfig::default();
    assert_eq!(mean_gamma(&spec(1.0, 3, 1.0)), 3.0);
    assert_eq!(mean_gamma(&spec(0.0, 1, 2.0)), 2.0);
    let m = mean_gamma_quadrature(&spec(2.0, 2, 0.5), &cfg).unwrap();
    assert!((m - 1.0).abs() < 1e-6);
}

#[test]
fn ccdf_is_complement_of_cdf_over_grid() {
    let cfg = NumericConfig::default();
    for s in grid() {
        assert_eq!(ccdf_gamma(&s, 0.0, &cfg).unwrap(), 1.0);
        let m = s.mean();
        let mut prev = 1.0;
        for &t in &[0.01, 0.3, 0.8, 1.0, 1.5, 3.0] {
            let ccdf = ccdf_gamma(&s, t * m, &cfg).unwrap();
            let cdf = cdf_gamma(&s, t * m, &cfg).unwrap();
            assert!((ccdf - (1.0 - cdf)).abs() <= 1e-8, "{s:?} t={t}");
            assert!(ccdf <= prev && (0.0..=1.0).contains(&ccdf));
            prev = ccdf;
        }
    }
}

#[test]
fn rayleigh_ccdf_is_exponential() {
    let cfg = NumericConfig::default();
    let s = spec(0.0, 1, 1.0);
    for &t in &[0.1, 1.0, 4.0, 10.0, 30.0] {
        let got = ccdf_gamma(&s, t, &cfg).unwrap();
        let expected = (-t).exp();
        assert!(((got - expected) / expected).abs() < 1e-9, "t={t}: {got}");
    }
}

#[test]
fn ccdf_against_monte_carlo() {
    let cfg = NumericConfig::default();
    let s = spec(1.0, 2, 1.0);
    let n = 10_000_000;
    let hits = GainSampler::new(s, RandomStream::new(11, 0))
        .take(n)
        .filter(|g| g.gamma >= 3.0)
        .count();
    let p_hat = hits as f64 / n as f64;
    let p = ccdf_gamma(&s, 3.0, &cfg).unwrap();
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!((p_hat - p).abs() < 4.0 * se, "MC {p_hat} vs {p} (se {se})");
}

#[test]
fn sample_mean_matches_mean_gain() {
    let s = spec(1.0, 3, 1.0);
    let stats: RunningStats = sample_gamma(&s, RandomStream::new(3, 1), 1_000_000)
        .unwrap()
        .into_iter()
        .map(|g| g.gamma)
        .collect();
    assert!((stats.mean() - 3.0).abs() < 5.0 * stats.std_error());
}

#[test]
fn rayleigh_exceedance_probability() {
    let s = spec(0.0, 1, 1.0);
    let n = 1_000_000;
    let hits = sample_gamma(&s, RandomStream::new(5, 0), n)
        .unwrap()
        .iter()
        .filter(|g| g.gamma > 1.0)
        .count();
    let p = (-1.0f64).exp();
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!((hits as f64 / n as f64 - p).abs() < 5.0 * se);
}

#[test]
fn sampling_is_reproducible_per_stream() {
    let s = spec(2.0, 2, 1.0);
    let a = sample_gamma(&s, RandomStream::new(9, 4), 100).unwrap();
    let b = sample_gamma(&s, RandomStream::new(9, 4), 100).unwrap();
    let c = sample_gamma(&s, RandomStream::new(9, 5), 100).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(sample_gamma(&s, RandomStream::new(9, 4), 0).is_err());
}

/// Upper bound on the KS distance using the exact CDF at every `block`-th
/// order statistic; both the model CDF and the ECDF are monotone in between.
fn ks_bound_blocked(sorted: &[f64], cdf_at: &[f64], idx: &[usize]) -> f64 {
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for w in 0..idx.len() - 1 {
        let (a, b) = (idx[w], idx[w + 1]);
        d = d
            .max((b + 1) as f64 / n - cdf_at[w])
            .max(cdf_at[w + 1] - a as f64 / n);
    }
    d
}

#[test]
fn sampler_passes_ks_over_grid() {
    let n = 1_000_000;
    let critical = ks_critical_value(0.01, n);
    let specs = grid();
    let failures: Vec<String> = std::thread::scope(|scope| {
        let handles: Vec<_> = specs
            .chunks(specs.len().div_ceil(8))
            .enumerate()
            .map(|(chunk_id, chunk)| {
                scope.spawn(move || {
                    let cfg = NumericConfig::default();
                    let mut bad = Vec::new();
                    for (j, s) in chunk.iter().enumerate() {
                        let stream = RandomStream::new(2024, (chunk_id * 100 + j) as u64);
                        let mut xs: Vec<f64> = GainSampler::new(*s, stream)
                            .take(n)
                            .map(|g| g.gamma)
                            .collect();
                        xs.sort_by(f64::total_cmp);
                        let mut idx: Vec<usize> = (0..n).step_by(100).collect();
                        idx.push(n - 1);
                        let pts: Vec<f64> = idx.iter().map(|&i| xs[i]).collect();
                        let cdf = cdf_at_sorted(s, &pts, &cfg).unwrap();
                        let d = ks_bound_blocked(&xs, &cdf, &idx);
                        if d >= critical {
                            bad.push(format!("{s:?}: D <= {d:.3e}, critical {critical:.3e}"));
                        }
                    }
                    bad
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().unwrap())
            .collect()
    });
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn full_ks_at_reference_point() {
    let cfg = NumericConfig::default();
    let s = spec(1.0, 3, 1.0);
    let n = 1_000_000;
    let mut xs: Vec<f64> = GainSampler::new(s, RandomStream::new(77, 0))
        .take(n)
        .map(|g| g.gamma)
        .collect();
    xs.sort_by(f64::total_cmp);
    let cdf = cdf_at_sorted(&s, &xs, &cfg).unwrap();
    assert!(ks_statistic(&cdf) < ks_critical_value(0.01, n));
}

#[test]
fn vector_model_mean() {
    let s = spec(1.0, 2, 1.0);
    let mut sampler = ChannelVectorSampler::new(s, RandomStream::new(8, 0));
    let stats: RunningStats = (0..1_000_000)
        .map(|_| {
            sampler
                .next_vector()
                .iter()
                .map(|h| h.norm_sqr())
                .sum::<f64>()
        })
        .collect();
    assert!((stats.mean() - 2.0).abs() < 5.0 * stats.std_error());
}

#[test]
fn vector_model_los_limit() {
    let s = spec(1e6, 3, 2.0);
    let mut sampler = ChannelVectorSampler::new(s, RandomStream::new(8, 1));
    let stats: RunningStats = (0..10_000)
        .map(|_| {
            sampler
                .next_vector()
                .iter()
                .map(|h| h.norm_sqr())
                .sum::<f64>()
        })
        .collect();
    assert!((stats.mean() - 6.0).abs() < 1e-2);
    assert!(stats.variance() < 1e-4);
}

#[test]
fn single_branch_vector_model_matches_density() {
    let cfg = NumericConfig::default();
    let s = spec(1.0, 1, 1.0);
    let n = 200_000;
    let mut sampler = ChannelVectorSampler::new(s, RandomStream::new(21, 0));
    let mut xs: Vec<f64> = (0..n)
        .map(|_| sampler.next_vector()[0].norm_sqr())
        .collect();
    xs.sort_by(f64::total_cmp);
    let cdf = cdf_at_sorted(&s, &xs, &cfg).unwrap();
    assert!(ks_statistic(&cdf) < ks_critical_value(0.01, n));
}

#[test]
fn mrc_examples() {
    let e1 = vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)];
    assert_eq!(mrc_combine(&e1, &e1).unwrap(), Complex::new(1.0, 0.0));
    let h = sample_channel_vector(&spec(1.0, 4, 1.0), RandomStream::new(1, 0));
    let out = mrc_combine(&h, &h).unwrap();
    let norm: f64 = h.iter().map(|v| v.norm_sqr()).sum();
    assert!((out.re - norm).abs() < 1e-12 && out.im.abs() < 1e-12);
    assert!(mrc_combine(&h, &e1).is_err());
}

/// With `y = h x + v`, `v ~ CN(0, I)`, the combined signal is `‖h‖² x` plus
/// noise of variance `‖h‖²`, so the output SNR is `‖h‖² |x|²`.
#[test]
fn mrc_output_snr_identity() {
    use rand_distr::{Distribution, StandardNormal};
    let s = spec(1.0, 3, 1.0);
    let h = sample_channel_vector(&s, RandomStream::new(4, 0));
    let gain: f64 = h.iter().map(|v| v.norm_sqr()).sum();
    let x = Complex::new(0.6, -0.3);
    let mut rng = RandomStream::new(4, 1).rng();
    let noise = (0..100_000)
        .map(|_| {
            let y: Vec<Complex<f64>> = h
                .iter()
                .map(|hi| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    hi * x + Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
                })
                .collect();
            (mrc_combine(&h, &y).unwrap() - gain * x).norm_sqr()
        })
        .collect::<RunningStats>();
    let snr = gain * gain * x.norm_sqr() / noise.mean();
    let expected = gain * x.norm_sqr();
    // noise power estimate has relative standard error sqrt(1/n) ≈ 0.3%
    assert!(
        ((snr - expected) / expected).abs() < 0.015,
        "{snr} vs {expected}"
    );
}

#[test]
fn single_precision_density() {
    let s32 = ChannelSpec::<f32>::new(1.0, 3, 1.0).unwrap();
    let s64 = spec(1.0, 3, 1.0);
    let a = pdf_gamma(&s32, 2.0f32).unwrap() as f64;
    let b = pdf_gamma(&s64, 2.0).unwrap();
    assert!(((a - b) / b).abs() < 1e-5);
}

proptest! {
    #[test]
    fn pdf_positive_and_finite(k in 0.0f64..200.0, l in 1u32..12, omega in 0.05f64..20.0, x in 1e-6f64..500.0) {
        let s = spec(k, l, omega);
        let f = pdf_gamma(&s, x).unwrap();
        prop_assert!(f.is_finite() && f >= 0.0);
        let lf = ln_pdf_gamma(&s, x).unwrap();
        prop_assert!(!lf.is_nan());
    }

    #[test]
    fn pdf_scales_with_omega(k in 0.0f64..20.0, l in 1u32..8, omega in 0.1f64..10.0, x in 0.01f64..10.0) {
        // γ(Ω) has the law of Ω γ(1)
        let a = pdf_gamma(&spec(k, l, omega), x * omega).unwrap() * omega;
        let b = pdf_gamma(&spec(k, l, 1.0), x).unwrap();
        prop_assert!((a - b).abs() <= 1e-11 * b.max(1e-300));
    }
}
