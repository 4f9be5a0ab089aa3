use proptest::prelude::*;
use rician_lowsnr::channel::{ccdf_gamma, ChannelSpec, RandomStream};
use rician_lowsnr::exact::capacity_exact;
use rician_lowsnr::onoff::*;
use rician_lowsnr::specfun::{upper_gamma_regularized, NumericConfig};
use rician_lowsnr::Error;

fn spec(k: f64, l: u32, omega: f64) -> ChannelSpec<f64> {
    ChannelSpec::new(k, l, omega).unwrap()
}

fn exact_policy(s: &ChannelSpec<f64>, snr: f64) -> OnOffPolicy<f64> {
    build_policy(
        s,
        snr,
        ThresholdSource::ExactLambda,
        &NumericConfig::default(),
    )
    .unwrap()
}

const SPECS: [(f64, u32, f64); 5] = [
    (1.0, 3, 1.0),
    (2.0, 2, 1.0),
    (0.0, 1, 1.0),
    (1.0, 4, 1.0),
    (5.0, 6, 0.5),
];

#[test]
fn average_power_identity() {
    let cfg = NumericConfig::default();
    for &(k, l, omega) in &SPECS {
        let s = spec(k, l, omega);
        for &snr in &[1e-5, 1e-3, 1e-2, 0.2] {
            let p = exact_policy(&s, snr);
            let ccdf = ccdf_gamma(&s, p.threshold, &cfg).unwrap();
            assert!((p.on_power * ccdf / snr - 1.0).abs() <= 1e-9);
            assert!((p.average_power() / snr - 1.0).abs() <= 1e-12);
            assert!(p.on_power > snr);
        }
    }
}

#[test]
fn threshold_and_on_power_decrease_with_snr() {
    let s = spec(1.0, 3, 1.0);
    let p = [1e-2, 1e-3, 1e-4].map(|x| exact_policy(&s, x));
    assert!(p[0].threshold < p[1].threshold && p[1].threshold < p[2].threshold);
    assert!(p[0].on_power > p[1].on_power && p[1].on_power > p[2].on_power);
}

#[test]
fn rayleigh_on_power_is_exponential() {
    let p = exact_policy(&spec(0.0, 1, 1.0), 1e-3);
    let expected = 1e-3 * p.threshold.exp();
    assert!((p.on_power / expected - 1.0).abs() < 1e-9);
    let bound = rate_lower_bound(&p);
    let closed = (p.threshold * expected).ln_1p() * (-p.threshold).exp();
    assert!((bound / closed - 1.0).abs() < 1e-9);
}

#[test]
fn asymptotic_threshold_source() {
    let cfg = NumericConfig::default();
    let s = spec(1.0, 3, 1.0);
    let p = build_policy(&s, 1e-3, ThresholdSource::AsymptoticLambda, &cfg).unwrap();
    assert!((p.average_power() / 1e-3 - 1.0).abs() < 1e-12);
    assert!(matches!(
        build_policy(&s, 0.5, ThresholdSource::AsymptoticLambda, &cfg),
        Err(Error::Validity { .. })
    ));
    assert!(build_policy(&s, 0.0, ThresholdSource::ExactLambda, &cfg).is_err());
}

#[test]
fn feedback_bit_examples() {
    let p = exact_policy(&spec(1.0, 3, 1.0), 1e-2);
    assert!(feedback_bit(p.threshold, &p));
    assert!(!feedback_bit(0.0, &p));
    assert!(feedback_bit(2.0 * p.threshold, &p));
}

#[test]
fn rate_dominance() {
    let cfg = NumericConfig::default();
    for &(k, l, omega) in &SPECS {
        let s = spec(k, l, omega);
        for &snr in &[1e-5, 1e-3, 1e-2, 0.2, 1.0] {
            let p = exact_policy(&s, snr);
            let r = rate(&s, &p, &cfg).unwrap();
            let c = capacity_exact(&s, snr, &cfg).unwrap().capacity_nats;
            let lb = rate_lower_bound(&p);
            assert!(lb <= r && r <= c, "{s:?} snr={snr}: {lb} {r} {c}");
        }
    }
}

#[test]
fn lower_bound_identity() {
    let p = exact_policy(&spec(1.0, 3, 1.0), 1e-2);
    let expected = (p.threshold * p.on_power).ln_1p() * p.active_probability;
    assert_eq!(rate_lower_bound(&p), expected);
}

#[test]
fn lower_bound_tracks_threshold_times_snr() {
    let s = spec(1.0, 3, 1.0);
    let gaps = [1e-2, 1e-3, 1e-4, 1e-6].map(|x| {
        let p = exact_policy(&s, x);
        (rate_lower_bound(&p) / (p.threshold * x) - 1.0).abs()
    });
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn onoff_approaches_capacity() {
    let cfg = NumericConfig::default();
    for &(k, l, omega) in &[(1.0, 3, 1.0), (2.0, 2, 1.0)] {
        let s = spec(k, l, omega);
        let ratios = [1e-2, 1e-3, 1e-4].map(|x| {
            let p = exact_policy(&s, x);
            rate(&s, &p, &cfg).unwrap() / capacity_exact(&s, x, &cfg).unwrap().capacity_nats
        });
        assert!(
            ratios[0] < ratios[1] && ratios[1] < ratios[2] && ratios[2] <= 1.0,
            "{ratios:?}"
        );
        assert!(ratios[2] >= 0.8);
    }
}

#[test]
fn simulated_throughput_matches_quadrature() {
    let cfg = NumericConfig::default();
    let s = spec(1.0, 3, 1.0);
    let p = exact_policy(&s, 1e-2);
    let est = simulate_throughput(&s, &p, RandomStream::new(42, 0), 1_000_000).unwrap();
    let r = rate(&s, &p, &cfg).unwrap();
    assert!(
        (est.rate_estimate - r).abs() < 4.0 * est.stderr,
        "{} vs {r}",
        est.rate_estimate
    );
    let se = est.active_fraction_stderr();
    assert!((est.active_fraction - p.active_probability).abs() < 4.0 * se);
    let power = p.on_power * est.active_fraction;
    assert!((power - 1e-2).abs() < 4.0 * p.on_power * se);
}

#[test]
fn simulated_throughput_against_ten_million_slots() {
    let cfg = NumericConfig::default();
    let s = spec(2.0, 2, 1.0);
    let p = exact_policy(&s, 1e-3);
    let shards: Vec<ThroughputEstimate> = (0..10)
        .map(|i| simulate_throughput(&s, &p, RandomStream::new(7, i), 1_000_000).unwrap())
        .collect();
    let merged = shards[1..].iter().fold(shards[0], |a, b| a.merge(b));
    assert_eq!(merged.slots, 10_000_000);
    let r = rate(&s, &p, &cfg).unwrap();
    assert!((merged.rate_estimate - r).abs() < 4.0 * merged.stderr);
}

#[test]
fn simulation_is_deterministic_and_checks_slot_count() {
    let s = spec(1.0, 3, 1.0);
    let p = exact_policy(&s, 1e-2);
    let a = simulate_throughput(&s, &p, RandomStream::new(1, 2), 20_000).unwrap();
    let b = simulate_throughput(&s, &p, RandomStream::new(1, 2), 20_000).unwrap();
    assert_eq!(a, b);
    assert!(
        simulate_throughput(&s, &p, RandomStream::new(1, 2), MIN_SIMULATION_SLOTS - 1).is_err()
    );
}

#[test]
fn approximation_chain_examples() {
    let cfg = NumericConfig::default();
    let rayleigh = spec(0.0, 1, 1.0);
    for &t in &[0.5, 2.0, 9.0] {
        let chain = ccdf_approx_chain(&rayleigh, t).unwrap();
        assert!((chain.gamma_form - (-t).exp()).abs() < 1e-15);
        assert!((chain.gamma_form / ccdf_gamma(&rayleigh, t, &cfg).unwrap() - 1.0).abs() < 1e-9);
        assert!((chain.rayleigh_form - chain.gamma_form).abs() < 1e-15);
    }

    let s = spec(1.0, 3, 1.0);
    let gaps = [10.0, 20.0, 40.0].map(|t| {
        let chain = ccdf_approx_chain(&s, t).unwrap();
        let arg = 2.0 * t / 3.0;
        assert!(
            (chain.gamma_form - upper_gamma_regularized(3, arg).unwrap()).abs()
                <= 1e-15 * chain.gamma_form
        );
        (chain.tail_form / chain.gamma_form - 1.0).abs()
    });
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    assert!(ccdf_approx_chain(&s, 0.0).is_err());
}

/// With line of sight the gamma form decays at rate `(K+1)/(LΩ)`, slower than
/// the true tail's `c = (K+L)/(LΩ)` when `L > 1`, so it overshoots by a growing
/// factor. Without line of sight the Rayleigh form is the exact tail for any `L`.
#[test]
fn gamma_form_ratio_depends_on_line_of_sight() {
    let cfg = NumericConfig::default();
    let s = spec(1.0, 2, 1.0);
    let ratios = [5.0, 10.0, 20.0]
        .map(|t| ccdf_approx_chain(&s, t).unwrap().gamma_form / ccdf_gamma(&s, t, &cfg).unwrap());
    assert!(
        ratios[0] < ratios[1] && ratios[1] < ratios[2] && ratios[2] > 10.0,
        "{ratios:?}"
    );

    let s = spec(0.0, 3, 1.5);
    for &t in &[5.0, 10.0, 20.0] {
        let ratio =
            ccdf_gamma(&s, t, &cfg).unwrap() / ccdf_approx_chain(&s, t).unwrap().rayleigh_form;
        assert!((ratio - 1.0).abs() < 1e-9);
    }
}

#[test]
fn vanishing_ratio_examples() {
    let s = spec(1.0, 3, 1.0);
    let v = [10.0, 20.0, 40.0].map(|t| vanishing_ratio(&s, t).unwrap());
    assert!(v[2] < v[1] && v[1] < v[0]);
    for &t in &[0.5, 3.0, 17.0] {
        assert!((vanishing_ratio(&spec(0.0, 1, 1.0), t).unwrap() - 1.0 / t).abs() < 1e-15);
    }
    assert!(vanishing_ratio(&s, -1.0).is_err());
}

/// `λ · snr / Prob(γ >= λ)` at the exact water level against the closed form.
/// Without line of sight the quotient tends to one.
#[test]
fn vanishing_ratio_consistency_rayleigh() {
    let s = spec(0.0, 1, 1.0);
    let gaps = [1e-2, 1e-4, 1e-8, 1e-16].map(|x| {
        let p = exact_policy(&s, x);
        let observed = p.threshold * x / p.active_probability;
        (observed / vanishing_ratio(&s, p.threshold).unwrap() - 1.0).abs()
    });
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[3] < 0.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn power_feasibility(k in 0.0f64..10.0, l in 1u32..7, omega in 0.2f64..5.0, a in -6.0f64..0.0) {
        let s = spec(k, l, omega);
        let snr = 10f64.powf(a);
        let p = exact_policy(&s, snr);
        prop_assert!((p.average_power() / snr - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn rate_between_bound_and_capacity(k in 0.0f64..10.0, l in 1u32..7, omega in 0.2f64..5.0, a in -6.0f64..0.0) {
        let cfg = NumericConfig::default();
        let s = spec(k, l, omega);
        let snr = 10f64.powf(a);
        let p = exact_policy(&s, snr);
        let r = rate(&s, &p, &cfg).unwrap();
        let c = capacity_exact(&s, snr, &cfg).unwrap().capacity_nats;
        prop_assert!(rate_lower_bound(&p) <= r * (1.0 + 1e-12));
        prop_assert!(r <= c * (1.0 + 1e-9));
    }
}
