//! Photon statistics cross-checked between operator moments and the
//! cavity number distribution.

use approx::assert_relative_eq;
use cascade_qed::model::{build_liouvillian_spec, ModelParams, Variant};
use cascade_qed::observables::{
    cavity_state, g2_from_distribution, gn_zero, mean_photon, photon_probabilities,
    photon_statistics, ratio_r21, truncation_fidelity,
};
use cascade_qed::solvers::steady_state;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

#[test]
fn fock_state_correlations() {
    let mut p = ModelParams::new(Variant::CascadedTc);
    p.n_max = 5;
    let lay = p.layout().unwrap();
    for n in 1..=4usize {
        let mut coeffs = vec![C64::new(0.0, 0.0); 6];
        coeffs[n] = C64::new(1.0, 0.0);
        let rho = cavity_state(&lay, &coeffs).unwrap();
        assert_relative_eq!(mean_photon(&lay, &rho).unwrap(), n as f64, epsilon = 1e-12);
        // g2 = <n(n-1)>/<n>^2 = (n-1)/n for a Fock state
        let g2 = gn_zero(&lay, &rho, 2).unwrap().unwrap();
        assert_relative_eq!(g2, (n as f64 - 1.0) / n as f64, epsilon = 1e-12);
    }
}

#[test]
fn coherent_state_is_poissonian() {
    let mut p = ModelParams::new(Variant::CascadedTc);
    p.n_max = 10;
    let lay = p.layout().unwrap();
    let alpha_sq = 0.5f64;
    let coeffs: Vec<C64> = (0..=10)
        .map(|n| {
            let log_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
            let amp = (-alpha_sq / 2.0 + 0.5 * n as f64 * alpha_sq.ln() - 0.5 * log_fact).exp();
            C64::new(amp, 0.0)
        })
        .collect();
    let rho = cavity_state(&lay, &coeffs).unwrap();
    let stats = photon_statistics(&lay, &rho).unwrap();
    assert_relative_eq!(stats.n_a, alpha_sq, max_relative = 1e-3);
    assert_relative_eq!(stats.g2.unwrap(), 1.0, max_relative = 1e-3);
    assert_relative_eq!(stats.g3.unwrap(), 1.0, max_relative = 1e-3);
    // Poisson ratio P2/P1 = |alpha|^2/2
    assert_relative_eq!(stats.r21.unwrap(), 0.25, max_relative = 1e-3);
}

#[test]
fn vacuum_statistics_are_all_undefined_or_trivial() {
    let mut p = ModelParams::new(Variant::CascadedJc);
    p.n_max = 4;
    let lay = p.layout().unwrap();
    let mut coeffs = vec![C64::new(0.0, 0.0); 5];
    coeffs[0] = C64::new(1.0, 0.0);
    let rho = cavity_state(&lay, &coeffs).unwrap();
    let stats = photon_statistics(&lay, &rho).unwrap();
    assert_eq!(stats.n_a, 0.0);
    assert!(stats.g2.is_none());
    assert!(stats.g3.is_none());
    assert!(stats.r21.is_none());
    assert_relative_eq!(stats.p_n[0], 1.0, epsilon = 1e-12);
    assert_relative_eq!(stats.f_k[0], 1.0, epsilon = 1e-12);
}

#[test]
fn fidelities_are_cumulative_and_bounded() {
    let p = ModelParams::new(Variant::CascadedTc);
    let lay = p.layout().unwrap();
    let spec = build_liouvillian_spec(&p).unwrap();
    let rho = steady_state(&spec).unwrap().rho;
    let probs = photon_probabilities(&lay, &rho).unwrap();
    let mut acc = 0.0;
    for (k, pk) in probs.iter().enumerate() {
        acc += pk;
        assert_relative_eq!(
            truncation_fidelity(&lay, &rho, k).unwrap(),
            acc,
            epsilon = 1e-12
        );
    }
    assert_relative_eq!(acc, 1.0, epsilon = 1e-8);
    assert!(truncation_fidelity(&lay, &rho, 11).is_err());
}

/// Steady-state statistics satisfy the moment/distribution identity and
/// the r21 bookkeeping.
#[test]
fn steady_state_statistics_are_internally_consistent() {
    let mut p = ModelParams::new(Variant::CascadedTc);
    p.n_max = 8;
    let lay = p.layout().unwrap();
    let spec = build_liouvillian_spec(&p).unwrap();
    let rho = steady_state(&spec).unwrap().rho;
    let stats = photon_statistics(&lay, &rho).unwrap();

    let from_moments = stats.g2.unwrap();
    let from_dist = g2_from_distribution(&stats.p_n).unwrap();
    assert_relative_eq!(from_moments, from_dist, epsilon = 1e-10);

    let n_from_dist: f64 = stats.p_n.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    assert_relative_eq!(stats.n_a, n_from_dist, epsilon = 1e-8);

    let r21 = ratio_r21(&lay, &rho).unwrap().unwrap();
    assert_relative_eq!(r21, stats.p_n[2] / stats.p_n[1], epsilon = 1e-12);

    // n_a exceeds P1 + 2 P2 + 3 P3 by exactly the n >= 4 tail, which is
    // tiny at this operating point
    let approx_n = stats.p_n[1] + 2.0 * stats.p_n[2] + 3.0 * stats.p_n[3];
    let tail = stats.n_a - approx_n;
    assert!(tail >= -1e-12, "truncated sum exceeded the full moment");
    assert!(tail < 1e-4, "n >= 4 tail unexpectedly large: {tail:.3e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// For any cavity superposition, g2 from operator moments equals
    /// g2 from the number distribution.
    #[test]
    fn moment_distribution_equivalence(raw in proptest::collection::vec((0.01f64..1.0, -1.0f64..1.0), 5)) {
        let mut p = ModelParams::new(Variant::CascadedJc);
        p.n_max = 4;
        let lay = p.layout().unwrap();
        let norm: f64 = raw.iter().map(|(re, im)| re * re + im * im).sum::<f64>().sqrt();
        let coeffs: Vec<C64> = raw.iter().map(|&(re, im)| C64::new(re / norm, im / norm)).collect();
        let rho = cavity_state(&lay, &coeffs).unwrap();
        let g2_m = gn_zero(&lay, &rho, 2).unwrap().unwrap();
        let probs = photon_probabilities(&lay, &rho).unwrap();
        let g2_d = g2_from_distribution(&probs).unwrap();
        prop_assert!((g2_m - g2_d).abs() < 1e-10);
    }

    /// Mixing two cavity states keeps the distribution normalized and the
    /// fidelities monotone.
    #[test]
    fn mixtures_stay_normalized(w in 0.05f64..0.95) {
        let mut p = ModelParams::new(Variant::CascadedJc);
        p.n_max = 4;
        let lay = p.layout().unwrap();
        let mut c1 = vec![C64::new(0.0, 0.0); 5];
        c1[1] = C64::new(1.0, 0.0);
        let mut c2 = vec![C64::new(0.0, 0.0); 5];
        c2[0] = C64::new(0.6, 0.0);
        c2[3] = C64::new(0.8, 0.0);
        let rho = cavity_state(&lay, &c1).unwrap() * w
            + cavity_state(&lay, &c2).unwrap() * (1.0 - w);
        let stats = photon_statistics(&lay, &rho).unwrap();
        let total: f64 = stats.p_n.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        for pair in stats.f_k.windows(2) {
            prop_assert!(pair[1] >= pair[0] - 1e-12);
        }
        prop_assert!((stats.f_k[stats.f_k.len() - 1] - 1.0).abs() < 1e-8);
    }
}
