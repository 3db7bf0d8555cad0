mod common;

use common::erfc_quad;
use proptest::prelude::*;
use qdeconv::analysis::{
    discretize_kernel, invariant_by_iteration, kernel_symmetry_defects, one_state_asymptotic_ber,
    one_state_invariant, one_state_transitions, qbar, two_state_asymptotic_ber,
    two_state_kernel_cdf, two_state_kernel_marginals, GridOptions, KernelAtoms, Start,
};
use qdeconv::channel::{ChannelParams, InputStream, NoiseStream};
use qdeconv::decoders::TwoStateDecoder;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

#[test]
fn one_state_up_probability_at_unit_noise() {
    let chain = one_state_transitions(1.0, 30).unwrap();
    let expected = 0.25 * erfc_quad(0.5 / SQRT_2);
    assert!((chain.p_up(0) - expected).abs() < 1e-13);
    assert!((chain.p_up(0) - 0.15426).abs() < 1e-5);
}

#[test]
fn one_state_transitions_follow_gaussian_tails() {
    for sigma in [0.5, 1.0, 2.0] {
        let chain = one_state_transitions(sigma, 10).unwrap();
        for d in -10i64..=10 {
            let up = 0.25 * erfc_quad((d as f64 + 0.5) / (SQRT_2 * sigma));
            let down = 0.5 - 0.25 * erfc_quad((d as f64 - 0.5) / (SQRT_2 * sigma));
            assert!((chain.p_up(d) - up).abs() < 1e-13, "sigma {sigma} d {d}");
            assert!(
                (chain.p_down(d) - down).abs() < 1e-13,
                "sigma {sigma} d {d}"
            );
        }
    }
}

#[test]
fn one_state_fixed_point_residual() {
    for sigma in [0.5, 1.0, 2.0] {
        let chain = one_state_invariant(one_state_transitions(sigma, 30).unwrap()).unwrap();
        let phi = chain.phi().unwrap();
        let next = chain.apply(phi);
        let l1: f64 = phi.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        assert!(l1 < 1e-10, "sigma {sigma}: residual {l1}");
        assert!((phi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn one_state_truncation_stable() {
    let a = one_state_asymptotic_ber(
        &one_state_invariant(one_state_transitions(1.0, 30).unwrap()).unwrap(),
    )
    .unwrap();
    let b = one_state_asymptotic_ber(
        &one_state_invariant(one_state_transitions(1.0, 60).unwrap()).unwrap(),
    )
    .unwrap();
    assert!((a - b).abs() < 1e-10);
    let tiny = one_state_asymptotic_ber(
        &one_state_invariant(one_state_transitions(0.05, 30).unwrap()).unwrap(),
    )
    .unwrap();
    assert!(tiny < 1e-10);
}

#[test]
fn kernel_examples() {
    let up = two_state_kernel_cdf(0.5, 0, 1.0, 1, 1.0).unwrap();
    assert!((up - 0.25 * erfc_quad(1.0 / SQRT_2)).abs() < 1e-13);
    for sigma in [0.5, 1.0, 2.0] {
        for d in -3i64..=3 {
            let (u, _) = two_state_kernel_marginals(0.5, d, sigma).unwrap();
            let expected = 0.25 * erfc_quad((d as f64 + 1.0) / (sigma * SQRT_2));
            assert!((u - expected).abs() < 1e-13);
        }
    }
}

#[test]
fn qbar_examples() {
    for sigma in [0.5, 1.0, 2.0] {
        let half = qbar(0.5, 0, sigma).unwrap();
        let expected = 0.25 * erfc_quad(1.0 / (SQRT_2 * sigma)) + 0.25;
        assert!((half - expected).abs() < 1e-13, "sigma {sigma}");
        for d in -4i64..=4 {
            let at_one = qbar(1.0, d, sigma).unwrap();
            let q = 0.25 * erfc_quad((d as f64 + 0.5) / (SQRT_2 * sigma)) + 0.5
                - 0.25 * erfc_quad((d as f64 - 0.5) / (SQRT_2 * sigma));
            assert!((at_one - q).abs() < 1e-12);
            let at_zero = qbar(0.0, d, sigma).unwrap();
            let shifted = 0.5
                * (0.5 * erfc_quad((1.0 + d as f64 + 0.5) / (SQRT_2 * sigma)) + 1.0
                    - 0.5 * erfc_quad((1.0 + d as f64 - 0.5) / (SQRT_2 * sigma)));
            assert!((at_zero - shifted).abs() < 1e-12);
        }
    }
}

fn kernel_sample() -> impl Strategy<Value = (f64, i64, f64)> {
    (
        0.0f64..=1.0,
        -6i64..=6,
        prop_oneof![Just(0.5), Just(1.0), Just(2.0), 0.1f64..4.0],
    )
}

proptest! {
    #[test]
    fn kernel_rows_sum_to_one((alpha, d, sigma) in kernel_sample()) {
        let total: f64 = (d - 1..=d + 1).map(|dp| two_state_kernel_cdf(alpha, d, 1.0, dp, sigma).unwrap()).sum();
        prop_assert!((total - 1.0).abs() < 1e-10, "total {}", total);
        prop_assert_eq!(two_state_kernel_cdf(alpha, d, 0.7, d + 2, sigma).unwrap(), 0.0);
    }

    #[test]
    fn marginals_match_cdf((alpha, d, sigma) in kernel_sample()) {
        let (up, down) = two_state_kernel_marginals(alpha, d, sigma).unwrap();
        prop_assert!((0.0..=0.5).contains(&up) && (0.0..=0.5).contains(&down));
        prop_assert!((up - two_state_kernel_cdf(alpha, d, 1.0, d + 1, sigma).unwrap()).abs() < 1e-12);
        prop_assert!((down - two_state_kernel_cdf(alpha, d, 1.0, d - 1, sigma).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn cdf_nondecreasing_in_beta((alpha, d, sigma) in kernel_sample()) {
        for dp in d - 1..=d + 1 {
            let mut prev = 0.0;
            for i in 1..=400 {
                let v = two_state_kernel_cdf(alpha, d, i as f64 / 400.0, dp, sigma).unwrap();
                prop_assert!(v >= prev - 1e-15);
                prev = v;
            }
        }
    }

    #[test]
    fn marginals_monotone_in_alpha(a in 0.0f64..1.0, b in 0.0f64..1.0, d in -5i64..=5, sigma in 0.2f64..3.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (u_lo, d_lo) = two_state_kernel_marginals(lo, d, sigma).unwrap();
        let (u_hi, d_hi) = two_state_kernel_marginals(hi, d, sigma).unwrap();
        prop_assert!(u_hi <= u_lo + 1e-15);
        prop_assert!(d_hi >= d_lo - 1e-15);
    }

    #[test]
    fn qbar_is_a_probability((alpha, d, sigma) in kernel_sample()) {
        let q = qbar(alpha, d, sigma).unwrap();
        prop_assert!((0.0..=1.0).contains(&q));
    }

    #[test]
    fn branch_points_bracket_thirds(alpha in 1e-9f64..(1.0 - 1e-9), sigma in 0.05f64..5.0) {
        let k = KernelAtoms::new(sigma).unwrap();
        prop_assert!(k.c_alpha(alpha) > 2.0);
        prop_assert!(k.lower_break(alpha) < 1.0 / 3.0);
        prop_assert!(k.upper_break(alpha) > 2.0 / 3.0);
    }

    #[test]
    fn continuous_across_beta_branches(alpha in 0.01f64..0.99, d in -4i64..=4, sigma in 0.3f64..3.0) {
        let k = KernelAtoms::new(sigma).unwrap();
        for edge in [k.lower_break(alpha), k.upper_break(alpha)] {
            if edge <= 0.0 || edge >= 1.0 {
                continue;
            }
            for dp in d - 1..=d + 1 {
                let below = k.cdf(alpha, d, edge.next_down(), dp);
                let at = k.cdf(alpha, d, edge, dp);
                let above = k.cdf(alpha, d, edge.next_up(), dp);
                prop_assert!((at - below).abs() < 1e-9 && (above - at).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn continuous_at_alpha_endpoints() {
    for sigma in [0.5, 1.0, 2.0] {
        let k = KernelAtoms::new(sigma).unwrap();
        for d in -6i64..=6 {
            for i in 1..=50 {
                let beta = i as f64 / 50.0;
                for dp in d - 1..=d + 1 {
                    let zero = k.cdf(0.0, d, beta, dp);
                    let near_zero = k.cdf(1e-300, d, beta, dp);
                    assert!(
                        (zero - near_zero).abs() < 1e-9,
                        "sigma {sigma} d {d} beta {beta} d' {dp}"
                    );
                    let d_floor = if sigma < 1.0 { 1 } else { 0 };
                    if d >= d_floor {
                        let one = k.cdf(1.0, d, beta, dp);
                        let near_one = k.cdf(1.0 - f64::EPSILON / 2.0, d, beta, dp);
                        assert!(
                            (one - near_one).abs() < 1e-9,
                            "sigma {sigma} d {d} beta {beta} d' {dp}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn kernel_matches_one_decoder_step() {
    let n = 200_000u64;
    for (alpha, d, sigma) in [
        (0.3, 0i64, 1.0),
        (0.8, -1, 0.7),
        (0.55, 2, 1.5),
        (0.05, 1, 1.0),
    ] {
        let params = ChannelParams::new(sigma).unwrap();
        let mut bits = InputStream::new(11);
        let mut noise = NoiseStream::new(&params, 12);
        let betas = [0.1, 0.3, 0.5, 0.7, 0.9, 1.0];
        let mut counts = [[0u64; 6]; 3];
        let x = 50u64;
        for _ in 0..n {
            let mut dec = TwoStateDecoder::with_state(&params, (x as i64 + d) as u64, alpha);
            let u = bits.next_bit() as u64;
            dec.step((x + u) as f64 + noise.next_noise());
            let dp = dec.x_hat() as i64 - (x + u) as i64;
            let slot = (dp - d + 1) as usize;
            assert!(slot < 3, "jump to {dp} from {d}");
            for (c, &b) in counts[slot].iter_mut().zip(&betas) {
                *c += u64::from(dec.alpha() <= b);
            }
        }
        for (slot, row) in counts.iter().enumerate() {
            let dp = d + slot as i64 - 1;
            for (&c, &b) in row.iter().zip(&betas) {
                let p = two_state_kernel_cdf(alpha, d, b, dp, sigma).unwrap();
                let emp = c as f64 / n as f64;
                let se = (p * (1.0 - p) / n as f64).sqrt().max(1e-6);
                assert!(
                    (emp - p).abs() < 5.0 * se,
                    "alpha {alpha} d {d} d' {dp} beta {b}: {emp} vs {p}"
                );
            }
        }
    }
}

#[test]
fn grid_start_independence_and_tail() {
    let g = discretize_kernel(1.0, 64, 30).unwrap();
    let uniform = invariant_by_iteration(
        g.clone(),
        &GridOptions {
            n_bins: 64,
            ..Default::default()
        },
    )
    .unwrap();
    let point = invariant_by_iteration(
        g,
        &GridOptions {
            n_bins: 64,
            start: Start::DecoderInit,
            ..Default::default()
        },
    )
    .unwrap();
    let (a, b) = (uniform.phi_tilde().unwrap(), point.phi_tilde().unwrap());
    let l1: f64 = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    assert!(l1 < 10.0 * 1e-10 * 64.0, "start dependence {l1}");
    assert!(uniform.tail_mass().unwrap() < 1e-8);
    assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let next = uniform.apply(a);
    let resid: f64 = a.iter().zip(&next).map(|(x, y)| (x - y).abs()).sum();
    assert!(resid < 1e-10);
}

#[test]
fn vanishing_noise_two_state_ber() {
    let g = discretize_kernel(0.05, 32, 10).unwrap();
    let g = invariant_by_iteration(
        g,
        &GridOptions {
            n_bins: 32,
            d_max: 10,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(two_state_asymptotic_ber(&g).unwrap() < 1e-8);
}

#[test]
fn two_state_not_worse_than_one_state() {
    for sigma in [0.5, 1.0, 2.0] {
        let one = one_state_asymptotic_ber(
            &one_state_invariant(one_state_transitions(sigma, 30).unwrap()).unwrap(),
        )
        .unwrap();
        let g = discretize_kernel(sigma, 64, 30).unwrap();
        let g = invariant_by_iteration(
            g,
            &GridOptions {
                n_bins: 64,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(two_state_asymptotic_ber(&g).unwrap() <= one);
    }
}

#[test]
fn mirror_symmetry_probe() {
    let defects = kernel_symmetry_defects(1.0, 20, 3).unwrap();
    println!("kernel mirror defects: {defects:?}");
    assert!(defects.same_d.is_finite() && defects.shifted_d.is_finite());
}
