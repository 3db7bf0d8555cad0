mod common;

use proptest::prelude::*;
use qdeconv::channel::{
    add_noise, encode, generate_input, snr_to_sigma, ChannelParams, Transmission,
};
use qdeconv::rng::SeedPair;

proptest! {
    #[test]
    fn same_seed_same_transmission(len in 1usize..300, sigma in 0.05f64..3.0, seed: u64) {
        let p = ChannelParams::new(sigma).unwrap();
        let a = Transmission::simulate(len, &p, SeedPair::from_master(seed)).unwrap();
        let b = Transmission::simulate(len, &p, SeedPair::from_master(seed)).unwrap();
        prop_assert_eq!(a.input, b.input);
        prop_assert_eq!(a.trace.samples(), b.trace.samples());
    }

    #[test]
    fn states_climb_by_zero_or_one(len in 1usize..500, seed: u64) {
        let u = generate_input(len, seed).unwrap();
        let x = encode(&u);
        let mut prev = 0u64;
        for &s in x.states() {
            prop_assert!(s == prev || s == prev + 1);
            prev = s;
        }
        prop_assert_eq!(prev, u.ones());
    }

    #[test]
    fn input_and_noise_streams_are_separate(len in 1usize..200, a: u64, b: u64, c: u64) {
        let p = ChannelParams::new(1.0).unwrap();
        let t1 = Transmission::simulate(len, &p, SeedPair { input: a, noise: b }).unwrap();
        let t2 = Transmission::simulate(len, &p, SeedPair { input: a, noise: c }).unwrap();
        prop_assert_eq!(&t1.input, &t2.input);
        let t3 = Transmission::simulate(len, &p, SeedPair { input: c, noise: b }).unwrap();
        let n1: Vec<f64> = t1.trace.samples().iter().zip(t1.states.states()).map(|(y, x)| y - *x as f64).collect();
        let n3: Vec<f64> = t3.trace.samples().iter().zip(t3.states.states()).map(|(y, x)| y - *x as f64).collect();
        for (p, q) in n1.iter().zip(&n3) {
            prop_assert!((p - q).abs() < 1e-9);
        }
    }

    #[test]
    fn snr_round_trip(snr in -40.0f64..60.0) {
        let p = ChannelParams::from_snr_db(snr).unwrap();
        prop_assert!((p.sigma() / snr_to_sigma(snr) - 1.0).abs() < 1e-12);
        let q = ChannelParams::new(p.sigma()).unwrap();
        prop_assert!((q.snr_db() - snr).abs() <= 1e-12 * snr.abs().max(1.0));
    }
}

#[test]
fn fair_coin_over_a_million_bits() {
    let u = generate_input(1_000_000, 2024).unwrap();
    let mean = u.ones() as f64 / 1e6;
    assert!((mean - 0.5).abs() < 0.002, "mean {mean}");
}

#[test]
fn noise_variance_over_a_million_samples() {
    let sigma = 1.7;
    let x = encode(&qdeconv::BitSequence::new(vec![0; 1_000_000]).unwrap());
    let y = add_noise(&x, &ChannelParams::new(sigma).unwrap(), 77);
    let n = y.len() as f64;
    let mean = y.samples().iter().sum::<f64>() / n;
    let var = y.samples().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((var / (sigma * sigma) - 1.0).abs() < 0.05, "variance {var}");
}

#[test]
fn single_bit_input() {
    let u = generate_input(1, 9).unwrap();
    assert_eq!(u.len(), 1);
    assert!(u.bits()[0] <= 1);
}

#[test]
fn ramp_and_flat_trajectories() {
    let ones = encode(&qdeconv::BitSequence::new(vec![1; 6]).unwrap());
    assert_eq!(ones.states(), &[1, 2, 3, 4, 5, 6]);
    let zeros = encode(&qdeconv::BitSequence::new(vec![0; 6]).unwrap());
    assert!(zeros.states().iter().all(|&x| x == 0));
}

#[test]
fn sigma_of_minus_six_db() {
    assert!((snr_to_sigma(-6.0206) - 2.0).abs() < 1e-4);
}
