#![allow(dead_code)]

use qdeconv::channel::{
    add_noise, encode, generate_input, ChannelParams, ObservationTrace, Transmission,
};
use qdeconv::rng::SeedPair;

/// `erfc` by composite Simpson quadrature of `2/sqrt(pi) exp(-t^2)`,
/// independent of the library's special functions.
pub fn erfc_quad(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc_quad(-x);
    }
    let upper = x + 12.0;
    let n = 200_000;
    let h = (upper - x) / n as f64;
    let f = |t: f64| (-t * t).exp();
    let mut s = f(x) + f(upper);
    for i in 1..n {
        let t = x + i as f64 * h;
        s += if i % 2 == 1 { 4.0 * f(t) } else { 2.0 * f(t) };
    }
    s * h / 3.0 * 2.0 / std::f64::consts::PI.sqrt()
}

pub fn transmission(len: usize, sigma: f64, seed: u64) -> Transmission {
    let params = ChannelParams::new(sigma).unwrap();
    Transmission::simulate(len, &params, SeedPair::from_master(seed)).unwrap()
}

pub fn trace_of(bits: &[u8], sigma: f64, noise_seed: u64) -> ObservationTrace {
    let u = qdeconv::BitSequence::new(bits.to_vec()).unwrap();
    add_noise(&encode(&u), &ChannelParams::new(sigma).unwrap(), noise_seed)
}

pub fn random_bits(len: usize, seed: u64) -> Vec<u8> {
    generate_input(len, seed).unwrap().bits().to_vec()
}
