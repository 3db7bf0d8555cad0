use crate::analysis::{one_state_ber, two_state_ber, GridOptions};
use crate::channel::{ChannelParams, InputStream, NoiseStream};
use crate::decoders::{DecoderKind, ErrorReport, MiddleMass, OneStateDecoder, TwoStateDecoder};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, SeedPair, TRIAL_DOMAIN};

use super::sweep::ResultRow;

/// Error rate of one long transmission, decoded while it is generated.
pub fn run_cber(
    decoder: DecoderKind,
    sigma: f64,
    len: u64,
    input_seed: u64,
    noise_seed: u64,
) -> Result<ErrorReport> {
    run_cber_with(
        decoder,
        sigma,
        len,
        SeedPair {
            input: input_seed,
            noise: noise_seed,
        },
        MiddleMass::General,
    )
}

pub fn run_cber_with(
    decoder: DecoderKind,
    sigma: f64,
    len: u64,
    seeds: SeedPair,
    middle: MiddleMass,
) -> Result<ErrorReport> {
    let params = ChannelParams::new(sigma)?;
    if len == 0 {
        return Err(Error::InvalidConfig(
            "sequence length must be positive".into(),
        ));
    }
    let mut input = InputStream::new(seeds.input);
    let mut noise = NoiseStream::new(&params, seeds.noise);
    let mut x = 0u64;
    let mut errors = 0u64;
    let mut run = |step: &mut dyn FnMut(f64) -> u8| {
        for _ in 0..len {
            let u = input.next_bit();
            x += u as u64;
            let y = x as f64 + noise.next_noise();
            errors += u64::from(step(y) != u);
        }
    };
    match decoder {
        DecoderKind::OneState => {
            let mut dec = OneStateDecoder::new();
            run(&mut |y| dec.step(y));
        }
        DecoderKind::TwoStates => {
            let mut dec = TwoStateDecoder::new(&params).with_middle_mass(middle);
            run(&mut |y| dec.step(y));
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "long-sequence runs support one_state and two_states, not {other}"
            )))
        }
    }
    ErrorReport::from_counts(errors, len)
}

/// Seeds of the long transmission used at noise level `sigma`.
pub fn cber_seeds(master_seed: u64, sigma: f64) -> SeedPair {
    SeedPair::from_master(derive_seed(master_seed, TRIAL_DOMAIN, sigma.to_bits()))
}

/// Analytic asymptotic BER next to a simulated one, for both reduced decoders.
///
/// Both decoders see the same `mc_bits`-long transmission at each `sigma`.
pub fn compare_analytic(
    sigmas: &[f64],
    mc_bits: u64,
    master_seed: u64,
    grid: &GridOptions,
) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for &sigma in sigmas {
        let params = ChannelParams::new(sigma)?;
        let seeds = cber_seeds(master_seed, sigma);
        let analytic = [
            (DecoderKind::OneState, one_state_ber(sigma, grid.d_max)?),
            (DecoderKind::TwoStates, two_state_ber(sigma, grid)?),
        ];
        for (decoder, value) in analytic {
            let report = run_cber_with(decoder, sigma, mc_bits, seeds, MiddleMass::General)?;
            let mut row = ResultRow::from_errors(
                params.snr_db(),
                decoder,
                report.bit_errors,
                1,
                mc_bits,
                master_seed,
            );
            row.sigma = sigma;
            row.analytic_ber = Some(value);
            rows.push(row);
        }
    }
    super::sweep::sort_rows(&mut rows);
    Ok(rows)
}
