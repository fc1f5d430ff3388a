#![allow(dead_code)]

use beamspace::channel::SystemConfig;
use beamspace::linalg::{c, CMat};
use beamspace::precoding::{self, PowerAllocation, SubarrayLayout};
use beamspace::{metrics, selection, CVec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        c(x, y) / 2f64.sqrt()
    })
}

pub fn gaussian_stack(k: usize, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Vec<CMat> {
    (0..k).map(|_| gaussian(rows, cols, rng)).collect()
}

pub fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> CVec {
    let v = gaussian(n, 1, rng).column(0).into_owned();
    let norm = v.norm();
    v / c(norm, 0.0)
}

/// SNR scale drawn log-uniformly from [0.1, 100].
pub fn random_scale(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.random_range(-1.0..2.0))
}

pub fn small_system(n: usize, k: usize, n_rf: usize) -> SystemConfig {
    SystemConfig {
        n_tx: n,
        n_rx: n,
        n_rf_tx: n_rf,
        n_rf_rx: n_rf,
        n_streams: n_rf,
        n_subcarriers: k,
        ..SystemConfig::table_one()
    }
}

pub fn desk_system() -> SystemConfig {
    SystemConfig { n_subcarriers: 128, ..SystemConfig::table_one() }
}

/// Full SIC pipeline on an already reduced channel.
pub fn sic_mi(reduced: &[CMat], n_streams: usize, rho: f64, sigma2: f64) -> f64 {
    let s = metrics::snr_scale(rho, sigma2, n_streams).unwrap();
    let r = precoding::average_gram(reduced).unwrap();
    let m = reduced[0].ncols() / n_streams;
    let fps = precoding::sic_precoder(&r, SubarrayLayout { n_streams, subarray_size: m }, s).unwrap();
    let fbb = precoding::baseband_precoder(reduced, &fps, s, PowerAllocation::Identity).unwrap();
    metrics::mutual_information(reduced, &fps, &fbb, rho, sigma2, n_streams).unwrap()
}

pub fn plan_mi(
    ch: &beamspace::channel::BeamspaceChannel,
    plan: &selection::SelectionPlan,
    n_streams: usize,
    rho: f64,
    sigma2: f64,
) -> f64 {
    sic_mi(&selection::reduce_channel(ch, plan), n_streams, rho, sigma2)
}
