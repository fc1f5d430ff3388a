//! Wideband ray-based mmWave channels and their beamspace representation.
//!
//! A [`PathSet`] holds one random realisation of `L` clusters with `S` subpaths
//! each. The per-subcarrier spatial channel is the sum of rank-one array
//! responses weighted by the frequency-domain tap gain of each subpath, with
//! the spatial angle evaluated at the subcarrier frequency. That frequency
//! dependence is what moves the dominant beams across the band (beam squint).
//!
//! The beamspace channel is obtained either by the DFT transform
//! `U_r^H H[k] U_t` ([`beamspace_transform`]) or directly from the Dirichlet
//! kernel closed form ([`beamspace_direct`]); the two agree to rounding.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::linalg::{CMat, CVec};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default ceiling on the number of delay taps per subpath.
pub const DEFAULT_MAX_TAPS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub n_tx: usize,
    pub n_rx: usize,
    pub n_rf_tx: usize,
    pub n_rf_rx: usize,
    pub n_streams: usize,
    pub n_subcarriers: usize,
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    /// Element spacing; `None` means half a wavelength at the carrier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antenna_spacing_m: Option<f64>,
    pub noise_power_w: f64,
    pub transmit_power_w: f64,
}

impl SystemConfig {
    /// 64x64 array, 8 RF chains / streams, 28 GHz carrier, 2 GHz bandwidth,
    /// 1024 subcarriers, 1 W transmit power and 0.01 W noise.
    pub fn table_one() -> Self {
        SystemConfig {
            n_tx: 64,
            n_rx: 64,
            n_rf_tx: 8,
            n_rf_rx: 8,
            n_streams: 8,
            n_subcarriers: 1024,
            carrier_hz: 28e9,
            bandwidth_hz: 2e9,
            antenna_spacing_m: None,
            noise_power_w: 0.01,
            transmit_power_w: 1.0,
        }
    }

    pub fn spacing_m(&self) -> f64 {
        self.antenna_spacing_m.unwrap_or(SPEED_OF_LIGHT / (2.0 * self.carrier_hz))
    }

    pub fn sample_period_s(&self) -> f64 {
        1.0 / self.bandwidth_hz
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("n_tx", self.n_tx),
            ("n_rx", self.n_rx),
            ("n_rf_tx", self.n_rf_tx),
            ("n_rf_rx", self.n_rf_rx),
            ("n_streams", self.n_streams),
            ("n_subcarriers", self.n_subcarriers),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(param(format!("{name} must be positive")));
            }
        }
        if self.n_streams > self.n_rf_tx || self.n_streams > self.n_rf_rx {
            return Err(param("n_streams must not exceed the RF chain counts"));
        }
        if self.n_rf_tx > self.n_tx || self.n_rf_rx > self.n_rx {
            return Err(param("RF chain counts must not exceed the antenna counts"));
        }
        let reals = [
            ("carrier_hz", self.carrier_hz),
            ("bandwidth_hz", self.bandwidth_hz),
            ("noise_power_w", self.noise_power_w),
            ("transmit_power_w", self.transmit_power_w),
            ("antenna_spacing_m", self.spacing_m()),
        ];
        for (name, v) in reals {
            if !(v.is_finite() && v > 0.0) {
                return Err(param(format!("{name} must be finite and positive, got {v}")));
            }
        }
        if self.bandwidth_hz >= self.carrier_hz {
            return Err(param("bandwidth_hz must be below carrier_hz"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub n_clusters: usize,
    pub n_subpaths: usize,
    /// Cluster-centre delays are uniform on `[0, delay_window_s]`.
    pub delay_window_s: f64,
    /// Subpath delay offsets are uniform on `±subpath_delay_offset_s`.
    pub subpath_delay_offset_s: f64,
    /// Full angular width of a cluster; subpaths lie within centre ± half of it.
    pub angle_spread_rad: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            n_clusters: 10,
            n_subpaths: 20,
            delay_window_s: 20e-9,
            subpath_delay_offset_s: 0.1e-9,
            angle_spread_rad: 5f64.to_radians(),
        }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_clusters == 0 || self.n_subpaths == 0 {
            return Err(param("n_clusters and n_subpaths must be at least 1"));
        }
        for (name, v) in [
            ("delay_window_s", self.delay_window_s),
            ("subpath_delay_offset_s", self.subpath_delay_offset_s),
            ("angle_spread_rad", self.angle_spread_rad),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(param(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        if self.angle_spread_rad > PI {
            return Err(param("angle_spread_rad must not exceed pi"));
        }
        Ok(())
    }
}

/// Raised-cosine pulse sampled at the system rate and truncated to
/// `±truncation_symbols` symbol periods. `rolloff = 0` is the ideal sinc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseShape {
    pub rolloff: f64,
    pub truncation_symbols: f64,
}

impl Default for PulseShape {
    fn default() -> Self {
        PulseShape { rolloff: 0.8, truncation_symbols: 4.0 }
    }
}

impl PulseShape {
    pub fn sinc() -> Self {
        PulseShape { rolloff: 0.0, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.rolloff) {
            return Err(param(format!("rolloff must lie in [0, 1], got {}", self.rolloff)));
        }
        if !(self.truncation_symbols.is_finite() && self.truncation_symbols > 0.0) {
            return Err(param("truncation_symbols must be positive"));
        }
        Ok(())
    }

    /// Pulse value at `x` symbol periods from its centre.
    pub fn eval(&self, x: f64) -> f64 {
        if x.abs() > self.truncation_symbols {
            return 0.0;
        }
        let b = self.rolloff;
        if b > 0.0 {
            let denom = 1.0 - (2.0 * b * x).powi(2);
            if denom.abs() < 1e-10 {
                return PI / 4.0 * sinc(1.0 / (2.0 * b));
            }
            sinc(x) * (PI * b * x).cos() / denom
        } else {
            sinc(x)
        }
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subpath {
    pub gain: Complex64,
    pub delay_s: f64,
    pub aod_rad: f64,
    pub aoa_rad: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub center_delay_s: f64,
    pub center_aod_rad: f64,
    pub center_aoa_rad: f64,
    pub subpaths: Vec<Subpath>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathSet {
    pub clusters: Vec<Cluster>,
}

impl PathSet {
    pub fn empty() -> Self {
        PathSet::default()
    }

    /// One cluster holding exactly one subpath.
    pub fn single(gain: Complex64, delay_s: f64, aod_rad: f64, aoa_rad: f64) -> Self {
        PathSet {
            clusters: vec![Cluster {
                center_delay_s: delay_s,
                center_aod_rad: aod_rad,
                center_aoa_rad: aoa_rad,
                subpaths: vec![Subpath { gain, delay_s, aod_rad, aoa_rad }],
            }],
        }
    }

    pub fn subpaths(&self) -> impl Iterator<Item = &Subpath> {
        self.clusters.iter().flat_map(|c| c.subpaths.iter())
    }

    pub fn len(&self) -> usize {
        self.clusters.iter().map(|c| c.subpaths.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks the angle and delay envelope an instance drawn with `cc` must obey.
    pub fn check_invariants(&self, cc: &ChannelConfig) -> Result<()> {
        let half = cc.angle_spread_rad / 2.0;
        let tol = 1e-12;
        let max_delay = cc.delay_window_s + cc.subpath_delay_offset_s;
        for cl in &self.clusters {
            for sp in &cl.subpaths {
                if (sp.aod_rad - cl.center_aod_rad).abs() > half + tol
                    || (sp.aoa_rad - cl.center_aoa_rad).abs() > half + tol
                {
                    return Err(param("subpath angle outside its cluster spread"));
                }
                if sp.delay_s < 0.0 || sp.delay_s > max_delay + tol {
                    return Err(param(format!("subpath delay {} outside window", sp.delay_s)));
                }
            }
        }
        Ok(())
    }
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Draw one channel realisation.
///
/// Draw order, which fixes what a seed reproduces:
/// 1. for every cluster in turn: centre delay, centre AoD, centre AoA;
/// 2. then for every cluster, for every subpath: delay offset, AoD offset,
///    AoA offset, gain real part, gain imaginary part.
///
/// Gains are `(x + jy)/sqrt(2)` with standard normal `x, y`. Delays that an
/// offset pushes below zero are clamped to zero.
pub fn sample_paths<R: Rng + ?Sized>(cc: &ChannelConfig, rng: &mut R) -> Result<PathSet> {
    cc.validate()?;
    let half = cc.angle_spread_rad / 2.0;
    let centers: Vec<(f64, f64, f64)> = (0..cc.n_clusters)
        .map(|_| {
            let d = uniform(rng, 0.0, cc.delay_window_s);
            let aod = uniform(rng, -PI / 2.0, PI / 2.0);
            let aoa = uniform(rng, -PI / 2.0, PI / 2.0);
            (d, aod, aoa)
        })
        .collect();
    let clusters = centers
        .into_iter()
        .map(|(d, aod, aoa)| {
            let subpaths = (0..cc.n_subpaths)
                .map(|_| {
                    let off = uniform(rng, -cc.subpath_delay_offset_s, cc.subpath_delay_offset_s);
                    let daod = uniform(rng, -half, half);
                    let daoa = uniform(rng, -half, half);
                    let x: f64 = rng.sample(StandardNormal);
                    let y: f64 = rng.sample(StandardNormal);
                    Subpath {
                        gain: Complex64::new(x, y) / 2f64.sqrt(),
                        delay_s: (d + off).max(0.0),
                        aod_rad: aod + daod,
                        aoa_rad: aoa + daoa,
                    }
                })
                .collect();
            Cluster { center_delay_s: d, center_aod_rad: aod, center_aoa_rad: aoa, subpaths }
        })
        .collect();
    Ok(PathSet { clusters })
}

/// Frequency of subcarrier `k` (1-based).
pub fn subcarrier_frequency(k: usize, cfg: &SystemConfig) -> Result<f64> {
    let kk = cfg.n_subcarriers;
    if k == 0 || k > kk {
        return Err(Error::Index { index: k, len: kk });
    }
    let offset = k as f64 - 1.0 - (kk as f64 - 1.0) / 2.0;
    Ok(cfg.carrier_hz + cfg.bandwidth_hz / kk as f64 * offset)
}

pub fn subcarrier_frequencies(cfg: &SystemConfig) -> Vec<f64> {
    (1..=cfg.n_subcarriers).map(|k| subcarrier_frequency(k, cfg).expect("k in range")).collect()
}

/// Spatial angle `(d f / c) sin(theta)`.
pub fn spatial_angle(physical_angle_rad: f64, freq_hz: f64, spacing_m: f64) -> f64 {
    debug_assert!(freq_hz > 0.0);
    spacing_m * freq_hz / SPEED_OF_LIGHT * physical_angle_rad.sin()
}

/// ULA response with entries `exp(-j 2 pi m phi) / sqrt(n)`.
pub fn array_response(phi: f64, n: usize) -> CVec {
    let norm = 1.0 / (n as f64).sqrt();
    DVector::from_fn(n, |m, _| Complex64::from_polar(norm, -2.0 * PI * m as f64 * phi))
}

/// `Xi_n(x) = (1/n) sum_{m<n} exp(j 2 pi m x)`, via its closed form.
///
/// The kernel has period 1, so `x` is first reduced to `[-1/2, 1/2]`; the
/// removable singularity at the reduced origin returns the limit.
pub fn dirichlet_kernel(x: f64, n: usize) -> Complex64 {
    let r = x - x.round();
    let nf = n as f64;
    let phase = Complex64::from_polar(1.0, PI * r * (nf - 1.0));
    let den = (PI * r).sin();
    if den.abs() < 1e-12 {
        return phase;
    }
    phase * ((nf * PI * r).sin() / (nf * den))
}

/// Spatial angle of DFT beam `n` (1-based) on an `n_ant` grid.
pub fn grid_angle(n: usize, n_ant: usize) -> f64 {
    (n as f64 - (n_ant as f64 + 1.0) / 2.0) / n_ant as f64
}

/// DFT matrix whose columns are array responses at the beam grid angles.
pub fn dft_matrix(n_ant: usize) -> CMat {
    let mut u = CMat::zeros(n_ant, n_ant);
    for j in 0..n_ant {
        u.set_column(j, &array_response(grid_angle(j + 1, n_ant), n_ant));
    }
    u
}

/// Beamspace array response: entry `i` is `Xi_N(grid_i - phi)`, which equals
/// `U^H a(phi)` under the array-response convention above.
pub fn beamspace_response(phi: f64, n_ant: usize) -> CVec {
    DVector::from_fn(n_ant, |i, _| dirichlet_kernel(grid_angle(i + 1, n_ant) - phi, n_ant))
}

/// Delay-tap grid shared by every subpath of a channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TapGrid {
    pub n_taps: usize,
    pub sample_period_s: f64,
    pub pulse: PulseShape,
}

impl TapGrid {
    /// `D = ceil((delay_window + truncation) * B)` taps at `T_s = 1/B`.
    pub fn new(cfg: &SystemConfig, cc: &ChannelConfig, pulse: PulseShape) -> Result<Self> {
        Self::with_cap(cfg, cc, pulse, DEFAULT_MAX_TAPS)
    }

    pub fn with_cap(cfg: &SystemConfig, cc: &ChannelConfig, pulse: PulseShape, max_taps: usize) -> Result<Self> {
        pulse.validate()?;
        let ts = cfg.sample_period_s();
        let span = (cc.delay_window_s + pulse.truncation_symbols * ts) / ts;
        let d = (span - 1e-9).ceil().max(1.0);
        if !d.is_finite() || d > max_taps as f64 {
            return Err(param(format!("tap count {d} exceeds the cap of {max_taps}")));
        }
        Ok(TapGrid { n_taps: d as usize, sample_period_s: ts, pulse })
    }
}

/// `sum_d alpha p(d T_s - tau) exp(-j 2 pi d k / K)` with `k` used as given.
pub fn frequency_gain(path: &Subpath, k: usize, n_subcarriers: usize, grid: &TapGrid) -> Complex64 {
    if path.gain == Complex64::new(0.0, 0.0) {
        return path.gain;
    }
    let tau = path.delay_s / grid.sample_period_s;
    let kk = n_subcarriers as f64;
    // the pulse is zero outside the truncation window, skip those taps
    let lo = (tau - grid.pulse.truncation_symbols).floor().max(0.0) as usize;
    let hi = ((tau + grid.pulse.truncation_symbols).ceil() as usize + 1).min(grid.n_taps);
    let mut acc = Complex64::new(0.0, 0.0);
    for d in lo..hi {
        let p = grid.pulse.eval(d as f64 - tau);
        if p != 0.0 {
            let ph = -2.0 * PI * ((d as u64 * k as u64) % n_subcarriers as u64) as f64 / kk;
            acc += Complex64::from_polar(p, ph);
        }
    }
    path.gain * acc
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamspaceChannel {
    pub mats: Vec<CMat>,
    pub per_subcarrier_freq_hz: Vec<f64>,
}

impl BeamspaceChannel {
    pub fn n_subcarriers(&self) -> usize {
        self.mats.len()
    }

    pub fn n_rx(&self) -> usize {
        self.mats.first().map_or(0, |m| m.nrows())
    }

    pub fn n_tx(&self) -> usize {
        self.mats.first().map_or(0, |m| m.ncols())
    }

    pub fn validate(&self) -> Result<()> {
        if self.mats.is_empty() {
            return Err(param("channel has no subcarriers"));
        }
        if self.mats.len() != self.per_subcarrier_freq_hz.len() {
            return Err(param("frequency list does not match subcarrier count"));
        }
        let shape = self.mats[0].shape();
        if self.mats.iter().any(|m| m.shape() != shape) {
            return Err(param("subcarrier matrices differ in shape"));
        }
        if self.per_subcarrier_freq_hz.windows(2).any(|w| w[1] <= w[0]) {
            return Err(param("subcarrier frequencies must be strictly increasing"));
        }
        Ok(())
    }

    /// Mean per-subcarrier energy `(1/K) sum_k |H_b[k]|_F^2`.
    pub fn mean_energy(&self) -> f64 {
        let e: Vec<f64> = self.mats.iter().map(crate::linalg::frobenius_sq).collect();
        crate::linalg::pairwise_sum(&e) / self.mats.len().max(1) as f64
    }
}

/// Per-path gains on subcarriers 1..=K plus the path's spatial angles there.
struct PathTerms {
    gains: Vec<Complex64>,
    sin_aod: f64,
    sin_aoa: f64,
}

fn path_terms(paths: &PathSet, cfg: &SystemConfig, grid: &TapGrid) -> Vec<PathTerms> {
    let kk = cfg.n_subcarriers;
    paths
        .subpaths()
        .map(|sp| PathTerms {
            gains: (1..=kk).map(|k| frequency_gain(sp, k, kk, grid)).collect(),
            sin_aod: sp.aod_rad.sin(),
            sin_aoa: sp.aoa_rad.sin(),
        })
        .collect()
}

/// Builds `sum_p beta_p r_p t_p^H` for one subcarrier from response functions.
fn rank_one_sum(
    terms: &[PathTerms],
    k_idx: usize,
    phi_scale: f64,
    n_rx: usize,
    n_tx: usize,
    resp: impl Fn(f64, usize) -> CVec,
) -> CMat {
    if terms.is_empty() {
        return CMat::zeros(n_rx, n_tx);
    }
    let p = terms.len();
    let mut left = CMat::zeros(n_rx, p);
    let mut right = CMat::zeros(n_tx, p);
    for (j, t) in terms.iter().enumerate() {
        let ar = resp(phi_scale * t.sin_aoa, n_rx) * t.gains[k_idx];
        left.set_column(j, &ar);
        right.set_column(j, &resp(phi_scale * t.sin_aod, n_tx));
    }
    left * right.adjoint()
}

/// Spatial channel `H[k]` for every subcarrier.
pub fn spatial_channel(paths: &PathSet, cfg: &SystemConfig, grid: &TapGrid) -> Vec<CMat> {
    let terms = path_terms(paths, cfg, grid);
    let freqs = subcarrier_frequencies(cfg);
    let d = cfg.spacing_m();
    freqs
        .par_iter()
        .enumerate()
        .map(|(k, &f)| rank_one_sum(&terms, k, d * f / SPEED_OF_LIGHT, cfg.n_rx, cfg.n_tx, array_response))
        .collect()
}

/// `H_b[k] = U_r^H H[k] U_t`.
pub fn beamspace_transform(spatial: &[CMat], cfg: &SystemConfig) -> BeamspaceChannel {
    let ut = dft_matrix(cfg.n_tx);
    let ur_h = dft_matrix(cfg.n_rx).adjoint();
    let mats = spatial.par_iter().map(|h| &ur_h * h * &ut).collect();
    BeamspaceChannel { mats, per_subcarrier_freq_hz: subcarrier_frequencies(cfg) }
}

/// Beamspace channel straight from the Dirichlet-kernel responses.
pub fn beamspace_direct(paths: &PathSet, cfg: &SystemConfig, grid: &TapGrid) -> BeamspaceChannel {
    let terms = path_terms(paths, cfg, grid);
    let freqs = subcarrier_frequencies(cfg);
    let d = cfg.spacing_m();
    let mats = freqs
        .par_iter()
        .enumerate()
        .map(|(k, &f)| rank_one_sum(&terms, k, d * f / SPEED_OF_LIGHT, cfg.n_rx, cfg.n_tx, beamspace_response))
        .collect();
    BeamspaceChannel { mats, per_subcarrier_freq_hz: freqs }
}

/// Sample a realisation and return its beamspace channel.
pub fn generate<R: Rng + ?Sized>(
    cfg: &SystemConfig,
    cc: &ChannelConfig,
    pulse: PulseShape,
    rng: &mut R,
) -> Result<(PathSet, BeamspaceChannel)> {
    cfg.validate()?;
    let paths = sample_paths(cc, rng)?;
    let grid = TapGrid::new(cfg, cc, pulse)?;
    let ch = beamspace_direct(&paths, cfg, &grid);
    Ok((paths, ch))
}

/// Squared column norms of `H_b[k]` (power per transmit beam), `k` 1-based.
pub fn beam_power_profile(ch: &BeamspaceChannel, k: usize) -> Result<Vec<f64>> {
    let len = ch.n_subcarriers();
    if k == 0 || k > len {
        return Err(Error::Index { index: k, len });
    }
    let h = &ch.mats[k - 1];
    Ok((0..h.ncols()).map(|j| h.column(j).iter().map(|z| z.norm_sqr()).sum()).collect())
}
