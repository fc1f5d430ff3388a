//! Rate, power, complexity and energy-efficiency figures of merit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::linalg::{self, CMat};
use crate::precoding::{BasebandPrecoder, PhasePrecoder};

/// Hardware power constants, in watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PowerModel {
    pub p_rf_w: f64,
    pub p_ps_w: f64,
    pub p_switch_w: f64,
    /// DSP power per million operations.
    pub p_c_per_mops_w: f64,
}

impl Default for PowerModel {
    fn default() -> Self {
        PowerModel { p_rf_w: 0.25, p_ps_w: 0.01, p_switch_w: 0.005, p_c_per_mops_w: 0.0141 }
    }
}

impl PowerModel {
    pub fn validate(&self) -> Result<()> {
        let all = [self.p_rf_w, self.p_ps_w, self.p_switch_w, self.p_c_per_mops_w];
        if all.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(param("power model constants must be finite and non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Architecture {
    /// Switches plus two phase shifters per selected beam.
    SicPhaseNetwork,
    /// One switch per RF chain, no phase shifters.
    TraditionalSwitch,
    /// One RF chain per antenna.
    FullyDigital,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsRecord {
    pub mi_bits: f64,
    pub power_w: f64,
    pub ee: f64,
    pub complexity_ops: f64,
}

impl MetricsRecord {
    pub fn new(mi_bits: f64, power_w: f64, complexity_ops: f64) -> Result<Self> {
        let ee = energy_efficiency(mi_bits, power_w)?;
        Ok(MetricsRecord { mi_bits, power_w, ee, complexity_ops })
    }
}

pub fn snr_scale(rho: f64, sigma2: f64, n_streams: usize) -> Result<f64> {
    if !(rho.is_finite() && rho >= 0.0) {
        return Err(param("rho must be finite and non-negative"));
    }
    if !(sigma2.is_finite() && sigma2 > 0.0) {
        return Err(param("sigma2 must be positive"));
    }
    if n_streams == 0 {
        return Err(param("n_streams must be positive"));
    }
    Ok(rho / (sigma2 * n_streams as f64))
}

/// Band average of `log2|I + s A[k] A[k]^H|` with `A[k] = H[k] P[k]`.
fn band_average(reduced: &[CMat], precoders: &[CMat], s: f64) -> Result<f64> {
    if reduced.is_empty() || reduced.len() != precoders.len() {
        return Err(param("channel and precoder stacks differ in length"));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let per: Vec<f64> = reduced
        .par_iter()
        .zip(precoders.par_iter())
        .map(|(h, p)| {
            if h.ncols() != p.nrows() {
                return Err(param(format!("channel width {} vs precoder height {}", h.ncols(), p.nrows())));
            }
            // |I + s A A^H| = |I + s A^H A|
            linalg::log2_det_i_plus_gram(&(h * p).adjoint(), s)
        })
        .collect::<Result<_>>()?;
    Ok(linalg::pairwise_sum(&per) / reduced.len() as f64)
}

pub fn mutual_information(
    reduced: &[CMat],
    fps: &PhasePrecoder,
    fbb: &BasebandPrecoder,
    rho: f64,
    sigma2: f64,
    n_streams: usize,
) -> Result<f64> {
    let s = snr_scale(rho, sigma2, n_streams)?;
    let combined: Vec<CMat> = fbb.mats.iter().map(|b| &fps.mat * b).collect();
    band_average(reduced, &combined, s)
}

pub fn mutual_information_svd(
    reduced: &[CMat],
    fbb: &BasebandPrecoder,
    rho: f64,
    sigma2: f64,
    n_streams: usize,
) -> Result<f64> {
    let s = snr_scale(rho, sigma2, n_streams)?;
    band_average(reduced, &fbb.mats, s)
}

/// Operation count of the SIC design plus the per-subcarrier baseband step.
pub fn complexity_sic(n_streams: usize, n_beams: usize, n_rf: usize, n_rx_beams: usize, k: usize) -> f64 {
    let ns = n_streams as f64;
    let nb = n_beams as f64;
    let sub = nb / n_rf as f64;
    4.0 * ns * nb.powi(3)
        + ns * (ns + 1.0) * nb * nb
        + ns * sub.powi(3)
        + k as f64 * n_rx_beams as f64 * (n_rf as f64).powi(2)
}

/// Counted SVD model: `4 K N_r N_dim^2`.
pub const SVD_OPS_CONSTANT: f64 = 4.0;

pub fn complexity_svd(n_rx_beams: usize, n_dim: usize, k: usize) -> f64 {
    SVD_OPS_CONSTANT * k as f64 * n_rx_beams as f64 * (n_dim as f64).powi(2)
}

/// `n_units` is the beam count for the phase network and the antenna count
/// for the fully digital array; the switch architecture ignores it.
pub fn total_power(
    model: &PowerModel,
    rho_w: f64,
    n_rf: usize,
    n_units: usize,
    complexity_ops: f64,
    arch: Architecture,
) -> f64 {
    let dsp = model.p_c_per_mops_w * complexity_ops / 1e6;
    let rf = n_rf as f64;
    let units = n_units as f64;
    let hardware = match arch {
        Architecture::SicPhaseNetwork => rf * model.p_rf_w + 2.0 * units * model.p_ps_w + units * model.p_switch_w,
        Architecture::TraditionalSwitch => rf * (model.p_rf_w + model.p_switch_w),
        Architecture::FullyDigital => units * model.p_rf_w,
    };
    rho_w + dsp + hardware
}

pub fn energy_efficiency(mi: f64, power: f64) -> Result<f64> {
    if power.is_nan() || power <= 0.0 {
        return Err(param(format!("power must be positive, got {power}")));
    }
    Ok(mi / power)
}
