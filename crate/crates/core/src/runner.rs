//! Configuration, seeded Monte Carlo sweeps and CSV emission.
//!
//! Every trial draws one multipath realisation from its own generator,
//! seeded by [`trial_seed`], and reuses it for every point on the sweep axis
//! (common random numbers), so curves differ only by the swept parameter.
//! Trials run in parallel; rows are sorted before they are returned, so the
//! output does not depend on the worker count.

use std::fmt;
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{self, BeamspaceChannel, ChannelConfig, PathSet, PulseShape, SystemConfig, TapGrid};
use crate::error::{param, Error, Result};
use crate::metrics::{self, Architecture, PowerModel};
use crate::precoding::{self, PowerAllocation, SubarrayLayout};
use crate::selection::{self, BeamBudget};
use crate::stats::{self, Summary};

pub const CSV_HEADER: &str =
    "axis,axis_value,scheme,seed_index,mi_bits_per_s_per_hz,ee_bits_per_hz_per_w,power_w,n_beams,n_rf";

pub const DEFAULT_TRIALS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    SnrDb,
    TransmitPowerW,
    BandwidthHz,
    NStreams,
    NBeams,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::SnrDb => "snr_db",
            Axis::TransmitPowerW => "transmit_power_w",
            Axis::BandwidthHz => "bandwidth_hz",
            Axis::NStreams => "n_streams",
            Axis::NBeams => "n_beams",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Phase shifter-aided selection with the SIC precoder.
    Sic,
    /// Switch network with one beam per RF chain, `n_rf_tx` chains.
    SvdMatchedRf,
    /// Switch network with as many RF chains as the SIC scheme selects beams.
    SvdMatchedBeams,
    /// Switch network with three RF chains per stream.
    SvdThreeRf,
    /// Unconstrained SVD on the full channel with water-filling.
    FullyDigital,
}

impl Scheme {
    pub const DEFAULT_SET: [Scheme; 4] =
        [Scheme::Sic, Scheme::SvdMatchedRf, Scheme::SvdMatchedBeams, Scheme::FullyDigital];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Sic => "sic",
            Scheme::SvdMatchedRf => "svd_matched_rf",
            Scheme::SvdMatchedBeams => "svd_matched_beams",
            Scheme::SvdThreeRf => "svd_three_rf",
            Scheme::FullyDigital => "fully_digital",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Beam count for the SIC scheme: derived from the bandwidth or fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "BeamCountRepr", into = "BeamCountRepr")]
pub enum BeamCount {
    #[default]
    Auto,
    Fixed(usize),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BeamCountRepr {
    Fixed(usize),
    Word(String),
}

impl TryFrom<BeamCountRepr> for BeamCount {
    type Error = String;

    fn try_from(r: BeamCountRepr) -> std::result::Result<Self, String> {
        match r {
            BeamCountRepr::Fixed(0) => Err("n_beams must be positive".into()),
            BeamCountRepr::Fixed(n) => Ok(BeamCount::Fixed(n)),
            BeamCountRepr::Word(w) if w == "auto" => Ok(BeamCount::Auto),
            BeamCountRepr::Word(w) => Err(format!("n_beams must be \"auto\" or an integer, got {w:?}")),
        }
    }
}

impl From<BeamCount> for BeamCountRepr {
    fn from(b: BeamCount) -> Self {
        match b {
            BeamCount::Auto => BeamCountRepr::Word("auto".into()),
            BeamCount::Fixed(n) => BeamCountRepr::Fixed(n),
        }
    }
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

fn default_schemes() -> Vec<Scheme> {
    Scheme::DEFAULT_SET.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: Axis,
    pub values: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<Scheme>,
    #[serde(default)]
    pub n_beams: BeamCount,
    #[serde(default)]
    pub power_allocation: PowerAllocation,
}

/// On-disk configuration, one TOML table per section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub system: SystemConfig,
    #[serde(default)]
    pub channel: ChannelConfig,
    #[serde(default)]
    pub pulse: PulseShape,
    #[serde(default)]
    pub power: PowerModel,
    pub sweep: Option<SweepSection>,
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.system.validate().map_err(|e| Error::Config(format!("[system]: {e}")))?;
        cfg.channel.validate().map_err(|e| Error::Config(format!("[channel]: {e}")))?;
        cfg.pulse.validate().map_err(|e| Error::Config(format!("[pulse]: {e}")))?;
        cfg.power.validate().map_err(|e| Error::Config(format!("[power]: {e}")))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let s = self.sweep.as_ref().ok_or_else(|| Error::Config("missing [sweep] section".into()))?;
        let spec = SweepSpec {
            axis: s.axis,
            values: s.values.clone(),
            trials: s.trials,
            seed: s.seed,
            schemes: s.schemes.clone(),
            n_beams: s.n_beams,
            power_allocation: s.power_allocation,
            system: self.system.clone(),
            channel: self.channel.clone(),
            pulse: self.pulse,
            power: self.power,
        };
        spec.validate().map_err(|e| Error::Config(format!("[sweep]: {e}")))?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub values: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub schemes: Vec<Scheme>,
    pub n_beams: BeamCount,
    pub power_allocation: PowerAllocation,
    pub system: SystemConfig,
    pub channel: ChannelConfig,
    pub pulse: PulseShape,
    pub power: PowerModel,
}

impl SweepSpec {
    /// Sweep over `axis` with default trials, seed, schemes and models.
    pub fn new(system: SystemConfig, axis: Axis, values: Vec<f64>) -> Self {
        SweepSpec {
            axis,
            values,
            trials: DEFAULT_TRIALS,
            seed: 0,
            schemes: default_schemes(),
            n_beams: BeamCount::Auto,
            power_allocation: PowerAllocation::Identity,
            system,
            channel: ChannelConfig::default(),
            pulse: PulseShape::default(),
            power: PowerModel::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(param("values must not be empty"));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(param("values must be finite"));
        }
        if self.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(param("values must be strictly ascending"));
        }
        if self.trials == 0 {
            return Err(param("trials must be at least 1"));
        }
        if self.schemes.is_empty() {
            return Err(param("schemes must not be empty"));
        }
        let mut seen = self.schemes.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.schemes.len() {
            return Err(param("schemes contain duplicates"));
        }
        if matches!(self.axis, Axis::NStreams | Axis::NBeams) {
            for &v in &self.values {
                as_count(v)?;
            }
        }
        self.system.validate()?;
        self.channel.validate()?;
        self.pulse.validate()?;
        self.power.validate()
    }
}

fn as_count(v: f64) -> Result<usize> {
    if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(param(format!("{v} is not a positive integer")))
    }
}

/// SplitMix64 finaliser applied to `seed ^ (trial * golden ratio)`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    let mut z = seed ^ (trial as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Everything a sweep point changes relative to the base configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfig {
    pub system: SystemConfig,
    pub raw_beams_tx: usize,
    pub raw_beams_rx: usize,
    /// Beams selected per side by the SIC scheme, padded to whole sub-arrays.
    pub sic_beams_tx: usize,
    pub sic_beams_rx: usize,
}

pub fn point_config(spec: &SweepSpec, value: f64) -> Result<PointConfig> {
    let mut sys = spec.system.clone();
    match spec.axis {
        Axis::SnrDb => sys.noise_power_w = sys.transmit_power_w / 10f64.powf(value / 10.0),
        Axis::TransmitPowerW => sys.transmit_power_w = value,
        Axis::BandwidthHz => sys.bandwidth_hz = value,
        Axis::NStreams => {
            let n = as_count(value)?;
            sys.n_streams = n;
            sys.n_rf_tx = n;
            sys.n_rf_rx = n;
        }
        Axis::NBeams => {}
    }
    sys.validate()?;
    let (raw_tx, raw_rx) = match (spec.axis, spec.n_beams) {
        (Axis::NBeams, _) => (as_count(value)?, as_count(value)?),
        (_, BeamCount::Fixed(n)) => (n, n),
        (_, BeamCount::Auto) => (
            selection::required_beam_count(spec.channel.n_clusters, sys.n_tx, sys.bandwidth_hz, sys.carrier_hz),
            selection::required_beam_count(spec.channel.n_clusters, sys.n_rx, sys.bandwidth_hz, sys.carrier_hz),
        ),
    };
    let ns = sys.n_streams;
    let (tx, rx) = (selection::pad_to_subarrays(raw_tx, ns), selection::pad_to_subarrays(raw_rx, ns));
    if tx > sys.n_tx || rx > sys.n_rx {
        return Err(Error::Infeasible(format!("{tx}/{rx} padded beams exceed the {}/{} antennas", sys.n_tx, sys.n_rx)));
    }
    Ok(PointConfig { system: sys, raw_beams_tx: raw_tx, raw_beams_rx: raw_rx, sic_beams_tx: tx, sic_beams_rx: rx })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeOutcome {
    pub mi_bits: f64,
    pub power_w: f64,
    pub complexity_ops: f64,
    pub n_beams: usize,
    pub n_rf: usize,
}

/// Beams per side and RF chains a scheme uses at this point.
pub fn scheme_dims(scheme: Scheme, pt: &PointConfig) -> (usize, usize, usize) {
    let sys = &pt.system;
    match scheme {
        Scheme::Sic => (pt.sic_beams_tx, pt.sic_beams_rx, sys.n_streams),
        Scheme::SvdMatchedRf => (sys.n_rf_tx, sys.n_rf_rx, sys.n_rf_tx),
        Scheme::SvdMatchedBeams => (pt.sic_beams_tx, pt.sic_beams_rx, pt.sic_beams_tx),
        Scheme::SvdThreeRf => (3 * sys.n_streams, 3 * sys.n_streams, 3 * sys.n_streams),
        Scheme::FullyDigital => (sys.n_tx, sys.n_rx, sys.n_tx),
    }
}

/// Select, precode and score one scheme on one channel realisation.
pub fn evaluate_scheme(
    scheme: Scheme,
    ch: &BeamspaceChannel,
    pt: &PointConfig,
    power: &PowerModel,
    mode: PowerAllocation,
) -> Result<SchemeOutcome> {
    let sys = &pt.system;
    let (ns, k) = (sys.n_streams, sys.n_subcarriers);
    let (rho, sigma2) = (sys.transmit_power_w, sys.noise_power_w);
    let s = metrics::snr_scale(rho, sigma2, ns)?;
    let (b_tx, b_rx, n_rf) = scheme_dims(scheme, pt);
    if b_tx > sys.n_tx || b_rx > sys.n_rx {
        return Err(Error::Infeasible(format!("{} needs {b_tx}x{b_rx} beams", scheme.name())));
    }
    match scheme {
        Scheme::Sic => {
            let budget = BeamBudget { n_beams_tx: b_tx, n_beams_rx: b_rx, n_rf_tx: ns, n_rf_rx: ns };
            let plan = selection::energy_max_plan(ch, budget)?;
            let reduced = selection::reduce_channel(ch, &plan);
            let r = precoding::average_gram(&reduced)?;
            let layout = SubarrayLayout { n_streams: ns, subarray_size: b_tx / ns };
            let fps = precoding::sic_precoder(&r, layout, s)?;
            let fbb = precoding::baseband_precoder(&reduced, &fps, s, mode)?;
            let mi = metrics::mutual_information(&reduced, &fps, &fbb, rho, sigma2, ns)?;
            let ops = metrics::complexity_sic(ns, b_tx, n_rf, b_rx, k);
            let p = metrics::total_power(power, rho, n_rf, b_tx, ops, Architecture::SicPhaseNetwork);
            Ok(SchemeOutcome { mi_bits: mi, power_w: p, complexity_ops: ops, n_beams: b_tx, n_rf })
        }
        Scheme::SvdMatchedRf | Scheme::SvdMatchedBeams | Scheme::SvdThreeRf => {
            let plan = selection::energy_max_plan(ch, BeamBudget::one_per_chain(b_tx, b_rx))?;
            let reduced = selection::reduce_channel(ch, &plan);
            let fbb = precoding::svd_baseline(&reduced, ns, ns as f64, s, mode)?;
            let mi = metrics::mutual_information_svd(&reduced, &fbb, rho, sigma2, ns)?;
            let ops = metrics::complexity_svd(b_rx, b_tx, k);
            let p = metrics::total_power(power, rho, n_rf, b_tx, ops, Architecture::TraditionalSwitch);
            Ok(SchemeOutcome { mi_bits: mi, power_w: p, complexity_ops: ops, n_beams: b_tx, n_rf })
        }
        Scheme::FullyDigital => {
            let fbb = precoding::svd_baseline(&ch.mats, ns, ns as f64, s, PowerAllocation::Waterfill)?;
            let mi = metrics::mutual_information_svd(&ch.mats, &fbb, rho, sigma2, ns)?;
            let ops = metrics::complexity_svd(sys.n_rx, sys.n_tx, k);
            let p = metrics::total_power(power, rho, n_rf, sys.n_tx, ops, Architecture::FullyDigital);
            Ok(SchemeOutcome { mi_bits: mi, power_w: p, complexity_ops: ops, n_beams: b_tx, n_rf })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub scheme: Scheme,
    pub seed_index: usize,
    pub mi_bits: f64,
    pub ee: f64,
    pub power_w: f64,
    pub n_beams: usize,
    pub n_rf: usize,
    /// Set when this point could not be evaluated; the numbers are then NaN.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: Axis,
    pub rows: Vec<SweepRow>,
}

fn error_row(value: f64, scheme: Scheme, trial: usize, dims: (usize, usize), e: &Error) -> SweepRow {
    SweepRow {
        axis_value: value,
        scheme,
        seed_index: trial,
        mi_bits: f64::NAN,
        ee: f64::NAN,
        power_w: f64::NAN,
        n_beams: dims.0,
        n_rf: dims.1,
        error: Some(e.to_string()),
    }
}

/// Inputs that change the channel matrices (as opposed to only the scoring).
fn channel_key(sys: &SystemConfig) -> (usize, usize, usize, u64, u64, u64) {
    (
        sys.n_tx,
        sys.n_rx,
        sys.n_subcarriers,
        sys.carrier_hz.to_bits(),
        sys.bandwidth_hz.to_bits(),
        sys.spacing_m().to_bits(),
    )
}

fn run_trial(spec: &SweepSpec, points: &[(f64, Result<PointConfig>)], trial: usize) -> Vec<SweepRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(spec.seed, trial));
    let paths: Result<PathSet> = channel::sample_paths(&spec.channel, &mut rng);
    let mut cache: Option<(_, BeamspaceChannel)> = None;
    let mut rows = Vec::with_capacity(points.len() * spec.schemes.len());
    for (value, pt) in points {
        let prepared = pt.as_ref().map_err(clone_err).and_then(|pt| {
            let paths = paths.as_ref().map_err(clone_err)?;
            let key = channel_key(&pt.system);
            if cache.as_ref().is_none_or(|(k, _)| *k != key) {
                let grid = TapGrid::new(&pt.system, &spec.channel, spec.pulse)?;
                cache = Some((key, channel::beamspace_direct(paths, &pt.system, &grid)));
            }
            Ok(pt)
        });
        for &scheme in &spec.schemes {
            let row = match prepared {
                Err(ref e) => error_row(*value, scheme, trial, (0, 0), e),
                Ok(pt) => {
                    let (b_tx, _, n_rf) = scheme_dims(scheme, pt);
                    let ch = &cache.as_ref().expect("channel built").1;
                    let outcome = evaluate_scheme(scheme, ch, pt, &spec.power, spec.power_allocation)
                        .and_then(|o| Ok((o, metrics::energy_efficiency(o.mi_bits, o.power_w)?)));
                    match outcome {
                        Ok((o, ee)) => SweepRow {
                            axis_value: *value,
                            scheme,
                            seed_index: trial,
                            mi_bits: o.mi_bits,
                            ee,
                            power_w: o.power_w,
                            n_beams: o.n_beams,
                            n_rf: o.n_rf,
                            error: None,
                        },
                        Err(e) => error_row(*value, scheme, trial, (b_tx, n_rf), &e),
                    }
                }
            };
            rows.push(row);
        }
    }
    rows
}

fn clone_err(e: &Error) -> Error {
    match e {
        Error::Parameter(m) => Error::Parameter(m.clone()),
        Error::Index { index, len } => Error::Index { index: *index, len: *len },
        Error::Numeric(m) => Error::Numeric(m.clone()),
        Error::Infeasible(m) => Error::Infeasible(m.clone()),
        Error::CapExceeded { combinations, cap } => Error::CapExceeded { combinations: *combinations, cap: *cap },
        Error::Config(m) => Error::Config(m.clone()),
        Error::Dump(m) => Error::Dump(m.clone()),
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), io.to_string())),
    }
}

/// Run every (value, scheme, trial) combination on the current rayon pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let points: Vec<(f64, Result<PointConfig>)> = spec.values.iter().map(|&v| (v, point_config(spec, v))).collect();
    let mut rows: Vec<SweepRow> =
        (0..spec.trials).into_par_iter().flat_map_iter(|t| run_trial(spec, &points, t)).collect();
    rows.sort_by(|a, b| {
        a.axis_value
            .total_cmp(&b.axis_value)
            .then_with(|| a.scheme.name().cmp(b.scheme.name()))
            .then(a.seed_index.cmp(&b.seed_index))
    });
    Ok(SweepResult { axis: spec.axis, rows })
}

/// [`run_sweep`] on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(spec: &SweepSpec, threads: usize) -> Result<SweepResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| param(format!("cannot build a pool of {threads} threads: {e}")))?;
    pool.install(|| run_sweep(spec))
}

fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:.8e}")
    }
}

pub fn write_csv(result: &SweepResult, w: &mut impl Write) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in &result.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            result.axis.name(),
            fmt_float(r.axis_value),
            r.scheme.name(),
            r.seed_index,
            fmt_float(r.mi_bits),
            fmt_float(r.ee),
            fmt_float(r.power_w),
            r.n_beams,
            r.n_rf
        )?;
    }
    Ok(())
}

pub fn csv_string(result: &SweepResult) -> String {
    let mut buf = Vec::new();
    write_csv(result, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is ASCII")
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_csv(result, &mut f)?;
    f.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSummary {
    pub axis_value: f64,
    pub scheme: Scheme,
    pub mi: Summary,
    pub ee: Summary,
    pub failures: usize,
}

/// Per (value, scheme) statistics over the trials that succeeded.
pub fn summarize(result: &SweepResult) -> Vec<PointSummary> {
    let mut out: Vec<PointSummary> = Vec::new();
    for group in result.rows.chunk_by(|a, b| a.axis_value == b.axis_value && a.scheme == b.scheme) {
        let ok: Vec<&SweepRow> = group.iter().filter(|r| r.error.is_none()).collect();
        let mi: Vec<f64> = ok.iter().map(|r| r.mi_bits).collect();
        let ee: Vec<f64> = ok.iter().map(|r| r.ee).collect();
        out.push(PointSummary {
            axis_value: group[0].axis_value,
            scheme: group[0].scheme,
            mi: stats::summarize(&mi),
            ee: stats::summarize(&ee),
            failures: group.len() - ok.len(),
        });
    }
    out
}

/// Per-trial values of one column for one (value, scheme), ordered by trial.
pub fn column(result: &SweepResult, value: f64, scheme: Scheme, pick: impl Fn(&SweepRow) -> f64) -> Vec<f64> {
    result.rows.iter().filter(|r| r.axis_value == value && r.scheme == scheme).map(pick).collect()
}

/// Static sizing of a configuration: beam budgets, power and complexity.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanReport {
    pub point: PointConfig,
    pub n_taps: usize,
    pub schemes: Vec<(Scheme, usize, usize, f64, f64)>,
}

impl fmt::Display for PlanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.point;
        writeln!(f, "raw_beams_tx={}", p.raw_beams_tx)?;
        writeln!(f, "padded_beams_tx={}", p.sic_beams_tx)?;
        writeln!(f, "raw_beams_rx={}", p.raw_beams_rx)?;
        writeln!(f, "padded_beams_rx={}", p.sic_beams_rx)?;
        writeln!(f, "subarray_size_tx={}", p.sic_beams_tx / p.system.n_streams)?;
        writeln!(f, "n_streams={}", p.system.n_streams)?;
        writeln!(f, "transmit_power_w={}", p.system.transmit_power_w)?;
        writeln!(f, "noise_power_w={}", p.system.noise_power_w)?;
        writeln!(f, "n_taps={}", self.n_taps)?;
        for (s, beams, rf, ops, watts) in &self.schemes {
            writeln!(f, "{s}.n_beams={beams}")?;
            writeln!(f, "{s}.n_rf={rf}")?;
            writeln!(f, "{s}.complexity_ops={ops}")?;
            writeln!(f, "{s}.power_w={watts:.6}")?;
        }
        Ok(())
    }
}

pub fn plan_report(cfg: &Config) -> Result<PlanReport> {
    let mut spec = SweepSpec::new(cfg.system.clone(), Axis::TransmitPowerW, vec![cfg.system.transmit_power_w]);
    spec.channel = cfg.channel.clone();
    spec.pulse = cfg.pulse;
    spec.power = cfg.power;
    if let Some(s) = &cfg.sweep {
        spec.n_beams = s.n_beams;
    }
    let point = point_config(&spec, cfg.system.transmit_power_w)?;
    let grid = TapGrid::new(&point.system, &cfg.channel, cfg.pulse)?;
    let sys = &point.system;
    let k = sys.n_subcarriers;
    let mut schemes = Vec::new();
    for s in [Scheme::Sic, Scheme::SvdMatchedRf, Scheme::SvdMatchedBeams, Scheme::SvdThreeRf, Scheme::FullyDigital] {
        let (b_tx, b_rx, n_rf) = scheme_dims(s, &point);
        let (ops, arch, units) = match s {
            Scheme::Sic => {
                (metrics::complexity_sic(sys.n_streams, b_tx, n_rf, b_rx, k), Architecture::SicPhaseNetwork, b_tx)
            }
            Scheme::FullyDigital => {
                (metrics::complexity_svd(sys.n_rx, sys.n_tx, k), Architecture::FullyDigital, sys.n_tx)
            }
            _ => (metrics::complexity_svd(b_rx, b_tx, k), Architecture::TraditionalSwitch, b_tx),
        };
        let watts = metrics::total_power(&cfg.power, sys.transmit_power_w, n_rf, units, ops, arch);
        schemes.push((s, b_tx, n_rf, ops, watts));
    }
    Ok(PlanReport { n_taps: grid.n_taps, point, schemes })
}
