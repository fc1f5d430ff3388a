//! Beamspace precoding for the phase shifter-aided selection network.
//!
//! Each RF chain drives `m` selected beams through pairs of phase shifters,
//! so the analog precoder `F_PS` is block diagonal with one `m`-entry block
//! per stream. The block of column `n` is designed by successive
//! interference cancellation: with `R = Q^H Q` the band-averaged Gram matrix
//! of the reduced channel,
//!
//! ```text
//! log2|I + s F^H R F| = sum_n log2(1 + s f_n^H G_n f_n),
//! G_n = Q^H T_n^{-1} Q,   T_n = I + s Q F_{n-1} F_{n-1}^H Q^H,   T_1 = I,
//! ```
//!
//! and every `f_n` maximises its own term given the columns already fixed,
//! which is the leading eigenvector of the principal sub-block of `G_n` on
//! the column's support.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::linalg::{self, c, hermitian_eigen, hermitian_part, identity, CMat, CVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubarrayLayout {
    pub n_streams: usize,
    pub subarray_size: usize,
}

impl SubarrayLayout {
    pub fn n_beams(&self) -> usize {
        self.n_streams * self.subarray_size
    }

    /// Row range (0-based, half open) of column `col`'s block.
    pub fn rows_of(&self, col: usize) -> std::ops::Range<usize> {
        col * self.subarray_size..(col + 1) * self.subarray_size
    }

    pub fn in_support(&self, row: usize, col: usize) -> bool {
        row / self.subarray_size == col
    }
}

/// Phases of the two shifters realising one precoder entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePair {
    pub row: usize,
    pub col: usize,
    pub beta1: f64,
    pub beta2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhasePrecoder {
    pub mat: CMat,
    pub layout: SubarrayLayout,
    /// One pair per support entry, column by column.
    pub phase_pairs: Vec<PhasePair>,
}

impl PhasePrecoder {
    /// Assemble from dense block entries and derive every phase pair.
    pub fn from_blocks(layout: SubarrayLayout, blocks: &[CVec]) -> Result<Self> {
        if blocks.len() != layout.n_streams || blocks.iter().any(|b| b.len() != layout.subarray_size) {
            return Err(param("block list does not match the sub-array layout"));
        }
        let mut mat = CMat::zeros(layout.n_beams(), layout.n_streams);
        let mut phase_pairs = Vec::with_capacity(layout.n_beams());
        for (col, block) in blocks.iter().enumerate() {
            for (off, row) in layout.rows_of(col).enumerate() {
                let v = block[off];
                mat[(row, col)] = v;
                let (beta1, beta2) = phase_pair(v)?;
                phase_pairs.push(PhasePair { row, col, beta1, beta2 });
            }
        }
        Ok(PhasePrecoder { mat, layout, phase_pairs })
    }

    /// The matrix the shifter network actually produces from its phases.
    pub fn realized(&self) -> CMat {
        let mut m = CMat::zeros(self.mat.nrows(), self.mat.ncols());
        for p in &self.phase_pairs {
            m[(p.row, p.col)] = c(p.beta1.cos() + p.beta2.cos(), p.beta1.sin() + p.beta2.sin());
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasebandPrecoder {
    pub mats: Vec<CMat>,
    /// Diagonal of `Gamma_eff[k]` (per-stream amplitude).
    pub power_alloc: Vec<Vec<f64>>,
    /// Subcarriers whose effective channel lost rank.
    pub rank_deficient: Vec<bool>,
}

impl BasebandPrecoder {
    pub fn any_rank_deficient(&self) -> bool {
        self.rank_deficient.iter().any(|&r| r)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerAllocation {
    /// `Gamma_eff = I`, the high-SNR choice.
    #[default]
    #[serde(alias = "identity_high_snr")]
    Identity,
    #[serde(alias = "water_fill")]
    Waterfill,
}

/// `R = (1/K) sum_k H~^H[k] H~[k]`.
pub fn average_gram(reduced: &[CMat]) -> Result<CMat> {
    let first = reduced.first().ok_or_else(|| param("empty channel stack"))?;
    let n = first.ncols();
    let mut acc = CMat::zeros(n, n);
    for h in reduced {
        if h.ncols() != n {
            return Err(param("reduced channels differ in width"));
        }
        acc += h.adjoint() * h;
    }
    Ok(hermitian_part(&acc).unscale(reduced.len() as f64))
}

/// `Q` with `Q^H Q = R`, from the eigendecomposition `R = V L V^H` as
/// `Q = L^{1/2} V^H`.
///
/// Rounding-level negative eigenvalues are clamped to zero rather than lifted
/// to a positive floor: `T_n = I + s Q F F^H Q^H` is positive definite for any
/// `Q`, and a floor would add `s * eps` per null-space stream to every
/// subproblem term. Anything below `-1e-8 |R|` means `R` was not PSD and is
/// an error.
pub fn factor(r: &CMat) -> Result<CMat> {
    if !r.is_square() {
        return Err(param("factor needs a square matrix"));
    }
    let (vals, vecs) = hermitian_eigen(r);
    let norm = linalg::frobenius(r);
    if let Some(&low) = vals.last() {
        if low < -1e-8 * norm {
            return Err(Error::Numeric(format!("matrix is indefinite (eigenvalue {low:e})")));
        }
    }
    let mut q = vecs.adjoint();
    for (i, &v) in vals.iter().enumerate() {
        let s = v.max(0.0).sqrt();
        for z in q.row_mut(i).iter_mut() {
            *z *= s;
        }
    }
    Ok(q)
}

/// `log2 |I + s F^H R F|`, the band-averaged bound the SIC design maximises.
pub fn bound_objective(r: &CMat, f: &CMat, snr_scale: f64) -> Result<f64> {
    let inner = f.adjoint() * r * f;
    linalg::log2_det_hpd(&(identity(inner.nrows()) + inner.scale(snr_scale)))
}

/// State of the column-by-column design after `n - 1` columns are fixed.
#[derive(Debug, Clone)]
pub struct SicState {
    pub q: CMat,
    /// `T_n`, square in the beam dimension.
    pub t_n: CMat,
    pub g_n: CMat,
    /// Columns `f_1 .. f_{n-1}`.
    pub partial: Vec<CVec>,
    pub layout: SubarrayLayout,
    pub snr_scale: f64,
}

impl SicState {
    pub fn new(r: &CMat, layout: SubarrayLayout, snr_scale: f64) -> Result<Self> {
        if layout.n_streams == 0 || layout.subarray_size == 0 {
            return Err(param("layout needs at least one stream and one beam per stream"));
        }
        if r.nrows() != layout.n_beams() || !r.is_square() {
            return Err(param(format!(
                "R is {}x{} but the layout needs {} beams",
                r.nrows(),
                r.ncols(),
                layout.n_beams()
            )));
        }
        if !(snr_scale.is_finite() && snr_scale >= 0.0) {
            return Err(param("snr_scale must be finite and non-negative"));
        }
        let q = factor(r)?;
        let n = q.nrows();
        let t_n = identity(n);
        let g_n = hermitian_part(&(q.adjoint() * &q));
        Ok(SicState { q, t_n, g_n, partial: Vec::new(), layout, snr_scale })
    }

    /// Index (0-based) of the column designed next.
    pub fn column(&self) -> usize {
        self.partial.len()
    }

    pub fn is_done(&self) -> bool {
        self.partial.len() == self.layout.n_streams
    }

    /// `G_n` restricted to the current column's support.
    pub fn block(&self) -> CMat {
        let rows = self.layout.rows_of(self.column());
        let m = self.layout.subarray_size;
        CMat::from_fn(m, m, |i, j| self.g_n[(rows.start + i, rows.start + j)])
    }

    /// Unit vector maximising `f^H G f` on the block.
    ///
    /// A block that is a multiple of the identity (the all-zero block
    /// included) returns the first basis vector.
    pub fn solve_block(&self) -> CVec {
        let g = self.block();
        let m = g.nrows();
        let (vals, vecs) = hermitian_eigen(&g);
        let spread = vals[0] - vals[m - 1];
        let scale = vals[0].abs().max(f64::MIN_POSITIVE);
        let off_diag = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| g[(i, j)].norm())
            .fold(0.0, f64::max);
        if spread <= 1e-12 * scale && off_diag <= 1e-12 * scale || vals[0] <= 0.0 {
            let mut e = CVec::zeros(m);
            e[0] = c(1.0, 0.0);
            return e;
        }
        vecs.column(0).into_owned()
    }

    fn embed(&self, block: &CVec) -> CVec {
        let mut f = CVec::zeros(self.layout.n_beams());
        for (off, row) in self.layout.rows_of(self.column()).enumerate() {
            f[row] = block[off];
        }
        f
    }

    /// Fix the current column to `block` and advance; returns the
    /// subproblem value `log2(1 + s f^H G_n f)`.
    pub fn push(&mut self, block: &CVec) -> Result<f64> {
        if self.is_done() {
            return Err(param("all columns are already fixed"));
        }
        if block.len() != self.layout.subarray_size {
            return Err(param("block length does not match the sub-array size"));
        }
        let f = self.embed(block);
        let gain = (f.adjoint() * &self.g_n * &f)[(0, 0)].re;
        let term = (1.0 + self.snr_scale * gain).log2();
        let qf = &self.q * &f;
        self.t_n += (&qf * qf.adjoint()).scale(self.snr_scale);
        self.t_n = hermitian_part(&self.t_n);
        self.partial.push(f);
        if !self.is_done() {
            let x = linalg::hermitian_solve(&self.t_n, &self.q)?;
            self.g_n = hermitian_part(&(self.q.adjoint() * x));
        }
        Ok(term)
    }
}

#[derive(Debug, Clone)]
pub struct SicOutcome {
    pub precoder: PhasePrecoder,
    /// Per-column subproblem values; they sum to the bound objective.
    pub terms: Vec<f64>,
}

pub fn sic_precoder(r: &CMat, layout: SubarrayLayout, snr_scale: f64) -> Result<PhasePrecoder> {
    Ok(sic_precoder_with_terms(r, layout, snr_scale)?.precoder)
}

pub fn sic_precoder_with_terms(r: &CMat, layout: SubarrayLayout, snr_scale: f64) -> Result<SicOutcome> {
    let mut state = SicState::new(r, layout, snr_scale)?;
    let mut blocks = Vec::with_capacity(layout.n_streams);
    let mut terms = Vec::with_capacity(layout.n_streams);
    while !state.is_done() {
        let b = state.solve_block();
        terms.push(state.push(&b)?);
        blocks.push(b);
    }
    Ok(SicOutcome { precoder: PhasePrecoder::from_blocks(layout, &blocks)?, terms })
}

/// Phases with `exp(j beta1) + exp(j beta2) = value`.
pub fn phase_pair(value: num_complex::Complex64) -> Result<(f64, f64)> {
    let amp = value.norm();
    if amp > 2.0 + 1e-12 {
        return Err(Error::Infeasible(format!("|{value}| exceeds 2, no phase pair exists")));
    }
    let arg = if amp == 0.0 { 0.0 } else { value.arg() };
    let half = (amp / 2.0).min(1.0).acos();
    Ok((arg + half, arg - half))
}

/// Water-filling over channel gains `g_i` (signal-to-noise per unit power):
/// maximises `sum log(1 + g_i p_i)` subject to `sum p_i = total`.
pub fn water_fill(gains: &[f64], total: f64) -> Vec<f64> {
    let mut order: Vec<usize> = (0..gains.len()).filter(|&i| gains[i] > 0.0).collect();
    if order.is_empty() {
        let n = gains.len().max(1) as f64;
        return vec![total / n; gains.len()];
    }
    order.sort_by(|&a, &b| gains[b].partial_cmp(&gains[a]).unwrap().then(a.cmp(&b)));
    let mut active = order.len();
    let level = loop {
        let inv: f64 = order[..active].iter().map(|&i| 1.0 / gains[i]).sum();
        let mu = (total + inv) / active as f64;
        if mu - 1.0 / gains[order[active - 1]] > 0.0 || active == 1 {
            break mu;
        }
        active -= 1;
    };
    let mut p = vec![0.0; gains.len()];
    for &i in &order[..active] {
        p[i] = (level - 1.0 / gains[i]).max(0.0);
    }
    p
}

fn stream_amplitudes(sq_sing: &[f64], n: usize, budget: f64, snr_scale: f64, mode: PowerAllocation) -> Vec<f64> {
    match mode {
        PowerAllocation::Identity => vec![(budget / n as f64).sqrt(); n],
        PowerAllocation::Waterfill => {
            let gains: Vec<f64> = sq_sing[..n].iter().map(|l| snr_scale * l).collect();
            water_fill(&gains, budget).into_iter().map(f64::sqrt).collect()
        }
    }
}

fn rank_flag(sq_sing: &[f64], n: usize) -> bool {
    let top = sq_sing.first().copied().unwrap_or(0.0);
    top <= 0.0 || sq_sing[n - 1] <= 1e-12 * top
}

/// Scale `f` so that `tr(f^H w f) = budget`, where `w = F_PS^H F_PS`.
fn renormalize(f: CMat, w: Option<&CMat>, budget: f64) -> CMat {
    let tr = match w {
        Some(w) => (f.adjoint() * w * &f).trace().re,
        None => linalg::frobenius_sq(&f),
    };
    if tr > 0.0 {
        f.scale((budget / tr).sqrt())
    } else {
        f
    }
}

/// `F_BB[k] = (F_PS^H F_PS)^{-1/2} V_eff[k] Gamma_eff[k]`, power `N_s` each.
pub fn baseband_precoder(
    reduced: &[CMat],
    fps: &PhasePrecoder,
    snr_scale: f64,
    mode: PowerAllocation,
) -> Result<BasebandPrecoder> {
    let ns = fps.mat.ncols();
    let w = fps.mat.adjoint() * &fps.mat;
    let w_inv_sqrt = linalg::inv_sqrt_hpd(&w)?;
    let mut out = BasebandPrecoder { mats: Vec::new(), power_alloc: Vec::new(), rank_deficient: Vec::new() };
    for h in reduced {
        if h.ncols() != fps.mat.nrows() {
            return Err(param("reduced channel width does not match F_PS"));
        }
        let eff = h * &fps.mat * &w_inv_sqrt;
        let (sq, v) = linalg::right_singular(&eff);
        let amps = stream_amplitudes(&sq, ns, ns as f64, snr_scale, mode);
        let mut f = &w_inv_sqrt * v;
        for (j, a) in amps.iter().enumerate() {
            for z in f.column_mut(j).iter_mut() {
                *z *= *a;
            }
        }
        out.rank_deficient.push(rank_flag(&sq, ns));
        out.mats.push(renormalize(f, Some(&w), ns as f64));
        out.power_alloc.push(amps);
    }
    Ok(out)
}

/// Unconstrained SVD precoding on each subcarrier: the top `n_streams` right
/// singular vectors, scaled to total power `power_budget`.
pub fn svd_baseline(
    reduced: &[CMat],
    n_streams: usize,
    power_budget: f64,
    snr_scale: f64,
    mode: PowerAllocation,
) -> Result<BasebandPrecoder> {
    let mut out = BasebandPrecoder { mats: Vec::new(), power_alloc: Vec::new(), rank_deficient: Vec::new() };
    for h in reduced {
        let min_dim = h.nrows().min(h.ncols());
        if n_streams == 0 || n_streams > min_dim {
            return Err(param(format!("n_streams {n_streams} outside 1..={min_dim}")));
        }
        let (sq, v) = linalg::right_singular(h);
        let amps = stream_amplitudes(&sq, n_streams, power_budget, snr_scale, mode);
        let mut f = v.columns(0, n_streams).into_owned();
        for (j, a) in amps.iter().enumerate() {
            for z in f.column_mut(j).iter_mut() {
                *z *= *a;
            }
        }
        out.rank_deficient.push(rank_flag(&sq, n_streams));
        out.mats.push(renormalize(f, None, power_budget));
        out.power_alloc.push(amps);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;
    use std::f64::consts::PI;

    fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMat {
        CMat::from_fn(rows, cols, |_, _| {
            let x: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            c(x, y) / 2f64.sqrt()
        })
    }

    #[test]
    fn gram_examples() {
        let r = average_gram(&[identity(3)]).unwrap();
        assert_eq!(r, identity(3));
        let z = average_gram(&[CMat::zeros(2, 2), CMat::zeros(2, 2)]).unwrap();
        assert_eq!(z, CMat::zeros(2, 2));
        assert!(average_gram(&[]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let hs: Vec<CMat> = (0..4).map(|_| gaussian(3, 5, &mut rng)).collect();
        let r = average_gram(&hs).unwrap();
        // naive loop oracle
        for a in 0..5 {
            for b in 0..5 {
                let mut s = Complex64::new(0.0, 0.0);
                for h in &hs {
                    for i in 0..3 {
                        s += h[(i, a)].conj() * h[(i, b)];
                    }
                }
                assert!((r[(a, b)] - s / 4.0).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn factor_examples() {
        let q = factor(&identity(3)).unwrap();
        assert!(max_abs_diff(&(q.adjoint() * &q), &identity(3)) < 1e-12);
        let d = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(4.0, 0.0), c(1.0, 0.0)]));
        let q = factor(&d).unwrap();
        assert!(max_abs_diff(&(q.adjoint() * &q), &d) < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = gaussian(4, 1, &mut rng);
        let rank1 = &v * v.adjoint();
        let q = factor(&rank1).unwrap();
        let eps = 1e-10 * rank1.trace().re / 4.0;
        assert!(linalg::frobenius(&(q.adjoint() * &q - &rank1)) <= eps * 4.0);
        let indefinite = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(-0.5, 0.0)]));
        assert!(matches!(factor(&indefinite), Err(Error::Numeric(_))));
    }

    #[test]
    fn phase_pair_examples() {
        let (a, b) = phase_pair(c(2.0, 0.0)).unwrap();
        assert!(a.abs() < 1e-7 && b.abs() < 1e-7);
        let (a, b) = phase_pair(c(0.0, 0.0)).unwrap();
        assert!((a - PI / 2.0).abs() < 1e-15 && (b + PI / 2.0).abs() < 1e-15);
        let (a, b) = phase_pair(c(1.0, 0.0)).unwrap();
        assert!((a - PI / 3.0).abs() < 1e-15 && (b + PI / 3.0).abs() < 1e-15);
        assert!(matches!(phase_pair(c(2.0, 0.1)), Err(Error::Infeasible(_))));
        for v in [c(0.3, -0.8), c(-1.1, 0.2), c(0.0, 1.99)] {
            let (a, b) = phase_pair(v).unwrap();
            let s = Complex64::from_polar(1.0, a) + Complex64::from_polar(1.0, b);
            assert!((s - v).norm() < 1e-12);
        }
    }

    #[test]
    fn single_stream_attains_top_eigenvalue() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let hs: Vec<CMat> = (0..3).map(|_| gaussian(4, 6, &mut rng)).collect();
        let r = average_gram(&hs).unwrap();
        let s = 2.0;
        let out = sic_precoder_with_terms(&r, SubarrayLayout { n_streams: 1, subarray_size: 6 }, s).unwrap();
        let (vals, _) = hermitian_eigen(&r);
        let expected = (1.0 + s * vals[0]).log2();
        let got = bound_objective(&r, &out.precoder.mat, s).unwrap();
        assert!((got - expected).abs() < 1e-10 * expected);
        assert!((out.terms[0] - expected).abs() < 1e-10 * expected);
    }

    #[test]
    fn identity_gram_closed_form() {
        let layout = SubarrayLayout { n_streams: 3, subarray_size: 2 };
        let s = 1.7;
        let out = sic_precoder_with_terms(&identity(6), layout, s).unwrap();
        // each block sees an identity, so the basis vector is chosen
        for col in 0..3 {
            assert_eq!(out.precoder.mat[(2 * col, col)], c(1.0, 0.0));
            assert_eq!(out.precoder.mat[(2 * col + 1, col)], c(0.0, 0.0));
        }
        let closed = 3.0 * (1.0 + s).log2();
        assert!((out.terms.iter().sum::<f64>() - closed).abs() < 1e-12);
        assert!((bound_objective(&identity(6), &out.precoder.mat, s).unwrap() - closed).abs() < 1e-12);
    }

    #[test]
    fn zero_gram_uses_degenerate_rule() {
        let layout = SubarrayLayout { n_streams: 2, subarray_size: 3 };
        let out = sic_precoder(&CMat::zeros(6, 6), layout, 1.0).unwrap();
        assert_eq!(out.mat[(0, 0)], c(1.0, 0.0));
        assert_eq!(out.mat[(3, 1)], c(1.0, 0.0));
    }

    #[test]
    fn sic_rejects_mismatched_layout() {
        let layout = SubarrayLayout { n_streams: 2, subarray_size: 3 };
        assert!(sic_precoder(&identity(5), layout, 1.0).is_err());
    }

    #[test]
    fn sic_state_starts_at_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = gaussian(4, 4, &mut rng);
        let r = average_gram(&[h]).unwrap();
        let mut st = SicState::new(&r, SubarrayLayout { n_streams: 2, subarray_size: 2 }, 3.0).unwrap();
        assert_eq!(st.t_n, identity(4));
        while !st.is_done() {
            let b = st.solve_block();
            st.push(&b).unwrap();
            assert!(st.t_n.clone().cholesky().is_some(), "T_n must stay positive definite");
        }
        assert!(st.push(&CVec::zeros(2)).is_err());
    }

    #[test]
    fn water_fill_closed_form() {
        // singular values {2, 1} -> gains {4, 1}, total power 2, unit noise
        let p = water_fill(&[4.0, 1.0], 2.0);
        assert!((p[0] - 1.375).abs() < 1e-12 && (p[1] - 0.625).abs() < 1e-12);
        // a weak mode is dropped
        let p = water_fill(&[10.0, 0.01], 1.0);
        assert_eq!(p[1], 0.0);
        assert!((p[0] - 1.0).abs() < 1e-12);
        let p = water_fill(&[0.0, 0.0], 2.0);
        assert_eq!(p, vec![1.0, 1.0]);
    }

    #[test]
    fn baseband_identity_effective_channel() {
        let fps = PhasePrecoder::from_blocks(
            SubarrayLayout { n_streams: 2, subarray_size: 1 },
            &[CVec::from_vec(vec![c(1.0, 0.0)]), CVec::from_vec(vec![c(1.0, 0.0)])],
        )
        .unwrap();
        let bb = baseband_precoder(&[identity(2)], &fps, 1.0, PowerAllocation::Identity).unwrap();
        let f = &bb.mats[0];
        // V is any unitary here; its Gram must be the identity
        assert!(max_abs_diff(&(f.adjoint() * f), &identity(2)) < 1e-12);
        assert!(!bb.any_rank_deficient());
    }

    #[test]
    fn svd_baseline_picks_dominant_modes() {
        let h = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(3.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]));
        let bb = svd_baseline(&[h], 2, 2.0, 1.0, PowerAllocation::Identity).unwrap();
        let f = &bb.mats[0];
        assert!(f[(0, 0)].norm() > 0.999 && f[(1, 1)].norm() > 0.999);
        assert!(f[(2, 0)].norm() < 1e-12 && f[(2, 1)].norm() < 1e-12);
        assert!(svd_baseline(&[identity(2)], 3, 3.0, 1.0, PowerAllocation::Identity).is_err());
    }

    #[test]
    fn rank_deficiency_is_flagged() {
        let fps = PhasePrecoder::from_blocks(
            SubarrayLayout { n_streams: 2, subarray_size: 1 },
            &[CVec::from_vec(vec![c(1.0, 0.0)]), CVec::from_vec(vec![c(1.0, 0.0)])],
        )
        .unwrap();
        let h = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let bb = baseband_precoder(&[h], &fps, 1.0, PowerAllocation::Identity).unwrap();
        assert!(bb.rank_deficient[0]);
        let f = &bb.mats[0];
        assert!((f.adjoint() * f).trace().re - 2.0 < 1e-12);
    }
}
