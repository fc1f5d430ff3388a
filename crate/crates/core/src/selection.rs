//! Energy-max beam selection and beam budget sizing.
//!
//! Beam indices are 1-based throughout, matching the DFT grid numbering in
//! [`crate::channel::grid_angle`].

use itertools::Itertools;
use rayon::prelude::*;

use crate::channel::BeamspaceChannel;
use crate::error::{param, Error, Result};
use crate::linalg::{frobenius_sq, CMat};

/// Default limit on the number of (tx, rx) plans the exhaustive search visits.
pub const DEFAULT_EXHAUSTIVE_CAP: f64 = 2e5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionPlan {
    pub tx_beams: Vec<usize>,
    pub rx_beams: Vec<usize>,
    pub subarray_size_tx: usize,
    pub subarray_size_rx: usize,
}

impl SelectionPlan {
    pub fn validate(&self, n_tx: usize, n_rx: usize) -> Result<()> {
        check_indices(&self.tx_beams, n_tx, "tx")?;
        check_indices(&self.rx_beams, n_rx, "rx")?;
        if self.subarray_size_tx == 0 || self.subarray_size_rx == 0 {
            return Err(param("sub-array sizes must be positive"));
        }
        if !self.tx_beams.len().is_multiple_of(self.subarray_size_tx)
            || !self.rx_beams.len().is_multiple_of(self.subarray_size_rx)
        {
            return Err(param("beam count is not a whole number of sub-arrays"));
        }
        Ok(())
    }

    pub fn n_rf_tx(&self) -> usize {
        self.tx_beams.len() / self.subarray_size_tx
    }

    pub fn n_rf_rx(&self) -> usize {
        self.rx_beams.len() / self.subarray_size_rx
    }

    /// Index list rendered as `"3;4;7"` for CSV columns.
    pub fn format_indices(idx: &[usize]) -> String {
        idx.iter().map(|i| i.to_string()).join(";")
    }
}

fn check_indices(idx: &[usize], n: usize, side: &str) -> Result<()> {
    if idx.is_empty() {
        return Err(param(format!("{side} selection is empty")));
    }
    if idx.windows(2).any(|w| w[1] <= w[0]) {
        return Err(param(format!("{side} beam indices must be strictly ascending")));
    }
    if idx[0] == 0 || *idx.last().unwrap() > n {
        return Err(param(format!("{side} beam index outside 1..={n}")));
    }
    Ok(())
}

/// How many beams each side selects and how many RF chains drive them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BeamBudget {
    pub n_beams_tx: usize,
    pub n_beams_rx: usize,
    pub n_rf_tx: usize,
    pub n_rf_rx: usize,
}

impl BeamBudget {
    /// `n` beams per side, each driven by its own RF chain (switch network).
    pub fn one_per_chain(n_tx: usize, n_rx: usize) -> Self {
        BeamBudget { n_beams_tx: n_tx, n_beams_rx: n_rx, n_rf_tx: n_tx, n_rf_rx: n_rx }
    }

    fn subarray_sizes(&self) -> Result<(usize, usize)> {
        if self.n_rf_tx == 0
            || self.n_rf_rx == 0
            || !self.n_beams_tx.is_multiple_of(self.n_rf_tx)
            || !self.n_beams_rx.is_multiple_of(self.n_rf_rx)
        {
            return Err(param(format!(
                "beam counts {}/{} are not divisible by RF counts {}/{}",
                self.n_beams_tx, self.n_beams_rx, self.n_rf_tx, self.n_rf_rx
            )));
        }
        Ok((self.n_beams_tx / self.n_rf_tx, self.n_beams_rx / self.n_rf_rx))
    }
}

/// `ceil(L N B / (2 f_c))`, at least 1.
pub fn required_beam_count(n_paths: usize, n_antennas: usize, bandwidth_hz: f64, carrier_hz: f64) -> usize {
    let raw = n_paths as f64 * n_antennas as f64 * bandwidth_hz / (2.0 * carrier_hz);
    // absorb rounding noise on arguments that are mathematically integral
    let nearest = raw.round();
    let v = if (raw - nearest).abs() < 1e-9 * raw.max(1.0) { nearest } else { raw.ceil() };
    (v as usize).max(1)
}

/// Round `raw_count` up to a whole number of equal sub-arrays per RF chain.
pub fn pad_to_subarrays(raw_count: usize, n_rf: usize) -> usize {
    assert!(raw_count >= 1 && n_rf >= 1, "pad_to_subarrays needs positive inputs");
    n_rf * raw_count.div_ceil(n_rf)
}

/// Diagonal of `(1/K) sum_k H_b^H[k] H_b[k]`.
pub fn tx_beam_energies(ch: &BeamspaceChannel) -> Vec<f64> {
    let mut acc = vec![0.0; ch.n_tx()];
    for h in &ch.mats {
        for (j, e) in acc.iter_mut().enumerate() {
            *e += h.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
    }
    let k = ch.n_subcarriers().max(1) as f64;
    acc.iter().map(|e| e / k).collect()
}

/// Indices (1-based, ascending) of the `n` largest entries; lower index wins ties.
pub fn top_n(values: &[f64], n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    let mut chosen: Vec<usize> = order.into_iter().take(n).map(|i| i + 1).collect();
    chosen.sort_unstable();
    chosen
}

pub fn select_tx(ch: &BeamspaceChannel, n_beams: usize) -> Result<Vec<usize>> {
    if n_beams == 0 || n_beams > ch.n_tx() {
        return Err(param(format!("n_beams {n_beams} outside 1..={}", ch.n_tx())));
    }
    Ok(top_n(&tx_beam_energies(ch), n_beams))
}

/// Diagonal of `(1/K) sum_k H_b[k] S_t S_t^H H_b^H[k]`: receive-beam energy
/// seen through the chosen transmit beams.
pub fn rx_beam_energies(ch: &BeamspaceChannel, tx_beams: &[usize]) -> Result<Vec<f64>> {
    check_indices(tx_beams, ch.n_tx(), "tx")?;
    let mut acc = vec![0.0; ch.n_rx()];
    for h in &ch.mats {
        for &j in tx_beams {
            for (i, e) in acc.iter_mut().enumerate() {
                *e += h[(i, j - 1)].norm_sqr();
            }
        }
    }
    let k = ch.n_subcarriers().max(1) as f64;
    Ok(acc.iter().map(|e| e / k).collect())
}

pub fn select_rx(ch: &BeamspaceChannel, tx_beams: &[usize], n_beams: usize) -> Result<Vec<usize>> {
    if n_beams == 0 || n_beams > ch.n_rx() {
        return Err(param(format!("n_beams {n_beams} outside 1..={}", ch.n_rx())));
    }
    Ok(top_n(&rx_beam_energies(ch, tx_beams)?, n_beams))
}

/// Transmit beams first, then receive beams conditioned on them.
pub fn energy_max_plan(ch: &BeamspaceChannel, budget: BeamBudget) -> Result<SelectionPlan> {
    let (m_tx, m_rx) = budget.subarray_sizes()?;
    let tx_beams = select_tx(ch, budget.n_beams_tx)?;
    let rx_beams = select_rx(ch, &tx_beams, budget.n_beams_rx)?;
    Ok(SelectionPlan { tx_beams, rx_beams, subarray_size_tx: m_tx, subarray_size_rx: m_rx })
}

/// `H~_b[k]`: the selected rows and columns of every `H_b[k]`, in ascending order.
pub fn reduce_channel(ch: &BeamspaceChannel, plan: &SelectionPlan) -> Vec<CMat> {
    ch.mats
        .iter()
        .map(|h| {
            CMat::from_fn(plan.rx_beams.len(), plan.tx_beams.len(), |i, j| {
                h[(plan.rx_beams[i] - 1, plan.tx_beams[j] - 1)]
            })
        })
        .collect()
}

/// Share of the mean channel energy carried by the selected transmit beams.
pub fn tx_captured_fraction(ch: &BeamspaceChannel, tx_beams: &[usize]) -> f64 {
    let e = tx_beam_energies(ch);
    let total: f64 = e.iter().sum();
    if total == 0.0 {
        return 1.0;
    }
    tx_beams.iter().map(|&j| e[j - 1]).sum::<f64>() / total
}

/// Share of the mean channel energy left in the reduced channel.
pub fn joint_captured_fraction(ch: &BeamspaceChannel, plan: &SelectionPlan) -> f64 {
    let total = ch.mean_energy();
    if total == 0.0 {
        return 1.0;
    }
    let reduced = reduce_channel(ch, plan);
    reduced.iter().map(frobenius_sq).sum::<f64>() / reduced.len() as f64 / total
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Exhaustive search over every (tx, rx) beam-set pair.
///
/// Plans are visited in lexicographic order (tx set major, rx set minor) and
/// the first plan reaching the maximum is kept.
pub fn exhaustive_select<F>(ch: &BeamspaceChannel, budget: BeamBudget, cap: f64, evaluator: F) -> Result<SelectionPlan>
where
    F: Fn(&SelectionPlan) -> f64 + Sync,
{
    let (m_tx, m_rx) = budget.subarray_sizes()?;
    let (n_tx, n_rx) = (ch.n_tx(), ch.n_rx());
    if budget.n_beams_tx == 0 || budget.n_beams_tx > n_tx || budget.n_beams_rx == 0 || budget.n_beams_rx > n_rx {
        return Err(param("beam counts outside the channel dimensions"));
    }
    let combos = binomial(n_tx, budget.n_beams_tx) * binomial(n_rx, budget.n_beams_rx);
    if combos > cap {
        return Err(Error::CapExceeded { combinations: combos, cap });
    }
    let tx_sets: Vec<Vec<usize>> = (1..=n_tx).combinations(budget.n_beams_tx).collect();
    let rx_sets: Vec<Vec<usize>> = (1..=n_rx).combinations(budget.n_beams_rx).collect();
    let n_rx_sets = rx_sets.len();
    let best = (0..tx_sets.len() * n_rx_sets)
        .into_par_iter()
        .map(|idx| {
            let plan = SelectionPlan {
                tx_beams: tx_sets[idx / n_rx_sets].clone(),
                rx_beams: rx_sets[idx % n_rx_sets].clone(),
                subarray_size_tx: m_tx,
                subarray_size_rx: m_rx,
            };
            let v = evaluator(&plan);
            (if v.is_nan() { f64::NEG_INFINITY } else { v }, idx)
        })
        .reduce(|| (f64::NEG_INFINITY, usize::MAX), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let idx = best.1.min(tx_sets.len() * n_rx_sets - 1);
    Ok(SelectionPlan {
        tx_beams: tx_sets[idx / n_rx_sets].clone(),
        rx_beams: rx_sets[idx % n_rx_sets].clone(),
        subarray_size_tx: m_tx,
        subarray_size_rx: m_rx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use nalgebra::DMatrix;

    fn constant_channel(h: CMat, k: usize) -> BeamspaceChannel {
        BeamspaceChannel { mats: vec![h; k], per_subcarrier_freq_hz: (0..k).map(|i| 28e9 + i as f64).collect() }
    }

    fn diag_channel(d: &[f64]) -> BeamspaceChannel {
        let n = d.len();
        constant_channel(DMatrix::from_fn(n, n, |i, j| if i == j { c(d[i], 0.0) } else { c(0.0, 0.0) }), 3)
    }

    #[test]
    fn beam_count_examples() {
        assert_eq!(required_beam_count(10, 64, 2e9, 28e9), 23);
        assert_eq!(required_beam_count(1, 2, 28e9 / 1000.0, 28e9), 1);
        assert_eq!(required_beam_count(10, 64, 4e9, 28e9), 46);
        // exactly integral: 1 * 56 * 2e9 / 56e9 = 2
        assert_eq!(required_beam_count(1, 56, 2e9, 28e9), 2);
        assert_eq!(required_beam_count(7, 64, 2.1e9, 28e9), 17);
    }

    #[test]
    fn padding_examples() {
        assert_eq!(pad_to_subarrays(23, 8), 24);
        assert_eq!(pad_to_subarrays(24, 8), 24);
        assert_eq!(pad_to_subarrays(46, 8), 48);
        assert_eq!(pad_to_subarrays(1, 1), 1);
    }

    #[test]
    fn energies_and_trace_identity() {
        let ch = diag_channel(&[2.0, 1.0, 3.0, 0.5]);
        let e = tx_beam_energies(&ch);
        assert_eq!(e, vec![4.0, 1.0, 9.0, 0.25]);
        assert!((e.iter().sum::<f64>() - ch.mean_energy()).abs() < 1e-12);
        let zero = constant_channel(CMat::zeros(3, 3), 2);
        assert!(tx_beam_energies(&zero).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn top_n_examples() {
        assert_eq!(top_n(&[4.0, 1.0, 3.0, 2.0], 2), vec![1, 3]);
        assert_eq!(top_n(&[4.0, 1.0, 3.0, 2.0], 4), vec![1, 2, 3, 4]);
        assert_eq!(top_n(&[2.0, 2.0, 1.0], 1), vec![1]);
    }

    #[test]
    fn select_tx_range_errors() {
        let ch = diag_channel(&[1.0, 2.0]);
        assert!(select_tx(&ch, 0).is_err());
        assert!(select_tx(&ch, 3).is_err());
        assert_eq!(select_tx(&ch, 2).unwrap(), vec![1, 2]);
    }

    #[test]
    fn rx_energies_examples() {
        let h = DMatrix::from_fn(3, 4, |i, j| c(i as f64 + 1.0, j as f64 - 1.0));
        let ch = constant_channel(h.clone(), 2);
        let all = rx_beam_energies(&ch, &[1, 2, 3, 4]).unwrap();
        let gram = &h * h.adjoint();
        for i in 0..3 {
            assert!((all[i] - gram[(i, i)].re).abs() < 1e-12);
        }
        let part = rx_beam_energies(&ch, &[2]).unwrap();
        assert!(part.iter().zip(&all).all(|(p, a)| p < a));
        assert!(rx_beam_energies(&ch, &[5]).is_err());
        assert!(rx_beam_energies(&ch, &[2, 1]).is_err());
        assert_eq!(select_rx(&ch, &[1, 2, 3, 4], 1).unwrap(), vec![3]);
    }

    #[test]
    fn reduce_channel_examples() {
        let h = DMatrix::from_fn(3, 3, |i, j| c((3 * i + j) as f64, 0.0));
        let ch = constant_channel(h.clone(), 2);
        let full = SelectionPlan {
            tx_beams: vec![1, 2, 3],
            rx_beams: vec![1, 2, 3],
            subarray_size_tx: 1,
            subarray_size_rx: 1,
        };
        assert_eq!(reduce_channel(&ch, &full)[0], h);
        let one = SelectionPlan { tx_beams: vec![2], rx_beams: vec![3], subarray_size_tx: 1, subarray_size_rx: 1 };
        let r = reduce_channel(&ch, &one);
        assert_eq!(r[1].shape(), (1, 1));
        assert_eq!(r[1][(0, 0)], h[(2, 1)]);
    }

    #[test]
    fn energy_max_plan_layout() {
        let ch = diag_channel(&[1.0, 5.0, 3.0, 4.0, 2.0, 0.1]);
        let budget = BeamBudget { n_beams_tx: 4, n_beams_rx: 4, n_rf_tx: 2, n_rf_rx: 2 };
        let plan = energy_max_plan(&ch, budget).unwrap();
        assert_eq!(plan.tx_beams, vec![2, 3, 4, 5]);
        assert_eq!(plan.rx_beams, vec![2, 3, 4, 5]);
        assert_eq!((plan.subarray_size_tx, plan.n_rf_tx()), (2, 2));
        plan.validate(6, 6).unwrap();
        let bad = BeamBudget { n_beams_tx: 3, ..budget };
        assert!(energy_max_plan(&ch, bad).is_err());
    }

    #[test]
    fn exhaustive_examples() {
        let ch = diag_channel(&[2.0, 1.0]);
        let budget = BeamBudget::one_per_chain(1, 1);
        let energy = |p: &SelectionPlan| frobenius_sq(&reduce_channel(&ch, p)[0]);
        let plan = exhaustive_select(&ch, budget, DEFAULT_EXHAUSTIVE_CAP, energy).unwrap();
        assert_eq!((plan.tx_beams, plan.rx_beams), (vec![1], vec![1]));

        let ch4 = diag_channel(&[1.0, 1.0, 1.0, 1.0]);
        let plan = exhaustive_select(&ch4, BeamBudget::one_per_chain(2, 2), DEFAULT_EXHAUSTIVE_CAP, |_| 1.0).unwrap();
        assert_eq!((plan.tx_beams, plan.rx_beams), (vec![1, 2], vec![1, 2]));

        let big = diag_channel(&[1.0; 32]);
        let err =
            exhaustive_select(&big, BeamBudget::one_per_chain(4, 4), DEFAULT_EXHAUSTIVE_CAP, |_| 0.0).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
        assert!(err.to_string().contains("200000"));
    }

    #[test]
    fn captured_fraction_full_selection_is_one() {
        let ch = diag_channel(&[1.0, 2.0, 3.0]);
        assert!((tx_captured_fraction(&ch, &[1, 2, 3]) - 1.0).abs() < 1e-15);
        let plan = SelectionPlan {
            tx_beams: vec![1, 2, 3],
            rx_beams: vec![1, 2, 3],
            subarray_size_tx: 1,
            subarray_size_rx: 1,
        };
        assert!((joint_captured_fraction(&ch, &plan) - 1.0).abs() < 1e-15);
    }
}
