//! Summary statistics over Monte Carlo trials.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{param, Result};

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    crate::linalg::pairwise_sum(xs) / xs.len() as f64
}

/// Sample standard deviation (n - 1 denominator).
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    let sq: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    (crate::linalg::pairwise_sum(&sq) / (xs.len() - 1) as f64).sqrt()
}

pub fn std_error(xs: &[f64]) -> f64 {
    std_dev(xs) / (xs.len() as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub std_error: f64,
    /// Half width of the two-sided 95% t interval.
    pub ci95: f64,
}

pub fn summarize(xs: &[f64]) -> Summary {
    let n = xs.len();
    let se = std_error(xs);
    let ci95 = if n >= 2 {
        let t = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("positive dof");
        t.inverse_cdf(0.975) * se
    } else {
        f64::NAN
    };
    Summary { n, mean: mean(xs), std_error: se, ci95 }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedTest {
    pub mean_diff: f64,
    pub t_stat: f64,
    /// One-sided p-value for `mean(a - b) > 0`.
    pub p_value: f64,
}

/// Paired one-sided t-test of `a > b`.
///
/// Identical samples give `p = 1`; a constant positive difference gives
/// `p = 0`.
pub fn paired_greater(a: &[f64], b: &[f64]) -> Result<PairedTest> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(param("paired test needs two equal-length samples of size >= 2"));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let m = mean(&d);
    let se = std_error(&d);
    if se == 0.0 || !se.is_finite() {
        let p = if m > 0.0 { 0.0 } else { 1.0 };
        let t = if m > 0.0 {
            f64::INFINITY
        } else if m < 0.0 {
            f64::NEG_INFINITY
        } else {
            0.0
        };
        return Ok(PairedTest { mean_diff: m, t_stat: t, p_value: p });
    }
    let t = m / se;
    let dist = StudentsT::new(0.0, 1.0, (d.len() - 1) as f64).expect("positive dof");
    Ok(PairedTest { mean_diff: m, t_stat: t, p_value: 1.0 - dist.cdf(t) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_moments() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(mean(&xs), 2.5);
        assert!((std_dev(&xs) - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(mean(&[]).is_nan());
    }

    #[test]
    fn ci_uses_t_quantile() {
        let s = summarize(&[1.0, 2.0, 3.0]);
        // t_{0.975, 2} = 4.302652729911275
        assert!((s.ci95 - 4.302652729911275 * (1.0 / 3f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn paired_test_direction() {
        let a = [2.0, 3.1, 4.0, 5.2, 6.1];
        let b = [1.0, 2.0, 3.2, 4.0, 5.0];
        let up = paired_greater(&a, &b).unwrap();
        assert!(up.p_value < 0.001);
        let down = paired_greater(&b, &a).unwrap();
        assert!(down.p_value > 0.999);
        assert_eq!(paired_greater(&a, &a).unwrap().p_value, 1.0);
        assert!(paired_greater(&a, &b[..3]).is_err());
    }
}
