//! Small dense complex linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// `(m + m^H) / 2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

pub fn frobenius_sq(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

pub fn frobenius(m: &CMat) -> f64 {
    frobenius_sq(m).sqrt()
}

/// Rotate `v` so its largest-magnitude entry is real and positive.
/// The first entry wins a tie.
pub fn fix_phase(v: &mut CVec) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mag * (1.0 + 1e-12) {
            best = i;
            best_mag = m;
        }
    }
    if best_mag > 0.0 {
        let rot = v[best].conj() / best_mag;
        for z in v.iter_mut() {
            *z *= rot;
        }
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
///
/// Eigenvector columns are phase-normalised with [`fix_phase`] so the result
/// does not depend on the backend's arbitrary phase choice.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    assert!(m.is_square(), "hermitian_eigen needs a square matrix");
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col: CVec = eig.eigenvectors.column(src).into_owned();
        fix_phase(&mut col);
        vecs.set_column(dst, &col);
    }
    (values, vecs)
}

/// Right singular vectors of `h` (all of them, as a square unitary matrix)
/// with the squared singular values, descending.
///
/// Computed from the Hermitian eigendecomposition of `h^H h`, so zero modes
/// still come with a completed orthonormal basis.
pub fn right_singular(h: &CMat) -> (Vec<f64>, CMat) {
    let gram = h.adjoint() * h;
    let (mut vals, vecs) = hermitian_eigen(&gram);
    for v in vals.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    (vals, vecs)
}

/// `log2 |m|` for a Hermitian positive definite matrix.
pub fn log2_det_hpd(m: &CMat) -> Result<f64> {
    if m.nrows() == 0 {
        return Ok(0.0);
    }
    let herm = hermitian_part(m);
    let value = match herm.clone().cholesky() {
        Some(ch) => {
            let l = ch.l_dirty();
            2.0 * (0..l.nrows()).map(|i| l[(i, i)].re.log2()).sum::<f64>()
        }
        None => {
            let (vals, _) = hermitian_eigen(&herm);
            if vals.iter().any(|&v| v <= 0.0) {
                return Err(Error::Numeric("log-det of a non positive definite matrix".into()));
            }
            vals.iter().map(|v| v.log2()).sum()
        }
    };
    if !value.is_finite() {
        return Err(Error::Numeric(format!("non-finite log-determinant {value}")));
    }
    Ok(value)
}

/// `log2 |I + s * a^H a|`, evaluated on the smaller of the two Gram matrices.
pub fn log2_det_i_plus_gram(a: &CMat, s: f64) -> Result<f64> {
    let (rows, cols) = a.shape();
    let gram = if cols <= rows { a.adjoint() * a } else { a * a.adjoint() };
    let n = gram.nrows();
    log2_det_hpd(&(identity(n) + gram.scale(s)))
}

/// Solve `t x = b` for Hermitian positive definite `t`.
///
/// Falls back to LU when the Cholesky factorisation breaks down; a residual
/// above `1e-8 * (|b| + 1)` is reported as a numeric error.
pub fn hermitian_solve(t: &CMat, b: &CMat) -> Result<CMat> {
    let herm = hermitian_part(t);
    let x = match herm.clone().cholesky() {
        Some(ch) => ch.solve(b),
        None => {
            herm.clone().lu().solve(b).ok_or_else(|| Error::Numeric("singular system in hermitian_solve".into()))?
        }
    };
    let resid = frobenius(&(&herm * &x - b));
    if resid.is_nan() || resid > 1e-8 * (frobenius(b) + 1.0) {
        return Err(Error::Numeric(format!("hermitian_solve residual {resid:e}")));
    }
    Ok(x)
}

/// `m^{-1/2}` for a Hermitian positive definite matrix.
pub fn inv_sqrt_hpd(m: &CMat) -> Result<CMat> {
    let (vals, vecs) = hermitian_eigen(m);
    let scale = vals.first().copied().unwrap_or(0.0).abs().max(1.0);
    if vals.iter().any(|&v| v <= 1e-14 * scale) {
        return Err(Error::Numeric("inverse square root of a singular matrix".into()));
    }
    let mut scaled = vecs.clone();
    for (j, v) in vals.iter().enumerate() {
        let f = 1.0 / v.sqrt();
        for z in scaled.column_mut(j).iter_mut() {
            *z *= f;
        }
    }
    Ok(&scaled * vecs.adjoint())
}

/// Deterministic pairwise sum.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
