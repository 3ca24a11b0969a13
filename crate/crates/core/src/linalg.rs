//! Dense complex linear algebra helpers shared by every module.

use alloc::vec::Vec;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat = DMatrix<C64>;

/// Default absolute tolerance; comparisons use `tol * (1 + scale)`.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Relative cutoff below which Gram eigenvalues and singular values count as zero.
pub const RANK_CUTOFF: f64 = 1e-8;
/// Largest principal angle accepted when comparing subspaces.
pub const ANGLE_TOLERANCE: f64 = 1e-7;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn cx(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn eye(n: usize) -> Mat {
    Mat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> Mat {
    Mat::zeros(r, c)
}

pub fn from_real(r: usize, cols: usize, data: &[f64]) -> Mat {
    Mat::from_row_iterator(r, cols, data.iter().map(|&x| c(x)))
}

/// Threshold `tol * (1 + scale)`.
pub fn threshold(tol: f64, scale: f64) -> f64 {
    tol * (1.0 + scale)
}

/// Operator (spectral) norm; zero for empty matrices.
pub fn op_norm(m: &Mat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    sv.iter().cloned().fold(0.0, f64::max)
}

pub fn singular_values(m: &Mat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().cloned().collect()
}

/// ‖A − A*‖.
pub fn hermitian_residual(m: &Mat) -> f64 {
    op_norm(&(m - m.adjoint()))
}

pub fn symmetrize(m: &Mat) -> Mat {
    (m + m.adjoint()) * c(0.5)
}

/// Eigendecomposition of the symmetrized matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

pub fn herm_eig(m: &Mat) -> HermEig {
    let n = m.nrows();
    if n == 0 {
        return HermEig { values: Vec::new(), vectors: zeros(0, 0) };
    }
    let e = SymmetricEigen::new(symmetrize(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let values = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let mut vectors = zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &e.eigenvectors.column(i));
    }
    HermEig { values, vectors }
}

/// Smallest eigenvalue of the symmetrized matrix; `+inf` for the empty matrix.
pub fn min_eigenvalue(m: &Mat) -> f64 {
    herm_eig(m).values.first().cloned().unwrap_or(f64::INFINITY)
}

pub fn max_eigenvalue(m: &Mat) -> f64 {
    herm_eig(m).values.last().cloned().unwrap_or(0.0)
}

/// Result of a positive-semidefiniteness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdOutcome {
    pub min_eigenvalue: f64,
    pub hermitian_residual: f64,
    pub scale: f64,
    pub pass: bool,
    /// The tested matrix is 0×0.
    pub empty: bool,
}

impl PsdOutcome {
    /// Amount by which the matrix fails to be positive (zero when it passes cleanly).
    pub fn violation(&self) -> f64 {
        if self.empty {
            0.0
        } else {
            (-self.min_eigenvalue).max(0.0).max(self.hermitian_residual)
        }
    }
}

pub fn psd_test(m: &Mat, tol: f64) -> PsdOutcome {
    if m.nrows() == 0 {
        return PsdOutcome {
            min_eigenvalue: f64::INFINITY,
            hermitian_residual: 0.0,
            scale: 0.0,
            pass: true,
            empty: true,
        };
    }
    let scale = op_norm(m);
    let thr = threshold(tol, scale);
    let hres = hermitian_residual(m);
    let min = min_eigenvalue(m);
    PsdOutcome { min_eigenvalue: min, hermitian_residual: hres, scale, pass: hres <= thr && min >= -thr, empty: false }
}

/// Applies `f` to the eigenvalues of a Hermitian matrix.
pub fn herm_fn(m: &Mat, f: impl Fn(f64) -> f64) -> Mat {
    let e = herm_eig(m);
    let n = m.nrows();
    let mut d = zeros(n, n);
    for (i, &v) in e.values.iter().enumerate() {
        d[(i, i)] = c(f(v));
    }
    &e.vectors * d * e.vectors.adjoint()
}

pub fn sqrt_psd(m: &Mat) -> Mat {
    herm_fn(m, |v| libm::sqrt(v.max(0.0)))
}

/// Inverse of a Hermitian positive definite matrix, or `None` when its smallest
/// eigenvalue is below the rank cutoff.
pub fn inv_hpd(m: &Mat) -> Option<Mat> {
    let e = herm_eig(m);
    let top = e.values.last().cloned().unwrap_or(0.0);
    if let Some(&low) = e.values.first() {
        if low <= RANK_CUTOFF * top.max(1.0) {
            return None;
        }
    }
    Some(herm_fn(m, |v| 1.0 / v))
}

pub fn inv_sqrt_hpd(m: &Mat) -> Option<Mat> {
    inv_hpd(m)?;
    Some(herm_fn(m, |v| 1.0 / libm::sqrt(v)))
}

/// `I_n ⊗ X`, with index `(i, p) ↦ i * rows(X) + p`.
pub fn kron_eye_left(n: usize, x: &Mat) -> Mat {
    let (r, cc) = x.shape();
    let mut out = zeros(n * r, n * cc);
    for i in 0..n {
        out.view_mut((i * r, i * cc), (r, cc)).copy_from(x);
    }
    out
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

pub fn hstack(blocks: &[&Mat]) -> Mat {
    let rows = blocks.first().map(|b| b.nrows()).unwrap_or(0);
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let mut off = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hstack row mismatch");
        out.view_mut((0, off), b.shape()).copy_from(*b);
        off += b.ncols();
    }
    out
}

pub fn vstack(blocks: &[&Mat]) -> Mat {
    let cols = blocks.first().map(|b| b.ncols()).unwrap_or(0);
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(rows, cols);
    let mut off = 0;
    for b in blocks {
        assert_eq!(b.ncols(), cols, "vstack column mismatch");
        out.view_mut((off, 0), b.shape()).copy_from(*b);
        off += b.nrows();
    }
    out
}

pub fn block_diag(blocks: &[&Mat]) -> Mat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let (mut r, mut cc) = (0, 0);
    for b in blocks {
        out.view_mut((r, cc), b.shape()).copy_from(*b);
        r += b.nrows();
        cc += b.ncols();
    }
    out
}

/// Another orthonormal basis for the span of the orthonormal columns of
/// `range`, chosen by pivoted Gram–Schmidt on the projected standard basis
/// vectors so that it is as close to the standard basis as possible.
pub fn canonical_range_basis(range: &Mat) -> Mat {
    let n = range.nrows();
    let r = range.ncols();
    if r == 0 {
        return zeros(n, 0);
    }
    let proj = range * range.adjoint();
    let mut cols: Vec<nalgebra::DVector<C64>> = (0..n).map(|x| proj.column(x).into_owned()).collect();
    let mut picked: Vec<(usize, nalgebra::DVector<C64>)> = Vec::with_capacity(r);
    for _ in 0..r {
        let mut best = 0;
        let mut best_norm = -1.0;
        for (x, v) in cols.iter().enumerate() {
            let nv = v.norm();
            if nv > best_norm + 1e-12 {
                best = x;
                best_norm = nv;
            }
        }
        let q = &cols[best] / c(best_norm);
        for v in cols.iter_mut() {
            let coef = q.dotc(v);
            *v -= &q * coef;
        }
        picked.push((best, q));
    }
    picked.sort_by_key(|(x, _)| *x);
    let mut out = zeros(n, r);
    for (k, (_, q)) in picked.iter().enumerate() {
        out.set_column(k, q);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_eye_matches_kronecker() {
        let x = from_real(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(kron_eye_left(3, &x), kron(&eye(3), &x));
    }

    #[test]
    fn psd_detects_negative_direction() {
        let m = from_real(2, 2, &[1.0, 0.0, 0.0, -0.5]);
        let out = psd_test(&m, DEFAULT_TOLERANCE);
        assert!(!out.pass);
        assert!((out.min_eigenvalue + 0.5).abs() < 1e-12);
    }

    #[test]
    fn inverse_square_root_of_diagonal() {
        let m = from_real(2, 2, &[4.0, 0.0, 0.0, 9.0]);
        let r = inv_sqrt_hpd(&m).unwrap();
        assert!((r[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!((r[(1, 1)].re - 1.0 / 3.0).abs() < 1e-12);
        assert!(inv_hpd(&from_real(2, 2, &[1.0, 0.0, 0.0, 0.0])).is_none());
    }

    #[test]
    fn canonical_basis_of_coordinate_projection() {
        let mut p = zeros(3, 1);
        p[(2, 0)] = cx(0.0, 1.0);
        let b = canonical_range_basis(&p);
        assert!((b[(2, 0)] - c(1.0)).norm() < 1e-12);
    }
}
