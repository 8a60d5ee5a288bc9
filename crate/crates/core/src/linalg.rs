//! Dense complex linear algebra helpers on top of `nalgebra`.
//!
//! Bipartite operators use the flat index `i * d_b + j` for the basis
//! vector `|i>|j>`, and bipartite kets are reshaped row-major into
//! `d_a x d_b` coefficient matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entrywise modulus of `a - b`, together with its position.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> (f64, usize, usize) {
    assert_eq!(a.shape(), b.shape());
    let mut best = (0.0, 0, 0);
    for r in 0..a.nrows() {
        for col in 0..a.ncols() {
            let v = (a[(r, col)] - b[(r, col)]).norm();
            if v > best.0 {
                best = (v, r, col);
            }
        }
    }
    best
}

pub fn hermiticity_defect(m: &CMat) -> f64 {
    max_abs_diff(m, &m.adjoint()).0
}

pub fn unitarity_defect(u: &CMat) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &CMat::identity(n, n)).0
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted ascending.
///
/// Only the lower triangle is read; the input is symmetrized first so that
/// round-off asymmetry does not bias the result.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix, sorted ascending.
pub fn eigvalsh(m: &CMat) -> Vec<f64> {
    let sym = (m + m.adjoint()).scale(0.5);
    let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Nearest unitary in Frobenius norm: `U V^H` from the SVD `M = U S V^H`.
pub fn polar_unitary(m: &CMat) -> CMat {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    u * v_t
}

/// Row-major flattening of a square matrix into a vector of length `n * n`.
pub fn vec_rows(m: &CMat) -> CVec {
    let (r, c) = m.shape();
    CVec::from_fn(r * c, |k, _| m[(k / c, k % c)])
}

/// Inverse of [`vec_rows`].
pub fn unvec_rows(v: &CVec, rows: usize, cols: usize) -> CMat {
    assert_eq!(v.len(), rows * cols);
    CMat::from_fn(rows, cols, |r, col| v[r * cols + col])
}

/// Multiply a vector by a unit-modulus phase so that its first entry with
/// modulus at least half the maximum becomes real and positive.
pub fn fix_phase(v: &mut CVec) {
    let max = v.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    if max == 0.0 {
        return;
    }
    if let Some(pivot) = v.iter().find(|z| z.norm() >= 0.5 * max) {
        let phase = pivot.conj() / pivot.norm();
        v.iter_mut().for_each(|z| *z *= phase);
    }
}
