//! Hermitian eigendecomposition, singular value decomposition and the
//! factorizations built on them.
//!
//! Both the eigensolver and the SVD are Jacobi methods: cyclic two-sided
//! rotations for Hermitian matrices, one-sided (Hestenes) rotations for general
//! matrices. Tall inputs are first reduced to a square triangle with Householder
//! QR. Jacobi methods deliver small singular values with absolute error close to
//! machine precision, which is what the rank decisions at 1e-9 need.

use std::cmp::Ordering;

use num_complex::Complex;
use num_traits::{One, Zero};

use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

const MAX_SWEEPS: usize = 80;

pub fn vdot<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> Cx<T> {
    a.iter().zip(b).fold(Cx::zero(), |acc, (x, y)| acc + x.conj() * *y)
}

pub fn vnorm<T: Real>(a: &[Cx<T>]) -> T {
    a.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

fn axpy<T: Real>(y: &mut [Cx<T>], alpha: Cx<T>, x: &[Cx<T>]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

/// Result of [`hermitian_eigen`]: ascending eigenvalues with eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: CMatrix<T>,
}

impl<T: Real> EigenDecomposition<T> {
    pub fn vector(&self, k: usize) -> Vec<Cx<T>> {
        self.eigenvectors.col(k)
    }

    /// V·diag(λ)·V†.
    pub fn reconstruct(&self) -> CMatrix<T> {
        let v = &self.eigenvectors;
        let scaled = CMatrix::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)].scale(self.eigenvalues[j]));
        scaled.mul_adjoint(v)
    }

    /// V·diag(f(λ))·V†.
    pub fn map(&self, f: impl Fn(T) -> Cx<T>) -> CMatrix<T> {
        let v = &self.eigenvectors;
        let fl: Vec<Cx<T>> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let scaled = CMatrix::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] * fl[j]);
        scaled.mul_adjoint(v)
    }
}

/// 2×2 rotation that zeroes the off-diagonal entry `apq` of a Hermitian pair
/// block `[[app, apq], [conj(apq), aqq]]`. Returns (c, s·e^{iφ}).
fn jacobi_rotation<T: Real>(app: T, aqq: T, apq: Cx<T>) -> (T, Cx<T>) {
    let mag = apq.norm();
    let phase = apq.unscale(mag);
    let theta = (aqq - app) / (mag + mag);
    let t = if theta == T::zero() {
        T::one()
    } else {
        theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    (c, phase.scale(t * c))
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues ascend. Inside a cluster of eigenvalues closer than `tol`
/// (relative to the spectral radius) eigenvectors are ordered
/// lexicographically by their entries, and every eigenvector is rotated so that
/// its first entry of maximal modulus is real and positive.
pub fn hermitian_eigen<T: Real>(h: &CMatrix<T>, tol: T) -> Result<EigenDecomposition<T>> {
    if !h.is_square() {
        return Err(Error::ShapeMismatch(format!("eigen of {:?}", h.shape())));
    }
    let res = h.hermitian_residual();
    if res > tol * (T::one() + h.frob_norm()) {
        return Err(Error::NotHermitian(res.as_f64()));
    }
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = CMatrix::<T>::identity(n);
    let scale = a.frob_norm();
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= eps * scale || scale == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                if apq.norm() <= eps * T::lit(0.01) * (app.abs() + aqq.abs()) || apq.norm() == T::zero() {
                    a[(p, q)] = Cx::zero();
                    a[(q, p)] = Cx::zero();
                    continue;
                }
                let (c, se) = jacobi_rotation(app, aqq, apq);
                let cc = Complex::new(c, T::zero());
                // G = [[c, se], [-conj(se), c]] on (p, q); A <- G† A G, V <- V G.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * cc - akq * se.conj();
                    a[(k, q)] = akp * se + akq * cc;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * cc - aqk * se;
                    a[(q, k)] = apk * se.conj() + aqk * cc;
                }
                a[(p, q)] = Cx::zero();
                a[(q, p)] = Cx::zero();
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * cc - vkq * se.conj();
                    v[(k, q)] = vkp * se + vkq * cc;
                }
            }
        }
    }

    let mut pairs: Vec<(T, Vec<Cx<T>>)> = (0..n)
        .map(|k| {
            let mut col = v.col(k);
            normalize_phase(&mut col);
            (a[(k, k)].re, col)
        })
        .collect();
    let radius = pairs.iter().fold(T::zero(), |m, (l, _)| m.max(l.abs()));
    let tie = tol * (T::one() + radius);
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal));
    // Re-sort each tie cluster lexicographically.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && pairs[end].0 - pairs[end - 1].0 <= tie {
            end += 1;
        }
        pairs[start..end].sort_by(|x, y| lex_cmp(&x.1, &y.1));
        start = end;
    }
    let eigenvalues = pairs.iter().map(|p| p.0).collect();
    let columns: Vec<Vec<Cx<T>>> = pairs.into_iter().map(|p| p.1).collect();
    Ok(EigenDecomposition { eigenvalues, eigenvectors: CMatrix::from_columns(n, &columns) })
}

fn lex_cmp<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> Ordering {
    let q = T::lit(1e-12);
    for (x, y) in a.iter().zip(b) {
        for (u, w) in [(x.re, y.re), (x.im, y.im)] {
            if (u - w).abs() > q {
                return w.partial_cmp(&u).unwrap_or(Ordering::Equal);
            }
        }
    }
    Ordering::Equal
}

/// Rotates a vector so that its first entry of (near) maximal modulus is real positive.
pub fn normalize_phase<T: Real>(v: &mut [Cx<T>]) {
    let max = v.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    if max == T::zero() {
        return;
    }
    let cut = max * (T::one() - T::lit(1e-8));
    if let Some(z) = v.iter().find(|z| z.norm() >= cut).copied() {
        let ph = z.conj().unscale(z.norm());
        for e in v.iter_mut() {
            *e = *e * ph;
        }
    }
}

/// Thin singular value decomposition a = U·diag(s)·V† with `s` descending.
/// `u` is m×r and `v` is n×r with r = min(m, n); columns of `u` belonging to
/// numerically zero singular values are filled in by orthonormal completion.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub u: CMatrix<T>,
    pub s: Vec<T>,
    pub v: CMatrix<T>,
}

impl<T: Real> Svd<T> {
    /// Number of singular values above `tol · σ_max`.
    pub fn rank(&self, tol: T) -> usize {
        let smax = self.s.first().copied().unwrap_or(T::zero());
        self.s.iter().filter(|&&s| s > tol * smax && s > T::zero()).count()
    }
}

/// Householder QR of a tall matrix; returns the n×n triangle R and, if asked, thin Q.
fn householder_qr<T: Real>(a: &CMatrix<T>, want_q: bool) -> (CMatrix<T>, Option<CMatrix<T>>) {
    let (m, n) = a.shape();
    // Work column-major for cache friendliness.
    let mut cols = a.columns();
    let mut reflectors: Vec<Vec<Cx<T>>> = Vec::with_capacity(n);
    for k in 0..n.min(m) {
        let x = &cols[k][k..];
        let xnorm = vnorm(x);
        let mut v = x.to_vec();
        if xnorm == T::zero() {
            reflectors.push(vec![Cx::zero(); m - k]);
            continue;
        }
        let x0 = x[0];
        let ph = if x0.norm() == T::zero() { Cx::one() } else { x0.unscale(x0.norm()) };
        let alpha = -ph.scale(xnorm);
        v[0] = v[0] - alpha;
        let vn = vnorm(&v);
        if vn == T::zero() {
            reflectors.push(vec![Cx::zero(); m - k]);
            continue;
        }
        for e in v.iter_mut() {
            *e = e.unscale(vn);
        }
        for col in cols.iter_mut().skip(k) {
            let seg = &mut col[k..];
            let d = vdot(&v, seg);
            axpy(seg, -(d + d), &v);
        }
        reflectors.push(v);
    }
    let r = CMatrix::from_fn(n, n, |i, j| if i <= j && i < m { cols[j][i] } else { Cx::zero() });
    let q = want_q.then(|| {
        let mut qcols: Vec<Vec<Cx<T>>> = (0..n)
            .map(|j| {
                let mut e = vec![Cx::zero(); m];
                e[j] = Cx::one();
                e
            })
            .collect();
        for (k, v) in reflectors.iter().enumerate().rev() {
            for col in qcols.iter_mut() {
                let seg = &mut col[k..];
                let d = vdot(v, seg);
                axpy(seg, -(d + d), v);
            }
        }
        CMatrix::from_columns(m, &qcols)
    });
    (r, q)
}

/// Upper-triangular factor R of a thin QR factorization of a tall matrix
/// (rows ≥ cols). R is cols×cols and satisfies R†R = a†a.
pub fn qr_triangle<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    assert!(a.rows() >= a.cols(), "qr_triangle needs a tall matrix");
    householder_qr(a, false).0
}

/// One-sided Jacobi on the columns of `b` (m×n, m ≥ n). Returns (B·V, V).
fn hestenes<T: Real>(b: &CMatrix<T>) -> (Vec<Vec<Cx<T>>>, Vec<Vec<Cx<T>>>) {
    let n = b.cols();
    let mut cols = b.columns();
    let mut vcols: Vec<Vec<Cx<T>>> = (0..n)
        .map(|j| {
            let mut e = vec![Cx::zero(); n];
            e[j] = Cx::one();
            e
        })
        .collect();
    let eps = T::epsilon() * T::lit(4.0);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = vdot(&cols[i], &cols[i]).re;
                let beta = vdot(&cols[j], &cols[j]).re;
                let gamma = vdot(&cols[i], &cols[j]);
                if gamma.norm() <= eps * (alpha * beta).sqrt() || gamma.norm() == T::zero() {
                    continue;
                }
                rotated = true;
                let (c, se) = jacobi_rotation(alpha, beta, gamma);
                let cc = Complex::new(c, T::zero());
                for (ci, cj) in split_pair(&mut cols, i, j) {
                    let (x, y) = (*ci, *cj);
                    *ci = x * cc - y * se.conj();
                    *cj = x * se + y * cc;
                }
                for (vi, vj) in split_pair(&mut vcols, i, j) {
                    let (x, y) = (*vi, *vj);
                    *vi = x * cc - y * se.conj();
                    *vj = x * se + y * cc;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (cols, vcols)
}

fn split_pair<'a, T>(cols: &'a mut [Vec<T>], i: usize, j: usize) -> impl Iterator<Item = (&'a mut T, &'a mut T)> {
    debug_assert!(i < j);
    let (lo, hi) = cols.split_at_mut(j);
    lo[i].iter_mut().zip(hi[0].iter_mut())
}

/// Thin SVD of an arbitrary complex matrix.
pub fn svd<T: Real>(a: &CMatrix<T>) -> Svd<T> {
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.adjoint());
        return Svd { u: t.v, s: t.s, v: t.u };
    }
    let reduce = m > n + n / 2;
    let (work, q) = if reduce {
        let (r, q) = householder_qr(a, true);
        (r, q)
    } else {
        (a.clone(), None)
    };
    let (bcols, vcols) = hestenes(&work);
    let mut order: Vec<(T, usize)> = bcols.iter().enumerate().map(|(k, c)| (vnorm(c), k)).collect();
    order.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(Ordering::Equal).then(x.1.cmp(&y.1)));
    let s: Vec<T> = order.iter().map(|o| o.0).collect();
    let smax = s.first().copied().unwrap_or(T::zero());
    let cut = smax * T::epsilon() * T::lit(1024.0) * T::lit(n.max(1) as f64);
    let wrows = work.rows();
    let mut ucols: Vec<Vec<Cx<T>>> = Vec::with_capacity(n);
    for &(sv, k) in &order {
        if sv > cut && sv > T::zero() {
            ucols.push(bcols[k].iter().map(|z| z.unscale(sv)).collect());
        }
    }
    let good = ucols.len();
    if good < n {
        let extra = orthonormal_completion_vecs(wrows, &ucols, n - good);
        ucols.extend(extra);
    }
    let mut u = CMatrix::from_columns(wrows, &ucols);
    if let Some(q) = q {
        u = q.matmul(&u);
    }
    let v = CMatrix::from_columns(n, &order.iter().map(|o| vcols[o.1].clone()).collect::<Vec<_>>());
    Svd { u, s, v }
}

/// Orthonormal basis of the numerical null space of `a`.
///
/// A right singular vector belongs to the null space when its singular value is
/// at most `tol · σ_max`; the zero matrix has a full null space.
pub fn null_space_basis<T: Real>(a: &CMatrix<T>, tol: T) -> Vec<Vec<Cx<T>>> {
    null_space_basis_scaled(a, tol, T::zero())
}

/// Like [`null_space_basis`], with the cut taken as `tol * max(σ_max, scale)`.
/// `scale` should be the size of the problem's data, so a matrix that is zero
/// up to roundoff has a full null space instead of a noise-determined one.
pub fn null_space_basis_scaled<T: Real>(a: &CMatrix<T>, tol: T, scale: T) -> Vec<Vec<Cx<T>>> {
    let (m, n) = a.shape();
    let work = if m < n {
        let mut padded = CMatrix::zeros(n, n);
        padded.set_submatrix(0, 0, a);
        padded
    } else {
        a.clone()
    };
    let reduced = if work.rows() > work.cols() + work.cols() / 2 { householder_qr(&work, false).0 } else { work };
    let (bcols, vcols) = hestenes(&reduced);
    let norms: Vec<T> = bcols.iter().map(|c| vnorm(c)).collect();
    let smax = norms.iter().fold(T::zero(), |x, &y| x.max(y)).max(scale);
    let mut idx: Vec<usize> = (0..n).filter(|&k| smax == T::zero() || norms[k] <= tol * smax).collect();
    idx.sort_by(|&x, &y| norms[x].partial_cmp(&norms[y]).unwrap_or(Ordering::Equal).then(x.cmp(&y)));
    idx.into_iter().map(|k| vcols[k].clone()).collect()
}

/// Appends `count` orthonormal vectors to `basis` (assumed orthonormal), taking
/// standard basis vectors in index order and orthogonalizing twice.
pub fn orthonormal_completion_vecs<T: Real>(dim: usize, basis: &[Vec<Cx<T>>], count: usize) -> Vec<Vec<Cx<T>>> {
    let mut all: Vec<Vec<Cx<T>>> = basis.to_vec();
    let mut out = Vec::with_capacity(count);
    let keep = T::lit(0.5) / T::lit(dim.max(1) as f64).sqrt();
    for e in 0..dim {
        if out.len() == count {
            break;
        }
        let mut v = vec![Cx::zero(); dim];
        v[e] = Cx::one();
        for _ in 0..2 {
            for b in &all {
                let d = vdot(b, &v);
                axpy(&mut v, -d, b);
            }
        }
        let nv = vnorm(&v);
        if nv > keep {
            for z in v.iter_mut() {
                *z = z.unscale(nv);
            }
            all.push(v.clone());
            out.push(v);
        }
    }
    // Fallback for pathological inputs: second pass with a lower threshold.
    if out.len() < count {
        for e in 0..dim {
            if out.len() == count {
                break;
            }
            let mut v = vec![Cx::zero(); dim];
            v[e] = Cx::one();
            for _ in 0..2 {
                for b in &all {
                    let d = vdot(b, &v);
                    axpy(&mut v, -d, b);
                }
            }
            let nv = vnorm(&v);
            if nv > T::lit(1e-6) {
                for z in v.iter_mut() {
                    *z = z.unscale(nv);
                }
                all.push(v.clone());
                out.push(v);
            }
        }
    }
    out
}

/// Square unitary whose leading columns are the orthonormal columns of `v`.
pub fn complete_to_unitary<T: Real>(v: &CMatrix<T>) -> CMatrix<T> {
    let n = v.rows();
    let cols = v.columns();
    let extra = orthonormal_completion_vecs(n, &cols, n - cols.len());
    let mut all = cols;
    all.extend(extra);
    CMatrix::from_columns(n, &all)
}

/// Modified Gram–Schmidt with re-orthogonalization. Vectors whose residual
/// falls below `drop · ‖v‖` are skipped; returns the kept orthonormal vectors
/// and the indices of the skipped inputs.
pub fn gram_schmidt<T: Real>(vectors: &[Vec<Cx<T>>], drop: T) -> (Vec<Vec<Cx<T>>>, Vec<usize>) {
    gram_schmidt_scaled(vectors, drop, T::zero())
}

/// Like [`gram_schmidt`], dropping a vector when its remainder is at most
/// `drop * max(‖v‖, scale)`, so vectors that are pure roundoff on the scale of
/// the data are discarded too.
pub fn gram_schmidt_scaled<T: Real>(vectors: &[Vec<Cx<T>>], drop: T, scale: T) -> (Vec<Vec<Cx<T>>>, Vec<usize>) {
    let mut basis: Vec<Vec<Cx<T>>> = Vec::new();
    let mut skipped = Vec::new();
    for (idx, v0) in vectors.iter().enumerate() {
        let n0 = vnorm(v0);
        let mut v = v0.clone();
        for _ in 0..2 {
            for b in &basis {
                let d = vdot(b, &v);
                axpy(&mut v, -d, b);
            }
        }
        let nv = vnorm(&v);
        if n0 == T::zero() || nv <= drop * n0.max(scale) {
            skipped.push(idx);
            continue;
        }
        for z in v.iter_mut() {
            *z = z.unscale(nv);
        }
        basis.push(v);
    }
    (basis, skipped)
}

/// Polar decomposition a = u·p of a square matrix with u unitary and p = √(a†a).
///
/// For singular `a` the unitary factor maps the null directions by orthonormal
/// completion of the range in basis-index order.
pub fn polar<T: Real>(a: &CMatrix<T>) -> Result<(CMatrix<T>, CMatrix<T>)> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!("polar of {:?}", a.shape())));
    }
    let d = svd(a);
    let u = d.u.mul_adjoint(&d.v);
    let vs = CMatrix::from_fn(d.v.rows(), d.v.cols(), |i, j| d.v[(i, j)].scale(d.s[j]));
    let p = vs.mul_adjoint(&d.v);
    Ok((u, p))
}

/// Isometric factor of a tall matrix: a = w·p with w†w = I (m×n), p = √(a†a).
pub fn polar_isometry<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    let d = svd(a);
    d.u.mul_adjoint(&d.v)
}

/// √h for a Hermitian PSD matrix; eigenvalues in [−tol·λ_max, 0) are clamped to 0.
pub fn psd_sqrt<T: Real>(h: &CMatrix<T>, tol: T) -> Result<CMatrix<T>> {
    let e = hermitian_eigen(h, tol)?;
    let lmax = e.eigenvalues.iter().fold(T::zero(), |m, &l| m.max(l.abs()));
    if let Some(&lmin) = e.eigenvalues.first() {
        if lmin < -tol * lmax.max(T::one()) {
            return Err(Error::NotPsd(lmin.as_f64()));
        }
    }
    Ok(e.map(|l| Complex::new(l.max(T::zero()).sqrt(), T::zero())))
}

/// exp(i·θ·h) for Hermitian h.
pub fn expm_i_hermitian<T: Real>(h: &CMatrix<T>, theta: T, tol: T) -> Result<CMatrix<T>> {
    let e = hermitian_eigen(h, tol)?;
    Ok(e.map(|l| Complex::new(T::zero(), theta * l).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, random_matrix, seeded_rng};
    use crate::Matrix;

    fn c(re: f64) -> Cx<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn eigen_of_z_and_h() {
        let z = Matrix::from_real(2, 2, &[1., 0., 0., -1.]).unwrap();
        let e = hermitian_eigen(&z, 1e-9).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 1.0]);
        assert!((e.vector(0)[1] - c(1.0)).norm() < 1e-15);
        assert!((e.vector(1)[0] - c(1.0)).norm() < 1e-15);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = Matrix::from_real(2, 2, &[s, s, s, -s]).unwrap();
        let e = hermitian_eigen(&h, 1e-9).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14 && (e.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_reconstructs_random_hermitian() {
        let mut rng = seeded_rng(7);
        for n in [1, 2, 5, 8, 16] {
            let h: Matrix = random_hermitian(n, &mut rng);
            let e = hermitian_eigen(&h, 1e-9).unwrap();
            let scale = 1.0 + h.frob_norm();
            assert!(e.reconstruct().dist(&h) <= 1e-10 * scale);
            assert!(e.eigenvectors.unitary_residual() <= 1e-10);
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let a = Matrix::from_real(2, 2, &[0., 1., 0., 0.]).unwrap();
        assert!(matches!(hermitian_eigen(&a, 1e-9), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn degenerate_spectrum_is_deterministic() {
        let e = hermitian_eigen(&Matrix::identity(3), 1e-9).unwrap();
        assert_eq!(e.eigenvectors, Matrix::identity(3));
    }

    #[test]
    fn null_space_examples() {
        assert_eq!(null_space_basis(&Matrix::zeros(4, 4), 1e-9).len(), 4);
        assert!(null_space_basis(&Matrix::identity(4), 1e-9).is_empty());
        let noise = Matrix::identity(4).scale_real(1e-17);
        assert!(null_space_basis(&noise, 1e-9).is_empty());
        assert_eq!(null_space_basis_scaled(&noise, 1e-9, 1.0).len(), 4);

        // Commutation with X on 2×2 operators: (X⊗I − I⊗Xᵀ) vec(ρ) = 0, stacked with the adjoint copy.
        let x = Matrix::from_real(2, 2, &[0., 1., 1., 0.]).unwrap();
        let i2 = Matrix::identity(2);
        let k = &x.kron(&i2) - &i2.kron(&x.transpose());
        let mut stacked = Matrix::zeros(8, 4);
        stacked.set_submatrix(0, 0, &k);
        stacked.set_submatrix(4, 0, &k);
        let ns = null_space_basis(&stacked, 1e-9);
        assert_eq!(ns.len(), 2);
        // Span equals {vec(I), vec(X)}.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for target in [vec![c(s), c(0.), c(0.), c(s)], vec![c(0.), c(s), c(s), c(0.)]] {
            let proj: f64 = ns.iter().map(|v| vdot(v, &target).norm_sqr()).sum();
            assert!((proj - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn null_space_of_wide_and_tall() {
        let mut rng = seeded_rng(3);
        let a: Matrix = random_matrix(3, 7, &mut rng);
        let ns = null_space_basis(&a, 1e-9);
        assert_eq!(ns.len(), 4);
        for v in &ns {
            assert!(vnorm(&a.apply(v)) <= 1e-12 * a.frob_norm());
        }
        let b: Matrix = random_matrix(3, 7, &mut rng);
        let tall = Matrix::from_fn(40, 7, |i, j| if i < 3 { b[(i, j)] } else { a[(i % 3, j)] });
        assert_eq!(null_space_basis(&tall, 1e-9).len(), 1);
    }

    #[test]
    fn polar_examples() {
        let mut rng = seeded_rng(11);
        let u0 = crate::random::random_unitary::<f64, _>(4, &mut rng);
        let (u, p) = polar(&u0).unwrap();
        assert!(u.dist(&u0) < 1e-12);
        assert!(p.dist(&Matrix::identity(4)) < 1e-12);

        let d = Matrix::diag_real(&[2.0, 3.0]);
        let (u, p) = polar(&d).unwrap();
        assert!(u.dist(&Matrix::identity(2)) < 1e-14);
        assert!(p.dist(&d) < 1e-14);
    }

    #[test]
    fn polar_of_random_and_singular() {
        let mut rng = seeded_rng(5);
        for rank in [6, 3, 0] {
            let g: Matrix = random_matrix(6, rank.max(1), &mut rng);
            let h: Matrix = random_matrix(rank.max(1), 6, &mut rng);
            let a = if rank == 0 { Matrix::zeros(6, 6) } else { g.matmul(&h) };
            let (u, p) = polar(&a).unwrap();
            assert!(a.dist(&u.matmul(&p)) <= 1e-10 * (1.0 + a.frob_norm()));
            assert!(u.unitary_residual() <= 1e-10);
            let e = hermitian_eigen(&p, 1e-9).unwrap();
            assert!(e.eigenvalues[0] >= -1e-10 * (1.0 + p.frob_norm()));
        }
    }

    #[test]
    fn svd_reconstructs() {
        let mut rng = seeded_rng(9);
        for (m, n) in [(5, 5), (12, 3), (3, 12), (40, 6)] {
            let a: Matrix = random_matrix(m, n, &mut rng);
            let d = svd(&a);
            let us = Matrix::from_fn(d.u.rows(), d.u.cols(), |i, j| d.u[(i, j)].scale(d.s[j]));
            assert!(us.mul_adjoint(&d.v).dist(&a) < 1e-12 * a.frob_norm());
            assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn exp_of_pauli() {
        let z = Matrix::from_real(2, 2, &[1., 0., 0., -1.]).unwrap();
        let u = expm_i_hermitian(&z, 0.3, 1e-9).unwrap();
        assert!((u[(0, 0)] - Complex::new(0.0, 0.3).exp()).norm() < 1e-14);
        assert!((u[(1, 1)] - Complex::new(0.0, -0.3).exp()).norm() < 1e-14);
    }

    #[test]
    fn single_precision_eigen() {
        let mut rng = seeded_rng(1);
        let h: Matrix = random_hermitian(6, &mut rng);
        let h32: CMatrix<f32> = h.cast();
        let e = hermitian_eigen(&h32, 1e-5).unwrap();
        assert!(e.reconstruct().dist(&h32) <= 1e-4 * (1.0 + h32.frob_norm()));
    }
}
