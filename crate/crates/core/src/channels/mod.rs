//! Completely positive maps in operator-sum (Kraus) form.
//!
//! A channel E(ρ) = Σ_k E_k ρ E_k† is stored as its ordered list of noise
//! operators. The Choi matrix uses the block convention R = (E(e_ij))_{ij},
//! so row (i·N + a) and column (j·N + b) of R hold E(|i⟩⟨j|)[a, b].

pub mod builtin;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, orthonormal_completion_vecs, qr_triangle, svd, CMatrix};
use crate::scalar::{Cx, Real};

pub use builtin::*;

/// Ordered list of equal-shape noise operators.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel<T> {
    dim: usize,
    operators: Vec<CMatrix<T>>,
    trace_preserving: bool,
}

impl<T: Real> KrausChannel<T> {
    /// Validates shapes and caches whether Σ E_k†E_k = I within 1e-9·N.
    pub fn new(operators: Vec<CMatrix<T>>) -> Result<Self> {
        let first = operators.first().ok_or_else(|| Error::InvalidParameter("channel needs at least one operator".into()))?;
        let n = first.rows();
        for (k, e) in operators.iter().enumerate() {
            if e.shape() != (n, n) {
                return Err(Error::DimMismatch(format!("operator {k} has shape {:?}, expected {n}x{n}", e.shape())));
            }
            if !e.is_finite() {
                return Err(Error::NonFinite(format!("operator {k}")));
            }
        }
        let mut ch = KrausChannel { dim: n, operators, trace_preserving: false };
        ch.trace_preserving = ch.tp_residual() <= Self::tp_threshold(T::default_tol(), n);
        Ok(ch)
    }

    /// Like [`KrausChannel::new`] but fails unless the map is trace preserving.
    pub fn new_tp(operators: Vec<CMatrix<T>>) -> Result<Self> {
        let ch = Self::new(operators)?;
        ch.require_tp()?;
        Ok(ch)
    }

    fn tp_threshold(tol: T, n: usize) -> T {
        tol * T::lit(n as f64)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[CMatrix<T>] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Cached trace-preservation flag.
    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    pub fn require_tp(&self) -> Result<()> {
        if self.trace_preserving {
            Ok(())
        } else {
            Err(Error::NotTracePreserving(self.tp_residual().as_f64()))
        }
    }

    /// Σ E_k†E_k.
    pub fn adjoint_sum(&self) -> CMatrix<T> {
        self.operators.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, e| &acc + &e.adjoint_mul(e))
    }

    /// E(I) = Σ E_k E_k†.
    pub fn identity_image(&self) -> CMatrix<T> {
        self.operators.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, e| &acc + &e.mul_adjoint(e))
    }

    /// ‖Σ E_k†E_k − I‖_F.
    pub fn tp_residual(&self) -> T {
        self.adjoint_sum().dist(&CMatrix::identity(self.dim))
    }

    /// ‖Σ E_k E_k† − I‖_F.
    pub fn unital_residual(&self) -> T {
        self.identity_image().dist(&CMatrix::identity(self.dim))
    }

    pub fn is_unital(&self, tol: T) -> bool {
        self.unital_residual() <= Self::tp_threshold(tol, self.dim)
    }

    pub fn require_unital(&self, tol: T) -> Result<()> {
        if self.is_unital(tol) {
            Ok(())
        } else {
            Err(Error::NotUnital(self.unital_residual().as_f64()))
        }
    }

    /// E(ρ) = Σ E_k ρ E_k†.
    pub fn apply(&self, rho: &CMatrix<T>) -> Result<CMatrix<T>> {
        if rho.shape() != (self.dim, self.dim) {
            return Err(Error::DimMismatch(format!("input {:?} for a channel on dimension {}", rho.shape(), self.dim)));
        }
        Ok(self.apply_unchecked(rho))
    }

    pub(crate) fn apply_unchecked(&self, rho: &CMatrix<T>) -> CMatrix<T> {
        self.operators
            .iter()
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, e| &acc + &e.matmul(rho).mul_adjoint(e))
    }

    /// N²×N² matrix of the map acting on row-major vectorized operators: Σ E_k ⊗ conj(E_k).
    pub fn superoperator(&self) -> CMatrix<T> {
        let n2 = self.dim * self.dim;
        self.operators.iter().fold(CMatrix::zeros(n2, n2), |acc, e| &acc + &e.kron(&e.conj()))
    }

    /// Choi matrix with block (i, j) equal to E(|i⟩⟨j|).
    pub fn choi(&self) -> ChoiMatrix<T> {
        let n = self.dim;
        let n2 = n * n;
        let mut r = CMatrix::zeros(n2, n2);
        for e in &self.operators {
            // |a_k⟩ stacks the columns of E_k: entry i·N + a is E_k[a, i].
            let a: Vec<Cx<T>> = (0..n2).map(|idx| e[(idx % n, idx / n)]).collect();
            for p in 0..n2 {
                if a[p].is_zero() {
                    continue;
                }
                for q in 0..n2 {
                    r[(p, q)] = r[(p, q)] + a[p] * a[q].conj();
                }
            }
        }
        ChoiMatrix { block_dim: n, matrix: r }
    }

    /// Kraus list of the composition `self ∘ first` (apply `first`, then `self`).
    pub fn compose(&self, first: &Self) -> Result<Self> {
        if self.dim != first.dim {
            return Err(Error::DimMismatch(format!("{} vs {}", self.dim, first.dim)));
        }
        let mut ops = Vec::with_capacity(self.len() * first.len());
        for a in &self.operators {
            for b in &first.operators {
                ops.push(a.matmul(b));
            }
        }
        Self::new(ops)
    }

    /// Kraus list of the sum map (concatenation of both lists).
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(format!("{} vs {}", self.dim, other.dim)));
        }
        let mut ops = self.operators.clone();
        ops.extend(other.operators.iter().cloned());
        Self::new(ops)
    }

    /// Appends zero operators until the list has `len` entries.
    pub fn padded(&self, len: usize) -> Self {
        let mut ops = self.operators.clone();
        while ops.len() < len {
            ops.push(CMatrix::zeros(self.dim, self.dim));
        }
        KrausChannel { dim: self.dim, operators: ops, trace_preserving: self.trace_preserving }
    }

    /// New Kraus list F_i = Σ_j u_ij E_j for an r×r matrix u (r = list length).
    pub fn remix(&self, u: &CMatrix<T>) -> Result<Self> {
        let r = self.len();
        if u.shape() != (r, r) {
            return Err(Error::DimMismatch(format!("mixing matrix {:?} for {r} operators", u.shape())));
        }
        let ops = (0..r)
            .map(|i| {
                self.operators
                    .iter()
                    .enumerate()
                    .fold(CMatrix::zeros(self.dim, self.dim), |acc, (j, e)| &acc + &e.scale(u[(i, j)]))
            })
            .collect();
        Self::new(ops)
    }

    /// Marks the channel trace preserving or not, overriding the cached flag
    /// with a decision at tolerance `tol`.
    pub fn with_tolerance(mut self, tol: T) -> Self {
        self.trace_preserving = self.tp_residual() <= Self::tp_threshold(tol, self.dim);
        self
    }

    /// Columns are the row-major vectorized operators.
    fn stacked_vectors(&self, len: usize) -> CMatrix<T> {
        let n2 = self.dim * self.dim;
        CMatrix::from_fn(n2, len, |p, k| if k < self.len() { self.operators[k].data()[p] } else { Cx::zero() })
    }
}

/// Choi matrix R with block (i, j) = E(e_ij).
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix<T> {
    block_dim: usize,
    matrix: CMatrix<T>,
}

impl<T: Real> ChoiMatrix<T> {
    pub fn new(block_dim: usize, matrix: CMatrix<T>) -> Result<Self> {
        let n2 = block_dim * block_dim;
        if matrix.shape() != (n2, n2) {
            return Err(Error::DimMismatch(format!("Choi matrix {:?} for block dimension {block_dim}", matrix.shape())));
        }
        Ok(ChoiMatrix { block_dim, matrix })
    }

    /// Assembles R from an arbitrary linear map given as a closure on N×N matrices.
    pub fn from_map(block_dim: usize, map: impl Fn(&CMatrix<T>) -> CMatrix<T>) -> Self {
        let n = block_dim;
        let mut r = CMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let block = map(&CMatrix::unit(n, i, j));
                r.set_submatrix(i * n, j * n, &block);
            }
        }
        ChoiMatrix { block_dim: n, matrix: r }
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// Block (i, j), i.e. E(|i⟩⟨j|).
    pub fn block(&self, i: usize, j: usize) -> CMatrix<T> {
        let n = self.block_dim;
        self.matrix.submatrix(i * n, j * n, n, n)
    }

    /// Smallest eigenvalue (requires R Hermitian within `tol`).
    pub fn min_eigenvalue(&self, tol: T) -> Result<T> {
        Ok(hermitian_eigen(&self.matrix, tol)?.eigenvalues[0])
    }
}

/// Outcome of [`classify`] and [`classify_choi`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub completely_positive: bool,
    pub trace_preserving: bool,
    pub unital: bool,
}

/// Classifies a Kraus-represented map. Such maps are completely positive by
/// construction; the Choi test is still run for dimension ≤ 16.
pub fn classify<T: Real>(ch: &KrausChannel<T>, tol: T) -> Classification {
    let n = T::lit(ch.dim() as f64);
    let completely_positive = if ch.dim() <= 16 { classify_choi(&ch.choi(), tol).completely_positive } else { true };
    Classification {
        completely_positive,
        trace_preserving: ch.tp_residual() <= tol * n,
        unital: ch.unital_residual() <= tol * n,
    }
}

/// Classifies a linear map from its Choi matrix: CP ⇔ R ⪰ 0, TP ⇔ Tr E(e_ij) = δ_ij,
/// unital ⇔ Σ_i E(e_ii) = I.
pub fn classify_choi<T: Real>(choi: &ChoiMatrix<T>, tol: T) -> Classification {
    let n = choi.block_dim();
    let r = choi.matrix();
    let completely_positive = match hermitian_eigen(r, tol) {
        Ok(e) => {
            let lmax = e.eigenvalues.iter().fold(T::zero(), |m, &l| m.max(l.abs()));
            e.eigenvalues[0] >= -tol * lmax.max(T::one())
        }
        Err(_) => false,
    };
    let mut tp_dev = T::zero();
    let mut image = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let b = choi.block(i, j);
            let target = if i == j { T::one() } else { T::zero() };
            tp_dev += (b.trace() - Complex::new(target, T::zero())).norm_sqr();
            if i == j {
                image = &image + &b;
            }
        }
    }
    let nn = T::lit(n as f64);
    Classification {
        completely_positive,
        trace_preserving: tp_dev.sqrt() <= tol * nn,
        unital: image.dist(&CMatrix::identity(n)) <= tol * nn,
    }
}

/// Kraus operators read off the eigendecomposition of a Choi matrix.
///
/// Each eigenvalue λ_k above `tol · λ_max` contributes |a_k⟩ = √λ_k·v_k, and
/// column i of E_k is the i-th length-N block of |a_k⟩. Operators come out in
/// order of decreasing eigenvalue; their number is the numerical rank of R.
pub fn kraus_from_choi<T: Real>(choi: &ChoiMatrix<T>, tol: T) -> Result<KrausChannel<T>> {
    let n = choi.block_dim();
    let e = hermitian_eigen(choi.matrix(), tol)?;
    let lmax = e.eigenvalues.iter().fold(T::zero(), |m, &l| m.max(l.abs()));
    let lmin = e.eigenvalues[0];
    if lmin < -tol * lmax.max(T::one()) {
        return Err(Error::NotPsd(lmin.as_f64()));
    }
    let mut ops = Vec::new();
    for k in (0..e.eigenvalues.len()).rev() {
        let l = e.eigenvalues[k];
        if l <= tol * lmax || l <= T::zero() {
            continue;
        }
        let s = l.sqrt();
        let v = e.vector(k);
        ops.push(CMatrix::from_fn(n, n, |a, i| v[i * n + a].scale(s)));
    }
    if ops.is_empty() {
        ops.push(CMatrix::zeros(n, n));
    }
    KrausChannel::new(ops)
}

/// ‖choi(a) − choi(b)‖_F, computed through a QR factorization of the stacked
/// vectorized operators so it stays accurate for large N and for equal maps.
pub fn choi_distance<T: Real>(a: &KrausChannel<T>, b: &KrausChannel<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(format!("{} vs {}", a.dim(), b.dim())));
    }
    let n2 = a.dim() * a.dim();
    let (ra, rb) = (a.len(), b.len());
    let total = ra + rb;
    let mut stacked = CMatrix::zeros(n2.max(total), total);
    for (k, e) in a.operators().iter().chain(b.operators()).enumerate() {
        for (p, &z) in e.data().iter().enumerate() {
            stacked[(p, k)] = z;
        }
    }
    // choi(a) − choi(b) is unitarily equivalent to S·J·S† with J = diag(I, −I).
    let s = qr_triangle(&stacked);
    let sj = CMatrix::from_fn(s.rows(), total, |i, k| if k < ra { s[(i, k)] } else { -s[(i, k)] });
    Ok(sj.mul_adjoint(&s).frob_norm())
}

/// Channel equality via the Choi distance, threshold `tol · N`.
pub fn channels_equal<T: Real>(a: &KrausChannel<T>, b: &KrausChannel<T>, tol: T) -> Result<bool> {
    Ok(choi_distance(a, b)? <= tol * T::lit(a.dim() as f64))
}

/// Unitary relating two Kraus lists of the same channel.
#[derive(Clone, Debug)]
pub struct Intertwiner<T> {
    /// r×r unitary with E_i = Σ_j u_ij E'_j.
    pub unitary: CMatrix<T>,
    /// max_i ‖E_i − Σ_j u_ij E'_j‖_F.
    pub residual: T,
    /// ‖U†U − I‖_F.
    pub unitary_residual: T,
}

/// Finds U with E_i = Σ_j u_ij E'_j for `a = {E_i}` and `b = {E'_j}`.
///
/// Both lists are zero-padded to a common length r. With A and B the N²×r
/// matrices of vectorized operators and B = W·S·V_b† a thin SVD, the candidate
/// Uᵀ = V_b·V_a† + C_b·C_a† uses V_a = A†·W·S⁻¹ and orthonormal completions C of
/// both coefficient frames. The result is returned only if the channels are equal
/// and the candidate verifies within `tol · N`.
pub fn kraus_intertwiner<T: Real>(a: &KrausChannel<T>, b: &KrausChannel<T>, tol: T) -> Result<Option<Intertwiner<T>>> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(format!("{} vs {}", a.dim(), b.dim())));
    }
    if !channels_equal(a, b, tol)? {
        return Ok(None);
    }
    let r = a.len().max(b.len());
    let amat = a.stacked_vectors(r);
    let bmat = b.stacked_vectors(r);
    let d = svd(&bmat);
    let rank = d.rank(tol);
    let w = d.u.submatrix(0, 0, d.u.rows(), rank);
    let vb: Vec<Vec<Cx<T>>> = (0..rank).map(|k| d.v.col(k)).collect();
    // V_a = A† W S⁻¹, one column per retained singular value.
    let aw = amat.adjoint_mul(&w);
    let va: Vec<Vec<Cx<T>>> = (0..rank).map(|k| aw.col(k).into_iter().map(|z| z.unscale(d.s[k])).collect()).collect();
    let ca = orthonormal_completion_vecs(r, &va, r - rank);
    let cb = orthonormal_completion_vecs(r, &vb, r - rank);
    if ca.len() != r - rank || cb.len() != r - rank {
        return Ok(None);
    }
    let left = CMatrix::from_columns(r, &[vb, cb].concat());
    let right = CMatrix::from_columns(r, &[va, ca].concat());
    let x = left.mul_adjoint(&right);
    let unitary = x.transpose();

    let bx = bmat.matmul(&x);
    let residual = (0..r)
        .map(|i| {
            let diff: T = (0..bx.rows()).fold(T::zero(), |acc, p| acc + (amat[(p, i)] - bx[(p, i)]).norm_sqr());
            diff.sqrt()
        })
        .fold(T::zero(), |m, v| m.max(v));
    let unitary_residual = unitary.unitary_residual();
    let bound = tol * T::lit(a.dim() as f64);
    if residual <= bound && unitary_residual <= bound {
        Ok(Some(Intertwiner { unitary, residual, unitary_residual }))
    } else {
        Ok(None)
    }
}
