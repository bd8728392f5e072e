//! Quantum codes, error detection, the Knill–Laflamme correctability test and
//! synthesis of the recovery channel.
//!
//! All code-space computations work through the isometry V (N×K) instead of the
//! N×N projection, so the 512-dimensional Shor code stays cheap:
//! ‖P E P − λP‖_F = ‖V†EV − λI_K‖_F because V is an isometry.

use std::str::FromStr;

use num_complex::Complex;
use num_traits::One;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{complete_to_unitary, gram_schmidt, hermitian_eigen, polar_isometry, qr_triangle, CMatrix};
use crate::random::{random_density, seeded_rng};
use crate::scalar::{Cx, Real};

/// Subspace C ⊆ C^N given by an isometry V with orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumCode<T> {
    isometry: CMatrix<T>,
    projection: CMatrix<T>,
}

impl<T: Real> QuantumCode<T> {
    /// Orthonormalizes the kets by modified Gram–Schmidt, preserving input order.
    pub fn from_kets(kets: &[Vec<Cx<T>>]) -> Result<Self> {
        let first = kets.first().ok_or_else(|| Error::InvalidParameter("a code needs at least one ket".into()))?;
        let n = first.len();
        if n == 0 {
            return Err(Error::DimMismatch("kets must be nonempty".into()));
        }
        for (k, v) in kets.iter().enumerate() {
            if v.len() != n {
                return Err(Error::DimMismatch(format!("ket {k} has dimension {}, expected {n}", v.len())));
            }
            if !v.iter().all(crate::scalar::is_finite) {
                return Err(Error::NonFinite(format!("ket {k}")));
            }
        }
        let (basis, skipped) = gram_schmidt(kets, T::lit(1e-10));
        if let Some(&k) = skipped.first() {
            return Err(Error::DependentInput(k));
        }
        Ok(Self::from_isometry_unchecked(CMatrix::from_columns(n, &basis)))
    }

    /// Wraps an isometry after checking V†V = I within 1e-10.
    pub fn from_isometry(v: CMatrix<T>) -> Result<Self> {
        let gram = v.adjoint_mul(&v);
        let res = gram.dist(&CMatrix::identity(v.cols()));
        if res > T::lit(1e-10) {
            return Err(Error::InvalidParameter(format!("columns are not orthonormal (residual {res})")));
        }
        Ok(Self::from_isometry_unchecked(v))
    }

    fn from_isometry_unchecked(v: CMatrix<T>) -> Self {
        let projection = v.mul_adjoint(&v);
        QuantumCode { isometry: v, projection }
    }

    pub fn ambient_dim(&self) -> usize {
        self.isometry.rows()
    }

    pub fn code_dim(&self) -> usize {
        self.isometry.cols()
    }

    pub fn isometry(&self) -> &CMatrix<T> {
        &self.isometry
    }

    /// P_C = V·V†.
    pub fn projection(&self) -> &CMatrix<T> {
        &self.projection
    }

    /// V·σ·V† for a K×K operator σ.
    pub fn encode(&self, sigma: &CMatrix<T>) -> Result<CMatrix<T>> {
        let k = self.code_dim();
        if sigma.shape() != (k, k) {
            return Err(Error::DimMismatch(format!("code operator {:?} for code dimension {k}", sigma.shape())));
        }
        Ok(self.isometry.matmul(sigma).mul_adjoint(&self.isometry))
    }

    /// V†·E·V.
    pub fn compress(&self, e: &CMatrix<T>) -> Result<CMatrix<T>> {
        self.check_operator(e)?;
        Ok(self.isometry.adjoint_mul(&e.matmul(&self.isometry)))
    }

    fn check_operator(&self, e: &CMatrix<T>) -> Result<()> {
        let n = self.ambient_dim();
        if e.shape() != (n, n) {
            return Err(Error::DimMismatch(format!("operator {:?} on a code in dimension {n}", e.shape())));
        }
        Ok(())
    }
}

/// Named codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinCode {
    Repetition3,
    Shor9,
}

impl FromStr for BuiltinCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "repetition3" => Ok(BuiltinCode::Repetition3),
            "shor9" => Ok(BuiltinCode::Shor9),
            other => Err(Error::UnknownCode(other.to_string())),
        }
    }
}

/// span{|000⟩, |111⟩} or Shor's nine-qubit code span{|0_L⟩, |1_L⟩}.
pub fn builtin_code<T: Real>(code: BuiltinCode) -> QuantumCode<T> {
    match code {
        BuiltinCode::Repetition3 => {
            let mut v = CMatrix::zeros(8, 2);
            v[(0, 0)] = Cx::one();
            v[(7, 1)] = Cx::one();
            QuantumCode::from_isometry_unchecked(v)
        }
        BuiltinCode::Shor9 => {
            // |0_L⟩ = (|000⟩+|111⟩)^{⊗3}/2√2 and |1_L⟩ = (|000⟩−|111⟩)^{⊗3}/2√2.
            let scale = T::one() / (T::lit(2.0) * T::SQRT_2());
            let mut v = CMatrix::zeros(512, 2);
            for mask in 0..8usize {
                let idx = (0..3).fold(0usize, |acc, b| (acc << 3) | if mask & (4 >> b) != 0 { 7 } else { 0 });
                let sign = if mask.count_ones() % 2 == 0 { T::one() } else { -T::one() };
                v[(idx, 0)] = Complex::new(scale, T::zero());
                v[(idx, 1)] = Complex::new(sign * scale, T::zero());
            }
            QuantumCode::from_isometry_unchecked(v)
        }
    }
}

/// Looks up a builtin code by name.
pub fn builtin_code_by_name<T: Real>(name: &str) -> Result<QuantumCode<T>> {
    Ok(builtin_code(name.parse()?))
}

/// Outcome of [`detect`].
#[derive(Clone, Debug, PartialEq)]
pub struct Detection<T> {
    pub detectable: bool,
    /// λ_E, present iff detectable.
    pub lambda: Option<Cx<T>>,
    /// ‖P_C E P_C − λ P_C‖_F with λ = Tr(P_C E P_C)/K.
    pub residual: T,
}

fn detect_compressed<T: Real>(c: &CMatrix<T>, e_norm: T, tol: T) -> Detection<T> {
    let k = c.rows();
    let lambda = c.trace().unscale(T::lit(k as f64));
    let residual = (c - &CMatrix::identity(k).scale(lambda)).frob_norm();
    let detectable = residual <= tol * (T::one() + e_norm);
    Detection { detectable, lambda: detectable.then_some(lambda), residual }
}

/// Tests P_C E P_C = λ_E P_C.
pub fn detect<T: Real>(code: &QuantumCode<T>, e: &CMatrix<T>, tol: T) -> Result<Detection<T>> {
    let c = code.compress(e)?;
    Ok(detect_compressed(&c, e.frob_norm(), tol))
}

/// The block form of the detectable operators: in the basis `basis` (code
/// vectors first, then an orthonormal completion) an operator is detectable
/// exactly when its leading K×K block is a multiple of the identity.
#[derive(Clone, Debug)]
pub struct DetectableSpaceForm<T> {
    pub basis: CMatrix<T>,
    pub code_dim: usize,
    /// N² − K² + 1.
    pub dimension: usize,
}

impl<T: Real> DetectableSpaceForm<T> {
    /// Whether the leading K×K block of B†EB has the form λ·I.
    pub fn contains(&self, e: &CMatrix<T>, tol: T) -> Result<bool> {
        let n = self.basis.rows();
        if e.shape() != (n, n) {
            return Err(Error::DimMismatch(format!("operator {:?} in dimension {n}", e.shape())));
        }
        let v = self.basis.submatrix(0, 0, n, self.code_dim);
        let top = v.adjoint_mul(&e.matmul(&v));
        Ok(detect_compressed(&top, e.frob_norm(), tol).detectable)
    }
}

/// Basis adapted to the code and the dimension N² − K² + 1 of the detectable space.
pub fn detectable_space_form<T: Real>(code: &QuantumCode<T>) -> DetectableSpaceForm<T> {
    let (n, k) = (code.ambient_dim(), code.code_dim());
    DetectableSpaceForm { basis: complete_to_unitary(code.isometry()), code_dim: k, dimension: n * n - k * k + 1 }
}

/// Outcome of [`correctability`].
#[derive(Clone, Debug, PartialEq)]
pub struct Correctability<T> {
    pub correctable: bool,
    /// Λ = (λ_ij), present iff correctable.
    pub lambda: Option<CMatrix<T>>,
    /// First pair (i, j), 0-based, for which E_i†E_j is not detectable.
    pub offending: Option<(usize, usize)>,
    /// Largest detection residual over the pairs examined.
    pub residual: T,
}

fn images<T: Real>(code: &QuantumCode<T>, errors: &[CMatrix<T>]) -> Result<Vec<CMatrix<T>>> {
    errors
        .iter()
        .map(|e| {
            code.check_operator(e)?;
            Ok(e.matmul(code.isometry()))
        })
        .collect()
}

/// Checks P_C E_i†E_j P_C = λ_ij P_C for all pairs and assembles Λ.
pub fn correctability<T: Real>(code: &QuantumCode<T>, errors: &[CMatrix<T>], tol: T) -> Result<Correctability<T>> {
    let imgs = images(code, errors)?;
    let r = errors.len();
    let mut lambda = CMatrix::zeros(r, r);
    let mut worst = T::zero();
    for i in 0..r {
        for j in 0..r {
            let c = imgs[i].adjoint_mul(&imgs[j]);
            let norm = errors[i].adjoint_mul(&errors[j]).frob_norm();
            let d = detect_compressed(&c, norm, tol);
            worst = worst.max(d.residual);
            match d.lambda {
                Some(l) => lambda[(i, j)] = l,
                None => {
                    return Ok(Correctability { correctable: false, lambda: None, offending: Some((i, j)), residual: worst })
                }
            }
        }
    }
    // Λ = A†A is positive; a failure here means the tolerance is too loose.
    let psd = hermitian_eigen(&lambda, tol.max(T::lit(1e-12)))
        .map(|e| {
            let lmax = e.eigenvalues.iter().fold(T::zero(), |m, &l| m.max(l.abs()));
            e.eigenvalues[0] >= -tol * lmax.max(T::one())
        })
        .unwrap_or(false);
    if !psd {
        return Ok(Correctability { correctable: false, lambda: None, offending: None, residual: worst });
    }
    Ok(Correctability { correctable: true, lambda: Some(lambda), offending: None, residual: worst })
}

/// Recovery channel R(ρ) = Σ_k U_k†P_k ρ P_k U_k built from a correctable error set.
#[derive(Clone, Debug)]
pub struct Recovery<T> {
    /// Kraus operators U_k†P_k = V W_k†, then the completion projection if present.
    pub channel: KrausChannel<T>,
    /// Mixed errors F_k = Σ_i u_ik E_i for the retained k.
    pub mixed_errors: Vec<CMatrix<T>>,
    /// d_kk for the retained k.
    pub weights: Vec<T>,
    /// W_k = U_k V, the isometric part of F_k V.
    pub isometries: Vec<CMatrix<T>>,
    /// Syndrome projections P_k = W_k W_k†, followed by the completion P_⊥ if added.
    pub projections: Vec<CMatrix<T>>,
    /// Whether P_⊥ = I − Σ P_k was appended.
    pub completed: bool,
    /// Diagonalizing unitary of Λ (columns ordered by ascending eigenvalue).
    pub lambda_eigenvectors: CMatrix<T>,
    /// All eigenvalues of Λ, ascending.
    pub lambda_eigenvalues: Vec<T>,
    code_isometry: CMatrix<T>,
}

impl<T: Real> Recovery<T> {
    pub fn len(&self) -> usize {
        self.isometries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.isometries.is_empty()
    }

    /// A full unitary U_k with U_k P_C = W_k V†, completed on C^⊥ in basis-index
    /// order. Costs O(N³); the recovery itself never needs it.
    pub fn unitary(&self, k: usize) -> CMatrix<T> {
        let v = &self.code_isometry;
        let w = &self.isometries[k];
        let cv = complete_to_unitary(v);
        let cw = complete_to_unitary(w);
        // Columns K.. of each completion span the respective complements.
        cw.mul_adjoint(&cv)
    }
}

/// Builds the recovery of the correctability theorem from Λ.
///
/// Λ is diagonalized as U†ΛU = D, F_k = Σ_i u_ik E_i is formed for every
/// d_kk above `tol · max(1, d_max)`, the isometric factor W_k of F_k V gives
/// P_k = W_k W_k† and Kraus operator U_k†P_k = V W_k†. If Σ P_k ≠ I the
/// completion projection is appended with U = I.
pub fn build_recovery<T: Real>(
    code: &QuantumCode<T>,
    errors: &[CMatrix<T>],
    lambda: &CMatrix<T>,
    tol: T,
) -> Result<Recovery<T>> {
    let r = errors.len();
    if lambda.shape() != (r, r) {
        return Err(Error::DimMismatch(format!("Λ is {:?} for {r} errors", lambda.shape())));
    }
    let imgs = images(code, errors)?;
    let k_dim = code.code_dim();
    for i in 0..r {
        for j in 0..r {
            let c = imgs[i].adjoint_mul(&imgs[j]);
            let res = (&c - &CMatrix::identity(k_dim).scale(lambda[(i, j)])).frob_norm();
            let norm = errors[i].adjoint_mul(&errors[j]).frob_norm();
            if res > tol * (T::one() + norm) {
                return Err(Error::ConditionViolated(format!("pair ({i}, {j}) has residual {res}")));
            }
        }
    }
    let eig = hermitian_eigen(lambda, tol)?;
    let dmax = eig.eigenvalues.iter().fold(T::zero(), |m, &l| m.max(l.abs()));
    if eig.eigenvalues[0] < -tol * dmax.max(T::one()) {
        return Err(Error::NotPsd(eig.eigenvalues[0].as_f64()));
    }
    let n = code.ambient_dim();
    let v = code.isometry();
    let u = &eig.eigenvectors;
    let mut mixed_errors = Vec::new();
    let mut weights = Vec::new();
    let mut isometries = Vec::new();
    let mut projections = Vec::new();
    let mut kraus = Vec::new();
    let mut sum = CMatrix::zeros(n, n);
    for k in 0..r {
        let d = eig.eigenvalues[k];
        if d <= tol * dmax.max(T::one()) {
            continue;
        }
        let f = (0..r).fold(CMatrix::zeros(n, n), |acc, i| &acc + &errors[i].scale(u[(i, k)]));
        let fv = (0..r).fold(CMatrix::zeros(n, k_dim), |acc, i| &acc + &imgs[i].scale(u[(i, k)]));
        let w = polar_isometry(&fv);
        let p = w.mul_adjoint(&w);
        sum = &sum + &p;
        kraus.push(v.mul_adjoint(&w));
        mixed_errors.push(f);
        weights.push(d);
        isometries.push(w);
        projections.push(p);
    }
    let complement = &CMatrix::identity(n) - &sum;
    let completed = complement.frob_norm() > tol * T::lit(n as f64).sqrt();
    if completed {
        kraus.push(complement.clone());
        projections.push(complement);
    }
    let channel = KrausChannel::new(kraus)?;
    Ok(Recovery {
        channel,
        mixed_errors,
        weights,
        isometries,
        projections,
        completed,
        lambda_eigenvectors: eig.eigenvectors,
        lambda_eigenvalues: eig.eigenvalues,
        code_isometry: v.clone(),
    })
}

/// Number of seeded-random code densities in the verification test set.
pub const VERIFY_RANDOM_STATES: usize = 20;

/// max ‖R(E(ρ)) − ρ‖_F over the K² code matrix units V e_ij V† and
/// [`VERIFY_RANDOM_STATES`] seeded-random code densities.
///
/// Every test operator has the form ρ = VσV†, so R(E(ρ)) − ρ = A·S·A† with
/// A = [R_k E_l V …, V] and S = diag(σ, …, σ, −σ). The Frobenius norm is read
/// off the triangular factor of A, avoiding both N×N products and cancellation.
pub fn verify_recovery<T: Real>(
    channel: &KrausChannel<T>,
    recovery: &KrausChannel<T>,
    code: &QuantumCode<T>,
    seed: u64,
) -> Result<T> {
    channel.require_tp()?;
    let n = code.ambient_dim();
    if channel.dim() != n || recovery.dim() != n {
        return Err(Error::DimMismatch(format!(
            "channel dimension {} and recovery dimension {} for a code in dimension {n}",
            channel.dim(),
            recovery.dim()
        )));
    }
    let k = code.code_dim();
    let v = code.isometry();
    let mut blocks: Vec<CMatrix<T>> = Vec::new();
    for e in channel.operators() {
        let ev = e.matmul(v);
        for rk in recovery.operators() {
            blocks.push(rk.matmul(&ev));
        }
    }
    blocks.push(v.clone());
    let cols = blocks.len() * k;
    let mut a = CMatrix::zeros(n.max(cols), cols);
    for (b, m) in blocks.iter().enumerate() {
        a.set_submatrix(0, b * k, m);
    }
    let tri = qr_triangle(&a);
    let nb = blocks.len();

    let deviation = |sigma: &CMatrix<T>| -> T {
        let mut s = CMatrix::zeros(cols, cols);
        for b in 0..nb {
            let blk = if b + 1 == nb { sigma.scale_real(-T::one()) } else { sigma.clone() };
            s.set_submatrix(b * k, b * k, &blk);
        }
        tri.matmul(&s).mul_adjoint(&tri).frob_norm()
    };

    let mut worst = T::zero();
    for i in 0..k {
        for j in 0..k {
            worst = worst.max(deviation(&CMatrix::unit(k, i, j)));
        }
    }
    let mut rng = seeded_rng(seed);
    for _ in 0..VERIFY_RANDOM_STATES {
        let sigma: CMatrix<T> = random_density(k, &mut rng);
        worst = worst.max(deviation(&sigma));
    }
    Ok(worst)
}

/// Direct N×N evaluation of max ‖R(E(ρ)) − ρ‖_F on the given code operators.
/// Used to cross-check [`verify_recovery`] in small dimensions.
pub fn recovery_deviation_dense<T: Real>(
    channel: &KrausChannel<T>,
    recovery: &KrausChannel<T>,
    states: &[CMatrix<T>],
) -> Result<T> {
    let mut worst = T::zero();
    for rho in states {
        let out = recovery.apply(&channel.apply(rho)?)?;
        worst = worst.max(out.dist(rho));
    }
    Ok(worst)
}
