//! States, the standard gate set, n-qubit embeddings, unitary evolution and
//! general measurements.
//!
//! Basis convention: |i₁…iₙ⟩ is the integer whose most significant bit is i₁,
//! so qubit 1 is the leftmost tensor factor.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, kron_all, vnorm, CMatrix};
use crate::random::{seeded_rng, SeededRng};
use crate::scalar::{cx, is_finite, Cx, Real};

const STATE_TOL: f64 = 1e-10;

/// Named single- and two-qubit gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    X,
    Y,
    Z,
    H,
    I2,
    Cnot,
}

impl FromStr for Gate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Gate::X),
            "Y" | "y" => Ok(Gate::Y),
            "Z" | "z" => Ok(Gate::Z),
            "H" | "h" => Ok(Gate::H),
            "I2" | "I" | "i2" => Ok(Gate::I2),
            "CNOT" | "cnot" | "CX" => Ok(Gate::Cnot),
            other => Err(Error::UnknownGate(other.to_string())),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Gate::X => "X",
            Gate::Y => "Y",
            Gate::Z => "Z",
            Gate::H => "H",
            Gate::I2 => "I2",
            Gate::Cnot => "CNOT",
        };
        f.write_str(s)
    }
}

/// Exact matrix of a named gate.
pub fn gate<T: Real>(g: Gate) -> CMatrix<T> {
    let o = cx::<T>(0.0, 0.0);
    let l = cx::<T>(1.0, 0.0);
    let i = cx::<T>(0.0, 1.0);
    let data = match g {
        Gate::X => vec![o, l, l, o],
        Gate::Y => vec![o, -i, i, o],
        Gate::Z => vec![l, o, o, -l],
        Gate::I2 => vec![l, o, o, l],
        Gate::H => {
            let s = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
            vec![s, s, s, -s]
        }
        Gate::Cnot => {
            let mut m = CMatrix::<T>::zeros(4, 4);
            for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
                m[(r, c)] = l;
            }
            return m;
        }
    };
    CMatrix::from_vec(2, 2, data).expect("2x2 literal")
}

/// Looks a gate up by name.
pub fn gate_by_name<T: Real>(name: &str) -> Result<CMatrix<T>> {
    Ok(gate(name.parse()?))
}

/// Spin-½ operator K/2 for a Pauli K.
pub fn spin_half<T: Real>(pauli: Gate) -> CMatrix<T> {
    gate::<T>(pauli).scale_real(T::lit(0.5))
}

/// Acts as `g` on tensor slot `k` (1-based, leftmost = 1) of an `n`-qubit register.
pub fn embed_single<T: Real>(g: &CMatrix<T>, k: usize, n: usize) -> Result<CMatrix<T>> {
    if g.shape() != (2, 2) {
        return Err(Error::ShapeMismatch(format!("single-qubit gate must be 2x2, got {:?}", g.shape())));
    }
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange(format!("qubit {k} of {n}")));
    }
    let id = CMatrix::<T>::identity(2);
    let factors: Vec<CMatrix<T>> = (1..=n).map(|slot| if slot == k { g.clone() } else { id.clone() }).collect();
    Ok(kron_all(&factors))
}

/// CNOT with the given control and target slots (1-based) on `n` qubits.
pub fn cnot_embed<T: Real>(control: usize, target: usize, n: usize) -> Result<CMatrix<T>> {
    for q in [control, target] {
        if q == 0 || q > n {
            return Err(Error::IndexOutOfRange(format!("qubit {q} of {n}")));
        }
    }
    if control == target {
        return Err(Error::ControlEqualsTarget(control));
    }
    let dim = 1usize << n;
    let cbit = 1usize << (n - control);
    let tbit = 1usize << (n - target);
    let mut m = CMatrix::zeros(dim, dim);
    for idx in 0..dim {
        let out = if idx & cbit != 0 { idx ^ tbit } else { idx };
        m[(out, idx)] = Cx::one();
    }
    Ok(m)
}

/// Unit vector in C^N.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    amplitudes: Vec<Cx<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(amplitudes: Vec<Cx<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty amplitude vector".into()));
        }
        if !amplitudes.iter().all(is_finite) {
            return Err(Error::NonFinite("state".into()));
        }
        let norm = vnorm(&amplitudes);
        if (norm - T::one()).abs() > T::lit(STATE_TOL).max(T::epsilon() * T::lit(64.0)) {
            return Err(Error::InvalidState(format!("norm {} is not 1", norm)));
        }
        Ok(StateVector { amplitudes })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amplitudes: Vec<Cx<T>>) -> Result<Self> {
        let norm = vnorm(&amplitudes);
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize zero vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|z| z.unscale(norm)).collect())
    }

    /// Computational basis state |index⟩.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange(format!("basis index {index} in dimension {dim}")));
        }
        let mut v = vec![Cx::zero(); dim];
        v[index] = Cx::one();
        Ok(StateVector { amplitudes: v })
    }

    /// |b₁…bₙ⟩ from a bit string such as "101".
    pub fn from_bits(bits: &str) -> Result<Self> {
        let n = bits.len();
        let idx = usize::from_str_radix(bits, 2).map_err(|e| Error::Parse(e.to_string()))?;
        Self::basis(1 << n, idx)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Cx<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Cx<T>> {
        self.amplitudes
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut v = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                v.push(*a * *b);
            }
        }
        StateVector { amplitudes: v }
    }

    /// |ψ⟩⟨ψ|.
    pub fn projector(&self) -> CMatrix<T> {
        CMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn density(&self) -> DensityOperator<T> {
        DensityOperator { matrix: self.projector() }
    }

    /// U|ψ⟩ (U must be unitary for the result to stay normalized).
    pub fn evolve(&self, u: &CMatrix<T>) -> Result<Self> {
        if u.cols() != self.dim() || !u.is_square() {
            return Err(Error::DimMismatch(format!("{:?} on dimension {}", u.shape(), self.dim())));
        }
        Self::normalized(u.apply(&self.amplitudes))
    }
}

/// Positive operator with unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator<T> {
    matrix: CMatrix<T>,
}

impl<T: Real> DensityOperator<T> {
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        let tol = T::lit(STATE_TOL).max(T::epsilon() * T::lit(64.0));
        if !matrix.is_square() {
            return Err(Error::ShapeMismatch(format!("density of shape {:?}", matrix.shape())));
        }
        if !matrix.is_hermitian(tol) {
            return Err(Error::InvalidState("density is not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace {} is not 1", tr)));
        }
        let e = hermitian_eigen(&matrix, tol)?;
        if e.eigenvalues[0] < -tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {}", e.eigenvalues[0])));
        }
        Ok(DensityOperator { matrix })
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// U·ρ·U†.
pub fn evolve<T: Real>(rho: &DensityOperator<T>, u: &CMatrix<T>) -> Result<DensityOperator<T>> {
    if !u.is_square() || u.rows() != rho.dim() {
        return Err(Error::DimMismatch(format!("{:?} on dimension {}", u.shape(), rho.dim())));
    }
    let res = u.unitary_residual();
    if res > T::lit(1e-9) * T::lit(u.rows() as f64).sqrt().max(T::one()) {
        return Err(Error::NotUnitary(res.as_f64()));
    }
    Ok(DensityOperator { matrix: u.matmul(&rho.matrix).mul_adjoint(u) })
}

/// General measurement {M_k} with Σ M_k†M_k = I.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement<T> {
    operators: Vec<CMatrix<T>>,
}

impl<T: Real> Measurement<T> {
    pub fn new(operators: Vec<CMatrix<T>>) -> Result<Self> {
        let first = operators.first().ok_or_else(|| Error::InvalidMeasurement("no operators".into()))?;
        let n = first.rows();
        if operators.iter().any(|m| m.shape() != (n, n)) {
            return Err(Error::DimMismatch("measurement operators differ in shape".into()));
        }
        let mut sum = CMatrix::zeros(n, n);
        for m in &operators {
            sum = &sum + &m.adjoint_mul(m);
        }
        let res = sum.dist(&CMatrix::identity(n));
        if res > T::lit(STATE_TOL).max(T::epsilon() * T::lit(256.0)) {
            return Err(Error::InvalidMeasurement(format!("completeness residual {}", res)));
        }
        Ok(Measurement { operators })
    }

    /// Projective measurement in the computational basis.
    pub fn computational(dim: usize) -> Self {
        Measurement { operators: (0..dim).map(|i| CMatrix::unit(dim, i, i)).collect() }
    }

    /// Two-outcome measurement {P, I − P} for an orthogonal projector P.
    pub fn binary(projector: CMatrix<T>) -> Result<Self> {
        let n = projector.rows();
        let complement = &CMatrix::identity(n) - &projector;
        Self::new(vec![projector, complement])
    }

    pub fn operators(&self) -> &[CMatrix<T>] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }

    /// True when every operator is an orthogonal projection.
    pub fn is_projective(&self, tol: T) -> bool {
        self.operators.iter().all(|m| m.is_hermitian(tol) && m.matmul(m).dist(m) <= tol * (T::one() + m.frob_norm()))
    }
}

/// One outcome of [`measure_state`].
#[derive(Clone, Debug)]
pub struct Outcome<T> {
    pub probability: T,
    /// M_k|ψ⟩/√p(k); absent when p(k) is below tolerance.
    pub post_state: Option<StateVector<T>>,
}

/// Outcome distribution and post-measurement states, in operator order.
pub fn measure_state<T: Real>(psi: &StateVector<T>, m: &Measurement<T>) -> Result<Vec<Outcome<T>>> {
    if psi.dim() != m.dim() {
        return Err(Error::DimMismatch(format!("state dimension {} vs measurement {}", psi.dim(), m.dim())));
    }
    let tol = T::lit(STATE_TOL);
    Ok(m.operators
        .iter()
        .map(|op| {
            let v = op.apply(psi.amplitudes());
            let p = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
            let post = if p > tol {
                let s = p.sqrt();
                Some(StateVector { amplitudes: v.into_iter().map(|z| z.unscale(s)).collect() })
            } else {
                None
            };
            Outcome { probability: p, post_state: post }
        })
        .collect())
}

/// Seeded sampler drawing single outcomes from [`measure_state`].
#[derive(Debug)]
pub struct MeasurementSampler {
    rng: SeededRng,
}

impl MeasurementSampler {
    pub fn new(seed: u64) -> Self {
        MeasurementSampler { rng: seeded_rng(seed) }
    }

    /// Draws an outcome index together with its post-measurement state.
    pub fn sample<T: Real>(&mut self, psi: &StateVector<T>, m: &Measurement<T>) -> Result<(usize, StateVector<T>)> {
        let outcomes = measure_state(psi, m)?;
        let r: f64 = self.rng.random();
        let mut acc = 0.0;
        let mut last = None;
        for (k, o) in outcomes.iter().enumerate() {
            if o.post_state.is_none() {
                continue;
            }
            acc += o.probability.as_f64();
            last = Some(k);
            if r < acc {
                return Ok((k, o.post_state.clone().expect("checked")));
            }
        }
        let k = last.ok_or_else(|| Error::InvalidMeasurement("all outcomes have zero probability".into()))?;
        Ok((k, outcomes[k].post_state.clone().expect("checked")))
    }
}
