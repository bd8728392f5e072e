//! Oracle unitaries and the Deutsch and Deutsch–Jozsa algorithms, simulated
//! exactly on dense state vectors.

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{kron_all, CMatrix};
use crate::qcore::{gate, measure_state, Gate, Measurement, StateVector};
use crate::scalar::{Cx, Real};

/// Largest number of input bits accepted for dense simulation.
pub const MAX_INPUT_BITS: usize = 10;
/// Largest total register (input plus output bits).
pub const MAX_REGISTER_BITS: usize = 11;

/// Truth table of f: Z₂^m → Z₂^k, indexed by x with qubit 1 as the most significant bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanOracle {
    m: usize,
    k: usize,
    table: Vec<usize>,
}

impl BooleanOracle {
    pub fn new(m: usize, k: usize, table: Vec<usize>) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(Error::InvalidOracle("m and k must be positive".into()));
        }
        if m > MAX_INPUT_BITS || m + k > MAX_REGISTER_BITS {
            return Err(Error::InvalidOracle(format!("m = {m}, k = {k} exceeds the dense simulation limit")));
        }
        if table.len() != 1 << m {
            return Err(Error::InvalidOracle(format!("table has {} entries, expected {}", table.len(), 1usize << m)));
        }
        if let Some((x, &v)) = table.iter().enumerate().find(|(_, &v)| v >> k != 0) {
            return Err(Error::InvalidOracle(format!("f({x}) = {v} does not fit in {k} bits")));
        }
        Ok(BooleanOracle { m, k, table })
    }

    /// Oracle from a closure evaluated on every input.
    pub fn from_fn(m: usize, k: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        if m > MAX_INPUT_BITS {
            return Err(Error::InvalidOracle(format!("m = {m} exceeds the dense simulation limit")));
        }
        Self::new(m, k, (0..1usize << m).map(f).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn eval(&self, x: usize) -> usize {
        self.table[x]
    }

    /// Constant or balanced (|f⁻¹(0)| = 2^{m−1}) for a one-bit output; `None` otherwise.
    pub fn promise_class(&self) -> Option<Verdict> {
        if self.k != 1 {
            return None;
        }
        let ones = self.table.iter().filter(|&&v| v == 1).count();
        if ones == 0 || ones == self.table.len() {
            Some(Verdict::Constant)
        } else if 2 * ones == self.table.len() {
            Some(Verdict::Balanced)
        } else {
            None
        }
    }
}

/// U_f: |x⟩|y⟩ ↦ |x⟩|y ⊕ f(x)⟩ on 2^{m+k} dimensions.
pub fn oracle_unitary<T: Real>(f: &BooleanOracle) -> CMatrix<T> {
    let dim = 1usize << (f.m + f.k);
    let mut u = CMatrix::zeros(dim, dim);
    for x in 0..1usize << f.m {
        for y in 0..1usize << f.k {
            u[((x << f.k) | (y ^ f.eval(x)), (x << f.k) | y)] = Cx::one();
        }
    }
    u
}

/// U_f (H^{⊗m} ⊗ I)|0…0⟩|0…0⟩ = 2^{−m/2} Σ_x |x⟩|f(x)⟩.
pub fn quantum_parallelism<T: Real>(f: &BooleanOracle) -> StateVector<T> {
    let input = hadamard_layer::<T>(f.m).kron(&CMatrix::identity(1 << f.k));
    let start = basis_vector::<T>(1 << (f.m + f.k), 0);
    let psi = oracle_unitary::<T>(f).apply(&input.apply(&start));
    StateVector::normalized(psi).expect("unitary image of a unit vector")
}

fn hadamard_layer<T: Real>(m: usize) -> CMatrix<T> {
    kron_all(&vec![gate::<T>(Gate::H); m])
}

fn basis_vector<T: Real>(dim: usize, idx: usize) -> Vec<Cx<T>> {
    let mut v = vec![Cx::zero(); dim];
    v[idx] = Cx::one();
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Constant,
    Balanced,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Constant => "constant",
            Verdict::Balanced => "balanced",
        })
    }
}

/// Verdict read off the exact output distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgorithmVerdict<T> {
    pub verdict: Verdict,
    /// Probability of the measurement event that produced the verdict.
    pub probability: T,
    /// Probability that the query register reads all zeros.
    pub zero_probability: T,
}

fn verdict_from<T: Real>(zero_probability: T) -> AlgorithmVerdict<T> {
    // Summed squared amplitudes can overshoot 1 by an ulp.
    let zero_probability = zero_probability.max(T::zero()).min(T::one());
    if zero_probability > T::lit(0.5) {
        AlgorithmVerdict { verdict: Verdict::Constant, probability: zero_probability, zero_probability }
    } else {
        AlgorithmVerdict { verdict: Verdict::Balanced, probability: T::one() - zero_probability, zero_probability }
    }
}

/// Final state (H^{⊗m} ⊗ I) U_f (H^{⊗m} ⊗ H)|0…0⟩|1⟩ for a one-bit oracle.
pub fn deutsch_jozsa_state<T: Real>(f: &BooleanOracle) -> Result<StateVector<T>> {
    if f.k != 1 {
        return Err(Error::WrongArity(format!("expected a one-bit output, got k = {}", f.k)));
    }
    let hm = hadamard_layer::<T>(f.m);
    let prep = hm.kron(&gate(Gate::H));
    let finish = hm.kron(&CMatrix::identity(2));
    let start = basis_vector::<T>(1 << (f.m + 1), 1);
    let psi = finish.apply(&oracle_unitary::<T>(f).apply(&prep.apply(&start)));
    StateVector::normalized(psi)
}

/// Deutsch's algorithm on f: Z₂ → Z₂, measuring the first qubit projectively.
pub fn deutsch<T: Real>(f: &BooleanOracle) -> Result<AlgorithmVerdict<T>> {
    if f.m != 1 || f.k != 1 {
        return Err(Error::WrongArity(format!("Deutsch needs m = k = 1, got m = {}, k = {}", f.m, f.k)));
    }
    let psi = deutsch_jozsa_state::<T>(f)?;
    let p0 = CMatrix::unit(2, 0, 0).kron(&CMatrix::identity(2));
    let outcomes = measure_state(&psi, &Measurement::binary(p0)?)?;
    Ok(verdict_from(outcomes[0].probability))
}

/// Deutsch–Jozsa on a one-bit oracle satisfying the constant-or-balanced promise.
pub fn deutsch_jozsa<T: Real>(f: &BooleanOracle) -> Result<AlgorithmVerdict<T>> {
    if f.k != 1 {
        return Err(Error::WrongArity(format!("expected a one-bit output, got k = {}", f.k)));
    }
    if f.promise_class().is_none() {
        let ones = f.table.iter().filter(|&&v| v == 1).count();
        return Err(Error::PromiseViolated(format!("{ones} of {} inputs map to 1", f.table.len())));
    }
    let psi = deutsch_jozsa_state::<T>(f)?;
    // The query register reads 0…0 on indices 0 and 1 (target qubit free).
    let a = psi.amplitudes();
    let zero = a[0].norm_sqr() + a[1].norm_sqr();
    Ok(verdict_from(zero))
}

/// |x⟩|y⟩ ↦ |x⟩|(x + y) mod 2^n⟩ on two n-bit registers.
pub fn modular_adder<T: Real>(n: usize) -> Result<CMatrix<T>> {
    if n == 0 || 2 * n > MAX_REGISTER_BITS {
        return Err(Error::InvalidParameter(format!("register size {n} is outside 1..=5")));
    }
    let size = 1usize << n;
    let mut u = CMatrix::zeros(size * size, size * size);
    for x in 0..size {
        for y in 0..size {
            u[(x * size + (x + y) % size, x * size + y)] = Complex::one();
        }
    }
    Ok(u)
}

/// Whether `u` has exactly one entry equal to 1 in each row and column and zeros elsewhere.
pub fn is_permutation_matrix<T: Real>(u: &CMatrix<T>) -> bool {
    if !u.is_square() {
        return false;
    }
    let n = u.rows();
    let mut col_hits = vec![0usize; n];
    for i in 0..n {
        let mut row_hits = 0;
        for j in 0..n {
            let z = u[(i, j)];
            if z == Cx::one() {
                row_hits += 1;
                col_hits[j] += 1;
            } else if z != Cx::zero() {
                return false;
            }
        }
        if row_hits != 1 {
            return false;
        }
    }
    col_hits.iter().all(|&c| c == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Matrix;

    fn oracle(m: usize, k: usize, table: &[usize]) -> BooleanOracle {
        BooleanOracle::new(m, k, table.to_vec()).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let id = oracle(1, 1, &[0, 1]);
        assert_eq!(oracle_unitary::<f64>(&id), gate(Gate::Cnot));
        let one = oracle(1, 1, &[1, 1]);
        assert_eq!(oracle_unitary::<f64>(&one), Matrix::identity(2).kron(&gate(Gate::X)));
        let f = oracle(2, 2, &[3, 0, 2, 1]);
        let u = oracle_unitary::<f64>(&f);
        assert!(is_permutation_matrix(&u));
        for x in 0..4 {
            assert_eq!(u[((x << 2) | f.eval(x), x << 2)], Cx::one());
        }
    }

    #[test]
    fn oracle_validation() {
        assert!(matches!(BooleanOracle::new(2, 1, vec![0, 1, 2, 0]), Err(Error::InvalidOracle(_))));
        assert!(matches!(BooleanOracle::new(2, 1, vec![0, 1]), Err(Error::InvalidOracle(_))));
        assert!(matches!(BooleanOracle::new(11, 1, vec![0; 2048]), Err(Error::InvalidOracle(_))));
    }

    #[test]
    fn parallelism_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = quantum_parallelism::<f64>(&oracle(1, 1, &[0, 1]));
        let a = bell.amplitudes();
        assert!((a[0].re - s).abs() < 1e-15 && (a[3].re - s).abs() < 1e-15);
        assert!(a[1].norm() < 1e-15 && a[2].norm() < 1e-15);

        let zero = quantum_parallelism::<f64>(&oracle(2, 1, &[0, 0, 0, 0]));
        for (i, z) in zero.amplitudes().iter().enumerate() {
            let expect = if i % 2 == 0 { 0.5 } else { 0.0 };
            assert!((z.re - expect).abs() < 1e-15 && z.im.abs() < 1e-15);
        }
    }

    #[test]
    fn deutsch_all_tables() {
        for (table, verdict) in [([0, 0], Verdict::Constant), ([1, 1], Verdict::Constant), ([0, 1], Verdict::Balanced), ([1, 0], Verdict::Balanced)] {
            let v = deutsch::<f64>(&oracle(1, 1, &table)).unwrap();
            assert_eq!(v.verdict, verdict);
            assert!((v.probability - 1.0).abs() <= 1e-10);
        }
        assert!(matches!(deutsch::<f64>(&oracle(2, 1, &[0, 0, 0, 0])), Err(Error::WrongArity(_))));
    }

    #[test]
    fn deutsch_jozsa_examples() {
        let c = deutsch_jozsa::<f64>(&oracle(3, 1, &[0; 8])).unwrap();
        assert_eq!(c.verdict, Verdict::Constant);
        assert!((c.zero_probability - 1.0).abs() <= 1e-10);
        let first_bit = BooleanOracle::from_fn(3, 1, |x| x >> 2).unwrap();
        let b = deutsch_jozsa::<f64>(&first_bit).unwrap();
        assert_eq!(b.verdict, Verdict::Balanced);
        assert!(b.zero_probability <= 1e-10);
        assert!(matches!(
            deutsch_jozsa::<f64>(&oracle(2, 1, &[0, 0, 0, 1])),
            Err(Error::PromiseViolated(_))
        ));
        for table in [[0, 0], [1, 1], [0, 1], [1, 0]] {
            let f = oracle(1, 1, &table);
            assert_eq!(deutsch_jozsa::<f64>(&f).unwrap().verdict, deutsch::<f64>(&f).unwrap().verdict);
        }
    }

    #[test]
    fn adder_examples() {
        assert_eq!(modular_adder::<f64>(1).unwrap(), gate(Gate::Cnot));
        let u = modular_adder::<f64>(2).unwrap();
        assert_eq!(u[(2 * 4 + 1, 2 * 4 + 3)], Cx::one());
        assert!(u.is_unitary(1e-15));
        assert!(is_permutation_matrix(&u));
    }
}
