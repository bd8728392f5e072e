//! Catalogue of example channels.

use num_traits::{One, Zero};

use super::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{expm_i_hermitian, CMatrix};
use crate::qcore::{embed_single, gate, spin_half, Gate};
use crate::scalar::{Cx, Real};

/// Names accepted by [`crate::io`] and the command line.
pub const BUILTIN_CHANNELS: [&str; 10] = [
    "bit_flip",
    "constant_half",
    "amplitude_damping",
    "random_unitary",
    "entanglement_breaking",
    "phase_flip",
    "zz_dephasing",
    "collective_rotation",
    "permutation",
    "dead_row",
];

fn open_unit<T: Real>(name: &str, p: T) -> Result<()> {
    if p > T::zero() && p < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {p}")))
    }
}

fn check_weights<T: Real>(weights: &[T], expected: usize) -> Result<()> {
    if weights.len() != expected {
        return Err(Error::InvalidParameter(format!("expected {expected} weights, got {}", weights.len())));
    }
    if weights.iter().any(|&w| !(w > T::zero())) {
        return Err(Error::InvalidParameter("weights must be positive".into()));
    }
    let total = weights.iter().fold(T::zero(), |a, &w| a + w);
    if (total - T::one()).abs() > T::lit(1e-9) {
        return Err(Error::InvalidParameter(format!("weights must sum to 1, got {total}")));
    }
    Ok(())
}

/// {√(1−p)·I, √p·X}.
pub fn bit_flip<T: Real>(p: T) -> Result<KrausChannel<T>> {
    open_unit("p", p)?;
    KrausChannel::new(vec![
        CMatrix::identity(2).scale_real((T::one() - p).sqrt()),
        gate::<T>(Gate::X).scale_real(p.sqrt()),
    ])
}

/// {√(1−p)·I, √p·Z}.
pub fn phase_flip<T: Real>(p: T) -> Result<KrausChannel<T>> {
    open_unit("p", p)?;
    KrausChannel::new(vec![
        CMatrix::identity(2).scale_real((T::one() - p).sqrt()),
        gate::<T>(Gate::Z).scale_real(p.sqrt()),
    ])
}

/// {I/2, σ_x, σ_y, σ_z} with σ_k = K/2; sends every density operator to I/2.
pub fn constant_half<T: Real>() -> KrausChannel<T> {
    let ops = vec![
        CMatrix::identity(2).scale_real(T::lit(0.5)),
        spin_half(Gate::X),
        spin_half(Gate::Y),
        spin_half(Gate::Z),
    ];
    KrausChannel::new(ops).expect("fixed 2x2 list")
}

/// E₁ = diag(1, √(1−r)), E₂ = √r·|0⟩⟨1|.
pub fn amplitude_damping<T: Real>(r: T) -> Result<KrausChannel<T>> {
    open_unit("r", r)?;
    let mut e1 = CMatrix::identity(2);
    e1[(1, 1)] = Cx::new((T::one() - r).sqrt(), T::zero());
    let mut e2 = CMatrix::zeros(2, 2);
    e2[(0, 1)] = Cx::new(r.sqrt(), T::zero());
    KrausChannel::new(vec![e1, e2])
}

/// {√(1−p)·I₄, √p·Z⊗Z}.
pub fn zz_dephasing<T: Real>(p: T) -> Result<KrausChannel<T>> {
    open_unit("p", p)?;
    let z = gate::<T>(Gate::Z);
    KrausChannel::new(vec![CMatrix::identity(4).scale_real((T::one() - p).sqrt()), z.kron(&z).scale_real(p.sqrt())])
}

/// ρ ↦ Σ r_i U_i ρ U_i†, realized by the Kraus operators √r_i·U_i.
pub fn random_unitary<T: Real>(weights: &[T], unitaries: &[CMatrix<T>]) -> Result<KrausChannel<T>> {
    check_weights(weights, unitaries.len())?;
    if unitaries.is_empty() {
        return Err(Error::InvalidParameter("at least one unitary is required".into()));
    }
    for (k, u) in unitaries.iter().enumerate() {
        if u.shape() != unitaries[0].shape() || !u.is_square() {
            return Err(Error::DimMismatch(format!("unitary {k} has shape {:?}", u.shape())));
        }
        if !u.is_unitary(T::default_tol()) {
            return Err(Error::NotUnitary(u.unitary_residual().as_f64()));
        }
    }
    KrausChannel::new(weights.iter().zip(unitaries).map(|(&w, u)| u.scale_real(w.sqrt())).collect())
}

/// ρ ↦ Σ_k |ψ_k⟩⟨φ_k|ρ|φ_k⟩⟨ψ_k|, with Kraus operators |ψ_k⟩⟨φ_k|.
///
/// The ψ_k must be unit vectors, so the map is trace preserving exactly when
/// Σ |φ_k⟩⟨φ_k| = I.
pub fn entanglement_breaking<T: Real>(psi: &[Vec<Cx<T>>], phi: &[Vec<Cx<T>>]) -> Result<KrausChannel<T>> {
    if psi.is_empty() || psi.len() != phi.len() {
        return Err(Error::InvalidParameter(format!("{} psi kets vs {} phi kets", psi.len(), phi.len())));
    }
    let n = psi[0].len();
    let mut ops = Vec::with_capacity(psi.len());
    for (k, (a, b)) in psi.iter().zip(phi).enumerate() {
        if a.len() != n || b.len() != n {
            return Err(Error::DimMismatch(format!("ket pair {k} does not have dimension {n}")));
        }
        let norm = crate::linalg::vnorm(a);
        if (norm - T::one()).abs() > T::lit(1e-10) {
            return Err(Error::InvalidParameter(format!("psi {k} has norm {norm}")));
        }
        ops.push(CMatrix::outer(a, b));
    }
    KrausChannel::new(ops)
}

/// J_k = Σ_m σ_k^{(m)} on n qubits, with σ_k = K/2.
pub fn collective_generators<T: Real>(n: usize) -> Result<[CMatrix<T>; 3]> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let dim = 1usize << n;
    let mut out = [CMatrix::zeros(dim, dim), CMatrix::zeros(dim, dim), CMatrix::zeros(dim, dim)];
    for (j, g) in [Gate::X, Gate::Y, Gate::Z].into_iter().enumerate() {
        let s = spin_half::<T>(g);
        for m in 1..=n {
            out[j] = &out[j] + &embed_single(&s, m, n)?;
        }
    }
    Ok(out)
}

/// Random-unitary channel with Kraus operators √w_k·exp(iθ_k J_k), k = x, y, z.
pub fn collective_rotation<T: Real>(n: usize, thetas: [T; 3], weights: [T; 3]) -> Result<KrausChannel<T>> {
    if n > 10 {
        return Err(Error::InvalidParameter(format!("n = {n} exceeds the supported register size")));
    }
    let gens = collective_generators::<T>(n)?;
    let mut unitaries = Vec::with_capacity(3);
    for (j, t) in thetas.into_iter().enumerate() {
        unitaries.push(expm_i_hermitian(&gens[j], t, T::default_tol())?);
    }
    random_unitary(&weights, &unitaries)
}

/// Default angles used when none are given: generic enough that each
/// exp(iθJ_k) generates the same algebra as J_k.
pub fn default_collective_angles<T: Real>() -> [T; 3] {
    [T::lit(0.7), T::lit(1.1), T::lit(1.3)]
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    // Standard next-permutation step.
    loop {
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("pivot exists");
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// π(σ) on (C^d)^{⊗n}: h_1⊗…⊗h_n ↦ h_σ(1)⊗…⊗h_σ(n), with σ given 0-based.
pub fn permutation_unitary<T: Real>(d: usize, sigma: &[usize]) -> Result<CMatrix<T>> {
    let n = sigma.len();
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || seen[s] {
            return Err(Error::InvalidParameter(format!("{sigma:?} is not a permutation")));
        }
        seen[s] = true;
    }
    if d < 2 {
        return Err(Error::InvalidParameter("local dimension must be at least 2".into()));
    }
    let dim = d.checked_pow(n as u32).filter(|&x| x <= 4096).ok_or_else(|| Error::InvalidParameter(format!("{d}^{n} is too large")))?;
    let mut m = CMatrix::zeros(dim, dim);
    let mut digits = vec![0usize; n];
    for idx in 0..dim {
        let mut rest = idx;
        for slot in (0..n).rev() {
            digits[slot] = rest % d;
            rest /= d;
        }
        let out = (0..n).fold(0usize, |acc, slot| acc * d + digits[sigma[slot]]);
        m[(out, idx)] = Cx::one();
    }
    Ok(m)
}

/// Random-unitary channel over {π(σ) : σ ∈ S_n}; `weights` follow the
/// lexicographic order of [`permutations`]. `None` means uniform weights.
pub fn permutation_channel<T: Real>(d: usize, n: usize, weights: Option<&[T]>) -> Result<KrausChannel<T>> {
    if n < 1 || n > 6 {
        return Err(Error::InvalidParameter(format!("n = {n} is outside 1..=6")));
    }
    let perms = permutations(n);
    let uniform;
    let weights = match weights {
        Some(w) => w,
        None => {
            uniform = vec![T::one() / T::lit(perms.len() as f64); perms.len()];
            &uniform
        }
    };
    let unitaries = perms.iter().map(|s| permutation_unitary(d, s)).collect::<Result<Vec<_>>>()?;
    random_unitary(weights, &unitaries)
}

/// Kraus operators A_i = |0⟩⟨i| for i = 0..d−1, so that E(I) = d·|0⟩⟨0|.
pub fn dead_row<T: Real>(d: usize) -> Result<KrausChannel<T>> {
    if d < 2 {
        return Err(Error::InvalidParameter("d must be at least 2".into()));
    }
    KrausChannel::new((0..d).map(|i| CMatrix::unit(d, 0, i)).collect())
}

/// One instance of every builtin with default parameters, used by tests and demos.
pub fn default_catalogue<T: Real>() -> Vec<(&'static str, KrausChannel<T>)> {
    let s = T::FRAC_1_SQRT_2();
    let plus = vec![Cx::new(s, T::zero()), Cx::new(s, T::zero())];
    let minus = vec![Cx::new(s, T::zero()), Cx::new(-s, T::zero())];
    let e0 = vec![Cx::one(), Cx::zero()];
    let e1 = vec![Cx::zero(), Cx::one()];
    let third = T::one() / T::lit(3.0);
    vec![
        ("bit_flip", bit_flip(T::lit(0.3)).expect("valid")),
        ("constant_half", constant_half()),
        ("amplitude_damping", amplitude_damping(T::lit(0.5)).expect("valid")),
        (
            "random_unitary",
            random_unitary(&[T::lit(0.6), T::lit(0.4)], &[gate(Gate::H), gate(Gate::Y)]).expect("valid"),
        ),
        ("entanglement_breaking", entanglement_breaking(&[plus, minus], &[e0, e1]).expect("valid")),
        ("phase_flip", phase_flip(T::lit(0.25)).expect("valid")),
        ("zz_dephasing", zz_dephasing(T::lit(0.3)).expect("valid")),
        (
            "collective_rotation",
            collective_rotation(3, default_collective_angles(), [third, third, third]).expect("valid"),
        ),
        ("permutation", permutation_channel(2, 3, None).expect("valid")),
        ("dead_row", dead_row(4).expect("valid")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::classify;
    use crate::Matrix;

    #[test]
    fn phase_flip_on_plus() {
        let p = 0.2;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = Matrix::from_real(2, 1, &[s, s]).unwrap();
        let minus = Matrix::from_real(2, 1, &[s, -s]).unwrap();
        let pp = plus.mul_adjoint(&plus);
        let mm = minus.mul_adjoint(&minus);
        let out = phase_flip(p).unwrap().apply(&pp).unwrap();
        assert!(out.dist(&(&pp.scale_real(1.0 - p) + &mm.scale_real(p))) < 1e-15);
    }

    #[test]
    fn entanglement_breaking_tp_iff_phi_resolve_identity() {
        let e0 = vec![Cx::one(), Cx::zero()];
        let e1 = vec![Cx::zero(), Cx::one()];
        let ok = entanglement_breaking::<f64>(&[e0.clone(), e1.clone()], &[e0.clone(), e1.clone()]).unwrap();
        assert!(ok.is_trace_preserving());
        let bad = entanglement_breaking::<f64>(&[e0.clone(), e1.clone()], &[e0.clone(), e0.clone()]).unwrap();
        assert!(!bad.is_trace_preserving());
    }

    #[test]
    fn dead_row_identity_image() {
        let ch = dead_row::<f64>(3).unwrap();
        assert!(ch.identity_image().dist(&Matrix::unit(3, 0, 0).scale_real(3.0)) < 1e-15);
        assert!(ch.is_trace_preserving());
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(bit_flip(0.0f64), Err(Error::InvalidParameter(_))));
        assert!(matches!(amplitude_damping(1.0f64), Err(Error::InvalidParameter(_))));
        let x = gate::<f64>(Gate::X);
        assert!(random_unitary(&[0.5, 0.6], &[x.clone(), x.clone()]).is_err());
        assert!(random_unitary(&[1.0], &[Matrix::identity(2).scale_real(2.0)]).is_err());
    }

    #[test]
    fn permutation_unitary_examples() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
        // Swap on two qubits sends |01⟩ to |10⟩.
        let swap = permutation_unitary::<f64>(2, &[1, 0]).unwrap();
        assert_eq!(swap[(2, 1)], Cx::one());
        // Cyclic shift: slot j receives h_{σ(j)}; |abc⟩ with σ = (1, 2, 0) becomes |bca⟩.
        let cyc = permutation_unitary::<f64>(2, &[1, 2, 0]).unwrap();
        assert_eq!(cyc[(0b010, 0b001)], Cx::one());
    }

    #[test]
    fn catalogue_is_cp_and_tp() {
        for (name, ch) in default_catalogue::<f64>() {
            let c = classify(&ch, 1e-9);
            assert!(c.completely_positive && c.trace_preserving, "{name}");
        }
        for name in ["collective_rotation", "permutation", "random_unitary", "phase_flip", "zz_dephasing"] {
            let ch = default_catalogue::<f64>().into_iter().find(|(n, _)| *n == name).unwrap().1;
            assert!(classify(&ch, 1e-9).unital, "{name}");
        }
    }
}
