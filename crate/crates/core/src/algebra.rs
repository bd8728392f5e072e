//! Operator spaces and algebras attached to a channel: interaction algebra,
//! noise commutant, fixed points, Wedderburn structure, noiseless subsystems
//! and the dead subspace of a CP map with singular E(I).

use rand::Rng;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt, gram_schmidt_scaled, hermitian_eigen, null_space_basis_scaled, polar_isometry, vdot, vnorm, CMatrix};
use crate::random::{gaussian, seeded_rng};
use crate::scalar::{Cx, Real};

/// Drop threshold for modified Gram–Schmidt when building operator bases.
pub const CLOSURE_DROP: f64 = 1e-10;

/// Relative eigenvalue gap that separates clusters during structure resolution.
pub const CLUSTER_GAP: f64 = 1e-6;

/// Seeded retries before structure resolution gives up.
pub const STRUCTURE_RETRIES: u64 = 5;

/// Subspace of N×N operators with a Hilbert–Schmidt orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSpace<T> {
    dim: usize,
    basis: Vec<CMatrix<T>>,
}

impl<T: Real> OperatorSpace<T> {
    /// Orthonormalizes a spanning set; linearly dependent members are dropped.
    pub fn span(dim: usize, spanning: &[CMatrix<T>]) -> Result<Self> {
        for m in spanning {
            if m.shape() != (dim, dim) {
                return Err(Error::DimMismatch(format!("operator {:?} in a space of {dim}x{dim} operators", m.shape())));
            }
        }
        let vecs: Vec<Vec<Cx<T>>> = spanning.iter().map(|m| m.data().to_vec()).collect();
        let (basis, _) = gram_schmidt(&vecs, T::lit(CLOSURE_DROP));
        Ok(Self::from_orthonormal_vecs(dim, basis))
    }

    /// Span of operators whose sizes are bounded by `scale`; elements that are
    /// roundoff on that scale are dropped.
    fn span_scaled(dim: usize, spanning: &[CMatrix<T>], scale: T) -> Self {
        let vecs: Vec<Vec<Cx<T>>> = spanning.iter().map(|m| m.data().to_vec()).collect();
        let (basis, _) = gram_schmidt_scaled(&vecs, T::lit(CLOSURE_DROP), scale);
        Self::from_orthonormal_vecs(dim, basis)
    }

    fn from_orthonormal_vecs(dim: usize, vecs: Vec<Vec<Cx<T>>>) -> Self {
        let basis = vecs.into_iter().map(|v| CMatrix::from_vec(dim, dim, v).expect("length N²")).collect();
        OperatorSpace { dim, basis }
    }

    /// All of M_N, spanned by the matrix units.
    pub fn full(dim: usize) -> Self {
        let basis = (0..dim * dim).map(|k| CMatrix::unit(dim, k / dim, k % dim)).collect();
        OperatorSpace { dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMatrix<T>] {
        &self.basis
    }

    /// Orthogonal projection onto the space.
    pub fn project(&self, x: &CMatrix<T>) -> CMatrix<T> {
        self.basis.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, b| &acc + &b.scale(vdot(b.data(), x.data())))
    }

    /// ‖x − proj(x)‖_F.
    pub fn residual(&self, x: &CMatrix<T>) -> T {
        (x - &self.project(x)).frob_norm()
    }

    /// Membership with residual ≤ tol·max(1, ‖x‖_F).
    pub fn contains(&self, x: &CMatrix<T>, tol: T) -> bool {
        x.shape() == (self.dim, self.dim) && self.residual(x) <= tol * x.frob_norm().max(T::one())
    }

    /// Mutual projection test; dimensions alone are not enough.
    pub fn same_as(&self, other: &Self, tol: T) -> bool {
        self.dim == other.dim
            && self.basis.iter().all(|b| other.contains(b, tol))
            && other.basis.iter().all(|b| self.contains(b, tol))
    }

    /// max_i ‖B_i† − proj(B_i†)‖_F.
    pub fn adjoint_residual(&self) -> T {
        self.basis.iter().map(|b| self.residual(&b.adjoint())).fold(T::zero(), |m, r| m.max(r))
    }

    /// Closure residual on `samples` seeded-random pairs of unit-norm elements.
    pub fn product_residual(&self, samples: usize, seed: u64) -> T {
        let mut rng = seeded_rng(seed);
        let mut worst = T::zero();
        for _ in 0..samples {
            let a = self.random_element(&mut rng);
            let b = self.random_element(&mut rng);
            worst = worst.max(self.residual(&a.matmul(&b)));
        }
        worst
    }

    /// Unit-norm random element Σ g_i B_i with Gaussian coefficients.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> CMatrix<T> {
        let x = self.basis.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, b| &acc + &b.scale(gaussian(rng)));
        let n = x.frob_norm();
        if n > T::zero() {
            x.scale_real(T::one() / n)
        } else {
            x
        }
    }
}

fn multiply_closure<T: Real>(dim: usize, seeds: Vec<CMatrix<T>>, gens: &[CMatrix<T>]) -> OperatorSpace<T> {
    let drop = T::lit(CLOSURE_DROP);
    let mut basis: Vec<Vec<Cx<T>>> = Vec::new();
    // `floor` bounds ‖m‖ for exact data, so a product that is pure roundoff is not kept.
    let push = |basis: &mut Vec<Vec<Cx<T>>>, m: &CMatrix<T>, floor: T| -> bool {
        let mut v = m.data().to_vec();
        let n0 = vnorm(&v);
        if n0 == T::zero() {
            return false;
        }
        for _ in 0..2 {
            for b in basis.iter() {
                let d = vdot(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x = *x - d * y;
                }
            }
        }
        let nv = vnorm(&v);
        if nv <= drop * n0.max(floor) {
            return false;
        }
        v.iter_mut().for_each(|z| *z = z.unscale(nv));
        basis.push(v);
        true
    };
    for s in &seeds {
        push(&mut basis, s, T::zero());
    }
    // Words in the generators: right-multiply every new basis element by each generator.
    let mut frontier = 0;
    while frontier < basis.len() && basis.len() < dim * dim {
        let end = basis.len();
        for idx in frontier..end {
            let b = CMatrix::from_vec(dim, dim, basis[idx].clone()).expect("length N²");
            for g in gens {
                push(&mut basis, &b.matmul(g), g.frob_norm());
            }
        }
        frontier = end;
    }
    OperatorSpace::from_orthonormal_vecs(dim, basis)
}

/// Alg{I, E_i, E_i†}: the smallest unital †-algebra containing the noise operators.
pub fn interaction_algebra<T: Real>(ch: &KrausChannel<T>) -> OperatorSpace<T> {
    let n = ch.dim();
    let mut gens: Vec<CMatrix<T>> = Vec::new();
    for e in ch.operators() {
        gens.push(e.clone());
        gens.push(e.adjoint());
    }
    let mut seeds = vec![CMatrix::identity(n)];
    seeds.extend(gens.iter().cloned());
    multiply_closure(n, seeds, &gens)
}

/// Algebra generated by the E_i under products alone (no identity, no adjoints).
pub fn product_algebra<T: Real>(ch: &KrausChannel<T>) -> OperatorSpace<T> {
    let gens = ch.operators().to_vec();
    multiply_closure(ch.dim(), gens.clone(), &gens)
}

fn kernel_space<T: Real>(dim: usize, constraints: &CMatrix<T>, tol: T) -> OperatorSpace<T> {
    OperatorSpace::from_orthonormal_vecs(dim, null_space_basis_scaled(constraints, tol, T::one()))
}

/// {ρ : [ρ, G] = 0 = [ρ, G†] for every generator G}.
///
/// Each generator contributes the row blocks G⊗I − I⊗Gᵀ acting on row-major vec(ρ).
pub fn commutant<T: Real>(generators: &[CMatrix<T>], tol: T) -> Result<OperatorSpace<T>> {
    let Some(first) = generators.first() else {
        return Err(Error::InvalidParameter("commutant needs at least one generator".into()));
    };
    let n = first.rows();
    for g in generators {
        if g.shape() != (n, n) {
            return Err(Error::DimMismatch(format!("generator {:?}, expected {n}x{n}", g.shape())));
        }
    }
    let mut mats: Vec<CMatrix<T>> = Vec::new();
    // Unit-norm generators keep the constraint rows on the scale the kernel cut assumes.
    for g in generators {
        let norm = g.frob_norm();
        if norm == T::zero() {
            continue;
        }
        let g = g.scale_real(T::one() / norm);
        if !g.is_hermitian(T::lit(1e-14)) {
            mats.push(g.adjoint());
        }
        mats.push(g);
    }
    if mats.is_empty() {
        return Ok(OperatorSpace::full(n));
    }
    let n2 = n * n;
    let id = CMatrix::identity(n);
    let mut stacked = CMatrix::zeros(mats.len() * n2, n2);
    for (k, g) in mats.iter().enumerate() {
        let block = &g.kron(&id) - &id.kron(&g.transpose());
        stacked.set_submatrix(k * n2, 0, &block);
    }
    Ok(kernel_space(n, &stacked, tol))
}

/// Commutant of a channel's noise operators.
pub fn noise_commutant<T: Real>(ch: &KrausChannel<T>, tol: T) -> OperatorSpace<T> {
    commutant(ch.operators(), tol).expect("channel operators share one shape")
}

/// Fix(E) = ker(Φ − id) with Φ the superoperator on row-major vectorizations.
pub fn fixed_point_set<T: Real>(ch: &KrausChannel<T>, tol: T) -> OperatorSpace<T> {
    let n2 = ch.dim() * ch.dim();
    let phi = &ch.superoperator() - &CMatrix::identity(n2);
    kernel_space(ch.dim(), &phi, tol)
}

/// Outcome of [`fix_equals_commutant`].
#[derive(Clone, Debug, PartialEq)]
pub struct FixComparison<T> {
    pub equal: bool,
    pub unital: bool,
    pub fixed: OperatorSpace<T>,
    pub commutant: OperatorSpace<T>,
}

/// Compares Fix(E) with the noise commutant; for a channel these agree exactly
/// when it is unital.
pub fn fix_equals_commutant<T: Real>(ch: &KrausChannel<T>, tol: T) -> Result<FixComparison<T>> {
    ch.require_tp()?;
    let fixed = fixed_point_set(ch, tol);
    let comm = noise_commutant(ch, tol);
    let equal = fixed.same_as(&comm, tol);
    let unital = ch.is_unital(tol);
    if equal != unital {
        return Err(Error::ConditionViolated(format!(
            "Fix(E) {} the commutant but the channel is {}unital",
            if equal { "equals" } else { "differs from" },
            if unital { "" } else { "not " }
        )));
    }
    Ok(FixComparison { equal, unital, fixed, commutant: comm })
}

/// For a unital channel, whether every E_i† lies in the algebra generated by the E_i.
pub fn adjoints_in_algebra<T: Real>(ch: &KrausChannel<T>, tol: T) -> Result<bool> {
    ch.require_unital(tol)?;
    let a0 = product_algebra(ch);
    Ok(ch.operators().iter().all(|e| a0.contains(&e.adjoint(), tol)))
}

/// One summand 1_m ⊗ M_n of a Wedderburn decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    /// Multiplicity m.
    pub m: usize,
    /// Size n of the full matrix factor.
    pub n: usize,
    /// First column of the block in the basis change.
    pub offset: usize,
}

/// Unitary equivalence A ≅ ⊕_k 1_{m_k} ⊗ M_{n_k}.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraStructure<T> {
    pub blocks: Vec<Block>,
    /// Columns are the adapted basis; in it every element is block diagonal,
    /// and block k has the form 1_{m_k} ⊗ X with basis index a·n_k + j.
    pub basis_change: CMatrix<T>,
}

impl<T: Real> AlgebraStructure<T> {
    pub fn dim(&self) -> usize {
        self.basis_change.rows()
    }

    /// Fraction of ‖x‖_F lying outside the 1_m ⊗ M_n pattern after conjugation.
    pub fn pattern_residual(&self, x: &CMatrix<T>) -> T {
        let y = self.basis_change.adjoint_mul(&x.matmul(&self.basis_change));
        let ideal = self.pattern_part(&y);
        let total = x.frob_norm();
        if total == T::zero() {
            T::zero()
        } else {
            y.dist(&ideal) / total
        }
    }

    /// Nearest element of ⊕ 1_m ⊗ M_n to y (already in the adapted basis).
    fn pattern_part(&self, y: &CMatrix<T>) -> CMatrix<T> {
        let mut out = CMatrix::zeros(y.rows(), y.cols());
        for b in &self.blocks {
            let mut avg = CMatrix::zeros(b.n, b.n);
            for a in 0..b.m {
                let o = b.offset + a * b.n;
                avg = &avg + &y.submatrix(o, o, b.n, b.n);
            }
            let avg = avg.scale_real(T::one() / T::lit(b.m as f64));
            for a in 0..b.m {
                let o = b.offset + a * b.n;
                out.set_submatrix(o, o, &avg);
            }
        }
        out
    }

    /// basis_change · (0 ⊕ (1_m/m) ⊗ σ ⊕ 0) · basis_change† for block `k`.
    pub fn encode(&self, k: usize, sigma: &CMatrix<T>) -> Result<CMatrix<T>> {
        let b = *self.blocks.get(k).ok_or_else(|| Error::IndexOutOfRange(format!("block {k} of {}", self.blocks.len())))?;
        if sigma.shape() != (b.n, b.n) {
            return Err(Error::DimMismatch(format!("block {k} holds {}x{} operators", b.n, b.n)));
        }
        let cols = self.basis_change.submatrix(0, b.offset, self.dim(), b.m * b.n);
        let inner = CMatrix::identity(b.m).scale_real(T::one() / T::lit(b.m as f64)).kron(sigma);
        Ok(cols.matmul(&inner).mul_adjoint(&cols))
    }
}

fn clusters<T: Real>(eigenvalues: &[T]) -> Vec<std::ops::Range<usize>> {
    let Some((&lo, &hi)) = eigenvalues.first().zip(eigenvalues.last()) else {
        return Vec::new();
    };
    // Measured against the eigenvalue scale too, so a multiple of the identity is one cluster.
    let spread = (hi - lo).max(lo.abs().max(hi.abs()));
    let gap = T::lit(CLUSTER_GAP) * spread;
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..eigenvalues.len() {
        if spread > T::zero() && eigenvalues[i] - eigenvalues[i - 1] > gap {
            out.push(start..i);
            start = i;
        }
    }
    out.push(start..eigenvalues.len());
    out
}

fn random_hermitian_in<T: Real, R: Rng + ?Sized>(basis: &[CMatrix<T>], rng: &mut R) -> CMatrix<T> {
    let n = basis[0].rows();
    let x = basis.iter().fold(CMatrix::zeros(n, n), |acc, b| &acc + &b.scale(gaussian(rng)));
    x.hermitian_part()
}

fn failed(msg: impl Into<String>) -> Error {
    Error::StructureResolutionFailed(msg.into())
}

/// Wedderburn decomposition of a unital †-algebra given by an operator basis.
///
/// Minimal central projections come from the eigenspaces of a random Hermitian
/// central element; inside each the compressed algebra has dimension n², and
/// the eigenspaces of a random Hermitian element (n clusters of size m) are
/// aligned by a random algebra element to produce the 1_m ⊗ M_n ordering.
/// Randomness is drawn from `seed`; ambiguous clustering triggers up to
/// [`STRUCTURE_RETRIES`] further seeds.
pub fn wedderburn_structure<T: Real>(space: &OperatorSpace<T>, tol: T, seed: u64) -> Result<AlgebraStructure<T>> {
    let n = space.ambient_dim();
    if space.dimension() == 0 {
        return Err(Error::NotAnAlgebra("the zero space".into()));
    }
    let check = tol.sqrt().min(T::lit(1e-6)).max(tol);
    if !space.contains(&CMatrix::identity(n), check) {
        return Err(Error::NotAnAlgebra("the identity is not in the space".into()));
    }
    let adj = space.adjoint_residual();
    if adj > check {
        return Err(Error::NotAnAlgebra(format!("not closed under adjoints (residual {adj})")));
    }
    let prod = space.product_residual(4, seed);
    if prod > check {
        return Err(Error::NotAnAlgebra(format!("not closed under products (residual {prod})")));
    }
    let mut last = failed("no attempt made");
    for attempt in 0..=STRUCTURE_RETRIES {
        match resolve(space, tol, seed.wrapping_add(attempt)) {
            Ok(s) => return Ok(s),
            Err(e @ Error::StructureResolutionFailed(_)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

fn resolve<T: Real>(space: &OperatorSpace<T>, tol: T, seed: u64) -> Result<AlgebraStructure<T>> {
    let n = space.ambient_dim();
    let n2 = n * n;
    let basis = space.basis();
    let d = basis.len();
    let mut rng = seeded_rng(seed);

    // Centre: elements of the space commuting with two random elements and their
    // adjoints (a generic pair generates the whole algebra).
    let probes: Vec<CMatrix<T>> = {
        let a = space.random_element(&mut rng);
        let b = space.random_element(&mut rng);
        vec![a.adjoint(), b.adjoint(), a, b]
    };
    let mut stacked = CMatrix::zeros(probes.len() * n2, d);
    for (i, bi) in basis.iter().enumerate() {
        for (p, g) in probes.iter().enumerate() {
            let c = bi.commutator(g);
            for (q, &z) in c.data().iter().enumerate() {
                stacked[(p * n2 + q, i)] = z;
            }
        }
    }
    let scale = probes.iter().map(|p| p.frob_norm()).fold(T::zero(), |x, y| x.max(y));
    let centre_coeffs = null_space_basis_scaled(&stacked, tol, scale);
    if centre_coeffs.is_empty() {
        return Err(failed("empty centre"));
    }
    let centre: Vec<CMatrix<T>> = centre_coeffs
        .iter()
        .map(|c| basis.iter().zip(c).fold(CMatrix::zeros(n, n), |acc, (b, &z)| &acc + &b.scale(z)))
        .collect();

    let h = random_hermitian_in(&centre, &mut rng);
    let eig = hermitian_eigen(&h, T::lit(1e-8))?;
    let groups = clusters(&eig.eigenvalues);
    if groups.len() != centre.len() {
        return Err(failed(format!("{} eigenvalue clusters for a centre of dimension {}", groups.len(), centre.len())));
    }

    struct Found<T> {
        m: usize,
        n: usize,
        order: usize,
        columns: Vec<Vec<Cx<T>>>,
    }
    let mut found: Vec<Found<T>> = Vec::new();
    for (order, g) in groups.iter().enumerate() {
        let w = CMatrix::from_columns(n, &g.clone().map(|k| eig.vector(k)).collect::<Vec<_>>());
        let dk = w.cols();
        let compressed: Vec<CMatrix<T>> = basis.iter().map(|b| w.adjoint_mul(&b.matmul(&w))).collect();
        let local = OperatorSpace::span_scaled(dk, &compressed, T::one());
        let dim = local.dimension();
        let nk = (dim as f64).sqrt().round() as usize;
        if nk * nk != dim || nk == 0 || dk % nk != 0 {
            return Err(failed(format!("block of spatial dimension {dk} carries an algebra of dimension {dim}")));
        }
        let mk = dk / nk;

        let hk = random_hermitian_in(local.basis(), &mut rng);
        let ek = hermitian_eigen(&hk, T::lit(1e-8))?;
        let sub = clusters(&ek.eigenvalues);
        if sub.len() != nk || sub.iter().any(|r| r.len() != mk) {
            return Err(failed(format!("expected {nk} eigenvalue clusters of size {mk}")));
        }
        let spaces: Vec<CMatrix<T>> =
            sub.iter().map(|r| CMatrix::from_columns(dk, &r.clone().map(|k| ek.vector(k)).collect::<Vec<_>>())).collect();
        let x = local.random_element(&mut rng);
        let mut aligned = vec![spaces[0].clone()];
        for s in &spaces[1..] {
            // Q_j x Q_1 maps S_1 onto S_j as a multiple of an isometry.
            let y = s.matmul(&s.adjoint_mul(&x.matmul(&spaces[0])));
            if y.frob_norm() <= T::lit(1e-8) {
                return Err(failed("degenerate alignment element"));
            }
            aligned.push(polar_isometry(&y));
        }
        let mut columns = Vec::with_capacity(dk);
        for a in 0..mk {
            for f in &aligned {
                columns.push(w.apply(&f.col(a)));
            }
        }
        found.push(Found { m: mk, n: nk, order, columns });
    }
    found.sort_by(|a, b| b.n.cmp(&a.n).then(b.m.cmp(&a.m)).then(a.order.cmp(&b.order)));

    let mut blocks = Vec::with_capacity(found.len());
    let mut cols = Vec::with_capacity(n);
    for f in found {
        blocks.push(Block { m: f.m, n: f.n, offset: cols.len() });
        cols.extend(f.columns);
    }
    if cols.len() != n {
        return Err(failed(format!("blocks cover {} of {n} dimensions", cols.len())));
    }
    let structure = AlgebraStructure { blocks, basis_change: CMatrix::from_columns(n, &cols) };
    let worst = basis.iter().map(|b| structure.pattern_residual(b)).fold(T::zero(), |m, r| m.max(r));
    if worst > T::lit(1e-7) || structure.basis_change.unitary_residual() > T::lit(1e-8) {
        return Err(failed(format!("block pattern residual {worst}")));
    }
    Ok(structure)
}

/// One noiseless subsystem 1_m ⊗ M_n with n ≥ 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NoiselessSubsystem {
    /// Index into [`NoiselessReport::structure`]'s blocks.
    pub block: usize,
    pub m: usize,
    pub n: usize,
    /// m = 1: the block is a decoherence-free subspace.
    pub decoherence_free: bool,
}

/// Structure of the noise commutant and the protected blocks it contains.
#[derive(Clone, Debug)]
pub struct NoiselessReport<T> {
    pub structure: AlgebraStructure<T>,
    pub commutant_dim: usize,
    pub subsystems: Vec<NoiselessSubsystem>,
}

impl<T: Real> NoiselessReport<T> {
    /// Encoded operator for subsystem `s`: (1_m/m) ⊗ σ placed on its block.
    pub fn encode(&self, s: usize, sigma: &CMatrix<T>) -> Result<CMatrix<T>> {
        let sub = self.subsystems.get(s).ok_or_else(|| Error::IndexOutOfRange(format!("subsystem {s}")))?;
        self.structure.encode(sub.block, sigma)
    }
}

/// Noiseless subsystems of a unital channel from the structure of its commutant.
pub fn noiseless_subsystems<T: Real>(ch: &KrausChannel<T>, tol: T, seed: u64) -> Result<NoiselessReport<T>> {
    ch.require_tp()?;
    ch.require_unital(tol)?;
    let comm = noise_commutant(ch, tol);
    let structure = wedderburn_structure(&comm, tol, seed)?;
    let subsystems = structure
        .blocks
        .iter()
        .enumerate()
        .filter(|(_, b)| b.n >= 2)
        .map(|(k, b)| NoiselessSubsystem { block: k, m: b.m, n: b.n, decoherence_free: b.m == 1 })
        .collect();
    Ok(NoiselessReport { structure, commutant_dim: comm.dimension(), subsystems })
}

/// Outcome of [`dead_subspace`] when E(I) is singular.
#[derive(Clone, Debug)]
pub struct DeadSubspace<T> {
    /// E(I).
    pub identity_image: CMatrix<T>,
    /// Projection onto Ran E(I).
    pub range_projection: CMatrix<T>,
    /// Projection onto the complement H_E^⊥.
    pub dead_projection: CMatrix<T>,
    /// Orthonormal basis of H_E^⊥.
    pub dead_basis: Vec<Vec<Cx<T>>>,
    /// Whether E_i = P_E E_i P_E for every i.
    pub hypothesis_holds: bool,
    /// ‖E(P_E^⊥)‖_F; present when the hypothesis holds, and then zero up to roundoff.
    pub annihilation_residual: Option<T>,
}

/// Range analysis of E(I) for a CP map. Returns `None` when E(I) is invertible.
pub fn dead_subspace<T: Real>(ch: &KrausChannel<T>, tol: T) -> Result<Option<DeadSubspace<T>>> {
    let a = ch.identity_image();
    let eig = hermitian_eigen(&a, tol)?;
    let lmax = eig.eigenvalues.iter().fold(T::zero(), |m, &l| m.max(l.abs()));
    let cut = tol * lmax.max(T::one());
    let dead: Vec<usize> = (0..eig.eigenvalues.len()).filter(|&k| eig.eigenvalues[k] <= cut).collect();
    if dead.is_empty() {
        return Ok(None);
    }
    let n = ch.dim();
    let dead_basis: Vec<Vec<Cx<T>>> = dead.iter().map(|&k| eig.vector(k)).collect();
    let dead_projection =
        dead_basis.iter().fold(CMatrix::zeros(n, n), |acc, v| &acc + &CMatrix::outer(v, v));
    let range_projection = &CMatrix::identity(n) - &dead_projection;
    let hypothesis_holds = ch.operators().iter().all(|e| {
        let pep = range_projection.matmul(e).matmul(&range_projection);
        e.dist(&pep) <= tol * (T::one() + e.frob_norm())
    });
    let annihilation_residual = hypothesis_holds.then(|| ch.apply_unchecked(&dead_projection).frob_norm());
    Ok(Some(DeadSubspace {
        identity_image: a,
        range_projection,
        dead_projection,
        dead_basis,
        hypothesis_holds,
        annihilation_residual,
    }))
}

/// Dimension of the centre-free sum Σ n_k² implied by a structure.
pub fn algebra_dimension(blocks: &[Block]) -> usize {
    blocks.iter().map(|b| b.n * b.n).sum()
}
