//! Seeded random matrices and states. Every generator takes the RNG explicitly;
//! there is no global random state.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{svd, CMatrix};
use crate::scalar::{Cx, Real};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian entry (variance 1/2 per component).
pub fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Cx<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re * std::f64::consts::FRAC_1_SQRT_2), T::lit(im * std::f64::consts::FRAC_1_SQRT_2))
}

pub fn random_matrix<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_hermitian<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    random_matrix::<T, R>(n, n, rng).hermitian_part()
}

/// Haar-ish random unitary: unitary polar factor of a Ginibre matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    let g: CMatrix<T> = random_matrix(n, n, rng);
    let d = svd(&g);
    d.u.mul_adjoint(&d.v)
}

pub fn random_state<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Cx<T>> {
    let v: Vec<Cx<T>> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = crate::linalg::vnorm(&v);
    v.into_iter().map(|z| z.unscale(norm)).collect()
}

/// Random full-rank density matrix G·G†/Tr(G·G†).
pub fn random_density<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    let g: CMatrix<T> = random_matrix(n, n, rng);
    let p = g.mul_adjoint(&g);
    let tr = p.trace().re;
    p.scale_real(T::one() / tr)
}

/// Random real coefficients, one per element.
pub fn random_reals<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<T> {
    (0..n)
        .map(|_| {
            let x: f64 = rng.sample(StandardNormal);
            T::lit(x)
        })
        .collect()
}
