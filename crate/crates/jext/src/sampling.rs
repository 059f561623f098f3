//! Seeded random matrices, unitaries and frames.
//!
//! Everything here is deterministic per seed (ChaCha8 streams), which is what
//! makes generated instances and retry rotations reproducible.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::conjugation::ToleranceConfig;
use crate::frame::Frame;
use crate::{C64, CMatrix, CVector};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex_vector(rng: &mut impl Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

pub fn gaussian_complex_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn gaussian_real_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn random_unit_vector(rng: &mut impl Rng, n: usize) -> CVector {
    let v = gaussian_complex_vector(rng, n);
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Random `n×n` unitary: Q factor of a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    gaussian_complex_matrix(rng, n, n).qr().q()
}

/// Random `n×n` real orthogonal matrix. Both determinant components occur,
/// which the retry rotation relies on.
pub fn random_orthogonal(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    gaussian_real_matrix(rng, n, n).qr().q()
}

/// Random `k`-dimensional subspace of `C^ambient` as an orthonormal frame.
pub fn random_frame(
    rng: &mut impl Rng,
    ambient_dim: usize,
    k: usize,
    cfg: &ToleranceConfig,
) -> Frame {
    assert!(k <= ambient_dim);
    if k == 0 {
        return Frame::zero(ambient_dim);
    }
    let q = gaussian_complex_matrix(rng, ambient_dim, k).qr().q();
    Frame::new(q, cfg).expect("QR produces an orthonormal frame")
}
