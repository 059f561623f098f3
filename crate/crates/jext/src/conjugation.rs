//! Conjugations on `C^n` and the bilinear form they induce.
//!
//! A conjugation is an antilinear involution `J` with `(Jx, Jy) = (y, x)`.
//! On a finite-dimensional space every such map acts as `x ↦ C · conj(x)` for
//! a symmetric unitary coefficient matrix `C`, and that matrix is what
//! [`Conjugation`] stores: symmetry gives the involution, unitarity gives the
//! antiunitary law. The induced form `[x, y] = (x, Jy) = xᵀ · conj(C) · y` is
//! complex bilinear and symmetric.

use crate::error::{Error, Result};
use crate::sampling;
use crate::{inner, max_abs, C64, CMatrix, CVector};

/// Tolerances, retry budget and seed shared by all numerical decisions.
///
/// `rank_tol` is the absolute singular-value / residual-norm cutoff for rank
/// decisions; `residual_tol` bounds identity-check residuals; `max_retries`
/// caps the splitting retry loop; `seed` feeds instance generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub rank_tol: f64,
    pub residual_tol: f64,
    pub max_retries: u32,
    pub seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_tol: 1e-8,
            residual_tol: 1e-8,
            max_retries: 32,
            seed: 0,
        }
    }
}

impl ToleranceConfig {
    pub fn new(rank_tol: f64, residual_tol: f64, max_retries: u32, seed: u64) -> Result<Self> {
        if !(rank_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "rank_tol must be positive, got {rank_tol}"
            )));
        }
        if !(residual_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "residual_tol must be positive, got {residual_tol}"
            )));
        }
        Ok(Self {
            rank_tol,
            residual_tol,
            max_retries,
            seed,
        })
    }

    pub fn with_residual_tol(mut self, tol: f64) -> Self {
        self.residual_tol = tol;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Antilinear involution `J x = C · conj(x)` with `C` symmetric unitary.
///
/// Validity is checked once at construction; operations assume it afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Conjugation {
    coeff: CMatrix,
}

impl Conjugation {
    /// Wraps a coefficient matrix, validating that it is square, nonempty,
    /// symmetric and unitary within `cfg.residual_tol`.
    pub fn new(coeff: CMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        if coeff.nrows() != coeff.ncols() {
            return Err(Error::ConjugationInvalid(format!(
                "coefficient matrix is {}x{}",
                coeff.nrows(),
                coeff.ncols()
            )));
        }
        if coeff.nrows() == 0 {
            return Err(Error::ConjugationInvalid("empty coefficient matrix".into()));
        }
        let c = Self { coeff };
        let sym = c.symmetry_residual();
        if sym > cfg.residual_tol {
            return Err(Error::ConjugationInvalid(format!(
                "symmetry residual {sym:.3e} exceeds {:.3e}",
                cfg.residual_tol
            )));
        }
        let uni = c.unitarity_residual();
        if uni > cfg.residual_tol {
            return Err(Error::ConjugationInvalid(format!(
                "unitarity residual {uni:.3e} exceeds {:.3e}",
                cfg.residual_tol
            )));
        }
        Ok(c)
    }

    /// Plain entrywise conjugation (`C = I`).
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1);
        Self {
            coeff: CMatrix::identity(n, n),
        }
    }

    /// Deterministic random conjugation `C = Q · Qᵀ` for a seeded random
    /// unitary `Q`; every symmetric unitary arises this way.
    pub fn random(n: usize, seed: u64) -> Self {
        assert!(n >= 1);
        let mut rng = sampling::rng_from_seed(seed);
        Self::random_with_rng(&mut rng, n)
    }

    pub(crate) fn random_with_rng(rng: &mut impl rand::Rng, n: usize) -> Self {
        let q = sampling::random_unitary(rng, n);
        let coeff = &q * q.transpose();
        Self { coeff }
    }

    pub fn dim(&self) -> usize {
        self.coeff.nrows()
    }

    pub fn coeff(&self) -> &CMatrix {
        &self.coeff
    }

    /// `‖C − Cᵀ‖_max`.
    pub fn symmetry_residual(&self) -> f64 {
        max_abs(&(&self.coeff - self.coeff.transpose()))
    }

    /// `‖C · C† − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        max_abs(&(&self.coeff * self.coeff.adjoint() - CMatrix::identity(n, n)))
    }

    /// `J x = C · conj(x)`.
    pub fn apply(&self, x: &CVector) -> Result<CVector> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(self.apply_raw(x))
    }

    pub(crate) fn apply_raw(&self, x: &CVector) -> CVector {
        &self.coeff * x.conjugate()
    }

    /// The bilinear form `[x, y] = (x, Jy) = xᵀ · conj(C) · y`.
    pub fn bilinear(&self, x: &CVector, y: &CVector) -> Result<C64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        if y.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: y.len(),
            });
        }
        Ok(self.bilinear_raw(x, y))
    }

    pub(crate) fn bilinear_raw(&self, x: &CVector, y: &CVector) -> C64 {
        (x.transpose() * self.coeff.conjugate() * y)[(0, 0)]
    }

    /// Matrix of `J ∘ B ∘ J`, i.e. `C · conj(B) · conj(C)`.
    pub fn conjugate_operator(&self, b: &CMatrix) -> Result<CMatrix> {
        if b.nrows() != self.dim() || b.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: b.nrows().max(b.ncols()),
            });
        }
        Ok(self.conjugate_operator_raw(b))
    }

    pub(crate) fn conjugate_operator_raw(&self, b: &CMatrix) -> CMatrix {
        &self.coeff * b.conjugate() * self.coeff.conjugate()
    }

    /// Orthonormal basis `f_0, …, f_{n−1}` of fixed points (`J f_i = f_i`),
    /// which is automatically a complex basis of the whole space.
    ///
    /// Sweeps the standard basis: each candidate `v` contributes `v + Jv` and
    /// `i(v − Jv)`, both fixed by `J`. Candidates are Gram-Schmidt reduced
    /// (two passes) against the accepted vectors using the real part of the
    /// inner product — real-linear combinations of fixed vectors stay fixed,
    /// and inner products of fixed vectors are automatically real — and kept
    /// when the residual norm exceeds `cfg.rank_tol`.
    pub fn fixed_basis(&self, cfg: &ToleranceConfig) -> Result<Vec<CVector>> {
        let n = self.dim();
        let mut accepted: Vec<CVector> = Vec::with_capacity(n);
        'sweep: for k in 0..n {
            let e = CVector::from_fn(n, |i, _| {
                if i == k {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            let je = self.apply_raw(&e);
            let plus = &e + &je;
            let minus = (&e - &je).map(|z| C64::i() * z);
            for cand in [plus, minus] {
                let mut u = cand;
                for _ in 0..2 {
                    for f in &accepted {
                        let coeff = inner(&u, f).re;
                        u -= f * C64::new(coeff, 0.0);
                    }
                }
                let norm = u.norm();
                if norm > cfg.rank_tol {
                    accepted.push(u / C64::new(norm, 0.0));
                    if accepted.len() == n {
                        break 'sweep;
                    }
                }
            }
        }
        if accepted.len() < n {
            return Err(Error::InternalInvariant(format!(
                "fixed-point sweep produced {} of {} vectors",
                accepted.len(),
                n
            )));
        }
        Ok(accepted)
    }

    /// Block-diagonal doubling `diag(C, C)` on `C^{2n}`.
    pub fn doubled(&self) -> Self {
        let n = self.dim();
        let mut coeff = CMatrix::zeros(2 * n, 2 * n);
        coeff.view_mut((0, 0), (n, n)).copy_from(&self.coeff);
        coeff.view_mut((n, n), (n, n)).copy_from(&self.coeff);
        Self { coeff }
    }
}
