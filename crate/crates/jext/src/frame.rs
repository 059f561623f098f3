//! Orthonormal frames: the concrete representation of subspaces.
//!
//! A [`Frame`] is an `N×k` matrix with orthonormal columns spanning a
//! `k`-dimensional subspace of `C^N`; the zero subspace (`k = 0`) is a
//! first-class value. Rank decisions use the absolute cutoff `cfg.rank_tol`
//! on unit-normalized inputs, and orthonormalization is modified Gram-Schmidt
//! with one reorthogonalization pass.

use crate::conjugation::ToleranceConfig;
use crate::error::{Error, Result};
use crate::{inner, max_abs, C64, CMatrix, CVector};

/// A linear or antilinear map of the ambient space, by coefficient matrix.
#[derive(Debug, Clone, Copy)]
pub enum MapRef<'a> {
    /// `v ↦ M v`.
    Linear(&'a CMatrix),
    /// `v ↦ M · conj(v)`.
    Antilinear(&'a CMatrix),
}

impl MapRef<'_> {
    pub fn apply(&self, v: &CVector) -> CVector {
        match self {
            MapRef::Linear(m) => *m * v,
            MapRef::Antilinear(m) => *m * v.conjugate(),
        }
    }

    fn apply_columns(&self, m: &CMatrix) -> CMatrix {
        match self {
            MapRef::Linear(t) => *t * m,
            MapRef::Antilinear(t) => *t * m.conjugate(),
        }
    }

    fn ambient_dim(&self) -> usize {
        match self {
            MapRef::Linear(m) | MapRef::Antilinear(m) => m.nrows(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    ambient_dim: usize,
    basis: CMatrix,
}

impl Frame {
    /// Wraps an `N×k` basis matrix, validating orthonormality of the columns
    /// within `cfg.residual_tol`.
    pub fn new(basis: CMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        let f = Self {
            ambient_dim: basis.nrows(),
            basis,
        };
        let residual = f.gram_residual();
        if residual > cfg.residual_tol {
            return Err(Error::InvalidArgument(format!(
                "basis columns are not orthonormal (gram residual {residual:.3e})"
            )));
        }
        if f.dim() > f.ambient_dim {
            return Err(Error::InvalidArgument(format!(
                "{} columns exceed ambient dimension {}",
                f.dim(),
                f.ambient_dim
            )));
        }
        Ok(f)
    }

    /// The zero subspace of `C^ambient_dim`.
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: CMatrix::zeros(ambient_dim, 0),
        }
    }

    /// The full space, spanned by the standard basis.
    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: CMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    fn from_orthonormal_columns(ambient_dim: usize, cols: Vec<CVector>) -> Self {
        if cols.is_empty() {
            return Self::zero(ambient_dim);
        }
        Self {
            ambient_dim,
            basis: CMatrix::from_columns(&cols),
        }
    }

    /// Span of the given vectors, as an orthonormal frame.
    ///
    /// Inputs are normalized to unit norm; a candidate is dropped when its
    /// residual after projecting out the accepted vectors (two Gram-Schmidt
    /// passes) falls to `cfg.rank_tol` or below. Empty input gives the zero
    /// subspace.
    pub fn orthonormalize(
        vectors: &[CVector],
        ambient_dim: usize,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        let mut cols: Vec<CVector> = Vec::new();
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: v.len(),
                });
            }
            let norm = v.norm();
            if norm <= cfg.rank_tol {
                continue;
            }
            let mut u = v / C64::new(norm, 0.0);
            for _ in 0..2 {
                for f in &cols {
                    let coeff = inner(&u, f);
                    u -= f * coeff;
                }
            }
            let residual = u.norm();
            if residual > cfg.rank_tol {
                cols.push(u / C64::new(residual, 0.0));
            }
        }
        Ok(Self::from_orthonormal_columns(ambient_dim, cols))
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn column(&self, i: usize) -> CVector {
        self.basis.column(i).into_owned()
    }

    pub fn columns(&self) -> Vec<CVector> {
        (0..self.dim()).map(|i| self.column(i)).collect()
    }

    /// `‖B†B − I‖_max`.
    pub fn gram_residual(&self) -> f64 {
        let k = self.dim();
        max_abs(&(self.basis.adjoint() * &self.basis - CMatrix::identity(k, k)))
    }

    /// Orthogonal projection of `v` onto the span.
    pub fn project(&self, v: &CVector) -> CVector {
        &self.basis * (self.basis.adjoint() * v)
    }

    /// `‖v − P v‖`.
    pub fn projection_residual(&self, v: &CVector) -> f64 {
        (v - self.project(v)).norm()
    }

    /// Orthogonal complement; its dimension is exactly `N − k`.
    ///
    /// Standard basis vectors are reduced against the frame and the already
    /// accepted candidates; the candidate with the largest residual is
    /// accepted each round, which needs no rank threshold because the count
    /// is known in advance.
    pub fn complement(&self) -> Frame {
        let n = self.ambient_dim;
        let want = n - self.dim();
        let mut residuals: Vec<CVector> = (0..n)
            .map(|k| {
                let e = CVector::from_fn(n, |i, _| {
                    if i == k {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                });
                &e - self.project(&e)
            })
            .collect();
        let mut accepted: Vec<CVector> = Vec::with_capacity(want);
        for _ in 0..want {
            let (best, _) = residuals
                .iter()
                .enumerate()
                .map(|(i, r)| (i, r.norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("ambient dimension is positive");
            let mut u = residuals[best].clone();
            // one reorthogonalization pass against frame and accepted vectors
            u -= self.project(&u);
            for f in &accepted {
                let coeff = inner(&u, f);
                u -= f * coeff;
            }
            let norm = u.norm();
            let u = u / C64::new(norm, 0.0);
            for r in residuals.iter_mut() {
                let coeff = inner(r, &u);
                *r -= &u * coeff;
            }
            accepted.push(u);
        }
        Self::from_orthonormal_columns(n, accepted)
    }

    /// `‖F1† · F2‖_max` — zero when either frame is empty.
    pub fn cross_residual(&self, other: &Frame) -> f64 {
        max_abs(&(self.basis.adjoint() * &other.basis))
    }

    pub fn is_orthogonal_to(&self, other: &Frame, cfg: &ToleranceConfig) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self.cross_residual(other) <= cfg.residual_tol)
    }

    /// Column concatenation of two orthogonal frames.
    pub fn direct_sum(&self, other: &Frame, cfg: &ToleranceConfig) -> Result<Frame> {
        self.check_ambient(other)?;
        let residual = self.cross_residual(other);
        if residual > cfg.residual_tol {
            return Err(Error::NotOrthogonal { residual });
        }
        let mut cols = self.columns();
        cols.extend(other.columns());
        Ok(Self::from_orthonormal_columns(self.ambient_dim, cols))
    }

    /// Image under a linear or antilinear ambient map, reorthonormalized.
    ///
    /// All maps used by the engine are unitary or antiunitary, so the
    /// reorthonormalization is a numerical safeguard; a genuine rank drop is
    /// reported as [`Error::RankCollapse`].
    pub fn map(&self, map: MapRef<'_>, cfg: &ToleranceConfig) -> Result<Frame> {
        if map.ambient_dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: map.ambient_dim(),
            });
        }
        let image = map.apply_columns(&self.basis);
        let cols: Vec<CVector> = (0..image.ncols())
            .map(|i| image.column(i).into_owned())
            .collect();
        let mapped = Self::orthonormalize(&cols, self.ambient_dim, cfg)?;
        if mapped.dim() < self.dim() {
            return Err(Error::RankCollapse {
                expected: self.dim(),
                got: mapped.dim(),
            });
        }
        Ok(mapped)
    }

    /// Largest mutual projection residual between the two spans.
    pub fn span_distance(&self, other: &Frame) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..other.dim() {
            worst = worst.max(self.projection_residual(&other.column(i)));
        }
        for i in 0..self.dim() {
            worst = worst.max(other.projection_residual(&self.column(i)));
        }
        worst
    }

    pub fn spans_equal(&self, other: &Frame, cfg: &ToleranceConfig) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self.dim() == other.dim() && self.span_distance(other) <= cfg.residual_tol)
    }

    fn check_ambient(&self, other: &Frame) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        Ok(())
    }
}
