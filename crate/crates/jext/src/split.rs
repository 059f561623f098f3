//! Splitting a conjugation-invariant subspace `D` as `X ⊕ JX`.
//!
//! The conjugation restricted to `D` (in frame coordinates) is again a
//! conjugation; its fixed-point basis `f_0, …, f_{2p−1}` is paired
//! consecutively into `(f_{2k} ± i f_{2k+1})/√2`. The plus combinations span
//! `X`, the minus combinations span `JX`, and `X ⊥ JX` with `X ⊕ JX = D`.
//!
//! A nonzero `rotation_seed` first mixes the fixed basis by a seeded random
//! real-orthogonal matrix; real-linear combinations of fixed vectors stay
//! fixed, so any such rotation yields another valid splitting. The rotation
//! is drawn from the full orthogonal group: for `dim D = 2` proper rotations
//! leave the splitting unchanged and only a reflection reaches the mirrored
//! pairing, which is sometimes the one that makes the extended graph a graph.

use crate::conjugation::{Conjugation, ToleranceConfig};
use crate::error::{Error, Result};
use crate::frame::{Frame, MapRef};
use crate::sampling;
use crate::{C64, CVector};

/// The two halves of a splitting, with its quality residuals.
#[derive(Debug, Clone)]
pub struct Splitting {
    /// `X`.
    pub half: Frame,
    /// `JX`, the image of `X` under the conjugation.
    pub conj_half: Frame,
    /// `‖X† · JX‖_max`.
    pub residual_orth: f64,
    /// Span distance between `X ⊕ JX` and `D`.
    pub residual_span: f64,
    /// Worst fixed-point defect `‖J f − f‖` over the fixed basis used.
    pub residual_fixed: f64,
}

impl Splitting {
    pub fn max_residual(&self) -> f64 {
        self.residual_orth
            .max(self.residual_span)
            .max(self.residual_fixed)
    }
}

/// Splits `subspace` (even positive dimension, invariant under `conj`) as
/// `X ⊕ JX`. Seed `0` is the canonical deterministic pairing; different seeds
/// generally give different splittings.
pub fn split(
    subspace: &Frame,
    conj: &Conjugation,
    rotation_seed: u64,
    cfg: &ToleranceConfig,
) -> Result<Splitting> {
    let d2 = subspace.dim();
    if d2 == 0 || d2 % 2 != 0 {
        return Err(Error::OddDimension { dim: d2 });
    }
    if conj.dim() != subspace.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: subspace.ambient_dim(),
            got: conj.dim(),
        });
    }
    let mapped = subspace.map(MapRef::Antilinear(conj.coeff()), cfg)?;
    if !mapped.spans_equal(subspace, cfg)? {
        return Err(Error::NotInvariant);
    }

    // Conjugation restricted to the subspace, in frame coordinates:
    // c ↦ (B† C conj(B)) conj(c) for the basis matrix B.
    let restricted = subspace.basis().adjoint() * conj.coeff() * subspace.basis().conjugate();
    let induced = Conjugation::new(restricted, cfg).map_err(|e| {
        Error::InternalInvariant(format!("restriction to an invariant subspace: {e}"))
    })?;

    let mut fixed = induced.fixed_basis(cfg)?;
    let residual_fixed = fixed
        .iter()
        .map(|f| (induced.apply_raw(f) - f).norm())
        .fold(0.0f64, f64::max);

    if rotation_seed != 0 {
        let mut rng = sampling::rng_from_seed(rotation_seed);
        let rot = sampling::random_orthogonal(&mut rng, d2);
        let rotated: Vec<CVector> = (0..d2)
            .map(|col| {
                let mut g = CVector::zeros(d2);
                for (row, f) in fixed.iter().enumerate() {
                    g += f * C64::new(rot[(row, col)], 0.0);
                }
                g
            })
            .collect();
        fixed = rotated;
    }

    let inv_sqrt2 = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut plus = Vec::with_capacity(d2 / 2);
    let mut minus = Vec::with_capacity(d2 / 2);
    for k in 0..d2 / 2 {
        let a = &fixed[2 * k];
        let b = &fixed[2 * k + 1];
        let x = (a + b * C64::i()) * inv_sqrt2;
        let y = (a - b * C64::i()) * inv_sqrt2;
        plus.push(subspace.basis() * x);
        minus.push(subspace.basis() * y);
    }

    let half = Frame::orthonormalize(&plus, subspace.ambient_dim(), cfg)?;
    let conj_half = Frame::orthonormalize(&minus, subspace.ambient_dim(), cfg)?;
    if half.dim() != d2 / 2 || conj_half.dim() != d2 / 2 {
        return Err(Error::InternalInvariant(
            "splitting halves lost dimension".into(),
        ));
    }

    let residual_orth = half.cross_residual(&conj_half);
    let sum = half.direct_sum(&conj_half, cfg)?;
    let residual_span = sum.span_distance(subspace);

    Ok(Splitting {
        half,
        conj_half,
        residual_orth,
        residual_span,
        residual_fixed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{DoubledKind, DoubledMap, PartialOperator};
    use crate::CMatrix;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn plain_conjugation_on_c2_canonical_pairing() {
        let j = Conjugation::identity(2);
        let s = split(&Frame::full(2), &j, 0, &cfg()).unwrap();
        assert_eq!(s.half.dim(), 1);
        // X = span{(e1 + i e2)/√2}
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let x = CVector::from_vec(vec![c(inv, 0.0), c(0.0, inv)]);
        assert!(s.half.projection_residual(&x) <= 1e-12);
        let jx = CVector::from_vec(vec![c(inv, 0.0), c(0.0, -inv)]);
        assert!(s.conj_half.projection_residual(&jx) <= 1e-12);
        assert!(s.max_residual() <= 1e-12);
    }

    #[test]
    fn worked_defect_splitting() {
        // defect space of the domain e1 ↦ e2 skew problem with C = I on C^2
        let j = Conjugation::identity(2);
        let op = PartialOperator::new(
            2,
            vec![CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)])],
            vec![CVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)])],
        )
        .unwrap();
        let g = op.graph_frame(&cfg()).unwrap();
        let r = DoubledMap::new(DoubledKind::SwapConj, &j);
        let d = crate::graph::defect_space(&g, &r, &cfg()).unwrap();
        let rconj = r.to_conjugation(&cfg()).unwrap();
        let s = split(&d, &rconj, 0, &cfg()).unwrap();
        assert_eq!(s.half.dim(), 1);
        assert!(s.max_residual() <= 1e-10);
        // Exactly two valid splittings exist: span{(0,−1,1,0)}/√2 and its
        // mirror span{(1,0,0,−1)}/√2.
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let good = CVector::from_vec(vec![c(0.0, 0.0), c(-inv, 0.0), c(inv, 0.0), c(0.0, 0.0)]);
        let mirror = CVector::from_vec(vec![c(inv, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-inv, 0.0)]);
        let hits_good = s.half.projection_residual(&good) <= 1e-10;
        let hits_mirror = s.half.projection_residual(&mirror) <= 1e-10;
        assert!(hits_good || hits_mirror);
    }

    #[test]
    fn invariants_across_seeds() {
        for seed in 0..20u64 {
            let n = 2 + 2 * (seed as usize % 4);
            let j = Conjugation::random(n, seed);
            let full = Frame::full(n);
            let s = split(&full, &j, seed, &cfg()).unwrap();
            assert_eq!(s.half.dim(), n / 2);
            assert_eq!(s.conj_half.dim(), n / 2);
            assert!(s.half.is_orthogonal_to(&s.conj_half, &cfg()).unwrap());
            assert!(s.max_residual() <= 1e-10);
            // JX equals the image of X under the conjugation
            let image = s
                .half
                .map(MapRef::Antilinear(j.coeff()), &cfg())
                .unwrap();
            assert!(image.spans_equal(&s.conj_half, &cfg()).unwrap());
            let sum = s.half.direct_sum(&s.conj_half, &cfg()).unwrap();
            assert!(sum.spans_equal(&full, &cfg()).unwrap());
        }
    }

    #[test]
    fn different_seeds_reach_different_splittings() {
        let j = Conjugation::identity(4);
        let base = split(&Frame::full(4), &j, 0, &cfg()).unwrap();
        let mut seen_different = false;
        for seed in 1..10 {
            let s = split(&Frame::full(4), &j, seed, &cfg()).unwrap();
            if !s.half.spans_equal(&base.half, &cfg()).unwrap() {
                seen_different = true;
            }
        }
        assert!(seen_different);
    }

    #[test]
    fn odd_dimension_rejected() {
        let j = Conjugation::identity(3);
        assert!(matches!(
            split(&Frame::full(3), &j, 0, &cfg()),
            Err(Error::OddDimension { dim: 3 })
        ));
        let zero = Frame::zero(3);
        assert!(matches!(
            split(&zero, &j, 0, &cfg()),
            Err(Error::OddDimension { dim: 0 })
        ));
    }

    #[test]
    fn non_invariant_subspace_rejected() {
        // span{e1 + i e2} is not invariant under plain conjugation
        let j = Conjugation::identity(2);
        let v = CVector::from_vec(vec![
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            c(0.0, std::f64::consts::FRAC_1_SQRT_2),
        ]);
        let w = CVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let f = Frame::new(CMatrix::from_columns(&[v, w]), &cfg());
        // these two are not orthogonal; build a 2-dim non-invariant frame instead
        assert!(f.is_err());
        let u1 = CVector::from_vec(vec![
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            c(0.0, std::f64::consts::FRAC_1_SQRT_2),
            c(0.0, 0.0),
        ]);
        let u2 = CVector::from_vec(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let f = Frame::new(CMatrix::from_columns(&[u1, u2]), &cfg()).unwrap();
        let j3 = Conjugation::identity(3);
        assert!(matches!(
            split(&f, &j3, 0, &cfg()),
            Err(Error::NotInvariant)
        ));
    }
}
