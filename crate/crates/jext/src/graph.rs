//! The doubled space `C^{2n} = C^n ⊕ C^n`: canonical maps, operator graphs
//! and defect spaces.
//!
//! Pairs `{x, y}` are stored x-block first as the stacked vector `(x; y)`.
//! The five canonical maps act as
//!
//! ```text
//! PairConj {x,y} = {Jx,  Jy}        antilinear
//! NegSwap  {x,y} = {y,  −x}         linear
//! Swap     {x,y} = {y,   x}         linear
//! SwapConj {x,y} = {Jy,  Jx}        antilinear, = Swap∘PairConj = PairConj∘Swap
//! SignConj {x,y} = {Jx, −Jy}        antilinear, = NegSwap∘SwapConj
//! ```
//!
//! `SwapConj` and `SignConj` are conjugations of the doubled space; the graph
//! of a J-skew-symmetric operator is orthogonal to its `SwapConj` image, the
//! graph of a J-isometric operator to its `SignConj` image, and the defect
//! space is what is left of `C^{2n}` after removing the graph and its image.

use crate::conjugation::{Conjugation, ToleranceConfig};
use crate::error::{Error, Result};
use crate::frame::{Frame, MapRef};
use crate::{sigma_min, C64, CMatrix, CVector};

/// The five canonical maps of the doubled space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoubledKind {
    /// `{x, y} ↦ {Jx, Jy}`
    PairConj,
    /// `{x, y} ↦ {y, −x}`
    NegSwap,
    /// `{x, y} ↦ {y, x}`
    Swap,
    /// `{x, y} ↦ {Jy, Jx}`
    SwapConj,
    /// `{x, y} ↦ {Jx, −Jy}`
    SignConj,
}

impl DoubledKind {
    pub fn is_antilinear(self) -> bool {
        matches!(self, Self::PairConj | Self::SwapConj | Self::SignConj)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::PairConj => "PairConj",
            Self::NegSwap => "NegSwap",
            Self::Swap => "Swap",
            Self::SwapConj => "SwapConj",
            Self::SignConj => "SignConj",
        }
    }
}

/// One of the canonical maps, realized on `C^{2n}` for a concrete `J`.
#[derive(Debug, Clone)]
pub struct DoubledMap {
    kind: DoubledKind,
    base_dim: usize,
    matrix: CMatrix,
}

impl DoubledMap {
    pub fn new(kind: DoubledKind, j: &Conjugation) -> Self {
        let n = j.dim();
        let c = j.coeff();
        let mut m = CMatrix::zeros(2 * n, 2 * n);
        let id = CMatrix::identity(n, n);
        match kind {
            DoubledKind::PairConj => {
                m.view_mut((0, 0), (n, n)).copy_from(c);
                m.view_mut((n, n), (n, n)).copy_from(c);
            }
            DoubledKind::NegSwap => {
                m.view_mut((0, n), (n, n)).copy_from(&id);
                m.view_mut((n, 0), (n, n)).copy_from(&(-&id));
            }
            DoubledKind::Swap => {
                m.view_mut((0, n), (n, n)).copy_from(&id);
                m.view_mut((n, 0), (n, n)).copy_from(&id);
            }
            DoubledKind::SwapConj => {
                m.view_mut((0, n), (n, n)).copy_from(c);
                m.view_mut((n, 0), (n, n)).copy_from(c);
            }
            DoubledKind::SignConj => {
                m.view_mut((0, 0), (n, n)).copy_from(c);
                m.view_mut((n, n), (n, n)).copy_from(&(-c));
            }
        }
        Self {
            kind,
            base_dim: n,
            matrix: m,
        }
    }

    pub fn kind(&self) -> DoubledKind {
        self.kind
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn ambient_dim(&self) -> usize {
        2 * self.base_dim
    }

    pub fn is_antilinear(&self) -> bool {
        self.kind.is_antilinear()
    }

    /// Coefficient matrix: the map is `v ↦ M v` (linear kinds) or
    /// `v ↦ M · conj(v)` (antilinear kinds).
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn as_map_ref(&self) -> MapRef<'_> {
        if self.is_antilinear() {
            MapRef::Antilinear(&self.matrix)
        } else {
            MapRef::Linear(&self.matrix)
        }
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if v.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: v.len(),
            });
        }
        Ok(self.as_map_ref().apply(v))
    }

    /// Reinterprets an antilinear kind as a [`Conjugation`] of `C^{2n}`.
    pub fn to_conjugation(&self, cfg: &ToleranceConfig) -> Result<Conjugation> {
        if !self.is_antilinear() {
            return Err(Error::NotAConjugation(self.kind.name()));
        }
        Conjugation::new(self.matrix.clone(), cfg)
    }
}

/// Stacks `{x, y}` into a doubled-space vector `(x; y)`.
pub fn stack_pair(x: &CVector, y: &CVector) -> CVector {
    let n = x.len();
    debug_assert_eq!(n, y.len());
    CVector::from_fn(2 * n, |i, _| if i < n { x[i] } else { y[i - n] })
}

/// An operator known only on part of the space: independent domain vectors
/// `d_1, …, d_m` and their images `A d_1, …, A d_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialOperator {
    ambient_dim: usize,
    domain: Vec<CVector>,
    action: Vec<CVector>,
}

impl PartialOperator {
    pub fn new(ambient_dim: usize, domain: Vec<CVector>, action: Vec<CVector>) -> Result<Self> {
        if domain.len() != action.len() {
            return Err(Error::InvalidArgument(format!(
                "domain has {} vectors but action has {}",
                domain.len(),
                action.len()
            )));
        }
        for v in domain.iter().chain(action.iter()) {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: v.len(),
                });
            }
        }
        Ok(Self {
            ambient_dim,
            domain,
            action,
        })
    }

    /// The nowhere-defined operator (`m = 0`).
    pub fn empty(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            domain: Vec::new(),
            action: Vec::new(),
        }
    }

    /// Full-domain operator given by a square matrix: the domain is the
    /// standard basis and the action its columns.
    pub fn full(matrix: &CMatrix) -> Self {
        let n = matrix.nrows();
        assert_eq!(n, matrix.ncols());
        let domain = (0..n)
            .map(|k| {
                CVector::from_fn(n, |i, _| {
                    if i == k {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        let action = (0..n).map(|k| matrix.column(k).into_owned()).collect();
        Self {
            ambient_dim: n,
            domain,
            action,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn domain_dim(&self) -> usize {
        self.domain.len()
    }

    pub fn domain(&self) -> &[CVector] {
        &self.domain
    }

    pub fn action(&self) -> &[CVector] {
        &self.action
    }

    /// Frame spanning `{ (x, Ax) : x ∈ span(domain) } ⊆ C^{2n}`, of dimension
    /// exactly `m`.
    pub fn graph_frame(&self, cfg: &ToleranceConfig) -> Result<Frame> {
        let m = self.domain_dim();
        let dom = Frame::orthonormalize(&self.domain, self.ambient_dim, cfg)?;
        if dom.dim() < m {
            return Err(Error::DegenerateDomain {
                rank: dom.dim(),
                expected: m,
            });
        }
        let stacked: Vec<CVector> = self
            .domain
            .iter()
            .zip(self.action.iter())
            .map(|(d, a)| stack_pair(d, a))
            .collect();
        let graph = Frame::orthonormalize(&stacked, 2 * self.ambient_dim, cfg)?;
        if graph.dim() != m {
            return Err(Error::InternalInvariant(format!(
                "graph of an {m}-dimensional domain has dimension {}",
                graph.dim()
            )));
        }
        Ok(graph)
    }
}

/// Reads a full operator off a graph subspace: splits the basis into top and
/// bottom blocks `P`, `Q` and returns `B = Q · P⁻¹` when `P` is invertible.
///
/// A nonzero vector of the form `(0, y)` in the subspace makes it a non-graph;
/// that appears as `sigma_min(P) ≤ cfg.rank_tol` and is reported as
/// [`Error::NotAGraph`].
pub fn operator_from_graph(graph: &Frame, cfg: &ToleranceConfig) -> Result<CMatrix> {
    let two_n = graph.ambient_dim();
    if two_n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "graph ambient dimension {two_n} is odd"
        )));
    }
    let n = two_n / 2;
    if graph.dim() != n {
        return Err(Error::WrongDimension {
            expected: n,
            got: graph.dim(),
        });
    }
    let top = graph.basis().rows(0, n).into_owned();
    let bottom = graph.basis().rows(n, n).into_owned();
    let smin = sigma_min(&top);
    if smin <= cfg.rank_tol {
        return Err(Error::NotAGraph { sigma_min: smin });
    }
    let bt = top
        .transpose()
        .lu()
        .solve(&bottom.transpose())
        .ok_or(Error::NotAGraph { sigma_min: smin })?;
    Ok(bt.transpose())
}

/// Defect space `C^{2n} ⊖ [G ⊕ conj(G)]` for a graph `G` and the conjugation
/// (`SwapConj` or `SignConj`) matching the operator class.
///
/// Requires `G ⊥ conj(G)`; the result is invariant under the conjugation,
/// which is re-checked and reported as an internal error if violated.
pub fn defect_space(graph: &Frame, conj: &DoubledMap, cfg: &ToleranceConfig) -> Result<Frame> {
    if !matches!(conj.kind(), DoubledKind::SwapConj | DoubledKind::SignConj) {
        return Err(Error::NotAConjugation(conj.kind().name()));
    }
    if graph.ambient_dim() != conj.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: conj.ambient_dim(),
            got: graph.ambient_dim(),
        });
    }
    let image = graph.map(conj.as_map_ref(), cfg)?;
    let cross = graph.cross_residual(&image);
    if cross > cfg.residual_tol {
        return Err(match conj.kind() {
            DoubledKind::SwapConj => Error::NotSkewSymmetric { residual: cross },
            _ => Error::NotIsometric { residual: cross },
        });
    }
    let sum = graph.direct_sum(&image, cfg)?;
    let defect = sum.complement();
    let mapped = defect.map(conj.as_map_ref(), cfg)?;
    if !mapped.spans_equal(&defect, cfg)? {
        return Err(Error::InternalInvariant(
            "defect space is not invariant under the conjugation".into(),
        ));
    }
    Ok(defect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner;
    use crate::sampling::{gaussian_complex_matrix, gaussian_complex_vector, rng_from_seed};

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ev(n: usize, k: usize) -> CVector {
        CVector::from_fn(n, |i, _| if i == k { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    #[test]
    fn neg_swap_formula_and_square() {
        let j = Conjugation::identity(1);
        let v = DoubledMap::new(DoubledKind::NegSwap, &j);
        let x = CVector::from_vec(vec![c(1.0, 2.0), c(-0.5, 0.0)]);
        let vx = v.apply(&x).unwrap();
        assert_eq!(vx, CVector::from_vec(vec![c(-0.5, 0.0), c(-1.0, -2.0)]));
        // V² = −I
        let vvx = v.apply(&vx).unwrap();
        assert!((&vvx + &x).norm() <= 1e-15);
    }

    #[test]
    fn swap_conj_formula_for_plain_conjugation() {
        let j = Conjugation::identity(2);
        let r = DoubledMap::new(DoubledKind::SwapConj, &j);
        let v = CVector::from_vec(vec![c(1.0, 1.0), c(0.0, 2.0), c(3.0, 0.0), c(0.0, -1.0)]);
        let rv = r.apply(&v).unwrap();
        // (x, y) -> (conj(y), conj(x))
        assert_eq!(
            rv,
            CVector::from_vec(vec![c(3.0, 0.0), c(0.0, 1.0), c(1.0, -1.0), c(0.0, -2.0)])
        );
    }

    #[test]
    fn sign_conj_formula_and_involution() {
        let j = Conjugation::identity(1);
        let k = DoubledMap::new(DoubledKind::SignConj, &j);
        let v = CVector::from_vec(vec![c(1.0, 2.0), c(3.0, -1.0)]);
        let kv = k.apply(&v).unwrap();
        assert_eq!(kv, CVector::from_vec(vec![c(1.0, -2.0), c(-3.0, -1.0)]));
        assert!((k.apply(&kv).unwrap() - &v).norm() <= 1e-15);
    }

    #[test]
    fn swap_conj_and_sign_conj_are_conjugations() {
        for seed in 0..10 {
            let j = Conjugation::random(3, seed);
            for kind in [DoubledKind::SwapConj, DoubledKind::SignConj, DoubledKind::PairConj] {
                let m = DoubledMap::new(kind, &j);
                let conj = m.to_conjugation(&cfg()).unwrap();
                assert!(conj.symmetry_residual() <= 1e-12);
                assert!(conj.unitarity_residual() <= 1e-12);
            }
            for kind in [DoubledKind::Swap, DoubledKind::NegSwap] {
                let m = DoubledMap::new(kind, &j);
                assert!(matches!(
                    m.to_conjugation(&cfg()),
                    Err(Error::NotAConjugation(_))
                ));
            }
        }
    }

    #[test]
    fn factorizations_hold_on_random_vectors() {
        for seed in 0..10 {
            let j = Conjugation::random(4, seed);
            let j2 = DoubledMap::new(DoubledKind::PairConj, &j);
            let neg_swap = DoubledMap::new(DoubledKind::NegSwap, &j);
            let swap = DoubledMap::new(DoubledKind::Swap, &j);
            let r = DoubledMap::new(DoubledKind::SwapConj, &j);
            let k = DoubledMap::new(DoubledKind::SignConj, &j);
            let mut rng = rng_from_seed(seed + 31);
            let v = gaussian_complex_vector(&mut rng, 8);
            let rv = r.apply(&v).unwrap();
            let a = swap.apply(&j2.apply(&v).unwrap()).unwrap();
            let b = j2.apply(&swap.apply(&v).unwrap()).unwrap();
            assert!((&a - &rv).norm() <= 1e-12);
            assert!((&b - &rv).norm() <= 1e-12);
            let kv = k.apply(&v).unwrap();
            let c1 = neg_swap.apply(&rv).unwrap();
            assert!((&c1 - &kv).norm() <= 1e-12);
            // involutions and antiunitarity
            assert!((r.apply(&rv).unwrap() - &v).norm() <= 1e-12);
            assert!((k.apply(&kv).unwrap() - &v).norm() <= 1e-12);
            let w = gaussian_complex_vector(&mut rng, 8);
            let lhs = inner(&rv, &r.apply(&w).unwrap());
            assert!((lhs - inner(&w, &v)).norm() <= 1e-12 * (1.0 + w.norm() * v.norm()));
        }
    }

    #[test]
    fn graph_frame_single_vector() {
        let op = PartialOperator::new(2, vec![ev(2, 0)], vec![ev(2, 1)]).unwrap();
        let g = op.graph_frame(&cfg()).unwrap();
        assert_eq!(g.dim(), 1);
        let expected = stack_pair(&ev(2, 0), &ev(2, 1));
        assert!(g.projection_residual(&expected) <= 1e-12);
    }

    #[test]
    fn graph_frame_empty_domain() {
        let op = PartialOperator::empty(3);
        let g = op.graph_frame(&cfg()).unwrap();
        assert_eq!(g.dim(), 0);
        assert_eq!(g.ambient_dim(), 6);
    }

    #[test]
    fn graph_frame_rejects_dependent_domain() {
        let op = PartialOperator::new(
            2,
            vec![ev(2, 0), &ev(2, 0) * c(2.0, 0.0)],
            vec![ev(2, 1), ev(2, 0)],
        )
        .unwrap();
        assert!(matches!(
            op.graph_frame(&cfg()),
            Err(Error::DegenerateDomain { rank: 1, expected: 2 })
        ));
    }

    #[test]
    fn operator_round_trip_through_graph() {
        let mut rng = rng_from_seed(5);
        for n in 1..6 {
            let b = gaussian_complex_matrix(&mut rng, n, n);
            let op = PartialOperator::full(&b);
            let g = op.graph_frame(&cfg()).unwrap();
            let recovered = operator_from_graph(&g, &cfg()).unwrap();
            assert!(crate::max_abs(&(recovered - b)) <= 1e-10);
        }
    }

    #[test]
    fn operator_from_graph_worked_example() {
        let cols = vec![
            stack_pair(&ev(2, 0), &ev(2, 1)) / c(2.0f64.sqrt(), 0.0),
            stack_pair(&ev(2, 1), &(-&ev(2, 0))) / c(2.0f64.sqrt(), 0.0),
        ];
        let g = Frame::new(CMatrix::from_columns(&cols), &cfg()).unwrap();
        let b = operator_from_graph(&g, &cfg()).unwrap();
        let expected = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        );
        assert!(crate::max_abs(&(b - expected)) <= 1e-12);
    }

    #[test]
    fn operator_from_graph_scalar_and_vertical_line() {
        let scale = 26.0f64.sqrt();
        let col = CVector::from_vec(vec![c(1.0 / scale, 0.0), c(5.0 / scale, 0.0)]);
        let g = Frame::new(CMatrix::from_columns(&[col]), &cfg()).unwrap();
        let b = operator_from_graph(&g, &cfg()).unwrap();
        assert!((b[(0, 0)] - c(5.0, 0.0)).norm() <= 1e-12);

        let vertical = Frame::new(
            CMatrix::from_columns(&[CVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)])]),
            &cfg(),
        )
        .unwrap();
        assert!(matches!(
            operator_from_graph(&vertical, &cfg()),
            Err(Error::NotAGraph { .. })
        ));
    }

    #[test]
    fn operator_from_graph_wrong_dimension() {
        let g = Frame::zero(4);
        assert!(matches!(
            operator_from_graph(&g, &cfg()),
            Err(Error::WrongDimension { expected: 2, got: 0 })
        ));
    }

    #[test]
    fn defect_space_empty_domain_is_everything() {
        let j = Conjugation::identity(1);
        let op = PartialOperator::empty(1);
        let g = op.graph_frame(&cfg()).unwrap();
        let r = DoubledMap::new(DoubledKind::SwapConj, &j);
        let d = defect_space(&g, &r, &cfg()).unwrap();
        assert_eq!(d.dim(), 2);
    }

    #[test]
    fn defect_space_worked_example() {
        let j = Conjugation::identity(2);
        let op = PartialOperator::new(2, vec![ev(2, 0)], vec![ev(2, 1)]).unwrap();
        let g = op.graph_frame(&cfg()).unwrap();
        let r = DoubledMap::new(DoubledKind::SwapConj, &j);
        let d = defect_space(&g, &r, &cfg()).unwrap();
        assert_eq!(d.dim(), 2);
        // D = span{(1,0,0,−1)/√2, (0,1,−1,0)/√2}
        let s = 2.0f64.sqrt();
        let d1 = CVector::from_vec(vec![c(1.0 / s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0 / s, 0.0)]);
        let d2 = CVector::from_vec(vec![c(0.0, 0.0), c(1.0 / s, 0.0), c(-1.0 / s, 0.0), c(0.0, 0.0)]);
        assert!(d.projection_residual(&d1) <= 1e-12);
        assert!(d.projection_residual(&d2) <= 1e-12);
    }

    #[test]
    fn defect_space_full_domain_is_zero() {
        // complex antisymmetric B with C = I is J-skew-self-adjoint
        let b = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(2.0, 1.0), c(-2.0, -1.0), c(0.0, 0.0)],
        );
        let j = Conjugation::identity(2);
        let op = PartialOperator::full(&b);
        let g = op.graph_frame(&cfg()).unwrap();
        let r = DoubledMap::new(DoubledKind::SwapConj, &j);
        let d = defect_space(&g, &r, &cfg()).unwrap();
        assert_eq!(d.dim(), 0);
    }

    #[test]
    fn defect_space_rejects_non_skew_input() {
        let j = Conjugation::identity(1);
        let op = PartialOperator::new(1, vec![ev(1, 0)], vec![ev(1, 0)]).unwrap();
        let g = op.graph_frame(&cfg()).unwrap();
        let r = DoubledMap::new(DoubledKind::SwapConj, &j);
        assert!(matches!(
            defect_space(&g, &r, &cfg()),
            Err(Error::NotSkewSymmetric { .. })
        ));
    }

    #[test]
    fn orthogonality_dichotomy_under_perturbation() {
        let cfg = cfg();
        for seed in 0..10 {
            let p = crate::oracle::gen_case_a(3, 2, seed).unwrap();
            let g = p.op.graph_frame(&cfg).unwrap();
            let r = DoubledMap::new(DoubledKind::SwapConj, &p.conjugation);
            let image = g.map(r.as_map_ref(), &cfg).unwrap();
            assert!(g.is_orthogonal_to(&image, &cfg).unwrap());

            let mut rng = rng_from_seed(seed + 999);
            let mut action = p.op.action().to_vec();
            let delta = crate::sampling::random_unit_vector(&mut rng, 3) * c(1e-3, 0.0);
            action[0] += delta;
            let perturbed = PartialOperator::new(3, p.op.domain().to_vec(), action).unwrap();
            let g2 = perturbed.graph_frame(&cfg).unwrap();
            let image2 = g2.map(r.as_map_ref(), &cfg).unwrap();
            assert!(!g2.is_orthogonal_to(&image2, &cfg).unwrap());
        }
    }
}
