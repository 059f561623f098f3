//! Extensions of J-skew-symmetric and J-isometric partial operators.
//!
//! Given a conjugation `J` on `C^n` (an antilinear involution with
//! `(Jx, Jy) = (y, x)`) and an operator `A` defined only on a subspace, this
//! crate constructs a full matrix `B` extending `A` that is J-skew-self-adjoint
//! (`JBJ = -B*`) or J-unitary (`B` preserves the bilinear form `[x, y] = (x, Jy)`),
//! enlarging the space to `C^{2n}` when necessary.
//!
//! The construction works in the doubled space `C^{2n} = C^n ⊕ C^n`: the graph
//! of `A` is orthogonal to its image under a canonical conjugation of the
//! doubled space, the orthogonal complement of the pair is the defect space,
//! and splitting the defect as `X ⊕ JX` enlarges the graph until it is the
//! graph of a full operator.
//!
//! Module map:
//! - [`conjugation`] — conjugations, the bilinear form, fixed-point bases
//! - [`frame`] — orthonormal frames (subspace arithmetic)
//! - [`graph`] — the doubled space, operator graphs, defect spaces
//! - [`split`] — splitting a conjugation-invariant subspace as `X ⊕ JX`
//! - [`engine`] — the extension pipeline with retry and doubling logic
//! - [`oracle`] — independent solvers and instance generators for cross-checks
//! - [`io`] — JSON problem files and extension reports
//! - [`sampling`] — seeded random matrices and frames

pub mod conjugation;
pub mod engine;
pub mod error;
pub mod frame;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod sampling;
pub mod split;

pub use conjugation::{Conjugation, ToleranceConfig};
pub use engine::{
    double_problem, extend, isometric_residual, skew_residual, symmetric_residual, validate,
    verify_j_unitary, verify_skew_self_adjoint, ExtensionReport, JUnitaryReport, Mode, Problem,
};
pub use error::{Error, Result};
pub use frame::{Frame, MapRef};
pub use graph::{
    defect_space, operator_from_graph, stack_pair, DoubledKind, DoubledMap, PartialOperator,
};
pub use split::{split, Splitting};

pub type C64 = num_complex::Complex64;
pub type CMatrix = nalgebra::DMatrix<C64>;
pub type CVector = nalgebra::DVector<C64>;

/// Inner product linear in the first slot: `sum_i x_i * conj(y_i)`.
///
/// This is the convention used throughout the crate, so the bilinear form of
/// a conjugation is `[x, y] = (x, Jy)`.
pub fn inner(x: &CVector, y: &CVector) -> C64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// Largest entry modulus, `‖M‖_max`. Zero for empty matrices.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Smallest singular value. Zero for empty matrices.
pub fn sigma_min(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(f64::INFINITY, |acc, &s| acc.min(s))
}
