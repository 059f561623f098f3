//! Independent cross-checks and instance generation.
//!
//! The skew structure identity `C·conj(B)·conj(C) + B† = 0` is real-linear in
//! the entries of `B`, so its full solution space is the null space of a real
//! matrix. That gives an oracle that is independent of the graph construction:
//! a direct least-squares completion solver for the skew case, and generators
//! whose outputs carry a witness by construction.
//!
//! Realified coordinates are fixed as `[Re(vec(B)); Im(vec(B))]` with `vec`
//! row-major. Null-space bases are only determined up to rotation; compare
//! spans and residuals, never raw coordinates.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::conjugation::{Conjugation, ToleranceConfig};
use crate::engine::{verify_j_unitary, Mode, Problem};
use crate::error::{Error, Result};
use crate::graph::PartialOperator;
use crate::sampling;
use crate::{C64, CMatrix, CVector};

/// `[Re(vec(B)); Im(vec(B))]`, row-major.
pub fn realify(b: &CMatrix) -> DVector<f64> {
    let (rows, cols) = b.shape();
    let d = rows * cols;
    DVector::from_fn(2 * d, |q, _| {
        let (idx, im) = if q < d { (q, false) } else { (q - d, true) };
        let entry = b[(idx / cols, idx % cols)];
        if im {
            entry.im
        } else {
            entry.re
        }
    })
}

/// Inverse of [`realify`] for an `n×n` matrix.
pub fn unrealify(v: &DVector<f64>, n: usize) -> CMatrix {
    let d = n * n;
    assert_eq!(v.len(), 2 * d);
    CMatrix::from_fn(n, n, |r, c| C64::new(v[r * n + c], v[d + r * n + c]))
}

/// `C·conj(B)·conj(C) + B†` — zero exactly on J-skew-self-adjoint matrices.
pub fn skew_defect(j: &Conjugation, b: &CMatrix) -> CMatrix {
    j.conjugate_operator_raw(b) + b.adjoint()
}

/// The realified skew constraint as a `2n² × 2n²` real matrix acting on
/// realified coordinates. Its singular values are exactly 0 and 2, so rank
/// decisions are unambiguous.
pub fn constraint_matrix(j: &Conjugation) -> DMatrix<f64> {
    let n = j.dim();
    let d = n * n;
    let mut m = DMatrix::zeros(2 * d, 2 * d);
    for q in 0..2 * d {
        let (idx, im) = if q < d { (q, false) } else { (q - d, true) };
        let unit = C64::new(if im { 0.0 } else { 1.0 }, if im { 1.0 } else { 0.0 });
        let mut e = CMatrix::zeros(n, n);
        e[(idx / n, idx % n)] = unit;
        let col = realify(&skew_defect(j, &e));
        m.set_column(q, &col);
    }
    m
}

/// Real basis (as matrices) of all J-skew-self-adjoint matrices for this `J`.
///
/// For `C = I` these are the complex antisymmetric matrices, real dimension
/// `n(n−1)`.
pub fn structure_space(j: &Conjugation, cfg: &ToleranceConfig) -> Vec<CMatrix> {
    let n = j.dim();
    let m = constraint_matrix(j);
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut basis = Vec::new();
    for i in 0..svd.singular_values.len() {
        if svd.singular_values[i] <= cfg.rank_tol {
            basis.push(unrealify(&vt.row(i).transpose(), n));
        }
    }
    basis
}

/// Outcome of the direct least-squares completion.
#[derive(Debug, Clone)]
pub enum CaseASolution {
    Feasible { matrix: CMatrix, residual: f64 },
    Infeasible { residual: f64 },
}

impl CaseASolution {
    pub fn residual(&self) -> f64 {
        match self {
            Self::Feasible { residual, .. } | Self::Infeasible { residual } => *residual,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        match self {
            Self::Feasible { matrix, .. } => matrix,
            Self::Infeasible { .. } => panic!("no matrix for an infeasible completion"),
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible { .. })
    }
}

/// Solves the skew completion `B d_i = A d_i` by least squares over
/// [`structure_space`] coordinates — no enlargement, no graphs. Feasible iff
/// the residual is within `cfg.residual_tol`.
pub fn solve_case_a(p: &Problem) -> Result<CaseASolution> {
    if p.mode != Mode::Skew {
        return Err(Error::InvalidArgument(
            "the completion oracle handles skew mode only".into(),
        ));
    }
    let n = p.dim();
    let m = p.op.domain_dim();
    let basis = structure_space(&p.conjugation, &p.cfg);
    let candidate = if basis.is_empty() || m == 0 {
        CMatrix::zeros(n, n)
    } else {
        // rows: realified entries of B d_i, for each domain vector
        let rows = 2 * n * m;
        let mut lhs = DMatrix::<f64>::zeros(rows, basis.len());
        let mut rhs = DVector::<f64>::zeros(rows);
        for (i, (d, a)) in p.op.domain().iter().zip(p.op.action().iter()).enumerate() {
            for (k, s) in basis.iter().enumerate() {
                let sd = s * d;
                for r in 0..n {
                    lhs[(2 * n * i + r, k)] = sd[r].re;
                    lhs[(2 * n * i + n + r, k)] = sd[r].im;
                }
            }
            for r in 0..n {
                rhs[2 * n * i + r] = a[r].re;
                rhs[2 * n * i + n + r] = a[r].im;
            }
        }
        let coeffs = lhs
            .svd(true, true)
            .solve(&rhs, p.cfg.rank_tol)
            .map_err(|e| Error::InternalInvariant(format!("least squares failed: {e}")))?;
        let mut b = CMatrix::zeros(n, n);
        for (k, s) in basis.iter().enumerate() {
            b += s * C64::new(coeffs[k], 0.0);
        }
        b
    };
    let residual = p
        .op
        .domain()
        .iter()
        .zip(p.op.action().iter())
        .map(|(d, a)| (&candidate * d - a).norm())
        .fold(0.0f64, f64::max);
    if residual <= p.cfg.residual_tol {
        Ok(CaseASolution::Feasible {
            matrix: candidate,
            residual,
        })
    } else {
        Ok(CaseASolution::Infeasible { residual })
    }
}

fn random_structure_matrix(
    rng: &mut impl Rng,
    j: &Conjugation,
    cfg: &ToleranceConfig,
) -> CMatrix {
    let n = j.dim();
    let basis = structure_space(j, cfg);
    let mut s = CMatrix::zeros(n, n);
    for b in &basis {
        let alpha: f64 = rng.sample(StandardNormal);
        s += b * C64::new(alpha, 0.0);
    }
    s
}

/// Random valid skew problem: the action is the restriction of a random
/// J-skew-self-adjoint matrix to a random `m`-dimensional domain, so a
/// same-space extension exists by construction.
pub fn gen_case_a(n: usize, m: usize, seed: u64) -> Result<Problem> {
    gen_checked(n, m)?;
    let cfg = ToleranceConfig::default().with_seed(seed);
    let mut rng = sampling::rng_from_seed(seed);
    let j = Conjugation::random_with_rng(&mut rng, n);
    let witness = random_structure_matrix(&mut rng, &j, &cfg);
    let domain = sampling::random_frame(&mut rng, n, m, &cfg).columns();
    let action: Vec<CVector> = domain.iter().map(|d| &witness * d).collect();
    Problem::new(j, Mode::Skew, PartialOperator::new(n, domain, action)?, cfg)
}

/// Random valid isometric problem: the action is the restriction of
/// `exp(S)` for a random J-skew-self-adjoint `S` with `‖S‖ ≤ 1`. That the
/// exponential preserves the form is asserted at runtime, not assumed.
pub fn gen_case_b(n: usize, m: usize, seed: u64) -> Result<Problem> {
    gen_checked(n, m)?;
    let cfg = ToleranceConfig::default().with_seed(seed);
    let mut rng = sampling::rng_from_seed(seed);
    let j = Conjugation::random_with_rng(&mut rng, n);
    let mut s = random_structure_matrix(&mut rng, &j, &cfg);
    let norm = s.norm();
    if norm > 1.0 {
        s /= C64::new(norm, 0.0);
    }
    let witness = s.exp();
    let check = verify_j_unitary(&witness, &j)?;
    if !check.passes(&cfg) {
        return Err(Error::GeneratorFailure(format!(
            "exp of a structure matrix is not J-unitary (residual {:.3e}, sigma_min {:.3e})",
            check.residual, check.sigma_min
        )));
    }
    let domain = sampling::random_frame(&mut rng, n, m, &cfg).columns();
    let action: Vec<CVector> = domain.iter().map(|d| &witness * d).collect();
    Problem::new(
        j,
        Mode::Isometric,
        PartialOperator::new(n, domain, action)?,
        cfg,
    )
}

fn gen_checked(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if m > n {
        return Err(Error::InvalidArgument(format!(
            "domain dimension {m} exceeds space dimension {n}"
        )));
    }
    Ok(())
}

/// Brute-force scalar oracle: all grid points `b` (step 1e−2, radius 2) where
/// the 1×1 mode identity holds within 5e−2. Engine outputs must land next to
/// a returned point.
pub fn exhaustive_check_1d(c: C64, mode: Mode) -> Vec<C64> {
    const STEP: f64 = 1e-2;
    const RADIUS: f64 = 2.0;
    const SLACK: f64 = 5e-2;
    let steps = (2.0 * RADIUS / STEP).round() as i64;
    let mut hits = Vec::new();
    for ix in 0..=steps {
        for iy in 0..=steps {
            let b = C64::new(-RADIUS + ix as f64 * STEP, -RADIUS + iy as f64 * STEP);
            if b.norm() > RADIUS + 1e-12 {
                continue;
            }
            let residual = match mode {
                Mode::Skew => (c * b.conj() * c.conj() + b.conj()).norm(),
                Mode::Isometric => (b * c.conj() * b - c.conj()).norm(),
            };
            if residual <= SLACK {
                hits.push(b);
            }
        }
    }
    hits
}
