//! Matrix tuples, their equivalence/congruence predicates and the
//! two-sided-to-one-sided witness symmetrization.

mod symmetrize;
mod verify;

use alloc::format;
use alloc::vec::Vec;

// Unused when std ends up linked (dev builds).
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::mat::{relative, Mat};
use crate::numerics::lu::Lu;
use crate::numerics::qr::{nullspace_raw, orthonormalize};
use crate::scalar::{Scalar, Tolerance, ZERO};

pub use symmetrize::{statement3_check, symmetrize_witness, symmetrize_witness_traced, Symmetrization};
pub use verify::{
    check_congruence, check_sign_split_instance, check_star_congruence,
    check_star_symmetric_equivalence, check_symmetric_equivalence,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SymmetryTag {
    #[default]
    None,
    Symmetric,
    Skew,
    Hermitian,
}

impl SymmetryTag {
    pub fn name(self) -> &'static str {
        match self {
            SymmetryTag::None => "none",
            SymmetryTag::Symmetric => "symmetric",
            SymmetryTag::Skew => "skew",
            SymmetryTag::Hermitian => "hermitian",
        }
    }

    /// `‖Aᵀ ∓ A‖_F` (conjugate transpose for hermitian); zero for `None`.
    pub fn defect(self, a: &Mat) -> f64 {
        match self {
            SymmetryTag::None => 0.0,
            SymmetryTag::Symmetric => (&a.transpose() - a).norm_fro(),
            SymmetryTag::Skew => (&a.transpose() + a).norm_fro(),
            SymmetryTag::Hermitian => (&a.adjoint() - a).norm_fro(),
        }
    }
}

/// A `t`-tuple of `n×n` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatTuple {
    n: usize,
    mats: Vec<Mat>,
    tag: SymmetryTag,
}

impl MatTuple {
    /// Checks sizes and, for a non-`None` tag, that every entry satisfies it
    /// to `residual_tol · ‖A_i‖_F`.
    pub fn new(n: usize, mats: Vec<Mat>, tag: SymmetryTag, tol: &Tolerance) -> Result<Self> {
        for (i, m) in mats.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(Error::shape(
                    format!("{n}x{n} at tuple index {i}"),
                    m.dimension_string(),
                ));
            }
            let d = tag.defect(m);
            if !(d <= tol.residual_tol * m.norm_fro()) {
                return Err(Error::SymmetryTagMismatch {
                    detail: format!(
                        "tuple index {i} is not {} (defect {d:e})",
                        tag.name()
                    ),
                });
            }
        }
        Ok(MatTuple { n, mats, tag })
    }

    pub fn untagged(n: usize, mats: Vec<Mat>) -> Result<Self> {
        MatTuple::new(n, mats, SymmetryTag::None, &Tolerance::default())
    }

    pub fn single(a: Mat) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::shape("square matrix", a.dimension_string()));
        }
        MatTuple::untagged(a.rows(), alloc::vec![a])
    }

    pub(crate) fn from_parts(n: usize, mats: Vec<Mat>, tag: SymmetryTag) -> Self {
        MatTuple { n, mats, tag }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[Mat] {
        &self.mats
    }

    pub fn tag(&self) -> SymmetryTag {
        self.tag
    }

    pub fn into_mats(self) -> Vec<Mat> {
        self.mats
    }

    pub fn max_norm(&self) -> f64 {
        self.mats.iter().map(Mat::norm_fro).fold(0.0, f64::max)
    }

    /// `(S A_i Sᵀ)_i`. Symmetric and skew tags survive; hermitian does not.
    pub fn congruence_image(&self, s: &Mat) -> Result<MatTuple> {
        self.check_square(s, "congruence witness")?;
        let st = s.transpose();
        let tag = match self.tag {
            SymmetryTag::Hermitian => SymmetryTag::None,
            t => t,
        };
        Ok(MatTuple::from_parts(
            self.n,
            self.mats.iter().map(|a| &(s * a) * &st).collect(),
            tag,
        ))
    }

    /// `(L A_i)_i` for a left factor such as `I_p ⊕ −I_q`.
    pub fn left_multiply(&self, l: &Mat) -> Result<MatTuple> {
        self.check_square(l, "left factor")?;
        Ok(MatTuple::from_parts(
            self.n,
            self.mats.iter().map(|a| l * a).collect(),
            SymmetryTag::None,
        ))
    }

    pub fn negate(&self) -> MatTuple {
        MatTuple::from_parts(self.n, self.mats.iter().map(|a| -a).collect(), self.tag)
    }

    /// Largest symmetry defect relative to the entry norm.
    pub fn symmetry_defect(&self, tag: SymmetryTag) -> f64 {
        self.mats
            .iter()
            .map(|a| relative(tag.defect(a), a.norm_fro()))
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_square(&self, m: &Mat, what: &str) -> Result<()> {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::shape(
                format!("{what} of size {}x{}", self.n, self.n),
                m.dimension_string(),
            ));
        }
        Ok(())
    }

    pub(crate) fn check_compatible(&self, other: &MatTuple) -> Result<()> {
        if self.n != other.n || self.t() != other.t() {
            return Err(Error::shape(
                format!("tuple of {} {}x{} matrices", self.t(), self.n, self.n),
                format!("tuple of {} {}x{} matrices", other.t(), other.n, other.n),
            ));
        }
        Ok(())
    }
}

/// Two-sided witness: `P A_i Rᵀ = R A_i Pᵀ = B_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivWitness {
    pub p: Mat,
    pub r: Mat,
}

/// One-sided witness: `S A_i Sᵀ = B_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceWitness {
    pub s: Mat,
}

/// Signature `I_p ⊕ −I_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignSplit {
    pub p: usize,
    pub q: usize,
}

impl SignSplit {
    pub fn n(self) -> usize {
        self.p + self.q
    }

    pub fn matrix(self) -> Mat {
        Mat::sign_split(self.p, self.q)
    }
}

/// `max_i ‖A_i τ − τᵀ A_i‖_F / (‖A_i‖_F ‖τ‖_F)`; zero iff `τ` is selfadjoint
/// for every form of the tuple.
pub fn selfadjoint_relation_residual(a: &MatTuple, tau: &Mat) -> Result<f64> {
    a.check_square(tau, "selfadjoint candidate")?;
    let tt = tau.transpose();
    let tn = tau.norm_fro();
    Ok(a.mats
        .iter()
        .map(|ai| relative((&(ai * tau) - &(&tt * ai)).norm_fro(), ai.norm_fro() * tn))
        .fold(0.0, f64::max))
}

/// Basis of `{τ : A_i τ = τᵀ A_i ∀i}`. The identity comes first; the rest
/// are orthonormal (Frobenius) and orthogonal to it.
pub fn selfadjoint_algebra_basis(a: &MatTuple, tol: &Tolerance) -> Vec<Mat> {
    let n = a.n;
    let nn = n * n;
    let rows = a.t() * nn;
    // Row (i, r, c), column (p, q): A_i[r, p] δ_{qc} − δ_{qr} A_i[p, c].
    let mut op = alloc::vec![ZERO; rows * nn];
    for (i, ai) in a.mats.iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                let row = (i * nn + r * n + c) * nn;
                for p in 0..n {
                    op[row + p * n + c] += ai[(r, p)];
                    op[row + p * n + r] -= ai[(p, c)];
                }
            }
        }
    }
    let norm = op.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    basis_with_identity(n, nullspace_raw(rows, nn, op, tol.rank_tol * norm))
}

/// Orders a nullspace basis so that the identity leads.
pub(crate) fn basis_with_identity(n: usize, null: Vec<Vec<Scalar>>) -> Vec<Mat> {
    let dim = null.len();
    let mut id = alloc::vec![ZERO; n * n];
    for i in 0..n {
        id[i * n + i] = Scalar::new(1.0, 0.0);
    }
    let mut vecs = alloc::vec![id];
    vecs.extend(null);
    orthonormalize(&mut vecs, 1e-8);
    let mut out = alloc::vec![Mat::identity(n)];
    out.extend(
        vecs.into_iter()
            .skip(1)
            .take(dim.saturating_sub(1))
            .map(|v| Mat::from_vec_unchecked(n, n, v)),
    );
    out
}

/// Λ-mixing: `C_ℓ = Σ_j λ_{ℓj} B_j`.
pub fn apply_weak_mix(b: &MatTuple, lambda: &Mat, tol: &Tolerance) -> Result<MatTuple> {
    let t = b.t();
    if lambda.rows() != t || lambda.cols() != t {
        return Err(Error::shape(format!("{t}x{t} mixing matrix"), lambda.dimension_string()));
    }
    Lu::new(lambda, tol)?;
    let mats = (0..t)
        .map(|l| {
            let mut c = Mat::zeros(b.n, b.n);
            for (j, bj) in b.mats.iter().enumerate() {
                c = &c + &bj.scale(lambda[(l, j)]);
            }
            c
        })
        .collect();
    let tag = match b.tag {
        SymmetryTag::Hermitian if !lambda.is_real_within(0.0) => SymmetryTag::None,
        tag => tag,
    };
    Ok(MatTuple::from_parts(b.n, mats, tag))
}
