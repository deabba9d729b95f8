use alloc::format;

use super::{CongruenceWitness, EquivWitness, MatTuple, SignSplit};
use crate::error::{Error, Result};
use crate::mat::relative;
// Unused when std ends up linked (dev builds).
#[allow(unused_imports)]
use num_traits::Float;
use crate::report::ResidualReport;
use crate::scalar::Tolerance;

fn two_sided(
    a: &MatTuple,
    b: &MatTuple,
    w: &EquivWitness,
    tol: &Tolerance,
    star: bool,
) -> Result<ResidualReport> {
    a.check_compatible(b)?;
    a.check_square(&w.p, "P")?;
    a.check_square(&w.r, "R")?;
    let (pt, rt, mark, rel) = if star {
        (w.p.adjoint(), w.r.adjoint(), "*", "star-symmetric-equivalence")
    } else {
        (w.p.transpose(), w.r.transpose(), "ᵀ", "symmetric-equivalence")
    };
    let scale = w.p.norm_fro() * w.r.norm_fro() * a.max_norm();
    let mut rep = ResidualReport::new(rel, "‖P‖_F·‖R‖_F·max_i‖A_i‖_F", tol.residual_tol);
    for (i, (ai, bi)) in (1..).zip(a.mats().iter().zip(b.mats())) {
        let lhs = &(&w.p * ai) * &rt;
        rep.push(format!("P·A_{i}·R{mark} − B_{i}"), relative((&lhs - bi).norm_fro(), scale));
        let rhs = &(&w.r * ai) * &pt;
        rep.push(format!("R·A_{i}·P{mark} − B_{i}"), relative((&rhs - bi).norm_fro(), scale));
    }
    Ok(rep)
}

/// `P A_i Rᵀ = R A_i Pᵀ = B_i`, relative to `‖P‖‖R‖ max_i‖A_i‖`.
pub fn check_symmetric_equivalence(
    a: &MatTuple,
    b: &MatTuple,
    w: &EquivWitness,
    tol: &Tolerance,
) -> Result<ResidualReport> {
    two_sided(a, b, w, tol, false)
}

/// `P A_i R* = R A_i P* = B_i`.
pub fn check_star_symmetric_equivalence(
    a: &MatTuple,
    b: &MatTuple,
    w: &EquivWitness,
    tol: &Tolerance,
) -> Result<ResidualReport> {
    two_sided(a, b, w, tol, true)
}

fn one_sided(
    a: &MatTuple,
    b: &MatTuple,
    w: &CongruenceWitness,
    tol: &Tolerance,
    star: bool,
) -> Result<ResidualReport> {
    a.check_compatible(b)?;
    a.check_square(&w.s, "S")?;
    let (st, mark, rel) = if star {
        (w.s.adjoint(), "*", "star-congruence")
    } else {
        (w.s.transpose(), "ᵀ", "congruence")
    };
    let sn = w.s.norm_fro();
    let scale = sn * sn * a.max_norm();
    let mut rep = ResidualReport::new(rel, "‖S‖_F²·max_i‖A_i‖_F", tol.residual_tol);
    for (i, (ai, bi)) in (1..).zip(a.mats().iter().zip(b.mats())) {
        let lhs = &(&w.s * ai) * &st;
        rep.push(format!("S·A_{i}·S{mark} − B_{i}"), relative((&lhs - bi).norm_fro(), scale));
    }
    Ok(rep)
}

/// `S A_i Sᵀ = B_i`, relative to `‖S‖² max_i‖A_i‖`.
pub fn check_congruence(
    a: &MatTuple,
    b: &MatTuple,
    w: &CongruenceWitness,
    tol: &Tolerance,
) -> Result<ResidualReport> {
    one_sided(a, b, w, tol, false)
}

/// `S A_i S* = B_i`.
pub fn check_star_congruence(
    a: &MatTuple,
    b: &MatTuple,
    w: &CongruenceWitness,
    tol: &Tolerance,
) -> Result<ResidualReport> {
    one_sided(a, b, w, tol, true)
}

/// `w1: A → C` and `w2: (I_p ⊕ −I_q) C → B`, with every `C_i` being
/// `(p, q)` block diagonal.
#[allow(clippy::too_many_arguments)]
pub fn check_sign_split_instance(
    a: &MatTuple,
    b: &MatTuple,
    c: &MatTuple,
    split: SignSplit,
    w1: &CongruenceWitness,
    w2: &CongruenceWitness,
    tol: &Tolerance,
) -> Result<ResidualReport> {
    a.check_compatible(b)?;
    a.check_compatible(c)?;
    if split.n() != a.n() {
        return Err(Error::shape(
            format!("sign split with p + q = {}", a.n()),
            format!("p = {}, q = {}", split.p, split.q),
        ));
    }
    let (p, q) = (split.p, split.q);
    for (i, ci) in c.mats().iter().enumerate() {
        let upper = ci.submatrix(0, p, p, q).norm_fro();
        let lower = ci.submatrix(p, 0, q, p).norm_fro();
        let off_norm = upper.hypot(lower);
        if !(off_norm <= tol.residual_tol * ci.norm_fro()) {
            return Err(Error::NotBlockDiagonal {
                index: i,
                residual: relative(off_norm, ci.norm_fro()),
            });
        }
    }
    let mut rep = ResidualReport::new(
        "sign-split",
        "each step relative to ‖S‖_F²·max_i‖A_i‖_F",
        tol.residual_tol,
    );
    rep.absorb("A→C: ", check_congruence(a, c, w1, tol)?);
    let dc = c.left_multiply(&split.matrix())?;
    rep.absorb("DC→B: ", check_congruence(&dc, b, w2, tol)?);
    Ok(rep)
}
