//! `k`-linear maps `U^k → V` as dense coordinate tensors.
//!
//! Entry `[i₁, …, i_k, ℓ]` is the `ℓ`-th coordinate of `𝓕(e_{i₁}, …, e_{i_k})`
//! and lives at flat position `((i₁·n + i₂)·n + … + i_k)·t + ℓ`.

mod symmetrize;
mod verify;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

// Unused when std ends up linked (dev builds).
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::mat::{relative, Mat};
use crate::numerics::qr::nullspace_raw;
use crate::scalar::{Scalar, Tolerance, ZERO};
use crate::tuple::{basis_with_identity, MatTuple, SymmetryTag};

pub use symmetrize::{
    equivalence_to_symmetric, symmetrize_bilinear_via_tuple, symmetrize_map_witness,
    symmetrize_map_witness_traced, MapSymmetrization, MergeStep,
};
pub use verify::{
    check_map_congruence, check_map_equivalence, check_map_symmetric_equivalence,
    symmetric_equivalence_split,
};

pub const MAX_SOURCE_DIM: usize = 6;
pub const MAX_ARITY: usize = 4;
pub const MAX_TARGET_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MapSymmetry {
    #[default]
    None,
    Symmetric,
    Skew,
}

impl MapSymmetry {
    pub fn name(self) -> &'static str {
        match self {
            MapSymmetry::None => "none",
            MapSymmetry::Symmetric => "symmetric",
            MapSymmetry::Skew => "skew",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMap {
    n: usize,
    k: usize,
    t: usize,
    coords: Vec<Scalar>,
    tag: MapSymmetry,
}

fn check_dims(n: usize, k: usize, t: usize) -> Result<()> {
    if !(2..=MAX_ARITY).contains(&k) {
        return Err(Error::invalid(format!("arity k = {k} outside 2..={MAX_ARITY}")));
    }
    if n > MAX_SOURCE_DIM || t > MAX_TARGET_DIM {
        return Err(Error::invalid(format!(
            "map size n = {n}, t = {t} exceeds the cap n ≤ {MAX_SOURCE_DIM}, t ≤ {MAX_TARGET_DIM}"
        )));
    }
    Ok(())
}

impl KMap {
    pub fn new(
        n: usize,
        k: usize,
        t: usize,
        coords: Vec<Scalar>,
        tag: MapSymmetry,
        tol: &Tolerance,
    ) -> Result<Self> {
        check_dims(n, k, t)?;
        let len = n.pow(k as u32) * t;
        if coords.len() != len {
            return Err(Error::shape(
                format!("{len} coordinates for n = {n}, k = {k}, t = {t}"),
                coords.len(),
            ));
        }
        if !coords.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let map = KMap { n, k, t, coords, tag: MapSymmetry::None };
        map.with_tag(tag, tol)
    }

    pub fn zeros(n: usize, k: usize, t: usize) -> Result<Self> {
        check_dims(n, k, t)?;
        Ok(KMap {
            n,
            k,
            t,
            coords: vec![ZERO; n.pow(k as u32) * t],
            tag: MapSymmetry::None,
        })
    }

    /// Untagged map with entries `f(indices, ℓ)`.
    pub fn from_fn(n: usize, k: usize, t: usize, mut f: impl FnMut(&[usize], usize) -> Scalar) -> Result<Self> {
        let mut map = KMap::zeros(n, k, t)?;
        let mut idx = vec![0; k];
        for p in 0..map.points() {
            map.digits_into(p, &mut idx);
            for l in 0..t {
                map.coords[p * t + l] = f(&idx, l);
            }
        }
        if !map.coords.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(map)
    }

    /// Re-tags after checking every adjacent transposition against the tag.
    pub fn with_tag(mut self, tag: MapSymmetry, tol: &Tolerance) -> Result<Self> {
        let defect = self.symmetry_defect(tag);
        if !(defect <= tol.residual_tol) {
            return Err(Error::SymmetryTagMismatch {
                detail: format!("map is not {} (relative defect {defect:e})", tag.name()),
            });
        }
        self.tag = tag;
        Ok(self)
    }

    pub(crate) fn from_parts(n: usize, k: usize, t: usize, coords: Vec<Scalar>, tag: MapSymmetry) -> Self {
        KMap { n, k, t, coords, tag }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn tag(&self) -> MapSymmetry {
        self.tag
    }

    /// Number of source index tuples, `n^k`.
    pub fn points(&self) -> usize {
        self.n.pow(self.k as u32)
    }

    pub fn get(&self, idx: &[usize], l: usize) -> Scalar {
        self.coords[self.flat(idx) * self.t + l]
    }

    pub fn norm_fro(&self) -> f64 {
        let m = self.coords.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if m == 0.0 {
            return 0.0;
        }
        m * self.coords.iter().map(|z| (z / m).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn same_shape(&self, other: &KMap) -> Result<()> {
        if (self.n, self.k, self.t) != (other.n, other.k, other.t) {
            return Err(Error::shape(self.shape_string(), other.shape_string()));
        }
        Ok(())
    }

    pub fn shape_string(&self) -> alloc::string::String {
        format!("{}-linear map {}^{} → {}", self.k, self.n, self.k, self.t)
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    fn digits_into(&self, mut p: usize, idx: &mut [usize]) {
        for s in (0..self.k).rev() {
            idx[s] = p % self.n;
            p /= self.n;
        }
    }

    fn stride(&self, slot: usize) -> usize {
        self.n.pow((self.k - 1 - slot) as u32)
    }

    /// Largest relative change under an adjacent argument swap, against the
    /// sign the tag demands.
    fn symmetry_defect(&self, tag: MapSymmetry) -> f64 {
        let sign = match tag {
            MapSymmetry::None => return 0.0,
            MapSymmetry::Symmetric => 1.0,
            MapSymmetry::Skew => -1.0,
        };
        let norm = self.norm_fro();
        (0..self.k - 1)
            .map(|s| {
                let swapped = self.swap_slots(s, s + 1);
                let d: f64 = swapped
                    .coords
                    .iter()
                    .zip(&self.coords)
                    .map(|(a, b)| (a - b * sign).norm_sqr())
                    .sum();
                relative(d.sqrt(), norm)
            })
            .fold(0.0, f64::max)
    }

    fn swap_slots(&self, a: usize, b: usize) -> KMap {
        let mut sigma: Vec<usize> = (0..self.k).collect();
        sigma.swap(a, b);
        permute_slots(self, &sigma).expect("valid transposition")
    }

    pub(crate) fn sub(&self, other: &KMap) -> Vec<Scalar> {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect()
    }
}

fn check_slot_matrix(f: &KMap, phi: &Mat, what: &str) -> Result<()> {
    if phi.rows() != f.n || phi.cols() != f.n {
        return Err(Error::shape(format!("{what} of size {}x{}", f.n, f.n), phi.dimension_string()));
    }
    Ok(())
}

/// Substitutes `φu` into argument `slot`:
/// `new[…, j, …] = Σ_m φ[m, j]·old[…, m, …]`. Contracting with `φ` and then
/// `φ′` in the same slot equals contracting with `φφ′`.
pub fn contract_slot(f: &KMap, phi: &Mat, slot: usize) -> Result<KMap> {
    if slot >= f.k {
        return Err(Error::invalid(format!("slot {slot} out of range for a {}-linear map", f.k)));
    }
    check_slot_matrix(f, phi, "slot matrix")?;
    let (n, t) = (f.n, f.t);
    let stride = f.stride(slot);
    let mut out = vec![ZERO; f.coords.len()];
    for p in 0..f.points() {
        let d = (p / stride) % n;
        let base = p - d * stride;
        for m in 0..n {
            let c = phi[(m, d)];
            if c == ZERO {
                continue;
            }
            let src = (base + m * stride) * t;
            for l in 0..t {
                out[p * t + l] += c * f.coords[src + l];
            }
        }
    }
    Ok(KMap::from_parts(n, f.k, t, out, MapSymmetry::None))
}

/// Same `φ` in every slot: `(u₁, …, u_k) ↦ 𝓕(φu₁, …, φu_k)`. Keeps the tag.
pub fn contract_all(f: &KMap, phi: &Mat) -> Result<KMap> {
    let mut out = f.clone();
    for s in 0..f.k {
        out = contract_slot(&out, phi, s)?;
    }
    out.tag = f.tag;
    Ok(out)
}

/// `(u₁, …, u_k) ↦ 𝓕(φ₁u₁, …, φ_ku_k)`.
pub fn contract_each(f: &KMap, phis: &[Mat]) -> Result<KMap> {
    if phis.len() != f.k {
        return Err(Error::shape(format!("{} slot matrices", f.k), phis.len()));
    }
    let mut out = f.clone();
    for (s, phi) in phis.iter().enumerate() {
        out = contract_slot(&out, phi, s)?;
    }
    Ok(out)
}

/// `ψ ∘ 𝓕`: `new[…, ℓ] = Σ_m ψ[ℓ, m]·old[…, m]`.
pub fn apply_output(f: &KMap, psi: &Mat) -> Result<KMap> {
    let t = f.t;
    if psi.rows() != t || psi.cols() != t {
        return Err(Error::shape(format!("{t}x{t} output matrix"), psi.dimension_string()));
    }
    let mut out = vec![ZERO; f.coords.len()];
    for p in 0..f.points() {
        for l in 0..t {
            let mut s = ZERO;
            for m in 0..t {
                s += psi[(l, m)] * f.coords[p * t + m];
            }
            out[p * t + l] = s;
        }
    }
    Ok(KMap::from_parts(f.n, f.k, t, out, f.tag))
}

/// `new[i₁, …, i_k] = old[i_{σ(1)}, …, i_{σ(k)}]`, i.e. the map
/// `(u₁, …, u_k) ↦ 𝓕(u_{σ(1)}, …, u_{σ(k)})`.
pub fn permute_slots(f: &KMap, sigma: &[usize]) -> Result<KMap> {
    let k = f.k;
    let mut seen = vec![false; k];
    if sigma.len() != k || !sigma.iter().all(|&s| s < k && !core::mem::replace(&mut seen[s], true)) {
        return Err(Error::invalid(format!("{sigma:?} is not a permutation of 0..{k}")));
    }
    let t = f.t;
    let mut out = vec![ZERO; f.coords.len()];
    let mut idx = vec![0; k];
    let mut src = vec![0; k];
    for p in 0..f.points() {
        f.digits_into(p, &mut idx);
        for s in 0..k {
            src[s] = idx[sigma[s]];
        }
        let q = f.flat(&src);
        out[p * t..(p + 1) * t].copy_from_slice(&f.coords[q * t..(q + 1) * t]);
    }
    Ok(KMap::from_parts(f.n, k, t, out, f.tag))
}

pub fn is_symmetric(f: &KMap, tol: &Tolerance) -> bool {
    f.symmetry_defect(MapSymmetry::Symmetric) <= tol.residual_tol
}

pub fn is_skew(f: &KMap, tol: &Tolerance) -> bool {
    f.symmetry_defect(MapSymmetry::Skew) <= tol.residual_tol
}

/// `(𝓕 ⊕ 𝓖)(u ⊕ u′, …) = 𝓕(u, …) ⊕ 𝓖(u′, …)`; mixed entries vanish.
pub fn direct_sum(f: &KMap, g: &KMap) -> Result<KMap> {
    if f.k != g.k {
        return Err(Error::shape(format!("{}-linear map", f.k), format!("{}-linear map", g.k)));
    }
    let (n, t) = (f.n + g.n, f.t + g.t);
    let mut out = KMap::zeros(n, f.k, t)?;
    let mut idx = vec![0; f.k];
    for p in 0..f.points() {
        f.digits_into(p, &mut idx);
        let q = out.flat(&idx);
        for l in 0..f.t {
            out.coords[q * t + l] = f.coords[p * f.t + l];
        }
    }
    for p in 0..g.points() {
        g.digits_into(p, &mut idx);
        for i in idx.iter_mut() {
            *i += f.n;
        }
        let q = out.flat(&idx);
        for l in 0..g.t {
            out.coords[q * t + f.t + l] = g.coords[p * g.t + l];
        }
    }
    if f.tag == g.tag {
        out.tag = f.tag;
    }
    Ok(out)
}

pub fn negate_map(f: &KMap) -> KMap {
    KMap::from_parts(f.n, f.k, f.t, f.coords.iter().map(|z| -z).collect(), f.tag)
}

/// Largest relative disagreement between substituting `τ` in slot `i` and in
/// slot `j`, over slot pairs and output coordinates.
pub fn selfadjoint_residual_klinear(f: &KMap, tau: &Mat) -> Result<f64> {
    check_slot_matrix(f, tau, "selfadjoint candidate")?;
    let contracted: Vec<KMap> = (0..f.k).map(|s| contract_slot(f, tau, s)).collect::<Result<_>>()?;
    let scale = f.norm_fro() * tau.norm_fro();
    let t = f.t;
    let mut worst: f64 = 0.0;
    for i in 0..f.k {
        for j in i + 1..f.k {
            let diff = contracted[i].sub(&contracted[j]);
            for l in 0..t {
                let s: f64 = diff.iter().skip(l).step_by(t.max(1)).map(|z| z.norm_sqr()).sum();
                worst = worst.max(relative(s.sqrt(), scale));
            }
        }
    }
    Ok(worst)
}

/// Basis of the maps selfadjoint with respect to every coordinate form of
/// `𝓕`, identity first. Adjacent slot pairs suffice by transitivity.
pub fn selfadjoint_basis_klinear(f: &KMap, tol: &Tolerance) -> Vec<Mat> {
    let (n, k, t) = (f.n, f.k, f.t);
    let nn = n * n;
    let points = f.points();
    let rows = (k - 1) * points * t;
    let mut op = vec![ZERO; rows * nn];
    for s in 0..k - 1 {
        let (sa, sb) = (f.stride(s), f.stride(s + 1));
        for p in 0..points {
            let (da, db) = ((p / sa) % n, (p / sb) % n);
            let (ba, bb) = (p - da * sa, p - db * sb);
            for l in 0..t {
                let row = ((s * points + p) * t + l) * nn;
                for m in 0..n {
                    op[row + m * n + da] += f.coords[(ba + m * sa) * t + l];
                    op[row + m * n + db] -= f.coords[(bb + m * sb) * t + l];
                }
            }
        }
    }
    let norm = op.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    basis_with_identity(n, nullspace_raw(rows, nn, op, tol.rank_tol * norm))
}

/// Phase-one witness: `𝓖(φ₁u₁, …, φ_ku_k) = ψ𝓕(u₁, …, u_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapEquivWitness {
    pub phis: Vec<Mat>,
    pub psi: Mat,
}

/// `𝓖(φu₁, …, φu_k) = ψ𝓕(u₁, …, u_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapCongruenceWitness {
    pub phi: Mat,
    pub psi: Mat,
}

impl MapCongruenceWitness {
    pub fn to_equiv(&self, k: usize) -> MapEquivWitness {
        MapEquivWitness {
            phis: vec![self.phi.clone(); k],
            psi: self.psi.clone(),
        }
    }
}

/// Coordinate matrices `A_ℓ[i, j] = 𝓕(e_i, e_j)_ℓ` of a bilinear map.
pub fn bilinear_to_tuple(f: &KMap) -> Result<MatTuple> {
    if f.k != 2 {
        return Err(Error::shape("bilinear map", f.shape_string()));
    }
    let (n, t) = (f.n, f.t);
    let mats = (0..t)
        .map(|l| {
            Mat::from_vec_unchecked(n, n, (0..n * n).map(|p| f.coords[p * t + l]).collect())
        })
        .collect();
    let tag = match f.tag {
        MapSymmetry::None => SymmetryTag::None,
        MapSymmetry::Symmetric => SymmetryTag::Symmetric,
        MapSymmetry::Skew => SymmetryTag::Skew,
    };
    Ok(MatTuple::from_parts(n, mats, tag))
}

/// Inverse of [`bilinear_to_tuple`]. Hermitian tags have no bilinear
/// counterpart and are dropped.
pub fn tuple_to_bilinear(a: &MatTuple) -> Result<KMap> {
    let (n, t) = (a.n(), a.t());
    check_dims(n, 2, t)?;
    let mut coords = vec![ZERO; n * n * t];
    for (l, m) in a.mats().iter().enumerate() {
        for (p, &z) in m.entries().iter().enumerate() {
            coords[p * t + l] = z;
        }
    }
    let tag = match a.tag() {
        SymmetryTag::Symmetric => MapSymmetry::Symmetric,
        SymmetryTag::Skew => MapSymmetry::Skew,
        _ => MapSymmetry::None,
    };
    Ok(KMap::from_parts(n, 2, t, coords, tag))
}
