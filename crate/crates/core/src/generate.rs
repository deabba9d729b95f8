//! Seeded ground-truth instances.
//!
//! Every generator starts from a known congruence and inflates it into a
//! nontrivial two-sided (or per-slot) witness through the selfadjoint
//! algebra of the forms, then runs its own verification predicate before
//! returning. The stream is ChaCha8 from `rand_chacha` 0.9, seeded with
//! `seed_from_u64`; each generator draws from its own stream number so that
//! generators compose without shifting each other's output.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use itertools::Itertools;
// Unused when std ends up linked (dev builds).
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::mat::{distance, Mat, MAX_DIM};
use crate::multilinear::{
    apply_output, check_map_equivalence, check_map_symmetric_equivalence, contract_all,
    direct_sum, selfadjoint_basis_klinear, KMap, MapEquivWitness, MapSymmetry,
};
use crate::numerics::lu::{condition_estimate, inverse};
use crate::numerics::schur::eigenvalues;
use crate::scalar::{Scalar, Tolerance, ZERO};
use crate::tuple::{
    check_congruence, check_sign_split_instance, check_symmetric_equivalence,
    selfadjoint_algebra_basis, CongruenceWitness, EquivWitness, MatTuple, SignSplit, SymmetryTag,
};

/// Identification string recorded in fixtures.
pub const RNG_ID: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64, per-generator streams";

const STREAM_TUPLE: u64 = 0;
const STREAM_EQUIV: u64 = 1;
const STREAM_MAP: u64 = 2;
const STREAM_MAP_INSTANCE: u64 = 3;
const STREAM_SIGN_SPLIT: u64 = 4;
const STREAM_PLAIN_MAP: u64 = 5;

/// Eigenvalue gaps (relative) in this band are neither clearly repeated
/// nor clearly distinct; generated selfadjoint maps avoid them.
const RISKY_GAP: (f64, f64) = (1e-9, 1e-4);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Complex,
    Real,
}

impl Mode {
    pub fn is_real(self) -> bool {
        self == Mode::Real
    }
}

pub struct Rng {
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn seeded(seed: u64) -> Self {
        Rng::stream(seed, 0)
    }

    pub fn stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Rng { inner }
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.inner.random::<f64>()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.inner.random_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.inner.random::<bool>()
    }

    /// Standard normal: real, or `(N + iN)/√2` in complex mode.
    pub fn scalar(&mut self, real: bool) -> Scalar {
        if real {
            Scalar::new(self.normal(), 0.0)
        } else {
            let (a, b) = (self.normal(), self.normal());
            Scalar::new(a, b) * core::f64::consts::FRAC_1_SQRT_2
        }
    }

    pub fn matrix(&mut self, rows: usize, cols: usize, real: bool) -> Mat {
        let data = (0..rows * cols).map(|_| self.scalar(real)).collect();
        Mat::from_vec_unchecked(rows, cols, data)
    }

    pub fn complex_matrix(&mut self, rows: usize, cols: usize) -> Mat {
        self.matrix(rows, cols, false)
    }

    pub fn real_matrix(&mut self, rows: usize, cols: usize) -> Mat {
        self.matrix(rows, cols, true)
    }

    /// Random `n×n` matrix with `‖S‖_F‖S⁻¹‖_F ≤ cap`, by rejection.
    pub fn conditioned_matrix(
        &mut self,
        n: usize,
        cap: f64,
        real: bool,
        tol: &Tolerance,
        tries: usize,
    ) -> Result<Mat> {
        for _ in 0..tries.max(1) {
            let s = self.matrix(n, n, real);
            if matches!(condition_estimate(&s, tol), Ok(c) if c <= cap) {
                return Ok(s);
            }
        }
        Err(Error::GenerationFailed {
            detail: format!("no {n}x{n} matrix with condition ≤ {cap:e} in {tries} draws"),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub n: usize,
    pub t: usize,
    pub k: usize,
    pub symmetry: SymmetryTag,
    pub mode: Mode,
    pub condition_cap: f64,
    pub selfadjoint_tries: usize,
    /// Positive block size of a sign split; drawn when `None`.
    pub p: Option<usize>,
    /// Emit the obstruction variant: `R → −R`, `B → −B`.
    pub negate: bool,
    /// Per-slot exponents `c_j` with `Σ c_j = 0`; drawn when `None`.
    pub exponents: Option<Vec<i32>>,
    /// Number of direct summands of a generated map (enlarges its
    /// selfadjoint algebra beyond scalars).
    pub summands: usize,
}

impl GenConfig {
    pub fn new(seed: u64) -> Self {
        GenConfig {
            seed,
            n: 2,
            t: 1,
            k: 2,
            symmetry: SymmetryTag::None,
            mode: Mode::Complex,
            condition_cap: 1e3,
            selfadjoint_tries: 32,
            p: None,
            negate: false,
            exponents: None,
            summands: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n > MAX_DIM {
            return Err(Error::invalid(format!("n = {} exceeds {MAX_DIM}", self.n)));
        }
        if !(self.condition_cap > 1.0) {
            return Err(Error::invalid("condition_cap must exceed 1"));
        }
        if self.selfadjoint_tries == 0 {
            return Err(Error::invalid("selfadjoint_tries must be positive"));
        }
        if let Some(p) = self.p {
            if p > self.n {
                return Err(Error::invalid(format!("p = {p} exceeds n = {}", self.n)));
            }
        }
        if let Some(c) = &self.exponents {
            if c.len() != self.k || c.iter().sum::<i32>() != 0 {
                return Err(Error::invalid("exponents need k entries summing to zero"));
            }
        }
        if self.mode.is_real() && self.symmetry == SymmetryTag::Hermitian {
            return Err(Error::invalid("hermitian tag is a complex-mode notion"));
        }
        Ok(())
    }

    fn real(&self) -> bool {
        self.mode.is_real()
    }
}

fn tagged(x: Mat, tag: SymmetryTag) -> Mat {
    let half = |m: Mat| m.scale_real(0.5);
    match tag {
        SymmetryTag::None => x,
        SymmetryTag::Symmetric => half(&x + &x.transpose()),
        SymmetryTag::Skew => half(&x - &x.transpose()),
        SymmetryTag::Hermitian => half(&x + &x.adjoint()),
    }
}

/// i.i.d. normal entries, symmetrized per tag (`(X ± Xᵀ)/2`).
pub fn gen_tuple(cfg: &GenConfig) -> Result<MatTuple> {
    cfg.validate()?;
    let mut rng = Rng::stream(cfg.seed, STREAM_TUPLE);
    let mats = (0..cfg.t)
        .map(|_| tagged(rng.matrix(cfg.n, cfg.n, cfg.real()), cfg.symmetry))
        .collect();
    MatTuple::new(cfg.n, mats, cfg.symmetry, &Tolerance::default())
}

fn map_symmetry(tag: SymmetryTag) -> Result<MapSymmetry> {
    match tag {
        SymmetryTag::None => Ok(MapSymmetry::None),
        SymmetryTag::Symmetric => Ok(MapSymmetry::Symmetric),
        SymmetryTag::Skew => Ok(MapSymmetry::Skew),
        SymmetryTag::Hermitian => Err(Error::invalid("multilinear maps have no hermitian tag")),
    }
}

/// Average over argument orders, signed for the skew case.
/// Random block with exact slot symmetry: one draw per (sorted multi-index,
/// output) orbit, spread over the orbit with the permutation sign for skew
/// maps; skew entries on repeated indices are zero.
fn random_block(rng: &mut Rng, n: usize, k: usize, t: usize, sym: MapSymmetry, real: bool) -> Result<KMap> {
    let mut orbits: BTreeMap<(Vec<usize>, usize), Scalar> = BTreeMap::new();
    let map = KMap::from_fn(n, k, t, |idx, l| {
        if sym == MapSymmetry::None {
            return rng.scalar(real);
        }
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        if sym == MapSymmetry::Skew && sorted.windows(2).any(|w| w[0] == w[1]) {
            return ZERO;
        }
        let odd = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .filter(|&(i, j)| idx[i] > idx[j])
            .count()
            % 2
            == 1;
        let v = *orbits.entry((sorted, l)).or_insert_with(|| rng.scalar(real));
        if sym == MapSymmetry::Skew && odd {
            -v
        } else {
            v
        }
    })?;
    map.with_tag(sym, &Tolerance::default())
}

/// Splits `total` into `parts` positive sizes as evenly as possible.
fn split_sizes(total: usize, parts: usize) -> Vec<usize> {
    (0..parts)
        .map(|i| total / parts + usize::from(i < total % parts))
        .collect()
}

/// Random `k`-linear map, symmetrized per tag, as a direct sum of
/// `cfg.summands` independent blocks (capped by `n` and `t`).
pub fn gen_map(cfg: &GenConfig) -> Result<KMap> {
    cfg.validate()?;
    let sym = map_symmetry(cfg.symmetry)?;
    let mut rng = Rng::stream(cfg.seed, STREAM_MAP);
    // Skew blocks narrower than k vanish identically.
    let widest = if sym == MapSymmetry::Skew { cfg.n / cfg.k } else { cfg.n };
    let parts = cfg.summands.clamp(1, widest.min(cfg.t).max(1));
    let ns = split_sizes(cfg.n, parts);
    let ts = split_sizes(cfg.t, parts);
    let mut out: Option<KMap> = None;
    for (&n, &t) in ns.iter().zip(&ts) {
        let block = random_block(&mut rng, n, cfg.k, t, sym, cfg.real())?;
        out = Some(match out {
            None => block,
            Some(acc) => direct_sum(&acc, &block)?,
        });
    }
    out.ok_or_else(|| Error::invalid("empty map configuration"))
}

fn well_separated(eigs: &[Scalar], scale: f64) -> bool {
    if scale == 0.0 {
        return false;
    }
    let min_abs = eigs.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if eigs.len() > 0 && min_abs < 1e-3 * scale {
        return false;
    }
    eigs.iter().tuple_combinations().all(|(a, b)| {
        let d = (a - b).norm() / scale;
        !(RISKY_GAP.0 < d && d < RISKY_GAP.1)
    })
}

fn random_combination(rng: &mut Rng, basis: &[Mat], real: bool, center: f64) -> Mat {
    let n = basis[0].rows();
    let mut tau = Mat::scalar(n, Scalar::new(center, 0.0));
    for b in basis {
        let c = rng.scalar(real);
        tau = &tau + &b.scale(c);
    }
    tau
}

fn random_scalar_root(rng: &mut Rng, real: bool) -> Scalar {
    let modulus = rng.uniform(1.5, 3.0);
    if real {
        Scalar::new(if rng.coin() { modulus } else { -modulus }, 0.0)
    } else {
        Scalar::from_polar(modulus, rng.uniform(-3.0, 3.0))
    }
}

/// A ground-truth symmetric-equivalence instance.
#[derive(Debug, Clone)]
pub struct SymEquivInstance {
    pub b: MatTuple,
    pub witness: EquivWitness,
    /// A congruence witness known in advance: `S`, or `iS` for the negated
    /// variant (absent in real mode, where none exists in general).
    pub s_true: Option<Mat>,
    pub tau: Mat,
}

/// `B := SASᵀ`, `P := Sτᵀ`, `R := Sτ⁻ᵀ` for random `S` and selfadjoint `τ`
/// (`Aτ = τᵀA`), so that `PARᵀ = S τᵀ A τ⁻¹ Sᵀ = SASᵀ`.
pub fn make_symmetric_equiv_instance(a: &MatTuple, cfg: &GenConfig) -> Result<SymEquivInstance> {
    cfg.validate()?;
    let tol = Tolerance::default();
    let n = a.n();
    let real = cfg.real();
    let mut rng = Rng::stream(cfg.seed, STREAM_EQUIV);
    let s = rng.conditioned_matrix(n, cfg.condition_cap, real, &tol, cfg.selfadjoint_tries)?;
    let basis = selfadjoint_algebra_basis(a, &tol);

    let acceptable = |tau: &Mat| -> bool {
        let Ok(cond) = condition_estimate(tau, &tol) else { return false };
        if !(cond <= cfg.condition_cap) {
            return false;
        }
        let sq = &tau.transpose() * &tau.transpose();
        let m = if cfg.negate { -&sq } else { sq };
        let Ok(eigs) = eigenvalues(&m) else { return false };
        if !well_separated(&eigs, m.norm_fro()) {
            return false;
        }
        if real {
            let scale = m.norm_fro();
            let negative_real = eigs
                .iter()
                .any(|z| z.im.abs() <= 1e-6 * scale && z.re < 0.0);
            // Positive instances must admit a real root, obstructed ones must not.
            return negative_real == cfg.negate;
        }
        true
    };

    let mut chosen = None;
    if n > 0 {
        for _ in 0..cfg.selfadjoint_tries {
            let tau = random_combination(&mut rng, &basis, real, 0.0);
            if acceptable(&tau) && distance(&tau, &Mat::identity(n)) > 1e-3 * tau.norm_fro() {
                chosen = Some(tau);
                break;
            }
        }
    }
    let tau = match chosen {
        Some(t) => t,
        None => Mat::scalar(n, random_scalar_root(&mut rng, real)),
    };

    let tinv_t = inverse(&tau, &tol)?.transpose();
    let p = &s * &tau.transpose();
    let mut r = &s * &tinv_t;
    let mut b = a.congruence_image(&s)?;
    let s_true = if cfg.negate {
        r = -&r;
        b = b.negate();
        if real {
            None
        } else {
            Some(s.scale(Scalar::new(0.0, 1.0)))
        }
    } else {
        Some(s)
    };
    let witness = EquivWitness { p, r };
    let rep = check_symmetric_equivalence(a, &b, &witness, &tol)?;
    if !rep.passed {
        return Err(Error::GenerationFailed {
            detail: format!("self-check failed with residual {:e}", rep.max_residual),
        });
    }
    if let Some(st) = &s_true {
        let rep = check_congruence(a, &b, &CongruenceWitness { s: st.clone() }, &tol)?;
        if !rep.passed {
            return Err(Error::GenerationFailed {
                detail: format!("ground-truth congruence failed with residual {:e}", rep.max_residual),
            });
        }
    }
    Ok(SymEquivInstance { b, witness, s_true, tau })
}

fn draw_exponents(rng: &mut Rng, k: usize) -> Vec<i32> {
    loop {
        let mut c: Vec<i32> = (0..k - 1).map(|_| rng.int(-2, 2) as i32).collect();
        let last = -c.iter().sum::<i32>();
        c.push(last);
        if last.abs() <= 3 && c.iter().any(|&x| x != 0) {
            return c;
        }
    }
}

fn mat_power(tau: &Mat, tau_inv: &Mat, c: i32) -> Mat {
    if c >= 0 {
        tau.pow(c as u32)
    } else {
        tau_inv.pow((-c) as u32)
    }
}

/// Picks a selfadjoint `τ` for the forms of `f`: a random element of the
/// algebra when it exceeds the scalars, otherwise `λI`.
/// `spread` is the largest exponent gap `max c − min c`: every merge step
/// takes a root of roughly `φ τ^d φ⁻¹` with `|d| ≤ spread`, and the root's
/// accuracy degrades with that matrix's conditioning, so those conjugated
/// powers are held to the condition cap too.
fn draw_map_tau(rng: &mut Rng, f: &KMap, cfg: &GenConfig, tol: &Tolerance, phi: &Mat, spread: u32) -> Mat {
    let n = f.n();
    let real = cfg.real();
    let basis = selfadjoint_basis_klinear(f, tol);
    if basis.len() > 1 {
        for _ in 0..cfg.selfadjoint_tries {
            let tau = random_combination(rng, &basis, real, if real { 2.5 } else { 0.0 });
            let Ok(cond) = condition_estimate(&tau, tol) else { continue };
            if !(cond <= cfg.condition_cap) {
                continue;
            }
            let Ok(phi_inv) = inverse(phi, tol) else { continue };
            let powers_conditioned = (1..=spread).all(|d| {
                let merge = &(phi * &tau.pow(d)) * &phi_inv;
                condition_estimate(&merge, tol).is_ok_and(|c| c <= cfg.condition_cap)
            });
            if !powers_conditioned {
                continue;
            }
            let Ok(eigs) = eigenvalues(&tau) else { continue };
            let scale = tau.norm_fro();
            let powers_ok = (1..=4).all(|d| {
                let pe: Vec<Scalar> = eigs.iter().map(|z| z.powi(d)).collect();
                let ps = pe.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                well_separated(&pe, ps)
            });
            let arg_ok = !real || eigs.iter().all(|z| z.arg().abs() <= core::f64::consts::PI / 16.0);
            if powers_ok && arg_ok && scale > 0.0 {
                return tau;
            }
        }
    }
    let mut lambda = random_scalar_root(rng, real);
    if real {
        lambda = Scalar::new(lambda.re.abs(), 0.0);
    }
    Mat::scalar(n, lambda)
}

/// A ground-truth symmetric-equivalence instance of multilinear maps.
#[derive(Debug, Clone)]
pub struct MapInstance {
    pub g: KMap,
    pub witness: MapEquivWitness,
    /// The congruence `(φ, ψ)` the instance was built from.
    pub phi: Mat,
    pub psi: Mat,
    pub tau: Mat,
    pub exponents: Vec<i32>,
}

fn base_map_image(rng: &mut Rng, f: &KMap, cfg: &GenConfig, tol: &Tolerance) -> Result<(KMap, Mat, Mat)> {
    let real = cfg.real();
    let phi = rng.conditioned_matrix(f.n(), cfg.condition_cap, real, tol, cfg.selfadjoint_tries)?;
    let psi = rng.conditioned_matrix(f.t(), cfg.condition_cap, real, tol, cfg.selfadjoint_tries)?;
    let g = apply_output(&contract_all(f, &inverse(&phi, tol)?)?, &psi)?;
    Ok((g, phi, psi))
}

/// `𝓖 := ψ ∘ 𝓕 ∘ (φ⁻¹, …, φ⁻¹)` and `φ_j := φ τ^{c_j}` with `Σ c_j = 0`,
/// where `τ` is selfadjoint for the forms of `𝓕`.
pub fn make_map_instance(f: &KMap, cfg: &GenConfig) -> Result<MapInstance> {
    cfg.validate()?;
    if cfg.k != f.k() {
        return Err(Error::shape(format!("{}-linear map", cfg.k), f.shape_string()));
    }
    let tol = Tolerance::default();
    let mut rng = Rng::stream(cfg.seed, STREAM_MAP_INSTANCE);
    let (g, phi, psi) = base_map_image(&mut rng, f, cfg, &tol)?;
    let exponents = match &cfg.exponents {
        Some(c) => c.clone(),
        None => draw_exponents(&mut rng, f.k()),
    };
    let spread = exponents.iter().max().zip(exponents.iter().min()).map_or(0, |(hi, lo)| hi.abs_diff(*lo));
    let tau = draw_map_tau(&mut rng, f, cfg, &tol, &phi, spread);
    let tau_inv = inverse(&tau, &tol)?;
    let phis = exponents
        .iter()
        .map(|&c| &phi * &mat_power(&tau, &tau_inv, c))
        .collect();
    let witness = MapEquivWitness { phis, psi: psi.clone() };
    let rep = check_map_symmetric_equivalence(f, &g, &witness, &tol)?;
    if !rep.passed {
        return Err(Error::GenerationFailed {
            detail: format!("self-check failed with residual {:e}", rep.max_residual),
        });
    }
    Ok(MapInstance { g, witness, phi, psi, tau, exponents })
}

/// A plain-equivalence instance whose witness is not built to satisfy the
/// permuted equations. For bilinear maps with `t ≤ 2` the slot bijections
/// range over the full equivalence group of the forms (`α₂ = A₁⁻¹α₁⁻ᵀA₁`,
/// with `α₁ᵀ` a polynomial in `A₂A₁⁻¹` when `t = 2`); other shapes use
/// `α_j = a_j I + b_j τ` for a selfadjoint `τ` and one compensating slot.
pub fn make_plain_map_instance(f: &KMap, cfg: &GenConfig) -> Result<(KMap, MapEquivWitness)> {
    cfg.validate()?;
    let tol = Tolerance::default();
    let real = cfg.real();
    let n = f.n();
    let mut rng = Rng::stream(cfg.seed, STREAM_PLAIN_MAP);
    let (g, phi, psi) = base_map_image(&mut rng, f, cfg, &tol)?;

    let mut alphas: Option<Vec<Mat>> = None;
    if f.k() == 2 && (1..=2).contains(&f.t()) && n > 0 {
        let forms = crate::multilinear::bilinear_to_tuple(f)?;
        let a1 = &forms.mats()[0];
        if let Ok(a1_inv) = inverse(a1, &tol) {
            if condition_estimate(a1, &tol).is_ok_and(|c| c <= cfg.condition_cap) {
                for _ in 0..cfg.selfadjoint_tries {
                    let alpha1 = if f.t() == 1 {
                        rng.matrix(n, n, real)
                    } else {
                        let x = &forms.mats()[1] * &a1_inv;
                        let c0 = rng.scalar(real) + 2.0;
                        let c1 = rng.scalar(real);
                        (&Mat::scalar(n, c0) + &x.scale(c1)).transpose()
                    };
                    if !condition_estimate(&alpha1, &tol).is_ok_and(|c| c <= cfg.condition_cap) {
                        continue;
                    }
                    let alpha2 = &(&a1_inv * &inverse(&alpha1, &tol)?.transpose()) * a1;
                    alphas = Some(vec![alpha1, alpha2]);
                    break;
                }
            }
        }
    }
    let alphas = match alphas {
        Some(a) => a,
        None => {
            let tau = draw_map_tau(&mut rng, f, cfg, &tol, &phi, 1);
            let mut out: Vec<Mat> = Vec::new();
            let mut product = Mat::identity(n);
            for _ in 0..f.k() - 1 {
                let a = rng.scalar(real) * 0.5 + Scalar::new(1.5, 0.0);
                let b = rng.scalar(real) * 0.5;
                let alpha = &Mat::scalar(n, a) + &tau.scale(b);
                product = &product * &alpha;
                out.push(alpha);
            }
            out.push(inverse(&product, &tol)?);
            out
        }
    };
    let phis = alphas.iter().map(|a| &phi * a).collect();
    let witness = MapEquivWitness { phis, psi };
    let rep = check_map_equivalence(f, &g, &witness, &tol)?;
    if !rep.passed {
        return Err(Error::GenerationFailed {
            detail: format!("self-check failed with residual {:e}", rep.max_residual),
        });
    }
    Ok((g, witness))
}

/// A verified sign-split bundle.
#[derive(Debug, Clone)]
pub struct SignSplitInstance {
    pub a: MatTuple,
    pub b: MatTuple,
    pub c: MatTuple,
    pub split: SignSplit,
    pub w1: CongruenceWitness,
    pub w2: CongruenceWitness,
}

/// Block-diagonal `C`, `A := S₁CS₁ᵀ`, `B := S₂(I_p ⊕ −I_q)CS₂ᵀ`; `w1 = S₁⁻¹`
/// carries `A` to `C` and `w2 = S₂` carries `(I_p ⊕ −I_q)C` to `B`.
pub fn make_sign_split_instance(cfg: &GenConfig) -> Result<SignSplitInstance> {
    cfg.validate()?;
    let tol = Tolerance::default();
    let real = cfg.real();
    let n = cfg.n;
    let mut rng = Rng::stream(cfg.seed, STREAM_SIGN_SPLIT);
    let p = match cfg.p {
        Some(p) => p,
        None => rng.int(0, n as i64) as usize,
    };
    let split = SignSplit { p, q: n - p };
    let cmats: Vec<Mat> = (0..cfg.t)
        .map(|_| {
            let top = tagged(rng.matrix(p, p, real), cfg.symmetry);
            let bottom = tagged(rng.matrix(n - p, n - p, real), cfg.symmetry);
            Mat::block_diag(&[top, bottom])
        })
        .collect();
    let c = MatTuple::new(n, cmats, cfg.symmetry, &tol)?;
    let s1 = rng.conditioned_matrix(n, cfg.condition_cap, real, &tol, cfg.selfadjoint_tries)?;
    let s2 = rng.conditioned_matrix(n, cfg.condition_cap, real, &tol, cfg.selfadjoint_tries)?;
    let a = c.congruence_image(&s1)?;
    let b = c.left_multiply(&split.matrix())?.congruence_image(&s2)?;
    let w1 = CongruenceWitness { s: inverse(&s1, &tol)? };
    let w2 = CongruenceWitness { s: s2 };
    let rep = check_sign_split_instance(&a, &b, &c, split, &w1, &w2, &tol)?;
    if !rep.passed {
        return Err(Error::GenerationFailed {
            detail: format!("self-check failed with residual {:e}", rep.max_residual),
        });
    }
    Ok(SignSplitInstance { a, b, c, split, w1, w2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::symmetrize_map_witness;
    use crate::roots::BranchRule;
    use crate::tuple::symmetrize_witness;

    fn cfg(seed: u64, n: usize, t: usize, tag: SymmetryTag) -> GenConfig {
        GenConfig { n, t, symmetry: tag, ..GenConfig::new(seed) }
    }

    #[test]
    fn tuple_generation_is_deterministic() {
        let c = cfg(7, 4, 2, SymmetryTag::Symmetric);
        assert_eq!(gen_tuple(&c).unwrap(), gen_tuple(&c).unwrap());
        let other = cfg(8, 4, 2, SymmetryTag::Symmetric);
        assert_ne!(gen_tuple(&c).unwrap(), gen_tuple(&other).unwrap());
    }

    #[test]
    fn skew_tuples_have_zero_diagonal() {
        let a = gen_tuple(&cfg(3, 5, 3, SymmetryTag::Skew)).unwrap();
        for m in a.mats() {
            assert!(m.diagonal().iter().all(|z| *z == ZERO));
        }
    }

    #[test]
    fn real_mode_is_real() {
        let c = GenConfig { mode: Mode::Real, ..cfg(5, 3, 2, SymmetryTag::None) };
        for m in gen_tuple(&c).unwrap().mats() {
            assert!(m.is_real_within(0.0));
        }
    }

    #[test]
    fn scalar_instance_arithmetic() {
        // With A = (1) the algebra is everything; check P R ᵀ bookkeeping.
        let a = MatTuple::single(Mat::real_diag(&[1.0])).unwrap();
        let inst = make_symmetric_equiv_instance(&a, &cfg(1, 1, 1, SymmetryTag::None)).unwrap();
        let tau = inst.tau[(0, 0)];
        let s = inst.s_true.clone().unwrap()[(0, 0)];
        assert!((inst.witness.p[(0, 0)] - s * tau).norm() < 1e-14);
        assert!((inst.witness.r[(0, 0)] - s / tau).norm() < 1e-14);
        assert!((inst.b.mats()[0][(0, 0)] - s * s).norm() < 1e-14);
    }

    #[test]
    fn equiv_instances_round_trip() {
        let tol = Tolerance::default();
        for (seed, tag) in [(1, SymmetryTag::None), (2, SymmetryTag::Symmetric), (3, SymmetryTag::Skew)] {
            let c = cfg(seed, 4, 2, tag);
            let a = gen_tuple(&c).unwrap();
            let inst = make_symmetric_equiv_instance(&a, &c).unwrap();
            let s = symmetrize_witness(&a, &inst.b, &inst.witness, &tol, &BranchRule::Principal).unwrap();
            assert!(check_congruence(&a, &inst.b, &s, &tol).unwrap().passed);
        }
    }

    #[test]
    fn nontriviality_rate() {
        let mut nontrivial = 0;
        for seed in 0..100 {
            let c = cfg(seed, 2 + (seed as usize % 5), 1 + (seed as usize % 3), SymmetryTag::None);
            let a = gen_tuple(&c).unwrap();
            let inst = make_symmetric_equiv_instance(&a, &c).unwrap();
            let (p, r) = (&inst.witness.p, &inst.witness.r);
            if distance(p, r) > 1e-3 * p.norm_fro() {
                nontrivial += 1;
            }
        }
        assert!(nontrivial >= 90, "{nontrivial}");
    }

    #[test]
    fn negated_instances() {
        let tol = Tolerance::default();
        let c = GenConfig { negate: true, ..cfg(4, 3, 2, SymmetryTag::Symmetric) };
        let a = gen_tuple(&c).unwrap();
        let inst = make_symmetric_equiv_instance(&a, &c).unwrap();
        assert!(inst.s_true.is_some());
        assert!(symmetrize_witness(&a, &inst.b, &inst.witness, &tol, &BranchRule::Principal).is_ok());
        let rc = GenConfig { mode: Mode::Real, ..c };
        let a = gen_tuple(&rc).unwrap();
        let inst = make_symmetric_equiv_instance(&a, &rc).unwrap();
        assert!(inst.s_true.is_none());
        assert!(matches!(
            symmetrize_witness(&a, &inst.b, &inst.witness, &tol, &BranchRule::RealPreferring),
            Err(Error::BranchConflict { .. })
        ));
    }

    #[test]
    fn real_positive_instances_symmetrize_in_real_mode() {
        let tol = Tolerance::default();
        for seed in 0..10 {
            let c = GenConfig { mode: Mode::Real, ..cfg(seed, 3, 2, SymmetryTag::Symmetric) };
            let a = gen_tuple(&c).unwrap();
            let inst = make_symmetric_equiv_instance(&a, &c).unwrap();
            let s = symmetrize_witness(&a, &inst.b, &inst.witness, &tol, &BranchRule::RealPreferring).unwrap();
            assert!(s.s.is_real_within(0.0));
        }
    }

    #[test]
    fn map_instances_with_fixed_exponents() {
        let tol = Tolerance::default();
        let c = GenConfig { k: 3, n: 3, t: 2, summands: 2, exponents: Some(vec![1, 1, -2]), ..GenConfig::new(9) };
        let f = gen_map(&c).unwrap();
        let inst = make_map_instance(&f, &c).unwrap();
        assert_eq!(inst.exponents, vec![1, 1, -2]);
        assert!(distance(&inst.witness.phis[0], &inst.witness.phis[2]) > 1e-3);
        let w = symmetrize_map_witness(&f, &inst.g, &inst.witness, &tol, &BranchRule::Principal).unwrap();
        assert!(crate::multilinear::check_map_congruence(&f, &inst.g, &w, &tol).unwrap().passed);
    }

    #[test]
    fn map_instance_k2_matches_tuple_shape() {
        let c = GenConfig { k: 2, n: 3, t: 1, exponents: Some(vec![1, -1]), ..GenConfig::new(10) };
        let f = gen_map(&c).unwrap();
        let inst = make_map_instance(&f, &c).unwrap();
        let (p1, p2) = (&inst.witness.phis[0], &inst.witness.phis[1]);
        assert!(distance(p1, &(&inst.phi * &inst.tau)) < 1e-12 * p1.norm_fro());
        let tinv = inverse(&inst.tau, &Tolerance::default()).unwrap();
        assert!(distance(p2, &(&inst.phi * &tinv)) < 1e-12 * p2.norm_fro());
    }

    #[test]
    fn sign_split_instances() {
        let tol = Tolerance::default();
        let c = GenConfig { p: Some(2), ..cfg(11, 4, 2, SymmetryTag::Symmetric) };
        let inst = make_sign_split_instance(&c).unwrap();
        assert_eq!(inst.split, SignSplit { p: 2, q: 2 });
        let full = GenConfig { p: Some(4), ..c };
        let inst = make_sign_split_instance(&full).unwrap();
        // No flip: A and B are congruent through S₂S₁⁻¹.
        let s = &inst.w2.s * &inst.w1.s;
        assert!(check_congruence(&inst.a, &inst.b, &CongruenceWitness { s }, &tol).unwrap().passed);
    }

    #[test]
    fn config_validation() {
        assert!(GenConfig { condition_cap: 1.0, ..GenConfig::new(0) }.validate().is_err());
        assert!(GenConfig { p: Some(3), ..GenConfig::new(0) }.validate().is_err());
        assert!(GenConfig { exponents: Some(vec![1, 1]), ..GenConfig::new(0) }.validate().is_err());
        assert!(GenConfig { n: 33, ..GenConfig::new(0) }.validate().is_err());
    }
}
