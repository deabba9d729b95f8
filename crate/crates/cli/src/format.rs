//! The `congforge/1` JSON document format.
//!
//! Matrices are row-major arrays of rows. In complex mode every entry is an
//! `[re, im]` pair; in real mode entries are plain numbers and a pair with a
//! nonzero imaginary part is refused. Numbers are written in the shortest
//! decimal form that parses back to the same `f64`, so `print ∘ parse` is
//! the identity on files this crate wrote.

use congforge_core::generate::{GenConfig, Mode};
use congforge_core::multilinear::{KMap, MapCongruenceWitness, MapEquivWitness, MapSymmetry};
use congforge_core::tuple::{CongruenceWitness, EquivWitness, MatTuple, SignSplit, SymmetryTag};
use congforge_core::{Mat, RootResult, Scalar, Tolerance};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "congforge/1";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {found:?} (this build reads {SCHEMA_VERSION:?})")]
    Schema { found: String },
    #[error("{what}: nonzero imaginary part in a real-mode document")]
    NotReal { what: String },
    #[error("{what}: {source}")]
    Core {
        what: String,
        source: congforge_core::Error,
    },
    #[error("{0}")]
    Layout(String),
}

type Result<T> = std::result::Result<T, FormatError>;

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub mode: Mode,
    pub tolerances: Option<Tolerance>,
    pub payload: Payload,
}

impl Document {
    pub fn new(mode: Mode, payload: Payload) -> Self {
        Document { mode, tolerances: None, payload }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let wire: WireDocument = serde_json::from_str(text)?;
        if wire.schema_version != SCHEMA_VERSION {
            return Err(FormatError::Schema { found: wire.schema_version });
        }
        let mode = wire.mode.into();
        let tolerances = match wire.tolerances {
            Some(t) => Some(
                Tolerance::new(t.cluster_tol, t.residual_tol, t.rank_tol)
                    .map_err(|e| core_err("tolerances", e))?,
            ),
            None => None,
        };
        let cx = Ctx { real: mode == Mode::Real, tol: tolerances.unwrap_or_default() };
        let payload = cx.payload(wire.payload)?;
        Ok(Document { mode, tolerances, payload })
    }

    /// Pretty JSON with a trailing newline.
    pub fn print(&self) -> String {
        let real = self.mode == Mode::Real;
        let wire = WireDocument {
            schema_version: SCHEMA_VERSION.into(),
            mode: self.mode.into(),
            tolerances: self.tolerances.map(|t| WireTolerance {
                cluster_tol: t.cluster_tol,
                residual_tol: t.residual_tol,
                rank_tol: t.rank_tol,
            }),
            payload: wire_payload(&self.payload, real),
        };
        let value = serde_json::to_value(&wire).expect("documents always serialize");
        let mut s = String::new();
        layout(&value, 0, &mut s);
        s.push('\n');
        s
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tolerances.unwrap_or_default()
    }

    pub fn kind(&self) -> &'static str {
        self.payload.kind()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Matrix(Mat),
    Tuple(MatTuple),
    KMap(KMap),
    EquivWitness(EquivWitness),
    CongruenceWitness(CongruenceWitness),
    MapWitness(MapEquivWitness),
    MapCongruenceWitness(MapCongruenceWitness),
    InstanceBundle(Box<InstanceBundle>),
    RootResult(Box<RootDocument>),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Matrix(_) => "matrix",
            Payload::Tuple(_) => "tuple",
            Payload::KMap(_) => "kmap",
            Payload::EquivWitness(_) => "equiv_witness",
            Payload::CongruenceWitness(_) => "congruence_witness",
            Payload::MapWitness(_) => "map_witness",
            Payload::MapCongruenceWitness(_) => "map_congruence_witness",
            Payload::InstanceBundle(_) => "instance_bundle",
            Payload::RootResult(_) => "root_result",
        }
    }
}

/// How a bundle was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorInfo {
    pub rng: String,
    pub kind: String,
    pub config: GenConfig,
}

/// Everything a relation check or a symmetrization run may need; absent
/// parts are simply omitted from the file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InstanceBundle {
    pub generator: Option<GeneratorInfo>,
    pub a: Option<MatTuple>,
    pub b: Option<MatTuple>,
    pub c: Option<MatTuple>,
    pub f: Option<KMap>,
    pub g: Option<KMap>,
    pub equiv_witness: Option<EquivWitness>,
    pub congruence_witness: Option<CongruenceWitness>,
    pub map_witness: Option<MapEquivWitness>,
    pub map_congruence_witness: Option<MapCongruenceWitness>,
    pub sign_split: Option<SignSplit>,
    pub w1: Option<CongruenceWitness>,
    pub w2: Option<CongruenceWitness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootDocument {
    pub m: u32,
    pub inverse: bool,
    pub f: Mat,
    /// Ascending-degree coefficients of the root polynomial.
    pub coefficients: Vec<Scalar>,
    pub eigenvalues: Vec<Scalar>,
    pub branch_assignment: Vec<Scalar>,
    pub chain_bound: Vec<usize>,
    pub residual: f64,
    /// Relative gap between eigenvalue clusters; absent with one cluster.
    pub margin: Option<f64>,
}

impl RootDocument {
    pub fn from_result(m: u32, inverse: bool, r: &RootResult) -> Self {
        RootDocument {
            m,
            inverse,
            f: r.f_mat.clone(),
            coefficients: r.f.coeffs().to_vec(),
            eigenvalues: r.eigenvalues.clone(),
            branch_assignment: r.branch_assignment.clone(),
            chain_bound: r.chain_bound.clone(),
            residual: r.residual,
            margin: r.margin.is_finite().then_some(r.margin),
        }
    }
}

fn core_err(what: &str, source: congforge_core::Error) -> FormatError {
    FormatError::Core { what: what.into(), source }
}

// ---- wire types ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireDocument {
    schema_version: String,
    mode: WireMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tolerances: Option<WireTolerance>,
    payload: WirePayload,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum WireMode {
    Complex,
    Real,
}

impl From<WireMode> for Mode {
    fn from(m: WireMode) -> Self {
        match m {
            WireMode::Complex => Mode::Complex,
            WireMode::Real => Mode::Real,
        }
    }
}

impl From<Mode> for WireMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Complex => WireMode::Complex,
            Mode::Real => WireMode::Real,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(deny_unknown_fields)]
struct WireTolerance {
    cluster_tol: f64,
    residual_tol: f64,
    rank_tol: f64,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(untagged)]
enum WireEntry {
    Real(f64),
    Pair([f64; 2]),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<WireEntry>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireTuple {
    n: usize,
    tag: String,
    mats: Vec<WireMatrix>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireKMap {
    n: usize,
    k: usize,
    t: usize,
    tag: String,
    /// Flat, `((i₁n + i₂)n + …)t + ℓ`.
    coords: Vec<WireEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireEquiv {
    p: WireMatrix,
    r: WireMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireCongruence {
    s: WireMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireMapWitness {
    phis: Vec<WireMatrix>,
    psi: WireMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireMapCongruence {
    phi: WireMatrix,
    psi: WireMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireSplit {
    p: usize,
    q: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireGenerator {
    rng: String,
    kind: String,
    seed: u64,
    n: usize,
    t: usize,
    k: usize,
    symmetry: String,
    condition_cap: f64,
    selfadjoint_tries: usize,
    negate: bool,
    summands: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exponents: Option<Vec<i32>>,
}

macro_rules! optional_fields {
    ($(#[$m:meta])* struct $name:ident { $($field:ident: $ty:ty,)* }) => {
        $(#[$m])*
        struct $name {
            $(
                #[serde(default, skip_serializing_if = "Option::is_none")]
                $field: Option<$ty>,
            )*
        }
    };
}

optional_fields! {
    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct WireBundle {
        generator: WireGenerator,
        a: WireTuple,
        b: WireTuple,
        c: WireTuple,
        f: WireKMap,
        g: WireKMap,
        equiv_witness: WireEquiv,
        congruence_witness: WireCongruence,
        map_witness: WireMapWitness,
        map_congruence_witness: WireMapCongruence,
        sign_split: WireSplit,
        w1: WireCongruence,
        w2: WireCongruence,
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireRoot {
    m: u32,
    inverse: bool,
    f: WireMatrix,
    coefficients: Vec<WireEntry>,
    eigenvalues: Vec<WireEntry>,
    branch_assignment: Vec<WireEntry>,
    chain_bound: Vec<usize>,
    residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    margin: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum WirePayload {
    Matrix(WireMatrix),
    Tuple(WireTuple),
    #[serde(rename = "kmap")]
    KMap(WireKMap),
    EquivWitness(WireEquiv),
    CongruenceWitness(WireCongruence),
    MapWitness(WireMapWitness),
    MapCongruenceWitness(WireMapCongruence),
    InstanceBundle(Box<WireBundle>),
    RootResult(Box<WireRoot>),
}

// ---- printing ----

fn wire_entry(z: Scalar, real: bool) -> WireEntry {
    if real {
        WireEntry::Real(z.re)
    } else {
        WireEntry::Pair([z.re, z.im])
    }
}

fn wire_entries(zs: &[Scalar], real: bool) -> Vec<WireEntry> {
    zs.iter().map(|&z| wire_entry(z, real)).collect()
}

fn wire_matrix(m: &Mat, real: bool) -> WireMatrix {
    let entries = if m.cols() == 0 {
        vec![Vec::new(); m.rows()]
    } else {
        m.entries().chunks(m.cols()).map(|row| wire_entries(row, real)).collect()
    };
    WireMatrix { rows: m.rows(), cols: m.cols(), entries }
}

fn wire_tuple(a: &MatTuple, real: bool) -> WireTuple {
    WireTuple {
        n: a.n(),
        tag: a.tag().name().into(),
        mats: a.mats().iter().map(|m| wire_matrix(m, real)).collect(),
    }
}

fn wire_kmap(f: &KMap, real: bool) -> WireKMap {
    WireKMap {
        n: f.n(),
        k: f.k(),
        t: f.t(),
        tag: f.tag().name().into(),
        coords: wire_entries(f.coords(), real),
    }
}

fn wire_equiv(w: &EquivWitness, real: bool) -> WireEquiv {
    WireEquiv { p: wire_matrix(&w.p, real), r: wire_matrix(&w.r, real) }
}

fn wire_congruence(w: &CongruenceWitness, real: bool) -> WireCongruence {
    WireCongruence { s: wire_matrix(&w.s, real) }
}

fn wire_map_witness(w: &MapEquivWitness, real: bool) -> WireMapWitness {
    WireMapWitness {
        phis: w.phis.iter().map(|m| wire_matrix(m, real)).collect(),
        psi: wire_matrix(&w.psi, real),
    }
}

fn wire_map_congruence(w: &MapCongruenceWitness, real: bool) -> WireMapCongruence {
    WireMapCongruence { phi: wire_matrix(&w.phi, real), psi: wire_matrix(&w.psi, real) }
}

fn wire_generator(g: &GeneratorInfo) -> WireGenerator {
    let c = &g.config;
    WireGenerator {
        rng: g.rng.clone(),
        kind: g.kind.clone(),
        seed: c.seed,
        n: c.n,
        t: c.t,
        k: c.k,
        symmetry: c.symmetry.name().into(),
        condition_cap: c.condition_cap,
        selfadjoint_tries: c.selfadjoint_tries,
        negate: c.negate,
        summands: c.summands,
        p: c.p,
        exponents: c.exponents.clone(),
    }
}

fn wire_payload(p: &Payload, real: bool) -> WirePayload {
    match p {
        Payload::Matrix(m) => WirePayload::Matrix(wire_matrix(m, real)),
        Payload::Tuple(a) => WirePayload::Tuple(wire_tuple(a, real)),
        Payload::KMap(f) => WirePayload::KMap(wire_kmap(f, real)),
        Payload::EquivWitness(w) => WirePayload::EquivWitness(wire_equiv(w, real)),
        Payload::CongruenceWitness(w) => WirePayload::CongruenceWitness(wire_congruence(w, real)),
        Payload::MapWitness(w) => WirePayload::MapWitness(wire_map_witness(w, real)),
        Payload::MapCongruenceWitness(w) => WirePayload::MapCongruenceWitness(wire_map_congruence(w, real)),
        Payload::InstanceBundle(b) => WirePayload::InstanceBundle(Box::new(WireBundle {
            generator: b.generator.as_ref().map(wire_generator),
            a: b.a.as_ref().map(|x| wire_tuple(x, real)),
            b: b.b.as_ref().map(|x| wire_tuple(x, real)),
            c: b.c.as_ref().map(|x| wire_tuple(x, real)),
            f: b.f.as_ref().map(|x| wire_kmap(x, real)),
            g: b.g.as_ref().map(|x| wire_kmap(x, real)),
            equiv_witness: b.equiv_witness.as_ref().map(|x| wire_equiv(x, real)),
            congruence_witness: b.congruence_witness.as_ref().map(|x| wire_congruence(x, real)),
            map_witness: b.map_witness.as_ref().map(|x| wire_map_witness(x, real)),
            map_congruence_witness: b.map_congruence_witness.as_ref().map(|x| wire_map_congruence(x, real)),
            sign_split: b.sign_split.map(|s| WireSplit { p: s.p, q: s.q }),
            w1: b.w1.as_ref().map(|x| wire_congruence(x, real)),
            w2: b.w2.as_ref().map(|x| wire_congruence(x, real)),
        })),
        Payload::RootResult(r) => WirePayload::RootResult(Box::new(WireRoot {
            m: r.m,
            inverse: r.inverse,
            f: wire_matrix(&r.f, real),
            // Roots of real matrices may be complex; keep the pairs.
            coefficients: wire_entries(&r.coefficients, false),
            eigenvalues: wire_entries(&r.eigenvalues, false),
            branch_assignment: wire_entries(&r.branch_assignment, false),
            chain_bound: r.chain_bound.clone(),
            residual: r.residual,
            margin: r.margin,
        })),
    }
}

/// Nesting depth of arrays, or `None` if an object occurs inside.
fn array_depth(v: &serde_json::Value) -> Option<usize> {
    match v {
        serde_json::Value::Array(xs) => {
            let mut d = 0;
            for x in xs {
                d = d.max(array_depth(x)?);
            }
            Some(d + 1)
        }
        serde_json::Value::Object(_) => None,
        _ => Some(0),
    }
}

/// Objects one key per line; arrays nested at most two deep (a matrix row,
/// a coordinate list) stay on one line.
fn layout(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                layout(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(xs) if !xs.is_empty() && !array_depth(v).is_some_and(|d| d <= 2) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                layout(x, indent + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(xs) => {
            out.push('[');
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                layout(x, indent, out);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

// ---- parsing ----

pub fn parse_symmetry(name: &str) -> Option<SymmetryTag> {
    match name {
        "none" => Some(SymmetryTag::None),
        "symmetric" => Some(SymmetryTag::Symmetric),
        "skew" => Some(SymmetryTag::Skew),
        "hermitian" => Some(SymmetryTag::Hermitian),
        _ => None,
    }
}

fn parse_map_symmetry(name: &str) -> Option<MapSymmetry> {
    match name {
        "none" => Some(MapSymmetry::None),
        "symmetric" => Some(MapSymmetry::Symmetric),
        "skew" => Some(MapSymmetry::Skew),
        _ => None,
    }
}

struct Ctx {
    real: bool,
    tol: Tolerance,
}

impl Ctx {
    fn entry(&self, e: WireEntry, what: &str, real: bool) -> Result<Scalar> {
        match e {
            WireEntry::Real(x) => Ok(Scalar::new(x, 0.0)),
            WireEntry::Pair([re, im]) if real => {
                if im != 0.0 {
                    Err(FormatError::NotReal { what: what.into() })
                } else {
                    Ok(Scalar::new(re, 0.0))
                }
            }
            WireEntry::Pair([re, im]) => Ok(Scalar::new(re, im)),
        }
    }

    fn entries(&self, es: Vec<WireEntry>, what: &str, real: bool) -> Result<Vec<Scalar>> {
        es.into_iter().map(|e| self.entry(e, what, real)).collect()
    }

    fn matrix(&self, w: WireMatrix, what: &str) -> Result<Mat> {
        if w.entries.len() != w.rows {
            return Err(FormatError::Layout(format!(
                "{what}: {} rows declared, {} present",
                w.rows,
                w.entries.len()
            )));
        }
        let mut data = Vec::with_capacity(w.rows * w.cols);
        for (i, row) in w.entries.into_iter().enumerate() {
            if row.len() != w.cols {
                return Err(FormatError::Layout(format!(
                    "{what}: row {i} has {} entries, expected {}",
                    row.len(),
                    w.cols
                )));
            }
            data.extend(self.entries(row, what, self.real)?);
        }
        Mat::new(w.rows, w.cols, data).map_err(|e| core_err(what, e))
    }

    fn matrices(&self, ws: Vec<WireMatrix>, what: &str) -> Result<Vec<Mat>> {
        ws.into_iter()
            .enumerate()
            .map(|(i, m)| self.matrix(m, &format!("{what}[{i}]")))
            .collect()
    }

    fn tuple(&self, w: WireTuple, what: &str) -> Result<MatTuple> {
        let tag = parse_symmetry(&w.tag)
            .ok_or_else(|| FormatError::Layout(format!("{what}: unknown tag {:?}", w.tag)))?;
        let mats = self.matrices(w.mats, what)?;
        MatTuple::new(w.n, mats, tag, &self.tol).map_err(|e| core_err(what, e))
    }

    fn kmap(&self, w: WireKMap, what: &str) -> Result<KMap> {
        let tag = parse_map_symmetry(&w.tag)
            .ok_or_else(|| FormatError::Layout(format!("{what}: unknown tag {:?}", w.tag)))?;
        let coords = self.entries(w.coords, what, self.real)?;
        KMap::new(w.n, w.k, w.t, coords, tag, &self.tol).map_err(|e| core_err(what, e))
    }

    fn equiv(&self, w: WireEquiv, what: &str) -> Result<EquivWitness> {
        Ok(EquivWitness {
            p: self.matrix(w.p, &format!("{what}.p"))?,
            r: self.matrix(w.r, &format!("{what}.r"))?,
        })
    }

    fn congruence(&self, w: WireCongruence, what: &str) -> Result<CongruenceWitness> {
        Ok(CongruenceWitness { s: self.matrix(w.s, &format!("{what}.s"))? })
    }

    fn map_witness(&self, w: WireMapWitness, what: &str) -> Result<MapEquivWitness> {
        Ok(MapEquivWitness {
            phis: self.matrices(w.phis, &format!("{what}.phis"))?,
            psi: self.matrix(w.psi, &format!("{what}.psi"))?,
        })
    }

    fn map_congruence(&self, w: WireMapCongruence, what: &str) -> Result<MapCongruenceWitness> {
        Ok(MapCongruenceWitness {
            phi: self.matrix(w.phi, &format!("{what}.phi"))?,
            psi: self.matrix(w.psi, &format!("{what}.psi"))?,
        })
    }

    fn generator(&self, w: WireGenerator) -> Result<GeneratorInfo> {
        let symmetry = parse_symmetry(&w.symmetry)
            .ok_or_else(|| FormatError::Layout(format!("generator: unknown tag {:?}", w.symmetry)))?;
        let config = GenConfig {
            seed: w.seed,
            n: w.n,
            t: w.t,
            k: w.k,
            symmetry,
            mode: if self.real { Mode::Real } else { Mode::Complex },
            condition_cap: w.condition_cap,
            selfadjoint_tries: w.selfadjoint_tries,
            p: w.p,
            negate: w.negate,
            exponents: w.exponents,
            summands: w.summands,
        };
        Ok(GeneratorInfo { rng: w.rng, kind: w.kind, config })
    }

    fn bundle(&self, w: WireBundle) -> Result<InstanceBundle> {
        fn opt<W, T>(x: Option<W>, f: impl FnOnce(W) -> Result<T>) -> Result<Option<T>> {
            x.map(f).transpose()
        }
        Ok(InstanceBundle {
            generator: opt(w.generator, |g| self.generator(g))?,
            a: opt(w.a, |x| self.tuple(x, "a"))?,
            b: opt(w.b, |x| self.tuple(x, "b"))?,
            c: opt(w.c, |x| self.tuple(x, "c"))?,
            f: opt(w.f, |x| self.kmap(x, "f"))?,
            g: opt(w.g, |x| self.kmap(x, "g"))?,
            equiv_witness: opt(w.equiv_witness, |x| self.equiv(x, "equiv_witness"))?,
            congruence_witness: opt(w.congruence_witness, |x| self.congruence(x, "congruence_witness"))?,
            map_witness: opt(w.map_witness, |x| self.map_witness(x, "map_witness"))?,
            map_congruence_witness: opt(w.map_congruence_witness, |x| {
                self.map_congruence(x, "map_congruence_witness")
            })?,
            sign_split: w.sign_split.map(|s| SignSplit { p: s.p, q: s.q }),
            w1: opt(w.w1, |x| self.congruence(x, "w1"))?,
            w2: opt(w.w2, |x| self.congruence(x, "w2"))?,
        })
    }

    fn payload(&self, w: WirePayload) -> Result<Payload> {
        Ok(match w {
            WirePayload::Matrix(m) => Payload::Matrix(self.matrix(m, "matrix")?),
            WirePayload::Tuple(t) => Payload::Tuple(self.tuple(t, "tuple")?),
            WirePayload::KMap(f) => Payload::KMap(self.kmap(f, "kmap")?),
            WirePayload::EquivWitness(w) => Payload::EquivWitness(self.equiv(w, "equiv_witness")?),
            WirePayload::CongruenceWitness(w) => {
                Payload::CongruenceWitness(self.congruence(w, "congruence_witness")?)
            }
            WirePayload::MapWitness(w) => Payload::MapWitness(self.map_witness(w, "map_witness")?),
            WirePayload::MapCongruenceWitness(w) => {
                Payload::MapCongruenceWitness(self.map_congruence(w, "map_congruence_witness")?)
            }
            WirePayload::InstanceBundle(b) => Payload::InstanceBundle(Box::new(self.bundle(*b)?)),
            WirePayload::RootResult(r) => {
                let r = *r;
                Payload::RootResult(Box::new(RootDocument {
                    m: r.m,
                    inverse: r.inverse,
                    f: self.matrix(r.f, "root_result.f")?,
                    coefficients: self.entries(r.coefficients, "coefficients", false)?,
                    eigenvalues: self.entries(r.eigenvalues, "eigenvalues", false)?,
                    branch_assignment: self.entries(r.branch_assignment, "branch_assignment", false)?,
                    chain_bound: r.chain_bound,
                    residual: r.residual,
                    margin: r.margin,
                }))
            }
        })
    }
}
