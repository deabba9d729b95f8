use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use congforge_core::generate::{
    gen_map, gen_tuple, make_map_instance, make_plain_map_instance, make_sign_split_instance,
    make_symmetric_equiv_instance, GenConfig, Mode, RNG_ID,
};
use congforge_core::multilinear::{
    check_map_congruence, check_map_equivalence, check_map_symmetric_equivalence,
    symmetrize_bilinear_via_tuple, symmetrize_map_witness_traced, MapCongruenceWitness,
};
use congforge_core::roots::{poly_inverse_root, poly_root};
use congforge_core::tuple::{
    apply_weak_mix, check_congruence, check_sign_split_instance, check_star_congruence,
    check_star_symmetric_equivalence, check_symmetric_equivalence, symmetrize_witness_traced,
};
use congforge_core::{BranchRule, Error as CoreError, ResidualReport, Tolerance};
use serde::Serialize;

use crate::format::{parse_symmetry, Document, FormatError, GeneratorInfo, InstanceBundle, Payload, RootDocument};
use crate::report::{render_table, report_json};
use crate::{EXIT_BRANCH, EXIT_PASS, EXIT_RESIDUAL, EXIT_STRUCTURAL};

#[derive(Parser, Debug)]
#[command(name = "congforge", version, about = "Congruence witnesses for matrix tuples and multilinear maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a seeded ground-truth instance bundle.
    Gen(GenArgs),
    /// Check a relation on one or more instance bundles.
    Verify(VerifyArgs),
    /// Turn a two-sided (or per-slot) witness into a congruence witness.
    Symmetrize(SymmetrizeArgs),
    /// Polynomial m-th root (or inverse root) of a matrix.
    Root(RootArgs),
    /// Mix the matrices of a tuple: B'_i = Σ_j Λ_ij B_j.
    Mix(MixArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// Symmetric-equivalence instance for matrix tuples.
    Tuple,
    /// Symmetric-equivalence instance for k-linear maps.
    Map,
    /// Plain-equivalence instance for k-linear maps.
    MapPlain,
    SignSplit,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ModeArg {
    Complex,
    Real,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    /// Falls back to CONGFORGE_SEED.
    #[arg(long, env = "CONGFORGE_SEED")]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// none | symmetric | skew | hermitian
    #[arg(long, default_value = "none")]
    pub sym: String,
    #[arg(long, value_enum, default_value = "complex")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1e3)]
    pub cap: f64,
    #[arg(long, default_value_t = 32)]
    pub tries: usize,
    /// Emit the obstruction variant (R → −R, B → −B).
    #[arg(long)]
    pub negate: bool,
    /// Positive block size of a sign split.
    #[arg(long)]
    pub p: Option<usize>,
    /// Per-slot exponents summing to zero, e.g. 1,1,-2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub exponents: Option<Vec<i32>>,
    #[arg(long, default_value_t = 1)]
    pub summands: usize,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    SymEquiv,
    StarSymEquiv,
    Congruence,
    StarCongruence,
    MapEquiv,
    MapSymEquiv,
    MapCongruence,
    SignSplit,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, value_enum)]
    pub relation: Relation,
    /// Witness document overriding the one stored in each bundle.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Merge the slot bijections one at a time.
    Direct,
    /// Bilinear maps only: go through the matrix-tuple construction.
    Tuple,
}

#[derive(Args, Debug)]
pub struct SymmetrizeArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// principal | real | explicit:k1,k2,… (default: real for real-mode input)
    #[arg(long)]
    pub branch: Option<String>,
    /// Residual tolerance override.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "direct")]
    pub route: Route,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct RootArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub inverse: bool,
    #[arg(long)]
    pub branch: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct MixArgs {
    pub tuple: PathBuf,
    pub lambda: PathBuf,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn structural(message: impl Into<String>) -> Self {
        Failure { code: EXIT_STRUCTURAL, message: message.into() }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure { code: exit_code(&e), message: e.to_string() }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::structural(e.to_string())
    }
}

/// 3 for a branch obstruction, 1 for a result that misses its residual
/// bound, 2 for everything structural.
pub fn exit_code(e: &CoreError) -> u8 {
    match e {
        CoreError::BranchConflict { .. } => EXIT_BRANCH,
        CoreError::ResidualTooLarge { .. } => EXIT_RESIDUAL,
        _ => EXIT_STRUCTURAL,
    }
}

type Outcome = Result<u8, Failure>;

pub fn run(cli: Cli) -> u8 {
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Symmetrize(a) => cmd_symmetrize(a),
        Command::Root(a) => cmd_root(a),
        Command::Mix(a) => cmd_mix(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("congforge: error: {}", f.message);
            f.code
        }
    }
}

fn read_doc(path: &Path) -> Result<Document, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::structural(format!("{}: {e}", path.display())))?;
    Document::parse(&text).map_err(|e| Failure::structural(format!("{}: {e}", path.display())))
}

fn write_doc(path: Option<&Path>, doc: &Document) -> Result<(), Failure> {
    let text = doc.print();
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::structural(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Failure::structural(format!("stdout: {e}")))
        }
    }
}

fn to_mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Complex => Mode::Complex,
        ModeArg::Real => Mode::Real,
    }
}

fn parse_branch(spec: Option<&str>, mode: Mode) -> Result<BranchRule, Failure> {
    match spec {
        None if mode == Mode::Real => Ok(BranchRule::RealPreferring),
        None | Some("principal") => Ok(BranchRule::Principal),
        Some("real") => Ok(BranchRule::RealPreferring),
        Some(s) => {
            let list = s
                .strip_prefix("explicit:")
                .ok_or_else(|| Failure::structural(format!("unknown branch rule {s:?}")))?;
            let ks = list
                .split(',')
                .filter(|x| !x.is_empty())
                .map(|x| x.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::structural(format!("branch list {list:?}: {e}")))?;
            Ok(BranchRule::Explicit(ks))
        }
    }
}

fn tolerance(doc: &Document, residual: Option<f64>) -> Result<Tolerance, Failure> {
    let mut tol = doc.tolerance();
    if let Some(r) = residual {
        tol.residual_tol = r;
        tol.validate()?;
    }
    Ok(tol)
}

fn print_report(rep: &ResidualReport, json: bool, to_stderr: bool) {
    let text = if json {
        serde_json::to_string_pretty(&report_json(rep)).expect("reports serialize") + "\n"
    } else {
        render_table(rep)
    };
    if to_stderr {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
}

fn generator_config(a: &GenArgs, seed: u64) -> Result<GenConfig, Failure> {
    let symmetry = parse_symmetry(&a.sym)
        .ok_or_else(|| Failure::structural(format!("unknown symmetry tag {:?}", a.sym)))?;
    let cfg = GenConfig {
        seed,
        n: a.n,
        t: a.t,
        k: a.k,
        symmetry,
        mode: to_mode(a.mode),
        condition_cap: a.cap,
        selfadjoint_tries: a.tries,
        p: a.p,
        negate: a.negate,
        exponents: a.exponents.clone(),
        summands: a.summands,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Instance bundle for a generator configuration; the CLI and the fixture
/// tests share this.
pub fn generate_bundle(kind: GenKind, cfg: &GenConfig) -> Result<InstanceBundle, CoreError> {
    let name = kind.to_possible_value().expect("no skipped variants").get_name().to_string();
    let mut bundle = InstanceBundle {
        generator: Some(GeneratorInfo { rng: RNG_ID.into(), kind: name, config: cfg.clone() }),
        ..Default::default()
    };
    match kind {
        GenKind::Tuple => {
            let a = gen_tuple(cfg)?;
            let inst = make_symmetric_equiv_instance(&a, cfg)?;
            bundle.a = Some(a);
            bundle.b = Some(inst.b);
            bundle.equiv_witness = Some(inst.witness);
            bundle.congruence_witness = inst.s_true.map(|s| congforge_core::tuple::CongruenceWitness { s });
        }
        GenKind::Map => {
            let f = gen_map(cfg)?;
            let inst = make_map_instance(&f, cfg)?;
            bundle.f = Some(f);
            bundle.g = Some(inst.g);
            bundle.map_witness = Some(inst.witness);
            bundle.map_congruence_witness = Some(MapCongruenceWitness { phi: inst.phi, psi: inst.psi });
        }
        GenKind::MapPlain => {
            let f = gen_map(cfg)?;
            let (g, w) = make_plain_map_instance(&f, cfg)?;
            bundle.f = Some(f);
            bundle.g = Some(g);
            bundle.map_witness = Some(w);
        }
        GenKind::SignSplit => {
            let inst = make_sign_split_instance(cfg)?;
            bundle.a = Some(inst.a);
            bundle.b = Some(inst.b);
            bundle.c = Some(inst.c);
            bundle.sign_split = Some(inst.split);
            bundle.w1 = Some(inst.w1);
            bundle.w2 = Some(inst.w2);
        }
    }
    Ok(bundle)
}

fn cmd_gen(a: GenArgs) -> Outcome {
    let seed = a
        .seed
        .ok_or_else(|| Failure::structural("missing --seed (or CONGFORGE_SEED)"))?;
    let cfg = generator_config(&a, seed)?;
    let bundle = generate_bundle(a.kind, &cfg)?;
    eprintln!("congforge: seed {seed}");
    let doc = Document::new(cfg.mode, Payload::InstanceBundle(Box::new(bundle)));
    write_doc(a.out.as_deref(), &doc)?;
    Ok(EXIT_PASS)
}

fn missing(what: &str, relation: Relation) -> Failure {
    let name = relation.to_possible_value().expect("no skipped variants").get_name().to_string();
    Failure::structural(format!("bundle has no {what}, which {name} needs"))
}

fn overlay_witness(bundle: &mut InstanceBundle, w: &Document) -> Result<(), Failure> {
    match &w.payload {
        Payload::EquivWitness(x) => bundle.equiv_witness = Some(x.clone()),
        Payload::CongruenceWitness(x) => bundle.congruence_witness = Some(x.clone()),
        Payload::MapWitness(x) => bundle.map_witness = Some(x.clone()),
        Payload::MapCongruenceWitness(x) => bundle.map_congruence_witness = Some(x.clone()),
        _ => return Err(Failure::structural(format!("{} is not a witness document", w.kind()))),
    }
    Ok(())
}

fn bundle_of(doc: Document) -> Result<(InstanceBundle, Tolerance, Mode), Failure> {
    let tol = doc.tolerance();
    let mode = doc.mode;
    match doc.payload {
        Payload::InstanceBundle(b) => Ok((*b, tol, mode)),
        p => Err(Failure::structural(format!("expected an instance_bundle, found {}", p.kind()))),
    }
}

fn req<'a, T>(x: &'a Option<T>, what: &str, rel: Relation) -> Result<&'a T, Failure> {
    x.as_ref().ok_or_else(|| missing(what, rel))
}

pub fn verify_bundle(b: &InstanceBundle, rel: Relation, tol: &Tolerance) -> Result<ResidualReport, Failure> {
    let rep = match rel {
        Relation::SymEquiv | Relation::StarSymEquiv => {
            let (a, bt, w) = (req(&b.a, "a", rel)?, req(&b.b, "b", rel)?, req(&b.equiv_witness, "equiv_witness", rel)?);
            if rel == Relation::SymEquiv {
                check_symmetric_equivalence(a, bt, w, tol)?
            } else {
                check_star_symmetric_equivalence(a, bt, w, tol)?
            }
        }
        Relation::Congruence | Relation::StarCongruence => {
            let (a, bt) = (req(&b.a, "a", rel)?, req(&b.b, "b", rel)?);
            let w = req(&b.congruence_witness, "congruence_witness", rel)?;
            if rel == Relation::Congruence {
                check_congruence(a, bt, w, tol)?
            } else {
                check_star_congruence(a, bt, w, tol)?
            }
        }
        Relation::MapEquiv | Relation::MapSymEquiv => {
            let (f, g, w) = (req(&b.f, "f", rel)?, req(&b.g, "g", rel)?, req(&b.map_witness, "map_witness", rel)?);
            if rel == Relation::MapEquiv {
                check_map_equivalence(f, g, w, tol)?
            } else {
                check_map_symmetric_equivalence(f, g, w, tol)?
            }
        }
        Relation::MapCongruence => {
            let (f, g) = (req(&b.f, "f", rel)?, req(&b.g, "g", rel)?);
            let w = req(&b.map_congruence_witness, "map_congruence_witness", rel)?;
            check_map_congruence(f, g, w, tol)?
        }
        Relation::SignSplit => check_sign_split_instance(
            req(&b.a, "a", rel)?,
            req(&b.b, "b", rel)?,
            req(&b.c, "c", rel)?,
            *req(&b.sign_split, "sign_split", rel)?,
            req(&b.w1, "w1", rel)?,
            req(&b.w2, "w2", rel)?,
            tol,
        )?,
    };
    Ok(rep)
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    file: String,
    exit: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<crate::report::ReportJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    let overlay = a.witness.as_deref().map(read_doc).transpose()?;
    let verify_one = |path: &Path| -> Result<ResidualReport, Failure> {
        let (mut bundle, tol, _) = bundle_of(read_doc(path)?)?;
        if let Some(w) = &overlay {
            overlay_witness(&mut bundle, w)?;
        }
        verify_bundle(&bundle, a.relation, &tol)
    };

    let results: Vec<Mutex<Option<Result<ResidualReport, Failure>>>> =
        a.files.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = a.jobs.clamp(1, a.files.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = a.files.get(i) else { break };
                let r = verify_one(path);
                *results[i].lock().expect("no poisoned slots") = Some(r);
            });
        }
    });
    let results: Vec<Result<ResidualReport, Failure>> = results
        .into_iter()
        .map(|m| m.into_inner().expect("no poisoned slots").expect("every file visited"))
        .collect();

    let code_of = |r: &Result<ResidualReport, Failure>| match r {
        Ok(rep) if rep.passed => EXIT_PASS,
        Ok(_) => EXIT_RESIDUAL,
        Err(f) => f.code,
    };
    let worst = results.iter().map(code_of).max().unwrap_or(EXIT_PASS);
    if a.json {
        let docs: Vec<VerifyJson> = a
            .files
            .iter()
            .zip(&results)
            .map(|(p, r)| VerifyJson {
                file: p.display().to_string(),
                exit: code_of(r),
                report: r.as_ref().ok().map(report_json),
                error: r.as_ref().err().map(|f| f.message.as_str()),
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&docs).expect("reports serialize"));
    } else {
        for (p, r) in a.files.iter().zip(&results) {
            println!("file:      {}", p.display());
            match r {
                Ok(rep) => {
                    print!("{}", render_table(rep));
                    let failing: Vec<&str> = rep.failures().map(|e| e.label.as_str()).collect();
                    if !failing.is_empty() {
                        println!("failing:   {}", failing.join(", "));
                    }
                }
                Err(f) => println!("error:     {}", f.message),
            }
        }
    }
    Ok(worst)
}

fn branch_conflict(e: &CoreError) {
    if let CoreError::BranchConflict { eigenvalues } = e {
        let list: Vec<String> = eigenvalues.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
        eprintln!("congforge: obstructing eigenvalues: [{}]", list.join(", "));
    }
}

fn cmd_symmetrize(a: SymmetrizeArgs) -> Outcome {
    let doc = read_doc(&a.file)?;
    let tol = tolerance(&doc, a.tol)?;
    let (mut bundle, _, mode) = bundle_of(doc)?;
    if let Some(p) = &a.witness {
        overlay_witness(&mut bundle, &read_doc(p)?)?;
    }
    let rule = parse_branch(a.branch.as_deref(), mode)?;
    let report_to_stderr = a.out.is_none();

    let run = || -> Result<(Payload, ResidualReport), CoreError> {
        match (&bundle.f, &bundle.g, &bundle.map_witness) {
            (Some(f), Some(g), Some(w)) => {
                let witness = match a.route {
                    Route::Direct => symmetrize_map_witness_traced(f, g, w, &tol, &rule)?.witness,
                    Route::Tuple => symmetrize_bilinear_via_tuple(f, g, w, &tol, &rule)?,
                };
                let rep = check_map_congruence(f, g, &witness, &tol)?;
                Ok((Payload::MapCongruenceWitness(witness), rep))
            }
            _ => match (&bundle.a, &bundle.b, &bundle.equiv_witness) {
                (Some(at), Some(bt), Some(w)) => {
                    let out = symmetrize_witness_traced(at, bt, w, &tol, &rule)?;
                    // Cluster margin of R⁻¹P, for instances near the clustering threshold.
                    if out.root.margin.is_finite() {
                        eprintln!("congforge: cluster margin {:.3e}", out.root.margin);
                    }
                    Ok((Payload::CongruenceWitness(out.witness), out.report))
                }
                _ => Err(CoreError::InvalidArgument {
                    detail: "bundle needs (f, g, map_witness) or (a, b, equiv_witness)".into(),
                }),
            },
        }
    };
    let (payload, rep) = match run() {
        Ok(x) => x,
        Err(e) => {
            branch_conflict(&e);
            return Err(e.into());
        }
    };
    let mut out = Document::new(mode, payload);
    out.tolerances = a.tol.map(|_| tol);
    write_doc(a.out.as_deref(), &out)?;
    print_report(&rep, a.json, report_to_stderr);
    Ok(if rep.passed { EXIT_PASS } else { EXIT_RESIDUAL })
}

fn cmd_root(a: RootArgs) -> Outcome {
    let doc = read_doc(&a.file)?;
    let tol = tolerance(&doc, a.tol)?;
    let mode = doc.mode;
    let m = match doc.payload {
        Payload::Matrix(m) => m,
        p => return Err(Failure::structural(format!("expected a matrix, found {}", p.kind()))),
    };
    let rule = parse_branch(a.branch.as_deref(), mode)?;
    let res = if a.inverse {
        poly_inverse_root(&m, a.m, &tol, &rule)
    } else {
        poly_root(&m, a.m, &tol, &rule)
    };
    let res = match res {
        Ok(r) => r,
        Err(e) => {
            branch_conflict(&e);
            return Err(e.into());
        }
    };
    let root = RootDocument::from_result(a.m, a.inverse, &res);
    let summary = RootSummary {
        coefficients: root.coefficients.iter().map(|z| [z.re, z.im]).collect(),
        branch_assignment: root.branch_assignment.iter().map(|z| [z.re, z.im]).collect(),
        chain_bound: &root.chain_bound,
        residual: root.residual,
        margin: root.margin,
    };
    let out = Document::new(mode, Payload::RootResult(Box::new(root.clone())));
    write_doc(a.out.as_deref(), &out)?;
    let text = if a.json {
        serde_json::to_string_pretty(&summary).expect("summaries serialize") + "\n"
    } else {
        let coeffs: Vec<String> = summary.coefficients.iter().map(|[re, im]| format!("{re}{im:+}i")).collect();
        let margin = summary.margin.map_or("n/a".to_string(), |m| format!("{m:.3e}"));
        format!(
            "coefficients: [{}]\nchain bound:  {:?}\nresidual:     {:.3e}\nmargin:       {margin}\n",
            coeffs.join(", "),
            summary.chain_bound,
            summary.residual
        )
    };
    if a.out.is_none() {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct RootSummary<'a> {
    coefficients: Vec<[f64; 2]>,
    branch_assignment: Vec<[f64; 2]>,
    chain_bound: &'a [usize],
    residual: f64,
    margin: Option<f64>,
}

fn cmd_mix(a: MixArgs) -> Outcome {
    let tdoc = read_doc(&a.tuple)?;
    let ldoc = read_doc(&a.lambda)?;
    let tol = tdoc.tolerance();
    let mode = tdoc.mode;
    let b = match tdoc.payload {
        Payload::Tuple(t) => t,
        p => return Err(Failure::structural(format!("expected a tuple, found {}", p.kind()))),
    };
    let lambda = match ldoc.payload {
        Payload::Matrix(m) => m,
        p => return Err(Failure::structural(format!("expected a matrix, found {}", p.kind()))),
    };
    let mixed = apply_weak_mix(&b, &lambda, &tol)?;
    let mode = if mode == Mode::Real && ldoc.mode == Mode::Complex && !lambda.is_real_within(0.0) {
        Mode::Complex
    } else {
        mode
    };
    write_doc(a.out.as_deref(), &Document::new(mode, Payload::Tuple(mixed)))?;
    Ok(EXIT_PASS)
}
