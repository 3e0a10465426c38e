//! Batch front end. Every run prints one JSON document on stdout; diagnostics
//! go to stderr. Exit 0: ran and all asserted checks passed. Exit 1: ran and
//! some check failed. Exit 2: usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use tnp::affinize::affinization_equivalence_report;
use tnp::algcore::{check_axiom, check_axiom_windowed, check_identity, unit_vector, CheckReport, Status};
use tnp::catalog::{self, catalog_get};
use tnp::constructions::{self as cons, ConstructionResult, Twist};
use tnp::json::{
    algebra_from_str, algebra_to_json, check_report_to_json, field_to_json, matrix_to_json, op_to_json,
    subspace_to_json,
};
use tnp::linsolve::{self, AnnKind, LinearMapSpace, SimpleMethod, Subspace, DEFAULT_SEED};
use tnp::search;
use tnp::{Algebra, AxiomId, Error, Field, IdentityId, OpName, Scalar};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "tnp", version, about = "Exact checks and constructions for transposed Novikov-Poisson algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Worker threads for search and simplicity testing.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Seed for randomized modes.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an axiom system on all basis tuples.
    Check {
        file: PathBuf,
        #[arg(long)]
        axiom: String,
    },
    /// Check derived identities (all applicable ones by default).
    Identities {
        file: PathBuf,
        #[arg(long = "identity")]
        identity: Vec<String>,
        /// Element for HOM_NOVIKOV: a basis label or comma-separated coordinates.
        #[arg(long)]
        p: Option<String>,
    },
    /// Derivation space, or δ-derivation space with --delta.
    Derivations {
        file: PathBuf,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        op: Option<String>,
    },
    /// Centroid of one operation, or of all present operations.
    Centroid {
        file: PathBuf,
        #[arg(long)]
        op: Option<String>,
    },
    /// Annihilators and A∗A.
    Ann {
        file: PathBuf,
        #[arg(long, default_value = "circ")]
        op: String,
    },
    /// Derived, left-iterated and lower series.
    Solvable {
        file: PathBuf,
        #[arg(long, default_value = "circ")]
        op: String,
    },
    /// Simplicity test.
    Simple {
        file: PathBuf,
        #[arg(long)]
        op: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Build a new algebra and check its promised axioms.
    Construct(ConstructArgs),
    /// Compare TNP on the base with transposed Poisson on the windowed affinization.
    AffinizeCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        window: usize,
    },
    /// Compatible dot products for a Novikov algebra.
    SearchCompatible {
        file: PathBuf,
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        max: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Built-in algebras.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Check the 2-dimensional classification table.
    VerifyClassification {
        #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5])]
        primes: Vec<u64>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List,
    Show {
        name: String,
        #[arg(long)]
        params: Option<String>,
        /// `rational` or a prime.
        #[arg(long)]
        field: Option<String>,
    },
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long)]
    kind: String,
    /// Input algebra; tensor kinds take a second one.
    #[arg(required = true, num_args = 1..=2)]
    files: Vec<PathBuf>,
    #[arg(long)]
    u: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    w: Option<String>,
    /// Which basis element of the computed map space to use.
    #[arg(long, default_value_t = 0)]
    index: usize,
}

struct Input {
    path: String,
    digest: String,
    algebra: Algebra,
}

/// A failure that maps to exit 2.
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type Out<T> = std::result::Result<T, UsageError>;

struct Report {
    body: Map<String, Value>,
    inputs: Vec<Value>,
    seed: Option<u64>,
    pass: Option<bool>,
}

impl Report {
    fn new() -> Report {
        Report { body: Map::new(), inputs: Vec::new(), seed: None, pass: None }
    }

    fn set(&mut self, k: &str, v: Value) {
        self.body.insert(k.to_string(), v);
    }

    fn input(&mut self, i: &Input) {
        self.inputs.push(json!({"path": i.path, "sha256": i.digest}));
    }
}

fn load(path: &Path) -> Out<Input> {
    let bytes = std::fs::read(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| UsageError(format!("{} is not UTF-8", path.display())))?;
    let algebra = algebra_from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let digest = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    Ok(Input { path: path.display().to_string(), digest, algebra })
}

fn op_name(s: &str) -> Out<OpName> {
    Ok(s.parse::<OpName>()?)
}

fn present_ops(a: &Algebra) -> Vec<OpName> {
    [OpName::Dot, OpName::Circ].into_iter().filter(|&o| a.op(o).is_ok()).collect()
}

/// A basis label or comma-separated coordinates.
fn element(a: &Algebra, s: &str) -> Out<Vec<Scalar>> {
    if let Some(i) = a.label_index(s) {
        return Ok(unit_vector(a.field(), a.dim(), i));
    }
    let coords: Vec<Scalar> = s.split(',').map(|c| a.field().parse(c.trim())).collect::<Result<_, _>>()?;
    if coords.len() != a.dim() {
        return Err(UsageError(format!("{s:?} is neither a basis label nor {} coordinates", a.dim())));
    }
    Ok(coords)
}

/// A basis label (as a vector) or a scalar.
fn twist(a: &Algebra, s: &str) -> Out<Twist> {
    if a.label_index(s).is_some() || s.contains(',') {
        return Ok(Twist::Vector(element(a, s)?));
    }
    Ok(Twist::Scalar(a.field().parse(s)?))
}

fn space_json(s: &LinearMapSpace) -> Value {
    json!({"dim": s.dim(), "basis": s.matrices().iter().map(matrix_to_json).collect::<Vec<_>>()})
}

fn sub_json(s: &Subspace) -> Value {
    json!({"dim": s.dim(), "basis": subspace_to_json(s)})
}

fn pick(space: &LinearMapSpace, index: usize, what: &str) -> Out<tnp::Matrix> {
    let ms = space.matrices();
    ms.into_iter().nth(index).ok_or_else(|| UsageError(format!("{what} has dimension {}, no element {index}", space.dim())))
}

fn construction_json(r: &ConstructionResult) -> Value {
    json!({
        "promise": r.promise.name(),
        "pass": r.passed(),
        "report": check_report_to_json(&r.report, Some(r.algebra.labels())),
        "algebra": algebra_to_json(&r.algebra),
    })
}

fn run_check(file: &Path, axiom: &str, rep: &mut Report) -> Out<()> {
    let input = load(file)?;
    rep.input(&input);
    let axiom: AxiomId = axiom.parse()?;
    let a = &input.algebra;
    let r = if a.is_windowed() { check_axiom_windowed(a, axiom)? } else { check_axiom(a, axiom)? };
    rep.set("windowed", json!(a.is_windowed()));
    rep.set("report", check_report_to_json(&r, Some(a.labels())));
    rep.pass = Some(r.passed());
    Ok(())
}

fn run_identities(file: &Path, ids: &[String], p: Option<&str>, rep: &mut Report) -> Out<()> {
    let input = load(file)?;
    rep.input(&input);
    let a = &input.algebra;
    let ids: Vec<IdentityId> = if ids.is_empty() {
        IdentityId::ALL.into_iter().filter(|i| *i != IdentityId::HomNovikov || p.is_some()).collect()
    } else {
        ids.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    for id in ids {
        if id.ops().iter().any(|&o| a.op(o).is_err()) {
            reports.push(CheckReport {
                id: id.name().into(),
                status: Status::NotApplicable,
                witness: None,
                note: Some("operation missing".into()),
            });
            continue;
        }
        match id {
            IdentityId::HalfId1 | IdentityId::HalfId2 => {
                let half = a.field().ratio(1, 2)?;
                let space = linsolve::delta_derivation_space(a, OpName::Circ, &half)?;
                for (k, phi) in space.matrices().iter().enumerate() {
                    let mut r = check_identity(a, id, Some(phi))?;
                    r.note = Some(format!("½-derivation basis element {k}"));
                    reports.push(r);
                }
            }
            IdentityId::HomNovikov => {
                let p = element(a, p.ok_or_else(|| UsageError("HOM_NOVIKOV needs --p".into()))?)?;
                reports.push(cons::hom_novikov_check(a, &p)?);
            }
            _ => reports.push(check_identity(a, id, None)?),
        }
    }
    rep.pass = Some(reports.iter().all(|r| r.status != Status::Fail));
    let list: Vec<Value> = reports.iter().map(|r| check_report_to_json(r, Some(a.labels()))).collect();
    rep.set("reports", Value::Array(list));
    Ok(())
}

fn run_derivations(file: &Path, delta: Option<&str>, op: Option<&str>, rep: &mut Report) -> Out<()> {
    let input = load(file)?;
    rep.input(&input);
    let a = &input.algebra;
    let space = match delta {
        Some(d) => {
            let d = a.field().parse(d)?;
            let op = op.map(op_name).transpose()?.unwrap_or(OpName::Circ);
            rep.set("delta", json!(d.to_string()));
            rep.set("op", json!(op.to_string()));
            linsolve::delta_derivation_space(a, op, &d)?
        }
        None => {
            let ops = match op {
                Some(o) => vec![op_name(o)?],
                None => present_ops(a),
            };
            rep.set("ops", json!(ops.iter().map(|o| o.to_string()).collect::<Vec<_>>()));
            linsolve::derivation_space(a, &ops)?
        }
    };
    rep.set("space", space_json(&space));
    Ok(())
}

fn run_centroid(file: &Path, op: Option<&str>, rep: &mut Report) -> Out<()> {
    let input = load(file)?;
    rep.input(&input);
    let a = &input.algebra;
    let ops = match op {
        Some(o) => vec![op_name(o)?],
        None => present_ops(a),
    };
    let mut space: Option<LinearMapSpace> = None;
    for &o in &ops {
        let s = linsolve::centroid_space(a, o)?;
        space = Some(match space {
            None => s,
            Some(t) => t.intersection(&s),
        });
    }
    let space = space.ok_or_else(|| UsageError("algebra has no operations".into()))?;
    rep.set("ops", json!(ops.iter().map(|o| o.to_string()).collect::<Vec<_>>()));
    rep.set("space", space_json(&space));
    Ok(())
}

fn run_ann(file: &Path, op: &str, rep: &mut Report) -> Out<()> {
    let input = load(file)?;
    rep.input(&input);
    let a = &input.algebra;
    let op = op_name(op)?;
    let full = Subspace::full(a.field(), a.dim());
    let sq = linsolve::square(a, op)?;
    rep.set("op", json!(op.to_string()));
    rep.set("left", sub_json(&linsolve::annihilator(a, op, AnnKind::Left, &full)?));
    rep.set("right", sub_json(&linsolve::annihilator(a, op, AnnKind::Right, &full)?));
    rep.set("two_sided", sub_json(&linsolve::center_annihilator(a, op)?));
    rep.set("square", sub_json(&sq));
    rep.set("ann_of_square", sub_json(&linsolve::annihilator(a, op, AnnKind::TwoSided, &sq)?));
    Ok(())
}

fn run_solvable(file: &Path, op: &str, rep: &mut Report) -> Out<()> {
    let input = load(file)?;
    rep.input(&input);
    let r = linsolve::solvability_report(&input.algebra, op_name(op)?)?;
    rep.set("solvable", json!(r.solvable));
    rep.set("right_nilpotent", json!(r.right_nilpotent));
    rep.set("nilpotent", json!(r.nilpotent));
    rep.set("derived_length", json!(r.derived_length));
    rep.set("right_nil_index", json!(r.right_nil_index));
    rep.set("nil_index", json!(r.nil_index));
    Ok(())
}

fn run_simple(file: &Path, op: Option<&str>, common: &Common, rep: &mut Report) -> Out<()> {
    let input = load(file)?;
    rep.input(&input);
    let a = &input.algebra;
    let ops = match op {
        Some(o) => vec![op_name(o)?],
        None => present_ops(a),
    };
    let seed = common.seed.unwrap_or(DEFAULT_SEED);
    let r = linsolve::is_simple(a, &ops, common.jobs, seed)?;
    rep.seed = r.seed;
    rep.set("simple", json!(r.simple));
    let method = match r.method {
        SimpleMethod::Exhaustive => "exhaustive",
        SimpleMethod::GeneratorSpin => "generator-spin",
    };
    rep.set("method", json!(method));
    rep.set("points_checked", json!(r.points_checked));
    rep.set("witness", r.witness.as_ref().map_or(Value::Null, sub_json));
    Ok(())
}

fn run_construct(args: &ConstructArgs, rep: &mut Report) -> Out<()> {
    let inputs: Vec<Input> = args.files.iter().map(|f| load(f)).collect::<Out<_>>()?;
    for i in &inputs {
        rep.input(i);
    }
    let two = matches!(args.kind.as_str(), "tensor" | "tensor-mixed");
    if inputs.len() != if two { 2 } else { 1 } {
        return Err(UsageError(format!("--kind {} takes {} input file(s)", args.kind, if two { 2 } else { 1 })));
    }
    let a = &inputs[0].algebra;
    let need = |v: &Option<String>, flag: &str| -> Out<String> {
        v.clone().ok_or_else(|| UsageError(format!("--kind {} needs --{flag}", args.kind)))
    };
    rep.set("kind", json!(args.kind));
    let results: Vec<(&str, ConstructionResult)> = match args.kind.as_str() {
        "commutator" => vec![("result", cons::commutator_tp(a)?)],
        "twisted" => {
            let d = pick(&linsolve::derivation_space(a, &[OpName::Dot, OpName::Circ])?, args.index, "joint derivation space")?;
            rep.set("map", matrix_to_json(&d));
            vec![("result", cons::twisted_bracket_tp(a, &d)?)]
        }
        "centroid-product" => {
            let phi = pick(&linsolve::centroid_space(a, OpName::Dot)?, args.index, "centroid of dot")?;
            rep.set("map", matrix_to_json(&phi));
            vec![("result", cons::centroid_product(a, &phi)?)]
        }
        "rdnp" => {
            let d = pick(&linsolve::derivation_space(a, &[OpName::Dot])?, args.index, "derivation space of dot")?;
            rep.set("map", matrix_to_json(&d));
            vec![("result", cons::rdnp_from_derivation(a, &d)?)]
        }
        "tensor" => vec![("result", cons::tensor_tnp(a, &inputs[1].algebra)?)],
        "tensor-mixed" => vec![("result", cons::tensor_mixed_tp(a, &inputs[1].algebra)?)],
        "deform" => {
            let p = twist(a, &need(&args.p, "p")?)?;
            let q = twist(a, &need(&args.q, "q")?)?;
            vec![("result", cons::deform_twist(a, &p, &q)?)]
        }
        "kantor" => {
            let u = element(a, &need(&args.u, "u")?)?;
            let k = cons::kantor_product(a, &u)?;
            vec![("star_comm", k.star_comm), ("star_nov", k.star_nov), ("result", k.tnp)]
        }
        "solvable-tnp" => vec![("result", cons::tnp_on_solvable(a)?)],
        "square-ann-tnp" => {
            let w = element(a, &need(&args.w, "w")?)?;
            vec![("result", cons::tnp_from_square_annihilator(a, &w)?)]
        }
        other => return Err(UsageError(format!("unknown --kind {other}"))),
    };
    rep.pass = Some(results.iter().all(|(_, r)| r.passed()));
    for (k, r) in &results {
        rep.set(k, construction_json(r));
    }
    Ok(())
}

fn run_affinize(file: &Path, window: usize, rep: &mut Report) -> Out<()> {
    let input = load(file)?;
    rep.input(&input);
    let r = affinization_equivalence_report(&input.algebra, window)?;
    rep.set("window", json!(window));
    rep.set("tnp_pass", json!(r.tnp_pass));
    rep.set("windowed_tp_pass", json!(r.windowed_tp_pass));
    rep.set("agree", json!(r.agree));
    rep.set("tnp", check_report_to_json(&r.tnp, None));
    rep.set("windowed", check_report_to_json(&r.windowed, None));
    rep.pass = Some(r.agree);
    Ok(())
}

fn run_search(file: &Path, enumerate: bool, max: Option<u64>, common: &Common, rep: &mut Report) -> Out<()> {
    let input = load(file)?;
    rep.input(&input);
    let a = &input.algebra;
    let space = search::compatible_structure_space(a)?;
    rep.set("linear_dim", json!(space.linear_dim()));
    rep.set("residual_count", json!(space.residuals.len()));
    rep.set("generators", Value::Array(space.generators.iter().map(op_to_json).collect()));
    rep.set("only_zero_certified", json!(space.certifies_only_zero()));
    if enumerate {
        let sols = search::enumerate_space(a, &space, max, common.jobs)?;
        rep.set("solution_count", json!(sols.len()));
        rep.set("solutions", Value::Array(sols.iter().map(op_to_json).collect()));
    }
    Ok(())
}

fn parse_field(s: &str) -> Out<Field> {
    match s {
        "rational" | "Q" | "q" => Ok(Field::Rational),
        p => {
            let p: u64 = p.parse().map_err(|_| UsageError(format!("--field must be rational or a prime, got {p:?}")))?;
            Ok(Field::prime(p)?)
        }
    }
}

fn run_catalog(action: &CatalogAction, rep: &mut Report) -> Out<()> {
    match action {
        CatalogAction::List => {
            let entries: Vec<Value> = catalog::entries()
                .iter()
                .map(|e| {
                    let slots: Vec<Value> = e
                        .slots
                        .iter()
                        .map(|s| {
                            let kind = match s.kind {
                                catalog::SlotKind::Scalar => "scalar",
                                catalog::SlotKind::Integer => "integer",
                            };
                            json!({"name": s.name, "kind": kind, "default": s.default})
                        })
                        .collect();
                    json!({"name": e.name, "params": slots, "provenance": e.provenance})
                })
                .collect();
            rep.set("entries", Value::Array(entries));
        }
        CatalogAction::Show { name, params, field } => {
            let params = catalog::parse_params(params.as_deref().unwrap_or(""))?;
            let field = field.as_deref().map(parse_field).transpose()?;
            let a = catalog_get(name, field, &params)?;
            rep.set("field", field_to_json(a.field()));
            rep.set("algebra", algebra_to_json(&a));
        }
    }
    Ok(())
}

fn run_classification(primes: &[u64], common: &Common, rep: &mut Report) -> Out<()> {
    let r = search::verify_classification(primes, common.jobs)?;
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            json!({
                "row": row.row,
                "field": row.field.map_or(json!("rational-sweep"), field_to_json),
                "expected": row.expected,
                "found": row.found,
                "pass": row.pass,
                "note": row.note,
            })
        })
        .collect();
    rep.set("rows", Value::Array(rows));
    rep.pass = Some(r.pass());
    Ok(())
}

fn verb(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Identities { .. } => "identities",
        Command::Derivations { .. } => "derivations",
        Command::Centroid { .. } => "centroid",
        Command::Ann { .. } => "ann",
        Command::Solvable { .. } => "solvable",
        Command::Simple { .. } => "simple",
        Command::Construct(_) => "construct",
        Command::AffinizeCheck { .. } => "affinize-check",
        Command::SearchCompatible { .. } => "search-compatible",
        Command::Catalog { .. } => "catalog",
        Command::VerifyClassification { .. } => "verify-classification",
    }
}

fn dispatch(c: &Command, rep: &mut Report) -> Out<()> {
    match c {
        Command::Check { file, axiom } => run_check(file, axiom, rep),
        Command::Identities { file, identity, p } => run_identities(file, identity, p.as_deref(), rep),
        Command::Derivations { file, delta, op } => run_derivations(file, delta.as_deref(), op.as_deref(), rep),
        Command::Centroid { file, op } => run_centroid(file, op.as_deref(), rep),
        Command::Ann { file, op } => run_ann(file, op, rep),
        Command::Solvable { file, op } => run_solvable(file, op, rep),
        Command::Simple { file, op, common } => run_simple(file, op.as_deref(), common, rep),
        Command::Construct(args) => run_construct(args, rep),
        Command::AffinizeCheck { file, window } => run_affinize(file, *window, rep),
        Command::SearchCompatible { file, enumerate, max, common } => run_search(file, *enumerate, *max, common, rep),
        Command::Catalog { action } => run_catalog(action, rep),
        Command::VerifyClassification { primes, common } => run_classification(primes, common, rep),
    }
}

fn emit(out: &mut dyn Write, doc: &Value) {
    let text = serde_json::to_string_pretty(doc).expect("JSON values serialize");
    let _ = writeln!(out, "{text}");
}

/// Run with explicit streams; returns the exit code.
pub fn run_with_io<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let help = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            let _ = write!(err, "{}", e.render());
            let code = if help { 0 } else { 2 };
            let mut doc = json!({"tool": "tnp", "version": VERSION});
            if !help {
                doc["error"] = json!(e.kind().to_string());
            }
            emit(out, &doc);
            return code;
        }
    };
    let command = verb(&cli.command);
    let mut rep = Report::new();
    let result = dispatch(&cli.command, &mut rep);
    let mut doc = Map::new();
    doc.insert("tool".into(), json!("tnp"));
    doc.insert("version".into(), json!(VERSION));
    doc.insert("command".into(), json!(command));
    doc.insert("inputs".into(), Value::Array(std::mem::take(&mut rep.inputs)));
    doc.insert("seed".into(), json!(rep.seed));
    match result {
        Ok(()) => {
            doc.insert("pass".into(), json!(rep.pass.unwrap_or(true)));
            doc.extend(rep.body);
            emit(out, &Value::Object(doc));
            let code = if rep.pass == Some(false) { 1 } else { 0 };
            let _ = writeln!(err, "{command}: {}", if code == 0 { "ok" } else { "check failed" });
            code
        }
        Err(UsageError(msg)) => {
            doc.insert("error".into(), json!(msg));
            emit(out, &Value::Object(doc));
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

/// Run against the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(argv, &mut stdout.lock(), &mut stderr.lock())
}

