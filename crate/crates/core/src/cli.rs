//! The `rlie` command line.
//!
//! Exit codes: 0 when every check passes, 1 on a mathematical failure (with a
//! witness), 2 on malformed input or an unsupported request.

use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{verify_restricted, RestrictedLieAlgebra, RestrictedModule};
use crate::catalog;
use crate::cohomology_ce::{ce_matrix, CeCochain, CohomologySpace};
use crate::cohomology_char2::{d_star2_matrix, h_n_star2};
use crate::cohomology_restricted::{d_star_2_matrix, h1_star, h2_star};
use crate::deformation::{
    extend_order, infinitesimal_cocycle_check, obstruction, verify_deformation, DeformationReport,
    TruncatedDeformation,
};
use crate::document::{AlgebraDocument, DocumentError};
use crate::error::Error;
use crate::gf::{FpMatrix, Solution};
use crate::rinehart::{
    verify_lie_rinehart, verify_lr_deformation, LieRinehartStructure, LrDeformationClass,
};
use crate::sweep::Sweep;

#[derive(Debug, Parser)]
#[command(
    name = "rlie",
    version,
    about = "Exact computations with restricted Lie algebras over GF(p)"
)]
pub struct Cli {
    /// Emit a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Enumerate all arguments of a non-linear check when there are at most this many.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_sweep: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every structure in a document or catalog entry.
    Verify {
        /// JSON document path or catalog name (e.g. `heisenberg:p=5:theta=z*`).
        source: String,
    },
    /// Cohomology dimension and class representatives.
    Cohomology {
        /// JSON document path or catalog name (e.g. `heisenberg:p=5:theta=z*`).
        source: String,
        /// Which complex to use.
        #[arg(long, value_enum)]
        flavor: Flavor,
        /// Cohomological degree.
        #[arg(long)]
        degree: usize,
        /// Module of coefficients; `document` uses the module section.
        #[arg(long, value_enum, default_value_t = Coefficients::Adjoint)]
        coefficients: Coefficients,
    },
    /// Isomorphism classes of restricted Heisenberg algebras over GF(p).
    Classify {
        /// Characteristic.
        p: u32,
    },
    /// Work with the deformation section of a document.
    Deform {
        /// JSON document path or catalog name (e.g. `heisenberg:p=5:theta=z*`).
        source: String,
        /// Check the deformation, decide its infinitesimal class, compute the
        /// obstruction, or extend it by one order.
        #[arg(value_enum)]
        action: DeformAction,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Flavor {
    /// Chevalley-Eilenberg.
    Ce,
    /// Restricted complex, p > 2, degrees 1 and 2.
    Restricted,
    /// Restricted complex in characteristic 2, degrees up to 4.
    Char2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Coefficients {
    Adjoint,
    Trivial,
    Document,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DeformAction {
    Verify,
    Class,
    Obstruct,
    Extend,
}

enum Failure {
    Input {
        path: Option<String>,
        message: String,
    },
    Math(String),
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure::Input {
            path: Some(e.path),
            message: e.message,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPrime(_)
            | Error::DimensionMismatch { .. }
            | Error::FieldMismatch(..)
            | Error::Characteristic { .. }
            | Error::DegreeTooLarge { .. }
            | Error::InvalidInput(_) => Failure::Input {
                path: None,
                message: e.to_string(),
            },
            _ => Failure::Math(e.to_string()),
        }
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure::Input {
        path: None,
        message: message.into(),
    }
}

/// What a command found.
struct Outcome {
    passed: bool,
    results: Value,
    witnesses: Vec<Value>,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            passed: true,
            results: json!({}),
            witnesses: Vec::new(),
            lines: Vec::new(),
        }
    }

    fn set(&mut self, key: &str, value: Value) {
        self.results[key] = value;
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn fail(&mut self, witness: Value, line: impl Into<String>) {
        self.passed = false;
        self.witnesses.push(witness);
        self.lines.push(line.into());
    }
}

/// Load a JSON document from a file, or build one from a catalog name.
///
/// Besides the names of [`catalog::from_name`], `rinehart:p=<p>:gamma=<g>`
/// gives `(h, z*)` over the dual numbers with its first-order deformation,
/// and `rinehart:p=2` the characteristic-2 structure over `A_1`.
pub fn load_source(source: &str) -> Result<AlgebraDocument, String> {
    load(source).map_err(|f| match f {
        Failure::Input { path, message } => {
            path.map_or(message.clone(), |p| format!("{p}: {message}"))
        }
        Failure::Math(m) => m,
    })
}

fn load(source: &str) -> Result<AlgebraDocument, Failure> {
    if Path::new(source).is_file() {
        let text = std::fs::read_to_string(source).map_err(|e| input(format!("{source}: {e}")))?;
        return Ok(AlgebraDocument::from_json(&text)?);
    }
    if !source.contains(':') {
        return Err(input(format!(
            "'{source}' is neither a file nor a catalog name"
        )));
    }
    if let Some(rest) = source.strip_prefix("rinehart:") {
        let mut p = None;
        let mut gamma = 0;
        for kv in rest.split(':') {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| input(format!("expected key=value, got '{kv}'")))?;
            let v: u32 = v
                .parse()
                .map_err(|_| input(format!("'{v}' is not an integer")))?;
            match k {
                "p" => p = Some(v),
                "gamma" => gamma = v,
                _ => return Err(input(format!("unknown key '{k}'"))),
            }
        }
        let p = p.ok_or_else(|| input("missing p="))?;
        let d = catalog::heisenberg_deformation(p)?;
        let (s, sigma) = if p == 2 {
            (catalog::char2_rinehart()?, catalog::char2_symbol()?)
        } else {
            let s = catalog::heisenberg_rinehart(p, gamma)?;
            let zero = vec![FpMatrix::zeros(s.algebra().field(), 2, 2); 3];
            (s, zero)
        };
        return Ok(AlgebraDocument::from_algebra(s.lie())
            .with_rinehart(&s)
            .with_deformation(&d, &[sigma]));
    }
    Ok(AlgebraDocument::from_algebra(&catalog::from_name(source)?))
}

fn algebra(
    doc: &AlgebraDocument,
    out: &mut Outcome,
) -> Result<Option<RestrictedLieAlgebra>, Failure> {
    let lie = match doc.lie_algebra() {
        Ok(l) => l,
        Err(Error::JacobiFails { i, j, k }) => {
            out.set("jacobi", json!(false));
            out.fail(
                json!({"axiom": "jacobi", "basis": [i, j, k]}),
                format!("Jacobi identity fails on basis triple ({i}, {j}, {k})"),
            );
            return Ok(None);
        }
        Err(e) => return Err(e.into()),
    };
    out.set("jacobi", json!(true));
    let report = verify_restricted(&lie, &doc.pmap);
    out.set(
        "jacobson",
        json!(report.entries.iter().map(|e| e.holds).collect::<Vec<_>>()),
    );
    if let Some(index) = report.first_failure() {
        out.fail(
            json!({"axiom": "jacobson", "index": index}),
            format!("ad(e{index})^p differs from ad(e{index}^[p])"),
        );
        return Ok(None);
    }
    Ok(Some(RestrictedLieAlgebra::new(lie, doc.pmap.clone())?))
}

fn deformation_json(r: &DeformationReport) -> Value {
    json!({
        "passed": r.passed(),
        "exhaustive": r.exhaustive,
        "first_failure": r.first_failure(),
    })
}

fn deformation_witness(r: &DeformationReport) -> Option<Value> {
    let o = r.orders.iter().find(|o| !o.passed())?;
    let mut w = json!({"order": o.order});
    if let Some(t) = o.jacobi {
        w["jacobi"] = json!(t);
    }
    if let Some(p) = &o.pmap {
        w["pmap"] = json!({"x": p.x, "y": p.y});
    }
    if let Some(p) = &o.additivity {
        w["additivity"] = json!({"x": p.x, "y": p.y});
    }
    Some(w)
}

fn lr_deformation(
    s: &LieRinehartStructure,
    d: &TruncatedDeformation,
    sigmas: &[Vec<FpMatrix>],
    sweep: &Sweep,
    out: &mut Outcome,
) -> Result<(), Failure> {
    let r = verify_lr_deformation(s, d, sigmas, sweep)?;
    let class = match r.class {
        LrDeformationClass::Full => "full",
        LrDeformationClass::Weak => "weak",
        LrDeformationClass::Invalid => "invalid",
    };
    out.set(
        "rinehart_deformation",
        json!({
            "class": class,
            "anchor_pmap_failure": r.anchor_pmap.as_ref().map(|(k, x)| json!({"order": k, "x": x})),
            "anchor_power_failure": r.anchor_power.as_ref().map(|(k, x)| json!({"order": k, "x": x})),
            "symbol_failure": r.symbol.as_ref().map(|(k, c)| json!({"order": k, "axiom": c.axiom.to_string(), "args": c.witness})),
        }),
    );
    out.line(format!("Lie-Rinehart deformation: {class}"));
    if r.class == LrDeformationClass::Invalid {
        let w = r
            .symbol
            .as_ref()
            .map(|(k, c)| json!({"order": k, "axiom": c.axiom.to_string(), "args": c.witness}))
            .or_else(|| deformation_witness(&r.lie))
            .unwrap_or(Value::Null);
        out.fail(
            w,
            "the deformation does not deform the Lie-Rinehart structure",
        );
    }
    Ok(())
}

fn cmd_verify(doc: &AlgebraDocument, sweep: &Sweep) -> Result<Outcome, Failure> {
    let mut out = Outcome::new();
    let Some(alg) = algebra(doc, &mut out)? else {
        return Ok(out);
    };
    out.line(format!(
        "restricted Lie algebra of dimension {} over GF({}): ok",
        alg.dim(),
        alg.p()
    ));
    if let Some(m) = doc.restricted_module(&alg) {
        match m {
            Ok(m) => {
                out.set("module", json!({"dim": m.dim(), "valid": true}));
                out.line(format!("restricted module of dimension {}: ok", m.dim()));
            }
            Err(Error::InvalidModule(msg)) => {
                out.set("module", json!({"valid": false}));
                out.fail(json!({"module": msg}), format!("module: {msg}"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let structure = doc.rinehart_structure(&alg).transpose()?;
    if let Some(s) = &structure {
        let r = verify_lie_rinehart(s, sweep);
        let checks: Vec<Value> = r
            .checks
            .iter()
            .map(|c| json!({"axiom": c.axiom.to_string(), "holds": c.holds(), "exhaustive": c.exhaustive}))
            .collect();
        out.set("rinehart", Value::Array(checks));
        for c in &r.checks {
            match &c.witness {
                None => out.line(format!("{}: ok", c.axiom)),
                Some(w) => out.fail(
                    json!({"axiom": c.axiom.to_string(), "args": w}),
                    format!("{}: fails at {w:?}", c.axiom),
                ),
            }
        }
    }
    if let Some(d) = doc.truncated_deformation(&alg) {
        let (d, sigmas) = d?;
        let r = verify_deformation(&d, sweep);
        out.set("deformation", deformation_json(&r));
        match deformation_witness(&r) {
            None => out.line(format!("deformation of order {}: ok", d.order())),
            Some(w) => out.fail(
                w,
                format!(
                    "deformation fails at order {}",
                    r.first_failure().unwrap_or(0)
                ),
            ),
        }
        if let Some(s) = &structure {
            if r.passed() {
                lr_deformation(s, &d, &sigmas, sweep, &mut out)?;
            }
        }
    }
    Ok(out)
}

fn space_json(space: &CohomologySpace) -> Value {
    json!({
        "dim": space.dim(),
        "cochains": space.cochain_dim,
        "cocycles": space.cocycles.len(),
        "coboundaries": space.coboundaries.len(),
        "classes": space.classes,
    })
}

fn cmd_cohomology(
    doc: &AlgebraDocument,
    flavor: Flavor,
    degree: usize,
    coefficients: Coefficients,
    sweep: &Sweep,
) -> Result<Outcome, Failure> {
    let mut out = Outcome::new();
    let Some(alg) = algebra(doc, &mut out)? else {
        return Ok(out);
    };
    let module = match coefficients {
        Coefficients::Adjoint => RestrictedModule::adjoint(&alg),
        Coefficients::Trivial => RestrictedModule::trivial(&alg, 1),
        Coefficients::Document => doc
            .restricted_module(&alg)
            .ok_or_else(|| input("the document has no module section"))??,
    };
    let (space, exhaustive) = match flavor {
        Flavor::Ce => {
            let d_out = ce_matrix(&module, degree)?;
            let d_in = if degree == 0 {
                None
            } else {
                Some(ce_matrix(&module, degree - 1)?)
            };
            (
                CohomologySpace::from_differentials(degree, &d_out, d_in.as_ref()),
                None,
            )
        }
        Flavor::Restricted => match degree {
            1 => (h1_star(&module)?, None),
            2 => {
                let h = h2_star(&module, sweep)?;
                (h.space, Some(h.oracle_exhaustive))
            }
            _ => {
                return Err(input(
                    "restricted cohomology is available in degrees 1 and 2",
                ))
            }
        },
        Flavor::Char2 => {
            let h = h_n_star2(&module, degree, sweep)?;
            (h.space, Some(h.oracle_exhaustive))
        }
    };
    let mut results = space_json(&space);
    results["flavor"] = json!(format!("{flavor:?}").to_lowercase());
    results["degree"] = json!(degree);
    results["coefficients"] = json!(format!("{coefficients:?}").to_lowercase());
    results["oracle_exhaustive"] = json!(exhaustive);
    out.results = results;
    out.line(format!(
        "H^{degree} ({}) = {} (cocycles {}, coboundaries {}, cochains {})",
        format!("{flavor:?}").to_lowercase(),
        space.dim(),
        space.cocycles.len(),
        space.coboundaries.len(),
        space.cochain_dim
    ));
    for c in &space.classes {
        out.line(format!("  class {c:?}"));
    }
    Ok(out)
}

fn cmd_classify(p: u32) -> Result<Outcome, Failure> {
    let mut out = Outcome::new();
    let classes = catalog::classify_heisenberg(p)?;
    let rows: Vec<Value> = classes
        .iter()
        .map(|c| {
            json!({
                "representative": catalog::theta_name(c.representative),
                "theta": c.representative,
                "members": c.members.len(),
            })
        })
        .collect();
    out.set("p", json!(p));
    out.set("count", json!(classes.len()));
    out.set("classes", Value::Array(rows));
    out.line(format!(
        "{} classes of restricted Heisenberg algebras over GF({p})",
        classes.len()
    ));
    for c in &classes {
        out.line(format!(
            "  theta = {:<8} ({} forms)",
            catalog::theta_name(c.representative),
            c.members.len()
        ));
    }
    Ok(out)
}

/// The pair `(m, omega)` encoded by restricted 2-cochain coordinates.
fn split_pair(
    alg: &RestrictedLieAlgebra,
    coords: &[u32],
) -> Result<(CeCochain, Vec<Vec<u32>>), Failure> {
    let n = alg.dim();
    let k = n * (n - 1) / 2 * n;
    let m = CeCochain::from_coords(alg.field(), n, n, 2, coords[..k].to_vec())?;
    Ok((m, coords[k..].chunks(n).map(<[u32]>::to_vec).collect()))
}

fn cmd_deform(
    doc: &AlgebraDocument,
    action: DeformAction,
    sweep: &Sweep,
) -> Result<Outcome, Failure> {
    let mut out = Outcome::new();
    let Some(alg) = algebra(doc, &mut out)? else {
        return Ok(out);
    };
    let (d, sigmas) = doc
        .truncated_deformation(&alg)
        .ok_or_else(|| input("the document has no deformation section"))??;
    let report = verify_deformation(&d, sweep);
    out.set("deformation", deformation_json(&report));
    if let Some(w) = deformation_witness(&report) {
        out.fail(
            w,
            format!(
                "deformation fails at order {}",
                report.first_failure().unwrap_or(0)
            ),
        );
        return Ok(out);
    }
    out.line(format!("deformation of order {}: ok", d.order()));
    match action {
        DeformAction::Verify => {
            if let Some(s) = doc.rinehart_structure(&alg).transpose()? {
                lr_deformation(&s, &d, &sigmas, sweep, &mut out)?;
            }
        }
        DeformAction::Class => {
            let c = infinitesimal_cocycle_check(&d, sweep)?;
            out.set(
                "infinitesimal",
                json!({
                    "cocycle": c.cocycle,
                    "trivial": c.is_trivial(),
                    "coboundary_of": c.coboundary.as_ref().map(|m| m.columns()),
                }),
            );
            if !c.cocycle {
                out.fail(
                    json!({"infinitesimal": "not a cocycle"}),
                    "infinitesimal is not a cocycle",
                );
            } else if c.is_trivial() {
                out.line("infinitesimal is a coboundary: the class is trivial");
            } else {
                out.line("infinitesimal is a cocycle with a non-trivial class");
            }
        }
        DeformAction::Obstruct => {
            let o = obstruction(&d, sweep)?;
            out.set(
                "obstruction",
                json!({"vanishes": o.is_zero(), "obs1": o.obs1.coords(), "obs2": o.obs2}),
            );
            out.line(if o.is_zero() {
                "obstruction vanishes".to_string()
            } else {
                format!("obstruction coordinates {:?}", o.coords())
            });
        }
        DeformAction::Extend => {
            let module = RestrictedModule::adjoint(&alg);
            let dm = if alg.p() == 2 {
                d_star2_matrix(&module, 2)?
            } else {
                d_star_2_matrix(&module)?
            };
            let o = obstruction(&d, sweep)?;
            let coords = match dm.solve(&o.coords()) {
                Solution::Inconsistent => {
                    out.set("extension", Value::Null);
                    out.fail(
                        json!({"obstruction": o.coords()}),
                        "no extension: the obstruction is not a coboundary",
                    );
                    return Ok(out);
                }
                sol => sol.into_vector().expect("consistent system"),
            };
            let (m, w) = split_pair(&alg, &coords)?;
            if !extend_order(&d, &m, &w, sweep)? {
                return Err(Failure::Math("solved extension does not verify".into()));
            }
            let extended = d.extended(m, w)?;
            let mut sig = sigmas.clone();
            if !sig.is_empty() {
                let da = sig[0][0].rows();
                sig.push(vec![FpMatrix::zeros(alg.field(), da, da); alg.dim()]);
            }
            let next = doc.clone().with_deformation(&extended, &sig);
            out.set("extension", json!(next.deformation));
            out.line(format!("extended to order {}", extended.order()));
            out.line(serde_json::to_string(&next.deformation).expect("serializable"));
        }
    }
    Ok(out)
}

/// Run the command line on `args`, writing the report to `stdout` and
/// diagnostics to `stderr`; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 2;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    let mut sweep = Sweep::default().with_max_points(cli.max_sweep);
    if let Some(seed) = cli.seed {
        sweep = sweep.with_seed(seed);
    }
    let options = json!({"seed": sweep.seed, "max_sweep": sweep.max_points});
    let lower = |v: String| v.to_lowercase();
    let (name, params, result) = match &cli.command {
        Command::Verify { source } => (
            "verify",
            json!({"source": source}),
            load(source).and_then(|d| Ok((cmd_verify(&d, &sweep)?, Some(d)))),
        ),
        Command::Cohomology {
            source,
            flavor,
            degree,
            coefficients,
        } => (
            "cohomology",
            json!({
                "source": source,
                "flavor": lower(format!("{flavor:?}")),
                "degree": degree,
                "coefficients": lower(format!("{coefficients:?}")),
            }),
            load(source).and_then(|d| {
                Ok((
                    cmd_cohomology(&d, *flavor, *degree, *coefficients, &sweep)?,
                    Some(d),
                ))
            }),
        ),
        Command::Classify { p } => (
            "classify",
            json!({"p": p}),
            cmd_classify(*p).map(|o| (o, None)),
        ),
        Command::Deform { source, action } => (
            "deform",
            json!({"source": source, "action": lower(format!("{action:?}"))}),
            load(source).and_then(|d| Ok((cmd_deform(&d, *action, &sweep)?, Some(d)))),
        ),
    };
    let mut inputs = params;
    inputs["options"] = options;
    let (code, report) = match result {
        Ok((o, doc)) => {
            if let Some(doc) = doc {
                inputs["document"] = json!(doc);
            }
            let status = if o.passed { "pass" } else { "fail" };
            if !cli.json {
                for l in &o.lines {
                    let _ = writeln!(stdout, "{l}");
                }
                let _ = writeln!(stdout, "{}", status.to_uppercase());
            }
            let report = json!({
                "command": name,
                "inputs": inputs,
                "status": status,
                "results": o.results,
                "witnesses": o.witnesses,
            });
            (if o.passed { 0 } else { 1 }, report)
        }
        Err(f) => {
            let (code, err) = match f {
                Failure::Input { path, message } => (
                    2,
                    json!({"kind": "input", "path": path, "message": message}),
                ),
                Failure::Math(message) => (1, json!({"kind": "math", "message": message})),
            };
            if !cli.json {
                let path = err["path"]
                    .as_str()
                    .map(|p| format!("{p}: "))
                    .unwrap_or_default();
                let _ = writeln!(
                    stderr,
                    "error: {path}{}",
                    err["message"].as_str().unwrap_or_default()
                );
            }
            let report = json!({
                "command": name,
                "inputs": inputs,
                "status": "error",
                "results": Value::Null,
                "witnesses": [],
                "error": err,
            });
            (code, report)
        }
    };
    if cli.json {
        let _ = writeln!(
            stdout,
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        );
    }
    code
}
