//! Command dispatch and the JSON report envelope.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use vakit::builders;
use vakit::c2::{self, IsoOutcome};
use vakit::duality::{dualize_algebra, dualize_coalgebra, dualize_comodule, dualize_module, DualityError};
use vakit::gamma::{beta_relation_suite, RelationKind};
use vakit::report::{Suite, Verdict};
use vakit::vertex::{self, ExponentBox};
use vakit::{AxiomResult, CheckReport, GradedMap, GradedSpace, Vector, Witness};

use crate::format::{self, Structure};

pub const SCHEMA: &str = "vakit-report/1";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "vakit", version, about = "Check and transform finite vertex (co)algebra data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Leave the timing field out of the report.
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// Worker threads for the checkers (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run axiom suites on a structure file.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SuiteKind::All)]
        suite: SuiteKind,
        /// Exponent box [-L, L] for Jacobi-type clauses; degree box for the beta suite.
        #[arg(long = "box")]
        jbox: Option<i64>,
        /// Re-evaluate one recorded result (an entry of a report, or a whole report).
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Write the restricted dual of a structure.
    Dualize {
        file: PathBuf,
        #[arg(short = 'o')]
        out: PathBuf,
    },
    /// Build the C2 (co)algebra or (co)module and check it.
    C2 {
        file: PathBuf,
        #[arg(long)]
        poisson: bool,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Construct and verify one of the duality isomorphisms.
    IsoCheck {
        file: PathBuf,
        #[arg(long, value_enum)]
        theorem: Theorem,
    },
    /// Write a built-in fixture.
    Example {
        name: String,
        /// Wrap the algebra in a module.
        #[arg(long, value_enum)]
        module: Option<ModuleKind>,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Write the restricted dual instead.
        #[arg(long)]
        dual: bool,
        #[arg(short = 'o')]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteKind {
    Algebra,
    Coalgebra,
    Module,
    Comodule,
    Beta,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    #[value(name = "7.5")]
    AlgebraIso,
    #[value(name = "7.6")]
    CoalgebraIso,
    #[value(name = "7.10")]
    ModuleIso,
    #[value(name = "7.12")]
    ComoduleIso,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModuleKind {
    Adjoint,
    Free,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Envelope {
    pub schema: String,
    pub command: String,
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub digest: Option<String>,
    pub status: String,
    pub exit_code: i32,
    pub results: Vec<AxiomResult>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub data: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<f64>,
}

impl Envelope {
    fn new(command: &str, suite: &str) -> Self {
        Envelope {
            schema: SCHEMA.into(),
            command: command.into(),
            suite: suite.into(),
            kind: None,
            digest: None,
            status: "pass".into(),
            exit_code: EXIT_PASS,
            results: Vec::new(),
            warnings: Vec::new(),
            data: None,
            error: None,
            timing_ms: None,
        }
    }

    fn finish(&mut self) {
        let (status, code) = if self.error.is_some() {
            ("error", EXIT_ERROR)
        } else if self.results.iter().any(|r| r.verdict == Verdict::Fail) {
            ("fail", EXIT_FAIL)
        } else if self.results.iter().any(|r| r.verdict == Verdict::Refused) {
            ("refused", EXIT_REFUSED)
        } else {
            ("pass", EXIT_PASS)
        };
        self.status = status.into();
        self.exit_code = code;
    }

    fn fail_with(mut self, e: impl std::fmt::Display) -> Self {
        self.error = Some(e.to_string());
        self
    }
}

/// Runs one command; the envelope is always produced, IO included.
pub fn run(cli: &Cli) -> Envelope {
    let start = Instant::now();
    let body = || dispatch(&cli.command);
    let mut env = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(body),
            Err(e) => Envelope::new(command_name(&cli.command), "").fail_with(e),
        },
        None => body(),
    };
    env.finish();
    if !cli.no_timing {
        env.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    env
}

/// Pretty JSON with a trailing newline.
pub fn render(env: &Envelope) -> String {
    let mut s = serde_json::to_string_pretty(env).expect("envelope serializes");
    s.push('\n');
    s
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Dualize { .. } => "dualize",
        Command::C2 { .. } => "c2",
        Command::IsoCheck { .. } => "iso-check",
        Command::Example { .. } => "example",
    }
}

/// sha256 of the canonical text.
pub fn digest(s: &Structure) -> Option<String> {
    format::serialize(s).ok().map(|t| hex::encode(Sha256::digest(t.as_bytes())))
}

fn load(path: &Path, env: &mut Envelope) -> Result<Structure, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let parsed = format::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    env.warnings.extend(parsed.warnings);
    env.kind = Some(parsed.structure.kind().into());
    env.digest = digest(&parsed.structure);
    Ok(parsed.structure)
}

fn write_text(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn dispatch(cmd: &Command) -> Envelope {
    let name = command_name(cmd);
    let outcome = match cmd {
        Command::Check { file, suite, jbox, replay } => {
            let mut env = Envelope::new(name, &suite_name(*suite));
            cmd_check(&mut env, file, *suite, *jbox, replay.as_deref()).map(|_| env)
        }
        Command::Dualize { file, out } => {
            let mut env = Envelope::new(name, "duality");
            cmd_dualize(&mut env, file, out).map(|_| env)
        }
        Command::C2 { file, poisson, out } => {
            let mut env = Envelope::new(name, "c2");
            cmd_c2(&mut env, file, *poisson, out.as_deref()).map(|_| env)
        }
        Command::IsoCheck { file, theorem } => {
            let mut env = Envelope::new(name, "");
            cmd_iso(&mut env, file, *theorem).map(|_| env)
        }
        Command::Example { name: ex, module, rank, dual, out } => {
            let mut env = Envelope::new(name, "example");
            cmd_example(&mut env, ex, *module, *rank, *dual, out).map(|_| env)
        }
    };
    outcome.unwrap_or_else(|e| Envelope::new(name, "").fail_with(e))
}

fn suite_name(s: SuiteKind) -> String {
    serde_json::to_value(s).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

// ---------------------------------------------------------------------------
// check

fn beta_suite(s: &Structure, half: i64) -> Suite<'_> {
    let (spec, beta, gamma0) = match s {
        Structure::Algebra(a) => (a.spec(), &a.beta, &a.gamma0),
        Structure::Module(m) => (m.base.spec(), &m.base.beta, &m.base.gamma0),
        Structure::Coalgebra(c) => (c.spec(), &c.beta, &c.gamma0),
        Structure::Comodule(m) => (m.base.spec(), &m.base.beta, &m.base.gamma0),
    };
    beta_relation_suite(spec, beta, gamma0, &RelationKind::ALL, &spec.box_elements(-half, half))
}

/// Suites selected by `kind` for this structure, in report order.
pub fn build_suites(s: &Structure, kind: SuiteKind, jbox: Option<i64>) -> Result<Vec<Suite<'_>>, String> {
    let eb = jbox.map(ExponentBox::symmetric);
    let wrong = |want: &str| Err(format!("suite {want} needs a {want} file, found {}", s.kind()));
    let mut out = Vec::new();
    let e = |e: vakit::graded::GradedError| e.to_string();
    match (kind, s) {
        (SuiteKind::Beta, _) => out.push(beta_suite(s, jbox.unwrap_or(3))),
        (SuiteKind::Algebra | SuiteKind::All, Structure::Algebra(a)) => {
            out.push(vertex::algebra_suite(a, eb));
            out.push(vertex::translation_suite(a));
            if a.beta.is_zero_kind() {
                out.push(vertex::beta0_associativity_suite(a, eb));
            }
        }
        (SuiteKind::Coalgebra | SuiteKind::All, Structure::Coalgebra(c)) => {
            out.push(vertex::coalgebra_suite(c, eb).map_err(e)?);
            out.push(vertex::cotranslation_suite(c).map_err(e)?);
        }
        (SuiteKind::Module | SuiteKind::All, Structure::Module(m)) => {
            out.push(vertex::module_suite(m, eb));
            if let Some(w) = &m.omega {
                out.push(vertex::module_translation_suite(m, w));
            }
        }
        (SuiteKind::Comodule | SuiteKind::All, Structure::Comodule(m)) => {
            out.push(vertex::comodule_suite(m, eb).map_err(e)?);
            if let Some(r) = &m.rho {
                out.push(vertex::comodule_cotranslation_suite(m, r).map_err(e)?);
            }
        }
        (SuiteKind::Algebra, _) => return wrong("algebra"),
        (SuiteKind::Coalgebra, _) => return wrong("coalgebra"),
        (SuiteKind::Module, _) => return wrong("module"),
        (SuiteKind::Comodule, _) => return wrong("comodule"),
    }
    if kind == SuiteKind::All {
        out.push(beta_suite(s, 3));
    }
    Ok(out)
}

#[derive(Deserialize)]
struct ReplayTarget {
    id: String,
    #[serde(default)]
    verdict: Option<Verdict>,
    witness: Option<Witness>,
}

fn replay_target(path: &Path) -> Result<ReplayTarget, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let entry = match v.get("results").and_then(Value::as_array) {
        Some(results) => results
            .iter()
            .find(|r| r.get("witness").is_some() && r.get("verdict").and_then(Value::as_str) == Some("fail"))
            .cloned()
            .ok_or_else(|| "report holds no failing result with a witness".to_string())?,
        None => v,
    };
    serde_json::from_value(entry).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_check(env: &mut Envelope, file: &Path, kind: SuiteKind, jbox: Option<i64>, replay: Option<&Path>) -> Result<(), String> {
    let s = load(file, env)?;
    let suites = build_suites(&s, kind, jbox)?;
    if let Some(path) = replay {
        let target = replay_target(path)?;
        let w = target.witness.ok_or_else(|| format!("result {} has no witness", target.id))?;
        let suite = suites
            .iter()
            .find(|su| su.clause(&target.id).is_some())
            .ok_or_else(|| format!("no replayable clause named {} in the selected suites", target.id))?;
        let r = suite.replay(&target.id, &w)?;
        let reproduced = target.verdict.map(|v| v == r.verdict);
        env.data = Some(json!({ "replayed": target.id, "recorded_verdict": target.verdict, "reproduced": reproduced }));
        env.results.push(r);
        return Ok(());
    }
    for su in &suites {
        env.results.extend(su.run().results);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// dualize

fn refusal_results(e: DualityError) -> Result<AxiomResult, String> {
    match e {
        DualityError::Refused(r) => Ok(*r),
        other => Err(other.to_string()),
    }
}

/// Restricted dual with the pairing witness.
pub fn dualize(s: &Structure) -> Result<(Structure, vakit::duality::DualityWitness), DualityError> {
    Ok(match s {
        Structure::Algebra(a) => {
            let (c, w) = dualize_algebra(a)?;
            (Structure::Coalgebra(c), w)
        }
        Structure::Coalgebra(c) => {
            let (a, w) = dualize_coalgebra(c)?;
            (Structure::Algebra(a), w)
        }
        Structure::Module(m) => {
            let (n, w) = dualize_module(m)?;
            (Structure::Comodule(n), w)
        }
        Structure::Comodule(n) => {
            let (m, w) = dualize_comodule(n)?;
            (Structure::Module(m), w)
        }
    })
}

fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".pairing.json");
    out.with_file_name(name)
}

fn cmd_dualize(env: &mut Envelope, file: &Path, out: &Path) -> Result<(), String> {
    let s = load(file, env)?;
    match dualize(&s) {
        Ok((d, w)) => {
            let text = format::serialize(&d).map_err(|e| e.to_string())?;
            write_text(out, &text)?;
            let side = sidecar(out);
            write_text(&side, &(serde_json::to_string_pretty(&w).map_err(|e| e.to_string())? + "\n"))?;
            env.results.push(AxiomResult::pass("dualize", "restricted_dual", d_dim(&d) as u64));
            env.data = Some(json!({
                "output_kind": d.kind(),
                "output_digest": digest(&d),
                "pairing": w,
            }));
            Ok(())
        }
        Err(e) => {
            env.results.push(refusal_results(e)?);
            Ok(())
        }
    }
}

fn d_dim(s: &Structure) -> usize {
    match s {
        Structure::Algebra(a) => a.dim(),
        Structure::Coalgebra(c) => c.dim(),
        Structure::Module(m) => m.dim(),
        Structure::Comodule(m) => m.mspace.dim(),
    }
}

// ---------------------------------------------------------------------------
// c2

fn space_json(v: &GradedSpace) -> Value {
    Value::Array((0..v.dim()).map(|i| json!({ "label": v.label(i), "degree": v.degree(i).to_string() })).collect())
}

fn vector_json(v: &GradedSpace, x: &Vector) -> Value {
    Value::Array(x.entries().iter().map(|(i, s)| json!([v.label(*i), s.to_string()])).collect())
}

/// Sparse matrix: one `[source label, target label, value]` triple per entry.
pub fn map_json(f: &GradedMap) -> Value {
    let (src, tgt) = (f.source(), f.target());
    let mut entries = Vec::new();
    for (k, col) in f.cols().iter().enumerate() {
        for (t, s) in col.entries() {
            entries.push(json!([src.label(k), tgt.label(*t), s.to_string()]));
        }
    }
    json!({
        "source": src.labels(),
        "target": tgt.labels(),
        "degree": f.degree().to_string(),
        "entries": entries,
    })
}

fn report_into(env: &mut Envelope, r: CheckReport) {
    env.results.extend(r.results);
}

fn c2_error(env: &mut Envelope, e: c2::C2Error) -> Result<(), String> {
    match e {
        c2::C2Error::NotWellDefined(r) | c2::C2Error::NotContained(r) => {
            report_into(env, r);
            Ok(())
        }
        other => Err(other.to_string()),
    }
}

/// A Poisson-level report already contains the algebra clauses unless it was refused.
fn covers(full: &Option<CheckReport>) -> bool {
    full.as_ref().is_some_and(|r| r.results.iter().all(|x| x.verdict != Verdict::Refused))
}

fn cmd_c2(env: &mut Envelope, file: &Path, poisson: bool, out: Option<&Path>) -> Result<(), String> {
    let s = load(file, env)?;
    let e = |e: vakit::graded::GradedError| e.to_string();
    let data = match &s {
        Structure::Algebra(a) => {
            report_into(env, c2::lemma_higher_modes(a).run());
            report_into(env, c2::c2_well_definedness(a).run());
            let p = match c2::c2_algebra(a) {
                Ok(p) => p,
                Err(err) => return c2_error(env, err),
            };
            let full = poisson.then(|| c2::poisson_suite(&p).run());
            if !covers(&full) {
                report_into(env, c2::gamma_algebra_suite(&p).run());
            }
            report_into(env, c2::beta_commutative_suite(&p).run());
            if let Some(r) = full {
                report_into(env, r);
            }
            json!({
                "carrier": space_json(&p.carrier),
                "product": map_json(&p.product),
                "bracket": map_json(&p.bracket),
                "unit": vector_json(&p.carrier, &p.unit),
            })
        }
        Structure::Coalgebra(c) => {
            report_into(env, c2::lemma_higher_modes_coalgebra(c).map_err(e)?.run());
            report_into(env, c2::co_c2_containment(c).map_err(e)?.run());
            let k = match c2::co_c2_coalgebra(c) {
                Ok(k) => k,
                Err(err) => return c2_error(env, err),
            };
            let full = if poisson { Some(c2::copoisson_suite(&k).map_err(e)?.run()) } else { None };
            if !covers(&full) {
                report_into(env, c2::gamma_coalgebra_suite(&k).map_err(e)?.run());
            }
            report_into(env, c2::beta_cocommutative_suite(&k).map_err(e)?.run());
            if let Some(r) = full {
                report_into(env, r);
            }
            json!({
                "carrier": space_json(&k.carrier),
                "coproduct": map_json(&k.coproduct),
                "cobracket": map_json(&k.cobracket),
                "counit": vector_json(&k.carrier, &k.counit),
            })
        }
        Structure::Module(m) => {
            report_into(env, c2::lemma_higher_modes_module(m).run());
            report_into(env, c2::c2_module_well_definedness(m).run());
            let (p, pm) = match c2::c2_module(m) {
                Ok(x) => x,
                Err(err) => return c2_error(env, err),
            };
            let full = poisson.then(|| c2::poisson_module_suite(&p, &pm).run());
            if !covers(&full) {
                report_into(env, c2::algebra_module_suite(&p, &pm).run());
            }
            if let Some(r) = full {
                report_into(env, r);
            }
            json!({
                "carrier": space_json(&pm.carrier),
                "base_carrier": space_json(&p.carrier),
                "action": map_json(&pm.action),
                "lie_action": map_json(&pm.lie_action),
            })
        }
        Structure::Comodule(n) => {
            report_into(env, c2::lemma_higher_modes_comodule(n).map_err(e)?.run());
            report_into(env, c2::co_c2_comodule_containment(n).map_err(e)?.run());
            let (k, km) = match c2::co_c2_comodule(n) {
                Ok(x) => x,
                Err(err) => return c2_error(env, err),
            };
            let full = if poisson { Some(c2::copoisson_comodule_suite(&k, &km).map_err(e)?.run()) } else { None };
            if !covers(&full) {
                report_into(env, c2::coalgebra_comodule_suite(&k, &km).map_err(e)?.run());
            }
            if let Some(r) = full {
                report_into(env, r);
            }
            json!({
                "carrier": space_json(&km.carrier),
                "base_carrier": space_json(&k.carrier),
                "coaction": map_json(&km.coaction),
                "lie_coaction": map_json(&km.lie_coaction),
            })
        }
    };
    if let Some(out) = out {
        write_text(out, &(serde_json::to_string_pretty(&data).map_err(|e| e.to_string())? + "\n"))?;
    }
    env.data = Some(data);
    Ok(())
}

// ---------------------------------------------------------------------------
// iso-check

fn cmd_iso(env: &mut Envelope, file: &Path, theorem: Theorem) -> Result<(), String> {
    let s = load(file, env)?;
    // the theorem fixes the input kind; the other side of the duality is dualized first
    let want_algebra_side = matches!(theorem, Theorem::AlgebraIso | Theorem::ModuleIso);
    let on_algebra_side = matches!(s, Structure::Algebra(_) | Structure::Module(_));
    let want_module = matches!(theorem, Theorem::ModuleIso | Theorem::ComoduleIso);
    let is_module = matches!(s, Structure::Module(_) | Structure::Comodule(_));
    if want_module != is_module {
        return Err(format!("theorem needs a {} file, found {}", if want_module { "module" } else { "non-module" }, s.kind()));
    }
    let input = if want_algebra_side == on_algebra_side {
        s
    } else {
        env.warnings.push(format!("input {} dualized before the check", s.kind()));
        match dualize(&s) {
            Ok((d, _)) => d,
            Err(e) => {
                env.results.push(refusal_results(e)?);
                return Ok(());
            }
        }
    };
    let outcome: IsoOutcome = match &input {
        Structure::Algebra(a) => c2::poisson_duality_iso(a),
        Structure::Coalgebra(c) => c2::copoisson_duality_iso(c),
        Structure::Module(m) => c2::poisson_duality_iso_module(m),
        Structure::Comodule(n) => c2::copoisson_duality_iso_comodule(n),
    };
    env.suite = outcome.report.suite.clone();
    env.data = outcome.map.as_ref().map(|m| json!({ "iso": map_json(m) }));
    report_into(env, outcome.report);
    Ok(())
}

// ---------------------------------------------------------------------------
// example

/// Built-in fixture by name, optionally wrapped in a module and/or dualized.
pub fn example(name: &str, module: Option<ModuleKind>, rank: usize, dual: bool) -> Result<Structure, String> {
    let a = builders::by_name(name).ok_or_else(|| format!("unknown example '{name}' (known: {})", builders::EXAMPLES.join(", ")))?;
    let s = match module {
        None => Structure::Algebra(a),
        Some(ModuleKind::Adjoint) => Structure::Module(builders::adjoint_module(&a)),
        Some(ModuleKind::Free) => Structure::Module(builders::free_module(&a, rank)),
    };
    if dual {
        dualize(&s).map(|(d, _)| d).map_err(|e| e.to_string())
    } else {
        Ok(s)
    }
}

fn cmd_example(env: &mut Envelope, name: &str, module: Option<ModuleKind>, rank: usize, dual: bool, out: &Path) -> Result<(), String> {
    let s = example(name, module, rank, dual)?;
    let text = format::serialize(&s).map_err(|e| e.to_string())?;
    write_text(out, &text)?;
    env.kind = Some(s.kind().into());
    env.digest = digest(&s);
    env.results.push(AxiomResult::info("example", "fixture", format!("{name} written")));
    Ok(())
}
