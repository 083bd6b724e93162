//! Command line front end: workspace loading, command dispatch and report
//! rendering. The JSON report is the primary output; the text form is
//! rendered from it.

pub mod dsl;

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cdga::{Flavor, FreeGradedAlgebra};
use crate::cohomology::{is_admissible, is_h_mild, AcyclicReading, CohomologyTable};
use crate::error::{MildError, Result};
use crate::models::{check_minimality, lift, relative_model, verify_model, ModelOptions};
use crate::sectional::{
    atc_report, invariants_report, tc_report, verify_multiplicative_retraction, BatteryOptions, InvariantReport,
    RingEnlarge,
};

pub use dsl::{parse, Workspace};

/// Workspace used when no `--input` is given.
pub const CORPUS: &str = include_str!("../../corpus/corpus.mld");

#[derive(Parser, Debug, Clone)]
#[command(name = "mild", version, about = "Models, cohomology and sectional-category bounds for mild algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// workspace file (defaults to the built-in corpus)
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// replace the workspace ring, e.g. `Q` or `Z invert 3`
    #[arg(long, global = true)]
    pub ring: Option<String>,

    /// top of the certification window
    #[arg(long, global = true, default_value_t = 8)]
    pub max_degree: usize,

    /// connectivity
    #[arg(long, global = true, default_value_t = 1)]
    pub r: usize,

    /// also write the JSON report to this file
    #[arg(long, global = true, visible_alias = "emit")]
    pub json: Option<PathBuf>,

    /// what to print on stdout
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// exit with code 4 when a report is not fully certified
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FlavorArg {
    Commutative,
    Tensor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnlargeArg {
    Auto,
    Off,
}

#[derive(Args, Debug, Clone)]
pub struct BatteryArgs {
    /// highest level m searched
    #[arg(long, default_value_t = 4)]
    pub m_max: usize,

    #[arg(long, value_enum, default_value_t = EnlargeArg::Auto)]
    pub ring_enlarge: EnlargeArg,

    /// reading of "acyclic ideal" used by the Hnil search
    #[arg(long, value_enum, default_value_t = AcyclicArg::IdealCohomology)]
    pub acyclic: AcyclicArg,

    /// assert that the loop-space homology of the underlying space is
    /// torsion free over the ring; it cannot be checked on a model
    #[arg(long)]
    pub assume_torsion_free_loops: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AcyclicArg {
    IdealCohomology,
    AbstractIsomorphism,
}

impl From<AcyclicArg> for AcyclicReading {
    fn from(a: AcyclicArg) -> Self {
        match a {
            AcyclicArg::IdealCohomology => AcyclicReading::IdealCohomology,
            AcyclicArg::AbstractIsomorphism => AcyclicReading::AbstractIsomorphism,
        }
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// cohomology of an algebra, or of a quotient named by an ideal
    Cohomology {
        #[arg(long)]
        algebra: String,
    },
    /// relative model of a morphism
    Model {
        #[arg(long)]
        morphism: String,
        #[arg(long, value_enum)]
        flavor: Option<FlavorArg>,
    },
    /// lift psi through a surjective quasi-isomorphism eta: `--morphism psi --morphism eta`
    Lift {
        #[arg(long, num_args = 1, required = true)]
        morphism: Vec<String>,
    },
    /// TC_n / tc_n bounds of a commutative model
    Tc {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        battery: BatteryArgs,
    },
    /// ATC_n / Atc_n bounds of a tensor-algebra model
    Atc {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        battery: BatteryArgs,
    },
    /// all invariants of a surjective morphism
    Invariants {
        #[arg(long)]
        morphism: String,
        /// ideal of the source offered to the Hnil search (repeatable)
        #[arg(long)]
        candidate: Vec<String>,
        #[command(flatten)]
        battery: BatteryArgs,
    },
    /// check a multiplicative retraction: `--morphism r --morphism j`
    VerifyRetraction {
        #[arg(long, num_args = 1, required = true)]
        morphism: Vec<String>,
    },
}

/// A finished command: the JSON report and the exit code it asks for.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

impl Outcome {
    /// Pretty JSON with a trailing newline; byte-identical across runs.
    pub fn json_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        render(&self.report, 0, &mut out);
        out
    }
}

/// Load the workspace named by the flags.
pub fn load_workspace(cli: &Cli) -> Result<Workspace> {
    let src = match &cli.input {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| MildError::Invalid(format!("cannot read {}: {e}", p.display())))?,
        None => CORPUS.to_string(),
    };
    workspace_from_source(&src, cli)
}

/// Parse `src` with the cap and ring override asked for by the flags.
pub fn workspace_from_source(src: &str, cli: &Cli) -> Result<Workspace> {
    let cap = cli.max_degree + 1;
    let ws = parse(src, cap)?;
    match &cli.ring {
        None => Ok(ws),
        Some(r) => {
            let mut ws = ws;
            ws.ring = parse(&format!("ring {r}"), cap)?.ring;
            parse(&ws.to_source(), cap)
        }
    }
}

fn enlarge(a: &BatteryArgs) -> RingEnlarge {
    match a.ring_enlarge {
        EnlargeArg::Auto => RingEnlarge::Auto,
        EnlargeArg::Off => RingEnlarge::Off,
    }
}

fn battery_options(cli: &Cli, a: &BatteryArgs) -> BatteryOptions {
    BatteryOptions { m_max: a.m_max, window: cli.max_degree, r: cli.r, candidates: Vec::new(), reading: a.acyclic.into() }
}

fn battery_echo(a: &BatteryArgs) -> Value {
    json!({
        "m_max": a.m_max,
        "ring_enlarge": format!("{:?}", a.ring_enlarge).to_lowercase(),
        "acyclic": serde_json::to_value(AcyclicReading::from(a.acyclic)).unwrap_or(Value::Null),
        "assume_torsion_free_loops": a.assume_torsion_free_loops,
    })
}

fn two_morphisms<'w>(ws: &'w Workspace, names: &[String], what: &str) -> Result<(&'w dsl::MorphismDecl, &'w dsl::MorphismDecl)> {
    if names.len() != 2 {
        return Err(MildError::Invalid(format!("{what} takes exactly two --morphism flags")));
    }
    Ok((ws.morphism(&names[0])?, ws.morphism(&names[1])?))
}

fn echo(cli: &Cli, ws: &Workspace) -> Value {
    let (name, args) = match &cli.command {
        Command::Cohomology { algebra } => ("cohomology", json!({ "algebra": algebra })),
        Command::Model { morphism, flavor } => {
            ("model", json!({ "morphism": morphism, "flavor": flavor.map(|f| format!("{f:?}").to_lowercase()) }))
        }
        Command::Lift { morphism } => ("lift", json!({ "morphisms": morphism })),
        Command::Tc { algebra, n, battery } | Command::Atc { algebra, n, battery } => (
            if matches!(cli.command, Command::Tc { .. }) { "tc" } else { "atc" },
            merge(json!({ "algebra": algebra, "n": n }), battery_echo(battery)),
        ),
        Command::Invariants { morphism, candidate, battery } => (
            "invariants",
            merge(json!({ "morphism": morphism, "candidates": candidate }), battery_echo(battery)),
        ),
        Command::VerifyRetraction { morphism } => ("verify-retraction", json!({ "morphisms": morphism })),
    };
    json!({
        "name": name,
        "arguments": args,
        "max_degree": cli.max_degree,
        "r": cli.r,
        "ring": ws.ring.to_string(),
    })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

fn battery_outcome(rep: InvariantReport, strict: bool) -> (Value, i32) {
    let code = if strict && !rep.is_certified() { 4 } else { 0 };
    (rep.to_json(), code)
}

/// The loop-homology hypothesis is a statement about a space, not a model:
/// record whether the caller asserted it.
fn with_loop_assumption(mut v: Value, a: &BatteryArgs) -> Value {
    let note = if a.assume_torsion_free_loops {
        json!({ "torsion_free_loop_homology": "asserted by caller" })
    } else {
        json!({
            "torsion_free_loop_homology": "not asserted",
            "note": "bounds on the topological TC_n of a space need its loop-space homology to be torsion free; pass --assume-torsion-free-loops to assert it",
        })
    };
    if let Value::Object(m) = &mut v {
        m.insert("assumptions".into(), note);
    }
    v
}

fn algebra_of(ws: &Workspace, name: &str) -> Result<Arc<FreeGradedAlgebra>> {
    ws.algebra(name).cloned()
}

/// Run one command on an already loaded workspace.
pub fn run_on(cli: &Cli, ws: &Workspace) -> Result<Outcome> {
    let window = cli.max_degree;
    let (result, exit_code) = match &cli.command {
        Command::Cohomology { algebra } => {
            let cod = ws.codomain(algebra)?;
            let h = CohomologyTable::compute(&cod, 0, window)?;
            let mild = is_h_mild(&h, cli.r);
            let admissible = is_admissible(&h, cli.r);
            let v = json!({
                "algebra": cod.name(),
                "ring": ws.ring.to_string(),
                "window": window,
                "status": "exact",
                "entries": h.entries(),
                "mild": mild,
                "admissible": admissible,
            });
            (v, 0)
        }
        Command::Model { morphism, flavor } => {
            let f = &ws.morphism(morphism)?.morphism;
            let flavor = match flavor {
                None => f.source().flavor(),
                Some(FlavorArg::Commutative) => Flavor::Commutative,
                Some(FlavorArg::Tensor) => Flavor::Tensor,
            };
            let m = relative_model(f, flavor, window, ModelOptions { r: cli.r })?;
            verify_model(&m, f)?;
            let mut v = m.to_json();
            v["minimality"] = serde_json::to_value(check_minimality(&m)).expect("serializable");
            v["quasi_iso_certified"] = json!(true);
            v["status"] = json!("exact");
            (v, 0)
        }
        Command::Lift { morphism } => {
            let (psi, eta) = two_morphisms(ws, morphism, "lift")?;
            let phi = lift(&psi.morphism, &eta.morphism, window)?;
            let back = phi.then(&eta.morphism)?;
            let tgt = &phi.target().ambient;
            let images: Vec<Value> = phi
                .source()
                .gens()
                .iter()
                .zip(phi.images())
                .map(|(g, img)| json!({ "generator": g.name, "image": tgt.format(img) }))
                .collect();
            let v = json!({
                "psi": psi.name,
                "eta": eta.name,
                "source": phi.source().name(),
                "target": tgt.name(),
                "images": images,
                "commutes": back.agrees_with(&psi.morphism),
                "window": window,
                "status": "exact",
            });
            (v, 0)
        }
        Command::Tc { algebra, n, battery } => {
            let rep = tc_report(&algebra_of(ws, algebra)?, *n, &battery_options(cli, battery), enlarge(battery))?;
            let (v, code) = battery_outcome(rep, cli.strict);
            (with_loop_assumption(v, battery), code)
        }
        Command::Atc { algebra, n, battery } => {
            let rep = atc_report(&algebra_of(ws, algebra)?, *n, &battery_options(cli, battery), enlarge(battery))?;
            let (v, code) = battery_outcome(rep, cli.strict);
            (with_loop_assumption(v, battery), code)
        }
        Command::Invariants { morphism, candidate, battery } => {
            let decl = ws.morphism(morphism)?;
            let mut opts = battery_options(cli, battery);
            for c in candidate {
                let j = ws.ideal(c).ok_or_else(|| MildError::UnknownName(c.clone()))?;
                if j.algebra != decl.source {
                    return Err(MildError::Invalid(format!("candidate {c} is not an ideal of {}", decl.source)));
                }
                opts.candidates.push(j.ideal.clone());
            }
            let mut rep = invariants_report(&decl.morphism, &opts, enlarge(battery))?;
            rep.source = decl.name.clone();
            battery_outcome(rep, cli.strict)
        }
        Command::VerifyRetraction { morphism } => {
            let (r, j) = two_morphisms(ws, morphism, "verify-retraction")?;
            let check = verify_multiplicative_retraction(&r.morphism, &j.morphism, window);
            let v = json!({
                "candidate": r.name,
                "inclusion": j.name,
                "ok": check.ok,
                "witness": check.witness,
                "window": window,
                "status": "exact",
            });
            (v, if check.ok { 0 } else { 1 })
        }
    };
    Ok(Outcome { report: json!({ "command": echo(cli, ws), "result": result }), exit_code })
}

/// Load the workspace and run the command.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let ws = load_workspace(cli)?;
    run_on(cli, &ws)
}

/// Rayon pool sized by `MILD_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("MILD_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| MildError::Invalid(format!("MILD_THREADS={v} is not a number")))?;
        b = b.num_threads(n.max(1));
    }
    b.build().map_err(|e| MildError::Invalid(format!("cannot start the thread pool: {e}")))
}

fn module_text(v: &serde_json::Map<String, Value>) -> Option<String> {
    let free = v.get("free_rank")?.as_u64()?;
    let torsion = v.get("torsion")?.as_array()?;
    v.get("degree")?;
    let mut parts = Vec::new();
    match free {
        0 => {}
        1 => parts.push("R".to_string()),
        k => parts.push(format!("R^{k}")),
    }
    for t in torsion {
        parts.push(format!("R/{}", t.as_str().unwrap_or("?")));
    }
    Some(if parts.is_empty() { "0".into() } else { parts.join(" + ") })
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if let Value::Object(inner) = x {
                    if let Some(s) = module_text(inner) {
                        out.push_str(&format!("{pad}{k}: {s}\n"));
                        continue;
                    }
                    if let (Some(d), 1..=4) = (inner.get("display"), inner.len()) {
                        out.push_str(&format!("{pad}{k}: {}\n", scalar_text(d)));
                        continue;
                    }
                }
                match x {
                    Value::Object(m) if m.is_empty() => out.push_str(&format!("{pad}{k}: {{}}\n")),
                    Value::Array(a) if a.is_empty() => out.push_str(&format!("{pad}{k}: []\n")),
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar_text(x))),
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match x {
                    Value::Object(m) => {
                        if let Some(s) = module_text(m) {
                            let d = m.get("degree").map(scalar_text).unwrap_or_default();
                            out.push_str(&format!("{pad}H^{d} = {s}\n"));
                        } else {
                            out.push_str(&format!("{pad}-\n"));
                            render(x, indent + 1, out);
                        }
                    }
                    Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar_text(x))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar_text(v))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        let mut v = vec!["mild"];
        v.extend_from_slice(args);
        Cli::try_parse_from(v).unwrap()
    }

    #[test]
    fn corpus_parses_and_round_trips() {
        let ws = parse(CORPUS, 9).unwrap();
        assert!(ws.algebras.len() >= 8);
        assert_eq!(parse(&ws.to_source(), 9).unwrap(), ws);
    }

    #[test]
    fn cohomology_of_torsion_sphere() {
        let out = run(&cli(&["cohomology", "--algebra", "S2t", "--max-degree", "6"])).unwrap();
        let h4 = &out.report["result"]["entries"][4];
        assert_eq!(h4["free_rank"], 0);
        assert_eq!(h4["torsion"], json!(["3"]));
        assert!(out.text().contains("H^4 = R/3"));
        let q = run(&cli(&["cohomology", "--algebra", "S2t", "--max-degree", "6", "--ring", "Q"])).unwrap();
        assert_eq!(q.report["result"]["entries"][4]["torsion"], json!([]));
    }

    #[test]
    fn unknown_algebra_exits_two() {
        let err = run(&cli(&["cohomology", "--algebra", "Nope"])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn non_d_stable_quotient_exits_three() {
        let err = run(&cli(&["cohomology", "--algebra", "Jw"])).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn lift_through_quotient() {
        let out = run(&cli(&["lift", "--morphism", "s2", "--morphism", "q2"])).unwrap();
        assert_eq!(out.report["result"]["commutes"], json!(true));
    }

    #[test]
    fn strict_flags_uncertified_reports() {
        let out = run(&cli(&["tc", "--algebra", "S2", "--ring", "Q", "--m-max", "1", "--max-degree", "6", "--strict"]))
            .unwrap();
        let certified = out.report["result"]["members"]
            .as_object()
            .unwrap()
            .values()
            .all(|m| m["status"] == "exact");
        assert_eq!(out.exit_code, if certified { 0 } else { 4 });
    }
}
