use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use commfam::argshift::{
    classical_invariants, orbit_criterion, shift_family, ArgshiftError, InvariantSet,
    InvariantSource,
};
use commfam::config::RunConfig;
use commfam::exact::{parse_poly, Poly, Rational};
use commfam::liealg::{
    catalog, from_json_str, heisenberg_in, to_json_string, LieAlgebra, LieError,
};
use commfam::pipeline::{construct, verify, Certificate, PipelineError, Verdict};
use commfam::poisson::{index, l_value, PolyFamily, Provenance};

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_JACOBI: u8 = 3;
const EXIT_UNSUPPORTED: u8 = 4;
const EXIT_INCOMPLETE: u8 = 5;

#[derive(Parser)]
#[command(
    name = "commfam",
    version,
    about = "Complete commutative families on duals of Lie algebras"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random points per rank computation.
    #[arg(long, global = true, default_value_t = 8)]
    trials: usize,
    /// Sample coordinates are drawn from [-range, range].
    #[arg(long, global = true, default_value_t = 10_000)]
    range: i64,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Structure report: center, radical, nilradical, index.
    Analyze { file: PathBuf },
    /// Shifted invariants for a fixed vector a.
    Shift {
        file: PathBuf,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        a: Vec<String>,
    },
    /// Construct and certify a complete commutative family.
    Complete { file: PathBuf },
    /// Certify a given family (JSON array of polynomials).
    Verify { file: PathBuf, family: PathBuf },
    /// Completeness of shifted invariants on the orbit of xi.
    Orbit {
        file: PathBuf,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        xi: Vec<String>,
    },
    /// Print a builtin algebra as JSON.
    Catalog { name: String, size: usize },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<LieError> for Failure {
    fn from(e: LieError) -> Self {
        let code = match e {
            LieError::JacobiFailure(..) => EXIT_JACOBI,
            _ => EXIT_PARSE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Unsupported(_) => Failure::new(EXIT_UNSUPPORTED, e.to_string()),
            PipelineError::Argshift(ArgshiftError::RetryBudgetExhausted { .. }) => {
                Failure::new(EXIT_INCOMPLETE, e.to_string())
            }
            _ => Failure::new(EXIT_FAILURE, e.to_string()),
        }
    }
}

impl From<ArgshiftError> for Failure {
    fn from(e: ArgshiftError) -> Self {
        Failure::new(EXIT_FAILURE, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = RunConfig {
        seed: cli.opts.seed,
        trials: cli.opts.trials.max(1),
        coeff_range: cli.opts.range.max(1),
        ..RunConfig::default()
    };
    match run(&cli.command, &cfg, cli.opts.json) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: &Command, cfg: &RunConfig, as_json: bool) -> Result<u8, Failure> {
    match cmd {
        Command::Analyze { file } => analyze(file, cfg, as_json),
        Command::Shift { file, a } => shift(file, a, as_json),
        Command::Complete { file } => {
            let (g, inv) = load(file)?;
            let cert = construct(&g, inv.as_ref(), cfg)?;
            report(&g, &cert, as_json);
            Ok(exit_for(&cert))
        }
        Command::Verify { file, family } => {
            let (g, _) = load(file)?;
            let fam = load_family(family, &g)?;
            let cert = verify(&g, fam, cfg)?;
            report(&g, &cert, as_json);
            Ok(exit_for(&cert))
        }
        Command::Orbit { file, xi } => orbit(file, xi, cfg, as_json),
        Command::Catalog { name, size } => {
            let g = catalog(name, *size)?;
            let inv = classical_invariants(name, *size).ok();
            println!(
                "{}",
                to_json_string(&g, inv.as_ref().map(|i| i.generators.as_slice()))
            );
            Ok(0)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(LieAlgebra, Option<InvariantSet>), Failure> {
    let (g, gens) = from_json_str(&read(path)?)?;
    let inv = match gens {
        Some(gens) => Some(InvariantSet::verified(
            &g,
            gens,
            InvariantSource::UserSupplied,
        )?),
        None => None,
    };
    Ok((g, inv))
}

fn load_family(path: &Path, g: &LieAlgebra) -> Result<PolyFamily, Failure> {
    let value: serde_json::Value = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let list = match &value {
        serde_json::Value::Array(items) => items,
        serde_json::Value::Object(map) => match map.get("family") {
            Some(serde_json::Value::Array(items)) => items,
            _ => return Err(Failure::new(EXIT_PARSE, "expected a \"family\" array")),
        },
        _ => return Err(Failure::new(EXIT_PARSE, "expected an array of polynomials")),
    };
    let mut members = Vec::with_capacity(list.len());
    for item in list {
        let src = item
            .as_str()
            .ok_or_else(|| Failure::new(EXIT_PARSE, "family entries must be strings"))?;
        members.push(
            parse_poly(src, g.labels()).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?,
        );
    }
    Ok(PolyFamily::from_members(members, Provenance::User))
}

fn parse_vector(items: &[String], dim: usize) -> Result<Vec<Rational>, Failure> {
    if items.len() != dim {
        return Err(Failure::new(
            EXIT_PARSE,
            format!("expected {dim} coordinates, got {}", items.len()),
        ));
    }
    items
        .iter()
        .map(|s| {
            s.trim()
                .parse::<Rational>()
                .map_err(|_| Failure::new(EXIT_PARSE, format!("not a rational number: {s:?}")))
        })
        .collect()
}

fn require_invariants(g: &LieAlgebra, inv: Option<InvariantSet>) -> Result<InvariantSet, Failure> {
    match inv {
        Some(inv) => Ok(inv),
        None if g.is_abelian() => Ok(InvariantSet::abelian(g)?),
        None => Err(Failure::new(
            EXIT_UNSUPPORTED,
            "no invariants available; add an \"invariants\" field to the algebra file",
        )),
    }
}

fn render(g: &LieAlgebra, polys: &[Poly]) -> Vec<String> {
    polys.iter().map(|p| p.to_string_with(g.labels())).collect()
}

fn analyze(file: &Path, cfg: &RunConfig, as_json: bool) -> Result<u8, Failure> {
    let (g, _) = load(file)?;
    let center = g.center().dim();
    let radical = g.solvable_radical()?.dim();
    let nil = g.nilradical()?;
    let heis = nil.dim() > 1 && heisenberg_in(&g, &nil).is_some();
    let mut rng = cfg.rng_for(2);
    let ind = index(&g, cfg, &mut rng).map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?;
    let l = l_value(g.dim(), ind.index, 0)
        .map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?
        .l;
    if as_json {
        let out = json!({
            "dim": g.dim(),
            "seed": cfg.seed,
            "center": center,
            "radical": radical,
            "nilradical": nil.dim(),
            "solvable": radical == g.dim(),
            "nilpotent": nil.dim() == g.dim(),
            "index": ind.index,
            "l": l,
            "heisenberg_nilradical": heis,
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    } else {
        println!("dim {}", g.dim());
        println!("center {center}");
        println!("radical {radical}");
        println!("nilradical {}", nil.dim());
        println!("ind {}", ind.index);
        println!("l {l}");
        println!("nilradical Heisenberg: {}", if heis { "yes" } else { "no" });
        println!("seed {}", cfg.seed);
    }
    Ok(0)
}

fn shift(file: &Path, a: &[String], as_json: bool) -> Result<u8, Failure> {
    let (g, inv) = load(file)?;
    let inv = require_invariants(&g, inv)?;
    let a = parse_vector(a, g.dim())?;
    let sf = shift_family(&g, &inv, &a)?;
    let members = render(&g, sf.family.members());
    if as_json {
        let out = json!({
            "a": a.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "family": members,
            "commutativity": sf.commutativity,
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    } else {
        for m in &members {
            println!("{m}");
        }
        println!(
            "commutativity: {} ({} pairs)",
            if sf.commutativity.passed {
                "pass"
            } else {
                "fail"
            },
            sf.commutativity.pairs_checked
        );
    }
    Ok(if sf.commutativity.passed {
        0
    } else {
        EXIT_INCOMPLETE
    })
}

fn orbit(file: &Path, xi: &[String], cfg: &RunConfig, as_json: bool) -> Result<u8, Failure> {
    let (g, inv) = load(file)?;
    let inv = require_invariants(&g, inv)?;
    let xi = parse_vector(xi, g.dim())?;
    let rep = orbit_criterion(&g, &inv, &xi, cfg)?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&rep).expect("json"));
    } else if rep.complete {
        println!("complete on orbit, ind g_ξ = ind g = {}", rep.index_g);
    } else {
        println!(
            "not complete on orbit, ind g_ξ = {}, ind g = {}",
            rep.index_stabilizer, rep.index_g
        );
    }
    if !as_json {
        println!("orbit dim {}, dim V = {}", rep.orbit_dim, rep.dim_v);
        if let Some(a) = &rep.shift {
            println!("a = ({})", a.join(", "));
        }
    }
    Ok(if rep.complete { 0 } else { EXIT_INCOMPLETE })
}

fn report(g: &LieAlgebra, cert: &Certificate, as_json: bool) {
    if as_json {
        println!("{}", cert.to_json_string());
        return;
    }
    for m in render(g, cert.members.members()) {
        println!("{m}");
    }
    println!(
        "commutativity: {} ({} pairs)",
        if cert.commutativity.passed {
            "pass"
        } else {
            "fail"
        },
        cert.commutativity.pairs_checked
    );
    for w in &cert.commutativity.failures {
        println!("  {{f{}, f{}}} = {}", w.i + 1, w.j + 1, w.bracket);
    }
    println!("rank {} of l = {}", cert.independence.rank, cert.target_l);
    let verdict = match cert.verdict {
        Verdict::Complete => "complete",
        Verdict::Incomplete => "incomplete",
        Verdict::Failed => "failed",
    };
    println!("verdict: {verdict}");
    println!("seed {}", cert.seed);
}

fn exit_for(cert: &Certificate) -> u8 {
    match cert.verdict {
        Verdict::Complete => 0,
        _ => EXIT_INCOMPLETE,
    }
}
