//! The `qfactor` command line.
//!
//! Exit codes: 0 success, 1 parse or I/O error, 2 axiom violation,
//! 3 disconnected quandle, 4 non-normal subgroup, 5 no factorization,
//! 6 failed precondition, 7 internal consistency failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::catalog::{self, QuandleRecord, MAX_GROUP_ORDER};
use crate::coset::to_presentation;
use crate::error::Error;
use crate::factorize::{check_agreement, factor_oracle, OracleOutcome};
use crate::format::{HomFile, QuandleFile};
use crate::permgroup::{self, generate, small_generating_set, Permutation};
use crate::quandle::{Quandle, QuandleHom};
use crate::quotient::realizable_closure_both;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_AXIOM: i32 = 2;
pub const EXIT_DISCONNECTED: i32 = 3;
pub const EXIT_NOT_NORMAL: i32 = 4;
pub const EXIT_NO_FACTORIZATION: i32 = 5;
pub const EXIT_PRECONDITION: i32 = 6;
pub const EXIT_INTERNAL: i32 = 7;

/// Overrides the group element cap.
pub const ELEMENT_CAP_VAR: &str = "QFACTOR_ELEMENT_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "qfactor",
    version,
    about = "Finite quandles, inner automorphism groups and factorization of surjections"
)]
pub struct Cli {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Triples,
    Exhaustive,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the quandle axioms.
    Validate { file: PathBuf },
    /// Inner automorphism group, orbits and connectivity.
    Inn { file: PathBuf },
    /// Coset presentation (G, H, η) at a base point.
    Present {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        base: usize,
    },
    /// Realizable-kernel closure of a normal subgroup of Inn(Q).
    Closure {
        file: PathBuf,
        /// Generator in cycle notation; repeat for more. None means the trivial subgroup.
        #[arg(long = "subgroup")]
        subgroup: Vec<String>,
    },
    /// Decide whether the surjection in GFILE factors through the one in HFILE.
    Factor {
        gfile: PathBuf,
        hfile: PathBuf,
        /// Use only the pointwise decision.
        #[arg(long)]
        oracle: bool,
        /// Print every step of the structural decision.
        #[arg(long)]
        trace: bool,
    },
    /// Enumerate connected quandles of a given size.
    Enumerate {
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Triples)]
        method: Method,
        /// Write one quandle file per result into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = MAX_GROUP_ORDER)]
        max_group_order: usize,
    },
}

/// What a command printed, and its exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit: i32,
    pub json: Value,
    pub text: String,
}

impl Outcome {
    fn ok(json: Value, lines: Vec<String>) -> Self {
        Outcome {
            exit: EXIT_OK,
            json,
            text: lines.join("\n"),
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::Io(_) => "io",
        Error::DegreeMismatch { .. } => "degree_mismatch",
        Error::PointOutOfRange { .. } => "point_out_of_range",
        Error::NotAPermutation(_) => "not_a_permutation",
        Error::CapExceeded { .. } => "cap_exceeded",
        Error::LimitExceeded { .. } => "limit_exceeded",
        Error::NotSubgroup { .. } => "not_subgroup",
        Error::NotNormal { .. } => "not_normal",
        Error::Domain(_) => "domain",
        Error::MalformedTable(_) => "malformed_table",
        Error::Axiom(_) => "axiom",
        Error::NotHomomorphism { .. } => "not_homomorphism",
        Error::NotSurjective { .. } => "not_surjective",
        Error::Disconnected { .. } => "disconnected",
        Error::NotRealizable { .. } => "not_realizable",
        Error::Presentation(_) => "presentation",
        Error::DifferentSources => "different_sources",
        Error::Internal(_) => "internal",
    }
}

/// The exit code for an error. `factor` treats disconnected inputs as a
/// failed precondition.
pub fn exit_code(e: &Error, in_factor: bool) -> i32 {
    match e {
        Error::Parse(_)
        | Error::Io(_)
        | Error::MalformedTable(_)
        | Error::NotAPermutation(_)
        | Error::PointOutOfRange { .. } => EXIT_PARSE,
        Error::Axiom(_) => EXIT_AXIOM,
        Error::Disconnected { .. } if in_factor => EXIT_PRECONDITION,
        Error::Disconnected { .. } => EXIT_DISCONNECTED,
        Error::NotNormal { .. } => EXIT_NOT_NORMAL,
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_PRECONDITION,
    }
}

fn error_outcome(e: &Error, in_factor: bool) -> Outcome {
    let exit = exit_code(e, in_factor);
    let mut doc = json!({
        "status": "error",
        "exit_code": exit,
        "error": error_kind(e),
        "message": e.to_string(),
    });
    match e {
        Error::Axiom(v) => doc["violation"] = json!(v),
        Error::Disconnected { orbits } => doc["orbits"] = json!(orbits),
        Error::NotNormal { conjugator, element } => {
            doc["conjugator"] = json!(conjugator);
            doc["element"] = json!(element);
        }
        _ => {}
    }
    Outcome {
        exit,
        json: doc,
        text: format!("error: {e}"),
    }
}

fn load_quandle(path: &Path) -> Result<(QuandleFile, Quandle), Error> {
    let file = QuandleFile::read(path)?;
    let q = file.to_quandle()?;
    Ok((file, q))
}

fn perms(list: &[Permutation]) -> Vec<String> {
    list.iter().map(Permutation::to_string).collect()
}

fn cmd_validate(file: &Path) -> Result<Outcome, Error> {
    let (parsed, q) = load_quandle(file)?;
    let name = parsed.name.clone().unwrap_or_else(|| file.display().to_string());
    Ok(Outcome::ok(
        json!({"status": "ok", "name": name, "size": q.size(), "axioms": ["i", "ii", "iii"], "valid": true}),
        vec![format!(
            "{name}: valid quandle of size {}; axioms i, ii, iii hold",
            q.size()
        )],
    ))
}

fn cmd_inn(file: &Path) -> Result<Outcome, Error> {
    let (_, q) = load_quandle(file)?;
    let inn = q.inn()?;
    let mut gens = q.symmetries();
    gens.sort();
    gens.dedup();
    gens.retain(|g| !g.is_identity());
    let orbits = q.orbits();
    let connected = orbits.len() == 1;
    let lines = vec![
        format!("|Inn(Q)| = {}", inn.order()),
        format!(
            "generators: {}",
            if gens.is_empty() {
                "none".into()
            } else {
                perms(&gens).join(" ")
            }
        ),
        format!("orbits: {orbits:?}"),
        format!("connected: {connected}"),
        format!("abelian: {}", inn.is_abelian()),
    ];
    Ok(Outcome::ok(
        json!({
            "status": "ok",
            "order": inn.order(),
            "generators": perms(&gens),
            "orbits": orbits,
            "connected": connected,
            "abelian": inn.is_abelian(),
        }),
        lines,
    ))
}

fn cmd_present(file: &Path, base: usize) -> Result<Outcome, Error> {
    let (_, q) = load_quandle(file)?;
    if base >= q.size() {
        return Err(Error::Domain(format!(
            "base point {base} is not in a quandle of size {}",
            q.size()
        )));
    }
    let (p, ident) = to_presentation(&q, base)?;
    let gens = small_generating_set(&p.group);
    let coset_rows: Vec<Vec<usize>> = (0..p.index())
        .map(|a| (0..p.index()).map(|b| p.operate(a, b)).collect())
        .collect();
    let cosets: Vec<Value> = p
        .cosets
        .iter()
        .zip(&ident)
        .map(|(c, point)| json!({"representative": c.representative, "point": point}))
        .collect();
    let mut lines = vec![
        format!("base point: {base}"),
        format!(
            "G = Inn(Q), order {}, generated by {}",
            p.group.order(),
            if gens.is_empty() {
                "()".into()
            } else {
                perms(&gens).join(" ")
            }
        ),
        format!(
            "H = stabilizer of {base}: {{{}}}",
            perms(p.stabilizer.elements()).join(", ")
        ),
        format!("η = S_{base} = {}", p.eta),
        "cosets (representative g, point q·g):".into(),
    ];
    for (c, point) in p.cosets.iter().zip(&ident) {
        lines.push(format!("  H{} -> {point}", c.representative));
    }
    lines.push("coset table (Hg ▷ Hγ = Hgγ⁻¹ηγ, by coset index):".into());
    for row in &coset_rows {
        lines.push(format!("  {row:?}"));
    }
    lines.push("operation formula: verified against Q".into());
    Ok(Outcome::ok(
        json!({
            "status": "ok",
            "base": base,
            "group_order": p.group.order(),
            "group_generators": perms(&gens),
            "stabilizer": perms(p.stabilizer.elements()),
            "eta": p.eta,
            "cosets": cosets,
            "coset_table": coset_rows,
            "formula_verified": true,
        }),
        lines,
    ))
}

fn cmd_closure(file: &Path, subgroup: &[String]) -> Result<Outcome, Error> {
    let (_, q) = load_quandle(file)?;
    let gens = subgroup
        .iter()
        .map(|s| Permutation::parse_cycles(s, q.size()))
        .collect::<Result<Vec<_>, _>>()?;
    let n = generate(q.size(), &gens)?;
    let inn = q.inn()?;
    if let Some(w) = n.subgroup_witness(inn) {
        return Err(Error::NotSubgroup { witness: w.clone() });
    }
    permgroup::require_normal(&n, inn)?;
    let (via_kernel, via_stabilizers) = realizable_closure_both(&q, &n)?;
    let realizable = via_kernel == n;
    let witness = via_kernel.elements().iter().find(|g| !n.contains(g)).cloned();
    let mut lines = vec![
        format!(
            "|N| = {}, generated by {}",
            n.order(),
            if gens.is_empty() {
                "()".into()
            } else {
                perms(&gens).join(" ")
            }
        ),
        format!("|N^Q| = {} as ker Inn(c_N)", via_kernel.order()),
        format!(
            "|N^Q| = {} as the intersection of block stabilizers",
            via_stabilizers.order()
        ),
        format!("realizable: {realizable}"),
    ];
    if let Some(w) = &witness {
        lines.push(format!("witness: {w} ∈ N^Q \\ N"));
    }
    Ok(Outcome::ok(
        json!({
            "status": "ok",
            "order": n.order(),
            "closure_order": via_kernel.order(),
            "closure_by_kernel": perms(via_kernel.elements()),
            "closure_by_stabilizers": perms(via_stabilizers.elements()),
            "realizable": realizable,
            "witness": witness,
        }),
        lines,
    ))
}

fn require_factor_inputs(g: &QuandleHom, h: &QuandleHom) -> Result<(), Error> {
    if g.source() != h.source() {
        return Err(Error::DifferentSources);
    }
    for q in [g.source(), g.target(), h.target()] {
        q.require_connected()?;
    }
    g.require_surjective()?;
    h.require_surjective()
}

fn cmd_factor(gfile: &Path, hfile: &Path, oracle_only: bool, trace: bool) -> Result<Outcome, Error> {
    let g = HomFile::load(gfile)?;
    let h = HomFile::load(hfile)?;
    require_factor_inputs(&g, &h)?;
    if oracle_only {
        return Ok(match factor_oracle(&g, &h)? {
            OracleOutcome::Factors(phi) => Outcome::ok(
                json!({"status": "ok", "exists": true, "phi": phi.map(), "method": "oracle"}),
                vec![format!("φ = {:?}", phi.map())],
            ),
            OracleOutcome::Separates { first, second } => Outcome {
                exit: EXIT_NO_FACTORIZATION,
                json: json!({
                    "status": "no_factorization",
                    "exists": false,
                    "method": "oracle",
                    "condition": "PointsSeparated",
                    "witness": [first, second],
                }),
                text: format!(
                    "no factorization: h({first}) = h({second}) = {} but g({first}) = {} ≠ g({second}) = {}",
                    h.apply(first),
                    g.apply(first),
                    g.apply(second)
                ),
            },
        });
    }
    let report = check_agreement(&g, &h)?;
    let trace_lines = report.certificate.trace();
    let mut lines = Vec::new();
    if trace {
        lines.extend(trace_lines.iter().cloned());
    }
    let mut doc = json!({"status": "ok", "exists": report.exists, "method": "both", "agreement": true});
    if trace {
        doc["trace"] = json!(trace_lines);
    }
    match (&report.phi, &report.failure) {
        (Some(phi), _) => {
            doc["phi"] = json!(phi.map());
            lines.push(format!("φ = {:?}", phi.map()));
            lines.push("oracle agrees".into());
            Ok(Outcome::ok(doc, lines))
        }
        (None, Some(failure)) => {
            doc["status"] = json!("no_factorization");
            doc["condition"] = json!(failure.name());
            doc["witness"] = json!(failure.witness());
            lines.push(format!("no factorization: {} ({failure})", failure.name()));
            lines.push("oracle agrees".into());
            Ok(Outcome {
                exit: EXIT_NO_FACTORIZATION,
                json: doc,
                text: lines.join("\n"),
            })
        }
        (None, None) => Err(Error::internal("certificate has neither φ nor a failure")),
    }
}

fn record_json(r: &QuandleRecord, path: Option<&PathBuf>) -> Result<Value, Error> {
    Ok(json!({
        "size": r.quandle.size(),
        "inn_order": r.quandle.inn()?.order(),
        "provenance": r.provenance,
        "table": r.quandle.rows(),
        "file": path.map(|p| p.display().to_string()),
    }))
}

fn cmd_enumerate(n: usize, method: Method, out: Option<&PathBuf>, max_group_order: usize) -> Result<Outcome, Error> {
    let records = match method {
        Method::Triples => catalog::enumerate_connected_by_triples(n, max_group_order)?,
        Method::Exhaustive => catalog::enumerate_connected_exhaustive(n)?,
        Method::Both => {
            let triples = catalog::enumerate_connected_by_triples(n, max_group_order)?;
            let exhaustive = catalog::enumerate_connected_exhaustive(n)?;
            let forms = |rs: &[QuandleRecord]| -> Vec<Option<Vec<usize>>> {
                rs.iter().map(|r| r.canonical_form.clone()).collect()
            };
            if forms(&triples) != forms(&exhaustive) {
                return Err(Error::internal(format!(
                    "triples found {} connected quandles of size {n}, exhaustive search {}",
                    triples.len(),
                    exhaustive.len()
                )));
            }
            triples
        }
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    let mut entries = Vec::new();
    let mut lines = vec![format!("{} connected quandle(s) of size {n}", records.len())];
    if method == Method::Both {
        lines.push("triples and exhaustive search agree".into());
    }
    for (i, r) in records.iter().enumerate() {
        let name = format!("connected_{n}_{i}");
        let path = match out {
            Some(dir) => {
                let path = dir.join(format!("{name}.json"));
                let text = QuandleFile::from_quandle(&r.quandle, Some(name.clone())).to_text();
                fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                Some(path)
            }
            None => None,
        };
        lines.push(format!("  {name}: |Inn| = {}", r.quandle.inn()?.order()));
        entries.push(record_json(r, path.as_ref())?);
    }
    Ok(Outcome::ok(
        json!({
            "status": "ok",
            "size": n,
            "method": format!("{method:?}").to_lowercase(),
            "count": records.len(),
            "agreement": if method == Method::Both { Some(true) } else { None },
            "quandles": entries,
        }),
        lines,
    ))
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Validate { file } => cmd_validate(file),
        Command::Inn { file } => cmd_inn(file),
        Command::Present { file, base } => cmd_present(file, *base),
        Command::Closure { file, subgroup } => cmd_closure(file, subgroup),
        Command::Factor {
            gfile,
            hfile,
            oracle,
            trace,
        } => cmd_factor(gfile, hfile, *oracle, *trace),
        Command::Enumerate {
            n,
            method,
            out,
            max_group_order,
        } => cmd_enumerate(*n, *method, out.as_ref(), *max_group_order),
    };
    result.unwrap_or_else(|e| error_outcome(&e, matches!(cli.command, Command::Factor { .. })))
}

fn apply_element_cap() -> Result<(), String> {
    match std::env::var(ELEMENT_CAP_VAR) {
        Ok(value) => {
            let cap = value
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("{ELEMENT_CAP_VAR} must be a positive integer, got {value:?}"))?;
            if cap == 0 {
                return Err(format!("{ELEMENT_CAP_VAR} must be positive"));
            }
            permgroup::set_element_cap(cap);
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

/// Parses arguments, runs the command, prints its report, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = apply_element_cap() {
        eprintln!("error: {msg}");
        return EXIT_PARSE;
    }
    let outcome = execute(&cli);
    if cli.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&outcome.json).expect("reports serialize")
        );
    } else if outcome.exit == EXIT_OK || outcome.exit == EXIT_NO_FACTORIZATION {
        println!("{}", outcome.text);
    } else {
        eprintln!("{}", outcome.text);
    }
    outcome.exit
}
