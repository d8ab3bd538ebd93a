use biplane_core::biplane::block_size_for_points;
use biplane_core::extract::{check_lemma1, core_sums, CoreSumCheck};
use biplane_core::fixtures;
use biplane_core::search::PruneRule;
use biplane_core::{
    assemble_b4c, extract_design, family_generate, parse_int_matrices, parse_matrices, search_symmetric_canonical,
    verify_biplane, verify_pbibd, AssociationScheme, BinaryMatrix, Error, ErrorKind, IncidenceStructure, IntMatrix,
    SearchConfig,
};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const SCHEMA_VERSION: u32 = 1;

/// Biplane matrices, their three-class cores, and association schemes.
///
/// Exit status: 0 verified, 1 property fails, 2 bad input or usage, 3 a
/// consequence that should always hold did not.
#[derive(Parser)]
#[command(name = "biplane", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report whether a matrix is a biplane or a partially balanced design.
    Verify { file: PathBuf },
    /// Cut the three-class core out of a symmetric canonical biplane matrix.
    Extract {
        file: PathBuf,
        /// Only check core row and column sums. Accepts a bare core too.
        #[arg(long)]
        lenient: bool,
        /// Write the core matrix here.
        #[arg(long)]
        core_out: Option<PathBuf>,
    },
    /// Generate the design [[I, L], [L, I]] on 2m points.
    Family {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Search for symmetric canonical biplane matrices with full trace.
    Search {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_solutions: Option<usize>,
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long, env = "BIPLANE_THREADS", default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Append solutions to this file.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Required for k > 6.
        #[arg(long)]
        long_running: bool,
        /// Switch off a pruning rule, by name. May be repeated.
        #[arg(long = "disable-rule", value_parser = parse_rule)]
        disable_rule: Vec<PruneRule>,
    },
    /// Check a relation matrix against the association scheme axioms.
    Scheme { file: PathBuf },
    /// Write the bundled reference matrices to a directory.
    Fixtures {
        #[arg(long)]
        dir: PathBuf,
    },
}

fn parse_rule(s: &str) -> Result<PruneRule, String> {
    PruneRule::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = PruneRule::ALL.iter().map(|r| r.name()).collect();
        format!("unknown rule {s:?}; expected one of {}", names.join(", "))
    })
}

/// Outcome of one command: the JSON report and the exit status.
struct Outcome {
    report: Value,
    status: u8,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, status: 0 }
    }

    fn failed(report: Value) -> Self {
        Outcome { report, status: 1 }
    }
}

fn status_of(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Input => 2,
        ErrorKind::Verification => 1,
        ErrorKind::Internal => 3,
    }
}

fn error_json(e: &Error) -> Value {
    json!({ "kind": format!("{:?}", e.kind()).to_lowercase(), "message": e.to_string() })
}

fn read_one(path: &Path) -> Result<BinaryMatrix, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut all = parse_matrices(&text)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        n => Err(Error::Parse { line: 1, message: format!("expected one matrix in {}, found {n}", path.display()) }),
    }
}

fn rows_json(m: &BinaryMatrix) -> Value {
    json!(m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect::<String>())
        .collect::<Vec<_>>())
}

fn verify(path: &Path) -> Result<Outcome, Error> {
    let m = read_one(path)?;
    let biplane = verify_biplane(&m);
    if let Ok(cert) = &biplane {
        let (params, identities) = IncidenceStructure::new(m.clone()).derive_parameters()?;
        return Ok(Outcome::ok(json!({
            "structure": "biplane",
            "certificate": cert,
            "parameters": params,
            "identities": identities,
        })));
    }
    let biplane_err = biplane.unwrap_err();
    match verify_pbibd(&IncidenceStructure::new(m), None) {
        Ok((classes, report)) => {
            let scheme = match AssociationScheme::from_classification(&classes) {
                Ok(s) => json!({ "valid": true, "report": s.report() }),
                Err(e) => json!({ "valid": false, "error": error_json(&e) }),
            };
            let body = json!({
                "structure": if report.is_degenerate() { "degenerate" } else { "pbibd" },
                "not_biplane": error_json(&biplane_err),
                "pbibd": report,
                "scheme": scheme,
            });
            Ok(if report.is_degenerate() { Outcome::failed(body) } else { Outcome::ok(body) })
        }
        Err(e) if e.kind() == ErrorKind::Verification => Ok(Outcome::failed(json!({
            "structure": "none",
            "not_biplane": error_json(&biplane_err),
            "not_pbibd": error_json(&e),
        }))),
        Err(e) => Err(e),
    }
}

fn lenient(m: &BinaryMatrix) -> Result<(CoreSumCheck, &'static str), Error> {
    match block_size_for_points(m.rows()).filter(|&k| k >= 6 && m.is_square()) {
        Some(k) => Ok((check_lemma1(m, k)?, "biplane")),
        None if m.is_square() => Ok((core_sums(m), "core")),
        None => Err(Error::Shape(format!("expected a square matrix, got {}x{}", m.rows(), m.cols()))),
    }
}

fn extract(path: &Path, lenient_mode: bool, core_out: Option<&Path>) -> Result<Outcome, Error> {
    let m = read_one(path)?;
    if lenient_mode {
        let (check, input) = lenient(&m)?;
        let body = json!({ "input": input, "core_sums": check });
        return Ok(if check.holds { Outcome::ok(body) } else { Outcome::failed(body) });
    }
    let r = extract_design(&m)?;
    if let Some(out) = core_out {
        std::fs::write(out, r.core.to_string())?;
    }
    let mut body = serde_json::to_value(r.summary())?;
    body["core"] = rows_json(&r.core);
    Ok(Outcome::ok(body))
}

fn family(m: usize, output: Option<&Path>) -> Result<Outcome, Error> {
    let (s, report) = family_generate(m)?;
    if let Some(out) = output {
        std::fs::write(out, s.matrix().to_string())?;
    }
    Ok(Outcome::ok(json!({ "m": m, "pbibd": report })))
}

struct SearchArgs {
    k: usize,
    max_solutions: Option<usize>,
    node_limit: Option<u64>,
    threads: usize,
    checkpoint: Option<PathBuf>,
    output: Option<PathBuf>,
    long_running: bool,
    disabled: Vec<PruneRule>,
}

fn search(a: SearchArgs) -> Result<Outcome, Error> {
    if a.k > 6 && !a.long_running {
        return Err(Error::Parameter(format!("k = {} may run for a very long time; pass --long-running", a.k)));
    }
    let mut cfg = SearchConfig::new(a.k);
    if let Some(n) = a.max_solutions {
        cfg.max_solutions = n;
    }
    cfg.node_limit = a.node_limit;
    cfg.threads = a.threads;
    cfg.checkpoint = a.checkpoint;
    cfg.disabled = a.disabled;
    let out = search_symmetric_canonical(&cfg)?;
    if let Some(path) = &a.output {
        let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        for m in &out.solutions {
            write!(f, "{m}")?;
        }
    }
    Ok(Outcome::ok(serde_json::to_value(out.summary())?))
}

fn scheme(path: &Path) -> Result<Outcome, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut all: Vec<IntMatrix> = parse_int_matrices(&text)?;
    if all.len() != 1 {
        return Err(Error::Parse { line: 1, message: format!("expected one relation matrix, found {}", all.len()) });
    }
    let r = all.remove(0);
    match AssociationScheme::from_relation_matrix(&r) {
        Ok(s) => {
            let closure = s.bose_mesner_check()?;
            Ok(Outcome::ok(json!({ "scheme": s.report(), "bose_mesner": closure })))
        }
        Err(e) if e.kind() == ErrorKind::Verification => Ok(Outcome::failed(json!({ "error": error_json(&e) }))),
        Err(e) => Err(e),
    }
}

fn write_all(path: &Path, matrices: &[BinaryMatrix], comment: &str) -> Result<(), Error> {
    let mut text = format!("# {comment}\n");
    for m in matrices {
        text.push_str(&m.to_string());
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn write_fixtures(dir: &Path) -> Result<Outcome, Error> {
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let mut put = |name: &str, matrices: &[BinaryMatrix], comment: &str| -> Result<(), Error> {
        write_all(&dir.join(name), matrices, comment)?;
        files.push(name.to_string());
        Ok(())
    };
    put("b4c.txt", &[assemble_b4c()], "order-4 biplane B_4c, symmetric canonical form with full trace")?;
    put("associates_6.txt", &fixtures::six_point_associates(), "A_0..A_3 of the six-point scheme")?;
    put(
        "associates_16.txt",
        &fixtures::sixteen_point_associates(),
        "A_0..A_3 as printed for the 16-point design; not closed under multiplication",
    )?;
    for (name, m) in fixtures::order9_cores().into_iter().chain(fixtures::order7_cores()) {
        put(&format!("{name}.txt"), &[m], name)?;
    }
    std::fs::write(dir.join("r_prime.txt"), fixtures::source("relation_r_prime").expect("bundled"))?;
    files.push("r_prime.txt".into());
    let manifest = json!({
        "schema_version": SCHEMA_VERSION,
        "files": files,
        "automorphism_group_order": { "b4c": fixtures::AUT_B4C, "b9e": fixtures::AUT_B9E },
    });
    std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    Ok(Outcome::ok(manifest))
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Verify { file } => verify(&file),
        Command::Extract { file, lenient, core_out } => extract(&file, lenient, core_out.as_deref()),
        Command::Family { m, output } => family(m, output.as_deref()),
        Command::Search { k, max_solutions, node_limit, threads, checkpoint, output, long_running, disable_rule } => {
            search(SearchArgs {
                k,
                max_solutions,
                node_limit,
                threads,
                checkpoint,
                output,
                long_running,
                disabled: disable_rule,
            })
        }
        Command::Scheme { file } => scheme(&file),
        Command::Fixtures { dir } => write_fixtures(&dir),
    }
}

/// Runs one parsed command and returns the report with its exit status.
fn execute(cli: Cli) -> (Value, u8) {
    let (mut report, status) = match run(cli) {
        Ok(o) => (o.report, o.status),
        Err(e) => {
            eprintln!("error: {e}");
            (json!({ "error": error_json(&e) }), status_of(&e))
        }
    };
    report["schema_version"] = json!(SCHEMA_VERSION);
    (report, status)
}

fn main() -> ExitCode {
    let (report, status) = execute(Cli::parse());
    // A closed pipe on stdout is not worth a panic.
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&report).expect("JSON values serialize"));
    ExitCode::from(status)
}
