use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use strata_core::covering::{CoveringData, CoveringError};
use strata_core::dehn_thurston::{trace_components, DtCoordinates, DtError, DtInput, Preset};
use strata_core::families::{catalog_json, catalog_table, enumerate_boundary};
use strata_core::group::DihedralGroup;
use strata_core::pyramidal::{realize_g4, RealizationWitness};
use strata_core::verify;

const VERIFY_FAILED: u8 = 1;
const USAGE: u8 = 2;
const INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "strata", version, about = "Boundary strata of the pyramidal locus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// List the boundary graphs of genus n, merged by isomorphism.
    Enumerate {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Build and check a realization of G4(n, m, d).
    #[command(name = "realize-g4")]
    RealizeG4 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        epsilon: i64,
        /// sigma1 = r^j s.
        #[arg(long, default_value_t = 0)]
        sigma1: i64,
    },
    /// Compute the dual graph of covering data read from a JSON file.
    #[command(name = "dual-graph")]
    DualGraph {
        /// Path to the JSON file, or `-` for standard input.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Trace the components of a zero-twist curve system.
    Trace {
        #[arg(long, conflicts_with = "input", requires = "coords")]
        preset: Option<Preset>,
        /// `8,0,0,1,1,0,0` or `((8,0),(0,0),0,1,1,0,0)`.
        #[arg(long, requires = "preset")]
        coords: Option<String>,
        /// JSON `{"preset": "O5", "coords": [...]}`.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run the realization sweep and the property checks up to genus N.
    Verify {
        #[arg(long)]
        max_genus: u32,
        /// Also sweep every epsilon and sigma1.
        #[arg(long)]
        sweep_params: bool,
        /// Re-check a witness written by realize-g4.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn read_input(path: &Path) -> io::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
    }
}

fn read_json(path: &Path) -> Result<serde_json::Value, String> {
    let text = read_input(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(v: &impl serde::Serialize) {
    emit(&(serde_json::to_string_pretty(v).expect("output serializes") + "\n"));
}

fn enumerate(genus: u32, format: Format) -> ExitCode {
    let strata = match enumerate_boundary(genus) {
        Ok(s) => s,
        Err(e) => return fail(USAGE, e),
    };
    match format {
        Format::Json => print_json(&catalog_json(&strata)),
        Format::Table => emit(&catalog_table(genus, &strata)),
        Format::Dot => {
            for s in &strata {
                let name: Vec<String> = s.tags.iter().map(|t| t.to_string()).collect();
                emit(&s.graph.to_dot(&name.join(" ")));
            }
        }
    }
    ExitCode::SUCCESS
}

fn realize(n: u32, m: u32, d: u32, epsilon: i64, sigma1: i64) -> ExitCode {
    let group = match DihedralGroup::new(n) {
        Ok(g) => g,
        Err(e) => return fail(USAGE, e),
    };
    match realize_g4(n, m, d, epsilon, &group.reflection(sigma1)) {
        Ok(w) => {
            print_json(&w);
            ExitCode::SUCCESS
        }
        Err(e) if e.is_internal() => fail(INTERNAL, e),
        Err(e) => fail(USAGE, e),
    }
}

fn dual_graph(input: &Path, format: Format) -> ExitCode {
    let data = match read_json(input).map_err(CoveringError::Parse).and_then(|v| CoveringData::from_json_value(&v)) {
        Ok(d) => d,
        Err(e) => return fail(USAGE, e),
    };
    match data.dual_graph() {
        Ok(dual) => {
            match format {
                Format::Dot => {
                    emit(&dual.graph.to_dot("dual"));
                    eprintln!(
                        "genus {} (Riemann-Hurwitz {}), {}",
                        dual.genus,
                        dual.riemann_hurwitz_genus,
                        if dual.instability.is_none() { "stable" } else { "not stable" }
                    );
                }
                _ => print_json(&dual),
            }
            if let Some(report) = &dual.instability {
                eprintln!("warning: dual graph is not stable: {report:?}");
            }
            ExitCode::SUCCESS
        }
        Err(e @ CoveringError::Invalid(_)) => fail(USAGE, e),
        Err(e) => fail(INTERNAL, e),
    }
}

fn trace(preset: Option<Preset>, coords: Option<String>, input: Option<PathBuf>) -> ExitCode {
    let result = match (preset, coords, input) {
        (Some(p), Some(c), None) => {
            let d = p.decomposition();
            DtCoordinates::parse(&d, &c).and_then(|c| trace_components(&d, &c))
        }
        (None, None, Some(path)) => match read_json(&path) {
            Ok(v) => match serde_json::from_value::<DtInput>(v) {
                Ok(input) => input.trace(),
                Err(e) => Err(DtError::Parse(e.to_string())),
            },
            Err(e) => Err(DtError::Parse(e)),
        },
        _ => return fail(USAGE, "give either --preset and --coords, or --input"),
    };
    match result {
        Ok(sys) => {
            print_json(&sys);
            ExitCode::SUCCESS
        }
        Err(e @ DtError::Internal(_)) => fail(INTERNAL, e),
        Err(e) => fail(USAGE, e),
    }
}

struct Summary {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
}

fn per_n(name: &'static str, ns: Vec<u32>, f: impl Fn(u32) -> Vec<String> + Sync + Send) -> Summary {
    let cases = ns.len();
    let failures = ns.into_par_iter().map(f).collect::<Vec<_>>().concat();
    Summary { name, cases, failures }
}

fn run_verify(max_genus: u32, sweep: bool, witness: Option<PathBuf>) -> ExitCode {
    if max_genus < 3 {
        return fail(USAGE, format!("--max-genus must be at least 3, got {max_genus}"));
    }
    let mut summaries = Vec::new();

    let cases = verify::realization_cases(max_genus, sweep);
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|c| verify::check_case(c).err().map(|e| format!("{c:?}: {e}")))
        .collect();
    summaries.push(Summary {
        name: "realization",
        cases: cases.len(),
        failures,
    });

    let genera: Vec<u32> = (3..=max_genus).collect();
    summaries.push(per_n("families", genera.clone(), verify::check_families));
    summaries.push(per_n("identity stratum", genera.clone(), verify::check_identity_stratum));
    summaries.push(per_n("words", genera.clone(), |n| verify::check_words(n, 25)));
    summaries.push(per_n(
        "group axioms",
        genera.iter().copied().filter(|&n| n <= 20).collect(),
        verify::check_group,
    ));
    summaries.push(Summary {
        name: "tracer",
        cases: 81,
        failures: verify::check_tracer(40),
    });

    if let Some(path) = witness {
        let w = read_json(&path).and_then(|v| serde_json::from_value::<RealizationWitness>(v).map_err(|e| e.to_string()));
        let failures = match w {
            Ok(w) => w.check().err().map(|e| e.to_string()).into_iter().collect(),
            Err(e) => return fail(USAGE, e),
        };
        summaries.push(Summary {
            name: "witness",
            cases: 1,
            failures,
        });
    }

    let mut ok = true;
    for s in &summaries {
        println!("{:<18} {:>7} cases  {:>4} failures", s.name, s.cases, s.failures.len());
        if let Some(first) = s.failures.first() {
            ok = false;
            println!("  first failure: {first}");
        }
    }
    if ok {
        println!("all checks passed");
        ExitCode::SUCCESS
    } else {
        ExitCode::from(VERIFY_FAILED)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Enumerate { genus, format } => enumerate(genus, format),
        Command::RealizeG4 {
            n,
            m,
            d,
            epsilon,
            sigma1,
        } => realize(n, m, d, epsilon, sigma1),
        Command::DualGraph { input, format } => dual_graph(&input, format),
        Command::Trace { preset, coords, input } => trace(preset, coords, input),
        Command::Verify {
            max_genus,
            sweep_params,
            witness,
        } => run_verify(max_genus, sweep_params, witness),
    }
}
