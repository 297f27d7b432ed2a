//! Command-line front end.
//!
//! Output protocol: stdout carries exactly one status line, `s VERIFIED` or
//! `s NOT VERIFIED`; all diagnostics go to stderr. Exit code 0 means
//! verified, 1 means not verified, 2 means the run could not be carried out
//! (usage, I/O, or formula parse errors).

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use lratcheck::{
    apply_unverified, brute_force_sat, parse_dimacs, run_entailment, run_partitioned,
    run_refutation, CnfDocument, Diagnostics, EnumerationBudget, ProofLine, ProofStream,
    RunResult, Strictness,
};

const EXIT_VERIFIED: i32 = 0;
const EXIT_NOT_VERIFIED: i32 = 1;
const EXIT_ERROR: i32 = 2;

#[derive(Parser)]
#[command(
    name = "lratcheck",
    version,
    about = "Check LRAT clausal proofs of unsatisfiability",
    after_help = "Exit codes: 0 verified, 1 not verified, 2 usage/IO/parse error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// DIMACS CNF formula.
    cnf: PathBuf,
    /// LRAT proof.
    proof: PathBuf,
    /// Downgrade pedantic errors (satisfied hints, header mismatches,
    /// unsorted clauses, dead group hints) to warnings.
    #[arg(long)]
    lenient: bool,
    /// Print a timing and memory summary to stderr.
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the proof refutes the formula.
    Check(CommonOpts),
    /// Check that the proof reduces the formula to a target formula.
    Entail {
        #[command(flatten)]
        common: CommonOpts,
        /// Target DIMACS CNF that must be entailed.
        #[arg(long)]
        target: PathBuf,
    },
    /// Split the proof and check the parts concurrently.
    Pcheck {
        #[command(flatten)]
        common: CommonOpts,
        /// Split point(s): the proof line count ending each part but the last.
        #[arg(long, required = true, num_args = 1..)]
        split: Vec<u64>,
        /// Worker count; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,
        /// Optional per-part target CNFs overriding the computed ones.
        #[arg(long, num_args = 1..)]
        targets: Option<Vec<PathBuf>>,
    },
    /// Apply the proof without verification and emit the resulting formula.
    Apply {
        #[command(flatten)]
        common: CommonOpts,
        /// Output file for the DIMACS result; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Brute-force satisfiability of a small formula (fixture support).
    #[command(hide = true)]
    Oracle {
        /// DIMACS CNF formula.
        cnf: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Check(common) => cmd_check(common),
        Command::Entail { common, target } => cmd_entail(common, target),
        Command::Pcheck {
            common,
            split,
            jobs,
            targets,
        } => cmd_pcheck(common, split, jobs, targets),
        Command::Apply { common, output } => cmd_apply(common, output),
        Command::Oracle { cnf } => cmd_oracle(cnf),
    };
    std::process::exit(code);
}

fn strictness(common: &CommonOpts) -> Strictness {
    if common.lenient {
        Strictness::Lenient
    } else {
        Strictness::Strict
    }
}

/// Prints the status line for a run that could not be carried out.
fn input_error_status() -> i32 {
    println!("s NOT VERIFIED");
    EXIT_ERROR
}

fn fail_with_status(message: impl std::fmt::Display) -> i32 {
    eprintln!("lratcheck: error: {message}");
    input_error_status()
}

fn load_cnf(path: &Path, strictness: Strictness, diag: &mut Diagnostics) -> Result<CnfDocument, ()> {
    let report = |e: &dyn std::fmt::Display| eprintln!("lratcheck: error: {}: {e}", path.display());
    let bytes = std::fs::read(path).map_err(|e| report(&e))?;
    parse_dimacs(&bytes, strictness, diag).map_err(|e| report(&e))
}

fn open_proof(path: &Path, strictness: Strictness) -> Result<ProofStream<BufReader<File>>, ()> {
    let file = File::open(path)
        .map_err(|e| eprintln!("lratcheck: error: {}: {e}", path.display()))?;
    Ok(ProofStream::new(BufReader::new(file), strictness))
}

fn print_warnings(diag: &Diagnostics) {
    for warning in diag.warnings() {
        eprintln!("lratcheck: warning: {warning}");
    }
}

/// Peak resident set size of this process in kilobytes, from the kernel's
/// high-water mark.
fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn report(result: &RunResult, diag: &Diagnostics, verbose: bool, started: Instant) -> i32 {
    print_warnings(diag);
    if let Some(failure) = &result.failure {
        eprintln!("lratcheck: {failure}");
    }
    if verbose {
        eprintln!("c additions checked: {}", result.steps_checked);
        eprintln!("c deletion lines:    {}", result.deletion_lines);
        eprintln!("c active clauses:    {}", result.final_db.active_len());
        eprintln!("c total time:        {:.3} ms", started.elapsed().as_secs_f64() * 1e3);
        if let Some(kb) = peak_rss_kb() {
            eprintln!("c peak memory:       {kb} kB");
        }
    }
    if result.verified {
        println!("s VERIFIED");
        EXIT_VERIFIED
    } else {
        println!("s NOT VERIFIED");
        if result.failure.as_ref().is_some_and(|f| f.is_io()) {
            EXIT_ERROR
        } else {
            EXIT_NOT_VERIFIED
        }
    }
}

fn cmd_check(common: CommonOpts) -> i32 {
    let started = Instant::now();
    let strictness = strictness(&common);
    let mut diag = Diagnostics::new();
    let cnf = match load_cnf(&common.cnf, strictness, &mut diag) {
        Ok(doc) => doc,
        Err(()) => return input_error_status(),
    };
    let proof = match open_proof(&common.proof, strictness) {
        Ok(stream) => stream,
        Err(()) => return input_error_status(),
    };
    let result = run_refutation(&cnf, proof, strictness, &mut diag);
    report(&result, &diag, common.verbose, started)
}

fn cmd_entail(common: CommonOpts, target: PathBuf) -> i32 {
    let started = Instant::now();
    let strictness = strictness(&common);
    let mut diag = Diagnostics::new();
    let cnf = match load_cnf(&common.cnf, strictness, &mut diag) {
        Ok(doc) => doc,
        Err(()) => return input_error_status(),
    };
    let target = match load_cnf(&target, strictness, &mut diag) {
        Ok(doc) => doc,
        Err(()) => return input_error_status(),
    };
    let proof = match open_proof(&common.proof, strictness) {
        Ok(stream) => stream,
        Err(()) => return input_error_status(),
    };
    let result = run_entailment(&cnf, proof, &target, strictness, &mut diag);
    report(&result, &diag, common.verbose, started)
}

fn cmd_pcheck(
    common: CommonOpts,
    split: Vec<u64>,
    jobs: Option<usize>,
    targets: Option<Vec<PathBuf>>,
) -> i32 {
    let started = Instant::now();
    let strictness = strictness(&common);
    let mut diag = Diagnostics::new();
    let cnf = match load_cnf(&common.cnf, strictness, &mut diag) {
        Ok(doc) => doc,
        Err(()) => return input_error_status(),
    };
    let proof = match open_proof(&common.proof, strictness) {
        Ok(stream) => stream,
        Err(()) => return input_error_status(),
    };

    // Partitioning needs two passes per part, so the proof is materialized.
    let mut lines: Vec<(u64, ProofLine)> = Vec::new();
    for item in proof {
        match item {
            Ok(pair) => lines.push(pair),
            Err(e) => {
                print_warnings(&diag);
                eprintln!("lratcheck: {e}");
                println!("s NOT VERIFIED");
                return if matches!(e.kind, lratcheck::LratErrorKind::Io(_)) {
                    EXIT_ERROR
                } else {
                    EXIT_NOT_VERIFIED
                };
            }
        }
    }

    let total = lines.len() as u64;
    let ordered = split.windows(2).all(|w| w[0] < w[1]);
    if !ordered || split.iter().any(|&s| s == 0 || s >= total) {
        return fail_with_status(format_args!(
            "split points must be strictly increasing and inside the proof (1..{total})"
        ));
    }
    let mut parts: Vec<Vec<(u64, ProofLine)>> = Vec::new();
    let mut start = 0usize;
    for &point in &split {
        parts.push(lines[start..point as usize].to_vec());
        start = point as usize;
    }
    parts.push(lines[start..].to_vec());

    let target_docs = match targets {
        None => None,
        Some(paths) => {
            if paths.len() != parts.len() {
                return fail_with_status(format_args!(
                    "expected {} target files (one per part), got {}",
                    parts.len(),
                    paths.len()
                ));
            }
            let mut docs = Vec::new();
            for path in &paths {
                match load_cnf(path, strictness, &mut diag) {
                    Ok(doc) => docs.push(doc),
                    Err(()) => return input_error_status(),
                }
            }
            Some(docs)
        }
    };

    let jobs = jobs.unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    });
    if jobs == 0 {
        return fail_with_status("--jobs must be at least 1");
    }
    let result = run_partitioned(
        &cnf,
        &parts,
        jobs,
        target_docs.as_deref(),
        strictness,
        &mut diag,
    );
    report(&result, &diag, common.verbose, started)
}

fn cmd_apply(common: CommonOpts, output: Option<PathBuf>) -> i32 {
    let strictness = strictness(&common);
    let mut diag = Diagnostics::new();
    let cnf = match load_cnf(&common.cnf, strictness, &mut diag) {
        Ok(doc) => doc,
        Err(()) => return EXIT_ERROR,
    };
    let proof = match open_proof(&common.proof, strictness) {
        Ok(stream) => stream,
        Err(()) => return EXIT_ERROR,
    };
    match apply_unverified(&cnf, proof, strictness, &mut diag) {
        Ok(db) => {
            print_warnings(&diag);
            let doc =
                CnfDocument::from_clauses(db.iter_active().map(|(_, c)| c.clone()).collect());
            let written = match output {
                Some(path) => File::create(&path).and_then(|mut f| doc.write_dimacs(&mut f)),
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    doc.write_dimacs(&mut lock).and_then(|()| lock.flush())
                }
            };
            match written {
                Ok(()) => EXIT_VERIFIED,
                Err(e) => {
                    eprintln!("lratcheck: error: {e}");
                    EXIT_ERROR
                }
            }
        }
        Err(failure) => {
            print_warnings(&diag);
            eprintln!("lratcheck: {failure}");
            if failure.is_io() {
                EXIT_ERROR
            } else {
                EXIT_NOT_VERIFIED
            }
        }
    }
}

fn cmd_oracle(cnf: PathBuf) -> i32 {
    let mut diag = Diagnostics::new();
    let bytes = match std::fs::read(&cnf) {
        Ok(bytes) => bytes,
        Err(e) => {
            eprintln!("lratcheck: error: {}: {e}", cnf.display());
            return EXIT_ERROR;
        }
    };
    let doc = match parse_dimacs(&bytes, Strictness::Lenient, &mut diag) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("lratcheck: error: {}: {e}", cnf.display());
            return EXIT_ERROR;
        }
    };
    let max_vars = std::env::var("LRAT_MAX_VARS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(16);
    let db = lratcheck::ClauseDb::from_cnf(&doc);
    match brute_force_sat(&db, EnumerationBudget::new(max_vars)) {
        Ok(Some(witness)) => {
            println!("s SATISFIABLE");
            let values: Vec<String> = witness.iter().map(|l| l.to_string()).collect();
            println!("v {} 0", values.join(" "));
            EXIT_VERIFIED
        }
        Ok(None) => {
            println!("s UNSATISFIABLE");
            EXIT_VERIFIED
        }
        Err(e) => {
            eprintln!("lratcheck: error: {e}");
            EXIT_ERROR
        }
    }
}
