//! Command-line front end over the meshpat library: avoider counting,
//! rule and avoidance classification, Wilf reports, and verification of
//! counting sequences and certificate logs.
//!
//! Exit codes: 0 on success or a matched expectation, 1 on an expectation
//! or verification mismatch, 2 on usage, parse, or I/O errors.

mod output;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use meshpat::avoidance::{avoider_levels, signature_with_mode, AvoidanceTask};
use meshpat::classify::{
    comp_partition_with_mode, reconcile, symmetry_reduce_231, wilf_comp_partition_with_mode,
};
use meshpat::rules::rule_partition_with_certificates;
use meshpat::series::{
    a035929_series, catalan_series, fine_series, maxl_series, minend_series,
    motzkin_system_series, verify_counts, Series,
};
use meshpat::{
    EquivalencePartition, ExecMode, MeshPattern, ParseError, Permutation, RuleCertificate, RuleSet,
};
use output::{partition_csv, write_atomic};
use std::path::PathBuf;
use std::process::ExitCode;

/// Mesh pattern avoidance under a dominating classical pattern.
#[derive(Parser)]
#[command(name = "meshpat", version)]
struct Cli {
    /// Worker threads for sweeps; 1 forces sequential execution
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count avoiders of a mesh pattern within avoiders of a dominating pattern
    Count {
        /// Dominating classical pattern of length 3, e.g. 231
        #[arg(long)]
        dom: Permutation,
        /// Mesh pattern, e.g. "1|0,1;1,0"
        #[arg(long)]
        mesh: MeshPattern,
        /// Largest host length to count
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        /// Write the count table to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition the shadings of an underlying pattern by the coincidence rules
    Classify {
        /// Dominating classical pattern of length 3
        #[arg(long)]
        dom: Permutation,
        /// Underlying classical pattern of length 1 or 2, e.g. 21
        #[arg(long)]
        underlying: Permutation,
        /// Length bound for the avoidance partition the rules are checked against
        #[arg(long, default_value_t = 11)]
        max_len: usize,
        /// Rules to apply: R1 or R1,R2 or R1,R2,R3 (compact forms like R12 also work)
        #[arg(long, value_parser = parse_rules, default_value = "R1,R2,R3")]
        rules: RuleSet,
        /// Expected number of rule classes; a mismatch exits with code 1
        #[arg(long)]
        expect: Option<usize>,
        /// Write the rule partition as CSV to this file
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write every rule certificate, one per line, to this file
        #[arg(long)]
        emit_certificates: Option<PathBuf>,
    },
    /// Group all length-2 shadings by their avoidance counting sequences
    Wilf {
        /// Dominating classical pattern of length 3
        #[arg(long)]
        dom: Permutation,
        /// Length bound for the counting sequences
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        /// Expected number of Wilf classes; requires --max-len at least 8
        #[arg(long)]
        expect: Option<usize>,
        /// Also report the coincidence and symmetry-reduced class counts
        #[arg(long)]
        show_symmetry: bool,
        /// Write the Wilf partition as CSV to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check engine counts against the closed-form counting sequences
    VerifySequences {
        /// Largest length to compare
        #[arg(long, default_value_t = 10)]
        max_len: usize,
    },
    /// Replay every certificate in a log and report failures
    VerifyCertificates {
        /// Certificate log, one record per line; blank and # lines are skipped
        log: PathBuf,
    },
}

/// Accept the comma-separated spelling (`R1,R2,R3`) on top of the compact
/// one (`R123`) the library parses.
fn parse_rules(s: &str) -> Result<RuleSet, ParseError> {
    let mut set: Option<RuleSet> = None;
    for part in s.split(',') {
        let r: RuleSet = part.trim().parse()?;
        set = Some(set.map_or(r, |acc| acc.union(r)));
    }
    Ok(set.expect("split yields at least one part"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mode = configure_jobs(cli.jobs)?;
    match cli.command {
        Command::Count { dom, mesh, max_len, out } => cmd_count(mode, dom, mesh, max_len, out),
        Command::Classify { dom, underlying, max_len, rules, expect, out, emit_certificates } => {
            cmd_classify(mode, dom, underlying, max_len, rules, expect, out, emit_certificates)
        }
        Command::Wilf { dom, max_len, expect, show_symmetry, out } => {
            cmd_wilf(mode, dom, max_len, expect, show_symmetry, out)
        }
        Command::VerifySequences { max_len } => cmd_verify_sequences(max_len),
        Command::VerifyCertificates { log } => cmd_verify_certificates(log),
    }
}

/// Size the worker pool. All parallelism lives inside the library's sweeps;
/// output assembly is single-threaded either way.
fn configure_jobs(jobs: Option<usize>) -> Result<ExecMode> {
    match jobs {
        None => Ok(ExecMode::default()),
        Some(0) => bail!("--jobs must be at least 1"),
        Some(1) => Ok(ExecMode::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("initializing the worker pool")?;
            Ok(ExecMode::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(n) => {
            eprintln!("warning: built without the parallel feature; --jobs {n} runs sequentially");
            Ok(ExecMode::Sequential)
        }
    }
}

fn cmd_count(
    mode: ExecMode,
    dom: Permutation,
    mesh: MeshPattern,
    max_len: usize,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    let task = AvoidanceTask::new(dom, mesh)?;
    let sig = signature_with_mode(&task, max_len, mode)?;
    let table = format!("n,count,fingerprint\n{}", sig.dump());
    deliver(out, &table)?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_classify(
    mode: ExecMode,
    dom: Permutation,
    underlying: Permutation,
    max_len: usize,
    rules: RuleSet,
    expect: Option<usize>,
    out: Option<PathBuf>,
    emit_certificates: Option<PathBuf>,
) -> Result<ExitCode> {
    if !(1..=2).contains(&underlying.len()) {
        bail!("--underlying must have length 1 or 2, got {}", underlying.len());
    }
    let (part, certs) = rule_partition_with_certificates(&underlying, &dom, rules, mode);
    let comp = comp_partition_with_mode(&underlying, &dom, max_len, mode)?;
    let rec = reconcile(&part, &comp)?;
    println!("dominating: {dom}");
    println!("underlying: {underlying}");
    println!("rules: {rules}");
    println!("rule classes: {}", part.class_count());
    println!("avoidance classes (n <= {max_len}): {}", comp.class_count());
    println!("refines avoidance partition: {}", rec.refines());
    println!("certificates: {}", certs.len());
    if let Some(path) = out {
        write_atomic(&path, &partition_csv(&part)?)?;
    }
    if let Some(path) = emit_certificates {
        let mut log = String::new();
        for cert in &certs {
            log.push_str(&cert.to_line());
            log.push('\n');
        }
        write_atomic(&path, &log)?;
    }
    expectation(expect, part.class_count(), "rule classes")
}

fn cmd_wilf(
    mode: ExecMode,
    dom: Permutation,
    max_len: usize,
    expect: Option<usize>,
    show_symmetry: bool,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    if expect.is_some() && max_len < 8 {
        bail!("--expect needs --max-len of at least 8; shorter bounds still merge classes");
    }
    let wilf = wilf_comp_partition_with_mode(&dom, max_len, mode)?;
    println!("dominating: {dom}");
    if show_symmetry {
        let joined = EquivalencePartition::join(
            &comp_partition_with_mode(&"21".parse().expect("fixed pattern"), &dom, max_len, mode)?,
            &comp_partition_with_mode(&"12".parse().expect("fixed pattern"), &dom, max_len, mode)?,
        )?;
        let sym = symmetry_reduce_231(&joined)?;
        println!("coincidence classes (n <= {max_len}): {}", joined.class_count());
        println!("symmetry-reduced classes: {}", sym.class_count());
    }
    println!("wilf classes (n <= {max_len}): {}", wilf.class_count());
    if let Some(path) = out {
        write_atomic(&path, &partition_csv(&wilf)?)?;
    }
    expectation(expect, wilf.class_count(), "wilf classes")
}

fn cmd_verify_sequences(max_len: usize) -> Result<ExitCode> {
    let dom: Permutation = "231".parse().expect("fixed pattern");
    let bindings: [(&str, Series); 5] = [
        ("1|0,1;1,0", fine_series(max_len)),
        ("1|0,0;0,1;1,1", maxl_series(max_len)),
        ("1|0,0;1,0;1,1", minend_series(max_len)),
        ("12|0,0;0,1;1,1;1,2;2,0;2,1", a035929_series(max_len)),
        ("12|1,0;1,1;1,2;2,0;2,1", motzkin_system_series(max_len)),
    ];
    let mut ok = true;
    for (mesh, series) in &bindings {
        let pattern: MeshPattern = mesh.parse().expect("fixed pattern");
        let task = AvoidanceTask::new(dom.clone(), pattern)?;
        let check = verify_counts(&task, series, max_len)?;
        println!("{check}");
        ok &= check.passed();
    }
    let catalan = catalan_series(max_len);
    for dom_s in ["231", "321"] {
        let levels = avoider_levels(&dom_s.parse().expect("fixed pattern"), max_len)?;
        match (0..=max_len).find(|&n| levels[n].len() as i64 != catalan.coefficients()[n]) {
            None => println!("ok   total avoiders of {dom_s} are catalan n<={max_len}"),
            Some(n) => {
                println!(
                    "FAIL total avoiders of {dom_s}: {} at n={n}, catalan says {}",
                    levels[n].len(),
                    catalan.coefficients()[n]
                );
                ok = false;
            }
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_verify_certificates(log: PathBuf) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&log)
        .with_context(|| format!("reading {}", log.display()))?;
    let mut total = 0usize;
    let mut failures = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        total += 1;
        match line.parse::<RuleCertificate>() {
            Err(err) => {
                println!("line {}: unreadable record: {err}", idx + 1);
                failures += 1;
            }
            Ok(cert) if !cert.replay() => {
                println!("line {}: replay failed: {cert}", idx + 1);
                failures += 1;
            }
            Ok(_) => {}
        }
    }
    if total == 0 {
        eprintln!("warning: {} holds no certificates", log.display());
    }
    println!("certificates checked: {total}, failures: {failures}");
    Ok(if failures == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Compare an observed count against `--expect` and pick the exit code.
fn expectation(expect: Option<usize>, observed: usize, what: &str) -> Result<ExitCode> {
    match expect {
        Some(want) if want != observed => {
            println!("expected {want} {what}, found {observed}");
            Ok(ExitCode::from(1))
        }
        _ => Ok(ExitCode::SUCCESS),
    }
}

/// Print to stdout, or write atomically when `--out` was given.
fn deliver(out: Option<PathBuf>, contents: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(&path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}
