//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation or mathematical failure, 2 retry
//! budget exhausted, 3 i/o, parse or flag errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use jext::io::{ConjugationFile, ProblemFile, ReportFile};
use jext::{
    extend, isometric_residual, oracle, skew_residual, split, symmetric_residual, Error, Frame,
    Mode, Problem, Result, ToleranceConfig,
};

#[derive(Parser)]
#[command(
    name = "jext",
    version,
    about = "J-skew-self-adjoint and J-unitary extensions of partial operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report which J-classes a partial operator satisfies
    Check {
        /// Problem file (JSON)
        path: PathBuf,
    },
    /// Construct an extension and write the report
    Extend {
        /// Problem file (JSON)
        path: PathBuf,
        /// Seed recorded in the tolerance config
        #[arg(long)]
        seed: Option<u64>,
        /// Override the residual tolerance
        #[arg(long)]
        tol: Option<f64>,
        /// Go straight to the doubled problem A ⊕ A
        #[arg(long)]
        force_double: bool,
        /// Write the report here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split the space of a conjugation as M ⊕ JM
    Split {
        /// File with "dim" and "conjugation" fields (problem files work)
        path: PathBuf,
    },
    /// Generate a seeded valid problem file
    Gen {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        dim: usize,
        /// Domain dimension, between 0 and dim
        #[arg(long)]
        domain: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the problem here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Skew,
    Isometric,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Skew => Mode::Skew,
            ModeArg::Isometric => Mode::Isometric,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(3);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let outcome = match cli.command {
        Command::Check { path } => cmd_check(&path),
        Command::Extend {
            path,
            seed,
            tol,
            force_double,
            out,
        } => cmd_extend(&path, seed, tol, force_double, out.as_deref()),
        Command::Split { path } => cmd_split(&path),
        Command::Gen {
            mode,
            dim,
            domain,
            seed,
            out,
        } => cmd_gen(mode.into(), dim, domain, seed, out.as_deref()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(classify(&e))
        }
    }
}

fn classify(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Parse(_) | Error::InvalidArgument(_) => 3,
        Error::Exhausted { .. } => 2,
        _ => 1,
    }
}

fn read_problem(path: &Path, cfg: ToleranceConfig) -> Result<Problem> {
    let text = std::fs::read_to_string(path)?;
    ProblemFile::from_json(&text)?.into_problem(cfg)
}

fn cmd_check(path: &Path) -> Result<u8> {
    let cfg = ToleranceConfig::default();
    let p = read_problem(path, cfg)?;
    let sym = symmetric_residual(&p.conjugation, &p.op)?;
    let skew = skew_residual(&p.conjugation, &p.op)?;
    let iso = isometric_residual(&p.conjugation, &p.op)?;
    println!(
        "dim {}, domain dim {}, declared mode {}",
        p.dim(),
        p.op.domain_dim(),
        p.mode.as_str()
    );
    println!("j-symmetric residual:      {sym:.12e}");
    println!("j-skew-symmetric residual: {skew:.12e}");
    println!("j-isometric residual:      {iso:.12e}");
    let declared = match p.mode {
        Mode::Skew => skew,
        Mode::Isometric => iso,
    };
    if declared <= cfg.residual_tol {
        println!("declared mode: PASS");
        Ok(0)
    } else {
        println!(
            "declared mode: FAIL (residual {declared:.3e} > {:.3e})",
            cfg.residual_tol
        );
        Ok(1)
    }
}

fn cmd_extend(
    path: &Path,
    seed: Option<u64>,
    tol: Option<f64>,
    force_double: bool,
    out: Option<&Path>,
) -> Result<u8> {
    let mut cfg = ToleranceConfig::default();
    if let Some(seed) = seed {
        cfg = cfg.with_seed(seed);
    }
    if let Some(tol) = tol {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "--tol must be positive, got {tol}"
            )));
        }
        cfg = cfg.with_residual_tol(tol);
    }
    let p = read_problem(path, cfg)?;
    let report = extend(&p, force_double)?;
    let json = ReportFile::from_report(&report).to_json_pretty();
    match out {
        Some(out) => std::fs::write(out, json)?,
        None => print!("{json}"),
    }
    Ok(0)
}

fn cmd_split(path: &Path) -> Result<u8> {
    let cfg = ToleranceConfig::default();
    let text = std::fs::read_to_string(path)?;
    let j = ConjugationFile::from_json(&text)?.into_conjugation(&cfg)?;
    let n = j.dim();
    let splitting = split(&Frame::full(n), &j, 0, &cfg)?;
    println!("dim {n}, half dimension {}", splitting.half.dim());
    print_frame("M", &splitting.half);
    print_frame("JM", &splitting.conj_half);
    println!("orthogonality residual: {:.12e}", splitting.residual_orth);
    println!("span residual:          {:.12e}", splitting.residual_span);
    println!("fixed-point residual:   {:.12e}", splitting.residual_fixed);
    Ok(0)
}

fn print_frame(name: &str, f: &Frame) {
    for i in 0..f.dim() {
        let col = f.column(i);
        let entries: Vec<String> = col.iter().map(|z| format!("{:+.9}{:+.9}i", z.re, z.im)).collect();
        println!("{name}[{i}] = [{}]", entries.join(", "));
    }
}

fn cmd_gen(mode: Mode, dim: usize, domain: usize, seed: u64, out: Option<&Path>) -> Result<u8> {
    if dim == 0 {
        return Err(Error::InvalidArgument("--dim must be positive".into()));
    }
    if domain > dim {
        return Err(Error::InvalidArgument(format!(
            "--domain {domain} exceeds --dim {dim}"
        )));
    }
    let p = match mode {
        Mode::Skew => oracle::gen_case_a(dim, domain, seed)?,
        Mode::Isometric => oracle::gen_case_b(dim, domain, seed)?,
    };
    let json = ProblemFile::from_problem(&p).to_json_pretty();
    match out {
        Some(out) => std::fs::write(out, json)?,
        None => print!("{json}"),
    }
    Ok(0)
}
