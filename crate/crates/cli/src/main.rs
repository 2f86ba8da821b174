use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use artin_approx::solver::Strategy;
use artin_cli::check::check_report;
use artin_cli::{run, Command, Overrides};
use clap::{Args, Parser, Subcommand};

/// Exact Artin approximation and Łojasiewicz tools over k[[x]] and k[[x,y]].
///
/// Exit codes: 0 success, 2 hypothesis or precondition failure, 3 parse
/// error, 4 capacity exceeded, 1 anything else. The field defaults to
/// $ARTIN_FIELD (Q or GF(p)) when a file has no `field` line.
#[derive(Parser)]
#[command(name = "artin", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Certification precision N.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Target order c.
    #[arg(long, global = true)]
    target_order: Option<u32>,
    /// One-variable strategy: newton or jet-search.
    #[arg(long, global = true)]
    strategy: Option<Strategy>,
    /// Seed for randomized choices.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Refuse to solve when ord f(z) is below gamma.
    #[arg(long, global = true)]
    enforce_gamma: bool,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Elkik ideal of the equations, with optional comparison verdicts.
    Elkik { file: PathBuf },
    /// Colon ideal `ideal : by`.
    Colon { file: PathBuf },
    /// Reduced Groebner basis of `ideal`.
    Groebner { file: PathBuf },
    /// Weierstrass preparation of `series`.
    Prepare { file: PathBuf },
    /// Weierstrass division of `series` by a distinguished polynomial.
    Divide { file: PathBuf },
    /// Newton refinement of `point` on a square subsystem.
    Refine { file: PathBuf },
    /// Full approximation pipeline on `point`.
    Solve { file: PathBuf },
    /// Table of the effective bounds.
    Bounds { file: PathBuf },
    /// Solver runs over a family of points and target orders.
    Probe { file: PathBuf },
    /// Re-validate a JSON report (`-` reads standard input).
    Check { report: PathBuf },
}

fn read(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (cmd, path) = match cli.cmd {
        Cmd::Elkik { file } => (Command::Elkik, file),
        Cmd::Colon { file } => (Command::Colon, file),
        Cmd::Groebner { file } => (Command::Groebner, file),
        Cmd::Prepare { file } => (Command::Prepare, file),
        Cmd::Divide { file } => (Command::Divide, file),
        Cmd::Refine { file } => (Command::Refine, file),
        Cmd::Solve { file } => (Command::Solve, file),
        Cmd::Bounds { file } => (Command::Bounds, file),
        Cmd::Probe { file } => (Command::Probe, file),
        Cmd::Check { report } => {
            let text = match read(&report) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {}: {e}", report.display());
                    return ExitCode::from(1);
                }
            };
            return match check_report(&text) {
                Ok(()) => {
                    println!("report valid");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    println!("report invalid: {e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    let src = match read(&path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(1);
        }
    };
    let f = cli.flags;
    let ov = Overrides {
        precision: f.precision,
        target_order: f.target_order,
        strategy: f.strategy,
        seed: f.seed,
        enforce_gamma: f.enforce_gamma,
    };
    let rep = run(cmd, &src, &ov);
    if f.json {
        print!("{}", rep.to_json());
    } else {
        print!("{}", rep.text);
        eprintln!("{} ms", rep.elapsed_ms);
    }
    ExitCode::from(rep.exit_code as u8)
}
