//! `capra`: queries, membership checks, region sweeps, lower-bound models and
//! oracle verification for the Capra conjugacy of ℓ0.
//!
//! Exit codes: 0 ok, 1 usage or input error, 2 domain or budget error,
//! 3 negative verdict.

mod output;
mod region_out;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use capra_l0::{
    build_model, capra_conjugate, eval_model, region_sweep, region_sweep_all_classes, subdiff_member,
    CapraAffineModel, PExponent, Vector, Window, DEFAULT_TOL,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::{header, num};

#[derive(Parser)]
#[command(name = "capra", version, about = "Capra conjugacy of the l0 pseudonorm")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Capra conjugate of l0 at y.
    Conj {
        #[command(flatten)]
        p: PArg,
        #[arg(long, allow_hyphen_values = true)]
        y: Vector,
    },
    /// Capra-subdifferential queries.
    #[command(subcommand)]
    Subdiff(SubdiffCommand),
    /// Sweep the Capra-subdifferential over a planar window.
    Region(RegionArgs),
    /// Build or evaluate a max-of-Capra-affine lower bound of l0.
    #[command(subcommand)]
    Lower(LowerCommand),
    /// Compare closed forms against brute-force oracles on random inputs.
    Verify(verify::VerifyArgs),
}

#[derive(Subcommand)]
enum SubdiffCommand {
    /// Decide y ∈ ∂ℓ0(x) and list every condition of the active case.
    Check {
        #[command(flatten)]
        p: PArg,
        #[arg(long, allow_hyphen_values = true)]
        x: Vector,
        #[arg(long, allow_hyphen_values = true)]
        y: Vector,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum LowerCommand {
    /// Build a model from sample points (one comma-separated vector per line).
    Build {
        #[command(flatten)]
        p: PArg,
        #[arg(long)]
        samples: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a model at x.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: Vector,
    },
}

/// `--p`, parsed by hand so that out-of-range values map to exit code 2.
#[derive(Args)]
struct PArg {
    /// Exponent of the source norm: a real p >= 1 or `inf`.
    #[arg(long = "p", value_name = "P", allow_hyphen_values = true)]
    raw: String,
}

impl PArg {
    fn get(&self) -> Result<PExponent, Failure> {
        Ok(self.raw.parse::<PExponent>()?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args)]
struct RegionArgs {
    #[command(flatten)]
    p: PArg,
    /// Primal point (d = 2); not used with --all-classes.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "all_classes")]
    x: Option<Vector>,
    /// Square window `lo:hi` applied to both axes.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
    window: Window,
    #[arg(long)]
    step: f64,
    #[arg(long, value_enum)]
    format: Format,
    #[arg(long)]
    out: PathBuf,
    /// Union over all primal points, labelled by sparsity.
    #[arg(long)]
    all_classes: bool,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

fn parse_window(s: &str) -> Result<Window, String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("need finite lo < hi, got {s:?}"));
    }
    Ok(Window::square(lo, hi))
}

/// An error together with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let error = e.into();
        let code = match error.downcast_ref::<capra_l0::Error>() {
            Some(
                capra_l0::Error::InvalidExponent(_)
                | capra_l0::Error::BudgetExceeded { .. }
                | capra_l0::Error::NotCapraConvex { .. }
                | capra_l0::Error::OutOfDomain { .. }
                | capra_l0::Error::WitnessDiverged { .. },
            ) => 2,
            _ => 1,
        };
        Failure { code, error }
    }
}

fn usage(msg: String) -> Failure {
    Failure { code: 1, error: anyhow::anyhow!(msg) }
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(usage(format!("--tol must be a nonnegative number, got {tol}")))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Conj { p, y } => {
            println!("{}", num(capra_conjugate(&y, p.get()?)));
            Ok(ExitCode::SUCCESS)
        }
        Command::Subdiff(SubdiffCommand::Check { p, x, y, tol }) => {
            let p = p.get()?;
            check_tol(tol)?;
            if x.dim() != y.dim() {
                return Err(capra_l0::Error::DimensionMismatch { expected: x.dim(), found: y.dim() }.into());
            }
            let verdict = subdiff_member(&x, &y, p, tol);
            println!("{}", if verdict.member { "MEMBER" } else { "NOT_MEMBER" });
            for c in &verdict.conditions {
                println!(
                    "{:<18} {:<4} lhs={} rhs={}",
                    c.id.to_string(),
                    if c.satisfied { "ok" } else { "FAIL" },
                    num(c.lhs),
                    num(c.rhs)
                );
            }
            Ok(if verdict.member { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }
        Command::Region(args) => region(args),
        Command::Lower(LowerCommand::Build { p, samples, out }) => {
            let p = p.get()?;
            let text =
                fs::read_to_string(&samples).with_context(|| format!("reading {}", samples.display()))?;
            let points = parse_samples(&text)?;
            let model = build_model(&points, p)?;
            fs::write(&out, model.to_json() + "\n").with_context(|| format!("writing {}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Lower(LowerCommand::Eval { model, x }) => {
            let text = fs::read_to_string(&model).with_context(|| format!("reading {}", model.display()))?;
            let model = CapraAffineModel::from_json(&text)?;
            println!("{}", num(eval_model(&model, &x)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => verify::run(&args),
    }
}

fn parse_samples(text: &str) -> Result<Vec<Vec<f64>>, Failure> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty() && !line.trim_start().starts_with('#'))
        .map(|(n, line)| {
            line.parse::<Vector>()
                .map(Vector::into_inner)
                .map_err(|e| usage(format!("samples line {}: {e}", n + 1)))
        })
        .collect()
}

fn region(args: RegionArgs) -> Result<ExitCode, Failure> {
    let p = args.p.get()?;
    check_tol(args.tol)?;
    let grid = if args.all_classes {
        region_sweep_all_classes(p, args.window, args.step, args.tol)?
    } else {
        let x = args.x.as_ref().expect("clap requires --x without --all-classes");
        region_sweep(x, p, args.window, args.step, args.tol)?
    };
    let mut meta = vec![("p", p.to_string()), ("tol", num(args.tol))];
    match &args.x {
        Some(x) if !args.all_classes => {
            meta.push(("x", x.iter().map(|&v| num(v)).collect::<Vec<_>>().join(",")))
        }
        _ => meta.push(("mode", "all-classes".to_string())),
    }
    meta.push(("window", format!("{}:{}", num(args.window.lo1), num(args.window.hi1))));
    meta.push(("step", num(args.step)));
    let head = header(&meta);
    let body = match args.format {
        Format::Csv => region_out::csv(&grid, &head),
        Format::Json => region_out::json(&grid, &meta),
        Format::Svg => region_out::svg(&grid, &head),
    };
    fs::write(&args.out, body).with_context(|| format!("writing {}", args.out.display()))?;
    Ok(ExitCode::SUCCESS)
}
