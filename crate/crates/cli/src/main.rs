//! `walker` — generate, verify, and extend metrics in canonical block form.
//!
//! Exit codes form a contract for CI consumption:
//!
//! - `0` — the command succeeded and every check passed;
//! - `1` — input error (bad flags, unreadable file, malformed metric text);
//! - `2` — the input was well-formed but a verification check failed
//!   (or, for `negctrl`, unexpectedly did not fail).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use walker_core::geometry::Distribution;
use walker_core::verify::{run_full_report, ReportConfig, Verdict, DEFAULT_IDENTITY_TOL};
use walker_core::walker::{
    canonical_distribution, generate_walker_data, parse_walker_text, write_walker_text, WalkerData,
};

/// A failed negative control must produce some check residual above this,
/// so that the failure is a real violation rather than tolerance noise.
const NEGCTRL_MIN_RESIDUAL: f64 = 1e-3;

/// How many replacement bottom blocks `extend` tries per instance.
const EXTEND_REPLACEMENTS: u64 = 3;

#[derive(Parser)]
#[command(
    name = "walker",
    version,
    about = "Build and verify pseudo-Riemannian metrics carrying a null parallel plane field"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random canonical-form metric file (deterministic per seed).
    Gen(GenArgs),
    /// Parse a metric file and run the full verification suite on it.
    Verify(VerifyArgs),
    /// Show the extension freedom of an instance: print the free-parameter
    /// counts and spot-check several replacement bottom blocks.
    Extend(ExtendArgs),
    /// Negative control: inject a forbidden coordinate dependence and
    /// confirm that verification catches it.
    Negctrl(NegctrlArgs),
}

#[derive(Args)]
struct GenArgs {
    /// RNG seed; equal seeds give byte-identical files.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Total dimension (at least 2).
    #[arg(long)]
    n: usize,
    /// Rank of the null plane (0 ≤ r ≤ n/2).
    #[arg(long)]
    r: usize,
    /// Write the file here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Metric file in the block text format.
    file: PathBuf,
    /// Seed for the sample-point stream.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of sample points (at least 1).
    #[arg(long, default_value_t = 25)]
    samples: usize,
    /// Tolerance for the jet-exact identity checks.
    #[arg(long, default_value_t = DEFAULT_IDENTITY_TOL)]
    tol: f64,
    /// Report rendering.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExtendArgs {
    /// Metric file in the block text format.
    file: PathBuf,
    /// Seed for the replacement blocks and the sample-point stream.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of sample points per replacement (at least 1).
    #[arg(long, default_value_t = 25)]
    samples: usize,
    /// Tolerance for the jet-exact identity checks.
    #[arg(long, default_value_t = DEFAULT_IDENTITY_TOL)]
    tol: f64,
}

#[derive(Args)]
struct NegctrlArgs {
    /// Metric file in the block text format.
    file: PathBuf,
    /// Seed for the sample-point stream.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of sample points (at least 1).
    #[arg(long, default_value_t = 25)]
    samples: usize,
    /// Tolerance for the jet-exact identity checks.
    #[arg(long, default_value_t = DEFAULT_IDENTITY_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// The options a command actually runs with, normalized across subcommands;
/// `n` and `r` come from the flags (`gen`) or from the parsed file.
struct RunConfig {
    seed: u64,
    n: usize,
    r: usize,
    samples: usize,
    tol: f64,
    out: Option<PathBuf>,
}

impl RunConfig {
    fn validate(&self) -> Result<(), String> {
        if self.n < 2 {
            return Err(format!("n must be at least 2, got {}", self.n));
        }
        if 2 * self.r > self.n {
            return Err(format!("r = {} exceeds n/2 for n = {}", self.r, self.n));
        }
        if self.samples == 0 {
            return Err("samples must be at least 1".to_string());
        }
        Ok(())
    }

    fn report_config(&self) -> ReportConfig {
        ReportConfig {
            seed: self.seed,
            samples: self.samples,
            tolerance: self.tol,
            walker_r: Some(self.r),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Gen(args) => cmd_gen(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Extend(args) => cmd_extend(&args),
        Command::Negctrl(args) => cmd_negctrl(&args),
    };
    ExitCode::from(code)
}

fn cmd_gen(args: &GenArgs) -> u8 {
    let config = RunConfig {
        seed: args.seed,
        n: args.n,
        r: args.r,
        samples: 1,
        tol: DEFAULT_IDENTITY_TOL,
        out: args.out.clone(),
    };
    if let Err(message) = config.validate() {
        eprintln!("error: {message}");
        return 1;
    }
    let data = match generate_walker_data(config.n, config.r, config.seed) {
        Ok(data) => data,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    match write_output(&config.out, &write_walker_text(&data)) {
        Ok(()) => 0,
        Err(code) => code,
    }
}

fn cmd_verify(args: &VerifyArgs) -> u8 {
    let (data, config) = match load_instance(
        &args.file,
        args.seed,
        args.samples,
        args.tol,
        args.out.clone(),
    ) {
        Ok(loaded) => loaded,
        Err(code) => return code,
    };
    let g = data.assemble_unchecked();
    let d = plane(config.n, config.r);
    let report = run_full_report(&g, &d, &config.report_config());
    let rendered = match args.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    if let Err(code) = write_output(&config.out, &rendered) {
        return code;
    }
    if report.all_passed() {
        0
    } else {
        2
    }
}

fn cmd_extend(args: &ExtendArgs) -> u8 {
    let (data, config) = match load_instance(&args.file, args.seed, args.samples, args.tol, None) {
        Ok(loaded) => loaded,
        Err(code) => return code,
    };
    let (n, r) = (config.n, config.r);
    let (k, l, m) = (n - 2 * r, r, 1);
    println!("extension freedom for n = {n}, r = {r}");
    println!("pairing stage: k = n-2r = {k}, l = r = {l}, m = {m}; free parameters k*l*m = {}", k * l * m);
    println!(
        "metric stage: free symmetric {r}x{r} bottom block; free parameters r(r+1)/2 = {}",
        r * (r + 1) / 2
    );

    let d = plane(n, r);
    let mut all_passed = true;
    for i in 0..EXTEND_REPLACEMENTS {
        // Borrow the B block of a freshly generated instance: an arbitrary
        // admissible symmetric block, deterministic per seed.
        let donor = generate_walker_data(n, r, config.seed.wrapping_add(i))
            .expect("dimensions already validated");
        let (_, _, _, _, donated_b) = donor.into_blocks();
        let replaced = match WalkerData::new(n, r, data.a().to_vec(), data.h().to_vec(), donated_b)
        {
            Ok(replaced) => replaced,
            Err(e) => {
                eprintln!("error: {e}");
                return 1;
            }
        };
        let g = replaced.assemble_unchecked();
        let report = run_full_report(&g, &d, &config.report_config());
        let passed = report.all_passed();
        all_passed &= passed;
        let verdict = if passed { "PASS" } else { "FAIL" };
        println!("replacement B #{}: {verdict}", i + 1);
        if !passed {
            for c in report.checks.iter().filter(|c| c.verdict != Verdict::Pass) {
                println!("  {}: {:?}", c.name, c.verdict);
            }
        }
    }
    if all_passed {
        0
    } else {
        2
    }
}

fn cmd_negctrl(args: &NegctrlArgs) -> u8 {
    let (data, config) = match load_instance(&args.file, args.seed, args.samples, args.tol, None) {
        Ok(loaded) => loaded,
        Err(code) => return code,
    };
    let perturbed = match data.with_forbidden_dependence() {
        Some(perturbed) => perturbed,
        None => {
            println!(
                "no control available: the instance has no H block to perturb \
                 (r = 0 or n = 2r), and B may legally depend on x1"
            );
            return 0;
        }
    };
    println!("control: added x1 to H[1][1], which canonical form forbids");
    let g = perturbed.assemble_unchecked();
    let d = plane(config.n, config.r);
    let report = run_full_report(&g, &d, &config.report_config());
    let culprits: Vec<_> = report
        .checks
        .iter()
        .filter(|c| {
            c.verdict == Verdict::Fail && c.max_residual.is_some_and(|v| v > NEGCTRL_MIN_RESIDUAL)
        })
        .collect();
    if culprits.is_empty() {
        eprintln!(
            "error: the perturbed metric unexpectedly passes verification \
             (no failing check with residual above {NEGCTRL_MIN_RESIDUAL:e})"
        );
        return 2;
    }
    for c in &culprits {
        println!(
            "caught by {}: residual {:.3e} exceeds tolerance {:.3e}",
            c.name,
            c.max_residual.unwrap_or(f64::NAN),
            c.tolerance
        );
    }
    0
}

/// Reads and parses a metric file, normalizing the run options; exit-code
/// errors are already printed.
fn load_instance(
    file: &PathBuf,
    seed: u64,
    samples: usize,
    tol: f64,
    out: Option<PathBuf>,
) -> Result<(WalkerData, RunConfig), u8> {
    let text = match fs::read_to_string(file) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return Err(1);
        }
    };
    let data = match parse_walker_text(&text) {
        Ok(data) => data,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return Err(1);
        }
    };
    let config = RunConfig {
        seed,
        n: data.n(),
        r: data.r(),
        samples,
        tol,
        out,
    };
    if let Err(message) = config.validate() {
        eprintln!("error: {message}");
        return Err(1);
    }
    Ok((data, config))
}

/// The distinguished plane of a canonical-form instance: the span of the
/// first `r` coordinate fields (empty when `r = 0`).
fn plane(n: usize, r: usize) -> Distribution {
    if r == 0 {
        Distribution::empty(n)
    } else {
        canonical_distribution(n, r).expect("0 < 2r <= n already validated")
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), u8> {
    match out {
        Some(path) => {
            if let Err(e) = fs::write(path, content) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return Err(1);
            }
        }
        None => print!("{content}"),
    }
    Ok(())
}
