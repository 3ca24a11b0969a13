//! Argument parsing and output for the `covrep` binary.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use covrep_core::linalg::DEFAULT_TOLERANCE;
use covrep_core::product::HypothesisMode;

use crate::commands::{run_path, to_text, Command, Outcome, RunReport, Theorem};
use crate::corpus::write_corpus;
use crate::io::Instance;
use crate::random::{random_instance, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Each coordinate concave or Shimorin.
    Corollary,
    /// Wold-type decompositions checked on the reducing restrictions.
    Direct,
}

impl From<Mode> for HypothesisMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Corollary => HypothesisMode::Corollary,
            Mode::Direct => HypothesisMode::Direct,
        }
    }
}

fn positive_tolerance(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        _ => Err(format!("tolerance must be a positive finite number, got {s:?}")),
    }
}

#[derive(Debug, Parser)]
#[command(name = "covrep", version, about = "Checks, decompositions and theorem verification for covariant representations")]
pub struct Cli {
    /// Numerical tolerance for operator identities and positivity tests.
    #[arg(long, global = true, env = "COVREP_TOLERANCE", value_parser = positive_tolerance)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Seed for `generate`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Run every structural validator.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Evaluate properties such as isometric, concave, shimorin, analytic, doubly-commuting.
    Check {
        #[arg(long = "property", short, value_delimiter = ',')]
        properties: Vec<String>,
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Wold-type decomposition with certificates.
    Decompose {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Hypotheses and conclusions of a theorem on each instance.
    Verify {
        /// richter, muhly-solel, mt1, cd, p21, t22 or t24.
        #[arg(long, value_parser = |s: &str| s.parse::<Theorem>().map_err(|e| e.to_string()))]
        theorem: Theorem,
        #[arg(long, value_enum, default_value = "direct")]
        mode: Mode,
        /// Coordinates for p21, 1-based and comma separated.
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<usize>>,
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Write the named corpus into a directory.
    Corpus { dir: PathBuf },
    /// Print a seeded random instance.
    Generate {
        /// isometric, concave, shimorin, doubly-commuting or generic.
        #[arg(long, value_parser = |s: &str| s.parse::<Profile>().map_err(|e| e.to_string()))]
        profile: Profile,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs `command` on every path, in parallel, keeping the input order.
pub fn run_all(command: &Command, paths: &[PathBuf], tol: f64) -> Vec<RunReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> = paths.iter().map(|p| s.spawn(move || run_path(command, p, tol))).collect();
        handles.into_iter().map(|h| h.join().expect("worker thread")).collect()
    })
}

fn render(reports: &[RunReport], paths: &[PathBuf], format: Format) -> String {
    match format {
        Format::Json if reports.len() == 1 => reports[0].to_json() + "\n",
        Format::Json => crate::json::to_string(reports) + "\n",
        Format::Text => reports.iter().zip(paths).map(|(r, p)| to_text(&p.display().to_string(), r)).collect(),
    }
}

fn generate(profile: Profile, seed: u64, out: Option<&Path>) -> Output {
    match random_instance(seed, profile) {
        Ok(any) => {
            let inst = Instance::from_any(Some(&format!("{profile}-{seed}")), &any);
            match out {
                Some(p) => match crate::io::write_instance(p, &inst) {
                    Ok(()) => Output { code: 0, stdout: String::new(), stderr: String::new() },
                    Err(e) => Output { code: 2, stdout: String::new(), stderr: format!("{e}\n") },
                },
                None => Output { code: 0, stdout: inst.to_json() + "\n", stderr: String::new() },
            }
        }
        Err(e) => Output { code: 1, stdout: String::new(), stderr: format!("{e}\n") },
    }
}

pub fn run(cli: &Cli) -> Output {
    let tol = cli.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    let (command, paths) = match &cli.command {
        Cmd::Validate { paths } => (Command::Validate, paths),
        Cmd::Check { properties, paths } => (Command::Check { properties: properties.clone() }, paths),
        Cmd::Decompose { paths } => (Command::Decompose, paths),
        Cmd::Verify { theorem, mode, alpha, paths } => {
            (Command::Verify { theorem: *theorem, mode: (*mode).into(), alpha: alpha.clone() }, paths)
        }
        Cmd::Corpus { dir } => {
            return match write_corpus(dir) {
                Ok(files) => Output {
                    code: 0,
                    stdout: files.iter().map(|f| format!("{}\n", f.display())).collect(),
                    stderr: String::new(),
                },
                Err(e) => Output { code: 2, stdout: String::new(), stderr: format!("{e}\n") },
            };
        }
        Cmd::Generate { profile, out } => return generate(*profile, cli.seed, out.as_deref()),
    };
    let reports = run_all(&command, paths, tol);
    let code = Outcome::combine(reports.iter().map(|r| r.outcome)).exit_code();
    Output { code, stdout: render(&reports, paths, cli.format), stderr: String::new() }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let out = run(&cli);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}
