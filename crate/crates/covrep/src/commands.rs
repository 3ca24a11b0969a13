//! The commands behind the CLI, as functions from an instance to a report.

use std::collections::BTreeMap;
use std::path::Path;

use covrep_core::covrep::CovariantRep;
use covrep_core::error::Error;
use covrep_core::product::{all_alphas, alpha_label, HypothesisMode, ProductRep};
use covrep_core::report::{Check, Report, ValidationReport};
use covrep_core::subspace::Subspace;
use covrep_core::wold;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::io::{read_instance, Instance, JsonMat, Loaded};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    Richter,
    MuhlySolel,
    Mt1,
    Cd,
    P21,
    T22,
    T24,
}

impl Theorem {
    pub const ALL: [Theorem; 7] =
        [Theorem::Richter, Theorem::MuhlySolel, Theorem::Mt1, Theorem::Cd, Theorem::P21, Theorem::T22, Theorem::T24];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Richter => "richter",
            Theorem::MuhlySolel => "muhly-solel",
            Theorem::Mt1 => "mt1",
            Theorem::Cd => "cd",
            Theorem::P21 => "p21",
            Theorem::T22 => "t22",
            Theorem::T24 => "t24",
        }
    }

    fn needs_product(self) -> bool {
        matches!(self, Theorem::P21 | Theorem::T22 | Theorem::T24)
    }
}

impl std::str::FromStr for Theorem {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| CliError::Unknown { what: "theorem", name: s.to_string() })
    }
}

/// A command together with its arguments, as recorded in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Command {
    Validate,
    Check {
        /// Empty means every property that applies to the instance.
        #[serde(default)]
        properties: Vec<String>,
    },
    Decompose,
    Verify {
        theorem: Theorem,
        #[serde(default = "direct")]
        mode: HypothesisMode,
        /// 1-based coordinates for `p21`; every nonempty set when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<Vec<usize>>,
    },
}

fn direct() -> HypothesisMode {
    HypothesisMode::Direct
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    InputError,
    HypothesisNotMet,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::InputError => 2,
            Outcome::HypothesisNotMet => 3,
        }
    }

    fn severity(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::HypothesisNotMet => 1,
            Outcome::Fail => 2,
            Outcome::InputError => 3,
        }
    }

    /// Input errors outrank failures, which outrank unmet hypotheses.
    pub fn combine(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
        outcomes.into_iter().max_by_key(|o| o.severity()).unwrap_or(Outcome::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Body {
    Validation { report: ValidationReport },
    Checks { checks: Vec<Check> },
    Decomposition { report: Report, bases: BTreeMap<String, JsonMat> },
    Verification { report: Report },
    Error { kind: String, message: String },
}

/// Everything needed to reproduce a run: rerunning `command` on `instance`
/// with `tolerance` gives the same report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Command,
    pub version: String,
    pub tolerance: f64,
    pub outcome: Outcome,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<Instance>,
    pub result: Body,
}

impl RunReport {
    fn new(command: &Command, tol: f64, instance: Option<&Instance>, outcome: Outcome, result: Body) -> Self {
        RunReport {
            command: command.clone(),
            version: VERSION.to_string(),
            tolerance: tol,
            outcome,
            exit_code: outcome.exit_code(),
            instance: instance.cloned(),
            result,
        }
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self)
    }

    /// Reruns the embedded command on the embedded instance.
    pub fn rerun(&self) -> Option<RunReport> {
        self.instance.as_ref().map(|i| run_instance(&self.command, i, self.tolerance))
    }
}

fn error_kind(e: &CliError) -> String {
    match e {
        CliError::Core(c) => {
            let s = format!("{c:?}");
            s.split([' ', '(', '{']).next().unwrap_or("Error").to_string()
        }
        CliError::Io(_) => "Io".into(),
        CliError::Parse(_) => "ParseError".into(),
        CliError::Schema(_) => "SchemaError".into(),
        CliError::KindMismatch { .. } => "KindMismatch".into(),
        CliError::ProfileUnreachable { .. } => "ProfileUnreachable".into(),
        CliError::InvalidTolerance(_) => "InvalidTolerance".into(),
        CliError::Unknown { .. } => "Unknown".into(),
    }
}

fn error_outcome(e: &CliError) -> Outcome {
    match e {
        CliError::Core(
            Error::HypothesisNotMet(_)
            | Error::NotIsometric { .. }
            | Error::NotLeftInvertible { .. }
            | Error::NotConcave { .. }
            | Error::NotInvariant { .. }
            | Error::NotSigmaInvariant { .. },
        ) => Outcome::HypothesisNotMet,
        _ => Outcome::InputError,
    }
}

fn error_body(e: &CliError) -> Body {
    Body::Error { kind: error_kind(e), message: e.to_string() }
}

/// Core errors raised while assembling an instance that are violations of
/// the axioms rather than malformed input.
fn violation(e: &Error) -> Option<Check> {
    match *e {
        Error::BimoduleViolation { residual } => Some(Check::new("covariance", false, residual)),
        Error::IllDefinedTilde { residual } => Some(Check::new("tilde_well_defined", false, residual)),
        Error::PositivityFailure { min_eigenvalue } => Some(Check::new("positivity", false, -min_eigenvalue)),
        Error::CommutationViolation { residual } => Some(Check::new("commutation", false, residual)),
        _ => None,
    }
}

/// Runs every structural validator; `Ok((report, None))` means the
/// instance is well formed but violates an axiom.
pub fn validate_instance(inst: &Instance, tol: f64) -> CliResult<(ValidationReport, Option<Loaded>)> {
    let mut report = ValidationReport::default();
    let sigma = inst.sigma(tol)?;
    report.extend_prefixed("sigma.", sigma.validate());
    let corrs = inst.correspondences(tol)?;
    for (i, e) in corrs.iter().enumerate() {
        let prefix = if corrs.len() == 1 && inst.kind() == "covariant" { "E.".to_string() } else { format!("E{}.", i + 1) };
        report.extend_prefixed(&prefix, e.validate());
    }
    if inst.kind() == "product" {
        match inst.product_system(tol) {
            Ok(ps) => report.extend_prefixed("system.", ps.validate()),
            Err(CliError::Core(e)) if violation(&e).is_some() => report.push(violation(&e).unwrap()),
            Err(e) => return Err(e),
        }
    }
    if !report.pass() {
        return Ok((report, None));
    }
    match inst.load(tol) {
        Ok(loaded) => {
            match &loaded {
                Loaded::Single { rep, .. } => report.extend_prefixed("rep.", rep.validate()),
                Loaded::Product(pr) => report.extend_prefixed("rep.", pr.validate()),
            }
            let ok = report.pass();
            Ok((report, ok.then_some(loaded)))
        }
        Err(CliError::Core(e)) if violation(&e).is_some() => {
            report.push(violation(&e).unwrap());
            Ok((report, None))
        }
        Err(e) => Err(e),
    }
}

fn normalize(name: &str) -> String {
    name.trim().replace('-', "_")
}

const SINGLE_PROPERTIES: [&str; 13] = [
    "isometric",
    "fully_coisometric",
    "contractive",
    "left_invertible",
    "expansive",
    "concave",
    "growth_bound",
    "shimorin",
    "eq12",
    "eq13",
    "analytic",
    "wandering",
    "generating",
];

fn single_property(rep: &CovariantRep, name: &str) -> CliResult<Vec<Check>> {
    let lift = |r: covrep_core::Result<Check>, name: &str| -> CliResult<Check> {
        match r {
            Ok(c) => Ok(c),
            Err(Error::NotLeftInvertible { min_eigenvalue }) => Ok(Check::new(name, false, (-min_eigenvalue).max(0.0))),
            Err(e) => Err(e.into()),
        }
    };
    Ok(match name {
        "isometric" => vec![rep.check_isometric()],
        "fully_coisometric" => vec![rep.check_fully_coisometric()],
        "contractive" => vec![rep.check_contractive()],
        "left_invertible" => vec![rep.check_left_invertible()],
        "expansive" => vec![rep.check_expansive()],
        "concave" => vec![lift(rep.check_concave(), "concave")?],
        "growth_bound" => (2..=4).map(|n| lift(rep.check_growth_bound(n), &format!("growth_bound_{n}"))).collect::<CliResult<_>>()?,
        "shimorin" => vec![lift(rep.check_shimorin(), "shimorin")?],
        "eq12" => vec![lift(rep.check_eq12(), "eq12")?],
        "eq13" => vec![lift(rep.check_eq13(), "eq13")?],
        "analytic" => vec![wold::check_analytic(rep)],
        "wandering" => vec![wold::check_wandering(rep, &wold::wandering_subspace(rep))?],
        "generating" => {
            let closure = wold::invariant_closure(rep, &wold::wandering_subspace(rep))?;
            let missing = rep.hilbert_dim() - closure.dim();
            vec![Check::new("generating", missing == 0, missing as f64)]
        }
        other => return Err(CliError::Unknown { what: "property", name: other.to_string() }),
    })
}

fn product_property(pr: &ProductRep, name: &str) -> CliResult<Vec<Check>> {
    match name {
        "doubly_commuting" => {
            let d = pr.check_doubly_commuting()?;
            Ok(vec![
                Check::new("doubly_commuting", d.pass, d.max_residual()),
                Check::new("range_projections_commute", d.consequence_holds(), 0.0),
            ])
        }
        "commuting" => {
            let mut worst = 0.0f64;
            let mut ok = true;
            for i in 0..pr.rank() {
                for j in 0..i {
                    let (res, thr) = pr.commutation(i, j)?;
                    worst = worst.max(res);
                    ok &= res <= thr;
                }
            }
            Ok(vec![Check::new("commuting", ok, worst)])
        }
        _ => {
            let mut out = Vec::new();
            for i in 0..pr.rank() {
                for c in single_property(pr.rep(i), name)? {
                    out.push(c.clone().renamed(format!("T{}.{}", i + 1, c.name)));
                }
            }
            Ok(out)
        }
    }
}

fn run_check(loaded: &Loaded, properties: &[String]) -> CliResult<Vec<Check>> {
    let mut names: Vec<String> = properties.iter().map(|p| normalize(p)).filter(|p| !p.is_empty()).collect();
    if names.is_empty() {
        names = SINGLE_PROPERTIES.iter().map(|s| s.to_string()).collect();
        if matches!(loaded, Loaded::Product(_)) {
            names.splice(0..0, ["commuting".to_string(), "doubly_commuting".to_string()]);
        }
    }
    let mut out = Vec::new();
    for n in &names {
        out.extend(match loaded {
            Loaded::Single { rep, .. } => single_property(rep, n)?,
            Loaded::Product(pr) => product_property(pr, n)?,
        });
    }
    Ok(out)
}

fn single(loaded: &Loaded) -> CliResult<(&CovariantRep, Option<&Subspace>)> {
    match loaded {
        Loaded::Single { rep, subspace } => Ok((rep, subspace.as_ref())),
        Loaded::Product(_) => Err(CliError::KindMismatch { expected: "covariant", found: "product" }),
    }
}

fn product(loaded: &Loaded) -> CliResult<&ProductRep> {
    match loaded {
        Loaded::Product(pr) => Ok(pr),
        Loaded::Single { .. } => Err(CliError::KindMismatch { expected: "product", found: "covariant" }),
    }
}

fn report_outcome(r: &Report) -> Outcome {
    if !r.hypotheses_met() {
        Outcome::HypothesisNotMet
    } else if r.pass() {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn run_verify(loaded: &Loaded, theorem: Theorem, mode: HypothesisMode, alpha: Option<&[usize]>) -> CliResult<Report> {
    if theorem.needs_product() {
        let pr = product(loaded)?;
        return Ok(match theorem {
            Theorem::P21 => {
                let alphas = match alpha {
                    Some(a) => vec![a.iter().map(|&i| i.wrapping_sub(1)).collect::<Vec<_>>()],
                    None => all_alphas(pr.rank()),
                };
                let mut merged = Report::new("p21");
                for a in alphas {
                    let r = pr.verify_p21(&a)?;
                    for h in r.hypotheses {
                        if merged.hypothesis_named(&h.name).is_none() {
                            merged.hypothesis(h);
                        }
                    }
                    merged.conclusions.extend(r.conclusions);
                    merged.observations.extend(r.observations);
                    merged.dims.extend(r.dims);
                    merged.notes.extend(r.notes.into_iter().map(|n| format!("{}: {n}", alpha_label(&a))));
                }
                merged
            }
            Theorem::T22 => pr.verify_t22(mode)?,
            _ => pr.verify_t24(mode)?,
        });
    }
    let (rep, k) = single(loaded)?;
    Ok(match theorem {
        Theorem::Richter => {
            let full = Subspace::full(rep.hilbert_dim());
            wold::verify_richter(rep, k.unwrap_or(&full))?
        }
        Theorem::MuhlySolel => wold::verify_muhly_solel(rep)?.report,
        Theorem::Mt1 => wold::verify_mt1(rep)?,
        _ => wold::verify_cauchy_dual_props(rep)?,
    })
}

fn run_loaded(command: &Command, loaded: &Loaded) -> CliResult<(Outcome, Body)> {
    match command {
        Command::Validate => unreachable!("validation is handled before loading"),
        Command::Check { properties } => {
            let checks = run_check(loaded, properties)?;
            let outcome = if checks.iter().all(|c| c.pass) { Outcome::Pass } else { Outcome::Fail };
            Ok((outcome, Body::Checks { checks }))
        }
        Command::Decompose => {
            let (rep, _) = single(loaded)?;
            let d = wold::wold_decompose(rep)?;
            let outcome = if !d.hypotheses_met() {
                Outcome::HypothesisNotMet
            } else if d.certificates_pass() {
                Outcome::Pass
            } else {
                Outcome::Fail
            };
            let bases = [("W", &d.w), ("H_u", &d.h_u), ("H_inf", &d.h_inf)]
                .into_iter()
                .map(|(n, s)| (n.to_string(), JsonMat::from_mat(s.basis())))
                .collect();
            Ok((outcome, Body::Decomposition { report: d.to_report(), bases }))
        }
        Command::Verify { theorem, mode, alpha } => {
            let report = run_verify(loaded, *theorem, *mode, alpha.as_deref())?;
            Ok((report_outcome(&report), Body::Verification { report }))
        }
    }
}

/// Runs `command` on a parsed instance.
pub fn run_instance(command: &Command, inst: &Instance, tol: f64) -> RunReport {
    let fail = |e: CliError| RunReport::new(command, tol, Some(inst), error_outcome(&e), error_body(&e));
    let (validation, loaded) = match validate_instance(inst, tol) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    if let Command::Validate = command {
        let outcome = if validation.pass() { Outcome::Pass } else { Outcome::Fail };
        return RunReport::new(command, tol, Some(inst), outcome, Body::Validation { report: validation });
    }
    let Some(loaded) = loaded else {
        return RunReport::new(command, tol, Some(inst), Outcome::Fail, Body::Validation { report: validation });
    };
    match run_loaded(command, &loaded) {
        Ok((outcome, body)) => RunReport::new(command, tol, Some(inst), outcome, body),
        Err(e) => fail(e),
    }
}

/// Reads and runs one file; unreadable or malformed input gives an input-error report.
pub fn run_path(command: &Command, path: &Path, tol: f64) -> RunReport {
    match read_instance(path) {
        Ok(inst) => run_instance(command, &inst, tol),
        Err(e) => RunReport::new(command, tol, None, Outcome::InputError, error_body(&e)),
    }
}

/// Human summary of a report.
pub fn to_text(source: &str, r: &RunReport) -> String {
    let mut out = String::new();
    let name = r.instance.as_ref().and_then(|i| i.name()).map(|n| format!(" ({n})")).unwrap_or_default();
    out.push_str(&format!("{source}{name}: {:?} [exit {}]\n", r.outcome, r.exit_code));
    let line = |label: &str, c: &Check| {
        let mut s = format!(
            "  {label}{:<40} {} residual {:.3e}",
            c.name,
            if c.pass { "pass" } else { "FAIL" },
            c.residual
        );
        if c.vacuous {
            s.push_str(" (vacuous)");
        }
        s.push('\n');
        s
    };
    match &r.result {
        Body::Validation { report } => report.items.iter().filter(|c| !c.pass).for_each(|c| out.push_str(&line("", c))),
        Body::Checks { checks } => checks.iter().for_each(|c| out.push_str(&line("", c))),
        Body::Decomposition { report, .. } | Body::Verification { report } => {
            out.push_str(&format!("  {}\n", report.theorem));
            for (label, list) in
                [("hypothesis", &report.hypotheses), ("conclusion", &report.conclusions), ("observed", &report.observations)]
            {
                for c in list {
                    out.push_str(&line(&format!("{label:<11}"), c));
                }
            }
            if !report.dims.is_empty() {
                let dims: Vec<String> = report.dims.iter().map(|(k, v)| format!("{k}={v}")).collect();
                out.push_str(&format!("  dims {}\n", dims.join(" ")));
            }
            report.notes.iter().for_each(|n| out.push_str(&format!("  note: {n}\n")));
        }
        Body::Error { kind, message } => out.push_str(&format!("  {kind}: {message}\n")),
    }
    out
}
