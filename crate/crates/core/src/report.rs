use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// One evaluated property: a named boolean with the residual that decided it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
    /// Set when the property holds only because the space it is tested on is zero.
    #[cfg_attr(feature = "serde", serde(default))]
    pub vacuous: bool,
    /// Smallest eigenvalue of the tested operator, for positivity checks.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub min_eigenvalue: Option<f64>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, residual: f64) -> Self {
        Check { name: name.into(), pass, residual, vacuous: false, min_eigenvalue: None }
    }

    /// Passes iff `residual <= threshold`.
    pub fn within(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Check::new(name, residual <= threshold, residual)
    }

    pub fn vacuous(mut self, vacuous: bool) -> Self {
        self.vacuous = vacuous;
        self
    }

    /// Positivity check from a [`PsdOutcome`](crate::linalg::PsdOutcome); the
    /// residual is the amount by which positivity fails, and a 0×0 operator
    /// passes vacuously.
    pub fn psd(name: impl Into<String>, out: &crate::linalg::PsdOutcome) -> Self {
        let mut c = Check::new(name, out.pass, out.violation()).vacuous(out.empty);
        if !out.empty {
            c.min_eigenvalue = Some(out.min_eigenvalue);
        }
        c
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Per-invariant outcome of a structural validator.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidationReport {
    pub items: Vec<Check>,
}

impl ValidationReport {
    pub fn push(&mut self, check: Check) {
        self.items.push(check);
    }

    pub fn pass(&self) -> bool {
        self.items.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.items.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.items.iter().filter(|c| !c.pass)
    }

    pub fn extend_prefixed(&mut self, prefix: &str, other: ValidationReport) {
        for mut c in other.items {
            c.name = alloc::format!("{prefix}{}", c.name);
            self.items.push(c);
        }
    }
}

/// Hypotheses and conclusions of a theorem evaluated on one instance.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Report {
    pub theorem: String,
    pub hypotheses: Vec<Check>,
    pub conclusions: Vec<Check>,
    /// Quantities evaluated on the instance without being asserted.
    #[cfg_attr(feature = "serde", serde(default))]
    pub observations: Vec<Check>,
    pub dims: BTreeMap<String, usize>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(theorem: &str) -> Self {
        Report { theorem: theorem.to_string(), ..Default::default() }
    }

    pub fn hypothesis(&mut self, check: Check) -> &mut Self {
        self.hypotheses.push(check);
        self
    }

    pub fn conclusion(&mut self, check: Check) -> &mut Self {
        self.conclusions.push(check);
        self
    }

    pub fn observe(&mut self, check: Check) -> &mut Self {
        self.observations.push(check);
        self
    }

    pub fn observation_named(&self, name: &str) -> Option<&Check> {
        self.observations.iter().find(|c| c.name == name)
    }

    pub fn dim(&mut self, name: &str, value: usize) -> &mut Self {
        self.dims.insert(name.to_string(), value);
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    pub fn hypotheses_met(&self) -> bool {
        self.hypotheses.iter().all(|c| c.pass)
    }

    pub fn pass(&self) -> bool {
        self.conclusions.iter().all(|c| c.pass)
    }

    pub fn conclusion_named(&self, name: &str) -> Option<&Check> {
        self.conclusions.iter().find(|c| c.name == name)
    }

    pub fn hypothesis_named(&self, name: &str) -> Option<&Check> {
        self.hypotheses.iter().find(|c| c.name == name)
    }

    pub fn dim_named(&self, name: &str) -> Option<usize> {
        self.dims.get(name).copied()
    }
}
