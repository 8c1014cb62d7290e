//! JSON report types. Every report round-trips through serde.

use peterson::hitsolver::Part;
use peterson::reductions::Strategy;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimReport {
    pub n: usize,
    pub d: u64,
    pub part: Part,
    pub dim: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Vec<String>>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightReport {
    pub n: usize,
    pub omega: String,
    pub part: Part,
    pub dim: usize,
    pub basis: Vec<String>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KamekoReport {
    pub n: usize,
    pub source_degree: u32,
    pub target_degree: u32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub surjective: bool,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanReport {
    pub n: usize,
    pub d: u64,
    pub feasible: bool,
    pub steps: Vec<String>,
    pub strategy: Strategy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub n: usize,
    pub d: u32,
    pub dim: usize,
    pub cohit_dim: usize,
    /// Invariant classes as sums of admissible monomials.
    pub basis: Vec<String>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub rows: Vec<SuiteRow>,
    pub pass: bool,
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
        for r in &self.rows {
            writeln!(
                f,
                "{} {:<width$}  expected {:<28} got {:<28} [{} ms]",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                r.expected,
                r.got,
                r.elapsed_ms
            )?;
        }
        let passed = self.rows.iter().filter(|r| r.pass).count();
        write!(f, "{passed}/{} checks pass", self.rows.len())
    }
}
