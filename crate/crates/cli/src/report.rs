use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl Outcome {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 2,
            Outcome::Inconclusive => 3,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    CertifiedLowerBound,
    Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub value: f64,
    pub method: Method,
}

/// Columns of numbers, all computed by one method.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub method: Method,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(method: Method, columns: &[&str]) -> Self {
        Table {
            method,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Proof constants in force for a run; absent ones do not apply.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Constants {
    pub delta: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub c3: Option<f64>,
    pub d: Option<f64>,
    pub d0: Option<f64>,
    pub r0: Option<usize>,
    pub l0: Option<usize>,
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub id: String,
    pub title: String,
    pub config: ExperimentConfig,
    pub outcome: Outcome,
    pub checks: Vec<Check>,
    pub values: BTreeMap<String, Quantity>,
    pub tables: BTreeMap<String, Table>,
    pub constants: Constants,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(id: &str, title: &str, config: &ExperimentConfig) -> Self {
        Report {
            id: id.into(),
            title: title.into(),
            config: config.clone(),
            outcome: Outcome::Inconclusive,
            checks: Vec::new(),
            values: BTreeMap::new(),
            tables: BTreeMap::new(),
            constants: Constants::default(),
            notes: Vec::new(),
        }
    }

    pub fn value(&mut self, name: &str, value: f64, method: Method) -> &mut Self {
        self.values.insert(name.into(), Quantity { value, method });
        self
    }

    pub fn table(&mut self, name: &str, t: Table) -> &mut Self {
        self.tables.insert(name.into(), t);
        self
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            pass,
        });
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    /// PASS when every check passed, FAIL otherwise.
    pub fn finish(mut self) -> Self {
        self.outcome =
            Outcome::from_bool(!self.checks.is_empty() && self.checks.iter().all(|c| c.pass));
        self
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }
}
