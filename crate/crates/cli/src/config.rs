use std::fs;
use std::path::{Path, PathBuf};

use horodyn::group::Group;
use horodyn::subgroup::subgroup_from_spec;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// One experiment run. Parameters left unset take the experiment's
/// defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<String>,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    /// largest radius enumerated by breadth-first search
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bfs_radius: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depths: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ells: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ExperimentConfig {
    pub fn new(id: &str) -> Self {
        ExperimentConfig {
            id: id.into(),
            group: None,
            subgroup: None,
            params: Params::default(),
            out: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Parses the specs and checks the numeric ranges.
    pub fn validate(&self) -> Result<()> {
        if let Some(spec) = &self.group {
            let g = Group::from_spec(spec)?;
            if let Some(h) = &self.subgroup {
                subgroup_from_spec(&g, h)?;
            }
        } else if self.subgroup.is_some() {
            return Err(CliError::config("a subgroup needs a group"));
        }
        let p = &self.params;
        for (name, list) in [
            ("radii", &p.radii),
            ("depths", &p.depths),
            ("ells", &p.ells),
        ] {
            if list.as_ref().is_some_and(|l| l.is_empty()) {
                return Err(CliError::config(format!("`{name}` is empty")));
            }
        }
        if p.depths.as_ref().is_some_and(|d| d.contains(&0))
            || p.ells.as_ref().is_some_and(|l| l.contains(&0))
        {
            return Err(CliError::config("depths and shell radii start at 1"));
        }
        if p.delta == Some(0) {
            return Err(CliError::config("`delta` must be positive"));
        }
        if p.n_max == Some(0) || p.cases == Some(0) {
            return Err(CliError::config("`n_max` and `cases` must be positive"));
        }
        if p.tol.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
            return Err(CliError::config("`tol` must be positive"));
        }
        Ok(())
    }

    pub fn group_or(&self, default: &str) -> Result<Group> {
        Ok(Group::from_spec(self.group.as_deref().unwrap_or(default))?)
    }

    pub fn subgroup_or<'a>(&'a self, default: &'a str) -> &'a str {
        self.subgroup.as_deref().unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = ExperimentConfig::new("A7");
        c.group = Some("free:2".into());
        c.subgroup = Some("trivial".into());
        c.params.radii = Some(vec![10, 11, 12]);
        c.params.tol = Some(1e-2);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), c);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_specs() {
        let mut c = ExperimentConfig::new("A1");
        c.group = Some("free:x".into());
        assert!(c.validate().is_err());
        c.group = Some("free:2".into());
        c.params.radii = Some(vec![]);
        assert!(matches!(c.validate(), Err(CliError::Config(_))));
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"id":"A1","bogus":1}"#).is_err());
    }
}
