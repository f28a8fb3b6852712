//! Named experiments, selected at run time by id.

mod coding;
mod growth;
mod spectral;
mod walks;

use std::collections::BTreeMap;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::report::Report;

pub trait Experiment: Send + Sync {
    fn id(&self) -> &'static str;
    fn title(&self) -> &'static str;
    /// Wall-clock allowance in seconds, if the experiment has one.
    fn time_budget(&self) -> Option<f64> {
        None
    }
    fn run(&self, config: &ExperimentConfig) -> Result<Report>;
}

pub struct ExperimentRegistry {
    experiments: BTreeMap<&'static str, Box<dyn Experiment>>,
}

impl Default for ExperimentRegistry {
    fn default() -> Self {
        let mut r = ExperimentRegistry {
            experiments: BTreeMap::new(),
        };
        r.register(Box::new(spectral::CaseOneRho));
        r.register(Box::new(growth::GrowthRate));
        r.register(Box::new(growth::Coornaert));
        r.register(Box::new(walks::TreeWalk));
        r.register(Box::new(walks::KernelWalk));
        r.register(Box::new(spectral::TwistedUpperBound));
        r.register(Box::new(spectral::TreeGap));
        r.register(Box::new(spectral::AmenableTwist));
        r.register(Box::new(coding::Layers));
        r.register(Box::new(coding::SphereLemmas));
        r.register(Box::new(walks::ConvolutionBounds));
        r.register(Box::new(walks::RhoInfinity));
        r.register(Box::new(spectral::HolderSuite));
        r.register(Box::new(walks::Grigorchuk));
        r.register(Box::new(growth::KernelGrowth));
        r
    }
}

impl ExperimentRegistry {
    pub fn register(&mut self, e: Box<dyn Experiment>) {
        self.experiments.insert(e.id(), e);
    }

    /// Ids in numeric order: A1, A2, …, A10.
    pub fn ids(&self) -> Vec<&'static str> {
        let mut ids: Vec<_> = self.experiments.keys().copied().collect();
        ids.sort_by_key(|id| (id.len(), *id));
        ids
    }

    pub fn get(&self, id: &str) -> Result<&dyn Experiment> {
        self.experiments.get(id).map(|e| e.as_ref()).ok_or_else(|| {
            CliError::config(format!(
                "unknown experiment `{id}`; known: {}",
                self.ids().join(", ")
            ))
        })
    }

    pub fn run(&self, config: &ExperimentConfig) -> Result<Report> {
        let e = self.get(&config.id)?;
        config.validate()?;
        e.run(config)
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    ExperimentRegistry::default().run(config)
}
