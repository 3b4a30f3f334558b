use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::weight::WeightFunction;

/// Parameters shared by all generators.
#[derive(Debug, Clone)]
pub struct GenConfig {
    /// Nodes to add (`N`).
    pub nodes: usize,
    /// Distinct hosts per new node (`ell`).
    pub ell: usize,
    pub weight: WeightFunction,
    /// Master seed; generators that take no explicit stream derive theirs from it.
    pub seed: u64,
    /// Worker count for the batch-parallel generator.
    pub workers: usize,
}

impl GenConfig {
    pub fn new(nodes: usize, ell: usize, weight: WeightFunction) -> Self {
        Self {
            nodes,
            ell,
            weight,
            seed: 0,
            workers: 1,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    /// Checks `1 <= ell <= n0`, that ids fit, and that every seed node can host.
    pub fn validate(&self, seed: &Graph) -> Result<()> {
        if self.ell == 0 {
            return Err(Error::InvalidConfig("ell must be at least 1".into()));
        }
        if self.ell > seed.node_count() {
            return Err(Error::InvalidConfig(format!(
                "ell = {} exceeds the {} seed nodes",
                self.ell,
                seed.node_count()
            )));
        }
        let total = seed.node_count().checked_add(self.nodes);
        if total.is_none_or(|t| t > NodeId::MAX as usize) {
            return Err(Error::InvalidConfig(format!(
                "{} + {} nodes exceed the id space",
                seed.node_count(),
                self.nodes
            )));
        }
        if self.nodes.checked_mul(self.ell).is_none() {
            return Err(Error::InvalidConfig("N * ell overflows".into()));
        }
        if let Some(v) = seed.degrees().iter().position(|&d| d == 0) {
            return Err(Error::InvalidConfig(format!(
                "seed node {v} is isolated; every seed node needs degree >= 1"
            )));
        }
        Ok(())
    }
}
