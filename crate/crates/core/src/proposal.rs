//! Dynamic proposal list for sampling nodes proportionally to `f(degree)`.
//!
//! Node `v` holds `c(v)` entries in the list. A uniform entry is proposed and
//! accepted with probability `w(v) / U`, where `w(v) = f(d_v) / c(v)` and `U`
//! is a maintained upper bound on every `w(v)`. Whenever a node is touched,
//! its count grows until `w(v) <= W / n`, and `U` is raised to cover that
//! threshold, so `U` never underestimates the true maximum.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::RandomSource;
use crate::weight::WeightFunction;

/// Physical representation of the first entry of every node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntryLayout {
    /// Every entry is stored.
    Explicit,
    /// Each node's first entry is virtual: index `k < n` of the combined
    /// list maps to node `k`; only overflow entries are stored.
    #[default]
    ImplicitFirst,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProposalStats {
    pub explicit_len: usize,
    pub implicit_len: usize,
    /// `explicit_len + implicit_len`, which equals the sum of all counts.
    pub total_len: usize,
    pub total_weight: f64,
    pub node_count: usize,
    pub accept_bound: f64,
}

#[derive(Debug, Clone)]
pub struct ProposalList {
    weight: WeightFunction,
    layout: EntryLayout,
    entries: Vec<NodeId>,
    counts: Vec<u32>,
    degrees: Vec<u32>,
    total_weight: f64,
    accept_bound: f64,
}

impl ProposalList {
    pub fn build(g: &Graph, f: &WeightFunction, layout: EntryLayout) -> Result<Self> {
        Self::from_degrees(g.degrees(), f, layout)
    }

    /// Initial counts are `c(v) = ceil(f(d_v) * n / W)` (at least one) and
    /// the acceptance bound starts at `W / n`.
    pub fn from_degrees(degrees: &[u32], f: &WeightFunction, layout: EntryLayout) -> Result<Self> {
        if !f.is_non_decreasing() {
            return Err(Error::Unsupported(
                "the proposal list requires a non-decreasing weight function".into(),
            ));
        }
        if degrees.is_empty() {
            return Err(Error::InvalidInput("cannot build a proposal list over no nodes".into()));
        }
        if let Some(v) = degrees.iter().position(|&d| d == 0) {
            return Err(Error::InvalidInput(format!("node {v} has degree 0")));
        }
        let weights = degrees
            .iter()
            .map(|&d| f.weight(d))
            .collect::<Result<Vec<_>>>()?;
        let total_weight: f64 = weights.iter().sum();
        if total_weight <= 0.0 {
            return Err(Error::InvalidInput("total weight is zero".into()));
        }
        let n = degrees.len() as f64;
        let threshold = total_weight / n;
        let counts: Vec<u32> = weights.iter().map(|&w| count_for(w, threshold)).collect();

        let skip = u32::from(layout == EntryLayout::ImplicitFirst);
        let stored: usize = counts.iter().map(|&c| (c - skip) as usize).sum();
        let mut entries = Vec::with_capacity(stored.max(16));
        for (v, &c) in counts.iter().enumerate() {
            entries.extend(std::iter::repeat_n(v as NodeId, (c - skip) as usize));
        }

        Ok(Self {
            weight: f.clone(),
            layout,
            entries,
            counts,
            degrees: degrees.to_vec(),
            total_weight,
            accept_bound: threshold,
        })
    }

    /// Reserves room for `additional` more nodes.
    pub fn reserve_nodes(&mut self, additional: usize) {
        self.counts.reserve(additional);
        self.degrees.reserve(additional);
    }

    pub fn sample(&self, rng: &mut RandomSource) -> NodeId {
        self.sample_counted(rng).0
    }

    /// Like [`ProposalList::sample`], also returning the number of proposals made.
    #[inline]
    pub fn sample_counted(&self, rng: &mut RandomSource) -> (NodeId, u32) {
        let implicit = self.implicit_len();
        let size = implicit + self.entries.len();
        let mut proposals = 0;
        loop {
            proposals += 1;
            let k = rng.below_usize(size);
            let h = if k < implicit {
                k as NodeId
            } else {
                self.entries[k - implicit]
            };
            let w = self.weight.at(self.degrees[h as usize]) / self.counts[h as usize] as f64;
            if rng.unit() * self.accept_bound < w {
                return (h, proposals);
            }
        }
    }

    /// Adds node `v = n` with initial degree `d`; its count is computed
    /// after `W` and `n` include it.
    pub fn insert_node(&mut self, v: NodeId, d: u32) -> Result<()> {
        let n = self.degrees.len();
        if v as usize != n {
            return Err(Error::Logic(format!(
                "insert of node {v} into a list of {n} nodes (ids must be dense)"
            )));
        }
        if d == 0 {
            return Err(Error::Logic(format!("node {v} inserted with degree 0")));
        }
        let w = self.weight.weight(d)?;
        self.total_weight += w;
        self.degrees.push(d);
        let threshold = self.threshold();
        let c = count_for(w, threshold);
        self.counts.push(c);
        let skip = u32::from(self.layout == EntryLayout::ImplicitFirst);
        self.entries
            .extend(std::iter::repeat_n(v, (c - skip) as usize));
        self.raise_bound(threshold);
        Ok(())
    }

    /// Raises the degree of `h` by one and appends entries of `h` until
    /// `w(h) <= W / n`.
    pub fn increment_host(&mut self, h: NodeId) -> Result<()> {
        let i = h as usize;
        let d = *self
            .degrees
            .get(i)
            .ok_or_else(|| Error::Logic(format!("host {h} is not in the list")))?;
        let old = self.weight.weight(d)?;
        let new = self.weight.weight(d + 1)?;
        if new < old {
            return Err(Error::Logic(format!(
                "weight of host {h} would decrease from {old} to {new}"
            )));
        }
        self.degrees[i] = d + 1;
        self.total_weight += new - old;
        let threshold = self.threshold();
        let mut c = self.counts[i];
        while new > c as f64 * threshold {
            c += 1;
            self.entries.push(h);
        }
        self.counts[i] = c;
        self.raise_bound(threshold);
        Ok(())
    }

    pub fn stats(&self) -> ProposalStats {
        let implicit_len = self.implicit_len();
        ProposalStats {
            explicit_len: self.entries.len(),
            implicit_len,
            total_len: implicit_len + self.entries.len(),
            total_weight: self.total_weight,
            node_count: self.degrees.len(),
            accept_bound: self.accept_bound,
        }
    }

    pub fn layout(&self) -> EntryLayout {
        self.layout
    }

    pub fn node_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, v: NodeId) -> u32 {
        self.degrees[v as usize]
    }

    pub fn count(&self, v: NodeId) -> u32 {
        self.counts[v as usize]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn accept_bound(&self) -> f64 {
        self.accept_bound
    }

    pub fn weight_function(&self) -> &WeightFunction {
        &self.weight
    }

    pub fn into_degrees(self) -> Vec<u32> {
        self.degrees
    }

    /// Recomputes every invariant by a full scan.
    pub fn audit(&self) -> Result<AuditReport> {
        let mut seen = vec![0u32; self.degrees.len()];
        for &h in &self.entries {
            let slot = seen
                .get_mut(h as usize)
                .ok_or_else(|| Error::Logic(format!("entry for unknown node {h}")))?;
            *slot += 1;
        }
        let skip = u32::from(self.layout == EntryLayout::ImplicitFirst);
        let mut recomputed_weight = 0.0;
        let mut max_ratio: f64 = 0.0;
        for (v, (&d, &c)) in self.degrees.iter().zip(&self.counts).enumerate() {
            if c == 0 {
                return Err(Error::Logic(format!("node {v} has count 0")));
            }
            if seen[v] + skip != c {
                return Err(Error::Logic(format!(
                    "node {v}: count {c} but {} entries",
                    seen[v] + skip
                )));
            }
            let w = self.weight.weight(d)?;
            recomputed_weight += w;
            max_ratio = max_ratio.max(w / c as f64);
        }
        Ok(AuditReport {
            entry_count: self.counts.iter().map(|&c| c as usize).sum(),
            recomputed_weight,
            max_ratio,
        })
    }

    #[inline]
    fn implicit_len(&self) -> usize {
        match self.layout {
            EntryLayout::Explicit => 0,
            EntryLayout::ImplicitFirst => self.degrees.len(),
        }
    }

    #[inline]
    fn threshold(&self) -> f64 {
        self.total_weight / self.degrees.len() as f64
    }

    #[inline]
    fn raise_bound(&mut self, threshold: f64) {
        if threshold > self.accept_bound {
            self.accept_bound = threshold;
        }
    }
}

/// Full-scan results from [`ProposalList::audit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditReport {
    /// Sum of all counts, which matched the stored plus implicit entries.
    pub entry_count: usize,
    pub recomputed_weight: f64,
    /// `max_v f(d_v) / c(v)`.
    pub max_ratio: f64,
}

/// Smallest count `c >= 1` with `w <= c * threshold`.
#[inline]
pub(crate) fn count_for(w: f64, threshold: f64) -> u32 {
    let mut c = ((w / threshold).ceil() as u32).max(1);
    while w > c as f64 * threshold {
        c += 1;
    }
    c
}
