//! Sequential proposal-list generator.
//!
//! Each new node draws its `ell` hosts from the proposal list as it stands
//! when the node arrives, rejecting repeats; the list and degrees are
//! updated once all hosts are fixed.

use std::time::{Duration, Instant};

use crate::config::GenConfig;
use crate::error::Result;
use crate::graph::{Graph, NodeId};
use crate::proposal::{EntryLayout, ProposalList, ProposalStats};
use crate::rng::RandomSource;

pub fn generate_seq(seed: &Graph, cfg: &GenConfig, rng: &mut RandomSource) -> Result<Graph> {
    generate_seq_with_layout(seed, cfg, EntryLayout::default(), rng)
}

pub fn generate_seq_with_layout(
    seed: &Graph,
    cfg: &GenConfig,
    layout: EntryLayout,
    rng: &mut RandomSource,
) -> Result<Graph> {
    let (g, _, _) = run(seed, cfg, layout, rng, &mut ())?;
    Ok(g)
}

/// Per-node measurements of a sequential run.
#[derive(Debug, Clone, Default)]
pub struct SeqTrace {
    /// Total proposal list length (explicit plus implicit) after each node.
    pub proposal_len: Vec<usize>,
    /// Stored entries after each node.
    pub explicit_len: Vec<usize>,
    /// Rejected proposals per node, counting both acceptance rejections and repeated hosts.
    pub rejections: Vec<u32>,
    /// Time spent in the sampling loop, excluding setup.
    pub wall: Duration,
    pub final_stats: Option<ProposalStats>,
}

impl SeqTrace {
    pub fn total_rejections(&self) -> u64 {
        self.rejections.iter().map(|&r| r as u64).sum()
    }
}

/// Same output as [`generate_seq_with_layout`] for the same stream, plus a trace.
pub fn generate_seq_instrumented(
    seed: &Graph,
    cfg: &GenConfig,
    layout: EntryLayout,
    rng: &mut RandomSource,
) -> Result<(Graph, SeqTrace)> {
    let mut trace = SeqTrace {
        proposal_len: Vec::with_capacity(cfg.nodes),
        explicit_len: Vec::with_capacity(cfg.nodes),
        rejections: Vec::with_capacity(cfg.nodes),
        ..SeqTrace::default()
    };
    let (g, wall, stats) = run(seed, cfg, layout, rng, &mut trace)?;
    trace.wall = wall;
    trace.final_stats = Some(stats);
    Ok((g, trace))
}

trait Observer {
    fn node_done(&mut self, rejected: u32, pl: &ProposalList);
}

impl Observer for () {
    #[inline(always)]
    fn node_done(&mut self, _: u32, _: &ProposalList) {}
}

impl Observer for SeqTrace {
    fn node_done(&mut self, rejected: u32, pl: &ProposalList) {
        let s = pl.stats();
        self.proposal_len.push(s.total_len);
        self.explicit_len.push(s.explicit_len);
        self.rejections.push(rejected);
    }
}

fn run(
    seed: &Graph,
    cfg: &GenConfig,
    layout: EntryLayout,
    rng: &mut RandomSource,
    obs: &mut impl Observer,
) -> Result<(Graph, Duration, ProposalStats)> {
    cfg.validate(seed)?;
    let ell = cfg.ell;
    let n0 = seed.node_count();
    let mut pl = ProposalList::build(seed, &cfg.weight, layout)?;
    pl.reserve_nodes(cfg.nodes);
    let mut hosts: Vec<NodeId> = Vec::with_capacity(cfg.nodes * ell);
    let mut picked: Vec<NodeId> = vec![0; ell];

    let start = Instant::now();
    for i in 0..cfg.nodes {
        let v = (n0 + i) as NodeId;
        let mut rejected = 0u32;
        let mut k = 0;
        while k < ell {
            let (h, proposals) = pl.sample_counted(rng);
            rejected += proposals - 1;
            if picked[..k].contains(&h) {
                rejected += 1;
                continue;
            }
            picked[k] = h;
            k += 1;
        }
        pl.insert_node(v, ell as u32)?;
        for &h in &picked {
            pl.increment_host(h)?;
        }
        hosts.extend_from_slice(&picked);
        obs.node_done(rejected, &pl);
    }
    let wall = start.elapsed();

    let stats = pl.stats();
    Ok((Graph::grown(seed, ell, &hosts, pl.into_degrees()), wall, stats))
}
