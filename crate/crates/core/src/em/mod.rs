//! Two-phase generator for arbitrary non-negative weight functions.
//!
//! Phase 1 only decides the *degree* of every host, sampling from degree
//! groups weighted by `c_d * f(d)` and correcting for hosts already taken by
//! the same node. Phase 2 sorts the requests by (degree, time) and resolves
//! each one to a node chosen uniformly among those holding that degree at
//! that time, using a message queue `PQ_M` keyed by (degree, time) and a
//! score queue `PQ_U` whose minimum is a uniform pick.
//!
//! Request times are `t = ell * i + j` for the `j`-th host (1-based) of the
//! `i`-th new node (1-based). A node entering degree `d` after node `i`
//! finished is announced with time `ell * (i + 1)`, so it is visible to later
//! nodes but never to the remaining requests of node `i`.

mod degree_groups;
mod queues;

pub use degree_groups::DegreeGroups;
pub use queues::{CountingHeap, Score};

use crate::config::GenConfig;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::RandomSource;

/// Node `node` asks for its `slot`-th host to have degree `degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HostReq {
    pub node: NodeId,
    pub slot: u32,
    pub degree: u32,
}

impl HostReq {
    /// `ell * i + j` with `i` the 1-based arrival index of `node`.
    pub fn time(&self, n0: usize, ell: usize) -> u64 {
        let i = self.node as u64 - n0 as u64 + 1;
        ell as u64 * i + self.slot as u64
    }
}

/// From `time` on, `node` has degree `degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExMsg {
    pub degree: u32,
    pub time: u64,
    pub node: NodeId,
}

/// A node waiting in `PQ_U` with its uniform score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScoredNode {
    pub score: Score,
    pub node: NodeId,
}

/// Priority-queue and sorting workload of one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub pq_m_push: u64,
    pub pq_m_pop: u64,
    pub pq_u_push: u64,
    pub pq_u_pop: u64,
    pub sorted_items: u64,
    pub requests: u64,
}

impl OpCounts {
    pub fn pq_ops(&self) -> u64 {
        self.pq_m_push + self.pq_m_pop + self.pq_u_push + self.pq_u_pop
    }
}

#[derive(Debug, Clone, Default)]
pub struct Phase1Output {
    /// Requests in arrival (time) order.
    pub requests: Vec<HostReq>,
    /// Initial `PQ_M` contents: one message per seed node and per new node.
    pub messages: Vec<ExMsg>,
}

/// Draws a degree with probability proportional to `(c_d - s_d) * f(d)`,
/// where `taken` lists `(d, s_d)` for hosts already chosen by this node.
pub fn sample_degree(
    groups: &DegreeGroups,
    taken: &[(u32, u64)],
    rng: &mut RandomSource,
) -> Result<u32> {
    let total = groups.total_weight();
    let mut excluded = 0.0;
    for &(d, s) in taken {
        excluded += s as f64 * groups.weight_of(d)?;
    }
    if !(total - excluded > total * 1e-12) {
        return Err(Error::CannotSatisfy);
    }
    loop {
        let d = groups.draw(rng).ok_or(Error::CannotSatisfy)?;
        let c = groups.count(d);
        if c == 0 {
            continue;
        }
        let s = taken
            .iter()
            .find(|&&(td, _)| td == d)
            .map_or(0, |&(_, s)| s);
        if rng.below(c) >= s {
            return Ok(d);
        }
    }
}

pub fn phase1(seed: &Graph, cfg: &GenConfig, rng: &mut RandomSource) -> Result<Phase1Output> {
    cfg.validate(seed)?;
    let n0 = seed.node_count();
    let ell = cfg.ell;
    let mut groups = DegreeGroups::new(cfg.weight.clone(), n0 + cfg.nodes);
    let mut messages = Vec::with_capacity(n0 + cfg.nodes);
    for (v, &d) in seed.degrees().iter().enumerate() {
        messages.push(ExMsg {
            degree: d,
            time: 0,
            node: v as NodeId,
        });
        groups.add(d, 1)?;
    }

    let mut requests = Vec::with_capacity(cfg.nodes * ell);
    let mut taken: Vec<(u32, u64)> = Vec::with_capacity(ell);
    for i in 1..=cfg.nodes {
        let v = (n0 + i - 1) as NodeId;
        messages.push(ExMsg {
            degree: ell as u32,
            time: (ell * (i + 1)) as u64,
            node: v,
        });
        taken.clear();
        for j in 1..=ell {
            let d = sample_degree(&groups, &taken, rng)?;
            match taken.iter_mut().find(|(td, _)| *td == d) {
                Some((_, s)) => *s += 1,
                None => taken.push((d, 1)),
            }
            requests.push(HostReq {
                node: v,
                slot: j as u32,
                degree: d,
            });
        }
        for &(d, s) in &taken {
            groups.add(d, -(s as i64))?;
            groups.add(d + 1, s as i64)?;
        }
        groups.add(ell as u32, 1)?;
        debug_assert_eq!(groups.node_count(), (n0 + i) as u64);
    }
    Ok(Phase1Output { requests, messages })
}

/// Stable sort by degree; requests arrive in time order, so the result is
/// ordered by (degree, time).
pub fn sort_requests(requests: &mut [HostReq]) {
    requests.sort_by_key(|r| r.degree);
}

/// Resolves sorted requests to hosts. Returns the flat host list in
/// generation order (`ell` per new node) and the queue workload.
pub fn phase2(
    sorted: &[HostReq],
    messages: Vec<ExMsg>,
    n0: usize,
    ell: usize,
    rng: &mut RandomSource,
) -> Result<(Vec<NodeId>, OpCounts)> {
    let mut pq_m = CountingHeap::with_capacity(messages.len());
    for m in messages {
        pq_m.push(m);
    }
    let mut pq_u: CountingHeap<ScoredNode> = CountingHeap::default();
    let mut hosts = vec![NodeId::MAX; sorted.len()];
    let mut seq = 0u64;

    for group in sorted.chunk_by(|a, b| a.degree == b.degree) {
        let d = group[0].degree;
        while pq_m.peek().is_some_and(|m| m.degree < d) {
            pq_m.pop();
        }
        pq_u.clear();
        let mut r_min = 0.0f64;
        let r_max = 1.0f64;
        let mut last_t = 0u64;
        for req in group {
            let t = req.time(n0, ell);
            debug_assert!(t > last_t, "requests within a degree group must be time ordered");
            last_t = t;
            while let Some(m) = pq_m.peek().copied() {
                if m.degree != d || m.time >= t {
                    break;
                }
                pq_m.pop();
                let value = r_min + (r_max - r_min) * rng.unit();
                pq_u.push(ScoredNode {
                    score: Score { value, seq },
                    node: m.node,
                });
                seq += 1;
            }
            let picked = pq_u.pop().ok_or_else(|| {
                Error::Logic(format!("no node of degree {d} available at time {t}"))
            })?;
            debug_assert!(picked.score.value >= r_min);
            r_min = picked.score.value;
            let i = (req.node as usize - n0) + 1;
            hosts[(i - 1) * ell + (req.slot as usize - 1)] = picked.node;
            pq_m.push(ExMsg {
                degree: d + 1,
                time: (ell * (i + 1)) as u64,
                node: picked.node,
            });
        }
    }

    let counts = OpCounts {
        pq_m_push: pq_m.pushes,
        pq_m_pop: pq_m.pops,
        pq_u_push: pq_u.pushes,
        pq_u_pop: pq_u.pops,
        sorted_items: sorted.len() as u64,
        requests: sorted.len() as u64,
    };
    Ok((hosts, counts))
}

/// Runs both phases; streams derive from `cfg.seed`.
pub fn generate_em(seed: &Graph, cfg: &GenConfig) -> Result<(Graph, OpCounts)> {
    let root = RandomSource::new(cfg.seed);
    let Phase1Output {
        mut requests,
        messages,
    } = phase1(seed, cfg, &mut root.child(0))?;
    sort_requests(&mut requests);
    let n0 = seed.node_count();
    let (hosts, counts) = phase2(&requests, messages, n0, cfg.ell, &mut root.child(1))?;

    let mut degrees = Vec::with_capacity(n0 + cfg.nodes);
    degrees.extend_from_slice(seed.degrees());
    degrees.resize(n0 + cfg.nodes, cfg.ell as u32);
    for &h in &hosts {
        degrees[h as usize] += 1;
    }
    Ok((Graph::grown(seed, cfg.ell, &hosts, degrees), counts))
}
