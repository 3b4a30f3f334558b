//! Batch-parallel proposal-list generator.
//!
//! A batch starting at sample `s` draws hosts from the distribution frozen at
//! `s`. For sample `i` every host attempt first flips a coin with heads
//! probability `W_s / W_i'`, where `W_i'` bounds the true `W_i`; heads draws
//! from the frozen lists, tails marks `i` as dependent and lowers the shared
//! cut `l`. Samples `s..l` are then committed, and sample `l` is resolved at
//! the start of the next batch from the mixture of the weight added during
//! the batch and the full distribution at `l`.
//!
//! Worker `p` owns every node id congruent to `p` modulo the worker count:
//! it samples the hosts of its new nodes, keeps the proposal entries, degrees
//! and counts of its nodes in its own shard, and applies every host
//! increment aimed at them. The output depends only on the master seed and
//! the worker count.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Barrier, Mutex, MutexGuard, PoisonError, RwLock, RwLockReadGuard};
use std::time::{Duration, Instant};

use crate::config::GenConfig;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::proposal::count_for;
use crate::rng::RandomSource;
use crate::weight::WeightFunction;

/// How the workers are run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Executor {
    /// One OS thread per worker, two barriers per batch.
    #[default]
    Threads,
    /// All workers on the calling thread, one after another. Produces the
    /// same graph as [`Executor::Threads`] for the same worker count.
    Inline,
}

/// Scalars fixed for the duration of a batch. Sample indices count new
/// nodes from 0, so sample `i` creates node `n0 + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchState {
    pub s: usize,
    /// First dependent sample, or `N` if none.
    pub l: usize,
    pub w_s: f64,
    pub n_s: usize,
    pub delta_s: u32,
}

/// Host records produced by one worker, bucketed by the owner of the host.
#[derive(Debug, Default)]
pub struct HostBuffer {
    /// `(sample index, host)` in increasing sample order.
    pub records: Vec<(usize, NodeId)>,
}

#[derive(Debug, Clone, Default)]
pub struct ParTrace {
    pub batches: u64,
    /// Stored proposal entries over all workers at the end.
    pub proposal_len: usize,
    pub wall: Duration,
}

/// Upper bound `W_i'` on the total weight before sample `i`.
///
/// Each sample adds a node of weight `ell^alpha` and raises `ell` degrees by
/// one; with `D = max(delta_s, ell)` no degree exceeds `D + (i - s)`.
pub fn upper_bound_w(bs: &BatchState, i: usize, ell: usize, f: &WeightFunction) -> Result<f64> {
    let alpha = f.alpha().ok_or_else(|| {
        Error::Unsupported("the parallel generator needs a polynomial weight function".into())
    })?;
    if i < bs.s {
        return Err(Error::InvalidInput(format!(
            "sample {i} precedes the batch start {}",
            bs.s
        )));
    }
    Ok(bound(bs, i, ell, alpha))
}

#[inline]
fn bound(bs: &BatchState, i: usize, ell: usize, alpha: f64) -> f64 {
    let k = (i - bs.s) as f64;
    let l = ell as f64;
    let per = l + l.powf(alpha);
    if alpha <= 1.0 {
        bs.w_s + per * k
    } else {
        let d = bs.delta_s.max(ell as u32) as f64;
        bs.w_s + per * ((d + k).powf(alpha) - d.powf(alpha))
    }
}

/// Checks `W_s <= W_l <= W_l'` and returns the probability of drawing from
/// the added weight once the coin has come up tails.
fn mixture(w_s: f64, w_l: f64, w_lp: f64) -> Result<f64> {
    let eps = 1e-9 * w_lp.abs().max(1.0);
    if !(w_s <= w_l + eps && w_l <= w_lp + eps && w_s < w_lp) {
        return Err(Error::Logic(format!(
            "batch weights out of order: W_s = {w_s}, W_l = {w_l}, W_l' = {w_lp}"
        )));
    }
    let heads = w_s / w_lp;
    let added = (w_l - w_s).max(0.0) / w_lp;
    let rest = (w_lp - w_l).max(0.0) / w_lp;
    if (heads + added + rest - 1.0).abs() > 1e-9 {
        return Err(Error::Logic(format!(
            "mixture weights sum to {}",
            heads + added + rest
        )));
    }
    Ok(((w_l - w_s) / (w_lp - w_s)).clamp(0.0, 1.0))
}

pub fn generate_par(seed: &Graph, cfg: &GenConfig) -> Result<Graph> {
    generate_par_with(seed, cfg, Executor::default()).map(|(g, _)| g)
}

pub fn generate_par_with(
    seed: &Graph,
    cfg: &GenConfig,
    executor: Executor,
) -> Result<(Graph, ParTrace)> {
    cfg.validate(seed)?;
    let alpha = cfg.weight.alpha().ok_or_else(|| {
        Error::Unsupported("the parallel generator needs a polynomial weight function".into())
    })?;
    if cfg.workers == 0 {
        return Err(Error::InvalidConfig("workers must be at least 1".into()));
    }
    if cfg.nodes == 0 {
        return Ok((seed.clone(), ParTrace::default()));
    }

    let start = Instant::now();
    let (shared, plan) = Shared::new(seed, cfg, alpha);
    let batches = match executor {
        Executor::Inline => run_inline(&shared, plan)?,
        Executor::Threads => run_threads(&shared, plan)?,
    };
    let wall = start.elapsed();
    let (g, proposal_len) = shared.assemble(seed);
    Ok((
        g,
        ParTrace {
            batches,
            proposal_len,
            wall,
        },
    ))
}

#[derive(Debug, Default)]
struct Shard {
    entries: Vec<NodeId>,
    degree: Vec<u32>,
    count: Vec<u32>,
    /// Degree at the first touch in the batch named by `stamp`.
    start_degree: Vec<u32>,
    /// Batch number plus one of the last first touch; 0 for never.
    stamp: Vec<u64>,
    /// Local indices first touched in the latest committed batch.
    touched: Vec<u32>,
    /// Hosts of the new nodes owned by this shard, `ell` per node.
    hosts: Vec<NodeId>,
}

#[derive(Debug, Default, Clone, Copy)]
struct Summary {
    delta_w: f64,
    max_degree: u32,
}

struct Shared {
    workers: usize,
    n0: usize,
    ell: usize,
    nodes: usize,
    alpha: f64,
    f: WeightFunction,
    root: RandomSource,
    shards: Vec<RwLock<Shard>>,
    /// `outbox[src][dest]`.
    outbox: Vec<Vec<Mutex<HostBuffer>>>,
    summaries: Vec<Mutex<Summary>>,
    cuts: [AtomicUsize; 2],
    abort: AtomicBool,
    error: Mutex<Option<Error>>,
}

/// Per-worker copy of the batch parameters; every worker derives the same
/// values from the shared summaries.
#[derive(Debug, Clone)]
struct Plan {
    batch: u64,
    state: BatchState,
    accept_bound: f64,
    threshold: f64,
    prev: Option<Prev>,
}

#[derive(Debug, Clone)]
struct Prev {
    w_s: f64,
    w_l_prime: f64,
    delta: Vec<f64>,
}

struct Pending {
    index: usize,
    hosts: Vec<NodeId>,
}

struct Local {
    id: usize,
    /// Own samples completed in this batch, increasing.
    mine: Vec<usize>,
    mine_hosts: Vec<NodeId>,
    pending: Option<Pending>,
}

impl Local {
    fn new(id: usize) -> Self {
        Self {
            id,
            mine: Vec::new(),
            mine_hosts: Vec::new(),
            pending: None,
        }
    }
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(PoisonError::into_inner)
}

impl Shared {
    fn new(seed: &Graph, cfg: &GenConfig, alpha: f64) -> (Self, Plan) {
        let workers = cfg.workers;
        let f = cfg.weight.clone();
        let n0 = seed.node_count();
        let w0: f64 = seed.degrees().iter().map(|&d| f.at(d)).sum();
        let threshold = w0 / n0 as f64;

        let mut shards: Vec<Shard> = (0..workers).map(|_| Shard::default()).collect();
        let per = (n0 + cfg.nodes) / workers + 1;
        for s in &mut shards {
            s.degree.reserve(per);
            s.count.reserve(per);
            s.start_degree.reserve(per);
            s.stamp.reserve(per);
            s.entries.reserve(2 * per);
        }
        for (v, &d) in seed.degrees().iter().enumerate() {
            let s = &mut shards[v % workers];
            let c = count_for(f.at(d), threshold);
            s.degree.push(d);
            s.count.push(c);
            s.start_degree.push(0);
            s.stamp.push(0);
            s.entries
                .extend(std::iter::repeat_n(v as NodeId, c as usize));
        }

        let shared = Self {
            workers,
            n0,
            ell: cfg.ell,
            nodes: cfg.nodes,
            alpha,
            f,
            root: RandomSource::new(cfg.seed),
            shards: shards.into_iter().map(RwLock::new).collect(),
            outbox: (0..workers)
                .map(|_| (0..workers).map(|_| Mutex::default()).collect())
                .collect(),
            summaries: (0..workers).map(|_| Mutex::default()).collect(),
            cuts: [AtomicUsize::new(cfg.nodes), AtomicUsize::new(cfg.nodes)],
            abort: AtomicBool::new(false),
            error: Mutex::new(None),
        };
        let plan = Plan {
            batch: 0,
            state: BatchState {
                s: 0,
                l: cfg.nodes,
                w_s: w0,
                n_s: n0,
                delta_s: seed.max_degree(),
            },
            accept_bound: threshold,
            threshold,
            prev: None,
        };
        (shared, plan)
    }

    fn fail(&self, e: Error) {
        let mut slot = lock(&self.error);
        if slot.is_none() {
            *slot = Some(e);
        }
        self.abort.store(true, Ordering::SeqCst);
    }

    fn take_error(&self) -> Option<Error> {
        lock(&self.error).take()
    }

    fn cut(&self, batch: u64) -> &AtomicUsize {
        &self.cuts[(batch % 2) as usize]
    }

    /// First sample index at or after `i` owned by worker `p`.
    fn first_owned(&self, p: usize, i: usize) -> usize {
        let r = (self.n0 + i) % self.workers;
        i + (p + self.workers - r) % self.workers
    }

    fn assemble(&self, seed: &Graph) -> (Graph, usize) {
        let shards: Vec<_> = self
            .shards
            .iter()
            .map(|s| s.read().unwrap_or_else(PoisonError::into_inner))
            .collect();
        let n = self.n0 + self.nodes;
        let degrees: Vec<u32> = (0..n)
            .map(|v| shards[v % self.workers].degree[v / self.workers])
            .collect();
        let mut cursor = vec![0usize; self.workers];
        let mut hosts = Vec::with_capacity(self.nodes * self.ell);
        for v in self.n0..n {
            let p = v % self.workers;
            hosts.extend_from_slice(&shards[p].hosts[cursor[p]..cursor[p] + self.ell]);
            cursor[p] += self.ell;
        }
        let len = shards.iter().map(|s| s.entries.len()).sum();
        (Graph::grown(seed, self.ell, &hosts, degrees), len)
    }
}

/// Read-only view of all shards during phase 1.
struct View<'a> {
    shards: Vec<RwLockReadGuard<'a, Shard>>,
    workers: usize,
    max_len: usize,
    accept_bound: f64,
    f: &'a WeightFunction,
}

impl<'a> View<'a> {
    fn new(sh: &'a Shared, accept_bound: f64) -> Self {
        let shards: Vec<_> = sh
            .shards
            .iter()
            .map(|s| s.read().unwrap_or_else(PoisonError::into_inner))
            .collect();
        let max_len = shards.iter().map(|s| s.entries.len()).max().unwrap_or(0);
        Self {
            shards,
            workers: sh.workers,
            max_len,
            accept_bound,
            f: &sh.f,
        }
    }

    /// Draws from the frozen distribution: a uniform slot of a uniform shard
    /// padded to the longest length, retried when past the shard's end.
    fn sample(&self, rng: &mut RandomSource) -> NodeId {
        loop {
            let r = rng.below_usize(self.workers);
            let c = rng.below_usize(self.max_len);
            let shard = &self.shards[r];
            let Some(&h) = shard.entries.get(c) else {
                continue;
            };
            let k = h as usize / self.workers;
            let w = self.f.at(shard.degree[k]) / shard.count[k] as f64;
            if rng.unit() * self.accept_bound < w {
                return h;
            }
        }
    }

    fn added_weight(&self, shard: &Shard, k: usize) -> f64 {
        let start = shard.start_degree[k];
        let before = if start == 0 { 0.0 } else { self.f.at(start) };
        self.f.at(shard.degree[k]) - before
    }

    /// Draws proportionally to the weight added in the previous batch.
    fn sample_added(&self, delta: &[f64], rng: &mut RandomSource) -> Result<NodeId> {
        let total: f64 = delta.iter().sum();
        let mut target = rng.unit() * total;
        let mut q = None;
        for (r, &d) in delta.iter().enumerate() {
            if d > 0.0 {
                q = Some(r);
                if target < d {
                    break;
                }
                target -= d;
            }
        }
        let q = q.ok_or_else(|| Error::Logic("no weight was added in the batch".into()))?;
        let shard = &self.shards[q];
        let mut target = rng.unit() * delta[q];
        let mut last = None;
        for &k in &shard.touched {
            let w = self.added_weight(shard, k as usize);
            if w > 0.0 {
                last = Some(k);
                if target < w {
                    break;
                }
                target -= w;
            }
        }
        let k = last.ok_or_else(|| Error::Logic(format!("shard {q} has no added weight")))?;
        Ok((k as usize * self.workers + q) as NodeId)
    }
}

fn phase1(sh: &Shared, plan: &Plan, local: &mut Local) -> Result<()> {
    let p = local.id;
    let ell = sh.ell;
    let mut rng = sh.root.child(plan.batch).child(p as u64);
    let view = View::new(sh, plan.accept_bound);
    let mut buckets: Vec<_> = sh.outbox[p].iter().map(lock).collect();
    for b in &mut buckets {
        b.records.clear();
    }
    local.mine.clear();
    local.mine_hosts.clear();

    let s = plan.state.s;
    let mut emit = |i: usize, hosts: &[NodeId], local: &mut Local| {
        for &h in hosts {
            buckets[h as usize % sh.workers].records.push((i, h));
        }
        local.mine.push(i);
        local.mine_hosts.extend_from_slice(hosts);
    };

    let mut i = sh.first_owned(p, s);
    if let Some(pending) = local.pending.take() {
        if pending.index != s {
            return Err(Error::Logic(format!(
                "pending sample {} does not start batch {s}",
                pending.index
            )));
        }
        let prev = plan
            .prev
            .as_ref()
            .ok_or_else(|| Error::Logic("pending sample in the first batch".into()))?;
        let p_added = mixture(prev.w_s, plan.state.w_s, prev.w_l_prime)?;
        let mut hosts = pending.hosts;
        let mut first = true;
        while hosts.len() < ell {
            let h = if first && rng.bernoulli(p_added) {
                view.sample_added(&prev.delta, &mut rng)?
            } else {
                view.sample(&mut rng)
            };
            first = false;
            if !hosts.contains(&h) {
                hosts.push(h);
            }
        }
        emit(s, &hosts, local);
        i += sh.workers;
    }

    let cut = sh.cut(plan.batch);
    let mut picked = Vec::with_capacity(ell);
    while i < sh.nodes && i < cut.load(Ordering::Acquire) {
        let heads = plan.state.w_s / bound(&plan.state, i, ell, sh.alpha);
        picked.clear();
        let mut dependent = false;
        while picked.len() < ell {
            if !rng.bernoulli(heads) {
                dependent = true;
                break;
            }
            let h = view.sample(&mut rng);
            if !picked.contains(&h) {
                picked.push(h);
            }
        }
        if dependent {
            cut.fetch_min(i, Ordering::AcqRel);
            local.pending = Some(Pending {
                index: i,
                hosts: picked.clone(),
            });
            break;
        }
        emit(i, &picked, local);
        i += sh.workers;
    }
    Ok(())
}

fn phase2(sh: &Shared, plan: &Plan, local: &mut Local) -> Result<()> {
    let p = local.id;
    let ell = sh.ell;
    let w = sh.workers;
    let l = sh.cut(plan.batch).load(Ordering::Acquire);
    if p == 0 {
        sh.cut(plan.batch + 1).store(sh.nodes, Ordering::Release);
    }
    if local.pending.as_ref().is_some_and(|pd| pd.index != l) {
        local.pending = None;
    }

    let t = plan.threshold;
    let stamp_now = plan.batch + 1;
    let f = &sh.f;
    let mut guard = sh.shards[p]
        .write()
        .unwrap_or_else(PoisonError::into_inner);
    let Shard {
        entries,
        degree,
        count,
        start_degree,
        stamp,
        touched,
        hosts,
    } = &mut *guard;
    touched.clear();

    let new_weight = f.at(ell as u32);
    let new_count = count_for(new_weight, t);
    for (k, &i) in local.mine.iter().enumerate() {
        if i >= l {
            break;
        }
        let v = sh.n0 + i;
        let loc = v / w;
        if loc != degree.len() {
            return Err(Error::Logic(format!(
                "node {v} committed out of order in shard {p}"
            )));
        }
        degree.push(ell as u32);
        count.push(new_count);
        start_degree.push(0);
        stamp.push(stamp_now);
        touched.push(loc as u32);
        entries.extend(std::iter::repeat_n(v as NodeId, new_count as usize));
        hosts.extend_from_slice(&local.mine_hosts[k * ell..(k + 1) * ell]);
    }

    for q in 0..w {
        let bucket = lock(&sh.outbox[q][p]);
        for &(i, h) in &bucket.records {
            if i >= l {
                break;
            }
            let loc = h as usize / w;
            if stamp[loc] != stamp_now {
                stamp[loc] = stamp_now;
                start_degree[loc] = degree[loc];
                touched.push(loc as u32);
            }
            let d = degree[loc] + 1;
            degree[loc] = d;
            let wd = f.at(d);
            let mut c = count[loc];
            while wd > c as f64 * t {
                c += 1;
                entries.push(h);
            }
            count[loc] = c;
        }
    }

    let mut summary = Summary::default();
    for &loc in touched.iter() {
        let loc = loc as usize;
        let d = degree[loc];
        let start = start_degree[loc];
        let before = if start == 0 { 0.0 } else { f.at(start) };
        summary.delta_w += f.at(d) - before;
        summary.max_degree = summary.max_degree.max(d);
    }
    *lock(&sh.summaries[p]) = summary;
    Ok(())
}

/// Moves `plan` to the next batch; false once every sample is committed.
fn advance(sh: &Shared, plan: &mut Plan) -> bool {
    let l = sh.cut(plan.batch).load(Ordering::Acquire);
    let mut delta = Vec::with_capacity(sh.workers);
    let mut max_degree = plan.state.delta_s;
    for m in &sh.summaries {
        let s = *lock(m);
        delta.push(s.delta_w);
        max_degree = max_degree.max(s.max_degree);
    }
    plan.state.l = l;
    let w_l = plan.state.w_s + delta.iter().sum::<f64>();
    let w_l_prime = bound(&plan.state, l, sh.ell, sh.alpha);
    plan.prev = Some(Prev {
        w_s: plan.state.w_s,
        w_l_prime,
        delta,
    });
    plan.state = BatchState {
        s: l,
        l: sh.nodes,
        w_s: w_l,
        n_s: sh.n0 + l,
        delta_s: max_degree,
    };
    plan.threshold = w_l / plan.state.n_s as f64;
    plan.accept_bound = plan.accept_bound.max(plan.threshold);
    plan.batch += 1;
    l < sh.nodes
}

fn run_inline(sh: &Shared, mut plan: Plan) -> Result<u64> {
    let mut locals: Vec<Local> = (0..sh.workers).map(Local::new).collect();
    loop {
        for local in &mut locals {
            phase1(sh, &plan, local)?;
        }
        for local in &mut locals {
            phase2(sh, &plan, local)?;
        }
        if !advance(sh, &mut plan) {
            return Ok(plan.batch);
        }
    }
}

fn run_threads(sh: &Shared, plan: Plan) -> Result<u64> {
    let barrier = Barrier::new(sh.workers);
    let batches = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..sh.workers)
            .map(|p| {
                let barrier = &barrier;
                let mut plan = plan.clone();
                scope.spawn(move || {
                    let mut local = Local::new(p);
                    loop {
                        if let Err(e) = phase1(sh, &plan, &mut local) {
                            sh.fail(e);
                        }
                        barrier.wait();
                        if !sh.abort.load(Ordering::SeqCst) {
                            if let Err(e) = phase2(sh, &plan, &mut local) {
                                sh.fail(e);
                            }
                        }
                        barrier.wait();
                        if sh.abort.load(Ordering::SeqCst) || !advance(sh, &mut plan) {
                            return plan.batch;
                        }
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join())
            .collect::<std::result::Result<Vec<_>, _>>()
    });
    if let Some(e) = sh.take_error() {
        return Err(e);
    }
    let batches = batches.map_err(|_| Error::Logic("a worker thread panicked".into()))?;
    Ok(batches[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_seed_graph, SeedSpec};
    use crate::weight::TailRule;

    fn poly(alpha: f64) -> WeightFunction {
        WeightFunction::polynomial(alpha).unwrap()
    }

    fn state(w_s: f64, delta_s: u32) -> BatchState {
        BatchState {
            s: 5,
            l: 100,
            w_s,
            n_s: 10,
            delta_s,
        }
    }

    #[test]
    fn bound_examples() {
        assert_eq!(upper_bound_w(&state(10.0, 4), 8, 1, &poly(1.0)).unwrap(), 16.0);
        for alpha in [0.5, 1.0, 2.0] {
            assert_eq!(upper_bound_w(&state(7.5, 3), 5, 1, &poly(alpha)).unwrap(), 7.5);
        }
        assert_eq!(upper_bound_w(&state(20.0, 3), 6, 1, &poly(2.0)).unwrap(), 34.0);
        assert!(upper_bound_w(&state(1.0, 1), 4, 1, &poly(1.0)).is_err());
        let table = WeightFunction::table(vec![1.0, 2.0], TailRule::Extend).unwrap();
        assert!(matches!(
            upper_bound_w(&state(1.0, 1), 6, 1, &table),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn bound_dominates_true_weight() {
        let seed = make_seed_graph(&SeedSpec::Ring(6)).unwrap();
        for alpha in [0.0, 0.5, 1.0, 1.5, 2.5] {
            for ell in [1, 2, 3] {
                let f = poly(alpha);
                let cfg = GenConfig::new(300, ell, f.clone()).with_seed(3);
                let g = crate::seq::generate_seq(&seed, &cfg, &mut RandomSource::new(1)).unwrap();
                // Replay from every tenth node as a batch start.
                let mut replay = Graph::with_nodes(6, seed.edges().to_vec()).unwrap();
                let chunks: Vec<Vec<NodeId>> = g
                    .generated_edges()
                    .chunks(ell)
                    .map(|c| c.iter().map(|e| e.1).collect())
                    .collect();
                let weight = |g: &Graph| g.degrees().iter().map(|&d| f.at(d)).sum::<f64>();
                for s in (0..300).step_by(10) {
                    let mut probe = replay.clone();
                    let bs = BatchState {
                        s,
                        l: 300,
                        w_s: weight(&probe),
                        n_s: probe.node_count(),
                        delta_s: probe.max_degree(),
                    };
                    for i in s..(s + 40).min(300) {
                        let b = upper_bound_w(&bs, i, ell, &f).unwrap();
                        assert!(weight(&probe) <= b * (1.0 + 1e-12), "alpha {alpha} ell {ell}");
                        probe.add_node(&chunks[i]).unwrap();
                    }
                    for c in &chunks[s..s + 10] {
                        replay.add_node(c).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn mixture_checks() {
        let p = mixture(10.0, 12.0, 14.0).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        assert_eq!(mixture(10.0, 10.0, 14.0).unwrap(), 0.0);
        assert!(mixture(10.0, 15.0, 14.0).is_err());
        assert!(mixture(10.0, 9.0, 14.0).is_err());
    }

    #[test]
    fn first_owned_index() {
        let seed = make_seed_graph(&SeedSpec::Ring(5)).unwrap();
        let cfg = GenConfig::new(10, 1, poly(1.0)).with_workers(3);
        let (sh, _) = Shared::new(&seed, &cfg, 1.0);
        // Sample i creates node 5 + i, owned by (5 + i) % 3.
        assert_eq!(sh.first_owned(2, 0), 0);
        assert_eq!(sh.first_owned(0, 0), 1);
        assert_eq!(sh.first_owned(1, 0), 2);
        assert_eq!(sh.first_owned(1, 3), 5);
    }

    fn check_graph(g: &Graph, seed: &Graph, n: usize, ell: usize) {
        assert_eq!(g.node_count(), seed.node_count() + n);
        assert_eq!(g.edge_count(), seed.edge_count() + n * ell);
        let mut replay = Graph::with_nodes(seed.node_count(), seed.edges().to_vec()).unwrap();
        for chunk in g.generated_edges().chunks(ell) {
            let hosts: Vec<_> = chunk.iter().map(|e| e.1).collect();
            assert_eq!(replay.add_node(&hosts).unwrap(), chunk[0].0);
        }
        assert_eq!(replay.degrees(), g.degrees());
    }

    #[test]
    fn output_is_simple_and_consistent() {
        let seed = make_seed_graph(&SeedSpec::OneRegular(10)).unwrap();
        for alpha in [0.5, 1.0, 2.0] {
            for ell in [1, 3] {
                for workers in [1, 3] {
                    let cfg = GenConfig::new(2000, ell, poly(alpha))
                        .with_seed(11)
                        .with_workers(workers);
                    let (g, trace) = generate_par_with(&seed, &cfg, Executor::Inline).unwrap();
                    check_graph(&g, &seed, 2000, ell);
                    assert!(trace.batches >= 1);
                }
            }
        }
    }

    #[test]
    fn threads_match_inline() {
        let seed = make_seed_graph(&SeedSpec::Ring(8)).unwrap();
        for workers in [1, 2, 3, 4] {
            for (ell, alpha) in [(1, 1.0), (2, 0.5), (3, 1.5)] {
                let cfg = GenConfig::new(3000, ell, poly(alpha))
                    .with_seed(21)
                    .with_workers(workers);
                let (a, ta) = generate_par_with(&seed, &cfg, Executor::Inline).unwrap();
                let (b, tb) = generate_par_with(&seed, &cfg, Executor::Threads).unwrap();
                assert_eq!(a, b, "workers {workers} ell {ell}");
                assert_eq!(ta.batches, tb.batches);
                assert_eq!(ta.proposal_len, tb.proposal_len);
            }
        }
    }

    #[test]
    fn reproducible_with_four_workers() {
        let seed = make_seed_graph(&SeedSpec::Ring(4)).unwrap();
        let cfg = GenConfig::new(5000, 1, poly(1.0)).with_seed(8).with_workers(4);
        assert_eq!(generate_par(&seed, &cfg).unwrap(), generate_par(&seed, &cfg).unwrap());
        let other = cfg.clone().with_seed(9);
        assert_ne!(generate_par(&seed, &cfg).unwrap(), generate_par(&seed, &other).unwrap());
    }

    #[test]
    fn single_node_is_one_batch() {
        let seed = make_seed_graph(&SeedSpec::Ring(4)).unwrap();
        let cfg = GenConfig::new(1, 2, poly(1.0));
        let (g, trace) = generate_par_with(&seed, &cfg, Executor::Inline).unwrap();
        assert_eq!(trace.batches, 1);
        check_graph(&g, &seed, 1, 2);
    }

    #[test]
    fn rejects_tables_and_zero_workers() {
        let seed = make_seed_graph(&SeedSpec::Ring(4)).unwrap();
        let table = WeightFunction::table(vec![1.0, 2.0], TailRule::Extend).unwrap();
        assert!(matches!(
            generate_par(&seed, &GenConfig::new(5, 1, table)),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            generate_par(&seed, &GenConfig::new(5, 1, poly(1.0)).with_workers(0)),
            Err(Error::InvalidConfig(_))
        ));
        assert_eq!(generate_par(&seed, &GenConfig::new(0, 1, poly(1.0))).unwrap(), seed);
    }

    #[test]
    fn batch_count_grows_like_square_root() {
        let seed = make_seed_graph(&SeedSpec::OneRegular(10)).unwrap();
        let n = 100_000usize;
        let cfg = GenConfig::new(n, 1, poly(1.0)).with_seed(2);
        let (_, trace) = generate_par_with(&seed, &cfg, Executor::Inline).unwrap();
        let root = (n as f64).sqrt();
        assert!(
            (0.3 * root..=3.0 * root).contains(&(trace.batches as f64)),
            "{} batches",
            trace.batches
        );
    }
}
