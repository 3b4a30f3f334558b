//! Reference sampler, exact distributions and statistical tests.
//!
//! [`ref_generate`] draws every host by a linear scan over cumulative
//! weights, with the same per-node semantics as the other generators, and
//! serves as the ground truth they are compared against.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use statrs::function::gamma::gamma_ur;

use crate::config::GenConfig;
use crate::error::{Error, Result};
use crate::graph::{make_seed_graph, Graph, NodeId, SeedSpec};
use crate::proposal::{EntryLayout, ProposalList};
use crate::rng::{mix, RandomSource};
use crate::weight::WeightFunction;

/// Significance level of a single test.
pub const SIGNIFICANCE: f64 = 0.001;
/// Total-variation threshold for edge-set histograms of 10^6 runs.
pub const TV_THRESHOLD: f64 = 0.02;

/// [`TV_THRESHOLD`] widened by `sqrt(10^6 / runs)` for fewer runs, keeping
/// the margin over sampling noise constant.
pub fn tv_threshold(runs: u64) -> f64 {
    TV_THRESHOLD * (1e6 / runs.max(1) as f64).sqrt().max(1.0)
}
/// Seeds for majority-of-five decisions.
pub const SEEDS: [u64; 5] = [0x5eed_0001, 0x5eed_0002, 0x5eed_0003, 0x5eed_0004, 0x5eed_0005];

/// Which generator to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Seq,
    Par,
    Em,
    Ref,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Seq => "seq",
            Algorithm::Par => "par",
            Algorithm::Em => "em",
            Algorithm::Ref => "ref",
        }
    }

    /// Runs the generator with streams derived from `cfg.seed`.
    pub fn generate(self, seed: &Graph, cfg: &GenConfig) -> Result<Graph> {
        match self {
            Algorithm::Seq => crate::seq::generate_seq(seed, cfg, &mut RandomSource::new(cfg.seed)),
            Algorithm::Par => crate::par::generate_par(seed, cfg),
            Algorithm::Em => crate::em::generate_em(seed, cfg).map(|(g, _)| g),
            Algorithm::Ref => ref_generate(seed, cfg, &mut RandomSource::new(cfg.seed)),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seq" => Ok(Algorithm::Seq),
            "par" => Ok(Algorithm::Par),
            "em" => Ok(Algorithm::Em),
            "ref" => Ok(Algorithm::Ref),
            other => Err(Error::InvalidConfig(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Exact sampler: every host by inversion over all current weights.
pub fn ref_generate(seed: &Graph, cfg: &GenConfig, rng: &mut RandomSource) -> Result<Graph> {
    cfg.validate(seed)?;
    let f = &cfg.weight;
    let ell = cfg.ell;
    let mut degrees = seed.degrees().to_vec();
    degrees.reserve(cfg.nodes);
    let mut weights = degrees
        .iter()
        .map(|&d| f.weight(d))
        .collect::<Result<Vec<_>>>()?;
    let mut hosts = Vec::with_capacity(cfg.nodes * ell);
    let mut picked: Vec<NodeId> = Vec::with_capacity(ell);
    for _ in 0..cfg.nodes {
        let total: f64 = weights.iter().sum();
        picked.clear();
        while picked.len() < ell {
            let free: f64 = total - picked.iter().map(|&h| weights[h as usize]).sum::<f64>();
            if !(free > total * 1e-12) {
                return Err(Error::CannotSatisfy);
            }
            let h = invert(&weights, rng.unit() * total);
            if !picked.contains(&h) {
                picked.push(h);
            }
        }
        let v = degrees.len() as NodeId;
        degrees.push(ell as u32);
        weights.push(f.weight(ell as u32)?);
        for &h in &picked {
            degrees[h as usize] += 1;
            weights[h as usize] = f.weight(degrees[h as usize])?;
        }
        hosts.extend_from_slice(&picked);
        debug_assert!(picked.iter().all(|&h| h < v));
    }
    Ok(Graph::grown(seed, ell, &hosts, degrees))
}

/// Index of the first positive weight whose running sum exceeds `target`.
fn invert(weights: &[f64], mut target: f64) -> NodeId {
    let mut last = 0;
    for (v, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            last = v;
            if target < w {
                return v as NodeId;
            }
            target -= w;
        }
    }
    last as NodeId
}

/// `P(v) = f(d_v) / W` for every node of `g`.
pub fn exact_host_distribution(g: &Graph, f: &WeightFunction) -> Result<Vec<f64>> {
    exact_host_distribution_for_degrees(g.degrees(), f)
}

/// Like [`exact_host_distribution`] for a bare degree vector.
pub fn exact_host_distribution_for_degrees(degrees: &[u32], f: &WeightFunction) -> Result<Vec<f64>> {
    let w = degrees
        .iter()
        .map(|&d| f.weight(d))
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = w.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidInput("total weight is zero".into()));
    }
    Ok(w.into_iter().map(|x| x / total).collect())
}

/// Exact probability of every output graph, keyed by canonical edge list.
///
/// Enumerates all ordered host sequences, so only tiny configurations are
/// accepted.
pub fn exact_edge_set_distribution(
    seed: &Graph,
    cfg: &GenConfig,
) -> Result<BTreeMap<Vec<(NodeId, NodeId)>, f64>> {
    cfg.validate(seed)?;
    guard_small(seed, cfg)?;
    let mut out = BTreeMap::new();
    let mut g = Graph::with_nodes(seed.node_count(), seed.edges().to_vec())?;
    enumerate(&mut g, cfg, 1.0, &mut Vec::new(), &mut out)?;
    Ok(out)
}

fn enumerate(
    g: &mut Graph,
    cfg: &GenConfig,
    prob: f64,
    picked: &mut Vec<NodeId>,
    out: &mut BTreeMap<Vec<(NodeId, NodeId)>, f64>,
) -> Result<()> {
    let added = g.node_count() - g.seed_node_count();
    if picked.is_empty() && added == cfg.nodes {
        *out.entry(g.canonical_edges()).or_insert(0.0) += prob;
        return Ok(());
    }
    if picked.len() == cfg.ell {
        let mut next = g.clone();
        next.add_node(picked)?;
        return enumerate(&mut next, cfg, prob, &mut Vec::new(), out);
    }
    let w = g
        .degrees()
        .iter()
        .map(|&d| cfg.weight.weight(d))
        .collect::<Result<Vec<_>>>()?;
    let free: f64 = w
        .iter()
        .enumerate()
        .filter(|(v, _)| !picked.contains(&(*v as NodeId)))
        .map(|(_, x)| x)
        .sum();
    if !(free > 0.0) {
        return Err(Error::CannotSatisfy);
    }
    for v in 0..g.node_count() as NodeId {
        if picked.contains(&v) || w[v as usize] == 0.0 {
            continue;
        }
        picked.push(v);
        enumerate(g, cfg, prob * w[v as usize] / free, picked, out)?;
        picked.pop();
    }
    Ok(())
}

fn guard_small(seed: &Graph, cfg: &GenConfig) -> Result<()> {
    if seed.node_count() > 6 || cfg.nodes > 4 || cfg.ell > 2 {
        return Err(Error::InvalidConfig(format!(
            "outcome space too large: n0 = {}, N = {}, ell = {} (limits 6, 4, 2)",
            seed.node_count(),
            cfg.nodes,
            cfg.ell
        )));
    }
    Ok(())
}

/// Outcome counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram<K: Ord> {
    pub counts: BTreeMap<K, u64>,
    pub total: u64,
}

impl<K: Ord> Default for Histogram<K> {
    fn default() -> Self {
        Self {
            counts: BTreeMap::new(),
            total: 0,
        }
    }
}

impl<K: Ord> Histogram<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, k: K) {
        *self.counts.entry(k).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn merge(&mut self, other: Histogram<K>) {
        for (k, c) in other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
        self.total += other.total;
    }

    pub fn count(&self, k: &K) -> u64 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn fraction(&self, k: &K) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(k) as f64 / self.total as f64
        }
    }

    /// Number of distinct outcomes seen.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

impl Histogram<usize> {
    /// Counts `0..n` as a dense vector; keys outside are dropped.
    pub fn dense(&self, n: usize) -> Vec<u64> {
        (0..n).map(|k| self.count(&k)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson test of `h` (keys `0..expected.len()`) against `expected`.
pub fn chi_square(h: &Histogram<usize>, expected: &[f64]) -> Result<ChiSquare> {
    let outside = h.total - h.dense(expected.len()).iter().sum::<u64>();
    if outside > 0 {
        return Ok(ChiSquare {
            statistic: f64::INFINITY,
            dof: expected.len().saturating_sub(1),
            p_value: 0.0,
        });
    }
    chi_square_counts(&h.dense(expected.len()), expected)
}

/// Pearson test of observed counts against cell probabilities. Adjacent
/// cells are merged until every expected count is at least 5.
pub fn chi_square_counts(observed: &[u64], expected: &[f64]) -> Result<ChiSquare> {
    if observed.len() != expected.len() {
        return Err(Error::InvalidInput(format!(
            "{} observed cells against {} expected",
            observed.len(),
            expected.len()
        )));
    }
    let n: u64 = observed.iter().sum();
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&ob, &p) in observed.iter().zip(expected) {
        o += ob as f64;
        e += p * n as f64;
        if e >= 5.0 {
            cells.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if o > 0.0 || e > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => cells.push((o, e)),
        }
    }
    if cells.len() < 2 {
        return Err(Error::InvalidInput(
            "chi-square needs at least two cells with expected count >= 5".into(),
        ));
    }
    let statistic: f64 = cells.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = cells.len() - 1;
    Ok(ChiSquare {
        statistic,
        dof,
        p_value: chi_square_p(statistic, dof),
    })
}

/// Upper tail of the chi-square distribution.
pub fn chi_square_p(statistic: f64, dof: usize) -> f64 {
    if statistic <= 0.0 {
        1.0
    } else if !statistic.is_finite() {
        0.0
    } else {
        gamma_ur(dof as f64 / 2.0, statistic / 2.0)
    }
}

/// `1/2 * sum |empirical - exact|` with keys `0..exact.len()`; mass on other
/// keys counts fully.
pub fn tv_distance(empirical: &Histogram<usize>, exact: &[f64]) -> f64 {
    if empirical.total == 0 {
        return 0.5 * exact.iter().map(|p| p.abs()).sum::<f64>();
    }
    let n = empirical.total as f64;
    let mut sum: f64 = exact
        .iter()
        .enumerate()
        .map(|(k, &p)| (empirical.count(&k) as f64 / n - p).abs())
        .sum();
    sum += empirical
        .counts
        .range(exact.len()..)
        .map(|(_, &c)| c as f64 / n)
        .sum::<f64>();
    0.5 * sum
}

/// Total variation between two histograms over arbitrary outcomes.
pub fn tv_between<K: Ord>(a: &Histogram<K>, b: &Histogram<K>) -> f64 {
    let mut sum = 0.0;
    for (k, &c) in &a.counts {
        sum += (c as f64 / a.total as f64 - b.fraction(k)).abs();
    }
    for (k, &c) in &b.counts {
        if !a.counts.contains_key(k) {
            sum += c as f64 / b.total as f64;
        }
    }
    0.5 * sum
}

/// Total variation between a histogram and an exact distribution.
pub fn tv_to_exact<K: Ord>(h: &Histogram<K>, exact: &BTreeMap<K, f64>) -> f64 {
    let mut sum = 0.0;
    for (k, &p) in exact {
        sum += (h.fraction(k) - p).abs();
    }
    for (k, &c) in &h.counts {
        if !exact.contains_key(k) {
            sum += c as f64 / h.total as f64;
        }
    }
    0.5 * sum
}

pub type EdgeSet = Vec<(NodeId, NodeId)>;

/// Seed of run `r` under master seed `master`.
pub fn run_seed(master: u64, r: u64) -> u64 {
    mix(master ^ mix(r.wrapping_add(1)))
}

/// Histogram of canonical output graphs over `runs` independent runs.
///
/// Run `r` uses `cfg` with seed [`run_seed`]`(master, r)`. Runs are split
/// into contiguous ranges over the available cores and merged in range order.
pub fn edge_set_distribution<G>(
    generator: G,
    seed: &Graph,
    cfg: &GenConfig,
    runs: u64,
    master: u64,
) -> Result<Histogram<EdgeSet>>
where
    G: Fn(&Graph, &GenConfig) -> Result<Graph> + Sync,
{
    cfg.validate(seed)?;
    guard_small(seed, cfg)?;
    let threads = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(runs.max(1) as usize);
    let chunk = runs.div_ceil(threads as u64);
    let work = |lo: u64, hi: u64| -> Result<Histogram<EdgeSet>> {
        let mut h = Histogram::new();
        let mut c = cfg.clone();
        for r in lo..hi {
            c.seed = run_seed(master, r);
            h.add(generator(seed, &c)?.canonical_edges());
            if h.len() >= 10_000 {
                return Err(Error::InvalidConfig("more than 10^4 distinct outcomes".into()));
            }
        }
        Ok(h)
    };
    let parts: Vec<Result<Histogram<EdgeSet>>> = if threads <= 1 {
        vec![work(0, runs)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads as u64)
                .map(|t| {
                    let lo = (t * chunk).min(runs);
                    let hi = ((t + 1) * chunk).min(runs);
                    let work = &work;
                    scope.spawn(move || work(lo, hi))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| {
                    h.join()
                        .unwrap_or_else(|_| Err(Error::Logic("verification worker panicked".into())))
                })
                .collect()
        })
    };
    let mut out = Histogram::new();
    for p in parts {
        out.merge(p?);
    }
    if out.len() >= 10_000 {
        return Err(Error::InvalidConfig("more than 10^4 distinct outcomes".into()));
    }
    Ok(out)
}

/// Single-step sampler over the edge array: pick a uniform edge and a
/// uniform endpoint, so node `h` is proposed with probability `d_h / 2m`,
/// then correct towards `d^alpha` by rejection.
pub fn naive_edge_sample(g: &Graph, alpha: f64, rng: &mut RandomSource) -> Result<NodeId> {
    let edges = g.edges();
    if edges.is_empty() {
        return Err(Error::InvalidInput("graph has no edges".into()));
    }
    let max_d = g.max_degree() as f64;
    loop {
        let (u, v) = edges[rng.below_usize(edges.len())];
        let h = if rng.bernoulli(0.5) { u } else { v };
        let d = g.degree(h) as f64;
        let accept = if alpha < 1.0 {
            (1.0 / d).powf(1.0 - alpha)
        } else {
            (d / max_d).powf(alpha - 1.0)
        };
        if rng.unit() < accept {
            return Ok(h);
        }
    }
}

/// Outcome of a majority-of-five decision.
#[derive(Debug, Clone, PartialEq)]
pub struct Majority {
    pub passes: usize,
    pub trials: usize,
    /// Per-seed statistic, e.g. a p-value.
    pub values: Vec<f64>,
}

impl Majority {
    pub fn passed(&self) -> bool {
        2 * self.passes > self.trials
    }
}

/// Runs `trial` once per entry of [`SEEDS`]; it returns a statistic and
/// whether that seed passed.
pub fn majority_of_seeds(mut trial: impl FnMut(u64) -> Result<(f64, bool)>) -> Result<Majority> {
    let mut m = Majority {
        passes: 0,
        trials: SEEDS.len(),
        values: Vec::with_capacity(SEEDS.len()),
    };
    for s in SEEDS {
        let (value, ok) = trial(s)?;
        m.values.push(value);
        m.passes += usize::from(ok);
    }
    Ok(m)
}

/// Draws `draws` samples from a proposal list over `degrees` and tests them
/// against the exact host distribution.
pub fn proposal_chi_square(
    degrees: &[u32],
    f: &WeightFunction,
    draws: u64,
    seed: u64,
) -> Result<ChiSquare> {
    let pl = ProposalList::from_degrees(degrees, f, EntryLayout::default())?;
    let expected = exact_host_distribution_for_degrees(degrees, f)?;
    let mut counts = vec![0u64; degrees.len()];
    let mut rng = RandomSource::new(seed);
    for _ in 0..draws {
        counts[pl.sample(&mut rng) as usize] += 1;
    }
    chi_square_counts(&counts, &expected)
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRecord {
    pub config: String,
    pub test: String,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub pass: bool,
}

impl VerifyRecord {
    pub const CSV_HEADER: &'static str = "config,test,statistic,p_value,pass";

    pub fn text_line(&self) -> String {
        let mut s = format!("{:<4} {:<28} statistic={:.6}", self.config, self.test, self.statistic);
        if let Some(p) = self.p_value {
            let _ = write!(s, " p={p:.6}");
        }
        s.push_str(if self.pass { " PASS" } else { " FAIL" });
        s
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.config,
            self.test,
            self.statistic,
            self.p_value.map(|p| p.to_string()).unwrap_or_default(),
            self.pass
        )
    }
}

/// A fixed small configuration for edge-set comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallConfig {
    pub id: &'static str,
    pub seed: SeedSpec,
    pub nodes: usize,
    pub ell: usize,
    pub alpha: f64,
}

impl SmallConfig {
    pub fn seed_graph(&self) -> Result<Graph> {
        make_seed_graph(&self.seed)
    }

    pub fn gen_config(&self) -> Result<GenConfig> {
        Ok(GenConfig::new(self.nodes, self.ell, WeightFunction::polynomial(self.alpha)?))
    }
}

pub fn standard_configs() -> Vec<SmallConfig> {
    vec![
        SmallConfig { id: "A", seed: SeedSpec::OneRegular(4), nodes: 2, ell: 1, alpha: 1.0 },
        SmallConfig { id: "B", seed: SeedSpec::OneRegular(4), nodes: 2, ell: 1, alpha: 1.5 },
        SmallConfig { id: "C", seed: SeedSpec::OneRegular(2), nodes: 4, ell: 1, alpha: 0.5 },
        SmallConfig { id: "D", seed: SeedSpec::Ring(5), nodes: 2, ell: 2, alpha: 2.0 },
        SmallConfig { id: "E", seed: SeedSpec::Ring(4), nodes: 2, ell: 2, alpha: 0.5 },
    ]
}

/// Degree vectors for single-step checks.
pub fn single_step_degrees() -> Vec<(&'static str, Vec<u32>)> {
    vec![
        ("deg13", vec![1, 3]),
        ("ring4", vec![2; 4]),
        ("onereg6", vec![1; 6]),
        ("deg1124", vec![1, 1, 2, 4]),
    ]
}

pub const SINGLE_STEP_ALPHAS: [f64; 5] = [0.0, 0.5, 1.0, 1.5, 2.0];

/// The generators compared against the reference, with worker counts.
pub fn compared_generators() -> Vec<(String, Algorithm, usize)> {
    vec![
        ("seq".into(), Algorithm::Seq, 1),
        ("par2".into(), Algorithm::Par, 2),
        ("par4".into(), Algorithm::Par, 4),
        ("em".into(), Algorithm::Em, 1),
    ]
}

/// Runs the verification matrix: single-step chi-square tests with
/// `draws` samples and edge-set comparisons with `runs` runs per generator,
/// judged against [`tv_threshold`].
pub fn run_matrix(draws: u64, runs: u64, master: u64) -> Result<Vec<VerifyRecord>> {
    let mut out = Vec::new();
    let threshold = tv_threshold(runs);
    for (name, degrees) in single_step_degrees() {
        for alpha in SINGLE_STEP_ALPHAS {
            let f = WeightFunction::polynomial(alpha)?;
            let m = majority_of_seeds(|s| {
                let c = proposal_chi_square(&degrees, &f, draws, s ^ master)?;
                Ok((c.p_value, c.p_value > SIGNIFICANCE))
            })?;
            out.push(VerifyRecord {
                config: name.into(),
                test: format!("proposal_chi2_a{alpha}"),
                statistic: m.passes as f64,
                p_value: median(&m.values),
                pass: m.passed(),
            });
        }
    }
    for alpha in [0.5, 2.0] {
        let g = make_seed_graph(&SeedSpec::Ring(4))?;
        let mut g = Graph::with_nodes(4, g.edges().to_vec())?;
        g.add_node(&[0, 1])?;
        let f = WeightFunction::polynomial(alpha)?;
        let expected = exact_host_distribution(&g, &f)?;
        let m = majority_of_seeds(|s| {
            let mut rng = RandomSource::new(s ^ master);
            let mut counts = vec![0u64; g.node_count()];
            for _ in 0..draws {
                counts[naive_edge_sample(&g, alpha, &mut rng)? as usize] += 1;
            }
            let c = chi_square_counts(&counts, &expected)?;
            Ok((c.p_value, c.p_value > SIGNIFICANCE))
        })?;
        out.push(VerifyRecord {
            config: "ring4+1".into(),
            test: format!("naive_chi2_a{alpha}"),
            statistic: m.passes as f64,
            p_value: median(&m.values),
            pass: m.passed(),
        });
    }
    for sc in standard_configs() {
        let seed = sc.seed_graph()?;
        let cfg = sc.gen_config()?;
        let reference = edge_set_distribution(
            |g, c| Algorithm::Ref.generate(g, c),
            &seed,
            &cfg,
            runs,
            master ^ 0xa5a5,
        )?;
        let exact = exact_edge_set_distribution(&seed, &cfg)?;
        let tv = tv_to_exact(&reference, &exact);
        out.push(VerifyRecord {
            config: sc.id.into(),
            test: "tv_ref_vs_exact".into(),
            statistic: tv,
            p_value: None,
            pass: tv < threshold,
        });
        for (name, algo, workers) in compared_generators() {
            let c = cfg.clone().with_workers(workers);
            let h = edge_set_distribution(|g, c| algo.generate(g, c), &seed, &c, runs, master)?;
            let tv = tv_between(&h, &reference);
            out.push(VerifyRecord {
                config: sc.id.into(),
                test: format!("tv_{name}_vs_ref"),
                statistic: tv,
                p_value: None,
                pass: tv < threshold,
            });
        }
    }
    Ok(out)
}

fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Some(v[v.len() / 2])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(alpha: f64) -> WeightFunction {
        WeightFunction::polynomial(alpha).unwrap()
    }

    #[test]
    fn exact_host_examples() {
        let p = exact_host_distribution_for_degrees(&[1, 3], &poly(1.0)).unwrap();
        assert_eq!(p, vec![0.25, 0.75]);
        let p = exact_host_distribution_for_degrees(&[1, 3], &poly(2.0)).unwrap();
        assert!((p[1] - 0.9).abs() < 1e-15);
        let ring = make_seed_graph(&SeedSpec::Ring(4)).unwrap();
        for alpha in [0.0, 0.7, 2.0] {
            let p = exact_host_distribution(&ring, &poly(alpha)).unwrap();
            assert!(p.iter().all(|&x| (x - 0.25).abs() < 1e-15));
        }
        let p = exact_host_distribution_for_degrees(&[1, 2, 7], &poly(0.0)).unwrap();
        assert!(p.iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let zero = WeightFunction::table(vec![0.0], crate::weight::TailRule::Extend).unwrap();
        assert!(exact_host_distribution_for_degrees(&[1, 1], &zero).is_err());
    }

    #[test]
    fn chi_square_examples() {
        let c = chi_square_counts(&[50, 50], &[0.5, 0.5]).unwrap();
        assert_eq!(c.statistic, 0.0);
        assert_eq!(c.p_value, 1.0);
        let c = chi_square_counts(&[60, 40], &[0.5, 0.5]).unwrap();
        assert!((c.statistic - 4.0).abs() < 1e-12);
        assert_eq!(c.dof, 1);
        // Table value: P(chi2_1 > 4) = 0.04550026...
        assert!((c.p_value - 0.0455003).abs() < 1e-6);
        // P(chi2_2 > 5.991) = 0.05
        assert!((chi_square_p(5.991464547, 2) - 0.05).abs() < 1e-8);
        assert!(chi_square_counts(&[10], &[1.0]).is_err());
    }

    #[test]
    fn chi_square_merges_small_cells() {
        // Expected counts 1, 1, 48, 50: the first three merge into one cell.
        let c = chi_square_counts(&[1, 1, 48, 50], &[0.01, 0.01, 0.48, 0.5]).unwrap();
        assert_eq!(c.dof, 1);
        assert_eq!(c.statistic, 0.0);
    }

    #[test]
    fn tv_examples() {
        let mut h = Histogram::new();
        for k in [0usize; 6] {
            h.add(k);
        }
        for _ in 0..4 {
            h.add(1usize);
        }
        assert!((tv_distance(&h, &[0.5, 0.5]) - 0.1).abs() < 1e-12);
        assert!((tv_distance(&h, &[0.6, 0.4])).abs() < 1e-12);
        assert!((tv_distance(&h, &[0.0, 0.0, 1.0]) - 1.0).abs() < 1e-12);
        let mut other = Histogram::new();
        other.add(7usize);
        assert_eq!(tv_between(&h, &other), 1.0);
        assert_eq!(tv_between(&h, &h.clone()), 0.0);
    }

    #[test]
    fn ref_generate_trivial_cases() {
        let seed = Graph::from_edges(vec![(0, 1)]).unwrap();
        let cfg = GenConfig::new(1, 1, poly(1.0));
        let h = edge_set_distribution(|g, c| Algorithm::Ref.generate(g, c), &seed, &cfg, 20_000, 1)
            .unwrap();
        assert_eq!(h.len(), 2);
        let zero = h.fraction(&vec![(0, 1), (0, 2)]);
        assert!((zero - 0.5).abs() < 0.015, "{zero}");

        let cfg0 = GenConfig::new(0, 1, poly(1.0));
        let h = edge_set_distribution(|g, c| Algorithm::Ref.generate(g, c), &seed, &cfg0, 100, 1)
            .unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.total, 100);

        let c = GenConfig::new(50, 2, poly(1.5)).with_seed(4);
        let ring = make_seed_graph(&SeedSpec::Ring(5)).unwrap();
        assert_eq!(
            ref_generate(&ring, &c, &mut RandomSource::new(3)).unwrap(),
            ref_generate(&ring, &c, &mut RandomSource::new(3)).unwrap()
        );
    }

    #[test]
    fn exact_distribution_sums_to_one() {
        for sc in standard_configs() {
            let d = exact_edge_set_distribution(&sc.seed_graph().unwrap(), &sc.gen_config().unwrap())
                .unwrap();
            assert!((d.values().sum::<f64>() - 1.0).abs() < 1e-12, "{}", sc.id);
        }
    }

    #[test]
    fn exact_distribution_by_hand() {
        // OneRegular(2), N = 2, ell = 1, f = d: first host 0 or 1 with 1/2,
        // then node 2 has weight 1 of W = 4 and the first host weight 2.
        let seed = make_seed_graph(&SeedSpec::OneRegular(2)).unwrap();
        let d = exact_edge_set_distribution(&seed, &GenConfig::new(2, 1, poly(1.0))).unwrap();
        assert_eq!(d.len(), 6);
        let p = d[&vec![(0, 1), (0, 2), (0, 3)]];
        assert!((p - 0.5 * 0.5).abs() < 1e-15);
        let p = d[&vec![(0, 1), (0, 2), (2, 3)]];
        assert!((p - 0.5 * 0.25).abs() < 1e-15);
    }

    #[test]
    fn guard_rejects_large_configs() {
        let seed = make_seed_graph(&SeedSpec::Ring(8)).unwrap();
        let cfg = GenConfig::new(2, 1, poly(1.0));
        assert!(exact_edge_set_distribution(&seed, &cfg).is_err());
        assert!(edge_set_distribution(|g, c| Algorithm::Ref.generate(g, c), &seed, &cfg, 10, 0)
            .is_err());
    }

    #[test]
    fn ref_generate_single_step_marginals() {
        // Degrees [1, 2, 2, 1] path, alpha = 2: weights 1, 4, 4, 1.
        let g = Graph::from_edges(vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let f = poly(2.0);
        let expected = exact_host_distribution(&g, &f).unwrap();
        let cfg = GenConfig::new(1, 1, f);
        let mut counts = vec![0u64; 4];
        let mut rng = RandomSource::new(17);
        for _ in 0..100_000 {
            let out = ref_generate(&g, &cfg, &mut rng).unwrap();
            counts[out.edges()[3].1 as usize] += 1;
        }
        assert!(chi_square_counts(&counts, &expected).unwrap().p_value > SIGNIFICANCE);
    }

    #[test]
    fn naive_sampler_matches_exact() {
        let g = Graph::from_edges(vec![(0, 1), (1, 2), (1, 3), (3, 0), (3, 4)]).unwrap();
        for alpha in [0.5, 2.0] {
            let expected = exact_host_distribution(&g, &poly(alpha)).unwrap();
            let mut rng = RandomSource::new(5);
            let mut counts = vec![0u64; g.node_count()];
            for _ in 0..100_000 {
                counts[naive_edge_sample(&g, alpha, &mut rng).unwrap() as usize] += 1;
            }
            assert!(chi_square_counts(&counts, &expected).unwrap().p_value > SIGNIFICANCE);
        }
    }

    #[test]
    fn threshold_scaling() {
        assert_eq!(tv_threshold(1_000_000), TV_THRESHOLD);
        assert_eq!(tv_threshold(4_000_000), TV_THRESHOLD);
        assert!((tv_threshold(10_000) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn majority_rule() {
        let mut k = 0;
        let m = majority_of_seeds(|_| {
            k += 1;
            Ok((k as f64, k % 2 == 1))
        })
        .unwrap();
        assert_eq!(m.passes, 3);
        assert!(m.passed());
        let m = majority_of_seeds(|_| Ok((0.0, false))).unwrap();
        assert!(!m.passed());
    }

    #[test]
    fn record_formats() {
        let r = VerifyRecord {
            config: "A".into(),
            test: "tv_seq_vs_ref".into(),
            statistic: 0.01,
            p_value: None,
            pass: true,
        };
        assert_eq!(r.csv_row(), "A,tv_seq_vs_ref,0.01,,true");
        assert!(r.text_line().ends_with("PASS"));
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in [Algorithm::Seq, Algorithm::Par, Algorithm::Em, Algorithm::Ref] {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("fast".parse::<Algorithm>().is_err());
    }
}
