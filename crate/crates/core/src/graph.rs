//! Edge-list graphs and seed-graph construction.

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;

use crate::error::{Error, Result};

/// Dense node identifier. The `i`-th added node (1-based) is `n0 + i - 1`.
pub type NodeId = u32;

/// Undirected simple graph stored as an append-only edge sequence.
///
/// The first `m0` edges over the first `n0` nodes form the seed graph;
/// generated edges follow in generation order as `(new node, host)`.
#[derive(Debug, Clone)]
pub struct Graph {
    n0: usize,
    m0: usize,
    edges: Vec<(NodeId, NodeId)>,
    degrees: Vec<u32>,
}

/// Equality compares node count and the exact edge sequence.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.degrees.len() == other.degrees.len() && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// A seed graph on nodes `0..n` with the given edges.
    pub fn with_nodes(n: usize, edges: Vec<(NodeId, NodeId)>) -> Result<Self> {
        if n > NodeId::MAX as usize {
            return Err(Error::InvalidInput(format!("{n} nodes exceed the id space")));
        }
        let mut degrees = vec![0u32; n];
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in &edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidInput(format!(
                    "edge {{{u}, {v}}} references a node outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at node {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidInput(format!("duplicate edge {{{u}, {v}}}")));
            }
            degrees[u as usize] += 1;
            degrees[v as usize] += 1;
        }
        Ok(Self {
            n0: n,
            m0: edges.len(),
            edges,
            degrees,
        })
    }

    /// A seed graph whose node count is the largest id plus one.
    pub fn from_edges(edges: Vec<(NodeId, NodeId)>) -> Result<Self> {
        let n = edges
            .iter()
            .map(|&(u, v)| u.max(v) as usize + 1)
            .max()
            .unwrap_or(0);
        Self::with_nodes(n, edges)
    }

    /// Assembles a generated graph from a seed and the flat host list of the
    /// new nodes (`ell` hosts per node, in slot order).
    pub(crate) fn grown(seed: &Graph, ell: usize, hosts: &[NodeId], degrees: Vec<u32>) -> Self {
        debug_assert_eq!(hosts.len() % ell.max(1), 0);
        let first = seed.node_count() as NodeId;
        let mut edges = Vec::with_capacity(seed.edges.len() + hosts.len());
        edges.extend_from_slice(&seed.edges);
        edges.extend(
            hosts
                .iter()
                .enumerate()
                .map(|(k, &h)| (first + (k / ell) as NodeId, h)),
        );
        debug_assert_eq!(degrees.len(), seed.node_count() + hosts.len() / ell.max(1));
        Self {
            n0: seed.n0,
            m0: seed.m0,
            edges,
            degrees,
        }
    }

    /// Adds a node connected to `hosts`, which must be distinct existing nodes.
    pub fn add_node(&mut self, hosts: &[NodeId]) -> Result<NodeId> {
        let v = self.degrees.len();
        if v >= NodeId::MAX as usize {
            return Err(Error::InvalidInput("node id space exhausted".into()));
        }
        for (k, &h) in hosts.iter().enumerate() {
            if h as usize >= v {
                return Err(Error::InvalidInput(format!("host {h} does not exist")));
            }
            if hosts[..k].contains(&h) {
                return Err(Error::InvalidInput(format!("host {h} repeated")));
            }
        }
        let v = v as NodeId;
        for &h in hosts {
            self.edges.push((v, h));
            self.degrees[h as usize] += 1;
        }
        self.degrees.push(hosts.len() as u32);
        Ok(v)
    }

    /// Nodes in the seed graph (`n0`).
    pub fn seed_node_count(&self) -> usize {
        self.n0
    }

    /// Edges in the seed graph (`m0`).
    pub fn seed_edge_count(&self) -> usize {
        self.m0
    }

    pub fn node_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree(&self, v: NodeId) -> u32 {
        self.degrees[v as usize]
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Edges added on top of the seed graph.
    pub fn generated_edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges[self.m0..]
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn canonical_edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut e: Vec<_> = self.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        e.sort_unstable();
        e
    }
}

/// Map degree -> number of nodes with that degree.
pub fn degree_histogram(g: &Graph) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &d in g.degrees() {
        *h.entry(d).or_insert(0) += 1;
    }
    h
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedSpec {
    /// Cycle over `n0 >= 3` nodes; every degree is 2.
    Ring(usize),
    /// Perfect matching over an even `n0 >= 2`; every degree is 1.
    OneRegular(usize),
    /// Text edge list; `n0` is the largest id plus one.
    FromEdgeFile(PathBuf),
}

impl std::str::FromStr for SeedSpec {
    type Err = Error;

    /// Parses `ring:<n0>`, `1regular:<n0>` or `file:<path>`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidSpec(format!("expected <kind>:<arg>, got {s:?}")))?;
        let count = || {
            arg.parse::<usize>()
                .map_err(|_| Error::InvalidSpec(format!("bad node count {arg:?}")))
        };
        match kind {
            "ring" => Ok(SeedSpec::Ring(count()?)),
            "1regular" => Ok(SeedSpec::OneRegular(count()?)),
            "file" => Ok(SeedSpec::FromEdgeFile(PathBuf::from(arg))),
            _ => Err(Error::InvalidSpec(format!("unknown seed graph kind {kind:?}"))),
        }
    }
}

pub fn make_seed_graph(spec: &SeedSpec) -> Result<Graph> {
    match *spec {
        SeedSpec::Ring(n0) => {
            if n0 < 3 {
                return Err(Error::InvalidSpec(format!("ring needs at least 3 nodes, got {n0}")));
            }
            let edges = (0..n0)
                .map(|i| (i as NodeId, ((i + 1) % n0) as NodeId))
                .collect();
            Graph::with_nodes(n0, edges)
        }
        SeedSpec::OneRegular(n0) => {
            if n0 < 2 || n0 % 2 != 0 {
                return Err(Error::InvalidSpec(format!(
                    "1-regular graph needs an even node count >= 2, got {n0}"
                )));
            }
            let edges = (0..n0 / 2)
                .map(|k| ((2 * k) as NodeId, (2 * k + 1) as NodeId))
                .collect();
            Graph::with_nodes(n0, edges)
        }
        SeedSpec::FromEdgeFile(ref path) => {
            let bytes = std::fs::read(path)?;
            crate::io::read_edges(&bytes, crate::io::EdgeFormat::Text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_four() {
        let g = make_seed_graph(&SeedSpec::Ring(4)).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(g.degrees().iter().all(|&d| d == 2));
        assert_eq!(degree_histogram(&g), BTreeMap::from([(2, 4)]));
    }

    #[test]
    fn one_regular() {
        let g = make_seed_graph(&SeedSpec::OneRegular(4)).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (2, 3)]);
        assert!(g.degrees().iter().all(|&d| d == 1));
        let g6 = make_seed_graph(&SeedSpec::OneRegular(6)).unwrap();
        assert_eq!(degree_histogram(&g6), BTreeMap::from([(1, 6)]));
        assert!(matches!(
            make_seed_graph(&SeedSpec::OneRegular(5)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(make_seed_graph(&SeedSpec::OneRegular(0)).is_err());
        assert!(make_seed_graph(&SeedSpec::Ring(2)).is_err());
    }

    #[test]
    fn histogram_after_one_node() {
        // Ring(3) plus one node attached to node 0: degrees [3, 2, 2, 1].
        let mut g = make_seed_graph(&SeedSpec::Ring(3)).unwrap();
        g.add_node(&[0]).unwrap();
        assert_eq!(degree_histogram(&g), BTreeMap::from([(1, 1), (2, 2), (3, 1)]));
        let h = degree_histogram(&g);
        assert_eq!(h.values().sum::<usize>(), g.node_count());
        assert_eq!(
            h.iter().map(|(d, c)| *d as usize * c).sum::<usize>(),
            2 * g.edge_count()
        );
    }

    #[test]
    fn rejects_non_simple_input() {
        assert!(Graph::from_edges(vec![(0, 0)]).is_err());
        assert!(Graph::from_edges(vec![(0, 1), (1, 0)]).is_err());
        assert!(Graph::with_nodes(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn add_node_checks_hosts() {
        let mut g = make_seed_graph(&SeedSpec::OneRegular(2)).unwrap();
        assert!(g.add_node(&[0, 0]).is_err());
        assert!(g.add_node(&[5]).is_err());
        assert_eq!(g.add_node(&[0, 1]).unwrap(), 2);
        assert_eq!(g.degrees(), &[2, 2, 2]);
        assert_eq!(g.generated_edges(), &[(2, 0), (2, 1)]);
    }

    #[test]
    fn seed_spec_parsing() {
        assert_eq!("ring:20".parse::<SeedSpec>().unwrap(), SeedSpec::Ring(20));
        assert_eq!("1regular:10".parse::<SeedSpec>().unwrap(), SeedSpec::OneRegular(10));
        assert_eq!(
            "file:/tmp/x.txt".parse::<SeedSpec>().unwrap(),
            SeedSpec::FromEdgeFile("/tmp/x.txt".into())
        );
        assert!("star:4".parse::<SeedSpec>().is_err());
        assert!("ring".parse::<SeedSpec>().is_err());
        assert!("ring:x".parse::<SeedSpec>().is_err());
    }
}
