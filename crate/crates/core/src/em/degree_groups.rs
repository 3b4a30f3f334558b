//! Degree-group counters `c_d` with weighted draws proportional to `c_d * f(d)`.
//!
//! Small degrees `1..=B` live in a dense Fenwick tree, where `B` is the
//! smallest power of two at least `sqrt(n_max)`. Larger degrees are sparse and
//! get slots in a second, growable Fenwick tree. Both support point updates
//! and draws in logarithmic time.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::weight::WeightFunction;

#[derive(Debug, Clone)]
struct Fenwick {
    tree: Vec<f64>,
}

impl Fenwick {
    fn new(len: usize) -> Self {
        Self {
            tree: vec![0.0; len + 1],
        }
    }

    fn from_values(values: &[f64]) -> Self {
        let mut tree = vec![0.0; values.len() + 1];
        tree[1..].copy_from_slice(values);
        for i in 1..tree.len() {
            let j = i + (i & i.wrapping_neg());
            if j < tree.len() {
                tree[j] += tree[i];
            }
        }
        Self { tree }
    }

    fn len(&self) -> usize {
        self.tree.len() - 1
    }

    /// Adds `delta` at 0-based position `pos`.
    fn add(&mut self, pos: usize, delta: f64) {
        let mut i = pos + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    fn total(&self) -> f64 {
        let mut i = self.len();
        let mut sum = 0.0;
        while i > 0 {
            sum += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        sum
    }

    /// Smallest 0-based position whose inclusive prefix sum exceeds `target`,
    /// clamped to the last position.
    fn find(&self, mut target: f64) -> usize {
        let n = self.len();
        let mut pos = 0;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos.min(n - 1)
    }
}

#[derive(Debug, Clone)]
struct SparseSegment {
    slot_of: HashMap<u32, usize>,
    degree_of: Vec<u32>,
    counts: Vec<u64>,
    weights: Vec<f64>,
    tree: Fenwick,
    free: Vec<usize>,
}

impl SparseSegment {
    fn new() -> Self {
        Self {
            slot_of: HashMap::new(),
            degree_of: Vec::new(),
            counts: Vec::new(),
            weights: Vec::new(),
            tree: Fenwick::new(0),
            free: Vec::new(),
        }
    }

    fn count(&self, d: u32) -> u64 {
        self.slot_of.get(&d).map_or(0, |&s| self.counts[s])
    }

    fn slot_for(&mut self, d: u32) -> usize {
        if let Some(&s) = self.slot_of.get(&d) {
            return s;
        }
        let s = match self.free.pop() {
            Some(s) => s,
            None => {
                let s = self.degree_of.len();
                self.degree_of.push(0);
                self.counts.push(0);
                self.weights.push(0.0);
                if s >= self.tree.len() {
                    let mut values = self.weights.clone();
                    values.resize((2 * s).max(8), 0.0);
                    self.tree = Fenwick::from_values(&values);
                }
                s
            }
        };
        self.degree_of[s] = d;
        self.slot_of.insert(d, s);
        s
    }

    fn set(&mut self, d: u32, count: u64, weight: f64) {
        let s = self.slot_for(d);
        self.tree.add(s, weight - self.weights[s]);
        self.weights[s] = weight;
        self.counts[s] = count;
        if count == 0 {
            self.slot_of.remove(&d);
            self.degree_of[s] = 0;
            self.free.push(s);
        }
    }
}

#[derive(Debug, Clone)]
pub struct DegreeGroups {
    weight: WeightFunction,
    static_limit: u32,
    static_counts: Vec<u64>,
    static_tree: Fenwick,
    sparse: SparseSegment,
    nodes: u64,
}

impl DegreeGroups {
    /// Groups sized for graphs of up to `max_nodes` nodes.
    pub fn new(weight: WeightFunction, max_nodes: usize) -> Self {
        let static_limit = ((max_nodes as f64).sqrt().ceil() as usize)
            .max(1)
            .next_power_of_two() as u32;
        Self {
            weight,
            static_limit,
            static_counts: vec![0; static_limit as usize + 1],
            static_tree: Fenwick::new(static_limit as usize),
            sparse: SparseSegment::new(),
            nodes: 0,
        }
    }

    /// Largest degree held in the dense segment.
    pub fn static_limit(&self) -> u32 {
        self.static_limit
    }

    pub fn count(&self, d: u32) -> u64 {
        if d <= self.static_limit {
            self.static_counts[d as usize]
        } else {
            self.sparse.count(d)
        }
    }

    pub fn node_count(&self) -> u64 {
        self.nodes
    }

    pub fn total_weight(&self) -> f64 {
        self.static_tree.total() + self.sparse.tree.total()
    }

    /// Changes `c_d` by `delta`.
    pub fn add(&mut self, d: u32, delta: i64) -> Result<()> {
        if d == 0 {
            return Err(Error::Logic("degree group 0 is not tracked".into()));
        }
        let old = self.count(d);
        let new = old
            .checked_add_signed(delta)
            .ok_or_else(|| Error::Logic(format!("count of degree {d} would become negative")))?;
        let f = self.weight.weight(d)?;
        if d <= self.static_limit {
            self.static_counts[d as usize] = new;
            self.static_tree.add(d as usize - 1, delta as f64 * f);
        } else {
            self.sparse.set(d, new, new as f64 * f);
        }
        self.nodes = self.nodes.checked_add_signed(delta).expect("node count stays non-negative");
        Ok(())
    }

    /// Draws a degree with probability proportional to `c_d * f(d)`.
    ///
    /// Rounding in the trees can leave residual weight on an emptied group,
    /// so the returned group may have count 0; callers reject those.
    pub fn draw(&self, rng: &mut RandomSource) -> Option<u32> {
        let dense = self.static_tree.total();
        let sparse = self.sparse.tree.total();
        let total = dense + sparse;
        if !(total > 0.0) {
            return None;
        }
        let u = rng.unit() * total;
        if u < dense || sparse <= 0.0 {
            Some(self.static_tree.find(u.min(dense)) as u32 + 1)
        } else {
            let slot = self.sparse.tree.find(u - dense);
            Some(self.sparse.degree_of[slot])
        }
    }

    /// Non-empty groups in ascending degree order.
    pub fn groups(&self) -> Vec<(u32, u64)> {
        let mut out: Vec<(u32, u64)> = (1..=self.static_limit)
            .filter(|&d| self.static_counts[d as usize] > 0)
            .map(|d| (d, self.static_counts[d as usize]))
            .collect();
        let mut sparse: Vec<(u32, u64)> = self
            .sparse
            .slot_of
            .iter()
            .map(|(&d, &s)| (d, self.sparse.counts[s]))
            .collect();
        sparse.sort_unstable();
        out.extend(sparse);
        out
    }

    pub(crate) fn weight_of(&self, d: u32) -> Result<f64> {
        self.weight.weight(d)
    }
}
