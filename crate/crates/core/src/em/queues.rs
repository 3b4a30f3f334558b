use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

/// Min-priority queue that counts its pushes and pops.
#[derive(Debug, Clone)]
pub struct CountingHeap<T: Ord> {
    heap: BinaryHeap<Reverse<T>>,
    pub pushes: u64,
    pub pops: u64,
}

impl<T: Ord> Default for CountingHeap<T> {
    fn default() -> Self {
        Self {
            heap: BinaryHeap::new(),
            pushes: 0,
            pops: 0,
        }
    }
}

impl<T: Ord> CountingHeap<T> {
    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            heap: BinaryHeap::with_capacity(capacity),
            ..Self::default()
        }
    }

    pub fn push(&mut self, item: T) {
        self.pushes += 1;
        self.heap.push(Reverse(item));
    }

    pub fn pop(&mut self) -> Option<T> {
        let item = self.heap.pop()?;
        self.pops += 1;
        Some(item.0)
    }

    pub fn peek(&self) -> Option<&T> {
        self.heap.peek().map(|r| &r.0)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Drops every item without counting pops.
    pub fn clear(&mut self) {
        self.heap.clear();
    }
}

/// Uniform score with a total order; ties go to the earlier insertion.
#[derive(Debug, Clone, Copy)]
pub struct Score {
    pub value: f64,
    pub seq: u64,
}

impl PartialEq for Score {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Score {}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.seq.cmp(&other.seq))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_order_and_counters() {
        let mut h = CountingHeap::default();
        for x in [5, 1, 4, 2] {
            h.push(x);
        }
        assert_eq!(h.peek(), Some(&1));
        assert_eq!(h.pop(), Some(1));
        assert_eq!(h.pop(), Some(2));
        h.clear();
        assert_eq!(h.pop(), None);
        assert_eq!((h.pushes, h.pops), (4, 2));
    }

    #[test]
    fn score_ties_by_insertion() {
        let a = Score { value: 0.5, seq: 3 };
        let b = Score { value: 0.5, seq: 1 };
        let c = Score { value: 0.25, seq: 9 };
        let mut v = vec![a, b, c];
        v.sort();
        assert_eq!(v.iter().map(|s| s.seq).collect::<Vec<_>>(), vec![9, 1, 3]);
    }
}
