//! Binary indexed (Fenwick) tree over integer weights.
//!
//! Both simulators pick the target of an attachment/detachment (or a
//! household birth/death) with probability proportional to its current
//! in-degree (or size). The tree keeps those weights with O(log n)
//! update, prefix sum and weighted selection, which is what makes
//! million-step trajectories cheap.

/// Fenwick tree over `u64` weights with append support.
#[derive(Debug, Clone)]
pub struct FenwickTree {
    // 1-based storage; tree[i] covers (i - lsb(i), i].
    tree: Vec<u64>,
    total: u64,
}

#[inline]
fn lsb(i: usize) -> usize {
    i & i.wrapping_neg()
}

impl FenwickTree {
    /// Empty tree.
    pub fn new() -> Self {
        FenwickTree { tree: vec![0], total: 0 }
    }

    /// Tree initialized from a slice of weights.
    pub fn from_weights(weights: &[u64]) -> Self {
        let mut t = FenwickTree::new();
        for &w in weights {
            t.push(w);
        }
        t
    }

    /// Number of items.
    pub fn len(&self) -> usize {
        self.tree.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sum of all weights.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Append a new item with the given weight.
    pub fn push(&mut self, weight: u64) {
        let i = self.tree.len();
        // The new node covers (i - lsb(i), i]; seed it with the already
        // stored part of that range so a single push stays O(log n).
        let covered = self.prefix_sum(i - 1) - self.prefix_sum(i - lsb(i));
        self.tree.push(covered + weight);
        self.total += weight;
    }

    /// Sum of weights of items 0..count (count items from the front).
    pub fn prefix_sum(&self, count: usize) -> u64 {
        debug_assert!(count <= self.len());
        let mut i = count;
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i -= lsb(i);
        }
        s
    }

    /// Add `delta` to the weight of item `index` (0-based).
    pub fn add(&mut self, index: usize, delta: i64) {
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] = self.tree[i].checked_add_signed(delta).expect("weight underflow");
            i += lsb(i);
        }
        self.total = self.total.checked_add_signed(delta).expect("total underflow");
    }

    /// Index of the item containing position `target` in the cumulative
    /// weight line: the smallest `i` with prefix_sum(i + 1) > target.
    ///
    /// Requires `target < total()`. Zero-weight items are never selected.
    pub fn select(&self, target: u64) -> usize {
        debug_assert!(target < self.total);
        let n = self.len();
        let mut pos = 0usize; // items known to lie strictly before the answer
        let mut remaining = target;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= remaining {
                remaining -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos
    }
}

impl Default for FenwickTree {
    fn default() -> Self {
        Self::new()
    }
}
