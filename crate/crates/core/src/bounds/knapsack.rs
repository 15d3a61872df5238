//! 0/1 knapsack solved once for every capacity `0..=max_capacity`.
//!
//! One table answers the capacity-`C` subproblem for every trial `C` of a
//! binary search, so the DP runs once per machine instead of once per trial.

use fixedbitset::FixedBitSet;

#[derive(Debug, Clone, Copy)]
pub struct Item {
    /// Caller's identifier, returned by [`KnapsackTable::chosen`].
    pub id: usize,
    pub weight: u64,
    pub profit: f64,
}

#[derive(Debug, Clone)]
pub struct KnapsackTable {
    items: Vec<Item>,
    /// `best[c]`: maximum profit with total weight at most `c`.
    best: Vec<f64>,
    /// `take[k]` bit `c`: item `k` improves the optimum at capacity `c`
    /// when only items `0..=k` are available.
    take: Vec<FixedBitSet>,
}

impl KnapsackTable {
    /// Items are processed in the given order; an item is only taken when it
    /// strictly improves the profit, so ties favour earlier items.
    pub fn solve(items: &[Item], max_capacity: u64) -> Self {
        let cap = max_capacity as usize;
        let items: Vec<Item> = items
            .iter()
            .copied()
            .filter(|it| it.profit > 0.0 && it.weight <= max_capacity)
            .collect();
        let mut best = vec![0.0f64; cap + 1];
        let mut take = Vec::with_capacity(items.len());
        for item in &items {
            let w = item.weight as usize;
            let mut bits = FixedBitSet::with_capacity(cap + 1);
            for c in (w..=cap).rev() {
                let with = best[c - w] + item.profit;
                if with > best[c] {
                    best[c] = with;
                    bits.insert(c);
                }
            }
            take.push(bits);
        }
        Self { items, best, take }
    }

    pub fn max_capacity(&self) -> u64 {
        (self.best.len() - 1) as u64
    }

    /// Optimal profit at `capacity` (clamped to the table size).
    pub fn best(&self, capacity: u64) -> f64 {
        let c = (capacity as usize).min(self.best.len() - 1);
        self.best[c]
    }

    /// Ids of an optimal item set at `capacity`.
    pub fn chosen(&self, capacity: u64) -> Vec<usize> {
        let mut c = (capacity as usize).min(self.best.len() - 1);
        let mut ids = Vec::new();
        for (k, item) in self.items.iter().enumerate().rev() {
            if self.take[k].contains(c) {
                ids.push(item.id);
                c -= item.weight as usize;
            }
        }
        ids.reverse();
        ids
    }
}
