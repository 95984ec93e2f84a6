//! Partition producers for a single agent's additive valuation.
//!
//! Every routine here sees only one agent's item values. The objective of the
//! generalized partition problem is `Σ_j x_j · v_j` where `x` is non-decreasing
//! and `v` are the bundle values sorted non-increasing, so `x = [0, …, 0, 1]`
//! is maximin and an agent's influence vector gives its extended-maximin-share.

use std::cmp::Ordering;

use crate::allocation::{sorted_weighted_sum, Partition};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// Default bound on `n^m` for exhaustive partition search.
pub const DEFAULT_SEARCH_CAP: u64 = 20_000_000;

/// Weights paired with bundle values: non-negative, non-decreasing, summing to at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector<T>(Vec<T>);

impl<T: Scalar> ObjectiveVector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::BadParameters("objective vector is empty".into()));
        }
        if entries.iter().any(|x| x.is_negative() || !x.is_finite()) {
            return Err(Error::BadParameters("objective entries must be non-negative".into()));
        }
        if entries.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::BadParameters("objective vector must be non-decreasing".into()));
        }
        let total = scalar::sum(&entries);
        if total > T::one() && !T::is_unit(&total) {
            return Err(Error::BadParameters(format!("objective entries sum to {total} > 1")));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Objective value of a partition with these bundle values.
    pub fn evaluate(&self, bundle_values: &[T]) -> T {
        sorted_weighted_sum(&self.0, bundle_values)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveKind<T> {
    Maximin,
    Minimax,
    /// Geometric weights with ratio `epsilon`; selects a leximin partition for small enough `epsilon`.
    Leximin(T),
}

/// The canonical non-decreasing weight vector for a classic partitioning objective.
pub fn objective_vector<T: Scalar>(kind: &ObjectiveKind<T>, n: usize) -> Result<ObjectiveVector<T>> {
    if n == 0 {
        return Err(Error::BadParameters("n must be positive".into()));
    }
    let entries = match kind {
        ObjectiveKind::Maximin => {
            let mut x = vec![T::zero(); n];
            x[n - 1] = T::one();
            x
        }
        ObjectiveKind::Minimax => {
            if n < 2 {
                return Err(Error::BadParameters("minimax needs at least two bundles".into()));
            }
            let share = T::one() / T::from_count(n - 1);
            let mut x = vec![share; n];
            x[0] = T::zero();
            x
        }
        ObjectiveKind::Leximin(eps) => {
            if !(*eps > T::zero() && *eps < T::one()) {
                return Err(Error::BadEpsilon);
            }
            // largest-first entries (ε^k − ε^{k+1}) / (1 − ε^n), then reversed
            let mut powers = Vec::with_capacity(n + 1);
            let mut p = T::one();
            for _ in 0..=n {
                powers.push(p.clone());
                p = p * eps.clone();
            }
            let norm = T::one() - powers[n].clone();
            let mut x: Vec<T> = (0..n)
                .map(|k| (powers[k].clone() - powers[k + 1].clone()) / norm.clone())
                .collect();
            x.reverse();
            x
        }
    };
    ObjectiveVector::new(entries)
}

/// Greedy longest-processing-time partition into `n` bundles.
///
/// Items go in non-increasing value order (ties: lower index first), each into the
/// currently least valuable bundle (ties: lower bundle index).
pub fn lpt_partition<T: Scalar>(item_values: &[T], n: usize) -> Partition {
    assert!(n >= 1, "at least one bundle");
    let mut order: Vec<usize> = (0..item_values.len()).collect();
    order.sort_by(|&a, &b| scalar::cmp(&item_values[b], &item_values[a]).then(a.cmp(&b)));
    let mut bundles = vec![Vec::new(); n];
    let mut loads = vec![T::zero(); n];
    for item in order {
        let mut target = 0;
        for k in 1..n {
            if loads[k] < loads[target] {
                target = k;
            }
        }
        loads[target] = loads[target].clone() + item_values[item].clone();
        bundles[target].push(item);
    }
    Partition::from_bundles(bundles)
}

/// Items worth at least the agent's average share `V_i(M)/n` (normalized network weights).
pub fn huge_items<T: Scalar>(item_values: &[T], n: usize) -> Vec<usize> {
    let threshold = scalar::sum(item_values) / T::from_count(n);
    (0..item_values.len())
        .filter(|&b| item_values[b] >= threshold)
        .collect()
}

/// An item `b` in bundle `k` with `V(P_k) > V({b}) > min_j V(P_j)`, if any.
///
/// Bundles are scanned from most to least valuable, items from most to least valuable.
pub fn nice_violation<T: Scalar>(partition: &Partition, item_values: &[T]) -> Option<(usize, usize)> {
    let values = partition.values(item_values);
    let order = partition.sorted_order(item_values);
    let floor = &values[*order.last()?];
    for &k in &order {
        let mut items = partition.bundles()[k].clone();
        items.sort_by(|&a, &b| scalar::cmp(&item_values[b], &item_values[a]).then(a.cmp(&b)));
        for b in items {
            let v = &item_values[b];
            if values[k] > *v && *v > *floor {
                return Some((k, b));
            }
        }
    }
    None
}

pub fn is_nice<T: Scalar>(partition: &Partition, item_values: &[T]) -> bool {
    nice_violation(partition, item_values).is_none()
}

/// Repeats the split-and-merge repair until no violating item remains.
pub fn nicify<T: Scalar>(partition: &Partition, item_values: &[T]) -> Partition {
    nicify_counted(partition, item_values).0
}

/// [`nicify`] plus the number of modifications applied.
///
/// One modification replaces the violating bundle `P_k` and the least valuable
/// bundle `P_n` with `{b}` (in slot `k`) and `P_k ∪ P_n ∖ {b}` (in slot `n`).
pub fn nicify_counted<T: Scalar>(partition: &Partition, item_values: &[T]) -> (Partition, usize) {
    let mut bundles = partition.bundles().to_vec();
    let mut steps = 0;
    loop {
        let current = Partition::from_bundles(bundles.clone());
        let Some((k, b)) = nice_violation(&current, item_values) else {
            return (current, steps);
        };
        let floor = *current.sorted_order(item_values).last().expect("non-empty");
        let mut merged: Vec<usize> = bundles[k].iter().copied().filter(|&x| x != b).collect();
        merged.extend_from_slice(&bundles[floor]);
        bundles[k] = vec![b];
        bundles[floor] = merged;
        steps += 1;
    }
}

/// Checks `n^m <= cap`.
pub fn check_search_cap(n: usize, m: usize, cap: u64) -> Result<()> {
    let mut count: u64 = 1;
    for _ in 0..m {
        count = count.saturating_mul(n as u64);
        if count > cap {
            return Err(Error::SearchCapExceeded { n, m, cap });
        }
    }
    Ok(())
}

/// Calls `visit(block_of, block_sums)` once for every partition of the items into at
/// most `n` unlabeled blocks (restricted growth strings); `block_sums` has length `n`.
pub fn for_each_partition<T: Scalar>(
    item_values: &[T],
    n: usize,
    mut visit: impl FnMut(&[usize], &[T]),
) {
    fn recurse<T: Scalar>(
        item: usize,
        used: usize,
        values: &[T],
        n: usize,
        block_of: &mut Vec<usize>,
        sums: &mut Vec<T>,
        visit: &mut impl FnMut(&[usize], &[T]),
    ) {
        if item == values.len() {
            visit(block_of, sums);
            return;
        }
        let open = (used + 1).min(n);
        for block in 0..open {
            block_of[item] = block;
            sums[block] = sums[block].clone() + values[item].clone();
            recurse(item + 1, used.max(block + 1), values, n, block_of, sums, visit);
            sums[block] = sums[block].clone() - values[item].clone();
        }
    }
    let mut block_of = vec![0usize; item_values.len()];
    let mut sums = vec![T::zero(); n];
    recurse(0, 0, item_values, n, &mut block_of, &mut sums, &mut visit);
}

fn partition_from_blocks(block_of: &[usize], n: usize) -> Partition {
    let mut bundles = vec![Vec::new(); n];
    for (item, &block) in block_of.iter().enumerate() {
        bundles[block].push(item);
    }
    Partition::from_bundles(bundles)
}

/// Exhaustive maximiser of `Σ_j x_j · v_j` over all partitions into `x.len()` bundles.
///
/// Returns the first optimal partition in enumeration order and the optimum value.
pub fn optimal_partition_exact<T: Scalar>(
    item_values: &[T],
    objective: &ObjectiveVector<T>,
    cap: u64,
) -> Result<(Partition, T)> {
    let n = objective.len();
    check_search_cap(n, item_values.len(), cap)?;
    let mut best: Option<(Vec<usize>, T)> = None;
    for_each_partition(item_values, n, |block_of, sums| {
        let value = objective.evaluate(sums);
        if best.as_ref().is_none_or(|(_, b)| value > *b) {
            best = Some((block_of.to_vec(), value));
        }
    });
    let (block_of, value) = best.expect("at least one partition");
    Ok((partition_from_blocks(&block_of, n), value))
}

/// Compares bundle-value vectors in the leximin order (smallest first, then next smallest, …).
pub fn leximin_cmp<T: Scalar>(a: &[T], b: &[T]) -> Ordering {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(scalar::cmp);
    b.sort_by(scalar::cmp);
    for (x, y) in a.iter().zip(&b) {
        match scalar::cmp(x, y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Exhaustive leximin partition into `n` bundles and its bundle values (as enumerated).
pub fn leximin_partition_exact<T: Scalar>(
    item_values: &[T],
    n: usize,
    cap: u64,
) -> Result<(Partition, Vec<T>)> {
    check_search_cap(n, item_values.len(), cap)?;
    let mut best: Option<(Vec<usize>, Vec<T>)> = None;
    for_each_partition(item_values, n, |block_of, sums| {
        if best
            .as_ref()
            .is_none_or(|(_, b)| leximin_cmp(sums, b) == Ordering::Greater)
        {
            best = Some((block_of.to_vec(), sums.to_vec()));
        }
    });
    let (block_of, sums) = best.expect("at least one partition");
    Ok((partition_from_blocks(&block_of, n), sums))
}

/// Normalizes a source partition for bundle claiming without lowering its objective
/// value under any non-decreasing weight vector:
///
/// * the partition is nice;
/// * zero-valued items sit only in the least valuable bundle;
/// * if `P_t` is the most valuable bundle holding two or more items, then
///   `V(P_n) >= V(P_t)/2`.
///
/// The last property is reached by moving a proper subset worth at most `V(P_t)/2`
/// from `P_t` into `P_n`; both resulting values stay within `[V(P_n), V(P_t)]`.
pub fn refine_for_claiming<T: Scalar>(partition: &Partition, item_values: &[T]) -> Partition {
    let mut current = partition.clone();
    loop {
        current = nicify(&current, item_values);
        let mut bundles = current.bundles().to_vec();
        let order = current.sorted_order(item_values);
        let floor = *order.last().expect("non-empty");
        let values = current.values(item_values);

        let mut moved_zero = false;
        for &k in &order[..order.len() - 1] {
            if bundles[k].len() < 2 || values[k] == T::zero() {
                continue;
            }
            let (zeros, kept): (Vec<usize>, Vec<usize>) =
                bundles[k].iter().partition(|&&b| item_values[b] == T::zero());
            if !zeros.is_empty() {
                bundles[k] = kept;
                bundles[floor].extend(zeros);
                moved_zero = true;
            }
        }
        if moved_zero {
            current = Partition::from_bundles(bundles);
            continue;
        }

        let Some(&top) = order.iter().find(|&&k| bundles[k].len() >= 2) else {
            return current;
        };
        let limit = values[top].half();
        if values[floor] >= limit {
            return current;
        }
        let subset = largest_proper_subset_within(&bundles[top], item_values, &limit);
        bundles[top].retain(|b| !subset.contains(b));
        bundles[floor].extend(subset);
        current = Partition::from_bundles(bundles);
    }
}

/// Non-empty proper subset of `items` with the largest value not exceeding `limit`.
fn largest_proper_subset_within<T: Scalar>(items: &[usize], item_values: &[T], limit: &T) -> Vec<usize> {
    let k = items.len();
    if k > 20 {
        // greedy fallback: the single cheapest item always qualifies here
        let cheapest = *items
            .iter()
            .min_by(|&&a, &&b| scalar::cmp(&item_values[a], &item_values[b]).then(a.cmp(&b)))
            .expect("non-empty");
        return vec![cheapest];
    }
    let full = (1u32 << k) - 1;
    let mut best: Option<(u32, T)> = None;
    for mask in 1..full {
        let value = scalar::sum((0..k).filter(|&t| mask & (1 << t) != 0).map(|t| &item_values[items[t]]));
        if value > *limit {
            continue;
        }
        if best.as_ref().is_none_or(|(_, b)| value > *b) {
            best = Some((mask, value));
        }
    }
    let (mask, _) = best.expect("the cheapest item of a multi-item bundle fits");
    (0..k).filter(|&t| mask & (1 << t) != 0).map(|t| items[t]).collect()
}
