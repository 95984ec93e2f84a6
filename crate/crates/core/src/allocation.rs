//! Partitions, allocations of their bundles to agents, and worst/best allocations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::matching;
use crate::scalar::{self, Scalar};

/// Default bound on `n` for `n!` enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

/// An ordered list of disjoint bundles of item indices covering every item.
/// Bundles may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    bundles: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(bundles: Vec<Vec<usize>>, items: usize) -> Result<Self> {
        if bundles.is_empty() {
            return Err(Error::InvalidPartition("no bundles".into()));
        }
        let mut seen = vec![false; items];
        for bundle in &bundles {
            for &b in bundle {
                if b >= items {
                    return Err(Error::InvalidPartition(format!("item {b} out of range 0..{items}")));
                }
                if std::mem::replace(&mut seen[b], true) {
                    return Err(Error::InvalidPartition(format!("item {b} appears twice")));
                }
            }
        }
        if let Some(b) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("item {b} is not covered")));
        }
        Ok(Self::from_bundles(bundles))
    }

    /// Bundles are sorted internally so equal partitions compare equal.
    pub(crate) fn from_bundles(mut bundles: Vec<Vec<usize>>) -> Self {
        for bundle in &mut bundles {
            bundle.sort_unstable();
        }
        Self { bundles }
    }

    pub fn bundles(&self) -> &[Vec<usize>] {
        &self.bundles
    }

    pub fn into_bundles(self) -> Vec<Vec<usize>> {
        self.bundles
    }

    pub fn len(&self) -> usize {
        self.bundles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bundles.is_empty()
    }

    pub fn item_count(&self) -> usize {
        self.bundles.iter().map(Vec::len).sum()
    }

    /// Value of each bundle under additive `item_values`.
    pub fn values<T: Scalar>(&self, item_values: &[T]) -> Vec<T> {
        self.bundles
            .iter()
            .map(|bundle| scalar::sum(bundle.iter().map(|&b| &item_values[b])))
            .collect()
    }

    /// Bundle indices by non-increasing value, ties by ascending index.
    pub fn sorted_order<T: Scalar>(&self, item_values: &[T]) -> Vec<usize> {
        let values = self.values(item_values);
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| scalar::cmp(&values[b], &values[a]).then(a.cmp(&b)));
        order
    }

    /// Bundle values sorted non-increasing.
    pub fn sorted_values<T: Scalar>(&self, item_values: &[T]) -> Vec<T> {
        let mut values = self.values(item_values);
        values.sort_by(|a, b| scalar::cmp(b, a));
        values
    }

    /// Copy with bundles rearranged into the agent's non-increasing order.
    pub fn sorted_for<T: Scalar>(&self, item_values: &[T]) -> Partition {
        let bundles = self
            .sorted_order(item_values)
            .into_iter()
            .map(|k| self.bundles[k].clone())
            .collect();
        Partition { bundles }
    }
}

/// `Σ_j x_j · v_j` with `x` non-decreasing and `v` sorted non-increasing.
///
/// `bundle_values` may come in any order; missing trailing entries count as empty bundles.
pub fn sorted_weighted_sum<T: Scalar>(weights: &[T], bundle_values: &[T]) -> T {
    let mut values = bundle_values.to_vec();
    values.sort_by(|a, b| scalar::cmp(b, a));
    weights
        .iter()
        .zip(values.iter())
        .fold(T::zero(), |acc, (x, v)| acc + x.clone() * v.clone())
}

/// A bijection from bundles to agents and the utilities it yields.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation<T> {
    /// `assignment[k]` is the agent receiving bundle `k`.
    pub assignment: Vec<usize>,
    pub utilities: Vec<T>,
}

impl<T: Scalar> Allocation<T> {
    /// `bundle_of[agent]`, the inverse of the assignment.
    pub fn bundle_of(&self) -> Vec<usize> {
        let mut inverse = vec![0; self.assignment.len()];
        for (k, &agent) in self.assignment.iter().enumerate() {
            inverse[agent] = k;
        }
        inverse
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Worst,
    Best,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremeMethod {
    /// Assignment problem on the complete bundle × agent graph.
    Matching,
    /// All `n!` bijections; refused above `cap` agents.
    Enumerate { cap: usize },
}

fn check_bijection(assignment: &[usize], n: usize) -> Result<()> {
    if assignment.len() != n {
        return Err(Error::NotABijection);
    }
    let mut seen = vec![false; n];
    for &a in assignment {
        if a >= n || std::mem::replace(&mut seen[a], true) {
            return Err(Error::NotABijection);
        }
    }
    Ok(())
}

fn check_shape<T: Scalar>(instance: &Instance<T>, partition: &Partition) -> Result<()> {
    if partition.len() != instance.agents() {
        return Err(Error::DimensionMismatch(format!(
            "partition has {} bundles for {} agents",
            partition.len(),
            instance.agents()
        )));
    }
    Partition::new(partition.bundles.clone(), instance.items()).map(|_| ())
}

/// `U_i = Σ_k V_{A_k, i}(P_k)` for every agent.
pub fn utilities<T: Scalar>(
    instance: &Instance<T>,
    partition: &Partition,
    assignment: &[usize],
) -> Result<Vec<T>> {
    check_shape(instance, partition)?;
    check_bijection(assignment, instance.agents())?;
    Ok(utilities_unchecked(instance, partition, assignment))
}

pub(crate) fn utilities_unchecked<T: Scalar>(
    instance: &Instance<T>,
    partition: &Partition,
    assignment: &[usize],
) -> Vec<T> {
    (0..instance.agents())
        .map(|i| utility_of(instance, partition, assignment, i))
        .collect()
}

fn utility_of<T: Scalar>(
    instance: &Instance<T>,
    partition: &Partition,
    assignment: &[usize],
    agent: usize,
) -> T {
    partition
        .bundles()
        .iter()
        .zip(assignment)
        .fold(T::zero(), |acc, (bundle, &giver)| acc + instance.bundle_value(giver, agent, bundle))
}

/// The allocation of `partition` minimising (worst) or maximising (best) `agent`'s utility.
///
/// Among equally extreme allocations the lexicographically smallest assignment
/// vector wins, whichever method is used.
pub fn extreme_allocation<T: Scalar>(
    instance: &Instance<T>,
    partition: &Partition,
    agent: usize,
    extreme: Extreme,
    method: ExtremeMethod,
) -> Result<Allocation<T>> {
    check_shape(instance, partition)?;
    let n = instance.agents();
    let assignment = match method {
        ExtremeMethod::Enumerate { cap } => {
            if n > cap {
                return Err(Error::EnumerationCapExceeded { n, cap });
            }
            enumerate_extreme(instance, partition, agent, extreme)
        }
        ExtremeMethod::Matching => {
            // cost[k][j]: agent j receives bundle k
            let gains: Vec<Vec<T>> = partition
                .bundles()
                .iter()
                .map(|bundle| (0..n).map(|j| instance.bundle_value(j, agent, bundle)).collect())
                .collect();
            let cost = match extreme {
                Extreme::Worst => gains,
                Extreme::Best => {
                    let top = gains
                        .iter()
                        .flatten()
                        .fold(T::zero(), |acc, g| scalar::max(acc, g.clone()));
                    gains
                        .into_iter()
                        .map(|row| row.into_iter().map(|g| top.clone() - g).collect())
                        .collect()
                }
            };
            matching::min_cost_assignment_lex(&cost).0
        }
    };
    let utilities = utilities_unchecked(instance, partition, &assignment);
    Ok(Allocation { assignment, utilities })
}

fn enumerate_extreme<T: Scalar>(
    instance: &Instance<T>,
    partition: &Partition,
    agent: usize,
    extreme: Extreme,
) -> Vec<usize> {
    let n = instance.agents();
    let gains: Vec<Vec<T>> = partition
        .bundles()
        .iter()
        .map(|bundle| (0..n).map(|j| instance.bundle_value(j, agent, bundle)).collect())
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<(Vec<usize>, T)> = None;
    loop {
        let value = perm
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (k, &j)| acc + gains[k][j].clone());
        let better = match &best {
            None => true,
            Some((_, b)) => match extreme {
                Extreme::Worst => value < *b,
                Extreme::Best => value > *b,
            },
        };
        if better {
            best = Some((perm.clone(), value));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.expect("at least one permutation").0
}

/// Advances to the next permutation in lexicographic order; false after the last one.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Worst-case utility of `agent` for `partition` in the network model, in closed form:
/// the agent's influence vector paired with its bundle values sorted non-increasing.
pub fn worst_value_network<T: Scalar>(
    instance: &Instance<T>,
    partition: &Partition,
    agent: usize,
) -> Result<T> {
    let x = instance.influence_vector(agent)?;
    Ok(sorted_weighted_sum(x.entries(), &partition.values(instance.values(agent))))
}

/// The greedy worst allocation of the network model: most valuable bundle to the
/// least influential remaining agent.
pub fn worst_allocation_network<T: Scalar>(
    instance: &Instance<T>,
    partition: &Partition,
    agent: usize,
) -> Result<Allocation<T>> {
    check_shape(instance, partition)?;
    let givers = instance.agents_by_influence(agent)?;
    let mut assignment = vec![0; partition.len()];
    for (k, giver) in partition.sorted_order(instance.values(agent)).into_iter().zip(givers) {
        assignment[k] = giver;
    }
    let utilities = utilities_unchecked(instance, partition, &assignment);
    Ok(Allocation { assignment, utilities })
}
