//! Problem instances for the general and the network externalities models.

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// How one agent's allocation affects the others.
#[derive(Debug, Clone, PartialEq)]
pub enum Externality<T> {
    /// `weights[j][i]` is the influence of agent `j` on agent `i`; each column sums to one.
    Network { weights: Vec<Vec<T>> },
    /// `cross_values[j][i][b]` is what agent `i` gains when item `b` goes to agent `j`.
    General { cross_values: Vec<Vec<Vec<T>>> },
}

/// A validated, immutable allocation problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T> {
    values: Vec<Vec<T>>,
    externality: Externality<T>,
}

/// An agent's incoming influence weights, sorted non-decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceVector<T>(Vec<T>);

impl<T: Scalar> InfluenceVector<T> {
    pub fn entries(&self) -> &[T] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<T> {
        self.0
    }

    /// The largest entry; an agent is β-self-reliant when its self-weight reaches β,
    /// which bounds this entry from below.
    pub fn last(&self) -> &T {
        self.0.last().expect("influence vectors are never empty")
    }
}

impl<T: Scalar> Instance<T> {
    /// Validates `values` (agent × item) against the externality description.
    pub fn new(values: Vec<Vec<T>>, externality: Externality<T>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("at least one agent required".into()));
        }
        let m = values[0].len();
        for (i, row) in values.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "agent {i} values {} items, agent 0 values {m}",
                    row.len()
                )));
            }
            check_entries(row, |b| format!("values[{i}][{b}]"))?;
        }
        match &externality {
            Externality::Network { weights } => {
                if weights.len() != n || weights.iter().any(|row| row.len() != n) {
                    return Err(Error::DimensionMismatch(format!("weights must be {n}x{n}")));
                }
                for (j, row) in weights.iter().enumerate() {
                    check_entries(row, |i| format!("weights[{j}][{i}]"))?;
                }
                for i in 0..n {
                    let total = scalar::sum(weights.iter().map(|row| &row[i]));
                    if !T::is_unit(&total) {
                        return Err(Error::UnnormalizedWeights { agent: i, sum: total.to_string() });
                    }
                }
            }
            Externality::General { cross_values } => {
                let shaped = cross_values.len() == n
                    && cross_values
                        .iter()
                        .all(|per_giver| per_giver.len() == n && per_giver.iter().all(|r| r.len() == m));
                if !shaped {
                    return Err(Error::DimensionMismatch(format!("cross_values must be {n}x{n}x{m}")));
                }
                for (j, per_giver) in cross_values.iter().enumerate() {
                    for (i, row) in per_giver.iter().enumerate() {
                        check_entries(row, |b| format!("cross_values[{j}][{i}][{b}]"))?;
                    }
                }
            }
        }
        Ok(Self { values, externality })
    }

    pub fn network(values: Vec<Vec<T>>, weights: Vec<Vec<T>>) -> Result<Self> {
        Self::new(values, Externality::Network { weights })
    }

    pub fn general(values: Vec<Vec<T>>, cross_values: Vec<Vec<Vec<T>>>) -> Result<Self> {
        Self::new(values, Externality::General { cross_values })
    }

    /// Network instance without externalities: every agent only values its own bundle.
    pub fn independent(values: Vec<Vec<T>>) -> Result<Self> {
        let n = values.len();
        let weights = (0..n)
            .map(|j| (0..n).map(|i| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
        Self::network(values, weights)
    }

    /// The same instance over another scalar type. Validation is repeated, so a
    /// lossy conversion may be rejected.
    pub fn convert<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Result<Instance<U>> {
        let rows = |m: &[Vec<T>]| -> Vec<Vec<U>> { m.iter().map(|r| r.iter().map(&f).collect()).collect() };
        let externality = match &self.externality {
            Externality::Network { weights } => Externality::Network { weights: rows(weights) },
            Externality::General { cross_values } => {
                Externality::General { cross_values: cross_values.iter().map(|g| rows(g)).collect() }
            }
        };
        Instance::new(rows(&self.values), externality)
    }

    pub fn agents(&self) -> usize {
        self.values.len()
    }

    pub fn items(&self) -> usize {
        self.values[0].len()
    }

    pub fn externality(&self) -> &Externality<T> {
        &self.externality
    }

    pub fn is_network(&self) -> bool {
        matches!(self.externality, Externality::Network { .. })
    }

    pub fn weights(&self) -> Result<&[Vec<T>]> {
        match &self.externality {
            Externality::Network { weights } => Ok(weights),
            Externality::General { .. } => Err(Error::GeneralFormUnsupported),
        }
    }

    /// `w_{giver, observer}`; network form only.
    pub fn weight(&self, giver: usize, observer: usize) -> Result<&T> {
        Ok(&self.weights()?[giver][observer])
    }

    /// Agent `i`'s own valuation `V_i` of every item.
    pub fn values(&self, agent: usize) -> &[T] {
        &self.values[agent]
    }

    pub fn value_matrix(&self) -> &[Vec<T>] {
        &self.values
    }

    /// `V_i(S)` for the agent's own valuation.
    pub fn own_value(&self, agent: usize, bundle: &[usize]) -> T {
        scalar::sum(bundle.iter().map(|&b| &self.values[agent][b]))
    }

    /// What `observer` gains when item `item` is given to `giver`.
    pub fn item_value(&self, giver: usize, observer: usize, item: usize) -> T {
        match &self.externality {
            Externality::Network { weights } => {
                weights[giver][observer].clone() * self.values[observer][item].clone()
            }
            Externality::General { cross_values } => cross_values[giver][observer][item].clone(),
        }
    }

    /// `V_{giver, observer}(S)`; additive over the bundle.
    pub fn bundle_value(&self, giver: usize, observer: usize, bundle: &[usize]) -> T {
        match &self.externality {
            Externality::Network { weights } => {
                weights[giver][observer].clone() * self.own_value(observer, bundle)
            }
            Externality::General { cross_values } => {
                scalar::sum(bundle.iter().map(|&b| &cross_values[giver][observer][b]))
            }
        }
    }

    /// `V_{i,i}` per item: what the agent gains from keeping each item itself.
    pub fn self_values(&self, agent: usize) -> Vec<T> {
        (0..self.items()).map(|b| self.item_value(agent, agent, b)).collect()
    }

    /// `w_{i,i}`; network form only.
    pub fn self_weight(&self, agent: usize) -> Result<&T> {
        self.weight(agent, agent)
    }

    /// Smallest self-weight over all agents: the instance is β-self-reliant for every β up to it.
    pub fn self_reliance(&self) -> Result<T> {
        let weights = self.weights()?;
        let mut best = weights[0][0].clone();
        for (i, row) in weights.iter().enumerate().skip(1) {
            if row[i] < best {
                best = row[i].clone();
            }
        }
        Ok(best)
    }

    pub fn influence_vector(&self, agent: usize) -> Result<InfluenceVector<T>> {
        let weights = self.weights()?;
        let mut column: Vec<T> = weights.iter().map(|row| row[agent].clone()).collect();
        column.sort_by(scalar::cmp);
        Ok(InfluenceVector(column))
    }

    /// Agents ordered by non-decreasing influence on `agent`, ties by index.
    pub(crate) fn agents_by_influence(&self, agent: usize) -> Result<Vec<usize>> {
        let weights = self.weights()?;
        let mut order: Vec<usize> = (0..self.agents()).collect();
        order.sort_by(|&a, &b| scalar::cmp(&weights[a][agent], &weights[b][agent]).then(a.cmp(&b)));
        Ok(order)
    }
}

fn check_entries<T: Scalar>(row: &[T], at: impl Fn(usize) -> String) -> Result<()> {
    for (k, v) in row.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::DimensionMismatch(format!("non-finite entry at {}", at(k))));
        }
        if v.is_negative() {
            return Err(Error::NegativeValue(at(k)));
        }
    }
    Ok(())
}
