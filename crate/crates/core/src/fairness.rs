//! Fairness quantities: extended-maximin-share, maximin-share, average-share and
//! extended-proportional share, plus allocation verification against them.

use serde::Serialize;

use crate::allocation::{
    extreme_allocation, utilities, worst_value_network, Extreme, ExtremeMethod, Partition,
};
use crate::error::{Error, Result};
use crate::instance::{Externality, Instance};
use crate::partitioning::{
    check_search_cap, for_each_partition, lpt_partition, objective_vector, optimal_partition_exact,
    ObjectiveKind, ObjectiveVector,
};
use crate::scalar::{self, Scalar};
use crate::serde_display;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmmsMode {
    /// Exhaustive search over all partitions, within a cap on `n^m`.
    Exact { cap: u64 },
    /// Worst-case value of the LPT partition: between EMMS/2 and EMMS (network model).
    LptBound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Emms<T> {
    pub value: T,
    /// False when `value` is only the LPT lower bound.
    pub exact: bool,
}

/// The partition maximising `agent`'s worst-case utility, and that utility.
///
/// Network instances use the closed form; general instances evaluate every
/// partition's worst allocation by matching.
pub fn optimal_partition<T: Scalar>(instance: &Instance<T>, agent: usize, cap: u64) -> Result<(Partition, T)> {
    let n = instance.agents();
    match instance.externality() {
        Externality::Network { .. } => {
            let x = ObjectiveVector::new(instance.influence_vector(agent)?.into_entries())?;
            optimal_partition_exact(instance.values(agent), &x, cap)
        }
        Externality::General { .. } => {
            check_search_cap(n, instance.items(), cap)?;
            let mut best: Option<(Partition, T)> = None;
            let mut failure = None;
            // block sums are not used; the enumeration supplies the block structure
            let zeros = vec![T::zero(); instance.items()];
            for_each_partition(&zeros, n, |block_of, _| {
                if failure.is_some() {
                    return;
                }
                let mut bundles = vec![Vec::new(); n];
                for (item, &block) in block_of.iter().enumerate() {
                    bundles[block].push(item);
                }
                let partition = Partition::from_bundles(bundles);
                match extreme_allocation(instance, &partition, agent, Extreme::Worst, ExtremeMethod::Matching) {
                    Ok(worst) => {
                        let value = worst.utilities[agent].clone();
                        if best.as_ref().is_none_or(|(_, b)| value > *b) {
                            best = Some((partition, value));
                        }
                    }
                    Err(e) => failure = Some(e),
                }
            });
            match failure {
                Some(e) => Err(e),
                None => Ok(best.expect("at least one partition")),
            }
        }
    }
}

/// `EMMS_i`, exactly or as the LPT lower bound.
pub fn emms<T: Scalar>(instance: &Instance<T>, agent: usize, mode: EmmsMode) -> Result<Emms<T>> {
    match mode {
        EmmsMode::Exact { cap } => Ok(Emms { value: optimal_partition(instance, agent, cap)?.1, exact: true }),
        EmmsMode::LptBound => {
            let lpt = lpt_partition(instance.values(agent), instance.agents());
            Ok(Emms { value: worst_value_network(instance, &lpt, agent)?, exact: false })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mms<T> {
    /// Max over partitions of the least valuable bundle under `V_i`.
    pub raw: T,
    /// The same under `V_{i,i}` (equals `w_{i,i} · raw` in the network model).
    pub self_scaled: T,
}

fn maximin_value<T: Scalar>(item_values: &[T], n: usize, cap: u64) -> Result<T> {
    let x = objective_vector(&ObjectiveKind::Maximin, n)?;
    Ok(optimal_partition_exact(item_values, &x, cap)?.1)
}

pub fn mms<T: Scalar>(instance: &Instance<T>, agent: usize, cap: u64) -> Result<Mms<T>> {
    let n = instance.agents();
    let raw = maximin_value(instance.values(agent), n, cap)?;
    let self_scaled = match instance.externality() {
        Externality::Network { weights } => weights[agent][agent].clone() * raw.clone(),
        Externality::General { .. } => maximin_value(&instance.self_values(agent), n, cap)?,
    };
    Ok(Mms { raw, self_scaled })
}

/// `Σ_b Σ_j V_{j,i}({b}) / n`.
pub fn average_share<T: Scalar>(instance: &Instance<T>, agent: usize) -> T {
    let n = instance.agents();
    let total = (0..instance.items()).fold(T::zero(), |acc, b| {
        (0..n).fold(acc, |acc, j| acc + instance.item_value(j, agent, b))
    });
    total / T::from_count(n)
}

/// `V̂_i / n`, where `V̂_i` gives every item to the recipient that benefits agent `i` most.
pub fn extended_proportional_share<T: Scalar>(instance: &Instance<T>, agent: usize) -> T {
    let n = instance.agents();
    let total = (0..instance.items()).fold(T::zero(), |acc, b| {
        let best = (0..n).fold(T::zero(), |m, j| scalar::max(m, instance.item_value(j, agent, b)));
        acc + best
    });
    total / T::from_count(n)
}

/// Three-agent instance where EMMS exceeds `c` times MMS for agent 0.
///
/// Agent 0 values the items `(1, c/ε, c/ε)` and keeps weight `1 − 2ε` for itself,
/// receiving `ε` from each other agent. Agents 1 and 2 value every item at 1 and
/// use the same weight pattern.
pub fn gap_instance<T: Scalar>(c: T, epsilon: T) -> Result<Instance<T>> {
    let two = T::one() + T::one();
    if c < T::one() {
        return Err(Error::BadParameters(format!("c = {c} must be at least 1")));
    }
    if !(epsilon > T::zero() && epsilon.clone() * two.clone() < T::one()) {
        return Err(Error::BadParameters(format!("epsilon = {epsilon} must lie in (0, 1/2)")));
    }
    let big = c / epsilon.clone();
    let values = vec![
        vec![T::one(), big.clone(), big],
        vec![T::one(); 3],
        vec![T::one(); 3],
    ];
    let own = T::one() - two * epsilon.clone();
    let weights = (0..3)
        .map(|j| (0..3).map(|i| if i == j { own.clone() } else { epsilon.clone() }).collect())
        .collect();
    Instance::network(values, weights)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct AgentFairness<T> {
    pub agent: usize,
    #[serde(with = "serde_display")]
    pub emms: T,
    pub emms_exact: bool,
    #[serde(with = "serde_display")]
    pub mms_raw: T,
    #[serde(with = "serde_display")]
    pub mms_self_scaled: T,
    #[serde(with = "serde_display")]
    pub average_share: T,
    #[serde(with = "serde_display")]
    pub extended_proportional_share: T,
    #[serde(with = "serde_display")]
    pub utility: T,
    /// `utility / emms`; absent when EMMS is zero.
    pub ratio: Option<f64>,
    #[serde(with = "serde_display")]
    pub required: T,
    pub pass: bool,
}

impl<T: Scalar> AgentFairness<T> {
    /// The ordering between the shares that holds on every network instance:
    /// average ≥ extended-proportional, average ≥ EMMS ≥ raw MMS ≥ self-scaled MMS.
    pub fn shares_consistent(&self) -> bool {
        self.average_share >= self.extended_proportional_share
            && (!self.emms_exact
                || (self.average_share >= self.emms
                    && self.emms >= self.mms_raw
                    && self.emms >= self.mms_self_scaled))
            && self.mms_raw >= self.mms_self_scaled
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct FairnessReport<T> {
    #[serde(with = "serde_display")]
    pub fraction: T,
    pub agents: Vec<AgentFairness<T>>,
}

impl<T: Scalar> FairnessReport<T> {
    pub fn all_pass(&self) -> bool {
        self.agents.iter().all(|a| a.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub const CSV_HEADER: [&'static str; 12] = [
        "agent",
        "emms",
        "emms_exact",
        "mms_raw",
        "mms_self_scaled",
        "average_share",
        "extended_proportional_share",
        "utility",
        "ratio",
        "fraction",
        "required",
        "pass",
    ];

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(Self::CSV_HEADER).expect("in-memory write");
        for a in &self.agents {
            writer
                .write_record([
                    a.agent.to_string(),
                    a.emms.to_string(),
                    a.emms_exact.to_string(),
                    a.mms_raw.to_string(),
                    a.mms_self_scaled.to_string(),
                    a.average_share.to_string(),
                    a.extended_proportional_share.to_string(),
                    a.utility.to_string(),
                    a.ratio.map(|r| format!("{r:.6}")).unwrap_or_default(),
                    self.fraction.to_string(),
                    a.required.to_string(),
                    a.pass.to_string(),
                ])
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
    }
}

/// Scores the allocation `assignment` of `partition` against `fraction · EMMS_i` for every agent.
pub fn check_allocation<T: Scalar>(
    instance: &Instance<T>,
    partition: &Partition,
    assignment: &[usize],
    fraction: &T,
    mode: EmmsMode,
) -> Result<FairnessReport<T>> {
    let utils = utilities(instance, partition, assignment)?;
    let cap = match mode {
        EmmsMode::Exact { cap } => cap,
        EmmsMode::LptBound => u64::MAX,
    };
    let agents = (0..instance.agents())
        .map(|i| {
            let share = emms(instance, i, mode)?;
            let maximin = mms(instance, i, cap)?;
            let utility = utils[i].clone();
            let required = fraction.clone() * share.value.clone();
            let ratio = (share.value > T::zero())
                .then(|| utility.to_f64_lossy() / share.value.to_f64_lossy());
            Ok(AgentFairness {
                agent: i,
                pass: utility >= required,
                emms: share.value,
                emms_exact: share.exact,
                mms_raw: maximin.raw,
                mms_self_scaled: maximin.self_scaled,
                average_share: average_share(instance, i),
                extended_proportional_share: extended_proportional_share(instance, i),
                utility,
                ratio,
                required,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FairnessReport { fraction: fraction.clone(), agents })
}
