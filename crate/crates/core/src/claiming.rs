//! Bundle Claiming: α/2-EMMS allocations for α-self-reliant network instances
//! (α/4 when the reference partitions come from LPT), plus two-agent cut-and-choose.
//!
//! Every agent `i` carries a reference partition `O_i`, sorted by non-increasing
//! value `v_{i,0} >= v_{i,1} >= …`, and an expectation level `ℓ_i` (0-based here).
//! Each round, the smallest item set worth at least `v_{i,ℓ_i}/2` to some remaining
//! agent is handed out. Every remaining agent then files the newly satisfied agent
//! under `Free` in its mapping and re-establishes
//!
//! * (i)/(ii): for every claimed slot `t < ℓ_i`, the agents mapped to slot `t`
//!   hold value in `[v_{i,t}/2, v_{i,t}]`;
//! * (iii): agents mapped to `Free` hold value below `v_{i,ℓ_i}/2`.
//!
//! Indices (agents, items, slots, levels) are 0-based throughout.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::allocation::{sorted_weighted_sum, utilities_unchecked, Allocation, Partition};
use crate::error::{Error, Result};
use crate::fairness::optimal_partition;
use crate::instance::Instance;
use crate::partitioning::{lpt_partition, optimal_partition_exact, refine_for_claiming, ObjectiveVector};
use crate::scalar::{self, Scalar};
use crate::serde_display;

/// Where an agent's reference partition comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionSource {
    /// Exhaustive optimum (the agent's EMMS partition), within a search cap on `n^m`.
    Exact { cap: u64 },
    /// Greedy LPT partition; polynomial time, halves the guarantee.
    Lpt,
}

impl PartitionSource {
    pub fn label(&self) -> &'static str {
        match self {
            PartitionSource::Exact { .. } => "exact",
            PartitionSource::Lpt => "lpt",
        }
    }
}

/// An agent's reference partition sorted by its own non-increasing bundle values.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Reference<T> {
    pub bundles: Vec<Vec<usize>>,
    #[serde(with = "serde_display::vec")]
    pub values: Vec<T>,
}

impl<T: Scalar> Reference<T> {
    pub fn from_partition(partition: &Partition, item_values: &[T]) -> Self {
        let sorted = partition.sorted_for(item_values);
        let values = sorted.values(item_values);
        Self { bundles: sorted.into_bundles(), values }
    }

    /// Builds the reference used by [`run_bc`] for `agent`: the source partition,
    /// refined by [`refine_for_claiming`].
    pub fn for_agent(instance: &Instance<T>, agent: usize, source: PartitionSource) -> Result<Self> {
        let values = instance.values(agent);
        let n = instance.agents();
        let raw = match source {
            PartitionSource::Exact { cap } => {
                let x = ObjectiveVector::new(instance.influence_vector(agent)?.into_entries())?;
                optimal_partition_exact(values, &x, cap)?.0
            }
            PartitionSource::Lpt => {
                instance.weights()?;
                lpt_partition(values, n)
            }
        };
        Ok(Self::from_partition(&refine_for_claiming(&raw, values), values))
    }
}

/// Where a satisfied agent is filed in another agent's mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    Bundle(usize),
    Free,
}

#[derive(Debug, Clone, PartialEq)]
struct AgentClaims<T> {
    reference: Reference<T>,
    level: usize,
    mapping: BTreeMap<usize, Slot>,
}

/// Mutable state of one Bundle Claiming run.
#[derive(Debug, Clone)]
pub struct ClaimState<'a, T> {
    instance: &'a Instance<T>,
    remaining_items: Vec<bool>,
    bundles: Vec<Option<Vec<usize>>>,
    satisfied: Vec<usize>,
    claims: Vec<AgentClaims<T>>,
    swaps: usize,
}

/// What one `update_mapping` iteration did.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UpdateEvent {
    /// A compatible set of free agents was mapped to slot `level`, which became claimed.
    Claimed { observer: usize, level: usize, agents: Vec<usize> },
    /// No compatible set existed: the lone oversized agent moved to the singleton slot
    /// holding its item, and the slot's previous agents became free.
    Swapped { observer: usize, agent: usize, item: usize, slot: usize, evicted: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct SlotCheck<T> {
    pub slot: usize,
    pub agents: Vec<usize>,
    #[serde(with = "serde_display")]
    pub value: T,
    #[serde(with = "serde_display")]
    pub reference: T,
    /// (i): value >= reference / 2
    pub lower_holds: bool,
    /// (ii): value <= reference
    pub upper_holds: bool,
}

/// Every runtime condition of the external-satisfaction property for one remaining agent.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct SatisfactionReport<T> {
    pub agent: usize,
    pub level: usize,
    pub level_within_bound: bool,
    pub slots: Vec<SlotCheck<T>>,
    pub free_agents: Vec<usize>,
    #[serde(with = "serde_display")]
    pub free_value: T,
    #[serde(with = "serde_display")]
    pub free_limit: T,
    /// (iii): free_value < free_limit, or the expectation is zero.
    pub free_holds: bool,
    #[serde(with = "serde_display")]
    pub external: T,
    #[serde(with = "serde_display")]
    pub external_bound: T,
    pub external_holds: bool,
    #[serde(with = "serde_display")]
    pub remaining_value: T,
    pub feasible: bool,
}

impl<T: Scalar> SatisfactionReport<T> {
    pub fn holds(&self) -> bool {
        self.level_within_bound
            && self.slots.iter().all(|s| s.lower_holds && s.upper_holds)
            && self.free_holds
            && self.external_holds
            && self.feasible
    }

    /// Names of the failing conditions.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.level_within_bound {
            out.push(format!("level {} out of range", self.level));
        }
        for s in &self.slots {
            if !s.lower_holds {
                out.push(format!("(i) slot {}: {} < {}/2", s.slot, s.value, s.reference));
            }
            if !s.upper_holds {
                out.push(format!("(ii) slot {}: {} > {}", s.slot, s.value, s.reference));
            }
        }
        if !self.free_holds {
            out.push(format!("(iii) free value {} >= {}", self.free_value, self.free_limit));
        }
        if !self.external_holds {
            out.push(format!("external {} < {}", self.external, self.external_bound));
        }
        if !self.feasible {
            out.push(format!("remaining value {} < {}", self.remaining_value, self.free_limit));
        }
        out
    }
}

impl<'a, T: Scalar> ClaimState<'a, T> {
    /// Fresh state: nothing allocated, every agent at level 0.
    pub fn new(instance: &'a Instance<T>, references: Vec<Reference<T>>) -> Result<Self> {
        instance.weights()?;
        let n = instance.agents();
        if references.len() != n || references.iter().any(|r| r.values.len() != n) {
            return Err(Error::DimensionMismatch(format!("need {n} references of {n} bundles")));
        }
        Ok(Self {
            instance,
            remaining_items: vec![true; instance.items()],
            bundles: vec![None; n],
            satisfied: Vec::new(),
            claims: references
                .into_iter()
                .map(|reference| AgentClaims { reference, level: 0, mapping: BTreeMap::new() })
                .collect(),
            swaps: 0,
        })
    }

    pub fn is_remaining(&self, agent: usize) -> bool {
        self.bundles[agent].is_none()
    }

    pub fn remaining_agents(&self) -> Vec<usize> {
        (0..self.instance.agents()).filter(|&a| self.is_remaining(a)).collect()
    }

    pub fn remaining_items(&self) -> Vec<usize> {
        (0..self.instance.items()).filter(|&b| self.remaining_items[b]).collect()
    }

    pub fn satisfied(&self) -> &[usize] {
        &self.satisfied
    }

    pub fn bundle(&self, agent: usize) -> Option<&[usize]> {
        self.bundles[agent].as_deref()
    }

    pub fn level(&self, agent: usize) -> usize {
        self.claims[agent].level
    }

    pub fn reference(&self, agent: usize) -> &Reference<T> {
        &self.claims[agent].reference
    }

    pub fn mapping(&self, agent: usize) -> &BTreeMap<usize, Slot> {
        &self.claims[agent].mapping
    }

    /// Number of swap repairs performed so far (each one checked the singleton property).
    pub fn swaps(&self) -> usize {
        self.swaps
    }

    /// Satisfied agents filed under `slot` in `observer`'s mapping.
    pub fn members(&self, observer: usize, slot: Slot) -> Vec<usize> {
        self.claims[observer]
            .mapping
            .iter()
            .filter(|(_, &s)| s == slot)
            .map(|(&k, _)| k)
            .collect()
    }

    /// `observer`'s own value for the bundles held by `agents`.
    fn held_value(&self, observer: usize, agents: &[usize]) -> T {
        let values = self.instance.values(observer);
        agents.iter().fold(T::zero(), |acc, &k| {
            let bundle = self.bundles[k].as_deref().unwrap_or(&[]);
            acc + scalar::sum(bundle.iter().map(|&b| &values[b]))
        })
    }

    /// Gives `items` to `agent` and files it as `Free` for every remaining agent.
    /// Mappings are not repaired; see [`ClaimState::update_mapping`].
    pub fn allocate(&mut self, agent: usize, items: Vec<usize>) -> Result<()> {
        if !self.is_remaining(agent) {
            return Err(Error::InvariantBroken(format!("agent {agent} is already satisfied")));
        }
        for &b in &items {
            if !std::mem::replace(&mut self.remaining_items[b], false) {
                return Err(Error::InvariantBroken(format!("item {b} is not available")));
            }
        }
        self.bundles[agent] = Some(items);
        self.satisfied.push(agent);
        for j in 0..self.instance.agents() {
            if self.is_remaining(j) {
                self.claims[j].mapping.insert(agent, Slot::Free);
            }
        }
        Ok(())
    }

    /// Overrides a mapping entry; for building states by hand.
    pub fn assign_slot(&mut self, observer: usize, agent: usize, slot: Slot) {
        self.claims[observer].mapping.insert(agent, slot);
    }

    /// Overrides an expectation level; for building states by hand.
    pub fn set_level(&mut self, agent: usize, level: usize) {
        self.claims[agent].level = level;
    }

    /// Restores condition (iii) for `observer`, raising its expectation level as needed.
    ///
    /// A no-op when (iii) already holds.
    pub fn update_mapping(&mut self, observer: usize) -> Result<Vec<UpdateEvent>> {
        let n = self.instance.agents();
        let mut events = Vec::new();
        // each claim raises the level, each swap fixes one more slot to its singleton
        let limit = (n + 1) * (n + 1) + 1;
        for _ in 0..limit {
            let level = self.claims[observer].level;
            let target = self.claims[observer].reference.values[level].clone();
            let free = self.members(observer, Slot::Free);
            let free_values: Vec<T> = free.iter().map(|&k| self.held_value(observer, &[k])).collect();
            if target == T::zero() || scalar::sum(&free_values) < target.half() {
                return Ok(events);
            }
            if let Some(chosen) = compatible_subset(&free_values, &target) {
                let agents: Vec<usize> = chosen.iter().map(|&p| free[p]).collect();
                for &k in &agents {
                    self.claims[observer].mapping.insert(k, Slot::Bundle(level));
                }
                if level + 1 >= n {
                    return Err(Error::InvariantBroken(format!(
                        "expectation level of agent {observer} would exceed n"
                    )));
                }
                self.claims[observer].level = level + 1;
                events.push(UpdateEvent::Claimed { observer, level, agents });
                continue;
            }

            // The minimum subset reaching half the target is a single oversized agent
            // holding a single item.
            let delta = min_expectation_bundle(&free_values, &(0..free.len()).collect::<Vec<_>>(), &target.half())
                .ok_or_else(|| Error::InvariantBroken("free agents cannot reach half the target".into()))?;
            if delta.len() != 1 {
                return Err(Error::InvariantBroken(format!(
                    "agent {observer}: no compatible set but minimal covering set has {} agents",
                    delta.len()
                )));
            }
            let agent = free[delta[0]];
            let held = self.bundles[agent].as_deref().unwrap_or(&[]);
            if held.len() != 1 {
                return Err(Error::InvariantBroken(format!(
                    "agent {observer}: oversized agent {agent} holds {} items, expected exactly one",
                    held.len()
                )));
            }
            let item = held[0];
            let slot = self.claims[observer]
                .reference
                .bundles
                .iter()
                .position(|bundle| bundle.as_slice() == [item])
                .filter(|&t| t < level)
                .ok_or_else(|| {
                    Error::InvariantBroken(format!(
                        "agent {observer}: no claimed singleton slot holds item {item}"
                    ))
                })?;
            let evicted = self.members(observer, Slot::Bundle(slot));
            for &e in &evicted {
                self.claims[observer].mapping.insert(e, Slot::Free);
            }
            self.claims[observer].mapping.insert(agent, Slot::Bundle(slot));
            self.swaps += 1;
            events.push(UpdateEvent::Swapped { observer, agent, item, slot, evicted });
        }
        Err(Error::InvariantBroken(format!("mapping update for agent {observer} did not settle")))
    }

    /// Validity (i)–(iii) of the mapping, the externality lower bound
    /// `Σ_{k ∈ S} w_{k,i} V_i(B_k) >= Σ_{t < ℓ_i} x_{i,t} v_{i,t} / 2`, `ℓ_i < n`, and
    /// that the remaining items can still meet the agent's expectation.
    pub fn check_external_satisfaction(&self, agent: usize) -> Result<SatisfactionReport<T>> {
        let n = self.instance.agents();
        let claims = &self.claims[agent];
        let level = claims.level;
        let level_within_bound = level < n;
        let reference = &claims.reference.values;

        let slots = (0..level.min(n))
            .map(|t| {
                let agents = self.members(agent, Slot::Bundle(t));
                let value = self.held_value(agent, &agents);
                SlotCheck {
                    slot: t,
                    lower_holds: value >= reference[t].half(),
                    upper_holds: value <= reference[t],
                    agents,
                    value,
                    reference: reference[t].clone(),
                }
            })
            .collect();

        let free_agents = self.members(agent, Slot::Free);
        let free_value = self.held_value(agent, &free_agents);
        let target = reference.get(level).cloned().unwrap_or_else(T::zero);
        let free_limit = target.half();
        let free_holds = target == T::zero() || free_value < free_limit;

        let x = self.instance.influence_vector(agent)?;
        let external = self.satisfied.iter().fold(T::zero(), |acc, &k| {
            acc + self.instance.bundle_value(k, agent, self.bundles[k].as_deref().unwrap_or(&[]))
        });
        let external_bound = x.entries()[..level.min(n)]
            .iter()
            .zip(reference)
            .fold(T::zero(), |acc, (w, v)| acc + w.clone() * v.clone())
            .half();

        let remaining_value = scalar::sum(self.remaining_items().iter().map(|&b| &self.instance.values(agent)[b]));
        Ok(SatisfactionReport {
            agent,
            level,
            level_within_bound,
            slots,
            free_agents,
            free_holds,
            free_value,
            free_limit: free_limit.clone(),
            external_holds: external >= external_bound,
            external,
            external_bound,
            feasible: remaining_value >= free_limit,
            remaining_value,
        })
    }

    /// The expectation `v_{i,ℓ_i}/2` of a remaining agent.
    pub fn expectation(&self, agent: usize) -> T {
        let claims = &self.claims[agent];
        claims.reference.values[claims.level].half()
    }
}

/// Smallest-cardinality subset of `available` worth at least `threshold`, built
/// greedily from the most valuable items (ties: lower index). `None` if even all
/// of `available` falls short.
pub fn min_expectation_bundle<T: Scalar>(
    item_values: &[T],
    available: &[usize],
    threshold: &T,
) -> Option<Vec<usize>> {
    let mut order = available.to_vec();
    order.sort_by(|&a, &b| scalar::cmp(&item_values[b], &item_values[a]).then(a.cmp(&b)));
    let mut chosen = Vec::new();
    let mut total = T::zero();
    for b in order {
        if total >= *threshold {
            break;
        }
        total = total + item_values[b].clone();
        chosen.push(b);
    }
    (total >= *threshold).then_some(chosen)
}

/// Minimum-cardinality set of positions whose values sum into `[target/2, target]`.
/// Among sets of equal size the lexicographically first (by position) wins.
pub fn compatible_subset<T: Scalar>(values: &[T], target: &T) -> Option<Vec<usize>> {
    let low = target.half();
    let k = values.len();
    for size in 0..=k {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let total = scalar::sum(combo.iter().map(|&p| &values[p]));
            if total >= low && total <= *target {
                return Some(combo);
            }
            if !next_combination(&mut combo, k) {
                break;
            }
        }
    }
    None
}

fn next_combination(combo: &mut [usize], k: usize) -> bool {
    let size = combo.len();
    for i in (0..size).rev() {
        if combo[i] < k - size + i {
            combo[i] += 1;
            for j in i + 1..size {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// One candidate bundle per remaining agent, as considered in a round.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Candidate<T> {
    pub agent: usize,
    pub level: usize,
    #[serde(with = "serde_display")]
    pub expectation: T,
    pub bundle: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentSnapshot {
    pub agent: usize,
    pub level: usize,
    pub mapping: BTreeMap<usize, Slot>,
    pub free: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Step<T> {
    pub step: usize,
    pub candidates: Vec<Candidate<T>>,
    pub chosen: usize,
    pub allocated: Vec<usize>,
    /// Items left over after the last agent was served; appended to its bundle.
    pub leftovers: Vec<usize>,
    pub updates: Vec<UpdateEvent>,
    pub snapshots: Vec<AgentSnapshot>,
    pub checks: Vec<SatisfactionReport<T>>,
}

/// Final per-agent guarantee `U_i >= (w_{i,i}/2) · Σ_t x_{i,t} v_{i,t}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct GuaranteeCheck<T> {
    pub agent: usize,
    #[serde(with = "serde_display")]
    pub utility: T,
    /// Worst-case value of the agent's reference partition.
    #[serde(with = "serde_display")]
    pub reference_value: T,
    #[serde(with = "serde_display")]
    pub bound: T,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Trace<T> {
    pub source: String,
    pub references: Vec<Reference<T>>,
    pub steps: Vec<Step<T>>,
    /// Times the no-compatible-set branch ran and its singleton property was confirmed.
    pub swaps: usize,
    pub guarantees: Vec<GuaranteeCheck<T>>,
}

impl<T: Scalar> Trace<T> {
    /// Every invariant recorded in the trace held.
    pub fn all_checks_hold(&self) -> bool {
        self.steps.iter().all(|s| s.checks.iter().all(SatisfactionReport::holds))
            && self.guarantees.iter().all(|g| g.holds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

/// Outcome of a Bundle Claiming run.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimOutcome<T> {
    /// `bundles[i]` is agent `i`'s bundle.
    pub partition: Partition,
    pub allocation: Allocation<T>,
    pub trace: Trace<T>,
}

/// Runs Bundle Claiming with reference partitions from `source`.
///
/// Every runtime invariant is checked after every round; a failure is reported as
/// [`Error::InvariantBroken`] since it indicates a defect, not a bad input.
pub fn run_bc<T: Scalar>(instance: &Instance<T>, source: PartitionSource) -> Result<ClaimOutcome<T>> {
    instance.weights()?;
    let references = (0..instance.agents())
        .map(|i| Reference::for_agent(instance, i, source))
        .collect::<Result<Vec<_>>>()?;
    run_bc_with_references(instance, references, source.label())
}

/// [`run_bc`] with caller-supplied reference partitions.
pub fn run_bc_with_references<T: Scalar>(
    instance: &Instance<T>,
    references: Vec<Reference<T>>,
    source_label: &str,
) -> Result<ClaimOutcome<T>> {
    let n = instance.agents();
    let mut state = ClaimState::new(instance, references.clone())?;
    let mut steps = Vec::with_capacity(n);

    for step in 0..n {
        let available = state.remaining_items();
        let candidates: Vec<Candidate<T>> = state
            .remaining_agents()
            .into_iter()
            .map(|agent| {
                let expectation = state.expectation(agent);
                Candidate {
                    agent,
                    level: state.level(agent),
                    bundle: min_expectation_bundle(instance.values(agent), &available, &expectation),
                    expectation,
                }
            })
            .collect();
        let chosen = candidates
            .iter()
            .filter_map(|c| c.bundle.as_ref().map(|b| (b.len(), c.agent, b.clone())))
            .min_by_key(|(size, agent, _)| (*size, *agent));
        let Some((_, agent, bundle)) = chosen else {
            return Err(Error::InvariantBroken(format!(
                "round {step}: no remaining agent can be satisfied"
            )));
        };
        state.allocate(agent, bundle.clone())?;

        let mut leftovers = Vec::new();
        if state.remaining_agents().is_empty() {
            leftovers = state.remaining_items();
            for &b in &leftovers {
                state.remaining_items[b] = false;
            }
            state.bundles[agent].as_mut().expect("just allocated").extend(leftovers.iter().copied());
        }

        let mut updates = Vec::new();
        for j in state.remaining_agents() {
            updates.extend(state.update_mapping(j)?);
        }

        let mut checks = Vec::new();
        let mut snapshots = Vec::new();
        for j in state.remaining_agents() {
            let report = state.check_external_satisfaction(j)?;
            if !report.holds() {
                return Err(Error::InvariantBroken(format!(
                    "round {step}, agent {j}: {}",
                    report.failures().join("; ")
                )));
            }
            checks.push(report);
            snapshots.push(AgentSnapshot {
                agent: j,
                level: state.level(j),
                mapping: state.mapping(j).clone(),
                free: state.members(j, Slot::Free),
            });
        }

        steps.push(Step {
            step,
            candidates,
            chosen: agent,
            allocated: bundle,
            leftovers,
            updates,
            snapshots,
            checks,
        });
    }

    let bundles: Vec<Vec<usize>> = state
        .bundles
        .iter()
        .map(|b| b.clone().expect("every agent served"))
        .collect();
    let partition = Partition::new(bundles, instance.items())?;
    let assignment: Vec<usize> = (0..n).collect();
    let utilities = utilities_unchecked(instance, &partition, &assignment);

    let mut guarantees = Vec::with_capacity(n);
    for (i, utility) in utilities.iter().enumerate() {
        let x = instance.influence_vector(i)?;
        let reference_value = sorted_weighted_sum(x.entries(), &references[i].values);
        let bound = instance.self_weight(i)?.clone() * reference_value.clone().half();
        guarantees.push(GuaranteeCheck {
            agent: i,
            utility: utility.clone(),
            holds: *utility >= bound,
            reference_value,
            bound,
        });
    }
    if let Some(g) = guarantees.iter().find(|g| !g.holds) {
        return Err(Error::InvariantBroken(format!(
            "agent {} receives {} below its guaranteed {}",
            g.agent, g.utility, g.bound
        )));
    }

    Ok(ClaimOutcome {
        partition,
        allocation: Allocation { assignment, utilities },
        trace: Trace {
            source: source_label.to_string(),
            references,
            steps,
            swaps: state.swaps,
            guarantees,
        },
    })
}

/// Two-agent cut-and-choose: agent 0 cuts its optimal partition, agent 1 picks the
/// assignment it prefers (ties: identity). Both get at least their EMMS.
pub fn cut_and_choose<T: Scalar>(instance: &Instance<T>, cap: u64) -> Result<(Partition, Allocation<T>)> {
    if instance.agents() != 2 {
        return Err(Error::WrongAgentCount(instance.agents()));
    }
    let (cut, _) = optimal_partition(instance, 0, cap)?;
    let identity = utilities_unchecked(instance, &cut, &[0, 1]);
    let swapped = utilities_unchecked(instance, &cut, &[1, 0]);
    let allocation = if swapped[1] > identity[1] {
        Allocation { assignment: vec![1, 0], utilities: swapped }
    } else {
        Allocation { assignment: vec![0, 1], utilities: identity }
    };
    Ok((cut, allocation))
}
