//! Experiment sweeps: run each strategy on a seeded instance stream and record, per
//! agent, the achieved fraction of EMMS together with the runtime invariant checks.

use serde::Serialize;

use crate::claiming::{cut_and_choose, run_bc, run_bc_with_references, PartitionSource, Reference};
use crate::error::Result;
use crate::fairness::{average_share, mms, optimal_partition};
use crate::generate::{generate_random, ExperimentConfig, Strategy};
use crate::instance::Instance;
use crate::partitioning::refine_for_claiming;
use crate::Rational;

/// Bumped whenever the column set changes.
pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 16] = [
    "instance",
    "n",
    "m",
    "self_reliance",
    "agent",
    "strategy",
    "emms",
    "mms_raw",
    "mms_self_scaled",
    "average_share",
    "utility",
    "ratio",
    "bound",
    "required",
    "pass",
    "invariants",
];

/// One (instance, agent, strategy) measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub instance: usize,
    pub n: usize,
    pub m: usize,
    pub self_reliance: Rational,
    pub agent: usize,
    pub strategy: Strategy,
    pub emms: Rational,
    pub mms_raw: Rational,
    pub mms_self_scaled: Rational,
    pub average_share: Rational,
    /// `None` when the strategy failed with an error.
    pub utility: Option<Rational>,
    /// Guaranteed fraction of EMMS.
    pub bound: Rational,
    pub required: Rational,
    pub pass: bool,
    /// Trace checks (Bundle Claiming) held and the share ordering is consistent.
    pub invariants: bool,
    pub error: Option<String>,
}

impl ExperimentRow {
    /// `utility / emms` when both are defined and EMMS is positive.
    pub fn ratio(&self) -> Option<Rational> {
        let zero = Rational::from_integer(0.into());
        match &self.utility {
            Some(u) if self.emms > zero => Some(u / &self.emms),
            _ => None,
        }
    }

    fn record(&self) -> Vec<String> {
        let ratio = self.ratio().map(|r| format!("{:.6}", crate::scalar::Scalar::to_f64_lossy(&r)));
        vec![
            self.instance.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            self.self_reliance.to_string(),
            self.agent.to_string(),
            self.strategy.label().to_string(),
            self.emms.to_string(),
            self.mms_raw.to_string(),
            self.mms_self_scaled.to_string(),
            self.average_share.to_string(),
            self.utility.as_ref().map(ToString::to_string).unwrap_or_default(),
            ratio.unwrap_or_default(),
            self.bound.to_string(),
            self.required.to_string(),
            self.pass.to_string(),
            self.invariants.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategySummary {
    pub strategy: &'static str,
    pub rows: usize,
    pub violations: usize,
    pub invariant_failures: usize,
    pub min_ratio: Option<f64>,
    pub median_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
    pub summary: Vec<StrategySummary>,
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass && r.invariants)
    }

    /// Schema row `schema_version,<v>` followed by the column header and the data rows.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        writer.write_record(["schema_version", &SCHEMA_VERSION.to_string()]).expect("in-memory write");
        writer.write_record(CSV_COLUMNS).expect("in-memory write");
        for row in &self.rows {
            writer.write_record(row.record()).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn summary_text(&self) -> String {
        let fmt = |r: Option<f64>| r.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into());
        let mut out = String::new();
        for s in &self.summary {
            out.push_str(&format!(
                "{:<15} rows {:>6}  violations {:>4}  invariant failures {:>4}  min ratio {:>8}  median ratio {:>8}\n",
                s.strategy,
                s.rows,
                s.violations,
                s.invariant_failures,
                fmt(s.min_ratio),
                fmt(s.median_ratio)
            ));
        }
        out
    }
}

fn median(sorted: &[f64]) -> Option<f64> {
    match sorted.len() {
        0 => None,
        k if k % 2 == 1 => Some(sorted[k / 2]),
        k => Some((sorted[k / 2 - 1] + sorted[k / 2]) / 2.0),
    }
}

fn summarize(rows: &[ExperimentRow], strategies: &[Strategy]) -> Vec<StrategySummary> {
    strategies
        .iter()
        .map(|&s| {
            let own: Vec<&ExperimentRow> = rows.iter().filter(|r| r.strategy == s).collect();
            let ratios: Vec<Rational> = own.iter().filter_map(|r| r.ratio()).collect();
            let mut floats: Vec<f64> = ratios.iter().map(crate::scalar::Scalar::to_f64_lossy).collect();
            floats.sort_by(f64::total_cmp);
            StrategySummary {
                strategy: s.label(),
                rows: own.len(),
                violations: own.iter().filter(|r| !r.pass).count(),
                invariant_failures: own.iter().filter(|r| !r.invariants).count(),
                min_ratio: ratios.iter().min().map(crate::scalar::Scalar::to_f64_lossy),
                median_ratio: median(&floats),
            }
        })
        .collect()
}

struct AgentShares {
    emms: Rational,
    partition: crate::allocation::Partition,
    mms_raw: Rational,
    mms_self_scaled: Rational,
    average_share: Rational,
}

/// Rows for one instance, ordered by (agent, strategy).
pub fn evaluate_instance(
    index: usize,
    instance: &Instance<Rational>,
    strategies: &[Strategy],
    alpha: Option<&Rational>,
    cap: u64,
) -> Result<Vec<ExperimentRow>> {
    let n = instance.agents();
    let shares = (0..n)
        .map(|i| {
            let (partition, emms) = optimal_partition(instance, i, cap)?;
            let maximin = mms(instance, i, cap)?;
            Ok(AgentShares {
                emms,
                partition,
                mms_raw: maximin.raw,
                mms_self_scaled: maximin.self_scaled,
                average_share: average_share(instance, i),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let self_reliance = instance.self_reliance()?;
    let alpha = alpha.cloned().unwrap_or_else(|| self_reliance.clone());

    let mut results: Vec<(Strategy, Result<Vec<Rational>, String>, bool)> = Vec::new();
    for &strategy in strategies {
        let outcome = match strategy {
            Strategy::BcExact => {
                let references = (0..n)
                    .map(|i| {
                        let values = instance.values(i);
                        Reference::from_partition(&refine_for_claiming(&shares[i].partition, values), values)
                    })
                    .collect();
                run_bc_with_references(instance, references, PartitionSource::Exact { cap }.label())
                    .map(|o| (o.allocation.utilities, o.trace.all_checks_hold()))
            }
            Strategy::BcLpt => run_bc(instance, PartitionSource::Lpt)
                .map(|o| (o.allocation.utilities, o.trace.all_checks_hold())),
            Strategy::CutAndChoose => cut_and_choose(instance, cap).map(|(_, a)| (a.utilities, true)),
        };
        match outcome {
            Ok((utilities, ok)) => results.push((strategy, Ok(utilities), ok)),
            Err(e) => results.push((strategy, Err(e.to_string()), false)),
        }
    }

    let mut rows = Vec::with_capacity(n * strategies.len());
    for (i, share) in shares.iter().enumerate() {
        let consistent = share.average_share >= share.emms
            && share.emms >= share.mms_raw
            && share.mms_raw >= share.mms_self_scaled;
        for (strategy, utilities, trace_ok) in &results {
            let bound = strategy.bound(&alpha);
            let required = &bound * &share.emms;
            let utility = utilities.as_ref().ok().map(|u| u[i].clone());
            rows.push(ExperimentRow {
                instance: index,
                n,
                m: instance.items(),
                self_reliance: self_reliance.clone(),
                agent: i,
                strategy: *strategy,
                emms: share.emms.clone(),
                mms_raw: share.mms_raw.clone(),
                mms_self_scaled: share.mms_self_scaled.clone(),
                average_share: share.average_share.clone(),
                pass: utility.as_ref().is_some_and(|u| *u >= required),
                utility,
                bound,
                required,
                invariants: *trace_ok && consistent,
                error: utilities.as_ref().err().cloned(),
            });
        }
    }
    Ok(rows)
}

/// Runs every configured strategy on the generated instances. Output is a pure
/// function of the config.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut rows = Vec::new();
    for (index, instance) in generate_random(config)?.enumerate() {
        rows.extend(evaluate_instance(index, &instance, &config.strategies, config.alpha.as_ref(), config.cap)?);
    }
    let summary = summarize(&rows, &config.strategies);
    Ok(ExperimentReport { rows, summary })
}
