//! Seeded random instances and the experiment configuration that drives them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::partitioning::DEFAULT_SEARCH_CAP;
use crate::Rational;

/// Allocation strategy compared by experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Strategy {
    BcExact,
    BcLpt,
    CutAndChoose,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::BcExact, Strategy::BcLpt, Strategy::CutAndChoose];

    pub fn label(&self) -> &'static str {
        match self {
            Strategy::BcExact => "bc-exact",
            Strategy::BcLpt => "bc-lpt",
            Strategy::CutAndChoose => "cut-and-choose",
        }
    }

    pub fn parse(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.label() == label)
    }

    /// Guaranteed fraction of EMMS for an instance whose self-weights are all at least `alpha`.
    pub fn bound(&self, alpha: &Rational) -> Rational {
        match self {
            Strategy::BcExact => alpha / Rational::from_integer(2.into()),
            Strategy::BcLpt => alpha / Rational::from_integer(4.into()),
            Strategy::CutAndChoose => Rational::from_integer(1.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub instances: usize,
    /// Inclusive range of agent counts.
    pub agents: (usize, usize),
    /// Inclusive range of item counts; each instance draws `m >= n`.
    pub items: (usize, usize),
    /// Every generated self-weight is at least `beta`.
    pub beta: Rational,
    /// Inclusive range of the integer item values.
    pub values: (u32, u32),
    /// Self-reliance used in the checked bound; `None` takes each instance's smallest self-weight.
    pub alpha: Option<Rational>,
    pub strategies: Vec<Strategy>,
    /// Limit on `n^m` for exhaustive partition search.
    pub cap: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            instances: 100,
            agents: (2, 4),
            items: (4, 7),
            beta: Rational::new(7.into(), 10.into()),
            values: (0, 20),
            alpha: None,
            strategies: vec![Strategy::BcExact],
            cap: DEFAULT_SEARCH_CAP,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadConfig(msg));
        let (n_lo, n_hi) = self.agents;
        let (m_lo, m_hi) = self.items;
        if n_lo == 0 || n_lo > n_hi {
            return bad(format!("agent range [{n_lo}, {n_hi}] is empty or starts at 0"));
        }
        if m_lo > m_hi || m_hi < n_hi {
            return bad(format!("item range [{m_lo}, {m_hi}] cannot give every instance m >= n up to {n_hi}"));
        }
        let zero = Rational::from_integer(0.into());
        let one = Rational::from_integer(1.into());
        if self.beta <= zero || self.beta > one {
            return bad(format!("beta = {} must lie in (0, 1]", self.beta));
        }
        if let Some(alpha) = &self.alpha {
            if *alpha <= zero || *alpha > one {
                return bad(format!("alpha = {alpha} must lie in (0, 1]"));
            }
        }
        if self.values.0 > self.values.1 {
            return bad(format!("value range [{}, {}] is empty", self.values.0, self.values.1));
        }
        if self.strategies.contains(&Strategy::CutAndChoose) && self.agents != (2, 2) {
            return bad("cut-and-choose needs the agent range fixed at 2".into());
        }
        let worst = (n_hi as u64).checked_pow(m_hi as u32);
        if worst.is_none_or(|w| w > self.cap) {
            return bad(format!("{n_hi}^{m_hi} partitions exceed the search cap {}", self.cap));
        }
        Ok(())
    }
}

fn ratio(n: u64, d: u64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// A network instance in which every self-weight lies in `[beta, 1]`.
///
/// The self-weight is `beta + (1 - beta)·k/100` for a uniform `k ∈ 0..=100`; the rest
/// of the column is split in proportion to uniform integer draws, so columns sum
/// to one exactly.
pub fn random_network(rng: &mut impl Rng, n: usize, m: usize, beta: &Rational, values: (u32, u32)) -> Instance<Rational> {
    let one = ratio(1, 1);
    let mut weights = vec![vec![ratio(0, 1); n]; n];
    for i in 0..n {
        let own = if n == 1 { one.clone() } else { beta + (&one - beta) * ratio(rng.gen_range(0..=100), 100) };
        let rest = &one - &own;
        let draws: Vec<u64> = (0..n).map(|j| if j == i { 0 } else { rng.gen_range(0..=100) }).collect();
        let total: u64 = draws.iter().sum();
        for j in 0..n {
            weights[j][i] = if j == i {
                own.clone()
            } else if total == 0 {
                &rest / ratio(n as u64 - 1, 1)
            } else {
                &rest * ratio(draws[j], total)
            };
        }
    }
    let values = (0..n)
        .map(|_| (0..m).map(|_| ratio(rng.gen_range(values.0..=values.1).into(), 1)).collect())
        .collect();
    Instance::network(values, weights).expect("generated columns are normalized")
}

/// A general-form instance with independent integer cross values; `V_i` is the self view.
pub fn random_general(rng: &mut impl Rng, n: usize, m: usize, values: (u32, u32)) -> Instance<Rational> {
    let cross: Vec<Vec<Vec<Rational>>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| (0..m).map(|_| ratio(rng.gen_range(values.0..=values.1).into(), 1)).collect())
                .collect()
        })
        .collect();
    let own = (0..n).map(|i| cross[i][i].clone()).collect();
    Instance::general(own, cross).expect("generated values are non-negative")
}

/// Deterministic stream of instances described by a validated config.
pub struct InstanceStream {
    rng: ChaCha8Rng,
    config: ExperimentConfig,
    left: usize,
}

impl Iterator for InstanceStream {
    type Item = Instance<Rational>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.left == 0 {
            return None;
        }
        self.left -= 1;
        let n = self.rng.gen_range(self.config.agents.0..=self.config.agents.1);
        let m = self.rng.gen_range(self.config.items.0.max(n)..=self.config.items.1);
        Some(random_network(&mut self.rng, n, m, &self.config.beta, self.config.values))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.left, Some(self.left))
    }
}

pub fn generate_random(config: &ExperimentConfig) -> Result<InstanceStream> {
    config.validate()?;
    Ok(InstanceStream {
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        config: config.clone(),
        left: config.instances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(beta: Rational) -> ExperimentConfig {
        ExperimentConfig { seed: 7, instances: 25, beta, ..ExperimentConfig::default() }
    }

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<_> = generate_random(&config(ratio(7, 10))).unwrap().collect();
        let b: Vec<_> = generate_random(&config(ratio(7, 10))).unwrap().collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 25);
    }

    #[test]
    fn self_weights_respect_beta() {
        for inst in generate_random(&config(ratio(9, 10))).unwrap() {
            assert!(inst.self_reliance().unwrap() >= ratio(9, 10));
            assert!(inst.items() >= inst.agents());
        }
    }

    #[test]
    fn beta_one_is_diagonal() {
        for inst in generate_random(&config(ratio(1, 1))).unwrap() {
            let w = inst.weights().unwrap();
            for (j, row) in w.iter().enumerate() {
                for (i, x) in row.iter().enumerate() {
                    assert_eq!(*x, ratio((i == j) as u64, 1));
                }
            }
        }
    }

    #[test]
    fn invalid_configs() {
        let base = ExperimentConfig::default();
        for bad in [
            ExperimentConfig { beta: ratio(0, 1), ..base.clone() },
            ExperimentConfig { beta: ratio(3, 2), ..base.clone() },
            ExperimentConfig { agents: (3, 2), ..base.clone() },
            ExperimentConfig { items: (2, 3), ..base.clone() },
            ExperimentConfig { values: (5, 1), ..base.clone() },
            ExperimentConfig { strategies: vec![Strategy::CutAndChoose], ..base.clone() },
            ExperimentConfig { agents: (2, 9), items: (9, 30), ..base.clone() },
        ] {
            assert!(matches!(generate_random(&bad), Err(Error::BadConfig(_))), "{bad:?}");
        }
    }

    #[test]
    fn strategy_labels_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(Strategy::parse(s.label()), Some(s));
        }
        assert_eq!(Strategy::BcLpt.bound(&ratio(1, 2)), ratio(1, 8));
    }
}
