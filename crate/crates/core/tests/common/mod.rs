//! Brute-force oracles shared by the integration tests. They read raw instance data
//! only and never call the library's search, matching or closed-form code.
#![allow(dead_code)]

use emms_core::instance::Externality;
use emms_core::{Instance, Rational};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| q(x, 1)).collect()
}

/// What `observer` gains from item `b` in the hands of `giver`, straight from the raw data.
pub fn item_gain(inst: &Instance<Rational>, giver: usize, observer: usize, b: usize) -> Rational {
    match inst.externality() {
        Externality::Network { weights } => &weights[giver][observer] * &inst.value_matrix()[observer][b],
        Externality::General { cross_values } => cross_values[giver][observer][b].clone(),
    }
}

/// Calls `f` with every map item → bundle label in `0..n` (`n^m` of them).
pub fn for_each_labeling(n: usize, m: usize, mut f: impl FnMut(&[usize])) {
    let mut labels = vec![0usize; m];
    loop {
        f(&labels);
        let mut k = 0;
        loop {
            if k == m {
                return;
            }
            labels[k] += 1;
            if labels[k] < n {
                break;
            }
            labels[k] = 0;
            k += 1;
        }
    }
}

pub fn bundles_of(labels: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut bundles = vec![Vec::new(); n];
    for (b, &l) in labels.iter().enumerate() {
        bundles[l].push(b);
    }
    bundles
}

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                go(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `U_agent` when bundle `k` goes to agent `owner[k]`.
pub fn utility(inst: &Instance<Rational>, bundles: &[Vec<usize>], owner: &[usize], agent: usize) -> Rational {
    let mut total = Rational::zero();
    for (k, bundle) in bundles.iter().enumerate() {
        for &b in bundle {
            total += item_gain(inst, owner[k], agent, b);
        }
    }
    total
}

/// Minimum over all `n!` assignments.
pub fn worst_by_enumeration(inst: &Instance<Rational>, bundles: &[Vec<usize>], agent: usize) -> Rational {
    permutations(bundles.len())
        .iter()
        .map(|p| utility(inst, bundles, p, agent))
        .min()
        .expect("n >= 1")
}

/// EMMS by enumerating every labelled partition and every assignment.
pub fn emms_by_enumeration(inst: &Instance<Rational>, agent: usize) -> Rational {
    let n = inst.agents();
    let mut best: Option<Rational> = None;
    for_each_labeling(n, inst.items(), |labels| {
        let w = worst_by_enumeration(inst, &bundles_of(labels, n), agent);
        if best.as_ref().is_none_or(|b| w > *b) {
            best = Some(w);
        }
    });
    best.expect("at least one labelling")
}

/// Max over labelled partitions of the least bundle sum.
pub fn maximin_by_enumeration(values: &[Rational], n: usize) -> Rational {
    let mut best: Option<Rational> = None;
    for_each_labeling(n, values.len(), |labels| {
        let mut sums = vec![Rational::zero(); n];
        for (b, &l) in labels.iter().enumerate() {
            sums[l] += &values[b];
        }
        let low = sums.into_iter().min().expect("n >= 1");
        if best.as_ref().is_none_or(|b| low > *b) {
            best = Some(low);
        }
    });
    best.expect("at least one labelling")
}

/// Integer-scaled EMMS oracle for network instances with integer values.
///
/// Enumerates all `n^m` labelled partitions. The worst case of each partition pairs
/// the smallest incoming weights with the largest bundles; the pairing itself is
/// cross-checked against full enumeration in the acceptance suite.
pub struct NetworkOracle {
    /// Incoming weights of the agent, scaled to integers and sorted ascending.
    scaled: Vec<i128>,
    denominator: BigInt,
    values: Vec<i128>,
    n: usize,
}

impl NetworkOracle {
    pub fn new(inst: &Instance<Rational>, agent: usize) -> Self {
        let Externality::Network { weights } = inst.externality() else {
            panic!("network instance expected");
        };
        let n = inst.agents();
        let mut denominator = BigInt::one();
        for row in weights {
            let d = row[agent].denom();
            denominator = num_integer::Integer::lcm(&denominator, d);
        }
        let mut scaled: Vec<i128> = weights
            .iter()
            .map(|row| {
                let x = &row[agent] * Rational::from_integer(denominator.clone());
                assert!(x.is_integer());
                x.to_integer().to_i128().expect("scaled weight fits")
            })
            .collect();
        scaled.sort_unstable();
        let values = inst.value_matrix()[agent]
            .iter()
            .map(|v| {
                assert!(v.is_integer(), "integer values expected");
                v.to_integer().to_i128().expect("value fits")
            })
            .collect();
        Self { scaled, denominator, values, n }
    }

    fn scaled_worst(&self, sums: &mut [i128]) -> i128 {
        sums.sort_unstable_by(|a, b| b.cmp(a));
        self.scaled.iter().zip(sums.iter()).map(|(x, v)| x * v).sum()
    }

    fn to_rational(&self, scaled: i128) -> Rational {
        Rational::new(BigInt::from(scaled), self.denominator.clone())
    }

    /// Worst-case utility of a given partition.
    pub fn worst(&self, bundles: &[Vec<usize>]) -> Rational {
        let mut sums: Vec<i128> = bundles.iter().map(|b| b.iter().map(|&i| self.values[i]).sum()).collect();
        self.to_rational(self.scaled_worst(&mut sums))
    }

    pub fn emms(&self) -> Rational {
        let mut best = i128::MIN;
        let mut sums = vec![0i128; self.n];
        for_each_labeling(self.n, self.values.len(), |labels| {
            sums.iter_mut().for_each(|s| *s = 0);
            for (b, &l) in labels.iter().enumerate() {
                sums[l] += self.values[b];
            }
            best = best.max(self.scaled_worst(&mut sums));
        });
        self.to_rational(best)
    }

    /// Raw maximin share.
    pub fn mms(&self) -> Rational {
        let mut best = i128::MIN;
        let mut sums = vec![0i128; self.n];
        for_each_labeling(self.n, self.values.len(), |labels| {
            sums.iter_mut().for_each(|s| *s = 0);
            for (b, &l) in labels.iter().enumerate() {
                sums[l] += self.values[b];
            }
            best = best.max(*sums.iter().min().expect("n >= 1"));
        });
        Rational::from_integer(BigInt::from(best))
    }
}

/// No item sits in a bundle worth more than itself while being worth more than the
/// least valuable bundle.
pub fn is_nice_oracle(bundles: &[Vec<usize>], values: &[Rational]) -> bool {
    let sums: Vec<Rational> = bundles.iter().map(|b| b.iter().map(|&i| values[i].clone()).sum()).collect();
    let floor = sums.iter().min().expect("n >= 1").clone();
    bundles.iter().zip(&sums).all(|(bundle, sum)| bundle.iter().all(|&b| !(*sum > values[b] && values[b] > floor)))
}

/// Network instance strategy: `n` agents, `m` items, integer values, column weights
/// proportional to integer draws with a positive self-draw.
pub fn network_instance(
    agents: std::ops::RangeInclusive<usize>,
    items: std::ops::RangeInclusive<usize>,
    max_value: i64,
) -> impl Strategy<Value = Instance<Rational>> {
    (agents, items).prop_flat_map(move |(n, m)| {
        (
            prop::collection::vec(prop::collection::vec(0..=max_value, m), n),
            prop::collection::vec(prop::collection::vec(0i64..=5, n), n),
            prop::collection::vec(1i64..=20, n),
        )
            .prop_map(move |(values, draws, own)| {
                let mut weights = vec![vec![Rational::zero(); n]; n];
                for i in 0..n {
                    let column: Vec<i64> = (0..n).map(|j| if j == i { own[i] } else { draws[j][i] }).collect();
                    let total: i64 = column.iter().sum();
                    for j in 0..n {
                        weights[j][i] = q(column[j], total);
                    }
                }
                Instance::network(values.iter().map(|r| ints(r)).collect(), weights).expect("valid")
            })
    })
}

pub fn general_instance(
    agents: std::ops::RangeInclusive<usize>,
    items: std::ops::RangeInclusive<usize>,
    max_value: i64,
) -> impl Strategy<Value = Instance<Rational>> {
    (agents, items).prop_flat_map(move |(n, m)| {
        prop::collection::vec(prop::collection::vec(prop::collection::vec(0..=max_value, m), n), n).prop_map(
            move |cross| {
                let cross: Vec<Vec<Vec<Rational>>> =
                    cross.iter().map(|g| g.iter().map(|r| ints(r)).collect()).collect();
                let own = (0..n).map(|i| cross[i][i].clone()).collect();
                Instance::general(own, cross).expect("valid")
            },
        )
    })
}

/// A random labelled partition of `m` items into `n` bundles.
pub fn labels(n: usize, m: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..n, m)
}
