//! Minimum-cost perfect matching on a square cost matrix (Hungarian method with
//! potentials). Works over any [`Scalar`], so rational costs are solved exactly.

use crate::scalar::Scalar;

/// Returns `(assignment, cost)` where `assignment[row]` is the column matched to `row`.
///
/// Panics if `cost` is not square.
pub fn min_cost_assignment<T: Scalar>(cost: &[Vec<T>]) -> (Vec<usize>, T) {
    let n = cost.len();
    assert!(cost.iter().all(|row| row.len() == n), "cost matrix must be square");
    if n == 0 {
        return (Vec::new(), T::zero());
    }

    // 1-based internally; index 0 is the virtual source column.
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0usize;
        let mut min_slack: Vec<Option<T>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let row0 = owner[col0];
            let mut delta: Option<T> = None;
            let mut col1 = 0usize;
            for col in 1..=n {
                if used[col] {
                    continue;
                }
                let reduced = cost[row0 - 1][col - 1].clone() - u[row0].clone() - v[col].clone();
                if min_slack[col].as_ref().is_none_or(|s| reduced < *s) {
                    min_slack[col] = Some(reduced);
                    way[col] = col0;
                }
                let slack = min_slack[col].as_ref().expect("set above");
                if delta.as_ref().is_none_or(|d| *slack < *d) {
                    delta = Some(slack.clone());
                    col1 = col;
                }
            }
            let delta = delta.expect("an unused column remains while the row is unmatched");
            for col in 0..=n {
                if used[col] {
                    let r = owner[col];
                    u[r] = u[r].clone() + delta.clone();
                    v[col] = v[col].clone() - delta.clone();
                } else if let Some(s) = min_slack[col].as_mut() {
                    *s = s.clone() - delta.clone();
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for col in 1..=n {
        assignment[owner[col] - 1] = col - 1;
    }
    let total = assignment
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (r, &c)| acc + cost[r][c].clone());
    (assignment, total)
}

/// Minimum-cost assignment that is lexicographically smallest among all optimal ones.
///
/// Rows are fixed one at a time to the lowest column that still admits an optimal
/// completion.
pub fn min_cost_assignment_lex<T: Scalar>(cost: &[Vec<T>]) -> (Vec<usize>, T) {
    let n = cost.len();
    let mut assignment = Vec::with_capacity(n);
    let mut free_cols: Vec<usize> = (0..n).collect();
    let mut fixed = T::zero();
    for row in 0..n {
        let rest_rows: Vec<usize> = (row + 1..n).collect();
        let mut best: Option<(usize, T)> = None;
        for (pos, &col) in free_cols.iter().enumerate() {
            let cols: Vec<usize> = free_cols.iter().copied().filter(|&c| c != col).collect();
            let sub: Vec<Vec<T>> = rest_rows
                .iter()
                .map(|&r| cols.iter().map(|&c| cost[r][c].clone()).collect())
                .collect();
            let (_, rest) = min_cost_assignment(&sub);
            let total = cost[row][col].clone() + rest;
            if best.as_ref().is_none_or(|(_, b)| total < *b) {
                best = Some((pos, total));
            }
        }
        let (pos, _) = best.expect("a free column exists for every row");
        let col = free_cols.remove(pos);
        fixed = fixed + cost[row][col].clone();
        assignment.push(col);
    }
    (assignment, fixed)
}
