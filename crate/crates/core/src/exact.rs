//! Exact minimization of total completion time.
//!
//! Both solvers search over canonical schedules only, which is lossless:
//! deferring maintenance never delays a completion, so some optimal
//! schedule is canonical. In a canonical schedule the completion time of
//! the job at position `i` is `P_i + max(0, D_i - ml0)` where `P_i` and
//! `D_i` are prefix sums of processing time and wear — it depends on the
//! *set* of earlier jobs, not their arrangement. The brute force
//! enumerates permutations with that formula; the subset DP exploits it
//! directly.

use crate::model::{canonical_schedule, evaluate, Instance, ModelError, Schedule};

/// Default size cap for [`solve_brute_force`].
pub const BRUTE_FORCE_DEFAULT_LIMIT: usize = 10;

/// Size cap for [`solve_subset_dp`]; the state space is `2^n`.
pub const SUBSET_DP_LIMIT: usize = 24;

/// An optimal order with its total and a measure of search effort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub best_order: Vec<usize>,
    pub best_total: u64,
    /// Search nodes expanded (brute force) or transitions relaxed (DP).
    pub explored: u64,
}

impl ExactResult {
    /// Canonical schedule realizing `best_total`.
    pub fn schedule(&self, instance: &Instance) -> Result<Schedule, ModelError> {
        canonical_schedule(instance, &self.best_order)
    }
}

/// Errors raised by the exact solvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    /// The instance exceeds the solver's size cap.
    TooLarge {
        n: usize,
        limit: usize,
    },
    Model(ModelError),
}

impl std::fmt::Display for ExactError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExactError::TooLarge { n, limit } => {
                write!(
                    f,
                    "instance with {} jobs exceeds the solver limit of {}",
                    n, limit
                )
            }
            ExactError::Model(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for ExactError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            ExactError::Model(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ModelError> for ExactError {
    fn from(e: ModelError) -> Self {
        ExactError::Model(e)
    }
}

struct BruteForce<'a> {
    instance: &'a Instance,
    prefix: Vec<usize>,
    used: Vec<bool>,
    best_order: Vec<usize>,
    best_total: u64,
    explored: u64,
}

impl BruteForce<'_> {
    /// Depth-first over permutations in lexicographic order, abandoning
    /// any prefix whose partial total already exceeds the incumbent.
    /// Scanning lexicographically and replacing the incumbent only on
    /// strict improvement makes ties resolve to the lexicographically
    /// smallest optimal order.
    fn dfs(&mut self, p_sum: u64, wear: u64, partial: u64) -> Result<(), ModelError> {
        let n = self.instance.n();
        if self.prefix.len() == n {
            if partial < self.best_total {
                self.best_total = partial;
                self.best_order = self.prefix.clone();
            }
            return Ok(());
        }
        for j in 0..n {
            if self.used[j] {
                continue;
            }
            self.explored += 1;
            let job = &self.instance.jobs[j];
            let p_sum = p_sum
                .checked_add(job.p)
                .ok_or(ModelError::ArithmeticOverflow)?;
            let wear = wear
                .checked_add(job.delta)
                .ok_or(ModelError::ArithmeticOverflow)?;
            let c = p_sum
                .checked_add(wear.saturating_sub(self.instance.ml0))
                .ok_or(ModelError::ArithmeticOverflow)?;
            let partial = partial
                .checked_add(c)
                .ok_or(ModelError::ArithmeticOverflow)?;
            if partial > self.best_total {
                continue;
            }
            self.used[j] = true;
            self.prefix.push(j);
            self.dfs(p_sum, wear, partial)?;
            self.prefix.pop();
            self.used[j] = false;
        }
        Ok(())
    }
}

/// Enumerates all `n!` orders, pruning on partial totals.
///
/// Ties break to the lexicographically smallest order. `limit_n` guards
/// against accidental factorial blow-ups; pass
/// [`BRUTE_FORCE_DEFAULT_LIMIT`] unless a larger instance is intended.
pub fn solve_brute_force(instance: &Instance, limit_n: usize) -> Result<ExactResult, ExactError> {
    let n = instance.n();
    if n > limit_n {
        return Err(ExactError::TooLarge { n, limit: limit_n });
    }
    instance.validate()?;
    instance.check_feasible()?;

    let mut search = BruteForce {
        instance,
        prefix: Vec::with_capacity(n),
        used: vec![false; n],
        best_order: Vec::new(),
        best_total: u64::MAX,
        explored: 0,
    };
    search.dfs(0, 0, 0)?;
    if n == 0 {
        search.best_total = 0;
    }
    Ok(ExactResult {
        best_order: search.best_order,
        best_total: search.best_total,
        explored: search.explored,
    })
}

/// Optimal total via dynamic programming over job subsets.
///
/// `dp[S]` is the cheapest total of the jobs in `S` scheduled as a
/// prefix; appending `j` costs `P(S) + p[j] + max(0, D(S) + delta[j] -
/// ml0)`. Runs in `O(2^n * n)` time and agrees with
/// [`solve_brute_force`] wherever both apply.
pub fn solve_subset_dp(instance: &Instance) -> Result<ExactResult, ExactError> {
    let n = instance.n();
    if n > SUBSET_DP_LIMIT {
        return Err(ExactError::TooLarge {
            n,
            limit: SUBSET_DP_LIMIT,
        });
    }
    instance.validate()?;
    instance.check_feasible()?;
    if n == 0 {
        return Ok(ExactResult {
            best_order: vec![],
            best_total: 0,
            explored: 0,
        });
    }

    let full: usize = (1 << n) - 1;
    let mut dp = vec![u64::MAX; full + 1];
    let mut parent = vec![u8::MAX; full + 1];
    dp[0] = 0;
    let mut explored: u64 = 0;

    for mask in 0..=full {
        if dp[mask] == u64::MAX {
            continue;
        }
        let mut p_sum: u64 = 0;
        let mut wear: u64 = 0;
        for j in 0..n {
            if mask & (1 << j) != 0 {
                let job = &instance.jobs[j];
                p_sum = p_sum
                    .checked_add(job.p)
                    .ok_or(ModelError::ArithmeticOverflow)?;
                wear = wear
                    .checked_add(job.delta)
                    .ok_or(ModelError::ArithmeticOverflow)?;
            }
        }
        for j in 0..n {
            if mask & (1 << j) != 0 {
                continue;
            }
            explored += 1;
            let job = &instance.jobs[j];
            let p_next = p_sum
                .checked_add(job.p)
                .ok_or(ModelError::ArithmeticOverflow)?;
            let wear_next = wear
                .checked_add(job.delta)
                .ok_or(ModelError::ArithmeticOverflow)?;
            let c = p_next
                .checked_add(wear_next.saturating_sub(instance.ml0))
                .ok_or(ModelError::ArithmeticOverflow)?;
            let candidate = dp[mask]
                .checked_add(c)
                .ok_or(ModelError::ArithmeticOverflow)?;
            let next = mask | (1 << j);
            if candidate < dp[next] {
                dp[next] = candidate;
                parent[next] = j as u8;
            }
        }
    }

    let mut best_order = Vec::with_capacity(n);
    let mut mask = full;
    while mask != 0 {
        let j = parent[mask] as usize;
        best_order.push(j);
        mask &= !(1 << j);
    }
    best_order.reverse();

    Ok(ExactResult {
        best_order,
        best_total: dp[full],
        explored,
    })
}

/// Convenience check that `result` really attains its claimed total.
pub fn verify_total(instance: &Instance, result: &ExactResult) -> Result<bool, ModelError> {
    let schedule = canonical_schedule(instance, &result.best_order)?;
    let ev = evaluate(instance, &schedule)?;
    Ok(ev.feasible && ev.total == result.best_total)
}
