//! Workbench around the reduction from the partition decision problem.
//!
//! A partition input `x_1..x_n` with even sum `2B` maps to a scheduling
//! instance with `2n + 3` jobs: jobs `0..=n` with processing times equal
//! to the prefix sums of `x` and wear `M - 2p`, an identical duplicate
//! of each (job `n+1+i` mirrors job `i`), and a *center* job `2n+2` with
//! processing time `M - 2B` and zero wear. `M = (4n+8)B + 1` makes wear
//! dominate processing times, `ml_max` is the combined wear of jobs
//! `0..=n`, and `ml0 = ml_max - 2B`. A subset of `x` summing to `B`
//! exists if and only if some feasible schedule reaches total completion
//! time `Q = Q0 + B`, where `Q0` is the total of the reference schedule
//! `pi0` below.
//!
//! `pi0` runs jobs `0..n` first, the center job behind a `2B` MA, then
//! the duplicates in reverse, each behind a full MA. It overdraws the
//! maintenance level by exactly `2B` before the first MA — strictly
//! infeasible, but evaluable under [`EvalMode::Relaxed`]. Swapping job
//! `i-1` with duplicate `n+1+i` trades `2 x_i` of pre-center wear for
//! `x_i` of total completion time; a chain of such swaps whose `x`
//! values sum to `B` repairs feasibility at total exactly `Q`.
//! [`apply_swap_certificate`] replays and checks that accounting, and
//! [`extract_partition`] reads a witness subset back out of any feasible
//! schedule with total at most `Q`.

use crate::exact::{solve_subset_dp, ExactError};
use crate::model::{
    evaluate, evaluate_with_mode, EvalMode, Evaluation, Instance, Job, MaintenanceActivity,
    ModelError, Schedule,
};

/// A partition input: positive values whose sum `2B` is even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInstance {
    x: Vec<u64>,
    b: u64,
}

impl PartitionInstance {
    pub fn new(x: Vec<u64>) -> Result<Self, ReductionError> {
        let mut sum: u64 = 0;
        for (index, &v) in x.iter().enumerate() {
            if v == 0 {
                return Err(ReductionError::ZeroEntry { index });
            }
            sum = sum
                .checked_add(v)
                .ok_or(ReductionError::Model(ModelError::ArithmeticOverflow))?;
        }
        if !sum.is_multiple_of(2) {
            return Err(ReductionError::OddSum { sum });
        }
        Ok(PartitionInstance { x, b: sum / 2 })
    }

    /// The values, 1-indexed in all subset bookkeeping.
    pub fn x(&self) -> &[u64] {
        &self.x
    }

    /// Half the total sum; the subset target.
    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
}

/// Everything [`build_reduction`] derives from a partition input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionArtifacts {
    pub partition: PartitionInstance,
    pub instance: Instance,
    /// The wear scale `M = (4n+8)B + 1`.
    pub m_value: u64,
    /// Total completion time of `pi0`.
    pub q0: u64,
    /// Decision threshold `q0 + B`.
    pub q: u64,
    /// Reference schedule: strictly infeasible, relaxed-feasible.
    pub pi0: Schedule,
}

impl ReductionArtifacts {
    pub fn n(&self) -> usize {
        self.partition.n()
    }

    /// Index of the zero-wear center job.
    pub fn center_job(&self) -> usize {
        2 * self.n() + 2
    }

    /// Position the center job occupies in `pi0` and in every normal
    /// form the extractor works with.
    pub fn center_position(&self) -> usize {
        self.n() + 1
    }
}

/// A replayed swap chain: `schedules[0]` is `pi0` and `schedules[l]`
/// applies the first `l` swaps, with `totals` aligned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapCertificate {
    pub indices: Vec<usize>,
    pub schedules: Vec<Schedule>,
    pub totals: Vec<u64>,
}

impl SwapCertificate {
    pub fn final_schedule(&self) -> &Schedule {
        self.schedules
            .last()
            .expect("a certificate always holds pi0")
    }

    pub fn final_total(&self) -> u64 {
        *self.totals.last().expect("a certificate always holds pi0")
    }
}

/// Errors raised by the reduction workbench.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionError {
    /// Partition values must be positive.
    ZeroEntry {
        index: usize,
    },
    /// The partition values must have an even sum.
    OddSum {
        sum: u64,
    },
    /// A swap subset was not strictly ascending inside `1..=n`.
    InvalidSubset {
        detail: String,
    },
    /// A replayed swap changed the total or the pre-center wear by the
    /// wrong amount.
    CertificateViolated {
        step: usize,
        detail: String,
    },
    /// The schedule given to the extractor exceeds the threshold.
    NotWithinThreshold {
        total: u64,
        threshold: u64,
    },
    /// The schedule given to the extractor is not strictly feasible.
    InfeasibleSchedule,
    /// The schedule passed the gates but no witness subset came out;
    /// does not happen for schedules of instances built here.
    ExtractionFailed {
        reason: String,
    },
    /// The decision search is capped to small partition inputs.
    TooLarge {
        n: usize,
        limit: usize,
    },
    Model(ModelError),
    Exact(ExactError),
}

impl std::fmt::Display for ReductionError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReductionError::ZeroEntry { index } => {
                write!(f, "partition value at index {} is zero", index)
            }
            ReductionError::OddSum { sum } => {
                write!(f, "partition values sum to {}, which is odd", sum)
            }
            ReductionError::InvalidSubset { detail } => {
                write!(f, "invalid swap subset: {}", detail)
            }
            ReductionError::CertificateViolated { step, detail } => {
                write!(f, "swap certificate broke at step {}: {}", step, detail)
            }
            ReductionError::NotWithinThreshold { total, threshold } => {
                write!(
                    f,
                    "schedule total {} exceeds the threshold {}",
                    total, threshold
                )
            }
            ReductionError::InfeasibleSchedule => {
                write!(f, "schedule is not strictly feasible")
            }
            ReductionError::ExtractionFailed { reason } => {
                write!(f, "witness extraction failed: {}", reason)
            }
            ReductionError::TooLarge { n, limit } => {
                write!(
                    f,
                    "partition with {} values exceeds the search limit of {}",
                    n, limit
                )
            }
            ReductionError::Model(e) => write!(f, "{}", e),
            ReductionError::Exact(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for ReductionError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            ReductionError::Model(e) => Some(e),
            ReductionError::Exact(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ModelError> for ReductionError {
    fn from(e: ModelError) -> Self {
        ReductionError::Model(e)
    }
}

impl From<ExactError> for ReductionError {
    fn from(e: ExactError) -> Self {
        ReductionError::Exact(e)
    }
}

fn overflow() -> ReductionError {
    ReductionError::Model(ModelError::ArithmeticOverflow)
}

/// Builds the scheduling instance, the threshold pair `(q0, q)` and the
/// reference schedule `pi0` for a partition input.
pub fn build_reduction(
    partition: &PartitionInstance,
) -> Result<ReductionArtifacts, ReductionError> {
    let n = partition.n();
    let b = partition.b();
    let n_u64 = n as u64;
    let m_value = (4 * n_u64 + 8)
        .checked_mul(b)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(overflow)?;

    // p[i] is the sum of the first i partition values; wear complements
    // it to keep p + delta/2 constant across jobs 0..=n.
    let mut prefix = vec![0u64; n + 1];
    for i in 1..=n {
        prefix[i] = prefix[i - 1]
            .checked_add(partition.x()[i - 1])
            .ok_or_else(overflow)?;
    }

    let two_b = b.checked_mul(2).ok_or_else(overflow)?;
    let mut jobs = Vec::with_capacity(2 * n + 3);
    for &p in &prefix {
        let delta = m_value.checked_sub(2 * p).ok_or_else(overflow)?;
        jobs.push(Job::new(p, delta));
    }
    jobs.extend_from_slice(&jobs.clone()); // duplicates n+1..=2n+1
    let center = Job::new(m_value - two_b, 0);
    jobs.push(center);

    let mut ml_max: u64 = 0;
    for job in &jobs[..=n] {
        ml_max = ml_max.checked_add(job.delta).ok_or_else(overflow)?;
    }
    let ml0 = ml_max - two_b; // ml_max >= delta_0 = M > 2B
    let instance = Instance::new(jobs, ml0, ml_max)?;

    // q0 as the position-weighted sum over pi0: the originals in order,
    // the center job, then the duplicates in reverse, each duplicate
    // carrying its own full MA.
    let mut term1: u64 = 0;
    let mut term3: u64 = 0;
    let mut p_sum: u64 = 0;
    for (j, &p_j) in prefix.iter().enumerate() {
        let weight = (n - j + 1) as u64;
        term1 = term1
            .checked_add(weight.checked_mul(p_j).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
        let cost = p_j.checked_add(m_value - 2 * p_j).ok_or_else(overflow)?;
        term3 = term3
            .checked_add(((j + 1) as u64).checked_mul(cost).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
        p_sum = p_sum.checked_add(p_j).ok_or_else(overflow)?;
    }
    let term2 = (n_u64 + 2)
        .checked_mul(
            p_sum
                .checked_add(two_b)
                .and_then(|v| v.checked_add(center.p))
                .ok_or_else(overflow)?,
        )
        .ok_or_else(overflow)?;
    let q0 = term1
        .checked_add(term2)
        .and_then(|v| v.checked_add(term3))
        .ok_or_else(overflow)?;
    let q = q0.checked_add(b).ok_or_else(overflow)?;

    let mut order: Vec<usize> = (0..=n).collect();
    order.push(2 * n + 2);
    order.extend((n + 1..=2 * n + 1).rev());
    let pi0 = pi0_style_schedule(&instance, order, n);

    Ok(ReductionArtifacts {
        partition: partition.clone(),
        instance,
        m_value,
        q0,
        q,
        pi0,
    })
}

/// Maintenance pattern shared by `pi0` and every swap-chain schedule:
/// one MA in front of the center position covering exactly the
/// pre-center overdraft (if any), then a full MA in front of each later
/// job. Not canonical while the overdraft is positive — that is the
/// point.
fn pi0_style_schedule(instance: &Instance, order: Vec<usize>, n: usize) -> Schedule {
    let center_pos = n + 1;
    let pre_wear: u64 = order[..center_pos]
        .iter()
        .map(|&j| instance.jobs[j].delta)
        .sum();
    let mut mas = Vec::new();
    if pre_wear > instance.ml0 {
        mas.push(MaintenanceActivity {
            before_position: center_pos,
            duration: pre_wear - instance.ml0,
        });
    }
    for (offset, &job) in order[center_pos + 1..].iter().enumerate() {
        let duration = instance.jobs[job].delta;
        if duration > 0 {
            mas.push(MaintenanceActivity {
                before_position: center_pos + 1 + offset,
                duration,
            });
        }
    }
    Schedule { order, mas }
}

/// Evaluates `pi0` with pre-center breakdowns tolerated; its total is
/// exactly `q0` and its strict verdict is infeasible whenever `B > 0`.
pub fn evaluate_pi0(artifacts: &ReductionArtifacts) -> Result<Evaluation, ModelError> {
    evaluate_with_mode(&artifacts.instance, &artifacts.pi0, EvalMode::Relaxed)
}

/// Replays the swap chain for `indices` (1-based, strictly ascending)
/// and checks each step's accounting: total completion time up by `x_i`,
/// pre-center wear down by `2 x_i`. That accounting holds while the
/// running sum of chosen values stays within `B` (the center maintenance
/// still has slack to absorb the wear drop); a chain summing to exactly
/// `B` ends strictly feasible with total exactly `q`. A chain that
/// overshoots `B` stops following the arithmetic at the crossing step and
/// is reported as [`ReductionError::CertificateViolated`].
pub fn apply_swap_certificate(
    artifacts: &ReductionArtifacts,
    indices: &[usize],
) -> Result<SwapCertificate, ReductionError> {
    let n = artifacts.n();
    for w in indices.windows(2) {
        if w[0] >= w[1] {
            return Err(ReductionError::InvalidSubset {
                detail: format!("indices {} and {} are not strictly ascending", w[0], w[1]),
            });
        }
    }
    if let Some(&first) = indices.first() {
        if first == 0 {
            return Err(ReductionError::InvalidSubset {
                detail: "indices are 1-based".into(),
            });
        }
    }
    if let Some(&last) = indices.last() {
        if last > n {
            return Err(ReductionError::InvalidSubset {
                detail: format!("index {} exceeds the partition size {}", last, n),
            });
        }
    }

    let center_pos = artifacts.center_position();
    let pre_wear = |order: &[usize]| -> u64 {
        order[..center_pos]
            .iter()
            .map(|&j| artifacts.instance.jobs[j].delta)
            .sum()
    };

    let mut schedules = vec![artifacts.pi0.clone()];
    let mut totals = vec![evaluate_pi0(artifacts)?.total];
    if totals[0] != artifacts.q0 {
        return Err(ReductionError::CertificateViolated {
            step: 0,
            detail: format!("pi0 total {} differs from q0 {}", totals[0], artifacts.q0),
        });
    }

    let mut order = artifacts.pi0.order.clone();
    for (step, &i) in indices.iter().enumerate() {
        let x_i = artifacts.partition.x()[i - 1];
        let out_job = i - 1; // leaves the pre-center block
        let in_job = n + 1 + i; // its partner's duplicate moves in
        let pos_out = order
            .iter()
            .position(|&j| j == out_job)
            .expect("job present");
        let pos_in = order
            .iter()
            .position(|&j| j == in_job)
            .expect("job present");
        if pos_out >= center_pos || pos_in <= center_pos {
            return Err(ReductionError::CertificateViolated {
                step: step + 1,
                detail: format!(
                    "jobs {} and {} are not on opposite sides of the center",
                    out_job, in_job
                ),
            });
        }
        let wear_before = pre_wear(&order);
        order.swap(pos_out, pos_in);
        let wear_after = pre_wear(&order);
        if wear_before.checked_sub(wear_after) != Some(2 * x_i) {
            return Err(ReductionError::CertificateViolated {
                step: step + 1,
                detail: format!(
                    "pre-center wear moved from {} to {}, expected a drop of {}",
                    wear_before,
                    wear_after,
                    2 * x_i
                ),
            });
        }

        let schedule = pi0_style_schedule(&artifacts.instance, order.clone(), n);
        let total = evaluate_with_mode(&artifacts.instance, &schedule, EvalMode::Relaxed)?.total;
        let prev_total = *totals.last().expect("non-empty");
        if prev_total.checked_add(x_i) != Some(total) {
            return Err(ReductionError::CertificateViolated {
                step: step + 1,
                detail: format!(
                    "total moved from {} to {}, expected a rise of {}",
                    prev_total, total, x_i
                ),
            });
        }
        schedules.push(schedule);
        totals.push(total);
    }

    Ok(SwapCertificate {
        indices: indices.to_vec(),
        schedules,
        totals,
    })
}

/// Recovers a witness subset (1-based indices, sum exactly `B`) from a
/// strictly feasible schedule with total at most `q`.
///
/// The center job must sit at its normal-form position or one slot
/// later (in which case it is exchanged with its predecessor — the two
/// are interchangeable there at no cost increase). Duplicate pairs split
/// across the center are relabeled so the original sits in front. The
/// witness is then read off the pairs that ended up entirely in front
/// (`r` values) and entirely behind (`l` values): sorted and matched
/// rank by rank, each pair contributes the index range `l+1..=r`.
pub fn extract_partition(
    artifacts: &ReductionArtifacts,
    schedule: &Schedule,
) -> Result<Vec<usize>, ReductionError> {
    let ev = evaluate(&artifacts.instance, schedule)?;
    if !ev.feasible {
        return Err(ReductionError::InfeasibleSchedule);
    }
    if ev.total > artifacts.q {
        return Err(ReductionError::NotWithinThreshold {
            total: ev.total,
            threshold: artifacts.q,
        });
    }

    let n = artifacts.n();
    let center_job = artifacts.center_job();
    let center_pos = artifacts.center_position();
    let mut order = schedule.order.clone();
    let found = order
        .iter()
        .position(|&j| j == center_job)
        .expect("evaluate verified the permutation");
    if found == center_pos + 1 {
        order.swap(center_pos, center_pos + 1);
    } else if found != center_pos {
        return Err(ReductionError::ExtractionFailed {
            reason: format!(
                "center job at position {}, expected {} or {}",
                found,
                center_pos,
                center_pos + 1
            ),
        });
    }

    let mut pos_of = vec![0usize; order.len()];
    for (pos, &j) in order.iter().enumerate() {
        pos_of[j] = pos;
    }
    // Split pairs are relabeled: the copy in front of the center is
    // always called the original. Copies are identical jobs, so this
    // never changes a completion time.
    for i in 0..=n {
        let twin = n + 1 + i;
        if pos_of[i] > center_pos && pos_of[twin] < center_pos {
            order.swap(pos_of[i], pos_of[twin]);
            pos_of.swap(i, twin);
        }
    }

    let mut front_pairs = Vec::new(); // r values: both copies in front
    let mut back_pairs = Vec::new(); // l values: both copies behind
    for i in 0..=n {
        let twin = n + 1 + i;
        match (pos_of[i] < center_pos, pos_of[twin] < center_pos) {
            (true, true) => front_pairs.push(i),
            (false, false) => back_pairs.push(i),
            _ => {}
        }
    }
    if front_pairs.len() != back_pairs.len() {
        return Err(ReductionError::ExtractionFailed {
            reason: format!(
                "{} pairs in front but {} behind",
                front_pairs.len(),
                back_pairs.len()
            ),
        });
    }

    let mut witness = Vec::new();
    for (&l, &r) in back_pairs.iter().zip(&front_pairs) {
        if l >= r {
            return Err(ReductionError::ExtractionFailed {
                reason: format!("pair ranks misnested: {} is not below {}", l, r),
            });
        }
        witness.extend(l + 1..=r);
    }
    let sum: u64 = witness
        .iter()
        .map(|&i| artifacts.partition.x()[i - 1])
        .sum();
    if sum != artifacts.partition.b() {
        return Err(ReductionError::ExtractionFailed {
            reason: format!(
                "candidate subset sums to {} instead of {}",
                sum,
                artifacts.partition.b()
            ),
        });
    }
    Ok(witness)
}

/// Size cap for [`decide_partition_by_search`].
pub const DECISION_SEARCH_LIMIT: usize = 4;

/// Decides a small partition input by building the reduction and solving
/// the scheduling instance exactly: the answer is "yes" iff the optimum
/// is within the threshold `q`.
pub fn decide_partition_by_search(partition: &PartitionInstance) -> Result<bool, ReductionError> {
    let n = partition.n();
    if n > DECISION_SEARCH_LIMIT {
        return Err(ReductionError::TooLarge {
            n,
            limit: DECISION_SEARCH_LIMIT,
        });
    }
    let artifacts = build_reduction(partition)?;
    let result = solve_subset_dp(&artifacts.instance)?;
    Ok(result.best_total <= artifacts.q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::canonical_schedule;
    use proptest::prelude::*;

    fn partition(x: &[u64]) -> PartitionInstance {
        PartitionInstance::new(x.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_partition_inputs() {
        assert!(matches!(
            PartitionInstance::new(vec![1, 2]),
            Err(ReductionError::OddSum { sum: 3 })
        ));
        assert!(matches!(
            PartitionInstance::new(vec![0, 2]),
            Err(ReductionError::ZeroEntry { index: 0 })
        ));
        assert!(PartitionInstance::new(vec![]).is_ok()); // trivially even
    }

    #[test]
    fn builds_the_three_value_example_exactly() {
        let art = build_reduction(&partition(&[1, 1, 2])).unwrap();
        assert_eq!(art.m_value, 41);
        let p: Vec<u64> = art.instance.jobs.iter().map(|j| j.p).collect();
        let d: Vec<u64> = art.instance.jobs.iter().map(|j| j.delta).collect();
        assert_eq!(p, vec![0, 1, 2, 4, 0, 1, 2, 4, 37]);
        assert_eq!(d, vec![41, 39, 37, 33, 41, 39, 37, 33, 0]);
        assert_eq!(art.instance.ml0, 146);
        assert_eq!(art.instance.ml_max, 150);
        assert_eq!(art.q0, 637);
        assert_eq!(art.q, 639);
        assert_eq!(art.pi0.order, vec![0, 1, 2, 3, 8, 7, 6, 5, 4]);
        assert_eq!(
            art.pi0.mas,
            vec![
                MaintenanceActivity {
                    before_position: 4,
                    duration: 4
                },
                MaintenanceActivity {
                    before_position: 5,
                    duration: 33
                },
                MaintenanceActivity {
                    before_position: 6,
                    duration: 37
                },
                MaintenanceActivity {
                    before_position: 7,
                    duration: 39
                },
                MaintenanceActivity {
                    before_position: 8,
                    duration: 41
                },
            ]
        );
    }

    #[test]
    fn construction_identities_hold() {
        for x in [
            &[1u64, 1][..],
            &[1, 1, 2],
            &[1, 1, 4],
            &[2, 2],
            &[3, 5, 2, 4],
        ] {
            let part = partition(x);
            let art = build_reduction(&part).unwrap();
            let n = art.n();
            let wear_originals: u64 = art.instance.jobs[..=n].iter().map(|j| j.delta).sum();
            assert_eq!(wear_originals, art.instance.ml_max);
            assert_eq!(art.instance.ml_max - art.instance.ml0, 2 * part.b());
            assert_eq!(art.instance.jobs.len(), 2 * n + 3);
            for i in 0..=n {
                assert_eq!(art.instance.jobs[i], art.instance.jobs[n + 1 + i]);
            }
            let center = art.instance.jobs[art.center_job()];
            assert_eq!(center.delta, 0);
            assert_eq!(center.p, art.m_value - 2 * part.b());
        }
    }

    #[test]
    fn smaller_example_matches_hand_computation() {
        let art = build_reduction(&partition(&[1, 1])).unwrap();
        assert_eq!(art.m_value, 17);
        assert_eq!(art.instance.ml0, 43);
        assert_eq!(art.q0, 178);
    }

    #[test]
    fn q0_has_a_closed_form() {
        // (n+2)(n+3)/2 * M plus twice the position-weighted prefix sums.
        for x in [&[1u64, 1][..], &[1, 1, 2], &[1, 1, 4], &[5, 3, 2, 4, 6]] {
            let part = partition(x);
            let art = build_reduction(&part).unwrap();
            let n = part.n() as u64;
            let mut prefix = 0u64;
            let mut weighted = 0u64;
            for (j, &v) in part.x().iter().enumerate() {
                prefix += v;
                weighted += (n - (j as u64 + 1) + 1) * prefix;
            }
            let closed = (n + 2) * (n + 3) / 2 * art.m_value + 2 * weighted;
            assert_eq!(art.q0, closed, "input {:?}", x);
        }
    }

    #[test]
    fn pi0_is_relaxed_feasible_with_total_q0_but_strictly_broken() {
        let art = build_reduction(&partition(&[1, 1, 2])).unwrap();
        let ev = evaluate_pi0(&art).unwrap();
        assert!(ev.feasible);
        assert_eq!(ev.total, 637);
        assert_eq!(ev.completion, vec![0, 1, 3, 7, 48, 85, 124, 164, 205]);
        assert_eq!(ev.first_ma_position, Some(4));
        assert_eq!(ev.residual_before_first_ma, Some(-4));

        let strict = evaluate(&art.instance, &art.pi0).unwrap();
        assert!(!strict.feasible);
    }

    #[test]
    fn pi0_satisfies_the_boundary_inequality_with_negative_residual() {
        let art = build_reduction(&partition(&[1, 1, 2])).unwrap();
        let residual = evaluate_pi0(&art)
            .unwrap()
            .residual_before_first_ma
            .unwrap();
        assert_eq!(residual, -4);
        let order = &art.pi0.order;
        let k = art.center_position();
        let job = |pos: usize| art.instance.jobs[order[pos]];
        let gap = job(k).delta as i128 - residual;
        let mid = job(k).p as i128 + gap;
        let left = job(k - 1).p as i128 + (job(k - 1).delta as i128).min(gap);
        let right = job(k + 1).p as i128 + (job(k + 1).delta as i128 - residual).max(0);
        assert_eq!(left, 8);
        assert_eq!(mid, 41);
        assert_eq!(right, 41);
        assert!(left <= mid && mid <= right);
    }

    #[test]
    fn swap_chain_trades_wear_for_completion_time() {
        let art = build_reduction(&partition(&[1, 1, 2])).unwrap();
        let cert = apply_swap_certificate(&art, &[3]).unwrap();
        assert_eq!(cert.totals, vec![637, 639]);
        assert_eq!(cert.final_schedule().order, vec![0, 1, 7, 3, 8, 2, 6, 5, 4]);
        let pre_wear = |s: &Schedule| -> u64 {
            s.order[..4]
                .iter()
                .map(|&j| art.instance.jobs[j].delta)
                .sum()
        };
        assert_eq!(pre_wear(&cert.schedules[0]), 150);
        assert_eq!(pre_wear(&cert.schedules[1]), 146);

        let ev = evaluate(&art.instance, cert.final_schedule()).unwrap();
        assert!(ev.feasible);
        assert_eq!(ev.total, art.q);
    }

    #[test]
    fn alternative_witness_subset_also_lands_on_the_threshold() {
        let art = build_reduction(&partition(&[1, 1, 2])).unwrap();
        let cert = apply_swap_certificate(&art, &[1, 2]).unwrap();
        assert_eq!(cert.totals, vec![637, 638, 639]);
        let ev = evaluate(&art.instance, cert.final_schedule()).unwrap();
        assert!(ev.feasible);
        assert_eq!(
            extract_partition(&art, cert.final_schedule()).unwrap(),
            vec![1, 2]
        );
    }

    #[test]
    fn overshooting_the_target_violates_the_swap_accounting() {
        // {1, 2} already sums to B = 2; adding index 3 pushes the running
        // sum to 4. The first two swaps follow the arithmetic, but the
        // third lands after the center maintenance has shrunk to nothing,
        // so the promised +2 rise does not materialize.
        let art = build_reduction(&partition(&[1, 1, 2])).unwrap();
        match apply_swap_certificate(&art, &[1, 2, 3]) {
            Err(ReductionError::CertificateViolated { step: 3, .. }) => {}
            other => panic!("expected a step-3 violation, got {:?}", other),
        }
    }

    #[test]
    fn empty_swap_chain_is_pi0_and_stays_broken() {
        let art = build_reduction(&partition(&[1, 1, 2])).unwrap();
        let cert = apply_swap_certificate(&art, &[]).unwrap();
        assert_eq!(cert.schedules.len(), 1);
        assert_eq!(cert.final_total(), 637);
        assert_eq!(
            extract_partition(&art, cert.final_schedule()),
            Err(ReductionError::InfeasibleSchedule)
        );
    }

    #[test]
    fn invalid_swap_subsets_are_rejected() {
        let art = build_reduction(&partition(&[1, 1, 2])).unwrap();
        assert!(matches!(
            apply_swap_certificate(&art, &[2, 2]),
            Err(ReductionError::InvalidSubset { .. })
        ));
        assert!(matches!(
            apply_swap_certificate(&art, &[0, 1]),
            Err(ReductionError::InvalidSubset { .. })
        ));
        assert!(matches!(
            apply_swap_certificate(&art, &[4]),
            Err(ReductionError::InvalidSubset { .. })
        ));
    }

    #[test]
    fn extraction_recovers_the_planted_subset() {
        let art = build_reduction(&partition(&[1, 1, 2])).unwrap();
        let cert = apply_swap_certificate(&art, &[3]).unwrap();
        assert_eq!(
            extract_partition(&art, cert.final_schedule()).unwrap(),
            vec![3]
        );
    }

    #[test]
    fn extraction_rejects_feasible_but_expensive_schedules() {
        let art = build_reduction(&partition(&[1, 1, 2])).unwrap();
        // Canonical maintenance on pi0's order is feasible but costs 641.
        let canon = canonical_schedule(&art.instance, &art.pi0.order).unwrap();
        let ev = evaluate(&art.instance, &canon).unwrap();
        assert!(ev.feasible);
        assert_eq!(ev.total, 641);
        assert_eq!(
            extract_partition(&art, &canon),
            Err(ReductionError::NotWithinThreshold {
                total: 641,
                threshold: 639
            })
        );
    }

    #[test]
    fn extraction_works_on_an_exact_optimum() {
        let art = build_reduction(&partition(&[1, 1, 2])).unwrap();
        let result = solve_subset_dp(&art.instance).unwrap();
        assert!(result.best_total <= art.q);
        let schedule = result.schedule(&art.instance).unwrap();
        let witness = extract_partition(&art, &schedule).unwrap();
        let sum: u64 = witness.iter().map(|&i| art.partition.x()[i - 1]).sum();
        assert_eq!(sum, art.partition.b());
    }

    #[test]
    fn optima_of_built_instances_keep_the_expected_shape() {
        // Non-center jobs in front of the first MA number n or n+1, and
        // at most n+1 jobs follow the center job.
        for x in [&[1u64, 1][..], &[1, 1, 2], &[1, 1, 4], &[2, 2]] {
            let part = partition(x);
            let art = build_reduction(&part).unwrap();
            let n = art.n();
            let result = solve_subset_dp(&art.instance).unwrap();
            let schedule = result.schedule(&art.instance).unwrap();
            let first_ma = schedule.mas.first().map(|ma| ma.before_position).unwrap();
            let non_center_in_front = schedule.order[..first_ma]
                .iter()
                .filter(|&&j| j != art.center_job())
                .count();
            assert!(
                non_center_in_front == n || non_center_in_front == n + 1,
                "input {:?}: {} non-center jobs before the first MA",
                x,
                non_center_in_front
            );
            let center_at = schedule
                .order
                .iter()
                .position(|&j| j == art.center_job())
                .unwrap();
            assert!(
                schedule.order.len() - 1 - center_at <= n + 1,
                "input {:?}",
                x
            );
        }
    }

    #[test]
    fn decision_search_answers_small_inputs() {
        assert!(decide_partition_by_search(&partition(&[1, 1, 2])).unwrap());
        assert!(decide_partition_by_search(&partition(&[2, 2])).unwrap());
        assert!(!decide_partition_by_search(&partition(&[1, 1, 4])).unwrap());
        assert!(matches!(
            decide_partition_by_search(&partition(&[2; 5])),
            Err(ReductionError::TooLarge { n: 5, limit: 4 })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn q0_closed_form_holds_for_random_inputs(
            mut x in prop::collection::vec(1u64..=40, 1..=8),
        ) {
            if x.iter().sum::<u64>() % 2 == 1 {
                x.push(1);
            }
            let part = partition(&x);
            let art = build_reduction(&part).unwrap();
            let n = part.n() as u64;
            let mut prefix = 0u64;
            let mut weighted = 0u64;
            for (j, &v) in part.x().iter().enumerate() {
                prefix += v;
                weighted += (n - (j as u64 + 1) + 1) * prefix;
            }
            prop_assert_eq!(art.q0, (n + 2) * (n + 3) / 2 * art.m_value + 2 * weighted);
        }

        #[test]
        fn planted_witnesses_replay_and_extract(
            values in prop::collection::vec(1u64..=9, 2..=5),
            picks in prop::collection::vec(any::<bool>(), 5),
        ) {
            // Plant a yes-instance: append the sums of the chosen values
            // and of the rest, so chosen + second appendix is a witness.
            let chosen_sum: u64 = values
                .iter()
                .zip(&picks)
                .filter(|&(_, &take)| take)
                .map(|(&v, _)| v)
                .sum();
            let rest_sum: u64 = values.iter().sum::<u64>() - chosen_sum;
            prop_assume!(chosen_sum > 0 && rest_sum > 0);
            let mut x: Vec<u64> = values.clone();
            x.push(chosen_sum);
            x.push(rest_sum);
            let part = partition(&x);
            let art = build_reduction(&part).unwrap();

            let mut indices: Vec<usize> = values
                .iter()
                .zip(&picks)
                .enumerate()
                .filter(|&(_, (_, &take))| take)
                .map(|(i, _)| i + 1)
                .collect();
            indices.push(values.len() + 2);
            let cert = apply_swap_certificate(&art, &indices).unwrap();
            prop_assert_eq!(cert.final_total(), art.q);
            let ev = evaluate(&art.instance, cert.final_schedule()).unwrap();
            prop_assert!(ev.feasible);
            let witness = extract_partition(&art, cert.final_schedule()).unwrap();
            let sum: u64 = witness.iter().map(|&i| part.x()[i - 1]).sum();
            prop_assert_eq!(sum, part.b());
        }
    }
}
