//! Problem data and schedule evaluation.
//!
//! A machine processes jobs one at a time. Each job `i` has a processing
//! time `p[i]` and wears the machine down by `delta[i]` maintenance-level
//! units. The machine starts at level `ml0`, can never exceed `ml_max`,
//! and breaks down if its level would drop below zero while processing a
//! job. A maintenance activity (MA) of duration `d` inserted between jobs
//! raises the level by `min(d, ml_max - level)` at a cost of `d` time
//! units. The objective throughout this crate is the total completion
//! time of all jobs.
//!
//! All quantities are exact unsigned 64-bit integers; every running sum
//! is checked and overflow surfaces as [`ModelError::ArithmeticOverflow`].

use serde::{Deserialize, Serialize};

/// A job: processing time plus the machine wear it causes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Job {
    /// Processing time.
    pub p: u64,
    /// Maintenance-level units consumed while the job runs.
    pub delta: u64,
}

impl Job {
    pub const fn new(p: u64, delta: u64) -> Self {
        Job { p, delta }
    }
}

/// A problem instance: jobs plus the machine's maintenance-level bounds.
///
/// Invariant: `ml0 <= ml_max`. An instance is *feasible* when every job
/// satisfies `delta <= ml_max`; only then can each job be preceded by
/// enough maintenance to run without a breakdown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub jobs: Vec<Job>,
    /// Maintenance level at time zero.
    pub ml0: u64,
    /// Maximum maintenance level the machine supports.
    pub ml_max: u64,
}

impl Instance {
    pub fn new(jobs: Vec<Job>, ml0: u64, ml_max: u64) -> Result<Self, ModelError> {
        let instance = Instance { jobs, ml0, ml_max };
        instance.validate()?;
        Ok(instance)
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    /// Checks the structural invariant `ml0 <= ml_max`.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.ml0 > self.ml_max {
            return Err(ModelError::InvalidInstance {
                ml0: self.ml0,
                ml_max: self.ml_max,
            });
        }
        Ok(())
    }

    /// Errors with the first job whose wear exceeds `ml_max`.
    pub fn check_feasible(&self) -> Result<(), ModelError> {
        for (index, job) in self.jobs.iter().enumerate() {
            if job.delta > self.ml_max {
                return Err(ModelError::InfeasibleJob {
                    index,
                    delta: job.delta,
                    ml_max: self.ml_max,
                });
            }
        }
        Ok(())
    }

    pub fn is_feasible(&self) -> bool {
        self.check_feasible().is_ok()
    }
}

/// A maintenance activity scheduled immediately before one job.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaintenanceActivity {
    /// Position in the job order that this MA directly precedes.
    pub before_position: usize,
    /// Time spent maintaining; must be positive (a zero-duration MA is
    /// represented by its absence).
    pub duration: u64,
}

/// A job order together with the maintenance inserted into it.
///
/// `mas` must be sorted by `before_position` with at most one entry per
/// position; [`evaluate`] rejects anything else.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub order: Vec<usize>,
    pub mas: Vec<MaintenanceActivity>,
}

/// The outcome of simulating a schedule on an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    /// Completion time of the job at each position of the order.
    pub completion: Vec<u64>,
    /// Sum of all completion times.
    pub total: u64,
    /// Completion time of the last job (0 for an empty schedule).
    pub makespan: u64,
    /// Whether the machine never breaks down and no MA overfills it.
    pub feasible: bool,
    /// Position of the first job preceded by maintenance, if any.
    pub first_ma_position: Option<usize>,
    /// `ml0` minus the wear of the jobs before the first MA; negative
    /// values can only occur under [`EvalMode::Relaxed`]. Present exactly
    /// when `first_ma_position` is.
    pub residual_before_first_ma: Option<i128>,
}

/// Breakdown policy used by [`evaluate_with_mode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Any breakdown makes the schedule infeasible.
    Strict,
    /// Breakdowns strictly before the first MA are tolerated. Intended
    /// for the deliberately broken intermediate schedules of the
    /// reduction module; everywhere else use [`EvalMode::Strict`].
    Relaxed,
}

/// Errors raised by schedule construction and evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    /// `ml0` exceeds `ml_max`.
    InvalidInstance { ml0: u64, ml_max: u64 },
    /// A job wears the machine beyond `ml_max`; no schedule can run it.
    InfeasibleJob {
        index: usize,
        delta: u64,
        ml_max: u64,
    },
    /// The order is not a permutation of the instance's job indices.
    InvalidPermutation,
    /// A maintenance entry violates the schedule invariants.
    InvalidMaintenance {
        position: usize,
        reason: &'static str,
    },
    /// A running sum left the unsigned 64-bit range.
    ArithmeticOverflow,
}

impl std::fmt::Display for ModelError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelError::InvalidInstance { ml0, ml_max } => {
                write!(f, "invalid instance: ml0 {} exceeds ml_max {}", ml0, ml_max)
            }
            ModelError::InfeasibleJob {
                index,
                delta,
                ml_max,
            } => write!(
                f,
                "job {} needs maintenance level {} but the machine caps at {}",
                index, delta, ml_max
            ),
            ModelError::InvalidPermutation => {
                write!(f, "order is not a permutation of the job indices")
            }
            ModelError::InvalidMaintenance { position, reason } => {
                write!(f, "maintenance before position {}: {}", position, reason)
            }
            ModelError::ArithmeticOverflow => {
                write!(f, "arithmetic overflow in a schedule computation")
            }
        }
    }
}

impl std::error::Error for ModelError {}

fn check_permutation(order: &[usize], n: usize) -> Result<(), ModelError> {
    if order.len() != n {
        return Err(ModelError::InvalidPermutation);
    }
    let mut seen = vec![false; n];
    for &j in order {
        if j >= n || seen[j] {
            return Err(ModelError::InvalidPermutation);
        }
        seen[j] = true;
    }
    Ok(())
}

fn validate_mas(mas: &[MaintenanceActivity], n: usize) -> Result<(), ModelError> {
    let mut prev: Option<usize> = None;
    for ma in mas {
        if ma.duration == 0 {
            return Err(ModelError::InvalidMaintenance {
                position: ma.before_position,
                reason: "zero duration (omit the entry instead)",
            });
        }
        if ma.before_position >= n {
            return Err(ModelError::InvalidMaintenance {
                position: ma.before_position,
                reason: "position out of range",
            });
        }
        if prev.is_some_and(|p| ma.before_position <= p) {
            return Err(ModelError::InvalidMaintenance {
                position: ma.before_position,
                reason: "positions not strictly increasing",
            });
        }
        prev = Some(ma.before_position);
    }
    Ok(())
}

/// Builds the minimal-maintenance schedule for a fixed job order.
///
/// Maintenance is deferred as long as possible: the cumulative MA
/// duration in front of the job at position `i` is
/// `max(0, delta[order[0]] + .. + delta[order[i]] - ml0)`, so each MA is
/// inserted immediately before the job that needs it and raises the
/// level to exactly that job's wear. Zero-duration MAs are omitted. The
/// result is always feasible on a feasible instance, and its makespan
/// equals [`makespan_closed_form`] no matter the order.
pub fn canonical_schedule(instance: &Instance, order: &[usize]) -> Result<Schedule, ModelError> {
    instance.validate()?;
    instance.check_feasible()?;
    check_permutation(order, instance.n())?;

    let mut mas = Vec::new();
    let mut wear: u64 = 0;
    let mut covered: u64 = 0; // maintenance already inserted
    for (pos, &j) in order.iter().enumerate() {
        wear = wear
            .checked_add(instance.jobs[j].delta)
            .ok_or(ModelError::ArithmeticOverflow)?;
        let needed = wear.saturating_sub(instance.ml0);
        if needed > covered {
            mas.push(MaintenanceActivity {
                before_position: pos,
                duration: needed - covered,
            });
            covered = needed;
        }
    }
    Ok(Schedule {
        order: order.to_vec(),
        mas,
    })
}

/// Simulates a schedule under [`EvalMode::Strict`].
pub fn evaluate(instance: &Instance, schedule: &Schedule) -> Result<Evaluation, ModelError> {
    evaluate_with_mode(instance, schedule, EvalMode::Strict)
}

/// Simulates a schedule, including non-canonical maintenance placements.
///
/// The maintenance level is tracked exactly: an MA raises it by
/// `min(duration, ml_max - level)` (over-long MAs still cost their full
/// duration and make the verdict infeasible), and a job drops it by its
/// wear. The schedule is feasible when the level never goes negative
/// after a job and no MA overfills the machine; under
/// [`EvalMode::Relaxed`] breakdowns at positions strictly before the
/// first MA are tolerated.
pub fn evaluate_with_mode(
    instance: &Instance,
    schedule: &Schedule,
    mode: EvalMode,
) -> Result<Evaluation, ModelError> {
    instance.validate()?;
    check_permutation(&schedule.order, instance.n())?;
    validate_mas(&schedule.mas, instance.n())?;

    let first_ma_position = schedule.mas.first().map(|ma| ma.before_position);
    let mut elapsed: u64 = 0;
    let mut level: i128 = instance.ml0 as i128;
    let mut feasible = true;
    let mut completion = Vec::with_capacity(instance.n());
    let mut total: u64 = 0;
    let mut mas = schedule.mas.iter().peekable();

    for (pos, &j) in schedule.order.iter().enumerate() {
        if let Some(ma) = mas.next_if(|ma| ma.before_position == pos) {
            let raised = level + ma.duration as i128;
            if raised > instance.ml_max as i128 {
                feasible = false;
                level = instance.ml_max as i128;
            } else {
                level = raised;
            }
            elapsed = elapsed
                .checked_add(ma.duration)
                .ok_or(ModelError::ArithmeticOverflow)?;
        }
        let job = &instance.jobs[j];
        elapsed = elapsed
            .checked_add(job.p)
            .ok_or(ModelError::ArithmeticOverflow)?;
        completion.push(elapsed);
        total = total
            .checked_add(elapsed)
            .ok_or(ModelError::ArithmeticOverflow)?;
        level -= job.delta as i128;
        if level < 0 {
            let tolerated = mode == EvalMode::Relaxed && first_ma_position.is_some_and(|k| pos < k);
            if !tolerated {
                feasible = false;
            }
        }
    }

    let residual_before_first_ma = first_ma_position.map(|k| {
        let wear: i128 = schedule.order[..k]
            .iter()
            .map(|&j| instance.jobs[j].delta as i128)
            .sum();
        instance.ml0 as i128 - wear
    });

    Ok(Evaluation {
        makespan: completion.last().copied().unwrap_or(0),
        completion,
        total,
        feasible,
        first_ma_position,
        residual_before_first_ma,
    })
}

/// Total completion time of the canonical schedule for `order`, without
/// materializing it.
///
/// The job at position `i` completes at `P_i + max(0, D_i - ml0)` where
/// `P_i` and `D_i` are the prefix sums of processing time and wear, so
/// the total only depends on those sums.
pub fn canonical_total(instance: &Instance, order: &[usize]) -> Result<u64, ModelError> {
    instance.validate()?;
    instance.check_feasible()?;
    check_permutation(order, instance.n())?;
    let mut p_sum: u64 = 0;
    let mut wear: u64 = 0;
    let mut total: u64 = 0;
    for &j in order {
        let job = &instance.jobs[j];
        p_sum = p_sum
            .checked_add(job.p)
            .ok_or(ModelError::ArithmeticOverflow)?;
        wear = wear
            .checked_add(job.delta)
            .ok_or(ModelError::ArithmeticOverflow)?;
        let c = p_sum
            .checked_add(wear.saturating_sub(instance.ml0))
            .ok_or(ModelError::ArithmeticOverflow)?;
        total = total.checked_add(c).ok_or(ModelError::ArithmeticOverflow)?;
    }
    Ok(total)
}

/// Makespan shared by every canonical schedule of a feasible instance:
/// `sum(p) + sum(delta) - ml0` when the total wear exceeds `ml0`, else
/// `sum(p)`.
pub fn makespan_closed_form(instance: &Instance) -> Result<u64, ModelError> {
    instance.validate()?;
    instance.check_feasible()?;
    let mut p_sum: u64 = 0;
    let mut wear: u64 = 0;
    for job in &instance.jobs {
        p_sum = p_sum
            .checked_add(job.p)
            .ok_or(ModelError::ArithmeticOverflow)?;
        wear = wear
            .checked_add(job.delta)
            .ok_or(ModelError::ArithmeticOverflow)?;
    }
    if wear > instance.ml0 {
        p_sum
            .checked_add(wear - instance.ml0)
            .ok_or(ModelError::ArithmeticOverflow)
    } else {
        Ok(p_sum)
    }
}
