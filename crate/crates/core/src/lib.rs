//! Single-machine scheduling with job-dependent machine deterioration
//! and partial maintenance, minimizing total completion time.
//!
//! Running a job wears the machine's maintenance level down by a
//! job-specific amount; maintenance activities of freely chosen duration
//! restore it (one time unit per level unit) up to a cap. The crate
//! provides:
//!
//! - [`model`]: instance/schedule types, canonical (minimal, deferred)
//!   maintenance placement and an exact schedule evaluator;
//! - [`exact`]: a pruned brute force and a subset dynamic program, both
//!   optimal;
//! - [`approx`]: a factor-2 greedy split heuristic (`a1`), SPT (optimal
//!   on agreeable instances), a structural audit and swap-based local
//!   search;
//! - [`reduction`]: the construction that embeds the partition decision
//!   problem into this scheduling problem, with swap-chain certificates
//!   and witness extraction — the hardness side of the story;
//! - [`generate`]: seeded instance generators.

pub mod approx;
pub mod exact;
pub mod generate;
pub mod model;
pub mod reduction;

pub use approx::{
    audit_split_structure, is_agreeable, local_improve, solve_a1, solve_spt, ApproxError,
    AuditReport, AuditRule, SplitSchedule, Violation,
};
pub use exact::{
    solve_brute_force, solve_subset_dp, ExactError, ExactResult, BRUTE_FORCE_DEFAULT_LIMIT,
    SUBSET_DP_LIMIT,
};
pub use generate::{agreeable_instance, random_instance, tight_instance};
pub use model::{
    canonical_schedule, canonical_total, evaluate, evaluate_with_mode, makespan_closed_form,
    EvalMode, Evaluation, Instance, Job, MaintenanceActivity, ModelError, Schedule,
};
pub use reduction::{
    apply_swap_certificate, build_reduction, decide_partition_by_search, evaluate_pi0,
    extract_partition, PartitionInstance, ReductionArtifacts, ReductionError, SwapCertificate,
};
