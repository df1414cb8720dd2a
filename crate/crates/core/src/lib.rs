//! Coded-caching delivery design for MIMO downlinks whose users have unequal
//! receive-antenna counts.
//!
//! The crate covers three delivery strategies:
//!
//! * **min-G** treats every user as if it had the smallest antenna count;
//! * **grouping** serves each antenna class in its own orthogonal interval;
//! * **phantom** designs for a virtual antenna count `Ĝ` and defers the streams
//!   weaker users cannot take to a unicast phase.
//!
//! [`analytics`] evaluates their degrees of freedom exactly, [`optimizer`]
//! picks the design parameters, [`schedule`] materializes full transmission
//! schedules at desk scale, and [`verify`] checks them numerically on random
//! channels with zero-forcing beamformers.

pub mod analytics;
pub mod combinatorics;
pub mod error;
pub mod model;
pub mod optimizer;
pub mod report;
pub mod schedule;
pub mod verify;

pub use analytics::{
    dof_grouping, dof_min_g, dof_phantom, phantom_counts, phantom_design, render_dof, weighted_dof,
    GroupingPlan, MinGPlan, PhantomCounts, PhantomDesign,
};
pub use combinatorics::{binomial, enumerate_subsets, BigCount};
pub use error::{Error, Result};
pub use model::{
    validate_config, CacheRatio, ConfigError, GroupProfile, SubpacketId, SystemConfig,
};
pub use num_rational::BigRational;
pub use optimizer::{is_feasible, solve_phantom, solve_symmetric, PhantomSearch, SymmetricDesign};
pub use report::{
    compare, run_preset, ComparisonRow, OutputFormat, PhantomParams, PresetReport, Scenario, Sheet,
};
pub use schedule::{
    build_grouping_schedule, build_min_g_schedule, build_phantom_schedule,
    build_symmetric_schedule, validate_schedule, RemovalPolicy, Schedule, ScheduleOptions,
    ValidationReport,
};
pub use verify::{
    verify_schedule, verify_schedules, CombinerPolicy, VerificationReport, VerifyOptions,
};
