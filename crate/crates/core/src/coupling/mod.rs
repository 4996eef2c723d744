//! Partitioned fluid-structure coupling: extrapolation, interface transfer,
//! step scheduling, the time-marching drivers and the monolithic reference.

pub mod extrapolation;
pub mod lifting;
pub mod monolithic;
pub mod checkpoint;
pub mod schedule;
pub mod scheme;

pub use extrapolation::{extrapolate, HistoryBuffer, Order};
pub use lifting::LiftingOperator;
pub use monolithic::run_monolithic_reference;
pub use schedule::{jagged_schedule, ScheduleEvent, StepKind};
pub use scheme::{
    run_ern, run_jagged, Coupler, Discretization, JaggedConfig, RunStatus, SchemeOptions, Trajectory,
};
