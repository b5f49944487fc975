//! Time-dependent Lindblad master equations: model types, the sparse
//! right-hand side, RK4 integration with switching schedules, steady states
//! and state diagnostics.

mod envelope;
mod generator;
mod integrate;
mod master;
mod observables;
mod shifts;
mod steady;

pub use envelope::Envelope;
pub use generator::{rhs, Generator, Workspace};
pub(crate) use integrate::interpolate;
pub use integrate::{
    integrate, Diagnostics, Evolution, IntegrateOptions, Observable, Schedule, Segment, TimeSeries, Trajectory,
    MAX_PHASE_PER_STEP, TRACE_DRIFT_LIMIT,
};
pub use master::{Dissipator, HTerm, MasterEq};
pub use observables::{check_state, fidelity, population, StateDiagnostics};
pub use shifts::far_detuned_shifts;
pub use steady::{liouvillian, steady_state, steady_state_report, SteadyState, MAX_STEADY_DIM, NULL_TOL};
