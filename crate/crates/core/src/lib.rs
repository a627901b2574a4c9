//! Quantity-based network revenue management.
//!
//! * [`model`]: instances, capacity rates and the nondegeneracy test.
//! * [`lp`]: bounded-variable simplex, the DLP and a vertex-enumeration check.
//! * [`arrivals`]: seeded Poisson sample paths.
//! * [`policies`]: SPA, FR, FRT, IR and IRT admission control.
//! * [`oracle`]: hindsight optimum and the exact single-class optimum.
//! * [`harness`]: paired Monte Carlo regret experiments and CSV export.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod arrivals;
pub mod cli;
pub mod harness;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod policies;
pub mod rng;
pub mod stats;

pub use arrivals::{sample_path, ArrivalPath, MergedEvent};
pub use harness::{run_experiment, ExperimentSpec, RegretTable, SweepAxis};
pub use lp::{solve_bounded_lp, solve_dlp, LpProblem, LpSolution};
pub use model::{capacity_rate, is_nondegenerate, Instance, Matrix};
pub use policies::{run_policy, PolicyKind, PolicySpec, RunOptions, RunResult};
pub use rng::ThinningStream;
