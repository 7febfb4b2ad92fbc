//! The variational problem `m(alpha) = inf { T(phi) : E[phi] = alpha }` with
//! `T(phi) = E[E(phi|X,Y) E(phi|X,Z) E(phi|Y,Z)]` over independent `X, Y, Z`.
//!
//! The solver returns feasible points, so every reported `m_hat(alpha)` is an
//! upper bound on `m(alpha)`; `T` is not convex and no global optimality is
//! claimed.

mod bridge;
mod envelope;
mod grid;
mod pipeline;
mod solve;

pub use bridge::{box_instances, phi_from_partition, BoxInstance, T_of_box};
pub use envelope::{sweep_and_envelope, EnvelopePoints, Sweep};
pub use grid::{evaluate_T, gradient_T, refine_grid, uniform_weights, GridFunction};
pub use pipeline::{pipeline_lower_bound, BoxSummary, PipelineParams, PipelineReport, PIPELINE_CAP};
pub use solve::{minimize_T, minimize_on, project, MinimizeOptions, Minimum, DEFAULT_MAX_ITER, DEFAULT_RESTARTS};
