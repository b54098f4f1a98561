//! Relaxation toward a Gibbs vector `d` interleaved with instantaneous
//! permutations of the populations.
//!
//! A state evolves as `x ↦ e^{−tB}x` between switches, where `−B` is a rate
//! matrix with `Bd = 0`.

mod bound;
mod generator;
mod schedule;
mod steer;

pub use bound::{ordered_past_cone_z, reach_bound, vectorfield_inward_check, InwardReport, ReachBound};
pub use generator::{GeneratorSource, ToyGenerator};
pub use schedule::{
    containment_sweep, final_state, monte_carlo_cloud, random_schedule, simulate, FlowCache,
    Schedule, SimOptions, Step, Trajectory,
};
pub use steer::{chattering_schedule, greedy_steer, SteerResult};
