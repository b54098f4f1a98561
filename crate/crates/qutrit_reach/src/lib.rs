//! Geometry of the three-level toy model in the plane of the simplex.
//!
//! Points are barycentric `[f64; 3]`; drawing and polygon tests use the
//! isometric embedding in [`embed`]. "Left" means the counterclockwise-most
//! achievable derivative in that plane.

pub mod embed;

mod cone;
mod conic;
mod extremal;
mod polygon;
mod region;

pub use cone::{
    derv_cone, extremal_field, is_stabilisable, stab_grid, DerivativeCone, ExtremalVelocity, Side,
    Stabilisability, ANGLE_TOL,
};
pub use conic::{kernel_intersection_point, stab_boundary, BoundaryConic, ConicCase, StabBoundary, PARABOLIC_TOL};
pub use extremal::{
    chamber_order, integrate_extremal, integrate_extremal_with, EmbeddedCurve, ExtremalOptions,
    StopSet, Termination,
};
pub use polygon::Polygon;
pub use region::{
    reach_order, reach_order_with_margin, reachable_set, reachable_set_in, DClass, ReachOrder, ReachRegion,
    MEMBERSHIP_MARGIN,
};
