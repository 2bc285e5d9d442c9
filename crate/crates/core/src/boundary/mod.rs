//! Boundary geometry near `(1, 0)`: chart and samples, normal projection,
//! the scale `D(z)`, non-isotropic balls and approach regions.

mod domain;
mod geometry;
mod region;

pub use domain::{preset_rho, sample_params, BoundaryPatch, DomainModel, CHART_MAX_ITER, PRESETS};
pub use geometry::{
    d_from_lambdas, lambda_theta_from, project, PointGeometry, Projection, PROJECTION_MAX_ITER,
    PROJECTION_RHO_CAP,
};
pub(crate) use region::region_verdict_with;
pub use region::{HFunction, RegionSpec, RegionVerdict};
