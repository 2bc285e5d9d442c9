//! The bounded-function construction: packings of non-isotropic balls, the
//! peak sums `g_{n,r}`, certified zeros of `f_n`, the finite product and the
//! oscillation experiment.

mod experiment;
mod gfun;
mod packing;
mod params;
mod product;
mod zeros;

pub use experiment::*;
pub use gfun::{eval_f_n, eval_g, eval_g_full, fit_g_bound, shell_bound, slope, term, GBoundFit, GValue};
pub use packing::{build_packing, covering_check, fit_covering, CoveringFit, Packing, Rejection};
pub use params::{epsilon, epsilon_tail_bound, gamma, subsequence, CounterexampleParams, RadiusRule};
pub use product::{eval_f_product, product_factor, ProductValue, Stage, PRODUCT_DENOMINATOR_FLOOR};
pub use zeros::{
    find_zero_near, single_term_zero_target, verify_zero_in_region, Neighbourhood, ZeroFinder, ZeroMembership,
    ZeroRecord,
};
