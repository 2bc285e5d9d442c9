//! Tangential frame, Lie brackets and the commutator table.

mod field;
mod frame;
mod table;

pub use field::{lie_bracket, VectorField, BASIS};
pub use frame::{
    decompose_in_frame, tangential_frame, Decomposition, Frame, FrameCoefficients, RhoDerivatives,
    MAX_FRAME_CONDITION,
};
pub use table::{
    build_table, CommutatorEntry, CommutatorTable, LambdaRoute, Letter, TypeReport, Word, DEFAULT_K_MAX,
    DEFAULT_TYPE_TOL, MAX_K, ON_BOUNDARY_TOL,
};
