//! POD bases in L² from snapshots, first difference quotients, or second
//! difference quotients; projections, exact data-error formulas and the
//! pointwise error bounds.

mod basis;
mod bounds;
mod data_error;
mod dataset;
pub mod diff;
mod projection;

pub use basis::{compute_basis, PodBasis, PodOptions, SvdRoute};
pub use bounds::{
    pointwise_bound_check, sequence_bounds, BoundCheck, BoundConstants, BoundForm, SequenceBounds,
};
pub use data_error::{data_error_actual, data_error_formula};
pub use dataset::{build_dataset, PodDataSet, PodMethod};
pub use projection::{project_l2, project_ritz, Norm, Projector, ProjectorKind};
