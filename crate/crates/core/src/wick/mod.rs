//! Gaussian moments by Wick's theorem and the generating functions built on
//! them.

mod census;
mod contract;
mod engine;
mod model;
mod pairing;
mod table;

pub use census::{describe_class, find_gluing, map_census, relabeling_group, CensusClass, GluingSpec};
pub use contract::Contractor;
pub use engine::{sweep_moment, GaussianMoment, Method, NSeries, TermProduct, WickEngine, AUTO_SWEEP_LIMIT};
pub use model::GaussianModel;
pub use pairing::{for_each_pairing, rank, sweep, HalfEdgeLayout, PairingDiagram};
pub use table::{FreeEnergyTable, TableEntry, TableRecord};
