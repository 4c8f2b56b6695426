//! Hit-and-run Markov chains over tropical polytopes.
//!
//! A [`Kernel`] turns the current state into the next emission; a [`Chain`]
//! drives a kernel from a starting point, discarding `burn_in` emissions.

mod chain;
mod config;
mod extend;
mod kernels;
mod mh;

pub use chain::{run_chain, Chain, ChainOutput};
pub use config::{random_stream, AnchorMode, ChainConfig, ChainState, ChainStats, RandomStream};
pub use extend::extend_segment;
pub use kernels::{
    har_extrapolation, har_extrapolation_subset, har_vertex_extended, har_vertex_nu,
    har_vertex_pair, HarKernel, Kernel,
};
pub use mh::{mh_filter, DensityKind, MhFilter, TargetDensity};
