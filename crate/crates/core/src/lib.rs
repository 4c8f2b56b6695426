//! Tropical geometry under the max-plus semiring and hit-and-run samplers
//! over tropical polytopes and spaces of equidistant trees.
//!
//! Points live in the tropical projective torus `R^e / R·1` and are stored
//! in canonical form (first coordinate zero). Everything here needs only
//! `alloc`; file formats, timing and statistics live in the `tropihar` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod point;
pub mod polytope;
pub mod samplers;
pub mod segment;
pub mod ultrametric;

pub use error::{Error, Result};
pub use point::{canonicalize, trop_add, trop_dist, trop_lin_combo, trop_scale, TropicalPoint};
pub use polytope::{BoundingBox, ProjectionResult, TropicalBall, TropicalPolytope};
pub use samplers::{
    extend_segment, har_extrapolation, har_extrapolation_subset, har_vertex_extended,
    har_vertex_nu, har_vertex_pair, mh_filter, run_chain, AnchorMode, Chain, ChainConfig,
    ChainOutput, ChainState, ChainStats, DensityKind, HarKernel, Kernel, MhFilter, RandomStream,
    TargetDensity,
};
pub use segment::{sample_segment, segment_breakpoints, segment_point_at, TropicalSegment};
pub use ultrametric::{
    har_ultrametric, is_ultrametric, topology_histogram, topology_of, tree_from_ultrametric, upgma,
    DissimilarityMap, EquidistantTree, TreeHarParams, TreeTopology, Ultrametric, UltrametricChain,
};

/// Tolerance used for exact-equality checks between canonical points.
pub const EQ_TOL: f64 = 1e-12;
