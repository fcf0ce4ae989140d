//! Ropelength-minimizing concentric helix configurations.
//!
//! A multihelix is a central rod surrounded by concentric shells of helices,
//! the unit cell of a non-alternating torus link. This crate computes tight
//! single-shell geometry, optimizes how strands distribute across shells,
//! scales the constructions to large strand counts, closes them into
//! `T(pQ, Q)` torus links, and reports upper and lower ropelength bounds
//! with exportable coordinates.
//!
//! All lengths are in tube-radius units: strands are axes of radius-1 tubes
//! and must stay 2 apart.

pub mod acceptance;
pub mod arrangement;
pub mod bounds;
pub mod closure;
pub mod constructions;
pub mod error;
pub mod export;
pub mod geometry;
pub mod helix;
pub mod numeric;

pub use arrangement::{
    config_length, exhaustive_search, optimize_geometry, reference_construction_a,
    square_grid_16, Arrangement, MultihelixConfig, SearchOptions,
};
pub use bounds::{hull_ratio_range, lower_bound_link, HullTable, LowerBound, LowerBoundKind};
pub use closure::{
    close_link, incremental_ratio_bound, ratio_sweep, verify_no_overlap, ClosedLink, ClosureMode,
    OverlapReport, TorusLinkReport,
};
pub use constructions::{
    construct_equal, construct_incremental, delta_exact_prefactor, equal_shell_bound,
    gamma_length, incremental_asymptote, infill, reverse_jenga, AsymptoticReport,
    ConstructionKind, InnerRadiusMode,
};
pub use error::{Error, Result};
pub use geometry::{
    min_distance, min_height, min_radius, sample_helix, shell_feasible, Discretization, FitModel,
    HelixSpec, Polyline3,
};
pub use helix::{caduceus, ideal_helix, large_n_helix, solve_phi, CaduceusParams, IdealHelixParams};
