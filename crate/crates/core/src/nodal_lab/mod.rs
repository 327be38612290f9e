//! Nodal domains of sampled torus eigenfunctions.
//!
//! An eigenfunction is sampled at the cell centres of an N×N grid on the unit
//! torus. Cells with |u| at most `zero_tol` times the largest sample are zero
//! cells and belong to no domain; the rest are merged with their same-sign
//! 4-neighbours, wrapping around both axes. 8-connectivity would fuse domains
//! that only touch at a nodal crossing, as in sin(2πx)·sin(2πy).
//!
//! Every count is repeated at 2N and must agree before it is reported. A
//! near-crossing of nodal lines narrower than a cell can split a domain on a
//! coarse grid; the sweep then retries on doubled grids.

mod checks;
mod decomposition;
mod eigenfunction;
mod sweep;
mod union_find;

pub use checks::{
    check_courant, check_faber_krahn, check_isoperimetric, courant_for_class, screen_geometry,
    CourantCheck, FaberKrahnCheck, GeometryScreen, IsoperimetricCheck, ScreenStatus,
    DEFAULT_GEO_TOL,
};
pub use decomposition::{
    count_nodal_domains, decompose, decompose_samples, resolve, resolve_adaptive,
    NodalDecomposition, NodalDomain, Refined, Topology, DEFAULT_GRID, DEFAULT_MAX_GRID,
    DEFAULT_ZERO_TOL, MIN_GRID,
};
pub use eigenfunction::{
    basis_dimension, frequency_classes, random_eigenfunction, Eigenfunction, Term,
};
pub use sweep::{
    catalogue, run_sweep, SweepConfig, SweepReport, SweepSample, DEFAULT_SWEEP_NORMS,
    DEFAULT_SWEEP_SEEDS,
};
pub use union_find::UnionFind;
