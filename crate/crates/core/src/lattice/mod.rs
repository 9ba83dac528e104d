//! Points, ambient grids and the general-position predicate.
//!
//! Three ambient graphs are supported: the infinite lattice `Z^n` with the
//! L1 metric, finite boxes `P_{k_1} x ... x P_{k_n}` (1-based coordinates,
//! isometric inside `Z^n`) and tori `C_{k_1} x ... x C_{k_n}` (0-based
//! residues, cyclic metric per axis). A set is in general position when no
//! three of its points lie on a common shortest path.

mod grid;
mod point;
mod verify;

pub use grid::{
    l1_distance, lies_between, lies_between_metric, torus_distance, GridKind, GridSpec,
};
pub use point::{pt, Point, PointSet};
pub use verify::{
    find_violating_indices, find_violating_triple, find_violating_triple_with, is_general_position,
    sample_violating_triple, ScanOptions, TripleIndices, WitnessTriple,
};
