//! General position sets in integer lattices, finite grids and tori.
//!
//! - [`lattice`]: points, grids, metrics and general-position verification.
//! - [`construction`]: the recursive extremal sets of size `2^(2^(n-1))` in `Z^n`.
//! - [`erdos_szekeres`]: monotone subsequences and the witness finder showing
//!   that one more point always forces three on a geodesic.
//! - [`solver`]: exact gp numbers and maximum-set counts on small boxes and tori.
//! - [`format`]: JSON and CSV point-set files.
//! - [`cli`]: the `gp` command-line front end.

pub mod cli;
pub mod construction;
pub mod erdos_szekeres;
pub mod error;
pub mod format;
pub mod lattice;
pub mod solver;

pub use error::{Error, Result};
