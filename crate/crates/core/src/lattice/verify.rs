use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::grid::{lies_between_metric, GridSpec};
use crate::lattice::point::{Point, PointSet};

/// Three points with `w` on a shortest `u,v`-path: a certificate that a set
/// is not in general position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTriple {
    pub u: Point,
    pub w: Point,
    pub v: Point,
}

impl WitnessTriple {
    /// Checks pairwise distinctness and `d(u,w) + d(w,v) = d(u,v)` under the
    /// grid's metric.
    pub fn is_valid(&self, grid: &GridSpec) -> Result<bool> {
        if self.u == self.v || self.u == self.w || self.w == self.v {
            return Ok(false);
        }
        lies_between_metric(&self.u, &self.w, &self.v, grid)
    }
}

/// Positions `(u, w, v)` of a violating triple inside a point list.
pub type TripleIndices = (usize, usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    /// Split the outer index range across the rayon pool.
    pub parallel: bool,
    /// Return the same triple as the sequential scan. Only meaningful with
    /// `parallel`; the sequential scan is always deterministic.
    pub deterministic: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            parallel: false,
            deterministic: true,
        }
    }
}

pub(crate) fn check_points_in_grid(s: &PointSet, grid: &GridSpec) -> Result<()> {
    if s.dim() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            found: s.dim(),
        });
    }
    s.iter().try_for_each(|p| grid.check_vertex(p))
}

/// Tests the triple `{a, b, c}` (with `a < b < c`) with each point as the
/// middle: `b` first, then `a`, then `c`.
#[inline]
fn violation_in(
    points: &[Point],
    grid: &GridSpec,
    a: usize,
    b: usize,
    c: usize,
) -> Option<TripleIndices> {
    let (pa, pb, pc) = (points[a].coords(), points[b].coords(), points[c].coords());
    if grid.between_raw(pa, pb, pc) {
        Some((a, b, c))
    } else if grid.between_raw(pb, pa, pc) {
        Some((b, a, c))
    } else if grid.between_raw(pa, pc, pb) {
        Some((a, c, b))
    } else {
        None
    }
}

fn scan_from(points: &[Point], grid: &GridSpec, a: usize) -> Option<TripleIndices> {
    let n = points.len();
    for b in a + 1..n {
        for c in b + 1..n {
            if let Some(hit) = violation_in(points, grid, a, b, c) {
                return Some(hit);
            }
        }
    }
    None
}

/// Exhaustive scan over index triples `a < b < c` in lexicographic order;
/// the first violation found is returned as positions `(u, w, v)`.
pub fn find_violating_indices(
    s: &PointSet,
    grid: &GridSpec,
    opts: ScanOptions,
) -> Result<Option<TripleIndices>> {
    check_points_in_grid(s, grid)?;
    let points = s.points();
    let n = points.len();
    let hit = if !opts.parallel {
        (0..n).find_map(|a| scan_from(points, grid, a))
    } else if opts.deterministic {
        (0..n)
            .into_par_iter()
            .find_map_first(|a| scan_from(points, grid, a))
    } else {
        (0..n)
            .into_par_iter()
            .find_map_any(|a| scan_from(points, grid, a))
    };
    Ok(hit)
}

/// Sequential, deterministic search for three points of `s` on a common
/// geodesic of `grid`.
pub fn find_violating_triple(s: &PointSet, grid: &GridSpec) -> Result<Option<WitnessTriple>> {
    find_violating_triple_with(s, grid, ScanOptions::default())
}

pub fn find_violating_triple_with(
    s: &PointSet,
    grid: &GridSpec,
    opts: ScanOptions,
) -> Result<Option<WitnessTriple>> {
    Ok(find_violating_indices(s, grid, opts)?.map(|t| triple_at(s, t)))
}

pub fn is_general_position(s: &PointSet, grid: &GridSpec) -> Result<bool> {
    Ok(find_violating_indices(s, grid, ScanOptions::default())?.is_none())
}

fn triple_at(s: &PointSet, (u, w, v): TripleIndices) -> WitnessTriple {
    WitnessTriple {
        u: s[u].clone(),
        w: s[w].clone(),
        v: s[v].clone(),
    }
}

/// Tests `samples` uniformly drawn index triples instead of all of them.
/// Finding nothing is evidence, not proof.
pub fn sample_violating_triple(
    s: &PointSet,
    grid: &GridSpec,
    samples: u64,
    seed: u64,
) -> Result<Option<WitnessTriple>> {
    check_points_in_grid(s, grid)?;
    let n = s.len();
    if n < 3 {
        return Ok(None);
    }
    let points = s.points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut idx = [rng.gen_range(0..n), 0, 0];
        loop {
            idx[1] = rng.gen_range(0..n);
            if idx[1] != idx[0] {
                break;
            }
        }
        loop {
            idx[2] = rng.gen_range(0..n);
            if idx[2] != idx[0] && idx[2] != idx[1] {
                break;
            }
        }
        idx.sort_unstable();
        if let Some(t) = violation_in(points, grid, idx[0], idx[1], idx[2]) {
            return Ok(Some(triple_at(s, t)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::pt;

    fn lattice(dim: usize) -> GridSpec {
        GridSpec::lattice(dim).unwrap()
    }

    #[test]
    fn four_point_plane_set_is_in_general_position() {
        let s = PointSet::from_coords([vec![1, 2], vec![2, 1], vec![3, 4], vec![4, 3]]).unwrap();
        assert_eq!(find_violating_triple(&s, &lattice(2)), Ok(None));
        assert_eq!(
            is_general_position(&s, &"box:4x4".parse().unwrap()),
            Ok(true)
        );
    }

    #[test]
    fn diagonal_chain_reports_middle() {
        let s = PointSet::from_coords([vec![0, 0], vec![1, 1], vec![2, 2]]).unwrap();
        let t = find_violating_triple(&s, &lattice(2)).unwrap().unwrap();
        assert_eq!(t.w, pt(&[1, 1]));
        assert_eq!((t.u, t.v), (pt(&[0, 0]), pt(&[2, 2])));
    }

    #[test]
    fn middle_is_tried_in_every_role() {
        // list order puts the geometric middle first
        let s = PointSet::from_coords([vec![1, 1], vec![0, 0], vec![2, 2]]).unwrap();
        let t = find_violating_triple(&s, &lattice(2)).unwrap().unwrap();
        assert_eq!(t.w, pt(&[1, 1]));
        let s = PointSet::from_coords([vec![0, 0], vec![2, 2], vec![1, 1]]).unwrap();
        let t = find_violating_triple(&s, &lattice(2)).unwrap().unwrap();
        assert_eq!(t.w, pt(&[1, 1]));
        assert!(t.is_valid(&lattice(2)).unwrap());
    }

    #[test]
    fn first_hit_is_lexicographic() {
        let s = PointSet::from_coords([vec![0, 0], vec![5, 0], vec![1, 9], vec![3, 0], vec![4, 0]])
            .unwrap();
        // (0,1,2) is clean, (0,1,3) is the first violating index triple
        let idx = find_violating_indices(&s, &lattice(2), ScanOptions::default()).unwrap();
        assert_eq!(idx, Some((0, 3, 1)));
        let par = ScanOptions {
            parallel: true,
            deterministic: true,
        };
        assert_eq!(find_violating_indices(&s, &lattice(2), par).unwrap(), idx);
        let any = ScanOptions {
            parallel: true,
            deterministic: false,
        };
        let (u, w, v) = find_violating_indices(&s, &lattice(2), any)
            .unwrap()
            .unwrap();
        assert!(crate::lattice::lies_between(&s[u], &s[w], &s[v]).unwrap());
    }

    #[test]
    fn grid_bounds_are_checked() {
        let s = PointSet::from_coords([vec![0, 0], vec![1, 1]]).unwrap();
        let b: GridSpec = "box:4x4".parse().unwrap();
        assert!(matches!(
            find_violating_triple(&s, &b),
            Err(Error::OutOfBounds { .. })
        ));
        assert!(matches!(
            find_violating_triple(&s, &lattice(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn torus_wraparound_matters() {
        // on C_8 the points 0, 1, 7 have 0 between 7 and 1
        let t: GridSpec = "torus:8".parse().unwrap();
        let s = PointSet::from_coords([vec![0], vec![1], vec![7]]).unwrap();
        let hit = find_violating_triple(&s, &t).unwrap().unwrap();
        assert_eq!(hit.w, pt(&[0]));
        // and 0, 3, 5 are pairwise too far apart around the cycle
        let s = PointSet::from_coords([vec![0], vec![3], vec![5]]).unwrap();
        assert_eq!(find_violating_triple(&s, &t), Ok(None));
    }

    #[test]
    fn witness_validity() {
        let g = lattice(2);
        let good = WitnessTriple {
            u: pt(&[0, 0]),
            w: pt(&[1, 0]),
            v: pt(&[3, 1]),
        };
        assert_eq!(good.is_valid(&g), Ok(true));
        let degenerate = WitnessTriple {
            u: pt(&[0, 0]),
            w: pt(&[0, 0]),
            v: pt(&[3, 1]),
        };
        assert_eq!(degenerate.is_valid(&g), Ok(false));
    }

    #[test]
    fn sampling_is_seeded() {
        let s = PointSet::from_coords((0..20).map(|k| vec![k, 2 * k])).unwrap();
        let a = sample_violating_triple(&s, &lattice(2), 10, 7).unwrap();
        let b = sample_violating_triple(&s, &lattice(2), 10, 7).unwrap();
        assert!(a.is_some());
        assert_eq!(a, b);
        let pair = PointSet::from_coords([vec![0], vec![1]]).unwrap();
        assert_eq!(sample_violating_triple(&pair, &lattice(1), 10, 7), Ok(None));
    }
}
