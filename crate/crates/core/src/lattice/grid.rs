use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::point::{check_same_dim, Point};

/// L1 (Manhattan) distance, the shortest-path metric of `Z^n`.
pub fn l1_distance(u: &Point, v: &Point) -> Result<u64> {
    check_same_dim(u.dim(), v)?;
    u.coords()
        .iter()
        .zip(v.coords())
        .try_fold(0u64, |acc, (&a, &b)| acc.checked_add(a.abs_diff(b)))
        .ok_or(Error::Overflow("summing L1 distance"))
}

/// Shortest-path distance in the torus `C_{k_1} x ... x C_{k_n}`.
///
/// Coordinates are read as residues, so unreduced input is tolerated.
pub fn torus_distance(u: &Point, v: &Point, sides: &[u64]) -> Result<u64> {
    check_same_dim(u.dim(), v)?;
    if sides.len() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: sides.len(),
            found: u.dim(),
        });
    }
    if let Some(&side) = sides.iter().find(|&&k| k < 3) {
        return Err(Error::InvalidSide {
            kind: "torus",
            side,
            min: 3,
        });
    }
    Ok(cyclic_sum(u.coords(), v.coords(), sides))
}

#[inline]
fn cyclic_gap(a: i64, b: i64, side: u64) -> u64 {
    let k = side as i128;
    let diff = (a as i128 - b as i128).rem_euclid(k);
    diff.min(k - diff) as u64
}

#[inline]
fn cyclic_sum(u: &[i64], v: &[i64], sides: &[u64]) -> u64 {
    u.iter()
        .zip(v)
        .zip(sides)
        .map(|((&a, &b), &k)| cyclic_gap(a, b, k))
        .sum()
}

/// Coordinatewise betweenness: `w` lies on a shortest `u,v`-path of `Z^n`
/// iff every coordinate of `w` sits in the closed interval spanned by `u`
/// and `v`.
pub fn lies_between(u: &Point, w: &Point, v: &Point) -> Result<bool> {
    check_same_dim(u.dim(), w)?;
    check_same_dim(u.dim(), v)?;
    Ok(between_coordinatewise(u.coords(), w.coords(), v.coords()))
}

#[inline]
pub(crate) fn between_coordinatewise(u: &[i64], w: &[i64], v: &[i64]) -> bool {
    u.iter()
        .zip(w)
        .zip(v)
        .all(|((&a, &m), &b)| a.min(b) <= m && m <= a.max(b))
}

/// Metric betweenness, `d(u,w) + d(w,v) = d(u,v)`, under the grid's own
/// distance.
pub fn lies_between_metric(u: &Point, w: &Point, v: &Point, grid: &GridSpec) -> Result<bool> {
    grid.check_vertex(u)?;
    grid.check_vertex(w)?;
    grid.check_vertex(v)?;
    let d = |a: &Point, b: &Point| grid.distance(a, b).map(u128::from);
    Ok(d(u, w)? + d(w, v)? == d(u, v)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GridKind {
    InfiniteLattice,
    Box,
    Torus,
}

/// The ambient graph: `Z^n`, a box `P_{k_1} x ... x P_{k_n}` with
/// coordinates in `1..=k_j`, or a torus `C_{k_1} x ... x C_{k_n}` with
/// coordinates in `0..k_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridSpec {
    kind: GridKind,
    dim: usize,
    sides: Vec<u64>,
}

impl GridSpec {
    pub fn lattice(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyPoint);
        }
        Ok(GridSpec {
            kind: GridKind::InfiniteLattice,
            dim,
            sides: Vec::new(),
        })
    }

    pub fn boxed(sides: Vec<u64>) -> Result<Self> {
        Self::finite(GridKind::Box, sides, 2)
    }

    pub fn torus(sides: Vec<u64>) -> Result<Self> {
        Self::finite(GridKind::Torus, sides, 3)
    }

    fn finite(kind: GridKind, sides: Vec<u64>, min: u64) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::EmptyPoint);
        }
        if let Some(&side) = sides.iter().find(|&&k| k < min) {
            return Err(Error::InvalidSide {
                kind: kind.name(),
                side,
                min,
            });
        }
        if sides.iter().any(|&k| k > i64::MAX as u64) {
            return Err(Error::Overflow("validating side lengths"));
        }
        Ok(GridSpec {
            kind,
            dim: sides.len(),
            sides,
        })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Side lengths; empty for the infinite lattice.
    pub fn sides(&self) -> &[u64] {
        &self.sides
    }

    /// `None` for the infinite lattice or when the product overflows.
    pub fn vertex_count(&self) -> Option<u64> {
        match self.kind {
            GridKind::InfiniteLattice => None,
            _ => self
                .sides
                .iter()
                .try_fold(1u64, |acc, &k| acc.checked_mul(k)),
        }
    }

    /// Smallest coordinate value along every axis.
    pub fn origin(&self) -> i64 {
        match self.kind {
            GridKind::Torus => 0,
            _ => 1,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        if p.dim() != self.dim {
            return false;
        }
        let lo = self.origin();
        match self.kind {
            GridKind::InfiniteLattice => true,
            _ => p
                .coords()
                .iter()
                .zip(&self.sides)
                .all(|(&c, &k)| c >= lo && c < lo + k as i64),
        }
    }

    pub fn check_vertex(&self, p: &Point) -> Result<()> {
        check_same_dim(self.dim, p)?;
        if !self.contains(p) {
            return Err(Error::OutOfBounds {
                point: p.clone(),
                grid: self.to_string(),
            });
        }
        Ok(())
    }

    /// Shortest-path distance between two vertices of this grid.
    pub fn distance(&self, u: &Point, v: &Point) -> Result<u64> {
        match self.kind {
            GridKind::Torus => torus_distance(u, v, &self.sides),
            _ => l1_distance(u, v),
        }
    }

    /// Betweenness on raw coordinate slices; vertices must already be
    /// validated. Boxes are isometric in `Z^n`, so they share the
    /// coordinatewise test.
    #[inline]
    pub(crate) fn between_raw(&self, u: &[i64], w: &[i64], v: &[i64]) -> bool {
        match self.kind {
            GridKind::Torus => {
                let d = |a: &[i64], b: &[i64]| cyclic_sum(a, b, &self.sides);
                d(u, w) + d(w, v) == d(u, v)
            }
            _ => between_coordinatewise(u, w, v),
        }
    }

    /// All vertices in lexicographic coordinate order.
    pub fn vertices(&self) -> Result<Vec<Point>> {
        let count = self
            .vertex_count()
            .ok_or_else(|| Error::UnsupportedGrid(self.to_string()))?;
        let lo = self.origin();
        let mut out = Vec::with_capacity(count as usize);
        let mut cur = vec![lo; self.dim];
        for _ in 0..count {
            out.push(Point::from_vec_unchecked(cur.clone()));
            for axis in (0..self.dim).rev() {
                cur[axis] += 1;
                if cur[axis] < lo + self.sides[axis] as i64 {
                    break;
                }
                cur[axis] = lo;
            }
        }
        Ok(out)
    }
}

impl GridKind {
    pub fn name(self) -> &'static str {
        match self {
            GridKind::InfiniteLattice => "lattice",
            GridKind::Box => "box",
            GridKind::Torus => "torus",
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.kind.name())?;
        match self.kind {
            GridKind::InfiniteLattice => write!(f, "{}", self.dim),
            _ => {
                for (k, side) in self.sides.iter().enumerate() {
                    if k > 0 {
                        f.write_str("x")?;
                    }
                    write!(f, "{side}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `lattice:3`, `box:4x4`, `torus:8x8x8`.
impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("grid `{s}` should look like box:4x4")))?;
        let bad = |what: &str| Error::Parse(format!("grid `{s}`: bad {what}"));
        match kind.trim() {
            "lattice" => {
                let dim = rest.trim().parse::<usize>().map_err(|_| bad("dimension"))?;
                GridSpec::lattice(dim)
            }
            "box" | "torus" => {
                let sides = rest
                    .split('x')
                    .map(|t| t.trim().parse::<u64>().map_err(|_| bad("side length")))
                    .collect::<Result<Vec<_>>>()?;
                if kind.trim() == "box" {
                    GridSpec::boxed(sides)
                } else {
                    GridSpec::torus(sides)
                }
            }
            other => Err(Error::Parse(format!("unknown grid kind `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::pt;

    #[test]
    fn l1_examples() {
        assert_eq!(l1_distance(&pt(&[0, 0]), &pt(&[0, 0])), Ok(0));
        assert_eq!(l1_distance(&pt(&[1, 2]), &pt(&[4, 3])), Ok(4));
        // first and last points of the three-dimensional extremal set
        assert_eq!(l1_distance(&pt(&[1, 6, 7]), &pt(&[16, 11, 10])), Ok(23));
    }

    #[test]
    fn l1_dimension_mismatch() {
        assert!(matches!(
            l1_distance(&pt(&[1]), &pt(&[1, 2])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn l1_extreme_coordinates_do_not_wrap() {
        let d = l1_distance(&pt(&[i64::MIN]), &pt(&[i64::MAX])).unwrap();
        assert_eq!(d, u64::MAX);
        assert!(l1_distance(&pt(&[i64::MIN, i64::MIN]), &pt(&[i64::MAX, i64::MAX])).is_err());
    }

    #[test]
    fn torus_examples() {
        assert_eq!(torus_distance(&pt(&[0, 0]), &pt(&[0, 0]), &[8, 8]), Ok(0));
        assert_eq!(torus_distance(&pt(&[0]), &pt(&[5]), &[8]), Ok(3));
        assert_eq!(torus_distance(&pt(&[1, 2]), &pt(&[4, 3]), &[8, 8]), Ok(4));
        assert_eq!(torus_distance(&pt(&[-1]), &pt(&[7]), &[8]), Ok(0));
    }

    #[test]
    fn torus_rejects_short_cycles() {
        assert_eq!(
            torus_distance(&pt(&[0]), &pt(&[1]), &[2]),
            Err(Error::InvalidSide {
                kind: "torus",
                side: 2,
                min: 3
            })
        );
        assert!(torus_distance(&pt(&[0, 0]), &pt(&[1, 1]), &[8]).is_err());
    }

    #[test]
    fn betweenness_examples() {
        assert_eq!(
            lies_between(&pt(&[0, 0]), &pt(&[1, 1]), &pt(&[2, 2])),
            Ok(true)
        );
        assert_eq!(
            lies_between(&pt(&[1, 2]), &pt(&[2, 1]), &pt(&[3, 4])),
            Ok(false)
        );
        assert_eq!(
            lies_between(&pt(&[0, 0]), &pt(&[0, 0]), &pt(&[5, 5])),
            Ok(true)
        );
        assert!(lies_between(&pt(&[0, 0]), &pt(&[0]), &pt(&[5, 5])).is_err());
    }

    #[test]
    fn torus_betweenness_examples() {
        let t: GridSpec = "torus:8x8".parse().unwrap();
        assert_eq!(
            lies_between_metric(&pt(&[0, 0]), &pt(&[7, 0]), &pt(&[6, 0]), &t),
            Ok(true)
        );
        assert_eq!(
            lies_between_metric(&pt(&[0, 0]), &pt(&[4, 0]), &pt(&[1, 0]), &t),
            Ok(false)
        );
        assert!(matches!(
            lies_between_metric(&pt(&[0, 0]), &pt(&[8, 0]), &pt(&[1, 0]), &t),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn box_bounds_are_one_based() {
        let b: GridSpec = "box:4x3".parse().unwrap();
        assert!(b.contains(&pt(&[1, 1])));
        assert!(b.contains(&pt(&[4, 3])));
        assert!(!b.contains(&pt(&[0, 1])));
        assert!(!b.contains(&pt(&[4, 4])));
        assert!(!b.contains(&pt(&[1, 1, 1])));
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::boxed(vec![1, 4]).is_err());
        assert!(GridSpec::boxed(vec![2, 4]).is_ok());
        assert!(GridSpec::torus(vec![2, 4]).is_err());
        assert!(GridSpec::torus(vec![3, 4]).is_ok());
        assert!(GridSpec::boxed(vec![]).is_err());
        assert!(GridSpec::lattice(0).is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["lattice:3", "box:4x4", "torus:8x9x10", "box:2"] {
            let g: GridSpec = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert!("box:4y4".parse::<GridSpec>().is_err());
        assert!("cube:4".parse::<GridSpec>().is_err());
        assert!("box4x4".parse::<GridSpec>().is_err());
    }

    #[test]
    fn vertices_are_lexicographic() {
        let b: GridSpec = "box:2x3".parse().unwrap();
        let vs = b.vertices().unwrap();
        assert_eq!(vs.len(), 6);
        assert_eq!(vs[0], pt(&[1, 1]));
        assert_eq!(vs[1], pt(&[1, 2]));
        assert_eq!(vs[5], pt(&[2, 3]));
        assert!(vs.windows(2).all(|w| w[0] < w[1]));

        let t: GridSpec = "torus:3x3".parse().unwrap();
        let vs = t.vertices().unwrap();
        assert_eq!(vs.first(), Some(&pt(&[0, 0])));
        assert_eq!(vs.last(), Some(&pt(&[2, 2])));
        assert!(GridSpec::lattice(2).unwrap().vertices().is_err());
    }
}
