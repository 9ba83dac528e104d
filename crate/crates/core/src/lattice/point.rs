use std::collections::HashSet;
use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex of the integer lattice `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<i64>);

impl Point {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        Ok(Point(coords))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<i64>) -> Self {
        debug_assert!(!coords.is_empty());
        Point(coords)
    }
}

impl Index<usize> for Point {
    type Output = i64;

    fn index(&self, axis: usize) -> &i64 {
        &self.0[axis]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Shorthand used throughout the tests: `pt(&[1, 2])`.
pub fn pt(coords: &[i64]) -> Point {
    Point::new(coords.to_vec()).expect("non-empty coordinates")
}

pub(crate) fn check_same_dim(expected: usize, p: &Point) -> Result<()> {
    if p.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: p.dim(),
        });
    }
    Ok(())
}

/// An ordered collection of pairwise distinct points of one dimension.
///
/// Order matters: witness reporting and the exact solver refer to points by
/// their position in the list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
}

impl PointSet {
    /// Builds a set, rejecting mixed dimensions and duplicate points.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptySet)?;
        let dim = first.dim();
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            check_same_dim(dim, p)?;
            if !seen.insert(p) {
                return Err(Error::DuplicatePoint(p.clone()));
            }
        }
        Ok(PointSet { dim, points })
    }

    pub fn from_coords<I, C>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: Into<Vec<i64>>,
    {
        let points = rows
            .into_iter()
            .map(|c| Point::new(c.into()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    /// Caller guarantees a common dimension and distinct points.
    pub(crate) fn from_points_unchecked(dim: usize, points: Vec<Point>) -> Self {
        debug_assert!(points.iter().all(|p| p.dim() == dim));
        PointSet { dim, points }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// The sub-list at the given positions, in the order given.
    pub fn select(&self, indices: &[usize]) -> PointSet {
        PointSet {
            dim: self.dim,
            points: indices.iter().map(|&k| self.points[k].clone()).collect(),
        }
    }

    /// Appends a point, keeping the set invariants.
    pub fn push(&mut self, p: Point) -> Result<()> {
        check_same_dim(self.dim, &p)?;
        if self.points.contains(&p) {
            return Err(Error::DuplicatePoint(p));
        }
        self.points.push(p);
        Ok(())
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.contains(p)
    }
}

impl Index<usize> for PointSet {
    type Output = Point;

    fn index(&self, k: usize) -> &Point {
        &self.points[k]
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}
