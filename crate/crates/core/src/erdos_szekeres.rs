//! Monotone subsequences and the geodesic witness finder.
//!
//! Any sequence of `(m-1)^2 + 1` values has a monotone subsequence of length
//! `m`. Applied one coordinate at a time this shrinks any
//! `2^(2^(n-1)) + 1` points of `Z^n` down to three points that are monotone
//! in every coordinate at once, and the middle one of those lies on a
//! shortest path between the outer two.
//!
//! Monotone always means non-strict here, so ties are allowed in either
//! direction.

use std::cmp::Reverse;

use serde::Serialize;

use crate::construction::{extremal_size, MAX_DIM};
use crate::error::{Error, Result};
use crate::lattice::{Point, PointSet, WitnessTriple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Strictly increasing positions into a source sequence whose values are
/// monotone in `direction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneChain {
    pub indices: Vec<usize>,
    pub direction: Direction,
}

impl MonotoneChain {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Longest non-decreasing subsequence by patience sorting, O(N log N).
///
/// `tails[k]` holds the position of the smallest value that ends a chain of
/// length `k + 1`; each new value goes on the first pile whose top is
/// strictly greater, so equal values extend a chain instead of replacing
/// its end. The chain is rebuilt from the back pointers of the last pile.
fn longest_nondecreasing<T: Ord>(seq: &[T]) -> Vec<usize> {
    if seq.is_empty() {
        return Vec::new();
    }
    let mut tails: Vec<usize> = Vec::new();
    let mut prev: Vec<Option<usize>> = vec![None; seq.len()];
    for (k, x) in seq.iter().enumerate() {
        let pile = tails.partition_point(|&t| seq[t] <= *x);
        if pile > 0 {
            prev[k] = Some(tails[pile - 1]);
        }
        if pile == tails.len() {
            tails.push(k);
        } else {
            tails[pile] = k;
        }
    }
    let mut chain = Vec::with_capacity(tails.len());
    let mut cur = tails.last().copied();
    while let Some(k) = cur {
        chain.push(k);
        cur = prev[k];
    }
    chain.reverse();
    chain
}

/// A longest monotone subsequence of `seq`; increasing wins a tie.
pub fn longest_monotone_subsequence<T: Ord>(seq: &[T]) -> Result<MonotoneChain> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let inc = longest_nondecreasing(seq);
    let reversed: Vec<Reverse<&T>> = seq.iter().map(Reverse).collect();
    let dec = longest_nondecreasing(&reversed);
    Ok(if inc.len() >= dec.len() {
        MonotoneChain {
            indices: inc,
            direction: Direction::Increasing,
        }
    } else {
        MonotoneChain {
            indices: dec,
            direction: Direction::Decreasing,
        }
    })
}

pub fn is_monotone<T: Ord>(values: &[T]) -> bool {
    values.windows(2).all(|w| w[0] <= w[1]) || values.windows(2).all(|w| w[0] >= w[1])
}

/// Shortest length that forces a monotone subsequence of length `m`:
/// `(m-1)^2 + 1`.
pub fn forcing_length(m: u64) -> Option<u64> {
    let k = m.checked_sub(1)?;
    k.checked_mul(k)?.checked_add(1)
}

/// `m - 1` increasing runs of `m - 1` decreasing values. Its length is
/// `(m-1)^2` and its longest monotone subsequence has length `m - 1`.
pub fn tightness_sequence(m: usize) -> Vec<i64> {
    let k = m.saturating_sub(1);
    (0..k)
        .flat_map(|block| (0..k).rev().map(move |x| (block * k + x) as i64))
        .collect()
}

/// Positions into `points` of exactly `target` points, in list order,
/// monotone along `axis`.
fn reduce_positions(points: &[&Point], axis: usize, target: usize) -> Result<Vec<usize>> {
    let dim = points.first().ok_or(Error::EmptySet)?.dim();
    if axis >= dim {
        return Err(Error::DimensionMismatch {
            expected: axis + 1,
            found: dim,
        });
    }
    for earlier in 0..axis {
        let col: Vec<i64> = points.iter().map(|p| p[earlier]).collect();
        if !is_monotone(&col) {
            return Err(Error::NotMonotone { axis: earlier });
        }
    }
    let target = target.max(1);
    let required = forcing_length(target as u64).ok_or(Error::Overflow("forcing length"))?;
    if (points.len() as u64) < required {
        return Err(Error::BelowThreshold {
            found: points.len() as u64,
            required,
        });
    }
    let values: Vec<i64> = points.iter().map(|p| p[axis]).collect();
    let mut chain = longest_monotone_subsequence(&values)?.indices;
    debug_assert!(chain.len() >= target);
    chain.truncate(target);
    Ok(chain)
}

/// Keeps `target` points, in list order, whose `axis` coordinates are
/// monotone. Coordinates before `axis` must already be monotone along the
/// list and stay so. Needs at least `(target-1)^2 + 1` points.
pub fn reduce_by_coordinate(points: &PointSet, axis: usize, target: usize) -> Result<PointSet> {
    let refs: Vec<&Point> = points.iter().collect();
    let keep = reduce_positions(&refs, axis, target)?;
    Ok(points.select(&keep))
}

/// Minimum set size for which a witness is guaranteed: `2^(2^(n-1)) + 1`.
pub fn witness_threshold(n: usize) -> Result<u64> {
    extremal_size(n)?
        .checked_add(1)
        .ok_or(Error::Overflow("computing the witness threshold"))
}

/// Points kept after reducing along `axis` in dimension `n`:
/// `2^(2^(n-1-axis)) + 1`, ending at 3 on the last axis.
pub fn stage_target(n: usize, axis: usize) -> u64 {
    (1u64 << (1u32 << (n - 1 - axis))) + 1
}

/// Survivors after one stage, as positions into the caller's point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStage {
    pub axis: usize,
    pub survivors: Vec<usize>,
}

/// Three points of `points` on a common geodesic of `Z^n`, found by sorting
/// and then reducing one coordinate at a time.
pub fn witness_triple(points: &PointSet) -> Result<WitnessTriple> {
    witness_triple_traced(points).map(|(t, _)| t)
}

/// As [`witness_triple`], also returning the survivors of every stage.
/// Stage 0 is the lexicographic sort order of the whole input.
pub fn witness_triple_traced(points: &PointSet) -> Result<(WitnessTriple, Vec<ReductionStage>)> {
    let n = points.dim();
    let found = points.len() as u64;
    let required = if n > MAX_DIM {
        u64::MAX
    } else {
        witness_threshold(n)?
    };
    if found < required {
        return Err(Error::BelowThreshold { found, required });
    }

    let mut current: Vec<usize> = (0..points.len()).collect();
    current.sort_by(|&a, &b| points[a].cmp(&points[b]));
    let mut trace = vec![ReductionStage {
        axis: 0,
        survivors: current.clone(),
    }];

    for axis in 1..n {
        let refs: Vec<&Point> = current.iter().map(|&k| &points[k]).collect();
        let keep = reduce_positions(&refs, axis, stage_target(n, axis) as usize)?;
        current = keep.into_iter().map(|pos| current[pos]).collect();
        trace.push(ReductionStage {
            axis,
            survivors: current.clone(),
        });
    }

    let triple = WitnessTriple {
        u: points[current[0]].clone(),
        w: points[current[1]].clone(),
        v: points[current[2]].clone(),
    };
    Ok((triple, trace))
}
