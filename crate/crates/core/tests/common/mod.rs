//! Oracles shared by the integration tests. They deliberately avoid the
//! code paths they check: subsets are tested with the metric form of
//! betweenness, and monotone subsequences with a quadratic DP.

#![allow(dead_code)]

use gp_lattice::lattice::{lies_between_metric, GridSpec, Point, PointSet};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::HashSet;

/// True when no three of `points` satisfy `d(u,w) + d(w,v) = d(u,v)`.
pub fn metric_general_position(points: &[&Point], grid: &GridSpec) -> bool {
    let n = points.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let (pa, pb, pc) = (points[a], points[b], points[c]);
                let hit = lies_between_metric(pa, pb, pc, grid).unwrap()
                    || lies_between_metric(pb, pa, pc, grid).unwrap()
                    || lies_between_metric(pa, pc, pb, grid).unwrap();
                if hit {
                    return false;
                }
            }
        }
    }
    true
}

/// gp number and number of maximum general position sets by testing every
/// vertex subset.
pub fn naive_gp(grid: &GridSpec) -> (usize, u64) {
    let vertices = grid.vertices().unwrap();
    let n = vertices.len();
    assert!(n <= 20, "naive oracle is exponential");
    let (mut best, mut count) = (0usize, 0u64);
    for mask in 1u32..(1 << n) {
        let k = mask.count_ones() as usize;
        if k < best {
            continue;
        }
        let subset: Vec<&Point> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &vertices[i])
            .collect();
        if metric_general_position(&subset, grid) {
            if k > best {
                best = k;
                count = 1;
            } else {
                count += 1;
            }
        }
    }
    (best, count)
}

/// Longest non-strict monotone subsequence length, O(N^2) DP.
pub fn lms_length_dp(seq: &[i64]) -> usize {
    let n = seq.len();
    let mut inc = vec![1usize; n];
    let mut dec = vec![1usize; n];
    for j in 0..n {
        for i in 0..j {
            if seq[i] <= seq[j] {
                inc[j] = inc[j].max(inc[i] + 1);
            }
            if seq[i] >= seq[j] {
                dec[j] = dec[j].max(dec[i] + 1);
            }
        }
    }
    inc.into_iter().chain(dec).max().unwrap_or(0)
}

pub fn random_permutation<R: Rng>(rng: &mut R, len: usize) -> Vec<i64> {
    let mut v: Vec<i64> = (0..len as i64).collect();
    v.shuffle(rng);
    v
}

/// `count` distinct random points of `Z^dim` with coordinates in `[-bound, bound]`.
pub fn random_point_set<R: Rng>(rng: &mut R, count: usize, dim: usize, bound: i64) -> PointSet {
    let mut seen = HashSet::new();
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let coords: Vec<i64> = (0..dim).map(|_| rng.gen_range(-bound..=bound)).collect();
        if seen.insert(coords.clone()) {
            points.push(Point::new(coords).unwrap());
        }
    }
    PointSet::new(points).unwrap()
}

/// Every box `P_a x P_b` with `a * b <= 16`, plus the 3- and 4-cubes of side 2.
pub fn small_boxes() -> Vec<GridSpec> {
    let mut out = Vec::new();
    for a in 2..=8u64 {
        for b in 2..=8u64 {
            if a * b <= 16 {
                out.push(GridSpec::boxed(vec![a, b]).unwrap());
            }
        }
    }
    out.push(GridSpec::boxed(vec![2, 2, 2]).unwrap());
    out.push(GridSpec::boxed(vec![2, 2, 2, 2]).unwrap());
    out
}
