//! Recursive extremal general position sets in `Z^n`.
//!
//! `X(1) = {1, 2}` and `X(2) = {(1,2), (2,1), (3,4), (4,3)}` are fixed. For
//! `n >= 3` the `N = 2^(2^(n-1))` points of `X(n)` are split into `B` blocks
//! of `B = 2^(2^(n-2))` consecutive indices. Writing `i = p*B + r` with
//! `0 <= p < B` and `1 <= r <= B`, and `a = X(n-1)[p+1]`, `b = X(n-1)[r]`,
//! point `i` of `X(n)` has coordinates
//!
//! ```text
//! x[1] = i
//! x[j] = (a[j] - 1) * B + b[j]          for 2 <= j <= n-1
//! x[n] = a[n-1] * B - b[n-1] + 1
//! ```
//!
//! Indices are 1-based here to match the coordinate values, which run over
//! `1..=N` in every column.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lattice::{Point, PointSet};

/// Largest dimension whose set is built in memory (65 536 points).
pub const MAX_MATERIALIZED_DIM: usize = 5;
/// Largest dimension supported at all; `n = 7` needs coordinates up to `2^64`.
pub const MAX_DIM: usize = 6;

fn check_dim(n: usize, min: usize, max: usize) -> Result<()> {
    if n < min || n > max {
        return Err(Error::UnsupportedDimension { dim: n, min, max });
    }
    Ok(())
}

/// `|X(n)| = 2^(2^(n-1))`.
pub fn extremal_size(n: usize) -> Result<u64> {
    check_dim(n, 1, MAX_DIM)?;
    1u64.checked_shl(1 << (n - 1))
        .ok_or(Error::Overflow("computing the extremal set size"))
}

/// Block length `2^(2^(n-2))` used when building `X(n)`, which is also
/// `|X(n-1)|`.
pub fn block_size(n: usize) -> Result<u64> {
    check_dim(n, 2, MAX_DIM)?;
    extremal_size(n - 1)
}

/// `i = p * block + r` with `r` in `1..=block`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockIndex {
    pub p: u64,
    pub r: u64,
}

impl BlockIndex {
    pub fn index(&self, block: u64) -> u64 {
        self.p * block + self.r
    }
}

/// Splits a 1-based index of `X(n)` into its block number and the 1-based
/// offset inside the block. A multiple of the block size lands on the last
/// slot of the previous block, never on `r = 0`.
pub fn block_decompose(i: u64, n: usize) -> Result<BlockIndex> {
    check_dim(n, 3, MAX_DIM)?;
    let size = extremal_size(n)?;
    if i == 0 || i > size {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: size,
        });
    }
    let block = block_size(n)?;
    Ok(BlockIndex {
        p: (i - 1) / block,
        r: (i - 1) % block + 1,
    })
}

/// `X(n)` with point `i` stored at position `i - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalSet {
    n: usize,
    points: PointSet,
}

impl ExtremalSet {
    /// Wraps an arbitrary point list that has the shape of `X(n)`: the
    /// right cardinality and first coordinates `1, 2, ..., N` in order.
    /// Used to run the structural checks on modified sets.
    pub fn from_point_set(points: PointSet) -> Result<Self> {
        let n = points.dim();
        let size = extremal_size(n)?;
        if points.len() as u64 != size {
            return Err(Error::BelowThreshold {
                found: points.len() as u64,
                required: size,
            });
        }
        if let Some(p) = points
            .iter()
            .zip(1i64..)
            .find_map(|(p, i)| (p[0] != i).then_some(p))
        {
            return Err(Error::Parse(format!(
                "point {p} breaks the first-coordinate order"
            )));
        }
        Ok(ExtremalSet { n, points })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn into_point_set(self) -> PointSet {
        self.points
    }

    /// Point with 1-based index `i`.
    pub fn point(&self, i: usize) -> &Point {
        &self.points[i - 1]
    }

    /// Values of coordinate `axis` (0-based) in index order.
    pub fn column(&self, axis: usize) -> Vec<i64> {
        self.points.iter().map(|p| p[axis]).collect()
    }
}

fn base_case(n: usize) -> Vec<Vec<i64>> {
    match n {
        1 => vec![vec![1], vec![2]],
        2 => vec![vec![1, 2], vec![2, 1], vec![3, 4], vec![4, 3]],
        _ => unreachable!("base cases are n = 1, 2"),
    }
}

/// Coordinates of point `i` of `X(n)` from `a = X(n-1)[p+1]` and
/// `b = X(n-1)[r]`.
fn combine(i: u64, a: &[i64], b: &[i64], block: i64) -> Vec<i64> {
    let n = a.len() + 1;
    let mut x = Vec::with_capacity(n);
    x.push(i as i64);
    for j in 1..n - 1 {
        x.push((a[j] - 1) * block + b[j]);
    }
    x.push(a[n - 2] * block - b[n - 2] + 1);
    x
}

fn next_level(prev: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let block = prev.len();
    let mut out = Vec::with_capacity(block * block);
    for (p, a) in prev.iter().enumerate() {
        for (r0, b) in prev.iter().enumerate() {
            let i = (p * block + r0 + 1) as u64;
            out.push(combine(i, a, b, block as i64));
        }
    }
    out
}

/// Builds `X(n)` level by level, for `1 <= n <= 5`.
pub fn construct(n: usize) -> Result<ExtremalSet> {
    if n == MAX_DIM {
        return Err(Error::UnsupportedDimension {
            dim: n,
            min: 1,
            max: MAX_MATERIALIZED_DIM,
        });
    }
    check_dim(n, 1, MAX_MATERIALIZED_DIM)?;
    let mut rows = base_case(n.min(2));
    for _ in 3..=n {
        rows = next_level(&rows);
    }
    let points = rows.into_iter().map(Point::from_vec_unchecked).collect();
    Ok(ExtremalSet {
        n,
        points: PointSet::from_points_unchecked(n, points),
    })
}

fn streaming_coords(n: usize, i: u64) -> Vec<i64> {
    if n <= 2 {
        return base_case(n)[(i - 1) as usize].clone();
    }
    let block = 1u64 << (1 << (n - 2));
    let (p, r) = ((i - 1) / block, (i - 1) % block + 1);
    let a = streaming_coords(n - 1, p + 1);
    let b = streaming_coords(n - 1, r);
    combine(i, &a, &b, block as i64)
}

/// Point `i` (1-based) of `X(n)` without materializing the set. Works up to
/// `n = 6`, where the set has `2^32` points.
pub fn construct_streaming(n: usize, i: u64) -> Result<Point> {
    let size = extremal_size(n)?;
    if i == 0 || i > size {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: size,
        });
    }
    Ok(Point::from_vec_unchecked(streaming_coords(n, i)))
}

/// Within every block the last two coordinates are oppositely ordered.
pub fn check_claim_a(x: &ExtremalSet) -> Result<bool> {
    let n = x.dim();
    check_dim(n, 3, MAX_DIM)?;
    let block = block_size(n)? as usize;
    let (ax, bx) = (n - 2, n - 1);
    Ok(x.points.points().chunks(block).all(|chunk| {
        chunk.iter().enumerate().all(|(k, pi)| {
            chunk[k + 1..].iter().all(|pj| {
                let forward = (pi[ax] < pj[ax]) == (pi[bx] > pj[bx]);
                let backward = (pj[ax] < pi[ax]) == (pj[bx] > pi[bx]);
                forward && backward
            })
        })
    }))
}

/// True when every coordinate column is a permutation of `1..=N`.
pub fn columns_are_permutations(x: &ExtremalSet) -> bool {
    let size = x.len() as i64;
    (0..x.dim()).all(|axis| {
        let mut col = x.column(axis);
        col.sort_unstable();
        col.into_iter().eq(1..=size)
    })
}

/// For indices in different blocks the last two coordinates are ordered
/// the same way. Checked over all cross-block pairs by counting
/// inversions: sorting by coordinate `n-1`, every inversion of coordinate
/// `n` must fall inside a single block.
pub fn check_cross_block_order(x: &ExtremalSet) -> Result<bool> {
    let n = x.dim();
    check_dim(n, 3, MAX_DIM)?;
    let block = block_size(n)? as usize;
    let (ax, bx) = (n - 2, n - 1);
    let pts = x.points.points();

    let distinct = |axis: usize| {
        let mut col = x.column(axis);
        col.sort_unstable();
        col.windows(2).all(|w| w[0] != w[1])
    };
    if !distinct(ax) || !distinct(bx) {
        return Ok(cross_block_order_pairwise(pts, block, ax, bx));
    }

    let ordered_by = |slice: &[Point]| {
        let mut pairs: Vec<(i64, i64)> = slice.iter().map(|p| (p[ax], p[bx])).collect();
        pairs.sort_unstable();
        pairs.into_iter().map(|(_, b)| b).collect::<Vec<_>>()
    };
    let total = count_inversions(&mut ordered_by(pts));
    let within: u64 = pts
        .chunks(block)
        .map(|chunk| count_inversions(&mut ordered_by(chunk)))
        .sum();
    Ok(total == within)
}

fn cross_block_order_pairwise(pts: &[Point], block: usize, ax: usize, bx: usize) -> bool {
    (0..pts.len()).all(|i| {
        (i + 1..pts.len())
            .filter(|j| i / block != j / block)
            .all(|j| {
                let (pi, pj) = (&pts[i], &pts[j]);
                (pi[ax] < pj[ax]) == (pi[bx] < pj[bx]) && (pj[ax] < pi[ax]) == (pj[bx] < pi[bx])
            })
    })
}

/// Number of pairs `k < l` with `seq[k] > seq[l]`; sorts `seq` as a side
/// effect.
pub fn count_inversions(seq: &mut [i64]) -> u64 {
    let mut buf = seq.to_vec();
    merge_count(seq, &mut buf)
}

fn merge_count(seq: &mut [i64], buf: &mut [i64]) -> u64 {
    let len = seq.len();
    if len < 2 {
        return 0;
    }
    let mid = len / 2;
    let mut inv = {
        let (lo, hi) = seq.split_at_mut(mid);
        let (blo, bhi) = buf.split_at_mut(mid);
        merge_count(lo, blo) + merge_count(hi, bhi)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < len {
        if seq[i] <= seq[j] {
            buf[k] = seq[i];
            i += 1;
        } else {
            buf[k] = seq[j];
            inv += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&seq[i..mid]);
    k += mid - i;
    buf[k..k + len - j].copy_from_slice(&seq[j..len]);
    seq.copy_from_slice(&buf[..len]);
    inv
}

/// Contracts every block to one point: coordinate `j < n` becomes
/// `(x[j] - 1) / B`, the block's number along that axis. The distinct
/// results, in first-seen order, form a copy of `X(n-1)` shifted by `-1`.
pub fn block_projection(x: &ExtremalSet) -> Result<PointSet> {
    let n = x.dim();
    check_dim(n, 3, MAX_DIM)?;
    let block = block_size(n)? as i64;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for p in x.points.iter() {
        let coords: Vec<i64> = p.coords()[..n - 1]
            .iter()
            .map(|&c| (c - 1).div_euclid(block))
            .collect();
        if seen.insert(coords.clone()) {
            out.push(Point::from_vec_unchecked(coords));
        }
    }
    Ok(PointSet::from_points_unchecked(n - 1, out))
}

/// Row-per-coordinate CSV layout: a header `i,1,...,N`, then one row
/// `x<j>,...` per coordinate.
pub fn table_csv(n: usize) -> Result<String> {
    let x = construct(n)?;
    let mut out = String::from("i");
    for i in 1..=x.len() {
        write!(out, ",{i}").unwrap();
    }
    out.push('\n');
    for axis in 0..n {
        write!(out, "x{}", axis + 1).unwrap();
        for v in x.column(axis) {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}
