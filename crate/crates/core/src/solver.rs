//! Exact general position numbers of small boxes and tori.
//!
//! Branch and bound over the vertices in lexicographic order. A node holds
//! the chosen set `S` and the candidates that can still join it: vertices
//! after the last chosen one that form no geodesic triple with any two
//! members of `S`. Adding `v` filters the candidates against the pairs
//! `{a, v}` for `a` in `S`, so every node costs `O(|S| * |candidates|)`.
//!
//! A branch is cut when `|S|` plus an upper bound on what the candidates
//! can add cannot beat the incumbent (one-witness mode) or reach it
//! (counting mode). The bound is the candidate count, and on boxes also
//! the axis-line bound: an axis-parallel line of a box is a path, so it
//! holds at most two points of any general position set.
//!
//! The incumbent starts at the size of the largest extremal set that
//! embeds in the grid.

use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::construction::{construct, extremal_size};
use crate::error::{Error, Result};
use crate::lattice::{find_violating_triple, GridKind, GridSpec, Point, PointSet};

pub const DEFAULT_VERTEX_CAP: u64 = 4096;

/// Vertex budget of [`count_max_gp_grid_2d`].
pub const GRID_2D_CAP: u64 = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    /// Find the gp number and one maximum set.
    OneWitness,
    /// Find the gp number and enumerate every maximum set.
    CountAll,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub mode: SolveMode,
    pub vertex_cap: u64,
    /// Run the top-level branches in order on the calling thread. Values
    /// never depend on scheduling; this pins the witness and node count too.
    pub deterministic: bool,
    /// Start the incumbent from an embedded extremal set.
    pub seed_lower_bound: bool,
    /// Also count maximum sets up to the automorphisms of a box.
    pub count_symmetry_classes: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mode: SolveMode::OneWitness,
            vertex_cap: DEFAULT_VERTEX_CAP,
            deterministic: true,
            seed_lower_bound: true,
            count_symmetry_classes: false,
        }
    }
}

impl SolverConfig {
    pub fn with_mode(mode: SolveMode) -> Self {
        SolverConfig {
            mode,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub gp: usize,
    /// One maximum set, or every maximum set in counting mode, each sorted
    /// lexicographically.
    pub witness_sets: Vec<PointSet>,
    pub count_maximum: Option<u64>,
    /// Box automorphism classes of maximum sets, when requested.
    pub count_up_to_symmetry: Option<u64>,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

/// Vertex data shared by all branches.
struct Instance<'g> {
    grid: &'g GridSpec,
    dim: usize,
    coords: Vec<i64>,
    /// Per axis, the id of the axis-parallel line through each vertex.
    /// Empty for tori, whose lines are cycles.
    line_ids: Vec<Vec<u32>>,
}

impl<'g> Instance<'g> {
    fn new(grid: &'g GridSpec, vertices: &[Point]) -> Self {
        let dim = grid.dim();
        let coords = vertices.iter().flat_map(|p| p.coords().to_vec()).collect();
        let line_ids = if grid.kind() == GridKind::Box {
            let sides = grid.sides();
            let mut strides = vec![1u32; dim];
            for axis in (0..dim.saturating_sub(1)).rev() {
                strides[axis] = strides[axis + 1] * sides[axis + 1] as u32;
            }
            (0..dim)
                .map(|axis| {
                    vertices
                        .iter()
                        .enumerate()
                        .map(|(v, p)| v as u32 - (p[axis] - 1) as u32 * strides[axis])
                        .collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        Instance {
            grid,
            dim,
            coords,
            line_ids,
        }
    }

    fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    #[inline]
    fn at(&self, v: usize) -> &[i64] {
        &self.coords[v * self.dim..(v + 1) * self.dim]
    }

    #[inline]
    fn on_common_geodesic(&self, a: usize, b: usize, c: usize) -> bool {
        let (pa, pb, pc) = (self.at(a), self.at(b), self.at(c));
        self.grid.between_raw(pa, pb, pc)
            || self.grid.between_raw(pb, pa, pc)
            || self.grid.between_raw(pa, pc, pb)
    }
}

struct Branch<'a> {
    inst: &'a Instance<'a>,
    mode: SolveMode,
    shared_best: &'a AtomicUsize,
    best: usize,
    count: u64,
    sets: Vec<Vec<usize>>,
    nodes: u64,
    line_count: Vec<u8>,
}

impl<'a> Branch<'a> {
    fn new(
        inst: &'a Instance<'a>,
        mode: SolveMode,
        shared_best: &'a AtomicUsize,
        floor: usize,
    ) -> Self {
        let line_count = if inst.line_ids.is_empty() {
            Vec::new()
        } else {
            vec![0; inst.len()]
        };
        Branch {
            inst,
            mode,
            shared_best,
            best: floor,
            count: 0,
            sets: Vec::new(),
            nodes: 0,
            line_count,
        }
    }

    /// Smallest final size a branch must be able to reach to stay alive.
    fn needed(&self) -> usize {
        let best = self.best.max(self.shared_best.load(Ordering::Relaxed));
        match self.mode {
            SolveMode::OneWitness => best + 1,
            SolveMode::CountAll => best,
        }
    }

    fn record(&mut self, chosen: &[usize]) {
        let len = chosen.len();
        match self.mode {
            SolveMode::OneWitness => {
                if len > self.best && len > self.shared_best.load(Ordering::Relaxed) {
                    self.best = len;
                    self.sets = vec![chosen.to_vec()];
                    self.count = 1;
                    self.shared_best.fetch_max(len, Ordering::Relaxed);
                }
            }
            SolveMode::CountAll => {
                if len > self.best {
                    self.best = len;
                    self.sets = vec![chosen.to_vec()];
                    self.count = 1;
                    self.shared_best.fetch_max(len, Ordering::Relaxed);
                } else if len == self.best && len > 0 {
                    self.sets.push(chosen.to_vec());
                    self.count += 1;
                }
            }
        }
    }

    /// At most two points per axis-parallel line, minimized over axes.
    fn line_bound(&mut self, chosen: &[usize], cands: &[usize]) -> usize {
        let inst = self.inst;
        let mut bound = chosen.len() + cands.len();
        for ids in &inst.line_ids {
            let mut total = 0;
            for &v in chosen.iter().chain(cands) {
                let slot = &mut self.line_count[ids[v] as usize];
                if *slot < 2 {
                    *slot += 1;
                    total += 1;
                }
            }
            for &v in chosen.iter().chain(cands) {
                self.line_count[ids[v] as usize] = 0;
            }
            bound = bound.min(total);
        }
        bound
    }

    fn extend(&mut self, chosen: &mut Vec<usize>, cands: &[usize]) {
        self.nodes += 1;
        self.record(chosen);
        if cands.is_empty() || chosen.len() + cands.len() < self.needed() {
            return;
        }
        if self.line_bound(chosen, cands) < self.needed() {
            return;
        }
        for (k, &v) in cands.iter().enumerate() {
            if chosen.len() + (cands.len() - k) < self.needed() {
                break;
            }
            let next: Vec<usize> = cands[k + 1..]
                .iter()
                .copied()
                .filter(|&c| {
                    chosen
                        .iter()
                        .all(|&a| !self.inst.on_common_geodesic(a, v, c))
                })
                .collect();
            chosen.push(v);
            self.extend(chosen, &next);
            chosen.pop();
        }
    }
}

fn check_solvable(grid: &GridSpec, cap: u64) -> Result<u64> {
    if grid.kind() == GridKind::InfiniteLattice {
        return Err(Error::UnsupportedGrid(grid.to_string()));
    }
    let vertices = grid.vertex_count().ok_or(Error::VertexCapExceeded {
        vertices: u64::MAX,
        cap,
    })?;
    if vertices > cap {
        return Err(Error::VertexCapExceeded { vertices, cap });
    }
    Ok(vertices)
}

/// Largest extremal set that embeds isometrically: `X(m)` on the `m`
/// longest axes of a box whose sides are all at least `|X(m)|`, or on a
/// torus whose sides are at least `2 |X(m)|`, shifted to 0-based residues.
pub fn seed_set(grid: &GridSpec) -> Option<PointSet> {
    let dim = grid.dim();
    let sides = grid.sides();
    if sides.is_empty() {
        return None;
    }
    let mut by_length: Vec<usize> = (0..dim).collect();
    by_length.sort_by_key(|&axis| std::cmp::Reverse(sides[axis]));
    let (scale, shift) = match grid.kind() {
        GridKind::Torus => (2, 1),
        _ => (1, 0),
    };
    for m in (1..=dim.min(4)).rev() {
        let size = extremal_size(m).ok()?;
        let mut axes = by_length[..m].to_vec();
        // one point on a torus line needs nothing beyond two vertices
        let need = if m == 1 { 2 } else { size * scale };
        if axes.iter().any(|&a| sides[a] < need) {
            continue;
        }
        axes.sort_unstable();
        let x = construct(m).ok()?;
        let origin = grid.origin();
        let points: Vec<Point> = x
            .points()
            .iter()
            .map(|p| {
                let mut coords = vec![origin; dim];
                for (j, &axis) in axes.iter().enumerate() {
                    coords[axis] = p[j] - shift;
                }
                Point::new(coords).expect("dim >= 1")
            })
            .collect();
        let set = PointSet::new(points).ok()?;
        if matches!(find_violating_triple(&set, grid), Ok(None)) {
            return Some(set);
        }
    }
    None
}

fn vertex_index(grid: &GridSpec, p: &Point) -> usize {
    let origin = grid.origin();
    p.coords()
        .iter()
        .zip(grid.sides())
        .fold(0usize, |acc, (&c, &k)| {
            acc * k as usize + (c - origin) as usize
        })
}

/// Exact gp number of a box or torus, with one or all maximum sets.
pub fn max_gp(grid: &GridSpec, config: &SolverConfig) -> Result<SolveResult> {
    let start = Instant::now();
    check_solvable(grid, config.vertex_cap)?;
    let vertices = grid.vertices()?;
    let inst = Instance::new(grid, &vertices);
    let n = vertices.len();

    let seed = if config.seed_lower_bound {
        seed_set(grid)
    } else {
        None
    };
    let floor = seed.as_ref().map_or(0, PointSet::len);
    let shared_best = AtomicUsize::new(floor);

    let run_branch = |first: usize| {
        let mut branch = Branch::new(&inst, config.mode, &shared_best, floor);
        let cands: Vec<usize> = (first + 1..n).collect();
        let mut chosen = vec![first];
        if 1 + cands.len() >= branch.needed() {
            branch.extend(&mut chosen, &cands);
        }
        branch
    };
    let branches: Vec<Branch> = if config.deterministic {
        (0..n).map(run_branch).collect()
    } else {
        (0..n).into_par_iter().map(run_branch).collect()
    };

    // the root node plus everything below it
    let nodes_explored = 1 + branches.iter().map(|b| b.nodes).sum::<u64>();
    let found = branches
        .iter()
        .filter(|b| b.count > 0)
        .map(|b| b.best)
        .max()
        .unwrap_or(0);
    let gp = found.max(floor);

    let mut index_sets: Vec<Vec<usize>> = Vec::new();
    let mut count = 0u64;
    match config.mode {
        SolveMode::OneWitness => {
            if let Some(b) = branches.iter().find(|b| b.count > 0 && b.best == gp) {
                index_sets.push(b.sets[0].clone());
            }
        }
        SolveMode::CountAll => {
            for b in branches.iter().filter(|b| b.best == gp) {
                count += b.count;
                index_sets.extend(b.sets.iter().cloned());
            }
        }
    }
    if index_sets.is_empty() {
        if let Some(seed) = &seed {
            let mut idx: Vec<usize> = seed.iter().map(|p| vertex_index(grid, p)).collect();
            idx.sort_unstable();
            index_sets.push(idx);
        }
    }

    let witness_sets: Vec<PointSet> = index_sets
        .iter()
        .map(|set| {
            PointSet::from_points_unchecked(
                grid.dim(),
                set.iter().map(|&v| vertices[v].clone()).collect(),
            )
        })
        .collect();

    let count_up_to_symmetry = match (config.mode, config.count_symmetry_classes, grid.kind()) {
        (SolveMode::CountAll, true, GridKind::Box) => Some(symmetry_classes(grid, &witness_sets)),
        _ => None,
    };

    Ok(SolveResult {
        gp,
        witness_sets,
        count_maximum: (config.mode == SolveMode::CountAll).then_some(count),
        count_up_to_symmetry,
        nodes_explored,
        elapsed: start.elapsed(),
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for slot in 0..n {
            let mut p = rest.clone();
            p.insert(slot, n - 1);
            out.push(p);
        }
    }
    out
}

/// Number of orbits of `sets` under axis reflections and permutations of
/// equal-length axes.
fn symmetry_classes(grid: &GridSpec, sets: &[PointSet]) -> u64 {
    let sides = grid.sides();
    let dim = sides.len();
    let perms: Vec<Vec<usize>> = permutations(dim)
        .into_iter()
        .filter(|perm| perm.iter().enumerate().all(|(i, &j)| sides[i] == sides[j]))
        .collect();
    let canonical = |set: &PointSet| -> Vec<Vec<i64>> {
        let mut best: Option<Vec<Vec<i64>>> = None;
        for perm in &perms {
            for flips in 0u32..1 << dim {
                let mut image: Vec<Vec<i64>> = set
                    .iter()
                    .map(|p| {
                        (0..dim)
                            .map(|i| {
                                let c = p[perm[i]];
                                if flips >> i & 1 == 1 {
                                    sides[i] as i64 + 1 - c
                                } else {
                                    c
                                }
                            })
                            .collect()
                    })
                    .collect();
                image.sort_unstable();
                if best.as_ref().is_none_or(|b| image < *b) {
                    best = Some(image);
                }
            }
        }
        best.unwrap_or_default()
    };
    sets.iter().map(canonical).collect::<HashSet<_>>().len() as u64
}

/// gp number of `P_r x P_s` and the number of its maximum general position
/// sets, by enumeration.
pub fn count_max_gp_grid_2d(r: u64, s: u64) -> Result<(usize, u64)> {
    let grid = GridSpec::boxed(vec![r, s])?;
    let vertices = r.saturating_mul(s);
    if vertices > GRID_2D_CAP {
        return Err(Error::VertexCapExceeded {
            vertices,
            cap: GRID_2D_CAP,
        });
    }
    let config = SolverConfig {
        mode: SolveMode::CountAll,
        vertex_cap: GRID_2D_CAP,
        deterministic: false,
        ..SolverConfig::default()
    };
    let res = max_gp(&grid, &config)?;
    Ok((res.gp, res.count_maximum.unwrap_or(0)))
}

/// Embeds `X(n)` in the torus `C_{k_1} x ... x C_{k_n}` (coordinates moved
/// to 0-based residues) and checks it is in general position under the
/// cyclic metric. Needs every side at least `2^(2^(n-1)+1)`.
pub fn verify_torus_lower_bound(n: usize, sides: &[u64]) -> Result<bool> {
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension {
            dim: n,
            min: 2,
            max: 3,
        });
    }
    if sides.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: sides.len(),
        });
    }
    let min = 2 * extremal_size(n)?;
    if let Some(&side) = sides.iter().find(|&&k| k < min) {
        return Err(Error::InvalidSide {
            kind: "torus",
            side,
            min,
        });
    }
    let grid = GridSpec::torus(sides.to_vec())?;
    let points = construct(n)?
        .points()
        .iter()
        .map(|p| Point::new(p.coords().iter().map(|c| c - 1).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(find_violating_triple(&PointSet::new(points)?, &grid)?.is_none())
}

/// `gp(A x B) >= gp(A) + gp(B) - 2`.
pub fn check_product_inequality(g_a: usize, g_b: usize, g_ab: usize) -> bool {
    g_ab + 2 >= g_a + g_b
}
