//! Visibility regions of terrain points.
//!
//! A region is stored as its x-projection: sorted, pairwise disjoint, closed
//! intervals whose endpoints are terrain points. Regions are computed by two
//! sweeps away from the owner, each tracking the steepest blocking vertex seen
//! so far.

use std::cmp::Ordering;

use crate::geometry::{line_intersection, side_of_line};
use crate::scalar::Scalar;
use crate::terrain::{Terrain, TerrainPoint};

/// Closed x-interval of a terrain, given by its end points on the chain.
#[derive(Clone, Debug)]
pub struct Interval<S> {
    pub lo: TerrainPoint<S>,
    pub hi: TerrainPoint<S>,
}

impl<S: Scalar> PartialEq for Interval<S> {
    fn eq(&self, other: &Self) -> bool {
        self.lo == other.lo && self.hi == other.hi
    }
}

impl<S: Scalar> Eq for Interval<S> {}

impl<S: Scalar> Interval<S> {
    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, p: &TerrainPoint<S>) -> bool {
        &self.lo <= p && p <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval<S>) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

#[derive(Clone, Debug)]
pub struct VisibilityRegion<S> {
    pub owner: TerrainPoint<S>,
    pub intervals: Vec<Interval<S>>,
}

impl<S: Scalar> VisibilityRegion<S> {
    pub fn contains(&self, p: &TerrainPoint<S>) -> bool {
        let idx = self.intervals.partition_point(|iv| &iv.hi < p);
        self.intervals.get(idx).is_some_and(|iv| iv.contains(p))
    }

    /// End points of all intervals, sorted, without duplicates.
    pub fn extremal_points(&self) -> Vec<TerrainPoint<S>> {
        let mut out: Vec<TerrainPoint<S>> = Vec::with_capacity(2 * self.intervals.len());
        for iv in &self.intervals {
            out.push(iv.lo.clone());
            if !iv.is_degenerate() {
                out.push(iv.hi.clone());
            }
        }
        out
    }

    /// Whether `other ⊆ self`.
    pub fn dominates(&self, other: &VisibilityRegion<S>) -> bool {
        let mut j = 0;
        for iv in &other.intervals {
            while j < self.intervals.len() && self.intervals[j].hi < iv.lo {
                j += 1;
            }
            match self.intervals.get(j) {
                Some(outer) if outer.contains_interval(iv) => {}
                _ => return false,
            }
        }
        true
    }

    /// Whether the intervals cover the terrain's whole x-range.
    pub fn covers_terrain(&self, terrain: &Terrain<S>) -> bool {
        self.intervals.len() == 1
            && self.intervals[0].lo == terrain.vertex_point(0)
            && self.intervals[0].hi == terrain.vertex_point(terrain.len() - 1)
    }

    pub fn same_intervals(&self, other: &VisibilityRegion<S>) -> bool {
        self.intervals == other.intervals
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Right,
    Left,
}

/// Piece of a sweep, `near` is the end closer to the owner.
struct Piece<S> {
    near: TerrainPoint<S>,
    far: TerrainPoint<S>,
}

/// Visible pieces in one direction, ordered away from `p`.
fn sweep<S: Scalar>(terrain: &Terrain<S>, p: &TerrainPoint<S>, dir: Direction) -> Vec<Piece<S>> {
    use crate::terrain::Location;
    let n = terrain.len();
    // first vertex strictly beyond p in the sweep direction
    let first = match (dir, p.location) {
        (Direction::Right, Location::Vertex(i)) | (Direction::Right, Location::Edge(i)) => {
            if i + 1 >= n {
                return Vec::new();
            }
            i + 1
        }
        (Direction::Left, Location::Vertex(i)) => {
            if i == 0 {
                return Vec::new();
            }
            i - 1
        }
        (Direction::Left, Location::Edge(i)) => i,
    };
    let step = |k: usize| -> Option<usize> {
        match dir {
            Direction::Right => (k + 1 < n).then_some(k + 1),
            Direction::Left => k.checked_sub(1),
        }
    };

    let mut pieces = vec![Piece {
        near: p.clone(),
        far: terrain.vertex_point(first),
    }];
    let mut blocker = first;
    let mut a = first;
    let mut a_on_ray = true;
    while let Some(c) = step(a) {
        let side_c = side_of_line(&p.pos, terrain.vertex(blocker), terrain.vertex(c));
        let piece = if a_on_ray {
            if side_c != Ordering::Less {
                Some((terrain.vertex_point(a), terrain.vertex_point(c)))
            } else {
                Some((terrain.vertex_point(a), terrain.vertex_point(a)))
            }
        } else {
            match side_c {
                Ordering::Greater => {
                    let edge = a.min(c);
                    let pos = line_intersection(
                        &p.pos,
                        terrain.vertex(blocker),
                        terrain.vertex(a),
                        terrain.vertex(c),
                    );
                    Some((terrain.edge_point(edge, pos), terrain.vertex_point(c)))
                }
                Ordering::Equal => Some((terrain.vertex_point(c), terrain.vertex_point(c))),
                Ordering::Less => None,
            }
        };
        if let Some((near, far)) = piece {
            match pieces.last_mut() {
                Some(last) if last.far == near => last.far = far,
                _ => pieces.push(Piece { near, far }),
            }
        }
        if side_c != Ordering::Less {
            blocker = c;
            a_on_ray = true;
        } else {
            a_on_ray = false;
        }
        a = c;
    }
    pieces
}

/// Visibility region of `p`: maximal closed intervals of points seen by `p`.
pub fn visibility_region<S: Scalar>(
    terrain: &Terrain<S>,
    p: &TerrainPoint<S>,
) -> VisibilityRegion<S> {
    let left = sweep(terrain, p, Direction::Left);
    let right = sweep(terrain, p, Direction::Right);
    let mut intervals: Vec<Interval<S>> = Vec::with_capacity(left.len() + right.len() + 1);
    for piece in left.into_iter().rev() {
        intervals.push(Interval {
            lo: piece.far,
            hi: piece.near,
        });
    }
    // both sweeps start at p; make sure p itself is present even at the terrain ends
    match intervals.last() {
        Some(last) if &last.hi == p => {}
        _ => intervals.push(Interval {
            lo: p.clone(),
            hi: p.clone(),
        }),
    }
    for piece in right {
        let last = intervals.last_mut().expect("non-empty");
        if last.hi == piece.near {
            last.hi = piece.far;
        } else {
            intervals.push(Interval {
                lo: piece.near,
                hi: piece.far,
            });
        }
    }
    VisibilityRegion {
        owner: p.clone(),
        intervals,
    }
}

/// Regions of all vertices, computed in parallel.
pub fn vertex_regions<S: Scalar>(terrain: &Terrain<S>) -> Vec<VisibilityRegion<S>> {
    use rayon::prelude::*;
    (0..terrain.len())
        .into_par_iter()
        .map(|i| visibility_region(terrain, &terrain.vertex_point(i)))
        .collect()
}

/// Regions of the given points, computed in parallel.
pub fn regions_of<S: Scalar>(
    terrain: &Terrain<S>,
    points: &[TerrainPoint<S>],
) -> Vec<VisibilityRegion<S>> {
    use rayon::prelude::*;
    points
        .par_iter()
        .map(|p| visibility_region(terrain, p))
        .collect()
}

/// Merges a sorted-by-lo list of closed intervals into maximal disjoint ones.
pub fn merge_intervals<S: Scalar>(mut intervals: Vec<Interval<S>>) -> Vec<Interval<S>> {
    intervals.sort_by(|a, b| a.lo.cmp(&b.lo));
    let mut out: Vec<Interval<S>> = Vec::with_capacity(intervals.len());
    for iv in intervals {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
            }
            _ => out.push(iv),
        }
    }
    out
}
