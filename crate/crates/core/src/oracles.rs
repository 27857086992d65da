//! Slow reference implementations, independent of the production code paths.
//!
//! They share only the terrain type with the rest of the crate and exist to
//! cross-check visibility, discretization and set cover on small inputs.

use std::cmp::Ordering;

use crate::geometry::Point;
use crate::scalar::Scalar;
use crate::setcover::SetCoverInstance;
use crate::terrain::{Location, Terrain, TerrainPoint};
use crate::visibility::{merge_intervals, Interval, VisibilityRegion};

/// Largest instance [`oracle_setcover`] enumerates.
pub const MAX_ORACLE_GUARDS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{0} guards exceed the enumeration limit")]
    TooLarge(usize),
    #[error("some witness is seen by no guard")]
    Infeasible,
}

/// Whether no vertex strictly between `p` and `q` lies above segment `pq`,
/// by comparing against the interpolated segment height.
pub fn oracle_sees<S: Scalar>(
    terrain: &Terrain<S>,
    p: &TerrainPoint<S>,
    q: &TerrainPoint<S>,
) -> bool {
    let (a, b) = if p.x().total_cmp(q.x()) == Ordering::Greater {
        (q, p)
    } else {
        (p, q)
    };
    if a.x().total_cmp(b.x()) == Ordering::Equal {
        return true;
    }
    let dx = b.x().clone() - a.x().clone();
    let dy = b.y().clone() - a.y().clone();
    terrain.vertices().iter().all(|v| {
        if v.x.total_cmp(a.x()) != Ordering::Greater || v.x.total_cmp(b.x()) != Ordering::Less {
            return true;
        }
        let height = a.y().clone() + dy.clone() * (v.x.clone() - a.x().clone()) / dx.clone();
        v.y.total_cmp(&height) != Ordering::Greater
    })
}

/// Visibility region of `p`, computed edge by edge: on each edge the points
/// seeing `p` form an interval cut out by one linear constraint per vertex in
/// between. O(n²).
pub fn oracle_region<S: Scalar>(terrain: &Terrain<S>, p: &TerrainPoint<S>) -> VisibilityRegion<S> {
    let n = terrain.len();
    let mut pieces = Vec::new();
    for j in 0..n - 1 {
        let a = terrain.vertex(j);
        let c = terrain.vertex(j + 1);
        let touches = match p.location {
            Location::Edge(i) => i == j,
            Location::Vertex(i) => i == j || i == j + 1,
        };
        if touches {
            pieces.push(Interval {
                lo: terrain.vertex_point(j),
                hi: terrain.vertex_point(j + 1),
            });
            continue;
        }
        let right = a.x.total_cmp(p.x()) == Ordering::Greater;
        let blockers: Vec<usize> = if right {
            (0..=j)
                .filter(|&k| terrain.vertex(k).x.total_cmp(p.x()) == Ordering::Greater)
                .collect()
        } else {
            (j + 1..n)
                .filter(|&k| terrain.vertex(k).x.total_cmp(p.x()) == Ordering::Less)
                .collect()
        };
        // f(q) = (q.y - p.y)(b.x - p.x) - (b.y - p.y)(q.x - p.x); b is on or
        // below pq iff f >= 0 to the right of p and f <= 0 to the left
        let f = |b: &Point<S>, q: &Point<S>| {
            let v = (q.y.clone() - p.y().clone()) * (b.x.clone() - p.x().clone())
                - (b.y.clone() - p.y().clone()) * (q.x.clone() - p.x().clone());
            if right {
                v
            } else {
                -v
            }
        };
        let mut lo = S::zero();
        let mut hi = S::one();
        let mut empty = false;
        for &k in &blockers {
            let b = terrain.vertex(k);
            let g0 = f(b, a);
            let g1 = f(b, c);
            let zero = S::zero();
            let neg0 = g0.total_cmp(&zero) == Ordering::Less;
            let neg1 = g1.total_cmp(&zero) == Ordering::Less;
            match (neg0, neg1) {
                (false, false) => {}
                (true, true) => empty = true,
                (false, true) => {
                    let t = g0.clone() / (g0 - g1);
                    if t.total_cmp(&hi) == Ordering::Less {
                        hi = t;
                    }
                }
                (true, false) => {
                    let t = g0.clone() / (g0 - g1);
                    if t.total_cmp(&lo) == Ordering::Greater {
                        lo = t;
                    }
                }
            }
        }
        if empty || lo.total_cmp(&hi) == Ordering::Greater {
            continue;
        }
        let at = |t: &S| -> TerrainPoint<S> {
            if t.total_cmp(&S::zero()) == Ordering::Equal {
                terrain.vertex_point(j)
            } else if t.total_cmp(&S::one()) == Ordering::Equal {
                terrain.vertex_point(j + 1)
            } else {
                TerrainPoint {
                    location: Location::Edge(j),
                    pos: Point::new(
                        a.x.clone() + t.clone() * (c.x.clone() - a.x.clone()),
                        a.y.clone() + t.clone() * (c.y.clone() - a.y.clone()),
                    ),
                }
            }
        };
        pieces.push(Interval {
            lo: at(&lo),
            hi: at(&hi),
        });
    }
    VisibilityRegion {
        owner: p.clone(),
        intervals: merge_intervals(pieces),
    }
}

/// Minimum cover by enumerating subsets in order of size (Gosper's hack).
pub fn oracle_setcover(instance: &SetCoverInstance) -> Result<usize, OracleError> {
    let m = instance.guard_count;
    if m > MAX_ORACLE_GUARDS {
        return Err(OracleError::TooLarge(m));
    }
    let masks: Vec<u32> = instance
        .witnesses
        .iter()
        .map(|w| w.iter().fold(0u32, |acc, &g| acc | (1 << g)))
        .collect();
    if masks.contains(&0) {
        return Err(OracleError::Infeasible);
    }
    let covers = |s: u32| masks.iter().all(|&w| w & s != 0);
    if covers(0) {
        return Ok(0);
    }
    for k in 1..=m {
        let mut s: u32 = (1u32 << k) - 1;
        let limit: u64 = 1u64 << m;
        while (s as u64) < limit {
            if covers(s) {
                return Ok(k);
            }
            let c = s & s.wrapping_neg();
            let r = s.wrapping_add(c);
            if r == 0 {
                break;
            }
            s = (((r ^ s) >> 2) / c) | r;
        }
    }
    Err(OracleError::Infeasible)
}

/// Guard sets of every cell of the overlay of `regions`: each distinct region
/// end point and each open gap between consecutive end points.
pub fn oracle_features<S: Scalar>(
    terrain: &Terrain<S>,
    regions: &[VisibilityRegion<S>],
) -> Vec<Vec<u32>> {
    let mut xs: Vec<S> = vec![
        terrain.vertex(0).x.clone(),
        terrain.vertex(terrain.len() - 1).x.clone(),
    ];
    for r in regions {
        for iv in &r.intervals {
            xs.push(iv.lo.x().clone());
            xs.push(iv.hi.x().clone());
        }
    }
    xs.sort_by(|a, b| a.total_cmp(b));
    xs.dedup_by(|a, b| a.total_cmp(b) == Ordering::Equal);
    let two = S::one() + S::one();
    let mut samples = Vec::with_capacity(2 * xs.len());
    for (i, x) in xs.iter().enumerate() {
        samples.push(x.clone());
        if let Some(next) = xs.get(i + 1) {
            samples.push((x.clone() + next.clone()) / two.clone());
        }
    }
    samples
        .iter()
        .map(|x| {
            let q = terrain.point_at(x).expect("inside the terrain");
            (0..regions.len() as u32)
                .filter(|&g| regions[g as usize].contains(&q))
                .collect()
        })
        .collect()
}

/// Minimum number of guards among `guards` seeing every point, where `guards`
/// are arbitrary terrain points.
pub fn oracle_point_set_opt<S: Scalar>(
    terrain: &Terrain<S>,
    guards: &[TerrainPoint<S>],
) -> Result<usize, OracleError> {
    let regions: Vec<_> = guards.iter().map(|g| oracle_region(terrain, g)).collect();
    let mut witnesses = oracle_features(terrain, &regions);
    witnesses.sort();
    witnesses.dedup();
    min_hitting_set(guards.len(), &witnesses)
}

/// Optimum over the vertices plus `k` evenly spaced interior points per edge.
///
/// Restricting guards to a finite set can only increase the optimum, so this
/// bounds the continuous optimum from above; with `k = 0` it is the vertex
/// guard optimum.
pub fn oracle_continuous_opt_upper<S: Scalar>(
    terrain: &Terrain<S>,
    k: usize,
) -> Result<usize, OracleError> {
    let mut guards = Vec::new();
    for j in 0..terrain.len() {
        guards.push(terrain.vertex_point(j));
        if j + 1 == terrain.len() {
            break;
        }
        let a = &terrain.vertex(j).x;
        let w = terrain.vertex(j + 1).x.clone() - a.clone();
        for s in 1..=k {
            let x = a.clone() + w.clone() * S::from_ratio(s as i64, k as i64 + 1);
            guards.push(terrain.point_at(&x).expect("inside the terrain"));
        }
    }
    oracle_point_set_opt(terrain, &guards)
}

/// Minimum hitting set by iterative deepening, branching on the witness with
/// the fewest guards. Independent of the production branch and bound.
pub fn min_hitting_set(guard_count: usize, witnesses: &[Vec<u32>]) -> Result<usize, OracleError> {
    if witnesses.iter().any(|w| w.is_empty()) {
        return Err(OracleError::Infeasible);
    }
    fn search(witnesses: &[Vec<u32>], chosen: &mut Vec<bool>, budget: usize) -> bool {
        let open = witnesses
            .iter()
            .filter(|w| !w.iter().any(|&g| chosen[g as usize]))
            .min_by_key(|w| w.len());
        let Some(w) = open else {
            return true;
        };
        if budget == 0 {
            return false;
        }
        for &g in w {
            chosen[g as usize] = true;
            let ok = search(witnesses, chosen, budget - 1);
            chosen[g as usize] = false;
            if ok {
                return true;
            }
        }
        false
    }
    let mut chosen = vec![false; guard_count];
    for budget in 0..=guard_count {
        if search(witnesses, &mut chosen, budget) {
            return Ok(budget);
        }
    }
    Err(OracleError::Infeasible)
}
