#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tgp_core::oracles::oracle_region;
use tgp_core::visibility::merge_intervals;
use tgp_core::{ExactPoint, ExactTerrain, Interval, Location, Rational, Scalar};

/// Terrain from `(dx, y)` steps; the first `dx` is ignored.
pub fn terrain_from_steps(steps: &[(i64, i64)]) -> ExactTerrain {
    let mut x = 0;
    let coords = steps.iter().enumerate().map(|(i, &(dx, y))| {
        if i > 0 {
            x += dx;
        }
        (Rational::from(x), Rational::from(y))
    });
    ExactTerrain::from_coords(coords.collect::<Vec<_>>()).unwrap()
}

pub fn random_steps(rng: &mut ChaCha8Rng, n: usize) -> Vec<(i64, i64)> {
    (0..n)
        .map(|_| (rng.gen_range(1..=3), rng.gen_range(-6..=6)))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Point on edge `edge % edges` at fraction `k / 8`.
pub fn point_on(t: &ExactTerrain, edge: usize, k: i64) -> ExactPoint {
    let e = edge % (t.len() - 1);
    let a = t.vertex(e).x.clone();
    let w = t.vertex(e + 1).x.clone() - a.clone();
    t.point_at(&(a + w * Rational::from_ratio(k, 8))).unwrap()
}

pub fn random_point(rng: &mut ChaCha8Rng, t: &ExactTerrain) -> ExactPoint {
    point_on(t, rng.gen_range(0..t.len()), rng.gen_range(0..=8))
}

/// Whether the regions of `guards` (by the oracle) cover the whole terrain.
pub fn covers(t: &ExactTerrain, guards: &[ExactPoint]) -> bool {
    let all: Vec<Interval<Rational>> = guards
        .iter()
        .flat_map(|g| oracle_region(t, g).intervals)
        .collect();
    let merged = merge_intervals(all);
    merged.len() == 1
        && merged[0].lo == t.vertex_point(0)
        && merged[0].hi == t.vertex_point(t.len() - 1)
}

fn edge_span(t: &ExactTerrain, e: usize) -> (Rational, Rational) {
    (t.vertex(e).x.clone(), t.vertex(e + 1).x.clone())
}

/// Pieces of the regions of `guards` meeting the interior of edge `e`.
fn pieces_on(t: &ExactTerrain, e: usize, guards: &[&ExactPoint]) -> Vec<Interval<Rational>> {
    let (a, b) = edge_span(t, e);
    guards
        .iter()
        .flat_map(|g| oracle_region(t, g).intervals)
        .filter(|iv| iv.lo.x() < &b && iv.hi.x() > &a)
        .collect()
}

fn spans_edge(t: &ExactTerrain, e: usize, pieces: Vec<Interval<Rational>>) -> bool {
    let (a, b) = edge_span(t, e);
    merge_intervals(pieces)
        .iter()
        .any(|iv| iv.lo.x() <= &a && iv.hi.x() >= &b)
}

/// Whether edge `e` is critical for `cover` w.r.t. `cover[i]`: no single
/// guard covers its interior, and the other guards cover part but not all.
fn critical(t: &ExactTerrain, e: usize, cover: &[ExactPoint], i: usize) -> bool {
    if cover
        .iter()
        .any(|g| spans_edge(t, e, pieces_on(t, e, &[g])))
    {
        return false;
    }
    let others: Vec<&ExactPoint> = cover
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, g)| g)
        .collect();
    let pieces = pieces_on(t, e, &others);
    !pieces.is_empty() && !spans_edge(t, e, pieces)
}

/// Checks that no non-vertex guard of `cover` is a left-guard of one edge and
/// a right-guard of another.
pub fn left_right_exclusive(t: &ExactTerrain, cover: &[ExactPoint]) -> Result<(), String> {
    for (i, g) in cover.iter().enumerate() {
        if g.is_vertex() {
            continue;
        }
        let (mut left, mut right) = (false, false);
        for e in 0..t.len() - 1 {
            let (a, b) = edge_span(t, e);
            if (g.x() < &a || g.x() > &b) && critical(t, e, cover, i) {
                if g.x() < &a {
                    left = true;
                } else {
                    right = true;
                }
            }
        }
        if left && right {
            return Err(format!(
                "guard at x = {} is both a left- and a right-guard",
                g.x()
            ));
        }
    }
    Ok(())
}

/// For `g` strictly left (right) of edge `e` seeing part of its interior,
/// `V(g) ∩ e` must be one interval containing the far end point.
pub fn single_interval(t: &ExactTerrain, g: &ExactPoint, e: usize) -> Result<(), String> {
    let (a, b) = edge_span(t, e);
    let left_of = g.x() < &a;
    let right_of = g.x() > &b;
    if !left_of && !right_of {
        return Ok(());
    }
    let region = tgp_core::visibility_region(t, g);
    let on_edge: Vec<&Interval<Rational>> = region
        .intervals
        .iter()
        .filter(|iv| iv.lo.x() <= &b && iv.hi.x() >= &a)
        .collect();
    let sees_interior = on_edge.iter().any(|iv| iv.lo.x() < &b && iv.hi.x() > &a);
    if !sees_interior {
        return Ok(());
    }
    if on_edge.len() != 1 {
        return Err(format!("{} pieces on edge {e}", on_edge.len()));
    }
    let iv = on_edge[0];
    let ok = if left_of {
        iv.hi.x() >= &b
    } else {
        iv.lo.x() <= &a
    };
    if ok {
        Ok(())
    } else {
        Err(format!("piece on edge {e} misses the far vertex"))
    }
}

/// Location of a candidate, for messages.
pub fn describe(p: &ExactPoint) -> String {
    match p.location {
        Location::Vertex(i) => format!("v{i}"),
        Location::Edge(e) => format!("e{e}@{}", p.x()),
    }
}

/// All `k`-subsets of `0..m` in lexicographic order.
pub fn for_each_subset(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
