//! x-monotone terrains, points on them, and the visibility predicate.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::error::TerrainError;
use crate::geometry::{orient, Point};
use crate::scalar::{format_scalar, parse_rational, Scalar};

/// Where a [`TerrainPoint`] sits on the chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Location {
    Vertex(usize),
    /// Interior of the edge between vertices `i` and `i + 1`.
    Edge(usize),
}

/// A point on a terrain in canonical form: points at vertex x-coordinates are
/// always `Location::Vertex`.
#[derive(Clone, Debug)]
pub struct TerrainPoint<S> {
    pub location: Location,
    pub pos: Point<S>,
}

impl<S: Scalar> TerrainPoint<S> {
    #[inline]
    pub fn x(&self) -> &S {
        &self.pos.x
    }

    #[inline]
    pub fn y(&self) -> &S {
        &self.pos.y
    }

    pub fn is_vertex(&self) -> bool {
        matches!(self.location, Location::Vertex(_))
    }

    /// Total order along the terrain.
    #[inline]
    pub fn cmp_x(&self, other: &Self) -> Ordering {
        match (self.location, other.location) {
            (Location::Vertex(a), Location::Vertex(b)) => a.cmp(&b),
            (Location::Vertex(a), Location::Edge(b)) if a <= b => Ordering::Less,
            (Location::Vertex(_), Location::Edge(_)) => Ordering::Greater,
            (Location::Edge(a), Location::Vertex(b)) if b <= a => Ordering::Greater,
            (Location::Edge(_), Location::Vertex(_)) => Ordering::Less,
            (Location::Edge(a), Location::Edge(b)) if a != b => a.cmp(&b),
            _ => self.pos.x.total_cmp(&other.pos.x),
        }
    }
}

impl<S: Scalar> PartialEq for TerrainPoint<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_x(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for TerrainPoint<S> {}

impl<S: Scalar> PartialOrd for TerrainPoint<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for TerrainPoint<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_x(other)
    }
}

/// An x-monotone polygonal chain with at least one edge.
#[derive(Clone, Debug)]
pub struct Terrain<S> {
    vertices: Vec<Point<S>>,
}

impl<S: Scalar> Terrain<S> {
    pub fn new(vertices: Vec<Point<S>>) -> Result<Self, TerrainError> {
        if vertices.len() < 2 {
            return Err(TerrainError::TooFewVertices(vertices.len()));
        }
        for (i, w) in vertices.windows(2).enumerate() {
            if w[0].x.total_cmp(&w[1].x) != Ordering::Less {
                return Err(TerrainError::NotMonotone { vertex: i + 1 });
            }
        }
        Ok(Terrain { vertices })
    }

    pub fn from_coords<I>(coords: I) -> Result<Self, TerrainError>
    where
        I: IntoIterator<Item = (S, S)>,
    {
        Self::new(coords.into_iter().map(|(x, y)| Point::new(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Point<S>] {
        &self.vertices
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> &Point<S> {
        &self.vertices[i]
    }

    pub fn vertex_point(&self, i: usize) -> TerrainPoint<S> {
        TerrainPoint {
            location: Location::Vertex(i),
            pos: self.vertices[i].clone(),
        }
    }

    pub fn x_range(&self) -> (&S, &S) {
        (&self.vertices[0].x, &self.vertices[self.len() - 1].x)
    }

    /// y-coordinate of the edge `i` line at `x`.
    pub fn edge_y(&self, edge: usize, x: &S) -> S {
        let a = &self.vertices[edge];
        let b = &self.vertices[edge + 1];
        a.y.clone()
            + (b.y.clone() - a.y.clone()) * (x.clone() - a.x.clone()) / (b.x.clone() - a.x.clone())
    }

    /// Interior edge point with precomputed coordinates. `x` must lie strictly
    /// inside the edge's x-range.
    pub fn edge_point(&self, edge: usize, pos: Point<S>) -> TerrainPoint<S> {
        debug_assert!(pos.x > self.vertices[edge].x && pos.x < self.vertices[edge + 1].x);
        TerrainPoint {
            location: Location::Edge(edge),
            pos,
        }
    }

    /// Canonical terrain point at `x`, or `None` outside the terrain's x-range.
    pub fn point_at(&self, x: &S) -> Option<TerrainPoint<S>> {
        let (lo, hi) = self.x_range();
        if x.total_cmp(lo) == Ordering::Less || x.total_cmp(hi) == Ordering::Greater {
            return None;
        }
        let idx = self
            .vertices
            .binary_search_by(|v| v.x.total_cmp(x))
            .map_err(|ins| ins - 1);
        Some(match idx {
            Ok(i) => self.vertex_point(i),
            Err(e) => TerrainPoint {
                location: Location::Edge(e),
                pos: Point::new(x.clone(), self.edge_y(e, x)),
            },
        })
    }

    /// Index range of vertices with x strictly between `a` and `b` (`a <= b`).
    pub fn vertices_between(
        &self,
        a: &TerrainPoint<S>,
        b: &TerrainPoint<S>,
    ) -> std::ops::Range<usize> {
        let start = match a.location {
            Location::Vertex(i) | Location::Edge(i) => i + 1,
        };
        let end = match b.location {
            Location::Vertex(j) => j,
            Location::Edge(j) => j + 1,
        };
        start..end.max(start)
    }

    /// Whether the segment `pq` lies nowhere below the terrain.
    pub fn sees(&self, p: &TerrainPoint<S>, q: &TerrainPoint<S>) -> bool {
        let (a, b) = if p <= q { (p, q) } else { (q, p) };
        if a == b {
            return true;
        }
        self.vertices_between(a, b)
            .all(|i| orient(&a.pos, &b.pos, &self.vertices[i]) != Ordering::Greater)
    }

    /// Parses the terrain text format: a vertex count followed by one `x y`
    /// line per vertex; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, TerrainError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (count_line, count_text) = lines.next().ok_or(TerrainError::Empty)?;
        let count: usize = count_text.parse().map_err(|_| TerrainError::Syntax {
            line: count_line,
            message: format!("expected vertex count, found {count_text:?}"),
        })?;
        let mut vertices: Vec<Point<S>> = Vec::with_capacity(count);
        let mut prev_x = None;
        for (line, content) in lines.by_ref().take(count) {
            let mut parts = content.split_whitespace();
            let (Some(xs), Some(ys), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(TerrainError::Syntax {
                    line,
                    message: format!("expected \"x y\", found {content:?}"),
                });
            };
            let x = parse_rational(xs).map_err(|e| TerrainError::Syntax {
                line,
                message: e.to_string(),
            })?;
            let y = parse_rational(ys).map_err(|e| TerrainError::Syntax {
                line,
                message: e.to_string(),
            })?;
            if let Some(px) = &prev_x {
                if &x <= px {
                    return Err(TerrainError::NotMonotoneAtLine { line });
                }
            }
            vertices.push(Point::new(S::from_rational(&x), S::from_rational(&y)));
            prev_x = Some(x);
        }
        if vertices.len() != count {
            return Err(TerrainError::Syntax {
                line: count_line,
                message: format!("declared {count} vertices, found {}", vertices.len()),
            });
        }
        if let Some((line, extra)) = lines.next() {
            return Err(TerrainError::Syntax {
                line,
                message: format!("unexpected trailing content {extra:?}"),
            });
        }
        Terrain::new(vertices)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.len());
        for v in &self.vertices {
            let _ = writeln!(out, "{} {}", format_scalar(&v.x), format_scalar(&v.y));
        }
        out
    }

    /// Converts coordinates into another scalar type.
    pub fn convert<T: Scalar>(&self) -> Terrain<T> {
        Terrain {
            vertices: self
                .vertices
                .iter()
                .map(|v| {
                    Point::new(
                        T::from_rational(&v.x.to_rational().expect("finite coordinate")),
                        T::from_rational(&v.y.to_rational().expect("finite coordinate")),
                    )
                })
                .collect(),
        }
    }
}
