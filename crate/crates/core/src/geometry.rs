//! Points and the orientation predicate.

use std::cmp::Ordering;

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }
}

/// Sign of the cross product `(b - a) x (c - a)`.
///
/// `Greater` means `c` lies to the left of the directed line `a -> b`.
#[inline]
pub fn orient<S: Scalar>(a: &Point<S>, b: &Point<S>, c: &Point<S>) -> Ordering {
    if let (Some(ax), Some(ay), Some(bx), Some(by), Some(cx), Some(cy)) = (
        a.x.enclosure(),
        a.y.enclosure(),
        b.x.enclosure(),
        b.y.enclosure(),
        c.x.enclosure(),
        c.y.enclosure(),
    ) {
        let det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
        if let Some(sign) = det.sign() {
            return sign;
        }
    }
    let det = (b.x.clone() - a.x.clone()) * (c.y.clone() - a.y.clone())
        - (b.y.clone() - a.y.clone()) * (c.x.clone() - a.x.clone());
    det.sign()
}

/// Position of `q` relative to the line through `p` and `b` (with `p.x != b.x`):
/// `Greater` above, `Equal` on, `Less` below.
#[inline]
pub fn side_of_line<S: Scalar>(p: &Point<S>, b: &Point<S>, q: &Point<S>) -> Ordering {
    let o = orient(p, b, q);
    if b.x.total_cmp(&p.x) == Ordering::Less {
        o.reverse()
    } else {
        o
    }
}

/// Intersection of the line through `p` and `b` with the line through `a` and `c`.
///
/// The lines must not be parallel.
pub fn line_intersection<S: Scalar>(
    p: &Point<S>,
    b: &Point<S>,
    a: &Point<S>,
    c: &Point<S>,
) -> Point<S> {
    let d1x = b.x.clone() - p.x.clone();
    let d1y = b.y.clone() - p.y.clone();
    let d2x = c.x.clone() - a.x.clone();
    let d2y = c.y.clone() - a.y.clone();
    let pax = p.x.clone() - a.x.clone();
    let pay = p.y.clone() - a.y.clone();
    let num = d1x.clone() * pay - d1y.clone() * pax;
    let den = d1x * d2y.clone() - d1y * d2x.clone();
    let t = num / den;
    Point {
        x: a.x.clone() + t.clone() * d2x,
        y: a.y.clone() + t * d2y,
    }
}
