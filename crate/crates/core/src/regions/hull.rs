//! Planar convex hulls and point-in-polygon classification.

use super::{Membership, TOLERANCE};

pub type Point = (f64, f64);

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain. Returns the hull counter-clockwise, without
/// collinear points, starting from the lowest-leftmost point.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.iter().copied().filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn on_axis(a: Point, b: Point) -> bool {
    (a.0.abs() <= TOLERANCE && b.0.abs() <= TOLERANCE) || (a.1.abs() <= TOLERANCE && b.1.abs() <= TOLERANCE)
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    ((p.0 - a.0 - t * dx).powi(2) + (p.1 - a.1 - t * dy).powi(2)).sqrt()
}

/// Classifies `p` against a counter-clockwise convex polygon in the first
/// quadrant. Edges lying on a coordinate axis do not count as boundary, to
/// match the cut-set convention where rate non-negativity is not a rate
/// constraint.
pub fn classify(hull: &[Point], p: Point) -> Membership {
    if hull.len() < 3 {
        // Degenerate region: a point or a segment.
        let d = match hull {
            [] => f64::INFINITY,
            [a] => segment_distance(p, *a, *a),
            [a, b, ..] => segment_distance(p, *a, *b),
        };
        return if d <= TOLERANCE {
            Membership::Boundary
        } else {
            Membership::Outside
        };
    }
    let mut near_edge = false;
    for i in 0..hull.len() {
        let a = hull[i];
        let b = hull[(i + 1) % hull.len()];
        let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
        let signed = cross(a, b, p) / len;
        if signed < -TOLERANCE {
            return Membership::Outside;
        }
        if signed <= TOLERANCE && !on_axis(a, b) {
            near_edge = true;
        }
    }
    if near_edge {
        Membership::Boundary
    } else {
        Membership::Inside
    }
}
