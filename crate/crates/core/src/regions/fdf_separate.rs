//! Functional-decode-forward with separate source-channel coding on the
//! binary two-way relay channel.
//!
//! With `R2 >= R1` the relay broadcasts the pairwise sum to both users and
//! user 2's excess `B2` (rate `R2'`) to user 1 only, as a broadcast channel
//! with degraded message sets. For a split parameter `beta` in `[0, 1/2]`:
//!
//! ```text
//! R1       <= 1 - H(beta * rho2)
//! R2'      <= H(beta * rho1) - H(rho1)
//! R1 + R2' <= 1 - max(H(rho0), H(rho1))
//! ```
//!
//! giving the rate pair `(R1, R1 + R2')`. The mirrored family in `alpha`
//! gives `(R2 + R1', R2)`. The region is the convex hull of both families,
//! closed downwards.

use super::hull::{classify, convex_hull, Point};
use super::{BinaryTwrc, Membership, RateRegion};
use crate::entropy::binary_entropy;
use crate::error::{Error, Result};

/// Default spacing of the `beta` / `alpha` grid on `[0, 1/2]`.
pub const DEFAULT_GRID_STEP: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct FdfSeparateRegion {
    hull: Vec<Point>,
}

/// Corners of `{0 <= x <= a, 0 <= y <= b, x + y <= c}`.
fn clipped_box_corners(a: f64, b: f64, c: f64) -> Vec<Point> {
    let (a, b, c) = (a.max(0.0), b.max(0.0), c.max(0.0));
    let mut out = vec![(0.0, 0.0), (a.min(c), 0.0), (0.0, b.min(c))];
    if c >= a {
        out.push((a, b.min(c - a)));
    }
    if c >= b {
        out.push((a.min(c - b), b));
    }
    out
}

impl FdfSeparateRegion {
    /// Grid of `points` evenly spaced split values on `[0, 1/2]`.
    pub fn with_points(channel: &BinaryTwrc, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::invalid(format!(
                "split-parameter grid needs at least 2 points, got {points}"
            )));
        }
        let h = |x: f64| binary_entropy(x).expect("in range");
        let (r0, r1, r2) = (channel.rho0, channel.rho1, channel.rho2);
        let sum1 = 1.0 - h(r0).max(h(r1));
        let sum2 = 1.0 - h(r0).max(h(r2));
        let mut cloud: Vec<Point> = Vec::new();
        for i in 0..points {
            let t = 0.5 * i as f64 / (points - 1) as f64;
            let private1 = (1.0 - BinaryTwrc::convolved_capacity(t, r1)) - h(r1);
            for (x, y) in clipped_box_corners(BinaryTwrc::convolved_capacity(t, r2), private1, sum1) {
                cloud.push((x, x + y));
            }
            let private2 = (1.0 - BinaryTwrc::convolved_capacity(t, r2)) - h(r2);
            for (u, v) in clipped_box_corners(BinaryTwrc::convolved_capacity(t, r1), private2, sum2) {
                cloud.push((u + v, u));
            }
        }
        let projections: Vec<Point> = cloud.iter().flat_map(|&(x, y)| [(x, 0.0), (0.0, y)]).collect();
        cloud.extend(projections);
        cloud.push((0.0, 0.0));
        Ok(FdfSeparateRegion {
            hull: convex_hull(&cloud),
        })
    }

    /// Grid with spacing `step` (rounded to a whole number of intervals).
    pub fn new(channel: &BinaryTwrc, step: f64) -> Result<Self> {
        if !(step > 0.0 && step <= 0.5) {
            return Err(Error::invalid(format!(
                "grid step {step} must lie in (0, 1/2] to give at least 2 points"
            )));
        }
        FdfSeparateRegion::with_points(channel, (0.5 / step).round() as usize + 1)
    }

    /// Hull vertices, counter-clockwise from the origin.
    pub fn vertices(&self) -> &[Point] {
        &self.hull
    }
}

impl RateRegion for FdfSeparateRegion {
    fn num_users(&self) -> usize {
        2
    }

    fn membership(&self, rates: &[f64]) -> Membership {
        classify(&self.hull, (rates[0], rates[1]))
    }

    fn extent(&self) -> f64 {
        1.0
    }

    fn corners(&self) -> Vec<Vec<f64>> {
        self.hull.iter().map(|&(x, y)| vec![x, y]).collect()
    }
}
