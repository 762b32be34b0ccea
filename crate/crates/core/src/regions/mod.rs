//! Rate regions of the finite field adder MWRC.
//!
//! * [`CutSetRegion`]: the capacity region, `R_min^c <= C_0` and
//!   `R_i^c <= C_i` for every user, where `C_j = log2 p - H(N_j)`,
//!   `R_i^c` is the sum of all rates but `R_i`, and `R_min^c` is the sum of
//!   all rates but the smallest.
//! * [`CdfRegion`]: complete-decode-forward on the binary two-way relay
//!   channel, where the relay decodes both messages.
//! * [`FdfSeparateRegion`]: functional-decode-forward with separate
//!   source-channel coding on the binary two-way relay channel.
//!
//! All regions are closed: a constraint holds when it is violated by at
//! most [`TOLERANCE`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::channel::MwrcParams;
use crate::entropy::{binary_convolution, binary_entropy};
use crate::error::{Error, Result};
use crate::field::FieldSpec;

mod fdf_separate;
pub mod hull;

pub use fdf_separate::{FdfSeparateRegion, DEFAULT_GRID_STEP};

/// Slack allowed on every region constraint.
pub const TOLERANCE: f64 = 1e-9;

/// Width below which boundary bisection stops.
const BISECTION_WIDTH: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Inside,
    /// Every constraint holds and at least one is tight within tolerance.
    Boundary,
    Outside,
}

impl Membership {
    /// Inside or on the boundary.
    pub fn is_member(self) -> bool {
        self != Membership::Outside
    }

    /// Classifies a list of constraint slacks (`capacity - load`).
    pub fn from_slacks(slacks: impl IntoIterator<Item = f64>) -> Membership {
        let mut tight = false;
        for s in slacks {
            if s < -TOLERANCE {
                return Membership::Outside;
            }
            if s <= TOLERANCE {
                tight = true;
            }
        }
        if tight {
            Membership::Boundary
        } else {
            Membership::Inside
        }
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::Inside => "inside",
            Membership::Boundary => "boundary",
            Membership::Outside => "outside",
        })
    }
}

/// Parses an exact rate: `"p/q"` or a whole number. Decimal notation is
/// rejected because it hides the rational value the schedule depends on.
pub fn parse_rate(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = |why: &str| Error::Config(format!("rate {text:?}: {why}"));
    if text.contains(['.', 'e', 'E']) {
        return Err(bad("decimal rates are not accepted; write a fraction such as \"3/10\""));
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("numerator is not an integer"))?;
    let den: BigInt = den.parse().map_err(|_| bad("denominator is not an integer"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    let r = BigRational::new(num, den);
    if r.is_negative() {
        return Err(bad("rates must be non-negative"));
    }
    Ok(r)
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact per-user rates in bits per channel use.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct RateTuple(Vec<BigRational>);

impl RateTuple {
    pub fn new(rates: Vec<BigRational>) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::Config("rate tuple is empty".into()));
        }
        if let Some(r) = rates.iter().find(|r| r.is_negative()) {
            return Err(Error::Config(format!("rate {r} is negative")));
        }
        Ok(RateTuple(rates))
    }

    pub fn parse<S: AsRef<str>>(rates: &[S]) -> Result<Self> {
        RateTuple::new(rates.iter().map(|r| parse_rate(r.as_ref())).collect::<Result<_>>()?)
    }

    pub fn rates(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational_to_f64).collect()
    }

    pub fn sum(&self) -> BigRational {
        self.0.iter().fold(BigRational::zero(), |acc, r| acc + r)
    }

    pub fn min(&self) -> BigRational {
        self.0.iter().min().cloned().expect("non-empty")
    }

    /// `R_i^c`: sum of every rate except user `i`'s.
    pub fn complement(&self, user: usize) -> BigRational {
        self.sum() - &self.0[user]
    }

    /// `R_min^c`: sum of every rate except the smallest.
    pub fn min_complement(&self) -> BigRational {
        self.sum() - self.min()
    }
}

impl TryFrom<Vec<String>> for RateTuple {
    type Error = Error;

    fn try_from(value: Vec<String>) -> Result<Self> {
        RateTuple::parse(&value)
    }
}

impl From<RateTuple> for Vec<String> {
    fn from(t: RateTuple) -> Self {
        t.0.iter().map(ToString::to_string).collect()
    }
}

impl FromStr for RateTuple {
    type Err = Error;

    /// Comma-separated rates, e.g. `"1/5,1/2"`.
    fn from_str(s: &str) -> Result<Self> {
        RateTuple::parse(&s.split(',').collect::<Vec<_>>())
    }
}

impl fmt::Display for RateTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// A rate region that can be probed point by point.
pub trait RateRegion {
    fn num_users(&self) -> usize;

    fn membership(&self, rates: &[f64]) -> Membership;

    /// No member has a coordinate above this.
    fn extent(&self) -> f64;

    /// Points known to lie on the boundary (polygon corners), used as extra
    /// export directions so corners are reproduced exactly.
    fn corners(&self) -> Vec<Vec<f64>> {
        Vec::new()
    }
}

/// The capacity region, given by the cut-set bound.
#[derive(Clone, Debug, PartialEq)]
pub struct CutSetRegion {
    uplink: f64,
    downlink: Vec<f64>,
    log2_order: f64,
}

impl CutSetRegion {
    pub fn new(params: &MwrcParams) -> Self {
        CutSetRegion {
            uplink: params.uplink_capacity(),
            downlink: (0..params.num_users()).map(|i| params.downlink_capacity(i)).collect(),
            log2_order: params.field().log2_order(),
        }
    }

    pub fn contains(&self, rates: &[f64]) -> Result<Membership> {
        if rates.len() != self.downlink.len() {
            return Err(Error::DimensionMismatch {
                context: "rate tuple length",
                expected: self.downlink.len(),
                found: rates.len(),
            });
        }
        Ok(self.membership(rates))
    }
}

impl RateRegion for CutSetRegion {
    fn num_users(&self) -> usize {
        self.downlink.len()
    }

    fn membership(&self, rates: &[f64]) -> Membership {
        if rates.iter().any(|&r| r < -TOLERANCE) {
            return Membership::Outside;
        }
        let sum: f64 = rates.iter().sum();
        let min = rates.iter().copied().fold(f64::INFINITY, f64::min);
        let uplink = self.uplink - (sum - min);
        let downlinks = rates.iter().zip(&self.downlink).map(|(r, c)| c - (sum - r));
        Membership::from_slacks(std::iter::once(uplink).chain(downlinks))
    }

    fn extent(&self) -> f64 {
        self.log2_order
    }

    fn corners(&self) -> Vec<Vec<f64>> {
        if self.downlink.len() != 2 {
            return Vec::new();
        }
        // For two users the region is the box R1 <= min(C0, C2), R2 <= min(C0, C1).
        let u1 = self.uplink.min(self.downlink[1]).max(0.0);
        let u2 = self.uplink.min(self.downlink[0]).max(0.0);
        vec![vec![u1, 0.0], vec![u1, u2], vec![0.0, u2]]
    }
}

pub fn cutset_contains(params: &MwrcParams, rates: &[f64]) -> Result<Membership> {
    CutSetRegion::new(params).contains(rates)
}

/// Exact-rate convenience wrapper around [`cutset_contains`].
pub fn cutset_contains_exact(params: &MwrcParams, rates: &RateTuple) -> Result<Membership> {
    cutset_contains(params, &rates.to_f64())
}

/// Largest common rate: `min_j C_j / (L - 1)` over the uplink and every
/// downlink.
pub fn common_rate_capacity(params: &MwrcParams) -> f64 {
    let worst = (0..params.num_users())
        .map(|i| params.downlink_capacity(i))
        .fold(params.uplink_capacity(), f64::min);
    worst / (params.num_users() - 1) as f64
}

/// Flip probabilities of a binary two-way relay channel: `rho0` on the
/// uplink, `rho1` and `rho2` on the downlinks to users 1 and 2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinaryTwrc {
    pub rho0: f64,
    pub rho1: f64,
    pub rho2: f64,
}

impl BinaryTwrc {
    pub fn new(rho0: f64, rho1: f64, rho2: f64) -> Result<Self> {
        for (name, rho) in [("rho0", rho0), ("rho1", rho1), ("rho2", rho2)] {
            if !(0.0..=1.0).contains(&rho) {
                return Err(Error::invalid(format!("{name} = {rho} outside [0, 1]")));
            }
        }
        Ok(BinaryTwrc { rho0, rho1, rho2 })
    }

    /// Reads the flip probabilities off two-user GF(2) parameters.
    pub fn from_params(params: &MwrcParams) -> Result<Self> {
        if params.num_users() != 2 || params.field() != FieldSpec::binary() {
            return Err(Error::invalid(format!(
                "the comparison regions are defined for 2 users over GF(2), got {} users over {}",
                params.num_users(),
                params.field()
            )));
        }
        BinaryTwrc::new(
            params.uplink_noise().prob(1),
            params.downlink_noise(0).prob(1),
            params.downlink_noise(1).prob(1),
        )
    }

    pub fn params(&self) -> Result<MwrcParams> {
        MwrcParams::binary(self.rho0, &[self.rho1, self.rho2])
    }

    fn capacity(rho: f64) -> f64 {
        1.0 - binary_entropy(rho).expect("validated")
    }

    pub fn uplink_capacity(&self) -> f64 {
        Self::capacity(self.rho0)
    }

    pub fn downlink_capacity(&self, user: usize) -> f64 {
        Self::capacity(if user == 0 { self.rho1 } else { self.rho2 })
    }

    /// `1 - H(beta * rho)` with `*` the binary convolution.
    pub(crate) fn convolved_capacity(beta: f64, rho: f64) -> f64 {
        1.0 - binary_entropy(binary_convolution(beta, rho).clamp(0.0, 1.0)).expect("in range")
    }
}

/// Complete-decode-forward: `R1 <= 1-H(rho2)`, `R2 <= 1-H(rho1)`,
/// `R1 + R2 <= 1-H(rho0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CdfRegion {
    r1_max: f64,
    r2_max: f64,
    sum_max: f64,
}

impl CdfRegion {
    pub fn new(channel: &BinaryTwrc) -> Self {
        CdfRegion {
            r1_max: channel.downlink_capacity(1),
            r2_max: channel.downlink_capacity(0),
            sum_max: channel.uplink_capacity(),
        }
    }
}

impl RateRegion for CdfRegion {
    fn num_users(&self) -> usize {
        2
    }

    fn membership(&self, rates: &[f64]) -> Membership {
        let (r1, r2) = (rates[0], rates[1]);
        if r1 < -TOLERANCE || r2 < -TOLERANCE {
            return Membership::Outside;
        }
        Membership::from_slacks([self.r1_max - r1, self.r2_max - r2, self.sum_max - r1 - r2])
    }

    fn extent(&self) -> f64 {
        1.0
    }

    fn corners(&self) -> Vec<Vec<f64>> {
        let a = self.r1_max.min(self.sum_max).max(0.0);
        let b = self.r2_max.min(self.sum_max).max(0.0);
        vec![
            vec![a, 0.0],
            vec![a, (self.sum_max - a).clamp(0.0, b)],
            vec![(self.sum_max - b).clamp(0.0, a), b],
            vec![0.0, b],
        ]
    }
}

pub fn cdf_region_contains(rho0: f64, rho1: f64, rho2: f64, rates: (f64, f64)) -> Result<Membership> {
    Ok(CdfRegion::new(&BinaryTwrc::new(rho0, rho1, rho2)?).membership(&[rates.0, rates.1]))
}

/// Membership in the FDF-separate region sampled on `points` values of the
/// split parameter.
pub fn fdf_separate_region_contains(
    rho0: f64,
    rho1: f64,
    rho2: f64,
    rates: (f64, f64),
    points: usize,
) -> Result<Membership> {
    let region = FdfSeparateRegion::with_points(&BinaryTwrc::new(rho0, rho1, rho2)?, points)?;
    Ok(region.membership(&[rates.0, rates.1]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub rates: Vec<f64>,
    pub membership: Membership,
}

/// Samples the region boundary along rays from the origin.
///
/// Two-user regions use `num_points` evenly spaced angles in the first
/// quadrant plus the direction of every known corner, ordered by angle from
/// the R1 axis. Larger regions use evenly spread directions on the
/// probability simplex. Each ray is bisected to within 1e-12. A region
/// that only contains the origin yields a single origin point.
pub fn export_boundary(region: &dyn RateRegion, num_points: usize) -> Result<Vec<RegionPoint>> {
    if num_points < 2 {
        return Err(Error::invalid(format!(
            "boundary export needs at least 2 points, got {num_points}"
        )));
    }
    let dim = region.num_users();
    let directions = if dim == 2 {
        planar_directions(region, num_points)
    } else {
        simplex_directions(dim, num_points)
    };
    let hi = region.extent() * dim as f64 + 1.0;
    let origin = region.membership(&vec![0.0; dim]);
    // Largest scale along `d` accepted by `accept`.
    let bisect = |d: &[f64], accept: &dyn Fn(Membership) -> bool| {
        let (mut lo, mut up) = (0.0, hi);
        while up - lo > BISECTION_WIDTH {
            let mid = 0.5 * (lo + up);
            let p: Vec<f64> = d.iter().map(|x| x * mid).collect();
            if accept(region.membership(&p)) {
                lo = mid;
            } else {
                up = mid;
            }
        }
        lo
    };
    let mut out: Vec<RegionPoint> = Vec::new();
    for d in directions {
        if !origin.is_member() {
            break;
        }
        // The tolerance band straddles the boundary; take its midpoint.
        let outer = bisect(&d, &|m| m.is_member());
        let scale = if origin == Membership::Inside {
            0.5 * (outer + bisect(&d, &|m| m == Membership::Inside))
        } else {
            outer
        };
        let rates: Vec<f64> = d.iter().map(|x| x * scale).collect();
        let membership = region.membership(&rates);
        out.push(RegionPoint { rates, membership });
    }
    let degenerate = out
        .iter()
        .all(|p| p.rates.iter().all(|r| r.abs() <= TOLERANCE));
    if degenerate {
        let origin = vec![0.0; dim];
        let membership = region.membership(&origin);
        return Ok(vec![RegionPoint {
            rates: origin,
            membership,
        }]);
    }
    Ok(out)
}

fn planar_directions(region: &dyn RateRegion, num_points: usize) -> Vec<Vec<f64>> {
    let mut angles: Vec<f64> = (0..num_points)
        .map(|i| std::f64::consts::FRAC_PI_2 * i as f64 / (num_points - 1) as f64)
        .collect();
    for c in region.corners() {
        if c[0] > TOLERANCE || c[1] > TOLERANCE {
            angles.push(c[1].atan2(c[0]));
        }
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    angles
        .into_iter()
        .map(|t| {
            // Snap the axis directions so they stay exactly on the axes.
            let (s, c) = t.sin_cos();
            let c = if t >= std::f64::consts::FRAC_PI_2 { 0.0 } else { c };
            let s = if t <= 0.0 { 0.0 } else { s };
            let scale = c.max(s);
            vec![c / scale, s / scale]
        })
        .collect()
}

/// Lattice points `m / steps` on the simplex, with `steps` the smallest
/// value giving at least `num_points` directions. Lexicographic order.
fn simplex_directions(dim: usize, num_points: usize) -> Vec<Vec<f64>> {
    let count = |steps: usize| -> usize {
        // C(steps + dim - 1, dim - 1)
        (1..dim).fold(1usize, |acc, i| acc * (steps + i) / i)
    };
    let mut steps = 1;
    while count(steps) < num_points {
        steps += 1;
    }
    let mut out = Vec::new();
    let mut current = vec![0usize; dim];
    fn rec(pos: usize, left: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if pos + 1 == current.len() {
            current[pos] = left;
            let max = *current.iter().max().expect("non-empty") as f64;
            out.push(current.iter().map(|&c| c as f64 / max).collect());
            return;
        }
        for v in 0..=left {
            current[pos] = v;
            rec(pos + 1, left - v, current, out);
        }
    }
    rec(0, steps, &mut current, &mut out);
    out
}

/// Renders boundary points as CSV with header `R1,...,RL`, nine decimals
/// and LF line endings.
pub fn boundary_csv(points: &[RegionPoint], num_users: usize) -> String {
    let header: Vec<String> = (1..=num_users).map(|i| format!("R{i}")).collect();
    let mut out = header.join(",");
    out.push('\n');
    for p in points {
        let row: Vec<String> = p.rates.iter().map(|r| format!("{:.9}", r.max(0.0))).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::NoisePmf;
    use proptest::prelude::*;

    fn h(x: f64) -> f64 {
        binary_entropy(x).unwrap()
    }

    #[test]
    fn rate_parsing() {
        assert_eq!(parse_rate("3/10").unwrap(), BigRational::new(3.into(), 10.into()));
        assert_eq!(parse_rate(" 2 ").unwrap(), BigRational::from_integer(2.into()));
        assert_eq!(parse_rate("6/20").unwrap(), parse_rate("3/10").unwrap());
        for bad in ["0.3", "1e-1", "1/0", "-1/5", "x/5", ""] {
            assert!(parse_rate(bad).is_err(), "{bad}");
        }
        let t: RateTuple = "1/5,1/2".parse().unwrap();
        assert_eq!(t.to_string(), "1/5,1/2");
        assert_eq!(t.min_complement(), parse_rate("1/2").unwrap());
        assert_eq!(t.complement(1), parse_rate("1/5").unwrap());
        let json = serde_json_round_trip(&t);
        assert_eq!(json, t);
    }

    fn serde_json_round_trip(t: &RateTuple) -> RateTuple {
        let v: Vec<String> = t.clone().into();
        RateTuple::try_from(v).unwrap()
    }

    #[test]
    fn cutset_examples() {
        let noiseless = MwrcParams::noiseless(2, FieldSpec::binary()).unwrap();
        assert_eq!(cutset_contains(&noiseless, &[1.0, 1.0]).unwrap(), Membership::Boundary);
        assert_eq!(cutset_contains(&noiseless, &[1.0 + 1e-6, 1.0]).unwrap(), Membership::Outside);
        assert_eq!(cutset_contains(&noiseless, &[0.0, 0.0]).unwrap(), Membership::Inside);
        assert!(cutset_contains(&noiseless, &[0.0]).is_err());

        let p = MwrcParams::binary(0.1, &[0.1, 0.1, 0.1]).unwrap();
        let r = (1.0 - h(0.1)) / 2.0;
        assert_eq!(cutset_contains(&p, &[r, r, r]).unwrap(), Membership::Boundary);
        assert_eq!(cutset_contains(&p, &[0.2655, 0.2655, 0.2655]).unwrap(), Membership::Inside);
        assert_eq!(cutset_contains(&p, &[0.2656, 0.2656, 0.2656]).unwrap(), Membership::Outside);
        assert!((2.0 * r - 0.531004).abs() < 1e-6);
    }

    #[test]
    fn common_rate_examples() {
        let gf2 = FieldSpec::binary();
        assert_eq!(common_rate_capacity(&MwrcParams::noiseless(2, gf2).unwrap()), 1.0);
        let p = MwrcParams::binary(0.1, &[0.0, 0.0, 0.0]).unwrap();
        assert!((common_rate_capacity(&p) - 0.265502).abs() < 1e-6);
        let gf5 = FieldSpec::new(5).unwrap();
        let p = MwrcParams::new(
            2,
            gf5,
            NoisePmf::noiseless(gf5),
            vec![NoisePmf::uniform(gf5), NoisePmf::noiseless(gf5)],
        )
        .unwrap();
        assert!(common_rate_capacity(&p).abs() < 1e-12);
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(cdf_region_contains(0.0, 0.0, 0.0, (0.5, 0.5)).unwrap(), Membership::Boundary);
        assert_eq!(cdf_region_contains(0.0, 0.0, 0.0, (0.6, 0.5)).unwrap(), Membership::Outside);
        assert_eq!(cdf_region_contains(0.1, 0.0, 0.0, (1.0 - h(0.1), 0.0)).unwrap(), Membership::Boundary);
        assert_eq!(cdf_region_contains(0.1, 0.1, 0.1, (0.0, 0.0)).unwrap(), Membership::Inside);
        assert!(cdf_region_contains(1.5, 0.0, 0.0, (0.0, 0.0)).is_err());
        let gf3 = FieldSpec::new(3).unwrap();
        assert!(BinaryTwrc::from_params(&MwrcParams::noiseless(2, gf3).unwrap()).is_err());
        assert!(BinaryTwrc::from_params(&MwrcParams::binary(0.1, &[0.1, 0.1, 0.1]).unwrap()).is_err());
    }

    #[test]
    fn strategy_gap_point() {
        let twrc = BinaryTwrc::new(0.1, 0.0, 0.0).unwrap();
        let cap = CutSetRegion::new(&twrc.params().unwrap());
        assert_eq!(cap.membership(&[0.35, 0.35]), Membership::Inside);
        assert_eq!(CdfRegion::new(&twrc).membership(&[0.35, 0.35]), Membership::Outside);
    }

    #[test]
    fn two_user_capacity_matches_explicit_box() {
        for (r0, r1, r2) in [(0.1, 0.1, 0.1), (0.05, 0.2, 0.01), (0.3, 0.0, 0.11)] {
            let twrc = BinaryTwrc::new(r0, r1, r2).unwrap();
            let cap = CutSetRegion::new(&twrc.params().unwrap());
            let (c0, c1, c2) = (1.0 - h(r0), 1.0 - h(r1), 1.0 - h(r2));
            for i in 0..=100 {
                for j in 0..=100 {
                    let (x, y) = (f64::from(i) / 100.0, f64::from(j) / 100.0);
                    let explicit = x <= c0 + TOLERANCE && y <= c0 + TOLERANCE && x <= c2 + TOLERANCE && y <= c1 + TOLERANCE;
                    assert_eq!(cap.membership(&[x, y]).is_member(), explicit, "({x}, {y})");
                }
            }
        }
    }

    #[test]
    fn export_capacity_square() {
        let region = CutSetRegion::new(&MwrcParams::noiseless(2, FieldSpec::binary()).unwrap());
        let pts = export_boundary(&region, 11).unwrap();
        for corner in [[0.0, 1.0], [1.0, 1.0], [1.0, 0.0]] {
            assert!(
                pts.iter().any(|p| (p.rates[0] - corner[0]).abs() < 1e-6 && (p.rates[1] - corner[1]).abs() < 1e-6),
                "{corner:?}"
            );
        }
        // Ordered by angle from the R1 axis.
        assert!(pts.first().unwrap().rates[1].abs() < 1e-12);
        assert!(pts.last().unwrap().rates[0].abs() < 1e-12);
        assert!(export_boundary(&region, 1).is_err());
    }

    #[test]
    fn export_cdf_triangle_and_diagonal_ray() {
        let cdf = CdfRegion::new(&BinaryTwrc::new(0.0, 0.0, 0.0).unwrap());
        let pts = export_boundary(&cdf, 21).unwrap();
        for p in &pts {
            assert!((p.rates[0] + p.rates[1] - 1.0).abs() < 1e-9, "{p:?}");
        }
        let cap = CutSetRegion::new(&MwrcParams::binary(0.1, &[0.1, 0.1]).unwrap());
        let pts = export_boundary(&cap, 3).unwrap();
        let diag = &pts[1].rates;
        assert!((diag[0] - 0.531004).abs() < 1e-6 && (diag[1] - 0.531004).abs() < 1e-6);
    }

    #[test]
    fn export_of_a_dead_region_is_the_origin() {
        let cap = CutSetRegion::new(&MwrcParams::binary(0.5, &[0.5, 0.5]).unwrap());
        let pts = export_boundary(&cap, 10).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(boundary_csv(&pts, 2), "R1,R2\n0.000000000,0.000000000\n");
    }

    #[test]
    fn export_three_users_stays_on_the_boundary() {
        let cap = CutSetRegion::new(&MwrcParams::binary(0.05, &[0.1, 0.05, 0.2]).unwrap());
        let pts = export_boundary(&cap, 30).unwrap();
        assert!(pts.len() >= 30);
        for p in &pts {
            assert_eq!(p.membership, Membership::Boundary, "{p:?}");
        }
        assert!(boundary_csv(&pts, 3).starts_with("R1,R2,R3\n"));
    }

    proptest! {
        #[test]
        fn cutset_is_monotone(rates in prop::collection::vec(0.0f64..0.6, 3), shrink in prop::collection::vec(0.0f64..1.0, 3), rho in prop::collection::vec(0.0f64..0.5, 4)) {
            let p = MwrcParams::binary(rho[0], &rho[1..]).unwrap();
            let region = CutSetRegion::new(&p);
            if region.membership(&rates).is_member() {
                let smaller: Vec<f64> = rates.iter().zip(&shrink).map(|(r, s)| r * s).collect();
                prop_assert!(region.membership(&smaller).is_member());
            }
        }

        #[test]
        fn all_zero_rates_are_members(rho in prop::collection::vec(0.0f64..0.49, 4)) {
            let p = MwrcParams::binary(rho[0], &rho[1..]).unwrap();
            prop_assert_eq!(cutset_contains(&p, &[0.0, 0.0, 0.0]).unwrap(), Membership::Inside);
        }

        #[test]
        fn noisier_links_never_enlarge_regions(base in prop::collection::vec(0.0f64..0.5, 3), bump in prop::collection::vec(0.0f64..0.2, 3), x in 0.0f64..1.0, y in 0.0f64..1.0) {
            let noisier: Vec<f64> = base.iter().zip(&bump).map(|(b, d)| (b + d).min(0.5)).collect();
            let a = BinaryTwrc::new(base[0], base[1], base[2]).unwrap();
            let b = BinaryTwrc::new(noisier[0], noisier[1], noisier[2]).unwrap();
            let pt = [x, y];
            if CutSetRegion::new(&b.params().unwrap()).membership(&pt).is_member() {
                prop_assert!(CutSetRegion::new(&a.params().unwrap()).membership(&pt).is_member());
            }
            if CdfRegion::new(&b).membership(&pt).is_member() {
                prop_assert!(CdfRegion::new(&a).membership(&pt).is_member());
            }
        }
    }
}
