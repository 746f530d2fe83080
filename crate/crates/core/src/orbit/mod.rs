//! Enumeration of the orbit `S = Gamma e1` inside a Euclidean ball, and
//! searches over the enumerated set.
//!
//! In the first quadrant every point of `S` off the y-axis is `W e1` for a
//! unique word `W` in the generators, and every generator is non-decreasing
//! in both coordinates there. A depth-first walk over words, pruned by the
//! sup-norm, therefore visits each such point once. Only representatives with
//! `0 <= y <= x` are stored; the rest of the set is their dihedral images.

mod clusters;
mod golden_int;
pub mod oracle;

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

pub use clusters::{empty_ball_probe, find_clusters, min_pair_gap, Cluster, ClusterQuery, EmptyBall, PairGap};
pub use golden_int::{le_ratio, sign_wide, wide_to_f64, GoldenInt};

use crate::error::{Error, Result};
use crate::group::Vec2;

/// Default cap on stored representatives.
pub const DEFAULT_POINT_BUDGET: usize = 10_000_000;

/// A point with coordinates in `Z[phi]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub struct GPoint {
    pub x: GoldenInt,
    pub y: GoldenInt,
}

impl GPoint {
    pub const fn new(x: GoldenInt, y: GoldenInt) -> Self {
        Self { x, y }
    }

    pub fn to_vec2(self) -> Vec2 {
        Vec2::new(self.x.to_scalar(), self.y.to_scalar())
    }

    pub fn from_vec2(v: &Vec2) -> Option<Self> {
        Some(Self { x: GoldenInt::from_scalar(&v.x)?, y: GoldenInt::from_scalar(&v.y)? })
    }

    pub fn to_f64(self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    pub fn norm_sq_wide(self) -> (i128, i128) {
        let (xa, xb) = self.x.square_wide();
        let (ya, yb) = self.y.square_wide();
        (xa + ya, xb + yb)
    }

    /// Squared distance as wide coefficients.
    pub fn dist_sq_wide(self, o: GPoint) -> (i128, i128) {
        GPoint::new(self.x - o.x, self.y - o.y).norm_sq_wide()
    }

    /// The image in `0 <= y <= x`.
    pub fn canonical(self) -> GPoint {
        let (x, y) = (self.x.abs(), self.y.abs());
        if y.cmp_value(x) == Ordering::Greater {
            GPoint::new(y, x)
        } else {
            GPoint::new(x, y)
        }
    }

    /// Distinct images under the eight symmetries of the square.
    pub fn images(self) -> Vec<GPoint> {
        let (x, y) = (self.x, self.y);
        let mut v = vec![
            GPoint::new(x, y),
            GPoint::new(-x, y),
            GPoint::new(x, -y),
            GPoint::new(-x, -y),
            GPoint::new(y, x),
            GPoint::new(-y, x),
            GPoint::new(y, -x),
            GPoint::new(-y, -x),
        ];
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// `S` intersected with a closed ball of radius `radius`.
#[derive(Clone, Debug)]
pub struct OrbitPointSet {
    radius: BigRational,
    ball: Ball,
    reps: Vec<GPoint>,
}

impl OrbitPointSet {
    pub fn radius(&self) -> &BigRational {
        &self.radius
    }

    pub fn ball(&self) -> Ball {
        self.ball
    }

    /// Representatives with `0 <= y <= x`, sorted by coefficients.
    pub fn reps(&self) -> &[GPoint] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.iter().map(|p| p.images().len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn contains(&self, p: &GPoint) -> bool {
        self.reps.binary_search(&p.canonical()).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = GPoint> + '_ {
        self.reps.iter().flat_map(|p| p.images())
    }

    /// All points, sorted by coefficients.
    pub fn points(&self) -> Vec<GPoint> {
        let mut v: Vec<GPoint> = self.iter().collect();
        v.par_sort_unstable();
        v
    }
}

/// Shape of the ball used to cut off the orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Ball {
    #[default]
    Euclidean,
    Sup,
}

struct Bounds {
    ball: Ball,
    num: i128,
    den: i128,
    r_f: f64,
}

impl Bounds {
    fn new(radius: &BigRational, ball: Ball) -> Result<Self> {
        let num = radius.numer().to_i128().filter(|n| n.abs() < 1 << 60);
        let den = radius.denom().to_i128().filter(|d| *d < 1 << 60);
        let (Some(num), Some(den)) = (num, den) else {
            return Err(Error::Config(format!("radius {radius} is too large")));
        };
        if radius < &BigRational::one() {
            return Err(Error::Config(format!("radius {radius} must be at least 1")));
        }
        if radius > &BigRational::from_integer(BigInt::from(1u64 << 31)) {
            return Err(Error::Config(format!("radius {radius} is too large")));
        }
        Ok(Self { ball, num, den, r_f: num as f64 / den as f64 })
    }

    fn coord_in(&self, c: GoldenInt) -> bool {
        let f = c.to_f64();
        let margin = 1e-9 * f.abs().max(1.0);
        if f + margin < self.r_f {
            true
        } else if f - margin > self.r_f {
            false
        } else {
            le_ratio(c.a as i128, c.b as i128, self.num, self.den)
        }
    }

    fn in_ball(&self, p: GPoint) -> bool {
        if self.ball == Ball::Sup {
            // coordinates were bounded before the point was queued
            return true;
        }
        let (a, b) = p.norm_sq_wide();
        let f = wide_to_f64(a, b);
        let r2 = self.r_f * self.r_f;
        let margin = 1e-9 * f.abs().max(1.0);
        if f + margin < r2 {
            true
        } else if f - margin > r2 {
            false
        } else {
            match (self.num.checked_mul(self.num), self.den.checked_mul(self.den)) {
                (Some(n2), Some(d2)) => le_ratio(a, b, n2, d2),
                _ => {
                    let r = BigRational::new(self.num.into(), self.den.into());
                    let v = crate::ring::GoldenScalar::from_ints(BigInt::from(a), BigInt::from(b));
                    v <= crate::ring::GoldenScalar::from_rational(&r * &r)
                }
            }
        }
    }
}

/// Forward images of a first-quadrant point with `x > 0`, skipping the
/// fixed point `sigma_0 (x, 0) = (x, 0)`.
fn children(p: GPoint) -> impl Iterator<Item = GPoint> {
    let (x, y) = (p.x, p.y);
    let (px, py) = (x.times_phi(), y.times_phi());
    let s0 = (y != GoldenInt::ZERO).then(|| GPoint::new(x + py, y));
    let s1 = GPoint::new(px + py, x + py);
    let s2 = GPoint::new(px + y, px + py);
    let s3 = GPoint::new(x, px + y);
    s0.into_iter().chain([s1, s2, s3])
}

struct Walk<'a> {
    bounds: &'a Bounds,
    budget: usize,
    stored: AtomicUsize,
    overflow: AtomicBool,
}

impl Walk<'_> {
    fn visit(&self, p: GPoint, out: &mut Vec<GPoint>) -> bool {
        if p.y.cmp_value(p.x) != Ordering::Greater && self.bounds.in_ball(p) {
            out.push(p);
            if self.stored.fetch_add(1, AtomicOrdering::Relaxed) >= self.budget {
                self.overflow.store(true, AtomicOrdering::Relaxed);
                return false;
            }
        }
        true
    }

    fn expand(&self, p: GPoint, next: &mut Vec<GPoint>) {
        for c in children(p) {
            if self.bounds.coord_in(c.x) && self.bounds.coord_in(c.y) {
                next.push(c);
            }
        }
    }

    fn subtree(&self, root: GPoint) -> Vec<GPoint> {
        let mut out = Vec::new();
        let mut stack = vec![root];
        while let Some(p) = stack.pop() {
            if self.overflow.load(AtomicOrdering::Relaxed) || !self.visit(p, &mut out) {
                break;
            }
            self.expand(p, &mut stack);
        }
        out
    }
}

/// Points of `S` with Euclidean norm at most `radius`.
pub fn enumerate(radius: &BigRational) -> Result<OrbitPointSet> {
    enumerate_with_budget(radius, DEFAULT_POINT_BUDGET)
}

pub fn enumerate_with_budget(radius: &BigRational, budget: usize) -> Result<OrbitPointSet> {
    enumerate_in(radius, Ball::Euclidean, budget)
}

/// Fails with `CapacityExceeded` once more than `budget` representatives
/// would be stored.
pub fn enumerate_in(radius: &BigRational, ball: Ball, budget: usize) -> Result<OrbitPointSet> {
    let bounds = Bounds::new(radius, ball)?;
    let walk = Walk { bounds: &bounds, budget, stored: AtomicUsize::new(0), overflow: AtomicBool::new(false) };
    let mut reps = Vec::new();
    let mut level = vec![GPoint::new(GoldenInt::ONE, GoldenInt::ZERO)];
    let width = 64 * rayon::current_num_threads();
    while !level.is_empty() && level.len() < width {
        let mut next = Vec::new();
        for &p in &level {
            if !walk.visit(p, &mut reps) {
                return Err(Error::CapacityExceeded(budget));
            }
            walk.expand(p, &mut next);
        }
        level = next;
    }
    let parts: Vec<Vec<GPoint>> = level.par_iter().map(|&p| walk.subtree(p)).collect();
    if walk.overflow.load(AtomicOrdering::Relaxed) {
        return Err(Error::CapacityExceeded(budget));
    }
    reps.reserve(parts.iter().map(Vec::len).sum());
    for part in parts {
        reps.extend(part);
    }
    reps.par_sort_unstable();
    reps.dedup();
    Ok(OrbitPointSet { radius: radius.clone(), ball, reps })
}
