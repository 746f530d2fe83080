//! Sector partition of the first quadrant and the descent gcd algorithm.
//!
//! A first-quadrant vector is pushed to the x-axis by repeatedly applying
//! `sigma_k^-1`, where `k` is the sector holding the current vector. The
//! letters form the itinerary word and the terminal x-coordinate is the gcd
//! representative `l_v`. Runs of `sigma_0` and `sigma_3` are batched in
//! closed form.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{generator_inverse, unipotent_pow, Vec2, Word};
use crate::ring::{unit_exponent, GoldenScalar};

pub const DEFAULT_ITER_CAP: usize = 1_000_000;

/// Descent cap, overridable through `ORBIT_ITER_CAP`.
pub fn iteration_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("ORBIT_ITER_CAP")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_ITER_CAP)
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Sector {
    S0,
    S1,
    S2,
    S3,
}

impl Sector {
    pub fn index(self) -> u8 {
        self as u8
    }
}

fn check_quadrant(v: &Vec2) -> Result<()> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if v.x.is_negative() || v.y.is_negative() {
        return Err(Error::OutOfQuadrant(format!("{}, {}", v.x, v.y)));
    }
    Ok(())
}

pub fn classify(v: &Vec2) -> Result<Sector> {
    check_quadrant(v)?;
    let phi = GoldenScalar::phi();
    let phi_y = &phi * &v.y;
    // y < x/phi  <=>  phi*y < x
    Ok(if phi_y < v.x {
        Sector::S0
    } else if v.y < v.x {
        Sector::S1
    } else if v.y < &phi * &v.x {
        Sector::S2
    } else {
        Sector::S3
    })
}

pub fn descend_once(v: &Vec2) -> Result<(Sector, Vec2)> {
    let s = classify(v)?;
    Ok((s, generator_inverse(s.index()).act(v)))
}

fn apply_unipotent_inverse(v: &Vec2, sector: Sector, t: &BigInt) -> Vec2 {
    unipotent_pow(sector.index(), -t).act(v)
}

/// Number of consecutive `sigma_k^-1` steps taken from `v` while it stays in
/// sector `k`, for `k` in {0, 3}.
pub fn run_length(v: &Vec2, sector: Sector) -> Result<BigInt> {
    let here = classify(v)?;
    if !matches!(sector, Sector::S0 | Sector::S3) || here != sector {
        return Err(Error::WrongSector(sector.index()));
    }
    let phi = GoldenScalar::phi();
    let t = match sector {
        Sector::S0 => {
            if v.y.is_zero() {
                return Err(Error::Unbounded);
            }
            // sigma_0^-s v stays in S0 while s + 1 < x / (phi y)
            let r = &v.x / &(&phi * &v.y);
            r.ceil() - 1
        }
        _ => {
            if v.x.is_zero() {
                return Err(Error::Unbounded);
            }
            // sigma_3^-s v stays in S3 while s + 1 <= y / (phi x)
            let r = &v.y / &(&phi * &v.x);
            r.floor()
        }
    };
    if verify_run(v, sector, &t)? {
        return Ok(t);
    }
    search_run(v, sector)
}

fn verify_run(v: &Vec2, sector: Sector, t: &BigInt) -> Result<bool> {
    if *t < BigInt::one() {
        return Ok(false);
    }
    let last_inside = apply_unipotent_inverse(v, sector, &(t - 1));
    let outside = apply_unipotent_inverse(v, sector, t);
    Ok(classify(&last_inside)? == sector && classify(&outside)? != sector)
}

// Doubling then bisection; only reached if the closed form were off.
fn search_run(v: &Vec2, sector: Sector) -> Result<BigInt> {
    let inside = |s: &BigInt| -> Result<bool> {
        Ok(classify(&apply_unipotent_inverse(v, sector, s))? == sector)
    };
    let mut hi = BigInt::one();
    while inside(&hi)? {
        hi *= 2;
    }
    let mut lo = BigInt::zero();
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        if inside(&mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Certificate that `v = scaling^-1 * reflect(swap(l_v * word * e1))`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GcdResult {
    pub word: Word,
    pub l_v: GoldenScalar,
    /// Positive integer that cleared the coefficient denominators of `|v|`.
    pub scaling: BigRational,
    /// Sign flips applied to (x, y).
    pub reflected: (bool, bool),
    /// Set when `|v|` lay on the positive y-axis and was swapped onto the x-axis.
    pub swapped: bool,
}

impl GcdResult {
    pub fn reconstruct(&self) -> Vec2 {
        let mut v = self.word.to_matrix().act(&Vec2::e1()).scale(&self.l_v);
        v = v.scale_rational(&self.scaling.recip());
        if self.swapped {
            v = Vec2::new(v.y, v.x);
        }
        if self.reflected.0 {
            v.x = -v.x;
        }
        if self.reflected.1 {
            v.y = -v.y;
        }
        v
    }

    pub fn unit_exponent(&self) -> Option<i64> {
        unit_exponent(&self.l_v).ok()
    }

    pub fn is_unit(&self) -> bool {
        let n = self.l_v.norm();
        self.l_v.is_golden_integer() && (n.is_one() || (-n).is_one())
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Repr {
            word: String,
            l_v: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            unit_exponent: Option<i64>,
            scaling: String,
            reflected: (bool, bool),
            swapped: bool,
        }
        serde_json::to_value(Repr {
            word: self.word.to_string(),
            l_v: self.l_v.to_string(),
            unit_exponent: self.unit_exponent(),
            scaling: self.scaling.to_string(),
            reflected: self.reflected,
            swapped: self.swapped,
        })
        .expect("plain struct serializes")
    }
}

struct Normalized {
    v: Vec2,
    scaling: BigRational,
    reflected: (bool, bool),
    swapped: bool,
}

fn normalize(v: &Vec2) -> Result<Normalized> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let reflected = (v.x.is_negative(), v.y.is_negative());
    let (mut x, mut y) = (v.x.abs(), v.y.abs());
    let swapped = x.is_zero();
    if swapped {
        std::mem::swap(&mut x, &mut y);
    }
    let d = x.denominator_lcm().lcm(&y.denominator_lcm());
    let scaling = BigRational::from_integer(d);
    Ok(Normalized {
        v: Vec2::new(x.scale(&scaling), y.scale(&scaling)),
        scaling,
        reflected,
        swapped,
    })
}

pub fn gcd_gamma_plus(v: &Vec2) -> Result<GcdResult> {
    gcd_gamma_plus_with_cap(v, iteration_cap())
}

/// Descent with `sigma_0` / `sigma_3` runs batched; `cap` bounds the number
/// of batched steps.
pub fn gcd_gamma_plus_with_cap(v: &Vec2, cap: usize) -> Result<GcdResult> {
    let n = normalize(v)?;
    let mut cur = n.v;
    let mut word = Word::new();
    let mut steps = 0usize;
    while !cur.y.is_zero() {
        steps += 1;
        if steps > cap {
            return Err(Error::IterationCap(cap));
        }
        let s = classify(&cur)?;
        match s {
            Sector::S0 | Sector::S3 => {
                let t = run_length(&cur, s)?;
                cur = apply_unipotent_inverse(&cur, s, &t);
                let count = t.to_u64().ok_or(Error::IterationCap(cap))?;
                word.push_run(s.index(), count);
            }
            _ => {
                cur = generator_inverse(s.index()).act(&cur);
                word.push_run(s.index(), 1);
            }
        }
    }
    Ok(GcdResult {
        word,
        l_v: cur.x,
        scaling: n.scaling,
        reflected: n.reflected,
        swapped: n.swapped,
    })
}

/// Unbatched descent, one letter per step.
pub fn gcd_gamma_plus_stepwise(v: &Vec2, cap: usize) -> Result<GcdResult> {
    let n = normalize(v)?;
    let mut cur = n.v;
    let mut word = Word::new();
    let mut steps = 0usize;
    while !cur.y.is_zero() {
        steps += 1;
        if steps > cap {
            return Err(Error::IterationCap(cap));
        }
        let (s, next) = descend_once(&cur)?;
        word.push_run(s.index(), 1);
        cur = next;
    }
    Ok(GcdResult {
        word,
        l_v: cur.x,
        scaling: n.scaling,
        reflected: n.reflected,
        swapped: n.swapped,
    })
}

/// Membership in the orbit of e1.
pub fn is_in_s(v: &Vec2) -> Result<bool> {
    let g = gcd_gamma_plus(v)?;
    Ok(g.scaling.is_one() && g.l_v.is_one())
}
