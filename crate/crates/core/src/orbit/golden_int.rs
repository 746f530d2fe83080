//! Compact elements `a + b phi` of `Z[phi]` for bulk enumeration.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::ring::{golden_sign, GoldenScalar, PHI_F64};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord, Serialize)]
pub struct GoldenInt {
    pub a: i64,
    pub b: i64,
}

impl GoldenInt {
    pub const ZERO: GoldenInt = GoldenInt { a: 0, b: 0 };
    pub const ONE: GoldenInt = GoldenInt { a: 1, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub fn times_phi(self) -> Self {
        Self { a: self.b, b: self.a + self.b }
    }

    pub fn sign(self) -> Ordering {
        sign_wide(self.a as i128, self.b as i128)
    }

    pub fn is_negative(self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self
        }
    }

    /// Numeric comparison, exact.
    pub fn cmp_value(self, other: Self) -> Ordering {
        let (x, y) = (self.to_f64(), other.to_f64());
        let margin = 1e-9 * x.abs().max(y.abs()).max(1.0);
        if x + margin < y {
            Ordering::Less
        } else if y + margin < x {
            Ordering::Greater
        } else {
            (self - other).sign()
        }
    }

    pub fn to_f64(self) -> f64 {
        wide_to_f64(self.a as i128, self.b as i128)
    }

    pub fn to_scalar(self) -> GoldenScalar {
        GoldenScalar::from_ints(self.a, self.b)
    }

    /// `None` unless the coefficients are integers that fit.
    pub fn from_scalar(x: &GoldenScalar) -> Option<Self> {
        if !x.is_golden_integer() {
            return None;
        }
        Some(Self { a: x.a().to_integer().to_i64()?, b: x.b().to_integer().to_i64()? })
    }

    /// `self^2` as wide coefficients.
    pub fn square_wide(self) -> (i128, i128) {
        let (a, b) = (self.a as i128, self.b as i128);
        (a * a + b * b, 2 * a * b + b * b)
    }
}

impl Add for GoldenInt {
    type Output = GoldenInt;
    fn add(self, o: GoldenInt) -> GoldenInt {
        GoldenInt { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for GoldenInt {
    type Output = GoldenInt;
    fn sub(self, o: GoldenInt) -> GoldenInt {
        GoldenInt { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for GoldenInt {
    type Output = GoldenInt;
    fn neg(self) -> GoldenInt {
        GoldenInt { a: -self.a, b: -self.b }
    }
}

impl fmt::Display for GoldenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*phi", self.a, self.b)
    }
}

/// Sign of `a + b phi` for wide coefficients.
pub fn sign_wide(a: i128, b: i128) -> Ordering {
    // 2(a + b phi) = (2a + b) + b sqrt 5
    let fast = (|| {
        let p = a.checked_mul(2)?.checked_add(b)?;
        let (sp, sq) = (p.cmp(&0), b.cmp(&0));
        if sq == Ordering::Equal || sp == sq || sp == Ordering::Equal {
            return Some(if sq == Ordering::Equal { sp } else { sq });
        }
        let pp = p.checked_mul(p)?;
        let qq = b.checked_mul(b)?.checked_mul(5)?;
        Some(if sp == Ordering::Greater { pp.cmp(&qq) } else { qq.cmp(&pp) })
    })();
    fast.unwrap_or_else(|| golden_sign(&BigInt::from(a), &BigInt::from(b)))
}

pub fn wide_to_f64(a: i128, b: i128) -> f64 {
    let (af, bf) = (a as f64, b as f64);
    if (a < 0) != (b < 0) && a != 0 && b != 0 {
        // a + b phi = (a^2 + ab - b^2) / (a + b (1 - phi))
        let n = a.checked_mul(a).and_then(|x| x.checked_add(a.checked_mul(b)?)).and_then(|x| x.checked_sub(b.checked_mul(b)?));
        if let Some(n) = n {
            return n as f64 / (af + bf * (1.0 - PHI_F64));
        }
    }
    af + bf * PHI_F64
}

/// Whether `a + b phi <= num / den` with `den > 0`.
pub fn le_ratio(a: i128, b: i128, num: i128, den: i128) -> bool {
    let fast = (|| Some(sign_wide(num.checked_sub(a.checked_mul(den)?)?, b.checked_mul(den)?.checked_neg()?)))();
    let s = fast.unwrap_or_else(|| {
        let (a, b, num, den) = (BigInt::from(a), BigInt::from(b), BigInt::from(num), BigInt::from(den));
        golden_sign(&(num - a * &den), &(-(b * den)))
    });
    s != Ordering::Less
}
