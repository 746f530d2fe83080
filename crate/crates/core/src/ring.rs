//! Exact arithmetic in Z[phi] and its fraction field Q(sqrt 5).
//!
//! Every element is stored as `a + b*phi` with reduced rational coefficients,
//! so structural equality is value equality. Signs and floors are decided with
//! integer arithmetic only.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const PHI_F64: f64 = 1.618_033_988_749_895;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GoldenScalar {
    a: BigRational,
    b: BigRational,
}

impl GoldenScalar {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn from_ints(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self {
            a: BigRational::from_integer(a.into()),
            b: BigRational::from_integer(b.into()),
        }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Self { a, b: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn phi() -> Self {
        Self::from_ints(0, 1)
    }

    /// Coefficient of 1.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of phi.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_golden_integer(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// Image under phi -> 1 - phi.
    pub fn conj(&self) -> Self {
        Self { a: &self.a + &self.b, b: -&self.b }
    }

    /// N(a + b*phi) = a^2 + ab - b^2.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a + &self.a * &self.b - &self.b * &self.b
    }

    /// Least common multiple of the two coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.a.denom().lcm(self.b.denom())
    }

    /// Integer coefficients `(A, B, D)` with `self = (A + B*phi) / D`, `D > 0`.
    fn integer_form(&self) -> (BigInt, BigInt, BigInt) {
        let d = self.denominator_lcm();
        let a = self.a.numer() * (&d / self.a.denom());
        let b = self.b.numer() * (&d / self.b.denom());
        (a, b, d)
    }

    pub fn sign(&self) -> Ordering {
        let (a, b, _) = self.integer_form();
        golden_sign(&a, &b)
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact floor of the real value.
    pub fn floor(&self) -> BigInt {
        // x = (2A + B + B*sqrt5) / (2D); floor(B*sqrt5) is exact via isqrt,
        // and adding a fractional part in [0, 1) never moves floor(N / M).
        let (a, b, d) = self.integer_form();
        let s = BigInt::from(2) * &a + &b;
        let n = s + floor_sqrt5_times(&b);
        n.div_floor(&(BigInt::from(2) * d))
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// `(floor(x), x - floor(x))`; defined for `x >= 0` only.
    pub fn floor_frac(&self) -> Result<(BigInt, GoldenScalar)> {
        if self.is_negative() {
            return Err(Error::FracOfNegative);
        }
        let f = self.floor();
        let frac = self - &GoldenScalar::from_ints(f.clone(), 0);
        Ok((f, frac))
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in Z[phi]");
        let n = self.norm();
        let c = self.conj();
        Self { a: c.a / &n, b: c.b / n }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self { a: &self.a * r, b: &self.b * r }
    }

    /// Integer powers, negative exponents allowed for non-zero values.
    pub fn powi(&self, e: i64) -> Self {
        let mut base = if e < 0 { self.recip() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Floating-point approximation for report columns only.
    ///
    /// Values with large coefficients of opposite sign are evaluated as
    /// `N(x) / conj(x)` to avoid cancellation.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let opposite = self.a.is_positive() && self.b.is_negative()
            || self.a.is_negative() && self.b.is_positive();
        if opposite && self.a.abs() > self.b.abs() {
            let n = self.norm().to_f64().unwrap_or(f64::NAN);
            let c = self.conj();
            let cf = c.a.to_f64().unwrap_or(f64::NAN) + c.b.to_f64().unwrap_or(f64::NAN) * PHI_F64;
            n / cf
        } else {
            a + b * PHI_F64
        }
    }
}

/// Sign of `a + b*phi` for integers, via `2x = (2a + b) + b*sqrt5`.
pub(crate) fn golden_sign(a: &BigInt, b: &BigInt) -> Ordering {
    let s = BigInt::from(2) * a + b;
    if b.is_zero() {
        return s.sign_ord();
    }
    match (s.sign_ord(), b.sign_ord()) {
        (Ordering::Less, Ordering::Less) | (Ordering::Equal, Ordering::Less) => Ordering::Less,
        (Ordering::Greater, Ordering::Greater) | (Ordering::Equal, Ordering::Greater) => {
            Ordering::Greater
        }
        (Ordering::Greater, Ordering::Less) => (&s * &s).cmp(&(BigInt::from(5) * b * b)),
        (Ordering::Less, Ordering::Greater) => (BigInt::from(5) * b * b).cmp(&(&s * &s)),
        _ => unreachable!("b is non-zero"),
    }
}

/// floor(b * sqrt(5)) for any integer b.
fn floor_sqrt5_times(b: &BigInt) -> BigInt {
    let r = (BigInt::from(5) * b * b).sqrt();
    if b.is_negative() {
        // 5b^2 is never a square for b != 0
        -r - 1
    } else {
        r
    }
}

trait SignOrd {
    fn sign_ord(&self) -> Ordering;
}

impl SignOrd for BigInt {
    fn sign_ord(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

impl PartialOrd for GoldenScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GoldenScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<GoldenScalar> for GoldenScalar {
            type Output = GoldenScalar;
            fn $method(self, rhs: GoldenScalar) -> GoldenScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&GoldenScalar> for GoldenScalar {
            type Output = GoldenScalar;
            fn $method(self, rhs: &GoldenScalar) -> GoldenScalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<GoldenScalar> for &GoldenScalar {
            type Output = GoldenScalar;
            fn $method(self, rhs: GoldenScalar) -> GoldenScalar {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&GoldenScalar> for &GoldenScalar {
    type Output = GoldenScalar;
    fn add(self, rhs: &GoldenScalar) -> GoldenScalar {
        GoldenScalar { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub<&GoldenScalar> for &GoldenScalar {
    type Output = GoldenScalar;
    fn sub(self, rhs: &GoldenScalar) -> GoldenScalar {
        GoldenScalar { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Mul<&GoldenScalar> for &GoldenScalar {
    type Output = GoldenScalar;
    fn mul(self, rhs: &GoldenScalar) -> GoldenScalar {
        let bb = &self.b * &rhs.b;
        GoldenScalar {
            a: &self.a * &rhs.a + &bb,
            b: &self.a * &rhs.b + &rhs.a * &self.b + bb,
        }
    }
}

impl Div<&GoldenScalar> for &GoldenScalar {
    type Output = GoldenScalar;
        #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &GoldenScalar) -> GoldenScalar {
        self * &rhs.recip()
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for &GoldenScalar {
    type Output = GoldenScalar;
    fn neg(self) -> GoldenScalar {
        GoldenScalar { a: -&self.a, b: -&self.b }
    }
}

impl Neg for GoldenScalar {
    type Output = GoldenScalar;
    fn neg(self) -> GoldenScalar {
        GoldenScalar { a: -self.a, b: -self.b }
    }
}

impl From<i64> for GoldenScalar {
    fn from(v: i64) -> Self {
        GoldenScalar::from_ints(v, 0)
    }
}

impl From<BigInt> for GoldenScalar {
    fn from(v: BigInt) -> Self {
        GoldenScalar::from_ints(v, 0)
    }
}

/// Serialized as `a+b*phi`, both coefficients in reduced fraction form.
/// A negative `b` keeps the literal `+` separator, e.g. `5+-3*phi`.
impl fmt::Display for GoldenScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*phi", self.a, self.b)
    }
}

impl FromStr for GoldenScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("expected a+b*phi, got {s:?}"));
        if let Some(body) = s.strip_suffix("*phi") {
            // split at the last sign that starts the phi coefficient
            let bytes = body.as_bytes();
            let idx = (1..bytes.len())
                .rev()
                .find(|&i| {
                    (bytes[i] == b'+' || bytes[i] == b'-')
                        && bytes[i - 1] != b'+'
                        && bytes[i - 1] != b'-'
                })
                .ok_or_else(bad)?;
            let a = parse_rational(&body[..idx])?;
            let b_str = body[idx..].strip_prefix('+').unwrap_or(&body[idx..]);
            let b = parse_rational(b_str)?;
            Ok(GoldenScalar::new(a, b))
        } else if s == "phi" {
            Ok(GoldenScalar::phi())
        } else {
            Ok(GoldenScalar::from_rational(parse_rational(&s)?))
        }
    }
}

/// Parses `n`, `n/d` or a finite decimal such as `1.1` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = BigRational::new(int_part * &scale + frac_part, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// F_n with F_0 = 0, F_1 = 1.
pub fn fib(n: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// Exact phi^j for any integer j.
pub fn phi_pow(j: i64) -> GoldenScalar {
    if j >= 0 {
        // phi^n = F_{n-1} + F_n phi, with F_{-1} = 1
        let n = j as u64;
        let prev = if n == 0 { BigInt::one() } else { fib(n - 1) };
        GoldenScalar::from_ints(prev, fib(n))
    } else {
        // phi^{-m} = (-1)^m F_{m+1} + (-1)^{m+1} F_m phi
        let m = j.unsigned_abs();
        let s = if m.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        GoldenScalar::from_ints(&s * fib(m + 1), -s * fib(m))
    }
}

/// The unique j with x = phi^j, for a positive unit x of Z[phi].
pub fn unit_exponent(x: &GoldenScalar) -> Result<i64> {
    let n = x.norm();
    if !x.is_golden_integer() || !(n.is_one() || (-&n).is_one()) {
        return Err(Error::NotAUnit(x.to_string()));
    }
    if !x.is_positive() {
        return Err(Error::NotPositive(x.to_string()));
    }
    // jump close to the answer with a float estimate, then walk exactly
    let mut j: i64 = 0;
    let approx = x.to_f64();
    if approx.is_finite() && approx > 0.0 {
        j = (approx.ln() / PHI_F64.ln()).round() as i64;
    }
    let mut rest = x * &phi_pow(-j);
    let phi = GoldenScalar::phi();
    let phi_inv = phi_pow(-1);
    while rest > GoldenScalar::one() {
        rest = &rest * &phi_inv;
        j += 1;
    }
    while rest < GoldenScalar::one() {
        rest = &rest * &phi;
        j -= 1;
    }
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> GoldenScalar {
        GoldenScalar::from_ints(a, b)
    }

    #[test]
    fn multiplication_reduces_phi_squared() {
        assert_eq!(g(0, 1) * g(0, 1), g(1, 1));
        assert_eq!(g(0, 1) * g(1, 1), g(1, 2));
        assert_eq!(g(7, -3) * GoldenScalar::one(), g(7, -3));
    }

    #[test]
    fn conjugation() {
        assert_eq!(GoldenScalar::phi().conj(), g(1, -1));
        assert_eq!(g(5, 0).conj(), g(5, 0));
        assert_eq!(g(3, 8).conj().conj(), g(3, 8));
        assert_eq!(GoldenScalar::phi().conj(), -phi_pow(-1));
    }

    #[test]
    fn norms() {
        assert_eq!(GoldenScalar::phi().norm(), BigRational::from_integer((-1).into()));
        assert_eq!(GoldenScalar::one().norm(), BigRational::one());
        assert_eq!(g(1, 1).norm(), BigRational::one());
    }

    #[test]
    fn signs() {
        assert_eq!(g(1, -1).sign(), Ordering::Less);
        assert_eq!(GoldenScalar::zero().sign(), Ordering::Equal);
        // (2*(-8)+5)^2 = 121 < 125 = 5*25
        assert_eq!(g(-8, 5).sign(), Ordering::Greater);
        assert_eq!(g(8, -5).sign(), Ordering::Less);
        assert_eq!(g(-13, 8).sign(), Ordering::Less);
    }

    #[test]
    fn floors() {
        let (f, r) = phi_pow(3).floor_frac().unwrap();
        assert_eq!(f, BigInt::from(4));
        assert_eq!(r, g(-3, 2));
        let (f, r) = g(3, 0).floor_frac().unwrap();
        assert_eq!((f, r), (BigInt::from(3), GoldenScalar::zero()));
        let (f, r) = g(0, 5).floor_frac().unwrap();
        assert_eq!(f, BigInt::from(8));
        assert_eq!(r, phi_pow(-5));
        assert_eq!(g(0, -1).floor(), BigInt::from(-2));
        assert_eq!(g(-1, 0).floor(), BigInt::from(-1));
        assert_eq!(g(1, -1).floor_frac(), Err(Error::FracOfNegative));
    }

    #[test]
    fn floor_of_fractional_coefficients() {
        let x = GoldenScalar::new(BigRational::new((-8).into(), 3.into()), BigRational::zero());
        assert_eq!(x.floor(), BigInt::from(-3));
        let y = GoldenScalar::new(BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into()));
        // (1 + phi)/2 = 1.309
        assert_eq!(y.floor(), BigInt::one());
    }

    #[test]
    fn powers_of_phi() {
        assert_eq!(phi_pow(0), GoldenScalar::one());
        assert_eq!(phi_pow(-4), g(5, -3));
        assert_eq!(phi_pow(-4) * phi_pow(4), GoldenScalar::one());
        assert_eq!(phi_pow(3), g(1, 2));
        for j in -30..30 {
            assert_eq!(phi_pow(j), GoldenScalar::phi().powi(j));
        }
    }

    #[test]
    fn fibonacci() {
        assert_eq!(fib(0), BigInt::zero());
        assert_eq!(fib(1), BigInt::one());
        assert_eq!(fib(10), BigInt::from(55));
    }

    #[test]
    fn unit_exponents() {
        assert_eq!(unit_exponent(&GoldenScalar::one()), Ok(0));
        assert_eq!(unit_exponent(&g(-8, 5)), Ok(-5));
        assert_eq!(unit_exponent(&g(1, 1)), Ok(2));
        for j in -80..80 {
            assert_eq!(unit_exponent(&phi_pow(j)), Ok(j));
        }
        assert!(matches!(unit_exponent(&g(2, 0)), Err(Error::NotAUnit(_))));
        assert!(matches!(unit_exponent(&g(1, -1)), Err(Error::NotPositive(_))));
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(g(12, 19).to_string(), "12+19*phi");
        let x = GoldenScalar::from_rational(BigRational::new((-8).into(), 3.into()));
        assert_eq!(x.to_string(), "-8/3+0*phi");
        assert_eq!(g(5, -3).to_string(), "5+-3*phi");
        for s in ["12+19*phi", "-8/3+0*phi", "5+-3*phi", "-1/2+7/9*phi"] {
            assert_eq!(s.parse::<GoldenScalar>().unwrap().to_string(), s);
        }
        assert_eq!("5-3*phi".parse::<GoldenScalar>().unwrap(), g(5, -3));
        assert_eq!(parse_rational("1.1").unwrap(), BigRational::new(11.into(), 10.into()));
        assert!("phi+".parse::<GoldenScalar>().is_err());
    }

    #[test]
    fn float_view_survives_cancellation() {
        let x = phi_pow(-60);
        let expect = PHI_F64.powi(-60);
        assert!((x.to_f64() / expect - 1.0).abs() < 1e-12);
    }
}
