//! Exact real quadratic numbers `(p + q sqrt d) / r`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `(p + q sqrt d) / r`, kept reduced: `r > 0`, `gcd(p, q, r) = 1`, `d`
/// square-free, and `q = d = 0` for rationals.
///
/// Binary operations require both operands to share the radicand (or one of
/// them to be rational) and panic otherwise.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadraticScalar {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    r: BigInt,
}

fn square_free_split(d: &BigInt) -> (BigInt, BigInt) {
    // d = s^2 * f with f square-free
    let mut f = d.clone();
    let mut s = BigInt::one();
    let mut i = BigInt::from(2);
    while &i * &i <= f {
        let ii = &i * &i;
        while (&f % &ii).is_zero() {
            f /= &ii;
            s *= &i;
        }
        i += 1;
    }
    (s, f)
}

impl QuadraticScalar {
    pub fn new(p: BigInt, q: BigInt, d: BigInt, r: BigInt) -> Self {
        assert!(!r.is_zero(), "zero denominator");
        assert!(!d.is_negative(), "negative radicand");
        let (s, f) = square_free_split(&d);
        let mut x = Self { p, q: q * s, d: f, r };
        if x.d.is_one() {
            x.p += &x.q;
            x.q = BigInt::zero();
        }
        if x.q.is_zero() || x.d.is_zero() {
            x.q = BigInt::zero();
            x.d = BigInt::zero();
        }
        x.reduce();
        x
    }

    fn reduce(&mut self) {
        if self.r.is_negative() {
            self.p = -&self.p;
            self.q = -&self.q;
            self.r = -&self.r;
        }
        let g = self.p.gcd(&self.q).gcd(&self.r);
        if !g.is_one() && !g.is_zero() {
            self.p /= &g;
            self.q /= &g;
            self.r /= &g;
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n.into(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    pub fn from_rational(x: &BigRational) -> Self {
        Self::new(x.numer().clone(), BigInt::zero(), BigInt::zero(), x.denom().clone())
    }

    /// `sqrt(d)`.
    pub fn sqrt(d: impl Into<BigInt>) -> Self {
        Self::new(BigInt::zero(), BigInt::one(), d.into(), BigInt::one())
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.p, &self.q, &self.d, &self.r)
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| BigRational::new(self.p.clone(), self.r.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.q.is_zero() && self.r.is_one()
    }

    fn common_d(&self, other: &Self) -> BigInt {
        match (self.q.is_zero(), other.q.is_zero()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, other.d, "radicand mismatch");
                self.d.clone()
            }
        }
    }

    pub fn sign(&self) -> Ordering {
        let zero = BigInt::zero();
        let (sp, sq) = (self.p.cmp(&zero), self.q.cmp(&zero));
        if self.q.is_zero() {
            return sp;
        }
        match (sp, sq) {
            (Ordering::Less | Ordering::Equal, Ordering::Less) => Ordering::Less,
            (Ordering::Greater | Ordering::Equal, Ordering::Greater) => Ordering::Greater,
            (Ordering::Greater, Ordering::Less) => {
                (&self.p * &self.p).cmp(&(&self.q * &self.q * &self.d))
            }
            _ => (&self.q * &self.q * &self.d).cmp(&(&self.p * &self.p)),
        }
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

    pub fn floor(&self) -> BigInt {
        let s = (&self.q * &self.q * &self.d).sqrt();
        // q^2 d is not a square when q != 0 and d is square-free and > 1
        let fq = if self.q.is_negative() { -s - 1 } else { s };
        (&self.p + fq).div_floor(&self.r)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        let den = &self.p * &self.p - &self.q * &self.q * &self.d;
        Self::new(&self.r * &self.p, -(&self.r * &self.q), self.d.clone(), den)
    }

    pub fn to_f64(&self) -> f64 {
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        let root = f(&self.d).sqrt();
        let opposite = self.p.sign() != self.q.sign() && !self.p.is_zero() && !self.q.is_zero();
        if opposite {
            // (p^2 - q^2 d) / (r (p - q sqrt d)) avoids cancellation
            let num = &self.p * &self.p - &self.q * &self.q * &self.d;
            f(&num) / (f(&self.r) * (f(&self.p) - f(&self.q) * root))
        } else {
            (f(&self.p) + f(&self.q) * root) / f(&self.r)
        }
    }
}

impl PartialOrd for QuadraticScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl Add<&QuadraticScalar> for &QuadraticScalar {
    type Output = QuadraticScalar;
    fn add(self, o: &QuadraticScalar) -> QuadraticScalar {
        let d = self.common_d(o);
        QuadraticScalar::new(
            &self.p * &o.r + &o.p * &self.r,
            &self.q * &o.r + &o.q * &self.r,
            d,
            &self.r * &o.r,
        )
    }
}

impl Sub<&QuadraticScalar> for &QuadraticScalar {
    type Output = QuadraticScalar;
    fn sub(self, o: &QuadraticScalar) -> QuadraticScalar {
        self + &(-o)
    }
}

impl Mul<&QuadraticScalar> for &QuadraticScalar {
    type Output = QuadraticScalar;
    fn mul(self, o: &QuadraticScalar) -> QuadraticScalar {
        let d = self.common_d(o);
        QuadraticScalar::new(
            &self.p * &o.p + &self.q * &o.q * &d,
            &self.p * &o.q + &o.p * &self.q,
            d,
            &self.r * &o.r,
        )
    }
}

impl Div<&QuadraticScalar> for &QuadraticScalar {
    type Output = QuadraticScalar;
        #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &QuadraticScalar) -> QuadraticScalar {
        self * &o.recip()
    }
}

impl Neg for &QuadraticScalar {
    type Output = QuadraticScalar;
    fn neg(self) -> QuadraticScalar {
        QuadraticScalar { p: -&self.p, q: -&self.q, d: self.d.clone(), r: self.r.clone() }
    }
}

impl Neg for QuadraticScalar {
    type Output = QuadraticScalar;
    fn neg(self) -> QuadraticScalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<QuadraticScalar> for QuadraticScalar {
            type Output = QuadraticScalar;
            fn $method(self, o: QuadraticScalar) -> QuadraticScalar {
                (&self).$method(&o)
            }
        }
        impl $trait<&QuadraticScalar> for QuadraticScalar {
            type Output = QuadraticScalar;
            fn $method(self, o: &QuadraticScalar) -> QuadraticScalar {
                (&self).$method(o)
            }
        }
    )*};
}
owned_binop!(Add add, Sub sub, Mul mul, Div div);

/// `(p+q*sqrt(d))/r`, or `p/r` when rational.
impl fmt::Display for QuadraticScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            if self.r.is_one() {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.r)
            }
        } else {
            write!(f, "({}+{}*sqrt({}))/{}", self.p, self.q, self.d, self.r)
        }
    }
}
