//! Vectors, matrices and generator words over Z[phi].

use std::fmt;
use std::ops::{Mul, Neg, Sub, Add};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::ring::GoldenScalar;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Vec2 {
    pub x: GoldenScalar,
    pub y: GoldenScalar,
}

impl Vec2 {
    pub fn new(x: GoldenScalar, y: GoldenScalar) -> Self {
        Self { x, y }
    }

    pub fn from_ints(ax: i64, bx: i64, ay: i64, by: i64) -> Self {
        Self::new(GoldenScalar::from_ints(ax, bx), GoldenScalar::from_ints(ay, by))
    }

    pub fn e1() -> Self {
        Self::new(GoldenScalar::one(), GoldenScalar::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn norm_sq(&self) -> GoldenScalar {
        &self.x * &self.x + &self.y * &self.y
    }

    pub fn dot(&self, other: &Vec2) -> GoldenScalar {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn scale(&self, s: &GoldenScalar) -> Vec2 {
        Vec2::new(&self.x * s, &self.y * s)
    }

    pub fn scale_rational(&self, r: &BigRational) -> Vec2 {
        Vec2::new(self.x.scale(r), self.y.scale(r))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add<&Vec2> for &Vec2 {
    type Output = Vec2;
    fn add(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub<&Vec2> for &Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }
}

/// `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat2 {
    pub a: GoldenScalar,
    pub b: GoldenScalar,
    pub c: GoldenScalar,
    pub d: GoldenScalar,
}

impl Mat2 {
    pub fn new(a: GoldenScalar, b: GoldenScalar, c: GoldenScalar, d: GoldenScalar) -> Self {
        Self { a, b, c, d }
    }

    /// Entries given as `(int, phi-coefficient)` pairs.
    pub fn from_ints(e: [(i64, i64); 4]) -> Self {
        let [a, b, c, d] = e.map(|(p, q)| GoldenScalar::from_ints(p, q));
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::from_ints([(1, 0), (0, 0), (0, 0), (1, 0)])
    }

    pub fn det(&self) -> GoldenScalar {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn act(&self, v: &Vec2) -> Vec2 {
        Vec2::new(&self.a * &v.x + &self.b * &v.y, &self.c * &v.x + &self.d * &v.y)
    }

    /// Adjugate inverse; requires det = 1.
    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        if !det.is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(Mat2::new(self.d.clone(), -&self.b, -&self.c, self.a.clone()))
    }

    pub fn pow(&self, mut e: u64) -> Mat2 {
        let mut base = self.clone();
        let mut acc = Mat2::identity();
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
}

impl Mul<&Mat2> for &Mat2 {
    type Output = Mat2;
    fn mul(self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }
}

impl Mul<&Vec2> for &Mat2 {
    type Output = Vec2;
    fn mul(self, v: &Vec2) -> Vec2 {
        self.act(v)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// sigma_0 .. sigma_3. Panics for `i > 3`.
pub fn generator(i: u8) -> Mat2 {
    match i {
        0 => Mat2::from_ints([(1, 0), (0, 1), (0, 0), (1, 0)]),
        1 => Mat2::from_ints([(0, 1), (0, 1), (1, 0), (0, 1)]),
        2 => Mat2::from_ints([(0, 1), (1, 0), (0, 1), (0, 1)]),
        3 => Mat2::from_ints([(1, 0), (0, 0), (0, 1), (1, 0)]),
        _ => panic!("generator index {i} out of range"),
    }
}

/// Inverse of `generator(i)`.
pub fn generator_inverse(i: u8) -> Mat2 {
    match i {
        0 => Mat2::from_ints([(1, 0), (0, -1), (0, 0), (1, 0)]),
        1 => Mat2::from_ints([(0, 1), (0, -1), (-1, 0), (0, 1)]),
        2 => Mat2::from_ints([(0, 1), (-1, 0), (0, -1), (0, 1)]),
        3 => Mat2::from_ints([(1, 0), (0, 0), (0, -1), (1, 0)]),
        _ => panic!("generator index {i} out of range"),
    }
}

/// Closed-form power of one of the unipotent generators, `i` in {0, 3}.
pub fn unipotent_pow(i: u8, t: impl Into<BigInt>) -> Mat2 {
    let tphi = GoldenScalar::from_ints(0, t.into());
    let (one, zero) = (GoldenScalar::one(), GoldenScalar::zero());
    match i {
        0 => Mat2::new(one.clone(), tphi, zero, one),
        3 => Mat2::new(one.clone(), zero, tphi, one),
        _ => panic!("sigma_{i} is not unipotent"),
    }
}

/// sigma_0 sigma_3^-1 sigma_0 sigma_3^-1 sigma_0, the rotation by a quarter turn.
pub fn rotation_quarter() -> Mat2 {
    let s0 = generator(0);
    let s3i = generator_inverse(3);
    let r = [&s3i, &s0, &s3i, &s0].into_iter().fold(s0.clone(), |acc, m| &acc * m);
    assert_eq!(r, Mat2::from_ints([(0, 0), (-1, 0), (1, 0), (0, 0)]));
    r
}

/// A word over {0, 1, 2, 3}, stored as maximal runs `(letter, count)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    runs: Vec<(u8, u64)>,
}

impl Word {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: &[u8]) -> Self {
        let mut w = Self::new();
        for &l in letters {
            w.push_run(l, 1);
        }
        w
    }

    /// Appends `count` copies of `letter` on the right, merging with the last run.
    pub fn push_run(&mut self, letter: u8, count: u64) {
        assert!(letter < 4, "letter {letter} out of range");
        if count == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some((l, c)) if *l == letter => *c += count,
            _ => self.runs.push((letter, count)),
        }
    }

    pub fn runs(&self) -> &[(u8, u64)] {
        &self.runs
    }

    /// Total number of letters.
    pub fn len(&self) -> u64 {
        self.runs.iter().map(|&(_, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = u8> + '_ {
        self.runs.iter().flat_map(|&(l, c)| std::iter::repeat_n(l, c as usize))
    }

    /// sigma_{k_0} ... sigma_{k_n} in reading order.
    pub fn to_matrix(&self) -> Mat2 {
        word_to_matrix(self)
    }
}

pub fn word_to_matrix(w: &Word) -> Mat2 {
    w.runs.iter().fold(Mat2::identity(), |acc, &(l, c)| {
        let block = match l {
            0 | 3 => unipotent_pow(l, c),
            _ => generator(l).pow(c),
        };
        &acc * &block
    })
}

/// Compact form `0^10.3^4.0.2`; the empty word is the empty string.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(l, c)) in self.runs.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            if c == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}^{c}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut w = Word::new();
        if s.trim().is_empty() {
            return Ok(w);
        }
        for part in s.trim().split('.') {
            let bad = || Error::Parse(format!("bad word block {part:?}"));
            let (l, c) = match part.split_once('^') {
                Some((l, c)) => (l, c.parse::<u64>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let l: u8 = l.parse().map_err(|_| bad())?;
            if l > 3 || c == 0 {
                return Err(bad());
            }
            w.push_run(l, c);
        }
        Ok(w)
    }
}
