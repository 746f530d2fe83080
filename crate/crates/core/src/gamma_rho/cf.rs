//! Continued fractions of rational and real quadratic numbers.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::quadratic::QuadraticScalar;
use crate::error::{ensure, Error, Result};

/// Partial quotients `[a0; a1, a2, ...]`, stored as a finite prefix followed
/// by an optional repeating period.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ContinuedFraction {
    prefix: Vec<BigInt>,
    period: Vec<BigInt>,
}

impl ContinuedFraction {
    /// A purely periodic input is rotated so that `a0` sits in the prefix.
    pub fn new(mut prefix: Vec<BigInt>, mut period: Vec<BigInt>) -> Result<Self> {
        let all_positive = prefix.iter().skip(1).chain(&period).all(|a| a.is_positive());
        if prefix.is_empty() && period.is_empty() {
            return Err(Error::Parse("empty continued fraction".into()));
        }
        if !all_positive || (prefix.is_empty() && !period[0].is_positive()) {
            return Err(Error::NonPositive);
        }
        if prefix.is_empty() {
            prefix.push(period[0].clone());
            period.rotate_left(1);
        }
        Ok(Self { prefix, period })
    }

    pub fn prefix(&self) -> &[BigInt] {
        &self.prefix
    }

    pub fn period(&self) -> &[BigInt] {
        &self.period
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// Number of terms, `None` when periodic.
    pub fn finite_len(&self) -> Option<usize> {
        self.is_finite().then_some(self.prefix.len())
    }

    pub fn term(&self, i: usize) -> Option<&BigInt> {
        if i < self.prefix.len() {
            Some(&self.prefix[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(&self.period[(i - self.prefix.len()) % self.period.len()])
        }
    }

    /// Up to `n` leading terms.
    pub fn terms(&self, n: usize) -> Vec<BigInt> {
        (0..n).map_while(|i| self.term(i).cloned()).collect()
    }

    /// The continued fraction with `a0` replaced by `a0 + k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.prefix[0] += k;
        out
    }

    /// Exact value; periodic tails give a quadratic irrational.
    pub fn value(&self) -> QuadraticScalar {
        let tail = if self.period.is_empty() {
            None
        } else {
            Some(purely_periodic_value(&self.period))
        };
        let mut x = tail;
        for a in self.prefix.iter().rev() {
            let a = QuadraticScalar::from_int(a.clone());
            x = Some(match x {
                None => a,
                Some(t) => &a + &t.recip(),
            });
        }
        x.expect("non-empty continued fraction")
    }
}

/// Positive root of `q x^2 + (q' - p) x - p' = 0` where `p/q`, `p'/q'` are
/// the last two convergents of one period.
fn purely_periodic_value(period: &[BigInt]) -> QuadraticScalar {
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (period[0].clone(), BigInt::one());
    for a in &period[1..] {
        let p2 = a * &p1 + &p0;
        let q2 = a * &q1 + &q0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    let b = &q0 - &p1;
    let disc = &b * &b + BigInt::from(4) * &q1 * &p0;
    QuadraticScalar::new(-b, BigInt::one(), disc, BigInt::from(2) * q1)
}

/// `[a0; a1, ...]`, period in parentheses.
impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self.prefix.iter().map(|a| a.to_string()).collect();
        if !self.period.is_empty() {
            let p: Vec<String> = self.period.iter().map(|a| a.to_string()).collect();
            items.push(format!("({})", p.join(",")));
        }
        let (head, rest) = items.split_first().expect("non-empty");
        if rest.is_empty() {
            write!(f, "[{head}]")
        } else {
            write!(f, "[{head}; {}]", rest.join(", "))
        }
    }
}

/// Bound on expansion steps spent looking for the period.
pub const PERIOD_SEARCH_CAP: usize = 100_000;

/// Expands `x > 1` by repeated floor and inversion.
///
/// Rationals expand to completion. Quadratic irrationals expand until a
/// complete quotient repeats, and the detected period streams further terms.
/// `n_terms` is the minimum number of terms the result must provide.
pub fn cf_expand(x: &QuadraticScalar, n_terms: usize) -> Result<ContinuedFraction> {
    if x <= &QuadraticScalar::one() {
        return Err(Error::NonPositive);
    }
    let mut seen: HashMap<QuadraticScalar, usize> = HashMap::new();
    let mut terms = Vec::new();
    let mut cur = x.clone();
    let cap = PERIOD_SEARCH_CAP.max(n_terms);
    for i in 0..cap {
        if !cur.is_rational() {
            if let Some(&start) = seen.get(&cur) {
                let period = terms.split_off(start);
                return ContinuedFraction::new(terms, period);
            }
            seen.insert(cur.clone(), i);
        }
        let a = cur.floor();
        let frac = &cur - &QuadraticScalar::from_int(a.clone());
        terms.push(a);
        if frac.is_zero() {
            return ContinuedFraction::new(terms, Vec::new());
        }
        cur = frac.recip();
    }
    Err(Error::IterationCap(cap))
}

/// `(n, p_n, q_n)` with `p_n / q_n` the n-th convergent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Convergent {
    pub n: usize,
    pub p: BigInt,
    pub q: BigInt,
}

/// Convergents `0..=n_max` (fewer when the fraction terminates earlier).
pub fn convergent_list(cf: &ContinuedFraction, n_max: usize) -> Result<Vec<Convergent>> {
    let mut out: Vec<Convergent> = Vec::with_capacity(n_max + 1);
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
    for n in 0..=n_max {
        let Some(a) = cf.term(n) else { break };
        let p = a * &p0 + &p1;
        let q = a * &q0 + &q1;
        let det = &p * &q0 - &p0 * &q;
        let expected = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        ensure!(n == 0 || det == expected, "determinant {det} at n = {n}");
        ensure!(n < 2 || q > q0, "q not increasing at n = {n}");
        (p1, q1, p0, q0) = (p0, q0, p.clone(), q.clone());
        out.push(Convergent { n, p, q });
    }
    Ok(out)
}

pub fn convergents(cf: &ContinuedFraction, n: usize) -> Result<Convergent> {
    convergent_list(cf, n)?.into_iter().nth(n).ok_or(Error::IndexOutOfRange(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::fib;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&a| BigInt::from(a)).collect()
    }

    fn one_plus_sqrt2() -> QuadraticScalar {
        QuadraticScalar::new(1.into(), 1.into(), 2.into(), 1.into())
    }

    fn phi_plus_one() -> QuadraticScalar {
        QuadraticScalar::new(3.into(), 1.into(), 5.into(), 2.into())
    }

    fn back_substitute(terms: &[BigInt]) -> QuadraticScalar {
        let mut it = terms.iter().rev();
        let mut x = QuadraticScalar::from_int(it.next().unwrap().clone());
        for a in it {
            x = &QuadraticScalar::from_int(a.clone()) + &x.recip();
        }
        x
    }

    #[test]
    fn expansions() {
        let cf = cf_expand(&one_plus_sqrt2(), 5).unwrap();
        assert_eq!(cf.terms(5), ints(&[2, 2, 2, 2, 2]));
        assert_eq!(cf.to_string(), "[2; (2)]");
        let r = QuadraticScalar::from_rational(&"7/3".parse().unwrap());
        let cf = cf_expand(&r, 1).unwrap();
        assert_eq!(cf.prefix(), &ints(&[2, 3])[..]);
        assert!(cf.is_finite());
        let cf = cf_expand(&phi_plus_one(), 5).unwrap();
        assert_eq!(cf.terms(5), ints(&[2, 1, 1, 1, 1]));
        assert!(matches!(cf_expand(&QuadraticScalar::one(), 3), Err(Error::NonPositive)));
    }

    #[test]
    fn expansion_round_trips() {
        for x in [one_plus_sqrt2(), phi_plus_one(), QuadraticScalar::new(5.into(), 2.into(), 7.into(), 3.into())] {
            let cf = cf_expand(&x, 0).unwrap();
            assert_eq!(cf.value(), x);
            // prefixes converge to x from alternating sides
            let c = convergent_list(&cf, 10).unwrap();
            for (n, cv) in c.iter().enumerate() {
                let terms = cf.terms(n + 1);
                let r = back_substitute(&terms);
                assert_eq!(r, QuadraticScalar::from_rational(&(cv.p.clone(), cv.q.clone()).into()));
            }
        }
    }

    #[test]
    fn convergent_values() {
        let cf = cf_expand(&one_plus_sqrt2(), 5).unwrap();
        let c = convergent_list(&cf, 2).unwrap();
        let pq: Vec<(i64, i64)> = c.iter().map(|c| (c.p.clone().try_into().unwrap(), c.q.clone().try_into().unwrap())).collect();
        assert_eq!(pq, vec![(2, 1), (5, 2), (12, 5)]);
        let cf = cf_expand(&phi_plus_one(), 0).unwrap();
        for c in convergent_list(&cf, 30).unwrap() {
            assert_eq!(c.q, fib(c.n as u64 + 1));
        }
        let finite = ContinuedFraction::new(ints(&[2, 3]), vec![]).unwrap();
        assert!(matches!(convergents(&finite, 2), Err(Error::IndexOutOfRange(2))));
    }

    #[test]
    fn shift_keeps_tail() {
        let cf = cf_expand(&QuadraticScalar::sqrt(2), 0).unwrap();
        let shifted = cf.shift(1);
        assert_eq!(shifted.value(), one_plus_sqrt2());
        assert_eq!(cf.terms(8)[1..], shifted.terms(8)[1..]);
    }

    #[test]
    fn periodic_values() {
        let cf = ContinuedFraction::new(ints(&[2]), ints(&[100, 2])).unwrap();
        let x = cf.value();
        assert_eq!(cf_expand(&x, 0).unwrap(), cf);
        assert!((x.to_f64() - (2.0 + 1.0 / (100.0 + 1.0 / (2.0 + 1.0 / 100.5)))).abs() < 1e-9);
    }
}
