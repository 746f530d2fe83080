//! The groups `Gamma_rho = <u1, u2>` with `u1 = [[1,1],[0,1]]` and
//! `u2 = [[1,0],[rho,1]]`: close pairs from convergents of `rho + 1` for
//! quadratic irrational `rho`, and lattice containment for rational `rho`.

pub mod cf;
pub mod quadratic;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use cf::{cf_expand, convergent_list, convergents, ContinuedFraction, Convergent};
pub use quadratic::QuadraticScalar;

use crate::error::{ensure, Error, Result};
use crate::ring::parse_rational;

/// A vector with quadratic coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QVec {
    pub x: QuadraticScalar,
    pub y: QuadraticScalar,
}

impl QVec {
    pub fn norm_sq(&self) -> QuadraticScalar {
        &(&self.x * &self.x) + &(&self.y * &self.y)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

/// 2x2 matrix with quadratic entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMat2 {
    pub a: QuadraticScalar,
    pub b: QuadraticScalar,
    pub c: QuadraticScalar,
    pub d: QuadraticScalar,
}

impl QMat2 {
    /// `u1^t`.
    pub fn u1_pow(t: &BigInt) -> Self {
        let (zero, one) = (QuadraticScalar::zero(), QuadraticScalar::one());
        Self { a: one.clone(), b: QuadraticScalar::from_int(t.clone()), c: zero, d: one }
    }

    /// `u2^t`.
    pub fn u2_pow(rho: &QuadraticScalar, t: &BigInt) -> Self {
        let (zero, one) = (QuadraticScalar::zero(), QuadraticScalar::one());
        Self { a: one.clone(), b: zero, c: rho * &QuadraticScalar::from_int(t.clone()), d: one }
    }

    pub fn det(&self) -> QuadraticScalar {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    pub fn e1_image(&self) -> QVec {
        QVec { x: self.a.clone(), y: self.c.clone() }
    }
}

/// Parsed `rho`.
#[derive(Clone, Debug)]
pub enum Rho {
    Rational(BigRational),
    Irrational(GammaRho),
}

/// Parses `p/q`, `(p+q*sqrt(d))/r`, or `cf:[a0;a1,...,ak]`.
///
/// In the `cf:` form the terms after `;` repeat forever, so
/// `cf:[2;100,2]` is `[2; 100, 2, 100, 2, ...]`. A parenthesized group marks
/// the period explicitly after a non-repeating part: `cf:[1;3,(1,2)]`.
/// The terms are partial quotients of `rho` itself.
pub fn parse_rho(s: &str) -> Result<Rho> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let value = if let Some(body) = s.strip_prefix("cf:") {
        let cf = parse_cf(body)?;
        if cf.is_finite() {
            let v = cf.value();
            v.to_rational().ok_or_else(|| Error::Parse(s.clone()))?;
            v
        } else {
            return GammaRho::from_cf(cf).map(Rho::Irrational);
        }
    } else if s.contains("sqrt") {
        parse_quadratic(&s)?
    } else {
        QuadraticScalar::from_rational(&parse_rational(&s)?)
    };
    if !value.is_positive() {
        return Err(Error::NotPositive(s));
    }
    match value.to_rational() {
        Some(r) => Ok(Rho::Rational(r)),
        None => GammaRho::new(value).map(Rho::Irrational),
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.parse().map_err(|_| Error::Parse(format!("bad integer {s:?}")))
}

fn parse_cf(body: &str) -> Result<ContinuedFraction> {
    let inner = body
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected [a0;a1,...], got {body:?}")))?;
    let (head, tail) = inner.split_once(';').unwrap_or((inner, ""));
    let tail = tail.trim_end_matches("...").trim_end_matches('…').trim_end_matches(',');
    let a0 = parse_int(head)?;
    let list = |t: &str| -> Result<Vec<BigInt>> {
        t.split(',').filter(|x| !x.is_empty()).map(parse_int).collect()
    };
    let (pre, period) = match tail.split_once('(') {
        Some((pre, per)) => {
            let per = per
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unclosed period in {body:?}")))?;
            (list(pre)?, list(per)?)
        }
        None => (Vec::new(), list(tail)?),
    };
    let mut prefix = vec![a0];
    prefix.extend(pre);
    ContinuedFraction::new(prefix, period)
}

fn parse_quadratic(s: &str) -> Result<QuadraticScalar> {
    let bad = || Error::Parse(format!("expected (p+q*sqrt(d))/r, got {s:?}"));
    let close = s.rfind(')').ok_or_else(bad)?;
    let (num, r) = match s[close + 1..].strip_prefix('/') {
        Some(r) => (&s[..=close], parse_int(r)?),
        None if close + 1 == s.len() => (s, BigInt::one()),
        None => return Err(bad()),
    };
    let num = if num.starts_with('(') && num.ends_with("))") {
        &num[1..num.len() - 1]
    } else {
        num
    };
    let at = num.find("sqrt(").ok_or_else(bad)?;
    let d = parse_int(num[at + 5..].strip_suffix(')').ok_or_else(bad)?)?;
    let before = num[..at].trim_end_matches('*');
    let bytes = before.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'+' | b'-'));
    let (p_text, q_text) = match split {
        Some(i) => (&before[..i], before[i..].trim_start_matches('+')),
        None => ("0", before),
    };
    let p = parse_int(p_text)?;
    let q = match q_text {
        "" | "+" => BigInt::one(),
        "-" => -BigInt::one(),
        t => parse_int(t)?,
    };
    if r.is_zero() || d.is_negative() {
        return Err(bad());
    }
    Ok(QuadraticScalar::new(p, q, d, r))
}

/// `Psi_n = p_n - q_n (rho + 1)` together with `q_{n+1}`.
#[derive(Clone, Debug)]
pub struct PsiValue {
    pub n: usize,
    pub p: BigInt,
    pub q: BigInt,
    pub q_next: BigInt,
    pub value: QuadraticScalar,
}

/// Multipliers for the close-pair bounds `dist * q_{n+1} <= dist_c * rho`
/// and `|gamma2 e1| <= norm_c * q_n * q_{n+1}`.
#[derive(Clone, Debug)]
pub struct PairBounds {
    pub dist_c: BigRational,
    pub norm_c: BigRational,
}

impl Default for PairBounds {
    fn default() -> Self {
        Self { dist_c: BigRational::from_integer(2.into()), norm_c: BigRational::from_integer(4.into()) }
    }
}

#[derive(Clone, Debug)]
pub struct ConPair {
    pub psi: PsiValue,
    /// Signed: negative when `Psi_n < 0`.
    pub l: BigInt,
    pub point1: QVec,
    pub point2: QVec,
    pub diff: QVec,
    pub dist_sq: QuadraticScalar,
    pub norm_sq: QuadraticScalar,
    pub dist_bound_ok: bool,
    pub norm_bound_ok: bool,
}

impl ConPair {
    pub fn dist(&self) -> f64 {
        self.dist_sq.to_f64().sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq.to_f64().sqrt()
    }

    pub fn dist_times_qn1(&self) -> f64 {
        self.dist() * self.psi.q_next.to_f64().unwrap_or(f64::NAN)
    }

    pub fn norm_over_qnqn1(&self) -> f64 {
        let qq = &self.psi.q * &self.psi.q_next;
        self.norm() / qq.to_f64().unwrap_or(f64::NAN)
    }

    pub fn row(&self) -> GammaRhoRow {
        GammaRhoRow {
            n: self.psi.n,
            p_n: self.psi.p.to_string(),
            q_n: self.psi.q.to_string(),
            psi_float: self.psi.value.to_f64(),
            l: self.l.to_string(),
            dist_float: self.dist(),
            dist_times_qn1: self.dist_times_qn1(),
            norm_float: self.norm(),
            norm_over_qnqn1: self.norm_over_qnqn1(),
            khinchin_ok: true,
            dist_bound_ok: self.dist_bound_ok,
            norm_bound_ok: self.norm_bound_ok,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaRhoRow {
    pub n: usize,
    pub p_n: String,
    pub q_n: String,
    pub psi_float: f64,
    #[serde(rename = "L")]
    pub l: String,
    pub dist_float: f64,
    pub dist_times_qn1: f64,
    pub norm_float: f64,
    pub norm_over_qnqn1: f64,
    pub khinchin_ok: bool,
    pub dist_bound_ok: bool,
    pub norm_bound_ok: bool,
}

/// A quadratic irrational `rho > 0` with the expansion of `rho + 1`.
#[derive(Clone, Debug)]
pub struct GammaRho {
    rho: QuadraticScalar,
    cf: ContinuedFraction,
}

impl GammaRho {
    pub fn new(rho: QuadraticScalar) -> Result<Self> {
        if rho.is_rational() {
            return Err(Error::RationalRho);
        }
        if !rho.is_positive() {
            return Err(Error::NotPositive(rho.to_string()));
        }
        let cf = cf_expand(&(&rho + &QuadraticScalar::one()), 0)?;
        Ok(Self { rho, cf })
    }

    /// From the partial quotients of `rho`; the tail must be periodic.
    pub fn from_cf(cf_rho: ContinuedFraction) -> Result<Self> {
        if cf_rho.is_finite() {
            return Err(Error::RationalRho);
        }
        let rho = cf_rho.value();
        if !rho.is_positive() {
            return Err(Error::NotPositive(rho.to_string()));
        }
        Ok(Self { rho, cf: cf_rho.shift(1) })
    }

    pub fn rho(&self) -> &QuadraticScalar {
        &self.rho
    }

    /// Partial quotients of `rho + 1`.
    pub fn cf(&self) -> &ContinuedFraction {
        &self.cf
    }

    pub fn psi(&self, n: usize) -> Result<PsiValue> {
        let c = convergent_list(&self.cf, n + 1)?;
        let (cur, next) = (&c[n], &c[n + 1]);
        let rho1 = &self.rho + &QuadraticScalar::one();
        let value = &QuadraticScalar::from_int(cur.p.clone())
            - &(&QuadraticScalar::from_int(cur.q.clone()) * &rho1);
        let abs = value.abs();
        let qi = |x: &BigInt| QuadraticScalar::from_int(x.clone());
        let one = QuadraticScalar::one();
        ensure!(&abs * &qi(&next.q) < one, "|Psi_{n}| >= 1/q_(n+1)");
        ensure!(&abs * &qi(&(&next.q + &cur.q)) > one, "|Psi_{n}| <= 1/(q_(n+1)+q_n)");
        let expected = if n % 2 == 1 { Ordering::Greater } else { Ordering::Less };
        ensure!(value.sign() == expected, "Psi_{n} has sign {:?}", value.sign());
        Ok(PsiValue { n, p: cur.p.clone(), q: cur.q.clone(), q_next: next.q.clone(), value })
    }

    /// The pair `u1^L u2^(p_n) u2 e1`, `u1^L u2^(q_n) u1 u2 e1` with
    /// `L = sgn(Psi_n) floor(1/|Psi_n|)`.
    pub fn con_pair(&self, n: usize, bounds: &PairBounds) -> Result<ConPair> {
        if n == 0 {
            return Err(Error::IndexOutOfRange(0));
        }
        let psi = self.psi(n)?;
        let rho = &self.rho;
        let abs = psi.value.abs();
        let mut l = abs.recip().floor();
        if psi.value.is_negative() {
            l = -l;
        }
        let u1 = QMat2::u1_pow(&BigInt::one());
        let u2 = QMat2::u2_pow(rho, &BigInt::one());
        let lead = QMat2::u1_pow(&l);
        let g1 = lead.mul(&QMat2::u2_pow(rho, &psi.p)).mul(&u2);
        let g2 = lead.mul(&QMat2::u2_pow(rho, &psi.q)).mul(&u1).mul(&u2);
        let one = QuadraticScalar::one();
        ensure!(g1.det() == one && g2.det() == one, "non-unimodular product");
        let (point1, point2) = (g1.e1_image(), g2.e1_image());
        let diff = QVec { x: &point1.x - &point2.x, y: &point1.y - &point2.y };
        let lq = QuadraticScalar::from_int(l.clone());
        let expect_x = rho * &(&(&lq * &psi.value) - &QuadraticScalar::one());
        let expect_y = rho * &psi.value;
        ensure!(diff.x == expect_x && diff.y == expect_y, "difference identity fails at n = {n}");
        ensure!(diff.x.abs() < rho * &abs, "first coordinate too large at n = {n}");

        let dist_sq = diff.norm_sq();
        let norm_sq = point2.norm_sq();
        let rat = |r: &BigRational| QuadraticScalar::from_rational(r);
        let qn1 = QuadraticScalar::from_int(psi.q_next.clone());
        let qq = QuadraticScalar::from_int(&psi.q * &psi.q_next);
        let dc = &rat(&bounds.dist_c) * rho;
        let dist_bound_ok = &(&dist_sq * &qn1) * &qn1 <= &dc * &dc;
        let nc = &rat(&bounds.norm_c) * &qq;
        let norm_bound_ok = norm_sq <= &nc * &nc;
        Ok(ConPair { psi, l, point1, point2, diff, dist_sq, norm_sq, dist_bound_ok, norm_bound_ok })
    }

    /// Rows `1..=n_max`.
    pub fn table(&self, n_max: usize, bounds: &PairBounds) -> Result<Vec<ConPair>> {
        use rayon::prelude::*;
        (1..=n_max).into_par_iter().map(|n| self.con_pair(n, bounds)).collect()
    }

    /// Smallest rational with denominator `den` that bounds every
    /// `|gamma2 e1| / (q_n q_{n+1})` in the rows from above.
    pub fn measured_norm_constant(rows: &[ConPair], den: u32) -> BigRational {
        rows.iter()
            .map(|r| {
                let qq = QuadraticScalar::from_int(&r.psi.q * &r.psi.q_next);
                let mut c = BigInt::from((r.norm_over_qnqn1() * den as f64).floor() as i64);
                loop {
                    let cq = &QuadraticScalar::from_rational(&BigRational::new(c.clone(), den.into())) * &qq;
                    if r.norm_sq <= &cq * &cq {
                        break BigRational::new(c, den.into());
                    }
                    c += 1;
                }
            })
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

pub fn psi(rho: &QuadraticScalar, n: usize) -> Result<PsiValue> {
    GammaRho::new(rho.clone())?.psi(n)
}

pub fn con_pair(rho: &QuadraticScalar, n: usize) -> Result<ConPair> {
    GammaRho::new(rho.clone())?.con_pair(n, &PairBounds::default())
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainmentReport {
    pub rho: String,
    pub trials: usize,
    pub max_len: usize,
    pub seed: u64,
    pub all_in_lattice: bool,
    /// Samples with a coordinate outside `(1/q) Z`.
    pub off_lattice: usize,
    /// Largest coordinate denominator seen.
    pub max_denominator: String,
    pub distinct_points: usize,
    /// Exact squared minimum positive gap over all sampled points.
    pub min_gap_sq: Option<String>,
    pub min_gap_float: Option<f64>,
    pub min_gap_at_least_inv_q: bool,
}

/// Samples words in `u1^(+-1)`, `u2^(+-1)` of length `1..=max_len` for
/// `rho = p/q`, applies them to `e1`, and checks the images lie in
/// `(1/q) Z^2`.
pub fn rational_containment(p: i64, q: i64, trials: usize, max_len: usize, seed: u64) -> Result<ContainmentReport> {
    let (pb, qb) = (BigInt::from(p), BigInt::from(q));
    if p <= 0 || q <= 0 || num_integer::Integer::gcd(&pb, &qb) != BigInt::one() {
        return Err(Error::BadRational(format!("{p}/{q}")));
    }
    if max_len == 0 {
        return Err(Error::Config("max_len must be positive".into()));
    }
    let rho = BigRational::new(pb, qb.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut off_lattice = 0;
    let mut max_den = BigInt::one();
    let mut points: BTreeSet<(BigRational, BigRational)> = BTreeSet::new();
    for _ in 0..trials {
        let len = rng.gen_range(1..=max_len);
        let (mut x, mut y) = (BigRational::one(), BigRational::zero());
        for _ in 0..len {
            match rng.gen_range(0..4u8) {
                0 => x += &y,
                1 => x -= &y,
                2 => y += &rho * &x,
                _ => y -= &rho * &x,
            }
        }
        if !(&x * &qb).is_integer() || !(&y * &qb).is_integer() {
            off_lattice += 1;
        }
        max_den = max_den.max(x.denom().clone()).max(y.denom().clone());
        points.insert((x, y));
    }
    let pts: Vec<(BigRational, BigRational)> = points.into_iter().collect();
    let min_gap_sq = closest_pair_sq(&pts);
    let min_gap_at_least_inv_q = min_gap_sq
        .as_ref()
        .is_none_or(|g| g * BigRational::from_integer(&qb * &qb) >= BigRational::one());
    let all_in_lattice = off_lattice == 0;
    Ok(ContainmentReport {
        rho: format!("{p}/{q}"),
        trials,
        max_len,
        seed,
        all_in_lattice,
        off_lattice,
        max_denominator: max_den.to_string(),
        distinct_points: pts.len(),
        min_gap_float: min_gap_sq.as_ref().and_then(|g| g.to_f64()).map(f64::sqrt),
        min_gap_sq: min_gap_sq.map(|g| g.to_string()),
        min_gap_at_least_inv_q,
    })
}

/// Squared distance of the closest pair among distinct sorted points.
fn closest_pair_sq(pts: &[(BigRational, BigRational)]) -> Option<BigRational> {
    let mut best: Option<BigRational> = None;
    for (i, (xi, yi)) in pts.iter().enumerate() {
        for (xj, yj) in &pts[i + 1..] {
            let dx = xj - xi;
            let dx2 = &dx * &dx;
            if best.as_ref().is_some_and(|b| &dx2 >= b) {
                break;
            }
            let dy = yj - yi;
            let d = dx2 + &dy * &dy;
            if best.as_ref().is_none_or(|b| &d < b) {
                best = Some(d);
            }
        }
    }
    best
}
