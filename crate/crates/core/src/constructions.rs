//! Explicit point families of the orbit S: close pairs built from Fibonacci
//! powers of the unipotent generators, and collinear triples `u1, u2, u3`
//! whose common difference is carried to a horizontal segment of length
//! `phi^{j_k}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::group::{generator, unipotent_pow, Mat2, Vec2, Word};
use crate::ring::{fib, phi_pow, unit_exponent, GoldenScalar, PHI_F64};
use crate::sector::{classify, gcd_gamma_plus, is_in_s, run_length, Sector};

fn gs(a: impl Into<BigInt>, b: impl Into<BigInt>) -> GoldenScalar {
    GoldenScalar::from_ints(a, b)
}

/// Two distinct points of S at distance about `phi^-(n-1)`.
#[derive(Clone, Debug)]
pub struct Prop1Pair {
    pub n: i64,
    pub gamma1: Mat2,
    pub gamma2: Mat2,
    pub p1: Vec2,
    pub p2: Vec2,
    pub diff: Vec2,
    pub dist_sq: GoldenScalar,
    /// `(F_{n+1}+1) phi + 1 + (F_{n+1}+1) phi^{n-1}`, an upper bound for `|p2|`.
    pub norm_bound_witness: GoldenScalar,
}

impl Prop1Pair {
    pub fn dist(&self) -> f64 {
        self.dist_sq.to_f64().sqrt()
    }

    /// Radius of the smallest origin-centred ball holding both points.
    pub fn radius(&self) -> f64 {
        self.p1.norm_sq().max(self.p2.norm_sq()).to_f64().sqrt()
    }
}

pub fn prop1_pair(n: i64) -> Result<Prop1Pair> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::BadParity(n));
    }
    let nu = n as u64;
    let shift = fib(nu - 4) + fib(nu - 2);
    let s3 = unipotent_pow(3, shift.clone());
    let gamma1 = &(&s3 * &unipotent_pow(0, fib(nu))) * &generator(2);
    let gamma2 = &(&s3 * &unipotent_pow(0, fib(nu + 1))) * &generator(1);
    let p1 = gamma1.act(&Vec2::e1());
    let p2 = gamma2.act(&Vec2::e1());
    let diff = &p1 - &p2;

    let (_, frac) = phi_pow(n - 3).floor_frac()?;
    let closed = Vec2::new(-phi_pow(-(n - 1)), &phi_pow(-(n - 2)) * &frac);
    ensure!(diff == closed, "n = {n}: difference {diff} differs from closed form {closed}");

    let f1 = GoldenScalar::from(fib(nu + 1) + 1);
    let phi = GoldenScalar::phi();
    let bound = &(&f1 * &phi) + &GoldenScalar::one() + &f1 * &phi_pow(n - 1);
    ensure!(p2.norm_sq() <= &bound * &bound, "n = {n}: |gamma2 e1| exceeds its bound");

    let dist_sq = diff.norm_sq();
    ensure!(
        dist_sq <= gs(2, 0) * phi_pow(-2 * (n - 2)),
        "n = {n}: squared distance exceeds 2 phi^(-2(n-2))"
    );
    ensure!(!diff.is_zero(), "n = {n}: points coincide");
    ensure!(is_in_s(&p1)? && is_in_s(&p2)?, "n = {n}: constructed point not in S");

    Ok(Prop1Pair { n, gamma1, gamma2, p1, p2, diff, dist_sq, norm_bound_witness: bound })
}

fn check_k(k: i64) -> Result<BigInt> {
    if k <= 1 {
        return Err(Error::BadK(k));
    }
    Ok(BigInt::from(k))
}

/// Generator words defining `u1(k), u2(k), u3(k)`.
pub fn triple_words(k: i64) -> Result<[Word; 3]> {
    check_k(k)?;
    let k = k as u64;
    let mut w1 = Word::new();
    w1.push_run(3, k + 1);
    w1.push_run(2, 1);
    let mut w2 = Word::new();
    for (l, c) in [(0, k - 1), (1, 1), (0, k - 1), (2, 1)] {
        w2.push_run(l, c);
    }
    let mut w3 = Word::new();
    for (l, c) in [(0, 2 * k + 1), (1, 1), (0, k - 2), (2, 1)] {
        w3.push_run(l, c);
    }
    Ok([w1, w2, w3])
}

/// Closed forms of the three collinear points, checked against their words.
pub fn triple_points(k: i64) -> Result<(Vec2, Vec2, Vec2)> {
    let kb = check_k(k)?;
    let kk = &kb * &kb;
    let u1 = Vec2::new(gs(0, 1), gs(&kb + 1, &kb + 2));
    let u2 = Vec2::new(gs(&kb * (&kb + 1), 2 * &kk + &kb - 1), gs(kb.clone(), &kb + 1));
    let u3 = Vec2::new(gs(2 * &kb * (&kb + 1), 4 * &kk + 2 * &kb - 3), gs(&kb - 1, kb.clone()));
    let words = triple_words(k)?;
    for (u, w) in [&u1, &u2, &u3].into_iter().zip(&words) {
        let from_word = w.to_matrix().act(&Vec2::e1());
        ensure!(*u == from_word, "k = {k}: closed form {u} differs from word {w} image {from_word}");
    }
    Ok((u1, u2, u3))
}

/// Common difference `u1 - u2` reflected into the first quadrant.
pub fn dk(k: i64) -> Result<Vec2> {
    let kb = check_k(k)?;
    let kk = &kb * &kb;
    let d = Vec2::new(gs(&kb * (&kb + 1), 2 * &kk + &kb - 2), gs(1, 1));
    let alt_x = &(&GoldenScalar::from(kk) * &phi_pow(3)) + &(&GoldenScalar::from(kb) * &phi_pow(2))
        - gs(0, 2);
    ensure!(d.x == alt_x, "k = {k}: alternative form of d_k disagrees");
    let (u1, u2, _) = triple_points(k)?;
    let diff = &u1 - &u2;
    ensure!(Vec2::new(-&diff.x, diff.y) == d, "k = {k}: d_k is not the reflected difference");
    Ok(d)
}

/// `j_k` with `gcd(d_k) = phi^{j_k}`, and the descent itinerary of `d_k`.
pub fn jk(k: i64) -> Result<(i64, Word)> {
    let d = dk(k)?;
    let g = gcd_gamma_plus(&d)?;
    ensure!(g.is_unit(), "k = {k}: gcd {} of d_k is not a unit", g.l_v);
    let j = unit_exponent(&g.l_v)?;
    Ok((j, g.word))
}

/// `phi^3 {(k+2) phi}`, the upper bound for `phi^{j_k}`.
pub fn jk_frac_bound(k: i64) -> GoldenScalar {
    let (_, frac) = gs(0, k + 2).floor_frac().expect("positive");
    &phi_pow(3) * &frac
}

/// `phi^{-j}(k^3 phi^5 + k^2 (phi^4 + phi^6) + k phi^2 - (phi^2 + phi^4))`,
/// the second row of `gamma^-1` applied to `u1(k)`.
pub fn triple_height(k: i64, j: i64) -> GoldenScalar {
    let kb = GoldenScalar::from(k);
    let k2 = &kb * &kb;
    let k3 = &k2 * &kb;
    let inner = &(&k3 * &phi_pow(5)) + &(&k2 * &(&phi_pow(4) + &phi_pow(6))) + &kb * &phi_pow(2)
        - (&phi_pow(2) + &phi_pow(4));
    &phi_pow(-j) * &inner
}

#[derive(Clone, Debug)]
pub struct TripleReport {
    pub k: i64,
    pub u1: Vec2,
    pub u2: Vec2,
    pub u3: Vec2,
    pub d_k: Vec2,
    pub j_k: i64,
    pub word: Word,
    /// Group element with `gamma e1 = phi^{-j_k} (d_k.x, -d_k.y)`.
    pub gamma: Mat2,
    pub recovered: [Vec2; 3],
    /// Horizontal gap between consecutive recovered points, `phi^{j_k}`.
    pub spacing: GoldenScalar,
    pub height: GoldenScalar,
    pub max_norm_sq: GoldenScalar,
    /// Recovered points pushed out of sector 0 by a power of `sigma_0^-1`.
    pub normalized: Option<[Vec2; 3]>,
}

impl TripleReport {
    pub fn max_norm(&self) -> f64 {
        self.max_norm_sq.to_f64().sqrt()
    }

    /// `max_norm * (phi^{j_k})^4`.
    pub fn norm_eps4_ratio(&self) -> f64 {
        (self.max_norm().ln() + 4.0 * self.j_k as f64 * PHI_F64.ln()).exp()
    }

    /// `max_norm / (phi^{-j}(k^3 phi^5 + k^2(phi^4 + phi^6)))`.
    pub fn norm_bound_ratio(&self) -> f64 {
        let k = self.k as f64;
        let p = |e: i32| PHI_F64.powi(e);
        let leading = (k.powi(3) * p(5) + k * k * (p(4) + p(6))).ln() - self.j_k as f64 * PHI_F64.ln();
        (self.max_norm().ln() - leading).exp()
    }
}

pub fn recover_triple(k: i64, normalize: bool) -> Result<TripleReport> {
    let (u1, u2, u3) = triple_points(k)?;
    let d_k = dk(k)?;
    let (j_k, word) = jk(k)?;
    let w = word.to_matrix();
    // conjugating by diag(1, -1) turns every sigma_i into sigma_i^-1
    let gamma = Mat2::new(w.a.clone(), -&w.b, -&w.c, w.d.clone());
    let target = Vec2::new(d_k.x.clone(), -&d_k.y).scale(&phi_pow(-j_k));
    ensure!(gamma.act(&Vec2::e1()) == target, "k = {k}: gamma e1 misses phi^-j d_k");
    let inv = gamma.inverse()?;
    let recovered = [inv.act(&u1), inv.act(&u2), inv.act(&u3)];

    let spacing = phi_pow(j_k);
    let height = triple_height(k, j_k);
    for (i, p) in recovered.iter().enumerate() {
        ensure!(p.y == height, "k = {k}: recovered point {i} has height {} not {height}", p.y);
        ensure!(is_in_s(p)?, "k = {k}: recovered point {i} not in S");
    }
    ensure!(
        &recovered[1].x - &recovered[0].x == spacing && &recovered[2].x - &recovered[1].x == spacing,
        "k = {k}: recovered gaps differ from phi^{j_k}"
    );
    let max_norm_sq = recovered.iter().map(Vec2::norm_sq).max().expect("three points");

    let normalized = if normalize { Some(push_out_of_sector0(&recovered)?) } else { None };

    Ok(TripleReport {
        k,
        u1,
        u2,
        u3,
        d_k,
        j_k,
        word,
        gamma,
        recovered,
        spacing,
        height,
        max_norm_sq,
        normalized,
    })
}

fn push_out_of_sector0(points: &[Vec2; 3]) -> Result<[Vec2; 3]> {
    let right = points.iter().max_by(|a, b| a.x.cmp(&b.x)).expect("three points");
    let in_quadrant = !right.x.is_negative() && right.y.is_positive();
    if !in_quadrant || classify(right)? != Sector::S0 {
        return Ok(points.clone());
    }
    let t = run_length(right, Sector::S0)?;
    let m = unipotent_pow(0, -t);
    Ok([m.act(&points[0]), m.act(&points[1]), m.act(&points[2])])
}

/// `k = F_n - 2` for odd `n` in `[5, n_max]`.
pub fn fib_k_sequence(n_max: u64) -> Vec<i64> {
    (5..=n_max)
        .step_by(2)
        .map(|n| {
            let k: BigInt = fib(n) - 2;
            i64::try_from(k).expect("k fits in i64")
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct JkRow {
    pub k: i64,
    pub j_k: i64,
    pub phi_pow_float: f64,
    pub word_len: u64,
    pub frac_bound_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JkTable {
    pub rows: Vec<JkRow>,
    /// Number of `k` attaining each exponent.
    pub histogram: BTreeMap<i64, usize>,
}

pub fn jk_row(k: i64) -> Result<JkRow> {
    let (j, word) = jk(k)?;
    Ok(JkRow {
        k,
        j_k: j,
        phi_pow_float: PHI_F64.powi(j as i32),
        word_len: word.len(),
        frac_bound_ok: phi_pow(j) <= jk_frac_bound(k),
    })
}

pub fn jk_table(k_max: i64) -> Result<JkTable> {
    if k_max < 2 {
        return Err(Error::BadK(k_max));
    }
    let rows = (2..=k_max).into_par_iter().map(jk_row).collect::<Result<Vec<_>>>()?;
    let mut histogram = BTreeMap::new();
    for r in &rows {
        *histogram.entry(r.j_k).or_insert(0) += 1;
    }
    Ok(JkTable { rows, histogram })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(ax: i64, bx: i64, ay: i64, by: i64) -> Vec2 {
        Vec2::from_ints(ax, bx, ay, by)
    }

    #[test]
    fn prop1_small() {
        let p = prop1_pair(4).unwrap();
        assert_eq!(p.diff, Vec2::new(-phi_pow(-3), phi_pow(-3)));
        let p = prop1_pair(6).unwrap();
        assert_eq!(p.diff.y, &phi_pow(-4) * &(&phi_pow(3) - &gs(4, 0)));
        assert_eq!(prop1_pair(5).unwrap_err(), Error::BadParity(5));
        assert_eq!(prop1_pair(2).unwrap_err(), Error::BadParity(2));
    }

    #[test]
    fn triple_closed_forms() {
        let (u1, u2, _) = triple_points(2).unwrap();
        assert_eq!(u1, v(0, 1, 3, 4));
        assert_eq!(u2, v(6, 9, 2, 3));
        for k in 2..=50 {
            let (a, b, c) = triple_points(k).unwrap();
            assert_eq!(&a - &b, &b - &c);
        }
        assert_eq!(triple_points(1).unwrap_err(), Error::BadK(1));
    }

    #[test]
    fn difference_vectors() {
        assert_eq!(dk(2).unwrap(), v(6, 8, 1, 1));
        assert_eq!(dk(3).unwrap(), v(12, 19, 1, 1));
        for k in 2..30 {
            assert_eq!(dk(k).unwrap().y, phi_pow(2));
        }
    }

    #[test]
    fn j3() {
        let (j, w) = jk(3).unwrap();
        assert_eq!(j, -5);
        assert_eq!(w.to_string(), "0^10.3^4.0.2");
    }

    #[test]
    fn recovered_triple_k3() {
        let r = recover_triple(3, true).unwrap();
        assert_eq!(r.spacing, phi_pow(-5));
        assert_eq!(&r.recovered[1] - &r.recovered[0], Vec2::new(phi_pow(-5), GoldenScalar::zero()));
        let n = r.normalized.unwrap();
        assert_eq!(n[0].y, r.height);
        assert_eq!(&n[2].x - &n[1].x, phi_pow(-5));
        for p in &n {
            assert!(is_in_s(p).unwrap());
        }
    }

    #[test]
    fn fib_ks() {
        assert_eq!(fib_k_sequence(9), vec![3, 11, 32]);
        assert!(fib_k_sequence(3).is_empty());
    }

    #[test]
    fn table_histogram() {
        let t = jk_table(20).unwrap();
        assert_eq!(t.rows.len(), 19);
        assert_eq!(t.rows[1].k, 3);
        assert_eq!(t.rows[1].j_k, -5);
        assert_eq!(t.histogram.values().sum::<usize>(), 19);
        assert!(t.rows.iter().all(|r| r.frac_bound_ok));
    }
}
