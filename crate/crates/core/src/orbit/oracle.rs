//! Unpruned reference enumeration: every word up to a fixed length, applied
//! with exact matrices, then closed under the symmetries of the square.

use std::collections::BTreeSet;

use num_rational::BigRational;

use super::{Ball, GPoint};
use crate::group::{word_to_matrix, Mat2, Vec2, Word};
use crate::ring::GoldenScalar;

/// All words of length exactly `n`.
pub fn words_of_length(n: usize) -> impl Iterator<Item = Word> {
    (0..4usize.pow(n as u32)).map(move |mut code| {
        let mut letters = Vec::with_capacity(n);
        for _ in 0..n {
            letters.push((code % 4) as u8);
            code /= 4;
        }
        Word::from_letters(&letters)
    })
}

/// Words whose last letter (the first applied to `e1`) is not 0; the others
/// repeat shorter words since `sigma_0 e1 = e1`.
pub fn effective_words(n: usize) -> impl Iterator<Item = Word> {
    words_of_length(n).filter(|w| w.runs().last().is_none_or(|&(l, _)| l != 0))
}

fn inside(v: &Vec2, radius: &BigRational, ball: Ball) -> bool {
    let r = GoldenScalar::from_rational(radius.clone());
    match ball {
        Ball::Euclidean => v.norm_sq() <= &r * &r,
        Ball::Sup => v.x.abs() <= r && v.y.abs() <= r,
    }
}

fn symmetries() -> Vec<Mat2> {
    let rot = crate::group::rotation_quarter();
    let swap = Mat2::from_ints([(0, 0), (1, 0), (1, 0), (0, 0)]);
    let mut out = vec![Mat2::identity()];
    for _ in 0..3 {
        let next = &rot * out.last().expect("non-empty");
        out.push(next);
    }
    let reflected: Vec<Mat2> = out.iter().map(|m| &swap * m).collect();
    out.extend(reflected);
    out
}

/// Result of the unpruned enumeration.
pub struct BruteForce {
    pub points: BTreeSet<GPoint>,
    pub max_len: usize,
    /// Every effective word of length `max_len + 1` leaves the ball, so by
    /// monotonicity no longer word returns.
    pub coverage_ok: bool,
}

/// Expands every word of length `<= max_len` without pruning.
pub fn brute_force(radius: &BigRational, max_len: usize, ball: Ball) -> BruteForce {
    let e1 = Vec2::e1();
    let syms = symmetries();
    let mut points = BTreeSet::new();
    for n in 0..=max_len {
        for w in words_of_length(n) {
            let v = word_to_matrix(&w).act(&e1);
            if !inside(&v, radius, ball) {
                continue;
            }
            for s in &syms {
                points.insert(GPoint::from_vec2(&s.act(&v)).expect("integral coordinates"));
            }
        }
    }
    let coverage_ok = effective_words(max_len + 1).all(|w| !inside(&word_to_matrix(&w).act(&e1), radius, ball));
    BruteForce { points, max_len, coverage_ok }
}

/// Smallest word length past which every word leaves the ball.
pub fn covering_length(radius: &BigRational, ball: Ball) -> usize {
    let e1 = Vec2::e1();
    (0..)
        .find(|&n| effective_words(n + 1).all(|w| !inside(&word_to_matrix(&w).act(&e1), radius, ball)))
        .expect("words grow without bound")
}
