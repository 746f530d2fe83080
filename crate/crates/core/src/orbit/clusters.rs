//! Close pairs, clusters and empty balls in an enumerated orbit.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::{sign_wide, wide_to_f64, GPoint, GoldenInt, OrbitPointSet};
use crate::error::{Error, Result};
use crate::ring::GoldenScalar;

fn wide_scalar((a, b): (i128, i128)) -> GoldenScalar {
    GoldenScalar::from_ints(a, b)
}

fn cmp_wide(x: (i128, i128), y: (i128, i128)) -> Ordering {
    let (fx, fy) = (wide_to_f64(x.0, x.1), wide_to_f64(y.0, y.1));
    let margin = 1e-9 * fx.abs().max(fy.abs()).max(1.0);
    if fx + margin < fy {
        Ordering::Less
    } else if fy + margin < fx {
        Ordering::Greater
    } else {
        match (x.0.checked_sub(y.0), x.1.checked_sub(y.1)) {
            (Some(a), Some(b)) => sign_wide(a, b),
            _ => wide_scalar(x).cmp(&wide_scalar(y)),
        }
    }
}

/// Whether the wide value is strictly below `bound`.
fn wide_lt(x: (i128, i128), bound: &GoldenScalar, bound_f: f64) -> bool {
    let f = wide_to_f64(x.0, x.1);
    let margin = 1e-9 * f.abs().max(bound_f.abs()).max(1.0);
    if f + margin < bound_f {
        true
    } else if f - margin > bound_f {
        false
    } else {
        &wide_scalar(x) < bound
    }
}

#[derive(Clone, Debug)]
pub struct PairGap {
    pub dist_sq: GoldenScalar,
    pub pair: (GPoint, GPoint),
}

impl PairGap {
    pub fn dist(&self) -> f64 {
        self.dist_sq.to_f64().sqrt()
    }
}

/// Minimum distance between distinct points: an exact sweep in x order.
pub fn min_pair_gap(set: &OrbitPointSet) -> Result<PairGap> {
    let mut pts = set.points();
    if pts.len() < 2 {
        return Err(Error::TooFew);
    }
    pts.par_sort_by(|p, q| p.x.cmp_value(q.x).then_with(|| p.y.cmp_value(q.y)));
    let xs: Vec<f64> = pts.iter().map(|p| p.x.to_f64()).collect();
    let mut best = pts[0].dist_sq_wide(pts[1]);
    let mut best_pair = (pts[0], pts[1]);
    let mut best_f = wide_to_f64(best.0, best.1);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let dx = xs[j] - xs[i];
            if dx * dx > best_f * (1.0 + 1e-9) + 1e-12 {
                break;
            }
            let d = pts[i].dist_sq_wide(pts[j]);
            if cmp_wide(d, best) == Ordering::Less {
                best = d;
                best_f = wide_to_f64(d.0, d.1);
                best_pair = (pts[i], pts[j]);
            }
        }
    }
    Ok(PairGap { dist_sq: wide_scalar(best), pair: best_pair })
}

#[derive(Clone, Debug)]
pub struct ClusterQuery {
    pub epsilon: GoldenScalar,
    pub m: usize,
    pub horizontal_only: bool,
}

impl ClusterQuery {
    pub fn new(epsilon: GoldenScalar, m: usize, horizontal_only: bool) -> Result<Self> {
        if !epsilon.is_positive() {
            return Err(Error::Config(format!("epsilon {epsilon} must be positive")));
        }
        if m == 0 {
            return Err(Error::Config("cluster size must be positive".into()));
        }
        Ok(Self { epsilon, m, horizontal_only })
    }
}

#[derive(Clone, Debug)]
pub struct Cluster {
    /// Sorted by x for horizontal clusters, by coefficients otherwise.
    pub points: Vec<GPoint>,
    spread_sq: (i128, i128),
    /// `x_max - x_min` when all points share their y coordinate.
    pub horizontal_spread: Option<GoldenInt>,
}

impl Cluster {
    /// Squared diameter.
    pub fn spread_sq(&self) -> GoldenScalar {
        wide_scalar(self.spread_sq)
    }

    pub fn spread(&self) -> f64 {
        wide_to_f64(self.spread_sq.0, self.spread_sq.1).sqrt()
    }
}

/// Groups of `m` points closer together than `epsilon`, sorted by spread.
///
/// Horizontal queries return runs of `m` consecutive points on a common
/// horizontal line whose x-spread is below `epsilon`. Other queries return
/// every `m`-set of diameter below `epsilon`.
pub fn find_clusters(set: &OrbitPointSet, q: &ClusterQuery) -> Vec<Cluster> {
    let mut out = if q.horizontal_only { horizontal(set, q) } else { general(set, q) };
    out.par_sort_by(|a, b| cmp_wide(a.spread_sq, b.spread_sq).then_with(|| a.points.cmp(&b.points)));
    out
}

fn horizontal(set: &OrbitPointSet, q: &ClusterQuery) -> Vec<Cluster> {
    // a representative (x, y) puts +-x on the line at height y and +-y on
    // the line at height x; lines at negative heights are mirror images
    let reps = set.reps();
    let mut entries: Vec<(GoldenInt, GoldenInt)> = Vec::with_capacity(2 * reps.len());
    for p in reps {
        entries.push((p.y, p.x));
        entries.push((p.x, p.y));
    }
    entries.par_sort_unstable_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp_value(b.1)));
    entries.dedup();
    let eps_f = q.epsilon.to_f64();
    let mut groups: Vec<&[(GoldenInt, GoldenInt)]> = entries.chunk_by(|a, b| a.0 == b.0).collect();
    groups.retain(|g| 2 * g.len() >= q.m);
    groups
        .par_iter()
        .flat_map_iter(|g| {
            let c = g[0].0;
            let mut xs: Vec<GoldenInt> = g.iter().rev().filter(|e| e.1 != GoldenInt::ZERO).map(|e| -e.1).collect();
            xs.extend(g.iter().map(|e| e.1));
            let mut found = Vec::new();
            for w in xs.windows(q.m) {
                let spread = w[q.m - 1] - w[0];
                let f = spread.to_f64();
                if f > eps_f * (1.0 + 1e-9) + 1e-12 {
                    continue;
                }
                if spread.to_scalar() >= q.epsilon {
                    continue;
                }
                let heights = if c == GoldenInt::ZERO { vec![c] } else { vec![c, -c] };
                for h in heights {
                    found.push(Cluster {
                        points: w.iter().map(|&x| GPoint::new(x, h)).collect(),
                        spread_sq: spread.square_wide(),
                        horizontal_spread: Some(spread),
                    });
                }
            }
            found
        })
        .collect()
}

fn general(set: &OrbitPointSet, q: &ClusterQuery) -> Vec<Cluster> {
    let pts = set.points();
    if q.m == 1 {
        return pts
            .into_iter()
            .map(|p| Cluster { points: vec![p], spread_sq: (0, 0), horizontal_spread: Some(GoldenInt::ZERO) })
            .collect();
    }
    let eps_sq = &q.epsilon * &q.epsilon;
    let eps_sq_f = eps_sq.to_f64();
    let cell = q.epsilon.to_f64().max(1e-300);
    let key = |p: &GPoint| {
        let (x, y) = p.to_f64();
        ((x / cell).floor() as i64, (y / cell).floor() as i64)
    };
    let mut grid: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
    for (i, p) in pts.iter().enumerate() {
        grid.entry(key(p)).or_default().push(i as u32);
    }
    let close = |i: usize, j: usize| wide_lt(pts[i].dist_sq_wide(pts[j]), &eps_sq, eps_sq_f);
    (0..pts.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let (kx, ky) = key(&pts[i]);
            let mut nbrs: Vec<usize> = Vec::new();
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(v) = grid.get(&(kx + dx, ky + dy)) {
                        nbrs.extend(v.iter().map(|&j| j as usize).filter(|&j| j > i && close(i, j)));
                    }
                }
            }
            nbrs.sort_unstable();
            let mut found = Vec::new();
            let mut chosen = vec![i];
            extend_cliques(&nbrs, 0, q.m, &mut chosen, &close, &mut |c: &[usize]| {
                let mut d = (0i128, 0i128);
                for (a, &u) in c.iter().enumerate() {
                    for &v in &c[a + 1..] {
                        let e = pts[u].dist_sq_wide(pts[v]);
                        if cmp_wide(e, d) == Ordering::Greater {
                            d = e;
                        }
                    }
                }
                let points: Vec<GPoint> = c.iter().map(|&u| pts[u]).collect();
                let level = points.iter().all(|p| p.y == points[0].y);
                let hs = level.then(|| {
                    let mut xs: Vec<GoldenInt> = points.iter().map(|p| p.x).collect();
                    xs.sort_by(|a, b| a.cmp_value(*b));
                    xs[xs.len() - 1] - xs[0]
                });
                found.push(Cluster { points, spread_sq: d, horizontal_spread: hs });
            });
            found
        })
        .collect()
}

fn extend_cliques(
    cand: &[usize],
    from: usize,
    m: usize,
    chosen: &mut Vec<usize>,
    close: &(impl Fn(usize, usize) -> bool + Sync),
    emit: &mut impl FnMut(&[usize]),
) {
    if chosen.len() == m {
        emit(chosen);
        return;
    }
    for k in from..cand.len() {
        let c = cand[k];
        if chosen[1..].iter().all(|&u| close(u, c)) {
            chosen.push(c);
            extend_cliques(cand, k + 1, m, chosen, close, emit);
            chosen.pop();
        }
    }
}

/// Largest ball found free of orbit points, among centers on a square grid.
#[derive(Clone, Debug, Serialize)]
pub struct EmptyBall {
    pub center_x: f64,
    pub center_y: f64,
    pub radius: f64,
    pub samples: usize,
    /// Always true: centers are sampled, distances are floating point.
    pub heuristic: bool,
}

/// Samples centers `(i step, j step)` inside the enumerated ball and returns
/// the one farthest from the orbit, with the radius capped so the empty ball
/// stays inside the enumerated ball.
pub fn empty_ball_probe(set: &OrbitPointSet, step: f64) -> Result<EmptyBall> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Config(format!("grid step {step} must be positive")));
    }
    let r = set.radius().to_f64().unwrap_or(f64::NAN);
    let pts: Vec<(f64, f64)> = set.iter().map(|p| p.to_f64()).collect();
    let g = 1.0f64;
    let cell = |x: f64| (x / g).floor() as i64;
    let mut grid: HashMap<(i64, i64), Vec<(f64, f64)>> = HashMap::new();
    for &(x, y) in &pts {
        grid.entry((cell(x), cell(y))).or_default().push((x, y));
    }
    let k = (r / step).floor() as i64;
    let centers: Vec<(f64, f64)> = (-k..=k)
        .flat_map(|i| (-k..=k).map(move |j| (i as f64 * step, j as f64 * step)))
        .filter(|(x, y)| x.hypot(*y) <= r)
        .collect();
    let probe = |(cx, cy): (f64, f64)| -> f64 {
        let cap = r - cx.hypot(cy);
        let (kx, ky) = (cell(cx), cell(cy));
        let mut best = f64::INFINITY;
        for ring in 0i64.. {
            if (ring - 1) as f64 * g > best.min(cap) {
                break;
            }
            for dx in -ring..=ring {
                for dy in -ring..=ring {
                    if dx.abs() != ring && dy.abs() != ring {
                        continue;
                    }
                    for &(x, y) in grid.get(&(kx + dx, ky + dy)).into_iter().flatten() {
                        best = best.min((x - cx).hypot(y - cy));
                    }
                }
            }
        }
        best.min(cap)
    };
    let radii: Vec<f64> = centers.par_iter().map(|&c| probe(c)).collect();
    let mut out = EmptyBall { center_x: 0.0, center_y: 0.0, radius: 0.0, samples: centers.len(), heuristic: true };
    for (c, rad) in centers.iter().zip(radii) {
        if rad > out.radius {
            (out.center_x, out.center_y, out.radius) = (c.0, c.1, rad);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::enumerate;
    use crate::ring::{parse_rational, phi_pow};

    fn set(r: &str) -> OrbitPointSet {
        enumerate(&parse_rational(r).unwrap()).unwrap()
    }

    fn brute_gap(s: &OrbitPointSet) -> GoldenScalar {
        let pts = s.points();
        let mut best: Option<GoldenScalar> = None;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d = wide_scalar(pts[i].dist_sq_wide(pts[j]));
                if best.as_ref().is_none_or(|b| &d < b) {
                    best = Some(d);
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn gaps() {
        let g = min_pair_gap(&set("1.1")).unwrap();
        assert_eq!(g.dist_sq, GoldenScalar::from(2));
        let mut last = f64::INFINITY;
        for r in ["3", "6", "10", "14"] {
            let s = set(r);
            let g = min_pair_gap(&s).unwrap();
            assert_eq!(g.dist_sq, brute_gap(&s), "radius {r}");
            assert!(g.dist() <= last);
            last = g.dist();
        }
        // the n = 4 close pair lies inside radius 14
        assert!(last <= 2f64.sqrt() * phi_pow(-3).to_f64() + 1e-12);
    }

    #[test]
    fn horizontal_matches_general() {
        let s = set("12");
        let eps = GoldenScalar::from(1);
        for m in [2, 3] {
            let q = ClusterQuery::new(eps.clone(), m, true).unwrap();
            let h = find_clusters(&s, &q);
            let mut g: Vec<Cluster> = find_clusters(&s, &ClusterQuery { horizontal_only: false, ..q.clone() })
                .into_iter()
                .filter(|c| c.horizontal_spread.is_some())
                .collect();
            // general search returns all m-subsets; keep the consecutive runs
            g.retain(|c| {
                let y = c.points[0].y;
                let xs: Vec<GoldenInt> = c.points.iter().map(|p| p.x).collect();
                let (lo, hi) = (xs.iter().min_by(|a, b| a.cmp_value(**b)).unwrap(), xs.iter().max_by(|a, b| a.cmp_value(**b)).unwrap());
                s.iter().filter(|p| p.y == y && p.x.cmp_value(*lo) != Ordering::Less && p.x.cmp_value(*hi) != Ordering::Greater).count() == m
            });
            assert_eq!(h.len(), g.len(), "m = {m}");
            for c in &h {
                assert!(c.horizontal_spread.unwrap().to_scalar() < eps);
            }
        }
        let ones = find_clusters(&s, &ClusterQuery::new(eps, 1, false).unwrap());
        assert_eq!(ones.len(), s.len());
    }

    #[test]
    fn probe_basics() {
        let s = set("10");
        let one = empty_ball_probe(&s, 100.0).unwrap();
        assert_eq!(one.samples, 1);
        let a = empty_ball_probe(&s, 0.5).unwrap();
        let b = empty_ball_probe(&set("16"), 0.5).unwrap();
        assert!(a.radius <= 10.0 && a.radius >= one.radius);
        assert!(b.radius >= a.radius);
        assert!(empty_ball_probe(&s, 0.0).is_err());
    }
}
