use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

use golden_orbit::constructions::{jk_table, prop1_pair, recover_triple};
use golden_orbit::gamma_rho::{parse_rho, rational_containment, PairBounds, QuadraticScalar, Rho};
use golden_orbit::orbit::{
    empty_ball_probe, enumerate, enumerate_in, find_clusters, min_pair_gap, Ball, ClusterQuery, GPoint, GoldenInt,
    DEFAULT_POINT_BUDGET,
};
use golden_orbit::report::{points_svg, write_csv, write_json, ClusterRow, PointRow, Prop1Row, TripleRow};
use golden_orbit::ring::{phi_pow, GoldenScalar};
use golden_orbit::sector::{gcd_gamma_plus, is_in_s};
use golden_orbit::{Error, Vec2};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[test]
fn triple_survives_descent_and_enumeration() {
    let t = recover_triple(3, false).unwrap();
    assert_eq!(t.j_k, -5);
    for p in &t.recovered {
        let g = gcd_gamma_plus(p).unwrap();
        assert!(g.l_v.is_one());
        assert_eq!(g.reconstruct(), *p);
    }
    assert!(t.max_norm() > 7000.0);
    let row = TripleRow::new(&t);
    assert_eq!(row.k, 3);
    assert!(row.ratio_norm_to_k3 > 1.0 && row.ratio_norm_to_k3 < 2.0);
}

#[test]
fn prop1_rows_serialize() {
    let rows: Vec<Prop1Row> = (4..=12).step_by(2).map(|n| Prop1Row::new(&prop1_pair(n).unwrap())).collect();
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("n,dist_float,dist_exact,norm_float,bound_ok"));
    assert_eq!(lines.count(), 5);
    let mut buf = Vec::new();
    write_json(&rows, &mut buf).unwrap();
    let v: Value = serde_json::from_slice(&buf).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
    assert_eq!(v[0]["n"], 4);
}

#[test]
fn jk_table_histogram_counts_rows() {
    let t = jk_table(60).unwrap();
    assert_eq!(t.rows.len(), 59);
    assert_eq!(t.histogram.values().sum::<usize>(), 59);
    assert!(t.rows.iter().all(|r| r.frac_bound_ok));
}

#[test]
fn enumerated_points_are_orbit_points() {
    let set = enumerate(&int(12)).unwrap();
    assert_eq!(set.len(), set.points().len());
    for p in set.points() {
        let v = p.to_vec2();
        assert!(is_in_s(&v).unwrap(), "{v}");
        let row = PointRow::new(p).unwrap();
        assert_eq!(row.a_x, p.x.a);
    }
    // a multiple of an orbit point is never an orbit point
    let twice = Vec2::from_ints(2, 0, 0, 0);
    assert!(!is_in_s(&twice).unwrap());
    assert!(!set.contains(&GPoint::new(GoldenInt::new(2, 0), GoldenInt::ZERO)));
}

#[test]
fn sup_ball_contains_euclidean_ball() {
    let e = enumerate(&int(8)).unwrap();
    let s = enumerate_in(&int(8), Ball::Sup, DEFAULT_POINT_BUDGET).unwrap();
    assert!(e.len() < s.len());
    assert!(e.points().iter().all(|p| s.contains(p)));
    let phi = GoldenInt::new(0, 1);
    assert!(enumerate_in(&int(2), Ball::Sup, DEFAULT_POINT_BUDGET).unwrap().contains(&GPoint::new(phi, phi)));
}

#[test]
fn gaps_and_clusters_at_moderate_radius() {
    let set = enumerate(&int(60)).unwrap();
    let gap = min_pair_gap(&set).unwrap();
    let (a, b) = gap.pair;
    assert_eq!(gap.dist_sq, (&a.to_vec2() - &b.to_vec2()).norm_sq());
    let q = ClusterQuery::new(gap.dist_sq.clone() + GoldenScalar::from(1), 2, false).unwrap();
    let clusters = find_clusters(&set, &q);
    assert!(clusters.iter().any(|c| c.points.contains(&a) && c.points.contains(&b)));
    let rows: Vec<ClusterRow> = clusters.iter().take(3).enumerate().map(|(i, c)| ClusterRow::new(i, c)).collect();
    assert_eq!(rows[0].size, 2);
    let svg = points_svg(&set.points(), &clusters[..1], 60.0);
    assert_eq!(svg.matches("<circle").count(), set.len() + 2);
    let probe = empty_ball_probe(&set, 5.0).unwrap();
    assert!(probe.radius > 0.0 && probe.radius < 60.0);
}

#[test]
fn horizontal_gap_two_phi_inverse_five_is_realized_by_descent() {
    let t = recover_triple(3, false).unwrap();
    let [a, b, c] = &t.recovered;
    let spread = &c.x - &a.x;
    assert_eq!(spread, &GoldenScalar::from(2) * &phi_pow(-5));
    assert_eq!(&b.x - &a.x, phi_pow(-5));
}

#[test]
fn gamma_rho_end_to_end() {
    let Rho::Irrational(g) = parse_rho("(0+1*sqrt(2))/1").unwrap() else { panic!("rational") };
    assert_eq!(g.rho(), &QuadraticScalar::sqrt(2));
    let rows = g.table(15, &PairBounds::default()).unwrap();
    assert_eq!(rows.len(), 15);
    assert_eq!(rows[0].l, BigInt::from(5));
    assert!(rows.iter().all(|r| r.dist_bound_ok && r.row().khinchin_ok));
    let mut buf = Vec::new();
    write_csv(&rows.iter().map(|r| r.row()).collect::<Vec<_>>(), &mut buf).unwrap();
    let header = String::from_utf8(buf).unwrap().lines().next().unwrap().to_string();
    assert!(header.starts_with("n,p_n,q_n,psi_float,L,dist_float,dist_times_qn1,norm_float,norm_over_qnqn1"));
    assert!(matches!(parse_rho("3/7").unwrap(), Rho::Rational(_)));
    assert!(matches!(parse_rho("-1/2"), Err(Error::NotPositive(_))));
}

#[test]
fn containment_sampler_reports_exactly() {
    let r = rational_containment(1, 2, 2000, 10, 3).unwrap();
    // u2 u1 u2 e1 = (3/2, 5/4), so off-lattice samples are expected
    assert!(r.off_lattice > 0);
    let r = rational_containment(2, 1, 2000, 10, 3).unwrap();
    assert!(r.all_in_lattice && r.min_gap_at_least_inv_q);
}
