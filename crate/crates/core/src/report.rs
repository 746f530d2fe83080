//! Table rows and CSV / JSON / SVG writers.
//!
//! Every float is written as `{:.16e}`, 17 significant digits.

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Number, Value};

use crate::constructions::{Prop1Pair, TripleReport};
use crate::error::{Error, Result};
use crate::orbit::{Cluster, GPoint};
use crate::ring::{phi_pow, GoldenScalar};
use crate::sector::gcd_gamma_plus;

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

/// Rewrites every float in `v` with 17 significant digits, as text when
/// `as_text` is set.
fn normalize_floats(v: &mut Value, as_text: bool) {
    match v {
        Value::Number(n) if !n.is_i64() && !n.is_u64() => {
            let Some(f) = n.as_f64() else { return };
            if as_text {
                *v = Value::String(format_float(f));
            } else if let Ok(m) = Number::from_str(&format_float(f)) {
                *n = m;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(|x| normalize_floats(x, as_text)),
        Value::Object(o) => o.values_mut().for_each(|x| normalize_floats(x, as_text)),
        _ => {}
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    let mut v = serde_json::to_value(x).map_err(io)?;
    normalize_floats(&mut v, false);
    Ok(v)
}

pub fn write_json<T: Serialize>(x: &T, mut w: impl Write) -> Result<()> {
    let v = to_value(x)?;
    serde_json::to_writer_pretty(&mut w, &v).map_err(io)?;
    writeln!(w).map_err(io)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Writes flat rows as CSV with a header taken from the first row.
pub fn write_csv<T: Serialize>(rows: &[T], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut values: Vec<Value> = rows.iter().map(|r| serde_json::to_value(r).map_err(io)).collect::<Result<_>>()?;
    values.iter_mut().for_each(|v| normalize_floats(v, true));
    let Some(Value::Object(first)) = values.first() else {
        return out.flush().map_err(io);
    };
    out.write_record(first.keys()).map_err(io)?;
    for v in &values {
        let Value::Object(o) = v else {
            return Err(Error::Io("row is not a flat record".into()));
        };
        out.write_record(o.values().map(cell)).map_err(io)?;
    }
    out.flush().map_err(io)
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop1Row {
    pub n: i64,
    pub dist_float: f64,
    /// Exact squared distance, `a+b*phi`.
    pub dist_exact: String,
    pub norm_float: f64,
    pub bound_ok: bool,
    /// `dist * phi^(n-2)`.
    pub dist_times_phi_pow: f64,
    /// `norm / phi^(2n)`.
    pub norm_over_phi_2n: f64,
    /// `radius * dist^2`.
    pub radius_times_eps_sq: f64,
}

impl Prop1Row {
    pub fn new(p: &Prop1Pair) -> Self {
        let dist = p.dist();
        let norm = p.p2.norm_sq().to_f64().sqrt();
        let bound = &(&GoldenScalar::from(2) * &phi_pow(-2 * (p.n - 2))) - &p.dist_sq;
        let w = &p.norm_bound_witness;
        let bound_ok = !bound.is_negative() && p.p2.norm_sq() <= w * w;
        Self {
            n: p.n,
            dist_float: dist,
            dist_exact: p.dist_sq.to_string(),
            norm_float: norm,
            bound_ok,
            dist_times_phi_pow: dist * phi_pow(p.n - 2).to_f64(),
            norm_over_phi_2n: norm / phi_pow(2 * p.n).to_f64(),
            radius_times_eps_sq: p.radius() * dist * dist,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleRow {
    pub k: i64,
    pub j_k: i64,
    pub spacing_float: f64,
    pub height_float: f64,
    pub max_norm_float: f64,
    /// `max_norm * (phi^j_k)^4`.
    pub ratio_norm_to_eps4: f64,
    /// `max_norm / (phi^-j_k (k^3 phi^5 + k^2 (phi^4 + phi^6)))`.
    pub ratio_norm_to_k3: f64,
}

impl TripleRow {
    pub fn new(t: &TripleReport) -> Self {
        Self {
            k: t.k,
            j_k: t.j_k,
            spacing_float: t.spacing.to_f64(),
            height_float: t.height.to_f64(),
            max_norm_float: t.max_norm(),
            ratio_norm_to_eps4: t.norm_eps4_ratio(),
            ratio_norm_to_k3: t.norm_bound_ratio(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointRow {
    pub x_float: f64,
    pub y_float: f64,
    pub a_x: i64,
    pub b_x: i64,
    pub a_y: i64,
    pub b_y: i64,
    pub word: String,
}

impl PointRow {
    /// `word` is the descent word of the point's first-quadrant image.
    pub fn new(p: GPoint) -> Result<Self> {
        let word = gcd_gamma_plus(&p.to_vec2())?.word.to_string();
        let (x, y) = p.to_f64();
        Ok(Self { x_float: x, y_float: y, a_x: p.x.a, b_x: p.x.b, a_y: p.y.a, b_y: p.y.b, word })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterRow {
    pub index: usize,
    pub size: usize,
    pub spread_float: f64,
    /// Exact x-spread `a+b*phi` for horizontal clusters.
    pub horizontal_spread: Option<String>,
    pub points: String,
}

impl ClusterRow {
    pub fn new(index: usize, c: &Cluster) -> Self {
        let pts: Vec<String> = c.points.iter().map(|p| format!("({};{})", p.x, p.y)).collect();
        Self {
            index,
            size: c.points.len(),
            spread_float: c.spread(),
            horizontal_spread: c.horizontal_spread.map(|s| s.to_string()),
            points: pts.join(" "),
        }
    }
}

/// Scatter plot of `points` inside `[-radius, radius]^2`, clusters drawn on
/// top in red.
pub fn points_svg(points: &[GPoint], clusters: &[Cluster], radius: f64) -> String {
    let size = 800.0;
    let scale = size / (2.0 * radius);
    let dot = (scale * 0.08).clamp(0.3, 3.0);
    let map = |p: &GPoint| {
        let (x, y) = p.to_f64();
        ((x + radius) * scale, (radius - y) * scale)
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<g fill="black">"#);
    for p in points {
        let (x, y) = map(p);
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{dot:.3}"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g fill="red" stroke="red">"#);
    for c in clusters {
        for p in &c.points {
            let (x, y) = map(p);
            let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}"/>"#, dot * 2.5);
        }
    }
    let _ = writeln!(s, "</g>\n</svg>");
    s
}
