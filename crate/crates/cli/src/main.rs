use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use golden_orbit::constructions::{jk_table, prop1_pair, recover_triple};
use golden_orbit::gamma_rho::{parse_rho, rational_containment, ContainmentReport, GammaRho, GammaRhoRow, PairBounds, Rho};
use golden_orbit::orbit::{
    empty_ball_probe, enumerate_in, find_clusters, Ball, ClusterQuery, OrbitPointSet, DEFAULT_POINT_BUDGET,
};
use golden_orbit::report::{points_svg, write_csv, write_json, ClusterRow, PointRow, Prop1Row, TripleRow};
use golden_orbit::ring::parse_rational;
use golden_orbit::{Error, GoldenScalar, Result};

/// Exact computations on the orbit of (1, 0) under the Veech group of the
/// golden L and on the groups generated by [[1,1],[0,1]] and [[1,0],[rho,1]].
#[derive(Parser, Debug)]
#[command(name = "golden-orbit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Close pairs built from powers of phi, even n in [4, n-max].
    VerifyProp1,
    /// Horizontal triples recovered by descent, k in [2, k-max].
    VerifyTriples,
    /// Exponents j_k of the descent scaling, k in [2, k-max].
    JkTable,
    /// Close pairs from convergents (irrational rho) or the lattice check (rational rho).
    GammaRho,
    /// Orbit points in the ball of the given radius.
    Enumerate,
    /// Groups of m points with spread below eps.
    Clusters,
    /// Largest sampled empty ball; eps is the grid step.
    EmptyBall,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args, Debug)]
struct Opts {
    /// verify-prop1: largest n (default 60); gamma-rho with rational rho: max word length (default 12).
    #[arg(long, global = true)]
    n_max: Option<i64>,
    /// verify-triples (default 20), jk-table (default 200).
    #[arg(long, global = true)]
    k_max: Option<i64>,
    /// Ball radius, an integer, fraction or decimal.
    #[arg(long, global = true)]
    radius: Option<String>,
    /// clusters: spread bound as `a+b*phi` or a rational (default 2 phi^-5 + 1e-9);
    /// empty-ball: grid step (default 0.5).
    #[arg(long, global = true, allow_hyphen_values = true)]
    eps: Option<String>,
    /// Cluster size.
    #[arg(long, global = true, default_value_t = 3)]
    m: usize,
    /// Restrict clusters to points on one horizontal line.
    #[arg(long, global = true)]
    horizontal: bool,
    /// `p/q`, `(p+q*sqrt(d))/r` or `cf:[a0;a1,...]`.
    #[arg(long, global = true, allow_hyphen_values = true, default_value = "(0+1*sqrt(2))/1")]
    rho: String,
    /// Number of convergents for gamma-rho.
    #[arg(long, global = true, default_value_t = 15)]
    terms: usize,
    /// Random words sampled for rational rho.
    #[arg(long, global = true, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

/// Failure classes, mapped to exit codes 1, 2 and 3.
enum Failure {
    Assertion(String),
    Config(String),
    Capacity(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Assertion(e.to_string()),
            Error::CapacityExceeded(_) | Error::IterationCap(_) => Failure::Capacity(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Assertion(_) => 1,
            Failure::Config(_) => 2,
            Failure::Capacity(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Assertion(m) | Failure::Config(m) | Failure::Capacity(m) => m,
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Status line on stderr; a closed stderr is not an error.
macro_rules! note {
    ($($arg:tt)+) => {
        let _ = writeln!(io::stderr(), $($arg)+);
    };
}

fn config(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

/// Stored-point budget for enumeration, overridable through `ORBIT_POINT_BUDGET`.
fn point_budget() -> std::result::Result<usize, Failure> {
    match std::env::var("ORBIT_POINT_BUDGET") {
        Ok(s) => s.trim().parse().map_err(|_| config(format!("ORBIT_POINT_BUDGET={s:?} is not a count"))),
        Err(_) => Ok(DEFAULT_POINT_BUDGET),
    }
}

struct Output {
    format: Format,
    path: Option<PathBuf>,
}

impl Output {
    fn writer(&self) -> std::result::Result<Box<dyn Write>, Failure> {
        Ok(match &self.path {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| config(format!("cannot create {}: {e}", p.display())))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    /// Writes `rows` as CSV or `whole` as JSON.
    fn table<R: Serialize, W: Serialize>(&self, rows: &[R], whole: &W) -> Outcome {
        let mut w = self.writer()?;
        match self.format {
            Format::Csv => write_csv(rows, &mut w)?,
            Format::Json => write_json(whole, &mut w)?,
            Format::Svg => return Err(config("svg output is only available for enumerate and clusters")),
        }
        w.flush().map_err(|e| config(e.to_string()))
    }

    fn text(&self, s: &str) -> Outcome {
        let mut w = self.writer()?;
        w.write_all(s.as_bytes()).and_then(|_| w.flush()).map_err(|e| config(e.to_string()))
    }
}

fn verify_prop1(o: &Opts, out: &Output) -> Outcome {
    let n_max = o.n_max.unwrap_or(60);
    if n_max < 4 {
        return Err(config(format!("--n-max {n_max} must be at least 4")));
    }
    let mut rows = Vec::new();
    for n in (4..=n_max).step_by(2) {
        rows.push(Prop1Row::new(&prop1_pair(n)?));
    }
    out.table(&rows, &rows)?;
    let bad: Vec<i64> = rows.iter().filter(|r| !r.bound_ok).map(|r| r.n).collect();
    if !bad.is_empty() {
        return Err(Failure::Assertion(format!("bounds fail for n = {bad:?}")));
    }
    let (lo, hi) = rows.iter().fold((f64::INFINITY, 0f64), |(l, h), r| {
        (l.min(r.radius_times_eps_sq), h.max(r.radius_times_eps_sq))
    });
    note!("{} rows; radius * eps^2 in [{lo:.16e}, {hi:.16e}]", rows.len());
    Ok(())
}

fn verify_triples(o: &Opts, out: &Output) -> Outcome {
    let k_max = o.k_max.unwrap_or(20);
    if k_max < 2 {
        return Err(config(format!("--k-max {k_max} must be at least 2")));
    }
    let mut rows = Vec::new();
    for k in 2..=k_max {
        rows.push(TripleRow::new(&recover_triple(k, false)?));
    }
    out.table(&rows, &rows)?;
    note!("{} triples recovered with exact gaps phi^j_k", rows.len());
    Ok(())
}

fn jk(o: &Opts, out: &Output) -> Outcome {
    let t = jk_table(o.k_max.unwrap_or(200))?;
    out.table(&t.rows, &t)?;
    let bad: Vec<i64> = t.rows.iter().filter(|r| !r.frac_bound_ok).map(|r| r.k).collect();
    if !bad.is_empty() {
        return Err(Failure::Assertion(format!("phi^j_k > phi^3 {{(k+2) phi}} for k = {bad:?}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct GammaRhoReport<'a> {
    rho: String,
    rows: &'a [GammaRhoRow],
    /// Smallest `c/100` with `|gamma2 e1| <= c q_n q_{n+1}` on every row.
    measured_norm_constant: String,
}

fn gamma_rho(o: &Opts, out: &Output) -> Outcome {
    match parse_rho(&o.rho)? {
        Rho::Rational(r) => {
            let (p, q) = (r.numer(), r.denom());
            let (Ok(p), Ok(q)) = (i64::try_from(p), i64::try_from(q)) else {
                return Err(config(format!("rho = {r} is too large")));
            };
            let max_len = o.n_max.unwrap_or(12);
            if max_len < 1 {
                return Err(config("--n-max must be positive"));
            }
            let rep: ContainmentReport = rational_containment(p, q, o.trials, max_len as usize, o.seed)?;
            out.table(std::slice::from_ref(&rep), &rep)?;
            if !rep.all_in_lattice || !rep.min_gap_at_least_inv_q {
                return Err(Failure::Assertion(format!(
                    "{} of {} samples outside (1/{q})Z^2, min gap {:?}",
                    rep.off_lattice, rep.trials, rep.min_gap_float
                )));
            }
            note!("{} distinct points, all in (1/{q})Z^2", rep.distinct_points);
            Ok(())
        }
        Rho::Irrational(g) => {
            if o.terms == 0 {
                return Err(config("--terms must be positive"));
            }
            let pairs = g.table(o.terms, &PairBounds::default())?;
            let rows: Vec<GammaRhoRow> = pairs.iter().map(|p| p.row()).collect();
            let c = GammaRho::measured_norm_constant(&pairs, 100);
            let rep = GammaRhoReport { rho: g.rho().to_string(), rows: &rows, measured_norm_constant: c.to_string() };
            out.table(&rows, &rep)?;
            note!("{} rows, Khinchin bounds hold; measured norm constant {c}", rows.len());
            if let Some(r) = rows.iter().find(|r| !r.dist_bound_ok) {
                return Err(Failure::Assertion(format!("distance * q_(n+1) > 2 rho at n = {}", r.n)));
            }
            Ok(())
        }
    }
}

fn radius(o: &Opts, default: i64) -> std::result::Result<num_rational::BigRational, Failure> {
    match &o.radius {
        Some(s) => Ok(parse_rational(s)?),
        None => Ok(num_rational::BigRational::from_integer(default.into())),
    }
}

fn points(o: &Opts, default_radius: i64) -> std::result::Result<OrbitPointSet, Failure> {
    let r = radius(o, default_radius)?;
    Ok(enumerate_in(&r, Ball::Euclidean, point_budget()?)?)
}

fn radius_f64(set: &OrbitPointSet) -> f64 {
    num_traits::ToPrimitive::to_f64(set.radius()).unwrap_or(f64::NAN)
}

fn enumerate(o: &Opts, out: &Output) -> Outcome {
    let set = points(o, 5)?;
    let pts = set.points();
    if out.format == Format::Svg {
        out.text(&points_svg(&pts, &[], radius_f64(&set)))?;
    } else {
        let rows = pts.into_iter().map(PointRow::new).collect::<Result<Vec<_>>>()?;
        out.table(&rows, &rows)?;
    }
    note!("{} points within radius {}", set.len(), set.radius());
    Ok(())
}

fn clusters(o: &Opts, out: &Output) -> Outcome {
    let eps: GoldenScalar = o.eps.as_deref().unwrap_or("-15.999999999+10*phi").parse()?;
    let q = ClusterQuery::new(eps, o.m, o.horizontal)?;
    let set = points(o, 20)?;
    let found = find_clusters(&set, &q);
    if out.format == Format::Svg {
        out.text(&points_svg(&set.points(), &found, radius_f64(&set)))?;
    } else {
        let rows: Vec<ClusterRow> = found.iter().enumerate().map(|(i, c)| ClusterRow::new(i, c)).collect();
        out.table(&rows, &rows)?;
    }
    note!("{} clusters among {} points", found.len(), set.len());
    Ok(())
}

fn empty_ball(o: &Opts, out: &Output) -> Outcome {
    let step: f64 = match &o.eps {
        Some(s) => s.parse().map_err(|_| config(format!("--eps {s:?} is not a number")))?,
        None => 0.5,
    };
    let set = points(o, 20)?;
    let b = empty_ball_probe(&set, step)?;
    out.table(std::slice::from_ref(&b), &b)?;
    note!("empty ball of radius {:.16e} at ({:.16e}, {:.16e})", b.radius, b.center_x, b.center_y);
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    let o = &cli.opts;
    if let Some(j) = o.jobs {
        if j == 0 {
            return Err(config("--jobs must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().map_err(|e| config(e.to_string()))?;
    }
    let out = Output { format: o.format, path: o.out.clone() };
    match cli.command {
        Command::VerifyProp1 => verify_prop1(o, &out),
        Command::VerifyTriples => verify_triples(o, &out),
        Command::JkTable => jk(o, &out),
        Command::GammaRho => gamma_rho(o, &out),
        Command::Enumerate => enumerate(o, &out),
        Command::Clusters => clusters(o, &out),
        Command::EmptyBall => empty_ball(o, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            note!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
