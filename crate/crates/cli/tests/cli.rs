use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_golden-orbit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gamma_rho_sqrt2_fifteen_rows() {
    let o = run(&["gamma-rho", "--rho", "(0+1*sqrt(2))/1", "--terms", "15"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(
        &header[..9],
        ["n", "p_n", "q_n", "psi_float", "L", "dist_float", "dist_times_qn1", "norm_float", "norm_over_qnqn1"]
    );
    let k = header.iter().position(|h| *h == "khinchin_ok").unwrap();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| r.split(',').nth(k) == Some("true")));
    assert!(rows[0].starts_with("1,5,2,1.7157287525380990e-1,5,"));
}

#[test]
fn gamma_rho_three_sevenths_leaves_the_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let o = run(&["gamma-rho", "--rho", "3/7", "--trials", "10000", "--seed", "1", "--format", "json", "--out"]
        .into_iter()
        .chain([path.to_str().unwrap()])
        .collect::<Vec<_>>());
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["all_in_lattice"], false);
    assert!(v["off_lattice"].as_u64().unwrap() > 0);
    assert_eq!(v["trials"], 10000);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["gamma-rho", "--rho", "1/1", "--trials", "500", "--seed", "9"]);
    let b = run(&["gamma-rho", "--rho", "1/1", "--trials", "500", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["enumerate", "--radius", "10", "--jobs", "2"]);
    let d = run(&["enumerate", "--radius", "10"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn verify_commands_pass() {
    let o = run(&["verify-prop1", "--n-max", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1 + 9);
    let o = run(&["verify-triples", "--k-max", "6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[1]["k"], 3);
    assert_eq!(v[1]["j_k"], -5);
    let o = run(&["jk-table", "--k-max", "50", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 49);
}

#[test]
fn enumerate_points_schema() {
    let o = run(&["enumerate", "--radius", "1.1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x_float,y_float,a_x,b_x,a_y,b_y,word");
    assert_eq!(lines.len(), 5);
    assert!(lines.contains(&"1.0000000000000000e0,0.0000000000000000e0,1,0,0,0,"));
}

#[test]
fn clusters_svg_highlights() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.svg");
    let o = run(&["clusters", "--radius", "30", "--m", "2", "--eps", "1/2", "--format", "svg", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains(r#"fill="red""#));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify-prop1", "--n-max", "2"]).status.code(), Some(2));
    assert_eq!(run(&["gamma-rho", "--rho", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["gamma-rho", "--rho", "cf:[1;"]).status.code(), Some(2));
    assert_eq!(run(&["jk-table", "--format", "svg"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_golden-orbit"))
        .args(["enumerate", "--radius", "50"])
        .env("ORBIT_POINT_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_golden-orbit"))
        .args(["verify-triples", "--k-max", "3"])
        .env("ORBIT_ITER_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}
