use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dispersive")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_prints_flags() {
    let out = run(&["classify", path(&fixture("fig2.grid"))]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "{\"cells\":17,\"holes\":0,\"simple\":true,\"thin\":true,\"tree_shaped\":true,\"vertices\":20}\n"
    );
}

#[test]
fn solvers_agree_on_the_tight_example() {
    for alg in ["worstcase", "tree", "exact"] {
        let out = run(&["solve", alg, path(&fixture("fig2.grid"))]);
        assert_eq!(code(&out), 0, "{alg}");
        let text = stdout(&out);
        assert!(text.starts_with(&format!("{{\"instance\":\"fig2\",\"algorithm\":\"{alg}\",\"guards\":[")), "{text}");
        assert!(text.contains("\"dispersion\":3,\"covered\":true"), "{text}");
    }
}

#[test]
fn solve_exact_on_a_gadget() {
    let out = run(&["solve", "exact", path(&fixture("gadgets/variable.grid"))]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"dispersion\":5,"));
}

#[test]
fn tree_solver_rejects_shapes_with_holes() {
    let out = run(&["solve", "tree", path(&fixture("small/ring8.grid"))]);
    assert_eq!(code(&out), 2);
}

#[test]
fn budget_exhaustion_is_exit_three() {
    let out = run(&["solve", "exact", path(&fixture("gadgets/variable.grid")), "--budget", "5"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("timeout:"));
}

#[test]
fn input_errors_are_exit_two() {
    assert_eq!(code(&run(&["classify", "/no/such/file.grid"])), 2);
    assert_eq!(code(&run(&["solve", "fastest", path(&fixture("fig2.grid"))])), 2);
    assert_eq!(code(&run(&["gen", "simple"])), 2);
    assert_eq!(code(&run(&["gadget", "widget"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.grid");
    std::fs::write(&bad, "#.\n.#\n").unwrap();
    assert_eq!(code(&run(&["classify", bad.to_str().unwrap()])), 2);
}

#[test]
fn verify_round_trips_reports() {
    let dir = tempfile::tempdir().unwrap();
    let grid = fixture("small/u5.grid");
    let solved = run(&["solve", "exact", path(&grid)]);
    assert_eq!(code(&solved), 0);
    // Drop the solver-only keys; verify must reproduce the rest byte for byte.
    let report: serde_json::Value = serde_json::from_str(&stdout(&solved)).unwrap();
    let guards = dir.path().join("g.json");
    std::fs::write(&guards, format!("{{\"guards\":{}}}\n", report["guards"])).unwrap();
    let out = run(&["verify", path(&grid), guards.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text, format!("{{\"guards\":{},\"dispersion\":{},\"covered\":true}}\n", report["guards"], report["dispersion"]));
    let again = dir.path().join("again.json");
    std::fs::write(&again, &text).unwrap();
    assert_eq!(stdout(&run(&["verify", path(&grid), again.to_str().unwrap()])), text);

    let need = (report["dispersion"].as_u64().unwrap() + 1).to_string();
    assert_eq!(code(&run(&["verify", path(&grid), guards.to_str().unwrap(), "--min-dispersion", &need])), 1);
    assert_eq!(code(&run(&["verify", path(&grid), guards.to_str().unwrap(), "--min-dispersion", "many"])), 2);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"guards\":[[0,0],[3,0],[0,2]]}\n").unwrap();
    let out = run(&["verify", path(&grid), bad.to_str().unwrap(), "--min-dispersion", "5"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "{\"guards\":[[0,0],[0,2],[3,0]],\"dispersion\":2,\"covered\":true}\n");
}

#[test]
fn verify_reports_missing_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let grid = fixture("small/u5.grid");
    let guards = dir.path().join("g.json");
    // The top of the left arm sees only that arm.
    std::fs::write(&guards, "{\"guards\":[[0,2]]}").unwrap();
    let out = run(&["verify", path(&grid), guards.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "{\"guards\":[[0,2]],\"dispersion\":\"inf\",\"covered\":false}\n");
    let pre = dir.path().join("pre.json");
    std::fs::write(&pre, "{\"cells\":[[1,0],[2,0],[2,1]]}").unwrap();
    let out = run(&["verify", path(&grid), guards.to_str().unwrap(), "--pre-covered", pre.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    std::fs::write(&guards, "{\"guards\":[[0,0]],\"colour\":1}").unwrap();
    assert_eq!(code(&run(&["verify", path(&grid), guards.to_str().unwrap()])), 2);
}

#[test]
fn gadget_prints_grid_and_ports() {
    let out = run(&["gadget", "duplicator"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), std::fs::read_to_string(fixture("gadgets/duplicator.grid")).unwrap().trim_end().to_string() + "\n");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("port in cell (0,0) facing W"), "{err}");
    let wide = run(&["gadget", "clause3", "--stretch", "2"]);
    assert_eq!(code(&wide), 0);
}

#[test]
fn witness_exit_status_follows_the_assignment() {
    let f = fixture("formulas/fig12.cnf");
    let l = fixture("formulas/fig12.layout");
    let good = run(&["witness", path(&f), path(&l), "01110"]);
    assert_eq!(code(&good), 0);
    assert!(stdout(&good).contains("\"dispersion\":5,\"covered\":true"));
    let bad = run(&["witness", path(&f), path(&l), "1 1 1 1 0"]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("\"dispersion\":4,\"covered\":true"));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("clause 4"));
    assert_eq!(code(&run(&["witness", path(&f), path(&l), "0111"])), 2);
}

#[test]
fn compose_then_classify() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["compose", path(&fixture("formulas/pair.cnf")), path(&fixture("formulas/pair.layout"))]);
    assert_eq!(code(&out), 0);
    let grid = dir.path().join("pair.grid");
    std::fs::write(&grid, stdout(&out)).unwrap();
    let c = stdout(&run(&["classify", grid.to_str().unwrap()]));
    assert!(c.contains("\"thin\":true"), "{c}");
    // The pair formula needs positive literals in its clause.
    let neg = dir.path().join("neg.cnf");
    std::fs::write(&neg, "p cnf 2 1\n-1 -2 0\n").unwrap();
    assert_eq!(code(&run(&["compose", neg.to_str().unwrap(), path(&fixture("formulas/pair.layout"))])), 2);
}

#[test]
fn gen_is_deterministic() {
    let a = run(&["gen", "tree", "--cells", "30", "--seed", "7"]);
    let b = run(&["gen", "tree", "--cells", "30", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).matches('#').count(), 30);
    let s = run(&["gen", "simple", "--cells", "25", "--seed", "1"]);
    assert_eq!(stdout(&s).matches('#').count(), 25);
}

#[test]
fn svg_is_written_for_every_command() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("out.svg");
    let s = svg.to_str().unwrap();
    let fig2 = fixture("fig2.grid");
    let cases: Vec<Vec<&str>> = vec![
        vec!["classify", path(&fig2)],
        vec!["solve", "worstcase", path(&fig2)],
        vec!["gadget", "variable"],
        vec!["gen", "simple", "--cells", "20"],
    ];
    for args in cases {
        let _ = std::fs::remove_file(&svg);
        let mut full = args.clone();
        full.extend(["--svg", s]);
        assert_eq!(code(&run(&full)), 0, "{args:?}");
        let text = std::fs::read_to_string(&svg).unwrap();
        assert!(text.starts_with("<svg ") && text.ends_with("</svg>\n"), "{args:?}");
    }
    // Solved shapes carry guards and the closest-pair label.
    run(&["--svg", s, "solve", "exact", path(&fig2)]);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains("<circle class=\"guard\""));
    assert!(text.contains(">d=3</text>"));
}
