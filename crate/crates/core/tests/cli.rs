use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn repcli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repcli")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const PAIR: &str = "field number minpoly=x\ngen a [[1, 1], [0, 1]]\ngen b [[1, 0], [1, 1]]\npuncture ab\n";

#[test]
fn analyze_reports_density_witnesses() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "pair.rep", PAIR);
    let out = repcli(&["analyze", s(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("density: dense\n"), "{text}");
    assert!(text.contains("density_alpha: "));
    assert!(text.contains("density_infinite_order_word: ab\n"));
    assert_eq!(stdout(&repcli(&["analyze", s(&f)])), text, "reports are deterministic");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad_prime = write(&dir, "p4.rep", "field laurent p=4 prec=10\ngen a [[1, 0], [0, 1]]\n");
    let out = repcli(&["tree", s(&bad_prime)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 17"));

    let det = write(&dir, "det.rep", "field laurent p=5 prec=10\ngen a [[t, 0], [0, 1]]\n");
    assert_eq!(repcli(&["tree", s(&det)]).status.code(), Some(2));

    let pair = write(&dir, "pair.rep", PAIR);
    assert_eq!(repcli(&["tree", s(&pair)]).status.code(), Some(2));
    assert_eq!(repcli(&["harmonic", s(&pair)]).status.code(), Some(2));

    let torus = write(&dir, "torus.rep", "field number minpoly=x\ngen a [[2, 0], [0, 1/2]]\n");
    let out = repcli(&["analyze", s(&torus)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("status: inconclusive"));

    let out = repcli(&["orbibounds", "1", "0", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn completion_feeds_tree() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "diag.rep", "field ratfunc p=5 var=y\ngen a [[y, 0], [0, 1/y]]\ngen b [[1, 1], [1, 2]]\n");
    let out = repcli(&["complete", s(&f), "--place", "inf", "--prec", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let report = write(&dir, "completed.txt", &stdout(&out));
    let tree = stdout(&repcli(&["tree", s(&report)]));
    assert!(tree.contains("bounded: no\n"), "{tree}");
    assert!(tree.contains("translation_length_a: 2\n") && tree.contains("hyperbolic_word: a\n"));
    let at_two = stdout(&repcli(&["complete", s(&f), "--place", "2"]));
    assert!(at_two.contains("bounded: yes\n"), "{at_two}");
}

#[test]
fn hypergeometric_tuple_round_trips_into_rigidity() {
    let dir = TempDir::new().unwrap();
    let out = repcli(&["hypergeom", "--classes", "u,u,request"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("product_ab: [[-3, 1], [-4, 1]]\n"), "{text}");
    let f = write(&dir, "tuple.txt", &text);
    let rigid = stdout(&repcli(&["rigidity", s(&f)]));
    assert!(rigid.contains("virtual_dimension: 0\n") && rigid.contains("rigid: yes\n"), "{rigid}");
    let integral = stdout(&repcli(&["integrality", s(&f), "--max-word-len", "4"]));
    assert!(integral.contains("integral: yes\n"));
}

#[test]
fn rigidity_refuses_non_hyperbolic_targets() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "finite.rep", "field number minpoly=x\ngen a [[0, -1], [1, 0]]\ngen b [[0, 1], [-1, 0]]\n");
    let out = repcli(&["rigidity", s(&f)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hyperbolic"));
}

#[test]
fn harmonic_writes_reeb_dot() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "loop.rep", "field laurent p=3 prec=20\ngen g [[t^-1, 0], [0, t]]\nedge u u g\n");
    let dot = dir.path().join("reeb.dot");
    let out = repcli(&["harmonic", s(&f), "--dot", s(&dot)]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("final_energy: 4\n") && text.contains("reeb_first_betti_number: 1\n"), "{text}");
    let graph = std::fs::read_to_string(&dot).unwrap();
    assert!(graph.starts_with("digraph reeb {"));
}

#[test]
fn tree_writes_ball_dot() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "u.rep", "field laurent p=2 prec=10\ngen a [[1, t^-1], [0, 1]]\n");
    let dot = dir.path().join("ball.dot");
    let out = repcli(&["tree", s(&f), "--radius", "1", "--dot", s(&dot)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("fixed_vertex_verified: yes\n"));
    let graph = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(graph.matches("->").count(), 3);
}

#[test]
fn hodge_signs_and_lambda() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "gauss.rep", "field cm real=y delta=-1 var=y\ngen a [[w, 0], [0, -w]]\nform [[w, 0], [0, -w]]\n");
    let text = stdout(&repcli(&["hodge", s(&f)]));
    assert!(text.contains("embedding_0: mixed") && text.contains("polydisk_dimension: 1\n"), "{text}");
    let f = write(&dir, "sqrt2.rep", "field cm real=x^2 - 2 delta=-1\ngen a [[1, 0], [0, 1]]\nform [[w, 0], [0, w]]\n");
    let text = stdout(&repcli(&["hodge", s(&f), "--signs", "+,-"]));
    assert!(text.contains("lambda: x + 1\n"), "{text}");
    assert!(text.contains("scaled_embedding_0: negative") && text.contains("scaled_embedding_2: positive"), "{text}");
}
