use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use fnlab::topo::{CoverSequence, FiniteSpace, PointSet, Role, SetFamily, SpaceMap};
use fnlab::transfer::AbsoluteTriple;
use fnlab::witness::FnsWitness;
use fnlab::workbench::doc::{render, CoversDoc, FamilyDoc, FnsWitnessDoc, SpaceDoc, TripleDoc};
use tempfile::TempDir;

fn fnlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fnlab")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn set(points: &[usize]) -> PointSet {
    points.iter().copied().collect()
}

fn d2_files(dir: &TempDir) -> (PathBuf, Arc<FiniteSpace>) {
    let space = Arc::new(FiniteSpace::discrete(2));
    (write(dir, "d2.toml", &render(&SpaceDoc::from_space(&space, Some("D2")))), space)
}

#[test]
fn gen_writes_a_space() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("s.toml");
    let out = fnlab(&["gen", "--kind", "sierpinski", "--name", "S", "-o", s(&path)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        "format = \"fnlab-space-1\"\nname = \"S\"\npoints = 2\nopens = [[], [1], [0, 1]]\n"
    );

    let out = fnlab(&["gen", "--kind", "cluster", "--blocks", "0,1;2,3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("opens = [[], [0, 1], [2, 3], [0, 1, 2, 3]]"));

    let out = fnlab(&["gen", "--kind", "alexandrov", "--n", "2", "--edges", "0<1,1<0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn enumerate_counts_and_writes() {
    for (n, count) in [(1, 1), (2, 4), (3, 29), (4, 355)] {
        let out = fnlab(&["enumerate", "--points", &n.to_string()]);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).starts_with(&format!("{count} topologies")), "{}", stdout(&out));
    }
    let dir = TempDir::new().unwrap();
    let out = fnlab(&["enumerate", "--points", "3", "-o", s(&dir.path().join("all"))]);
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read_dir(dir.path().join("all")).unwrap().count(), 29);
    assert_eq!(code(&fnlab(&["enumerate", "--points", "5"])), 2);
}

#[test]
fn search_then_verify() {
    let dir = TempDir::new().unwrap();
    let (space, _) = d2_files(&dir);
    let witness = dir.path().join("w.toml");
    let out = fnlab(&["search-fns", "--space", s(&space), "--kmax", "4", "-o", s(&witness)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("k_min = 2"));

    let out = fnlab(&["verify-fns", "--space", s(&space), "--witness", s(&witness)]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "ok"));

    let out = fnlab(&["search-fns", "--space", s(&space), "--kmax", "1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn failing_witness_is_reported() {
    let dir = TempDir::new().unwrap();
    let (space_path, space) = d2_files(&dir);
    let base = SetFamily::new(space, vec![set(&[0]), set(&[1]), set(&[0, 1])], Role::Base).unwrap();
    let bad = FnsWitness::new(base, vec![vec![0], vec![1], vec![]]).unwrap();
    let w = write(&dir, "bad.toml", &render(&FnsWitnessDoc::from_witness(&bad)));
    let out = fnlab(&["verify-fns", "--space", s(&space_path), "--witness", s(&w)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("members 0 {0} and 1 {1}"), "{}", stdout(&out));

    let other = write(&dir, "d3.toml", &render(&SpaceDoc::from_space(&FiniteSpace::discrete(3), None)));
    let out = fnlab(&["verify-fns", "--space", s(&other), "--witness", s(&w)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("space_hash"));
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&fnlab(&["verify-fns", "--space", "missing.toml", "--witness", "missing.toml"])), 2);
    assert_eq!(code(&fnlab(&["no-such-command"])), 2);

    let open = write(&dir, "open.toml", "format = \"fnlab-space-1\"\npoints = 2\nopens = [[], [0], [1], [0, 1]]\nextra = 1\n");
    let out = fnlab(&["search-fns", "--space", s(&open), "--kmax", "2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown keys"));
    assert_eq!(code(&fnlab(&["--lax", "search-fns", "--space", s(&open), "--kmax", "2"])), 0);

    let gaps = write(&dir, "gaps.toml", "format = \"fnlab-space-1\"\npoints = 3\nopens = [[], [0], [1], [0, 1, 2]]\n");
    assert_eq!(code(&fnlab(&["search-fns", "--space", s(&gaps), "--kmax", "2"])), 2);
    assert_eq!(code(&fnlab(&["--auto-close", "search-fns", "--space", s(&gaps), "--kmax", "3"])), 0);
}

#[test]
fn budget_exhaustion_exits_three() {
    let dir = TempDir::new().unwrap();
    let d4 = write(&dir, "d4.toml", &render(&SpaceDoc::from_space(&FiniteSpace::discrete(4), None)));
    let out = fnlab(&["search-fns", "--space", s(&d4), "--kmax", "16", "--budget", "10"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn quotients() {
    let dir = TempDir::new().unwrap();
    let (d2, space) = d2_files(&dir);
    let singles = SetFamily::plain(space, vec![set(&[0]), set(&[1])]).unwrap();
    let fam = write(&dir, "p.toml", &render(&FamilyDoc::from_family(&singles)));
    let q = dir.path().join("q.toml");
    let out = fnlab(&["quotient", "--space", s(&d2), "--family", s(&fam), "--check-wcr", "-o", s(&q)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("wcr: ok"));
    assert!(fs::read_to_string(&q).unwrap().contains("points = 2"));

    let sier = Arc::new(FiniteSpace::sierpinski());
    let sp = write(&dir, "s.toml", &render(&SpaceDoc::from_space(&sier, None)));
    let fam = write(&dir, "ps.toml", &render(&FamilyDoc::from_family(&SetFamily::plain(sier, vec![set(&[1])]).unwrap())));
    let out = fnlab(&["quotient", "--space", s(&sp), "--family", s(&fam), "--check-wcr"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("not wcr: point 0"), "{}", stdout(&out));
}

#[test]
fn games() {
    let dir = TempDir::new().unwrap();
    let (space_path, _) = d2_files(&dir);
    let w = dir.path().join("w.toml");
    assert_eq!(code(&fnlab(&["search-fns", "--space", s(&space_path), "--family-role", "pi_base", "--kmax", "4", "-o", s(&w)])), 0);

    let t = dir.path().join("t.toml");
    let out = fnlab(&["play", "--space", s(&space_path), "--witness", s(&w), "--adversary", "repeater", "--horizon", "4", "-o", s(&t)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(fs::read_to_string(&t).unwrap().contains("dense = true"));

    let out = fnlab(&["oracle-win", "--space", s(&space_path), "--witness", s(&w), "--horizon", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("within 2 rounds"), "{}", stdout(&out));

    let out = fnlab(&["oracle-win", "--space", s(&space_path), "--witness", s(&w), "--horizon", "1"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("rounds"));

    assert_eq!(code(&fnlab(&["play", "--space", s(&space_path), "--witness", s(&w), "--adversary", "sulky", "--horizon", "2"])), 2);
}

#[test]
fn developments_and_transfers() {
    let dir = TempDir::new().unwrap();
    let d3 = Arc::new(FiniteSpace::discrete(3));
    let sp = write(&dir, "d3.toml", &render(&SpaceDoc::from_space(&d3, None)));
    let seq = CoverSequence::from_sets(d3, vec![vec![set(&[0]), set(&[0, 1]), set(&[2])], vec![set(&[0]), set(&[1]), set(&[2])]])
        .unwrap();
    let covers = write(&dir, "c.toml", &render(&CoversDoc::from_sequence(&seq)));
    let fw = dir.path().join("fn.toml");
    assert_eq!(code(&fnlab(&["develop-fn", "--space", s(&sp), "--covers", s(&covers), "-o", s(&fw)])), 0);
    assert_eq!(code(&fnlab(&["verify-fn", "--space", s(&sp), "--witness", s(&fw)])), 0);

    let z = Arc::new(FiniteSpace::new(4, vec![PointSet::EMPTY, set(&[0, 1]), set(&[2, 3]), set(&[0, 1, 2, 3])]).unwrap());
    let x = Arc::new(FiniteSpace::discrete(2));
    let f = SpaceMap::new(z.clone(), x.clone(), vec![0, 0, 1, 1]).unwrap();
    let t = AbsoluteTriple::new(f.clone(), f).unwrap();
    let triple = write(&dir, "t.toml", &render(&TripleDoc::from_triple(&t)));
    let base_x = SetFamily::new(t.x().clone(), vec![set(&[0]), set(&[1])], Role::PiBase).unwrap();
    let base = write(&dir, "b.toml", &render(&FamilyDoc::from_family(&base_x)));
    let w = FnsWitness::new(base_x, vec![vec![0, 1], vec![0, 1]]).unwrap();
    let wp = write(&dir, "w.toml", &render(&FnsWitnessDoc::from_witness(&w)));
    let out = fnlab(&["transfer", "--triple", s(&triple), "--base", s(&base), "--witness", s(&wp), "--check-representatives", "8"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("images = [[0, 1], [0, 1]]"), "{}", stdout(&out));
}

#[test]
fn sweeps_report() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.toml");
    let out = fnlab(&["sweep", "game", "--max-points", "3", "--workers", "2", "-o", s(&report)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("[ok] criterion 9"));
    let again = dir.path().join("r1.toml");
    assert_eq!(code(&fnlab(&["sweep", "game", "--max-points", "3", "-o", s(&again)])), 0);
    assert_eq!(fs::read(&report).unwrap(), fs::read(&again).unwrap());
    assert_eq!(code(&fnlab(&["sweep", "witness", "--max-points", "5"])), 2);
}
