use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

fn dms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dms")).args(args).output().expect("run dms")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn read_csv(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn basis_swap_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("swap.json");
    let swap = fixture("reps/c2_swap.json");
    let o = dms(&["basis", "--rep-in", p(&swap), "--rep-out", p(&swap), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let basis: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(basis["orbits"].as_array().unwrap().len(), 2);

    let k4 = fixture("reps/k4_regular.json");
    let out = dir.path().join("k4.json");
    let o = dms(&["basis", "--rep-in", p(&k4), "--rep-out", p(&k4), "--out", p(&out), "--oracle", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rank 4 = 4, span residual"), "{}", stdout(&o));
    assert!(dir.path().join("k4.json.oracle.json").exists());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("k4.json.report.json")).unwrap()).unwrap();
    assert_eq!(report["oracle"]["agrees"], true);
}

#[test]
fn corrupt_rep_file_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dim\": 2,\n \"generators\": [\n  {\"target\": [0, 0]}\n]}\n").unwrap();
    let o = dms(&["basis", "--rep-in", p(&bad), "--rep-out", p(&bad), "--out", p(&dir.path().join("x.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert!(!dir.path().join("x.json").exists());
}

#[test]
fn count_examples() {
    let k4 = fixture("reps/k4_regular.json");
    assert_eq!(stdout(&dms(&["count", "--rep-in", p(&k4), "--rep-out", p(&k4)])).trim(), "r=4 mn=16 ratio=0.25");
    let t8 = fixture("reps/trivial8.json");
    assert_eq!(stdout(&dms(&["count", "--rep-in", p(&t8), "--rep-out", p(&t8)])).trim(), "r=64 mn=64 ratio=1.0");
    let o = dms(&["count", "--rep-in", p(&fixture("reps/c2_trivial1.json")), "--rep-out", p(&fixture("reps/c2_sign1.json"))]);
    assert!(stdout(&o).starts_with("r=0 "));
}

#[test]
fn augment_roundtrip_and_orbit_average() {
    let dir = tempfile::tempdir().unwrap();
    let sym = fixture("augment/quadruped_symmetry.json");
    let schema = fixture("augment/quadruped_schema.json");
    let input = fixture("augment/quadruped_100.csv");
    let aug = dir.path().join("aug.csv");
    let o = dms(&["augment", "--group", p(&sym), "--schema", p(&schema), "--in", p(&input), "--out", p(&aug)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, original) = read_csv(&input);
    let (aug_header, rows) = read_csv(&aug);
    assert_eq!(header, aug_header);
    assert_eq!(rows.len(), 400);
    assert_eq!(&rows[..100], &original[..]);

    // every element of K4 is an involution, so re-augmenting block g and
    // taking block g again returns the original rows
    for g in 1..4 {
        let block = dir.path().join(format!("g{g}.csv"));
        let mut text = header.clone() + "\n";
        for r in &rows[g * 100..(g + 1) * 100] {
            text += &r.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
            text += "\n";
        }
        std::fs::write(&block, text).unwrap();
        let back = dir.path().join(format!("back{g}.csv"));
        let o = dms(&["augment", "--group", p(&sym), "--schema", p(&schema), "--in", p(&block), "--out", p(&back)]);
        assert_eq!(o.status.code(), Some(0));
        let (_, again) = read_csv(&back);
        for (a, b) in again[g * 100..(g + 1) * 100].iter().zip(&original) {
            assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-12));
        }
    }

    let avg = dir.path().join("avg.csv");
    let o = dms(&["augment", "--group", p(&sym), "--schema", p(&schema), "--in", p(&aug), "--out", p(&avg), "--orbit-average"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, averaged) = read_csv(&avg);
    for (a, b) in averaged.iter().zip(&rows) {
        assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-12));
    }
}

#[test]
fn augment_contact_states_and_header_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let sym = fixture("augment/quadruped_symmetry.json");
    let out = dir.path().join("c.csv");
    let o = dms(&[
        "augment", "--group", p(&sym), "--schema", p(&fixture("augment/contact_schema.json")),
        "--in", p(&fixture("augment/contact_states.csv")), "--out", p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = read_csv(&out);
    let state = |r: &Vec<f64>| r.iter().position(|&v| v == 1.0).unwrap();
    // input states 1, 5, 15, 4, 6; group element 1 swaps the left and right legs
    let swapped: Vec<usize> = rows[5..10].iter().map(state).collect();
    assert_eq!(&swapped[..3], &[2, 10, 15]);

    let o = dms(&[
        "augment", "--group", p(&sym), "--schema", p(&fixture("augment/quadruped_schema.json")),
        "--in", p(&fixture("augment/contact_states.csv")), "--out", p(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn net_init_stats_train_and_verify() {
    let o = dms(&["net", "init-stats", "--group", "k4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ratio = report["last_over_first"].as_f64().unwrap();
    assert!((1.0 / 3.0..=3.0).contains(&ratio), "{ratio}");

    let dir = tempfile::tempdir().unwrap();
    let spec = fixture("net/k4_net.json");
    let weights = dir.path().join("w.json");
    let o = dms(&["net", "demo-train", "--spec", p(&spec), "--out", p(&weights), "--steps", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = dms(&["net", "verify", "--spec", p(&spec), "--weights", p(&weights)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("max violation"));

    // move one entry of the first orbit into the second: the stored basis is
    // no longer equivariant
    let mut w: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&weights).unwrap()).unwrap();
    let orbits = w["layers"][0]["basis"]["orbits"].as_array_mut().unwrap();
    let moved = orbits[0]["entries"].as_array_mut().unwrap().pop().unwrap();
    orbits[1]["entries"].as_array_mut().unwrap().push(moved);
    let corrupted = dir.path().join("bad.json");
    std::fs::write(&corrupted, w.to_string()).unwrap();
    let o = dms(&["net", "verify", "--spec", p(&spec), "--weights", p(&corrupted)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("at g="), "{}", stdout(&o));
}

#[test]
fn robot_verify_verdicts() {
    let run = |robot: &str, cands: &str| dms(&["robot", "verify", "--robot", p(&fixture(robot)), "--candidates", p(&fixture(cands))]);
    let o = run("mini_biped.json", "mini_biped_candidates.json");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verified; group order 2"));
    let o = run("tri_chain.json", "tri_chain_candidates.json");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verified; group order 3"));
    let o = run("mini_biped_perturbed.json", "mini_biped_candidates.json");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("rejected:") && stdout(&o).contains("mass-matrix violation"));
    let o = run("mini_biped.json", "mini_biped_wrong_pairing.json");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("Jacobian-constraint"));

    let o = dms(&["robot", "verify", "--robot", p(&fixture("mini_biped.json")), "--candidates", p(&fixture("mini_biped_candidates.json")), "--json"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["group_order"], 2);

    let o = dms(&["robot", "verify", "--robot", "/nonexistent.json", "--candidates", p(&fixture("mini_biped_candidates.json"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn commands_are_deterministic() {
    let args = ["robot", "verify", "--robot", "", "--candidates", "", "--json", "--seed", "9"];
    let (r, c) = (fixture("floating_biped.json"), fixture("floating_biped_candidates.json"));
    let mut a = args.map(String::from);
    a[3] = p(&r).into();
    a[5] = p(&c).into();
    let a: Vec<&str> = a.iter().map(String::as_str).collect();
    assert_eq!(stdout(&dms(&a)), stdout(&dms(&a)));
}
