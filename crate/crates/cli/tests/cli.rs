use std::path::Path;
use std::process::{Command, Output};

const SCENE: &str = r#"
name = "tiny"
vierbein = [
  ["1 + 0.1*x1", "0", "0", "0"],
  ["0", "1 + 0.1*x1", "0", "0"],
  ["0", "0", "1 + 0.1*x1", "0"],
  ["0", "0", "0", "1 + 0.1*x1"],
]
points = 2
expect_conformally_flat = true
"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartan-twistor")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn verify_scene_file_passes() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(dir.path(), "tiny.toml", SCENE);
    let out = run(&["verify", &scene, "--suite", "cartan"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 failed"));
}

#[test]
fn json_reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(dir.path(), "tiny.toml", SCENE);
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for path in [&a, &b] {
        let out = run(&["verify", &scene, "--suite", "dressing", "--seed", "7", "--json", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["scene"], "tiny");
    assert_eq!(v["seed"], 7);
    assert_eq!(v["summary"]["failed"], 0);
}

#[test]
fn tiny_tolerance_exits_one() {
    let out = run(&["verify", "bumpy", "--suite", "cartan", "--points", "2", "--tol", "1e-20"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_syntax = write(dir.path(), "syntax.toml", &SCENE.replace("1 + 0.1*x1\", \"0\", \"0\", \"0\"]", "1 + * x1\", \"0\", \"0\", \"0\"]"));
    let unknown_key = write(dir.path(), "key.toml", &format!("{SCENE}\ncolour = 3\n"));
    let domain = write(dir.path(), "domain.toml", &SCENE.replace("[\"0\", \"0\", \"0\", \"1 + 0.1*x1\"]", "[\"0\", \"0\", \"0\", \"sqrt(x0)\"]"));
    for scene in [bad_syntax.as_str(), unknown_key.as_str(), domain.as_str(), "no-such-scene"] {
        let out = run(&["verify", scene]);
        assert_eq!(out.status.code(), Some(2), "{scene}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
    assert_eq!(run(&["verify", "flat", "--suite", "gravity"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "flat", "--order", "3"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "flat", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn lagrangian_prints_three_routes() {
    let out = run(&["lagrangian", "bumpy", "--point", "0.1,-0.2,0.3,0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let values: Vec<f64> = text
        .lines()
        .take(3)
        .map(|l| l.split_whitespace().last().unwrap().parse().unwrap())
        .collect();
    assert!((values[0] - values[1]).abs() < 1e-12 * values[0].abs());
    assert!(values[0] != 0.0);
    assert_eq!(run(&["lagrangian", "bumpy", "--point", "0.1,0.2"]).status.code(), Some(2));
}

#[test]
fn scenes_lists_builtins() {
    let out = run(&["scenes"]);
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["flat", "conformally-flat", "exp-conformal", "bumpy", "bumpy+f"] {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(name)), "{name}");
    }
}
