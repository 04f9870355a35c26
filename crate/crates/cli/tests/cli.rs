use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn swarm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swarm")).args(args).output().expect("binary runs")
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name).display().to_string()
}

fn demo_with(dir: &Path, from: &str, to: &str) -> String {
    let text = std::fs::read_to_string(config("demo.toml")).unwrap();
    assert!(text.contains(from), "demo.toml lacks `{from}`");
    let path: PathBuf = dir.join("edited.toml");
    std::fs::write(&path, text.replace(from, to)).unwrap();
    path.display().to_string()
}

#[test]
fn validate_passes_the_demo() {
    let out = swarm(&["validate", &config("demo.toml")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("deadlock/step-bound"));
}

#[test]
fn validate_json_is_parseable() {
    let out = swarm(&["validate", &config("noise-adjusted.toml"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["checks"].as_array().unwrap().len() > 5);
    assert!(v["noise_adjustment"].is_object());
}

#[test]
fn two_sensors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = demo_with(dir.path(), "count = 8", "count = 2");
    let out = swarm(&["validate", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("deadlock/sensor-count"));
    // run refuses too, unless told otherwise
    assert_eq!(swarm(&["run", &path]).status.code(), Some(2));
}

#[test]
fn malformed_config_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = demo_with(dir.path(), "d_max = 0.2", "d_max = \"far\"");
    let out = swarm(&["validate", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("d_max"));
}

#[test]
fn missing_file_is_a_runtime_error() {
    assert_eq!(swarm(&["validate", "/nonexistent/config.toml"]).status.code(), Some(1));
}

#[test]
fn run_writes_trace_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let svg = dir.path().join("t.svg");
    let out = swarm(&["run", &config("demo.toml"), "--trace", trace.to_str().unwrap(), "--render", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let result: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(result["outcome"], "all-encapsulated");
    let ticks = result["ticks"].as_u64().unwrap();
    let lines = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(lines.lines().count() as u64, ticks);
    let last: serde_json::Value = serde_json::from_str(lines.lines().last().unwrap()).unwrap();
    assert_eq!(last["tick"].as_u64().unwrap(), ticks - 1);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn run_is_repeatable_and_seed_sensitive() {
    let a = swarm(&["run", &config("demo.toml"), "--seed", "5"]).stdout;
    let b = swarm(&["run", &config("demo.toml"), "--seed", "5"]).stdout;
    let c = swarm(&["run", &config("demo.toml"), "--seed", "6"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn sweep_prints_one_row_per_value() {
    let out = swarm(&[
        "sweep",
        &config("demo.toml"),
        "--param",
        "noise.level",
        "--values",
        "0,0.1",
        "--runs",
        "3",
        "--allow-bound-violations",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("sweep_param,sweep_value,runs"));
    assert!(rows[1].starts_with("noise.level,0,3,"));
    assert!(rows[2].starts_with("noise.level,0.1,3,"));
}

#[test]
fn sweep_rejects_unknown_parameter() {
    let out = swarm(&["sweep", &config("demo.toml"), "--param", "robots.colour", "--values", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn batch_writes_csv_and_json_independent_of_workers() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.toml");
    std::fs::write(
        &spec,
        format!(
            "schema_version = 1\nname = \"tiny\"\nbase_config = \"{}\"\nruns_per_point = 4\nmaster_seed = 3\n\n[[sweep]]\nparam = \"robots.p\"\nvalues = [4, 8]\n",
            config("demo.toml")
        ),
    )
    .unwrap();
    let mut csvs = Vec::new();
    for workers in ["1", "3"] {
        let csv = dir.path().join(format!("m{workers}.csv"));
        let json = dir.path().join(format!("m{workers}.json"));
        let out = swarm(&[
            "batch",
            spec.to_str().unwrap(),
            "--out",
            csv.to_str().unwrap(),
            "--json",
            json.to_str().unwrap(),
            "--workers",
            workers,
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 2);
        csvs.push(std::fs::read_to_string(&csv).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
    assert_eq!(csvs[0].lines().count(), 3);
}
