use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fluxspec")).args(args).output().expect("spawn fluxspec")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["spectrum", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
}

#[test]
fn towers_csv_is_deterministic() {
    let args = ["towers", "--q-min", "0.05", "--q-max", "2.95", "--steps", "30", "--sector", "both", "--m", "-2..3"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("q,m,family,gamma,class\n"));
    assert!(text.contains(",singular_normalizable"));
}

#[test]
fn spectrum_json_is_deterministic() {
    let args = ["spectrum", "--q", "0.5", "--m", "-2..2", "--n-max", "3", "--format", "json"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.is_object() || v.is_array());
}

#[test]
fn every_subcommand_has_dry_run() {
    let cases: [&[&str]; 8] = [
        &["spectrum", "--q", "1"],
        &["towers"],
        &["hermiticity", "--q", "0.5"],
        &["susy", "--q", "0.5"],
        &["index", "--q", "2"],
        &["flux", "--q", "0.7"],
        &["oracle", "--problem", "s3"],
        &["check", "--suite", "jacobi"],
    ];
    for args in cases {
        let mut full = args.to_vec();
        full.push("--dry-run");
        let o = run(&full);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert!(v.is_object(), "{args:?}");
    }
}

#[test]
fn index_and_hermiticity_values() {
    let o = run(&["index", "--q", "-2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["index"], -2);

    let o = run(&["index", "--q", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("susy"));

    let o = run(&["hermiticity", "--q", "0.5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("6.28318530718"));
}

#[test]
fn check_suite_passes() {
    let o = run(&["check", "--suite", "jacobi"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn output_file_written() {
    let path = std::env::temp_dir().join(format!("fluxspec-cli-{}.svg", std::process::id()));
    let o = run(&["towers", "--format", "svg", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(&path).unwrap();
    let _ = std::fs::remove_file(&path);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}
