use std::process::{Command, Output};

use clifsym_core::certificate::{reverify, Certificate};

fn clifsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clifsym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn table_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .take_while(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect()
}

#[test]
fn classify_first_two_dimensions() {
    let o = clifsym(&["classify", "--dims", "2,4", "--variants", "single"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = table_rows(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][..6], ["2", "single", "yes", "no", "no", "yes"]);
    assert_eq!(rows[1][..6], ["4", "single", "yes", "no", "yes", "no"]);
}

#[test]
fn massless_pauli_time_representative() {
    let o = clifsym(&["solve-tau", "--dim", "4", "--variant", "single", "--mass", "0", "--symmetry", "Tp"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["dim"], 1);
    assert_eq!(v[0]["exists"], true);
}

#[test]
fn forced_expectation_exits_two() {
    let o = clifsym(&["classify", "--dims", "4", "--variants", "single", "--expect", "Tw:no"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("Tw exists"), "{err}");
    assert!(err.contains("expected no, found yes"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(clifsym(&["classify", "--bogus"]).status.code(), Some(1));
    assert_eq!(clifsym(&["classify", "--variants", "triple"]).status.code(), Some(1));
    assert_eq!(clifsym(&["solve-tau", "--symmetry", "Q"]).status.code(), Some(1));
    assert_eq!(clifsym(&["spectrum", "--p", "1,2"]).status.code(), Some(1));
    assert_eq!(clifsym(&["spectrum", "--profile", "[[1]]"]).status.code(), Some(1));
    assert_eq!(clifsym(&["report", "/nonexistent/cert.json"]).status.code(), Some(1));
    assert_eq!(clifsym(&["--help"]).status.code(), Some(0));
}

#[test]
fn certificates_written_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let o = clifsym(&["--out", path.to_str().unwrap(), "classify", "--dims", "2", "--variants", "single,doubled"]);
        assert_eq!(o.status.code(), Some(0));
    }
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    let cert = Certificate::parse(std::str::from_utf8(&ta).unwrap()).unwrap();
    assert!(reverify(&cert).unwrap());
}

#[test]
fn json_flag_prints_certificate() {
    let o = clifsym(&["--json", "gamma", "--dim", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let cert = Certificate::parse(&stdout(&o)).unwrap();
    assert_eq!(cert.results.gamma.len(), 1);
    assert!(cert.results.gamma[0].relations_hold);
}

#[test]
fn report_orders_rows_and_shows_flags() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for d in ["4", "2"] {
        let p = dir.path().join(format!("c{d}.json"));
        let o = clifsym(&["--out", p.to_str().unwrap(), "classify", "--dims", d]);
        assert_eq!(o.status.code(), Some(0));
        files.push(p.to_str().unwrap().to_string());
    }
    let mut args = vec!["report"];
    args.extend(files.iter().map(String::as_str));
    let o = clifsym(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let ds: Vec<String> = table_rows(&text).into_iter().map(|r| r[0].clone()).collect();
    assert_eq!(ds, ["2", "4"]);
    assert!(text.contains("flags"));
}

#[test]
fn report_rejects_schema_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    let o = clifsym(&["--out", p.to_str().unwrap(), "classify", "--dims", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&p).unwrap().replacen("\"schema_version\": 1", "\"schema_version\": 7", 1);
    std::fs::write(&p, text).unwrap();
    let o = clifsym(&["report", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains('7'));
}

#[test]
fn spectrum_and_labels() {
    let o = clifsym(&["spectrum", "--mass", "3", "--p", "0,0,0,4", "--profile", "[[1,1],[\"4\",1]]", "--random", "5", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("ω² = 25"));
    assert_eq!(text.matches("H² scalar true").count(), 6);
    assert!(text.contains("mean m² = 5/2"));

    let o = clifsym(&["labels", "--variant", "single"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("labelled dimension 4"));
    assert_eq!(clifsym(&["labels", "--dim", "2"]).status.code(), Some(1));
}

#[test]
fn jobs_flag_does_not_change_output() {
    let one = clifsym(&["--jobs", "1", "--json", "classify", "--dims", "2,4", "--variants", "single,massless"]);
    let four = clifsym(&["--jobs", "4", "--json", "classify", "--dims", "2,4", "--variants", "single,massless"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}
