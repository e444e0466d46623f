use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_compinv")).args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_compinv"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn census_golden() {
    let o = run(&["census", "idempotents", "--n", "2", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "count=14\n");
    let o = run(&["census", "idempotents", "--n", "2", "--q", "2", "--enumerate"]);
    assert_eq!(stdout(&o).lines().count(), 9);
}

#[test]
fn perm_check_golden() {
    let o = run(&["perm", "check", "2:1:3", "poly:[0,1,1]"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("permutation=false"));
    let o = run(&["perm", "check", "2:1:3", "poly:[0,0,0,0,1]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "permutation=true\n");
}

#[test]
fn family_golden_and_verify_pipe() {
    let o = run_stdin(&["invert", "family", "simple-proof", "2:1:3", "-"], "alpha=1\nc=1\nG=x\n");
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    assert!(line.contains("verified=true inverse=poly:[0,0,1]"), "{line}");
    let v = run_stdin(&["verify", "2:1:3", "-"], &line);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(stdout(&v), "verified=true\n");
}

#[test]
fn invert_lines_reverify() {
    let cases: [&[&str]; 3] = [
        &["invert", "brute", "3:1:2", "poly:[0,0,0,0,0,1]"],
        &["invert", "dickson", "3:1:2", "lin:[0,1]"],
        &["invert", "subspace", "2:1:3", "lin:[1,1,0]", "--V", "span{6,2}", "--Vbar", "span{6,2}", "--strategy", "ntt"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?} {}", String::from_utf8_lossy(&o.stderr));
        let spec = args[2];
        let v = run_stdin(&["verify", spec, "-"], &stdout(&o));
        assert_eq!(v.status.code(), Some(0), "{args:?} {}", stdout(&o));
    }
}

#[test]
fn verify_reports_counterexample() {
    let o = run(&["verify", "2:1:2", "poly:[0,0,1]", "x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("verified=false counterexample="));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["perm", "check", "2:1:3", "poly:[0,9]"][..],
        &["field", "info", "4:1:2"],
        &["invert", "family", "nope", "2:1:3", "-"],
        &["perm", "check", "2:1:3"],
        &["field", "info", "2:1:3", "--bogus"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let o = run(&["perm", "check", "2:1:3", "poly:[0,9]"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("poly:[0,9]"));
}

#[test]
fn hypothesis_failure_exits_1() {
    let o = run_stdin(&["invert", "family", "shifted-frobenius", "2:1:2", "-"], "alpha=1\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("checked=false"));
}

#[test]
fn output_is_stable_across_thread_counts() {
    let a = run(&["--threads", "1", "invert", "brute", "2:1:5", "poly:[0,0,0,1]"]);
    let b = run(&["--threads", "4", "invert", "brute", "2:1:5", "poly:[0,0,0,1]"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn field_info_and_lin() {
    assert_eq!(
        stdout(&run(&["field", "info", "2:1:3"])),
        "p=2 m=1 n=3 q=2 order=8 spec=2:1:3:modq=0,1:modqn=1,1,0,1\n"
    );
    assert_eq!(stdout(&run(&["lin", "eval", "2:1:3", "lin:[1,1,1]", "1"])), "value=1\n");
    assert_eq!(stdout(&run(&["lin", "compose", "2:1:3", "lin:[0,1,0]", "lin:[0,1,0]"])), "lin=lin:[0,0,1]\n");
    assert!(stdout(&run(&["lin", "dickson", "3:1:2", "lin:[1,1]"])).starts_with("det=0 "));
}

#[test]
fn bench_csv_shape() {
    let o = run(&["bench", "subspace-inverse", "2:1:3", "--reps", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "p,m,n,strategy,nanos,verified");
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 6 && l.ends_with(",true")));
}
