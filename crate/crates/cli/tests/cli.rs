use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data")
        .join(name)
}

fn wlcp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wlcp"))
        .args(args)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn without_time(line: &str) -> String {
    line.split_whitespace()
        .filter(|t| !t.starts_with("time_s="))
        .collect::<Vec<_>>()
        .join(" ")
}

#[test]
fn solve_cycle4() {
    let out = wlcp(&[
        "solve",
        "--branch",
        "color",
        "--select",
        "alt2",
        path(&data("cycle4.wlcp")),
    ]);
    assert!(out.status.success());
    assert_eq!(
        without_time(&stdout(&out)),
        "status=optimal value=2 bound=2.000000 nodes=1 lps=2 cols=4"
    );
    let line = stdout(&out);
    assert!(line
        .trim_end()
        .split(' ')
        .next_back()
        .unwrap()
        .starts_with("time_s="));
}

#[test]
fn solve_every_strategy_and_oracle() {
    let file = data("myciel3.col");
    for (branch, select) in [
        ("edge", "std"),
        ("edge", "alt"),
        ("color", "std"),
        ("color", "alt1"),
        ("color", "alt2"),
    ] {
        let out = wlcp(&["solve", "--branch", branch, "--select", select, path(&file)]);
        assert!(
            stdout(&out).starts_with("status=optimal value=4 "),
            "{branch} {select}"
        );
    }
    let out = wlcp(&["solve", "--oracle", path(&data("cycle4.wlcp"))]);
    assert_eq!(
        without_time(&stdout(&out)),
        "status=optimal value=2 bound=2.000000 nodes=0 lps=0 cols=0"
    );
}

#[test]
fn solve_infeasible_exits_zero() {
    let out = wlcp(&[
        "solve",
        "--branch",
        "edge",
        "--no-preprocess",
        path(&data("k24.wlcp")),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("status=infeasible value=- bound=inf "));
}

#[test]
fn solve_writes_solution_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("cycle4.sol");
    let out = wlcp(&[
        "solve",
        "--stats",
        "-o",
        path(&sol),
        path(&data("cycle4.wlcp")),
    ]);
    assert!(out.status.success());
    let stats: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(stats["nodes"], 1);
    assert_eq!(stats["pairless_nodes"], 0);
    let check = wlcp(&["verify", path(&data("cycle4.wlcp")), path(&sol)]);
    assert_eq!(stdout(&check), "valid weight=2\n");
}

#[test]
fn verify_reference_coloring() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("f.sol");
    std::fs::write(&sol, "v 1 3\nv 2 4\nv 3 4\nv 4 1\n").unwrap();
    let out = wlcp(&["verify", path(&data("cycle4.wlcp")), path(&sol)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "valid weight=3\n");

    std::fs::write(&sol, "v 1 1\nv 2 1\nv 3 4\nv 4 3\n").unwrap();
    let out = wlcp(&["verify", path(&data("cycle4.wlcp")), path(&sol)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        stdout(&out),
        "invalid color 3 not in list of vertex 4; edge 1-2 has both endpoints colored 1\n"
    );
}

#[test]
fn convert_round_trip() {
    let out = wlcp(&["convert", path(&data("cycle4.wlcp"))]);
    let original = std::fs::read_to_string(data("cycle4.wlcp")).unwrap();
    let body: String = original
        .lines()
        .filter(|l| !l.starts_with('c'))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(stdout(&out), body);

    let out = wlcp(&["convert", "--to", "dimacs", path(&data("myciel3.col"))]);
    let text = stdout(&out);
    assert!(text.starts_with("p edge 11 20\n"));
    assert_eq!(text.lines().count(), 21);
}

#[test]
fn preprocess_cycle4() {
    let out = wlcp(&["preprocess", path(&data("cycle4.wlcp"))]);
    let expected = "c offset 2\nc steps 2\nc kept 1 3\np wlcp 2 1 7\ne 1 2\n\
                    w 1 0\nw 2 0\nw 3 1\nw 4 1\nw 5 1\nw 6 1\nw 7 1\n\
                    l 1 6 1 3 4 5 6 7\nl 2 5 2 3 4 5 6\n";
    assert_eq!(stdout(&out), expected);
    let out = wlcp(&["preprocess", path(&data("triangle_m2.wlcp"))]);
    assert_eq!(stdout(&out), "status=infeasible\n");
}

#[test]
fn gen_is_deterministic() {
    let args = [
        "gen", "set1", "--n", "5", "--p", "0.5", "--q", "0.5", "--k", "3", "--seed", "7",
    ];
    let a = stdout(&wlcp(&args));
    assert_eq!(a, stdout(&wlcp(&args)));
    assert!(a.starts_with("p wlcp 5 "));
    let other = stdout(&wlcp(&[
        "gen", "set1", "--n", "5", "--p", "0.5", "--q", "0.5", "--k", "3", "--seed", "8",
    ]));
    assert_ne!(a, other);
    let set3 = stdout(&wlcp(&[
        "gen", "set3", "--n", "6", "--p", "0.5", "--seed", "1",
    ]));
    assert!(set3.starts_with("p wlcp 6 "));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(wlcp(&["solve"]).status.code(), Some(2));
    assert_eq!(
        wlcp(&[
            "solve",
            "--branch",
            "edge",
            "--select",
            "alt2",
            path(&data("cycle4.wlcp"))
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(wlcp(&["solve", "/nonexistent.wlcp"]).status.code(), Some(2));
    assert_eq!(
        wlcp(&["solve", "--format", "dimacs", path(&data("cycle4.wlcp"))])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        wlcp(&[
            "gen",
            "set1",
            "--n",
            "4",
            "--p",
            "0.5",
            "--q",
            "0.5",
            "--k",
            "3",
            "--weights",
            "1,2"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn scp_by_extension() {
    let out = wlcp(&["solve", path(&data("small.scp"))]);
    assert!(stdout(&out).starts_with("status=optimal value=5 "));
}
