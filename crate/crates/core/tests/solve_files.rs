use std::path::Path;

use wlcp::branch::{bp_solve, strategy_name, SolverConfig, Status, STRATEGIES};
use wlcp::io::{parse_dimacs_col, parse_orlib_scp, parse_wlcp, write_wlcp};
use wlcp::oracle::{brute_force, DEFAULT_MAX_ASSIGNMENTS};
use wlcp::verify_coloring;

fn read(name: &str) -> String {
    std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/data")
            .join(name),
    )
    .unwrap()
}

#[test]
fn corpus_files_against_oracle() {
    let files = [
        ("cycle4.wlcp", parse_wlcp(&read("cycle4.wlcp")).unwrap()),
        ("k24.wlcp", parse_wlcp(&read("k24.wlcp")).unwrap()),
        (
            "triangle_m2.wlcp",
            parse_wlcp(&read("triangle_m2.wlcp")).unwrap(),
        ),
        ("small.scp", parse_orlib_scp(&read("small.scp")).unwrap()),
    ];
    for (name, inst) in files {
        let expected = brute_force(&inst, DEFAULT_MAX_ASSIGNMENTS).unwrap().value();
        for (kind, rule) in STRATEGIES {
            let out = bp_solve(&inst, &SolverConfig::new(kind, rule).unwrap()).unwrap();
            assert_eq!(
                out.value(),
                expected,
                "{name} {}",
                strategy_name(kind, rule)
            );
        }
        assert_eq!(parse_wlcp(&write_wlcp(&inst)).unwrap(), inst);
    }
}

#[test]
fn myciel3_needs_four_colors() {
    let inst = parse_dimacs_col(&read("myciel3.col"), 1).unwrap();
    assert_eq!(inst.n(), 11);
    assert_eq!(inst.graph().edge_count(), 20);
    for (kind, rule) in STRATEGIES {
        let out = bp_solve(&inst, &SolverConfig::new(kind, rule).unwrap()).unwrap();
        assert_eq!(out.status, Status::Optimal);
        let best = out.best.unwrap();
        assert_eq!(best.weight, 4);
        assert_eq!(verify_coloring(&inst, &best.assignment).unwrap().weight, 4);
        // the fractional bound stays below the chromatic number
        assert!(out.stats.root_bound.unwrap() < 4.0);
    }
}
