//! The shipped problem files parse to the sets they document.

use std::path::Path;

use scg_cli::parse::{self, ProblemSet};
use scg_core::rat::{self, Int};
use scg_core::ratpoly::Limits;

fn limits() -> Limits {
    Limits {
        max_dim: 8,
        max_enum: 1_000_000,
    }
}

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn iv(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| rat::int(x)).collect()
}

#[test]
fn pointed_fixture_has_the_documented_generators() {
    let problem = parse::parse_problem(&fixture("pointed_wedge.scg"), &limits()).expect("parses");
    let s = match &problem.set {
        ProblemSet::Pure(s) => s,
        ProblemSet::Mixed(_) => panic!("fixture is a pure problem"),
    };
    let gens = s.generators();
    assert_eq!(gens.vertices, vec![iv(&[-5, 0]), iv(&[-5, 1]), iv(&[-3, 1])]);
    assert_eq!(gens.rays, vec![iv(&[1, 1])]);
    assert!(gens.lineality.is_empty());
    assert!(s.is_pointed());
    assert!(
        problem.p.same_set(s.hull()).expect("within caps"),
        "P coincides with conv(S) in this fixture"
    );
}

#[test]
fn binary_fixture_holds_exactly_the_four_binary_points() {
    let problem = parse::parse_problem(&fixture("strengthen.scg"), &limits()).expect("parses");
    let s = match &problem.set {
        ProblemSet::Pure(s) => s,
        ProblemSet::Mixed(_) => panic!("fixture is a pure problem"),
    };
    assert_eq!(
        s.points().expect("explicit"),
        &[iv(&[0, 0]), iv(&[0, 1]), iv(&[1, 0]), iv(&[1, 1])]
    );
}

#[test]
fn fixtures_round_trip_through_the_canonical_writer() {
    for name in ["pointed_wedge.scg", "strengthen.scg", "empty_side.scg"] {
        let lim = limits();
        let problem = parse::parse_problem(&fixture(name), &lim).expect("parses");
        let text = parse::write_problem(&problem);
        let reparsed = parse::parse_problem_str(&text, &lim).expect("canonical text parses");
        assert_eq!(
            text,
            parse::write_problem(&reparsed),
            "writer must be idempotent on {name}"
        );
    }
}
