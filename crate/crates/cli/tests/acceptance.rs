//! End-to-end acceptance checks: worked fixtures, the randomized suites at
//! their full trial counts, soundness of every closure, and byte-identical
//! reports across runs and thread counts. Each check prints one PASS line.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use scg_cli::parse::{self, ProblemSet};
use scg_cli::verify;
use scg_core::dominance;
use scg_core::rat::{self, Int, Rational};
use scg_core::ratpoly::{Constraint, Limits, Polyhedron, Rel};
use scg_core::scg::{self, Strengthened};
use scg_core::sets::{lattice_points_in_box, SSpec};
use scg_core::transforms;

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

fn scg_binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_scg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ri(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    rng.gen_range(lo..=hi)
}

fn rrat(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let den = ri(rng, 1, 4);
    Rational::new(rat::int(ri(rng, lo * den, hi * den)), rat::int(den))
}

fn nonzero_int_vec(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<Int> {
    loop {
        let v: Vec<Int> = (0..n).map(|_| rat::int(ri(rng, -bound, bound))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn assert_within(elapsed: Duration, budget: Duration, what: &str) {
    assert!(
        elapsed <= budget,
        "{what} took {elapsed:?}, budget is {budget:?}"
    );
}

/// The shipped pointed fixture normalizes onto the documented image: the
/// generator images are exactly {(1,0),(0,1),(2,1)}, the recession ray maps
/// to (0,1), and the apex (-5,0) maps to (1,0).
#[test]
fn normal_form_of_the_pointed_fixture_hits_the_documented_image() {
    let start = Instant::now();
    let lim = limits();
    let problem = parse::parse_problem(&fixture("pointed_wedge.scg"), &lim).expect("parses");
    let s = match &problem.set {
        ProblemSet::Pure(s) => s.clone(),
        ProblemSet::Mixed(_) => panic!("fixture is a pure problem"),
    };
    let (tau, mapped) = transforms::normalize_pointed(&s, &lim).expect("pointed");

    let image: std::collections::BTreeSet<Vec<Int>> = s
        .generators()
        .vertices
        .iter()
        .map(|v| tau.apply_int(v))
        .collect();
    let expected: std::collections::BTreeSet<Vec<Int>> = [
        vec![rat::int(1), rat::int(0)],
        vec![rat::int(0), rat::int(1)],
        vec![rat::int(2), rat::int(1)],
    ]
    .into_iter()
    .collect();
    assert_eq!(image, expected, "vertex images must match the documented set");
    assert_eq!(
        mapped.generators().rays,
        vec![vec![rat::int(0), rat::int(1)]],
        "the recession ray must map onto the last coordinate axis"
    );
    assert_eq!(
        tau.apply_int(&[rat::int(-5), rat::int(0)]),
        vec![rat::int(1), rat::int(0)],
        "the apex must map to (1,0)"
    );
    assert_within(start.elapsed(), Duration::from_secs(1), "fixture normal form");
    println!("fixture normal form reproduces the documented image: PASS");
}

/// On the binary-knapsack fixture the strengthened side beats the classical
/// floor: beta 9/2 rounds to 4 classically but to 3 over S, at witness (0,1).
#[test]
fn strengthening_the_knapsack_fixture_beats_the_classical_floor() {
    let start = Instant::now();
    let file = fixture("strengthen.scg");
    let out = scg_binary(&["strengthen", "--alpha", "2,3", file.to_str().expect("utf8")]);
    assert!(out.status.success(), "strengthen must exit 0");
    let text = String::from_utf8(out.stdout).expect("utf8");
    for needle in [
        "beta = 9/2",
        "classical_floor = 4",
        "beta_strengthened = 3",
        "witness = (0, 1)",
    ] {
        assert!(text.contains(needle), "missing `{needle}` in:\n{text}");
    }
    assert_within(start.elapsed(), Duration::from_secs(1), "fixture strengthening");
    println!("fixture strengthening beats the classical floor: PASS");
}

/// Over S = Z^n the strengthened floor collapses to gcd rounding; checked on
/// 500 random draws with n up to 4.
#[test]
fn floor_over_all_integers_reduces_to_gcd_rounding() {
    let start = Instant::now();
    let lim = limits();
    let mut rng = ChaCha8Rng::seed_from_u64(3001);
    let integer_sets: Vec<SSpec> = (1..=4)
        .map(|n| SSpec::integers(n, &lim).expect("within caps"))
        .collect();
    for _ in 0..500 {
        let n = ri(&mut rng, 1, 4) as usize;
        let alpha = nonzero_int_vec(&mut rng, n, 6);
        let beta = rrat(&mut rng, -20, 20);
        let g = rat::gcd_vec(&alpha);
        let expected = rat::floor_int(&(&beta / rat::rat_of(&g))) * &g;
        match scg::floor_s(&integer_sets[n - 1], &alpha, &beta, &lim).expect("within caps") {
            Strengthened::Finite { value, witness } => {
                assert_eq!(value, expected);
                assert_eq!(rat::dot_int(&alpha, &witness), value);
            }
            Strengthened::EmptySide => panic!("Z^n always meets a rational half-space"),
        }
    }
    assert_within(start.elapsed(), Duration::from_secs(5), "classical consistency");
    println!("classical rounding consistency on 500 draws: PASS");
}

/// 1000 random simultaneous-approximation calls satisfy both stated bounds:
/// every residue stays strictly below eps and q never exceeds (1/eps)^k.
#[test]
fn approximation_bounds_hold_on_a_thousand_draws() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3002);
    for _ in 0..1000 {
        let k = ri(&mut rng, 1, 4) as usize;
        let r: Vec<Rational> = (0..k).map(|_| rrat(&mut rng, 0, 5)).collect();
        let eps = Rational::new(Int::one(), rat::int(ri(&mut rng, 2, 9)));
        let (p, q) = dominance::dirichlet(&r, &eps).expect("always exists");
        assert!(q >= Int::one());
        let mut cap = Rational::one();
        for _ in 0..k {
            cap *= Rational::one() / &eps;
        }
        assert!(rat::rat_of(&q) <= cap);
        let qr = rat::rat_of(&q);
        for (ri_, pi) in r.iter().zip(&p) {
            assert!((&qr * ri_ - rat::rat_of(pi)).abs() < eps);
        }
    }
    assert_within(start.elapsed(), Duration::from_secs(10), "approximation suite");
    println!("approximation bounds on 1000 draws: PASS");
}

#[test]
fn commutation_suite_passes_at_full_size() {
    let start = Instant::now();
    let report = verify::run_suite("lemma2.2", 100, 20260815, 4, &limits()).expect("known suite");
    assert!(report.all_passed(), "failures: {:?}", report.failures);
    assert_within(start.elapsed(), Duration::from_secs(120), "commutation suite");
    println!("commutation suite, 100 trials: PASS");
}

#[test]
fn reduction_suites_pass_at_full_size() {
    let start = Instant::now();
    let lim = limits();
    let covering = verify::run_suite("lemma3.5", 100, 20260815, 4, &lim).expect("known suite");
    assert!(covering.all_passed(), "failures: {:?}", covering.failures);
    let packing = verify::run_suite("lemma3.8", 100, 20260815, 4, &lim).expect("known suite");
    assert!(packing.all_passed(), "failures: {:?}", packing.failures);
    assert_within(start.elapsed(), Duration::from_secs(300), "reduction suites");
    println!("covering and packing reduction suites, 100 trials each: PASS");
}

#[test]
fn partition_suite_passes_at_full_size() {
    let start = Instant::now();
    let report = verify::run_suite("lemma3.11", 50, 20260815, 4, &limits()).expect("known suite");
    assert!(report.all_passed(), "failures: {:?}", report.failures);
    assert_within(start.elapsed(), Duration::from_secs(300), "partition suite");
    println!("partition suite, 50 trials: PASS");
}

#[test]
fn projection_suite_passes_at_full_size() {
    let start = Instant::now();
    let report = verify::run_suite("thm5.1", 50, 20260815, 4, &limits()).expect("known suite");
    assert!(report.all_passed(), "failures: {:?}", report.failures);
    assert_within(start.elapsed(), Duration::from_secs(180), "projection suite");
    println!("projection suite, 50 trials: PASS");
}

/// Dedicated soundness battery over both set descriptions: every closure is
/// sandwiched between conv(P ∩ S) and P, and raising the cut bound K only
/// tightens it. The randomized suites embed the same checks per trial.
#[test]
fn closures_stay_sound_and_antitone_across_generators() {
    let lim = limits();
    let mut rng = ChaCha8Rng::seed_from_u64(3003);
    for trial in 0..40 {
        let n = ri(&mut rng, 1, 2) as usize;
        let s = if trial % 2 == 0 {
            let count = ri(&mut rng, 2, 5);
            let points: Vec<Vec<Int>> = (0..count)
                .map(|_| (0..n).map(|_| rat::int(ri(&mut rng, -3, 3))).collect())
                .collect();
            SSpec::explicit(points).expect("nonempty")
        } else {
            let rows: Vec<Constraint> = (0..n)
                .flat_map(|j| {
                    let mut row = rat::zeros(n);
                    row[j] = Rational::one();
                    let lo = rrat(&mut rng, -3, 0);
                    let hi = &lo + rrat(&mut rng, 1, 4);
                    [
                        Constraint::new(row.clone(), Rel::Ge, lo),
                        Constraint::le(row, hi),
                    ]
                })
                .collect();
            let region = Polyhedron::new(n, rows).expect("consistent shapes");
            match SSpec::hull_of(region, &lim) {
                Ok(s) => s,
                Err(_) => continue,
            }
        };
        let caps: Vec<Constraint> = (0..n)
            .map(|j| {
                let mut row = rat::zeros(n);
                row[j] = Rational::one();
                Constraint::le(row, rrat(&mut rng, -2, 3))
            })
            .collect();
        let p = match s.hull().with_rows(caps) {
            Ok(p) => p,
            Err(_) => continue,
        };

        let mut previous: Option<Polyhedron> = None;
        for k in 1..=3 {
            let c = scg::bounded_closure(&p, &s, k, false, &lim).expect("within caps");
            assert!(c.polyhedron.subset_of(&p).expect("within caps"));
            if let Some(prev) = &previous {
                assert!(
                    c.polyhedron.subset_of(prev).expect("within caps"),
                    "closure must shrink as K grows"
                );
            }
            let lo = vec![rat::int(-4); n];
            let hi = vec![rat::int(4); n];
            for z in lattice_points_in_box(&p, &lo, &hi, &lim).expect("small box") {
                if s.contains(&z) {
                    assert!(c.polyhedron.contains_int(&z), "closure must keep P ∩ S");
                }
            }
            previous = Some(c.polyhedron);
        }
    }
    println!("closure soundness and antitone battery: PASS");
}

/// Fixed seed in, identical bytes out: rerunning any command, with any
/// worker count, may not change a single byte of the report.
#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let wedge = fixture("pointed_wedge.scg");
    let wedge_path = wedge.to_str().expect("utf8");

    let a = scg_binary(&["closure", "--K", "2", wedge_path]);
    let b = scg_binary(&["closure", "--K", "2", wedge_path]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout, "closure reruns must agree");

    let one = scg_binary(&["verify", "lemma3.11", "--trials", "5", "--seed", "42"]);
    let four = scg_binary(&[
        "--threads", "4", "verify", "lemma3.11", "--trials", "5", "--seed", "42",
    ]);
    assert!(one.status.success() && four.status.success());
    assert_eq!(
        one.stdout, four.stdout,
        "worker count must not leak into the report"
    );

    let j1 = scg_binary(&["--format", "json", "verify", "thm5.1", "--trials", "5", "--seed", "7"]);
    let j2 = scg_binary(&[
        "--threads", "3", "--format", "json", "verify", "thm5.1", "--trials", "5", "--seed", "7",
    ]);
    assert!(j1.status.success() && j2.status.success());
    assert_eq!(j1.stdout, j2.stdout, "json reports must agree byte for byte");

    println!("byte-identical reports across runs and thread counts: PASS");
}

/// A supporting inequality whose strengthened side misses S yields the
/// infeasibility certificate and exit code 3, in text and in closure runs.
#[test]
fn empty_sides_produce_the_infeasibility_exit_code() {
    let file = fixture("empty_side.scg");
    let path = file.to_str().expect("utf8");

    let out = scg_binary(&["strengthen", "--alpha", "1", path]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).expect("utf8");
    assert!(text.contains("beta_strengthened = empty_side"));
    assert!(text.contains("cut = 0x <= -1"));

    let out = scg_binary(&["closure", "--K", "1", path]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).expect("utf8");
    assert!(text.contains("strengthened=empty_side"));
    assert!(text.contains("0 <= -1"), "final closure must be the empty form");

    println!("empty-side certificates exit with code 3: PASS");
}
