//! Seeded randomized properties of the exact kernel: duality certificates,
//! generator round-trips, floor oracles against direct scans, and the
//! simultaneous-approximation bounds.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use scg_core::dominance;
use scg_core::rat::{self, Int, Rational};
use scg_core::ratpoly::{lp, Constraint, Limits, Polyhedron, Rel};
use scg_core::scg::{self, Strengthened};
use scg_core::sets::{lattice_points_in_box, SSpec};

fn limits() -> Limits {
    Limits {
        max_dim: 8,
        max_enum: 1_000_000,
    }
}

fn ri(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    rng.gen_range(lo..=hi)
}

fn rrat(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let den = ri(rng, 1, 4);
    Rational::new(rat::int(ri(rng, lo * den, hi * den)), rat::int(den))
}

fn rvec(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<Rational> {
    (0..n).map(|_| rrat(rng, -bound, bound)).collect()
}

fn nonzero_int_vec(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<Int> {
    loop {
        let v: Vec<Int> = (0..n).map(|_| rat::int(ri(rng, -bound, bound))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn random_polyhedron(rng: &mut ChaCha8Rng, n: usize) -> Polyhedron {
    let m = ri(rng, 1, 5) as usize;
    let rows = (0..m)
        .map(|_| {
            let coeffs = rvec(rng, n, 3);
            let rel = if ri(rng, 0, 3) == 0 { Rel::Ge } else { Rel::Le };
            Constraint::new(coeffs, rel, rrat(rng, -4, 4))
        })
        .collect();
    Polyhedron::new(n, rows).expect("consistent shapes")
}

#[test]
fn lp_outcomes_carry_checkable_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(1101);
    for _ in 0..200 {
        let n = ri(&mut rng, 1, 3) as usize;
        let p = random_polyhedron(&mut rng, n);
        let obj = rvec(&mut rng, n, 3);
        let (a, b) = p.to_le_form();
        match lp::maximize(&p, &obj).expect("within caps") {
            lp::LpResult::Optimal(o) => {
                assert!(p.contains(&o.point), "optimum must be feasible");
                assert_eq!(rat::dot(&obj, &o.point), o.value);
                assert_eq!(o.dual.len(), a.len());
                assert!(o.dual.iter().all(|l| !l.is_negative()));
                for j in 0..n {
                    let col: Rational = a.iter().zip(&o.dual).map(|(row, l)| &row[j] * l).sum();
                    assert_eq!(col, obj[j], "dual combination must reproduce the objective");
                }
                let dual_value: Rational = b.iter().zip(&o.dual).map(|(bi, l)| bi * l).sum();
                assert_eq!(dual_value, o.value, "strong duality must hold exactly");
            }
            lp::LpResult::Unbounded(r) => {
                assert!(p.contains(&r.point), "witness point must be feasible");
                for row in &a {
                    assert!(!rat::dot(row, &r.direction).is_positive());
                }
                assert!(rat::dot(&obj, &r.direction).is_positive());
            }
            lp::LpResult::Infeasible(f) => {
                assert_eq!(f.multipliers.len(), a.len());
                assert!(f.multipliers.iter().all(|l| !l.is_negative()));
                for j in 0..n {
                    let col: Rational = a
                        .iter()
                        .zip(&f.multipliers)
                        .map(|(row, l)| &row[j] * l)
                        .sum();
                    assert!(col.is_zero(), "refutation must cancel every variable");
                }
                let rhs: Rational = b.iter().zip(&f.multipliers).map(|(bi, l)| bi * l).sum();
                assert!(rhs.is_negative(), "refutation must reach 0 <= negative");
            }
        }
    }
}

#[test]
fn generator_form_round_trips_to_the_same_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(1102);
    let lim = limits();
    for _ in 0..100 {
        let n = ri(&mut rng, 1, 3) as usize;
        let p = random_polyhedron(&mut rng, n);
        let vr = p.vrep(&lim).expect("within caps").clone();
        let q = scg_core::ratpoly::hrep_from_generators(n, &vr.vertices, &vr.rays, &vr.lineality)
            .expect("well formed generators");
        assert!(
            p.same_set(&q).expect("within caps"),
            "H-form of the V-form must describe the same set"
        );
    }
}

#[test]
fn floor_on_explicit_sets_matches_a_direct_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(1103);
    let lim = limits();
    for _ in 0..300 {
        let n = ri(&mut rng, 1, 3) as usize;
        let count = ri(&mut rng, 1, 6);
        let points: Vec<Vec<Int>> = (0..count)
            .map(|_| (0..n).map(|_| rat::int(ri(&mut rng, -4, 4))).collect())
            .collect();
        let s = SSpec::explicit(points.clone()).expect("nonempty");
        let alpha = nonzero_int_vec(&mut rng, n, 3);
        let beta = rrat(&mut rng, -8, 8);

        let scan = points
            .iter()
            .map(|z| rat::dot_int(&alpha, z))
            .filter(|v| rat::rat_of(v) <= beta)
            .max();
        match scg::floor_s(&s, &alpha, &beta, &lim).expect("within caps") {
            Strengthened::Finite { value, witness } => {
                assert_eq!(Some(value.clone()), scan);
                assert!(s.contains(&witness), "witness must lie in S");
                assert_eq!(rat::dot_int(&alpha, &witness), value);
            }
            Strengthened::EmptySide => assert_eq!(scan, None),
        }
    }
}

#[test]
fn floor_on_hull_sets_matches_the_enumerated_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(1104);
    let lim = limits();
    for _ in 0..100 {
        let n = ri(&mut rng, 1, 3) as usize;
        let mut rows = Vec::new();
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for j in 0..n {
            let a = rrat(&mut rng, -3, 0);
            let b = &a + rrat(&mut rng, 0, 4) + Rational::one();
            let mut down = rat::zeros(n);
            down[j] = Rational::one();
            rows.push(Constraint::new(down.clone(), Rel::Ge, a.clone()));
            rows.push(Constraint::le(down, b.clone()));
            lo.push(rat::floor_int(&a));
            hi.push(rat::ceil_int(&b));
        }
        let region = Polyhedron::new(n, rows).expect("consistent shapes");
        let pts = lattice_points_in_box(&region, &lo, &hi, &lim).expect("small box");
        if pts.is_empty() {
            continue;
        }
        let by_hull = SSpec::hull_of(region, &lim).expect("nonempty");
        let by_list = SSpec::explicit(pts).expect("nonempty");
        let alpha = nonzero_int_vec(&mut rng, n, 3);
        let beta = rrat(&mut rng, -8, 8);
        let a = scg::floor_s(&by_hull, &alpha, &beta, &lim).expect("within caps");
        let b = scg::floor_s(&by_list, &alpha, &beta, &lim).expect("within caps");
        assert_eq!(a.value(), b.value(), "both descriptions must floor alike");
    }
}

#[test]
fn classical_floor_over_all_integers_is_gcd_rounding() {
    let mut rng = ChaCha8Rng::seed_from_u64(1105);
    let lim = limits();
    let integer_sets: Vec<SSpec> = (1..=4)
        .map(|n| SSpec::integers(n, &lim).expect("within caps"))
        .collect();
    for _ in 0..500 {
        let n = ri(&mut rng, 1, 4) as usize;
        let s = &integer_sets[n - 1];
        let alpha = nonzero_int_vec(&mut rng, n, 6);
        let beta = rrat(&mut rng, -20, 20);
        let g = rat::gcd_vec(&alpha);
        let expected = rat::floor_int(&(&beta / rat::rat_of(&g))) * &g;
        match scg::floor_s(s, &alpha, &beta, &lim).expect("within caps") {
            Strengthened::Finite { value, witness } => {
                assert_eq!(value, expected, "floor over Z^n must be gcd rounding");
                assert_eq!(rat::dot_int(&alpha, &witness), value);
            }
            Strengthened::EmptySide => panic!("Z^n always meets a rational half-space"),
        }
    }
}

#[test]
fn approximation_satisfies_both_stated_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(1106);
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
        assert!(rat::rat_of(&q) <= cap, "q must respect the (1/eps)^k cap");
        let qr = rat::rat_of(&q);
        for (ri_, pi) in r.iter().zip(&p) {
            assert!(
                (&qr * ri_ - rat::rat_of(pi)).abs() < eps,
                "each residue must stay below eps"
            );
        }
        for i in 0..k.saturating_sub(1) {
            if r[i] >= r[i + 1] {
                assert!(p[i] >= p[i + 1], "repair pass must keep p monotone with r");
            }
        }
    }
}

#[test]
fn pointed_floor_never_exceeds_the_span_relaxation_floor() {
    let mut rng = ChaCha8Rng::seed_from_u64(1107);
    let lim = limits();
    for _ in 0..100 {
        let n = 2;
        let cap = rrat(&mut rng, 0, 3);
        let mut rows = vec![
            Constraint::new(vec![Rational::one(), Rational::zero()], Rel::Ge, Rational::zero()),
            Constraint::new(vec![Rational::zero(), Rational::one()], Rel::Ge, Rational::zero()),
            Constraint::le(vec![Rational::one(), Rational::zero()], cap),
        ];
        if ri(&mut rng, 0, 1) == 1 {
            rows.push(Constraint::le(
                vec![Rational::one(), -Rational::one()],
                rat::rat(ri(&mut rng, 0, 2)),
            ));
        }
        let region = Polyhedron::new(n, rows).expect("consistent shapes");
        let s = SSpec::hull_of(region, &lim).expect("nonempty");
        let s0 = s.span_relaxation(&lim).expect("within caps");
        let alpha = nonzero_int_vec(&mut rng, n, 3);
        let beta = rrat(&mut rng, -6, 6);
        let fs = scg::floor_s(&s, &alpha, &beta, &lim).expect("within caps");
        let f0 = scg::floor_s(&s0, &alpha, &beta, &lim).expect("within caps");
        match (fs, f0) {
            (Strengthened::Finite { value: v, .. }, Strengthened::Finite { value: v0, .. }) => {
                assert!(v <= v0, "relaxing S can only raise the floor");
            }
            (Strengthened::EmptySide, _) => {}
            (Strengthened::Finite { .. }, Strengthened::EmptySide) => {
                panic!("a side holding a point of S must hold a point of its relaxation");
            }
        }
    }
}

#[test]
fn closures_are_sound_and_antitone_on_explicit_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(1108);
    let lim = limits();
    for _ in 0..60 {
        let n = ri(&mut rng, 1, 2) as usize;
        let count = ri(&mut rng, 2, 5);
        let points: Vec<Vec<Int>> = (0..count)
            .map(|_| (0..n).map(|_| rat::int(ri(&mut rng, -3, 3))).collect())
            .collect();
        let s = SSpec::explicit(points).expect("nonempty");
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
        let c1 = scg::bounded_closure(&p, &s, 1, false, &lim).expect("within caps");
        let c2 = scg::bounded_closure(&p, &s, 2, false, &lim).expect("within caps");
        assert!(c1.polyhedron.subset_of(&p).expect("within caps"));
        assert!(
            c2.polyhedron.subset_of(&c1.polyhedron).expect("within caps"),
            "a larger cut family can only tighten the closure"
        );
        let lo = vec![rat::int(-3); n];
        let hi = vec![rat::int(3); n];
        for z in lattice_points_in_box(&p, &lo, &hi, &lim).expect("small box") {
            if s.contains(&z) {
                assert!(c1.polyhedron.contains_int(&z), "closure must keep P ∩ S");
                assert!(c2.polyhedron.contains_int(&z), "closure must keep P ∩ S");
            }
        }
    }
}
