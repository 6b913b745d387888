//! Seeded property suites behind the `verify` subcommand. Each trial draws
//! from its own RNG stream, so trials are independent and a fixed seed
//! yields byte-identical reports for any worker count.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use scg_core::dominance::{self, Orientation, PointedContext};
use scg_core::mip::{self, MixedSSpec};
use scg_core::rat::{self, Int, Rational};
use scg_core::ratpoly::{Constraint, Limits, Polyhedron, Rel, UnimodularMap};
use scg_core::sets::{lattice_points_in_box, SSpec};
use scg_core::{mat, scg, transforms};

/// Outcome of one suite run; failures keep their trial index and message.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: u64,
    pub passed: u64,
    pub failures: Vec<(u64, String)>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type TrialFn = fn(&mut ChaCha8Rng, &Limits) -> Result<(), String>;

/// The suite ids accepted by the CLI, in display order.
pub const SUITES: [&str; 5] = ["lemma2.2", "lemma3.5", "lemma3.8", "lemma3.11", "thm5.1"];

fn trial_fn(suite: &str) -> Option<TrialFn> {
    match suite {
        "lemma2.2" => Some(commutation_trial),
        "lemma3.5" => Some(covering_reduction_trial),
        "lemma3.8" => Some(packing_reduction_trial),
        "lemma3.11" => Some(partition_trial),
        "thm5.1" => Some(projection_trial),
        _ => None,
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial + 1);
    rng
}

/// Runs a suite with a bounded worker count; results are merged by trial
/// index, so the report does not depend on the number of threads.
pub fn run_suite(
    suite: &str,
    trials: u64,
    seed: u64,
    threads: usize,
    limits: &Limits,
) -> Result<SuiteReport, String> {
    let trial = trial_fn(suite).ok_or_else(|| {
        format!("unknown suite `{suite}`; expected one of {}", SUITES.join(", "))
    })?;
    let workers = threads.max(1).min(trials.max(1) as usize);
    let mut results: Vec<(u64, Result<(), String>)> = if workers <= 1 {
        (0..trials)
            .map(|t| (t, trial(&mut trial_rng(seed, t), limits)))
            .collect()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let limits = *limits;
                    scope.spawn(move || {
                        let mut out = Vec::new();
                        let mut t = w as u64;
                        while t < trials {
                            out.push((t, trial(&mut trial_rng(seed, t), &limits)));
                            t += workers as u64;
                        }
                        out
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("suite worker panicked"))
                .collect()
        })
    };
    results.sort_by_key(|(t, _)| *t);
    let mut failures = Vec::new();
    for (t, r) in results {
        if let Err(msg) = r {
            failures.push((t, msg));
        }
    }
    Ok(SuiteReport {
        suite: suite.to_string(),
        trials,
        passed: trials - failures.len() as u64,
        failures,
    })
}

fn core<T>(r: scg_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ri(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    rng.gen_range(lo..=hi)
}

fn int(x: i64) -> Int {
    rat::int(x)
}

/// A rational in [0, hi] with denominator 1..=3.
fn small_rat(rng: &mut ChaCha8Rng, hi: i64) -> Rational {
    let den = ri(rng, 1, 3);
    let num = ri(rng, 0, hi * den);
    Rational::new(int(num), int(den))
}

fn axis_row(n: usize, j: usize, sign: i64) -> Vec<Rational> {
    let mut row = rat::zeros(n);
    row[j] = rat::rat(sign);
    row
}

/// 0 ≤ x_i rows for every coordinate plus x_i ≤ cap_i where given.
fn box_region(caps: &[Option<Rational>]) -> Polyhedron {
    let n = caps.len();
    let mut rows = Vec::new();
    for (j, cap) in caps.iter().enumerate() {
        rows.push(Constraint::new(axis_row(n, j, 1), Rel::Ge, Rational::zero()));
        if let Some(c) = cap {
            rows.push(Constraint::le(axis_row(n, j, 1), c.clone()));
        }
    }
    Polyhedron::new(n, rows).expect("well formed box")
}

/// Product of a few elementary integral operations: always unimodular.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> UnimodularMap {
    let mut u = mat::identity(n);
    for _ in 0..ri(rng, 1, 4) {
        match ri(rng, 0, 2) {
            0 => {
                let i = ri(rng, 0, n as i64 - 1) as usize;
                for c in u[i].iter_mut() {
                    *c = -c.clone();
                }
            }
            1 if n >= 2 => {
                let i = ri(rng, 0, n as i64 - 1) as usize;
                let j = (i + ri(rng, 1, n as i64 - 1) as usize) % n;
                u.swap(i, j);
            }
            _ if n >= 2 => {
                let i = ri(rng, 0, n as i64 - 1) as usize;
                let j = (i + ri(rng, 1, n as i64 - 1) as usize) % n;
                let c = int(*[-2, -1, 1, 2].get(ri(rng, 0, 3) as usize).expect("in range"));
                let source = u[j].clone();
                for (slot, s) in u[i].iter_mut().zip(&source) {
                    *slot += &c * s;
                }
            }
            _ => {}
        }
    }
    let v: Vec<Int> = (0..n).map(|_| int(ri(rng, -3, 3))).collect();
    UnimodularMap::new(u, v).expect("elementary operations preserve unimodularity")
}

/// A random pointed-hull set: nonnegative orthant in the trailing block,
/// capped box in the leading block, optionally one tilting row.
fn random_pointed_set(
    rng: &mut ChaCha8Rng,
    n: usize,
    n2: usize,
    limits: &Limits,
) -> Result<SSpec, String> {
    let n1 = n - n2;
    let mut caps: Vec<Option<Rational>> = Vec::with_capacity(n);
    for _ in 0..n1 {
        caps.push(Some(rat::rat(ri(rng, 0, 3))));
    }
    caps.extend(std::iter::repeat(None).take(n2));
    let mut region = box_region(&caps);
    if n2 == 2 && ri(rng, 0, 1) == 1 {
        // x_{n-2} ≤ x_{n-1} + d keeps the cone pointed but tilts one ray.
        let mut row = rat::zeros(n);
        row[n - 2] = rat::rat(1);
        row[n - 1] = rat::rat(-1);
        region = core(region.with_rows([Constraint::le(row, rat::rat(ri(rng, 0, 1)))]))?;
    }
    core(SSpec::hull_of(region, limits))
}

/// A bounded polyhedron inside conv(S): the hull intersected with rational
/// upper bounds, plus the integral box ceilings for lattice scans.
fn random_subpolytope(
    rng: &mut ChaCha8Rng,
    s: &SSpec,
) -> Result<(Polyhedron, Vec<Int>), String> {
    let n = s.dim();
    let mut rows = Vec::new();
    let mut ceilings = Vec::with_capacity(n);
    for j in 0..n {
        let u = small_rat(rng, 3);
        ceilings.push(rat::ceil_int(&u));
        rows.push(Constraint::le(axis_row(n, j, 1), u));
    }
    let p = core(s.hull().with_rows(rows))?;
    Ok((p, ceilings))
}

/// conv(P ∩ S) ⊆ C ⊆ P, checked on the lattice points of [0, hi].
fn check_sandwich(
    closure: &Polyhedron,
    p: &Polyhedron,
    s: &SSpec,
    hi: &[Int],
    limits: &Limits,
) -> Result<(), String> {
    if !core(closure.subset_of(p))? {
        return Err("closure is not contained in P".into());
    }
    let lo = vec![int(-3); p.dim()];
    for z in core(lattice_points_in_box(p, &lo, hi, limits))? {
        if s.contains(&z) && !closure.contains_int(&z) {
            return Err(format!(
                "point {} of P ∩ S violates the closure",
                crate::output::int_tuple(&z)
            ));
        }
    }
    Ok(())
}

/// Strengthening commutes with unimodular maps: the image of the closure
/// of (P, S) over a family equals the closure of the images over the
/// mapped family. Checked by mutual-containment LPs.
fn commutation_trial(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<(), String> {
    let n = ri(rng, 1, 3) as usize;
    let k = ri(rng, 1, 3) as u32;

    let s = if ri(rng, 0, 1) == 0 {
        let count = ri(rng, 1, 5);
        let points: Vec<Vec<Int>> = (0..count)
            .map(|_| (0..n).map(|_| int(ri(rng, -2, 2))).collect())
            .collect();
        core(SSpec::explicit(points))?
    } else {
        let n2 = ri(rng, 0, n as i64) as usize;
        random_pointed_set(rng, n, n2, limits)?
    };

    let (p, ceilings) = random_subpolytope(rng, &s)?;
    let tau = random_unimodular(rng, n);
    let family = scg::alpha_enumeration(n, k);
    let mapped_family: Vec<Vec<Int>> = family
        .iter()
        .map(|a| tau.apply_ineq(a, &Rational::zero()).0)
        .collect();

    let here = core(scg::closure_round(&p, &s, &family, false, limits))?;
    check_sandwich(&here.polyhedron, &p, &s, &ceilings, limits)?;

    let p_mapped = core(tau.apply_poly(&p))?;
    let s_mapped = core(transforms::apply_to_sspec(&tau, &s, limits))?;
    let there = core(scg::closure_round(&p_mapped, &s_mapped, &mapped_family, false, limits))?;

    let image = core(tau.apply_poly(&here.polyhedron))?;
    if !core(image.same_set(&there.polyhedron))? {
        return Err("mapped closure differs from the closure of the mapped problem".into());
    }
    Ok(())
}

/// Shared generator for the reduction suites: a covering or packing system
/// whose rows are tight at one integral point of S, with the first-row
/// multiplier inflated until some intercept exceeds M*.
fn reduction_trial(
    rng: &mut ChaCha8Rng,
    orientation: Orientation,
    limits: &Limits,
) -> Result<(), String> {
    let n = ri(rng, 2, 3) as usize;
    let n2 = ri(rng, 1, n as i64 - 1) as usize;
    let n1 = n - n2;
    let m = ri(rng, 2, 3) as usize;

    let caps: Vec<i64> = (0..n1).map(|_| ri(rng, 1, 3)).collect();
    let cap_rows: Vec<Option<Rational>> = caps
        .iter()
        .map(|&c| Some(rat::rat(c)))
        .chain(std::iter::repeat(None).take(n2))
        .collect();
    let s = core(SSpec::hull_of(box_region(&cap_rows), limits))?;
    let rays = s.generators().rays.to_vec();

    // Row 0 avoids the ray block entirely so its multiplier never feeds the
    // ray products; inflating it then drives intercepts, not supports.
    let mut a: Vec<Vec<Int>> = Vec::with_capacity(m);
    let mut row0: Vec<Int> = (0..n1).map(|_| int(ri(rng, 0, 3))).collect();
    row0[0] = int(ri(rng, 1, 3));
    row0.extend(std::iter::repeat(Int::zero()).take(n2));
    a.push(row0);
    for _ in 1..m {
        let row: Vec<Int> = (0..n)
            .map(|j| int(if j < n1 { ri(rng, 0, 2) } else { ri(rng, 0, 2) }))
            .collect();
        a.push(row);
    }
    if a[1..].iter().all(|row| row[n1..].iter().all(Int::is_zero)) {
        a[1][n1] = int(ri(rng, 1, 2));
    }

    let mut x_star: Vec<Int> = Vec::with_capacity(n);
    x_star.push(int(ri(rng, 1, caps[0])));
    for &c in &caps[1..] {
        x_star.push(int(ri(rng, 0, c)));
    }
    for _ in 0..n2 {
        x_star.push(int(ri(rng, 0, 2)));
    }
    let b: Vec<Int> = a.iter().map(|row| rat::dot_int(row, &x_star)).collect();

    let tail: Vec<Rational> = (1..m).map(|_| rat::rat(ri(rng, 1, 3))).collect();
    let ctx = core(PointedContext::new(a.clone(), b.clone(), n1, rays.clone(), orientation))?;
    let consts = dominance::constants(&ctx);

    // Smallest supported ray product of the tail multipliers; row 0 adds
    // nothing on the rays, so this is exact for every choice of λ₁.
    let mut tail_alpha = rat::zeros(n);
    for (i, lam) in tail.iter().enumerate() {
        for (slot, c) in tail_alpha.iter_mut().zip(&a[i + 1]) {
            *slot += lam * &rat::rat_of(c);
        }
    }
    let mut min_product: Option<Rational> = None;
    for r in &rays {
        let prod = rat::dot_mixed(r, &tail_alpha);
        if prod.is_positive() && min_product.as_ref().map_or(true, |m| &prod < m) {
            min_product = Some(prod);
        }
    }
    let min_product = min_product.ok_or("generator produced no supported ray")?;

    let tail_beta: Rational = tail
        .iter()
        .enumerate()
        .map(|(i, lam)| lam * &rat::rat_of(&b[i + 1]))
        .sum();
    let needed = (rat::rat_of(&consts.m_star) * &min_product - &tail_beta)
        / rat::rat_of(&b[0]);
    let lam0 = (rat::floor_int(&needed) + Int::one() + int(ri(rng, 0, 4))).max(Int::one());
    let mut lambda = vec![rat::rat_of(&lam0)];
    lambda.extend(tail);

    let alpha0 = core(ctx.alpha(&lambda))?;
    let beta0 = ctx.beta(&lambda);
    let m_star = rat::rat_of(&consts.m_star);
    if !dominance::intercepts(&alpha0, &beta0, &ctx)
        .iter()
        .any(|(_, ic)| *ic > m_star)
    {
        return Err("generator failed to inflate an intercept past M*".into());
    }

    let (mu, traces) = core(dominance::reduce_to_bounded(&lambda, &ctx, &s, limits))?;

    let norm: Rational = lambda.iter().sum();
    if Int::from(traces.len()) > rat::ceil_int(&norm) {
        return Err(format!("chain of {} steps exceeds the norm budget", traces.len()));
    }
    for (i, tr) in traces.iter().enumerate() {
        if !(tr.norm_ok && tr.pi_ok && tr.dominates_ok && tr.band_ok) {
            return Err(format!("step {} failed a check: {}", i + 1, tr.render()));
        }
    }
    let alpha_mu = core(ctx.alpha(&mu))?;
    let beta_mu = ctx.beta(&mu);
    if dominance::intercepts(&alpha_mu, &beta_mu, &ctx)
        .iter()
        .any(|(_, ic)| *ic > m_star)
    {
        return Err("final multiplier still has an intercept above M*".into());
    }
    if dominance::ray_support(&alpha_mu, &ctx) != dominance::ray_support(&alpha0, &ctx) {
        return Err("ray support changed along the chain".into());
    }
    Ok(())
}

fn covering_reduction_trial(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<(), String> {
    reduction_trial(rng, Orientation::Covering, limits)
}

fn packing_reduction_trial(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<(), String> {
    reduction_trial(rng, Orientation::Packing, limits)
}

/// The closure over all normals equals the span-relaxed closure intersected
/// with the closures over the two uniform-ray-sign families.
fn partition_trial(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<(), String> {
    let n = ri(rng, 2, 3) as usize;
    let n2 = ri(rng, 1, 2.min(n as i64 - 1)) as usize;
    let k = [1, 1, 2, 2, 2, 3][ri(rng, 0, 5) as usize] as u32;

    let s = random_pointed_set(rng, n, n2, limits)?;
    let rays = s.generators().rays.to_vec();
    if rays.is_empty() {
        return Err("generator produced a set without rays".into());
    }
    let (p, ceilings) = random_subpolytope(rng, &s)?;

    let family = scg::alpha_enumeration(n, k);
    let (plus, minus, _) = transforms::partition_by_ray_signs(&family, &rays);
    let s0 = core(s.span_relaxation(limits))?;

    let full = core(scg::closure_round(&p, &s, &family, false, limits))?;
    let relaxed = core(scg::closure_round(&p, &s0, &family, false, limits))?;
    let plus_part = core(scg::closure_round(&p, &s, &plus, false, limits))?;
    let minus_part = core(scg::closure_round(&p, &s, &minus, false, limits))?;

    let assembled = core(
        core(relaxed.polyhedron.intersection(&plus_part.polyhedron))?
            .intersection(&minus_part.polyhedron),
    )?;
    if !core(full.polyhedron.same_set(&assembled))? {
        return Err("partitioned closures do not reassemble the full closure".into());
    }

    check_sandwich(&full.polyhedron, &p, &s, &ceilings, limits)?;

    // The bounded family grows with K, so the closure shrinks.
    if k >= 2 {
        let smaller = core(scg::bounded_closure(&p, &s, k - 1, false, limits))?;
        if !core(full.polyhedron.subset_of(&smaller.polyhedron))? {
            return Err("closure is not antitone in the family bound".into());
        }
    }
    Ok(())
}

/// Mixed rounds agree between the lifted projected closure and the direct
/// per-normal computation; the round itself asserts the identity, and the
/// trial adds containment probes.
fn projection_trial(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<(), String> {
    let n = ri(rng, 1, 2) as usize;
    let l = ri(rng, 1, 2) as usize;
    let dim = n + l;
    let k = ri(rng, 1, 3) as u32;

    let caps: Vec<i64> = (0..dim).map(|_| ri(rng, 1, 3)).collect();
    let cap_rows: Vec<Option<Rational>> = caps.iter().map(|&c| Some(rat::rat(c))).collect();
    let mut region = box_region(&cap_rows);
    let anchor: Vec<Int> = caps.iter().map(|&c| int(ri(rng, 0, c))).collect();
    for _ in 0..ri(rng, 0, 2) {
        let coeffs: Vec<Rational> = (0..dim).map(|_| rat::rat(ri(rng, -2, 2))).collect();
        let rhs = rat::dot_mixed(&anchor, &coeffs) + rat::rat(ri(rng, 0, 2));
        region = core(region.with_rows([Constraint::le(coeffs, rhs)]))?;
    }
    let s = core(MixedSSpec::new(region.clone(), n))?;

    let mut p_rows = Vec::new();
    for (j, a) in anchor.iter().enumerate() {
        let bound = rat::rat_of(a) + small_rat(rng, 1);
        p_rows.push(Constraint::le(axis_row(dim, j, 1), bound));
    }
    let p = core(region.with_rows(p_rows))?;

    let round = core(mip::mixed_closure_round(&p, &s, k, false, limits))?;
    if !core(round.polyhedron.subset_of(&p))? {
        return Err("mixed closure is not contained in P".into());
    }
    let anchor_rat = rat::int_to_rat_vec(&anchor);
    if !round.polyhedron.contains(&anchor_rat) {
        return Err("mixed closure cut off a feasible mixed-integer point".into());
    }
    Ok(())
}
