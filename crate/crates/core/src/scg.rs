//! Set-aware strengthening of supporting inequalities. For a lattice-closed
//! set S and an inequality αx ≤ β (α integral) that is valid and tight for a
//! polyhedron P ⊆ conv(S), the strengthened right-hand side is
//! max{αz : z ∈ S, αz ≤ β}; when no point of S satisfies the inequality the
//! cut degenerates to 0x ≤ -1. Closure rounds strengthen a whole family of
//! normals and intersect the results with P, keeping one certificate per cut.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rat::{self, Int, Rational};
use crate::ratpoly::{fm_project, lp, Constraint, Limits, Polyhedron, Rel};
use crate::sets::{lattice_points_in_box, SSpec};
use crate::transforms::map_lineality;

/// Right-hand side of a cut after strengthening over S. The finite case
/// carries a point of S attaining the value; the empty case means no point
/// of S satisfies αz ≤ β and the cut reads 0x ≤ -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strengthened {
    Finite { value: Int, witness: Vec<Int> },
    EmptySide,
}

impl Strengthened {
    pub fn value(&self) -> Option<&Int> {
        match self {
            Strengthened::Finite { value, .. } => Some(value),
            Strengthened::EmptySide => None,
        }
    }

    pub fn witness(&self) -> Option<&[Int]> {
        match self {
            Strengthened::Finite { witness, .. } => Some(witness),
            Strengthened::EmptySide => None,
        }
    }
}

/// A strengthened inequality: αx ≤ β supports P, the strengthened side is
/// what survives over S.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub alpha: Vec<Int>,
    pub beta: Rational,
    pub strengthened: Strengthened,
}

impl Cut {
    /// The cut as a constraint row: αx ≤ value, or 0x ≤ -1 for the empty side.
    pub fn constraint(&self) -> Constraint {
        match &self.strengthened {
            Strengthened::Finite { value, .. } => {
                Constraint::le(rat::int_to_rat_vec(&self.alpha), rat::rat_of(value))
            }
            Strengthened::EmptySide => Constraint::le(rat::zeros(self.alpha.len()), rat::rat(-1)),
        }
    }

    /// Whether strengthening moved the right-hand side strictly below β.
    pub fn improves(&self) -> bool {
        match &self.strengthened {
            Strengthened::Finite { value, .. } => rat::rat_of(value) < self.beta,
            Strengthened::EmptySide => true,
        }
    }
}

/// A cut together with the multiplier vector proving αx ≤ β is supported:
/// λ ≥ 0 with λA = α and λb = β over the ≤-form rows of P.
#[derive(Debug, Clone, PartialEq)]
pub struct CutCertificate {
    pub cut: Cut,
    pub lambda: Vec<Rational>,
}

/// One strengthening round: the intersection of P with every produced cut,
/// canonicalized and with redundant rows removed, plus all certificates.
#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub polyhedron: Polyhedron,
    pub certificates: Vec<CutCertificate>,
}

/// max{αz : z ∈ S, αz ≤ β}, exactly. The value is an integer since α and z
/// are; the witness is a point of S attaining it.
pub fn floor_s(
    s: &SSpec,
    alpha: &[Int],
    beta: &Rational,
    limits: &Limits,
) -> Result<Strengthened> {
    if alpha.len() != s.dim() {
        return Err(Error::Shape("normal of wrong dimension".into()));
    }
    if rat::is_zero_vec_int(alpha) {
        return Ok(if beta.is_negative() {
            Strengthened::EmptySide
        } else {
            Strengthened::Finite {
                value: Int::zero(),
                witness: s.generators().vertices[0].clone(),
            }
        });
    }
    if let Some(points) = s.points() {
        return Ok(floor_explicit(points, alpha, beta));
    }
    if s.is_pointed() {
        floor_pointed(s, alpha, beta, limits)
    } else {
        floor_with_lineality(s, alpha, beta, limits)
    }
}

/// min{αz : z ∈ S, αz ≥ β}: the mirror of [`floor_s`] under negation.
pub fn ceil_s(s: &SSpec, alpha: &[Int], beta: &Rational, limits: &Limits) -> Result<Strengthened> {
    let neg: Vec<Int> = alpha.iter().map(|a| -a).collect();
    Ok(match floor_s(s, &neg, &(-beta), limits)? {
        Strengthened::Finite { value, witness } => Strengthened::Finite {
            value: -value,
            witness,
        },
        Strengthened::EmptySide => Strengthened::EmptySide,
    })
}

fn floor_explicit(points: &[Vec<Int>], alpha: &[Int], beta: &Rational) -> Strengthened {
    let mut best: Option<(Int, Vec<Int>)> = None;
    for z in points {
        let v = rat::dot_int(alpha, z);
        if rat::rat_of(&v) > *beta {
            continue;
        }
        if best.as_ref().map_or(true, |(b, _)| v > *b) {
            best = Some((v, z.clone()));
        }
    }
    match best {
        Some((value, witness)) => Strengthened::Finite { value, witness },
        None => Strengthened::EmptySide,
    }
}

/// Pointed case. Every point of S splits as q + Σ kⱼrⱼ with k integral
/// nonnegative and q a lattice point of conv(S) inside the vertex box
/// fattened by one cell of each ray: subtracting the integer parts of the
/// conic weights from a representation leaves fractional weights in [0,1).
/// With ray products pⱼ = αrⱼ of a single sign, the best k for each base q
/// is an exact coin problem over the nonzero |pⱼ|, so the work is
/// independent of how far β sits from the bases. Mixed signs reduce to the
/// span relaxation of S instead, because a zero-product positive combination
/// of the rays moves any witness back into conv(S) without changing αz.
fn floor_pointed(
    s: &SSpec,
    alpha: &[Int],
    beta: &Rational,
    limits: &Limits,
) -> Result<Strengthened> {
    let gens = s.generators();
    let products: Vec<Int> = gens.rays.iter().map(|r| rat::dot_int(alpha, r)).collect();
    let has_plus = products.iter().any(|p| p.is_positive());
    let has_minus = products.iter().any(|p| p.is_negative());

    if has_plus && has_minus {
        let relaxed = s.span_relaxation(limits)?;
        if relaxed.is_pointed() {
            return Err(Error::Internal("span relaxation stayed pointed".into()));
        }
        return match floor_with_lineality(&relaxed, alpha, beta, limits)? {
            Strengthened::EmptySide => Ok(Strengthened::EmptySide),
            Strengthened::Finite { value, witness } => {
                let lifted = lift_mixed_witness(s, alpha, &products, &value, &witness)?;
                Ok(Strengthened::Finite {
                    value,
                    witness: lifted,
                })
            }
        };
    }

    let ones = vec![Rational::one(); gens.rays.len()];
    let bases = capped_candidates(s, &ones, limits)?;
    let bound = rat::floor_int(beta);
    let active: Vec<(usize, Int)> = products
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(j, p)| (j, p.abs()))
        .collect();
    let coins: Vec<Int> = active.iter().map(|(_, c)| c.clone()).collect();

    let mut best: Option<(Int, Vec<Int>)> = None;
    for q in &bases {
        let vq = rat::dot_int(alpha, q);
        let (value, counts) = if has_minus {
            let need = &vq - &bound;
            let (cost, counts) = knap_min_ge(&coins, &need, limits)?;
            (vq - cost, counts)
        } else {
            let slack = &bound - &vq;
            if slack.is_negative() {
                continue;
            }
            let (gain, counts) = knap_max_le(&coins, &slack, limits)?;
            (vq + gain, counts)
        };
        if best.as_ref().map_or(true, |(b, _)| value > *b) {
            let mut z = q.clone();
            for ((j, _), k) in active.iter().zip(&counts) {
                for (zc, rc) in z.iter_mut().zip(&gens.rays[*j]) {
                    *zc += k * rc;
                }
            }
            best = Some((value, z));
        }
    }
    match best {
        Some((value, witness)) => {
            if !s.contains(&witness) || rat::dot_int(alpha, &witness) != value || value > bound {
                return Err(Error::Internal("pointed witness failed verification".into()));
            }
            Ok(Strengthened::Finite { value, witness })
        }
        None => Ok(Strengthened::EmptySide),
    }
}

/// Largest Σkⱼcⱼ ≤ cap over integral k ≥ 0 for positive coins, with an
/// achieving count vector. All sums are multiples of g = gcd(c); when the
/// best multiple clears a two-coin Sylvester bound it is attained and
/// rebuilt in O(1), otherwise a bounded two-coin sweep or a table walk
/// finishes exactly.
fn knap_max_le(coins: &[Int], cap: &Int, limits: &Limits) -> Result<(Int, Vec<Int>)> {
    debug_assert!(!cap.is_negative());
    if coins.is_empty() {
        return Ok((Int::zero(), Vec::new()));
    }
    if coins.len() == 1 {
        let k = cap.div_floor(&coins[0]);
        return Ok((&k * &coins[0], vec![k]));
    }
    let g = coins.iter().fold(Int::zero(), |acc, c| acc.gcd(c));
    let target = &g * cap.div_floor(&g);
    if let Some(counts) = sylvester(coins, &g, &target) {
        return Ok((target, counts));
    }
    if coins.len() == 2 {
        return knap_two_max(coins, cap, limits);
    }
    knap_table(coins, cap, limits, false)
}

/// Smallest Σkⱼcⱼ ≥ need, mirroring [`knap_max_le`]. A nonpositive need
/// costs nothing.
fn knap_min_ge(coins: &[Int], need: &Int, limits: &Limits) -> Result<(Int, Vec<Int>)> {
    if !need.is_positive() {
        return Ok((Int::zero(), vec![Int::zero(); coins.len()]));
    }
    if coins.is_empty() {
        return Err(Error::Internal("no coins to reach a positive need".into()));
    }
    if coins.len() == 1 {
        let k = need.div_ceil(&coins[0]);
        return Ok((&k * &coins[0], vec![k]));
    }
    let g = coins.iter().fold(Int::zero(), |acc, c| acc.gcd(c));
    let target = &g * need.div_ceil(&g);
    if let Some(counts) = sylvester(coins, &g, &target) {
        return Ok((target, counts));
    }
    if coins.len() == 2 {
        return knap_two_min(coins, need, limits);
    }
    knap_table(coins, need, limits, true)
}

/// Writes target = Σkⱼcⱼ with k ≥ 0 through a coin pair whose gcd is g,
/// provided target/g clears the pair's Sylvester bound (a'-1)(b'-1). The
/// smallest count of the first coin is taken, which the bound guarantees
/// leaves the second count nonnegative.
fn sylvester(coins: &[Int], g: &Int, target: &Int) -> Option<Vec<Int>> {
    let n = target / g;
    for i in 0..coins.len() {
        for j in i + 1..coins.len() {
            if coins[i].gcd(&coins[j]) != *g {
                continue;
            }
            let a = &coins[i] / g;
            let b = &coins[j] / g;
            if (&a - 1) * (&b - 1) > n {
                continue;
            }
            let inv = a.extended_gcd(&b).x.mod_floor(&b);
            let ki = (n.mod_floor(&b) * inv).mod_floor(&b);
            let kj = (&n - &ki * &a) / &b;
            debug_assert!(!kj.is_negative());
            let mut counts = vec![Int::zero(); coins.len()];
            counts[i] = ki;
            counts[j] = kj;
            return Some(counts);
        }
    }
    None
}

/// Exchanging a/g copies of the larger coin for b/g copies of the smaller
/// preserves the sum, so some optimum uses fewer than (smaller)/g copies of
/// the larger coin; that count is swept.
fn knap_two_max(coins: &[Int], cap: &Int, limits: &Limits) -> Result<(Int, Vec<Int>)> {
    let (small, large) = if coins[0] <= coins[1] { (0, 1) } else { (1, 0) };
    let g = coins[0].gcd(&coins[1]);
    let normalized: Int = &coins[small] / &g - 1;
    let sweep = normalized.min(cap.div_floor(&coins[large]));
    check_sweep(&sweep, limits)?;
    let mut best: Option<(Int, Int, Int)> = None;
    let mut k_large = Int::zero();
    while k_large <= sweep {
        let rem = cap - &k_large * &coins[large];
        let k_small = rem.div_floor(&coins[small]);
        let total = &k_large * &coins[large] + &k_small * &coins[small];
        if best.as_ref().map_or(true, |(b, _, _)| total > *b) {
            best = Some((total, k_large.clone(), k_small));
        }
        k_large += 1;
    }
    let (total, k_large, k_small) = best.expect("sweep visits zero");
    let mut counts = vec![Int::zero(), Int::zero()];
    counts[large] = k_large;
    counts[small] = k_small;
    Ok((total, counts))
}

fn knap_two_min(coins: &[Int], need: &Int, limits: &Limits) -> Result<(Int, Vec<Int>)> {
    let (small, large) = if coins[0] <= coins[1] { (0, 1) } else { (1, 0) };
    let g = coins[0].gcd(&coins[1]);
    let normalized: Int = &coins[small] / &g - 1;
    let sweep = normalized.min(need.div_ceil(&coins[large]));
    check_sweep(&sweep, limits)?;
    let mut best: Option<(Int, Int, Int)> = None;
    let mut k_large = Int::zero();
    while k_large <= sweep {
        let rem = need - &k_large * &coins[large];
        let k_small = if rem.is_positive() {
            rem.div_ceil(&coins[small])
        } else {
            Int::zero()
        };
        let total = &k_large * &coins[large] + &k_small * &coins[small];
        if best.as_ref().map_or(true, |(b, _, _)| total < *b) {
            best = Some((total, k_large.clone(), k_small));
        }
        k_large += 1;
    }
    let (total, k_large, k_small) = best.expect("sweep visits zero");
    let mut counts = vec![Int::zero(), Int::zero()];
    counts[large] = k_large;
    counts[small] = k_small;
    Ok((total, counts))
}

fn check_sweep(sweep: &Int, limits: &Limits) -> Result<()> {
    if *sweep > Int::from(limits.max_enum) {
        return Err(Error::BoxTooLarge {
            estimate: sweep.to_string(),
            cap: limits.max_enum,
        });
    }
    Ok(())
}

/// Reachable-sum table up to the bound (the target for the max problem,
/// target plus the largest coin for the min one), with parent links for a
/// deterministic count reconstruction.
fn knap_table(coins: &[Int], target: &Int, limits: &Limits, above: bool) -> Result<(Int, Vec<Int>)> {
    let spread = if above {
        target + coins.iter().max().expect("nonempty")
    } else {
        target.clone()
    };
    let spread_u = spread
        .to_u64()
        .filter(|&v| v <= limits.max_enum)
        .ok_or_else(|| Error::BoxTooLarge {
            estimate: spread.to_string(),
            cap: limits.max_enum,
        })? as usize;
    let small: Vec<usize> = coins.iter().map(|c| c.to_u64().unwrap_or(u64::MAX) as usize).collect();
    let mut parent: Vec<Option<usize>> = vec![None; spread_u + 1];
    let mut reach = vec![false; spread_u + 1];
    reach[0] = true;
    for s in 1..=spread_u {
        for (ci, &c) in small.iter().enumerate() {
            if c <= s && reach[s - c] {
                reach[s] = true;
                parent[s] = Some(ci);
                break;
            }
        }
    }
    let target_u = target.to_u64().expect("within spread") as usize;
    let found = if above {
        (target_u..=spread_u).find(|&s| reach[s])
    } else {
        (0..=target_u).rev().find(|&s| reach[s])
    };
    let mut at = found.ok_or_else(|| Error::Internal("coin table missed every sum".into()))?;
    let value = Int::from(at as u64);
    let mut counts = vec![Int::zero(); coins.len()];
    while at > 0 {
        let ci = parent[at].expect("reachable");
        counts[ci] += 1;
        at -= small[ci];
    }
    Ok((value, counts))
}

/// Lineality case. A unimodular change of coordinates sends the lineality
/// span to the trailing coordinates, where τ(S) factors as T × Z^l with T
/// pointed. Writing the transformed normal as (φ, ψ): if ψ = 0 the problem
/// is the pointed one over T; otherwise ψ sweeps whole residue classes
/// modulo g = gcd(ψ), so the value is max over u ∈ T of φu + g⌊(β - φu)/g⌋
/// and only finitely many u, capped per ray by the residue period, matter.
fn floor_with_lineality(
    s: &SSpec,
    alpha: &[Int],
    beta: &Rational,
    limits: &Limits,
) -> Result<Strengthened> {
    let n = s.dim();
    let lineality = &s.generators().lineality;
    let n_free = lineality.len();
    let n1 = n - n_free;
    let tau = map_lineality(lineality, n)?;
    let inv = tau.inverse();
    let (alpha_t, beta_t) = tau.apply_ineq(alpha, beta);
    let offset = rat::dot_int(&alpha_t, tau.shift());
    let phi = &alpha_t[..n1];
    let psi = &alpha_t[n1..];

    let finish = |value_t: Int, y: Vec<Int>| -> Result<Strengthened> {
        let z = inv.apply_int(&y);
        let value = value_t - &offset;
        if !s.contains(&z) || rat::dot_int(alpha, &z) != value || rat::rat_of(&value) > *beta {
            return Err(Error::Internal("lineality witness failed verification".into()));
        }
        Ok(Strengthened::Finite { value, witness: z })
    };

    if psi.iter().all(|c| c.is_zero()) {
        let t_c = pointed_part(s, &tau, n1, limits)?;
        return match floor_pointed(&t_c, phi, &beta_t, limits)? {
            Strengthened::EmptySide => Ok(Strengthened::EmptySide),
            Strengthened::Finite { value, witness } => {
                let mut y = witness;
                y.extend(std::iter::repeat(Int::zero()).take(n_free));
                finish(value, y)
            }
        };
    }

    let (g, bezout) = bezout_combination(psi);
    debug_assert!(g.is_positive());

    if n1 == 0 {
        let q = rat::floor_int(&(&beta_t / rat::rat_of(&g)));
        let value_t = &g * &q;
        let y: Vec<Int> = bezout.iter().map(|c| c * &q).collect();
        return finish(value_t, y);
    }

    let t_c = pointed_part(s, &tau, n1, limits)?;
    // One period of each ray covers every residue of φu modulo g.
    let caps: Vec<Rational> = t_c
        .generators()
        .rays
        .iter()
        .map(|r| {
            let p = rat::dot_int(phi, r);
            rat::rat_of(&(&g / g.gcd(&p)))
        })
        .collect();
    let cands = capped_candidates(&t_c, &caps, limits)?;
    let mut best: Option<(Int, Int, Vec<Int>)> = None;
    for u in &cands {
        let pu = rat::dot_int(phi, u);
        let q = rat::floor_int(&((&beta_t - rat::rat_of(&pu)) / rat::rat_of(&g)));
        let value = &pu + &g * &q;
        if best.as_ref().map_or(true, |(b, _, _)| value > *b) {
            best = Some((value, q, u.clone()));
        }
    }
    let (value_t, q, u) = best.ok_or_else(|| Error::Internal("residue scan found no point".into()))?;
    let mut y = u;
    y.extend(bezout.iter().map(|c| c * &q));
    finish(value_t, y)
}

/// τ(S) restricted to the leading coordinates, as a pointed set.
fn pointed_part(s: &SSpec, tau: &crate::ratpoly::UnimodularMap, n1: usize, limits: &Limits) -> Result<SSpec> {
    let r = s.region().ok_or_else(|| {
        Error::Internal("lineality on an explicit set".into())
    })?;
    let mapped = tau.apply_poly(r)?;
    let keep: Vec<usize> = (0..n1).collect();
    let t_c = SSpec::hull_of(fm_project(&mapped, &keep)?, limits)?;
    if !t_c.is_pointed() {
        return Err(Error::Internal("pointed part kept lineality".into()));
    }
    Ok(t_c)
}

/// Lattice points of S inside the vertex box fattened by capⱼ cells of each
/// ray, lexicographically sorted.
fn capped_candidates(s: &SSpec, caps: &[Rational], limits: &Limits) -> Result<Vec<Vec<Int>>> {
    let n = s.dim();
    let gens = s.generators();
    debug_assert_eq!(caps.len(), gens.rays.len());
    let mut lo = vec![Int::zero(); n];
    let mut hi = vec![Int::zero(); n];
    for k in 0..n {
        lo[k] = gens
            .vertices
            .iter()
            .map(|v| v[k].clone())
            .min()
            .expect("nonempty");
        hi[k] = gens
            .vertices
            .iter()
            .map(|v| v[k].clone())
            .max()
            .expect("nonempty");
        for (j, ray) in gens.rays.iter().enumerate() {
            let reach = &caps[j] * rat::rat_of(&ray[k]);
            if reach.is_positive() {
                hi[k] += rat::ceil_int(&reach);
            } else {
                lo[k] += rat::floor_int(&reach);
            }
        }
    }
    let r = s.region().ok_or_else(|| {
        Error::Internal("capped scan needs a hull-kind set".into())
    })?;
    lattice_points_in_box(r, &lo, &hi, limits)
}

/// Moves a witness from the span relaxation of S back into S along the
/// zero-product direction c = Σ wⱼrⱼ with wⱼ > 0 and αc = 0. Adding enough
/// copies of c makes every ray weight of the representation nonnegative.
fn lift_mixed_witness(
    s: &SSpec,
    alpha: &[Int],
    products: &[Int],
    value: &Int,
    z0: &[Int],
) -> Result<Vec<Int>> {
    let gens = s.generators();
    let plus_sum: Int = products.iter().filter(|p| p.is_positive()).sum();
    let minus_sum: Int = products
        .iter()
        .filter(|p| p.is_negative())
        .map(|p| -p)
        .sum();
    let weights: Vec<Int> = products
        .iter()
        .map(|p| match rat::sign_of(&rat::rat_of(p)) {
            num_bigint::Sign::Plus => minus_sum.clone(),
            num_bigint::Sign::Minus => plus_sum.clone(),
            num_bigint::Sign::NoSign => Int::one(),
        })
        .collect();
    let n = s.dim();
    let mut c = rat::zeros_int(n);
    for (w, ray) in weights.iter().zip(&gens.rays) {
        for k in 0..n {
            c[k] += w * &ray[k];
        }
    }
    debug_assert!(rat::dot_int(alpha, &c).is_zero());

    // One representation z0 = Σσv + Σνr with σ a convex weighting, ν free.
    let (nv, nr) = (gens.vertices.len(), gens.rays.len());
    let vars = nv + nr;
    let mut rows: Vec<Constraint> = Vec::new();
    for k in 0..n {
        let mut row = rat::zeros(vars);
        for (i, v) in gens.vertices.iter().enumerate() {
            row[i] = rat::rat_of(&v[k]);
        }
        for (j, ray) in gens.rays.iter().enumerate() {
            row[nv + j] = rat::rat_of(&ray[k]);
        }
        rows.push(Constraint::new(row, Rel::Eq, rat::rat_of(&z0[k])));
    }
    let mut ones = rat::zeros(vars);
    for slot in ones.iter_mut().take(nv) {
        *slot = Rational::one();
    }
    rows.push(Constraint::new(ones, Rel::Eq, Rational::one()));
    for i in 0..nv {
        let mut row = rat::zeros(vars);
        row[i] = -Rational::one();
        rows.push(Constraint::le(row, Rational::zero()));
    }
    let rep = Polyhedron::new(vars, rows)?;
    let point = match lp::maximize(&rep, &rat::zeros(vars))? {
        lp::LpResult::Optimal(o) => o.point,
        _ => return Err(Error::Internal("relaxed witness has no representation".into())),
    };

    let mut steps = Int::zero();
    for (j, w) in weights.iter().enumerate() {
        let nu = &point[nv + j];
        if nu.is_negative() {
            let need = rat::ceil_int(&(-nu / rat::rat_of(w)));
            steps = steps.max(need);
        }
    }
    let z: Vec<Int> = z0
        .iter()
        .zip(&c)
        .map(|(a, ck)| a + &steps * ck)
        .collect();
    if !s.contains(&z) || rat::dot_int(alpha, &z) != *value {
        return Err(Error::Internal("lifted witness failed verification".into()));
    }
    Ok(z)
}

/// Integer combination of ψ summing to gcd(ψ) > 0.
fn bezout_combination(psi: &[Int]) -> (Int, Vec<Int>) {
    let mut g = Int::zero();
    let mut coeffs = rat::zeros_int(psi.len());
    for (i, p) in psi.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = p.abs();
            coeffs[i] = if p.is_negative() { -Int::one() } else { Int::one() };
            continue;
        }
        let eg = g.extended_gcd(p);
        for c in coeffs.iter_mut() {
            *c *= &eg.x;
        }
        coeffs[i] = eg.y;
        g = eg.gcd;
    }
    if g.is_negative() {
        g = -g;
        for c in coeffs.iter_mut() {
            *c = -c.clone();
        }
    }
    debug_assert_eq!(rat::dot_int(psi, &coeffs), g);
    (g, coeffs)
}

/// Multipliers proving αx ≤ β lies in the support cone of P: λ ≥ 0 over the
/// ≤-form rows with λA = α and λb = β = max{αx : x ∈ P}.
pub fn check_pi_membership(
    p: &Polyhedron,
    alpha: &[Rational],
    beta: &Rational,
) -> Result<Vec<Rational>> {
    if alpha.len() != p.dim() {
        return Err(Error::Shape("normal of wrong dimension".into()));
    }
    if !alpha.iter().all(rat::is_integral) {
        return Err(Error::NotIntegral);
    }
    match lp::maximize(p, alpha)? {
        lp::LpResult::Optimal(o) => match beta.cmp(&o.value) {
            Ordering::Less => Err(Error::NotValid {
                rhs: rat::fmt_rat(beta),
                max: rat::fmt_rat(&o.value),
            }),
            Ordering::Greater => Err(Error::NotSupporting {
                rhs: rat::fmt_rat(beta),
                max: rat::fmt_rat(&o.value),
            }),
            Ordering::Equal => Ok(o.dual),
        },
        lp::LpResult::Unbounded(_) => Err(Error::Unbounded),
        lp::LpResult::Infeasible(_) => Err(Error::EmptySet),
    }
}

/// The strengthened cut for one normal: β is the exact maximum of αx over P,
/// λ the certifying multipliers, and the right-hand side is tightened over S.
/// With `check_hull` set, P ⊆ conv(S) is verified first. Empty P returns the
/// canonical cut 0x ≤ -1 with its infeasibility multipliers.
pub fn scg_cut(
    p: &Polyhedron,
    s: &SSpec,
    alpha: &[Int],
    check_hull: bool,
    limits: &Limits,
) -> Result<CutCertificate> {
    if p.dim() != s.dim() || alpha.len() != p.dim() {
        return Err(Error::Shape("dimension mismatch".into()));
    }
    if p.is_empty() {
        return empty_cut_certificate(p);
    }
    if check_hull && !p.subset_of(s.hull())? {
        return Err(Error::NotInHull);
    }
    let obj = rat::int_to_rat_vec(alpha);
    match lp::maximize(p, &obj)? {
        lp::LpResult::Optimal(o) => {
            let strengthened = floor_s(s, alpha, &o.value, limits)?;
            Ok(CutCertificate {
                cut: Cut {
                    alpha: alpha.to_vec(),
                    beta: o.value,
                    strengthened,
                },
                lambda: o.dual,
            })
        }
        lp::LpResult::Unbounded(_) => Err(Error::Unbounded),
        lp::LpResult::Infeasible(_) => empty_cut_certificate(p),
    }
}

/// 0x ≤ -1 with multipliers λ ≥ 0, λA = 0, λb = -1 from the infeasibility
/// certificate of P.
pub fn empty_cut_certificate(p: &Polyhedron) -> Result<CutCertificate> {
    let n = p.dim();
    let farkas = match lp::maximize(p, &rat::zeros(n))? {
        lp::LpResult::Infeasible(f) => f,
        _ => return Err(Error::Internal("empty polyhedron maximized".into())),
    };
    let (_, b) = p.to_le_form();
    let yb = rat::dot(&farkas.multipliers, &b);
    debug_assert!(yb.is_negative());
    let scale = -Rational::one() / yb;
    let lambda = rat::scale_vec(&scale, &farkas.multipliers);
    Ok(CutCertificate {
        cut: Cut {
            alpha: rat::zeros_int(n),
            beta: rat::rat(-1),
            strengthened: Strengthened::EmptySide,
        },
        lambda,
    })
}

/// One closure round over an explicit family of normals. The family is
/// deduplicated and sorted; zero normals are dropped; an unbounded normal is
/// an error. `check_hull` verifies P ⊆ conv(S) once up front.
pub fn closure_round(
    p: &Polyhedron,
    s: &SSpec,
    alphas: &[Vec<Int>],
    check_hull: bool,
    limits: &Limits,
) -> Result<ClosureResult> {
    if p.dim() != s.dim() {
        return Err(Error::Shape("dimension mismatch".into()));
    }
    if p.is_empty() {
        return assemble_closure(p, vec![empty_cut_certificate(p)?]);
    }
    if check_hull && !p.subset_of(s.hull())? {
        return Err(Error::NotInHull);
    }
    let mut family: Vec<Vec<Int>> = alphas
        .iter()
        .filter(|a| !rat::is_zero_vec_int(a))
        .cloned()
        .collect();
    family.sort();
    family.dedup();
    let mut certificates = Vec::with_capacity(family.len());
    for alpha in &family {
        certificates.push(scg_cut(p, s, alpha, false, limits)?);
    }
    assemble_closure(p, certificates)
}

/// Closure over every nonzero integral normal with ‖α‖∞ ≤ k, in graded
/// lexicographic order. Normals unbounded over P contribute no cut.
pub fn bounded_closure(
    p: &Polyhedron,
    s: &SSpec,
    k: u32,
    check_hull: bool,
    limits: &Limits,
) -> Result<ClosureResult> {
    if p.dim() != s.dim() {
        return Err(Error::Shape("dimension mismatch".into()));
    }
    if p.is_empty() {
        return assemble_closure(p, vec![empty_cut_certificate(p)?]);
    }
    if check_hull && !p.subset_of(s.hull())? {
        return Err(Error::NotInHull);
    }
    let mut certificates = Vec::new();
    for alpha in alpha_enumeration(p.dim(), k) {
        let obj = rat::int_to_rat_vec(&alpha);
        match lp::maximize(p, &obj)? {
            lp::LpResult::Optimal(o) => {
                let strengthened = floor_s(s, &alpha, &o.value, limits)?;
                certificates.push(CutCertificate {
                    cut: Cut {
                        alpha,
                        beta: o.value,
                        strengthened,
                    },
                    lambda: o.dual,
                });
            }
            lp::LpResult::Unbounded(_) => continue,
            lp::LpResult::Infeasible(_) => {
                return Err(Error::Internal("nonempty polyhedron reported infeasible".into()))
            }
        }
    }
    assemble_closure(p, certificates)
}

/// Intersects P with every improving cut among the certificates; an
/// empty-side certificate collapses the result to the canonical empty
/// polyhedron. This is the final step of every closure round.
pub fn assemble_closure(p: &Polyhedron, certificates: Vec<CutCertificate>) -> Result<ClosureResult> {
    let n = p.dim();
    let empty_side = certificates
        .iter()
        .any(|c| c.cut.strengthened == Strengthened::EmptySide);
    let polyhedron = if empty_side {
        Polyhedron::empty(n)
    } else {
        let rows: Vec<Constraint> = certificates
            .iter()
            .filter(|c| c.cut.improves())
            .map(|c| c.cut.constraint())
            .collect();
        let tightened = p.with_rows(rows)?.irredundant()?;
        if tightened.is_empty() {
            Polyhedron::empty(n)
        } else {
            tightened
        }
    };
    Ok(ClosureResult {
        polyhedron,
        certificates,
    })
}

/// All nonzero α ∈ Zⁿ with ‖α‖∞ ≤ k: grade g = 1..k outermost, within a
/// grade the box [-g, g]ⁿ in lexicographic order restricted to ‖α‖∞ = g.
pub fn alpha_enumeration(n: usize, k: u32) -> Vec<Vec<Int>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for g in 1..=i64::from(k) {
        let mut cur = vec![-g; n];
        loop {
            if cur.iter().any(|&c| c.abs() == g) {
                out.push(cur.iter().map(|&c| rat::int(c)).collect());
            }
            let mut pos = n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                cur[pos] += 1;
                if cur[pos] <= g {
                    break;
                }
                cur[pos] = -g;
            }
            if pos == 0 && cur[0] == -g {
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int, rat};

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn rv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn limits() -> Limits {
        Limits::default()
    }

    fn le(coeffs: &[i64], rhs: Rational) -> Constraint {
        Constraint::le(rv(coeffs), rhs)
    }

    fn unit_square_points() -> SSpec {
        SSpec::explicit(vec![iv(&[0, 0]), iv(&[0, 1]), iv(&[1, 0]), iv(&[1, 1])]).unwrap()
    }

    #[test]
    fn floor_over_the_unit_square_tightens_nine_halves() {
        let s = unit_square_points();
        let got = floor_s(&s, &iv(&[2, 3]), &frac(9, 2), &limits()).unwrap();
        assert_eq!(
            got,
            Strengthened::Finite {
                value: int(3),
                witness: iv(&[0, 1])
            }
        );
    }

    #[test]
    fn floor_over_all_integers_is_classical_rounding() {
        let s = SSpec::integers(2, &limits()).unwrap();
        let got = floor_s(&s, &iv(&[1, 0]), &frac(3, 2), &limits()).unwrap();
        assert_eq!(got.value(), Some(&int(1)));

        let got = floor_s(&s, &iv(&[2, 4]), &rat(5), &limits()).unwrap();
        assert_eq!(got.value(), Some(&int(4)));
        let w = got.witness().unwrap();
        assert_eq!(rat::dot_int(&iv(&[2, 4]), w), int(4));
    }

    #[test]
    fn empty_side_reports_instead_of_a_value() {
        let s = SSpec::explicit(vec![iv(&[0]), iv(&[1])]).unwrap();
        let got = floor_s(&s, &iv(&[1]), &rat(-1), &limits()).unwrap();
        assert_eq!(got, Strengthened::EmptySide);
    }

    #[test]
    fn ceiling_mirrors_floor() {
        let s = unit_square_points();
        let got = ceil_s(&s, &iv(&[2, 3]), &frac(5, 2), &limits()).unwrap();
        assert_eq!(got.value(), Some(&int(3)));
        assert_eq!(got.witness(), Some(&iv(&[0, 1])[..]));

        let z = SSpec::integers(1, &limits()).unwrap();
        let got = ceil_s(&z, &iv(&[1]), &frac(3, 2), &limits()).unwrap();
        assert_eq!(got.value(), Some(&int(2)));

        let zero = SSpec::explicit(vec![iv(&[0])]).unwrap();
        let got = ceil_s(&zero, &iv(&[1]), &frac(1, 2), &limits()).unwrap();
        assert_eq!(got, Strengthened::EmptySide);
    }

    #[test]
    fn pointed_cone_with_nonnegative_ray_products() {
        // R = cone{(1,0),(1,1)}, S = R ∩ Z².
        let r = Polyhedron::new(
            2,
            vec![
                Constraint::new(rv(&[0, 1]), Rel::Ge, rat(0)),
                Constraint::new(rv(&[1, -1]), Rel::Ge, rat(0)),
            ],
        )
        .unwrap();
        let s = SSpec::hull_of(r, &limits()).unwrap();
        let got = floor_s(&s, &iv(&[1, 0]), &frac(3, 2), &limits()).unwrap();
        assert_eq!(got.value(), Some(&int(1)));
        let w = got.witness().unwrap();
        assert!(s.contains(w));
        assert_eq!(rat::dot_int(&iv(&[1, 0]), w), int(1));
    }

    #[test]
    fn negative_ray_products_walk_down_to_the_rhs() {
        // S = {0} × {z ≤ 0}.
        let r = Polyhedron::new(
            2,
            vec![
                Constraint::new(rv(&[1, 0]), Rel::Eq, rat(0)),
                le(&[0, 1], rat(0)),
            ],
        )
        .unwrap();
        let s = SSpec::hull_of(r, &limits()).unwrap();
        let got = floor_s(&s, &iv(&[0, 1]), &frac(-5, 2), &limits()).unwrap();
        assert_eq!(
            got,
            Strengthened::Finite {
                value: int(-3),
                witness: iv(&[0, -3])
            }
        );
    }

    #[test]
    fn mixed_ray_signs_match_the_span_relaxation() {
        // R = cone{(1,0),(-1,1)}: products of α = (1,0) are 1 and -1.
        let r = Polyhedron::new(
            2,
            vec![
                Constraint::new(rv(&[0, 1]), Rel::Ge, rat(0)),
                Constraint::new(rv(&[1, 1]), Rel::Ge, rat(0)),
            ],
        )
        .unwrap();
        let s = SSpec::hull_of(r, &limits()).unwrap();
        let alpha = iv(&[1, 0]);
        let got = floor_s(&s, &alpha, &frac(1, 2), &limits()).unwrap();
        assert_eq!(got.value(), Some(&int(0)));
        let w = got.witness().unwrap().to_vec();
        assert!(s.contains(&w));
        assert_eq!(rat::dot_int(&alpha, &w), int(0));

        let z2 = SSpec::integers(2, &limits()).unwrap();
        let reference = floor_s(&z2, &alpha, &frac(1, 2), &limits()).unwrap();
        assert_eq!(reference.value(), got.value());
    }

    #[test]
    fn lineality_residues_follow_the_gcd() {
        // S = {0 ≤ z₁ ≤ 1} × Z: values of (2,4)·z are 4Z ∪ (4Z + 2).
        let r = Polyhedron::new(
            2,
            vec![le(&[1, 0], rat(1)), Constraint::new(rv(&[1, 0]), Rel::Ge, rat(0))],
        )
        .unwrap();
        let s = SSpec::hull_of(r, &limits()).unwrap();
        assert!(!s.is_pointed());
        let got = floor_s(&s, &iv(&[2, 4]), &rat(7), &limits()).unwrap();
        assert_eq!(
            got,
            Strengthened::Finite {
                value: int(6),
                witness: iv(&[1, 1])
            }
        );
    }

    #[test]
    fn membership_check_hands_back_the_multipliers() {
        let p = Polyhedron::new(
            2,
            vec![
                le(&[1, 0], rat(1)),
                le(&[0, 1], rat(1)),
                le(&[-1, 0], rat(0)),
                le(&[0, -1], rat(0)),
            ],
        )
        .unwrap();
        let lambda = check_pi_membership(&p, &rv(&[1, 1]), &rat(2)).unwrap();
        assert_eq!(lambda, rv(&[1, 1, 0, 0]));

        assert!(matches!(
            check_pi_membership(&p, &rv(&[1, 1]), &rat(3)),
            Err(Error::NotSupporting { .. })
        ));
        assert!(matches!(
            check_pi_membership(&p, &rv(&[1, 1]), &rat(1)),
            Err(Error::NotValid { .. })
        ));
        assert!(matches!(
            check_pi_membership(&p, &[frac(1, 2), rat(1)], &rat(1)),
            Err(Error::NotIntegral)
        ));
    }

    #[test]
    fn cut_on_the_fractional_knapsack() {
        let p = Polyhedron::new(
            2,
            vec![
                le(&[2, 3], frac(9, 2)),
                le(&[1, 0], rat(1)),
                le(&[0, 1], rat(1)),
                le(&[-1, 0], rat(0)),
                le(&[0, -1], rat(0)),
            ],
        )
        .unwrap();
        let s = unit_square_points();
        let cert = scg_cut(&p, &s, &iv(&[2, 3]), true, &limits()).unwrap();
        assert_eq!(cert.cut.beta, frac(9, 2));
        assert_eq!(cert.cut.strengthened.value(), Some(&int(3)));
        assert_eq!(cert.lambda, rv(&[1, 0, 0, 0, 0]));
        assert!(cert.cut.improves());
        // The classical rounding would only reach ⌊9/2⌋ = 4.
        assert!(rat::rat_of(cert.cut.strengthened.value().unwrap()) < frac(9, 2).floor());
    }

    #[test]
    fn empty_polyhedron_cuts_to_the_infeasible_row() {
        let p = Polyhedron::new(1, vec![le(&[1], rat(0)), le(&[-1], rat(-1))]).unwrap();
        let s = SSpec::explicit(vec![iv(&[0]), iv(&[1])]).unwrap();
        let cert = scg_cut(&p, &s, &iv(&[1]), false, &limits()).unwrap();
        assert_eq!(cert.cut.alpha, iv(&[0]));
        assert_eq!(cert.cut.beta, rat(-1));
        assert_eq!(cert.cut.strengthened, Strengthened::EmptySide);
        assert_eq!(cert.lambda, rv(&[1, 1]));
    }

    #[test]
    fn containment_precheck_rejects_outside_polyhedra() {
        let p = Polyhedron::new(1, vec![le(&[1], rat(3)), le(&[-1], rat(0))]).unwrap();
        let s = SSpec::explicit(vec![iv(&[0]), iv(&[1])]).unwrap();
        assert!(matches!(
            scg_cut(&p, &s, &iv(&[1]), true, &limits()),
            Err(Error::NotInHull)
        ));
    }

    #[test]
    fn bounded_closure_shrinks_the_half_square_to_the_origin() {
        let p = Polyhedron::new(
            2,
            vec![
                le(&[1, 0], frac(1, 2)),
                le(&[0, 1], frac(1, 2)),
                le(&[-1, 0], rat(0)),
                le(&[0, -1], rat(0)),
            ],
        )
        .unwrap();
        let s = unit_square_points();
        let res = bounded_closure(&p, &s, 1, true, &limits()).unwrap();
        let origin = Polyhedron::new(
            2,
            vec![
                le(&[1, 0], rat(0)),
                le(&[0, 1], rat(0)),
                le(&[-1, 0], rat(0)),
                le(&[0, -1], rat(0)),
            ],
        )
        .unwrap();
        assert!(res.polyhedron.same_set(&origin).unwrap());
        assert_eq!(res.certificates.len(), 8);
    }

    #[test]
    fn closure_round_errors_on_unbounded_normals() {
        let p = Polyhedron::new(2, vec![Constraint::new(rv(&[0, 1]), Rel::Ge, rat(0))]).unwrap();
        let s = SSpec::integers(2, &limits()).unwrap();
        assert!(matches!(
            closure_round(&p, &s, &[iv(&[0, 1])], false, &limits()),
            Err(Error::Unbounded)
        ));
    }

    #[test]
    fn bounded_closure_skips_unbounded_normals() {
        let p = Polyhedron::new(
            2,
            vec![
                Constraint::new(rv(&[0, 1]), Rel::Ge, rat(0)),
                le(&[1, 0], frac(1, 2)),
                le(&[-1, 0], rat(0)),
            ],
        )
        .unwrap();
        let s = SSpec::integers(2, &limits()).unwrap();
        let res = bounded_closure(&p, &s, 1, false, &limits()).unwrap();
        let expect = Polyhedron::new(
            2,
            vec![
                Constraint::new(rv(&[1, 0]), Rel::Eq, rat(0)),
                Constraint::new(rv(&[0, 1]), Rel::Ge, rat(0)),
            ],
        )
        .unwrap();
        assert!(res.polyhedron.same_set(&expect).unwrap());
        // The three normals with a positive second entry are unbounded over P.
        assert_eq!(res.certificates.len(), 5);
    }

    #[test]
    fn empty_side_round_collapses_to_the_empty_set() {
        // P = {1/2} inside conv(S) for S = {0, 1}, shifted out of S's reach
        // by the normal 2x ≤ 1 whose S-side {z : 2z ≤ 1} still has z = 0.
        // Use instead S = {1} and P = {1/2}: z ≤ 1/2 has no point of S.
        let p = Polyhedron::new(
            1,
            vec![le(&[1], frac(1, 2)), le(&[-1], frac(-1, 2))],
        )
        .unwrap();
        let s = SSpec::explicit(vec![iv(&[1])]).unwrap();
        let res = closure_round(&p, &s, &[iv(&[1])], false, &limits()).unwrap();
        assert!(res.polyhedron.is_empty());
        assert_eq!(res.certificates[0].cut.strengthened, Strengthened::EmptySide);
    }

    #[test]
    fn alpha_enumeration_is_graded_complete_and_nonzero() {
        let fam = alpha_enumeration(2, 2);
        assert_eq!(fam.len(), 24);
        assert!(fam.iter().all(|a| !rat::is_zero_vec_int(a)));
        let mut seen = fam.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 24);
        // Grades appear in order.
        let grades: Vec<Int> = fam
            .iter()
            .map(|a| a.iter().map(|c| c.abs()).max().unwrap())
            .collect();
        assert!(grades.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(fam[0], iv(&[-1, -1]));
    }

    #[test]
    fn certificates_recover_the_supporting_inequality() {
        let p = Polyhedron::new(
            2,
            vec![
                le(&[2, 3], frac(9, 2)),
                le(&[1, 0], rat(1)),
                le(&[0, 1], rat(1)),
                le(&[-1, 0], rat(0)),
                le(&[0, -1], rat(0)),
            ],
        )
        .unwrap();
        let s = unit_square_points();
        let res = bounded_closure(&p, &s, 1, false, &limits()).unwrap();
        let (a, b) = p.to_le_form();
        for cert in &res.certificates {
            let m = a.len();
            assert_eq!(cert.lambda.len(), m);
            assert!(cert.lambda.iter().all(|l| !l.is_negative()));
            for k in 0..2 {
                let recovered: Rational =
                    (0..m).map(|i| &cert.lambda[i] * &a[i][k]).sum();
                assert_eq!(recovered, rat::rat_of(&cert.cut.alpha[k]));
            }
            let rhs: Rational = (0..m).map(|i| &cert.lambda[i] * &b[i]).sum();
            assert_eq!(rhs, cert.cut.beta);
        }
    }
}
