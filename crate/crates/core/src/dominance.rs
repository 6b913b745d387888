//! Multiplier reduction for covering (Ax ≥ b) and packing (Ax ≤ b) forms
//! over a normalized pointed set: ray supports, intercepts, tilting ratios,
//! the constant tower B, D, M₁..M_(m-1), M, M*, simultaneous Diophantine
//! approximation, and the reduction chain that replaces a multiplier with a
//! badly unbalanced sorted profile by one of smaller 1-norm whose cut
//! dominates the original. Every reduction step re-verifies its three
//! claimed properties instead of trusting the construction.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mat::{self, IMat};
use crate::rat::{self, Int, Rational};
use crate::ratpoly::{lp, Constraint, Limits, Polyhedron, Rel};
use crate::scg::{ceil_s, floor_s, Strengthened};
use crate::sets::SSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Ax ≥ b; cuts read αx ≥ β and strengthening raises β.
    Covering,
    /// Ax ≤ b; cuts read αx ≤ β and strengthening lowers β.
    Packing,
}

/// An oriented integral system over coordinates split into n₁ leading ones
/// spanned by unit vectors and a trailing block carrying the recession rays
/// of conv(S). Construction checks the sign conditions: every column among
/// the first n₁ is nonnegative, every ray product a_i·rʲ is nonnegative,
/// b ≥ 0, the rays live in {0}^(n₁) × R^(n₂) and span a pointed cone of
/// dimension n₂ = n - n₁.
#[derive(Debug, Clone)]
pub struct PointedContext {
    a: IMat,
    b: Vec<Int>,
    n1: usize,
    rays: Vec<Vec<Int>>,
    orientation: Orientation,
}

impl PointedContext {
    pub fn new(
        a: IMat,
        b: Vec<Int>,
        n1: usize,
        rays: Vec<Vec<Int>>,
        orientation: Orientation,
    ) -> Result<Self> {
        let m = a.len();
        if m == 0 {
            return Err(Error::Shape("system needs at least one row".into()));
        }
        let n = a[0].len();
        if a.iter().any(|row| row.len() != n) || b.len() != m {
            return Err(Error::Shape("ragged system".into()));
        }
        if n1 > n || rays.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("split or ray of wrong dimension".into()));
        }
        if rays
            .iter()
            .any(|r| r.iter().take(n1).any(|c| !c.is_zero()))
        {
            return Err(Error::Shape("ray touches the leading coordinates".into()));
        }
        if !rays.is_empty() && mat::hnf(&rays).rank != n - n1 {
            return Err(Error::Shape("rays do not span the trailing block".into()));
        }
        if rays.is_empty() && n1 != n {
            return Err(Error::Shape("rays do not span the trailing block".into()));
        }
        if !cone_is_pointed(&rays) {
            return Err(Error::Shape("ray cone is not pointed".into()));
        }
        for row in &a {
            if row.iter().take(n1).any(|c| c.is_negative()) {
                return Err(Error::Shape("negative entry in a leading column".into()));
            }
            for r in &rays {
                if rat::dot_int(row, r).is_negative() {
                    return Err(Error::Shape("negative ray product".into()));
                }
            }
        }
        if b.iter().any(|c| c.is_negative()) {
            return Err(Error::Shape("negative right-hand side".into()));
        }
        Ok(PointedContext {
            a,
            b,
            n1,
            rays,
            orientation,
        })
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn n(&self) -> usize {
        self.a[0].len()
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn a(&self) -> &IMat {
        &self.a
    }

    pub fn b(&self) -> &[Int] {
        &self.b
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// The oriented polyhedron Q.
    pub fn polyhedron(&self) -> Polyhedron {
        let rel = match self.orientation {
            Orientation::Covering => Rel::Ge,
            Orientation::Packing => Rel::Le,
        };
        let rows = self
            .a
            .iter()
            .zip(&self.b)
            .map(|(row, rhs)| Constraint::new(rat::int_to_rat_vec(row), rel, rat::rat_of(rhs)))
            .collect();
        Polyhedron::new(self.n(), rows).expect("validated shapes")
    }

    /// λA, which membership in Π forces to be integral.
    pub fn alpha(&self, lambda: &[Rational]) -> Result<Vec<Int>> {
        let combo = self.alpha_rat(lambda)?;
        combo
            .iter()
            .map(|c| {
                if rat::is_integral(c) {
                    Ok(c.to_integer())
                } else {
                    Err(Error::NotIntegral)
                }
            })
            .collect()
    }

    pub fn alpha_rat(&self, lambda: &[Rational]) -> Result<Vec<Rational>> {
        self.check_multiplier(lambda)?;
        let n = self.n();
        let mut out = rat::zeros(n);
        for (li, row) in lambda.iter().zip(&self.a) {
            for k in 0..n {
                out[k] += li * rat::rat_of(&row[k]);
            }
        }
        Ok(out)
    }

    /// λb.
    pub fn beta(&self, lambda: &[Rational]) -> Rational {
        lambda
            .iter()
            .zip(&self.b)
            .map(|(li, bi)| li * rat::rat_of(bi))
            .sum()
    }

    fn check_multiplier(&self, lambda: &[Rational]) -> Result<()> {
        if lambda.len() != self.m() {
            return Err(Error::Shape("multiplier of wrong length".into()));
        }
        if lambda.iter().any(|l| l.is_negative()) {
            return Err(Error::Shape("negative multiplier entry".into()));
        }
        if lambda.iter().all(|l| l.is_zero()) {
            return Err(Error::Shape("zero multiplier".into()));
        }
        Ok(())
    }
}

fn cone_is_pointed(rays: &[Vec<Int>]) -> bool {
    if rays.is_empty() {
        return true;
    }
    // Pointed iff 0 is not a convex combination of the rays.
    let h = rays.len();
    let n = rays[0].len();
    let mut rows: Vec<Constraint> = Vec::new();
    for k in 0..n {
        let coeffs = rays.iter().map(|r| rat::rat_of(&r[k])).collect();
        rows.push(Constraint::new(coeffs, Rel::Eq, Rational::zero()));
    }
    rows.push(Constraint::new(vec![Rational::one(); h], Rel::Eq, Rational::one()));
    for j in 0..h {
        let mut row = rat::zeros(h);
        row[j] = -Rational::one();
        rows.push(Constraint::le(row, Rational::zero()));
    }
    let p = Polyhedron::new(h, rows).expect("consistent shapes");
    matches!(
        lp::maximize(&p, &rat::zeros(h)),
        Ok(lp::LpResult::Infeasible(_))
    )
}

/// {j : α·rʲ > 0}, 0-based over the context's ray list.
pub fn ray_support(alpha: &[Int], ctx: &PointedContext) -> Vec<usize> {
    ctx.rays
        .iter()
        .enumerate()
        .filter(|(_, r)| rat::dot_int(alpha, r).is_positive())
        .map(|(j, _)| j)
        .collect()
}

/// β/(α·rʲ) for every supported ray, in ray order.
pub fn intercepts(alpha: &[Int], beta: &Rational, ctx: &PointedContext) -> Vec<(usize, Rational)> {
    ray_support(alpha, ctx)
        .into_iter()
        .map(|j| {
            let prod = rat::dot_int(alpha, &ctx.rays[j]);
            (j, beta / rat::rat_of(&prod))
        })
        .collect()
}

/// Tilting data of λ: rows sorted by descending λ (ties by original index),
/// t the shortest sorted prefix whose ray supports union to r-supp(λA), and
/// the ratio λ₍₁₎/λ₍t₎. An empty r-supp(λA) gives t = 1, ratio 1, since the
/// supports of all positively weighted rows are then empty too.
#[derive(Debug, Clone, PartialEq)]
pub struct Tilting {
    /// Permutation: order[i] is the original index of the i-th largest λ.
    pub order: Vec<usize>,
    /// 1-based prefix length.
    pub t: usize,
    pub ratio: Rational,
}

pub fn tilting(lambda: &[Rational], ctx: &PointedContext) -> Result<Tilting> {
    ctx.check_multiplier(lambda)?;
    let m = ctx.m();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| lambda[j].cmp(&lambda[i]).then(i.cmp(&j)));

    let alpha = ctx.alpha_rat(lambda)?;
    let target: Vec<bool> = ctx
        .rays
        .iter()
        .map(|r| rat::dot_mixed(r, &alpha).is_positive())
        .collect();
    let mut union = vec![false; ctx.rays.len()];
    for (pos, &row) in order.iter().enumerate() {
        for (j, r) in ctx.rays.iter().enumerate() {
            if rat::dot_int(&ctx.a[row], r).is_positive() {
                union[j] = true;
            }
        }
        if union == target {
            let t = pos + 1;
            let ratio = &lambda[order[0]] / &lambda[order[pos]];
            return Ok(Tilting { order, t, ratio });
        }
    }
    Err(Error::Internal("prefix union never reached the ray support".into()))
}

/// The constant tower: B = max bᵢ, D = Σ aᵢ·(Σe + Σr), M₁ = 2(mB + 2D),
/// Mᵢ = (2mB·M₁⋯Mᵢ₋₁)^(i-1)·M₁, M their product (1 when m = 1), M* = mBM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constants {
    pub b_max: Int,
    pub d: Int,
    pub m_list: Vec<Int>,
    pub m_big: Int,
    pub m_star: Int,
}

pub fn constants(ctx: &PointedContext) -> Constants {
    let m = ctx.m();
    let b_max = ctx.b.iter().max().expect("m >= 1").clone();
    let mut probe = rat::zeros_int(ctx.n());
    for slot in probe.iter_mut().take(ctx.n1) {
        *slot = Int::one();
    }
    for r in &ctx.rays {
        for (slot, c) in probe.iter_mut().zip(r) {
            *slot += c;
        }
    }
    let d: Int = ctx.a.iter().map(|row| rat::dot_int(row, &probe)).sum();
    let m_int = Int::from(m);
    let m1: Int = Int::from(2) * (&m_int * &b_max + Int::from(2) * &d);
    let mut m_list = Vec::new();
    let mut m_big = Int::one();
    if m >= 2 {
        m_list.push(m1.clone());
        m_big = m1.clone();
        let mut running = m1.clone();
        for i in 2..m {
            let base: Int = Int::from(2) * &m_int * &b_max * &running;
            let mut mi = m1.clone();
            for _ in 0..i - 1 {
                mi *= &base;
            }
            running *= &mi;
            m_big *= &mi;
            m_list.push(mi);
        }
    }
    let m_star = &m_int * &b_max * &m_big;
    Constants {
        b_max,
        d,
        m_list,
        m_big,
        m_star,
    }
}

/// Simultaneous Diophantine approximation: the smallest q with
/// 1 ≤ q ≤ ⌈(1/ε)^k⌉ such that every pᵢ = nearest(q·rᵢ) (ties toward +∞)
/// satisfies |q·rᵢ - pᵢ| < ε, followed by the monotone repair pass
/// pᵢ := max(pᵢ, pᵢ₊₁) wherever rᵢ ≥ rᵢ₊₁.
pub fn dirichlet(r: &[Rational], eps: &Rational) -> Result<(Vec<Int>, Int)> {
    if !eps.is_positive() || *eps >= Rational::one() {
        return Err(Error::Shape("eps must lie strictly between 0 and 1".into()));
    }
    let k = r.len();
    let cap = rat::ceil_int(&rat_pow(&(Rational::one() / eps), k));
    dirichlet_scan(r, &cap, |diff| diff < eps)
}

/// Same scan with the threshold ε = (1/cap)^(1/k) compared exactly through
/// k-th powers: |q·rᵢ - pᵢ|^k < 1/cap.
fn dirichlet_power(r: &[Rational], cap: &Int, k: usize) -> Result<(Vec<Int>, Int)> {
    let bound = Rational::new(Int::one(), cap.clone());
    dirichlet_scan(r, cap, |diff| rat_pow(diff, k) < bound)
}

fn dirichlet_scan(
    r: &[Rational],
    cap: &Int,
    close_enough: impl Fn(&Rational) -> bool,
) -> Result<(Vec<Int>, Int)> {
    let mut q = Int::one();
    while q <= *cap {
        let qr = rat::rat_of(&q);
        let p: Vec<Int> = r.iter().map(|ri| rat::nearest_int(&(&qr * ri))).collect();
        let ok = r.iter().zip(&p).all(|(ri, pi)| {
            let diff = (&qr * ri - rat::rat_of(pi)).abs();
            close_enough(&diff)
        });
        if ok {
            let mut p = p;
            for i in (0..p.len().saturating_sub(1)).rev() {
                if r[i] >= r[i + 1] && p[i] < p[i + 1] {
                    p[i] = p[i + 1].clone();
                }
            }
            return Ok((p, q));
        }
        q += 1;
    }
    Err(Error::Internal("no approximation within the q cap".into()))
}

fn rat_pow(x: &Rational, k: usize) -> Rational {
    let mut out = Rational::one();
    for _ in 0..k {
        out *= x;
    }
    out
}

/// One reduction step, fully logged: the new 1-norm, tilting data, break
/// index ℓ, step size Δ, approximation vector (p₁..p_ℓ), and the four
/// verification verdicts.
#[derive(Debug, Clone, PartialEq)]
pub struct StepTrace {
    pub mu_norm1: Rational,
    pub t: usize,
    pub ratio: Rational,
    pub ell: usize,
    pub delta: Int,
    pub p: Vec<Int>,
    pub norm_ok: bool,
    pub pi_ok: bool,
    pub dominates_ok: bool,
    pub band_ok: bool,
}

impl StepTrace {
    pub fn render(&self) -> String {
        let p: Vec<String> = self.p.iter().map(|x| x.to_string()).collect();
        format!(
            "|mu|_1={} t={} ratio={} ell={} delta={} p=[{}] norm_ok={} pi_ok={} dominates_ok={} band_ok={}",
            rat::fmt_rat(&self.mu_norm1),
            self.t,
            rat::fmt_rat(&self.ratio),
            self.ell,
            self.delta,
            p.join(","),
            self.norm_ok,
            self.pi_ok,
            self.dominates_ok,
            self.band_ok
        )
    }
}

/// Whether the cut (α_new, rhs_new) makes (α_old, rhs_old) redundant over Q:
/// Q ∩ {new} ⊆ {old}, decided by one exact LP in the given orientation.
pub fn dominates(
    alpha_new: &[Int],
    rhs_new: &Rational,
    alpha_old: &[Int],
    rhs_old: &Rational,
    q: &Polyhedron,
    orientation: Orientation,
) -> Result<bool> {
    let rel = match orientation {
        Orientation::Covering => Rel::Ge,
        Orientation::Packing => Rel::Le,
    };
    let f = q.with_rows([Constraint::new(
        rat::int_to_rat_vec(alpha_new),
        rel,
        rhs_new.clone(),
    )])?;
    let obj = rat::int_to_rat_vec(alpha_old);
    match orientation {
        Orientation::Covering => match lp::minimize(&f, &obj)? {
            lp::LpResult::Optimal(o) => Ok(o.value >= *rhs_old),
            lp::LpResult::Unbounded(_) => Ok(false),
            lp::LpResult::Infeasible(_) => Ok(true),
        },
        Orientation::Packing => match lp::maximize(&f, &obj)? {
            lp::LpResult::Optimal(o) => Ok(o.value <= *rhs_old),
            lp::LpResult::Unbounded(_) => Ok(false),
            lp::LpResult::Infeasible(_) => Ok(true),
        },
    }
}

/// The strengthened right-hand side of the oriented cut from (α, β).
fn strengthened_rhs(
    s: &SSpec,
    alpha: &[Int],
    beta: &Rational,
    orientation: Orientation,
    limits: &Limits,
) -> Result<Int> {
    let res = match orientation {
        Orientation::Covering => ceil_s(s, alpha, beta, limits)?,
        Orientation::Packing => floor_s(s, alpha, beta, limits)?,
    };
    match res {
        Strengthened::Finite { value, .. } => Ok(value),
        Strengthened::EmptySide => Err(Error::VerificationFailed(
            "strengthening emptied the cut side".into(),
        )),
    }
}

/// Value of the oriented support problem min/max{αx : x ∈ Q}.
fn oriented_value(q: &Polyhedron, alpha: &[Rational], orientation: Orientation) -> Result<Rational> {
    let res = match orientation {
        Orientation::Covering => lp::minimize(q, alpha)?,
        Orientation::Packing => lp::maximize(q, alpha)?,
    };
    match res {
        lp::LpResult::Optimal(o) => Ok(o.value),
        lp::LpResult::Unbounded(_) => Err(Error::Unbounded),
        lp::LpResult::Infeasible(_) => Err(Error::EmptySet),
    }
}

fn check_set_matches(ctx: &PointedContext, s: &SSpec) -> Result<()> {
    if s.dim() != ctx.n() {
        return Err(Error::Shape("set dimension differs from the system".into()));
    }
    if !s.is_pointed() {
        return Err(Error::Shape("set must be pointed".into()));
    }
    let mut given: Vec<Vec<Int>> = ctx
        .rays
        .iter()
        .map(|r| {
            rat::primitive_int_vec(&rat::int_to_rat_vec(r))
                .ok_or_else(|| Error::Shape("zero ray".into()))
        })
        .collect::<Result<_>>()?;
    given.sort();
    given.dedup();
    if given != s.generators().rays {
        return Err(Error::Shape(
            "context rays do not generate the set's recession cone".into(),
        ));
    }
    Ok(())
}

/// One reduction step: requires tilting ratio > M, and
/// produces μ with ‖μ‖₁ ≤ ‖λ‖₁ - 1 whose cut dominates λ's. The three
/// conclusions and the Θ-band are re-verified exactly; any failure is
/// reported instead of returned.
pub fn reduce_multiplier(
    lambda: &[Rational],
    ctx: &PointedContext,
    s: &SSpec,
    limits: &Limits,
) -> Result<(Vec<Rational>, StepTrace)> {
    check_set_matches(ctx, s)?;
    let consts = constants(ctx);
    let tilt = tilting(lambda, ctx)?;
    let m_rat = rat::rat_of(&consts.m_big);
    if tilt.ratio <= m_rat {
        return Err(Error::PreconditionRatio {
            ratio: rat::fmt_rat(&tilt.ratio),
            bound: consts.m_big.to_string(),
        });
    }
    let alpha = ctx.alpha(lambda)?;
    let beta = ctx.beta(lambda);
    let support = ray_support(&alpha, ctx);
    if support.is_empty() {
        return Err(Error::Internal("ratio above M with empty ray support".into()));
    }
    let delta: Int = support
        .iter()
        .map(|&j| rat::dot_int(&alpha, &ctx.rays[j]))
        .min()
        .expect("nonempty support");

    // The probe index of Eq-style minimality: the cheapest supported ray
    // outside the supports of the first t-1 sorted rows. Only its existence
    // matters; it is recorded for the trace.
    let mut prefix = vec![false; ctx.rays.len()];
    for &row in tilt.order.iter().take(tilt.t - 1) {
        for (j, r) in ctx.rays.iter().enumerate() {
            if rat::dot_int(&ctx.a[row], r).is_positive() {
                prefix[j] = true;
            }
        }
    }
    let fresh: Vec<usize> = support.iter().copied().filter(|&j| !prefix[j]).collect();
    if fresh.is_empty() {
        return Err(Error::Internal("no ray beyond the prefix supports".into()));
    }

    // Break index: first position with a sorted quotient above its M bound.
    let sorted: Vec<&Rational> = tilt.order.iter().map(|&i| &lambda[i]).collect();
    let mut ell = 0usize;
    for i in 1..tilt.t {
        if sorted[i - 1] > &(rat::rat_of(&consts.m_list[i - 1]) * sorted[i]) {
            ell = i;
            break;
        }
    }
    if ell == 0 {
        return Err(Error::Internal("no break index below t".into()));
    }

    let p = if ell == 1 {
        vec![Int::one()]
    } else {
        let ratios: Vec<Rational> = (0..ell - 1).map(|i| sorted[i] / sorted[ell - 1]).collect();
        let cap = &consts.m_list[ell - 1] / &consts.m_list[0];
        let (mut p, q) = dirichlet_power(&ratios, &cap, ell - 1)?;
        p.push(q);
        for i in (0..p.len() - 1).rev() {
            if p[i] < p[i + 1] {
                p[i] = p[i + 1].clone();
            }
        }
        p
    };
    if p.iter().any(|pi| !pi.is_positive()) {
        return Err(Error::VerificationFailed(
            "approximation vector is not positive".into(),
        ));
    }

    let mut mu = lambda.to_vec();
    for (i, pi) in p.iter().enumerate() {
        let idx = tilt.order[i];
        mu[idx] = &lambda[idx] - rat::rat_of(&(pi * &delta));
    }

    // Claim checks. Support preservation first: it implies the ray support
    // and tilting data of μ match λ's.
    if mu.iter().any(|c| c.is_negative()) {
        return Err(Error::VerificationFailed("reduced multiplier negative".into()));
    }
    for (old, new) in lambda.iter().zip(&mu) {
        if old.is_zero() != new.is_zero() {
            return Err(Error::VerificationFailed("support changed".into()));
        }
    }
    let norm_old: Rational = lambda.iter().sum();
    let norm_new: Rational = mu.iter().sum();
    let norm_ok = norm_new <= &norm_old - Rational::one();
    if !norm_ok {
        return Err(Error::VerificationFailed("1-norm did not drop".into()));
    }

    let q_poly = ctx.polyhedron();
    let mu_alpha = ctx.alpha(&mu)?;
    let mu_beta = ctx.beta(&mu);
    let value = oriented_value(&q_poly, &rat::int_to_rat_vec(&mu_alpha), ctx.orientation)?;
    let pi_ok = value == mu_beta;
    if !pi_ok {
        return Err(Error::VerificationFailed(
            "reduced pair left the support cone".into(),
        ));
    }

    let rhs_new = strengthened_rhs(s, &mu_alpha, &mu_beta, ctx.orientation, limits)?;
    let rhs_old = strengthened_rhs(s, &alpha, &beta, ctx.orientation, limits)?;
    let dominates_ok = dominates(
        &mu_alpha,
        &rat::rat_of(&rhs_new),
        &alpha,
        &rat::rat_of(&rhs_old),
        &q_poly,
        ctx.orientation,
    )?;
    if !dominates_ok {
        return Err(Error::VerificationFailed("new cut does not dominate".into()));
    }

    let delta_rat = rat::rat_of(&delta);
    let rhs_new_rat = rat::rat_of(&rhs_new);
    let band_ok = match ctx.orientation {
        Orientation::Covering => mu_beta <= rhs_new_rat && rhs_new_rat <= &mu_beta + &delta_rat,
        Orientation::Packing => &mu_beta - &delta_rat <= rhs_new_rat && rhs_new_rat <= mu_beta,
    };
    if !band_ok {
        return Err(Error::VerificationFailed("strengthened rhs left the band".into()));
    }

    let trace = StepTrace {
        mu_norm1: norm_new,
        t: tilt.t,
        ratio: tilt.ratio,
        ell,
        delta,
        p,
        norm_ok,
        pi_ok,
        dominates_ok,
        band_ok,
    };
    Ok((mu, trace))
}

/// Iterates the reduction until every intercept is at most M*. Returns the
/// final multiplier and the per-step traces; the chain length never exceeds
/// ⌈‖λ‖₁⌉.
pub fn reduce_to_bounded(
    lambda: &[Rational],
    ctx: &PointedContext,
    s: &SSpec,
    limits: &Limits,
) -> Result<(Vec<Rational>, Vec<StepTrace>)> {
    check_set_matches(ctx, s)?;
    let q_poly = ctx.polyhedron();
    let alpha0 = ctx.alpha(lambda)?;
    let beta0 = ctx.beta(lambda);
    let value = oriented_value(&q_poly, &rat::int_to_rat_vec(&alpha0), ctx.orientation)?;
    if value != beta0 {
        return Err(Error::VerificationFailed(
            "input pair is not in the support cone".into(),
        ));
    }

    let consts = constants(ctx);
    let m_star = rat::rat_of(&consts.m_star);
    let norm0: Rational = lambda.iter().sum();
    let max_steps = rat::ceil_int(&norm0);

    let mut current = lambda.to_vec();
    let mut traces = Vec::new();
    loop {
        let alpha = ctx.alpha(&current)?;
        let beta = ctx.beta(&current);
        let bounded = intercepts(&alpha, &beta, ctx)
            .iter()
            .all(|(_, ic)| *ic <= m_star);
        if bounded {
            return Ok((current, traces));
        }
        if Int::from(traces.len()) >= max_steps {
            return Err(Error::Internal("reduction chain exceeded its budget".into()));
        }
        let (mu, trace) = match reduce_multiplier(&current, ctx, s, limits) {
            Err(Error::PreconditionRatio { .. }) => {
                return Err(Error::Internal(
                    "unbounded intercept with ratio at most M".into(),
                ))
            }
            other => other?,
        };
        traces.push(trace);
        current = mu;
    }
}
