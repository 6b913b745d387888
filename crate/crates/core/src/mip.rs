//! Mixed-integer strengthening. Cuts are supported on the leading integer
//! coordinates only, and their right-hand sides are evaluated through the
//! integer projection of the mixed set, so a closure round reduces to the
//! pure-integer one on projected data and then lifts back.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rat::{self, Int, Rational};
use crate::ratpoly::{fm_project, lp, Constraint, Limits, Polyhedron};
use crate::scg::{self, Cut, CutCertificate, Strengthened};
use crate::sets::SSpec;

/// {(x,y) ∈ Zⁿ×Rˡ : Ax + Cy ≤ b} with integral A, C, b, carried as the
/// relaxation region together with the count of leading integer coordinates.
/// Construction rejects fractional data and regions with no point at all.
#[derive(Debug, Clone)]
pub struct MixedSSpec {
    region: Polyhedron,
    n_int: usize,
}

impl MixedSSpec {
    pub fn new(region: Polyhedron, n_int: usize) -> Result<Self> {
        if n_int > region.dim() {
            return Err(Error::Shape("more integer coordinates than dimensions".into()));
        }
        for row in region.rows() {
            if row.coeffs.iter().any(|c| !rat::is_integral(c)) || !rat::is_integral(&row.rhs) {
                return Err(Error::Shape("mixed set needs integral data".into()));
            }
        }
        let probe = rat::zeros(region.dim());
        if matches!(lp::maximize(&region, &probe)?, lp::LpResult::Infeasible(_)) {
            return Err(Error::EmptySet);
        }
        Ok(MixedSSpec { region, n_int })
    }

    pub fn region(&self) -> &Polyhedron {
        &self.region
    }

    pub fn n_int(&self) -> usize {
        self.n_int
    }

    pub fn n_cont(&self) -> usize {
        self.region.dim() - self.n_int
    }
}

/// The integer part of the mixed set: projecting the region onto the x
/// coordinates and intersecting with Zⁿ. Exact because every x in the
/// projected region extends by a real y.
pub fn proj_x_s(s: &MixedSSpec, limits: &Limits) -> Result<SSpec> {
    let keep: Vec<usize> = (0..s.n_int).collect();
    SSpec::hull_of(fm_project(s.region(), &keep)?, limits)
}

/// max{αx : (x,y) ∈ S, αx ≤ β}, which equals the pure-integer floor over
/// the projection of S.
pub fn floor_mixed(
    s: &MixedSSpec,
    alpha: &[Int],
    beta: &Rational,
    limits: &Limits,
) -> Result<Strengthened> {
    if alpha.len() != s.n_int {
        return Err(Error::Shape("normal must cover exactly the integer coordinates".into()));
    }
    let t = proj_x_s(s, limits)?;
    scg::floor_s(&t, alpha, beta, limits)
}

/// One mixed strengthening round: the tightened polyhedron plus one
/// certificate per cut normal. Cut normals live in the full space but are
/// zero on the continuous coordinates; witnesses are projected points.
#[derive(Debug, Clone)]
pub struct MixedClosureResult {
    pub polyhedron: Polyhedron,
    pub certificates: Vec<CutCertificate>,
}

/// One strengthening round over every α supported on the integer
/// coordinates with ‖α‖∞ ≤ K: P ∩ (closure(proj_x P over proj_x S) × Rˡ).
/// The same set is recomputed directly from lifted cuts αx ≤ value with
/// β = max{αx : (x,y) ∈ P}, and the two must agree exactly; the hull flag
/// checks the exact consequences P ⊆ R and proj_x(P) ⊆ conv(proj_x S) of
/// the containment P ⊆ conv(S).
pub fn mixed_closure_round(
    p: &Polyhedron,
    s: &MixedSSpec,
    k: u32,
    check_hull: bool,
    limits: &Limits,
) -> Result<MixedClosureResult> {
    let dim = p.dim();
    if dim != s.region().dim() {
        return Err(Error::Shape("polyhedron and set dimensions differ".into()));
    }
    if check_hull && !p.subset_of(s.region())? {
        return Err(Error::NotInHull);
    }
    if p.is_empty() {
        return Ok(MixedClosureResult {
            polyhedron: Polyhedron::empty(dim),
            certificates: vec![scg::empty_cut_certificate(p)?],
        });
    }
    let n = s.n_int();
    let l = s.n_cont();
    let keep: Vec<usize> = (0..n).collect();
    let q = fm_project(p, &keep)?;
    let t = proj_x_s(s, limits)?;
    let closure = scg::bounded_closure(&q, &t, k, check_hull, limits)?;
    let lifted = closure.polyhedron.rows().iter().map(|row| {
        let mut coeffs = row.coeffs.clone();
        coeffs.extend(std::iter::repeat(Rational::zero()).take(l));
        Constraint::new(coeffs, row.rel, row.rhs.clone())
    });
    let projected_form = p.with_rows(lifted)?;

    let mut certificates = Vec::new();
    for alpha in scg::alpha_enumeration(n, k) {
        let mut obj = rat::int_to_rat_vec(&alpha);
        obj.extend(std::iter::repeat(Rational::zero()).take(l));
        let (beta, lambda) = match lp::maximize(p, &obj)? {
            lp::LpResult::Optimal(o) => (o.value, o.dual),
            lp::LpResult::Unbounded(_) => continue,
            lp::LpResult::Infeasible(_) => {
                return Err(Error::Internal("nonempty polyhedron reported infeasible".into()))
            }
        };
        let strengthened = scg::floor_s(&t, &alpha, &beta, limits)?;
        let mut padded = alpha;
        padded.extend(std::iter::repeat(Int::zero()).take(l));
        certificates.push(CutCertificate {
            cut: Cut {
                alpha: padded,
                beta,
                strengthened,
            },
            lambda,
        });
    }
    let direct_rows: Vec<Constraint> = certificates.iter().map(|c| c.cut.constraint()).collect();
    let direct_form = p.with_rows(direct_rows)?;
    if !direct_form.same_set(&projected_form)? {
        return Err(Error::Internal("projected and direct closures disagree".into()));
    }

    let polyhedron = if projected_form.is_empty() {
        Polyhedron::empty(dim)
    } else {
        projected_form.irredundant()?
    };
    Ok(MixedClosureResult {
        polyhedron,
        certificates,
    })
}
