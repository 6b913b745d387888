//! Structure-revealing unimodular changes of coordinates: aligning a
//! lineality space with trailing coordinates, moving a pointed set into the
//! cone spanned by unit vectors and its own recession rays, sign partitions
//! of cut normals, and the split of a problem into a span-relaxed part and a
//! pointed part.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mat::{self, IMat};
use crate::rat::{self, Int, Rational};
use crate::ratpoly::{fm_project, lp, Constraint, Limits, Polyhedron, Rel, UnimodularMap};
use crate::sets::SSpec;

/// Unimodular U with U·span(gens) = {0}^(n-l) × R^l, l = dim span(gens).
/// Found by sending the integral kernel of the orthogonal complement to the
/// trailing columns of a Hermite-style completion.
pub fn map_lineality(gens: &[Vec<Int>], n: usize) -> Result<UnimodularMap> {
    let nonzero: Vec<Vec<Int>> = gens
        .iter()
        .filter(|g| !rat::is_zero_vec_int(g))
        .cloned()
        .collect();
    if nonzero.iter().any(|g| g.len() != n) {
        return Err(Error::Shape("generator of wrong dimension".into()));
    }
    if nonzero.is_empty() {
        return Ok(UnimodularMap::identity(n));
    }
    let complement = mat::kernel_basis(&nonzero, n);
    if complement.is_empty() {
        // Generators span the whole space already.
        return Ok(UnimodularMap::identity(n));
    }
    let res = mat::hnf(&complement);
    // Trailing columns of the completion are a saturated basis of the span,
    // so the inverse sends the span onto the last coordinates.
    let u = mat::inv_unimodular(&res.u)?;
    UnimodularMap::new(u, rat::zeros_int(n))
}

/// Diagonal ±1 map negating the first `n1` coordinates outside `keep`
/// (0-based indices). An involution.
pub fn sign_flip(keep: &[usize], n1: usize, n: usize) -> Result<UnimodularMap> {
    if keep.iter().any(|&i| i >= n1) || n1 > n {
        return Err(Error::Shape("flip index out of range".into()));
    }
    let mut u: IMat = mat::identity(n);
    for (i, row) in u.iter_mut().enumerate().take(n1) {
        if !keep.contains(&i) {
            row[i] = -Int::one();
        }
    }
    UnimodularMap::new(u, rat::zeros_int(n))
}

/// Image of S under an affine unimodular map, with generators recomputed.
pub fn apply_to_sspec(tau: &UnimodularMap, s: &SSpec, limits: &Limits) -> Result<SSpec> {
    match s.points() {
        Some(points) => SSpec::explicit(points.iter().map(|z| tau.apply_int(z)).collect()),
        None => SSpec::hull_of(tau.apply_poly(s.region().expect("hull kind"))?, limits),
    }
}

/// Normal form of a pointed set: τ = translation ∘ U where U sends the span
/// of the recession rays to the trailing coordinates and the translation
/// puts every hull vertex inside cone{e¹..e^(n1), mapped rays}, first via
/// the smallest uniform step along the sum of all cone generators, then
/// reduced generator by generator to a canonical position.
pub fn normalize_pointed(
    s: &SSpec,
    limits: &Limits,
) -> Result<(UnimodularMap, SSpec)> {
    if !s.is_pointed() {
        return Err(Error::Shape("normal form needs a pointed hull".into()));
    }
    let n = s.dim();
    let gens = s.generators();
    let mut u = map_lineality(&gens.rays, n)?;
    let n2 = if gens.rays.is_empty() {
        0
    } else {
        mat::hnf(&gens.rays.to_vec()).rank
    };
    let n1 = n - n2;

    let mut mapped_rays: Vec<Vec<Int>> = gens.rays.iter().map(|r| u.apply_direction(r)).collect();
    // A one-dimensional ray block is oriented positively; a pointed cone
    // puts all rays on the same side, so one sign decides.
    if n2 == 1 && mapped_rays[0][n - 1].is_negative() {
        let mut flip = mat::identity(n);
        flip[n - 1][n - 1] = -Int::one();
        u = UnimodularMap::new(flip, rat::zeros_int(n))?.compose(&u);
        mapped_rays = gens.rays.iter().map(|r| u.apply_direction(r)).collect();
    }
    for r in &mapped_rays {
        if r[..n1].iter().any(|x| !x.is_zero()) {
            return Err(Error::Internal("ray escapes trailing block".into()));
        }
    }
    let mut cone_gens: Vec<Vec<Int>> = (0..n1)
        .map(|i| {
            let mut e = rat::zeros_int(n);
            e[i] = Int::one();
            e
        })
        .collect();
    cone_gens.extend(mapped_rays.iter().cloned());

    let mut images: Vec<Vec<Rational>> = gens
        .vertices
        .iter()
        .map(|v| rat::int_to_rat_vec(&u.apply_int(v)))
        .collect();

    // Smallest integer step along the generator sum entering the cone.
    let d: Vec<Int> = (0..n).map(|k| cone_gens.iter().map(|g| g[k].clone()).sum()).collect();
    let mut need = Int::zero();
    for v in &images {
        let t = cone_shift(v, &d, &cone_gens, Sense::Min)?;
        let t = rat::ceil_int(&t);
        if t > need {
            need = t;
        }
    }
    let mut w: Vec<Int> = d.iter().map(|x| x * &need).collect();
    for v in images.iter_mut() {
        for (c, s) in v.iter_mut().zip(&w) {
            *c += rat::rat_of(s);
        }
    }

    // Pull back toward the apex: per generator, the largest integral
    // retreat keeping all vertices inside the cone. Repeat to a fixpoint.
    loop {
        let mut moved = false;
        for g in &cone_gens {
            let neg: Vec<Int> = g.iter().map(|x| -x).collect();
            let mut step: Option<Int> = None;
            for v in &images {
                let t = cone_shift(v, &neg, &cone_gens, Sense::Max)?;
                let t = rat::floor_int(&t);
                step = Some(match step {
                    None => t,
                    Some(s) => s.min(t),
                });
            }
            let step = step.unwrap_or_default();
            if step.is_positive() {
                moved = true;
                for (wk, gk) in w.iter_mut().zip(g) {
                    *wk -= &step * gk;
                }
                for v in images.iter_mut() {
                    for (c, gk) in v.iter_mut().zip(g) {
                        *c -= rat::rat_of(&(&step * gk));
                    }
                }
            }
        }
        if !moved {
            break;
        }
    }

    let tau = UnimodularMap::new(u.matrix().clone(), w)?;
    let image = apply_to_sspec(&tau, s, limits)?;
    Ok((tau, image))
}

enum Sense {
    Min,
    Max,
}

/// Optimal t ≥ 0 with v + t·dir ∈ cone(gens), by exact LP over the
/// multipliers. Min assumes large t is feasible; Max assumes boundedness
/// (pointed cone).
fn cone_shift(v: &[Rational], dir: &[Int], gens: &[Vec<Int>], sense: Sense) -> Result<Rational> {
    let n = v.len();
    let q = gens.len();
    let vars = 1 + q;
    let mut rows = Vec::new();
    for k in 0..n {
        let mut c = rat::zeros(vars);
        c[0] = rat::rat_of(&dir[k]);
        for (j, g) in gens.iter().enumerate() {
            c[1 + j] = -rat::rat_of(&g[k]);
        }
        rows.push(Constraint::new(c, Rel::Eq, -v[k].clone()));
    }
    for j in 0..vars {
        let mut c = rat::zeros(vars);
        c[j] = Rational::one();
        rows.push(Constraint::new(c, Rel::Ge, Rational::zero()));
    }
    let p = Polyhedron::new(vars, rows)?;
    let mut obj = rat::zeros(vars);
    obj[0] = Rational::one();
    let res = match sense {
        Sense::Min => lp::minimize(&p, &obj)?,
        Sense::Max => lp::maximize(&p, &obj)?,
    };
    match res {
        lp::LpResult::Optimal(o) => Ok(o.value),
        lp::LpResult::Unbounded(_) => Err(Error::Internal("cone shift unbounded".into())),
        lp::LpResult::Infeasible(_) => Err(Error::Internal("cone shift infeasible".into())),
    }
}

/// Sign class of a normal vector against a ray list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RaySignClass {
    /// Every α·r ≥ 0.
    Plus,
    /// Every α·r ≤ 0.
    Minus,
    /// Both strict signs occur.
    Mixed,
}

pub fn ray_sign_class(alpha: &[Int], rays: &[Vec<Int>]) -> RaySignClass {
    let mut has_pos = false;
    let mut has_neg = false;
    for r in rays {
        match rat::dot_int(alpha, r).sign() {
            num_bigint::Sign::Plus => has_pos = true,
            num_bigint::Sign::Minus => has_neg = true,
            num_bigint::Sign::NoSign => {}
        }
    }
    match (has_pos, has_neg) {
        (_, false) => RaySignClass::Plus,
        (false, true) => RaySignClass::Minus,
        (true, true) => RaySignClass::Mixed,
    }
}

/// Splits a family of normals by sign class: (plus, minus, mixed).
pub fn partition_by_ray_signs(
    alphas: &[Vec<Int>],
    rays: &[Vec<Int>],
) -> (Vec<Vec<Int>>, Vec<Vec<Int>>, Vec<Vec<Int>>) {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut mixed = Vec::new();
    for a in alphas {
        match ray_sign_class(a, rays) {
            RaySignClass::Plus => plus.push(a.clone()),
            RaySignClass::Minus => minus.push(a.clone()),
            RaySignClass::Mixed => mixed.push(a.clone()),
        }
    }
    (plus, minus, mixed)
}

/// Decomposition of (P, S) with nontrivial lineality into the span-relaxed
/// set plus a pointed subproblem in fewer variables: τ aligns the lineality
/// with the trailing coordinates, where τ(S) factors as T_c × Z^free and
/// τ(P) as Q × R^free.
#[derive(Debug, Clone)]
pub struct LinealitySplit {
    pub tau: UnimodularMap,
    /// Leading coordinates carrying the pointed part.
    pub n_pointed: usize,
    /// Trailing coordinates annihilated by every admissible cut normal.
    pub n_free: usize,
    /// Span relaxation of S, in the original coordinates.
    pub relaxed: SSpec,
    pub p_mapped: Polyhedron,
    /// Projection of τ(P) onto the leading coordinates.
    pub q: Polyhedron,
    /// τ(S) restricted to the leading coordinates; pointed.
    pub t_pointed: SSpec,
}

pub fn lineality_split(p: &Polyhedron, s: &SSpec, limits: &Limits) -> Result<LinealitySplit> {
    let n = s.dim();
    if p.dim() != n {
        return Err(Error::Shape("polyhedron and set dimensions differ".into()));
    }
    let lineality = &s.generators().lineality;
    let n_free = lineality.len();
    let n_pointed = n - n_free;
    let tau = map_lineality(lineality, n)?;
    let relaxed = s.span_relaxation(limits)?;
    let p_mapped = tau.apply_poly(p)?;
    let keep: Vec<usize> = (0..n_pointed).collect();
    let q = fm_project(&p_mapped, &keep)?;
    let t_pointed = if n_free == 0 {
        apply_to_sspec(&tau, s, limits)?
    } else {
        // Finite sets never carry lineality, so R exists here.
        let r = s.region().expect("lineality implies hull kind");
        let mapped_r = tau.apply_poly(r)?;
        SSpec::hull_of(fm_project(&mapped_r, &keep)?, limits)?
    };
    if !t_pointed.is_pointed() {
        return Err(Error::Internal("pointed part kept lineality".into()));
    }
    Ok(LinealitySplit {
        tau,
        n_pointed,
        n_free,
        relaxed,
        p_mapped,
        q,
        t_pointed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn aligned_generator_needs_no_motion() {
        let m = map_lineality(&[iv(&[0, 1])], 2).unwrap();
        assert_eq!(m, UnimodularMap::identity(2));
    }

    #[test]
    fn diagonal_generator_lands_on_last_axis() {
        let m = map_lineality(&[iv(&[1, 1])], 2).unwrap();
        let img = m.apply_direction(&iv(&[1, 1]));
        assert_eq!(img[0], int(0));
        assert_eq!(img[1].abs(), int(1));
    }

    #[test]
    fn full_span_and_empty_are_identity_class() {
        let m = map_lineality(&[iv(&[1, 0]), iv(&[0, 1])], 2).unwrap();
        assert_eq!(m, UnimodularMap::identity(2));
        let m = map_lineality(&[], 3).unwrap();
        assert_eq!(m, UnimodularMap::identity(3));
    }

    #[test]
    fn saturation_of_scaled_generators() {
        // (2, 4) spans the same line as (1, 2); the image must cover all of
        // the last axis, not an index-2 sublattice.
        let m = map_lineality(&[iv(&[2, 4])], 2).unwrap();
        let img = m.apply_direction(&iv(&[1, 2]));
        assert_eq!(img[0], int(0));
        assert_eq!(img[1].abs(), int(1));
    }

    #[test]
    fn normal_form_of_the_shifted_wedge() {
        // Hull vertices (-5,0), (-5,1), (-3,1) with recession ray (1,1).
        let verts: Vec<Vec<Rational>> = [[-5, 0], [-5, 1], [-3, 1]]
            .iter()
            .map(|v| v.iter().map(|&x| rat(x)).collect())
            .collect();
        let r = crate::ratpoly::hrep_from_generators(2, &verts, &[iv(&[1, 1])], &[]).unwrap();
        let s = SSpec::hull_of(r, &Limits::default()).unwrap();
        let (tau, image) = normalize_pointed(&s, &Limits::default()).unwrap();

        assert_eq!(tau.apply_int(&iv(&[-5, 0])), iv(&[1, 0]));
        let mut imgs: Vec<Vec<Int>> = s
            .generators()
            .vertices
            .iter()
            .map(|v| tau.apply_int(v))
            .collect();
        imgs.sort();
        assert_eq!(imgs, vec![iv(&[0, 1]), iv(&[1, 0]), iv(&[2, 1])]);
        let ray_img = tau.apply_direction(&iv(&[1, 1]));
        assert_eq!(ray_img, iv(&[0, 1]));
        assert_eq!(image.generators().rays, vec![iv(&[0, 1])]);
    }

    #[test]
    fn already_normal_sets_get_identity() {
        let r = Polyhedron::new(
            2,
            vec![
                Constraint::new(vec![rat(1), rat(0)], Rel::Ge, rat(0)),
                Constraint::new(vec![rat(0), rat(1)], Rel::Ge, rat(0)),
            ],
        )
        .unwrap();
        let s = SSpec::hull_of(r, &Limits::default()).unwrap();
        let (tau, image) = normalize_pointed(&s, &Limits::default()).unwrap();
        assert_eq!(tau, UnimodularMap::identity(2));
        assert_eq!(image.generators(), s.generators());
    }

    #[test]
    fn finite_sets_translate_into_the_orthant() {
        let s = SSpec::explicit(vec![iv(&[-1, 0]), iv(&[0, -1])]).unwrap();
        let (tau, image) = normalize_pointed(&s, &Limits::default()).unwrap();
        assert_eq!(tau.matrix(), &mat::identity(2));
        assert_eq!(tau.shift(), &iv(&[1, 1])[..]);
        assert_eq!(
            image.points().unwrap(),
            &[iv(&[0, 1]), iv(&[1, 0])]
        );
    }

    #[test]
    fn sign_classes_follow_the_products() {
        let rays = vec![iv(&[0, 1]), iv(&[1, 1])];
        assert_eq!(ray_sign_class(&iv(&[1, -1]), &rays), RaySignClass::Minus);
        assert_eq!(ray_sign_class(&iv(&[2, -1]), &rays), RaySignClass::Mixed);
        assert_eq!(ray_sign_class(&iv(&[1, 0]), &rays), RaySignClass::Plus);
        // No rays: everything counts as plus.
        assert_eq!(ray_sign_class(&iv(&[1, 0]), &[]), RaySignClass::Plus);
    }

    #[test]
    fn flips_negate_the_complement_and_square_to_identity() {
        let f = sign_flip(&[], 2, 3).unwrap();
        assert_eq!(f.apply_int(&iv(&[1, 2, 3])), iv(&[-1, -2, 3]));
        let g = sign_flip(&[0], 2, 3).unwrap();
        assert_eq!(g.apply_int(&iv(&[1, 2, 3])), iv(&[1, -2, 3]));
        assert_eq!(g.compose(&g), UnimodularMap::identity(3));
        let all = sign_flip(&[0, 1], 2, 2).unwrap();
        assert_eq!(all, UnimodularMap::identity(2));
    }

    #[test]
    fn split_of_a_horizontal_cylinder() {
        // S = Z x {0,1}: lineality e1, pointed part {0,1}.
        let r = Polyhedron::new(
            2,
            vec![
                Constraint::new(vec![rat(0), rat(1)], Rel::Ge, rat(0)),
                Constraint::new(vec![rat(0), rat(1)], Rel::Le, rat(1)),
            ],
        )
        .unwrap();
        let s = SSpec::hull_of(r.clone(), &Limits::default()).unwrap();
        let p = Polyhedron::new(
            2,
            vec![
                Constraint::new(vec![rat(1), rat(2)], Rel::Le, rat(3)),
                Constraint::new(vec![rat(0), rat(1)], Rel::Ge, rat(0)),
                Constraint::new(vec![rat(0), rat(1)], Rel::Le, rat(1)),
            ],
        )
        .unwrap();
        let split = lineality_split(&p, &s, &Limits::default()).unwrap();
        assert_eq!(split.n_free, 1);
        assert_eq!(split.n_pointed, 1);
        assert_eq!(
            split.t_pointed.generators().vertices,
            vec![iv(&[0]), iv(&[1])]
        );
        assert!(split.relaxed.contains(&iv(&[-50, 1])));
        assert!(!split.relaxed.contains(&iv(&[0, 2])));
        // The pointed coordinate is the old y, clamped to [0, 1].
        assert!(split.q.contains(&[rat(0)]) && split.q.contains(&[rat(1)]));
        assert!(!split.q.contains(&[rat(2)]));
    }

    #[test]
    fn split_without_lineality_degenerates() {
        let s = SSpec::explicit(vec![iv(&[0, 0]), iv(&[1, 1])]).unwrap();
        let p = Polyhedron::full_space(2);
        let split = lineality_split(&p, &s, &Limits::default()).unwrap();
        assert_eq!(split.n_free, 0);
        assert_eq!(split.tau, UnimodularMap::identity(2));
        assert!(split.q.same_set(&p).unwrap());
        assert_eq!(split.t_pointed.points(), s.points());
    }
}
