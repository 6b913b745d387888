//! Double description over rational cones. One kernel serves both
//! directions: constraint form to generators (vertex enumeration after
//! homogenization) and generators to constraint form (via the cone of valid
//! inequalities).

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{self, Int, Rational};

use super::{Constraint, Polyhedron, Rel, VRep};

/// Tight-constraint index set for one ray, packed into u64 blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ZeroSet {
    blocks: Vec<u64>,
}

impl ZeroSet {
    fn new(nbits: usize) -> Self {
        ZeroSet {
            blocks: vec![0; nbits.div_ceil(64)],
        }
    }

    fn set(&mut self, i: usize) {
        self.blocks[i / 64] |= 1u64 << (i % 64);
    }

    fn intersect(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn is_subset_of(&self, other: &ZeroSet) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }
}

#[derive(Debug, Clone)]
struct Ray {
    v: Vec<Rational>,
    zero: ZeroSet,
}

/// Generators of the cone { y : c . y <= 0 for every c in constraints }.
/// Returns (rays, lineality) with primitive integral entries.
fn cone_generators(dim: usize, constraints: &[Vec<Rational>]) -> (Vec<Vec<Int>>, Vec<Vec<Int>>) {
    let total = constraints.len();
    let mut lineality: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut e = rat::zeros(dim);
            e[i] = Rational::one();
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (idx, c) in constraints.iter().enumerate() {
        let lin_hit = lineality.iter().position(|l| !rat::dot(c, l).is_zero());
        if let Some(pos) = lin_hit {
            // One lineality direction leaves the kernel of c; it becomes the
            // ray pointing into the feasible side.
            let l0 = lineality.remove(pos);
            let cd = rat::dot(c, &l0);
            let d = if cd.is_positive() {
                l0.iter().map(|x| -x).collect::<Vec<_>>()
            } else {
                l0
            };
            let cd = rat::dot(c, &d);
            for l in lineality.iter_mut() {
                let f = rat::dot(c, l) / &cd;
                if !f.is_zero() {
                    *l = rat::sub_vec(l, &rat::scale_vec(&f, &d));
                }
            }
            for r in rays.iter_mut() {
                let f = rat::dot(c, &r.v) / &cd;
                if !f.is_zero() {
                    r.v = rat::sub_vec(&r.v, &rat::scale_vec(&f, &d));
                }
                r.zero.set(idx);
                normalize_ray(&mut r.v);
            }
            let mut dz = ZeroSet::new(total);
            for j in 0..idx {
                dz.set(j);
            }
            let mut dv = d;
            normalize_ray(&mut dv);
            rays.push(Ray { v: dv, zero: dz });
            continue;
        }

        let vals: Vec<Rational> = rays.iter().map(|r| rat::dot(c, &r.v)).collect();
        if vals.iter().all(|v| !v.is_positive()) {
            for (r, val) in rays.iter_mut().zip(&vals) {
                if val.is_zero() {
                    r.zero.set(idx);
                }
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        for (r, val) in rays.iter().zip(&vals) {
            if !val.is_positive() {
                let mut nr = r.clone();
                if val.is_zero() {
                    nr.zero.set(idx);
                }
                next.push(nr);
            }
        }
        for (pi, pv) in vals.iter().enumerate() {
            if !pv.is_positive() {
                continue;
            }
            for (ni, nv) in vals.iter().enumerate() {
                if !nv.is_negative() {
                    continue;
                }
                let meet = rays[pi].zero.intersect(&rays[ni].zero);
                let adjacent = !rays.iter().enumerate().any(|(k, other)| {
                    k != pi && k != ni && meet.is_subset_of(&other.zero)
                });
                if !adjacent {
                    continue;
                }
                // pv * neg - nv * pos kills c and keeps both cone sides.
                let mut w = rat::sub_vec(
                    &rat::scale_vec(pv, &rays[ni].v),
                    &rat::scale_vec(nv, &rays[pi].v),
                );
                normalize_ray(&mut w);
                if w.iter().all(Zero::is_zero) {
                    continue;
                }
                let mut z = meet.clone();
                z.set(idx);
                if next.iter().any(|r| r.v == w) {
                    continue;
                }
                next.push(Ray { v: w, zero: z });
            }
        }
        rays = next;
    }

    let mut out_rays: Vec<Vec<Int>> = rays
        .iter()
        .filter_map(|r| rat::primitive_int_vec(&r.v))
        .collect();
    out_rays.sort();
    out_rays.dedup();
    let lin = canonical_lattice_basis(
        lineality
            .iter()
            .filter_map(|l| rat::primitive_int_vec(l))
            .collect(),
        dim,
    );
    (out_rays, lin)
}

fn normalize_ray(v: &mut Vec<Rational>) {
    if let Some(p) = rat::primitive_int_vec(v) {
        *v = rat::int_to_rat_vec(&p);
    }
}

/// Canonical basis of the lattice spanned by `gens`: column HNF, nonzero
/// columns, sorted.
fn canonical_lattice_basis(gens: Vec<Vec<Int>>, dim: usize) -> Vec<Vec<Int>> {
    if gens.is_empty() {
        return Vec::new();
    }
    let cols: Vec<Vec<Int>> = gens; // one generator per row -> transpose below
    let mut m: Vec<Vec<Int>> = vec![vec![Int::zero(); cols.len()]; dim];
    for (j, g) in cols.iter().enumerate() {
        for i in 0..dim {
            m[i][j] = g[i].clone();
        }
    }
    let res = crate::mat::hnf(&m);
    let mut basis: Vec<Vec<Int>> = Vec::new();
    for j in 0..res.rank {
        basis.push((0..dim).map(|i| res.h[i][j].clone()).collect());
    }
    basis.sort();
    basis
}

/// Exact minimal V-representation by double description on the homogenized
/// cone. Constraints are inserted in lexicographic order.
pub fn vrep(p: &Polyhedron) -> Result<VRep> {
    if p.is_empty() {
        return Ok(VRep {
            vertices: Vec::new(),
            rays: Vec::new(),
            lineality: Vec::new(),
        });
    }
    let n = p.dim();
    let (a, b) = p.to_le_form();
    let mut constraints: Vec<Vec<Rational>> = Vec::new();
    for (row, rhs) in a.iter().zip(&b) {
        let mut c = row.clone();
        c.push(-rhs.clone());
        constraints.push(c);
    }
    let mut tcol = rat::zeros(n + 1);
    tcol[n] = -Rational::one();
    constraints.push(tcol);
    constraints.sort();
    constraints.dedup();

    let (gen_rays, gen_lin) = cone_generators(n + 1, &constraints);

    let mut lineality: Vec<Vec<Int>> = Vec::new();
    for l in &gen_lin {
        if !l[n].is_zero() {
            return Err(Error::Internal("vrep: lineality escapes t = 0".into()));
        }
        lineality.push(l[..n].to_vec());
    }
    let lineality = canonical_lattice_basis(lineality, n);

    let mut vertices: Vec<Vec<Rational>> = Vec::new();
    let mut rays: Vec<Vec<Int>> = Vec::new();
    for g in &gen_rays {
        let t = &g[n];
        if t.is_zero() {
            rays.push(g[..n].to_vec());
        } else if t.is_positive() {
            vertices.push(rat::div_int_vec(&g[..n], t));
        } else {
            return Err(Error::Internal("vrep: generator with negative t".into()));
        }
    }

    // Canonical representatives modulo the lineality space.
    if !lineality.is_empty() {
        for v in vertices.iter_mut() {
            *v = project_off(v, &lineality);
        }
        let mut new_rays = Vec::new();
        for r in &rays {
            let pr = project_off(&rat::int_to_rat_vec(r), &lineality);
            if let Some(p) = rat::primitive_int_vec(&pr) {
                new_rays.push(p);
            }
        }
        rays = new_rays;
    }
    vertices.sort();
    vertices.dedup();
    rays.sort();
    rays.dedup();

    let out = VRep {
        vertices,
        rays,
        lineality,
    };
    verify_vrep(p, &out)?;
    Ok(out)
}

/// Orthogonal projection of x onto the complement of span(basis), exact.
fn project_off(x: &[Rational], basis: &[Vec<Int>]) -> Vec<Rational> {
    let k = basis.len();
    // Solve (B B^T) g = B x, then x - B^T g.
    let mut gram: Vec<Vec<Rational>> = vec![rat::zeros(k + 1); k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = rat::rat_of(&rat::dot_int(&basis[i], &basis[j]));
        }
        gram[i][k] = rat::dot_mixed(&basis[i], x);
    }
    // Gaussian elimination; the Gram matrix of independent vectors is
    // invertible.
    for col in 0..k {
        let piv = (col..k)
            .find(|&r| !gram[r][col].is_zero())
            .expect("independent basis");
        gram.swap(col, piv);
        let pv = gram[col][col].clone();
        for c in col..=k {
            gram[col][c] = &gram[col][c] / &pv;
        }
        for r in 0..k {
            if r == col || gram[r][col].is_zero() {
                continue;
            }
            let f = gram[r][col].clone();
            for c in col..=k {
                let t = &f * &gram[col][c];
                gram[r][c] -= t;
            }
        }
    }
    let mut out = x.to_vec();
    for i in 0..k {
        let g = gram[i][k].clone();
        for (o, b) in out.iter_mut().zip(&basis[i]) {
            *o -= &g * &rat::rat_of(b);
        }
    }
    out
}

fn verify_vrep(p: &Polyhedron, v: &VRep) -> Result<()> {
    let (a, b) = p.to_le_form();
    for vert in &v.vertices {
        if !p.contains(vert) {
            return Err(Error::Internal("vrep: vertex outside polyhedron".into()));
        }
    }
    for ray in &v.rays {
        for row in &a {
            if rat::dot_mixed(ray, row).is_positive() {
                return Err(Error::Internal("vrep: ray leaves polyhedron".into()));
            }
        }
    }
    for l in &v.lineality {
        for row in &a {
            if !rat::dot_mixed(l, row).is_zero() {
                return Err(Error::Internal("vrep: lineality not invariant".into()));
            }
        }
    }
    if v.vertices.is_empty() && !(p.is_empty() || p.dim() == 0) {
        return Err(Error::Internal("vrep: nonempty polyhedron without vertices".into()));
    }
    let _ = b;
    Ok(())
}

/// Minimal constraint form of conv(vertices) + cone(rays) + span(lineality).
/// Inequalities come out as `a . x <= b` rows, implicit equalities as `=`
/// rows; all rows primitive and sorted.
pub fn hrep_from_generators(
    dim: usize,
    vertices: &[Vec<Rational>],
    rays: &[Vec<Int>],
    lineality: &[Vec<Int>],
) -> Result<Polyhedron> {
    if vertices.is_empty() {
        return Ok(Polyhedron::empty(dim));
    }
    // A pair (a, b) gives a valid inequality a.x <= b iff
    //   a.v - b <= 0  for all vertices,
    //   a.r <= 0      for all rays,
    //   a.l == 0      for all lineality directions.
    let mut constraints: Vec<Vec<Rational>> = Vec::new();
    for v in vertices {
        let mut c = v.clone();
        c.push(-Rational::one());
        constraints.push(c);
    }
    for r in rays {
        let mut c = rat::int_to_rat_vec(r);
        c.push(Rational::zero());
        constraints.push(c);
    }
    for l in lineality {
        for sign in [1i64, -1] {
            let s = rat::rat(sign);
            let mut c: Vec<Rational> = l.iter().map(|x| &s * &rat::rat_of(x)).collect();
            c.push(Rational::zero());
            constraints.push(c);
        }
    }
    constraints.sort();
    constraints.dedup();

    let (gen_rays, gen_lin) = cone_generators(dim + 1, &constraints);

    let mut rows: Vec<Constraint> = Vec::new();
    for g in &gen_rays {
        let coeffs = g[..dim].to_vec();
        if rat::is_zero_vec_int(&coeffs) {
            // (0, b) with b >= 0 is the trivial inequality 0 <= b.
            if g[dim].is_negative() {
                return Err(Error::Internal("hrep: empty certificate on nonempty input".into()));
            }
            continue;
        }
        rows.push(Constraint::new(
            rat::int_to_rat_vec(&coeffs),
            Rel::Le,
            rat::rat_of(&g[dim]),
        ));
    }
    for g in &gen_lin {
        let coeffs = g[..dim].to_vec();
        if rat::is_zero_vec_int(&coeffs) {
            continue;
        }
        rows.push(Constraint::new(
            rat::int_to_rat_vec(&coeffs),
            Rel::Eq,
            rat::rat_of(&g[dim]),
        ));
    }
    rows.sort_by(|x, y| {
        (&x.coeffs, &x.rhs, x.rel.as_str()).cmp(&(&y.coeffs, &y.rhs, y.rel.as_str()))
    });
    Polyhedron::new(dim, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int, rat};
    use crate::ratpoly::Limits;

    fn poly(dim: usize, rows: Vec<(Vec<i64>, Rel, Rational)>) -> Polyhedron {
        let rows = rows
            .into_iter()
            .map(|(c, rel, rhs)| Constraint::new(c.into_iter().map(rat).collect(), rel, rhs))
            .collect();
        Polyhedron::new(dim, rows).unwrap()
    }

    #[test]
    fn unit_square() {
        let p = poly(
            2,
            vec![
                (vec![1, 0], Rel::Le, rat(1)),
                (vec![0, 1], Rel::Le, rat(1)),
                (vec![1, 0], Rel::Ge, rat(0)),
                (vec![0, 1], Rel::Ge, rat(0)),
            ],
        );
        let v = p.vrep(&Limits::default()).unwrap();
        assert_eq!(v.vertices.len(), 4);
        assert!(v.rays.is_empty() && v.lineality.is_empty());
        assert_eq!(v.vertices[0], vec![rat(0), rat(0)]);
        assert_eq!(v.vertices[3], vec![rat(1), rat(1)]);
    }

    #[test]
    fn wedge_with_ray_and_fractional_vertex() {
        // x >= 1/2, y >= x: vertex (1/2, 1/2), rays (0,1) and (1,1).
        let p = poly(
            2,
            vec![
                (vec![1, 0], Rel::Ge, frac(1, 2)),
                (vec![-1, 1], Rel::Ge, rat(0)),
            ],
        );
        let v = p.vrep(&Limits::default()).unwrap();
        assert_eq!(v.vertices, vec![vec![frac(1, 2), frac(1, 2)]]);
        assert_eq!(
            v.rays,
            vec![vec![int(0), int(1)], vec![int(1), int(1)]]
        );
    }

    #[test]
    fn lineality_line() {
        // { (x, y) : y = 2 } has lineality e1.
        let p = poly(2, vec![(vec![0, 1], Rel::Eq, rat(2))]);
        let v = p.vrep(&Limits::default()).unwrap();
        assert_eq!(v.lineality, vec![vec![int(1), int(0)]]);
        assert_eq!(v.vertices, vec![vec![rat(0), rat(2)]]);
        assert!(v.rays.is_empty());
    }

    #[test]
    fn whole_space_and_empty() {
        let p = Polyhedron::full_space(2);
        let v = p.vrep(&Limits::default()).unwrap();
        assert_eq!(v.vertices, vec![vec![rat(0), rat(0)]]);
        assert_eq!(v.lineality.len(), 2);

        let e = Polyhedron::empty(2);
        let v = e.vrep(&Limits::default()).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn hull_round_trip() {
        let p = poly(
            2,
            vec![
                (vec![1, 1], Rel::Le, rat(3)),
                (vec![1, 0], Rel::Ge, rat(0)),
                (vec![0, 1], Rel::Ge, rat(0)),
                (vec![-1, 2], Rel::Le, rat(4)),
            ],
        );
        let v = p.vrep(&Limits::default()).unwrap();
        let q = hrep_from_generators(2, &v.vertices, &v.rays, &v.lineality).unwrap();
        assert!(p.same_set(&q).unwrap());
    }

    #[test]
    fn hull_of_explicit_points() {
        let pts: Vec<Vec<Rational>> = vec![
            vec![rat(0), rat(0)],
            vec![rat(1), rat(0)],
            vec![rat(0), rat(1)],
            vec![rat(1), rat(1)],
        ];
        let q = hrep_from_generators(2, &pts, &[], &[]).unwrap();
        assert!(q.contains(&[frac(1, 2), frac(1, 2)]));
        assert!(!q.contains(&[rat(2), rat(0)]));
        assert_eq!(q.rows().len(), 4);
    }

    #[test]
    fn dimension_cap_enforced() {
        let p = Polyhedron::full_space(9);
        match p.vrep(&Limits::default()) {
            Err(Error::DimensionCap { dim: 9, cap: 8 }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
    }
}
