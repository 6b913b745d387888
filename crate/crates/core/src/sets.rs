//! Lattice-closed point sets S, given either as R ∩ Zⁿ for a rational
//! polyhedron R or as an explicit finite list. Construction eagerly computes
//! integral generators of conv(S) plus its exact constraint form, and rejects
//! empty sets.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mat;
use crate::rat::{self, Int, Rational};
use crate::ratpoly::{hrep_from_generators, lp, Constraint, Limits, Polyhedron, Rel};

/// Integral generators of conv(S): conv(vertices) + cone(rays) + span(lineality).
/// Vertices are points of S; rays and lineality are primitive and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generators {
    pub vertices: Vec<Vec<Int>>,
    pub rays: Vec<Vec<Int>>,
    pub lineality: Vec<Vec<Int>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SKind {
    /// S = R ∩ Zⁿ.
    Hull { r: Polyhedron },
    /// S given by an explicit finite list, sorted and deduplicated.
    Explicit { points: Vec<Vec<Int>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SSpec {
    dim: usize,
    kind: SKind,
    gens: Generators,
    hull: Polyhedron,
}

impl SSpec {
    /// S = R ∩ Zⁿ. Generators come from R's V-representation: recession
    /// directions carry over unchanged, vertex candidates are enumerated in
    /// the vertex box of R fattened by one generator cell, then pruned to the
    /// extreme ones. Fails with EmptySet when no lattice point is found.
    pub fn hull_of(r: Polyhedron, limits: &Limits) -> Result<Self> {
        let n = r.dim();
        let vr = r.vrep(limits)?.clone();
        if vr.is_empty() {
            return Err(Error::EmptySet);
        }

        let mut lo = vec![Int::zero(); n];
        let mut hi = vec![Int::zero(); n];
        for k in 0..n {
            let coords: Vec<Rational> = vr.vertices.iter().map(|v| v[k].clone()).collect();
            lo[k] = rat::floor_int(coords.iter().min().expect("nonempty"));
            hi[k] = rat::ceil_int(coords.iter().max().expect("nonempty"));
            for ray in &vr.rays {
                if ray[k].is_positive() {
                    hi[k] += &ray[k];
                } else {
                    lo[k] += &ray[k];
                }
            }
            for l in &vr.lineality {
                hi[k] += l[k].abs();
                lo[k] -= l[k].abs();
            }
        }
        let cand = lattice_points_in_box(&r, &lo, &hi, limits)?;
        if cand.is_empty() {
            return Err(Error::EmptySet);
        }
        let vertices = prune_to_extreme(cand, &vr.rays, &vr.lineality)?;
        let gens = Generators {
            vertices,
            rays: vr.rays.clone(),
            lineality: vr.lineality.clone(),
        };
        let hull = hull_of_generators(n, &gens)?;
        Ok(SSpec {
            dim: n,
            kind: SKind::Hull { r },
            gens,
            hull,
        })
    }

    /// Explicit finite S.
    pub fn explicit(mut points: Vec<Vec<Int>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        let n = points[0].len();
        if points.iter().any(|p| p.len() != n) {
            return Err(Error::Shape("points of mixed dimension".into()));
        }
        points.sort();
        points.dedup();
        let vertices = prune_to_extreme(points.clone(), &[], &[])?;
        let gens = Generators {
            vertices,
            rays: Vec::new(),
            lineality: Vec::new(),
        };
        let hull = hull_of_generators(n, &gens)?;
        Ok(SSpec {
            dim: n,
            kind: SKind::Explicit { points },
            gens,
            hull,
        })
    }

    /// S = Zⁿ.
    pub fn integers(n: usize, limits: &Limits) -> Result<Self> {
        Self::hull_of(Polyhedron::full_space(n), limits)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &SKind {
        &self.kind
    }

    pub fn generators(&self) -> &Generators {
        &self.gens
    }

    /// Exact constraint form of conv(S).
    pub fn hull(&self) -> &Polyhedron {
        &self.hull
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.kind, SKind::Explicit { .. })
    }

    pub fn points(&self) -> Option<&[Vec<Int>]> {
        match &self.kind {
            SKind::Explicit { points } => Some(points),
            SKind::Hull { .. } => None,
        }
    }

    /// The defining region R for S = R ∩ Zⁿ.
    pub fn region(&self) -> Option<&Polyhedron> {
        match &self.kind {
            SKind::Hull { r } => Some(r),
            SKind::Explicit { .. } => None,
        }
    }

    pub fn is_pointed(&self) -> bool {
        self.gens.lineality.is_empty()
    }

    pub fn contains(&self, z: &[Int]) -> bool {
        if z.len() != self.dim {
            return false;
        }
        match &self.kind {
            SKind::Hull { r } => r.contains_int(z),
            SKind::Explicit { points } => points.binary_search_by(|p| p[..].cmp(z)).is_ok(),
        }
    }

    /// Finite truncation S ∩ (conv(V) + {Σ μⱼ rʲ : 0 ≤ μⱼ ≤ cap}), enumerated
    /// exactly. Explicit sets come back unchanged; the set must have no
    /// lineality.
    pub fn truncated(&self, cap: &Int, limits: &Limits) -> Result<Self> {
        if self.is_explicit() {
            return Ok(self.clone());
        }
        if !self.is_pointed() {
            return Err(Error::Shape("truncation needs a pointed hull".into()));
        }
        if cap.is_negative() {
            return Err(Error::Shape("negative ray budget".into()));
        }
        let n = self.dim;
        let mut lo = vec![Int::zero(); n];
        let mut hi = vec![Int::zero(); n];
        for k in 0..n {
            lo[k] = self
                .gens
                .vertices
                .iter()
                .map(|v| v[k].clone())
                .min()
                .expect("nonempty");
            hi[k] = self
                .gens
                .vertices
                .iter()
                .map(|v| v[k].clone())
                .max()
                .expect("nonempty");
            for ray in &self.gens.rays {
                if ray[k].is_positive() {
                    hi[k] += cap * &ray[k];
                } else {
                    lo[k] += cap * &ray[k];
                }
            }
        }
        let cap_rat = rat::rat_of(cap);
        let mut picked = Vec::new();
        for z in lattice_points_in_box(self.must_r(), &lo, &hi, limits)? {
            if in_generated_region(
                &z,
                &self.gens.vertices,
                &self.gens.rays,
                Some(&cap_rat),
                &[],
            ) {
                picked.push(z);
            }
        }
        SSpec::explicit(picked)
    }

    /// Relaxation that replaces the conic part of conv(S) by its linear span:
    /// the result is a set of lattice points whose hull is a rational
    /// cylinder containing S.
    pub fn span_relaxation(&self, limits: &Limits) -> Result<Self> {
        let mut span: Vec<Vec<Int>> = self.gens.lineality.clone();
        span.extend(self.gens.rays.iter().cloned());
        let verts: Vec<Vec<Rational>> = self
            .gens
            .vertices
            .iter()
            .map(|v| rat::int_to_rat_vec(v))
            .collect();
        let relaxed = hrep_from_generators(self.dim, &verts, &[], &span)?;
        SSpec::hull_of(relaxed, limits)
    }

    fn must_r(&self) -> &Polyhedron {
        match &self.kind {
            SKind::Hull { r } => r,
            SKind::Explicit { .. } => unreachable!("explicit sets have no R"),
        }
    }
}

fn hull_of_generators(dim: usize, gens: &Generators) -> Result<Polyhedron> {
    let verts: Vec<Vec<Rational>> = gens.vertices.iter().map(|v| rat::int_to_rat_vec(v)).collect();
    hrep_from_generators(dim, &verts, &gens.rays, &gens.lineality)
}

/// All points of R ∩ Zⁿ inside [lo, hi], lexicographically sorted. Refuses
/// boxes whose raw point count exceeds the enumeration cap.
pub fn lattice_points_in_box(
    r: &Polyhedron,
    lo: &[Int],
    hi: &[Int],
    limits: &Limits,
) -> Result<Vec<Vec<Int>>> {
    let n = r.dim();
    if lo.len() != n || hi.len() != n {
        return Err(Error::Shape("box bounds of wrong dimension".into()));
    }
    let mut estimate = BigInt::one();
    for k in 0..n {
        let w: Int = &hi[k] - &lo[k] + 1;
        if !w.is_positive() {
            return Ok(Vec::new());
        }
        estimate *= w;
    }
    if estimate > BigInt::from(limits.max_enum) {
        return Err(Error::BoxTooLarge {
            estimate: estimate.to_string(),
            cap: limits.max_enum,
        });
    }

    let mut out = Vec::new();
    let mut cur: Vec<Int> = lo.to_vec();
    loop {
        if r.contains_int(&cur) {
            out.push(cur.clone());
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] <= hi[k] {
                break;
            }
            cur[k] = lo[k].clone();
        }
    }
}

/// Feasibility of z ∈ conv(verts) + {Σ μⱼ rⱼ : μ ≥ 0, μ ≤ cap if given} +
/// span(lin), decided by one exact LP.
fn in_generated_region(
    z: &[Int],
    verts: &[Vec<Int>],
    rays: &[Vec<Int>],
    ray_cap: Option<&Rational>,
    lin: &[Vec<Int>],
) -> bool {
    if verts.is_empty() {
        return false;
    }
    let n = z.len();
    let (g, h, l) = (verts.len(), rays.len(), lin.len());
    let vars = g + h + l;
    let mut rows: Vec<Constraint> = Vec::new();
    for k in 0..n {
        let mut c = rat::zeros(vars);
        for (i, v) in verts.iter().enumerate() {
            c[i] = rat::rat_of(&v[k]);
        }
        for (j, ray) in rays.iter().enumerate() {
            c[g + j] = rat::rat_of(&ray[k]);
        }
        for (t, dir) in lin.iter().enumerate() {
            c[g + h + t] = rat::rat_of(&dir[k]);
        }
        rows.push(Constraint::new(c, Rel::Eq, rat::rat_of(&z[k])));
    }
    let mut ones = rat::zeros(vars);
    for i in 0..g {
        ones[i] = Rational::one();
    }
    rows.push(Constraint::new(ones, Rel::Eq, Rational::one()));
    for i in 0..g + h {
        let mut c = rat::zeros(vars);
        c[i] = Rational::one();
        rows.push(Constraint::new(c, Rel::Ge, Rational::zero()));
    }
    if let Some(cap) = ray_cap {
        for j in 0..h {
            let mut c = rat::zeros(vars);
            c[g + j] = Rational::one();
            rows.push(Constraint::new(c, Rel::Le, cap.clone()));
        }
    }
    let p = Polyhedron::new(vars, rows).expect("consistent shapes");
    matches!(
        lp::maximize(&p, &rat::zeros(vars)),
        Ok(lp::LpResult::Optimal(_))
    )
}

/// Keeps a minimal generating subset: the hull of all candidates is built
/// once and a candidate survives exactly when it lies on a minimal face,
/// with one representative per face. A candidate's minimal face is cut out
/// by its tight rows, so it is minimal iff those rows reach the maximal
/// rank n - dim(lineality); candidates on a common face share a tight set.
fn prune_to_extreme(
    cand: Vec<Vec<Int>>,
    rays: &[Vec<Int>],
    lin: &[Vec<Int>],
) -> Result<Vec<Vec<Int>>> {
    if cand.len() <= 1 {
        return Ok(cand);
    }
    let n = cand[0].len();
    let verts: Vec<Vec<Rational>> = cand.iter().map(|v| rat::int_to_rat_vec(v)).collect();
    let q = hrep_from_generators(n, &verts, rays, lin)?;
    let normals: Vec<Vec<Int>> = q
        .rows()
        .iter()
        .filter_map(|row| rat::primitive_int_vec(&row.coeffs))
        .collect();
    let target_rank = mat::hnf(&normals).rank;

    let norm_key = |z: &Vec<Int>| (z.iter().map(|x| x.abs()).sum::<Int>(), z.clone());
    let mut best: BTreeMap<Vec<usize>, Vec<Int>> = BTreeMap::new();
    for z in cand {
        let zr = rat::int_to_rat_vec(&z);
        let mut tight_idx = Vec::new();
        let mut tight_rows: Vec<Vec<Int>> = Vec::new();
        for (i, row) in q.rows().iter().enumerate() {
            if rat::dot(&row.coeffs, &zr) == row.rhs {
                tight_idx.push(i);
                if let Some(v) = rat::primitive_int_vec(&row.coeffs) {
                    tight_rows.push(v);
                }
            }
        }
        if mat::hnf(&tight_rows).rank != target_rank {
            continue;
        }
        match best.entry(tight_idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(z);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                if norm_key(&z) < norm_key(e.get()) {
                    e.insert(z);
                }
            }
        }
    }
    let mut kept: Vec<Vec<Int>> = best.into_values().collect();
    kept.sort();
    Ok(kept)
}
