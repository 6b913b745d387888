//! Rational polyhedra in constraint form, plus the exact kernel operations
//! built on them (LP, Hermite normal form, projection, vertex enumeration).

mod dd;
mod fm;
pub mod lp;
mod unimodular;

pub use dd::{hrep_from_generators, vrep};
pub use fm::fm_project;
pub use unimodular::UnimodularMap;

use std::sync::OnceLock;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rat::{self, Int, Rational};

pub use crate::mat::{hnf, kernel_basis, Hnf};

/// Caps for the expensive enumerative operations. Callers thread one of
/// these through; there is no global state.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Vertex enumeration refuses dimensions above this.
    pub max_dim: usize,
    /// Lattice enumeration refuses boxes with more candidates than this.
    pub max_enum: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dim: 8,
            max_enum: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

impl Rel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Ge => ">=",
            Rel::Eq => "=",
        }
    }
}

/// One linear constraint `coeffs . x REL rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Rel,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, rel: Rel, rhs: Rational) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint::new(coeffs, Rel::Le, rhs)
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        let lhs = rat::dot(&self.coeffs, x);
        match self.rel {
            Rel::Le => lhs <= self.rhs,
            Rel::Ge => lhs >= self.rhs,
            Rel::Eq => lhs == self.rhs,
        }
    }
}

/// A rational polyhedron `{x : rows}` in fixed dimension. The cached V-rep
/// is its exact double description; it is filled lazily and shared.
#[derive(Debug)]
pub struct Polyhedron {
    dim: usize,
    rows: Vec<Constraint>,
    vrep_cache: OnceLock<VRep>,
    empty_cache: OnceLock<bool>,
}

impl Clone for Polyhedron {
    fn clone(&self) -> Self {
        let p = Polyhedron {
            dim: self.dim,
            rows: self.rows.clone(),
            vrep_cache: OnceLock::new(),
            empty_cache: OnceLock::new(),
        };
        if let Some(v) = self.vrep_cache.get() {
            let _ = p.vrep_cache.set(v.clone());
        }
        if let Some(e) = self.empty_cache.get() {
            let _ = p.empty_cache.set(*e);
        }
        p
    }
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rows == other.rows
    }
}
impl Eq for Polyhedron {}

impl Polyhedron {
    pub fn new(dim: usize, rows: Vec<Constraint>) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            if r.coeffs.len() != dim {
                return Err(Error::Shape(format!(
                    "row {} has {} coefficients, expected {}",
                    i,
                    r.coeffs.len(),
                    dim
                )));
            }
        }
        Ok(Polyhedron {
            dim,
            rows,
            vrep_cache: OnceLock::new(),
            empty_cache: OnceLock::new(),
        })
    }

    /// The whole space R^dim.
    pub fn full_space(dim: usize) -> Self {
        Polyhedron::new(dim, Vec::new()).expect("no rows")
    }

    /// Canonical empty polyhedron: { x : 0.x <= -1 }.
    pub fn empty(dim: usize) -> Self {
        Polyhedron::new(dim, vec![Constraint::le(rat::zeros(dim), rat::rat(-1))])
            .expect("well formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.rows.iter().all(|r| r.satisfied_by(x))
    }

    pub fn contains_int(&self, z: &[Int]) -> bool {
        let x = rat::int_to_rat_vec(z);
        self.contains(&x)
    }

    /// All constraints as `a.x <= b`: Ge rows negated, Eq rows split into a
    /// <= pair (<= first). Row order is deterministic.
    pub fn to_le_form(&self) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for row in &self.rows {
            match row.rel {
                Rel::Le => {
                    a.push(row.coeffs.clone());
                    b.push(row.rhs.clone());
                }
                Rel::Ge => {
                    a.push(row.coeffs.iter().map(|c| -c).collect());
                    b.push(-row.rhs.clone());
                }
                Rel::Eq => {
                    a.push(row.coeffs.clone());
                    b.push(row.rhs.clone());
                    a.push(row.coeffs.iter().map(|c| -c).collect());
                    b.push(-row.rhs.clone());
                }
            }
        }
        (a, b)
    }

    /// Same polyhedron with every row in <= orientation.
    pub fn as_le_polyhedron(&self) -> Polyhedron {
        let (a, b) = self.to_le_form();
        let rows = a
            .into_iter()
            .zip(b)
            .map(|(coeffs, rhs)| Constraint::le(coeffs, rhs))
            .collect();
        Polyhedron::new(self.dim, rows).expect("shapes preserved")
    }

    pub fn is_empty(&self) -> bool {
        *self.empty_cache.get_or_init(|| {
            matches!(
                lp::maximize(self, &rat::zeros(self.dim)),
                Ok(lp::LpResult::Infeasible(_))
            )
        })
    }

    /// Exact minimal V-representation, cached. The cap guards enumeration
    /// blowup in higher dimension.
    pub fn vrep(&self, limits: &Limits) -> Result<&VRep> {
        if self.dim > limits.max_dim {
            return Err(Error::DimensionCap {
                dim: self.dim,
                cap: limits.max_dim,
            });
        }
        if let Some(v) = self.vrep_cache.get() {
            return Ok(v);
        }
        let v = dd::vrep(self)?;
        Ok(self.vrep_cache.get_or_init(|| v))
    }

    pub fn intersection(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.dim != other.dim {
            return Err(Error::Shape(format!(
                "dimension mismatch: {} vs {}",
                self.dim, other.dim
            )));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Polyhedron::new(self.dim, rows)
    }

    pub fn with_rows(&self, extra: impl IntoIterator<Item = Constraint>) -> Result<Polyhedron> {
        let mut rows = self.rows.clone();
        rows.extend(extra);
        Polyhedron::new(self.dim, rows)
    }

    /// Is every point of `self` in `other`? Decided by one LP per row of
    /// `other`. Empty `self` is contained in everything.
    pub fn subset_of(&self, other: &Polyhedron) -> Result<bool> {
        if self.dim != other.dim {
            return Err(Error::Shape("dimension mismatch in containment".into()));
        }
        if self.is_empty() {
            return Ok(true);
        }
        let (a, b) = other.to_le_form();
        for (row, rhs) in a.iter().zip(&b) {
            match lp::maximize(self, row)? {
                lp::LpResult::Optimal(opt) => {
                    if opt.value > *rhs {
                        return Ok(false);
                    }
                }
                lp::LpResult::Unbounded(_) => return Ok(false),
                lp::LpResult::Infeasible(_) => return Ok(true),
            }
        }
        Ok(true)
    }

    pub fn same_set(&self, other: &Polyhedron) -> Result<bool> {
        Ok(self.subset_of(other)? && other.subset_of(self)?)
    }

    /// Canonical constraint form: every row scaled to primitive integral
    /// coefficients, trivial rows dropped (or collapsed to the canonical
    /// empty row), duplicates merged keeping the tightest rhs, rows sorted.
    /// The point set is unchanged.
    pub fn canonicalized(&self) -> Polyhedron {
        let mut le_rows: Vec<(Vec<Int>, Rational)> = Vec::new();
        let (a, b) = self.to_le_form();
        let mut empty = false;
        for (coeffs, rhs) in a.iter().zip(&b) {
            if rat::is_zero_vec(coeffs) {
                if rhs < &Rational::zero() {
                    empty = true;
                }
                continue;
            }
            let scale_src: Vec<Rational> = coeffs.clone();
            let prim = rat::primitive_int_vec(&scale_src).expect("nonzero row");
            // rhs scales by the same positive factor taking coeffs to prim.
            let k = (0..coeffs.len())
                .find(|&i| !coeffs[i].is_zero())
                .expect("nonzero row");
            let factor = rat::rat_of(&prim[k]) / &coeffs[k];
            let new_rhs = &rhs.clone() * &factor;
            le_rows.push((prim, new_rhs));
        }
        if empty {
            return Polyhedron::empty(self.dim);
        }
        le_rows.sort();
        le_rows.dedup_by(|next, prev| {
            if next.0 == prev.0 {
                // keep the smaller rhs (tighter <= row)
                if next.1 < prev.1 {
                    prev.1 = next.1.clone();
                }
                true
            } else {
                false
            }
        });
        let rows = le_rows
            .into_iter()
            .map(|(coeffs, rhs)| Constraint::le(rat::int_to_rat_vec(&coeffs), rhs))
            .collect();
        Polyhedron::new(self.dim, rows).expect("shapes preserved")
    }

    /// Removes rows implied by the remaining ones (exact LP tests), then
    /// canonicalizes. Deterministic: rows are examined in canonical order.
    pub fn irredundant(&self) -> Result<Polyhedron> {
        let canon = self.canonicalized();
        if canon.is_empty() {
            return Ok(Polyhedron::empty(self.dim));
        }
        let rows = canon.rows().to_vec();
        let mut keep: Vec<bool> = vec![true; rows.len()];
        for i in 0..rows.len() {
            keep[i] = false;
            let trial: Vec<Constraint> = rows
                .iter()
                .enumerate()
                .filter(|(j, _)| keep[*j])
                .map(|(_, r)| r.clone())
                .collect();
            let q = Polyhedron::new(self.dim, trial)?;
            let implied = match lp::maximize(&q, &rows[i].coeffs)? {
                lp::LpResult::Optimal(opt) => opt.value <= rows[i].rhs,
                lp::LpResult::Unbounded(_) => false,
                lp::LpResult::Infeasible(_) => true,
            };
            if !implied {
                keep[i] = true;
            }
        }
        let rows: Vec<Constraint> = rows
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(r, _)| r)
            .collect();
        Ok(Polyhedron::new(self.dim, rows)?.canonicalized())
    }
}

/// Minimal V-representation: conv(vertices) + cone(rays) + span(lineality).
/// Rays and lineality generators are primitive integral; everything is
/// sorted for reproducibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VRep {
    pub vertices: Vec<Vec<Rational>>,
    pub rays: Vec<Vec<Int>>,
    pub lineality: Vec<Vec<Int>>,
}

impl VRep {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }
}
