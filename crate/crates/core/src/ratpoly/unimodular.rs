//! Affine unimodular maps x -> Ux + v. They carry their exact inverse so
//! points, inequalities, and whole polyhedra move in either direction
//! without recomputation.

use crate::error::{Error, Result};
use crate::mat::{self, IMat};
use crate::rat::{self, Int, Rational};

use super::{Constraint, Polyhedron};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularMap {
    u: IMat,
    u_inv: IMat,
    v: Vec<Int>,
}

impl UnimodularMap {
    /// Builds the map x -> Ux + v; fails unless det(U) is +1 or -1.
    pub fn new(u: IMat, v: Vec<Int>) -> Result<Self> {
        if u.len() != v.len() || u.iter().any(|row| row.len() != v.len()) {
            return Err(Error::Shape("unimodular map needs a square matrix".into()));
        }
        let u_inv = mat::inv_unimodular(&u)?;
        Ok(UnimodularMap { u, u_inv, v })
    }

    pub fn identity(n: usize) -> Self {
        UnimodularMap {
            u: mat::identity(n),
            u_inv: mat::identity(n),
            v: rat::zeros_int(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn matrix(&self) -> &IMat {
        &self.u
    }

    pub fn matrix_inv(&self) -> &IMat {
        &self.u_inv
    }

    pub fn shift(&self) -> &[Int] {
        &self.v
    }

    /// The map y -> U^{-1}(y - v).
    pub fn inverse(&self) -> Self {
        let neg_v: Vec<Int> = self.v.iter().map(|x| -x).collect();
        UnimodularMap {
            u: self.u_inv.clone(),
            u_inv: self.u.clone(),
            v: mat::mat_vec(&self.u_inv, &neg_v),
        }
    }

    /// x -> self(other(x)).
    pub fn compose(&self, other: &Self) -> Self {
        let u = mat::mat_mul(&self.u, &other.u);
        let u_inv = mat::mat_mul(&other.u_inv, &self.u_inv);
        let mut v = mat::mat_vec(&self.u, &other.v);
        for (a, b) in v.iter_mut().zip(&self.v) {
            *a += b;
        }
        UnimodularMap { u, u_inv, v }
    }

    pub fn apply_int(&self, x: &[Int]) -> Vec<Int> {
        let mut y = mat::mat_vec(&self.u, x);
        for (a, b) in y.iter_mut().zip(&self.v) {
            *a += b;
        }
        y
    }

    pub fn apply_point(&self, x: &[Rational]) -> Vec<Rational> {
        let mut y = mat::mat_vec_rat(&self.u, x);
        for (a, b) in y.iter_mut().zip(&self.v) {
            *a += rat::rat_of(b);
        }
        y
    }

    pub fn unapply_point(&self, y: &[Rational]) -> Vec<Rational> {
        let shifted: Vec<Rational> = y
            .iter()
            .zip(&self.v)
            .map(|(a, b)| a - rat::rat_of(b))
            .collect();
        mat::mat_vec_rat(&self.u_inv, &shifted)
    }

    /// Direction vectors transform without the shift.
    pub fn apply_direction(&self, d: &[Int]) -> Vec<Int> {
        mat::mat_vec(&self.u, d)
    }

    /// Rewrites a . x <= b over x into a' . y <= b' over y = Ux + v:
    /// a' = a U^{-1}, b' = b + a' . v. Integral coefficients stay integral.
    pub fn apply_ineq(&self, a: &[Int], b: &Rational) -> (Vec<Int>, Rational) {
        let a_prime = row_times_mat(a, &self.u_inv);
        let b_prime = b + rat::rat_of(&rat::dot_int(&a_prime, &self.v));
        (a_prime, b_prime)
    }

    /// Image of a polyhedron under the map, row by row.
    pub fn apply_poly(&self, p: &Polyhedron) -> Result<Polyhedron> {
        let rows = p
            .rows()
            .iter()
            .map(|c| {
                let a_prime = row_times_mat_rat(&c.coeffs, &self.u_inv);
                let b_prime = &c.rhs
                    + a_prime
                        .iter()
                        .zip(&self.v)
                        .map(|(x, y)| x * rat::rat_of(y))
                        .sum::<Rational>();
                Constraint::new(a_prime, c.rel, b_prime)
            })
            .collect();
        Polyhedron::new(p.dim(), rows)
    }
}

fn row_times_mat(a: &[Int], m: &IMat) -> Vec<Int> {
    let n = m[0].len();
    (0..n)
        .map(|j| a.iter().zip(m).map(|(ai, row)| ai * &row[j]).sum())
        .collect()
}

fn row_times_mat_rat(a: &[Rational], m: &IMat) -> Vec<Rational> {
    let n = m[0].len();
    (0..n)
        .map(|j| {
            a.iter()
                .zip(m)
                .map(|(ai, row)| ai * rat::rat_of(&row[j]))
                .sum()
        })
        .collect()
}
