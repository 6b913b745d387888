//! Dense integer matrix helpers sized for desk-scale instances. Rows are
//! `Vec<Int>`; a matrix is a row-major `Vec<Vec<Int>>`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{rat_of, Int, Rational};

pub type IMat = Vec<Vec<Int>>;

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let inner = b.len();
    let m = if inner == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = Int::zero();
                    for (k, row_b) in b.iter().enumerate() {
                        acc += &a[i][k] * &row_b[j];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IMat, x: &[Int]) -> Vec<Int> {
    a.iter().map(|row| crate::rat::dot_int(row, x)).collect()
}

pub fn mat_vec_rat(a: &IMat, x: &[Rational]) -> Vec<Rational> {
    a.iter().map(|row| crate::rat::dot_mixed(row, x)).collect()
}

pub fn transpose(a: &IMat) -> IMat {
    if a.is_empty() {
        return Vec::new();
    }
    let m = a[0].len();
    (0..m)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Exact determinant by fraction-free elimination on a rational copy.
pub fn det(a: &IMat) -> Rational {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .map(|row| row.iter().map(rat_of).collect())
        .collect();
    let mut d = Rational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            d = -d;
        }
        let pv = m[col][col].clone();
        d *= &pv;
        for r in col + 1..n {
            let f = &m[r][col] / &pv;
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    d
}

/// Inverse of a unimodular matrix; fails if `det` is not +-1.
pub fn inv_unimodular(u: &IMat) -> Result<IMat> {
    let n = u.len();
    let d = det(u);
    if d != Rational::one() && d != -Rational::one() {
        return Err(Error::Shape(format!(
            "matrix is not unimodular (det = {})",
            crate::rat::fmt_rat(&d)
        )));
    }
    // Gauss-Jordan over rationals; the result is integral because det = +-1.
    let mut m: Vec<Vec<Rational>> = u
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational> = row.iter().map(rat_of).collect();
            for j in 0..n {
                r.push(if i == j { Rational::one() } else { Rational::zero() });
            }
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::Internal("unimodular matrix is singular".into()))?;
        m.swap(p, col);
        let pv = m[col][col].clone();
        for c in 0..2 * n {
            m[col][c] = &m[col][c] / &pv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..2 * n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for row in &m {
        let mut r = Vec::with_capacity(n);
        for c in n..2 * n {
            if !crate::rat::is_integral(&row[c]) {
                return Err(Error::Internal("unimodular inverse is not integral".into()));
            }
            r.push(row[c].to_integer());
        }
        out.push(r);
    }
    Ok(out)
}

/// Column-style Hermite normal form: H = M * U with U unimodular.
///
/// H is in column echelon form: pivot entries are positive, entries right of
/// a pivot are zero, and entries left of a pivot in its row are reduced into
/// [0, pivot). The trailing columns of U (past the rank) form a basis of the
/// saturated integer kernel of M.
pub struct Hnf {
    pub h: IMat,
    pub u: IMat,
    pub rank: usize,
}

pub fn hnf(m: &IMat) -> Hnf {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut h = m.clone();
    let mut u = identity(cols);
    let mut piv = 0usize;
    for i in 0..rows {
        if piv >= cols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in piv..cols {
                if h[i][j].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(j),
                    Some(b) => {
                        if h[i][j].abs() < h[i][b].abs() {
                            best = Some(j)
                        }
                    }
                }
            }
            let Some(b) = best else {
                break;
            };
            swap_cols(&mut h, &mut u, piv, b);
            let mut done = true;
            let pivot_val = h[i][piv].clone();
            for j in piv + 1..cols {
                if h[i][j].is_zero() {
                    continue;
                }
                let q = div_floor_int(&h[i][j], &pivot_val);
                if !q.is_zero() {
                    sub_scaled_col(&mut h, &mut u, j, piv, &q);
                }
                if !h[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[i][piv].is_zero() {
            continue;
        }
        if h[i][piv].is_negative() {
            negate_col(&mut h, &mut u, piv);
        }
        let pivot_val = h[i][piv].clone();
        for j in 0..piv {
            let q = div_floor_int(&h[i][j], &pivot_val);
            if !q.is_zero() {
                sub_scaled_col(&mut h, &mut u, j, piv, &q);
            }
        }
        piv += 1;
    }
    Hnf { h, u, rank: piv }
}

/// Basis of {x integral : M x = 0}, read off the trailing columns of U.
/// The basis is saturated: the kernel lattice equals its rational span
/// intersected with the integers.
pub fn kernel_basis(m: &IMat, cols: usize) -> Vec<Vec<Int>> {
    if m.is_empty() {
        return identity(cols);
    }
    let res = hnf(m);
    let u_t = transpose(&res.u);
    u_t[res.rank..].to_vec()
}

fn swap_cols(h: &mut IMat, u: &mut IMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in h.iter_mut() {
        row.swap(a, b);
    }
    for row in u.iter_mut() {
        row.swap(a, b);
    }
}

fn negate_col(h: &mut IMat, u: &mut IMat, c: usize) {
    for row in h.iter_mut() {
        let v = -row[c].clone();
        row[c] = v;
    }
    for row in u.iter_mut() {
        let v = -row[c].clone();
        row[c] = v;
    }
}

/// col_j -= q * col_src
fn sub_scaled_col(h: &mut IMat, u: &mut IMat, j: usize, src: usize, q: &Int) {
    for row in h.iter_mut() {
        let t = q * &row[src];
        row[j] -= t;
    }
    for row in u.iter_mut() {
        let t = q * &row[src];
        row[j] -= t;
    }
}

fn div_floor_int(a: &Int, b: &Int) -> Int {
    num_integer::Integer::div_floor(a, b)
}
