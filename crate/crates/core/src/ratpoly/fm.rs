//! Fourier-Motzkin elimination with exact LP pruning between steps.

use num_bigint::Sign;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{self, Rational};

use super::{Constraint, Polyhedron, Rel};

/// Projects `p` onto the coordinates listed in `keep` (strictly increasing
/// indices). The result lives in `keep.len()` dimensions, ordered as given.
pub fn fm_project(p: &Polyhedron, keep: &[usize]) -> Result<Polyhedron> {
    let n = p.dim();
    for w in keep.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Shape("keep indices must be strictly increasing".into()));
        }
    }
    if keep.iter().any(|&i| i >= n) {
        return Err(Error::Shape("keep index out of range".into()));
    }

    let (a, b) = p.to_le_form();
    let mut rows: Vec<(Vec<Rational>, Rational)> = a.into_iter().zip(b).collect();

    let drop: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    let mut live: Vec<usize> = (0..n).collect();
    for &col in &drop {
        let pos = live.iter().position(|&c| c == col).unwrap();
        rows = eliminate(rows, pos);
        live.remove(pos);
        match prune(live.len(), rows) {
            Pruned::Rows(r) => rows = r,
            Pruned::Empty => return Ok(Polyhedron::empty(keep.len())),
        }
    }

    let out_rows = rows
        .into_iter()
        .map(|(c, rhs)| Constraint::new(c, Rel::Le, rhs))
        .collect();
    Ok(Polyhedron::new(keep.len(), out_rows)?.canonicalized())
}

fn eliminate(
    rows: Vec<(Vec<Rational>, Rational)>,
    col: usize,
) -> Vec<(Vec<Rational>, Rational)> {
    let mut zero = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (c, rhs) in rows {
        match rat::sign_of(&c[col]) {
            Sign::NoSign => zero.push((without(&c, col), rhs)),
            Sign::Plus => pos.push((c, rhs)),
            Sign::Minus => neg.push((c, rhs)),
        }
    }
    let mut out = zero;
    for (pc, pb) in &pos {
        for (nc, nb) in &neg {
            // Scale so the eliminated coefficients are +1 and -1, then add.
            let ps = &pc[col];
            let ns = -&nc[col];
            let mut c = Vec::with_capacity(pc.len() - 1);
            for (j, (pj, nj)) in pc.iter().zip(nc).enumerate() {
                if j == col {
                    continue;
                }
                c.push(pj / ps + nj / &ns);
            }
            let rhs = pb / ps + nb / &ns;
            out.push((c, rhs));
        }
    }
    out
}

fn without(c: &[Rational], col: usize) -> Vec<Rational> {
    c.iter()
        .enumerate()
        .filter(|(j, _)| *j != col)
        .map(|(_, x)| x.clone())
        .collect()
}

enum Pruned {
    Rows(Vec<(Vec<Rational>, Rational)>),
    Empty,
}

/// Drops trivial and LP-redundant rows; detects infeasibility early.
fn prune(dim: usize, rows: Vec<(Vec<Rational>, Rational)>) -> Pruned {
    let mut kept: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for (c, rhs) in rows {
        if c.iter().all(Zero::is_zero) {
            if rhs.is_negative() {
                return Pruned::Empty;
            }
            continue;
        }
        kept.push((c, rhs));
    }
    // Scale to primitive form and dedupe, keeping the tightest right side.
    for (c, rhs) in kept.iter_mut() {
        if let Some(p) = rat::primitive_int_vec(c) {
            let j = p.iter().position(|x| !x.is_zero()).unwrap();
            let factor = &c[j] / rat::rat_of(&p[j]);
            *c = rat::int_to_rat_vec(&p);
            *rhs = &*rhs / &factor;
        }
    }
    kept.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
    kept.dedup_by(|a, b| a.0 == b.0 && a.1 >= b.1);

    let as_poly = |rows: &[(Vec<Rational>, Rational)]| {
        Polyhedron::new(
            dim,
            rows.iter()
                .map(|(c, rhs)| Constraint::new(c.clone(), Rel::Le, rhs.clone()))
                .collect(),
        )
        .expect("consistent shapes")
    };
    if as_poly(&kept).is_empty() {
        return Pruned::Empty;
    }
    // One LP per row: drop it when the remaining rows already imply it.
    let mut i = 0;
    while i < kept.len() {
        if kept.len() == 1 {
            break;
        }
        let mut rest = kept.clone();
        let (c, rhs) = rest.remove(i);
        let rest_poly = as_poly(&rest);
        let implied = match super::lp::maximize(&rest_poly, &c) {
            Ok(super::lp::LpResult::Optimal(o)) => o.value <= rhs,
            Ok(_) => false,
            Err(_) => false,
        };
        if implied {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    Pruned::Rows(kept)
}
