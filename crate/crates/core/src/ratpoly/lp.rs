//! Exact rational LP over constraint-form polyhedra.
//!
//! Two-phase primal simplex with Bland's rule on a dense tableau. Free
//! variables are split into positive and negative parts, the system is put
//! in `A y <= h, y >= 0` form, and every certificate (optimal duals, rays,
//! Farkas vectors) is re-verified exactly before it is returned.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{self, Rational};

use super::Polyhedron;

/// Proof of optimality: `dual >= 0`, `dual^T A = objective` and
/// `dual^T b = value` over the <=-form rows of the polyhedron.
#[derive(Debug, Clone)]
pub struct Optimum {
    pub value: Rational,
    pub point: Vec<Rational>,
    pub dual: Vec<Rational>,
}

/// Feasible point plus an improving recession direction.
#[derive(Debug, Clone)]
pub struct UnboundedRay {
    pub point: Vec<Rational>,
    pub direction: Vec<Rational>,
}

/// Infeasibility certificate over the <=-form rows:
/// `y >= 0`, `y^T A = 0`, `y^T b < 0`.
#[derive(Debug, Clone)]
pub struct Farkas {
    pub multipliers: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub enum LpResult {
    Optimal(Optimum),
    Unbounded(UnboundedRay),
    Infeasible(Farkas),
}

/// max { obj . x : x in p }. Certificates refer to `p.to_le_form()` rows.
pub fn maximize(p: &Polyhedron, obj: &[Rational]) -> Result<LpResult> {
    if obj.len() != p.dim() {
        return Err(Error::Shape(format!(
            "objective has {} entries, polyhedron dimension is {}",
            obj.len(),
            p.dim()
        )));
    }
    let (a, b) = p.to_le_form();
    let res = simplex(&a, &b, obj, p.dim())?;
    verify(&a, &b, obj, &res)?;
    Ok(res)
}

/// min { obj . x : x in p } as `-max(-obj)`. In the optimal case the
/// returned `value`/`point` are for the minimum, while `dual` certifies the
/// underlying maximization: `dual^T A = -obj`, `dual^T b = -value`.
pub fn minimize(p: &Polyhedron, obj: &[Rational]) -> Result<LpResult> {
    let neg: Vec<Rational> = obj.iter().map(|c| -c).collect();
    Ok(match maximize(p, &neg)? {
        LpResult::Optimal(o) => LpResult::Optimal(Optimum {
            value: -o.value,
            point: o.point,
            dual: o.dual,
        }),
        LpResult::Unbounded(r) => LpResult::Unbounded(r),
        LpResult::Infeasible(f) => LpResult::Infeasible(f),
    })
}

fn verify(
    a: &[Vec<Rational>],
    b: &[Rational],
    obj: &[Rational],
    res: &LpResult,
) -> Result<()> {
    let feasible = |x: &[Rational]| -> bool {
        a.iter()
            .zip(b)
            .all(|(row, rhs)| rat::dot(row, x) <= *rhs)
    };
    match res {
        LpResult::Optimal(o) => {
            if !feasible(&o.point) {
                return Err(Error::Internal("lp: optimal point infeasible".into()));
            }
            if rat::dot(obj, &o.point) != o.value {
                return Err(Error::Internal("lp: optimal value mismatch".into()));
            }
            if o.dual.len() != a.len() || o.dual.iter().any(Signed::is_negative) {
                return Err(Error::Internal("lp: dual has a negative entry".into()));
            }
            for j in 0..obj.len() {
                let mut acc = Rational::zero();
                for (i, row) in a.iter().enumerate() {
                    acc += &o.dual[i] * &row[j];
                }
                if acc != obj[j] {
                    return Err(Error::Internal("lp: dual combination misses objective".into()));
                }
            }
            if rat::dot(&o.dual, b) != o.value {
                return Err(Error::Internal("lp: strong duality violated".into()));
            }
        }
        LpResult::Unbounded(r) => {
            if !feasible(&r.point) {
                return Err(Error::Internal("lp: ray base point infeasible".into()));
            }
            if !rat::dot(obj, &r.direction).is_positive() {
                return Err(Error::Internal("lp: ray does not improve objective".into()));
            }
            for row in a {
                if rat::dot(row, &r.direction).is_positive() {
                    return Err(Error::Internal("lp: ray leaves the polyhedron".into()));
                }
            }
        }
        LpResult::Infeasible(f) => {
            if f.multipliers.len() != a.len() || f.multipliers.iter().any(Signed::is_negative) {
                return Err(Error::Internal("lp: farkas vector not nonnegative".into()));
            }
            let n = obj.len();
            for j in 0..n {
                let mut acc = Rational::zero();
                for (i, row) in a.iter().enumerate() {
                    acc += &f.multipliers[i] * &row[j];
                }
                if !acc.is_zero() {
                    return Err(Error::Internal("lp: farkas combination nonzero".into()));
                }
            }
            if !rat::dot(&f.multipliers, b).is_negative() {
                return Err(Error::Internal("lp: farkas value not negative".into()));
            }
        }
    }
    Ok(())
}

/// Dense simplex tableau over `max c~.y : A~ y <= h, y >= 0` after the
/// free-variable split. Column layout: 2n structural, m slacks, then the
/// phase-one artificial when present.
struct Tableau {
    rows: Vec<Vec<Rational>>, // m rows, each of width `cols + 1` (rhs last)
    obj: Vec<Rational>,       // width `cols + 1`; last entry is the value
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        let c = self.cols;
        &self.rows[i][c]
    }

    fn reset_objective(&mut self, c: &[Rational]) {
        let width = self.cols + 1;
        self.obj = vec![Rational::zero(); width];
        self.obj[..c.len()].clone_from_slice(c);
        for i in 0..self.rows.len() {
            let col = self.basis[i];
            if self.obj[col].is_zero() {
                continue;
            }
            let f = self.obj[col].clone();
            for j in 0..width {
                let t = &f * &self.rows[i][j];
                self.obj[j] -= t;
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.cols + 1;
        let pv = self.rows[row][col].clone();
        for j in 0..width {
            self.rows[row][j] = &self.rows[row][j] / &pv;
        }
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for j in 0..width {
                let t = &f * &self.rows[row][j];
                self.rows[i][j] -= t;
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for j in 0..width {
                let t = &f * &self.rows[row][j];
                self.obj[j] -= t;
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule. Returns the entering column that proves unboundedness
    /// if no leaving row exists.
    fn optimize(&mut self, allowed_cols: usize) -> Option<usize> {
        loop {
            let entering = (0..allowed_cols).find(|&j| self.obj[j].is_positive());
            let Some(col) = entering else {
                return None;
            };
            let mut leave: Option<usize> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][col].is_positive() {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let ratio_i = self.rhs(i) / &self.rows[i][col];
                        let ratio_l = self.rhs(l) / &self.rows[l][col];
                        ratio_i < ratio_l
                            || (ratio_i == ratio_l && self.basis[i] < self.basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
            match leave {
                Some(row) => self.pivot(row, col),
                None => return Some(col),
            }
        }
    }
}

fn simplex(
    a: &[Vec<Rational>],
    b: &[Rational],
    obj: &[Rational],
    n: usize,
) -> Result<LpResult> {
    let m = a.len();

    // Zero-dimensional space: feasibility is a direct scan.
    if n == 0 {
        for (i, rhs) in b.iter().enumerate() {
            if rhs.is_negative() {
                let mut mult = rat::zeros(m);
                mult[i] = Rational::one();
                return Ok(LpResult::Infeasible(Farkas { multipliers: mult }));
            }
        }
        return Ok(LpResult::Optimal(Optimum {
            value: Rational::zero(),
            point: Vec::new(),
            dual: rat::zeros(m),
        }));
    }

    let struct_cols = 2 * n;
    let slack_cols = m;
    let needs_phase1 = b.iter().any(Signed::is_negative);
    let art_cols = usize::from(needs_phase1);
    let cols = struct_cols + slack_cols + art_cols;

    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rational::zero(); cols + 1];
        for j in 0..n {
            row[j] = a[i][j].clone();
            row[n + j] = -a[i][j].clone();
        }
        row[struct_cols + i] = Rational::one();
        if needs_phase1 {
            row[cols - 1] = -Rational::one();
        }
        row[cols] = b[i].clone();
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        obj: vec![Rational::zero(); cols + 1],
        basis: (0..m).map(|i| struct_cols + i).collect(),
        cols,
    };

    if needs_phase1 {
        let art = cols - 1;
        let mut c1 = vec![Rational::zero(); cols];
        c1[art] = -Rational::one();
        // Make the basis feasible: bring the artificial in on the most
        // negative rhs (ties to the smallest row index).
        let mut worst = 0usize;
        for i in 1..m {
            if t.rhs(i) < t.rhs(worst) {
                worst = i;
            }
        }
        t.pivot(worst, art);
        t.reset_objective(&c1);
        if t.optimize(cols).is_some() {
            return Err(Error::Internal("lp: phase one cannot be unbounded".into()));
        }
        let attained = t.obj[cols].clone(); // -(max -x0) accumulated: see below
        // Objective row stores the negated value of the running objective in
        // its rhs cell; max -x0 reached zero iff that cell is zero.
        if !attained.is_zero() {
            // Infeasible. Duals of phase one: for slack columns the reduced
            // cost is -(dual), so read them off the objective row.
            let mult: Vec<Rational> = (0..m)
                .map(|i| -t.obj[struct_cols + i].clone())
                .collect();
            return Ok(LpResult::Infeasible(Farkas { multipliers: mult }));
        }
        // Drive the artificial out of the basis if it lingers at level zero.
        if let Some(r) = t.basis.iter().position(|&v| v == art) {
            let pivot_col = (0..struct_cols + slack_cols).find(|&j| !t.rows[r][j].is_zero());
            match pivot_col {
                Some(c) => t.pivot(r, c),
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                }
            }
        }
    }

    let mut c2 = vec![Rational::zero(); cols];
    for j in 0..n {
        c2[j] = obj[j].clone();
        c2[n + j] = -obj[j].clone();
    }
    t.reset_objective(&c2);
    let usable = struct_cols + slack_cols; // never re-enter the artificial
    let extract_point = |t: &Tableau| -> Vec<Rational> {
        let mut y = vec![Rational::zero(); usable];
        for (i, &col) in t.basis.iter().enumerate() {
            if col < usable {
                y[col] = t.rhs(i).clone();
            }
        }
        (0..n).map(|j| &y[j] - &y[n + j]).collect()
    };
    match t.optimize(usable) {
        None => {
            let point = extract_point(&t);
            let dual: Vec<Rational> = (0..m)
                .map(|i| -t.obj[struct_cols + i].clone())
                .collect();
            let value = rat::dot(obj, &point);
            Ok(LpResult::Optimal(Optimum { value, point, dual }))
        }
        Some(col) => {
            let point = extract_point(&t);
            let mut dir_y = vec![Rational::zero(); usable];
            dir_y[col] = Rational::one();
            for (i, &bcol) in t.basis.iter().enumerate() {
                if bcol < usable {
                    dir_y[bcol] = -t.rows[i][col].clone();
                }
            }
            let direction: Vec<Rational> = (0..n).map(|j| &dir_y[j] - &dir_y[n + j]).collect();
            Ok(LpResult::Unbounded(UnboundedRay { point, direction }))
        }
    }
}
