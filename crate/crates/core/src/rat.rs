//! Scalar helpers for exact rational arithmetic. `BigRational` keeps every
//! value in lowest terms with a positive denominator, which is the invariant
//! the rest of the crate relies on.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;
pub type Int = BigInt;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(int(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(int(p), int(q))
}

pub fn rat_of(n: &Int) -> Rational {
    Rational::from_integer(n.clone())
}

/// Largest integer <= r.
pub fn floor_int(r: &Rational) -> Int {
    r.floor().to_integer()
}

/// Smallest integer >= r.
pub fn ceil_int(r: &Rational) -> Int {
    r.ceil().to_integer()
}

/// Nearest integer to r, rounding ties toward +infinity.
pub fn nearest_int(r: &Rational) -> Int {
    floor_int(&(r + frac(1, 2)))
}

pub fn is_integral(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Exact dot product of two equal-length rational vectors.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Int::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Dot of an integral row with a rational point.
pub fn dot_mixed(a: &[Int], x: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), x.len());
    let mut acc = Rational::zero();
    for (c, v) in a.iter().zip(x) {
        acc += rat_of(c) * v;
    }
    acc
}

pub fn add_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Rational, a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| c * x).collect()
}

pub fn int_to_rat_vec(a: &[Int]) -> Vec<Rational> {
    a.iter().map(rat_of).collect()
}

/// gcd of the absolute values; zero for the all-zero vector.
pub fn gcd_vec(a: &[Int]) -> Int {
    let mut g = Int::zero();
    for x in a {
        g = num_integer::gcd(g, x.abs());
    }
    g
}

pub fn lcm_denoms(a: &[Rational]) -> Int {
    let mut l = Int::one();
    for x in a {
        l = num_integer::lcm(l, x.denom().clone());
    }
    l
}

/// Scales a rational vector to a primitive integral one (coprime entries,
/// orientation preserved). Returns None for the zero vector.
pub fn primitive_int_vec(a: &[Rational]) -> Option<Vec<Int>> {
    let l = lcm_denoms(a);
    let ints: Vec<Int> = a.iter().map(|x| (x * rat_of(&l)).to_integer()).collect();
    let g = gcd_vec(&ints);
    if g.is_zero() {
        return None;
    }
    Some(ints.iter().map(|x| x / &g).collect())
}

/// Exact rational vector from integral entries divided by a positive scalar.
pub fn div_int_vec(a: &[Int], d: &Int) -> Vec<Rational> {
    a.iter().map(|x| Rational::new(x.clone(), d.clone())).collect()
}

pub fn zeros(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

pub fn zeros_int(n: usize) -> Vec<Int> {
    vec![Int::zero(); n]
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn is_zero_vec_int(a: &[Int]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Canonical text form: integers render bare, everything else as "p/q".
pub fn fmt_rat(r: &Rational) -> String {
    if is_integral(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn fmt_rat_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rat).collect();
    format!("({})", parts.join(", "))
}

pub fn fmt_int_vec(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Parses "p/q" or a bare integer; rejects zero denominators.
pub fn parse_rat(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.trim().parse().ok()?;
            let q: Int = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => {
            let p: Int = s.parse().ok()?;
            Some(Rational::from_integer(p))
        }
    }
}

pub fn sign_of(r: &Rational) -> Sign {
    r.numer().sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_rounds_ties_up() {
        assert_eq!(nearest_int(&frac(1, 2)), int(1));
        assert_eq!(nearest_int(&frac(-1, 2)), int(0));
        assert_eq!(nearest_int(&frac(7, 3)), int(2));
        assert_eq!(nearest_int(&frac(-7, 3)), int(-2));
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![frac(2, 3), frac(-4, 3), rat(2)];
        assert_eq!(
            primitive_int_vec(&v).unwrap(),
            vec![int(1), int(-2), int(3)]
        );
        assert_eq!(primitive_int_vec(&zeros(3)), None);
    }

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7", "9/2", "-5/4", "0"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&r), s);
        }
        assert_eq!(parse_rat("4/6").map(|r| fmt_rat(&r)).unwrap(), "2/3");
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }
}
