//! Integer and rational scalar helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{LatticeError, Result};

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IntVector = Vec<Int>;
pub type IntMatrix = Vec<Vec<Int>>;
pub type RatVector = Vec<Rat>;
pub type RatMatrix = Vec<Vec<Rat>>;

pub fn int(x: i64) -> Int {
    Int::from(x)
}

pub fn ivec(xs: &[i64]) -> IntVector {
    xs.iter().map(|&x| Int::from(x)).collect()
}

pub fn imat(rows: &[&[i64]]) -> IntMatrix {
    rows.iter().map(|r| ivec(r)).collect()
}

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

pub fn rat_from_int(x: &Int) -> Rat {
    Rat::from_integer(x.clone())
}

pub fn to_rat_vector(v: &[Int]) -> RatVector {
    v.iter().map(rat_from_int).collect()
}

pub fn to_rat_matrix(m: &[IntVector]) -> RatMatrix {
    m.iter().map(|r| to_rat_vector(r)).collect()
}

/// Non-negative gcd of all entries; 0 for the zero vector.
pub fn gcd_all<'a, I: IntoIterator<Item = &'a Int>>(xs: I) -> Int {
    xs.into_iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Least common multiple of the denominators of a rational slice.
pub fn common_denominator(xs: &[Rat]) -> Int {
    xs.iter().fold(Int::one(), |l, x| l.lcm(x.denom()))
}

/// `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Reduce a rational into `[0, m)`.
pub fn rat_mod(x: &Rat, m: &Int) -> Rat {
    let modulus = rat_from_int(m);
    let k = (x / &modulus).floor();
    x - k * modulus
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

/// Canonical `"p/q"` text with `q > 0`, always including the denominator.
pub fn rat_to_string(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || LatticeError::InputParse(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.trim().parse().map_err(|_| bad())?;
            let q: Int = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Exact integer square root if `x` is a perfect square.
pub fn exact_sqrt(x: &Int) -> Option<Int> {
    if x.is_negative() {
        return None;
    }
    let r = x.sqrt();
    if &r * &r == *x {
        Some(r)
    } else {
        None
    }
}

pub fn is_zero_vector(v: &[Int]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Flip the sign so that the first nonzero coordinate is positive.
pub fn sign_normalize(v: &[Int]) -> IntVector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.iter().map(|x| -x).collect(),
        _ => v.to_vec(),
    }
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn rat_dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn mat_vec(m: &[IntVector], v: &[Int]) -> IntVector {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &[IntVector], b: &[IntVector]) -> IntMatrix {
    let bt = transpose(b);
    a.iter()
        .map(|row| bt.iter().map(|col| dot(row, col)).collect())
        .collect()
}

pub fn rat_mat_mul(a: &[RatVector], b: &[RatVector]) -> RatMatrix {
    let bt = transpose(b);
    a.iter()
        .map(|row| bt.iter().map(|col| rat_dot(row, col)).collect())
        .collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}
