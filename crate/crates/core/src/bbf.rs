//! The Bogomolov–Beauville–Fujiki form seen through top-degree intersection
//! numbers, and the pointwise predicates on periods and positive cones.
//!
//! A top form is modelled as a symmetric multilinear function of `2n`
//! rational vectors. Fujiki's relation ties its diagonal to the BBF form,
//! `T(x, ..., x) = c * q(x)^n`; [`fujiki_recover_q`] inverts this from
//! diagonal values alone, and [`bbf_via_kahler`] recovers a multiple of `q`
//! from the full multilinear form and a Kähler-type vector.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{gcd_all, rat_from_int, to_rat_vector, Int, IntMatrix, IntVector, Rat, RatVector};
use crate::error::{LatticeError, Result};
use crate::lattice::Lattice;
use crate::linalg;

/// A symmetric multilinear form of degree `2n` on `Q^dim`.
pub trait TopForm: Sync {
    fn dim(&self) -> usize;
    fn degree(&self) -> usize;
    fn eval(&self, args: &[&[Rat]]) -> Rat;
}

/// The symmetric polarization of `c * q^n`: the average over perfect
/// matchings of the `2n` arguments of the product of pairings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetrizedPower {
    gram: Vec<RatVector>,
    c: Rat,
    n: usize,
    matchings: Vec<Vec<(usize, usize)>>,
}

fn perfect_matchings(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0];
    let mut out = Vec::new();
    for k in 1..items.len() {
        let rest: Vec<usize> = items[1..].iter().enumerate().filter(|&(i, _)| i + 1 != k).map(|(_, &x)| x).collect();
        for mut m in perfect_matchings(&rest) {
            m.insert(0, (first, items[k]));
            out.push(m);
        }
    }
    out
}

impl SymmetrizedPower {
    pub fn new(gram: &[IntVector], c: Rat, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(LatticeError::BadParameter("n must be positive".into()));
        }
        if gram.iter().any(|r| r.len() != gram.len()) {
            return Err(LatticeError::NotSquare(format!("{} rows", gram.len())));
        }
        let items: Vec<usize> = (0..2 * n).collect();
        Ok(SymmetrizedPower {
            gram: gram.iter().map(|r| to_rat_vector(r)).collect(),
            c,
            n,
            matchings: perfect_matchings(&items),
        })
    }

    pub fn from_lattice(lattice: &Lattice, c: Rat, n: usize) -> Result<Self> {
        Self::new(lattice.gram(), c, n)
    }

    pub fn c(&self) -> &Rat {
        &self.c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn pair(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let mut total = Rat::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() && !self.gram[i][j].is_zero() {
                    total += xi * yj * &self.gram[i][j];
                }
            }
        }
        total
    }
}

impl TopForm for SymmetrizedPower {
    fn dim(&self) -> usize {
        self.gram.len()
    }

    fn degree(&self) -> usize {
        2 * self.n
    }

    fn eval(&self, args: &[&[Rat]]) -> Rat {
        assert_eq!(args.len(), self.degree(), "top form takes {} arguments", self.degree());
        let k = args.len();
        let mut pairings = vec![vec![Rat::zero(); k]; k];
        for i in 0..k {
            for j in i + 1..k {
                pairings[i][j] = self.pair(args[i], args[j]);
            }
        }
        let total: Rat = self
            .matchings
            .iter()
            .map(|m| m.iter().fold(Rat::one(), |acc, &(i, j)| acc * &pairings[i][j]))
            .sum();
        &self.c * total / Rat::from_integer(Int::from(self.matchings.len()))
    }
}

/// Fujiki data of a deformation type: half dimension, constant, top form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FujikiData {
    pub n: usize,
    pub c: Rat,
    pub top_form: SymmetrizedPower,
}

impl FujikiData {
    pub fn new(lattice: &Lattice, n: usize, c: Rat) -> Result<Self> {
        if !c.is_positive() {
            return Err(LatticeError::BadParameter(format!("Fujiki constant must be positive, got {c}")));
        }
        Ok(FujikiData { n, top_form: SymmetrizedPower::from_lattice(lattice, c.clone(), n)?, c })
    }

    /// `T(x, ..., x)`.
    pub fn diagonal(&self, x: &[Rat]) -> Rat {
        let args: Vec<&[Rat]> = vec![x; 2 * self.n];
        self.top_form.eval(&args)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FujikiRecovery {
    pub gram: IntMatrix,
    pub c: Rat,
    pub anchor: IntVector,
}

/// Probe vectors in the documented order: `e_i`, then `e_i + e_j` for
/// `i < j`, then `2e_i` and `-2e_i`.
pub fn probe_vectors(dim: usize) -> Vec<IntVector> {
    let unit = |i: usize, s: i64| {
        let mut v = vec![Int::zero(); dim];
        v[i] = Int::from(s);
        v
    };
    let mut out: Vec<IntVector> = (0..dim).map(|i| unit(i, 1)).collect();
    for i in 0..dim {
        for j in i + 1..dim {
            let mut v = unit(i, 1);
            v[j] = Int::one();
            out.push(v);
        }
    }
    for i in 0..dim {
        out.push(unit(i, 2));
        out.push(unit(i, -2));
    }
    out
}

/// Coefficients (constant term first) of the polynomial of degree
/// `< points.len()` through the given points.
fn interpolate(points: &[(Rat, Rat)]) -> Option<RatVector> {
    let vandermonde: Vec<RatVector> = points
        .iter()
        .map(|(s, _)| {
            let mut row = Vec::with_capacity(points.len());
            let mut p = Rat::one();
            for _ in 0..points.len() {
                row.push(p.clone());
                p *= s;
            }
            row
        })
        .collect();
    let values: RatVector = points.iter().map(|(_, y)| y.clone()).collect();
    linalg::rat_solve(&vandermonde, &values)
}

fn poly_eval(coeffs: &[Rat], s: &Rat) -> Rat {
    coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * s + c)
}

fn not_fujiki(detail: impl Into<String>) -> LatticeError {
    LatticeError::NotAFujikiForm(detail.into())
}

/// Ratios `(c1/c0, c2/c0)` of the restriction `s -> F(x + s y)`, after
/// checking that it is a polynomial of degree at most `2n` on `|s| <= 2n`.
fn line_ratios<F: Fn(&[Int]) -> Rat>(f: &F, x: &[Int], y: &[Int], n: usize) -> Result<(Rat, Rat)> {
    let point = |s: i64| -> IntVector { x.iter().zip(y).map(|(a, b)| a + b * s).collect() };
    let deg = 2 * n as i64;
    let fit: Vec<(Rat, Rat)> = (-(n as i64)..=n as i64).map(|s| (Rat::from_integer(s.into()), f(&point(s)))).collect();
    let coeffs = interpolate(&fit).ok_or_else(|| LatticeError::Internal("singular Vandermonde".into()))?;
    for s in (-deg..=deg).filter(|s| s.unsigned_abs() as usize > n) {
        let sr = Rat::from_integer(s.into());
        if poly_eval(&coeffs, &sr) != f(&point(s)) {
            return Err(not_fujiki(format!("values along {y:?} are not a polynomial of degree {deg}")));
        }
    }
    Ok((&coeffs[1] / &coeffs[0], &coeffs[2] / &coeffs[0]))
}

/// Smallest even integral multiple of a nonzero rational symmetric matrix,
/// up to sign.
fn even_primitive(m: &[RatVector]) -> (IntMatrix, Rat) {
    let entries: Vec<&Rat> = m.iter().flatten().collect();
    let den = entries.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: IntMatrix = m.iter().map(|r| r.iter().map(|x| (x * rat_from_int(&den)).to_integer()).collect()).collect();
    let g = gcd_all(scaled.iter().flatten());
    let mut factor = Rat::new(den, g.clone());
    let mut out: IntMatrix = scaled.iter().map(|r| r.iter().map(|x| x / &g).collect()).collect();
    if out.iter().enumerate().any(|(i, r)| r[i].is_odd()) {
        out = out.iter().map(|r| r.iter().map(|x| x * 2).collect()).collect();
        factor *= Rat::from_integer(Int::from(2));
    }
    (out, factor)
}

fn int_q(gram: &[IntVector], x: &[Int]) -> Int {
    let mut total = Int::zero();
    for (i, xi) in x.iter().enumerate() {
        for (j, xj) in x.iter().enumerate() {
            total += xi * xj * &gram[i][j];
        }
    }
    total
}

/// Recover the BBF form and the Fujiki constant from the diagonal
/// `F(x) = c * q(x)^n` alone.
///
/// The anchor `x0` is the first probe with `F(x0) != 0`. Along each line
/// `x0 + s y` the coefficients of `s` and `s^2` relative to the constant
/// term are `2n q(x0,y)/q(x0)` and `n q(y)/q(x0) + 2n(n-1) (q(x0,y)/q(x0))^2`,
/// which gives `q/q(x0)` on the probes and by polarization on the basis.
/// The result is the smallest even integral multiple; its sign makes `c`
/// positive for odd `n` and `q(x0) > 0` for even `n`. Every sampled value is
/// checked against the recovered `(q, c)`.
pub fn fujiki_recover_q<F: Fn(&[Int]) -> Rat>(f: F, dim: usize, n: usize) -> Result<FujikiRecovery> {
    if dim == 0 || n == 0 {
        return Err(LatticeError::BadParameter("dimension and n must be positive".into()));
    }
    let probes = probe_vectors(dim);
    let x0 = probes.iter().find(|p| !f(p).is_zero()).cloned().ok_or(LatticeError::NoAnchorPoint)?;
    let two_n = Rat::from_integer(Int::from(2 * n));
    let n_r = Rat::from_integer(Int::from(n));
    let cross = Rat::from_integer(Int::from(2 * n * (n - 1)));
    // q(y)/q(x0) for a probe direction y
    let relative_square = |y: &[Int]| -> Result<Rat> {
        let (r1, r2) = line_ratios(&f, &x0, y, n)?;
        let t = &r1 / &two_n;
        Ok((r2 - &cross * &t * &t) / &n_r)
    };
    let diag = probes[..dim].iter().map(|y| relative_square(y)).collect::<Result<Vec<_>>>()?;
    let mut rel = vec![vec![Rat::zero(); dim]; dim];
    for i in 0..dim {
        rel[i][i] = diag[i].clone();
    }
    let mut k = dim;
    for i in 0..dim {
        for j in i + 1..dim {
            let s = relative_square(&probes[k])?;
            k += 1;
            let off = (s - &diag[i] - &diag[j]) / Rat::from_integer(Int::from(2));
            rel[i][j] = off.clone();
            rel[j][i] = off;
        }
    }
    if rel.iter().flatten().all(Zero::is_zero) {
        return Err(not_fujiki("recovered form vanishes"));
    }
    let (mut gram, _) = even_primitive(&rel);
    let mut qx0 = int_q(&gram, &x0);
    if qx0.is_zero() {
        return Err(not_fujiki("anchor is isotropic for the recovered form"));
    }
    let fx0 = f(&x0);
    let flip = if n % 2 == 1 {
        // c = F(x0)/q(x0)^n must be positive
        fx0.is_negative() != qx0.is_negative()
    } else {
        qx0.is_negative()
    };
    if flip {
        gram = gram.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        qx0 = -qx0;
    }
    let c = fx0 / Rat::from_integer(qx0.pow(n as u32));
    let check = |v: &[Int]| f(v) == &c * Rat::from_integer(int_q(&gram, v).pow(n as u32));
    for y in &probes {
        for s in -(2 * n as i64)..=(2 * n as i64) {
            let v: IntVector = x0.iter().zip(y).map(|(a, b)| a + b * s).collect();
            if !check(&v) {
                return Err(not_fujiki(format!("F disagrees with c*q^n at {v:?}")));
            }
        }
    }
    Ok(FujikiRecovery { gram, c, anchor: x0 })
}

/// Output of [`bbf_via_kahler`]: the raw values `q'(e_i, e_j)`, the smallest
/// integral form proportional to them with positive value on `omega`, and
/// the positive ratio between the two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KahlerBbf {
    pub values: Vec<RatVector>,
    pub normalized: IntMatrix,
    pub mu: Rat,
}

/// `q'(a, b) = T(w^(2n-2), a, b) - k * T(w^(2n-1), a) * T(w^(2n-1), b) / T(w^(2n))`
/// evaluated on basis vectors. For `T` the polarization of `c q^n` the
/// coefficient `k = (2n-2)/(2n-1)` is the one making `q'` proportional to `q`
/// (with ratio `c q(w)^(n-1)/(2n-1)`).
pub fn bbf_via_kahler<T: TopForm + ?Sized>(t: &T, omega: &[Rat], n: usize) -> Result<KahlerBbf> {
    let k = Rat::new(Int::from(2 * n - 2), Int::from(2 * n - 1));
    let values = kahler_form_with_coefficient(t, omega, n, &k)?;
    let (primitive, _) = primitive_integral(&values);
    let mut normalized = primitive;
    let omega_value: Rat = quadratic_rat(&values, omega);
    if omega_value.is_zero() {
        return Err(LatticeError::DegenerateKahler);
    }
    if omega_value.is_negative() {
        normalized = normalized.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    }
    let (i, j) = (0..values.len())
        .flat_map(|i| (0..values.len()).map(move |j| (i, j)))
        .find(|&(i, j)| !normalized[i][j].is_zero())
        .expect("nonzero form");
    let mu = &values[i][j] / rat_from_int(&normalized[i][j]);
    Ok(KahlerBbf { values, normalized, mu })
}

fn quadratic_rat(m: &[RatVector], x: &[Rat]) -> Rat {
    let mut total = Rat::zero();
    for (i, xi) in x.iter().enumerate() {
        for (j, xj) in x.iter().enumerate() {
            total += xi * xj * &m[i][j];
        }
    }
    total
}

fn primitive_integral(m: &[RatVector]) -> (IntMatrix, Rat) {
    let den = m.iter().flatten().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: IntMatrix = m.iter().map(|r| r.iter().map(|x| (x * rat_from_int(&den)).to_integer()).collect()).collect();
    let g = gcd_all(scaled.iter().flatten());
    let out = scaled.iter().map(|r| r.iter().map(|x| x / &g).collect()).collect();
    (out, Rat::new(den, g))
}

/// The Kähler-class expression with an arbitrary correction coefficient.
pub fn kahler_form_with_coefficient<T: TopForm + ?Sized>(t: &T, omega: &[Rat], n: usize, k: &Rat) -> Result<Vec<RatVector>> {
    let dim = t.dim();
    if n == 0 || t.degree() != 2 * n {
        return Err(LatticeError::BadParameter(format!("top form has degree {}, expected {}", t.degree(), 2 * n)));
    }
    if omega.len() != dim {
        return Err(LatticeError::DimensionMismatch { expected: dim, got: omega.len() });
    }
    let full: Vec<&[Rat]> = vec![omega; 2 * n];
    let top = t.eval(&full);
    if top.is_zero() {
        return Err(LatticeError::DegenerateKahler);
    }
    let basis: Vec<RatVector> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    let linear: RatVector = basis
        .iter()
        .map(|e| {
            let mut args: Vec<&[Rat]> = vec![omega; 2 * n - 1];
            args.push(e);
            t.eval(&args)
        })
        .collect();
    let mut out = vec![vec![Rat::zero(); dim]; dim];
    for i in 0..dim {
        for j in i..dim {
            let mut args: Vec<&[Rat]> = vec![omega; 2 * n - 2];
            args.push(&basis[i]);
            args.push(&basis[j]);
            let v = t.eval(&args) - k * &linear[i] * &linear[j] / &top;
            out[i][j] = v.clone();
            out[j][i] = v;
        }
    }
    Ok(out)
}

/// The ratio `mu` with `a = mu * b` entrywise, if one exists and `b != 0`.
pub fn proportionality(a: &[RatVector], b: &[IntVector]) -> Option<Rat> {
    let mut mu: Option<Rat> = None;
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            if y.is_zero() {
                if !x.is_zero() {
                    return None;
                }
                continue;
            }
            let r = x / rat_from_int(y);
            match &mu {
                Some(m) if *m != r => return None,
                Some(_) => {}
                None => mu = Some(r),
            }
        }
    }
    mu
}

/// A complex line in `H^2 (x) C`, spanned by `re + i*im`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodLine {
    pub re: RatVector,
    pub im: RatVector,
}

impl PeriodLine {
    pub fn new(re: RatVector, im: RatVector) -> Result<Self> {
        if re.len() != im.len() {
            return Err(LatticeError::DimensionMismatch { expected: re.len(), got: im.len() });
        }
        if re.iter().chain(&im).all(Zero::is_zero) {
            return Err(LatticeError::ZeroLine);
        }
        Ok(PeriodLine { re, im })
    }

    /// `(a + bi) * l` for real `a`, `b` not both zero.
    pub fn rescale(&self, a: &Rat, b: &Rat) -> Result<Self> {
        let re = self.re.iter().zip(&self.im).map(|(x, y)| a * x - b * y).collect();
        let im = self.re.iter().zip(&self.im).map(|(x, y)| b * x + a * y).collect();
        PeriodLine::new(re, im)
    }
}

/// `q(l, l) = 0` and `q(l, l-bar) > 0`.
pub fn period_membership(lattice: &Lattice, l: &PeriodLine) -> Result<bool> {
    if l.re.iter().chain(&l.im).all(Zero::is_zero) {
        return Err(LatticeError::ZeroLine);
    }
    let rr = lattice.q_rat(&l.re)?;
    let ii = lattice.q_rat(&l.im)?;
    let ri = lattice.b_rat(&l.re, &l.im)?;
    Ok(rr == ii && ri.is_zero() && (rr + ii).is_positive())
}

/// Membership in the period domain together with `q(eta, l) = 0`.
pub fn period_eta_slice(lattice: &Lattice, eta: &[Rat], l: &PeriodLine) -> Result<bool> {
    if !period_membership(lattice, l)? {
        return Ok(false);
    }
    Ok(lattice.b_rat(eta, &l.re)?.is_zero() && lattice.b_rat(eta, &l.im)?.is_zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeSide {
    Same,
    Opposite,
}

/// Which component of `{x : q(x) > 0}` `rho` lies in relative to `kappa`,
/// for a form with exactly one positive direction.
pub fn positive_cone_component(lattice: &Lattice, kappa: &[Rat], rho: &[Rat]) -> Result<ConeSide> {
    let s_plus = lattice.signature().s_plus;
    if s_plus != 1 {
        return Err(LatticeError::WrongSignature { s_plus });
    }
    for (name, x) in [("kappa", kappa), ("rho", rho)] {
        if !lattice.q_rat(x)?.is_positive() {
            return Err(LatticeError::NotPositive(name.into()));
        }
    }
    Ok(if lattice.b_rat(kappa, rho)?.is_positive() { ConeSide::Same } else { ConeSide::Opposite })
}

/// `q(v) = 0`.
pub fn is_parabolic(lattice: &Lattice, v: &[Int]) -> Result<bool> {
    if v.iter().all(Zero::is_zero) {
        return Err(LatticeError::ZeroVector);
    }
    Ok(lattice.q_eval(v)?.is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub b2: usize,
    pub plane_rank: usize,
    pub plane_signature: (usize, usize),
    /// Signature of the form on the orthogonal complement modulo its radical.
    pub quotient_signature: (usize, usize),
    pub radical_rank: usize,
    pub expected_signature: (usize, usize),
    pub signature_matches: bool,
    /// `b2 - 4 >= 3`.
    pub rank_hypothesis: bool,
    pub pass: bool,
}

/// Signature of the complement of the saturated span of a parabolic `v` and
/// a negative `v'`, compared with `(2, b2 - 4)`, plus the rank hypothesis
/// `b2 >= 7`.
pub fn density_hypothesis_check(lattice: &Lattice, v: &[Int], v_prime: &[Int]) -> Result<DensityReport> {
    let bad = |s: &str| Err(LatticeError::BadInputs(s.into()));
    if !lattice.q_eval(v)?.is_zero() || v.iter().all(Zero::is_zero) {
        return bad("v must be a nonzero isotropic vector");
    }
    if !lattice.q_eval(v_prime)?.is_negative() {
        return bad("v' must have negative square");
    }
    if linalg::rank(&[v.to_vec(), v_prime.to_vec()]) != 2 {
        return bad("v and v' are linearly dependent");
    }
    let b2 = lattice.rank();
    let plane = lattice.saturate(&[v.to_vec(), v_prime.to_vec()])?;
    let (pp, pn, _) = plane.inertia();
    let complement = lattice.orthogonal_complement(&plane);
    let (cp, cn, cz) = complement.inertia();
    let expected = (2, b2.saturating_sub(4));
    let signature_matches = (cp, cn) == expected && b2 >= 4;
    let rank_hypothesis = b2 >= 7;
    Ok(DensityReport {
        b2,
        plane_rank: plane.rank(),
        plane_signature: (pp, pn),
        quotient_signature: (cp, cn),
        radical_rank: cz,
        expected_signature: expected,
        signature_matches,
        rank_hypothesis,
        pass: signature_matches && rank_hypothesis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{imat, ivec, rat};
    use proptest::prelude::*;

    fn rv(xs: &[i64]) -> RatVector {
        xs.iter().map(|&x| rat(x, 1)).collect()
    }

    fn q_of(gram: &[IntVector], x: &[Int]) -> Rat {
        rat_from_int(&int_q(gram, x))
    }

    /// `F = c q^n` built directly, independent of the top form.
    fn fujiki_fn(gram: IntMatrix, c: Rat, n: u32) -> impl Fn(&[Int]) -> Rat {
        move |x| &c * q_of(&gram, x).pow(n as i32)
    }

    /// Full permutation sum, divided by (2n)!: the textbook polarization.
    fn permutation_polarization(gram: &[IntVector], c: &Rat, args: &[&[Rat]]) -> Rat {
        fn perms(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(k - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, k - 1);
                    out.push(q);
                }
            }
            out
        }
        let g: Vec<RatVector> = gram.iter().map(|r| to_rat_vector(r)).collect();
        let pair = |x: &[Rat], y: &[Rat]| quadratic_bilinear(&g, x, y);
        let all = perms(args.len());
        let total: Rat = all
            .iter()
            .map(|p| p.chunks(2).fold(Rat::one(), |acc, ch| acc * pair(args[ch[0]], args[ch[1]])))
            .sum();
        c * total / Rat::from_integer(Int::from(all.len()))
    }

    fn quadratic_bilinear(g: &[RatVector], x: &[Rat], y: &[Rat]) -> Rat {
        let mut t = Rat::zero();
        for i in 0..x.len() {
            for j in 0..y.len() {
                t += &x[i] * &y[j] * &g[i][j];
            }
        }
        t
    }

    #[test]
    fn matchings_count() {
        for (n, count) in [(1, 1), (2, 3), (3, 15), (4, 105)] {
            let items: Vec<usize> = (0..2 * n).collect();
            assert_eq!(perfect_matchings(&items).len(), count);
        }
    }

    #[test]
    fn symmetrized_power_matches_permutation_sum() {
        let gram = imat(&[&[2, 1, 0], &[1, -2, 0], &[0, 0, -4]]);
        let t = SymmetrizedPower::new(&gram, rat(3, 1), 2).unwrap();
        let vs = [rv(&[1, 0, 2]), rv(&[0, 1, -1]), rv(&[3, 1, 1]), rv(&[1, 1, 1])];
        let args: Vec<&[Rat]> = vs.iter().map(|v| v.as_slice()).collect();
        assert_eq!(t.eval(&args), permutation_polarization(&gram, &rat(3, 1), &args));
        let x = rv(&[1, 2, 3]);
        let diag: Vec<&[Rat]> = vec![&x; 4];
        assert_eq!(t.eval(&diag), rat(3, 1) * q_of(&gram, &ivec(&[1, 2, 3])).pow(2));
    }

    #[test]
    fn recover_polarization_n1() {
        let u = imat(&[&[0, 1], &[1, 0]]);
        let r = fujiki_recover_q(fujiki_fn(u.clone(), rat(1, 1), 1), 2, 1).unwrap();
        assert_eq!(r.gram, u);
        assert_eq!(r.c, rat(1, 1));
        assert_eq!(r.anchor, ivec(&[1, 1]));
    }

    #[test]
    fn recover_diag_n2() {
        let q = imat(&[&[2, 0], &[0, -2]]);
        let r = fujiki_recover_q(fujiki_fn(q.clone(), rat(3, 1), 2), 2, 2).unwrap();
        assert_eq!(r.gram, q);
        assert_eq!(r.c, rat(3, 1));
    }

    #[test]
    fn even_n_sign_follows_anchor() {
        // anchor e_3 has q = -2, so even n returns -q
        let q = imat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]);
        let r = fujiki_recover_q(fujiki_fn(q.clone(), rat(1, 1), 2), 3, 2).unwrap();
        let neg: IntMatrix = q.iter().map(|row| row.iter().map(|x| -x).collect()).collect();
        assert_eq!(r.gram, neg);
        let r3 = fujiki_recover_q(fujiki_fn(q.clone(), rat(1, 1), 3), 3, 3).unwrap();
        assert_eq!(r3.gram, q);
    }

    #[test]
    fn zero_form_has_no_anchor() {
        assert_eq!(fujiki_recover_q(|_: &[Int]| Rat::zero(), 3, 1), Err(LatticeError::NoAnchorPoint));
    }

    #[test]
    fn cubic_is_not_fujiki() {
        let f = |x: &[Int]| rat_from_int(&(&x[0] * &x[0] * &x[0] + &x[1] * &x[1]));
        assert!(matches!(fujiki_recover_q(f, 2, 1), Err(LatticeError::NotAFujikiForm(_))));
        let g = |x: &[Int]| rat_from_int(&(&x[0] * &x[0] * &x[0] * &x[0] + &x[1] * &x[1] * &x[1] * &x[1]));
        assert!(matches!(fujiki_recover_q(g, 2, 2), Err(LatticeError::NotAFujikiForm(_))));
    }

    #[test]
    fn kahler_n1_returns_gram() {
        let gram = imat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]);
        let t = SymmetrizedPower::new(&gram, rat(1, 1), 1).unwrap();
        let out = bbf_via_kahler(&t, &rv(&[1, 1, 0]), 1).unwrap();
        assert_eq!(out.values, to_rat_gram(&gram));
        assert_eq!(out.normalized, gram);
        assert_eq!(out.mu, rat(1, 1));
    }

    fn to_rat_gram(g: &[IntVector]) -> Vec<RatVector> {
        g.iter().map(|r| to_rat_vector(r)).collect()
    }

    #[test]
    fn kahler_n2_proportional() {
        let gram = imat(&[&[2, 0, 0], &[0, -2, 0], &[0, 0, -4]]);
        let t = SymmetrizedPower::new(&gram, rat(3, 1), 2).unwrap();
        let omega = rv(&[3, 1, 1]);
        let out = bbf_via_kahler(&t, &omega, 2).unwrap();
        // c q(w)^(n-1) / (2n-1) = 3 * 12 / 3
        assert_eq!(proportionality(&out.values, &gram), Some(rat(12, 1)));
        assert_eq!(out.normalized, imat(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -2]]));
        assert_eq!(out.mu, rat(24, 1));
    }

    #[test]
    fn squared_denominator_breaks_proportionality() {
        let gram = imat(&[&[2, 0, 0], &[0, -2, 0], &[0, 0, -4]]);
        let t = SymmetrizedPower::new(&gram, rat(3, 1), 2).unwrap();
        let values = kahler_form_with_coefficient(&t, &rv(&[3, 1, 1]), 2, &rat(2, 9)).unwrap();
        assert_eq!(proportionality(&values, &gram), None);
    }

    #[test]
    fn isotropic_omega_is_degenerate() {
        let gram = imat(&[&[2, 0], &[0, -2]]);
        let t = SymmetrizedPower::new(&gram, rat(1, 1), 2).unwrap();
        assert_eq!(bbf_via_kahler(&t, &rv(&[1, 1]), 2), Err(LatticeError::DegenerateKahler));
    }

    #[test]
    fn period_examples() {
        let l = Lattice::diagonal(&[1, 1, -1]).unwrap();
        let line = PeriodLine::new(rv(&[1, 0, 0]), rv(&[0, 1, 0])).unwrap();
        assert!(period_membership(&l, &line).unwrap());
        assert!(period_eta_slice(&l, &rv(&[0, 0, 1]), &line).unwrap());
        assert!(!period_eta_slice(&l, &rv(&[1, 0, 0]), &line).unwrap());
        let boundary = PeriodLine::new(rv(&[1, 0, 1]), rv(&[0, 0, 0])).unwrap();
        assert!(!period_membership(&l, &boundary).unwrap());
        assert_eq!(PeriodLine::new(rv(&[0, 0]), rv(&[0, 0])), Err(LatticeError::ZeroLine));
        let zero = PeriodLine { re: rv(&[0, 0, 0]), im: rv(&[0, 0, 0]) };
        assert_eq!(period_membership(&l, &zero), Err(LatticeError::ZeroLine));
    }

    #[test]
    fn cone_examples() {
        let l = Lattice::diagonal(&[1, -1, -1]).unwrap();
        assert_eq!(positive_cone_component(&l, &rv(&[1, 0, 0]), &rv(&[2, 1, 0])).unwrap(), ConeSide::Same);
        assert_eq!(positive_cone_component(&l, &rv(&[1, 0, 0]), &rv(&[-1, 0, 0])).unwrap(), ConeSide::Opposite);
        assert!(matches!(positive_cone_component(&l, &rv(&[1, 0, 0]), &rv(&[0, 1, 0])), Err(LatticeError::NotPositive(_))));
        let wrong = Lattice::diagonal(&[1, 1, -1]).unwrap();
        assert_eq!(
            positive_cone_component(&wrong, &rv(&[1, 0, 0]), &rv(&[0, 1, 0])),
            Err(LatticeError::WrongSignature { s_plus: 2 })
        );
    }

    #[test]
    fn parabolic_examples() {
        let u = Lattice::hyperbolic(1);
        assert!(is_parabolic(&u, &ivec(&[1, 0])).unwrap());
        assert!(is_parabolic(&Lattice::diagonal(&[2, -2]).unwrap(), &ivec(&[1, 1])).unwrap());
        assert!(!is_parabolic(&u, &ivec(&[1, 1])).unwrap());
        assert_eq!(is_parabolic(&u, &ivec(&[0, 0])), Err(LatticeError::ZeroVector));
    }

    #[test]
    fn density_on_small_lattices() {
        let u3 = Lattice::sum_of(&[Lattice::hyperbolic(1), Lattice::hyperbolic(1), Lattice::hyperbolic(1)]);
        let mut v = vec![Int::zero(); 6];
        v[0] = Int::one();
        let mut w = vec![Int::zero(); 6];
        w[0] = Int::one();
        w[1] = Int::from(-1);
        let r = density_hypothesis_check(&u3, &v, &w).unwrap();
        assert_eq!(r.quotient_signature, (2, 2));
        assert!(r.signature_matches);
        assert!(!r.rank_hypothesis);
        assert!(!r.pass);
        assert!(matches!(density_hypothesis_check(&u3, &w, &v), Err(LatticeError::BadInputs(_))));
        assert!(matches!(density_hypothesis_check(&u3, &v, &v), Err(LatticeError::BadInputs(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn kahler_proportional_for_random_omega(w in proptest::collection::vec(-6i64..7, 3)) {
            let gram = imat(&[&[2, 1, 0], &[1, -2, 0], &[0, 0, -4]]);
            let omega = rv(&w);
            let q_omega = q_of(&gram, &ivec(&w));
            prop_assume!(q_omega.is_positive());
            let t = SymmetrizedPower::new(&gram, rat(3, 1), 2).unwrap();
            let out = bbf_via_kahler(&t, &omega, 2).unwrap();
            let mu = proportionality(&out.values, &gram);
            prop_assert_eq!(mu, Some(rat(3, 1) * q_omega / rat(3, 1)));
        }

        #[test]
        fn period_verdict_is_projective(
            re in proptest::collection::vec(-4i64..5, 3),
            im in proptest::collection::vec(-4i64..5, 3),
            a in -5i64..6,
            b in -5i64..6,
        ) {
            prop_assume!(a != 0 || b != 0);
            prop_assume!(re.iter().chain(&im).any(|&x| x != 0));
            let l = Lattice::diagonal(&[1, 1, -1]).unwrap();
            let line = PeriodLine::new(rv(&re), rv(&im)).unwrap();
            let moved = line.rescale(&rat(a, 1), &rat(b, 1)).unwrap();
            prop_assert_eq!(period_membership(&l, &line).unwrap(), period_membership(&l, &moved).unwrap());
        }
    }

    #[test]
    fn period_rescaling_keeps_members() {
        let l = Lattice::diagonal(&[1, 1, -1, -1]).unwrap();
        let line = PeriodLine::new(rv(&[1, 0, 1, 0]), rv(&[0, 2, 0, 1])).unwrap();
        // q(re)=0 here, so not a member; use a genuine one
        assert!(!period_membership(&l, &line).unwrap());
        let member = PeriodLine::new(rv(&[2, 0, 1, 0]), rv(&[0, 2, 0, 1])).unwrap();
        assert!(period_membership(&l, &member).unwrap());
        for (a, b) in [(1, 1), (0, 3), (-2, 5), (7, -1)] {
            assert!(period_membership(&l, &member.rescale(&rat(a, 1), &rat(b, 1)).unwrap()).unwrap());
        }
    }

    #[test]
    fn cone_partition_has_two_classes() {
        let l = Lattice::from_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]).unwrap();
        let mut box_positives = Vec::new();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                for c in -2i64..=2 {
                    let v = rv(&[a, b, c]);
                    if l.q_rat(&v).unwrap().is_positive() {
                        box_positives.push((a, v));
                    }
                }
            }
        }
        // ten from each half so both components are sampled
        let mut positives: Vec<RatVector> = box_positives.iter().filter(|(a, _)| *a > 0).take(10).map(|(_, v)| v.clone()).collect();
        positives.extend(box_positives.iter().filter(|(a, _)| *a < 0).take(10).map(|(_, v)| v.clone()));
        assert_eq!(positives.len(), 20);
        let same = |x: &RatVector, y: &RatVector| positive_cone_component(&l, x, y).unwrap() == ConeSide::Same;
        for x in &positives {
            assert!(same(x, x));
            for y in &positives {
                assert_eq!(same(x, y), same(y, x));
                for z in &positives {
                    if same(x, y) && same(y, z) {
                        assert!(same(x, z));
                    }
                }
            }
        }
        let mut classes: Vec<&RatVector> = Vec::new();
        for x in &positives {
            if !classes.iter().any(|r| same(r, x)) {
                classes.push(x);
            }
        }
        assert_eq!(classes.len(), 2);
    }
}
