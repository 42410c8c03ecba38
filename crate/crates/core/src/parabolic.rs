//! Primitive isotropic ("parabolic") vectors: enumeration, the divisor `α`,
//! isotropic planes `K = Span(v, f)`, and orbit classification under a set of
//! isometries.
//!
//! Vectors are identified up to sign everywhere; the representative has its
//! first nonzero coordinate positive.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{
    ext_gcd, frac, gcd_all, identity, is_zero_vector, mat_mul, mat_vec, rat_from_int, sign_normalize,
    to_rat_matrix, transpose, Int, IntMatrix, IntVector, Rat, RatVector,
};
use crate::error::{LatticeError, Result};
use crate::lattice::{Lattice, Sublattice};
use crate::linalg;

/// Largest box (number of candidate vectors) any enumeration will scan.
pub const MAX_BOX: u128 = 1 << 40;

fn box_size(rank: usize, bound: u64) -> u128 {
    let side = 2 * bound as u128 + 1;
    (0..rank).try_fold(1u128, |acc, _| acc.checked_mul(side)).unwrap_or(u128::MAX)
}

/// Decode a mixed-radix index into a vector with entries in `[-bound, bound]`.
fn decode(mut index: u128, rank: usize, bound: i64) -> Vec<i64> {
    let side = (2 * bound + 1) as u128;
    let mut out = vec![0i64; rank];
    for slot in out.iter_mut().rev() {
        *slot = (index % side) as i64 - bound;
        index /= side;
    }
    out
}

fn first_nonzero_positive(v: &[i64]) -> bool {
    matches!(v.iter().find(|&&x| x != 0), Some(&x) if x > 0)
}

fn gcd_i64(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Gram entries as `i64` when the form can be evaluated in `i128` without
/// overflow on vectors with entries bounded by `bound`.
fn small_gram(lattice: &Lattice, bound: u64) -> Option<Vec<Vec<i64>>> {
    let gram: Vec<Vec<i64>> = lattice
        .gram()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    let max = gram.iter().flatten().map(|x| x.unsigned_abs() as u128).max().unwrap_or(0);
    let n = lattice.rank() as u128;
    let b = bound as u128;
    let worst = max.checked_mul(b * b)?.checked_mul(n * n)?;
    (worst < (1u128 << 126)).then_some(gram)
}

fn q_small(gram: &[Vec<i64>], v: &[i64]) -> i128 {
    let mut total: i128 = 0;
    for (i, row) in gram.iter().enumerate() {
        if v[i] == 0 {
            continue;
        }
        let mut partial: i128 = 0;
        for (j, g) in row.iter().enumerate() {
            partial += *g as i128 * v[j] as i128;
        }
        total += partial * v[i] as i128;
    }
    total
}

/// Sign-normalized vectors `v` in the box `[-bound, bound]^rank` satisfying
/// `keep`, where `keep` sees the value `q(v)`.
fn scan_box<F>(lattice: &Lattice, bound: u64, keep: F) -> Result<Vec<IntVector>>
where
    F: Fn(&[i64], &Int) -> bool + Sync + Send,
{
    let n = lattice.rank();
    let total = box_size(n, bound);
    if total > MAX_BOX {
        return Err(LatticeError::BudgetExceeded { needed: total.to_string(), budget: MAX_BOX as u64 });
    }
    let b = bound as i64;
    let small = small_gram(lattice, bound);
    let chunk: u128 = 1 << 14;
    let chunks = total.div_ceil(chunk);
    let keep = &keep;
    let mut found: Vec<IntVector> = (0..chunks as u64)
        .into_par_iter()
        .flat_map_iter(|c| {
            let start = c as u128 * chunk;
            let end = (start + chunk).min(total);
            let small = small.as_ref();
            (start..end).filter_map(move |idx| {
                let v = decode(idx, n, b);
                if !first_nonzero_positive(&v) {
                    return None;
                }
                let q = match small {
                    Some(g) => Int::from(q_small(g, &v)),
                    None => {
                        let big: IntVector = v.iter().map(|&x| Int::from(x)).collect();
                        lattice.q_eval(&big).expect("dimension matches")
                    }
                };
                keep(&v, &q).then(|| v.iter().map(|&x| Int::from(x)).collect())
            })
        })
        .collect();
    found.sort();
    Ok(found)
}

/// All primitive `v` with `q(v) = 0` and `max |v_i| <= height`, one per sign
/// class, sorted lexicographically.
pub fn enumerate_primitive_isotropic(lattice: &Lattice, height: u64) -> Result<Vec<IntVector>> {
    scan_box(lattice, height, |v, q| q.is_zero() && gcd_i64(v) == 1)
}

fn check_isotropic_primitive(lattice: &Lattice, v: &[Int]) -> Result<()> {
    if v.len() != lattice.rank() {
        return Err(LatticeError::DimensionMismatch { expected: lattice.rank(), got: v.len() });
    }
    if is_zero_vector(v) {
        return Err(LatticeError::ZeroVector);
    }
    if !gcd_all(v).is_one() {
        return Err(LatticeError::NotPrimitive);
    }
    let q = lattice.q_eval(v)?;
    if !q.is_zero() {
        return Err(LatticeError::NotIsotropic(format!("q(v) = {q}")));
    }
    Ok(())
}

/// The divisor `α`: positive generator of `{b(v, f) : f in L}`.
pub fn divisor(lattice: &Lattice, v: &[Int]) -> Result<Int> {
    check_isotropic_primitive(lattice, v)?;
    Ok(gcd_all(&lattice.pairing_vector(v)?))
}

/// A partner `f` with `b(v, f) = α`, shifted along `v` so that `q(f)` lies in
/// `[0, 2α)`.
///
/// The Bezout coefficients come from a left-to-right extended gcd over
/// `gram * v` that only moves when an entry is not already a multiple of the
/// running gcd.
pub fn minimal_partner(lattice: &Lattice, v: &[Int]) -> Result<IntVector> {
    check_isotropic_primitive(lattice, v)?;
    let pairings = lattice.pairing_vector(v)?;
    let n = lattice.rank();
    let mut g = Int::zero();
    let mut coeffs = vec![Int::zero(); n];
    for (i, w) in pairings.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = w.abs();
            coeffs[i] = if w.is_negative() { -Int::one() } else { Int::one() };
            continue;
        }
        if w.is_multiple_of(&g) {
            continue;
        }
        let (h, s, t) = ext_gcd(&g, w);
        for c in coeffs.iter_mut() {
            *c *= &s;
        }
        coeffs[i] += t;
        g = h;
    }
    let alpha = g;
    let beta = lattice.q_eval(&coeffs)?;
    // q(f + k v) = q(f) + 2 k α
    let shift = -beta.div_floor(&(Int::from(2) * &alpha));
    Ok(coeffs.iter().zip(v).map(|(c, x)| c + &shift * x).collect())
}

/// A primitive isotropic vector with its divisor and discriminant class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicVector {
    pub v: IntVector,
    pub alpha: Int,
    /// `v / α` reduced mod `L` into `[0, 1)^rank`.
    pub disc_class: RatVector,
}

impl ParabolicVector {
    pub fn new(lattice: &Lattice, v: &[Int]) -> Result<Self> {
        let alpha = divisor(lattice, v)?;
        let a = rat_from_int(&alpha);
        let disc_class = v.iter().map(|x| frac(&(rat_from_int(x) / &a))).collect();
        Ok(ParabolicVector { v: v.to_vec(), alpha, disc_class })
    }
}

/// `K = Span(v, f)` with Gram matrix `[[0, α], [α, β]]` in the basis `(v, f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropicPlane {
    pub v: ParabolicVector,
    pub f: IntVector,
    pub beta: Int,
    /// Saturation of `Span(v, f)`, Hermite-canonical basis.
    pub k: Sublattice,
}

impl IsotropicPlane {
    pub fn alpha(&self) -> &Int {
        &self.v.alpha
    }

    /// `[[0, α], [α, β]]`.
    pub fn normal_form(&self) -> IntMatrix {
        vec![vec![Int::zero(), self.v.alpha.clone()], vec![self.v.alpha.clone(), self.beta.clone()]]
    }
}

pub fn isotropic_plane(lattice: &Lattice, v: &[Int]) -> Result<IsotropicPlane> {
    let pv = ParabolicVector::new(lattice, v)?;
    let f = minimal_partner(lattice, v)?;
    let beta = lattice.q_eval(&f)?;
    let k = lattice.saturate(&[v.to_vec(), f.clone()])?;
    let alpha_sq = &pv.alpha * &pv.alpha;
    if k.determinant() != -&alpha_sq {
        return Err(LatticeError::Internal(format!(
            "det K = {} but -α² = {}",
            k.determinant(),
            -&alpha_sq
        )));
    }
    let disc = lattice.discriminant().abs();
    if alpha_sq > &disc * &disc {
        return Err(LatticeError::LemmaViolation(format!("α² = {alpha_sq} exceeds |discr|² = {}", &disc * &disc)));
    }
    Ok(IsotropicPlane { v: pv, f, beta, k })
}

/// `K^⊥` together with the index of `K ⊕ K^⊥` in `L`.
pub fn complement_pair(lattice: &Lattice, k: &Sublattice) -> Result<(Sublattice, Int)> {
    if !k.is_nondegenerate() {
        return Err(LatticeError::DegenerateSublattice);
    }
    let kperp = lattice.orthogonal_complement(k);
    let both = if kperp.rank() == 0 { k.clone() } else { lattice.sum_sublattice(k, &kperp)? };
    let index = lattice.embedding_index(&both)?;
    let lhs = &index * &index * lattice.discriminant();
    if lhs != k.determinant() * kperp.determinant() {
        return Err(LatticeError::Internal("index² · det L != det K · det K^⊥".into()));
    }
    Ok((kperp, index))
}

/// `(α, ±[v/α])` with the sign class represented by the lexicographically
/// smaller of the two reduced representatives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitInvariant {
    pub alpha: Int,
    pub disc_class: RatVector,
}

fn negate_class(c: &[Rat]) -> RatVector {
    c.iter().map(|x| frac(&-x)).collect()
}

pub fn orbit_invariant(lattice: &Lattice, v: &[Int]) -> Result<OrbitInvariant> {
    let pv = ParabolicVector::new(lattice, v)?;
    let neg = negate_class(&pv.disc_class);
    let disc_class = pv.disc_class.min(neg);
    Ok(OrbitInvariant { alpha: pv.alpha, disc_class })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub discriminant: Int,
    pub vectors_checked: usize,
    /// Distinct divisors seen, ascending.
    pub alphas: Vec<Int>,
    /// How often each divisor occurred.
    pub alpha_counts: BTreeMap<Int, usize>,
    pub pass: bool,
}

/// Check `α | discr(L)` and `0 < α <= |discr(L)|` on every enumerated vector.
pub fn lemma_alpha_divides(lattice: &Lattice, height: u64) -> Result<LemmaReport> {
    let disc = lattice.discriminant();
    let abs = disc.abs();
    let vectors = enumerate_primitive_isotropic(lattice, height)?;
    let mut counts: BTreeMap<Int, usize> = BTreeMap::new();
    for v in &vectors {
        let alpha = divisor(lattice, v)?;
        if !alpha.is_positive() || alpha > abs || !disc.is_multiple_of(&alpha) {
            return Err(LatticeError::LemmaViolation(format!(
                "v = {v:?}: α = {alpha}, discr = {disc}"
            )));
        }
        *counts.entry(alpha).or_default() += 1;
    }
    Ok(LemmaReport {
        discriminant: disc,
        vectors_checked: vectors.len(),
        alphas: counts.keys().cloned().collect(),
        alpha_counts: counts,
        pass: true,
    })
}

/// Apply `m` to a column vector.
pub fn apply(m: &[IntVector], v: &[Int]) -> IntVector {
    mat_vec(m, v)
}

/// Whether `mᵀ · gram · m = gram`.
pub fn preserves_form(lattice: &Lattice, m: &[IntVector]) -> bool {
    let n = lattice.rank();
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return false;
    }
    mat_mul(&mat_mul(&transpose(m), lattice.gram()), m) == *lattice.gram()
}

/// Inverse of an isometry, `G⁻¹ mᵀ G`.
pub fn isometry_inverse(lattice: &Lattice, m: &[IntVector]) -> Result<IntMatrix> {
    let g = to_rat_matrix(lattice.gram());
    let g_inv = linalg::rat_inverse(&g).ok_or(LatticeError::Degenerate)?;
    let mt_g = to_rat_matrix(&mat_mul(&transpose(m), lattice.gram()));
    let inv = crate::arith::rat_mat_mul(&g_inv, &mt_g);
    inv.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    if x.is_integer() {
                        Ok(x.to_integer())
                    } else {
                        Err(LatticeError::Internal("isometry inverse is not integral".into()))
                    }
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalGroupReport {
    /// Sorted lexicographically by rows.
    pub matrices: Vec<IntMatrix>,
    /// The found set is closed under multiplication.
    pub closed: bool,
}

/// Default cap on backtracking nodes for [`orthogonal_group_bruteforce`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// Every integer matrix with entries in `[-entry_bound, entry_bound]` that
/// preserves the form. Columns are the images of the basis vectors.
pub fn orthogonal_group_bruteforce(lattice: &Lattice, entry_bound: u64, budget: u64) -> Result<OrthogonalGroupReport> {
    let n = lattice.rank();
    let gram = lattice.gram();
    let b = entry_bound as i64;
    let total = box_size(n, entry_bound);
    if total > MAX_BOX {
        return Err(LatticeError::BudgetExceeded { needed: total.to_string(), budget: MAX_BOX as u64 });
    }
    // candidate columns for each basis vector, by required norm
    let mut by_norm: HashMap<Int, Vec<IntVector>> = HashMap::new();
    for i in 0..n {
        by_norm.entry(gram[i][i].clone()).or_default();
    }
    for idx in 0..total {
        let v: IntVector = decode(idx, n, b).into_iter().map(Int::from).collect();
        let q = lattice.q_eval(&v)?;
        if let Some(list) = by_norm.get_mut(&q) {
            list.push(v);
        }
    }
    let mut columns: Vec<IntVector> = Vec::with_capacity(n);
    let mut found: Vec<IntMatrix> = Vec::new();
    let mut nodes: u64 = 0;
    search_columns(lattice, &by_norm, &mut columns, &mut found, &mut nodes, budget)?;
    let mut matrices: Vec<IntMatrix> = found.into_iter().map(|cols| transpose(&cols)).collect();
    matrices.sort();
    let set: HashSet<&IntMatrix> = matrices.iter().collect();
    let closed = matrices.iter().all(|a| matrices.iter().all(|m| set.contains(&mat_mul(a, m))));
    Ok(OrthogonalGroupReport { matrices, closed })
}

fn search_columns(
    lattice: &Lattice,
    by_norm: &HashMap<Int, Vec<IntVector>>,
    columns: &mut Vec<IntVector>,
    found: &mut Vec<IntMatrix>,
    nodes: &mut u64,
    budget: u64,
) -> Result<()> {
    let n = lattice.rank();
    let j = columns.len();
    if j == n {
        found.push(columns.clone());
        return Ok(());
    }
    let gram = lattice.gram();
    for cand in &by_norm[&gram[j][j]] {
        *nodes += 1;
        if *nodes > budget {
            return Err(LatticeError::BudgetExceeded { needed: format!("> {budget} search nodes"), budget });
        }
        let image = lattice.pairing_vector(cand)?;
        let fits = columns.iter().enumerate().all(|(i, c)| crate::arith::dot(c, &image) == gram[i][j]);
        if fits {
            columns.push(cand.clone());
            search_columns(lattice, by_norm, columns, found, nodes, budget)?;
            columns.pop();
        }
    }
    Ok(())
}

/// Reflections `x ↦ x - (2 b(x, δ) / q(δ)) δ` in vectors `δ` with
/// `q(δ) ∈ {±1, ±2}` and entries in `[-radius, radius]`, kept when integral.
/// Also includes `-id`.
pub fn reflection_generators(lattice: &Lattice, radius: u64) -> Result<Vec<IntMatrix>> {
    let roots = scan_box(lattice, radius, |_, q| {
        let a = q.abs();
        a == Int::one() || a == Int::from(2)
    })?;
    let n = lattice.rank();
    let mut out: BTreeSet<IntMatrix> = BTreeSet::new();
    let mut minus = identity(n);
    for (i, row) in minus.iter_mut().enumerate() {
        row[i] = -Int::one();
    }
    out.insert(minus);
    for delta in roots {
        let q = lattice.q_eval(&delta)?;
        let g_delta = lattice.pairing_vector(&delta)?;
        // column j of the matrix is σ(e_j) = e_j - (2 (Gδ)_j / q) δ
        let mut m = identity(n);
        let mut integral = true;
        for (j, gd) in g_delta.iter().enumerate() {
            let num = Int::from(2) * gd;
            if !num.is_multiple_of(&q) {
                integral = false;
                break;
            }
            let coef = num / &q;
            for i in 0..n {
                m[i][j] -= &coef * &delta[i];
            }
        }
        if integral {
            debug_assert!(preserves_form(lattice, &m));
            out.insert(m);
        }
    }
    Ok(out.into_iter().collect())
}

/// Whether every generator fixes `L*/L` pointwise.
pub fn acts_trivially_on_discriminant(lattice: &Lattice, generators: &[IntMatrix]) -> bool {
    let g = to_rat_matrix(lattice.gram());
    let g_inv = linalg::rat_inverse(&g).expect("non-degenerate");
    // columns of G⁻¹ generate L*
    let duals = transpose(&g_inv);
    generators.iter().all(|m| {
        let mr = to_rat_matrix(m);
        duals.iter().all(|x| {
            let image: RatVector = mr.iter().map(|row| crate::arith::rat_dot(row, x)).collect();
            image.iter().zip(x).all(|(a, b)| (a - b).is_integer())
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitClass {
    pub alpha: Int,
    /// Discriminant class, canonical under sign and the generators' action.
    pub disc_class: RatVector,
    /// Window vectors in this class, sorted; the first is the representative.
    pub members: Vec<IntVector>,
    /// The search left the working window, so the class may be under-merged.
    pub capped: bool,
    pub merged_by_bfs: bool,
}

impl OrbitClass {
    pub fn representative(&self) -> &IntVector {
        &self.members[0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub lattice: Lattice,
    pub height: u64,
    pub discriminant: Int,
    pub classes: Vec<OrbitClass>,
    /// Number of distinct invariants among the classes.
    pub invariant_classes: usize,
    pub discriminant_action_trivial: bool,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut cur = x;
        while self.0[cur] != root {
            let next = self.0[cur];
            self.0[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

fn max_abs(v: &[Int]) -> Int {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

/// Partition the primitive isotropic vectors of height `<= height` into
/// classes connected by `generators` (and their inverses), exploring through
/// vectors of height `<= 4 * height`.
pub fn orbit_census(lattice: &Lattice, height: u64, generators: &[IntMatrix]) -> Result<OrbitReport> {
    for (index, m) in generators.iter().enumerate() {
        if !preserves_form(lattice, m) {
            return Err(LatticeError::InvalidGenerator { index });
        }
    }
    let mut moves: BTreeSet<IntMatrix> = generators.iter().cloned().collect();
    for m in generators {
        moves.insert(isometry_inverse(lattice, m)?);
    }
    let moves: Vec<IntMatrix> = moves.into_iter().collect();

    let window = enumerate_primitive_isotropic(lattice, height)?;
    let index: HashMap<IntVector, usize> = window.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let cap = Int::from(4 * height);
    let mut uf = UnionFind((0..window.len()).collect());
    let mut explored = vec![false; window.len()];
    let mut capped_from = vec![false; window.len()];

    for start in 0..window.len() {
        if explored[start] {
            continue;
        }
        let mut seen: HashSet<IntVector> = HashSet::from([window[start].clone()]);
        let mut queue = VecDeque::from([window[start].clone()]);
        let mut capped = false;
        while let Some(u) = queue.pop_front() {
            for m in &moves {
                let w = sign_normalize(&apply(m, &u));
                if max_abs(&w) > cap {
                    capped = true;
                    continue;
                }
                if seen.insert(w.clone()) {
                    if let Some(&j) = index.get(&w) {
                        uf.union(start, j);
                        explored[j] = true;
                    }
                    queue.push_back(w);
                }
            }
        }
        explored[start] = true;
        capped_from[start] = capped;
    }

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..window.len() {
        let r = uf.find(i);
        groups.entry(r).or_default().push(i);
    }

    let mut class_cache: HashMap<RatVector, RatVector> = HashMap::new();
    let mut classes = Vec::new();
    for members in groups.values() {
        let mut invariant: Option<OrbitInvariant> = None;
        for &i in members {
            let pv = ParabolicVector::new(lattice, &window[i])?;
            let canon = class_cache
                .entry(pv.disc_class.clone())
                .or_insert_with(|| saturate_class(&moves, &pv.disc_class))
                .clone();
            let inv = OrbitInvariant { alpha: pv.alpha, disc_class: canon };
            match &invariant {
                None => invariant = Some(inv),
                Some(prev) if *prev != inv => {
                    return Err(LatticeError::InvariantMergeViolation(format!(
                        "{:?} and {:?} joined with invariants {prev:?} and {inv:?}",
                        window[members[0]], window[i]
                    )));
                }
                Some(_) => {}
            }
        }
        let inv = invariant.expect("classes are nonempty");
        let vectors: Vec<IntVector> = members.iter().map(|&i| window[i].clone()).collect();
        classes.push(OrbitClass {
            alpha: inv.alpha,
            disc_class: inv.disc_class,
            capped: members.iter().any(|&i| capped_from[i]),
            merged_by_bfs: vectors.len() > 1,
            members: vectors,
        });
    }
    classes.sort_by(|a, b| {
        (&a.alpha, &a.disc_class, &a.members[0]).cmp(&(&b.alpha, &b.disc_class, &b.members[0]))
    });
    let invariant_classes = classes
        .iter()
        .map(|c| (c.alpha.clone(), c.disc_class.clone()))
        .collect::<BTreeSet<_>>()
        .len();
    Ok(OrbitReport {
        lattice: lattice.clone(),
        height,
        discriminant: lattice.discriminant(),
        classes,
        invariant_classes,
        discriminant_action_trivial: acts_trivially_on_discriminant(lattice, generators),
    })
}

/// Smallest class in the orbit of `±class` under the induced action on `L*/L`.
fn saturate_class(moves: &[IntMatrix], class: &[Rat]) -> RatVector {
    let start: RatVector = class.to_vec();
    let mut seen: BTreeSet<RatVector> = BTreeSet::from([start.clone(), negate_class(&start)]);
    let mut queue: VecDeque<RatVector> = seen.iter().cloned().collect();
    while let Some(c) = queue.pop_front() {
        for m in moves {
            let image: RatVector = m
                .iter()
                .map(|row| frac(&row.iter().zip(&c).fold(Rat::zero(), |acc, (a, x)| acc + rat_from_int(a) * x)))
                .collect();
            for cand in [negate_class(&image), image] {
                if seen.insert(cand.clone()) {
                    queue.push_back(cand);
                }
            }
        }
    }
    seen.into_iter().next().expect("nonempty")
}
