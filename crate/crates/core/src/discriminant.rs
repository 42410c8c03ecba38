//! Discriminant groups `A = L*/L` with their finite bilinear and quadratic
//! forms, isotropic subgroups and overlattice gluing.
//!
//! Elements are stored in Smith coordinates: an element is a vector `c` with
//! `0 <= c[i] < orders[i]`, standing for `sum c[i] * generators[i]`. The
//! quadratic form takes values mod 2 on even lattices and mod 1 (where it
//! equals `b(x, x)`) on odd ones.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{
    frac, mat_vec, rat_from_int, rat_mod, to_rat_vector, transpose, Int, IntMatrix, IntVector, Rat,
    RatVector,
};
use crate::error::{LatticeError, Result};
use crate::lattice::{Lattice, Signature};
use crate::linalg;

/// Default cap on the group order for exhaustive enumeration.
pub const DEFAULT_BUDGET: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiscElement(pub IntVector);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    /// Cyclic orders. For groups built by [`discriminant_group`] each divides
    /// the next; orthogonal sums simply concatenate.
    pub orders: Vec<Int>,
    /// Generators as rational vectors in lattice coordinates.
    pub generators: Vec<RatVector>,
    /// `b(g_i, g_j)` in `[0, 1)`.
    pub b_matrix: Vec<RatVector>,
    /// `q(g_i)` in `[0, modulus)`.
    pub q_values: RatVector,
    pub even: bool,
    gram: IntMatrix,
    /// Rows of the left Smith transform: `coords = coord_map * (gram * x)`.
    coord_map: IntMatrix,
}

/// The discriminant group of a non-degenerate lattice.
pub fn discriminant_group(lattice: &Lattice) -> FiniteQuadraticForm {
    let gram = lattice.gram().clone();
    let snf = linalg::smith(&gram);
    let vt = transpose(&snf.v);
    let mut orders = Vec::new();
    let mut generators = Vec::new();
    let mut coord_map = Vec::new();
    for (i, d) in snf.diagonal.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        let d_rat = rat_from_int(d);
        generators.push(vt[i].iter().map(|x| rat_from_int(x) / &d_rat).collect());
        orders.push(d.clone());
        coord_map.push(snf.u[i].clone());
    }
    FiniteQuadraticForm::from_parts(orders, generators, gram, coord_map, lattice.is_even())
}

fn b_exact(gram: &[IntVector], x: &[Rat], y: &[Rat]) -> Rat {
    let mut total = Rat::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() && !gram[i][j].is_zero() {
                total += xi * yj * rat_from_int(&gram[i][j]);
            }
        }
    }
    total
}

impl FiniteQuadraticForm {
    fn from_parts(
        orders: Vec<Int>,
        generators: Vec<RatVector>,
        gram: IntMatrix,
        coord_map: IntMatrix,
        even: bool,
    ) -> Self {
        let modulus = if even { Int::from(2) } else { Int::one() };
        let b_matrix = generators
            .iter()
            .map(|x| generators.iter().map(|y| frac(&b_exact(&gram, x, y))).collect())
            .collect();
        let q_values = generators.iter().map(|x| rat_mod(&b_exact(&gram, x, x), &modulus)).collect();
        FiniteQuadraticForm { orders, generators, b_matrix, q_values, even, gram, coord_map }
    }

    pub fn modulus(&self) -> Int {
        if self.even {
            Int::from(2)
        } else {
            Int::one()
        }
    }

    pub fn order(&self) -> Int {
        self.orders.iter().product()
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    /// Ambient lattice rank of the representatives.
    pub fn ambient_rank(&self) -> usize {
        self.gram.len()
    }

    pub fn zero(&self) -> DiscElement {
        DiscElement(vec![Int::zero(); self.orders.len()])
    }

    pub fn validate(&self, x: &DiscElement) -> Result<()> {
        if x.0.len() != self.orders.len() {
            return Err(LatticeError::ElementNotInGroup(format!(
                "expected {} coordinates, got {}",
                self.orders.len(),
                x.0.len()
            )));
        }
        for (c, d) in x.0.iter().zip(&self.orders) {
            if c.is_negative() || c >= d {
                return Err(LatticeError::ElementNotInGroup(format!("coordinate {c} outside [0, {d})")));
            }
        }
        Ok(())
    }

    pub fn add(&self, x: &DiscElement, y: &DiscElement) -> DiscElement {
        DiscElement(
            x.0.iter().zip(&y.0).zip(&self.orders).map(|((a, b), d)| (a + b).mod_floor(d)).collect(),
        )
    }

    pub fn neg(&self, x: &DiscElement) -> DiscElement {
        DiscElement(x.0.iter().zip(&self.orders).map(|(a, d)| (-a).mod_floor(d)).collect())
    }

    pub fn scale(&self, k: &Int, x: &DiscElement) -> DiscElement {
        DiscElement(x.0.iter().zip(&self.orders).map(|(a, d)| (k * a).mod_floor(d)).collect())
    }

    pub fn element_order(&self, x: &DiscElement) -> Int {
        x.0.iter()
            .zip(&self.orders)
            .fold(Int::one(), |acc, (c, d)| acc.lcm(&(d / c.gcd(d))))
    }

    /// Rational representative `sum c_i g_i` in lattice coordinates.
    pub fn representative(&self, x: &DiscElement) -> RatVector {
        let n = self.ambient_rank();
        let mut out = vec![Rat::zero(); n];
        for (c, g) in x.0.iter().zip(&self.generators) {
            if c.is_zero() {
                continue;
            }
            let c = rat_from_int(c);
            for (o, gi) in out.iter_mut().zip(g) {
                *o += &c * gi;
            }
        }
        out
    }

    /// Unique representative of the coset with every coordinate in `[0, 1)`.
    pub fn reduced_representative(&self, x: &DiscElement) -> RatVector {
        self.representative(x).iter().map(frac).collect()
    }

    /// Class of a dual-lattice vector given in lattice coordinates.
    pub fn element_of(&self, v: &[Rat]) -> Result<DiscElement> {
        if v.len() != self.ambient_rank() {
            return Err(LatticeError::ElementNotInGroup(format!(
                "vector has {} coordinates, lattice rank is {}",
                v.len(),
                self.ambient_rank()
            )));
        }
        let image: Vec<Rat> = self.gram.iter().map(|row| crate::arith::rat_dot(&to_rat_vector(row), v)).collect();
        if image.iter().any(|x| !x.is_integer()) {
            return Err(LatticeError::ElementNotInGroup("vector is not in the dual lattice".into()));
        }
        let y: IntVector = image.into_iter().map(|x| x.to_integer()).collect();
        let coords = mat_vec(&self.coord_map, &y);
        Ok(DiscElement(coords.iter().zip(&self.orders).map(|(c, d)| c.mod_floor(d)).collect()))
    }

    pub fn bilinear(&self, x: &DiscElement, y: &DiscElement) -> Result<Rat> {
        self.validate(x)?;
        self.validate(y)?;
        let mut total = Rat::zero();
        for (i, ci) in x.0.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in y.0.iter().enumerate() {
                if !cj.is_zero() {
                    total += rat_from_int(&(ci * cj)) * &self.b_matrix[i][j];
                }
            }
        }
        Ok(frac(&total))
    }

    pub fn quadratic(&self, x: &DiscElement) -> Result<Rat> {
        self.validate(x)?;
        if !self.even {
            return self.bilinear(x, x);
        }
        let two = Rat::from_integer(Int::from(2));
        let mut total = Rat::zero();
        for (i, ci) in x.0.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            total += rat_from_int(&(ci * ci)) * &self.q_values[i];
            for (j, cj) in x.0.iter().enumerate().skip(i + 1) {
                if !cj.is_zero() {
                    total += &two * rat_from_int(&(ci * cj)) * &self.b_matrix[i][j];
                }
            }
        }
        Ok(rat_mod(&total, &self.modulus()))
    }

    /// All elements in lexicographic order of Smith coordinates.
    pub fn elements(&self, budget: u64) -> Result<Vec<DiscElement>> {
        let order = self.order();
        if order > Int::from(budget) {
            return Err(LatticeError::BudgetExceeded { needed: order.to_string(), budget });
        }
        let orders: Vec<u64> = self.orders.iter().map(|d| d.to_u64().expect("bounded by budget")).collect();
        let total = order.to_u64().expect("bounded by budget");
        let mut out = Vec::with_capacity(total as usize);
        let mut cur = vec![0u64; orders.len()];
        for _ in 0..total {
            out.push(DiscElement(cur.iter().map(|&c| Int::from(c)).collect()));
            for k in (0..cur.len()).rev() {
                cur[k] += 1;
                if cur[k] < orders[k] {
                    break;
                }
                cur[k] = 0;
            }
        }
        Ok(out)
    }

    /// Orthogonal sum `A1 ⊕ A2`, in concatenated lattice coordinates.
    pub fn orthogonal_sum(&self, other: &FiniteQuadraticForm) -> FiniteQuadraticForm {
        let (n, m) = (self.ambient_rank(), other.ambient_rank());
        let pad = |v: &RatVector, before: usize, after: usize| -> RatVector {
            let mut out = vec![Rat::zero(); before];
            out.extend(v.iter().cloned());
            out.extend(std::iter::repeat_n(Rat::zero(), after));
            out
        };
        let pad_int = |v: &IntVector, before: usize, after: usize| -> IntVector {
            let mut out = vec![Int::zero(); before];
            out.extend(v.iter().cloned());
            out.extend(std::iter::repeat_n(Int::zero(), after));
            out
        };
        let generators = self
            .generators
            .iter()
            .map(|g| pad(g, 0, m))
            .chain(other.generators.iter().map(|g| pad(g, n, 0)))
            .collect();
        let gram = self
            .gram
            .iter()
            .map(|r| pad_int(r, 0, m))
            .chain(other.gram.iter().map(|r| pad_int(r, n, 0)))
            .collect();
        let coord_map = self
            .coord_map
            .iter()
            .map(|r| pad_int(r, 0, m))
            .chain(other.coord_map.iter().map(|r| pad_int(r, n, 0)))
            .collect();
        let orders = self.orders.iter().chain(&other.orders).cloned().collect();
        FiniteQuadraticForm::from_parts(orders, generators, gram, coord_map, self.even && other.even)
    }

    /// Multiset of q-values, sorted.
    pub fn q_value_multiset(&self, budget: u64) -> Result<Vec<Rat>> {
        let mut values: Vec<Rat> =
            self.elements(budget)?.iter().map(|x| self.quadratic(x).expect("enumerated element")).collect();
        values.sort();
        Ok(values)
    }
}

/// A subgroup of a discriminant group, stored as its sorted element list.
///
/// Isotropy is checked where it matters ([`overlattice_from_isotropic`]);
/// [`isotropic_subgroups`] only ever produces isotropic ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IsotropicSubgroup {
    pub elements: Vec<DiscElement>,
    /// Reduced representatives (coordinates in `[0, 1)`) aligned with `elements`.
    pub representatives: Vec<RatVector>,
}

impl IsotropicSubgroup {
    pub fn trivial(form: &FiniteQuadraticForm) -> Self {
        Self::from_sorted(form, vec![form.zero()])
    }

    fn from_sorted(form: &FiniteQuadraticForm, elements: Vec<DiscElement>) -> Self {
        let representatives = elements.iter().map(|x| form.reduced_representative(x)).collect();
        IsotropicSubgroup { elements, representatives }
    }

    /// Validate that `elements` form a subgroup of `form`.
    pub fn from_elements(form: &FiniteQuadraticForm, elements: Vec<DiscElement>) -> Result<Self> {
        for x in &elements {
            form.validate(x)?;
        }
        let set: BTreeSet<DiscElement> = elements.into_iter().collect();
        if !set.contains(&form.zero()) {
            return Err(LatticeError::NotASubgroup("missing the zero element".into()));
        }
        for x in &set {
            for y in &set {
                if !set.contains(&form.add(x, y)) {
                    return Err(LatticeError::NotASubgroup("not closed under addition".into()));
                }
            }
        }
        Ok(Self::from_sorted(form, set.into_iter().collect()))
    }

    /// Subgroup generated by the given elements.
    pub fn generated_by(form: &FiniteQuadraticForm, gens: &[DiscElement]) -> Result<Self> {
        let mut set: BTreeSet<DiscElement> = BTreeSet::from([form.zero()]);
        for g in gens {
            form.validate(g)?;
            set = extend_by(form, &set, g);
        }
        Ok(Self::from_sorted(form, set.into_iter().collect()))
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &DiscElement) -> bool {
        self.elements.binary_search(x).is_ok()
    }
}

/// `S + <g>` for a subgroup `S` of an abelian group.
fn extend_by(form: &FiniteQuadraticForm, set: &BTreeSet<DiscElement>, g: &DiscElement) -> BTreeSet<DiscElement> {
    let mut out = set.clone();
    let mut multiple = g.clone();
    while !set.contains(&multiple) {
        for s in set {
            out.insert(form.add(s, &multiple));
        }
        multiple = form.add(&multiple, g);
    }
    out
}

/// Every isotropic subgroup, trivial one included, sorted by order and then by
/// element list.
///
/// On odd lattices "isotropic" additionally requires `b` to vanish on the
/// subgroup, which is exactly the condition for an integral gluing.
pub fn isotropic_subgroups(form: &FiniteQuadraticForm, budget: u64) -> Result<Vec<IsotropicSubgroup>> {
    let all = form.elements(budget)?;
    let isotropic: Vec<DiscElement> = all
        .into_iter()
        .filter(|x| form.quadratic(x).expect("enumerated element").is_zero())
        .collect();

    let start: BTreeSet<DiscElement> = BTreeSet::from([form.zero()]);
    let mut seen: HashSet<Vec<DiscElement>> = HashSet::new();
    seen.insert(start.iter().cloned().collect());
    let mut queue = VecDeque::from([start]);
    let mut found = Vec::new();
    while let Some(sub) = queue.pop_front() {
        for x in &isotropic {
            if sub.contains(x) {
                continue;
            }
            if !form.even && sub.iter().any(|s| !form.bilinear(s, x).expect("valid").is_zero()) {
                continue;
            }
            let bigger = extend_by(form, &sub, x);
            if !bigger.iter().all(|y| form.quadratic(y).expect("valid").is_zero()) {
                continue;
            }
            let key: Vec<DiscElement> = bigger.iter().cloned().collect();
            if seen.insert(key) {
                queue.push_back(bigger);
            }
        }
        found.push(sub);
    }
    let mut out: Vec<IsotropicSubgroup> =
        found.into_iter().map(|s| IsotropicSubgroup::from_sorted(form, s.into_iter().collect())).collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
    Ok(out)
}

/// An overlattice `L ⊂ L'` with the basis of `L'` in coordinates of `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlattice {
    pub lattice: Lattice,
    /// Rows: basis of `L'` as rational vectors in the coordinates of `L`.
    pub basis: Vec<RatVector>,
    pub index: Int,
}

/// `L' = L + (lifts of H)`, in the Hermite-canonical basis.
pub fn overlattice_from_isotropic(lattice: &Lattice, h: &IsotropicSubgroup) -> Result<Overlattice> {
    let n = lattice.rank();
    let modulus = if lattice.is_even() { Int::from(2) } else { Int::one() };
    for rep in &h.representatives {
        if rep.len() != n {
            return Err(LatticeError::DimensionMismatch { expected: n, got: rep.len() });
        }
        let pairings = lattice.gram().iter().map(|row| crate::arith::rat_dot(&to_rat_vector(row), rep));
        if pairings.into_iter().any(|x| !x.is_integer()) {
            return Err(LatticeError::ElementNotInGroup("representative is not in the dual lattice".into()));
        }
        let q = lattice.q_rat(rep)?;
        if !rat_mod(&q, &modulus).is_zero() {
            return Err(LatticeError::NotIsotropic(format!(
                "q = {} mod {modulus} on a subgroup element",
                crate::arith::rat_to_string(&rat_mod(&q, &modulus))
            )));
        }
    }
    let denom = h
        .representatives
        .iter()
        .fold(Int::one(), |acc, r| acc.lcm(&crate::arith::common_denominator(r)));
    let denom_rat = rat_from_int(&denom);
    let mut rows: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { denom.clone() } else { Int::zero() }).collect())
        .collect();
    for rep in &h.representatives {
        rows.push(rep.iter().map(|x| (x * &denom_rat).to_integer()).collect());
    }
    let scaled = linalg::hnf(&rows);
    let basis: Vec<RatVector> = scaled.iter().map(|r| r.iter().map(|x| rat_from_int(x) / &denom_rat).collect()).collect();
    let gram_rat = lattice.induced_rat_gram(&basis);
    if gram_rat.iter().flatten().any(|x| !x.is_integer()) {
        return Err(LatticeError::NotIsotropic("gluing produces non-integral pairings".into()));
    }
    let gram: IntMatrix = gram_rat.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
    let glued = Lattice::new(gram)?;
    if lattice.is_even() && !glued.is_even() {
        return Err(LatticeError::NotIsotropic("gluing produces an odd lattice".into()));
    }
    let det_scaled = linalg::det(&scaled).abs();
    let index = denom.pow(n as u32) / det_scaled;
    Ok(Overlattice { lattice: glued, basis, index })
}

/// The subgroup `L'/L` of `A_L` for an overlattice basis.
pub fn overlattice_subgroup(form: &FiniteQuadraticForm, over: &Overlattice) -> Result<IsotropicSubgroup> {
    let gens: Vec<DiscElement> = over.basis.iter().map(|b| form.element_of(b)).collect::<Result<_>>()?;
    IsotropicSubgroup::generated_by(form, &gens)
}

/// Evidence for the gluing correspondence on one isotropic subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NikulinReport {
    pub subgroup_order: usize,
    pub overlattice: Lattice,
    pub overlattice_discriminant: Int,
    pub discriminant_relation_holds: bool,
    pub orthogonal_order: usize,
    /// `H^⊥ = L'*/L` as subsets of `A_L`.
    pub orthogonal_is_dual_quotient: bool,
    /// The natural map `H^⊥ -> A_{L'}` is onto.
    pub quotient_map_surjective: bool,
    /// Its kernel is exactly `H`.
    pub quotient_map_kernel_is_subgroup: bool,
    /// It preserves the quadratic form.
    pub quotient_map_preserves_q: bool,
    pub round_trip_recovers_subgroup: bool,
    pub pass: bool,
}

pub fn verify_nikulin(lattice: &Lattice, h: &IsotropicSubgroup, budget: u64) -> Result<NikulinReport> {
    let form = discriminant_group(lattice);
    let over = overlattice_from_isotropic(lattice, h)?;
    let glued_form = discriminant_group(&over.lattice);
    let h_order = Int::from(h.order());
    let discriminant_relation_holds = over.lattice.discriminant() * &h_order * &h_order == lattice.discriminant();

    let basis_inv = linalg::rat_inverse(&over.basis)
        .ok_or_else(|| LatticeError::Internal("overlattice basis is singular".into()))?;

    let mut orthogonal = Vec::new();
    let mut orthogonal_is_dual_quotient = true;
    let mut image: BTreeSet<DiscElement> = BTreeSet::new();
    let mut kernel: BTreeSet<DiscElement> = BTreeSet::new();
    let mut preserves_q = true;
    for x in form.elements(budget)? {
        let in_perp = h.elements.iter().all(|y| form.bilinear(&x, y).expect("valid").is_zero());
        let rep = form.representative(&x);
        // membership in L'* : integral pairing with each basis vector of L'
        let in_dual = over
            .basis
            .iter()
            .all(|b| lattice.b_rat(b, &rep).expect("rank matches").is_integer());
        if in_perp != in_dual {
            orthogonal_is_dual_quotient = false;
        }
        if !in_perp {
            continue;
        }
        orthogonal.push(x.clone());
        if !in_dual {
            continue;
        }
        // coordinates of rep in the basis of L'
        let coords: RatVector = (0..rep.len())
            .map(|j| crate::arith::rat_dot(&rep, &basis_inv.iter().map(|r| r[j].clone()).collect::<Vec<_>>()))
            .collect();
        let y = glued_form.element_of(&coords)?;
        if glued_form.quadratic(&y)? != form.quadratic(&x)? {
            preserves_q = false;
        }
        if y == glued_form.zero() {
            kernel.insert(x.clone());
        }
        image.insert(y);
    }
    let quotient_map_surjective = Int::from(image.len()) == glued_form.order();
    let quotient_map_kernel_is_subgroup = kernel.iter().cloned().collect::<Vec<_>>() == h.elements;
    let round_trip_recovers_subgroup = overlattice_subgroup(&form, &over)? == *h;
    let pass = discriminant_relation_holds
        && orthogonal_is_dual_quotient
        && quotient_map_surjective
        && quotient_map_kernel_is_subgroup
        && preserves_q
        && round_trip_recovers_subgroup;
    Ok(NikulinReport {
        subgroup_order: h.order(),
        overlattice_discriminant: over.lattice.discriminant(),
        overlattice: over.lattice,
        discriminant_relation_holds,
        orthogonal_order: orthogonal.len(),
        orthogonal_is_dual_quotient,
        quotient_map_surjective,
        quotient_map_kernel_is_subgroup,
        quotient_map_preserves_q: preserves_q,
        round_trip_recovers_subgroup,
        pass,
    })
}

/// Whether a group isomorphism preserving `q` exists, by backtracking over
/// generator images.
pub fn disc_form_isomorphic(a: &FiniteQuadraticForm, b: &FiniteQuadraticForm, budget: u64) -> Result<bool> {
    if a.order() != b.order() || a.even != b.even {
        return Ok(false);
    }
    if a.q_value_multiset(budget)? != b.q_value_multiset(budget)? {
        return Ok(false);
    }
    let targets = b.elements(budget)?;
    // candidate images per generator, ordered by element order
    let mut candidates: Vec<Vec<DiscElement>> = Vec::new();
    for (i, d) in a.orders.iter().enumerate() {
        let mut c: Vec<DiscElement> = targets
            .iter()
            .filter(|y| &b.element_order(y) == d && b.quadratic(y).expect("valid") == a.q_values[i])
            .cloned()
            .collect();
        c.sort_by(|x, y| b.element_order(x).cmp(&b.element_order(y)).then_with(|| x.cmp(y)));
        if c.is_empty() {
            return Ok(false);
        }
        candidates.push(c);
    }
    let mut chosen: Vec<DiscElement> = Vec::new();
    Ok(backtrack(a, b, &candidates, &mut chosen))
}

// Preserving b and q on generators preserves q everywhere; non-degeneracy of
// b on `a` makes the map injective, so equal orders give a bijection.
fn backtrack(
    a: &FiniteQuadraticForm,
    b: &FiniteQuadraticForm,
    candidates: &[Vec<DiscElement>],
    chosen: &mut Vec<DiscElement>,
) -> bool {
    let k = chosen.len();
    if k == candidates.len() {
        return true;
    }
    for y in &candidates[k] {
        let consistent = chosen
            .iter()
            .enumerate()
            .all(|(j, z)| b.bilinear(z, y).expect("valid") == a.b_matrix[j][k])
            && b.bilinear(y, y).expect("valid") == a.b_matrix[k][k];
        if !consistent {
            continue;
        }
        chosen.push(y.clone());
        if backtrack(a, b, candidates, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StableVerdict {
    NotStablyEquivalent { reason: String },
    /// All computed invariants agree. This does not prove equivalence.
    InvariantsMatch,
}

/// Refute stable equivalence through invariants that survive `⊕ M` and
/// cancellation: signature, `|discr|`, parity and the discriminant form.
pub fn stably_equivalent_check(l1: &Lattice, l2: &Lattice, budget: u64) -> Result<StableVerdict> {
    if l1.rank() != l2.rank() {
        return Err(LatticeError::RankMismatch(format!("ranks {} and {}", l1.rank(), l2.rank())));
    }
    let refute = |reason: String| Ok(StableVerdict::NotStablyEquivalent { reason });
    let (s1, s2): (Signature, Signature) = (l1.signature(), l2.signature());
    if s1 != s2 {
        return refute(format!("signatures ({}, {}) vs ({}, {})", s1.s_plus, s1.s_minus, s2.s_plus, s2.s_minus));
    }
    let (d1, d2) = (l1.discriminant().abs(), l2.discriminant().abs());
    if d1 != d2 {
        return refute(format!("|discriminant| {d1} vs {d2}"));
    }
    if l1.is_even() != l2.is_even() {
        return refute("parity differs".into());
    }
    if !disc_form_isomorphic(&discriminant_group(l1), &discriminant_group(l2), budget)? {
        return refute("discriminant forms are not isomorphic".into());
    }
    Ok(StableVerdict::InvariantsMatch)
}
