//! Integral lattices given by a Gram matrix, and their sublattices.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{
    dot, exact_sqrt, gcd_all, is_zero_vector, mat_vec, to_rat_matrix, transpose, Int, IntMatrix,
    IntVector, Rat, RatVector,
};
use crate::error::{LatticeError, Result};
use crate::linalg;

/// A free Z-module of finite rank with a non-degenerate symmetric integral form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    gram: IntMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub s_plus: usize,
    pub s_minus: usize,
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(LatticeError::NotSquare("empty gram matrix".into()));
        }
        if let Some(row) = gram.iter().position(|r| r.len() != n) {
            return Err(LatticeError::NotSquare(format!(
                "row {row} has length {} in a {n}-row matrix",
                gram[row].len()
            )));
        }
        for i in 0..n {
            for j in i + 1..n {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NonSymmetric { row: i, col: j });
                }
            }
        }
        if linalg::det(&gram).is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(Lattice { gram })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::new(crate::arith::imat(rows))
    }

    /// Diagonal lattice `<d_1> + ... + <d_k>`.
    pub fn diagonal(entries: &[i64]) -> Result<Self> {
        let n = entries.len();
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { Int::from(entries[i]) } else { Int::zero() }).collect())
                .collect(),
        )
    }

    /// The hyperbolic plane `U`, optionally scaled: `U(k)`.
    pub fn hyperbolic(scale: i64) -> Self {
        Lattice::from_rows(&[&[0, scale], &[scale, 0]]).expect("U(k) is non-degenerate for k != 0")
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i].is_even())
    }

    /// Multiply every entry of the form by `k`.
    pub fn scaled(&self, k: i64) -> Result<Self> {
        let k = Int::from(k);
        Lattice::new(self.gram.iter().map(|r| r.iter().map(|x| x * &k).collect()).collect())
    }

    fn check_dim(&self, v: &[Int]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), got: v.len() });
        }
        Ok(())
    }

    /// `gram * v`, the pairings of `v` with the basis.
    pub fn pairing_vector(&self, v: &[Int]) -> Result<IntVector> {
        self.check_dim(v)?;
        Ok(mat_vec(&self.gram, v))
    }

    pub fn b_eval(&self, v: &[Int], w: &[Int]) -> Result<Int> {
        self.check_dim(w)?;
        Ok(dot(&self.pairing_vector(v)?, w))
    }

    pub fn q_eval(&self, v: &[Int]) -> Result<Int> {
        self.b_eval(v, v)
    }

    /// Bilinear form on rational vectors in lattice coordinates.
    pub fn b_rat(&self, v: &[Rat], w: &[Rat]) -> Result<Rat> {
        self.check_rat_dim(v)?;
        self.check_rat_dim(w)?;
        let mut total = Rat::zero();
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, wj) in w.iter().enumerate() {
                if !self.gram[i][j].is_zero() && !wj.is_zero() {
                    total += vi * wj * Rat::from_integer(self.gram[i][j].clone());
                }
            }
        }
        Ok(total)
    }

    pub fn q_rat(&self, v: &[Rat]) -> Result<Rat> {
        self.b_rat(v, v)
    }

    fn check_rat_dim(&self, v: &[Rat]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), got: v.len() });
        }
        Ok(())
    }

    pub fn signature(&self) -> Signature {
        let (s_plus, s_minus, _) = linalg::inertia(&to_rat_matrix(&self.gram));
        Signature { s_plus, s_minus }
    }

    pub fn discriminant(&self) -> Int {
        linalg::det(&self.gram)
    }

    /// Gram matrix of the vectors `rows` (given in lattice coordinates).
    pub fn induced_gram(&self, rows: &[IntVector]) -> IntMatrix {
        let images: IntMatrix = rows.iter().map(|r| mat_vec(&self.gram, r)).collect();
        rows.iter().map(|r| images.iter().map(|g| dot(r, g)).collect()).collect()
    }

    /// Gram matrix of rational vectors in lattice coordinates.
    pub fn induced_rat_gram(&self, rows: &[RatVector]) -> Vec<RatVector> {
        rows.iter()
            .map(|r| rows.iter().map(|s| self.b_rat(r, s).expect("rows have lattice rank")).collect())
            .collect()
    }

    pub fn is_primitive(&self, v: &[Int]) -> Result<bool> {
        self.check_dim(v)?;
        if is_zero_vector(v) {
            return Err(LatticeError::ZeroVector);
        }
        Ok(gcd_all(v).is_one())
    }

    /// Saturation (primitive closure) of the span of `vectors`.
    pub fn saturate(&self, vectors: &[IntVector]) -> Result<Sublattice> {
        for v in vectors {
            self.check_dim(v)?;
        }
        if linalg::rank(vectors) != vectors.len() {
            return Err(LatticeError::DependentVectors);
        }
        Ok(self.sublattice_unchecked(linalg::saturation(vectors, self.rank())))
    }

    /// Sublattice spanned by `vectors` (not saturated), basis canonicalized.
    pub fn span(&self, vectors: &[IntVector]) -> Result<Sublattice> {
        for v in vectors {
            self.check_dim(v)?;
        }
        if linalg::rank(vectors) != vectors.len() {
            return Err(LatticeError::DependentVectors);
        }
        Ok(self.sublattice_unchecked(linalg::hnf(vectors)))
    }

    fn sublattice_unchecked(&self, basis: IntMatrix) -> Sublattice {
        let gram = self.induced_gram(&basis);
        Sublattice { ambient: self.clone(), basis, gram }
    }

    /// `S^⊥ = {x in L : b(x, s) = 0 for all s in S}`.
    pub fn orthogonal_complement(&self, s: &Sublattice) -> Sublattice {
        if s.basis.is_empty() {
            return self.sublattice_unchecked(crate::arith::identity(self.rank()));
        }
        // x * gram * basis^T = 0
        let pairing: IntMatrix = crate::arith::mat_mul(&self.gram, &transpose(&s.basis));
        self.sublattice_unchecked(linalg::left_kernel(&pairing, self.rank()))
    }

    /// Index of a full-rank sublattice, `sqrt(det(S) / det(L))`.
    pub fn embedding_index(&self, s: &Sublattice) -> Result<Int> {
        if s.rank() != self.rank() {
            return Err(LatticeError::RankMismatch(format!(
                "sublattice rank {} != lattice rank {}",
                s.rank(),
                self.rank()
            )));
        }
        let ds = s.determinant();
        let dl = self.discriminant();
        let (ratio, rem) = ds.div_rem(&dl);
        if !rem.is_zero() {
            return Err(LatticeError::Internal(format!("det ratio {ds}/{dl} is not an integer")));
        }
        exact_sqrt(&ratio).ok_or_else(|| LatticeError::Internal(format!("det ratio {ratio} is not a perfect square")))
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let (n, m) = (self.rank(), other.rank());
        let mut gram = vec![vec![Int::zero(); n + m]; n + m];
        for i in 0..n {
            gram[i][..n].clone_from_slice(&self.gram[i]);
        }
        for i in 0..m {
            gram[n + i][n..].clone_from_slice(&other.gram[i]);
        }
        Lattice { gram }
    }

    /// Orthogonal sum of a list of lattices.
    pub fn sum_of(parts: &[Lattice]) -> Lattice {
        let mut iter = parts.iter();
        let first = iter.next().expect("at least one summand").clone();
        iter.fold(first, |acc, l| acc.direct_sum(l))
    }

    /// The sublattice `S1 + S2` for two sublattices of this lattice.
    pub fn sum_sublattice(&self, a: &Sublattice, b: &Sublattice) -> Result<Sublattice> {
        let mut rows = a.basis.clone();
        rows.extend(b.basis.iter().cloned());
        self.span(&rows)
    }
}

/// Divide out the gcd of the coordinates.
pub fn primitive_part(v: &[Int]) -> Result<IntVector> {
    if is_zero_vector(v) {
        return Err(LatticeError::ZeroVector);
    }
    let g = gcd_all(v);
    Ok(v.iter().map(|x| x / &g).collect())
}

/// A sublattice given by a basis in ambient coordinates. The induced form may
/// be degenerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sublattice {
    pub ambient: Lattice,
    pub basis: IntMatrix,
    pub gram: IntMatrix,
}

impl Sublattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn determinant(&self) -> Int {
        linalg::det(&self.gram)
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant().is_zero()
    }

    /// Counts (positive, negative, zero) of the induced form.
    pub fn inertia(&self) -> (usize, usize, usize) {
        linalg::inertia(&to_rat_matrix(&self.gram))
    }

    /// The induced form as a standalone lattice (requires non-degeneracy).
    pub fn as_lattice(&self) -> Result<Lattice> {
        if self.basis.is_empty() {
            return Err(LatticeError::RankMismatch("rank-0 sublattice".into()));
        }
        Lattice::new(self.gram.clone())
    }

    /// Whether `v` (ambient coordinates) lies in this sublattice.
    pub fn contains(&self, v: &[Int]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        linalg::hnf(&rows) == linalg::hnf(&self.basis)
    }

    /// Whether every basis vector of `other` lies in this sublattice.
    pub fn contains_sublattice(&self, other: &Sublattice) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn is_saturated(&self) -> bool {
        linalg::saturation(&self.basis, self.ambient.rank()) == linalg::hnf(&self.basis)
    }
}
