//! Exact integer and rational matrix routines: determinants, Hermite and Smith
//! normal forms, integer kernels, saturation, rational inversion and inertia.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{identity, Int, IntMatrix, IntVector, Rat, RatMatrix, RatVector};

/// Determinant by fraction-free Bareiss elimination.
pub fn det(m: &[IntVector]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn sub_scaled_row(rows: &mut [IntVector], target: usize, source: usize, q: &Int) {
    if q.is_zero() {
        return;
    }
    let src = rows[source].clone();
    for (x, s) in rows[target].iter_mut().zip(&src) {
        *x -= q * s;
    }
}

/// Row-reduce `rows` in place on the first `width` columns to Hermite form.
/// Returns the number of nonzero (pivot) rows; those come first.
fn echelon(rows: &mut [IntVector], width: usize) -> usize {
    let m = rows.len();
    let mut r = 0;
    for c in 0..width {
        if r == m {
            break;
        }
        loop {
            let pivot = (r..m)
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()));
            let Some(p) = pivot else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                sub_scaled_row(rows, i, r, &q);
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let q = rows[i][c].div_floor(&rows[r][c]);
                sub_scaled_row(rows, i, r, &q);
            }
            r += 1;
        }
    }
    r
}

/// Hermite normal form of the row lattice: zero rows dropped, positive pivots,
/// entries above each pivot reduced into `[0, pivot)`, rows ordered by pivot.
pub fn hnf(rows: &[IntVector]) -> IntMatrix {
    if rows.is_empty() {
        return Vec::new();
    }
    let width = rows[0].len();
    let mut a = rows.to_vec();
    let r = echelon(&mut a, width);
    a.truncate(r);
    a
}

pub fn rank(rows: &[IntVector]) -> usize {
    hnf(rows).len()
}

/// Basis (in HNF) of `{x in Z^m : x * mat = 0}` where `mat` is `m x n`.
pub fn left_kernel(mat: &[IntVector], m: usize) -> IntMatrix {
    let n = mat.first().map_or(0, Vec::len);
    let mut aug: IntMatrix = (0..m)
        .map(|i| {
            let mut row = mat.get(i).cloned().unwrap_or_else(|| vec![Int::zero(); n]);
            row.extend((0..m).map(|j| if i == j { Int::one() } else { Int::zero() }));
            row
        })
        .collect();
    let r = echelon(&mut aug, n);
    let kernel: IntMatrix = aug[r..].iter().map(|row| row[n..].to_vec()).collect();
    hnf(&kernel)
}

/// Basis (in HNF) of the integer vectors in the rational span of `rows`.
pub fn saturation(rows: &[IntVector], dim: usize) -> IntMatrix {
    if rows.is_empty() {
        return Vec::new();
    }
    // {y : rows * y = 0}, then everything orthogonal to that.
    let complement = left_kernel(&crate::arith::transpose(rows), dim);
    if complement.is_empty() {
        return identity(dim);
    }
    left_kernel(&crate::arith::transpose(&complement), dim)
}

/// Smith normal form `u * a * v = diag(d)` with unimodular `u`, `v` and
/// `d[i] | d[i+1]`, all `d[i] >= 0`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub diagonal: Vec<Int>,
}

pub fn smith(a: &[IntVector]) -> Smith {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut a = a.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);

    let swap_cols = |mat: &mut IntMatrix, i: usize, j: usize| {
        for row in mat.iter_mut() {
            row.swap(i, j);
        }
    };
    let col_sub = |mat: &mut IntMatrix, target: usize, source: usize, q: &Int| {
        for row in mat.iter_mut() {
            let s = row[source].clone();
            row[target] -= q * s;
        }
    };

    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, v);
            };
            a.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                sub_scaled_row(&mut a, i, t, &q);
                sub_scaled_row(&mut u, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_sub(&mut a, j, t, &q);
                col_sub(&mut v, j, t, &q);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match offender {
                Some(i) => {
                    let minus_one = -Int::one();
                    sub_scaled_row(&mut a, t, i, &minus_one);
                    sub_scaled_row(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut().chain(u[t].iter_mut()) {
                *x = -&*x;
            }
        }
    }
    finish(a, u, v)
}

fn finish(a: IntMatrix, u: IntMatrix, v: IntMatrix) -> Smith {
    let k = a.len().min(a.first().map_or(0, Vec::len));
    let diagonal = (0..k).map(|i| a[i][i].clone()).collect();
    Smith { u, v, diagonal }
}

/// Inverse over the rationals; `None` if singular.
pub fn rat_inverse(m: &[RatVector]) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solve `m * x = b` over the rationals for square nonsingular `m`.
pub fn rat_solve(m: &[RatVector], b: &[Rat]) -> Option<RatVector> {
    let inv = rat_inverse(m)?;
    Some(inv.iter().map(|row| crate::arith::rat_dot(row, b)).collect())
}

/// Counts of positive, negative and zero directions of a symmetric rational
/// form, by congruent diagonalization.
///
/// Pivot choice: the first nonzero diagonal entry; failing that, the first
/// nonzero off-diagonal entry `(i, j)` in row-major order, after replacing
/// basis vector `i` by `e_i + e_j`.
pub fn inertia(m: &[RatVector]) -> (usize, usize, usize) {
    let mut a: RatMatrix = m.to_vec();
    let (mut pos, mut neg) = (0, 0);
    let total = a.len();
    while !a.is_empty() {
        let k = a.len();
        let mut pivot = (0..k).find(|&i| !a[i][i].is_zero());
        if pivot.is_none() {
            let off = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).find(|&(i, j)| i != j && !a[i][j].is_zero());
            let Some((i, j)) = off else { break };
            // e_i <- e_i + e_j
            for r in 0..k {
                let add = a[j][r].clone();
                a[i][r] += add;
            }
            for r in 0..k {
                let add = a[r][j].clone();
                a[r][i] += add;
            }
            pivot = Some(i);
        }
        let p = pivot.expect("pivot chosen above");
        a.swap(0, p);
        for row in a.iter_mut() {
            row.swap(0, p);
        }
        let d = a[0][0].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        let first: RatVector = a[0].clone();
        let rest: RatMatrix = (1..k)
            .map(|i| (1..k).map(|j| &a[i][j] - &first[i] * &first[j] / &d).collect())
            .collect();
        a = rest;
    }
    (pos, neg, total - pos - neg)
}
