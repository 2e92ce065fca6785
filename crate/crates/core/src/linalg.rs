//! Dense exact linear algebra over [`Scalar`].
//!
//! Everything here is small (dimensions in the tens to low hundreds), so we
//! use plain Gauss-Jordan elimination with exact arithmetic. Pivots must be
//! invertible scalars; all matrices arising from structure constants and
//! polynomial coefficient extraction have entries concentrated at a single
//! `sqrtpi` power, so a nonzero entry is always a valid pivot.

use crate::scalar::{Rat, Scalar};
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<Scalar>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Scalar::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner > 0 { b[0].len() } else { 0 };
    let mut out = zeros(rows, cols);
    for i in 0..rows {
        for (k, brow) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if !brow[j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][k].mul(&brow[j]));
                }
            }
        }
    }
    out
}

pub fn mat_vec(a: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            let mut acc = Scalar::zero();
            for (x, c) in row.iter().zip(v) {
                if !x.is_zero() && !c.is_zero() {
                    acc = acc.add(&x.mul(c));
                }
            }
            acc
        })
        .collect()
}

/// Reduced row echelon form in place. Returns the pivot column of each pivot
/// row, in order.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero() && m[i][c].inv().is_ok()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot invertible");
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let delta = f.mul(&m[r][j]);
                    m[i][j] = m[i][j].sub(&delta);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Basis of the right nullspace of `m` (columns indexed `0..cols`).
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Scalar>> {
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let mut free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.sort_unstable();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![Scalar::zero(); cols];
        v[f] = Scalar::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = work[row][f].neg();
        }
        basis.push(v);
    }
    basis
}

/// Solves `m x = b` (any solution). Returns `None` if inconsistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut aug = m.clone();
    for (row, rhs) in aug.iter_mut().zip(b) {
        row.push(rhs.clone());
    }
    let pivots = rref(&mut aug);
    // Inconsistent if a pivot lands in the augmented column.
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

/// Inverse of a square matrix, if it exists.
pub fn invert(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug = m.clone();
    for (i, row) in aug.iter_mut().enumerate() {
        for j in 0..n {
            row.push(if i == j { Scalar::one() } else { Scalar::zero() });
        }
    }
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Determinant of a square rational matrix by fraction-free elimination.
pub fn det_rat(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        let pivot = a[c][c].clone();
        for i in (c + 1)..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for j in c..n {
                let delta = &f * &a[c][j];
                a[i][j] = &a[i][j] - &delta;
            }
        }
    }
    det
}

/// Checks that a symmetric rational matrix is positive definite via leading
/// principal minors.
pub fn positive_definite_rat(m: &[Vec<Rat>]) -> bool {
    for k in 1..=m.len() {
        let sub: Vec<Vec<Rat>> = m[..k].iter().map(|row| row[..k].to_vec()).collect();
        if !det_rat(&sub).is_positive() {
            return false;
        }
    }
    true
}

/// Expresses `target` in the span of `columns` if possible.
pub fn in_span(columns: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<Scalar>> {
    let rows = target.len();
    let mut m = zeros(rows, columns.len());
    for (j, col) in columns.iter().enumerate() {
        for i in 0..rows {
            m[i][j] = col[i].clone();
        }
    }
    solve(&m, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    #[test]
    fn rref_and_rank() {
        let mut m = vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(6)], vec![s(0), s(1), s(1)]];
        let p = rref(&mut m);
        assert_eq!(p.len(), 2);
        assert_eq!(rank(&vec![vec![s(1), s(0)], vec![s(0), s(1)]]), 2);
    }

    #[test]
    fn nullspace_of_rank_deficient() {
        let m = vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(6)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let prod = mat_vec(&m, v);
            assert!(prod.iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn solve_and_invert() {
        let m = vec![vec![s(2), s(1)], vec![s(1), s(1)]];
        let x = solve(&m, &[s(3), s(2)]).unwrap();
        assert_eq!(mat_vec(&m, &x), vec![s(3), s(2)]);
        let inv = invert(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        assert!(solve(&vec![vec![s(1), s(1)], vec![s(1), s(1)]], &[s(0), s(1)]).is_none());
    }

    #[test]
    fn rational_determinants() {
        let m = vec![
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(1), rat_int(2)],
        ];
        assert_eq!(det_rat(&m), rat_int(3));
        assert!(positive_definite_rat(&m));
        let neg = vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(1)],
        ];
        assert!(!positive_definite_rat(&neg));
    }
}
