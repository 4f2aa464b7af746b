//! Dense exact linear algebra over the rationals.

use crate::scalar::{primitive, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Reduced row echelon form; returns the nonzero rows and the pivot columns.
pub fn rref(rows: &[Vec<Scalar>], ncols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Scalar::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Scalar>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

pub fn rank_int(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    let q: Vec<Vec<Scalar>> = rows.iter().map(|r| crate::scalar::to_scalars(r)).collect();
    rank(&q, ncols)
}

/// Basis of {x : rows·x = 0}, as primitive integer vectors.
pub fn nullspace(rows: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<BigInt>> {
    let (m, pivots) = rref(rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Scalar::zero(); ncols];
        v[free] = Scalar::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -m[i][free].clone();
        }
        basis.push(primitive(&v));
    }
    basis
}

pub fn nullspace_int(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let q: Vec<Vec<Scalar>> = rows.iter().map(|r| crate::scalar::to_scalars(r)).collect();
    nullspace(&q, ncols)
}

/// Canonical basis of the row space: reduced echelon rows scaled to primitive integers.
pub fn canonical_row_basis(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let q: Vec<Vec<Scalar>> = rows.iter().map(|r| crate::scalar::to_scalars(r)).collect();
    rref(&q, ncols).0.iter().map(|r| primitive(r)).collect()
}

/// Orthogonal projection of `v` onto the row span of `basis` (rows need not be independent).
pub fn project_onto_span(v: &[Scalar], basis: &[Vec<Scalar>], ncols: usize) -> Vec<Scalar> {
    let (b, _) = rref(basis, ncols);
    if b.is_empty() {
        return vec![Scalar::zero(); ncols];
    }
    let k = b.len();
    // Solve (B B^T) c = B v.
    let aug: Vec<Vec<Scalar>> = (0..k)
        .map(|i| {
            let mut row: Vec<Scalar> = (0..k).map(|j| crate::scalar::dot(&b[i], &b[j])).collect();
            row.push(crate::scalar::dot(&b[i], v));
            row
        })
        .collect();
    let (sol, _) = rref(&aug, k + 1);
    let mut out = vec![Scalar::zero(); ncols];
    for (i, row) in sol.iter().enumerate() {
        let c = &row[k];
        for j in 0..ncols {
            out[j] += c * &b[i][j];
        }
    }
    out
}

/// Solve `a x = b` for one solution, if any (a is m×n given by rows).
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar], ncols: usize) -> Option<Vec<Scalar>> {
    let aug: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(r, y)| {
            let mut r = r.clone();
            r.push(y.clone());
            r
        })
        .collect();
    let (m, pivots) = rref(&aug, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); ncols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = m[i][ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn q(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn nullspace_of_plane() {
        let ns = nullspace(&[q(&[1, 1, 1])], 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert_eq!(v.iter().sum::<BigInt>(), BigInt::zero());
        }
    }

    #[test]
    fn projection_onto_line() {
        let p = project_onto_span(&q(&[1, 0]), &[q(&[1, 1])], 2);
        assert_eq!(p, vec![crate::scalar::frac(1, 2), crate::scalar::frac(1, 2)]);
    }

    #[test]
    fn rank_and_solve() {
        assert_eq!(rank(&[q(&[1, 2]), q(&[2, 4])], 2), 1);
        let x = solve(&[q(&[1, 1]), q(&[1, -1])], &q(&[2, 0]), 2).unwrap();
        assert_eq!(x, q(&[1, 1]));
        assert!(solve(&[q(&[1, 1]), q(&[1, 1])], &q(&[1, 2]), 2).is_none());
    }
}
