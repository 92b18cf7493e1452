//! Exact dense linear algebra over the rationals.
//!
//! Elimination follows Bareiss: every intermediate entry is a minor of the
//! input, so the entries never grow beyond the size of a determinant.

use crate::error::{Error, Result};
use crate::rational::Rational;
use num_traits::{One, Zero};

pub type Matrix = Vec<Vec<Rational>>;

/// Fraction-free forward elimination with row pivoting.
///
/// Returns the eliminated matrix, the row permutation sign and the rank.
fn bareiss(mut m: Matrix, pivot_cols: usize) -> (Matrix, i8, usize) {
    let rows = m.len();
    let mut prev = Rational::one();
    let mut sign = 1i8;
    let mut rank = 0;
    for col in 0..pivot_cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            m.swap(pivot, rank);
            sign = -sign;
        }
        for r in rank + 1..rows {
            for c in col + 1..m[r].len() {
                let value = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = value;
            }
            m[r][col] = Rational::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    (m, sign, rank)
}

pub fn determinant(m: &Matrix) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let (e, sign, rank) = bareiss(m.clone(), n);
    if rank < n {
        return Rational::zero();
    }
    let det = e[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Solves the square system `a x = b`.
pub fn solve(a: &Matrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::SingularSystem(format!("shape mismatch for {n} unknowns")));
    }
    let augmented: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (e, _, rank) = bareiss(augmented, n);
    if rank < n {
        return Err(Error::SingularSystem(format!("rank {rank} < {n}")));
    }
    let mut x = vec![Rational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = e[r][n].clone();
        for c in r + 1..n {
            acc -= &e[r][c] * &x[c];
        }
        x[r] = acc / &e[r][r];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn known_determinants() {
        assert_eq!(determinant(&mat(&[&[2, 0], &[0, 3]])), int(6));
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])), int(0));
        assert_eq!(determinant(&mat(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])), int(4));
    }

    #[test]
    fn solves_with_pivoting() {
        let a = mat(&[&[0, 2], &[3, 1]]);
        let x = solve(&a, &[int(4), int(5)]).unwrap();
        assert_eq!(x, vec![int(1), int(2)]);
        let singular = mat(&[&[1, 1], &[1, 1]]);
        assert!(matches!(solve(&singular, &[int(0), int(0)]), Err(Error::SingularSystem(_))));
    }

    fn laplace_det(m: &Matrix) -> Rational {
        let n = m.len();
        if n == 0 {
            return Rational::one();
        }
        let mut total = Rational::zero();
        for c in 0..n {
            let minor: Matrix = m[1..].iter().map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, v)| v.clone()).collect()).collect();
            let term = &m[0][c] * laplace_det(&minor);
            if c % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    proptest! {
        #[test]
        fn determinant_matches_cofactor_expansion(entries in prop::collection::vec((-5i64..=5, 1i64..=3), 16)) {
            let m: Matrix = entries.chunks(4).map(|r| r.iter().map(|&(p, q)| frac(p, q)).collect()).collect();
            prop_assert_eq!(determinant(&m), laplace_det(&m));
        }

        #[test]
        fn solution_satisfies_system(entries in prop::collection::vec(-6i64..=6, 9), rhs in prop::collection::vec(-6i64..=6, 3)) {
            let a: Matrix = entries.chunks(3).map(|r| r.iter().map(|&v| int(v)).collect()).collect();
            let b: Vec<Rational> = rhs.iter().map(|&v| int(v)).collect();
            if let Ok(x) = solve(&a, &b) {
                for (row, bi) in a.iter().zip(&b) {
                    let lhs: Rational = row.iter().zip(&x).map(|(p, q)| p * q).sum();
                    prop_assert_eq!(&lhs, bi);
                }
            } else {
                prop_assert!(laplace_det(&a).is_zero());
            }
        }
    }
}
