//! Exact linear algebra over a field context: kernel bases by Gauss–Jordan
//! elimination and determinants by fraction-free (Bareiss) elimination.

use std::fmt::Debug;

use crate::field::{Domain, Field};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Clone> Mat<T> {
    pub fn new(rows: usize, cols: usize, fill: T) -> Mat<T> {
        Mat {
            rows,
            cols,
            data: vec![fill; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Mat<T> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Determinant of a square matrix by single-step fraction-free (Bareiss)
/// elimination. Over a polynomial ring every division is exact; over a
/// field this degenerates to ordinary elimination.
pub fn bareiss_det<D: Domain>(d: &D, m: &Mat<D::Elem>) -> D::Elem {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return d.one();
    }
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = d.one();
    for r in 0..n {
        // first row with a nonzero pivot
        let pivot = (r..n).find(|&i| !d.is_zero(a.at(i, r)));
        let pivot = match pivot {
            Some(p) => p,
            None => return d.zero(),
        };
        if pivot != r {
            a.swap_rows(pivot, r);
            sign = !sign;
        }
        for i in r + 1..n {
            for j in r + 1..n {
                let num = d.sub(
                    &d.mul(a.at(r, r), a.at(i, j)),
                    &d.mul(a.at(i, r), a.at(r, j)),
                );
                *a.at_mut(i, j) = d
                    .exact_div(&num, &prev)
                    .expect("Bareiss division is exact");
            }
            *a.at_mut(i, r) = d.zero();
        }
        prev = a.at(r, r).clone();
    }
    let det = a.at(n - 1, n - 1).clone();
    if sign {
        d.neg(&det)
    } else {
        det
    }
}

/// Rank by Gaussian elimination with exact arithmetic.
pub fn rank<F: Field>(f: &F, m: &Mat<F::Elem>) -> usize {
    reduced_echelon(f, &mut m.clone()).len()
}

/// Basis of the right kernel (null space). Each vector has length
/// `m.cols`; the basis is the standard one from the reduced echelon form
/// with free variables set to 1, in increasing free-column order.
pub fn kernel_basis<F: Field>(f: &F, m: &Mat<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut a = m.clone();
    let pivots = reduced_echelon(f, &mut a);
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for j in 0..m.cols {
        if pivot_cols.contains(&j) {
            continue;
        }
        let mut v = vec![f.zero(); m.cols];
        v[j] = f.one();
        for &(r, c) in &pivots {
            v[c] = f.neg(a.at(r, j));
        }
        basis.push(v);
    }
    basis
}

/// In-place reduction to reduced row echelon form; returns the list of
/// (row, pivot column) pairs. Pivoting takes the first nonzero entry;
/// rows pass through `simplify_row` to curb coefficient growth.
fn reduced_echelon<F: Field>(f: &F, a: &mut Mat<F::Elem>) -> Vec<(usize, usize)> {
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..a.cols {
        let pivot = (r..a.rows).find(|&i| !f.is_zero(a.at(i, col)));
        let pivot = match pivot {
            Some(p) => p,
            None => continue,
        };
        a.swap_rows(pivot, r);
        let inv = f.inv(a.at(r, col)).expect("pivot is nonzero");
        for j in col..a.cols {
            *a.at_mut(r, j) = f.mul(a.at(r, j), &inv);
        }
        for i in 0..a.rows {
            if i != r && !f.is_zero(a.at(i, col)) {
                let factor = a.at(i, col).clone();
                for j in col..a.cols {
                    let t = f.sub(a.at(i, j), &f.mul(&factor, a.at(r, j)));
                    *a.at_mut(i, j) = t;
                }
                f.simplify_row(a.row_mut(i));
            }
        }
        pivots.push((r, col));
        r += 1;
        if r == a.rows {
            break;
        }
    }
    // normalize pivot rows once more (simplify may have rescaled them)
    for &(row, col) in &pivots {
        let inv = f.inv(a.at(row, col)).expect("pivot is nonzero");
        for j in 0..a.cols {
            *a.at_mut(row, j) = f.mul(a.at(row, j), &inv);
        }
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn qmat(rows: &[&[i64]]) -> Mat<<Rationals as Domain>::Elem> {
        let f = Rationals;
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn det_examples_rational() {
        let f = Rationals;
        assert_eq!(bareiss_det(&f, &qmat(&[&[2]])), f.from_i64(2));
        assert_eq!(
            bareiss_det(&f, &qmat(&[&[1, 2], &[3, 4]])),
            f.from_i64(-2)
        );
        // singular
        assert_eq!(
            bareiss_det(&f, &qmat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])),
            f.from_i64(0)
        );
        // Vandermonde on 1,2,3,4: det = prod (xj - xi) = 12
        let v: Vec<Vec<_>> = (1..=4i64)
            .map(|x| (0..4u32).map(|k| f.from_i64(x.pow(k))).collect())
            .collect();
        assert_eq!(bareiss_det(&f, &Mat::from_rows(v)), f.from_i64(12));
    }

    #[test]
    fn det_matches_over_prime_field() {
        let q = Rationals;
        let p = PrimeField::new(10_007);
        let rows: Vec<Vec<i64>> = vec![
            vec![3, 1, 4, 1],
            vec![5, 9, 2, 6],
            vec![5, 3, 5, 8],
            vec![9, 7, 9, 3],
        ];
        let dq = bareiss_det(
            &q,
            &Mat::from_rows(
                rows.iter()
                    .map(|r| r.iter().map(|&x| q.from_i64(x)).collect())
                    .collect(),
            ),
        );
        let dp = bareiss_det(
            &p,
            &Mat::from_rows(
                rows.iter()
                    .map(|r| r.iter().map(|&x| p.from_i64(x)).collect())
                    .collect(),
            ),
        );
        let m = num_bigint::BigInt::from(10_007);
        let expected = ((dq.numer() % &m) + &m) % &m;
        assert_eq!(num_bigint::BigInt::from(dp), expected);
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let f = Rationals;
        // rows: x + y + z = 0 twice and x - z = 0
        let m = qmat(&[&[1, 1, 1], &[2, 2, 2], &[1, 0, -1]]);
        let basis = kernel_basis(&f, &m);
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        // v = t * (1, -2, 1)
        assert_eq!(f.mul(&v[0], &f.from_i64(-2)), v[1]);
        assert_eq!(v[0], v[2]);
        assert_eq!(rank(&f, &m), 2);
    }

    #[test]
    fn kernel_over_prime_field_dimension() {
        let f = PrimeField::new(17);
        let m = Mat::from_rows(vec![
            vec![f.from_i64(1), f.from_i64(2), f.from_i64(3)],
            vec![f.from_i64(2), f.from_i64(4), f.from_i64(6)],
        ]);
        let basis = kernel_basis(&f, &m);
        assert_eq!(basis.len(), 2);
        // each basis vector is an honest kernel vector
        for v in &basis {
            for i in 0..m.rows {
                let mut s = f.zero();
                for j in 0..m.cols {
                    s = f.add(&s, &f.mul(m.at(i, j), &v[j]));
                }
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn full_rank_kernel_is_empty() {
        let f = Rationals;
        assert!(kernel_basis(&f, &qmat(&[&[1, 0], &[0, 1]])).is_empty());
    }
}
