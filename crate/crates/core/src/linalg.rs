//! Exact integer and rational matrix routines: Hermite and Smith normal
//! forms, Bareiss determinants and Gauss-Jordan inversion over Q.
//!
//! Matrices are plain `Vec<Vec<_>>` in row-major order; every routine here
//! works on row vectors, matching the lattice convention that a basis is a
//! list of rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type IntMat = Vec<Vec<BigInt>>;
pub type RatMat = Vec<Vec<BigRational>>;

pub fn to_big(m: &[Vec<i64>]) -> IntMat {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn to_i64(m: &[Vec<BigInt>]) -> Result<Vec<Vec<i64>>> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().ok_or(Error::Overflow("matrix entry exceeds i64")))
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> IntMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn axpy_row(dst: &mut [BigInt], coeff: &BigInt, src: &[BigInt]) {
    if coeff.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += coeff * s;
        }
    }
}

/// Row Hermite normal form of the lattice spanned by `rows`.
///
/// The result is upper triangular with positive pivots, every entry above a
/// pivot reduced into `[0, pivot)`, and zero rows dropped. Two generating
/// sets span the same lattice iff their Hermite normal forms coincide.
pub fn hermite_normal_form(rows: &[Vec<BigInt>], ncols: usize) -> IntMat {
    let mut a: IntMat = rows.to_vec();
    let m = a.len();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        for i in r + 1..m {
            if a[i][c].is_zero() {
                continue;
            }
            if a[r][c].is_zero() {
                a.swap(r, i);
                continue;
            }
            let eg = a[r][c].extended_gcd(&a[i][c]);
            let p = &a[r][c] / &eg.gcd;
            let q = &a[i][c] / &eg.gcd;
            let (top, bottom) = a.split_at_mut(i);
            let row_r = &mut top[r];
            let row_i = &mut bottom[0];
            for (x, y) in row_r.iter_mut().zip(row_i.iter_mut()) {
                let nx = &eg.x * &*x + &eg.y * &*y;
                let ny = &p * &*y - &q * &*x;
                *x = nx;
                *y = ny;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot = a[r][c].clone();
        let pivot_row = a[r].clone();
        for row in a.iter_mut().take(r) {
            let q = row[c].div_floor(&pivot);
            if !q.is_zero() {
                axpy_row(row, &-q, &pivot_row);
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Smith normal form `U * A * V = D` with `D` diagonal and each diagonal entry
/// dividing the next. `right_inv` is `V^{-1}`, kept because its rows form a
/// basis adapted to the row module of `A`.
#[derive(Debug, Clone)]
pub struct Smith {
    /// `min(rows, cols)` diagonal entries, nonnegative, padded with zeros.
    pub diagonal: Vec<BigInt>,
    pub left: IntMat,
    pub right: IntMat,
    pub right_inv: IntMat,
}

pub fn smith_normal_form(input: &[Vec<BigInt>], ncols: usize) -> Smith {
    let m = input.len();
    let n = ncols;
    let mut a: IntMat = input.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut vinv = identity(n);

    let col_axpy = |a: &mut IntMat, dst: usize, coeff: &BigInt, src: usize| {
        for row in a.iter_mut() {
            let s = row[src].clone();
            if !s.is_zero() {
                row[dst] += coeff * s;
            }
        }
    };
    let col_swap = |a: &mut IntMat, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    };

    let steps = m.min(n);
    'outer: for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if a[bi][bj].abs() <= a[i][j].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break 'outer;
            };
            if bi != t {
                a.swap(bi, t);
                u.swap(bi, t);
            }
            if bj != t {
                col_swap(&mut a, bj, t);
                col_swap(&mut v, bj, t);
                vinv.swap(bj, t);
            }

            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                let neg = -&q;
                let (top, bottom) = a.split_at_mut(i);
                axpy_row(&mut bottom[0], &neg, &top[t]);
                let (top, bottom) = u.split_at_mut(i);
                axpy_row(&mut bottom[0], &neg, &top[t]);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                let neg = -&q;
                col_axpy(&mut a, j, &neg, t);
                col_axpy(&mut v, j, &neg, t);
                let row_j = vinv[j].clone();
                axpy_row(&mut vinv[t], &q, &row_j);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let pivot = a[t][t].clone();
            let offending = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&pivot)));
            if let Some(i) = offending {
                let one = BigInt::one();
                let row_i = a[i].clone();
                axpy_row(&mut a[t], &one, &row_i);
                let row_i = u[i].clone();
                axpy_row(&mut u[t], &one, &row_i);
                continue;
            }
            break;
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }

    let diagonal = (0..steps).map(|i| a[i][i].clone()).collect();
    Smith { diagonal, left: u, right: v, right_inv: vinv }
}

/// Bareiss fraction-free determinant.
pub fn determinant(input: &[Vec<BigInt>]) -> BigInt {
    let n = input.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMat = input.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = val / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Inverse over Q, or `None` for a singular matrix.
pub fn inverse_rational(input: &[Vec<BigInt>]) -> Option<RatMat> {
    let n = input.len();
    let mut a: RatMat = input
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut inv: RatMat = identity(n)
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(p, c);
        inv.swap(p, c);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &piv;
        }
        for x in inv[c].iter_mut() {
            *x /= &piv;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
                let t = &f * &inv[c][j];
                inv[i][j] -= t;
            }
        }
    }
    Some(inv)
}

/// Solves `x * basis = v` for the row vector `x`, given `basis^{-1}`.
pub fn row_times(v: &[BigRational], m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut out = vec![BigRational::zero(); ncols];
    for (vi, row) in v.iter().zip(m) {
        if vi.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o += vi * x;
        }
    }
    out
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMat {
    let inner = b.len();
    let ncols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = vec![BigInt::zero(); ncols];
            for k in 0..inner {
                if row[k].is_zero() {
                    continue;
                }
                for (o, x) in out.iter_mut().zip(&b[k]) {
                    *o += &row[k] * x;
                }
            }
            out
        })
        .collect()
}

pub fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMat {
        to_big(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn hnf_of_redundant_generators() {
        let h = hermite_normal_form(&m(&[&[2, 0], &[0, 2], &[1, 1]]), 2);
        assert_eq!(h, m(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn hnf_is_basis_independent() {
        let a = hermite_normal_form(&m(&[&[1, 0], &[4, 1]]), 2);
        let b = hermite_normal_form(&m(&[&[3, 1], &[1, 0]]), 2);
        assert_eq!(a, identity(2));
        assert_eq!(b, identity(2));
    }

    #[test]
    fn smith_factorization_holds() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&a, 3);
        let d: Vec<i64> = s.diagonal.iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
        let prod = mat_mul(&mat_mul(&s.left, &a), &s.right);
        for (i, row) in prod.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expect = if i == j { s.diagonal[i].clone() } else { BigInt::zero() };
                assert_eq!(*x, expect);
            }
        }
        assert_eq!(mat_mul(&s.right, &s.right_inv), identity(3));
    }

    #[test]
    fn smith_of_rectangular_rank_deficient() {
        let a = m(&[&[1, 1, 1, 1], &[2, 2, 2, 2]]);
        let s = smith_normal_form(&a, 4);
        assert_eq!(s.diagonal, vec![BigInt::one(), BigInt::zero()]);
        assert_eq!(mat_mul(&s.right, &s.right_inv), identity(4));
    }

    #[test]
    fn bareiss_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(determinant(&a), BigInt::from(18));
        let inv = inverse_rational(&a).unwrap();
        let ar: RatMat = a
            .iter()
            .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        for i in 0..3 {
            let row = row_times(&ar[i], &inv);
            for (j, x) in row.iter().enumerate() {
                let e = if i == j { BigRational::one() } else { BigRational::zero() };
                assert_eq!(*x, e);
            }
        }
        assert!(inverse_rational(&m(&[&[1, 2], &[2, 4]])).is_none());
    }
}
