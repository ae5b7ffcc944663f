//! LLL reduction. The certified path is the integral LLL algorithm: all
//! Gram–Schmidt data live in the integers `d_i` (leading Gram minors) and
//! `lambda_ij = d_j mu_ij`, so no rounding ever enters the result.
//!
//! A floating-point deep-insertion pass is available as a preconditioner;
//! it only performs unimodular integer row operations and its output is
//! always re-reduced by the exact algorithm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::ExactLattice;
use crate::linalg::IntMat;

/// Reduction parameter used before enumeration.
pub fn default_delta() -> BigRational {
    BigRational::new(BigInt::from(99), BigInt::from(100))
}

#[derive(Clone, Debug)]
pub struct ReducedBasis {
    scale: BigInt,
    basis: IntMat,
    delta: BigRational,
    /// `|b*_i|^2` of the integer rows (divide by the scale for lattice norms).
    gs_sq: Vec<BigRational>,
    /// `mu[i][j]` for `j < i`.
    mu: Vec<Vec<BigRational>>,
}

impl ReducedBasis {
    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn delta(&self) -> &BigRational {
        &self.delta
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Squared Gram–Schmidt lengths in lattice units.
    pub fn gs_norms(&self) -> Vec<BigRational> {
        let s = BigRational::from_integer(self.scale.clone());
        self.gs_sq.iter().map(|x| x / &s).collect()
    }

    pub fn mu(&self, i: usize, j: usize) -> &BigRational {
        &self.mu[i][j]
    }

    /// Norm of the first basis vector.
    pub fn first_norm(&self) -> BigRational {
        self.gs_norms()[0].clone()
    }

    /// Size reduction and the Lovász condition, checked from the exact data.
    pub fn is_reduced(&self) -> bool {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let n = self.dimension();
        let size_reduced = (0..n).all(|i| (0..i).all(|j| self.mu[i][j].abs() <= half));
        let lovasz = (1..n).all(|k| {
            let m = &self.mu[k][k - 1];
            (&self.delta - m * m) * &self.gs_sq[k - 1] <= self.gs_sq[k]
        });
        size_reduced && lovasz
    }

    /// The lattice spanned by the reduced basis, in canonical form.
    pub fn lattice(&self) -> Result<ExactLattice> {
        ExactLattice::new(self.scale.clone(), self.basis.clone())
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_delta(delta: &BigRational) -> Result<()> {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if *delta <= quarter || *delta > BigRational::one() {
        return Err(Error::Precondition(format!("delta {delta} outside (1/4, 1]")));
    }
    Ok(())
}

/// Exact LLL reduction of the lattice basis.
pub fn lll(l: &ExactLattice, delta: &BigRational) -> Result<ReducedBasis> {
    lll_rows(l.scale().clone(), l.basis().clone(), delta)
}

/// Exact LLL reduction of linearly independent integer rows.
pub fn lll_rows(scale: BigInt, rows: IntMat, delta: &BigRational) -> Result<ReducedBasis> {
    check_delta(delta)?;
    let mut st = Integral::new(rows)?;
    st.run(delta);
    let n = st.b.len();
    let gs_sq = (0..n).map(|i| BigRational::new(st.d[i + 1].clone(), st.d[i].clone())).collect();
    let mu = (0..n)
        .map(|i| (0..i).map(|j| BigRational::new(st.lam[i][j].clone(), st.d[j + 1].clone())).collect())
        .collect();
    Ok(ReducedBasis { scale, basis: st.b, delta: delta.clone(), gs_sq, mu })
}

/// Floating-point deep-insertion reduction followed by exact LLL.
///
/// `depth` bounds the insertion positions to the first `depth` slots and
/// the last `depth` slots before the current index; `None` allows all.
pub fn deep_lll(l: &ExactLattice, delta: &BigRational, depth: Option<usize>) -> Result<ReducedBasis> {
    check_delta(delta)?;
    let mut rows: Vec<Vec<i64>> = l
        .basis()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().ok_or(Error::Overflow("basis entry for deep insertion"))).collect())
        .collect::<Result<_>>()?;
    let fdelta = delta.numer().to_f64().unwrap_or(0.99) / delta.denom().to_f64().unwrap_or(1.0);
    float_deep_lll(&mut rows, fdelta.min(0.999), depth)?;
    let big = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    lll_rows(l.scale().clone(), big, delta)
}

/// State of the integral LLL algorithm (1-based `d`, 0-based vectors).
struct Integral {
    b: IntMat,
    /// `d[0] = 1`, `d[i + 1]` is the Gram determinant of the first `i + 1` rows.
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
}

impl Integral {
    fn new(b: IntMat) -> Result<Self> {
        let n = b.len();
        let mut st = Integral { b, d: vec![BigInt::zero(); n + 1], lam: vec![vec![BigInt::zero(); n]; n] };
        st.d[0] = BigInt::one();
        for k in 0..n {
            st.gram_schmidt_row(k);
            if st.d[k + 1].is_zero() {
                return Err(Error::Singular);
            }
        }
        Ok(st)
    }

    fn gram_schmidt_row(&mut self, k: usize) {
        for j in 0..=k {
            let mut u = dot(&self.b[k], &self.b[j]);
            for i in 0..j {
                u = (&self.d[i + 1] * &u - &self.lam[k][i] * &self.lam[j][i]) / &self.d[i];
            }
            if j < k {
                self.lam[k][j] = u;
            } else {
                self.d[k + 1] = u;
            }
        }
    }

    /// Size-reduce row `k` against row `l`.
    fn red(&mut self, k: usize, l: usize) {
        let dl = &self.d[l + 1];
        if BigInt::from(2) * self.lam[k][l].abs() <= *dl {
            return;
        }
        // nearest integer to lam / d
        let q = (BigInt::from(2) * &self.lam[k][l] + dl).div_floor(&(BigInt::from(2) * dl));
        let (lo, hi) = self.b.split_at_mut(k);
        for (x, y) in hi[0].iter_mut().zip(&lo[l]) {
            *x -= &q * y;
        }
        self.lam[k][l] -= &q * dl;
        for i in 0..l {
            let t = &q * &self.lam[l][i];
            self.lam[k][i] -= t;
        }
    }

    /// Exchange rows `k - 1` and `k`.
    fn swap(&mut self, k: usize) {
        let n = self.b.len();
        self.b.swap(k, k - 1);
        for j in 0..k - 1 {
            let t = std::mem::take(&mut self.lam[k][j]);
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], t);
        }
        let lam = self.lam[k][k - 1].clone();
        let bb = (&self.d[k - 1] * &self.d[k + 1] + &lam * &lam) / &self.d[k];
        for i in k + 1..n {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k + 1] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k];
            self.lam[i][k - 1] = (&bb * &t + &lam * &self.lam[i][k]) / &self.d[k + 1];
        }
        self.d[k] = bb;
    }

    fn run(&mut self, delta: &BigRational) {
        let n = self.b.len();
        let p = delta.numer();
        let q = delta.denom();
        let mut k = 1;
        while k < n {
            self.red(k, k - 1);
            let lam = &self.lam[k][k - 1];
            let lhs = q * &self.d[k + 1] * &self.d[k - 1];
            let rhs = p * &self.d[k] * &self.d[k] - q * lam * lam;
            if lhs < rhs {
                self.swap(k);
                k = k.saturating_sub(1).max(1);
            } else {
                for l in (0..k - 1).rev() {
                    self.red(k, l);
                }
                k += 1;
            }
        }
    }
}

fn dot_i64(a: &[i64], b: &[i64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum::<i128>() as f64
}

/// Schnorr–Euchner deep-insertion LLL in floating point on integer rows.
fn float_deep_lll(b: &mut [Vec<i64>], delta: f64, depth: Option<usize>) -> Result<()> {
    let n = b.len();
    if n < 2 {
        return Ok(());
    }
    let mut mu = vec![vec![0.0f64; n]; n];
    let mut bs = vec![0.0f64; n];
    bs[0] = dot_i64(&b[0], &b[0]);
    let gs_row = |b: &[Vec<i64>], mu: &mut Vec<Vec<f64>>, bs: &mut Vec<f64>, k: usize| {
        for j in 0..k {
            let mut r = dot_i64(&b[k], &b[j]);
            for l in 0..j {
                r -= mu[j][l] * mu[k][l] * bs[l];
            }
            mu[k][j] = r / bs[j];
        }
        let mut s = dot_i64(&b[k], &b[k]);
        for l in 0..k {
            s -= mu[k][l] * mu[k][l] * bs[l];
        }
        bs[k] = s;
    };
    let mut k = 1;
    let mut guard: u64 = 0;
    while k < n {
        guard += 1;
        if guard > 50_000_000 {
            return Err(Error::BudgetExceeded { what: "deep insertion passes", limit: 50_000_000 });
        }
        if k == 1 {
            bs[0] = dot_i64(&b[0], &b[0]);
        }
        // size reduction, repeated until stable
        loop {
            gs_row(b, &mut mu, &mut bs, k);
            let mut changed = false;
            for j in (0..k).rev() {
                let m = mu[k][j];
                if m.abs() > 0.51 {
                    let q = m.round();
                    let qi = q as i64;
                    let (lo, hi) = b.split_at_mut(k);
                    for (x, y) in hi[0].iter_mut().zip(&lo[j]) {
                        *x = x
                            .checked_sub(qi.checked_mul(*y).ok_or(Error::Overflow("deep insertion row update"))?)
                            .ok_or(Error::Overflow("deep insertion row update"))?;
                    }
                    for l in 0..j {
                        mu[k][l] -= q * mu[j][l];
                    }
                    mu[k][j] -= q;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut c = dot_i64(&b[k], &b[k]);
        let mut inserted = false;
        for i in 0..k {
            let allowed = depth.is_none_or(|d| i < d || k - i <= d);
            if allowed && c < delta * bs[i] {
                let row = b[k].clone();
                for t in (i..k).rev() {
                    b[t + 1] = std::mem::take(&mut b[t]);
                }
                b[i] = row;
                k = i.max(1);
                inserted = true;
                break;
            }
            c -= mu[k][i] * mu[k][i] * bs[i];
        }
        if !inserted {
            k += 1;
        }
    }
    Ok(())
}
