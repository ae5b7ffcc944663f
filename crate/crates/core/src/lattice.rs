//! Exact lattices `(1/sqrt(s)) * rowspan(B)` with integer `B`, together with
//! Construction A, duals, even sublattices, shadows and neighbors.
//!
//! Every lattice is kept in a canonical form: `B` in Hermite normal form and
//! `s` as small as possible (a common factor `t` of all entries of `B` is
//! divided out whenever `t^2` divides `s`). Two lattices are equal exactly
//! when their canonical forms are.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMat};
use crate::zkcode::ZkCode;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactLattice {
    scale: BigInt,
    basis: IntMat,
}

/// Ambient vector `numerator / (denominator * sqrt(scale))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    numerator: Vec<BigInt>,
    denominator: BigInt,
    scale: BigInt,
}

fn exact_sqrt(x: &BigInt) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

/// `sqrt(num/den)` when it is rational.
fn rational_sqrt(num: &BigInt, den: &BigInt) -> Option<(BigInt, BigInt)> {
    let g = num.gcd(den);
    Some((exact_sqrt(&(num / &g))?, exact_sqrt(&(den / &g))?))
}

impl LatticeVector {
    pub fn new(numerator: Vec<BigInt>, denominator: BigInt, scale: BigInt) -> Result<Self> {
        if !denominator.is_positive() || !scale.is_positive() {
            return Err(Error::Precondition("denominator and scale must be positive".into()));
        }
        Ok(LatticeVector { numerator, denominator, scale }.reduced())
    }

    fn reduced(mut self) -> Self {
        let g = self.numerator.iter().fold(self.denominator.clone(), |g, x| g.gcd(x));
        if !g.is_one() {
            for x in self.numerator.iter_mut() {
                *x /= &g;
            }
            self.denominator /= &g;
        }
        self
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn dimension(&self) -> usize {
        self.numerator.len()
    }

    pub fn norm(&self) -> BigRational {
        let nn: BigInt = self.numerator.iter().map(|x| x * x).sum();
        BigRational::new(nn, &self.denominator * &self.denominator * &self.scale)
    }

    pub fn inner(&self, other: &LatticeVector) -> Result<BigRational> {
        let other = other.at_scale(&self.scale)?;
        let dot: BigInt = self.numerator.iter().zip(&other.numerator).map(|(a, b)| a * b).sum();
        Ok(BigRational::new(dot, &self.denominator * &other.denominator * &self.scale))
    }

    /// The same ambient vector written over `sqrt(scale)`.
    pub fn at_scale(&self, scale: &BigInt) -> Result<LatticeVector> {
        // num / (d sqrt(s_v)) = num * sqrt(s / s_v) / (d sqrt(s))
        let (a, b) = rational_sqrt(scale, &self.scale)
            .ok_or_else(|| Error::DimensionMismatch("incommensurable scales".into()))?;
        Ok(LatticeVector {
            numerator: self.numerator.iter().map(|x| x * &a).collect(),
            denominator: &self.denominator * b,
            scale: scale.clone(),
        }
        .reduced())
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector { numerator: self.numerator.iter().map(|x| -x).collect(), ..self.clone() }
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.numerator.iter().map(|x| x.to_string()).collect();
        write!(f, "({}) / ({} sqrt {})", coords.join(" "), self.denominator, self.scale)
    }
}

/// Scale `S` and multipliers `(t1, t2)` with `S = s1 t1^2 = s2 t2^2`.
fn common_scale(s1: &BigInt, s2: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    let g = s1.gcd(s2);
    let (u, v) = (s1 / &g, s2 / &g);
    match (exact_sqrt(&u), exact_sqrt(&v)) {
        (Some(ru), Some(rv)) => Ok((&g * &u * &v, rv, ru)),
        _ => Err(Error::DimensionMismatch(format!("scales {s1} and {s2} are incommensurable"))),
    }
}

impl ExactLattice {
    /// Lattice spanned by the rows of `basis`; rows may be redundant but
    /// must span a full-rank lattice.
    pub fn from_generators(scale: BigInt, rows: &[Vec<BigInt>], n: usize) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::Precondition("scale must be positive".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("generator length differs from dimension".into()));
        }
        let hnf = linalg::hermite_normal_form(rows, n);
        if hnf.len() != n {
            return Err(Error::Singular);
        }
        Ok(ExactLattice { scale, basis: hnf }.minimized())
    }

    pub fn new(scale: BigInt, basis: IntMat) -> Result<Self> {
        let n = basis.len();
        Self::from_generators(scale, &basis, n)
    }

    pub fn from_i64(scale: i64, basis: &[Vec<i64>]) -> Result<Self> {
        Self::new(BigInt::from(scale), linalg::to_big(basis))
    }

    pub fn integer_lattice(n: usize) -> Self {
        ExactLattice { scale: BigInt::one(), basis: linalg::identity(n) }
    }

    fn minimized(mut self) -> Self {
        let g = self.basis.iter().flatten().fold(BigInt::zero(), |g, x| g.gcd(x));
        let mut rest = g.gcd(&self.scale);
        let mut primes = Vec::new();
        let mut p = BigInt::from(2);
        while &p * &p <= rest {
            if (&rest % &p).is_zero() {
                primes.push(p.clone());
                while (&rest % &p).is_zero() {
                    rest /= &p;
                }
            }
            p += 1;
        }
        if rest > BigInt::one() {
            primes.push(rest);
        }
        let mut t = BigInt::one();
        for p in primes {
            loop {
                let cand = &t * &p;
                if (&g % &cand).is_zero() && (&self.scale % (&cand * &cand)).is_zero() {
                    t = cand;
                } else {
                    break;
                }
            }
        }
        if !t.is_one() {
            for x in self.basis.iter_mut().flatten() {
                *x /= &t;
            }
            self.scale /= &t * &t;
        }
        self
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    /// The same lattice with basis entries multiplied by `t` and scale by `t^2`.
    pub fn rescaled_basis(&self, t: &BigInt) -> IntMat {
        self.basis.iter().map(|r| r.iter().map(|x| x * t).collect()).collect()
    }

    /// `B B^T`, which equals `s` times the Gram matrix.
    pub fn integer_gram(&self) -> IntMat {
        let n = self.dimension();
        let mut g = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let d: BigInt = self.basis[i].iter().zip(&self.basis[j]).map(|(a, b)| a * b).sum();
                g[j][i] = d.clone();
                g[i][j] = d;
            }
        }
        g
    }

    pub fn gram(&self) -> Vec<Vec<BigRational>> {
        self.integer_gram()
            .into_iter()
            .map(|r| r.into_iter().map(|x| BigRational::new(x, self.scale.clone())).collect())
            .collect()
    }

    pub fn gram_determinant(&self) -> BigRational {
        let d = linalg::determinant(&self.integer_gram());
        BigRational::new(d, num_traits::pow(self.scale.clone(), self.dimension()))
    }

    pub fn is_integral(&self) -> bool {
        self.integer_gram().iter().flatten().all(|x| (x % &self.scale).is_zero())
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_integral() && self.gram_determinant().abs().is_one()
    }

    /// Integral with every norm even.
    pub fn is_even(&self) -> bool {
        let two_s = BigInt::from(2) * &self.scale;
        let g = self.integer_gram();
        self.is_integral() && (0..self.dimension()).all(|i| (&g[i][i] % &two_s).is_zero())
    }

    /// `sum_i coeffs_i b_i`.
    pub fn vector(&self, coeffs: &[BigInt]) -> LatticeVector {
        let n = self.dimension();
        let mut v = vec![BigInt::zero(); n];
        for (c, row) in coeffs.iter().zip(&self.basis) {
            for (o, x) in v.iter_mut().zip(row) {
                *o += c * x;
            }
        }
        LatticeVector { numerator: v, denominator: BigInt::one(), scale: self.scale.clone() }
    }

    pub fn basis_vector(&self, i: usize) -> LatticeVector {
        LatticeVector { numerator: self.basis[i].clone(), denominator: BigInt::one(), scale: self.scale.clone() }
    }

    /// Coordinates of `v` with respect to the basis, if `v` lies in its span.
    pub fn coordinates(&self, v: &LatticeVector) -> Result<Vec<BigRational>> {
        if v.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch("vector length differs from dimension".into()));
        }
        let v = v.at_scale(&self.scale)?;
        let inv = linalg::inverse_rational(&self.basis).ok_or(Error::Singular)?;
        let rv: Vec<BigRational> =
            v.numerator.iter().map(|x| BigRational::new(x.clone(), v.denominator.clone())).collect();
        Ok(linalg::row_times(&rv, &inv))
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.coordinates(v).is_ok_and(|c| c.iter().all(|x| x.is_integer()))
    }

    /// Whether `other` is a sublattice of `self`.
    pub fn contains_lattice(&self, other: &ExactLattice) -> bool {
        (0..other.dimension()).all(|i| self.contains(&other.basis_vector(i)))
    }

    pub fn dual(&self) -> Result<ExactLattice> {
        // L* = sqrt(s) B^{-T} = sqrt(s) M / D = (1/sqrt(s D^2)) (s M)
        let inv = linalg::inverse_rational(&self.basis).ok_or(Error::Singular)?;
        let n = self.dimension();
        let d = linalg::lcm_of_denominators(inv.iter().flatten());
        let rows: IntMat = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (&inv[j][i] * BigRational::from_integer(&d * &self.scale)).to_integer())
                    .collect()
            })
            .collect();
        ExactLattice::new(&self.scale * &d * &d, rows)
    }

    /// `L_0 = { x in L : (x, x) even }`.
    pub fn even_sublattice(&self) -> Result<ExactLattice> {
        if !self.is_integral() {
            return Err(Error::Precondition("even sublattice needs an integral lattice".into()));
        }
        let g = self.integer_gram();
        let two_s = BigInt::from(2) * &self.scale;
        let odd: Vec<bool> = (0..self.dimension()).map(|i| !(&g[i][i] % &two_s).is_zero()).collect();
        let Some(first) = odd.iter().position(|&o| o) else {
            return Err(Error::EvenLattice);
        };
        let b1 = &self.basis[first];
        let mut rows: IntMat = Vec::with_capacity(self.dimension() + 1);
        for (i, row) in self.basis.iter().enumerate() {
            if i == first {
                rows.push(row.iter().map(|x| x * 2).collect());
            } else if odd[i] {
                rows.push(row.iter().zip(b1).map(|(a, b)| a - b).collect());
            } else {
                rows.push(row.clone());
            }
        }
        ExactLattice::from_generators(self.scale.clone(), &rows, self.dimension())
    }

    /// Even sublattice, its dual and the four cosets of `L_0^* / L_0`.
    pub fn shadow(&self) -> Result<ShadowDescription> {
        if !self.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
        let even = self.even_sublattice()?;
        let even_dual = even.dual()?;
        let (s, t0, td) = common_scale(&even.scale, &even_dual.scale)?;
        let b0 = even.rescaled_basis(&t0);
        let bd = even_dual.rescaled_basis(&td);
        // C = B0 Bd^{-1}: L0 basis in L0* coordinates.
        let inv = linalg::inverse_rational(&bd).ok_or(Error::Singular)?;
        let c: IntMat = b0
            .iter()
            .map(|r| {
                let rv: Vec<BigRational> = r.iter().map(|x| BigRational::from_integer(x.clone())).collect();
                linalg::row_times(&rv, &inv).into_iter().map(|x| x.to_integer()).collect()
            })
            .collect();
        let n = self.dimension();
        let snf = linalg::smith_normal_form(&c, n);
        // Adapted L0* basis V^{-1} Bd; L0 is spanned by d_i times its rows.
        let adapted = linalg::mat_mul(&snf.right_inv, &bd);
        let orders: Vec<(usize, BigInt)> = snf
            .diagonal
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_one())
            .map(|(i, d)| (i, d.clone()))
            .collect();
        let index: BigInt = orders.iter().map(|(_, d)| d.clone()).product();
        if index != BigInt::from(4) {
            return Err(Error::Precondition(format!("[L0*:L0] = {index}, expected 4")));
        }
        let mut cosets = Vec::new();
        let mut digits = vec![BigInt::zero(); orders.len()];
        loop {
            let mut v = vec![BigInt::zero(); n];
            for ((i, _), c) in orders.iter().zip(&digits) {
                for (o, x) in v.iter_mut().zip(&adapted[*i]) {
                    *o += c * x;
                }
            }
            let rep = LatticeVector { numerator: v, denominator: BigInt::one(), scale: s.clone() }.reduced();
            let rep = rep.at_scale(&self.scale)?;
            let kind = if self.contains(&rep) { CosetKind::Lattice } else { CosetKind::Shadow };
            cosets.push(Coset { representative: rep, kind });
            // odometer over the nontrivial invariant factors
            let mut k = 0;
            loop {
                if k == digits.len() {
                    break;
                }
                digits[k] += 1;
                if digits[k] < orders[k].1 {
                    break;
                }
                digits[k] = BigInt::zero();
                k += 1;
            }
            if k == digits.len() {
                break;
            }
        }
        let shadow_count = cosets.iter().filter(|c| c.kind == CosetKind::Shadow).count();
        if shadow_count != 2 {
            return Err(Error::Precondition(format!("found {shadow_count} shadow cosets")));
        }
        Ok(ShadowDescription { even, even_dual, cosets })
    }

    /// Whether `2(r, b) = (b, b) mod 2` for every basis vector `b`.
    pub fn is_half_characteristic(&self, r: &LatticeVector) -> Result<bool> {
        let g = self.integer_gram();
        for i in 0..self.dimension() {
            let two_rb = self.basis_vector(i).inner(r)? * BigRational::from_integer(BigInt::from(2));
            if !two_rb.is_integer() {
                return Ok(false);
            }
            let bb = BigRational::new(g[i][i].clone(), self.scale.clone());
            if !(two_rb - bb).to_integer().is_even() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The two other unimodular lattices containing `L_0`.
    pub fn unimodular_neighbors(&self) -> Result<[ExactLattice; 2]> {
        let n = self.dimension();
        if n % 4 != 0 {
            return Err(Error::Precondition(format!("neighbors need n = 0 mod 4, got n = {n}")));
        }
        let sd = self.shadow()?;
        let mut out = Vec::with_capacity(2);
        for rep in sd.shadow_representatives() {
            if !rep.norm().is_integer() {
                return Err(Error::Precondition("shadow norm is not integral".into()));
            }
            let (s, t0, tr) = common_scale(&sd.even.scale, &(&rep.scale * &rep.denominator * &rep.denominator))?;
            let mut rows = sd.even.rescaled_basis(&t0);
            rows.push(rep.numerator.iter().map(|x| x * &tr).collect());
            out.push(ExactLattice::from_generators(s, &rows, n)?);
        }
        let [a, b]: [ExactLattice; 2] = out.try_into().expect("exactly two shadow cosets");
        Ok([a, b])
    }
}

/// Whether a coset of `L_0` in `L_0^*` lies in the lattice or in its shadow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetKind {
    Lattice,
    Shadow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub representative: LatticeVector,
    pub kind: CosetKind,
}

#[derive(Clone, Debug)]
pub struct ShadowDescription {
    pub even: ExactLattice,
    pub even_dual: ExactLattice,
    pub cosets: Vec<Coset>,
}

impl ShadowDescription {
    pub fn shadow_representatives(&self) -> impl Iterator<Item = &LatticeVector> {
        self.cosets.iter().filter(|c| c.kind == CosetKind::Shadow).map(|c| &c.representative)
    }

    /// A vector `r` with `S(L) = r + L`.
    pub fn shift(&self) -> &LatticeVector {
        self.shadow_representatives().next().expect("two shadow cosets")
    }
}

/// `A_k(C) = (1/sqrt(k)) { x in Z^n : x mod k in C }`.
pub fn construction_a(code: &ZkCode) -> Result<ExactLattice> {
    if !code.is_self_dual() {
        return Err(Error::NotSelfDual);
    }
    construction_a_unchecked(code)
}

/// Construction A without the self-duality check; the result need not be
/// unimodular.
pub fn construction_a_unchecked(code: &ZkCode) -> Result<ExactLattice> {
    let n = code.length();
    let k = BigInt::from(code.modulus());
    let mut rows = code.generators().lift();
    for i in 0..n {
        let mut r = vec![BigInt::zero(); n];
        r[i] = k.clone();
        rows.push(r);
    }
    ExactLattice::from_generators(k, &rows, n)
}

pub fn parse_lattice(text: &str) -> Result<ExactLattice> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty lattice file"))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("lattice") {
        return Err(Error::parse(hl, "expected `lattice n=<n> scale=<s>`"));
    }
    let mut n = None;
    let mut scale = None;
    for f in it {
        match f.split_once('=') {
            Some(("n", v)) => n = v.parse::<usize>().ok(),
            Some(("scale", v)) => scale = v.parse::<BigInt>().ok().filter(|s| s.is_positive()),
            _ => return Err(Error::parse(hl, format!("unexpected header field `{f}`"))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(hl, "missing or invalid `n=`"))?;
    let scale = scale.ok_or_else(|| Error::parse(hl, "missing or invalid `scale=`"))?;
    let mut rows = Vec::with_capacity(n);
    for (ln, line) in lines {
        let row = line
            .split_whitespace()
            .map(|x| x.parse::<BigInt>().map_err(|_| Error::parse(ln, format!("bad integer `{x}`"))))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(Error::parse(ln, format!("expected {n} entries, found {}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::parse(hl, format!("expected {n} rows, found {}", rows.len())));
    }
    ExactLattice::new(scale, rows)
}

pub fn format_lattice(l: &ExactLattice) -> String {
    let mut s = format!("lattice n={} scale={}\n", l.dimension(), l.scale());
    for r in l.basis() {
        let row: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

/// Exact norm of `sum_i x_i b_i` as `x G_int x^T / s`.
pub fn norm_of_coords(gram: &[Vec<BigInt>], scale: &BigInt, x: &[BigInt]) -> BigRational {
    let mut q = BigInt::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, xj) in x.iter().enumerate() {
            q += xi * xj * &gram[i][j];
        }
    }
    BigRational::new(q, scale.clone())
}
