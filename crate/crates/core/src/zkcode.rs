//! Linear codes over `Z_k`: construction from compressed generator listings,
//! self-duality, residue and torsion codes, Euclidean weights and bounded
//! codeword enumeration.
//!
//! A code is stored as a generator matrix; everything structural (size,
//! membership, the residue/torsion split) is read off the Smith normal form
//! of the integer lift of that matrix.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::binwe::WeightEnumerator;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModInt {
    value: u32,
    modulus: u32,
}

impl ModInt {
    pub fn new(value: i64, modulus: u32) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        let value = value.rem_euclid(modulus as i64) as u32;
        ModInt { value, modulus }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    /// Representative of smallest absolute value.
    pub fn centered(self) -> i64 {
        let v = self.value as i64;
        let k = self.modulus as i64;
        if 2 * v > k {
            v - k
        } else {
            v
        }
    }
}

impl Add for ModInt {
    type Output = ModInt;
    fn add(self, rhs: ModInt) -> ModInt {
        debug_assert_eq!(self.modulus, rhs.modulus);
        ModInt::new(self.value as i64 + rhs.value as i64, self.modulus)
    }
}

impl Sub for ModInt {
    type Output = ModInt;
    fn sub(self, rhs: ModInt) -> ModInt {
        debug_assert_eq!(self.modulus, rhs.modulus);
        ModInt::new(self.value as i64 - rhs.value as i64, self.modulus)
    }
}

impl Mul for ModInt {
    type Output = ModInt;
    fn mul(self, rhs: ModInt) -> ModInt {
        debug_assert_eq!(self.modulus, rhs.modulus);
        ModInt::new(self.value as i64 * rhs.value as i64, self.modulus)
    }
}

impl Neg for ModInt {
    type Output = ModInt;
    fn neg(self) -> ModInt {
        ModInt::new(-(self.value as i64), self.modulus)
    }
}

impl fmt::Display for ModInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Dense matrix over `Z_k`, entries stored reduced in `[0, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    modulus: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl ModMatrix {
    pub fn new(modulus: u32, rows: &[Vec<i64>]) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::UnsupportedModulus(modulus));
        }
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        let data = rows
            .iter()
            .flatten()
            .map(|&x| x.rem_euclid(modulus as i64) as u32)
            .collect();
        Ok(ModMatrix { modulus, rows: rows.len(), cols, data })
    }

    pub fn zeros(modulus: u32, rows: usize, cols: usize) -> Self {
        ModMatrix { modulus, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(modulus: u32, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % modulus;
        }
        m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> ModInt {
        ModInt { value: self.data[i * self.cols + j], modulus: self.modulus }
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v.rem_euclid(self.modulus as i64) as u32;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.modulus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.entry(i, j);
            }
        }
        t
    }

    pub fn negate(&self) -> Self {
        let k = self.modulus;
        ModMatrix {
            data: self.data.iter().map(|&x| (k - x) % k).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: u32) -> Self {
        let k = self.modulus as u64;
        ModMatrix {
            data: self.data.iter().map(|&x| ((x as u64 * c as u64) % k) as u32).collect(),
            ..self.clone()
        }
    }

    pub fn matmul(&self, rhs: &ModMatrix) -> Result<Self> {
        if self.modulus != rhs.modulus || self.cols != rhs.rows {
            return Err(Error::DimensionMismatch("matrix product shapes".into()));
        }
        let k = self.modulus as u64;
        let mut out = Self::zeros(self.modulus, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let s: u64 = (0..self.cols)
                    .map(|t| self.entry(i, t) as u64 * rhs.entry(t, j) as u64)
                    .sum();
                out.data[i * rhs.cols + j] = (s % k) as u32;
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &ModMatrix) -> Result<Self> {
        if self.modulus != rhs.modulus || self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch("matrix sum shapes".into()));
        }
        let k = self.modulus;
        Ok(ModMatrix {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| (a + b) % k).collect(),
            ..self.clone()
        })
    }

    pub fn hconcat(&self, rhs: &ModMatrix) -> Result<Self> {
        if self.modulus != rhs.modulus || self.rows != rhs.rows {
            return Err(Error::DimensionMismatch("hconcat row counts".into()));
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols + rhs.cols));
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(rhs.row(i));
        }
        Ok(ModMatrix { modulus: self.modulus, rows: self.rows, cols: self.cols + rhs.cols, data })
    }

    pub fn vconcat(&self, rhs: &ModMatrix) -> Result<Self> {
        if self.modulus != rhs.modulus || (self.cols != rhs.cols && self.rows > 0 && rhs.rows > 0)
        {
            return Err(Error::DimensionMismatch("vconcat column counts".into()));
        }
        let cols = if self.rows > 0 { self.cols } else { rhs.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Ok(ModMatrix { modulus: self.modulus, rows: self.rows + rhs.rows, cols, data })
    }

    /// Entrywise reduction to a divisor of the modulus.
    pub fn reduce(&self, modulus: u32) -> Result<Self> {
        if modulus < 2 || self.modulus % modulus != 0 {
            return Err(Error::UnsupportedModulus(modulus));
        }
        Ok(ModMatrix {
            modulus,
            data: self.data.iter().map(|&x| x % modulus).collect(),
            ..self.clone()
        })
    }

    /// Integer lift with entries in `[0, k)`.
    pub fn lift(&self) -> IntMat {
        self.row_iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
}

/// A word of `Z_k^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Codeword {
    modulus: u32,
    coords: Vec<u32>,
}

impl Codeword {
    pub fn new(modulus: u32, coords: &[i64]) -> Self {
        Codeword {
            modulus,
            coords: coords.iter().map(|&x| x.rem_euclid(modulus as i64) as u32).collect(),
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    pub fn hamming_weight(&self) -> usize {
        self.coords.iter().filter(|&&x| x != 0).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coords.len()).filter(|&i| self.coords[i] != 0).collect()
    }

    /// Number of coordinates equal to `alpha`.
    pub fn count_of(&self, alpha: u32) -> usize {
        self.coords.iter().filter(|&&x| x == alpha).count()
    }

    /// Sum over coordinates of the smallest square of an integer lift:
    /// `n1 + 4 n2 + n3` over `Z_4`, and `0, 1, 4, 4, 1` per symbol over `Z_5`.
    pub fn euclidean_weight(&self) -> Result<u64> {
        if !matches!(self.modulus, 4 | 5) {
            return Err(Error::UnsupportedModulus(self.modulus));
        }
        let k = self.modulus;
        Ok(self
            .coords
            .iter()
            .map(|&x| {
                let m = x.min(k - x) as u64;
                m * m
            })
            .sum())
    }
}

/// Row span over `Z_k` of a generator matrix.
#[derive(Clone, Debug)]
pub struct ZkCode {
    generators: ModMatrix,
    structure: Structure,
}

/// Adapted basis from the Smith normal form of the lifted generators: the
/// code is `{ sum_i a_i d_i w_i }` where `w_i` are the rows of `V^{-1}`.
#[derive(Clone, Debug)]
struct Structure {
    /// `d_i mod k` per coordinate direction (zero beyond the rank).
    invariants: Vec<u32>,
    /// Rows of `V^{-1}` reduced mod `k`.
    adapted: Vec<Vec<u32>>,
    /// `V` reduced mod `k`, mapping a word to adapted coordinates.
    to_adapted: Vec<Vec<u32>>,
}

impl Structure {
    fn compute(generators: &ModMatrix) -> Structure {
        let n = generators.cols();
        let k = generators.modulus();
        let kb = BigInt::from(k);
        let red = |x: &BigInt| x.mod_floor(&kb).to_u32().expect("reduced below modulus");
        let snf = linalg::smith_normal_form(&generators.lift(), n);
        let mut invariants: Vec<u32> = snf.diagonal.iter().map(red).collect();
        invariants.resize(n, 0);
        let adapted = snf.right_inv.iter().map(|r| r.iter().map(red).collect()).collect();
        let to_adapted = snf.right.iter().map(|r| r.iter().map(red).collect()).collect();
        Structure { invariants, adapted, to_adapted }
    }
}

impl ZkCode {
    pub fn new(generators: ModMatrix) -> Self {
        let structure = Structure::compute(&generators);
        ZkCode { generators, structure }
    }

    pub fn modulus(&self) -> u32 {
        self.generators.modulus()
    }

    pub fn length(&self) -> usize {
        self.generators.cols()
    }

    pub fn generators(&self) -> &ModMatrix {
        &self.generators
    }

    /// Additive order of each adapted generator `d_i w_i`.
    fn orders(&self) -> Vec<u32> {
        let k = self.modulus();
        self.structure.invariants.iter().map(|&d| k / d.gcd(&k)).collect()
    }

    /// Generators `d_i w_i` with their additive orders, each element of the
    /// code written uniquely as `sum a_i g_i` with `0 <= a_i < order_i`.
    fn independent_generators(&self) -> Vec<(Vec<u32>, u32)> {
        let k = self.modulus() as u64;
        self.orders()
            .into_iter()
            .enumerate()
            .filter(|&(_, o)| o > 1)
            .map(|(i, o)| {
                let d = self.structure.invariants[i] as u64;
                let g = self.structure.adapted[i].iter().map(|&w| ((w as u64 * d) % k) as u32).collect();
                (g, o)
            })
            .collect()
    }

    pub fn cardinality(&self) -> BigUint {
        self.orders().into_iter().map(BigUint::from).product()
    }

    /// `log2 |C|` when the size is a power of two (always the case for `k = 2, 4`).
    pub fn log2_cardinality(&self) -> Option<u64> {
        let c = self.cardinality();
        let bits = c.bits() - 1;
        (c == BigUint::one() << bits).then_some(bits)
    }

    /// Binary (or prime-field) dimension; `None` for non-prime moduli.
    pub fn dimension(&self) -> Option<usize> {
        let k = self.modulus();
        is_prime(k).then(|| self.orders().iter().filter(|&&o| o == k).count())
    }

    pub fn contains(&self, word: &Codeword) -> bool {
        if word.modulus() != self.modulus() || word.len() != self.length() {
            return false;
        }
        let k = self.modulus() as u64;
        let n = self.length();
        (0..n).all(|i| {
            let y: u64 = (0..n)
                .map(|t| word.coords[t] as u64 * self.structure.to_adapted[t][i] as u64)
                .sum::<u64>()
                % k;
            let d = self.structure.invariants[i] as u64;
            let g = d.gcd(&k);
            y % g == 0
        })
    }

    pub fn is_self_orthogonal(&self) -> bool {
        let k = self.modulus() as u64;
        let g = &self.generators;
        (0..g.rows()).all(|i| {
            (i..g.rows()).all(|j| {
                g.row(i).iter().zip(g.row(j)).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % k
                    == 0
            })
        })
    }

    /// Self-orthogonal generators together with `|C|^2 = k^n`.
    pub fn is_self_dual(&self) -> bool {
        let k = BigUint::from(self.modulus());
        let size = self.cardinality();
        self.is_self_orthogonal() && &size * &size == k.pow(self.length() as u32)
    }

    /// `{ c mod 2 : c in C }`.
    pub fn residue(&self) -> Result<ZkCode> {
        if self.modulus() != 4 {
            return Err(Error::UnsupportedModulus(self.modulus()));
        }
        Ok(ZkCode::new(self.generators.reduce(2)?))
    }

    /// `{ c mod 2 : 2c in C }`: spanned by the adapted rows `w_i` whose
    /// invariant factor is not divisible by 4.
    pub fn torsion(&self) -> Result<ZkCode> {
        if self.modulus() != 4 {
            return Err(Error::UnsupportedModulus(self.modulus()));
        }
        let n = self.length();
        let rows: Vec<Vec<i64>> = (0..n)
            .filter(|&i| self.structure.invariants[i] % 4 != 0)
            .map(|i| self.structure.adapted[i].iter().map(|&x| (x % 2) as i64).collect())
            .collect();
        if rows.is_empty() {
            return Ok(ZkCode::new(ModMatrix::zeros(2, 0, n)));
        }
        Ok(ZkCode::new(ModMatrix::new(2, &rows)?))
    }

    /// Dual code over a prime field.
    pub fn dual(&self) -> Result<ZkCode> {
        let k = self.modulus();
        if !is_prime(k) {
            return Err(Error::UnsupportedModulus(k));
        }
        let basis = nullspace_mod_p(&self.generators, k);
        let n = self.length();
        if basis.is_empty() {
            return Ok(ZkCode::new(ModMatrix::zeros(k, 0, n)));
        }
        Ok(ZkCode::new(ModMatrix::new(k, &basis)?))
    }

    /// Every codeword, refusing codes with more than `budget` words.
    pub fn codewords(&self, budget: u64) -> Result<Codewords> {
        let size = self.cardinality();
        if size > BigUint::from(budget) {
            return Err(Error::BudgetExceeded { what: "codeword enumeration", limit: budget });
        }
        Ok(Codewords::new(self.modulus(), self.length(), self.independent_generators()))
    }

    /// Hamming weight distribution by exhaustive enumeration.
    pub fn weight_enumerator(&self, budget: u64) -> Result<WeightEnumerator> {
        let mut counts: BTreeMap<usize, u128> = BTreeMap::new();
        for w in self.codewords(budget)? {
            *counts.entry(w.hamming_weight()).or_default() += 1;
        }
        WeightEnumerator::new(self.length(), counts)
    }

    pub fn min_hamming_weight(&self, budget: u64) -> Result<Option<usize>> {
        Ok(self.codewords(budget)?.filter(|w| !w.is_zero()).map(|w| w.hamming_weight()).min())
    }

    pub fn min_euclidean_weight(&self, budget: u64) -> Result<Option<u64>> {
        let mut best = None;
        for w in self.codewords(budget)? {
            if w.is_zero() {
                continue;
            }
            let e = w.euclidean_weight()?;
            best = Some(best.map_or(e, |b: u64| b.min(e)));
        }
        Ok(best)
    }

    /// Number of binary codewords of Hamming weight `w`, by testing every
    /// support of that size. Works for codes far too large to enumerate.
    pub fn count_binary_words_of_weight(&self, w: usize, budget: u64) -> Result<u64> {
        if self.modulus() != 2 {
            return Err(Error::UnsupportedModulus(self.modulus()));
        }
        let n = self.length();
        let subsets = binomial(n as u64, w as u64);
        if subsets > budget as u128 {
            return Err(Error::BudgetExceeded { what: "weight-class enumeration", limit: budget });
        }
        let checks: Vec<u64> = nullspace_mod_p(&self.generators, 2)
            .into_iter()
            .map(|r| pack_bits(&r))
            .collect();
        let mut count = 0;
        for_each_subset(n, w, |mask| {
            if checks.iter().all(|&h| (h & mask).count_ones() % 2 == 0) {
                count += 1;
            }
        });
        Ok(count)
    }

    /// Supports of the binary codewords of weight `w`.
    pub fn binary_supports_of_weight(&self, w: usize, budget: u64) -> Result<Vec<Vec<usize>>> {
        if self.modulus() != 2 {
            return Err(Error::UnsupportedModulus(self.modulus()));
        }
        let n = self.length();
        if binomial(n as u64, w as u64) > budget as u128 {
            return Err(Error::BudgetExceeded { what: "weight-class enumeration", limit: budget });
        }
        let checks: Vec<u64> = nullspace_mod_p(&self.generators, 2)
            .into_iter()
            .map(|r| pack_bits(&r))
            .collect();
        let mut out = Vec::new();
        for_each_subset(n, w, |mask| {
            if checks.iter().all(|&h| (h & mask).count_ones() % 2 == 0) {
                out.push((0..n).filter(|&i| mask >> i & 1 == 1).collect());
            }
        });
        Ok(out)
    }

    /// True when both codes have the same row span.
    pub fn same_code(&self, other: &ZkCode) -> bool {
        self.modulus() == other.modulus()
            && self.length() == other.length()
            && self.cardinality() == other.cardinality()
            && other
                .generators
                .row_iter()
                .all(|r| self.contains(&Codeword { modulus: self.modulus(), coords: r.to_vec() }))
    }
}

fn pack_bits(row: &[i64]) -> u64 {
    assert!(row.len() <= 64, "binary packing supports length <= 64");
    row.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | ((b as u64 & 1) << i))
}

fn for_each_subset(n: usize, w: usize, mut f: impl FnMut(u64)) {
    assert!(n <= 64);
    if w > n {
        return;
    }
    if w == 0 {
        f(0);
        return;
    }
    // Gosper's hack over n-bit masks.
    let mut mask: u64 = (1u64 << w) - 1;
    let limit: u128 = 1u128 << n;
    while (mask as u128) < limit {
        f(mask);
        let c = mask & mask.wrapping_neg();
        let r = mask.wrapping_add(c);
        if r == 0 {
            break;
        }
        mask = (((r ^ mask) >> 2) / c) | r;
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub(crate) fn is_prime(k: u32) -> bool {
    k >= 2 && (2..).take_while(|d| d * d <= k).all(|d| k % d != 0)
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    // p is prime and small
    (1..p).find(|&x| a * x % p == 1).expect("nonzero element is invertible")
}

/// Basis of `{ x : G x^T = 0 }` over the prime field `F_p`.
pub(crate) fn nullspace_mod_p(g: &ModMatrix, p: u32) -> Vec<Vec<i64>> {
    let p64 = p as u64;
    let n = g.cols();
    let mut a: Vec<Vec<u64>> = g.row_iter().map(|r| r.iter().map(|&x| (x % p) as u64).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..a.len()).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let inv = inv_mod_p(a[row][col], p64);
        for x in a[row].iter_mut() {
            *x = *x * inv % p64;
        }
        for i in 0..a.len() {
            if i != row && a[i][col] != 0 {
                let f = a[i][col];
                for j in 0..n {
                    a[i][j] = (a[i][j] + p64 * p64 - f * a[row][j]) % p64;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0i64; n];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = ((p64 - a[i][f]) % p64) as i64;
            }
            v
        })
        .collect()
}

/// Mixed-radix walk over `sum a_i g_i`.
pub struct Codewords {
    modulus: u32,
    generators: Vec<(Vec<u32>, u32)>,
    digits: Vec<u32>,
    current: Vec<u32>,
    done: bool,
}

impl Codewords {
    fn new(modulus: u32, n: usize, generators: Vec<(Vec<u32>, u32)>) -> Self {
        let digits = vec![0; generators.len()];
        Codewords { modulus, generators, digits, current: vec![0; n], done: false }
    }
}

impl Iterator for Codewords {
    type Item = Codeword;

    fn next(&mut self) -> Option<Codeword> {
        if self.done {
            return None;
        }
        let out = Codeword { modulus: self.modulus, coords: self.current.clone() };
        let k = self.modulus;
        let mut i = 0;
        loop {
            if i == self.generators.len() {
                self.done = true;
                break;
            }
            let (g, order) = &self.generators[i];
            for (c, &x) in self.current.iter_mut().zip(g) {
                *c = (*c + x) % k;
            }
            self.digits[i] += 1;
            if self.digits[i] < *order {
                break;
            }
            // wrapped: current has returned to its value with digit 0
            self.digits[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

/// Code generated by `(I_{k1} | AB)` over `Z_4` together with twice a basis of
/// the binary dual of the residue code.
pub fn assemble_standard_form(k1: usize, n: usize, ab: &ModMatrix) -> Result<ZkCode> {
    if ab.modulus() != 4 {
        return Err(Error::UnsupportedModulus(ab.modulus()));
    }
    if n < k1 || ab.rows() != k1 || ab.cols() != n - k1 {
        return Err(Error::DimensionMismatch(format!(
            "standard form with k1={k1}, n={n} needs a {k1}x{} block, got {}x{}",
            n.saturating_sub(k1),
            ab.rows(),
            ab.cols()
        )));
    }
    let top = ModMatrix::identity(4, k1).hconcat(ab)?;
    let torsion = nullspace_mod_p(&top.reduce(2)?, 2);
    if torsion.is_empty() {
        return Ok(ZkCode::new(top));
    }
    let doubled: Vec<Vec<i64>> = torsion.iter().map(|r| r.iter().map(|&x| 2 * x).collect()).collect();
    Ok(ZkCode::new(top.vconcat(&ModMatrix::new(4, &doubled)?)?))
}

/// Square matrix whose first row is `first_row` and whose every further row
/// is the previous one shifted right with the wrapped entry negated.
pub fn negacirculant(first_row: &[ModInt]) -> Result<ModMatrix> {
    let Some(first) = first_row.first() else {
        return Err(Error::DimensionMismatch("empty first row".into()));
    };
    let k = first.modulus();
    if first_row.iter().any(|x| x.modulus() != k) {
        return Err(Error::DimensionMismatch("mixed moduli in first row".into()));
    }
    let n = first_row.len();
    let mut m = ModMatrix::zeros(k, n, n);
    for j in 0..n {
        m.set(0, j, first_row[j].value() as i64);
    }
    for i in 1..n {
        m.set(i, 0, -(m.entry(i - 1, n - 1) as i64));
        for j in 1..n {
            m.set(i, j, m.entry(i - 1, j - 1) as i64);
        }
    }
    Ok(m)
}

/// Code with generator matrix `(I_{2m} | A B ; -B^T A^T)` for negacirculant
/// `A`, `B` of order `m`.
pub fn assemble_double_negacirculant(a_row: &[ModInt], b_row: &[ModInt]) -> Result<ZkCode> {
    if a_row.len() != b_row.len() {
        return Err(Error::DimensionMismatch("first rows differ in length".into()));
    }
    let a = negacirculant(a_row)?;
    let b = negacirculant(b_row)?;
    if a.modulus() != b.modulus() {
        return Err(Error::DimensionMismatch("first rows differ in modulus".into()));
    }
    let upper = a.hconcat(&b)?;
    let lower = b.transpose().negate().hconcat(&a.transpose())?;
    let block = upper.vconcat(&lower)?;
    let g = ModMatrix::identity(a.modulus(), 2 * a.rows()).hconcat(&block)?;
    Ok(ZkCode::new(g))
}

/// A parsed code file: the code plus optional `expect <key> <value>` lines.
#[derive(Clone, Debug)]
pub struct CodeFile {
    pub code: ZkCode,
    pub expectations: Vec<(String, String)>,
}

fn header_fields(line: &str, lineno: usize) -> Result<BTreeMap<String, usize>> {
    line.split_whitespace()
        .skip(1)
        .map(|f| {
            let (k, v) = f
                .split_once('=')
                .ok_or_else(|| Error::parse(lineno, format!("malformed header field `{f}`")))?;
            let v = v
                .parse::<usize>()
                .map_err(|_| Error::parse(lineno, format!("non-numeric value in `{f}`")))?;
            Ok((k.to_string(), v))
        })
        .collect()
}

fn parse_digits(s: &str, k: u32, expected: usize, lineno: usize) -> Result<Vec<i64>> {
    let digits: Vec<i64> = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c.to_digit(10) {
            Some(d) if d < k => Ok(d as i64),
            _ => Err(Error::parse(lineno, format!("invalid symbol `{c}` for Z_{k}"))),
        })
        .collect::<Result<_>>()?;
    if digits.len() != expected {
        return Err(Error::parse(
            lineno,
            format!("expected {expected} symbols, found {}", digits.len()),
        ));
    }
    Ok(digits)
}

/// Parses the `zkcode` and `z4std` text formats.
pub fn parse_code(text: &str) -> Result<CodeFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty code file"))?;
    let fields = header_fields(header, hl)?;
    let field = |name: &str| {
        fields
            .get(name)
            .copied()
            .ok_or_else(|| Error::parse(hl, format!("header lacks `{name}=`")))
    };
    let kind = header.split_whitespace().next().unwrap_or_default();
    let (modulus, width, count) = match kind {
        "zkcode" => (field("k")? as u32, field("n")?, None),
        "z4std" => {
            let n = field("n")?;
            let k1 = field("k1")?;
            if k1 > n {
                return Err(Error::parse(hl, "k1 exceeds n"));
            }
            (4, n - k1, Some(k1))
        }
        other => return Err(Error::parse(hl, format!("unknown header `{other}`"))),
    };
    if !(2..=10).contains(&modulus) {
        return Err(Error::parse(hl, format!("unsupported modulus {modulus}")));
    }
    let mut rows = Vec::new();
    let mut expectations = Vec::new();
    for (ln, line) in lines {
        if let Some(rest) = line.strip_prefix("expect ") {
            let mut it = rest.split_whitespace();
            match (it.next(), it.next(), it.next()) {
                (Some(k), Some(v), None) => expectations.push((k.to_string(), v.to_string())),
                _ => return Err(Error::parse(ln, "expect lines take a key and a value")),
            }
            continue;
        }
        let body = line.strip_prefix("row").unwrap_or(line);
        rows.push(parse_digits(body, modulus, width, ln)?);
    }
    if let Some(k1) = count {
        if rows.len() != k1 {
            return Err(Error::parse(hl, format!("expected {k1} rows, found {}", rows.len())));
        }
    }
    let code = match count {
        Some(k1) => {
            let ab = if rows.is_empty() { ModMatrix::zeros(4, 0, width) } else { ModMatrix::new(4, &rows)? };
            assemble_standard_form(k1, k1 + width, &ab)?
        }
        None if rows.is_empty() => ZkCode::new(ModMatrix::zeros(modulus, 0, width)),
        None => ZkCode::new(ModMatrix::new(modulus, &rows)?),
    };
    Ok(CodeFile { code, expectations })
}

/// Writes the generator matrix in the `zkcode` format.
pub fn format_code(code: &ZkCode) -> String {
    let mut s = format!("zkcode k={} n={}\n", code.modulus(), code.length());
    for r in code.generators().row_iter() {
        s.push_str("row ");
        for x in r {
            s.push_str(&x.to_string());
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(k: u32, rows: &[&[i64]]) -> ZkCode {
        ZkCode::new(ModMatrix::new(k, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap())
    }

    fn row(k: u32, xs: &[i64]) -> Vec<ModInt> {
        xs.iter().map(|&x| ModInt::new(x, k)).collect()
    }

    #[test]
    fn modint_arithmetic_wraps() {
        let a = ModInt::new(3, 4);
        let b = ModInt::new(2, 4);
        assert_eq!((a + b).value(), 1);
        assert_eq!((b - a).value(), 3);
        assert_eq!((a * a).value(), 1);
        assert_eq!((-a).value(), 1);
        assert_eq!(ModInt::new(-7, 5).value(), 3);
        assert_eq!(ModInt::new(3, 4).centered(), -1);
    }

    #[test]
    fn full_ambient_code_from_trivial_standard_form() {
        let ab = ModMatrix::zeros(4, 1, 0);
        let c = assemble_standard_form(1, 1, &ab).unwrap();
        assert_eq!(c.cardinality(), BigUint::from(4u32));
        assert!(!c.is_self_dual());
    }

    #[test]
    fn standard_form_rejects_bad_shapes() {
        let ab = ModMatrix::zeros(4, 2, 3);
        assert!(matches!(assemble_standard_form(2, 6, &ab), Err(Error::DimensionMismatch(_))));
        let ab5 = ModMatrix::zeros(5, 1, 1);
        assert!(matches!(assemble_standard_form(1, 2, &ab5), Err(Error::UnsupportedModulus(5))));
    }

    #[test]
    fn self_duality_small_cases() {
        assert!(code(4, &[&[2]]).is_self_dual());
        assert!(!code(4, &[&[1, 0]]).is_self_dual());
        // Klemm-type code of length 4: (1,1,1,1) plus twice the even-weight words
        let k4 = code(4, &[&[1, 1, 1, 1], &[2, 2, 0, 0], &[0, 2, 2, 0]]);
        assert_eq!(k4.cardinality(), BigUint::from(16u32));
        assert!(k4.is_self_dual());
    }

    #[test]
    fn residue_and_torsion_of_length_one_code() {
        let c = code(4, &[&[2]]);
        let r = c.residue().unwrap();
        assert_eq!(r.cardinality(), BigUint::one());
        let t = c.torsion().unwrap();
        assert_eq!(t.cardinality(), BigUint::from(2u32));
        assert!(matches!(code(5, &[&[1]]).residue(), Err(Error::UnsupportedModulus(5))));
    }

    #[test]
    fn euclidean_weights() {
        assert_eq!(Codeword::new(4, &[1, 2, 3, 0]).euclidean_weight().unwrap(), 6);
        assert_eq!(Codeword::new(4, &[2; 36]).euclidean_weight().unwrap(), 144);
        assert_eq!(Codeword::new(5, &[1, 4, 2, 3]).euclidean_weight().unwrap(), 10);
        assert!(matches!(
            Codeword::new(3, &[1]).euclidean_weight(),
            Err(Error::UnsupportedModulus(3))
        ));
    }

    #[test]
    fn negacirculant_shapes() {
        let m = negacirculant(&row(5, &[0, 1, 0])).unwrap();
        let rows: Vec<Vec<u32>> = m.row_iter().map(|r| r.to_vec()).collect();
        assert_eq!(rows, vec![vec![0, 1, 0], vec![0, 0, 1], vec![4, 0, 0]]);
        let id = negacirculant(&row(5, &[1, 0, 0, 0])).unwrap();
        assert_eq!(id, ModMatrix::identity(5, 4));
    }

    #[test]
    fn double_negacirculant_toy_cases() {
        let zero = row(5, &[0; 11]);
        let mut e1 = vec![0; 11];
        e1[0] = 1;
        assert!(!assemble_double_negacirculant(&zero, &row(5, &e1)).unwrap().is_self_dual());
        let mut two = vec![0; 11];
        two[0] = 2;
        let c = assemble_double_negacirculant(&row(5, &two), &zero).unwrap();
        assert_eq!(c.length(), 22 * 2);
        assert!(c.is_self_dual());
    }

    #[test]
    fn codeword_walk_visits_every_word_once() {
        let k4 = code(4, &[&[1, 1, 1, 1], &[2, 2, 0, 0], &[0, 2, 2, 0]]);
        let words: Vec<Codeword> = k4.codewords(1 << 10).unwrap().collect();
        assert_eq!(words.len(), 16);
        let distinct: std::collections::HashSet<_> = words.iter().cloned().collect();
        assert_eq!(distinct.len(), 16);
        assert!(words.iter().all(|w| k4.contains(w)));
        assert!(!k4.contains(&Codeword::new(4, &[1, 0, 0, 0])));
        assert!(matches!(k4.codewords(8), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn weight_class_counting_matches_enumeration() {
        // [7,4] Hamming code has 7 words of weight 3
        let h = code(2, &[&[1, 0, 0, 0, 1, 1, 0], &[0, 1, 0, 0, 1, 0, 1], &[0, 0, 1, 0, 0, 1, 1], &[0, 0, 0, 1, 1, 1, 1]]);
        assert_eq!(h.count_binary_words_of_weight(3, 1000).unwrap(), 7);
        assert_eq!(h.dimension(), Some(4));
        let we = h.weight_enumerator(1 << 10).unwrap();
        assert_eq!(we.count(3), 7);
        assert_eq!(we.count(4), 7);
        assert_eq!(we.count(7), 1);
        assert_eq!(h.dual().unwrap().dimension(), Some(3));
    }

    #[test]
    fn code_file_round_trip_and_errors() {
        let k4 = code(4, &[&[1, 1, 1, 1], &[2, 2, 0, 0], &[0, 2, 2, 0]]);
        let text = format_code(&k4);
        let back = parse_code(&text).unwrap().code;
        assert!(back.same_code(&k4));

        let std = "z4std k1=1 n=4\n# comment\n111\nexpect kissing 8\n";
        let parsed = parse_code(std).unwrap();
        assert!(parsed.code.same_code(&k4));
        assert_eq!(parsed.expectations, vec![("kissing".to_string(), "8".to_string())]);

        assert!(matches!(parse_code("zkcode k=4 n=3\nrow 1234\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_code("zkcode k=4 n=3\nrow 14\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_code("code k=4\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_code(""), Err(Error::Parse { .. })));
    }
}
