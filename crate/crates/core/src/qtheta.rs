//! Truncated power series in `q^{1/4}` with exact rational coefficients,
//! Jacobi theta series, and the parameterized theta series of an odd
//! unimodular lattice and of its shadow.
//!
//! Exponents are stored in quarter units: index `e` holds the coefficient of
//! `q^{e/4}`. A series truncated at `t` keeps every exponent `<= t`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Truncation used when none is configured.
pub const DEFAULT_TRUNCATION: usize = 6;

fn int(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(truncation: usize) -> Self {
        QSeries { coeffs: vec![Rational::zero(); 4 * truncation + 1] }
    }

    pub fn one(truncation: usize) -> Self {
        Self::monomial(0, Rational::one(), truncation)
    }

    /// `c q^{quarters/4}`, or zero when beyond the truncation.
    pub fn monomial(quarters: usize, c: Rational, truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        if quarters < s.coeffs.len() {
            s.coeffs[quarters] = c;
        }
        s
    }

    pub fn from_terms(truncation: usize, terms: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut s = Self::zero(truncation);
        for (e, c) in terms {
            if e < s.coeffs.len() {
                s.coeffs[e] += c;
            }
        }
        s
    }

    pub fn truncation(&self) -> usize {
        (self.coeffs.len() - 1) / 4
    }

    /// Coefficient of `q^{quarters/4}` (zero past the truncation).
    pub fn coeff_quarter(&self, quarters: usize) -> Rational {
        self.coeffs.get(quarters).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `q^e` for integral `e`.
    pub fn coeff(&self, e: usize) -> Rational {
        self.coeff_quarter(4 * e)
    }

    /// Nonzero terms `(quarters, coefficient)` in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Lowest exponent (in quarters) with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.terms().next().map(|(e, _)| e)
    }

    pub fn truncate(&self, truncation: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(4 * truncation + 1, Rational::zero());
        QSeries { coeffs }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let t = self.truncation().min(other.truncation());
        let coeffs = (0..=4 * t).map(|e| &self.coeffs[e] + &other.coeffs[e]).collect();
        QSeries { coeffs }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let t = self.truncation().min(other.truncation());
        let len = 4 * t + 1;
        let mut coeffs = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len).filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().take(len - i).filter(|(_, b)| !b.is_zero()) {
                coeffs[i + j] += a * b;
            }
        }
        QSeries { coeffs }
    }

    pub fn pow(&self, mut k: usize) -> QSeries {
        let mut base = self.clone();
        let mut acc = QSeries::one(self.truncation());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitution `q -> q^2`.
    pub fn in_q_squared(&self) -> QSeries {
        let mut out = QSeries::zero(self.truncation());
        for (e, c) in self.terms() {
            if 2 * e < out.coeffs.len() {
                out.coeffs[2 * e] = c.clone();
            }
        }
        out
    }
}

fn format_exponent(quarters: usize) -> String {
    format!("q^{{{quarters}/4}}")
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in self.terms() {
            writeln!(f, "{}: {}", format_exponent(e), c)?;
        }
        Ok(())
    }
}

/// `1 + 2 sum q^{m^2}`.
pub fn theta3(truncation: usize) -> QSeries {
    let mut s = QSeries::one(truncation);
    for m in (1..).take_while(|m| m * m <= truncation) {
        s.coeffs[4 * m * m] = int(2);
    }
    s
}

/// `theta3(-q)`.
pub fn theta4(truncation: usize) -> QSeries {
    let mut s = QSeries::one(truncation);
    for m in (1..).take_while(|m| m * m <= truncation) {
        s.coeffs[4 * m * m] = int(if m % 2 == 1 { -2 } else { 2 });
    }
    s
}

/// `2 sum_{m >= 0} q^{(m + 1/2)^2}`.
pub fn theta2(truncation: usize) -> QSeries {
    let mut s = QSeries::zero(truncation);
    for m in (0..).take_while(|m| (2 * m + 1) * (2 * m + 1) <= 4 * truncation) {
        s.coeffs[(2 * m + 1) * (2 * m + 1)] = int(2);
    }
    s
}

/// `q prod_{m >= 1} (1 - q^{2m-1})^8 (1 - q^{4m})^8`.
pub fn delta8(truncation: usize) -> QSeries {
    let factor = |e: usize| QSeries::one(truncation).sub(&QSeries::monomial(4 * e, Rational::one(), truncation));
    let mut s = QSeries::monomial(4, Rational::one(), truncation);
    for m in 1.. {
        if 2 * m - 1 > truncation {
            break;
        }
        s = s.mul(&factor(2 * m - 1).pow(8));
        if 4 * m <= truncation {
            s = s.mul(&factor(4 * m).pow(8));
        }
    }
    s
}

/// Free parameter of a parameterized theta series.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Alpha,
    Beta,
    /// Raw decomposition coefficient `a_j` left free.
    A(usize),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Alpha => write!(f, "alpha"),
            Param::Beta => write!(f, "beta"),
            Param::A(j) => write!(f, "a{j}"),
        }
    }
}

impl std::str::FromStr for Param {
    type Err = Error;
    fn from_str(s: &str) -> Result<Param> {
        match s {
            "alpha" => Ok(Param::Alpha),
            "beta" => Ok(Param::Beta),
            _ => s
                .strip_prefix('a')
                .and_then(|j| j.parse().ok())
                .map(Param::A)
                .ok_or_else(|| Error::UnboundParameter(s.to_string())),
        }
    }
}

/// `c0 + sum c_p * p` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AffineForm {
    constant: Rational,
    coeffs: BTreeMap<Param, Rational>,
}

impl AffineForm {
    pub fn constant(c: Rational) -> Self {
        AffineForm { constant: c, coeffs: BTreeMap::new() }
    }

    pub fn param(p: Param, c: Rational) -> Self {
        let mut f = AffineForm::default();
        if !c.is_zero() {
            f.coeffs.insert(p, c);
        }
        f
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn coeff(&self, p: &Param) -> Rational {
        self.coeffs.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn params(&self) -> impl Iterator<Item = &Param> {
        self.coeffs.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn add(&self, other: &AffineForm) -> AffineForm {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (p, c) in &other.coeffs {
            let e = out.coeffs.entry(p.clone()).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                out.coeffs.remove(p);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> AffineForm {
        if c.is_zero() {
            return AffineForm::default();
        }
        AffineForm {
            constant: &self.constant * c,
            coeffs: self.coeffs.iter().map(|(p, x)| (p.clone(), x * c)).collect(),
        }
    }

    pub fn evaluate(&self, bindings: &BTreeMap<Param, Rational>) -> Result<Rational> {
        let mut v = self.constant.clone();
        for (p, c) in &self.coeffs {
            let x = bindings.get(p).ok_or_else(|| Error::UnboundParameter(p.to_string()))?;
            v += c * x;
        }
        Ok(v)
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (p, c) in &self.coeffs {
            let sign = if c.is_negative() { '-' } else { '+' };
            write!(f, " {sign} {}*{p}", c.abs())?;
        }
        Ok(())
    }
}

/// A [`QSeries`] whose coefficients are affine in free parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSeries {
    coeffs: Vec<AffineForm>,
}

impl ParamSeries {
    pub fn zero(truncation: usize) -> Self {
        ParamSeries { coeffs: vec![AffineForm::default(); 4 * truncation + 1] }
    }

    pub fn truncation(&self) -> usize {
        (self.coeffs.len() - 1) / 4
    }

    pub fn coeff_quarter(&self, quarters: usize) -> AffineForm {
        self.coeffs.get(quarters).cloned().unwrap_or_default()
    }

    pub fn coeff(&self, e: usize) -> AffineForm {
        self.coeff_quarter(4 * e)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &AffineForm)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Every parameter occurring anywhere in the series.
    pub fn params(&self) -> Vec<Param> {
        let mut ps: Vec<Param> = self.coeffs.iter().flat_map(|c| c.params().cloned()).collect();
        ps.sort();
        ps.dedup();
        ps
    }

    /// Adds `form * series`.
    fn add_scaled(&mut self, form: &AffineForm, series: &QSeries) {
        for (e, c) in series.terms() {
            if e < self.coeffs.len() {
                self.coeffs[e] = self.coeffs[e].add(&form.scale(c));
            }
        }
    }
}

impl fmt::Display for ParamSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in self.terms() {
            writeln!(f, "{}: {}", format_exponent(e), c)?;
        }
        Ok(())
    }
}

pub fn substitute(ps: &ParamSeries, bindings: &BTreeMap<Param, Rational>) -> Result<QSeries> {
    let coeffs = ps.coeffs.iter().map(|c| c.evaluate(bindings)).collect::<Result<Vec<_>>>()?;
    Ok(QSeries { coeffs })
}

/// Theta series of a putative odd unimodular lattice of dimension `n` and
/// minimum norm at least `min_norm`, and of its shadow.
///
/// The lattice series is `sum_j a_j theta3^{n-8j} Delta8^j`; the shadow
/// series is `sum_j a_j (-1)^j 16^{-j} theta2^{n-8j} theta4(q^2)^{8j}`.
/// With `J = floor(n/8)`, the free coefficients are renamed so that the
/// shadow reads `beta q^{s} + (lambda alpha + ...) q^{s+2} + ...`:
/// `beta` is the lowest shadow coefficient (carried by `a_J` alone) and
/// `alpha` is `a_{J-1}` scaled so that its contribution at `q^{s+2}` is an
/// integer multiple `lambda alpha` with `lambda` the numerator of that
/// contribution per unit `a_{J-1}`. Further free coefficients stay `a{j}`.
pub fn decompose(n: usize, min_norm: usize, truncation: usize) -> Result<(ParamSeries, ParamSeries)> {
    if n == 0 {
        return Err(Error::Precondition("dimension must be positive".into()));
    }
    if min_norm == 0 {
        return Err(Error::Precondition("minimum norm must be positive".into()));
    }
    let top = n / 8;
    if min_norm > top + 1 {
        return Err(Error::OverConstrained(format!(
            "dimension {n} leaves {} coefficients, minimum norm {min_norm} imposes {min_norm}",
            top + 1
        )));
    }
    let work = truncation.max(top + 1);
    let t3 = theta3(work);
    let t2 = theta2(work);
    let t4sq = theta4(work).in_q_squared();
    let d8 = delta8(work);
    let sixteenth = Rational::new(BigInt::one(), BigInt::from(16));
    let lattice_basis: Vec<QSeries> = (0..=top).map(|j| t3.pow(n - 8 * j).mul(&d8.pow(j))).collect();
    let shadow_basis: Vec<QSeries> = (0..=top)
        .map(|j| {
            let sign = if j % 2 == 1 { -Rational::one() } else { Rational::one() };
            t2.pow(n - 8 * j).mul(&t4sq.pow(8 * j)).scale(&(sign * num_traits::pow(sixteenth.clone(), j)))
        })
        .collect();

    // Fixed coefficients: q^0 -> 1, q^i -> 0 for 0 < i < min_norm.
    let mut a: Vec<AffineForm> = Vec::with_capacity(top + 1);
    for i in 0..min_norm {
        let mut c = if i == 0 { Rational::one() } else { Rational::zero() };
        for (j, aj) in a.iter().enumerate() {
            c -= aj.constant_term() * lattice_basis[j].coeff(i);
        }
        a.push(AffineForm::constant(c));
    }
    // Lowest shadow coefficient of each basis element, at q^{(n-8j)/4}.
    let lead = |j: usize| shadow_basis[j].coeff_quarter(n - 8 * j);
    for j in min_norm..=top {
        let form = if j == top {
            AffineForm::param(Param::Beta, lead(j).recip())
        } else if j + 1 == top {
            let q1 = lead(j);
            let lambda = Rational::from_integer(q1.numer().abs());
            AffineForm::param(Param::Alpha, lambda / q1)
        } else {
            AffineForm::param(Param::A(j), Rational::one())
        };
        a.push(form);
    }

    let mut theta = ParamSeries::zero(truncation);
    let mut shadow = ParamSeries::zero(truncation);
    for (j, aj) in a.iter().enumerate() {
        theta.add_scaled(aj, &lattice_basis[j].truncate(truncation));
        shadow.add_scaled(aj, &shadow_basis[j].truncate(truncation));
    }
    Ok((theta, shadow))
}
