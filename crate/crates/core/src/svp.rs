//! Exhaustive enumeration of short lattice vectors (Fincke–Pohst with
//! Schnorr–Euchner zigzag), optionally over a coset `shift + L`.
//!
//! The search tree is pruned with Gram–Schmidt data rounded from exact
//! rationals to `f64`, against a bound widened by a safety margin far above
//! the accumulated rounding error. Every leaf is then re-checked with exact
//! integer arithmetic, so counts never depend on floating point.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{construction_a, ExactLattice, LatticeVector};
use crate::linalg::{self, IntMat};
use crate::qtheta::QSeries;
use crate::reduce::{deep_lll, default_delta, lll};
use crate::zkcode::ZkCode;

pub const DEFAULT_NODE_BUDGET: u64 = 1 << 42;

/// Dimension from which the deep-insertion pass runs before enumeration.
pub const DEEP_INSERTION_FROM: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// Enumerate over the basis exactly as given.
    AsGiven,
    Lll,
    DeepInsertion(Option<usize>),
    /// LLL, plus deep insertion from [`DEEP_INSERTION_FROM`] dimensions on.
    Auto,
}

#[derive(Clone, Debug)]
pub struct EnumConfig {
    pub threads: usize,
    pub node_budget: u64,
    pub reduction: Reduction,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { threads: 1, node_budget: DEFAULT_NODE_BUDGET, reduction: Reduction::Auto }
    }
}

impl EnumConfig {
    pub fn with_threads(threads: usize) -> Self {
        EnumConfig { threads: threads.max(1), ..Self::default() }
    }
}

/// Enumeration over `shift + L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTarget {
    shift: LatticeVector,
}

impl CosetTarget {
    pub fn new(shift: LatticeVector) -> Self {
        CosetTarget { shift }
    }

    pub fn shift(&self) -> &LatticeVector {
        &self.shift
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortVectorCensus {
    bound: BigRational,
    counts: BTreeMap<BigRational, u64>,
    nodes: u64,
}

impl ShortVectorCensus {
    pub fn bound(&self) -> &BigRational {
        &self.bound
    }

    /// Number of vectors of each norm, both signs counted.
    pub fn counts(&self) -> &BTreeMap<BigRational, u64> {
        &self.counts
    }

    pub fn count(&self, norm: &BigRational) -> u64 {
        self.counts.get(norm).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Smallest norm found and its multiplicity.
    pub fn minimum(&self) -> Option<(&BigRational, u64)> {
        self.counts.iter().next().map(|(k, &v)| (k, v))
    }

    /// Search-tree nodes visited; varies with the thread count.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// `norm p/q count N` lines in ascending norm order.
    pub fn report_lines(&self) -> Vec<String> {
        self.counts.iter().map(|(k, v)| format!("norm {}/{} count {}", k.numer(), k.denom(), v)).collect()
    }
}

/// A basis prepared for repeated enumeration.
#[derive(Clone, Debug)]
pub struct Enumerator {
    scale: BigInt,
    basis: Vec<Vec<i64>>,
    big_basis: IntMat,
    /// Integer Gram matrix `B B^T`, row-major.
    gram: Vec<i128>,
    /// `mu[j * n + i]` for `j > i`.
    mu: Vec<f64>,
    bstar: Vec<f64>,
}

/// Exact Gram–Schmidt data of the integer Gram matrix, rounded to `f64`.
fn gram_schmidt_f64(gram: &IntMat) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = gram.len();
    // fraction-free recurrences: d[i + 1] are leading minors, lam[k][j] = d[j + 1] mu[k][j]
    let mut d = vec![BigInt::one(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    for k in 0..n {
        for j in 0..=k {
            let mut u = gram[k][j].clone();
            for i in 0..j {
                u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
            }
            if j < k {
                lam[k][j] = u;
            } else {
                if !u.is_positive() {
                    return Err(Error::Singular);
                }
                d[k + 1] = u;
            }
        }
    }
    let f = |num: &BigInt, den: &BigInt| BigRational::new(num.clone(), den.clone()).to_f64().unwrap_or(f64::NAN);
    let bstar: Vec<f64> = (0..n).map(|i| f(&d[i + 1], &d[i])).collect();
    let mut mu = vec![0.0; n * n];
    for k in 0..n {
        for j in 0..k {
            mu[k * n + j] = f(&lam[k][j], &d[j + 1]);
        }
    }
    if bstar.iter().chain(&mu).any(|x| !x.is_finite()) {
        return Err(Error::Overflow("Gram–Schmidt data out of floating-point range"));
    }
    Ok((bstar, mu))
}

/// Shift in basis coordinates as `u / d` with `0 <= u < d`.
struct Shift {
    u: Vec<i64>,
    d: i64,
    t: Vec<f64>,
}

struct Budget {
    limit: u64,
    used: AtomicU64,
    stop: AtomicBool,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget { limit, used: AtomicU64::new(0), stop: AtomicBool::new(false) }
    }

    fn charge(&self, nodes: u64) -> Result<()> {
        let total = self.used.fetch_add(nodes, Ordering::Relaxed) + nodes;
        if total > self.limit {
            self.stop.store(true, Ordering::Relaxed);
            return Err(Error::BudgetExceeded { what: "enumeration nodes", limit: self.limit });
        }
        if self.stop.load(Ordering::Relaxed) {
            return Err(Error::BudgetExceeded { what: "enumeration nodes", limit: self.limit });
        }
        Ok(())
    }
}

const CHARGE_EVERY: u64 = 1 << 14;

/// Depth-first walk over levels `bottom..=top` with all higher levels fixed.
struct Walk<'a> {
    e: &'a Enumerator,
    t: &'a [f64],
    symmetric: bool,
    limit: f64,
}

enum Visit {
    Continue,
    Stop,
}

impl Walk<'_> {
    /// Returns whether the visitor asked to stop.
    fn run(
        &self,
        prefix: &[i64],
        bottom: usize,
        budget: &Budget,
        visit: &mut dyn FnMut(&[i64]) -> Result<Visit>,
    ) -> Result<bool> {
        let e = self.e;
        let n = e.basis.len();
        let top = n - 1 - prefix.len();
        let w = n + 1;
        let mut x = vec![0i64; n];
        x[top + 1..].copy_from_slice(prefix);
        let mut c = vec![0.0f64; n];
        let mut rho = vec![0.0f64; n + 1];
        let mut dx = vec![0i64; n];
        let mut ddx = vec![0i64; n];
        let mut half = vec![false; n];
        let mut zero_above = vec![true; n + 1];
        let mut sums = vec![0.0f64; n * w];
        for i in 0..n {
            sums[i * w + n] = self.t[i];
        }
        // stale[i]: highest level whose value changed since row i was refreshed
        let mut stale = vec![n - 1; n];
        let mut pending = 0u64;

        macro_rules! refresh {
            ($k:expr) => {{
                let k = $k;
                for j in (k + 1..=stale[k]).rev() {
                    sums[k * w + j] = sums[k * w + j + 1] + e.mu[j * n + k] * (x[j] as f64 + self.t[j]);
                }
                if k > 0 && stale[k - 1] < stale[k] {
                    stale[k - 1] = stale[k];
                }
                stale[k] = k;
                c[k] = -sums[k * w + k + 1];
            }};
        }
        macro_rules! changed {
            ($k:expr) => {{
                let k = $k;
                if k > 0 && stale[k - 1] < k {
                    stale[k - 1] = k;
                }
                let diff = x[k] as f64 - c[k];
                rho[k] = rho[k + 1] + e.bstar[k] * diff * diff;
            }};
        }

        for k in (top + 1..n).rev() {
            refresh!(k);
            changed!(k);
            zero_above[k] = zero_above[k + 1] && (k + 1 == n || x[k + 1] == 0);
        }
        if rho[top + 1] > self.limit {
            return Ok(false);
        }

        let enter = |k: usize,
                     x: &mut [i64],
                     c: &[f64],
                     dx: &mut [i64],
                     ddx: &mut [i64],
                     half: &mut [bool],
                     zero_above: &mut [bool]| {
            zero_above[k] = zero_above[k + 1] && (k + 1 == n || x[k + 1] == 0);
            half[k] = self.symmetric && zero_above[k];
            if half[k] {
                x[k] = 0;
            } else {
                let r = c[k].round();
                x[k] = r as i64;
                let s = if c[k] >= r { 1 } else { -1 };
                dx[k] = s;
                ddx[k] = s;
            }
        };
        let sibling = |k: usize, x: &mut [i64], dx: &mut [i64], ddx: &mut [i64], half: &[bool]| {
            if half[k] {
                x[k] += 1;
            } else {
                x[k] += dx[k];
                ddx[k] = -ddx[k];
                dx[k] = ddx[k] - dx[k];
            }
        };

        let mut k = top;
        refresh!(k);
        enter(k, &mut x, &c, &mut dx, &mut ddx, &mut half, &mut zero_above);
        changed!(k);
        loop {
            pending += 1;
            if pending == CHARGE_EVERY {
                budget.charge(pending)?;
                pending = 0;
            }
            if rho[k] <= self.limit {
                if k == bottom {
                    if let Visit::Stop = visit(&x)? {
                        budget.charge(pending)?;
                        return Ok(true);
                    }
                    sibling(k, &mut x, &mut dx, &mut ddx, &half);
                    changed!(k);
                } else {
                    k -= 1;
                    refresh!(k);
                    enter(k, &mut x, &c, &mut dx, &mut ddx, &mut half, &mut zero_above);
                    changed!(k);
                }
            } else {
                if k == top {
                    break;
                }
                k += 1;
                sibling(k, &mut x, &mut dx, &mut ddx, &half);
                changed!(k);
            }
        }
        budget.charge(pending)?;
        Ok(false)
    }
}

fn rational_parts(b: &BigRational) -> Result<(i128, i128)> {
    match (b.numer().to_i128(), b.denom().to_i128()) {
        (Some(p), Some(q)) => Ok((p, q)),
        _ => Err(Error::Overflow("norm bound")),
    }
}

/// Exact leaf test: `z = d x + u`, norm `z G z^T / (s d^2)`.
struct Exact<'a> {
    gram: &'a [i128],
    n: usize,
    u: &'a [i64],
    d: i64,
    /// Accept when `Q * bq <= cap`, where `cap = bp * s * d^2`.
    bq: i128,
    cap: i128,
    /// Whether the lattice itself is searched (the zero vector is skipped).
    unshifted: bool,
}

impl Exact<'_> {
    /// `Some(Q)` when the leaf lies within the bound.
    fn check(&self, x: &[i64], z: &mut [i128]) -> Result<Option<i128>> {
        let ovf = || Error::Overflow("exact norm of enumerated vector");
        let mut nonzero = false;
        for i in 0..self.n {
            z[i] = (self.d as i128) * (x[i] as i128) + self.u[i] as i128;
            nonzero |= z[i] != 0;
        }
        if self.unshifted && !nonzero {
            return Ok(None);
        }
        let mut q: i128 = 0;
        for i in 0..self.n {
            if z[i] == 0 {
                continue;
            }
            let row = &self.gram[i * self.n..(i + 1) * self.n];
            let mut acc: i128 = row[i].checked_mul(z[i]).ok_or_else(ovf)?;
            for j in i + 1..self.n {
                if z[j] != 0 {
                    acc = acc.checked_add(row[j].checked_mul(2 * z[j]).ok_or_else(ovf)?).ok_or_else(ovf)?;
                }
            }
            q = q.checked_add(acc.checked_mul(z[i]).ok_or_else(ovf)?).ok_or_else(ovf)?;
        }
        let lhs = q.checked_mul(self.bq).ok_or_else(ovf)?;
        Ok((lhs <= self.cap).then_some(q))
    }
}

impl Enumerator {
    pub fn new(l: &ExactLattice, reduction: Reduction) -> Result<Self> {
        let n = l.dimension();
        let rows = match reduction {
            Reduction::AsGiven => l.basis().clone(),
            Reduction::Lll => lll(l, &default_delta())?.basis().clone(),
            Reduction::DeepInsertion(depth) => deep_lll(l, &default_delta(), depth)?.basis().clone(),
            Reduction::Auto if n >= DEEP_INSERTION_FROM => deep_lll(l, &default_delta(), None)?.basis().clone(),
            Reduction::Auto => lll(l, &default_delta())?.basis().clone(),
        };
        Self::from_rows(l.scale().clone(), rows)
    }

    /// Uses the rows as the enumeration basis without reducing them.
    pub fn from_rows(scale: BigInt, rows: IntMat) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("enumeration needs a square basis".into()));
        }
        let basis = linalg::to_i64(&rows)?;
        let g: IntMat = rows
            .iter()
            .map(|a| rows.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect())
            .collect();
        let (bstar, mu) = gram_schmidt_f64(&g)?;
        let gram = g
            .iter()
            .flatten()
            .map(|x| x.to_i128().ok_or(Error::Overflow("Gram entry")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Enumerator { scale, basis, big_basis: rows, gram, mu, bstar })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    /// Basis rows used for the search.
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Ambient integer coordinates (over `sqrt(scale)`) of `sum_i x_i b_i`.
    pub fn ambient(&self, x: &[i64]) -> Vec<i64> {
        let n = self.dimension();
        let mut v = vec![0i64; n];
        for (xi, row) in x.iter().zip(&self.basis) {
            if *xi != 0 {
                for (o, b) in v.iter_mut().zip(row) {
                    *o += xi * b;
                }
            }
        }
        v
    }

    fn shift_of(&self, target: Option<&CosetTarget>) -> Result<Shift> {
        let n = self.dimension();
        let Some(target) = target else {
            return Ok(Shift { u: vec![0; n], d: 1, t: vec![0.0; n] });
        };
        let v = target.shift().at_scale(&self.scale)?;
        if v.dimension() != n {
            return Err(Error::DimensionMismatch("shift length differs from dimension".into()));
        }
        let inv = linalg::inverse_rational(&self.big_basis).ok_or(Error::Singular)?;
        let rv: Vec<BigRational> =
            v.numerator().iter().map(|x| BigRational::new(x.clone(), v.denominator().clone())).collect();
        let coords = linalg::row_times(&rv, &inv);
        let d = linalg::lcm_of_denominators(coords.iter());
        let d64 = d.to_i64().ok_or(Error::Overflow("shift denominator"))?;
        let u = coords
            .iter()
            .map(|c| {
                let num = (c * BigRational::from_integer(d.clone())).to_integer();
                num.mod_floor(&d).to_i64().ok_or(Error::Overflow("shift coordinate"))
            })
            .collect::<Result<Vec<_>>>()?;
        let t = u.iter().map(|&x| x as f64 / d64 as f64).collect();
        Ok(Shift { u, d: d64, t })
    }

    fn setup<'a>(&'a self, bound: &BigRational, shift: &'a Shift, unshifted: bool) -> Result<(Walk<'a>, Exact<'a>)> {
        if !bound.is_positive() {
            return Err(Error::Precondition("norm bound must be positive".into()));
        }
        let (bp, bq) = rational_parts(bound)?;
        let s = self.scale.to_i128().ok_or(Error::Overflow("scale"))?;
        let d = shift.d as i128;
        let cap = bp
            .checked_mul(s)
            .and_then(|x| x.checked_mul(d * d))
            .ok_or(Error::Overflow("norm bound"))?;
        let limit = bound.to_f64().unwrap_or(f64::INFINITY) * s as f64;
        let walk = Walk { e: self, t: &shift.t, symmetric: unshifted, limit: limit * (1.0 + 1e-10) + 1e-6 };
        let exact = Exact { gram: &self.gram, n: self.dimension(), u: &shift.u, d: shift.d, bq, cap, unshifted };
        Ok((walk, exact))
    }

    fn norm_of(&self, q: i128, d: i64) -> BigRational {
        BigRational::new(BigInt::from(q), &self.scale * BigInt::from(d) * BigInt::from(d))
    }

    /// Counts every vector of `L` (or `shift + L`) with norm at most `bound`.
    pub fn census(&self, bound: &BigRational, target: Option<&CosetTarget>, cfg: &EnumConfig) -> Result<ShortVectorCensus> {
        let shift = self.shift_of(target)?;
        let unshifted = target.is_none();
        let (walk, exact) = self.setup(bound, &shift, unshifted)?;
        let n = self.dimension();
        let mult = if unshifted { 2 } else { 1 };
        let budget = Budget::new(cfg.node_budget);

        let subtree = |prefix: &[i64]| -> Result<BTreeMap<i128, u64>> {
            let mut local: BTreeMap<i128, u64> = BTreeMap::new();
            let mut z = vec![0i128; n];
            walk.run(prefix, 0, &budget, &mut |x| {
                if let Some(q) = exact.check(x, &mut z)? {
                    *local.entry(q).or_insert(0) += mult;
                }
                Ok(Visit::Continue)
            })?;
            Ok(local)
        };

        let merged = if cfg.threads <= 1 || n < 4 {
            subtree(&[])?
        } else {
            let jobs = self.split(&walk, &budget, cfg.threads)?;
            let next = AtomicUsize::new(0);
            let results: Vec<Result<BTreeMap<i128, u64>>> = std::thread::scope(|scope| {
                let handles: Vec<_> = (0..cfg.threads)
                    .map(|_| {
                        scope.spawn(|| {
                            let mut acc: BTreeMap<i128, u64> = BTreeMap::new();
                            loop {
                                let i = next.fetch_add(1, Ordering::Relaxed);
                                let Some(prefix) = jobs.get(i) else { break };
                                for (q, c) in subtree(prefix)? {
                                    *acc.entry(q).or_insert(0) += c;
                                }
                            }
                            Ok(acc)
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("enumeration worker panicked")).collect()
            });
            let mut merged = BTreeMap::new();
            for r in results {
                for (q, c) in r? {
                    *merged.entry(q).or_insert(0) += c;
                }
            }
            merged
        };
        let counts = merged.into_iter().map(|(q, c)| (self.norm_of(q, shift.d), c)).collect();
        Ok(ShortVectorCensus { bound: bound.clone(), counts, nodes: budget.used.load(Ordering::Relaxed) })
    }

    /// Fixes enough top levels to give every worker several subtrees.
    fn split(&self, walk: &Walk<'_>, budget: &Budget, threads: usize) -> Result<Vec<Vec<i64>>> {
        let n = self.dimension();
        let want = 16 * threads;
        let mut depth = 1;
        loop {
            let mut prefixes = Vec::new();
            walk.run(&[], n - depth, budget, &mut |x| {
                prefixes.push(x[n - depth..].to_vec());
                Ok(Visit::Continue)
            })?;
            if prefixes.len() >= want || depth + 2 >= n {
                return Ok(prefixes);
            }
            depth += 1;
        }
    }

    /// Calls `f` with the integer coefficients and exact norm of every vector
    /// of norm at most `bound`. Without a shift, only one of `v` and `-v` is
    /// reported.
    pub fn stream(
        &self,
        bound: &BigRational,
        target: Option<&CosetTarget>,
        node_budget: u64,
        f: &mut dyn FnMut(&[i64], &BigRational),
    ) -> Result<u64> {
        let shift = self.shift_of(target)?;
        let (walk, exact) = self.setup(bound, &shift, target.is_none())?;
        let budget = Budget::new(node_budget);
        let mut z = vec![0i128; self.dimension()];
        walk.run(&[], 0, &budget, &mut |x| {
            if let Some(q) = exact.check(x, &mut z)? {
                f(x, &self.norm_of(q, shift.d));
            }
            Ok(Visit::Continue)
        })?;
        Ok(budget.used.load(Ordering::Relaxed))
    }

    /// Whether some vector has norm at most `bound`; stops at the first hit.
    pub fn exists(&self, bound: &BigRational, target: Option<&CosetTarget>, node_budget: u64) -> Result<bool> {
        let shift = self.shift_of(target)?;
        let (walk, exact) = self.setup(bound, &shift, target.is_none())?;
        let budget = Budget::new(node_budget);
        let mut z = vec![0i128; self.dimension()];
        walk.run(&[], 0, &budget, &mut |x| {
            Ok(match exact.check(x, &mut z)? {
                Some(_) => Visit::Stop,
                None => Visit::Continue,
            })
        })
    }
}

/// One-shot census of `L` or of a coset of `L`.
pub fn enumerate(
    l: &ExactLattice,
    bound: &BigRational,
    target: Option<&CosetTarget>,
    cfg: &EnumConfig,
) -> Result<ShortVectorCensus> {
    Enumerator::new(l, cfg.reduction)?.census(bound, target, cfg)
}

/// Minimum norm and the number of vectors attaining it.
///
/// For integral lattices the bound steps through the integers below the
/// norm of the first reduced vector, so only the final census counts a
/// full shell; otherwise a single census up to that norm is taken.
pub fn min_norm(l: &ExactLattice, cfg: &EnumConfig) -> Result<(BigRational, u64)> {
    let e = Enumerator::new(l, cfg.reduction)?;
    let first = BigRational::new(e.gram[0].into(), e.scale.clone());
    let bound = if l.is_integral() {
        let mut m = BigRational::one();
        while m < first && !e.exists(&m, None, cfg.node_budget)? {
            m += BigRational::one();
        }
        m.min(first)
    } else {
        first
    };
    let census = e.census(&bound, None, cfg)?;
    let (norm, count) = census.minimum().ok_or(Error::Precondition("no nonzero vector below the first basis norm".into()))?;
    Ok((norm.clone(), count))
}

pub fn kissing_number(l: &ExactLattice, cfg: &EnumConfig) -> Result<u64> {
    Ok(min_norm(l, cfg)?.1)
}

/// Exact coefficients of `theta_L` up to `q^max_norm`, by counting.
pub fn theta_head(l: &ExactLattice, max_norm: usize, cfg: &EnumConfig) -> Result<QSeries> {
    let bound = BigRational::from_integer(BigInt::from(max_norm));
    let census = enumerate(l, &bound, None, cfg)?;
    let four = BigRational::from_integer(BigInt::from(4));
    let mut terms = vec![(0usize, BigRational::one())];
    for (norm, &c) in census.counts() {
        let q = norm * &four;
        if !q.is_integer() {
            return Err(Error::Precondition(format!("norm {norm} is not a multiple of 1/4")));
        }
        let e = q.to_integer().to_usize().ok_or(Error::Overflow("theta exponent"))?;
        terms.push((e, BigRational::from_integer(BigInt::from(c))));
    }
    Ok(QSeries::from_terms(max_norm, terms))
}

/// Minimum norm of the shadow of an odd unimodular lattice and the number
/// of shadow vectors attaining it.
///
/// Shadow norms are congruent to `n/4` mod 2, so the bound steps through
/// that class; the search ends by `n/4` at the latest.
pub fn shadow_minimum(l: &ExactLattice, cfg: &EnumConfig) -> Result<(BigRational, u64)> {
    let shadow = l.shadow()?;
    let target = CosetTarget::new(shadow.shift().clone());
    let e = Enumerator::new(l, cfg.reduction)?;
    let n = l.dimension();
    let two = BigRational::from_integer(BigInt::from(2));
    let mut m = BigRational::new(BigInt::from(n % 8), BigInt::from(4));
    if m.is_zero() {
        m = two.clone();
    }
    let last = BigRational::new(BigInt::from(n), BigInt::from(4));
    loop {
        if m > last {
            return Err(Error::Precondition("shadow has no vector of norm at most n/4".into()));
        }
        if e.exists(&m, Some(&target), cfg.node_budget)? {
            let census = e.census(&m, Some(&target), cfg)?;
            let (norm, count) = census.minimum().expect("a vector was found below the bound");
            return Ok((norm.clone(), count));
        }
        m += &two;
    }
}

/// `d_E(C)` of a self-dual `Z_4` code read off the vectors of norm at most 4
/// of its Construction-A lattice. `None` means `d_E > 16`.
pub fn min_euclidean_weight_via_lattice(code: &ZkCode, cfg: &EnumConfig) -> Result<Option<u64>> {
    if code.modulus() != 4 {
        return Err(Error::UnsupportedModulus(code.modulus()));
    }
    let l = construction_a(code)?;
    let e = Enumerator::new(&l, cfg.reduction)?;
    let four = BigInt::from(4);
    // ambient coordinates over sqrt(4) = a * (coordinates over sqrt(s))
    let ratio = BigRational::new(four.clone(), e.scale.clone());
    let a = ratio.to_integer().sqrt();
    if !ratio.is_integer() || &a * &a != ratio.to_integer() {
        return Err(Error::Precondition("lattice scale does not divide 4 by a square".into()));
    }
    let a = a.to_i64().unwrap();
    let mut best: Option<u64> = None;
    e.stream(&BigRational::from_integer(four), None, cfg.node_budget, &mut |x, _| {
        let v: Vec<i64> = e.ambient(x).iter().map(|c| c * a).collect();
        if v.iter().all(|c| c.rem_euclid(4) == 0) {
            return;
        }
        let w: u64 = v.iter().map(|c| (c * c) as u64).sum();
        best = Some(best.map_or(w, |b| b.min(w)));
    })?;
    Ok(best)
}
