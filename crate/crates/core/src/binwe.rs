//! Binary weight enumerators, the MacWilliams transform, and a small
//! integer feasibility search over candidate enumerators.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Hamming weight distribution of a binary code of length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightEnumerator {
    n: usize,
    counts: BTreeMap<usize, u128>,
}

impl WeightEnumerator {
    pub fn new<C: Into<u128>>(n: usize, counts: impl IntoIterator<Item = (usize, C)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (w, c) in counts {
            if w > n {
                return Err(Error::InconsistentEnumerator(format!("weight {w} exceeds length {n}")));
            }
            let c: u128 = c.into();
            if c > 0 {
                *map.entry(w).or_insert(0) += c;
            }
        }
        Ok(WeightEnumerator { n, counts: map })
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn count(&self, w: usize) -> u128 {
        self.counts.get(&w).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u128)> + '_ {
        self.counts.iter().map(|(&w, &c)| (w, c))
    }

    pub fn total(&self) -> u128 {
        self.counts.values().sum()
    }

    /// `log2` of the total when it is a power of two.
    pub fn dimension(&self) -> Option<usize> {
        let t = self.total();
        t.is_power_of_two().then(|| t.trailing_zeros() as usize)
    }

    /// Smallest nonzero weight present.
    pub fn min_weight(&self) -> Option<usize> {
        self.counts.keys().copied().find(|&w| w > 0)
    }

    pub fn is_doubly_even(&self) -> bool {
        self.counts.keys().all(|w| w % 4 == 0)
    }

    /// `1 + 27y^16 + 36y^20` style rendering.
    pub fn polynomial(&self) -> String {
        if self.counts.is_empty() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .iter()
            .map(|(w, c)| match (w, c) {
                (0, c) => c.to_string(),
                (1, 1) => "y".into(),
                (1, c) => format!("{c}y"),
                (w, 1) => format!("y^{w}"),
                (w, c) => format!("{c}y^{w}"),
            })
            .collect();
        terms.join(" + ")
    }
}

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "we n={}", self.n)?;
        for (w, c) in self.iter() {
            write!(f, " {w}:{c}")?;
        }
        Ok(())
    }
}

impl FromStr for WeightEnumerator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut it = s.split_whitespace();
        if it.next() != Some("we") {
            return Err(Error::parse(1, "weight enumerator must start with `we`"));
        }
        let n = it
            .next()
            .and_then(|f| f.strip_prefix("n="))
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or_else(|| Error::parse(1, "missing `n=<length>`"))?;
        let mut counts = Vec::new();
        let mut last = None;
        for f in it {
            let (w, c) = f
                .split_once(':')
                .and_then(|(w, c)| Some((w.parse::<usize>().ok()?, c.parse::<u128>().ok()?)))
                .ok_or_else(|| Error::parse(1, format!("malformed term `{f}`")))?;
            if last.is_some_and(|l| l >= w) {
                return Err(Error::parse(1, "weights must be strictly ascending"));
            }
            last = Some(w);
            counts.push((w, c));
        }
        WeightEnumerator::new(n, counts)
    }
}

/// `K_j(w)` for all `0 <= j, w <= n`, indexed `[j][w]`.
fn krawtchouk(n: usize) -> Vec<Vec<BigInt>> {
    let mut binom = vec![vec![BigInt::zero(); n + 1]; n + 1];
    for a in 0..=n {
        binom[a][0] = BigInt::one();
        for b in 1..=a {
            binom[a][b] = &binom[a - 1][b - 1] + &binom[a - 1][b];
        }
    }
    (0..=n)
        .map(|j| {
            (0..=n)
                .map(|w| {
                    (0..=j.min(w))
                        .filter(|&i| j - i <= n - w)
                        .map(|i| {
                            let t = &binom[w][i] * &binom[n - w][j - i];
                            if i % 2 == 1 {
                                -t
                            } else {
                                t
                            }
                        })
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// Dual enumerator `2^{-dim} (1+y)^n W((1-y)/(1+y))`, with exact integer
/// output or an error when the input cannot be a code enumerator.
pub fn macwilliams(we: &WeightEnumerator, dim: usize) -> Result<WeightEnumerator> {
    if we.total() != 1u128 << dim {
        return Err(Error::InconsistentEnumerator(format!(
            "total {} differs from 2^{dim}",
            we.total()
        )));
    }
    let n = we.length();
    let k = krawtchouk(n);
    let scale = BigInt::one() << dim;
    let mut out = Vec::new();
    for (j, row) in k.iter().enumerate() {
        let s: BigInt = we.iter().map(|(w, c)| &row[w] * BigInt::from(c)).sum();
        let (q, r) = s.div_rem(&scale);
        if !r.is_zero() || q.is_negative() {
            return Err(Error::InconsistentEnumerator(format!(
                "dual coefficient at weight {j} is {s}/2^{dim}"
            )));
        }
        let c = q
            .to_u128()
            .ok_or(Error::Overflow("dual weight enumerator coefficient"))?;
        out.push((j, c));
    }
    WeightEnumerator::new(n, out)
}

/// Search for binary enumerators with prescribed support and vanishing dual
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintProblem {
    pub n: usize,
    pub dim: usize,
    /// Weights allowed to carry nonzero words.
    pub support: Vec<usize>,
    /// Weights at which the dual enumerator must vanish.
    pub dual_zeros: Vec<usize>,
    /// Force the coefficient of `y^n` to zero.
    pub forbid_all_ones: bool,
}

/// Default node budget for [`solve_constraints`].
pub const DEFAULT_SOLVER_BUDGET: u64 = 2_000_000_000;

type Rat = BigRational;

fn rat(x: impl Into<BigInt>) -> Rat {
    Rat::from_integer(x.into())
}

/// A pivot variable written as `constant + sum coeff_f * free_f`.
struct PivotRow {
    var: usize,
    constant: Rat,
    coeffs: Vec<Rat>,
}

/// Every nonnegative integer enumerator meeting the problem's conditions.
///
/// The linear conditions are solved for the highest-weight variables; the
/// remaining ones are enumerated by branch and bound, pruning as soon as a
/// solved variable can no longer land in `[0, 2^dim - 1]`.
pub fn solve_constraints(problem: &ConstraintProblem, budget: u64) -> Result<Vec<WeightEnumerator>> {
    let n = problem.n;
    if problem.dim > 62 {
        return Err(Error::Precondition("dimension too large".into()));
    }
    let mut vars: Vec<usize> = problem.support.clone();
    vars.sort_unstable();
    vars.dedup();
    if let Some(&w) = vars.iter().find(|&&w| w == 0 || w > n) {
        return Err(Error::Precondition(format!("support weight {w} outside [1, {n}]")));
    }
    if let Some(&w) = vars.iter().find(|&&w| w % 4 != 0) {
        return Err(Error::Precondition(format!("support weight {w} is not doubly even")));
    }
    if let Some(&j) = problem.dual_zeros.iter().find(|&&j| j > n) {
        return Err(Error::Precondition(format!("dual weight {j} exceeds {n}")));
    }
    if problem.forbid_all_ones {
        vars.retain(|&w| w != n);
    }
    let nonzero_words = (1u128 << problem.dim) - 1;
    let kr = krawtchouk(n);

    // Equations: sum x_w = 2^dim - 1; for each j: sum K_j(w) x_w = -K_j(0).
    let v = vars.len();
    let mut eqs: Vec<(Vec<Rat>, Rat)> = vec![(vec![rat(1); v], rat(nonzero_words))];
    for &j in &problem.dual_zeros {
        eqs.push((vars.iter().map(|&w| Rat::from_integer(kr[j][w].clone())).collect(), -Rat::from_integer(kr[j][0].clone())));
    }

    // Gauss-Jordan choosing pivots from the highest weights.
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (equation, variable)
    let mut r = 0;
    for col in (0..v).rev() {
        let Some(p) = (r..eqs.len()).find(|&i| !eqs[i].0[col].is_zero()) else {
            continue;
        };
        eqs.swap(r, p);
        let inv = eqs[r].0[col].recip();
        for x in eqs[r].0.iter_mut() {
            *x *= &inv;
        }
        eqs[r].1 *= &inv;
        for i in 0..eqs.len() {
            if i != r && !eqs[i].0[col].is_zero() {
                let f = eqs[i].0[col].clone();
                let (prow, prhs) = eqs[r].clone();
                for (x, y) in eqs[i].0.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
                eqs[i].1 -= &f * &prhs;
            }
        }
        pivots.push((r, col));
        r += 1;
        if r == eqs.len() {
            break;
        }
    }
    if eqs[r..].iter().any(|(_, rhs)| !rhs.is_zero()) {
        return Ok(Vec::new());
    }
    let pivot_vars: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free: Vec<usize> = (0..v).filter(|c| !pivot_vars.contains(c)).collect();
    let rows: Vec<PivotRow> = pivots
        .iter()
        .map(|&(e, c)| PivotRow {
            var: c,
            constant: eqs[e].1.clone(),
            coeffs: free.iter().map(|&f| -eqs[e].0[f].clone()).collect(),
        })
        .collect();

    let scaled = rows.iter().map(ScaledRow::new).collect::<Result<Vec<_>>>()?;
    let mut search = Search {
        rows: &scaled,
        free_count: free.len(),
        total: nonzero_words as i128,
        nodes: 0,
        budget,
        assignment: vec![0; free.len()],
        solutions: Vec::new(),
    };
    let values: Vec<i128> = scaled.iter().map(|r| r.constant).collect();
    search.descend(0, nonzero_words as i128, &values)?;

    let mut out = Vec::new();
    for (free_vals, pivot_vals) in search.solutions {
        let mut x = vec![0u128; v];
        for (i, &f) in free.iter().enumerate() {
            x[f] = free_vals[i];
        }
        for (row, val) in rows.iter().zip(pivot_vals) {
            x[row.var] = val;
        }
        let mut counts = vec![(0usize, 1u128)];
        counts.extend(vars.iter().zip(&x).map(|(&w, &c)| (w, c)));
        let we = WeightEnumerator::new(n, counts)?;
        // Re-substitution: dual must be a genuine nonnegative integral enumerator.
        let Ok(dual) = macwilliams(&we, problem.dim) else {
            continue;
        };
        if problem.dual_zeros.iter().all(|&j| dual.count(j) == 0) {
            out.push(we);
        }
    }
    Ok(out)
}

/// A pivot row multiplied through by the common denominator of its entries.
struct ScaledRow {
    denom: i128,
    constant: i128,
    coeffs: Vec<i128>,
    /// `max(0, coeffs[l..])` and `min(0, coeffs[l..])` per level `l`.
    suffix_hi: Vec<i128>,
    suffix_lo: Vec<i128>,
}

impl ScaledRow {
    fn new(row: &PivotRow) -> Result<Self> {
        let denom = row
            .coeffs
            .iter()
            .chain(std::iter::once(&row.constant))
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scale = |c: &Rat| {
            (c * Rat::from_integer(denom.clone()))
                .to_integer()
                .to_i128()
                .ok_or(Error::Overflow("scaled enumerator constraint"))
        };
        let coeffs = row.coeffs.iter().map(scale).collect::<Result<Vec<_>>>()?;
        let mut suffix_hi = vec![0; coeffs.len() + 1];
        let mut suffix_lo = vec![0; coeffs.len() + 1];
        for l in (0..coeffs.len()).rev() {
            suffix_hi[l] = suffix_hi[l + 1].max(coeffs[l]);
            suffix_lo[l] = suffix_lo[l + 1].min(coeffs[l]);
        }
        Ok(ScaledRow {
            denom: denom.to_i128().ok_or(Error::Overflow("scaled enumerator constraint"))?,
            constant: scale(&row.constant)?,
            coeffs,
            suffix_hi,
            suffix_lo,
        })
    }
}

struct Search<'a> {
    rows: &'a [ScaledRow],
    free_count: usize,
    total: i128,
    nodes: u64,
    budget: u64,
    assignment: Vec<u128>,
    solutions: Vec<(Vec<u128>, Vec<u128>)>,
}

impl Search<'_> {
    /// Can every pivot still reach `[0, total]` with the free variables from
    /// index `level` on summing to at most `remaining`?
    fn feasible(&self, level: usize, remaining: i128, values: &[i128]) -> bool {
        self.rows.iter().zip(values).all(|(row, &val)| {
            val + remaining * row.suffix_hi[level] >= 0
                && val + remaining * row.suffix_lo[level] <= self.total * row.denom
        })
    }

    fn descend(&mut self, level: usize, remaining: i128, values: &[i128]) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { what: "weight enumerator search", limit: self.budget });
        }
        if !self.feasible(level, remaining, values) {
            return Ok(());
        }
        if level == self.free_count {
            let mut pivots = Vec::with_capacity(values.len());
            for (row, &val) in self.rows.iter().zip(values) {
                if val < 0 || val % row.denom != 0 || val / row.denom > self.total {
                    return Ok(());
                }
                pivots.push((val / row.denom) as u128);
            }
            self.solutions.push((self.assignment.clone(), pivots));
            return Ok(());
        }
        let mut next = values.to_vec();
        for x in 0..=remaining {
            self.assignment[level] = x as u128;
            self.descend(level + 1, remaining - x, &next)?;
            for (nv, row) in next.iter_mut().zip(self.rows) {
                *nv += row.coeffs[level];
            }
        }
        self.assignment[level] = 0;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn we(n: usize, terms: &[(usize, u128)]) -> WeightEnumerator {
        WeightEnumerator::new(n, terms.iter().copied()).unwrap()
    }

    #[test]
    fn krawtchouk_small_values() {
        let k = krawtchouk(4);
        // K_1(w) = n - 2w
        assert_eq!(k[1], [4, 2, 0, -2, -4].map(BigInt::from).to_vec());
        // K_j(0) = C(n, j)
        assert_eq!((0..=4).map(|j| k[j][0].clone()).collect::<Vec<_>>(), [1, 4, 6, 4, 1].map(BigInt::from).to_vec());
    }

    #[test]
    fn full_space_dualizes_to_zero_code() {
        let full = we(5, &[(0, 1), (1, 5), (2, 10), (3, 10), (4, 5), (5, 1)]);
        assert_eq!(macwilliams(&full, 5).unwrap(), we(5, &[(0, 1)]));
        assert_eq!(macwilliams(&we(5, &[(0, 1)]), 0).unwrap(), full);
    }

    #[test]
    fn repetition_and_parity_codes_are_dual() {
        let rep = we(6, &[(0, 1), (6, 1)]);
        let even = macwilliams(&rep, 1).unwrap();
        assert_eq!(even, we(6, &[(0, 1), (2, 15), (4, 15), (6, 1)]));
    }

    #[test]
    fn inconsistent_inputs_are_rejected() {
        assert!(matches!(
            macwilliams(&we(3, &[(0, 1), (1, 1), (2, 2)]), 2),
            Err(Error::InconsistentEnumerator(_))
        ));
        assert!(matches!(macwilliams(&we(4, &[(0, 1), (1, 2)]), 1), Err(Error::InconsistentEnumerator(_))));
    }

    #[test]
    fn text_round_trip() {
        let w = we(36, &[(0, 1), (16, 27), (20, 36)]);
        assert_eq!(w.to_string(), "we n=36 0:1 16:27 20:36");
        assert_eq!(w.to_string().parse::<WeightEnumerator>().unwrap(), w);
        assert_eq!(w.polynomial(), "1 + 27y^16 + 36y^20");
        assert!("we n=3 2:1 1:1".parse::<WeightEnumerator>().is_err());
        assert!("wx n=3".parse::<WeightEnumerator>().is_err());
        assert!("we n=3 5:1".parse::<WeightEnumerator>().is_err());
    }

    #[test]
    fn single_word_doubly_even_enumerators() {
        let p = ConstraintProblem { n: 8, dim: 1, support: vec![4, 8], dual_zeros: vec![], forbid_all_ones: false };
        let sols = solve_constraints(&p, 1000).unwrap();
        // one codeword of weight 4 or of weight 8: two enumerators
        assert_eq!(sols, vec![we(8, &[(0, 1), (8, 1)]), we(8, &[(0, 1), (4, 1)])]);
    }

    #[test]
    fn solver_validates_input() {
        let p = ConstraintProblem { n: 8, dim: 1, support: vec![6], dual_zeros: vec![], forbid_all_ones: false };
        assert!(matches!(solve_constraints(&p, 10), Err(Error::Precondition(_))));
    }

    #[test]
    fn solver_respects_budget() {
        let p = ConstraintProblem { n: 24, dim: 4, support: vec![4, 8, 12, 16], dual_zeros: vec![], forbid_all_ones: false };
        assert!(matches!(solve_constraints(&p, 3), Err(Error::BudgetExceeded { .. })));
    }
}
