//! Generators and brute-force oracles shared by the property suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use latshadow::binwe::macwilliams;
use latshadow::lattice::{construction_a, ExactLattice, LatticeVector};
use latshadow::linalg;
use latshadow::svp::{enumerate, min_euclidean_weight_via_lattice, min_norm, CosetTarget, EnumConfig};
use latshadow::zkcode::{ModMatrix, ZkCode};

const BOX_CAP: u64 = 400_000;

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// Basis close to a diagonal one, so that its bounding boxes stay small.
pub fn random_lattice(rng: &mut impl Rng, max_dim: usize) -> (i64, Vec<Vec<i64>>, ExactLattice) {
    loop {
        let n = rng.gen_range(1..=max_dim);
        let scale = rng.gen_range(1..=4i64);
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { rng.gen_range(1..=3) } else if rng.gen_bool(0.3) { rng.gen_range(-1..=1) } else { 0 })
                    .collect()
            })
            .collect();
        if let Ok(l) = ExactLattice::from_i64(scale, &rows) {
            return (scale, rows, l);
        }
    }
}

fn gram(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    rows.iter().map(|a| rows.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect()
}

/// Per-coordinate radii of the box holding `{ y : |yB|^2 / s <= bound }`.
fn box_radii(scale: i64, rows: &[Vec<i64>], bound: &BigRational) -> Vec<i64> {
    let g = linalg::to_big(&gram(rows));
    let inv = linalg::inverse_rational(&g).expect("nonsingular");
    (0..rows.len())
        .map(|i| {
            let r2 = bound * BigRational::from_integer(scale.into()) * &inv[i][i];
            r2.to_f64().unwrap().sqrt().floor() as i64 + 1
        })
        .collect()
}

/// Number of points in the box, or `None` when it exceeds `cap`.
pub fn box_size(scale: i64, rows: &[Vec<i64>], bound: &BigRational, cap: u64) -> Option<u64> {
    let mut total: u64 = 1;
    for r in box_radii(scale, rows, bound) {
        total = total.checked_mul(2 * r as u64 + 2)?;
        if total > cap {
            return None;
        }
    }
    Some(total)
}

/// Naive census of `t/2 + L` (`t` in `{0,1}^n`, basis coordinates). The
/// zero vector is only counted when `with_zero` is set.
pub fn box_census(
    scale: i64,
    rows: &[Vec<i64>],
    bound: &BigRational,
    half: &[i64],
    with_zero: bool,
) -> BTreeMap<BigRational, u64> {
    let n = rows.len();
    let g = gram(rows);
    let radii = box_radii(scale, rows, bound);
    let mut out = BTreeMap::new();
    let mut x: Vec<i64> = radii.iter().map(|r| -r - 1).collect();
    loop {
        // z = 2x + t, norm = z G z / (4 s)
        let z: Vec<i64> = x.iter().zip(half).map(|(a, t)| 2 * a + t).collect();
        if with_zero || z.iter().any(|&c| c != 0) {
            let q: i64 = (0..n).map(|i| (0..n).map(|j| z[i] * g[i][j] * z[j]).sum::<i64>()).sum();
            let norm = BigRational::new(q.into(), (4 * scale).into());
            if norm <= *bound {
                *out.entry(norm).or_insert(0) += 1;
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if x[i] < radii[i] {
                x[i] += 1;
                break;
            }
            x[i] = -radii[i] - 1;
            i += 1;
        }
    }
}

/// The ambient vector `(t/2) B` as a shift.
pub fn half_shift(scale: i64, rows: &[Vec<i64>], half: &[i64]) -> LatticeVector {
    let n = rows.len();
    let num: Vec<BigInt> = (0..n).map(|j| (0..n).map(|i| half[i] * rows[i][j]).sum::<i64>().into()).collect();
    LatticeVector::new(num, 2.into(), scale.into()).unwrap()
}

pub fn code(k: u32, rows: &[Vec<i64>]) -> ZkCode {
    ZkCode::new(ModMatrix::new(k, rows).unwrap())
}

pub fn octacode() -> ZkCode {
    code(4, &[vec![1, 0, 0, 0, 3, 1, 2, 1], vec![0, 1, 0, 0, 1, 2, 3, 1], vec![0, 0, 1, 0, 3, 3, 3, 2], vec![0, 0, 0, 1, 2, 3, 1, 1]])
}

fn dot4(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>().rem_euclid(4)
}

/// Generators of `{ c in <gens> : c . x = 0 mod 4 }`.
fn orthogonal_part(gens: &[Vec<i64>], x: &[i64]) -> Vec<Vec<i64>> {
    let phi: Vec<i64> = gens.iter().map(|g| dot4(g, x)).collect();
    let pick = phi.iter().position(|&p| p % 2 == 1).or_else(|| phi.iter().position(|&p| p == 2));
    let Some(j) = pick else { return gens.to_vec() };
    let pj = phi[j];
    let mut out = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if i == j {
            continue;
        }
        // g - t g_j with phi(g) = t phi(g_j)
        let t = if pj % 2 == 1 { (phi[i] * pj).rem_euclid(4) } else { phi[i] / 2 };
        out.push(g.iter().zip(&gens[j]).map(|(a, b)| (a - t * b).rem_euclid(4)).collect());
    }
    let m = if pj % 2 == 1 { 4 } else { 2 };
    out.push(gens[j].iter().map(|b| (m * b).rem_euclid(4)).collect());
    out
}

/// Self-dual `Z_4` code of length `n` reached by a random walk of
/// neighbors from `2 Z_4^n`. A greedy walk never lowers `d_E`.
pub fn random_self_dual_z4(rng: &mut impl Rng, n: usize, steps: usize, greedy: bool) -> ZkCode {
    let d_e = |c: &ZkCode| c.min_euclidean_weight(1 << 16).unwrap().unwrap_or(0);
    let mut current = 4;
    let mut gens: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 2 } else { 0 }).collect()).collect();
    for _ in 0..steps {
        let x: Vec<i64> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        if dot4(&x, &x) != 0 || x.iter().all(|&c| c == 0) {
            continue;
        }
        let mut next = orthogonal_part(&gens, &x);
        next.push(x);
        let c = code(4, &next);
        if c.is_self_dual() && (!greedy || d_e(&c) >= current) {
            if greedy {
                current = d_e(&c);
            }
            gens = next;
        }
    }
    code(4, &gens)
}

/// Octacode, Klein code, direct sums and random-walk codes, all with at
/// most `2^16` words.
pub fn z4_corpus(rng: &mut impl Rng) -> Vec<ZkCode> {
    let mut out = vec![
        octacode(),
        code(4, &[vec![2]]),
        code(4, &[vec![1, 1, 1, 1], vec![0, 2, 0, 2], vec![0, 0, 2, 2]]),
    ];
    for n in 1..=16 {
        for greedy in [false, false, true] {
            out.push(random_self_dual_z4(rng, n, if greedy { 16 * n } else { 4 * n }, greedy));
        }
    }
    out
}

/// The fixed test corpus.
pub fn corpus() -> Vec<ZkCode> {
    z4_corpus(&mut ChaCha8Rng::seed_from_u64(2024))
}

pub fn census_map(
    l: &ExactLattice,
    bound: &BigRational,
    target: Option<&CosetTarget>,
    cfg: &EnumConfig,
) -> BTreeMap<BigRational, u64> {
    enumerate(l, bound, target, cfg).unwrap().counts().clone()
}

/// A random lattice with a bound whose bounding box is small enough to scan.
pub fn scannable(seed: u64) -> (i64, Vec<Vec<i64>>, ExactLattice, BigRational) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let (s, rows, l) = random_lattice(&mut rng, 8);
        let bound = rat(rng.gen_range(2..=20), 4);
        if box_size(s, &rows, &bound, BOX_CAP).is_some() {
            return (s, rows, l, bound);
        }
    }
}

/// Enumeration of the lattice and of a half-shifted coset agree with the box scan.
pub fn check_against_box_search(seed: u64) {
    let (s, rows, l, bound) = scannable(seed);
    let zero = vec![0; rows.len()];
    let expect = box_census(s, &rows, &bound, &zero, false);
    assert_eq!(census_map(&l, &bound, None, &EnumConfig::default()), expect, "seed {seed}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let half: Vec<i64> = (0..rows.len()).map(|_| rng.gen_range(0..2)).collect();
    let target = CosetTarget::new(half_shift(s, &rows, &half));
    let expect = box_census(s, &rows, &bound, &half, true);
    assert_eq!(census_map(&l, &bound, Some(&target), &EnumConfig::default()), expect, "seed {seed}, shift {half:?}");
}

pub fn congruent_mod_2(a: &BigRational, b: &BigRational) -> bool {
    let d = (a - b) / BigRational::from_integer(BigInt::from(2));
    d.is_integer()
}

/// Shadow norms of `Z^n` lie in `n/4 + 2Z`, with `2^n` vectors at `n/4`.
pub fn check_shadow_norms_of_integer_lattices() {
    for n in 1..=12usize {
        let l = ExactLattice::integer_lattice(n);
        let shift = l.shadow().unwrap().shift().clone();
        let quarter_n = rat(n as i64, 4);
        let bound = &quarter_n + rat(2, 1);
        let c = enumerate(&l, &bound, Some(&CosetTarget::new(shift)), &EnumConfig::default()).unwrap();
        assert!(c.counts().keys().all(|m| congruent_mod_2(m, &quarter_n)), "n = {n}");
        assert_eq!(c.count(&quarter_n), 1 << n);
    }
}

pub fn check_shadow_cosets_of_code_lattices(codes: &[ZkCode]) {
    for code in codes {
        let l = construction_a(code).unwrap();
        if l.is_even() {
            continue;
        }
        let n = l.dimension();
        let quarter_n = rat(n as i64, 4);
        let bound = &quarter_n + rat(2, 1);
        let sd = l.shadow().unwrap();
        let mut combined: BTreeMap<BigRational, u64> = BTreeMap::new();
        for rep in sd.shadow_representatives() {
            let c = enumerate(&l, &bound, Some(&CosetTarget::new(rep.clone())), &EnumConfig::default()).unwrap();
            for (m, k) in c.counts() {
                assert!(congruent_mod_2(m, &quarter_n), "n = {n}, norm {m}");
                *combined.entry(m.clone()).or_insert(0) += k;
            }
        }
        assert!(combined.values().all(|k| k % 2 == 0), "n = {n}: {combined:?}");
    }
}

/// MacWilliams applied twice is the identity, and once gives the dual code's enumerator.
pub fn check_macwilliams_involution(seed: u64, cases: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let n = rng.gen_range(1..=14);
        let k = rng.gen_range(1..=n);
        let rows: Vec<Vec<i64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..2)).collect()).collect();
        let c = code(2, &rows);
        let dim = c.dimension().unwrap();
        let we = c.weight_enumerator(1 << 16).unwrap();
        let dual = macwilliams(&we, dim).unwrap();
        assert_eq!(dual, c.dual().unwrap().weight_enumerator(1 << 16).unwrap());
        assert_eq!(macwilliams(&dual, n - dim).unwrap(), we);
    }
}

/// `min{d(C1), 4 d(C2)} <= d_E <= 4 d(C2)`, with an absent distance read as infinite.
pub fn check_euclidean_weight_sandwich(codes: &[ZkCode]) {
    for code in codes {
        let d_e = code.min_euclidean_weight(1 << 16).unwrap().unwrap();
        let d1 = code.residue().unwrap().min_hamming_weight(1 << 16).unwrap().map(|d| d as u64);
        let d2 = code.torsion().unwrap().min_hamming_weight(1 << 16).unwrap().map(|d| 4 * d as u64);
        let lower = d1.unwrap_or(u64::MAX).min(d2.unwrap_or(u64::MAX));
        assert!(lower <= d_e, "n = {}: {lower} > {d_e}", code.length());
        assert!(d2.is_none_or(|u| d_e <= u), "n = {}: {d_e} > {d2:?}", code.length());
    }
}

/// The minimum norm of `A_4(C)` is `min{4, d_E/4}`, and the lattice search finds `d_E`.
pub fn check_min_norm_formula(codes: &[ZkCode]) {
    let four = rat(4, 1);
    for code in codes {
        let d_e = code.min_euclidean_weight(1 << 16).unwrap().unwrap();
        let l = construction_a(code).unwrap();
        let (m, _) = min_norm(&l, &EnumConfig::default()).unwrap();
        let expect = rat(d_e as i64, 4).min(four.clone());
        assert_eq!(m, expect, "n = {}", code.length());
        let via = min_euclidean_weight_via_lattice(code, &EnumConfig::default()).unwrap();
        assert_eq!(via, (d_e <= 16).then_some(d_e), "n = {}", code.length());
    }
}
