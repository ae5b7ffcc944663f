use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;

use latshadow::lattice::{construction_a, ExactLattice};
use latshadow::reduce::{default_delta, lll};
use latshadow::registry;
use latshadow::svp::{min_norm, EnumConfig, Enumerator, Reduction};
use latshadow::zkcode::{negacirculant, ModInt, ModMatrix};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn lattice(name: &str) -> ExactLattice {
    construction_a(&registry::load(name).unwrap().0).unwrap()
}

#[test]
fn registry_lattices_are_odd_unimodular() {
    for inst in registry::instances() {
        let l = construction_a(&inst.code().unwrap()).unwrap();
        assert!(l.is_unimodular(), "{}", inst.name);
        assert!(!l.is_even(), "{}", inst.name);
        assert_eq!(l.dual().unwrap(), l, "{}", inst.name);
        let sd = l.shadow().unwrap();
        assert!(l.is_half_characteristic(sd.shift()).unwrap(), "{}", inst.name);
    }
}

#[test]
fn dual_of_dual_and_even_sublattice() {
    let l = lattice("C36");
    let l0 = l.even_sublattice().unwrap();
    assert!(l0.is_even());
    assert!(l.contains_lattice(&l0));
    assert_eq!(l0.gram_determinant(), rat(4, 1));
    let d = l0.dual().unwrap();
    assert_eq!(d.dual().unwrap(), l0);
    assert!(d.contains_lattice(&l));
}

#[test]
fn c36_minimum_and_reduced_basis() {
    let l = lattice("C36");
    assert_eq!(min_norm(&l, &EnumConfig::default()).unwrap(), (rat(3, 1), 960));
    assert_eq!(lll(&l, &default_delta()).unwrap().first_norm(), rat(3, 1));
}

#[test]
fn c37_minimum() {
    assert_eq!(min_norm(&lattice("C37"), &EnumConfig::default()).unwrap(), (rat(3, 1), 1184));
}

/// The norm-3 vectors of A4(C36) are the vectors `2c` with `c` a weight-3
/// torsion word, each with all eight sign patterns.
#[test]
fn c36_norm_three_vectors_come_from_torsion() {
    let (code, _) = registry::load("C36").unwrap();
    let l = construction_a(&code).unwrap();
    let e = Enumerator::new(&l, Reduction::Lll).unwrap();
    assert_eq!(e.scale(), &BigInt::from(4));
    let mut supports = BTreeSet::new();
    let mut found = 0;
    e.stream(&rat(3, 1), None, u64::MAX, &mut |x, norm| {
        assert_eq!(norm, &rat(3, 1));
        let v = e.ambient(x);
        let support: Vec<usize> = (0..v.len()).filter(|&i| v[i] != 0).collect();
        assert_eq!(support.len(), 3);
        assert!(support.iter().all(|&i| v[i].abs() == 2));
        supports.insert(support);
        found += 2;
    })
    .unwrap();
    assert_eq!(found, 960);
    assert_eq!(supports.len(), 120);
    let torsion = code.torsion().unwrap();
    assert_eq!(torsion.count_binary_words_of_weight(3, 1 << 20).unwrap(), 120);
    let from_torsion: BTreeSet<Vec<usize>> = torsion.binary_supports_of_weight(3, 1 << 20).unwrap().into_iter().collect();
    assert_eq!(from_torsion, supports);
}

#[test]
fn neighbors_of_c36() {
    let l = lattice("C36");
    let [a, b] = l.unimodular_neighbors().unwrap();
    for nb in [&a, &b] {
        assert!(nb.is_unimodular());
        assert_ne!(nb, &l);
        assert_eq!(nb.even_sublattice().unwrap(), l.even_sublattice().unwrap());
    }
    assert_ne!(a, b);
    for nb in [&a, &b] {
        assert_eq!(min_norm(nb, &EnumConfig::default()).unwrap(), (rat(4, 1), 42840));
    }
}

#[test]
fn c44_blocks_are_orthogonal() {
    let inst = registry::instance("C44").unwrap();
    let rows: Vec<Vec<ModInt>> = registry::normalized(inst.raw)
        .lines()
        .map(|l| {
            l.trim_matches(|c| c == '(' || c == ')').split(',').map(|x| ModInt::new(x.trim().parse().unwrap(), 5)).collect()
        })
        .collect();
    let a = negacirculant(&rows[0]).unwrap();
    let b = negacirculant(&rows[1]).unwrap();
    let sum = a.matmul(&a.transpose()).unwrap().add(&b.matmul(&b.transpose()).unwrap()).unwrap();
    assert_eq!(sum, ModMatrix::identity(5, 11).scale(4));
}
