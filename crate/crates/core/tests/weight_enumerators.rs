use latshadow::binwe::{macwilliams, solve_constraints, ConstraintProblem, WeightEnumerator, DEFAULT_SOLVER_BUDGET};

fn we(n: usize, terms: &[(usize, u128)]) -> WeightEnumerator {
    WeightEnumerator::new(n, terms.iter().copied()).unwrap()
}

#[test]
fn residue_36_dual_head() {
    let d = macwilliams(&we(36, &[(0, 1), (16, 27), (20, 36)]), 6).unwrap();
    let head: Vec<u128> = (0..=7).map(|w| d.count(w)).collect();
    assert_eq!(head, vec![1, 0, 0, 120, 945, 5832, 30576, 130680]);
}

#[test]
fn residue_37_dual_head() {
    let d = macwilliams(&we(37, &[(0, 1), (12, 1), (16, 17), (20, 45)]), 6).unwrap();
    let head: Vec<u128> = (0..=6).map(|w| d.count(w)).collect();
    assert_eq!(head, vec![1, 0, 0, 140, 1080, 6633, 36252]);
}

#[test]
fn unique_enumerator_in_length_36() {
    let p = ConstraintProblem {
        n: 36,
        dim: 6,
        support: vec![16, 20, 24, 28, 32, 36],
        dual_zeros: vec![1, 2],
        forbid_all_ones: true,
    };
    let sols = solve_constraints(&p, DEFAULT_SOLVER_BUDGET).unwrap();
    assert_eq!(sols, vec![we(36, &[(0, 1), (16, 27), (20, 36)])]);
}

#[test]
fn two_enumerators_in_length_37() {
    let p = ConstraintProblem {
        n: 37,
        dim: 6,
        support: (1..=9).map(|i| 4 * i).collect(),
        dual_zeros: vec![1, 2],
        forbid_all_ones: false,
    };
    let mut sols = solve_constraints(&p, DEFAULT_SOLVER_BUDGET).unwrap();
    sols.sort_by_key(|w| w.to_string());
    let mut expected = vec![
        we(37, &[(0, 1), (16, 20), (20, 42), (24, 1)]),
        we(37, &[(0, 1), (12, 1), (16, 17), (20, 45)]),
    ];
    expected.sort_by_key(|w| w.to_string());
    assert_eq!(sols, expected);
}
