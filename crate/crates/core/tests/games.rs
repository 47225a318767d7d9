mod common;

use proptest::prelude::*;

use maximin_bandits::environments::{make_k_armed_surrogate, make_singletons, make_tree_class};
use maximin_bandits::games::{gamma, max_col_payoff, min_row_payoff, solve_maximin, verify_certificate};
use maximin_bandits::{gap_matrix, FunctionClass};

fn class_strategy() -> impl Strategy<Value = FunctionClass> {
    (1usize..=4, 1usize..=5)
        .prop_flat_map(|(arms, functions)| {
            prop::collection::vec(prop::collection::vec(0u8..=10, arms), functions)
        })
        .prop_map(|rows| {
            FunctionClass::new(
                rows.into_iter()
                    .map(|r| r.into_iter().map(|v| v as f64 / 10.0).collect())
                    .collect(),
            )
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn volume_is_certified(class in class_strategy(), alpha in 0.0f64..0.6) {
        let cert = gamma(&class, alpha, 1e-9).unwrap();
        prop_assert!(verify_certificate(&class, alpha, &cert));
        // uniform play over arms, or over one best arm per function, both work
        let floor = 1.0 / class.num_arms().min(class.num_functions()) as f64;
        prop_assert!(cert.value >= floor - 1e-9);
        prop_assert!(cert.value <= 1.0 + 1e-12);
        for f in 0..class.num_functions() {
            prop_assert!(common::coverage(&class, f, &cert.p_star, alpha) >= cert.value - 1e-9);
        }
    }

    #[test]
    fn volume_matches_grid_search(class in class_strategy(), alpha in 0.0f64..0.6) {
        let cert = gamma(&class, alpha, 1e-9).unwrap();
        let b: Vec<Vec<f64>> = (0..class.num_functions())
            .map(|f| (0..class.num_arms())
                .map(|a| if common::near_optimal(&class, f, a, alpha) { 1.0 } else { 0.0 })
                .collect())
            .collect();
        let grid = common::grid_maximin(&b, 24);
        prop_assert!(grid <= cert.value + 1e-9);
        prop_assert!(cert.value - grid <= class.num_arms() as f64 / 24.0);
    }

    #[test]
    fn volume_is_monotone_in_accuracy(class in class_strategy(), a in 0.0f64..0.5, extra in 0.0f64..0.5) {
        let tight = gamma(&class, a, 1e-9).unwrap().value;
        let loose = gamma(&class, a + extra, 1e-9).unwrap().value;
        prop_assert!(loose >= tight - 1e-9);
    }

    #[test]
    fn adding_a_function_never_raises_volume(class in class_strategy(), row in prop::collection::vec(0u8..=10, 4), alpha in 0.0f64..0.5) {
        let row: Vec<f64> = row.into_iter().take(class.num_arms()).map(|v| v as f64 / 10.0).collect();
        let bigger = class.with_function(row).unwrap();
        let before = gamma(&class, alpha, 1e-9).unwrap().value;
        let after = gamma(&bigger, alpha, 1e-9).unwrap().value;
        prop_assert!(after <= before + 1e-9);
    }

    #[test]
    fn strong_duality_on_real_matrices(rows in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 1..5)) {
        let sol = solve_maximin(&rows, 1e-9).unwrap();
        let lower = min_row_payoff(&rows, sol.p_star.probs());
        let upper = max_col_payoff(&rows, &sol.dual);
        prop_assert!((upper - lower).abs() <= 1e-8);
        prop_assert!((sol.value - lower).abs() <= 1e-8);
        let grid = common::grid_maximin(&rows, 30);
        prop_assert!(grid <= sol.value + 1e-9);
        prop_assert!(sol.value - grid <= 0.4);
    }
}

#[test]
fn closed_forms() {
    for k in 1..=8 {
        let v = gamma(&make_k_armed_surrogate(k).unwrap(), 0.5, 1e-9).unwrap().value;
        assert!((v - 1.0 / k as f64).abs() < 1e-9);
        let v = gamma(&make_singletons(k).unwrap(), 0.5, 1e-9).unwrap().value;
        assert!((v - 1.0 / k as f64).abs() < 1e-9);
    }
    for (d, n) in [(1, 1), (2, 3), (4, 2)] {
        let (class, _) = make_tree_class(d, n).unwrap();
        let v = gamma(&class, 0.1, 1e-9).unwrap().value;
        assert!((v - 1.0 / ((1 << d) * n) as f64).abs() < 1e-9);
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let class = make_k_armed_surrogate(3).unwrap();
    let mut cert = gamma(&class, 0.5, 1e-9).unwrap();
    cert.value = 0.5;
    assert!(!verify_certificate(&class, 0.5, &cert));
}

#[test]
fn gap_matrix_agrees_with_direct_comparison() {
    let class = FunctionClass::new(vec![vec![0.1, 0.5, 0.45], vec![0.9, 0.2, 0.85]]).unwrap();
    let g = gap_matrix(&class, 0.05).unwrap();
    for f in 0..2 {
        for a in 0..3 {
            assert_eq!(g.get(f, a), common::near_optimal(&class, f, a, 0.05));
        }
    }
}
