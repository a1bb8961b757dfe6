use proptest::prelude::*;

use entropy_games::harness::{generate, RandomSpec};
use entropy_games::operators::{apply_log_operator, apply_operator, log_value_iterate, value_iterate};
use entropy_games::EntropyGame;

fn game_strategy() -> impl Strategy<Value = EntropyGame> {
    (1usize..=6, 1usize..=3, 1u64..=15, any::<u64>(), any::<bool>(), 1usize..=3).prop_map(
        |(n, m, w, seed, two_player, k)| {
            let spec = if two_player {
                RandomSpec::two_player(n, m, w, seed, k)
            } else {
                RandomSpec::despot_free(n, m, w, seed)
            };
            generate(&spec).unwrap()
        },
    )
}

/// A game with two log-vectors of matching length.
fn game_and_vectors() -> impl Strategy<Value = (EntropyGame, Vec<f64>, Vec<f64>)> {
    game_strategy().prop_flat_map(|g| {
        let n = g.n();
        (Just(g), prop::collection::vec(-6.0f64..6.0, n), prop::collection::vec(-6.0f64..6.0, n))
    })
}

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn operator_preserves_order((g, x, d) in game_and_vectors()) {
        let lo: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        let hi: Vec<f64> = lo.iter().zip(&d).map(|(a, b)| a + b.abs()).collect();
        let (flo, fhi) = (apply_operator(&g, &lo).unwrap(), apply_operator(&g, &hi).unwrap());
        prop_assert!(flo.iter().zip(&fhi).all(|(a, b)| a <= b));
    }

    #[test]
    fn operator_is_positively_homogeneous((g, x, _) in game_and_vectors(), alpha in 1e-3f64..1e3) {
        let big: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        let scaled: Vec<f64> = big.iter().map(|v| alpha * v).collect();
        let (f, fs) = (apply_operator(&g, &big).unwrap(), apply_operator(&g, &scaled).unwrap());
        for (a, b) in fs.iter().zip(&f) {
            prop_assert!((a - alpha * b).abs() <= 1e-12 * a.abs());
        }
    }

    #[test]
    fn log_operator_is_sup_norm_nonexpansive((g, x, y) in game_and_vectors()) {
        let (fx, fy) = (apply_log_operator(&g, &x).unwrap(), apply_log_operator(&g, &y).unwrap());
        prop_assert!(sup_dist(&fx, &fy) <= sup_dist(&x, &y) + 1e-12);
    }

    #[test]
    fn log_operator_commutes_with_constants((g, x, _) in game_and_vectors(), c in -10.0f64..10.0) {
        let shifted: Vec<f64> = x.iter().map(|v| v + c).collect();
        let (fx, fs) = (apply_log_operator(&g, &x).unwrap(), apply_log_operator(&g, &shifted).unwrap());
        for (a, b) in fs.iter().zip(&fx) {
            prop_assert!((a - (b + c)).abs() <= 1e-10);
        }
    }

    #[test]
    fn log_operator_is_conjugate_to_operator((g, x, _) in game_and_vectors()) {
        let fx = apply_log_operator(&g, &x).unwrap();
        let big = apply_operator(&g, &x.iter().map(|v| v.exp()).collect::<Vec<_>>()).unwrap();
        for (a, b) in fx.iter().zip(&big) {
            prop_assert!((a - b.ln()).abs() <= 1e-10);
        }
    }

    #[test]
    fn log_value_iteration_matches_value_iteration(g in game_strategy(), k in 0usize..12) {
        let v = value_iterate(&g, k).unwrap();
        let lv = log_value_iterate(&g, k);
        for (a, b) in lv.iter().zip(&v) {
            prop_assert!((a - b.ln()).abs() <= 1e-10 * (1.0 + b.ln().abs()));
        }
    }
}
