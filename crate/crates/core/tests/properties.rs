use dumont_core::counting::{check_dumont, triangular_count, odd_squares_count};
use dumont_core::matrix::{verify_valuation_soundness, MatrixA, MatrixB, MatrixX};
use dumont_core::series::{pochhammer, theta_jacobi, Length, Monomial, QSeries, Sign};
use num_bigint::BigInt;
use proptest::prelude::*;

fn series() -> impl Strategy<Value = QSeries> {
    (-4i64..5, prop::collection::vec(-50i64..50, 0..14), 0i64..16).prop_map(|(v, c, span)| {
        QSeries::from_coefficients(v, c.into_iter().map(BigInt::from).collect(), v + span)
    })
}

fn unit_series() -> impl Strategy<Value = QSeries> {
    (
        -3i64..4,
        prop::bool::ANY,
        prop::collection::vec(-9i64..9, 0..10),
        20i64..40,
    )
        .prop_map(|(v, neg, tail, order)| {
            let mut c = vec![BigInt::from(if neg { -1 } else { 1 })];
            c.extend(tail.into_iter().map(BigInt::from));
            QSeries::from_coefficients(v, c, order)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ring_axioms(f in series(), g in series(), h in series()) {
        prop_assert!((&(&f * &g) * &h).agrees_with(&(&f * &(&g * &h))));
        prop_assert!((&f * &g).agrees_with(&(&g * &f)));
        prop_assert!((&f * &(&g + &h)).agrees_with(&(&(&f * &g) + &(&f * &h))));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn truncation_commutes_with_add(f in series(), g in series(), n in -3i64..12) {
        prop_assert!((&f.truncate(n) + &g.truncate(n)).agrees_with(&(&f + &g).truncate(n)));
    }

    #[test]
    fn truncation_commutes_with_mul(f in series(), g in series(), n in -3i64..12) {
        let lhs = &f.truncate(n) * &g.truncate(n);
        prop_assert!(lhs.agrees_with(&(&f * &g)));
        prop_assert!(lhs.truncation_order() <= (&f * &g).truncation_order());
    }

    #[test]
    fn inverse_of_unit(f in unit_series(), n in 0i64..12) {
        let g = f.invert_unit(n).unwrap();
        if -f.valuation() <= n {
            prop_assert_eq!(g.valuation(), -f.valuation());
        }
        let one = &f * &g;
        prop_assert!(one.truncation_order() >= n + f.valuation().min(0));
        prop_assert!(one.agrees_with(&QSeries::one(n)));
    }

    #[test]
    fn json_round_trip(f in series()) {
        let back: QSeries = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(back.valuation(), f.valuation());
        prop_assert_eq!(back.truncation_order(), f.truncation_order());
        prop_assert_eq!(back.coefficients(), f.coefficients());
    }

    #[test]
    fn theta_matches_window_sum(m in 0u32..9, minus in prop::bool::ANY, order in -20i64..80) {
        let sign = if minus { Sign::Minus } else { Sign::Plus };
        let z = Monomial::new(sign, m);
        let m = i64::from(m);
        let window = order.max(0) + (m * m + 3) / 4 + 1;
        let terms = (-window..=window).map(|n| {
            let s = if minus && n.rem_euclid(2) == 1 { -1 } else { 1 };
            (n * n + m * n, BigInt::from(s))
        });
        let brute = QSeries::from_terms(terms, order);
        let theta = theta_jacobi(z, order);
        prop_assert!(theta.first_mismatch(&brute).is_none());
        prop_assert!(theta.is_zero() || theta.valuation() >= -((m * m + 3) / 4));
    }

    #[test]
    fn dumont_holds(k in 1usize..=6, n in 0u64..=200) {
        prop_assert!(check_dumont(k, n).unwrap().holds);
    }

    #[test]
    fn triangular_bijection(k in 1usize..=4, m in 0u64..=30) {
        prop_assert_eq!(triangular_count(k, m).unwrap(), odd_squares_count(k, 8 * m + k as u64).unwrap());
    }
}

/// Generalized pentagonal numbers m(3m-1)/2 for m in Z, with sign (-1)^m.
fn pentagonal_signs(order: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for m in -40i64..=40 {
        let p = m * (3 * m - 1) / 2;
        if p <= order {
            out.push((p, if m.rem_euclid(2) == 0 { 1 } else { -1 }));
        }
    }
    out.sort();
    out
}

#[test]
fn euler_product_is_pentagonal() {
    let f = pochhammer(Monomial::plus(1), 1, Length::Infinite, 100).unwrap();
    let got: Vec<(i64, i64)> = f
        .terms()
        .map(|(e, c)| (e, i64::try_from(c).unwrap()))
        .collect();
    assert_eq!(got, pentagonal_signs(100));
}

#[test]
fn valuation_soundness_500_samples() {
    let x = MatrixX::new();
    for (name, r) in [
        ("A", verify_valuation_soundness(&MatrixA, 500, 40, 200, 1)),
        ("B", verify_valuation_soundness(&MatrixB, 500, 40, 200, 2)),
        ("X", verify_valuation_soundness(&x, 500, 40, 200, 3)),
    ] {
        assert!(r.pass, "{name}: {:?}", r.first_discrepancy);
    }
}
