use grpd_conv::torus::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn element(theta: Theta) -> impl Strategy<Value = TorusElement> {
    prop::collection::vec(((-6i64..=6, -6i64..=6), (-2.0f64..2.0, -2.0f64..2.0)), 1..20).prop_map(
        move |terms| {
            TorusElement::from_terms(
                theta,
                terms.into_iter().map(|(km, (re, im))| (km, Complex64::new(re, im))),
            )
            .unwrap()
        },
    )
}

fn theta() -> impl Strategy<Value = Theta> {
    prop_oneof![
        Just(Theta::golden()),
        (1i64..7, 2i64..9).prop_map(|(p, q)| Theta::Rational(p, q)),
        (0.0f64..1.0).prop_map(Theta::Float),
    ]
}

fn triple() -> impl Strategy<Value = (TorusElement, TorusElement, TorusElement)> {
    theta().prop_flat_map(|t| (element(t), element(t), element(t)))
}

fn scale_of(a: &TorusElement) -> f64 {
    a.l1_norm().max(1.0)
}

proptest! {
    #[test]
    fn multiplication_is_associative((a, b, c) in triple()) {
        let left = torus_mul(&torus_mul(&a, &b).unwrap(), &c).unwrap();
        let right = torus_mul(&a, &torus_mul(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_diff(&right) < 1e-12 * scale_of(&left));
    }

    #[test]
    fn star_is_an_involutive_antihomomorphism((a, b, _c) in triple()) {
        prop_assert!(torus_star(&torus_star(&a)).max_diff(&a) < 1e-12);
        let lhs = torus_star(&torus_mul(&a, &b).unwrap());
        let rhs = torus_mul(&torus_star(&b), &torus_star(&a)).unwrap();
        prop_assert!(lhs.max_diff(&rhs) < 1e-12 * scale_of(&lhs));
    }

    #[test]
    fn averages_are_unital_and_contractive((a, _b, _c) in triple(), n in 0u32..40) {
        let one = TorusElement::one(a.theta);
        prop_assert_eq!(phi1_partial(&one, n), one.clone());
        prop_assert_eq!(phi2_partial(&one, n), one);
        prop_assert!(phi1_partial(&a, n).l1_norm() <= a.l1_norm() + 1e-12);
        prop_assert!(phi2_partial(&a, n).l1_norm() <= a.l1_norm() + 1e-12);
    }

    #[test]
    fn averages_are_linear((a, b, _c) in triple(), n in 0u32..20) {
        let two = Complex64::new(2.0, -1.0);
        let lhs = phi2_partial(&a.add(&b.scale(two)).unwrap(), n);
        let rhs = phi2_partial(&a, n).add(&phi2_partial(&b, n).scale(two)).unwrap();
        prop_assert!(lhs.max_diff(&rhs) < 1e-12 * scale_of(&lhs));
    }
}

#[test]
fn closed_form_matches_literal_conjugation() {
    let th = Theta::golden();
    let a = TorusElement::parse(th, "u^2v^-3 + 0.5u^-1v + 2v^4 - u^5").unwrap();
    for n in [0, 1, 3, 10] {
        assert!(phi1_partial(&a, n).max_diff(&phi1_literal(&a, n)) < 1e-10);
        assert!(phi2_partial(&a, n).max_diff(&phi2_literal(&a, n)) < 1e-10);
    }
}

#[test]
fn rational_theta_leaves_central_modes() {
    let th = Theta::Rational(1, 3);
    let a = TorusElement::parse(th, "1+u^3").unwrap();
    let r = simplicity_experiment(&a, &[1, 10, 100, 1000], 100, 1e-3).unwrap();
    assert!(r.non_decaying_modes.contains(&(3, 0)));
    assert!(r.first_below_tolerance.is_none());
    assert!(r.rows.iter().all(|row| (row.residual - 2.0).abs() < 1e-12));
}

#[test]
fn clock_shift_sizes() {
    for n in 2..=6 {
        assert!(clock_shift_check(n, 1e-10).holds);
    }
}

#[test]
fn crossed_product_q3_and_q4() {
    for q in 3..=4 {
        let c = crossed_product_bridge(q);
        assert!(c.tables_equal && c.conjugation_identity, "{c:?}");
    }
}
