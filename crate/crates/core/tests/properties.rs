use proptest::prelude::*;

use trigonal_sigma::expr::parse_expr;
use trigonal_sigma::grading::{Monomial, VarSpec, WeightedSeries, Window};
use trigonal_sigma::Rational;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::new(n, d))
}

fn series(window: Window) -> impl Strategy<Value = WeightedSeries> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..4, 0u32..6, 0u32..2), rational()), 0..6).prop_map(move |ts| {
        WeightedSeries::from_terms(
            VarSpec::u(),
            ts.into_iter()
                .map(|((a, b, c, d, l), r)| (Monomial::from_parts(&[a, b, c, d], &[0, 0, 0, 0, l]), r)),
            window,
        )
    })
}

proptest! {
    #[test]
    fn rational_field_laws(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn product_rule(f in series(Window::Exact), g in series(Window::Exact), i in 0usize..4) {
        let lhs = f.mul(&g).unwrap().derivative(i).unwrap();
        let rhs = f.derivative(i).unwrap().mul(&g).unwrap().add(&f.mul(&g.derivative(i).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
    }

    #[test]
    fn truncation_commutes_with_products(f in series(Window::Exact), g in series(Window::Exact), w in 0i64..20) {
        let cap = Window::Upto(w);
        let full = f.mul(&g).unwrap().truncate(cap);
        let capped = f.truncate(cap).mul_capped(&g.truncate(cap), cap).unwrap();
        prop_assert!(full.agrees_with(&capped).unwrap());
    }

    #[test]
    fn expr_display_parses_back(a in rational(), b in rational(), c in rational()) {
        let text = format!("({a})*P44 + ({b})*l4*Q2344 - ({c})*P333^2");
        let e = parse_expr(&text).unwrap();
        prop_assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }
}
