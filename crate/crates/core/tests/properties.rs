use cpskit::{parse_formula, Formula, Rational};
use proptest::prelude::*;

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(Formula::Top), "[pqr]".prop_map(Formula::Prop)];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::And),
            ("[12]", "(All|B1)", 0i64..=4, inner)
                .prop_map(|(j, e, k, body)| Formula::believes(j, e, Rational::new(k, 4).unwrap(), body)),
        ]
    })
}

proptest! {
    #[test]
    fn rational_display_round_trips(n in -1000i64..1000, d in 1i64..1000) {
        let x = Rational::new(n, d).unwrap();
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
    }

    #[test]
    fn rational_field_laws(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
        let x = Rational::new(a, b).unwrap();
        let y = Rational::new(c, d).unwrap();
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) / &y, x);
        }
    }

    #[test]
    fn formula_display_round_trips(f in formula()) {
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn parser_never_panics(s in "[pqB!&()\\[\\],0-9/ AlT]{0,24}") {
        let _ = parse_formula(&s);
    }
}
