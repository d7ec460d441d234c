use num_complex::Complex64;
use proptest::prelude::*;
use yyknot::{LaurentPoly, QExp};

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(
        (
            -5i64..=5,
            -12i64..=12,
            prop::sample::select(vec![1i64, 2, 3, 4, 6, 12]),
        ),
        0..6,
    )
    .prop_map(|terms| {
        terms
            .into_iter()
            .map(|(c, num, den)| LaurentPoly::monomial(c, QExp::new(num, den)))
            .sum()
    })
}

fn base() -> impl Strategy<Value = Complex64> {
    (0.5f64..1.5, -3.0f64..3.0).prop_map(|(r, theta)| Complex64::from_polar(r, theta))
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(-(-a.clone()), a);
    }

    #[test]
    fn display_parses_back(a in poly()) {
        prop_assert_eq!(a.to_string().parse::<LaurentPoly>().unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), q0 in base()) {
        let (ea, eb) = (a.eval_complex(q0).unwrap(), b.eval_complex(q0).unwrap());
        prop_assert!(close((&a + &b).eval_complex(q0).unwrap(), ea + eb));
        prop_assert!(close((&a * &b).eval_complex(q0).unwrap(), ea * eb));
    }

    #[test]
    fn monomials_invert(c in prop::sample::select(vec![-1i64, 1]), num in -20i64..20, den in 1i64..10) {
        let m = LaurentPoly::monomial(c, QExp::new(num, den));
        prop_assert!((&m * &m.inverse().unwrap()).is_one());
    }
}

#[test]
fn sum_of_dimension_terms_at_one() {
    // The unknot value sum_a q^((n-2a)/2) evaluates to n + 1 at q = 1.
    for n in 1..6i64 {
        let v: LaurentPoly = (0..=n).map(|a| LaurentPoly::q(n - 2 * a, 2)).sum();
        assert!(close(
            v.eval_complex(Complex64::new(1.0, 0.0)).unwrap(),
            Complex64::new((n + 1) as f64, 0.0)
        ));
    }
}
