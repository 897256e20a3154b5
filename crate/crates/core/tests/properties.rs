use proptest::prelude::*;

use asdk_core::algebra::{ratio, Poly};
use asdk_core::cases::sos_certificate;
use asdk_core::derive::symmetry_group;
use asdk_core::numeric::{self, build_curvature, check_point, symmetry_defect};
use asdk_core::report::{Check, Report, Status};

fn p(n: &str) -> Poly {
    Poly::named(n)
}

fn linear(coeffs: &[(i64, i64)], vars: &[&str]) -> Poly {
    coeffs
        .iter()
        .zip(vars)
        .fold(Poly::zero(), |acc, ((n, d), v)| &acc + &p(v).scale(&ratio(*n, *d)))
}

fn frac() -> impl Strategy<Value = (i64, i64)> {
    (-6i64..=6, 1i64..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadratic_sums_of_squares_are_certified(
        rows in prop::collection::vec(prop::collection::vec(frac(), 3), 1..=3),
        weights in prop::collection::vec(1i64..=5, 3),
    ) {
        let vars = ["lambda1", "lambda2", "lambda3"];
        let f = rows.iter().zip(&weights).fold(Poly::zero(), |acc, (r, w)| {
            let l = linear(r, &vars);
            &acc + &(&l * &l).scale(&ratio(*w, 1))
        });
        let cert = sos_certificate(&f).unwrap();
        prop_assert_eq!(cert.expand(), f);
        prop_assert!(cert.terms.iter().all(|(c, _)| *c > ratio(0, 1)));
    }

    #[test]
    fn shifted_square_quartics_are_certified(c in frac(), d in (1i64..=9, 1i64..=4)) {
        // (x² + c y²)² + d y⁴, the shape of the case-ii quartic.
        let (x2, y2) = (&p("lambda") * &p("lambda"), &p("sigma") * &p("sigma"));
        let q = &x2 + &y2.scale(&ratio(c.0, c.1));
        let f = &(&q * &q) + &(&y2 * &y2).scale(&ratio(d.0, d.1));
        let cert = sos_certificate(&f).unwrap();
        prop_assert_eq!(cert.expand(), f);
    }

    #[test]
    fn certificates_always_re_expand(a in prop::collection::vec(-9i64..=9, 5)) {
        let (x, y) = (p("lambda"), p("sigma"));
        let mono = |i: usize| (0..4 - i).fold(Poly::one(), |m, _| &m * &x) * (0..i).fold(Poly::one(), |m, _| &m * &y);
        let f = (0..5).fold(Poly::zero(), |acc, i| &acc + &mono(i).scale(&ratio(a[i], 1)));
        if let Ok(cert) = sos_certificate(&f) {
            prop_assert_eq!(cert.expand(), f);
        }
    }

    #[test]
    fn curvature_identities_hold_pointwise(l in -2.0f64..=2.0, s in -2.0f64..=2.0, t in 0.0f64..6.3) {
        let pt = build_curvature(l, s);
        prop_assert!(symmetry_defect(&pt) < 1e-14);
        let res = check_point(l, s, &[0.0, t]);
        for (name, v) in res.named() {
            prop_assert!(v < numeric::TOLERANCE, "{} = {:e} at ({}, {})", name, v, l, s);
        }
    }

    #[test]
    fn squared_norm_is_quadratic(l in -2.0f64..=2.0, s in -2.0f64..=2.0) {
        let brute: f64 = build_curvature(l, s).r.iter().flatten().flatten().flatten().map(|x| x * x).sum();
        prop_assert!((brute - (8.0 * l * l + 32.0 * s * s)).abs() < 1e-12);
    }

    #[test]
    fn reports_round_trip(
        items in prop::collection::vec(("[a-z_/0-9]{1,12}", "\\PC{0,20}", any::<bool>(), "\\PC{0,30}", prop::option::of(0.0f64..1e6)), 0..6),
    ) {
        let checks = items
            .into_iter()
            .map(|(id, reference, ok, value, ms)| Check { id, reference, status: Status::from_bool(ok), value, runtime_ms: ms })
            .collect::<Vec<_>>();
        let all = checks.iter().all(|c| c.status.is_pass());
        let r = Report::new("p", checks);
        prop_assert_eq!(r.passed(), all && !r.checks.is_empty());
        prop_assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }
}

#[test]
fn group_elements_square_into_the_group() {
    let g = symmetry_group();
    for x in &g {
        assert!(g.contains(&x.then(x)));
    }
}
