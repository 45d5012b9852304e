use approx::assert_relative_eq;
use proptest::prelude::*;

use willmore_core::jet::{jet_elementary, Elementary};
use willmore_core::surface::dsl::{parse_scalar, Expr, Func, Var};
use willmore_core::{ComplexJet2, Extended, Jet2, Real};

fn poly(order: usize, x0: f64, y0: f64, c: &[f64]) -> Jet2 {
    let x = Jet2::var_x(x0, order);
    let y = Jet2::var_y(y0, order);
    (x.scale(c[1]) + y.scale(c[2]) + (x * y).scale(c[3]) + (x * x * x).scale(c[4]) + (y * y).scale(c[5])).add_const(c[0])
}

fn close(a: &Jet2, b: &Jet2, scale: f64) -> bool {
    (*a - *b).max_abs() <= 1e-12 * scale.max(1.0)
}

proptest! {
    #[test]
    fn product_rule(c in prop::collection::vec(-2.0..2.0f64, 12), x0 in -1.0..1.0f64, y0 in -1.0..1.0f64) {
        let f = poly(6, x0, y0, &c[..6]);
        let g = poly(6, x0, y0, &c[6..]);
        let lhs = (f * g).dy().unwrap();
        let rhs = f.truncate(5) * g.dy().unwrap() + g.truncate(5) * f.dy().unwrap();
        prop_assert!(close(&lhs, &rhs, f.max_abs() * g.max_abs()));
    }

    #[test]
    fn chain_rule_through_series(c in prop::collection::vec(-1.0..1.0f64, 6), x0 in -1.0..1.0f64, y0 in -1.0..1.0f64) {
        let f = poly(5, x0, y0, &c);
        let pos = (f * f).add_const(1.0);
        let cases = [
            (jet_elementary(&f, Elementary::Cosh).unwrap(), f.truncate(4).sinh() * f.dx().unwrap()),
            (jet_elementary(&pos, Elementary::Log).unwrap(), pos.truncate(4).recip().unwrap() * pos.dx().unwrap()),
            (jet_elementary(&pos, Elementary::Sqrt).unwrap(), pos.truncate(4).sqrt().unwrap().recip().unwrap().scale(0.5) * pos.dx().unwrap()),
        ];
        for (outer, expected) in cases {
            let d = outer.dx().unwrap();
            prop_assert!(close(&d, &expected, d.max_abs() * pos.max_abs()));
        }
    }

    #[test]
    fn wirtinger_composition_is_quarter_laplacian(c in prop::collection::vec(-2.0..2.0f64, 12), x0 in -1.0..1.0f64, y0 in -1.0..1.0f64) {
        let f = ComplexJet2::new(poly(4, x0, y0, &c[..6]), poly(4, x0, y0, &c[6..])).unwrap();
        let a = f.dz().unwrap().dzbar().unwrap();
        let b = f.dzbar().unwrap().dz().unwrap();
        let l = f.laplacian_flat().unwrap().scale(0.25);
        prop_assert!(close(&a.re, &l.re, 10.0) && close(&a.im, &l.im, 10.0));
        prop_assert!(close(&a.re, &b.re, 10.0) && close(&a.im, &b.im, 10.0));
    }

    #[test]
    fn recip_and_powf_agree(c in prop::collection::vec(-1.0..1.0f64, 6), p in -2.5..2.5f64) {
        let f = (poly(5, 0.2, -0.3, &c) * poly(5, 0.2, -0.3, &c)).add_const(0.5);
        let a = f.powf(p).unwrap();
        let b = (f.ln().unwrap().scale(p)).exp();
        prop_assert!(close(&a, &b, 1e2 * a.max_abs()));
        let r = f.recip().unwrap() * f;
        prop_assert!(close(&r, &Jet2::constant(1.0, 5), 1e2 * f.max_abs()));
    }
}

#[test]
fn extended_matches_double_on_smooth_functions() {
    let x = Jet2::<Extended>::var_x(Extended::c(0.3), 5);
    let y = Jet2::<Extended>::var_y(Extended::c(-0.7), 5);
    let f = (x.sin() * y.cosh() + (x * y).exp()).to_f64();
    let (xd, yd) = (Jet2::var_x(0.3, 5), Jet2::var_y(-0.7, 5));
    let g = xd.sin() * yd.cosh() + (xd * yd).exp();
    for (a, b) in f.coeffs().iter().zip(g.coeffs()) {
        assert_relative_eq!(a, b, epsilon = 1e-14, max_relative = 1e-13);
    }
}

#[test]
fn extended_keeps_digits_where_double_cancels() {
    // (1 + ε) − 1 with ε below double resolution of 1
    let e = Extended::c(1.0) + Extended::c(1e-20);
    assert!(((e - Extended::c(1.0)).f64() - 1e-20).abs() < 1e-30);
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..1000).prop_map(|v| Expr::Num(v as f64 / 8.0)),
        Just(Expr::Var(Var::T)),
        Just(Expr::Var(Var::P)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let funcs = [Func::Sin, Func::Cos, Func::Sinh, Func::Cosh, Func::Exp, Func::Log, Func::Sqrt, Func::Atan];
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner.clone(), -4i32..5).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
            (0usize..8, inner).prop_map(move |(k, a)| Expr::Call(funcs[k], Box::new(a))),
        ]
    })
}

proptest! {
    #[test]
    fn dsl_print_parse_round_trip(e in arb_expr()) {
        let printed = e.to_string();
        prop_assert_eq!(parse_scalar(&printed).unwrap(), e);
    }
}
