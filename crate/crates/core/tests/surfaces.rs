use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;

use willmore_core::geometry::energy::{annulus_energy, box_energies, energies};
use willmore_core::geometry::GridSpec;
use willmore_core::surface::conformal::axis_rotation;
use willmore_core::surface::{apply_conformal, blowup_sequence, parse_immersion, zoo, ConformalMap3, Mobius, ZooSurface};
use willmore_core::Error;

#[test]
fn zoo_charts_are_immersions_away_from_punctures() {
    // in cylinder coordinates the area element of a θ = 2 branch point decays like r⁶
    for name in ZooSurface::NAMES {
        let c = zoo(name, &[]).unwrap();
        let m = c.min_area_element(64, 32, 0.05).unwrap();
        assert!(m > 1e-12, "{name}: {m:e}");
    }
}

#[test]
fn unknown_names_and_bad_parameters_are_rejected() {
    assert!(matches!(zoo("klein-bottle", &[]), Err(Error::UnknownSurface(_))));
    assert!(matches!(zoo("sphere", &[2.0]), Err(Error::InvalidParams { .. })));
    assert!(matches!(zoo("ellipsoid", &[1.0, 2.0]), Err(Error::InvalidParams { .. })));
    assert!("torus-of-revolution(3,1)".parse::<ZooSurface>().is_ok());
}

#[test]
fn dsl_catenoid_matches_zoo_catenoid() {
    let expr = parse_immersion("(cosh(t)*cos(p), cosh(t)*sin(p), t)").unwrap();
    let c = zoo("catenoid", &[]).unwrap();
    for pt in [[0.3, 1.0], [-1.2, 4.0], [2.5, 0.1]] {
        let a = c.point(pt).unwrap();
        let t = willmore_core::Jet2::var_x(pt[0], 0);
        let p = willmore_core::Jet2::var_y(pt[1], 0);
        let b = expr.eval(&t, &p).unwrap().map(|j| j.value());
        for k in 0..3 {
            assert_relative_eq!(a[k], b[k], epsilon = 1e-14);
        }
    }
}

fn arb_map() -> impl Strategy<Value = ConformalMap3> {
    (
        prop::array::uniform3(-3.0..3.0f64),
        prop::array::uniform3(-1.0..1.0f64),
        0.0..PI,
        0.5..2.0f64,
        prop::array::uniform3(-1.0..1.0f64),
    )
        .prop_filter("centre away from the torus", |(c, ..)| {
            let rho = (c[0] * c[0] + c[1] * c[1]).sqrt() - 2f64.sqrt();
            ((rho * rho + c[2] * c[2]).sqrt() - 1.0).abs() > 0.3
        })
        .prop_filter("rotation axis", |(_, a, ..)| a.iter().map(|v| v * v).sum::<f64>() > 0.01)
        .prop_map(|(c, axis, angle, s, v)| {
            let n = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
            ConformalMap3::new(vec![
                Mobius::Inversion(c),
                Mobius::Rotation(axis_rotation(axis.map(|a| a / n), angle)),
                Mobius::Dilation(s),
                Mobius::Translation(v),
            ])
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn apply_conformal_composes(a in arb_map(), b in arb_map()) {
        let c = zoo("clifford-torus-projected", &[]).unwrap();
        let two = apply_conformal(&b, &apply_conformal(&a, &c).unwrap());
        let one = apply_conformal(&a.then(&b), &c);
        if let (Ok(two), Ok(one)) = (two, one) {
            for pt in [[0.4, 1.1], [3.0, 5.5], [6.0, 0.2]] {
                let (x, y) = (two.eval::<f64>(pt, 2), one.eval::<f64>(pt, 2));
                if let (Ok(x), Ok(y)) = (x, y) {
                    for k in 0..3 {
                        let s = x[k].max_abs().max(1.0);
                        prop_assert!((x[k] - y[k]).max_abs() <= 1e-9 * s);
                    }
                }
            }
        }
    }
}

#[test]
fn inversion_through_the_surface_is_rejected() {
    let c = zoo("sphere", &[]).unwrap();
    let theta = ConformalMap3::single(Mobius::Inversion([1.0, 0.0, 0.0])).unwrap();
    assert!(matches!(apply_conformal(&theta, &c), Err(Error::InversionCollision { .. })));
}

#[test]
fn dilation_keeps_the_sphere_energy() {
    let c = zoo("sphere", &[]).unwrap();
    let d = apply_conformal(&ConformalMap3::single(Mobius::Dilation(2.0)).unwrap(), &c).unwrap();
    let g = GridSpec::new(256, 64);
    assert_relative_eq!(energies(&d, g).unwrap().values.w, 4.0 * PI, max_relative = 1e-9);
    assert!(energies(&d, g).unwrap().values.e.abs() < 1e-9);
}

#[test]
fn blowup_annulus_energy_matches_original() {
    let c = zoo("inverted-enneper", &[]).unwrap();
    let radii = [1e-2, 1e-3];
    let charts = blowup_sequence(&c, 0, &radii).unwrap();
    for (k, b) in charts.iter().enumerate() {
        // B₂∖B₁ for Φ_k is B_{r_k}∖B_{r_k/2} for Φ
        let e = box_energies(b, [[0.0, 2f64.ln()], b.domain.y_range()], [4, 16]).unwrap().total_a;
        let direct = annulus_energy(&c, 0, 0.5 * radii[k], GridSpec::new(64, 64)).unwrap();
        assert_relative_eq!(e, direct, max_relative = 1e-9);
    }
    assert!(matches!(blowup_sequence(&c, 0, &[2.0]), Err(Error::RadiusOutOfDomain(_))));
    assert!(matches!(blowup_sequence(&c, 3, &[1e-2]), Err(Error::NoSuchPuncture(3))));
}

#[test]
fn gauss_bonnet_on_the_zoo() {
    for (name, chi) in [("sphere", 2.0), ("ellipsoid", 2.0), ("torus-of-revolution", 0.0), ("clifford-torus-projected", 0.0)] {
        let e = energies(&zoo(name, &[]).unwrap(), GridSpec::new(256, 128)).unwrap();
        assert!((e.values.gauss_int - 2.0 * PI * chi).abs() < 1e-6, "{name}: {}", e.values.gauss_int);
        assert!(e.split_defect() < 1e-8 * e.values.total_a.max(1.0));
    }
}

#[test]
fn clifford_torus_energy() {
    let e = energies(&zoo("clifford-torus-projected", &[]).unwrap(), GridSpec::new(128, 128)).unwrap();
    assert_relative_eq!(e.values.w, 2.0 * PI * PI, max_relative = 1e-10);
}
