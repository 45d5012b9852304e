use willmore_core::geometry::GridSpec;
use willmore_core::report::{is_config_error, parse_domain, run_suite, RadiiSpec, Suite, SuiteConfig, SurfaceSpec, SCHEMA};
use willmore_core::surface::DomainKind;
use willmore_core::Error;

fn zoo_cfg(name: &str, suite: Suite) -> SuiteConfig {
    SuiteConfig::new(SurfaceSpec::Zoo(name.into()), suite)
}

#[test]
fn domains_parse() {
    assert!(matches!(parse_domain("cylinder:-2:3").unwrap().kind, DomainKind::Cylinder { .. }));
    assert!(matches!(parse_domain("torus:2pi:2pi").unwrap().kind, DomainKind::FlatTorus { .. }));
    assert!(matches!(parse_domain("rect:0:1:-1:1").unwrap().kind, DomainKind::Rectangle { .. }));
    assert!(parse_domain("disk:0:10").is_ok());
    for bad in ["cylinder:3:2", "rect:0:1", "sphere:1:2", "torus:0:1", "cylinder:a:b", "rect:0:1:nan:2"] {
        assert!(matches!(parse_domain(bad), Err(Error::Config(_))), "{bad}");
    }
}

#[test]
fn radii_parse() {
    let r: RadiiSpec = "1e-2:0.5:4".parse().unwrap();
    assert_eq!(r.radii(), vec![1e-2, 5e-3, 2.5e-3, 1.25e-3]);
    for bad in ["1e-2:0.5", "0:0.5:4", "1e-2:-1:4", "1e-2:0.5:1", "x:0.5:3"] {
        assert!(bad.parse::<RadiiSpec>().is_err(), "{bad}");
    }
}

#[test]
fn invalid_configurations_are_errors_not_reports() {
    let mut c = zoo_cfg("sphere", Suite::Identities);
    c.jet_order = 7;
    assert!(matches!(run_suite(&c), Err(Error::Config(_))));
    let mut c = zoo_cfg("sphere", Suite::Quartic);
    c.jet_order = 4;
    assert!(run_suite(&c).is_err());
    let mut c = zoo_cfg("sphere", Suite::Convergence);
    c.levels = 2;
    assert!(run_suite(&c).is_err());
    let mut c = zoo_cfg("sphere", Suite::Energies);
    c.grid = GridSpec::new(4, 64);
    assert!(run_suite(&c).is_err());
    let e = run_suite(&zoo_cfg("moebius-strip", Suite::Energies)).unwrap_err();
    assert!(is_config_error(&e));
    let dsl = SurfaceSpec::Dsl { source: "(t, p)".into(), path: None, domain: "rect:0:1:0:1".into() };
    assert!(matches!(run_suite(&SuiteConfig::new(dsl, Suite::Energies)), Err(Error::Arity { .. })));
    assert!(run_suite(&zoo_cfg("sphere", Suite::Branch)).is_err());
}

#[test]
fn reports_are_deterministic_without_timings() {
    let c = zoo_cfg("clifford-torus-projected", Suite::Identities);
    let a = run_suite(&c).unwrap().to_json();
    let b = run_suite(&c).unwrap().to_json();
    assert_eq!(a, b);
    assert!(!a.contains("elapsed_seconds"));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["config"]["suite"], "identities");
    assert_eq!(v["config"]["grid"]["nx"], 256);
}

#[test]
fn dsl_surface_runs_through_a_suite() {
    let src = "(cos(p) / cosh(t), sin(p) / cosh(t), sinh(t) / cosh(t))";
    let dsl = SurfaceSpec::Dsl { source: src.into(), path: None, domain: "cylinder:-7:7".into() };
    let r = run_suite(&SuiteConfig::new(dsl, Suite::Identities)).unwrap();
    assert!(r.all_pass(), "{:?}", r.checks);
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn non_willmore_surface_is_flagged_and_willmore_surface_passes() {
    let r = run_suite(&zoo_cfg("ellipsoid", Suite::Willmore)).unwrap();
    assert!(r.all_pass(), "{:?}", r.checks);
    assert!(r.checks.iter().any(|c| c.name == "residual_detects_non_willmore"));
    assert!(r.checks.iter().any(|c| c.name == "weak_form_vs_fd"));
    let r = run_suite(&zoo_cfg("inverted-catenoid", Suite::Willmore)).unwrap();
    assert!(r.all_pass(), "{:?}", r.checks);
}

#[test]
fn energies_suite_checks_known_values() {
    let r = run_suite(&zoo_cfg("inverted-enneper", Suite::Energies)).unwrap();
    assert!(r.checks.iter().any(|c| c.name == "w_vs_exact"));
    assert!(r.all_pass(), "{:?}", r.checks);
    let t = r.table.unwrap();
    assert_eq!(t.columns.len(), t.rows[0].len());
}

#[test]
fn convergence_reports_orders() {
    let mut c = zoo_cfg("inverted-catenoid", Suite::Convergence);
    c.grid = GridSpec::new(32, 32);
    let r = run_suite(&c).unwrap();
    assert!(r.all_pass(), "{:?}", r.checks);
    assert_eq!(r.table.unwrap().rows.len(), 3);
}
