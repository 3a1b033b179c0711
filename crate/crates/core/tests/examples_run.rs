// Each example is compiled into this test crate and its `run_example` checked.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));
        }
    };
}

example!(point_report);
example!(weak_engine_map);
example!(strong_coupling_kappa);
example!(nonmarkov_scan);
example!(otto_cycle);
example!(no_engine_certificate);
example!(floquet_coefficients);
example!(config_sweep);

#[test]
fn point_report_is_an_engine() {
    let r = point_report::run_example().unwrap();
    assert!(r.power < 0.0 && r.heat_2 > 0.0);
    assert!((r.power_over_gamma2_sq + 3.4348).abs() < 1e-3);
}

#[test]
fn weak_map_has_engine_region() {
    let s = weak_engine_map::run_example().unwrap();
    assert!(s.engine_cells > 0 && s.engine_cells < s.cells);
    // strongest cell sits near the resonance line
    assert!((s.best.0 + s.best.1 - 1.0).abs() < 0.1);
}

#[test]
fn strong_coupling_engine_is_lost() {
    let v = strong_coupling_kappa::run_example().unwrap();
    assert!(v[0].1 < 0.0);
    assert!(v.last().unwrap().1 > 0.0);
    let best = v.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    assert!(best < 3.0 * v[0].1);
}

#[test]
fn nonmarkov_scan_values() {
    let (min, hot) = nonmarkov_scan::run_example().unwrap();
    assert!((min - 0.36).abs() < 0.03);
    assert!(hot < 0.01);
}

#[test]
fn otto_identity() {
    assert!(otto_cycle::run_example().unwrap() < 1e-12);
}

#[test]
fn certificate_never_violated() {
    assert_eq!(no_engine_certificate::run_example().unwrap(), 0);
}

#[test]
fn floquet_symmetry() {
    assert!(floquet_coefficients::run_example().unwrap() < 1e-10);
}

#[test]
fn config_sweep_csv() {
    let csv = config_sweep::run_example().unwrap();
    assert_eq!(csv.lines().count(), 10);
    assert!(!csv.contains("failed"));
}
