use tallest_column_web::{characteristic_roots, Column};

#[test]
fn clamped_column() {
    let c = Column::new("clamped", -1e-4, 200).unwrap();
    assert!((c.lambda() - 134.1944).abs() < 0.2);
    assert!((c.t_stop() + 1.7114).abs() < 0.01);
    assert_eq!(c.s().len(), 200);
    assert_eq!(c.area().len(), 200);
    let theta = c.theta();
    assert!(theta.iter().any(|t| (t.abs() - 1.0).abs() < 1e-12));
    let t = c.trajectory_t();
    let g = c.event_residual();
    assert_eq!(t.len(), g.len());
    assert!(g.last().unwrap().abs() < 1e-8);
    assert!(c.trajectory_component(4).iter().all(|v| v.is_nan()));
    assert!(c.extended().contains(&1));
}

#[test]
fn oracle_and_residuals() {
    let c = Column::new("hinged", -1e-4, 400).unwrap();
    let lam = c.oracle_lambda(500).unwrap();
    assert!((lam - c.lambda()).abs() < 1e-2 * c.lambda());
    assert!(c.optimality_residual() < 1e-2);
    assert!(c.torque_residual() < 1e-3);
    assert!(c.oracle_lambda(10).is_err());
}

#[test]
fn errors_are_strings() {
    assert!(Column::new("pinned", -1e-4, 100).unwrap_err().contains("pinned"));
    assert!(Column::new("clamped", 1e-4, 100).unwrap_err().contains("crossing"));
}

#[test]
fn roots() {
    let r = characteristic_roots();
    assert_eq!(r.len(), 4);
    assert!((r[0] + 5.5208).abs() < 1e-4);
}
