use num_complex::Complex64;
use siegel_dynamics::conjugation::{default_grid, special_backward_construct, ConjugationRun, VariantKind};
use siegel_dynamics::dynamics::{backward_orbit, multiplier_at_boundary, SolverPolicy};
use siegel_dynamics::export::{backward_orbit_csv, to_json_pretty, BackwardOrbitReport};
use siegel_dynamics::geometry::{BoundaryPoint, CVector, SiegelPoint};
use siegel_dynamics::maps::{classify, fixtures, MapDescriptor, MapType};

#[test]
fn descriptors_round_trip_through_json() {
    for f in [
        fixtures::quadpol(),
        fixtures::lifted_2z(),
        fixtures::diagonal_expandable(0.4),
        fixtures::blaschke_product(),
    ] {
        let text = serde_json::to_string(&f).unwrap();
        let back: MapDescriptor = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }
}

/// Classification, multiplier and conjugation at a repelling fixed point
/// away from the origin: the point `(1, 1)` on the curve of the lifted map.
#[test]
fn lifted_map_at_a_curve_point() {
    let f = fixtures::lifted_2z();
    let r = classify(&f).unwrap();
    assert_eq!(r.map_type, Some(MapType::Hyperbolic));
    let q = BoundaryPoint::siegel(CVector::from_reals(&[1.0, 1.0]).unwrap()).unwrap();
    let alpha = multiplier_at_boundary(&f, &q, 0.5, 40).unwrap().value;
    assert!((alpha - 2.0).abs() < 1e-9);

    let s = special_backward_construct(&f, &q, alpha, 1.0, 20, &SolverPolicy::default()).unwrap();
    assert!(s.orbit.steps.iter().all(|d| (d - 1.0 / 3.0).abs() < 1e-9));
    let run = ConjugationRun::new(&f, s, VariantKind::Basic, default_grid(2)).unwrap();
    assert!(run.residuals.iter().all(|&r| r < 1e-9), "{:?}", run.residuals);
}

#[test]
fn orbit_exports_agree() {
    let z0 = SiegelPoint::new(Complex64::new(2.0, 0.0), vec![Complex64::new(1.0, 0.0)]).unwrap();
    let o = backward_orbit(&fixtures::lifted_2z(), &z0, 0.34, 10, &SolverPolicy::default()).unwrap();
    let csv_text = backward_orbit_csv(&o).unwrap();
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), o.len());
    let json: serde_json::Value = serde_json::from_str(&to_json_pretty(&BackwardOrbitReport::from(&o)).unwrap()).unwrap();
    for (k, row) in rows.iter().enumerate() {
        let t: f64 = row[5].parse().unwrap();
        assert_eq!(t, o.defects[k]);
        let jt: f64 = json["defects"][k].as_str().unwrap().parse().unwrap();
        assert_eq!(jt, t);
    }
}
