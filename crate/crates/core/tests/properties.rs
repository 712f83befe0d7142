use num_complex::Complex64;
use proptest::prelude::*;
use siegel_dynamics::dynamics::norm_ratio_bound;
use siegel_dynamics::geometry::{dist_ball, dist_siegel, BallPoint, CVector, Chart, Primitive, SiegelAutomorphism, SiegelPoint};
use siegel_dynamics::maps::{evaluate, MapDescriptor, Quadratic};

fn siegel_point() -> impl Strategy<Value = SiegelPoint> {
    (-2.0..2.0f64, -1.5..1.5f64, -1.5..1.5f64, -5.0..5.0f64).prop_map(|(log_t, wr, wi, y)| {
        let w = Complex64::new(wr, wi);
        SiegelPoint::new(Complex64::new(10f64.powf(log_t) + w.norm_sqr(), y), vec![w]).unwrap()
    })
}

fn primitive() -> impl Strategy<Value = Primitive> {
    prop_oneof![
        (-3.0..3.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(y, a, b)| Primitive::Translation {
            y,
            w0: vec![Complex64::new(a, b)]
        }),
        (-1.0..1.0f64).prop_map(|s| Primitive::Dilation { t: 10f64.powf(s) }),
        (0.0..6.28f64).prop_map(|th| Primitive::Rotation {
            omega: vec![Complex64::from_polar(1.0, th)]
        }),
        Just(Primitive::Inversion),
    ]
}

fn ball_point(dim: usize) -> impl Strategy<Value = BallPoint> {
    (prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim), -4.0..0.0f64)
        .prop_filter("non-zero direction", |(v, _)| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|(v, s)| {
            let v: Vec<Complex64> = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
            let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let r = 1.0 - 10f64.powf(s);
            BallPoint::new(CVector::new(v.into_iter().map(|c| c * (r / n)).collect()).unwrap()).unwrap()
        })
}

/// Valid `(A, B, C)`: `|C|² ≤ A` and `|B| ≤ A − |C|²`.
fn self_map() -> impl Strategy<Value = Quadratic> {
    (0.1..4.0f64, 0.0..1.0f64, 0.0..1.0f64, 0.0..6.28f64, 0.0..6.28f64).prop_map(|(a, cs, bs, tb, tc)| {
        let cm = (a * cs).sqrt();
        let bm = (a - cm * cm) * bs;
        Quadratic::new(a, Complex64::from_polar(bm, tb), Complex64::from_polar(cm, tc))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn charts_and_automorphisms_preserve_distance(
        p in siegel_point(),
        q in siegel_point(),
        chain in prop::collection::vec(primitive(), 1..4),
    ) {
        let d = dist_siegel(&p, &q).unwrap();
        let db = dist_ball(&Chart::Standard.to_ball(&p), &Chart::Standard.to_ball(&q)).unwrap();
        prop_assert!((d - db).abs() < 1e-12, "chart: {d} vs {db}");
        let a = SiegelAutomorphism::from_chain(chain).unwrap();
        let da = dist_siegel(&a.apply(&p).unwrap(), &a.apply(&q).unwrap()).unwrap();
        prop_assert!((d - da).abs() < 1e-12, "automorphism: {d} vs {da}");
    }

    #[test]
    fn quadratic_self_maps_stay_in_the_domain(f in self_map(), p in siegel_point()) {
        let img = evaluate(&MapDescriptor::Quadratic(f), &p).unwrap();
        prop_assert!(img.defect() > 0.0);
        // Schwarz-Pick: the map does not expand distances.
        let q = SiegelPoint::axis(1.0, 2).unwrap();
        let fq = evaluate(&MapDescriptor::Quadratic(f), &q).unwrap();
        prop_assert!(dist_siegel(&img, &fq).unwrap() <= dist_siegel(&p, &q).unwrap() + 1e-12);
    }

    #[test]
    fn norm_ratio_bound_holds((z, w) in (1usize..4).prop_flat_map(|d| (ball_point(d), ball_point(d)))) {
        let (lhs, rhs) = norm_ratio_bound(&z, &w).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12), "{lhs} > {rhs}");
    }
}
