use loopforge::geometry::fixtures::{regular_polygon, resample_closed, surgery_suite};
use loopforge::geometry::{cone_surface, Curve};
use loopforge::potential::{
    check_lemma_interpolation1, check_lemma_pointwise_global, InterpolationConfig, PointSet,
};

fn coarse_suite() -> Vec<(&'static str, Curve)> {
    surgery_suite()
        .into_iter()
        .map(|(name, c)| {
            let coarse = resample_closed(c.dim(), c.nodes(), c.length() / 600.0);
            (name, coarse)
        })
        .collect()
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

#[test]
fn pointwise_global_holds_on_the_suite() {
    let mut heat = Vec::new();
    for (name, c) in coarse_suite() {
        let s = cone_surface(&c, None).unwrap();
        let ps = PointSet::around(&c, 200, 7, 0.02);
        let r = check_lemma_pointwise_global(&c, &s, 0.5, &ps).unwrap();
        assert_eq!(r.samples.len(), 200);
        assert!(r.passed, "{name}: worst margin {}", r.worst_margin);
        heat.push(r.heat_constant);
    }
    let m = median(&heat);
    assert!(heat.iter().all(|c| (c / m - 1.0).abs() <= 0.2), "{heat:?}");
    // The heat ratio cannot exceed one for unit tangents.
    assert!(heat.iter().all(|&c| c <= 1.0 + 1e-6), "{heat:?}");
}

#[test]
fn pointwise_global_is_dilation_invariant() {
    let c = regular_polygon(200, 1.0);
    let s = cone_surface(&c, None).unwrap();
    let ps = PointSet::around(&c, 200, 11, 0.02);
    for alpha in [0.01, 0.9] {
        let a = check_lemma_pointwise_global(&c, &s, alpha, &ps).unwrap();
        let b = check_lemma_pointwise_global(&c.scaled(3.0), &s.dilated(3.0), alpha, &ps.dilated(3.0)).unwrap();
        assert!(a.passed && b.passed, "α={alpha}: {} {}", a.worst_margin, b.worst_margin);
        assert!((a.heat_constant / b.heat_constant - 1.0).abs() < 1e-6);
        assert!((a.worst_margin - b.worst_margin).abs() < 1e-6);
    }
}

#[test]
fn interpolation_holds_with_the_suite_constant() {
    let cfg = InterpolationConfig::default();
    let suite = coarse_suite();
    let sets: Vec<PointSet> = suite.iter().map(|(_, c)| PointSet::around(c, 200, 7, 0.02)).collect();
    let measured: Vec<f64> = suite
        .iter()
        .zip(&sets)
        .map(|((_, c), ps)| check_lemma_interpolation1(c, 0.5, ps, &cfg).unwrap().measured_constant)
        .collect();
    let k = measured.iter().copied().fold(0.0, f64::max);
    assert!(k.is_finite() && k > 0.0);
    let fixed = InterpolationConfig { constant: Some(k), ..cfg };
    for ((name, c), ps) in suite.iter().zip(&sets) {
        let r = check_lemma_interpolation1(&c.scaled(2.0), 0.5, &ps.dilated(2.0), &fixed).unwrap();
        // The curve attaining the suite constant sits at margin zero, up to
        // rounding in the dilated evaluation.
        assert!(r.worst_margin >= -1e-12, "{name}: {}", r.worst_margin);
        assert!(!r.unstable);
    }
}
