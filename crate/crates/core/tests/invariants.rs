use loopforge::fields::{divergence, loop_current, smirnov_superpose, Boundary, FieldGrid};
use loopforge::geometry::fixtures::{folded_loop, random_star, trefoil};
use loopforge::geometry::{cone_surface, curve_chain, measure_of, Curve};
use loopforge::pde::{riesz_potential_spectral, riesz_transform, SpectralGrid};
use loopforge::surgery::{surgery_decompose, SurgeryConfig};
use loopforge::Point;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn star() -> impl Strategy<Value = Curve> {
    (any::<u64>(), 1..6usize, 0.05..0.45f64).prop_map(|(seed, modes, amp)| random_star(seed, modes, amp))
}

fn random_grid(seed: u64, dim: usize, n: usize, ncomp: usize) -> FieldGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = FieldGrid::centered(dim, n, 0.3, Point::zeros(), ncomp).unwrap();
    for v in g.data.iter_mut() {
        *v = rng.gen_range(-1.0..1.0);
    }
    g
}

fn inner(a: &FieldGrid, b: &FieldGrid) -> f64 {
    a.data.iter().zip(&b.data).map(|(x, y)| x * y).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn arclength_parameterization(c in star(), u in 0.0..1.0f64) {
        let cum = c.cumulative();
        prop_assert!(cum.windows(2).all(|w| w[1] > w[0]));
        prop_assert!((cum[cum.len() - 1] - c.length()).abs() <= 1e-12 * c.length());
        let s = u * c.length();
        prop_assert!((c.tangent_at(s).unwrap().norm() - 1.0).abs() <= 1e-9);
        prop_assert_eq!(c.point_at(0.0), c.point_at(c.length()));
    }

    #[test]
    fn closed_loops_pair_to_zero_with_constants(c in star(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let m = measure_of(&c);
        let mass: f64 = m.segments.iter().map(|s| s.weight.abs() * s.length()).sum();
        prop_assert!((m.total_mass() - mass).abs() <= 1e-12 * mass);
        let pairing = m.pair(|_| Point::new(a, b, 0.0));
        prop_assert!(pairing.abs() <= 1e-12 * mass * (a.abs() + b.abs() + 1.0));
    }

    #[test]
    fn cone_boundary_is_the_curve(c in star(), ax in -0.5..0.5f64, ay in -0.5..0.5f64) {
        let s = cone_surface(&c, Some(Point::new(ax, ay, 0.7))).unwrap();
        let sum: f64 = s.triangles.iter().map(|t| t.area).sum();
        prop_assert!((s.total_area() - sum).abs() <= 1e-12 * sum);
        prop_assert_eq!(s.boundary_chain(), curve_chain(&c));
    }

    #[test]
    fn spectral_round_trip(seed in any::<u64>(), n in 16..24usize) {
        let g = random_grid(seed, 3, n, 1);
        let sg = SpectralGrid::new(&g);
        let back = sg.inverse(sg.forward(&g.data));
        let err = back.iter().zip(&g.data).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        prop_assert!(err <= 1e-12, "{}", err);
    }

    #[test]
    fn riesz_multipliers_are_symmetric(seed in any::<u64>(), axis in 0..3usize, alpha in 0.2..2.8f64) {
        // R_i is anti-self-adjoint and I_α self-adjoint on real fields.
        let f = random_grid(seed, 3, 16, 1);
        let g = random_grid(seed ^ 0x9e37, 3, 16, 1);
        let scale = inner(&f, &f).sqrt() * inner(&g, &g).sqrt();
        let (rf, rg) = (riesz_transform(&f, axis).unwrap(), riesz_transform(&g, axis).unwrap());
        prop_assert!((inner(&rf, &g) + inner(&f, &rg)).abs() <= 1e-10 * scale);
        let (pf, pg) = (riesz_potential_spectral(&f, alpha).unwrap(), riesz_potential_spectral(&g, alpha).unwrap());
        let s = inner(&pf, &pf).sqrt() * inner(&g, &g).sqrt();
        prop_assert!((inner(&pf, &g) - inner(&f, &pg)).abs() <= 1e-10 * s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Violating pairs are searched on a lattice finer than `δ` and refined,
    /// so near-ties can resolve to a different pair after scaling. Pieces
    /// then match to within `λδ` rather than to rounding.
    #[test]
    fn surgery_commutes_with_dilation(lambda in 0.25..4.0f64) {
        let c = folded_loop();
        let base = surgery_decompose(&c, &SurgeryConfig::new(0.05)).unwrap();
        let cfg = SurgeryConfig { delta: Some(lambda * base.delta), ..SurgeryConfig::new(0.05) };
        let big = surgery_decompose(&c.scaled(lambda), &cfg).unwrap();
        prop_assert_eq!(big.pieces.len(), base.pieces.len());
        for (a, b) in big.records.iter().zip(&base.records) {
            prop_assert_eq!(a.kind, b.kind);
        }
        for (p, q) in big.pieces.iter().zip(&base.pieces) {
            prop_assert!((p.length() - lambda * q.length()).abs() <= big.delta);
        }
        for (a, b) in big.ball_growth_certified.iter().zip(&base.ball_growth_certified) {
            prop_assert!((a / b - 1.0).abs() <= 1e-3, "{} {}", a, b);
        }
    }

    #[test]
    fn loop_currents_are_solenoidal(c in star(), w in 2usize..5) {
        let c = Curve::new(3, c.nodes().to_vec(), true, Default::default()).unwrap();
        let t = FieldGrid::centered(3, 48, 0.125, c.centroid(), 3).unwrap();
        let f = loop_current(&c, w as f64 * t.h, &t).unwrap();
        prop_assert!(f.data.iter().all(|v| v.is_finite()));
        prop_assert!(f.l1_norm() > 0.0);
        let d = divergence(&f, Boundary::ZeroPadded).unwrap();
        prop_assert!(d.relative <= 1e-10, "{}", d.relative);
    }
}

#[test]
fn loop_current_mass_approaches_length() {
    // ‖F_w‖₁ → |Γ| as the mollifier narrows relative to the curvature radius.
    let c = trefoil();
    let masses: Vec<f64> = [0.25, 0.125, 0.0625]
        .iter()
        .map(|&h| {
            let n = (8.0 / h) as usize;
            let t = FieldGrid::centered(3, n, h, Point::zeros(), 3).unwrap();
            loop_current(&c, 2.0 * h, &t).unwrap().l1_norm() / c.length()
        })
        .collect();
    let gaps: Vec<f64> = masses.iter().map(|m| (m - 1.0).abs()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{masses:?}");
    assert!(gaps[2] < 0.01, "{masses:?}");
}

#[test]
fn superposition_is_additive() {
    let a = random_star(1, 3, 0.3);
    let b = random_star(2, 3, 0.3).translated(&Point::new(4.0, 0.0, 0.0));
    let (a, b) = (
        Curve::new(3, a.nodes().to_vec(), true, Default::default()).unwrap(),
        Curve::new(3, b.nodes().to_vec(), true, Default::default()).unwrap(),
    );
    let t = FieldGrid::centered(3, 56, 0.2, Point::new(2.0, 0.0, 0.0), 3).unwrap();
    let w = 0.4;
    let both = smirnov_superpose(&[a.clone(), b.clone()], &[0.5, 2.0], w, &t).unwrap();
    let mut sum = loop_current(&a, w, &t).unwrap();
    for v in sum.data.iter_mut() {
        *v *= 0.5;
    }
    sum.axpy(2.0, &loop_current(&b, w, &t).unwrap()).unwrap();
    let err = both.data.iter().zip(&sum.data).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    assert!(err <= 1e-12 * sum.max_abs(), "{err}");
    // Disjoint supports: the masses add.
    assert!((both.l1_norm() - 0.5 * loop_current(&a, w, &t).unwrap().l1_norm() - 2.0 * loop_current(&b, w, &t).unwrap().l1_norm()).abs() <= 1e-10 * both.l1_norm());
}
