//! Quadrature helpers shared by the potential and field modules.

use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

const MAX_CACHED_ORDER: usize = 32;

static RULES: OnceLock<Vec<Vec<(f64, f64)>>> = OnceLock::new();

/// Gauss–Legendre nodes and weights on `[-1, 1]` for `order` in `1..=32`.
pub fn gauss_legendre(order: usize) -> &'static [(f64, f64)] {
    assert!(
        (1..=MAX_CACHED_ORDER).contains(&order),
        "Gauss-Legendre order {order} not cached"
    );
    let rules = RULES.get_or_init(|| {
        (0..=MAX_CACHED_ORDER)
            .map(|n| {
                if n < 2 {
                    // gauss-quad needs at least two nodes; the one-point rule is the midpoint.
                    vec![(0.0, 2.0)]
                } else {
                    GaussLegendre::new(n)
                        .expect("valid Gauss-Legendre order")
                        .as_node_weight_pairs()
                        .to_vec()
                }
            })
            .collect()
    });
    &rules[order]
}

/// Fixed-order Gauss–Legendre integral of `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, order: usize) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    gauss_legendre(order)
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Globally adaptive bisection with a 10-point Gauss–Legendre rule compared
/// against the sum over both halves.
///
/// Converges when the difference is below `max(rel_tol * |I|, abs_tol)`.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> f64 {
    const ORDER: usize = 10;
    const MAX_DEPTH: u32 = 40;
    let whole = integrate(&mut f, a, b, ORDER);
    let mut stack = vec![(a, b, whole, 0u32)];
    let mut total = 0.0;
    let scale = whole.abs();
    while let Some((lo, hi, coarse, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = integrate(&mut f, lo, mid, ORDER);
        let right = integrate(&mut f, mid, hi, ORDER);
        let fine = left + right;
        let tol = (rel_tol * scale.max(fine.abs())).max(abs_tol);
        if (fine - coarse).abs() <= tol || depth >= MAX_DEPTH {
            total += fine;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    total
}

/// Degree-5 seven-point rule on the reference triangle, as barycentric
/// coordinates and weights summing to one.
pub const TRIANGLE_RULE: [([f64; 3], f64); 7] = [
    ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 0.225),
    ([0.059_715_871_789_770, 0.470_142_064_105_115, 0.470_142_064_105_115], 0.132_394_152_788_506),
    ([0.470_142_064_105_115, 0.059_715_871_789_770, 0.470_142_064_105_115], 0.132_394_152_788_506),
    ([0.470_142_064_105_115, 0.470_142_064_105_115, 0.059_715_871_789_770], 0.132_394_152_788_506),
    ([0.797_426_985_353_087, 0.101_286_507_323_456, 0.101_286_507_323_456], 0.125_939_180_544_827),
    ([0.101_286_507_323_456, 0.797_426_985_353_087, 0.101_286_507_323_456], 0.125_939_180_544_827),
    ([0.101_286_507_323_456, 0.101_286_507_323_456, 0.797_426_985_353_087], 0.125_939_180_544_827),
];
