use serde::{Deserialize, Serialize};

use crate::geometry::Curve;
use crate::Point;

/// An arc of a closed curve: it starts at `t`, runs forward for `arc` and
/// ends at `t_prime` (reduced mod `L`, so `t_prime < t` when it wraps).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcPair {
    pub t: f64,
    pub t_prime: f64,
    pub arc: f64,
}

impl ArcPair {
    fn new(total: f64, t: f64, arc: f64) -> Self {
        let t = t.rem_euclid(total);
        Self { t, t_prime: (t + arc).rem_euclid(total), arc }
    }
}

/// `⌈ε⁻¹⌉`, robust to `1/ε` landing a rounding error above an integer.
pub fn ceil_inv(epsilon: f64) -> usize {
    let x = 1.0 / epsilon;
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r {
        r as usize
    } else {
        x.ceil() as usize
    }
}

struct Samples {
    h: f64,
    pts: Vec<Point>,
}

fn samples(curve: &Curve, delta: f64) -> Samples {
    let total = curve.length();
    let h0 = (delta / 4.0).min(curve.mean_edge_length());
    let n = ((total / h0).ceil() as usize).max(4);
    let h = total / n as f64;
    let pts = (0..n).map(|i| curve.point_at(i as f64 * h)).collect();
    Samples { h, pts }
}

/// The shortest arc `[s, s + d]` with `d ≥ δ` and `|γ(s) − γ(s + d)| ≤ ε d`,
/// or `None` when the curve satisfies `|γ(s) − γ(t)| ≥ ε d_Γ(s, t)` for all
/// `d_Γ ≥ δ` (up to sampling).
///
/// Pairs are first scanned on a uniform grid of spacing `min(δ/4, mean edge)`
/// using that the chord is 1-Lipschitz in `d`: from a non-violating `d`, no
/// violation occurs before `d + (c − εd)/(1 + ε)`. The minimal sampled pair
/// is then refined by bisection to `10⁻³ δ`. Ties go to the smaller `s`.
pub fn violating_pair(curve: &Curve, epsilon: f64, delta: f64) -> Option<ArcPair> {
    if !curve.is_closed() {
        return None;
    }
    let total = curve.length();
    if delta > 0.5 * total {
        return None;
    }
    let Samples { h, pts } = samples(curve, delta);
    let n = pts.len();
    let k_min = ((delta / h) - 1e-9).ceil().max(1.0) as usize;
    let k_max = n / 2;
    let mut best: Option<(usize, usize)> = None;
    for i in 0..n {
        let limit = best.map_or(k_max, |(k, _)| (k - 1).min(k_max));
        let mut k = k_min;
        while k <= limit {
            let d = k as f64 * h;
            let c = (pts[i] - pts[(i + k) % n]).norm();
            let excess = c - epsilon * d;
            if excess <= 0.0 {
                best = Some((k, i));
                break;
            }
            k += ((excess / ((1.0 + epsilon) * h)).floor() as usize).max(1);
        }
    }
    let (k, i) = best?;
    Some(refine_pair(curve, epsilon, delta, i as f64 * h, k as f64 * h, h))
}

fn refine_pair(curve: &Curve, epsilon: f64, delta: f64, s0: f64, d0: f64, h: f64) -> ArcPair {
    let total = curve.length();
    let g = |s: f64, d: f64| (curve.point_at_wrapped(s) - curve.point_at_wrapped(s + d)).norm() - epsilon * d;
    let tol = 1e-3 * delta;
    let mut best = (d0, s0);
    let steps = 16;
    for m in 0..=steps {
        let s = s0 - h + 2.0 * h * m as f64 / steps as f64;
        let lo_bound = delta.max(d0 - 2.0 * h);
        let hi_bound = (d0 + h).min(0.5 * total);
        if lo_bound > hi_bound {
            continue;
        }
        if g(s, lo_bound) <= 0.0 {
            if lo_bound < best.0 {
                best = (lo_bound, s);
            }
            continue;
        }
        // Walk up to the first non-positive value, then bisect.
        let sub = h / 8.0;
        let mut prev = lo_bound;
        let mut found = None;
        let mut d = lo_bound + sub;
        while d <= hi_bound + 1e-15 {
            if d >= best.0 {
                break;
            }
            if g(s, d) <= 0.0 {
                found = Some(d);
                break;
            }
            prev = d;
            d += sub;
        }
        if let Some(mut hi) = found {
            let mut lo = prev;
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if g(s, mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            if hi < best.0 || (hi == best.0 && s < best.1) {
                best = (hi, s);
            }
        }
    }
    ArcPair::new(total, best.1, best.0)
}

/// The first window of more than `⌈ε⁻¹⌉` consecutive corners that can be
/// enclosed by an interval `(t, t')` with `t' − t < δ/ε` and
/// `|γ(t) − γ(t')| < δ`, scanning windows in order of their first corner.
/// Within the window the shortest such interval is returned; its endpoints
/// sit just outside the first and last corner.
pub fn corner_spacing_violation(curve: &Curve, epsilon: f64, delta: f64) -> Option<ArcPair> {
    if !curve.is_closed() {
        return None;
    }
    let params = curve.corner_params();
    let m = params.len();
    let k = ceil_inv(epsilon) + 1;
    if m < k {
        return None;
    }
    let total = curve.length();
    let span_max = delta / epsilon;
    let h = (delta / 4.0).min(curve.mean_edge_length());
    let unwrap = |idx: usize| params[idx % m] + (idx / m) as f64 * total;
    for a in 0..m {
        let b = a + k - 1;
        let (ca, cb) = (unwrap(a), unwrap(b));
        if b >= a + m || cb - ca >= span_max {
            continue;
        }
        // Keep the endpoints off the neighbouring corners.
        let prev_gap = ca - if a == 0 { params[m - 1] - total } else { unwrap(a - 1) };
        let next_gap = unwrap(b + 1) - cb;
        let eta = (0.25 * prev_gap).min(0.25 * next_gap).min(h).min(0.25 * curve.min_edge_length());
        let mut best: Option<(f64, f64)> = None;
        let mut t = ca - eta;
        while cb - t < span_max && best.map_or(true, |(arc, _)| cb + eta - t < arc) {
            let x = curve.point_at_wrapped(t);
            let mut tp = cb + eta;
            while tp - t < span_max && best.map_or(true, |(arc, _)| tp - t < arc) {
                let c = (x - curve.point_at_wrapped(tp)).norm();
                if c < delta {
                    best = Some((tp - t, t));
                    break;
                }
                tp += ((c - delta) / h).floor().max(1.0) * h;
            }
            if t <= ca - total {
                break;
            }
            t -= h;
        }
        if let Some((arc, t)) = best {
            return Some(ArcPair::new(total, t, arc));
        }
    }
    None
}

/// Number of registered corners strictly inside the forward arc.
pub fn corners_in_arc(curve: &Curve, pair: &ArcPair) -> usize {
    let total = curve.length();
    curve
        .corner_params()
        .into_iter()
        .filter(|&c| {
            let rel = (c - pair.t).rem_euclid(total);
            rel > 0.0 && rel < pair.arc
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures::{circle, corner_packed, peanut};
    use crate::surgery::find_delta;

    #[test]
    fn ceil_inv_values() {
        assert_eq!(ceil_inv(0.05), 20);
        assert_eq!(ceil_inv(0.02), 50);
        assert_eq!(ceil_inv(0.03), 34);
        assert_eq!(ceil_inv(1.0 / 7.0), 7);
    }

    #[test]
    fn circle_has_no_violation() {
        let c = circle(1.0);
        let delta = find_delta(&c, 1.0 / 3.0).unwrap();
        for eps in [0.01, 0.05, 0.099] {
            assert!(violating_pair(&c, eps, delta).is_none());
        }
        assert!(corner_spacing_violation(&c, 0.05, delta).is_none());
    }

    #[test]
    fn peanut_waist() {
        let w = 0.02;
        let c = peanut(w);
        let delta = find_delta(&c, 1.0 / 3.0).unwrap();
        let eps = 0.05;
        let p = violating_pair(&c, eps, delta).expect("waist violates");
        let x = c.point_at(p.t);
        let y = c.point_at(p.t_prime);
        assert!(p.arc >= delta);
        assert!((x - y).norm() <= eps * p.arc + 1e-12);
        // The pair straddles the waist.
        assert!(x.x.abs() < 0.3 && y.x.abs() < 0.3 && x.y * y.y < 0.0, "{x:?} {y:?}");
        // A chord this short over an arc this long is only possible across the waist.
        assert!(p.arc * eps >= w * 0.99);
    }

    #[test]
    fn corner_window_found() {
        let c = corner_packed();
        let delta = find_delta(&c, 1.0 / 3.0).unwrap();
        let p = corner_spacing_violation(&c, 0.05, delta).expect("packed corners violate");
        assert!(p.arc < delta / 0.05);
        assert!((c.point_at_wrapped(p.t) - c.point_at_wrapped(p.t + p.arc)).norm() < delta);
        assert_eq!(corners_in_arc(&c, &p), 21);
        // Fifty corners are allowed at ε = 0.02, and only 25 are present.
        assert!(corner_spacing_violation(&c, 0.02, delta).is_none());
    }

    #[test]
    fn exactly_allowed_corner_count_is_fine() {
        // ⌈1/ε⌉ = 25 packed corners at ε = 0.04 do not violate.
        let c = corner_packed();
        let delta = find_delta(&c, 1.0 / 3.0).unwrap();
        assert!(corner_spacing_violation(&c, 0.04, delta).is_none());
        assert!(corner_spacing_violation(&c, 1.0 / 24.0, delta).is_some());
    }
}
