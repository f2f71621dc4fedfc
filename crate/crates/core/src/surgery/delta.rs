use crate::geometry::Curve;
use crate::{Error, Result};

/// Runs of consecutive edges not separated by a registered corner. Each run
/// is `(first edge, edge count, wraps)`; only a corner-free closed curve has
/// a wrapping run.
fn smooth_runs(curve: &Curve) -> Vec<(usize, usize, bool)> {
    let n = curve.num_edges();
    let corners = curve.corners();
    if corners.is_empty() {
        return vec![(0, n, curve.is_closed())];
    }
    let mut starts: Vec<usize> = corners.iter().copied().filter(|&c| c < n).collect();
    if !curve.is_closed() && starts.first() != Some(&0) {
        starts.insert(0, 0);
    }
    let mut runs = Vec::new();
    for (k, &s) in starts.iter().enumerate() {
        let end = match starts.get(k + 1) {
            Some(&e) => e,
            None if curve.is_closed() => starts[0] + n,
            None => n,
        };
        if end > s {
            runs.push((s, end - s, false));
        }
    }
    runs
}

/// Largest `δ` such that edge tangents at intrinsic distance below `δ`
/// (within one smooth run) differ by at most `oscillation_bound`.
///
/// The polyline tangent is constant on edges, so the supremum is the
/// smallest arclength gap between two edges of a run whose tangents differ
/// by more than the bound. Runs without any such pair impose no limit; the
/// result is capped at half the curve length.
pub fn find_delta(curve: &Curve, oscillation_bound: f64) -> Result<f64> {
    if !(oscillation_bound > 0.0) {
        return Err(Error::InvalidArgument(format!("oscillation bound {oscillation_bound}")));
    }
    let n = curve.num_edges();
    let total = curve.length();
    let cum = curve.cumulative();
    let tangents: Vec<_> = (0..n).map(|i| curve.edge_tangent(i)).collect();
    // Arclength from the end of edge `i` to the start of edge `j`, with
    // indices counted along the run and reduced mod n.
    let gap = |i: usize, j: usize| -> f64 {
        let end_i = cum[(i % n) + 1] + if i >= n { total } else { 0.0 };
        let start_j = cum[j % n] + (j / n) as f64 * total;
        start_j - end_i
    };
    let mut best = 0.5 * total;
    for (first, len, wraps) in smooth_runs(curve) {
        for a in 0..len {
            let i = first + a;
            let limit = if wraps { len } else { len - a };
            for b in 1..limit {
                let j = i + b;
                let g = gap(i, j);
                if g >= best {
                    break;
                }
                if (tangents[i % n] - tangents[j % n]).norm() > oscillation_bound {
                    if b == 1 {
                        return Err(Error::NoValidDelta(format!(
                            "tangents of adjacent edges {} and {} differ by more than {oscillation_bound}",
                            i % n,
                            j % n
                        )));
                    }
                    best = g;
                    break;
                }
            }
        }
    }
    Ok(best)
}

/// Largest tangent difference between edges of one smooth run whose gap is
/// below `delta`; `find_delta` guarantees this is at most the bound.
pub fn max_oscillation(curve: &Curve, delta: f64) -> f64 {
    let n = curve.num_edges();
    let total = curve.length();
    let cum = curve.cumulative();
    let tangents: Vec<_> = (0..n).map(|i| curve.edge_tangent(i)).collect();
    let mut worst: f64 = 0.0;
    for (first, len, wraps) in smooth_runs(curve) {
        for a in 0..len {
            let i = first + a;
            let limit = if wraps { len } else { len - a };
            for b in 1..limit {
                let j = i + b;
                let end_i = cum[(i % n) + 1] + if i >= n { total } else { 0.0 };
                let start_j = cum[j % n] + (j / n) as f64 * total;
                if start_j - end_i >= delta {
                    break;
                }
                worst = worst.max((tangents[i % n] - tangents[j % n]).norm());
            }
        }
    }
    worst
}
