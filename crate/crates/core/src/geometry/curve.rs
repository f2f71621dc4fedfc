use std::collections::BTreeSet;

use crate::{Error, Point, Result};

/// Default sampling density, in nodes per unit arclength.
pub const DEFAULT_SAMPLES_PER_UNIT: f64 = 512.0;

/// A polyline curve parameterized by arclength.
///
/// Closed curves store each node once; the edge from the last node back to
/// the first is implicit. Corners are node indices where the tangent is
/// allowed to jump; every other node is treated as a sample of a `C¹` curve.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    dim: usize,
    nodes: Vec<Point>,
    closed: bool,
    corners: BTreeSet<usize>,
    cum: Vec<f64>,
    samples_per_unit: f64,
}

fn merge_tol(pts: &[(Point, bool)]) -> f64 {
    let scale = pts.iter().map(|(p, _)| p.amax()).fold(0.0, f64::max);
    1e-12 * (1.0 + scale)
}

impl Curve {
    /// Builds a curve from its nodes.
    ///
    /// A closed curve needs at least three nodes. If the last node repeats the
    /// first it is dropped.
    pub fn new(dim: usize, nodes: Vec<Point>, closed: bool, corners: BTreeSet<usize>) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::DimensionMismatch(format!("curves live in R^2 or R^3, got d = {dim}")));
        }
        let mut nodes = nodes;
        let mut corners = corners;
        if closed && nodes.len() > 1 && nodes.first() == nodes.last() {
            let last = nodes.len() - 1;
            nodes.pop();
            if corners.remove(&last) {
                corners.insert(0);
            }
        }
        if closed && nodes.len() < 3 {
            return Err(Error::DegenerateCurve(format!(
                "closed curve needs at least 3 nodes, got {}",
                nodes.len()
            )));
        }
        if nodes.len() < 2 {
            return Err(Error::DegenerateCurve("curve needs at least 2 nodes".into()));
        }
        if let Some(&c) = corners.iter().find(|&&c| c >= nodes.len()) {
            return Err(Error::InvalidArgument(format!("corner index {c} out of range")));
        }
        if dim == 2 && nodes.iter().any(|p| p.z != 0.0) {
            return Err(Error::DimensionMismatch("planar curve with nonzero z".into()));
        }
        for i in 0..edge_count(nodes.len(), closed) {
            if nodes[i] == nodes[(i + 1) % nodes.len()] {
                return Err(Error::DegenerateCurve(format!("repeated consecutive node at index {i}")));
            }
        }
        Self::build(dim, nodes, closed, corners)
    }

    /// Assembles a curve from flagged points, collapsing consecutive
    /// duplicates (including across the wrap of a closed curve) and merging
    /// their corner flags. Two-node closed slivers are allowed.
    pub(crate) fn assemble(dim: usize, pts: Vec<(Point, bool)>, closed: bool) -> Result<Self> {
        let tol = merge_tol(&pts);
        let mut out: Vec<(Point, bool)> = Vec::with_capacity(pts.len());
        for (p, flag) in pts {
            match out.last_mut() {
                Some(last) if (last.0 - p).norm() <= tol => last.1 |= flag,
                _ => out.push((p, flag)),
            }
        }
        if closed {
            while out.len() > 1 && (out[0].0 - out[out.len() - 1].0).norm() <= tol {
                let (_, flag) = out.pop().unwrap();
                out[0].1 |= flag;
            }
        }
        if out.len() < 2 {
            return Err(Error::DegenerateCurve("curve collapsed to a point".into()));
        }
        let corners = out.iter().enumerate().filter(|(_, (_, f))| *f).map(|(i, _)| i).collect();
        let nodes = out.into_iter().map(|(p, _)| p).collect();
        Self::build(dim, nodes, closed, corners)
    }

    fn build(dim: usize, nodes: Vec<Point>, closed: bool, corners: BTreeSet<usize>) -> Result<Self> {
        let n_edges = edge_count(nodes.len(), closed);
        let mut cum = Vec::with_capacity(n_edges + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for i in 0..n_edges {
            let len = (nodes[(i + 1) % nodes.len()] - nodes[i]).norm();
            if len <= 0.0 {
                return Err(Error::DegenerateCurve(format!("zero-length edge {i}")));
            }
            acc += len;
            cum.push(acc);
        }
        if !(acc > 0.0 && acc.is_finite()) {
            return Err(Error::DegenerateCurve(format!("length {acc}")));
        }
        Ok(Self {
            dim,
            nodes,
            closed,
            corners,
            cum,
            samples_per_unit: DEFAULT_SAMPLES_PER_UNIT,
        })
    }

    pub fn with_samples_per_unit(mut self, density: f64) -> Self {
        self.samples_per_unit = density;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn corners(&self) -> &BTreeSet<usize> {
        &self.corners
    }

    pub fn samples_per_unit(&self) -> f64 {
        self.samples_per_unit
    }

    pub fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    pub fn num_edges(&self) -> usize {
        self.cum.len() - 1
    }

    /// Arclength at the start of edge `i` (and at node `i`).
    pub fn node_param(&self, i: usize) -> f64 {
        self.cum[i]
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cum
    }

    pub fn edge(&self, i: usize) -> (Point, Point) {
        (self.nodes[i], self.nodes[(i + 1) % self.nodes.len()])
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        self.cum[i + 1] - self.cum[i]
    }

    pub fn edge_tangent(&self, i: usize) -> Point {
        let (a, b) = self.edge(i);
        (b - a) / (b - a).norm()
    }

    pub fn corner_params(&self) -> Vec<f64> {
        self.corners.iter().map(|&i| self.cum[i]).collect()
    }

    fn check_param(&self, s: f64) -> Result<()> {
        let len = self.length();
        if !(0.0..=len).contains(&s) {
            return Err(Error::OutOfRange { value: s, length: len });
        }
        Ok(())
    }

    /// Index of the edge containing `s`, right-continuous in `s`.
    pub fn edge_at(&self, s: f64) -> usize {
        let n = self.num_edges();
        let idx = self.cum.partition_point(|&c| c <= s);
        idx.saturating_sub(1).min(n - 1)
    }

    /// Point at arclength `s`, clamped to `[0, L]`. On a closed curve
    /// `point_at(L)` is exactly the first node.
    pub fn point_at(&self, s: f64) -> Point {
        let len = self.length();
        if s <= 0.0 {
            return self.nodes[0];
        }
        if s >= len {
            return if self.closed { self.nodes[0] } else { *self.nodes.last().unwrap() };
        }
        let e = self.edge_at(s);
        let (a, b) = self.edge(e);
        let frac = (s - self.cum[e]) / (self.cum[e + 1] - self.cum[e]);
        if frac <= 0.0 {
            a
        } else {
            a + (b - a) * frac
        }
    }

    /// Point at arclength `s` taken modulo `L` (closed curves).
    pub fn point_at_wrapped(&self, s: f64) -> Point {
        self.point_at(s.rem_euclid(self.length()))
    }

    pub fn tangent_at(&self, s: f64) -> Result<Point> {
        self.check_param(s)?;
        Ok(self.edge_tangent(self.edge_at(s)))
    }

    /// The intrinsic distance `min_k |s - t + kL|` on the circle of length `L`.
    pub fn circle_distance(&self, s: f64, t: f64) -> Result<f64> {
        self.check_param(s)?;
        self.check_param(t)?;
        Ok(circle_distance(self.length(), s, t))
    }

    /// The same closed curve started at arclength `s`.
    pub fn rerooted(&self, s: f64) -> Result<Curve> {
        if !self.closed {
            return Err(Error::InvalidArgument("only closed curves can be rerooted".into()));
        }
        self.check_param(s)?;
        let n = self.nodes.len();
        let e = self.edge_at(s);
        let mut pts = Vec::with_capacity(n + 1);
        pts.push((self.point_at(s), self.cum[e] == s && self.corners.contains(&e)));
        for k in 1..=n {
            let i = (e + k) % n;
            pts.push((self.nodes[i], self.corners.contains(&i)));
        }
        Ok(Curve::assemble(self.dim, pts, true)?.with_samples_per_unit(self.samples_per_unit))
    }

    /// The open sub-curve of length `len` starting at `s`, wrapping around a
    /// closed curve. Interior corners are kept.
    pub fn sub_arc(&self, s: f64, len: f64) -> Result<Curve> {
        let total = self.length();
        if !(len > 0.0) || len > total {
            return Err(Error::InvalidArgument(format!("sub-arc length {len} outside (0, {total}]")));
        }
        let base = if self.closed { self.rerooted(s)? } else { self.clone() };
        let start = if self.closed { 0.0 } else { s };
        let end = start + len;
        if end > base.length() * (1.0 + 1e-12) {
            return Err(Error::OutOfRange { value: end, length: base.length() });
        }
        let mut pts = vec![(base.point_at(start), false)];
        for i in 0..base.nodes.len() {
            let c = base.cum[i];
            if c > start && c < end {
                pts.push((base.nodes[i], base.corners.contains(&i)));
            }
        }
        pts.push((base.point_at(end.min(base.length())), false));
        Ok(Curve::assemble(self.dim, pts, false)?.with_samples_per_unit(self.samples_per_unit))
    }

    /// The cut operation `C(γ, t, t')`.
    ///
    /// Returns `(γ', g)`: `γ'` follows the curve on `[0, t]`, bridges straight
    /// from `x = γ(t)` to `y = γ(t')` and resumes on `[t', L]`; `g` follows
    /// `[t, t']` and bridges back from `y` to `x`. Both bridge endpoints become
    /// corners. A degenerate bridge (`x = y`) is omitted.
    pub fn cut(&self, t: f64, t_prime: f64) -> Result<(Curve, Curve)> {
        if !self.closed {
            return Err(Error::InvalidArgument("cut needs a closed curve".into()));
        }
        if !(t_prime > t) {
            return Err(Error::InvalidInterval { t, t_prime });
        }
        self.check_param(t)?;
        self.check_param(t_prime)?;
        let x = self.point_at(t);
        let y = self.point_at(t_prime);
        let n = self.nodes.len();
        let flagged = |i: usize| (self.nodes[i], self.corners.contains(&i));

        let mut main = Vec::with_capacity(n + 2);
        main.extend((0..n).take_while(|&i| self.cum[i] < t).map(flagged));
        main.push((x, true));
        main.push((y, true));
        main.extend((0..n).filter(|&i| self.cum[i] > t_prime).map(flagged));

        let mut piece = vec![(x, true)];
        piece.extend((0..n).filter(|&i| self.cum[i] > t && self.cum[i] < t_prime).map(flagged));
        piece.push((y, true));

        let density = self.samples_per_unit;
        Ok((
            Curve::assemble(self.dim, main, true)?.with_samples_per_unit(density),
            Curve::assemble(self.dim, piece, true)?.with_samples_per_unit(density),
        ))
    }

    /// Cuts out the arc of length `len` starting at `start`, rerooting first
    /// when the arc wraps past `L`. Returns `(remainder, piece)`.
    pub fn cut_arc(&self, start: f64, len: f64) -> Result<(Curve, Curve)> {
        let total = self.length();
        if start + len <= total {
            self.cut(start, start + len)
        } else {
            self.rerooted(start)?.cut(0.0, len)
        }
    }

    pub fn scaled(&self, lambda: f64) -> Curve {
        let mut c = self.clone();
        for p in &mut c.nodes {
            *p *= lambda;
        }
        for v in &mut c.cum {
            *v *= lambda;
        }
        c
    }

    pub fn translated(&self, shift: &Point) -> Curve {
        let mut c = self.clone();
        for p in &mut c.nodes {
            *p += shift;
        }
        c.cum = Vec::new();
        Curve::build(c.dim, c.nodes, c.closed, c.corners)
            .expect("translation keeps edges nondegenerate")
            .with_samples_per_unit(self.samples_per_unit)
    }

    /// The curve traversed backwards (closed curves keep their first node).
    pub fn reversed(&self) -> Curve {
        let n = self.nodes.len();
        let order: Vec<usize> = if self.closed {
            std::iter::once(0).chain((1..n).rev()).collect()
        } else {
            (0..n).rev().collect()
        };
        let pts = order.into_iter().map(|i| (self.nodes[i], self.corners.contains(&i))).collect();
        Curve::assemble(self.dim, pts, self.closed)
            .expect("reversal keeps edges nondegenerate")
            .with_samples_per_unit(self.samples_per_unit)
    }

    pub fn centroid(&self) -> Point {
        self.nodes.iter().sum::<Point>() / self.nodes.len() as f64
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        bounding_box(self.nodes.iter())
    }

    /// Largest distance between two nodes.
    pub fn diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for (i, a) in self.nodes.iter().enumerate() {
            for b in &self.nodes[i + 1..] {
                best = best.max((a - b).norm_squared());
            }
        }
        best.sqrt()
    }

    pub fn mean_edge_length(&self) -> f64 {
        self.length() / self.num_edges() as f64
    }

    pub fn min_edge_length(&self) -> f64 {
        (0..self.num_edges()).map(|i| self.edge_length(i)).fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn edge_count(n_nodes: usize, closed: bool) -> usize {
    if closed {
        n_nodes
    } else {
        n_nodes.saturating_sub(1)
    }
}

/// `min(|s - t|, L - |s - t|)` for parameters in `[0, L]`.
pub fn circle_distance(length: f64, s: f64, t: f64) -> f64 {
    let d = (s - t).abs() % length;
    d.min(length - d)
}

pub fn bounding_box<'a>(pts: impl Iterator<Item = &'a Point>) -> (Point, Point) {
    let mut lo = Point::repeat(f64::INFINITY);
    let mut hi = Point::repeat(f64::NEG_INFINITY);
    for p in pts {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (lo, hi)
}
