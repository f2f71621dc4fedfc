use crate::{Error, Point, Result};

pub const MIN_CELLS_PER_AXIS: usize = 16;

/// Samples of a vector (or scalar) field on a regular grid.
///
/// Sample `(i, j, k)` sits at `origin + h·(i, j, k)`. Data is row-major with
/// the last axis fastest and components interleaved per sample. Planar grids
/// have `shape[2] == 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid {
    pub dim: usize,
    pub shape: [usize; 3],
    pub h: f64,
    pub origin: Point,
    pub ncomp: usize,
    pub data: Vec<f64>,
}

impl FieldGrid {
    pub fn zeros(dim: usize, shape: [usize; 3], h: f64, origin: Point, ncomp: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::DimensionMismatch(format!("grids are 2- or 3-dimensional, got {dim}")));
        }
        if dim == 2 && shape[2] != 1 {
            return Err(Error::DimensionMismatch("planar grid needs shape[2] == 1".into()));
        }
        if let Some(&n) = shape[..dim].iter().find(|&&n| n < MIN_CELLS_PER_AXIS) {
            return Err(Error::GridTooCoarse(format!("{n} cells on an axis, need {MIN_CELLS_PER_AXIS}")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument(format!("grid spacing {h}")));
        }
        if ncomp == 0 {
            return Err(Error::InvalidArgument("field needs at least one component".into()));
        }
        let cells = shape.iter().product::<usize>();
        Ok(Self { dim, shape, h, origin, ncomp, data: vec![0.0; cells * ncomp] })
    }

    /// A cube of `n` samples per axis with spacing `h` centred on `center`
    /// (the centre sits exactly on sample `n/2`).
    pub fn centered(dim: usize, n: usize, h: f64, center: Point, ncomp: usize) -> Result<Self> {
        let half = (n / 2) as f64 * h;
        let mut origin = center - Point::repeat(half);
        let mut shape = [n, n, n];
        if dim == 2 {
            origin.z = 0.0;
            shape[2] = 1;
        }
        Self::zeros(dim, shape, h, origin, ncomp)
    }

    pub fn like(&self, ncomp: usize) -> Self {
        Self { ncomp, data: vec![0.0; self.cells() * ncomp], ..self.clone() }
    }

    pub fn cells(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.shape[1] + j) * self.shape[2] + k
    }

    #[inline]
    pub fn unindex(&self, idx: usize) -> [usize; 3] {
        let k = idx % self.shape[2];
        let j = (idx / self.shape[2]) % self.shape[1];
        let i = idx / (self.shape[1] * self.shape[2]);
        [i, j, k]
    }

    pub fn position(&self, idx: usize) -> Point {
        let [i, j, k] = self.unindex(idx);
        self.origin + Point::new(i as f64, j as f64, k as f64) * self.h
    }

    pub fn value(&self, idx: usize) -> &[f64] {
        &self.data[idx * self.ncomp..(idx + 1) * self.ncomp]
    }

    pub fn value_mut(&mut self, idx: usize) -> &mut [f64] {
        &mut self.data[idx * self.ncomp..(idx + 1) * self.ncomp]
    }

    /// Euclidean magnitude at each sample.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.data
            .chunks_exact(self.ncomp)
            .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect()
    }

    /// `h^d · Σ |F|`.
    pub fn l1_norm(&self) -> f64 {
        self.cell_volume() * self.magnitudes().iter().sum::<f64>()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn component(&self, c: usize) -> Vec<f64> {
        self.data.iter().skip(c).step_by(self.ncomp).copied().collect()
    }

    pub fn set_component(&mut self, c: usize, values: &[f64]) {
        assert_eq!(values.len(), self.cells());
        for (slot, v) in self.data.iter_mut().skip(c).step_by(self.ncomp).zip(values) {
            *slot = *v;
        }
    }

    pub fn from_components(template: &FieldGrid, comps: &[Vec<f64>]) -> Self {
        let mut g = template.like(comps.len());
        for (c, v) in comps.iter().enumerate() {
            g.set_component(c, v);
        }
        g
    }

    /// Physical extent `n·h` of each axis (the periodic box size).
    pub fn extent(&self) -> [f64; 3] {
        self.shape.map(|n| n as f64 * self.h)
    }

    pub fn same_layout(&self, other: &FieldGrid) -> bool {
        self.dim == other.dim && self.shape == other.shape && self.h == other.h && self.origin == other.origin
    }

    pub fn axpy(&mut self, a: f64, other: &FieldGrid) -> Result<()> {
        if !self.same_layout(other) || self.ncomp != other.ncomp {
            return Err(Error::DimensionMismatch("grids differ in layout".into()));
        }
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trip() {
        let g = FieldGrid::zeros(3, [16, 17, 18], 0.1, Point::zeros(), 3).unwrap();
        for idx in [0, 1, 17, 300, g.cells() - 1] {
            let [i, j, k] = g.unindex(idx);
            assert_eq!(g.index(i, j, k), idx);
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        assert!(matches!(
            FieldGrid::zeros(2, [8, 32, 1], 0.1, Point::zeros(), 1),
            Err(Error::GridTooCoarse(_))
        ));
    }

    #[test]
    fn centered_grid_hits_center() {
        let c = Point::new(0.3, -0.2, 0.0);
        let g = FieldGrid::centered(2, 32, 0.05, c, 2).unwrap();
        let idx = g.index(16, 16, 0);
        assert!((g.position(idx) - c).norm() < 1e-14);
    }

    #[test]
    fn l1_norm_of_constant() {
        let mut g = FieldGrid::zeros(2, [16, 16, 1], 0.5, Point::zeros(), 2).unwrap();
        for v in g.data.chunks_exact_mut(2) {
            v[0] = 3.0;
            v[1] = 4.0;
        }
        assert!((g.l1_norm() - 5.0 * 256.0 * 0.25).abs() < 1e-12);
    }
}
