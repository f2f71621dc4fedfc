use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::fields::FieldGrid;
use crate::{Error, Result};

/// The periodic box of a grid with its angular wavenumbers
/// `ξ = 2π m / (n h)`, `m ∈ (−n/2, n/2]`.
///
/// Operators act on the symmetric band: the zero mode and every mode with a
/// Nyquist component (`m = n/2` on some axis) are dropped. Odd multipliers
/// such as `iξ` would map a real Nyquist mode to an imaginary one, and
/// dropping them everywhere keeps every identity between multipliers exact.
#[derive(Clone)]
pub struct SpectralGrid {
    pub dim: usize,
    pub shape: [usize; 3],
    pub h: f64,
    pub xi: [Vec<f64>; 3],
    nyquist: [Option<usize>; 3],
    ffts: [(Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>); 3],
}

impl std::fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralGrid").field("dim", &self.dim).field("shape", &self.shape).field("h", &self.h).finish()
    }
}

impl SpectralGrid {
    pub fn new(grid: &FieldGrid) -> Self {
        let mut planner = FftPlanner::new();
        let axis = |a: usize| -> Vec<f64> {
            let n = grid.shape[a];
            if a >= grid.dim {
                return vec![0.0];
            }
            let scale = 2.0 * std::f64::consts::PI / (n as f64 * grid.h);
            (0..n).map(|m| if m <= n / 2 { m as f64 } else { m as f64 - n as f64 } * scale).collect()
        };
        let nyq = |a: usize| (a < grid.dim && grid.shape[a] % 2 == 0).then(|| grid.shape[a] / 2);
        let mut plan = |a: usize| (planner.plan_fft_forward(grid.shape[a]), planner.plan_fft_inverse(grid.shape[a]));
        let ffts = [plan(0), plan(1), plan(2)];
        Self {
            dim: grid.dim,
            shape: grid.shape,
            h: grid.h,
            xi: [axis(0), axis(1), axis(2)],
            nyquist: [nyq(0), nyq(1), nyq(2)],
            ffts,
        }
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn indices(&self, idx: usize) -> [usize; 3] {
        let k = idx % self.shape[2];
        let j = (idx / self.shape[2]) % self.shape[1];
        let i = idx / (self.shape[1] * self.shape[2]);
        [i, j, k]
    }

    /// `ξ` at flat index `idx`.
    pub fn wavevector(&self, idx: usize) -> [f64; 3] {
        let m = self.indices(idx);
        [self.xi[0][m[0]], self.xi[1][m[1]], self.xi[2][m[2]]]
    }

    /// `ξ` if the mode belongs to the symmetric band, `None` for the zero
    /// mode and Nyquist modes.
    pub fn band(&self, idx: usize) -> Option<[f64; 3]> {
        let m = self.indices(idx);
        if m == [0, 0, 0] || (0..3).any(|a| self.nyquist[a] == Some(m[a])) {
            return None;
        }
        Some(self.wavevector(idx))
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        let [n0, n1, n2] = self.shape;
        let pick = |a: usize| if inverse { &self.ffts[a].1 } else { &self.ffts[a].0 };
        if n2 > 1 {
            let f = pick(2);
            data.par_chunks_mut(n2).for_each(|row| f.process(row));
        }
        if n1 > 1 {
            let f = pick(1);
            data.par_chunks_mut(n1 * n2).for_each(|plane| {
                let mut line = vec![Complex64::default(); n1];
                for k in 0..n2 {
                    for j in 0..n1 {
                        line[j] = plane[j * n2 + k];
                    }
                    f.process(&mut line);
                    for j in 0..n1 {
                        plane[j * n2 + k] = line[j];
                    }
                }
            });
        }
        if n0 > 1 {
            let f = pick(0);
            let stride = n1 * n2;
            let columns: Vec<Vec<Complex64>> = (0..stride)
                .into_par_iter()
                .map(|c| {
                    let mut line: Vec<Complex64> = (0..n0).map(|i| data[i * stride + c]).collect();
                    f.process(&mut line);
                    line
                })
                .collect();
            for (c, line) in columns.into_iter().enumerate() {
                for (i, v) in line.into_iter().enumerate() {
                    data[i * stride + c] = v;
                }
            }
        }
    }

    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut data, false);
        data
    }

    /// Inverse transform, keeping the real part.
    pub fn inverse(&self, mut spectrum: Vec<Complex64>) -> Vec<f64> {
        self.transform(&mut spectrum, true);
        let n = self.len() as f64;
        spectrum.into_iter().map(|c| c.re / n).collect()
    }

    pub fn forward_all(&self, grid: &FieldGrid) -> Result<Vec<Vec<Complex64>>> {
        if grid.shape != self.shape || grid.h != self.h {
            return Err(Error::DimensionMismatch("grid does not match the spectral layout".into()));
        }
        Ok((0..grid.ncomp).map(|c| self.forward(&grid.component(c))).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Point;

    #[test]
    fn round_trip_identity() {
        let mut g = FieldGrid::zeros(3, [16, 18, 20], 0.1, Point::zeros(), 1).unwrap();
        for (i, v) in g.data.iter_mut().enumerate() {
            *v = ((i * 7919) % 113) as f64 / 113.0 - 0.5;
        }
        let s = SpectralGrid::new(&g);
        let back = s.inverse(s.forward(&g.data));
        let err = back.iter().zip(&g.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn plane_wave_lands_on_its_mode() {
        let mut g = FieldGrid::zeros(2, [16, 32, 1], 0.25, Point::zeros(), 1).unwrap();
        for idx in 0..g.cells() {
            let x = g.position(idx);
            g.data[idx] = (2.0 * std::f64::consts::PI * (x.x / 4.0 + 3.0 * x.y / 8.0)).cos();
        }
        let s = SpectralGrid::new(&g);
        let spec = s.forward(&g.data);
        let (peak, _) = spec.iter().enumerate().fold((0, 0.0), |acc, (i, c)| if c.norm() > acc.1 { (i, c.norm()) } else { acc });
        let xi = s.wavevector(peak);
        assert!((xi[0].abs() - 2.0 * std::f64::consts::PI / 4.0).abs() < 1e-12);
        assert!((xi[1].abs() - 6.0 * std::f64::consts::PI / 8.0).abs() < 1e-12);
    }
}
