//! Decreasing rearrangements, Lorentz `L^{p,q}` norms and the layer-cake
//! functional `|||f||| = ∫₀^∞ |{|f| > s}|^θ ds`, all evaluated exactly on
//! the step function defined by grid samples.

use crate::fields::FieldGrid;
use crate::{Error, Result};

/// Sample magnitudes sorted in decreasing order, each standing for a cell
/// of volume `cell_volume`.
#[derive(Clone, Debug, PartialEq)]
pub struct RearrangedField {
    pub values: Vec<f64>,
    pub cell_volume: f64,
}

impl RearrangedField {
    pub fn from_values(mut values: Vec<f64>, cell_volume: f64) -> Self {
        for v in &mut values {
            *v = v.abs();
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values, cell_volume }
    }

    /// Distribution function `λ(s) = cell_volume · #{values > s}`.
    pub fn distribution(&self, s: f64) -> f64 {
        self.cell_volume * self.values.partition_point(|&v| v > s) as f64
    }

    fn nonzero(&self) -> &[f64] {
        let n = self.values.partition_point(|&v| v > 0.0);
        &self.values[..n]
    }
}

pub fn rearrange(grid: &FieldGrid) -> RearrangedField {
    RearrangedField::from_values(grid.magnitudes(), grid.cell_volume())
}

/// Rearrangement of the samples whose `keep` flag is set.
pub fn rearrange_masked(grid: &FieldGrid, keep: &[bool]) -> RearrangedField {
    let values = grid.magnitudes().into_iter().zip(keep).filter(|(_, &k)| k).map(|(v, _)| v).collect();
    RearrangedField::from_values(values, grid.cell_volume())
}

/// `((i+1)c)^a - (ic)^a`, stable for large `i`.
fn power_increment(i: usize, c: f64, a: f64) -> f64 {
    if i == 0 {
        c.powf(a)
    } else {
        let x = i as f64;
        (x * c).powf(a) * (a * (1.0 / x).ln_1p()).exp_m1()
    }
}

/// `‖f‖_{L^{p,q}} = (∫₀^∞ (t^{1/p} f*(t))^q dt/t)^{1/q}`, or
/// `sup_t t^{1/p} f*(t)` for `q = ∞`.
pub fn lorentz_norm(r: &RearrangedField, p: f64, q: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) || !(q >= 1.0) {
        return Err(Error::BadExponents { p, q });
    }
    let c = r.cell_volume;
    let vals = r.nonzero();
    if q.is_infinite() {
        return Ok(vals
            .iter()
            .enumerate()
            .map(|(i, v)| v * ((i + 1) as f64 * c).powf(1.0 / p))
            .fold(0.0, f64::max));
    }
    let a = q / p;
    let sum: f64 = vals
        .iter()
        .enumerate()
        .map(|(i, v)| v.powf(q) * power_increment(i, c, a) / a)
        .sum();
    Ok(sum.powf(1.0 / q))
}

/// `∫₀^∞ λ(s)^θ ds`.
pub fn layercake_norm(r: &RearrangedField, exponent: f64) -> Result<f64> {
    let (lo, hi) = split_layercake(r, exponent, f64::INFINITY)?;
    Ok(lo + hi)
}

/// The two parts `∫₀^{s_cut}` and `∫_{s_cut}^∞` of the layer-cake integral.
pub fn split_layercake(r: &RearrangedField, exponent: f64, s_cut: f64) -> Result<(f64, f64)> {
    if !(exponent > 0.0 && exponent < 1.0) {
        return Err(Error::InvalidArgument(format!("layer-cake exponent {exponent} outside (0, 1)")));
    }
    if !(s_cut >= 0.0) {
        return Err(Error::InvalidArgument(format!("cut level {s_cut} is negative")));
    }
    let vals = r.nonzero();
    let c = r.cell_volume;
    let (mut low, mut high) = (0.0, 0.0);
    for (k, &v) in vals.iter().enumerate() {
        // λ(s) = (k+1)c on [v_{k+1}, v_k).
        let next = vals.get(k + 1).copied().unwrap_or(0.0);
        let w = ((k + 1) as f64 * c).powf(exponent);
        low += (v.min(s_cut) - next.min(s_cut)) * w;
        high += ((v - s_cut).max(0.0) - (next - s_cut).max(0.0)) * w;
    }
    Ok((low, high))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn indicator(k: usize, total: usize, c: f64) -> RearrangedField {
        let mut v = vec![0.0; total];
        for x in v.iter_mut().take(k) {
            *x = 1.0;
        }
        RearrangedField::from_values(v, c)
    }

    #[test]
    fn indicator_rearrangement() {
        let r = RearrangedField::from_values(vec![0.0, 1.0, 0.0, 1.0, 1.0], 0.5);
        assert_eq!(r.values, vec![1.0, 1.0, 1.0, 0.0, 0.0]);
        assert_eq!(r.distribution(0.5), 1.5);
        assert_eq!(r.distribution(1.0), 0.0);
    }

    #[test]
    fn indicator_norms() {
        let c = 0.001;
        let r = indicator(370, 1000, c);
        let vol = 370.0 * c;
        for p in [1.2, 1.5, 3.0] {
            let l1 = lorentz_norm(&r, p, 1.0).unwrap();
            assert!((l1 - p * vol.powf(1.0 / p)).abs() < 1e-12 * l1);
            let lp = lorentz_norm(&r, p, p).unwrap();
            assert!((lp - vol.powf(1.0 / p)).abs() < 1e-12 * lp);
        }
        let lc = layercake_norm(&r, 0.6).unwrap();
        assert!((lc - vol.powf(0.6)).abs() < 1e-12);
    }

    #[test]
    fn bad_exponents() {
        let r = indicator(3, 5, 1.0);
        assert!(matches!(lorentz_norm(&r, 1.0, 1.0), Err(Error::BadExponents { .. })));
        assert!(matches!(lorentz_norm(&r, 2.0, 0.5), Err(Error::BadExponents { .. })));
    }

    #[test]
    fn split_limits() {
        let r = RearrangedField::from_values(vec![3.0, 0.5, 2.0, 0.1], 0.25);
        let total = layercake_norm(&r, 0.5).unwrap();
        let (lo, hi) = split_layercake(&r, 0.5, 10.0).unwrap();
        assert_eq!(hi, 0.0);
        assert!((lo - total).abs() < 1e-15);
        let (lo, hi) = split_layercake(&r, 0.5, 0.0).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - total).abs() < 1e-15);
    }

    #[test]
    fn zero_field() {
        let r = RearrangedField::from_values(vec![0.0; 10], 1.0);
        assert_eq!(layercake_norm(&r, 0.5).unwrap(), 0.0);
        assert_eq!(lorentz_norm(&r, 2.0, 1.0).unwrap(), 0.0);
    }

    fn field() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(prop_oneof![Just(0.0), 0.0..10.0f64], 1..200)
    }

    proptest! {
        #[test]
        fn permutation_invariance(mut v in field(), seed in any::<u64>()) {
            let a = RearrangedField::from_values(v.clone(), 0.1);
            let n = v.len();
            for i in 0..n {
                let j = (seed as usize).wrapping_mul(i + 7) % n;
                v.swap(i, j);
            }
            prop_assert_eq!(a, RearrangedField::from_values(v, 0.1));
        }

        #[test]
        fn weak_below_strong(v in field(), p in 1.1..4.0f64) {
            let r = RearrangedField::from_values(v, 0.01);
            let weak = lorentz_norm(&r, p, f64::INFINITY).unwrap();
            let strong = lorentz_norm(&r, p, 1.0).unwrap();
            prop_assert!(weak <= strong * (1.0 + 1e-12));
        }

        #[test]
        fn layercake_times_p_is_lorentz(v in field(), p in 1.1..4.0f64) {
            let r = RearrangedField::from_values(v, 0.01);
            let strong = lorentz_norm(&r, p, 1.0).unwrap();
            let lc = layercake_norm(&r, 1.0 / p).unwrap();
            prop_assert!(lc <= strong * (1.0 + 1e-12));
            prop_assert!((strong - p * lc).abs() <= 1e-10 * strong.max(1e-300));
        }

        #[test]
        fn split_adds_up(v in field(), s in 0.0..12.0f64, theta in 0.05..0.95f64) {
            let r = RearrangedField::from_values(v, 0.3);
            let (lo, hi) = split_layercake(&r, theta, s).unwrap();
            let total = layercake_norm(&r, theta).unwrap();
            prop_assert!((lo + hi - total).abs() <= 1e-12 * total.max(1e-300));
        }

        #[test]
        fn monotone_in_pointwise_order(v in field(), scale in 0.0..1.0f64, p in 1.1..4.0f64) {
            let small: Vec<f64> = v.iter().map(|x| x * scale).collect();
            let big = RearrangedField::from_values(v, 0.05);
            let small = RearrangedField::from_values(small, 0.05);
            for q in [1.0, 2.0, f64::INFINITY] {
                prop_assert!(lorentz_norm(&small, p, q).unwrap() <= lorentz_norm(&big, p, q).unwrap() * (1.0 + 1e-12));
            }
        }

        #[test]
        fn dilation_scaling(v in field(), p in 1.1..4.0f64, q in 1.0..3.0f64) {
            // f(x/λ) on a grid with spacing λh in d = 3: cell volume scales by λ³.
            let lam: f64 = 1.7;
            let a = lorentz_norm(&RearrangedField::from_values(v.clone(), 0.02), p, q).unwrap();
            let b = lorentz_norm(&RearrangedField::from_values(v, 0.02 * lam.powi(3)), p, q).unwrap();
            prop_assert!((b - lam.powf(3.0 / p) * a).abs() <= 1e-10 * b.max(1e-300));
        }
    }
}
