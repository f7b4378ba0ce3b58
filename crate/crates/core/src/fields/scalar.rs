use std::ops::{Add, Mul, Neg, Sub};

use super::grid::{Grid3, ProductRule};
use super::spectral;
use crate::error::{Error, Result};

/// Real periodic function sampled on a [`Grid3`].
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField3 {
    grid: Grid3,
    values: Vec<f64>,
}

impl ScalarField3 {
    /// Wraps samples, rejecting wrong lengths and non-finite values.
    pub fn new(grid: Grid3, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_raw(grid: Grid3, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: Grid3) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid3, c: f64) -> Self {
        Self::from_raw(grid, vec![c; grid.len()])
    }

    /// Samples `f(x¹, x², x³)` at every grid point.
    pub fn from_fn(grid: Grid3, f: impl Fn([f64; 3]) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|l| f(grid.point(l))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, linear: usize) -> f64 {
        self.values[linear]
    }

    /// Grid mean, Neumaier-compensated sum in storage order.
    pub fn mean(&self) -> f64 {
        let mut acc = CompensatedSum::default();
        for &v in &self.values {
            acc.add(v);
        }
        acc.value() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.grid, other.grid, "fields on different grids");
        Self::from_raw(
            self.grid,
            self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        )
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// Spectral partial derivative `∂/∂x^axis` (axis 0, 1, 2 for x¹, x², x³).
    pub fn partial(&self, axis: usize) -> Self {
        assert!(axis < 3);
        Self::from_raw(self.grid, spectral::partial(&self.values, self.grid.n(), axis))
    }

    /// Product under the grid's [`ProductRule`].
    pub fn mul(&self, other: &Self) -> Self {
        match self.grid.products() {
            ProductRule::Plain => self.zip_map(other, |a, b| a * b),
            ProductRule::Dealiased => {
                assert_eq!(self.grid, other.grid, "fields on different grids");
                let (n, m) = (self.grid.n(), self.grid.padded_n());
                let a = spectral::resample(&self.values, n, m);
                let b = spectral::resample(&other.values, n, m);
                let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
                Self::from_raw(self.grid, spectral::resample(&prod, m, n))
            }
        }
    }

    /// Trigonometric interpolation onto an `n × n × n` grid (product rule kept).
    pub fn resample(&self, n: usize) -> Result<Self> {
        let target = Grid3::new(n)?.with_products(self.grid.products());
        Ok(Self::from_raw(target, spectral::resample(&self.values, self.grid.n(), n)))
    }
}

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl Add for &ScalarField3 {
    type Output = ScalarField3;
    fn add(self, rhs: Self) -> ScalarField3 {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &ScalarField3 {
    type Output = ScalarField3;
    fn sub(self, rhs: Self) -> ScalarField3 {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl Neg for &ScalarField3 {
    type Output = ScalarField3;
    fn neg(self) -> ScalarField3 {
        self.map(|v| -v)
    }
}

impl Mul<&ScalarField3> for f64 {
    type Output = ScalarField3;
    fn mul(self, rhs: &ScalarField3) -> ScalarField3 {
        rhs.scale(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_wrong_length() {
        let g = Grid3::new(4).unwrap();
        let mut v = vec![0.0; 64];
        v[5] = f64::NAN;
        assert!(matches!(ScalarField3::new(g, v), Err(Error::NonFinite { index: 5 })));
        assert!(matches!(
            ScalarField3::new(g, vec![0.0; 10]),
            Err(Error::LengthMismatch { expected: 64, got: 10 })
        ));
        let mut v = vec![0.0; 64];
        v[0] = f64::INFINITY;
        assert!(ScalarField3::new(g, v).is_err());
    }

    #[test]
    fn dealiased_product_matches_plain_for_resolved_modes() {
        let g = Grid3::new(8).unwrap();
        let gd = g.with_products(ProductRule::Dealiased);
        let f = |p: [f64; 3]| p[0].sin() + (p[1] + p[2]).cos();
        let h = |p: [f64; 3]| 1.0 + (p[2]).sin();
        let plain = ScalarField3::from_fn(g, f).unwrap().mul(&ScalarField3::from_fn(g, h).unwrap());
        let deal = ScalarField3::from_fn(gd, f).unwrap().mul(&ScalarField3::from_fn(gd, h).unwrap());
        let diff = plain.values().iter().zip(deal.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-13, "{diff}");
    }

    #[test]
    fn dealiased_product_removes_aliased_modes() {
        // sin(3x)·sin(3x) = (1 - cos 6x)/2; on N = 8 the cos 6x mode aliases
        // onto cos 2x under plain multiplication.
        let g = Grid3::new(8).unwrap().with_products(ProductRule::Dealiased);
        let s = ScalarField3::from_fn(g, |p| (3.0 * p[0]).sin()).unwrap();
        let sq = s.mul(&s);
        for (l, v) in sq.values().iter().enumerate() {
            assert!((v - 0.5).abs() < 1e-13, "index {l}: {v}");
        }
    }
}
