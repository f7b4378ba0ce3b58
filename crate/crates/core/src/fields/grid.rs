use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How pointwise products of fields are formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductRule {
    /// Multiply grid samples directly.
    #[default]
    Plain,
    /// Multiply on a padded grid (3/2 rule) and truncate back.
    Dealiased,
}

/// Uniform periodic grid on T³ with `n` samples per axis and period 2π.
///
/// Samples sit at `x^a = 2π i_a / n`; storage is row-major with `i₁`
/// slowest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid3 {
    n: usize,
    products: ProductRule,
}

impl Grid3 {
    pub const DEFAULT_N: usize = 32;

    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(n));
        }
        Ok(Self {
            n,
            products: ProductRule::Plain,
        })
    }

    pub fn with_products(self, products: ProductRule) -> Self {
        Self { products, ..self }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn products(&self) -> ProductRule {
        self.products
    }

    /// Total number of grid points, `n³`.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.n as f64
    }

    /// Angle of sample `i` along any axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        TAU * i as f64 / self.n as f64
    }

    pub fn linear_index(&self, idx: [usize; 3]) -> usize {
        (idx[0] * self.n + idx[1]) * self.n + idx[2]
    }

    pub fn multi_index(&self, linear: usize) -> [usize; 3] {
        let n = self.n;
        [linear / (n * n), (linear / n) % n, linear % n]
    }

    /// Coordinates `(x¹, x², x³)` of the sample at `linear`.
    pub fn point(&self, linear: usize) -> [f64; 3] {
        let [i, j, k] = self.multi_index(linear);
        [self.coordinate(i), self.coordinate(j), self.coordinate(k)]
    }

    /// Grid size used for dealiased products: smallest even `m ≥ 3n/2`.
    pub(crate) fn padded_n(&self) -> usize {
        let m = (3 * self.n).div_ceil(2);
        m + m % 2
    }

    pub(crate) fn ensure_same(&self, other: &Grid3) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

impl Default for Grid3 {
    fn default() -> Self {
        Self {
            n: Self::DEFAULT_N,
            products: ProductRule::Plain,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_small_grids() {
        assert!(matches!(Grid3::new(3), Err(Error::InvalidGrid(3))));
        assert!(matches!(Grid3::new(7), Err(Error::InvalidGrid(7))));
        assert!(matches!(Grid3::new(2), Err(Error::InvalidGrid(2))));
        assert!(Grid3::new(4).is_ok());
    }

    #[test]
    fn index_round_trip() {
        let g = Grid3::new(6).unwrap();
        for l in 0..g.len() {
            assert_eq!(g.linear_index(g.multi_index(l)), l);
        }
        assert_eq!(g.multi_index(1), [0, 0, 1]);
        assert_eq!(g.multi_index(36), [1, 0, 0]);
    }

    #[test]
    fn padded_size_is_even_and_large_enough() {
        for n in (4..40).step_by(2) {
            let m = Grid3::new(n).unwrap().padded_n();
            assert_eq!(m % 2, 0);
            assert!(2 * m >= 3 * n);
        }
        assert_eq!(Grid3::new(32).unwrap().padded_n(), 48);
        assert_eq!(Grid3::new(6).unwrap().padded_n(), 10);
    }
}
