//! Periodic fields and exterior calculus on the base torus T³.
//!
//! Derivatives are spectral; products are pointwise on grid samples
//! (or 3/2-dealiased, see [`ProductRule`]); integrals are trapezoid sums,
//! exact for band-limited integrands.

mod form;
mod grid;
mod scalar;
mod spectral;
mod sym;

pub use form::{component_count, Form3};
pub use grid::{Grid3, ProductRule};
pub(crate) use scalar::CompensatedSum;
pub use scalar::ScalarField3;
pub use sym::{Sym3, SymMatrixField3};

use rand::Rng;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};

impl Form3 {
    /// Closed part of a 1- or 2-form under the spectral Hodge decomposition:
    /// drops the co-exact piece and keeps harmonic (constant) plus exact parts.
    pub fn closed_part(&self) -> Result<Form3> {
        let degree = self.degree();
        if degree != 1 && degree != 2 {
            return Err(Error::DegreeOutOfRange {
                op: "closed_part",
                degree,
            });
        }
        let grid = *self.grid();
        let n = grid.n();
        let spectra: Vec<Vec<Complex64>> = self
            .components()
            .iter()
            .map(|c| spectral::forward3(c.values(), n))
            .collect();
        let mut out = spectra.clone();
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let k = [
                        spectral::derivative_wavenumber(i, n),
                        spectral::derivative_wavenumber(j, n),
                        spectral::derivative_wavenumber(l, n),
                    ];
                    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                    if k2 == 0.0 {
                        continue;
                    }
                    let idx = (i * n + j) * n + l;
                    let dot: Complex64 = (0..3).map(|a| spectra[a][idx] * k[a]).sum();
                    for a in 0..3 {
                        let longitudinal = dot * (k[a] / k2);
                        out[a][idx] = if degree == 1 {
                            longitudinal
                        } else {
                            spectra[a][idx] - longitudinal
                        };
                    }
                }
            }
        }
        let comps: Vec<ScalarField3> = out
            .iter()
            .map(|s| ScalarField3::from_raw(grid, spectral::inverse3(s, n)))
            .collect();
        Form3::new(degree, comps)
    }
}

/// Seeded random band-limited scalar field: a real trigonometric polynomial
/// with modes `|k_a| ≤ max_mode` and coefficients uniform in `[-1, 1]`,
/// damped by `1/(1 + |k|²)`. The mean is zero unless `with_mean` is set.
pub fn random_band_limited(rng: &mut impl Rng, grid: Grid3, max_mode: i64, with_mean: bool) -> ScalarField3 {
    assert!(max_mode >= 0 && (max_mode as usize) < grid.n() / 2, "mode must be below Nyquist");
    let n = grid.n();
    let mut modes = Vec::new();
    for k1 in -max_mode..=max_mode {
        for k2 in -max_mode..=max_mode {
            for k3 in -max_mode..=max_mode {
                // one representative of each ±k pair
                let positive = (k1, k2, k3) > (0, 0, 0);
                if positive {
                    let damp = 1.0 / (1.0 + (k1 * k1 + k2 * k2 + k3 * k3) as f64);
                    let c = rng.random_range(-1.0..1.0) * damp;
                    let s = rng.random_range(-1.0..1.0) * damp;
                    modes.push(([k1, k2, k3], c, s));
                }
            }
        }
    }
    let mean = if with_mean { rng.random_range(-1.0..1.0) } else { 0.0 };
    // e^{i k x} tables per axis, indexed by (k + max_mode, i)
    let width = (2 * max_mode + 1) as usize;
    let table: Vec<Complex64> = (0..width)
        .flat_map(|kk| {
            let k = kk as i64 - max_mode;
            (0..n).map(move |i| Complex64::from_polar(1.0, k as f64 * grid.coordinate(i)))
        })
        .collect();
    let e = |k: i64, i: usize| table[(k + max_mode) as usize * n + i];
    let values = (0..grid.len())
        .map(|l| {
            let [i, j, m] = grid.multi_index(l);
            let mut v = mean;
            for ([k1, k2, k3], c, s) in &modes {
                let z = e(*k1, i) * e(*k2, j) * e(*k3, m);
                v += c * z.re + s * z.im;
            }
            v
        })
        .collect();
    ScalarField3::from_raw(grid, values)
}

/// Random band-limited 1-form, each component drawn by [`random_band_limited`].
pub fn random_one_form(rng: &mut impl Rng, grid: Grid3, max_mode: i64, with_mean: bool) -> Form3 {
    Form3::one_form(std::array::from_fn(|_| random_band_limited(rng, grid, max_mode, with_mean)))
}

/// Random band-limited 2-form.
pub fn random_two_form(rng: &mut impl Rng, grid: Grid3, max_mode: i64, with_mean: bool) -> Form3 {
    Form3::two_form(std::array::from_fn(|_| random_band_limited(rng, grid, max_mode, with_mean)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn band_limited_is_deterministic_and_mean_free() {
        let g = Grid3::new(8).unwrap();
        let a = random_band_limited(&mut ChaCha8Rng::seed_from_u64(3), g, 2, false);
        let b = random_band_limited(&mut ChaCha8Rng::seed_from_u64(3), g, 2, false);
        assert_eq!(a, b);
        assert!(a.mean().abs() < 1e-15);
        assert!(a.max_abs() > 0.1);
    }

    #[test]
    fn closed_part_of_two_form_is_closed_and_keeps_exact_part() {
        let g = Grid3::new(12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let gamma = random_one_form(&mut rng, g, 3, false);
        let exact = gamma.d().unwrap().add(&Form3::constant_two_form(g, [1.0, -2.0, 0.5]));
        let noise = random_two_form(&mut rng, g, 3, false);
        let proj = exact.add(&noise).closed_part().unwrap();
        assert!(proj.d().unwrap().max_abs() < 1e-12);
        // projecting an already closed form changes nothing
        let again = exact.closed_part().unwrap();
        assert!(again.sub(&exact).max_abs() < 1e-12);
        assert!((proj.component(0).mean() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn closed_part_of_one_form_is_curl_free() {
        let g = Grid3::new(12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_one_form(&mut rng, g, 3, true);
        let p = a.closed_part().unwrap();
        assert!(p.d().unwrap().max_abs() < 1e-12);
        for axis in 0..3 {
            assert!((p.component(axis).mean() - a.component(axis).mean()).abs() < 1e-14);
        }
    }
}
