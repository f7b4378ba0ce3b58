use std::f64::consts::TAU;

use super::grid::Grid3;
use super::scalar::ScalarField3;
use crate::error::{Error, Result};

/// Differential form of degree 0..=3 on T³.
///
/// Component layout by degree:
/// - 0: `[f]`
/// - 1: `[f₁, f₂, f₃]` for `f_a dx^a`
/// - 2: `[f₂₃, f₃₁, f₁₂]` (cyclic order)
/// - 3: `[f₁₂₃]`
#[derive(Clone, Debug, PartialEq)]
pub struct Form3 {
    degree: usize,
    components: Vec<ScalarField3>,
}

/// Number of stored components for a given degree.
pub fn component_count(degree: usize) -> usize {
    match degree {
        0 | 3 => 1,
        1 | 2 => 3,
        _ => 0,
    }
}

impl Form3 {
    pub fn new(degree: usize, components: Vec<ScalarField3>) -> Result<Self> {
        if degree > 3 {
            return Err(Error::DegreeOutOfRange {
                op: "Form3::new",
                degree,
            });
        }
        if components.len() != component_count(degree) {
            return Err(Error::InvalidParameter {
                name: "components",
                reason: format!(
                    "degree {degree} needs {} components, got {}",
                    component_count(degree),
                    components.len()
                ),
            });
        }
        let grid = *components[0].grid();
        if components.iter().any(|c| *c.grid() != grid) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { degree, components })
    }

    fn from_parts(degree: usize, components: Vec<ScalarField3>) -> Self {
        debug_assert_eq!(components.len(), component_count(degree));
        Self { degree, components }
    }

    pub fn zero(grid: Grid3, degree: usize) -> Self {
        assert!(degree <= 3);
        Self::from_parts(degree, vec![ScalarField3::zeros(grid); component_count(degree)])
    }

    pub fn scalar(f: ScalarField3) -> Self {
        Self::from_parts(0, vec![f])
    }

    pub fn one_form(c: [ScalarField3; 3]) -> Self {
        let grid = *c[0].grid();
        assert!(c.iter().all(|f| *f.grid() == grid), "fields on different grids");
        Self::from_parts(1, c.into())
    }

    pub fn two_form(c: [ScalarField3; 3]) -> Self {
        let grid = *c[0].grid();
        assert!(c.iter().all(|f| *f.grid() == grid), "fields on different grids");
        Self::from_parts(2, c.into())
    }

    pub fn three_form(f: ScalarField3) -> Self {
        Self::from_parts(3, vec![f])
    }

    /// Constant 1-form `c_a dx^a`.
    pub fn constant_one_form(grid: Grid3, c: [f64; 3]) -> Self {
        Self::one_form(c.map(|v| ScalarField3::constant(grid, v)))
    }

    /// Constant 2-form with cyclic components `c = (c₂₃, c₃₁, c₁₂)`.
    pub fn constant_two_form(grid: Grid3, c: [f64; 3]) -> Self {
        Self::two_form(c.map(|v| ScalarField3::constant(grid, v)))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn grid(&self) -> &Grid3 {
        self.components[0].grid()
    }

    pub fn components(&self) -> &[ScalarField3] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &ScalarField3 {
        &self.components[i]
    }

    /// Components at one grid point.
    pub fn at(&self, linear: usize) -> Vec<f64> {
        self.components.iter().map(|c| c.get(linear)).collect()
    }

    /// The three components of a degree 1 or 2 form at a point.
    pub(crate) fn vector_at(&self, linear: usize) -> [f64; 3] {
        debug_assert!(self.degree == 1 || self.degree == 2);
        [
            self.components[0].get(linear),
            self.components[1].get(linear),
            self.components[2].get(linear),
        ]
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(ScalarField3::max_abs).fold(0.0, f64::max)
    }

    pub fn map_components(&self, f: impl Fn(&ScalarField3) -> ScalarField3) -> Self {
        Self::from_parts(self.degree, self.components.iter().map(f).collect())
    }

    fn zip_components(&self, other: &Self, f: impl Fn(&ScalarField3, &ScalarField3) -> ScalarField3) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        Self::from_parts(
            self.degree,
            self.components.iter().zip(&other.components).map(|(a, b)| f(a, b)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_components(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_components(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map_components(|f| f.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.map_components(|f| -f)
    }

    /// Multiplies every component by a scalar field.
    pub fn scale_by(&self, f: &ScalarField3) -> Self {
        self.map_components(|c| f.mul(c))
    }

    /// `Σ c_k · forms_k`, all of one degree.
    pub fn linear_combination(coeffs: &[f64], forms: &[&Form3]) -> Self {
        assert_eq!(coeffs.len(), forms.len());
        assert!(!forms.is_empty());
        let mut acc = forms[0].scale(coeffs[0]);
        for (c, f) in coeffs.iter().zip(forms).skip(1) {
            acc = acc.add(&f.scale(*c));
        }
        acc
    }

    /// Exterior derivative by spectral differentiation.
    pub fn d(&self) -> Result<Self> {
        let c = &self.components;
        let out = match self.degree {
            0 => Self::from_parts(1, (0..3).map(|a| c[0].partial(a)).collect()),
            1 => Self::from_parts(
                2,
                vec![
                    &c[2].partial(1) - &c[1].partial(2),
                    &c[0].partial(2) - &c[2].partial(0),
                    &c[1].partial(0) - &c[0].partial(1),
                ],
            ),
            2 => {
                let div = &(&c[0].partial(0) + &c[1].partial(1)) + &c[2].partial(2);
                Self::from_parts(3, vec![div])
            }
            degree => return Err(Error::DegreeOutOfRange { op: "d", degree }),
        };
        Ok(out)
    }

    /// Pointwise wedge product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let (k, l) = (self.degree, other.degree);
        if k + l > 3 {
            return Err(Error::DegreeOverflow { left: k, right: l });
        }
        let (a, b) = (&self.components, &other.components);
        let out = match (k, l) {
            (0, _) => other.scale_by(&a[0]),
            (_, 0) => self.scale_by(&b[0]),
            (1, 1) => Self::from_parts(
                2,
                vec![
                    &a[1].mul(&b[2]) - &a[2].mul(&b[1]),
                    &a[2].mul(&b[0]) - &a[0].mul(&b[2]),
                    &a[0].mul(&b[1]) - &a[1].mul(&b[0]),
                ],
            ),
            (1, 2) | (2, 1) => {
                let dot = &(&a[0].mul(&b[0]) + &a[1].mul(&b[1])) + &a[2].mul(&b[2]);
                Self::from_parts(3, vec![dot])
            }
            _ => unreachable!(),
        };
        Ok(out)
    }

    /// Interior product with the coordinate field `∂/∂x^axis` (axis 0, 1, 2).
    pub fn interior(&self, axis: usize) -> Result<Self> {
        assert!(axis < 3);
        let c = &self.components;
        let grid = *self.grid();
        let zero = || ScalarField3::zeros(grid);
        let out = match self.degree {
            1 => Self::from_parts(0, vec![c[axis].clone()]),
            // ι₁b = b₁₂ dx² − b₃₁ dx³, ι₂b = b₂₃ dx³ − b₁₂ dx¹, ι₃b = b₃₁ dx¹ − b₂₃ dx²
            2 => {
                let comps = match axis {
                    0 => [zero(), c[2].clone(), -&c[1]],
                    1 => [-&c[2], zero(), c[0].clone()],
                    _ => [c[1].clone(), -&c[0], zero()],
                };
                Self::from_parts(1, comps.into())
            }
            3 => {
                let mut comps = vec![zero(), zero(), zero()];
                comps[axis] = c[0].clone();
                Self::from_parts(2, comps)
            }
            degree => return Err(Error::DegreeOutOfRange { op: "interior", degree }),
        };
        Ok(out)
    }

    /// Integral over T³ of a 3-form: `(2π)³ × mean`.
    pub fn integrate(&self) -> Result<f64> {
        if self.degree != 3 {
            return Err(Error::DegreeOutOfRange {
                op: "integrate",
                degree: self.degree,
            });
        }
        Ok(TAU.powi(3) * self.components[0].mean())
    }

    /// Integral of a closed 1-form along the coordinate loop in direction
    /// `axis` (0, 1, 2): `2π × mean of that component`.
    pub fn loop_period(&self, axis: usize) -> Result<f64> {
        if self.degree != 1 {
            return Err(Error::DegreeOutOfRange {
                op: "loop_period",
                degree: self.degree,
            });
        }
        assert!(axis < 3);
        Ok(TAU * self.components[axis].mean())
    }

    /// Resamples every component onto an `n`-point grid.
    pub fn resample(&self, n: usize) -> Result<Self> {
        let comps = self.components.iter().map(|c| c.resample(n)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(self.degree, comps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid3 {
        Grid3::new(8).unwrap()
    }

    fn field(f: impl Fn([f64; 3]) -> f64) -> ScalarField3 {
        ScalarField3::from_fn(grid(), f).unwrap()
    }

    #[test]
    fn d_of_constant_is_zero() {
        let f = Form3::scalar(ScalarField3::constant(grid(), 3.5));
        assert!(f.d().unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn d_of_sin_x1_dx2() {
        let g = grid();
        let a = Form3::one_form([ScalarField3::zeros(g), field(|p| p[0].sin()), ScalarField3::zeros(g)]);
        let da = a.d().unwrap();
        let expected = field(|p| p[0].cos());
        assert!(da.component(0).max_abs() < 1e-14);
        assert!(da.component(1).max_abs() < 1e-14);
        assert!((da.component(2) - &expected).max_abs() < 1e-14);
    }

    #[test]
    fn d_of_three_form_is_an_error() {
        let f = Form3::zero(grid(), 3);
        assert!(matches!(f.d(), Err(Error::DegreeOutOfRange { degree: 3, .. })));
    }

    #[test]
    fn wedge_of_coordinate_one_forms() {
        let g = grid();
        let dx1 = Form3::constant_one_form(g, [1.0, 0.0, 0.0]);
        let dx2 = Form3::constant_one_form(g, [0.0, 1.0, 0.0]);
        let w = dx1.wedge(&dx2).unwrap();
        assert_eq!(w.degree(), 2);
        assert_eq!(w.at(0), vec![0.0, 0.0, 1.0]);
        assert_eq!(dx1.wedge(&dx1).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn wedge_degree_overflow() {
        let a = Form3::zero(grid(), 2);
        assert!(matches!(a.wedge(&a), Err(Error::DegreeOverflow { left: 2, right: 2 })));
    }

    #[test]
    fn interior_products() {
        let g = grid();
        let dx23 = Form3::constant_two_form(g, [1.0, 0.0, 0.0]);
        assert_eq!(dx23.interior(1).unwrap().at(0), vec![0.0, 0.0, 1.0]);
        assert_eq!(dx23.interior(2).unwrap().at(0), vec![0.0, -1.0, 0.0]);
        assert_eq!(dx23.interior(0).unwrap().at(0), vec![0.0, 0.0, 0.0]);
        let vol = Form3::three_form(ScalarField3::constant(g, 1.0));
        // ι₂ dx¹²³ = dx³¹
        assert_eq!(vol.interior(1).unwrap().at(0), vec![0.0, 1.0, 0.0]);
        assert!(Form3::zero(g, 0).interior(0).is_err());
    }

    #[test]
    fn integrals() {
        let g = grid();
        let one = Form3::three_form(ScalarField3::constant(g, 1.0));
        assert!((one.integrate().unwrap() - TAU.powi(3)).abs() < 1e-12);
        let s = Form3::three_form(field(|p| p[1].sin()));
        assert!(s.integrate().unwrap().abs() < 1e-13);
        // (1 + ½ sin x¹)(1 + ½ cos x²) integrates to (2π)³
        let prod = Form3::three_form(field(|p| (1.0 + 0.5 * p[0].sin()) * (1.0 + 0.5 * p[1].cos())));
        let rel = (prod.integrate().unwrap() - TAU.powi(3)).abs() / TAU.powi(3);
        assert!(rel < 1e-12);
        assert!(Form3::zero(g, 2).integrate().is_err());
    }

    #[test]
    fn loop_periods() {
        let g = grid();
        let dx1 = Form3::constant_one_form(g, [1.0, 0.0, 0.0]);
        assert!((dx1.loop_period(0).unwrap() - TAU).abs() < 1e-14);
        assert_eq!(dx1.loop_period(1).unwrap(), 0.0);
        let a = Form3::one_form([ScalarField3::constant(g, 1.0), field(|p| p[1].cos()), ScalarField3::zeros(g)]);
        assert!(a.loop_period(1).unwrap().abs() < 1e-14);
    }
}
