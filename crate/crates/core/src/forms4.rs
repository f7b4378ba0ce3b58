//! Circle-invariant forms on T⁴ = S¹ × T³.
//!
//! A k-form is stored as the pair `(a, b)` meaning `dθ∧a + b`, with `a` a
//! (k−1)-form and `b` a k-form on T³. Top-degree coefficients are taken
//! against `dθ∧dx¹∧dx²∧dx³`. Sign conventions forced by `dθ` being the
//! first factor:
//!
//! - `d(dθ∧a + b) = dθ∧(−da) + db`
//! - `ι_{∂_j}(dθ∧a + b) = dθ∧(−ι_j a) + ι_j b`
//! - `ι_{∂θ}(dθ∧a + b) = a`

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Form3, Grid3, ScalarField3, SymMatrixField3};

/// Which ambient coordinate `x⁰..x³` of T⁴ generates the circle action.
///
/// The remaining three coordinates, in increasing order, become the base
/// axes `(y¹, y², y³)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct CircleAxis(u8);

impl CircleAxis {
    pub const X0: Self = Self(0);
    pub const X3: Self = Self(3);

    pub fn new(axis: u8) -> Result<Self> {
        if axis > 3 {
            return Err(Error::InvalidParameter {
                name: "circle_axis",
                reason: format!("{axis} is not one of 0, 1, 2, 3"),
            });
        }
        Ok(Self(axis))
    }

    pub fn index(&self) -> usize {
        self.0 as usize
    }

    /// Ambient indices of the base axes `(y¹, y², y³)`.
    pub fn base_axes(&self) -> [usize; 3] {
        let mut out = [0; 3];
        let mut k = 0;
        for c in 0..4 {
            if c != self.index() {
                out[k] = c;
                k += 1;
            }
        }
        out
    }

    /// `dθ∧dy¹∧dy²∧dy³ = parity · dx⁰∧dx¹∧dx²∧dx³`.
    pub fn parity(&self) -> f64 {
        if self.0.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

impl TryFrom<u8> for CircleAxis {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        Self::new(v)
    }
}

impl From<CircleAxis> for u8 {
    fn from(c: CircleAxis) -> u8 {
        c.0
    }
}

/// An S¹-invariant form `dθ∧a + b` on T⁴.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantForm4 {
    degree: usize,
    a: Option<Form3>,
    b: Option<Form3>,
}

impl InvariantForm4 {
    /// Builds a k-form from its parts; `a` must be absent for k = 0 and
    /// `b` for k = 4.
    pub fn new(degree: usize, a: Option<Form3>, b: Option<Form3>) -> Result<Self> {
        if degree > 4 {
            return Err(Error::DegreeOutOfRange {
                op: "InvariantForm4::new",
                degree,
            });
        }
        let a_ok = match &a {
            None => degree == 0,
            Some(f) => degree >= 1 && f.degree() == degree - 1,
        };
        let b_ok = match &b {
            None => degree == 4,
            Some(f) => degree <= 3 && f.degree() == degree,
        };
        if !a_ok || !b_ok {
            return Err(Error::InvalidParameter {
                name: "parts",
                reason: format!("parts do not match an invariant {degree}-form"),
            });
        }
        if let (Some(x), Some(y)) = (&a, &b) {
            x.grid().ensure_same(y.grid())?;
        }
        Ok(Self { degree, a, b })
    }

    /// Invariant 2-form `dθ∧a + b` from a base 1-form and a base 2-form.
    pub fn two_form(a: Form3, b: Form3) -> Result<Self> {
        Self::new(2, Some(a), Some(b))
    }

    /// Pulls a base k-form back to T⁴.
    pub fn from_base(b: Form3) -> Self {
        let degree = b.degree();
        let a = (degree > 0).then(|| Form3::zero(*b.grid(), degree - 1));
        Self { degree, a, b: Some(b) }
    }

    /// `dθ∧a`.
    pub fn from_dtheta(a: Form3) -> Self {
        let degree = a.degree() + 1;
        let b = (degree < 4).then(|| Form3::zero(*a.grid(), degree));
        Self { degree, a: Some(a), b }
    }

    pub fn zero(grid: Grid3, degree: usize) -> Self {
        assert!(degree <= 4);
        Self {
            degree,
            a: (degree > 0).then(|| Form3::zero(grid, degree - 1)),
            b: (degree < 4).then(|| Form3::zero(grid, degree)),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn grid(&self) -> &Grid3 {
        self.a.as_ref().or(self.b.as_ref()).expect("form has a part").grid()
    }

    /// The `dθ∧·` part.
    pub fn dtheta_part(&self) -> Option<&Form3> {
        self.a.as_ref()
    }

    /// The purely basic part.
    pub fn base_part(&self) -> Option<&Form3> {
        self.b.as_ref()
    }

    pub fn max_abs(&self) -> f64 {
        let m = |f: &Option<Form3>| f.as_ref().map_or(0.0, Form3::max_abs);
        m(&self.a).max(m(&self.b))
    }

    fn zip(&self, other: &Self, f: impl Fn(&Form3, &Form3) -> Form3) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let pair = |x: &Option<Form3>, y: &Option<Form3>| match (x, y) {
            (Some(x), Some(y)) => Some(f(x, y)),
            _ => None,
        };
        Self {
            degree: self.degree,
            a: pair(&self.a, &other.a),
            b: pair(&self.b, &other.b),
        }
    }

    fn map(&self, f: impl Fn(&Form3) -> Form3) -> Self {
        Self {
            degree: self.degree,
            a: self.a.as_ref().map(&f),
            b: self.b.as_ref().map(&f),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, Form3::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, Form3::sub)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|f| f.scale(c))
    }

    /// `Σ c_k · forms_k`.
    pub fn linear_combination(coeffs: &[f64], forms: &[&InvariantForm4]) -> Self {
        assert_eq!(coeffs.len(), forms.len());
        let mut acc = forms[0].scale(coeffs[0]);
        for (c, f) in coeffs.iter().zip(forms).skip(1) {
            acc = acc.add(&f.scale(*c));
        }
        acc
    }

    /// Exterior derivative on T⁴.
    pub fn d4(&self) -> Result<Self> {
        if self.degree >= 4 {
            return Err(Error::DegreeOutOfRange {
                op: "d4",
                degree: self.degree,
            });
        }
        let grid = *self.grid();
        let a = match &self.a {
            Some(a) => a.d()?.neg(),
            None => Form3::zero(grid, 0),
        };
        let b = match &self.b {
            Some(b) if b.degree() < 3 => Some(b.d()?),
            _ => None,
        };
        let degree = self.degree + 1;
        let b = if degree < 4 { b } else { None };
        Ok(Self { degree, a: Some(a), b })
    }

    /// Wedge product `(a_u, b_u)∧(a_w, b_w) = (a_u∧b_w + (−1)^{|b_u|} b_u∧a_w, b_u∧b_w)`.
    pub fn wedge4(&self, other: &Self) -> Result<Self> {
        let (k, l) = (self.degree, other.degree);
        if k + l > 4 {
            return Err(Error::DegreeOverflow { left: k, right: l });
        }
        let degree = k + l;
        let grid = *self.grid();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let mut a = if degree > 0 { Some(Form3::zero(grid, degree - 1)) } else { None };
        if let (Some(au), Some(bw)) = (&self.a, &other.b) {
            a = Some(a.unwrap().add(&au.wedge(bw)?));
        }
        if let (Some(bu), Some(aw)) = (&self.b, &other.a) {
            a = Some(a.unwrap().add(&bu.wedge(aw)?.scale(sign)));
        }
        let b = match (&self.b, &other.b) {
            (Some(bu), Some(bw)) if degree <= 3 => Some(bu.wedge(bw)?),
            _ if degree <= 3 => Some(Form3::zero(grid, degree)),
            _ => None,
        };
        Ok(Self { degree, a, b })
    }

    /// `ι_{∂θ}`: returns the `dθ`-part as a base form.
    pub fn contract_circle(&self) -> Result<Form3> {
        self.a.clone().ok_or(Error::DegreeOutOfRange {
            op: "contract_circle",
            degree: 0,
        })
    }

    /// `ι_{∂_axis}` for a base coordinate field (axis 0, 1, 2 for y¹, y², y³).
    pub fn contract_base(&self, axis: usize) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::DegreeOutOfRange {
                op: "contract_base",
                degree: 0,
            });
        }
        let grid = *self.grid();
        let degree = self.degree - 1;
        let a = match &self.a {
            Some(a) if a.degree() > 0 => Some(a.interior(axis)?.neg()),
            _ if degree > 0 => Some(Form3::zero(grid, degree - 1)),
            _ => None,
        };
        let b = match &self.b {
            Some(b) => Some(b.interior(axis)?),
            None => Some(Form3::zero(grid, degree)),
        };
        Ok(Self { degree, a, b })
    }

    /// Coefficient of a 4-form against `dθ∧dy¹∧dy²∧dy³`.
    pub fn top_coefficient(&self) -> Result<&ScalarField3> {
        match (&self.a, self.degree) {
            (Some(a), 4) => Ok(a.component(0)),
            _ => Err(Error::DegreeOutOfRange {
                op: "top_coefficient",
                degree: self.degree,
            }),
        }
    }

    /// `‖d4 ω‖∞ / (1 + ‖ω‖∞)`.
    pub fn closedness_residual(&self) -> Result<f64> {
        Ok(self.d4()?.max_abs() / (1.0 + self.max_abs()))
    }

    /// Pairings of a closed invariant 2-form with the six coordinate 2-tori,
    /// ordered `(θ1, θ2, θ3, 23, 31, 12)`.
    pub fn torus_periods(&self, tol_closed: f64) -> Result<[f64; 6]> {
        if self.degree != 2 {
            return Err(Error::DegreeOutOfRange {
                op: "torus_periods",
                degree: self.degree,
            });
        }
        let residual = self.closedness_residual()?;
        if residual > tol_closed {
            return Err(Error::NotClosed {
                residual,
                tol: tol_closed,
            });
        }
        Ok(self.torus_periods_unchecked())
    }

    pub(crate) fn torus_periods_unchecked(&self) -> [f64; 6] {
        let area = TAU * TAU;
        let a = self.a.as_ref().expect("2-form");
        let b = self.b.as_ref().expect("2-form");
        [
            area * a.component(0).mean(),
            area * a.component(1).mean(),
            area * a.component(2).mean(),
            area * b.component(0).mean(),
            area * b.component(1).mean(),
            area * b.component(2).mean(),
        ]
    }

    pub fn resample(&self, n: usize) -> Result<Self> {
        Ok(Self {
            degree: self.degree,
            a: self.a.as_ref().map(|f| f.resample(n)).transpose()?,
            b: self.b.as_ref().map(|f| f.resample(n)).transpose()?,
        })
    }
}

/// Pointwise Gram matrix of a triple under the wedge pairing:
/// `ω_i∧ω_j = W_ij · dθ∧dy¹∧dy²∧dy³`.
#[derive(Clone, Debug, PartialEq)]
pub struct WedgeGram {
    pub entries: SymMatrixField3,
}

pub fn wedge_gram(omega: &[InvariantForm4; 3]) -> Result<WedgeGram> {
    let top = |i: usize, j: usize| -> Result<ScalarField3> { Ok(omega[i].wedge4(&omega[j])?.top_coefficient()?.clone()) };
    let entries = SymMatrixField3::new([top(0, 0)?, top(1, 1)?, top(2, 2)?, top(0, 1)?, top(0, 2)?, top(1, 2)?])?;
    Ok(WedgeGram { entries })
}

/// Invariant 2-form given by ambient coefficients `ω_{μν}` (μ < ν over
/// x⁰..x³), functions of the base coordinates only.
#[derive(Clone, Debug)]
pub struct AmbientTwoForm {
    /// Ordered (01, 02, 03, 12, 13, 23).
    pub coefficients: [ScalarField3; 6],
}

impl AmbientTwoForm {
    fn coefficient(&self, mu: usize, nu: usize) -> ScalarField3 {
        const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let key = (mu.min(nu), mu.max(nu));
        let slot = PAIRS.iter().position(|&p| p == key).expect("distinct indices");
        let c = &self.coefficients[slot];
        if mu < nu {
            c.clone()
        } else {
            -c
        }
    }

    /// Re-expresses the form in the `(θ, y¹, y², y³)` frame of `axis`.
    pub fn to_invariant(&self, axis: CircleAxis) -> InvariantForm4 {
        let c = axis.index();
        let [r1, r2, r3] = axis.base_axes();
        let a = Form3::one_form([self.coefficient(c, r1), self.coefficient(c, r2), self.coefficient(c, r3)]);
        let b = Form3::two_form([self.coefficient(r2, r3), self.coefficient(r3, r1), self.coefficient(r1, r2)]);
        InvariantForm4 {
            degree: 2,
            a: Some(a),
            b: Some(b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid3 {
        Grid3::new(8).unwrap()
    }

    fn flat(i: usize) -> InvariantForm4 {
        let g = grid();
        let mut e = [0.0; 3];
        e[i] = 1.0;
        InvariantForm4::two_form(Form3::constant_one_form(g, e), Form3::constant_two_form(g, e)).unwrap()
    }

    #[test]
    fn d4_of_dtheta_dx1_vanishes() {
        let w = InvariantForm4::from_dtheta(Form3::constant_one_form(grid(), [1.0, 0.0, 0.0]));
        assert_eq!(w.d4().unwrap().max_abs(), 0.0);
    }

    #[test]
    fn d4_of_base_single_mode() {
        let g = grid();
        let s = ScalarField3::from_fn(g, |p| p[0].sin()).unwrap();
        let w = InvariantForm4::from_base(Form3::one_form([ScalarField3::zeros(g), s, ScalarField3::zeros(g)]));
        let dw = w.d4().unwrap();
        assert!(dw.dtheta_part().unwrap().max_abs() < 1e-15);
        let b = dw.base_part().unwrap();
        let cos = ScalarField3::from_fn(g, |p| p[0].cos()).unwrap();
        assert!((b.component(2) - &cos).max_abs() < 1e-14);
        assert!(b.component(0).max_abs() < 1e-14);
    }

    #[test]
    fn d4_degree_four_is_error() {
        assert!(InvariantForm4::zero(grid(), 4).d4().is_err());
    }

    #[test]
    fn wedge_top_coefficients() {
        let g = grid();
        let u = InvariantForm4::from_dtheta(Form3::constant_one_form(g, [1.0, 0.0, 0.0]));
        let w = InvariantForm4::from_base(Form3::constant_two_form(g, [1.0, 0.0, 0.0]));
        let uw = u.wedge4(&w).unwrap();
        assert_eq!(uw.degree(), 4);
        assert_eq!(uw.top_coefficient().unwrap().get(0), 1.0);
        let om = flat(0);
        assert_eq!(om.wedge4(&om).unwrap().top_coefficient().unwrap().get(3), 2.0);
        assert!(om.wedge4(&uw).is_err());
    }

    #[test]
    fn contractions() {
        let g = grid();
        assert_eq!(flat(0).contract_circle().unwrap().at(0), vec![1.0, 0.0, 0.0]);
        let base = InvariantForm4::from_base(Form3::constant_two_form(g, [1.0, 0.0, 0.0]));
        assert_eq!(base.contract_circle().unwrap().max_abs(), 0.0);
        // ι_{∂₂}(dx²∧dx³) = dx³
        let c = base.contract_base(1).unwrap();
        assert_eq!(c.base_part().unwrap().at(0), vec![0.0, 0.0, 1.0]);
        // ι_{∂₁}(dθ∧dx¹) = −dθ
        let t = InvariantForm4::from_dtheta(Form3::constant_one_form(g, [1.0, 0.0, 0.0]));
        assert_eq!(t.contract_base(0).unwrap().dtheta_part().unwrap().at(0), vec![-1.0]);
    }

    #[test]
    fn contraction_is_a_derivation_on_flat_square() {
        let om = flat(0);
        let u = 1;
        let lhs = om.wedge4(&om).unwrap().contract_base(u).unwrap();
        let rhs = om.contract_base(u).unwrap().wedge4(&om).unwrap().scale(2.0);
        assert_eq!(lhs.sub(&rhs).max_abs(), 0.0);
    }

    #[test]
    fn flat_gram_and_periods() {
        let w = wedge_gram(&[flat(0), flat(1), flat(2)]).unwrap();
        assert_eq!(w.entries.at(0), crate::fields::Sym3::diag(2.0, 2.0, 2.0));
        let p = flat(0).torus_periods(1e-10).unwrap();
        let a = TAU * TAU;
        assert_eq!(p, [a, 0.0, 0.0, a, 0.0, 0.0]);
    }

    #[test]
    fn mean_zero_coefficient_has_zero_periods() {
        let g = grid();
        let c = ScalarField3::from_fn(g, |p| p[0].cos()).unwrap();
        let w = InvariantForm4::from_dtheta(Form3::one_form([c, ScalarField3::zeros(g), ScalarField3::zeros(g)]));
        assert!(w.torus_periods(1e-10).unwrap().iter().all(|p| p.abs() < 1e-13));
    }

    #[test]
    fn periods_reject_non_closed_forms() {
        let g = grid();
        let s = ScalarField3::from_fn(g, |p| p[0].sin()).unwrap();
        let w = InvariantForm4::from_base(Form3::two_form([s, ScalarField3::zeros(g), ScalarField3::zeros(g)]));
        assert!(matches!(w.torus_periods(1e-10), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn circle_axis_relabeling() {
        assert_eq!(CircleAxis::X3.base_axes(), [0, 1, 2]);
        assert_eq!(CircleAxis::X0.base_axes(), [1, 2, 3]);
        assert_eq!(CircleAxis::new(1).unwrap().base_axes(), [0, 2, 3]);
        assert_eq!(CircleAxis::X3.parity(), -1.0);
        assert_eq!(CircleAxis::new(2).unwrap().parity(), 1.0);
        assert!(CircleAxis::new(4).is_err());
    }
}
