//! Structural data `(α, αⁱ, σ)` of an invariant hypersymplectic triple:
//! `ω_i = α∧αⁱ + σ_i1 α²∧α³ + σ_i2 α³∧α¹ + σ_i3 α¹∧α²` with `α = dθ + β`.
//!
//! Extraction and reconstruction are pointwise linear algebra on grid
//! samples; neither uses the grid's product rule.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Form3, Grid3, ScalarField3, Sym3, SymMatrixField3};
use crate::forms4::{CircleAxis, InvariantForm4};
use crate::hypersymplectic::{definiteness_scan, HypersymplecticTriple, Status};
use crate::tolerances::Tolerances;

#[derive(Clone, Debug, PartialEq)]
pub struct StructuralData {
    /// Base part of the connection form, `α = dθ + β`.
    pub beta: Form3,
    /// `αⁱ = ι_{∂θ} ω_i`.
    pub alphas: [Form3; 3],
    pub sigma: SymMatrixField3,
    /// `+1` when the coframe `(α, α¹, α², α³)` is positive for the
    /// orientation the triple induces, i.e. when σ is positive definite.
    pub orientation: i8,
    pub circle_axis: CircleAxis,
}

pub(crate) fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

pub(crate) fn dot(u: [f64; 3], v: [f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

fn norm(u: [f64; 3]) -> f64 {
    dot(u, u).sqrt()
}

/// Coframe 2-forms `c₁ = α²∧α³, c₂ = α³∧α¹, c₃ = α¹∧α²` as cyclic
/// component vectors.
fn coframe_pairs(a: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    [cross(a[1], a[2]), cross(a[2], a[0]), cross(a[0], a[1])]
}

fn from_columns(grid: Grid3, cols: [Vec<f64>; 3], degree: usize) -> Form3 {
    let [x, y, z] = cols.map(|v| ScalarField3::from_raw(grid, v));
    match degree {
        1 => Form3::one_form([x, y, z]),
        _ => Form3::two_form([x, y, z]),
    }
}

impl StructuralData {
    /// Assembles structural data, taking the orientation from the sign of σ.
    pub fn new(beta: Form3, alphas: [Form3; 3], sigma: SymMatrixField3, circle_axis: CircleAxis) -> Result<Self> {
        if beta.degree() != 1 || alphas.iter().any(|a| a.degree() != 1) {
            return Err(Error::InvalidParameter {
                name: "structural data",
                reason: "β and αⁱ must be 1-forms".into(),
            });
        }
        let grid = *beta.grid();
        for a in &alphas {
            grid.ensure_same(a.grid())?;
        }
        grid.ensure_same(sigma.grid())?;
        let orientation = if sigma.at(0).min_eigenvalue() > 0.0 { 1 } else { -1 };
        let sd = Self {
            beta,
            alphas,
            sigma,
            orientation,
            circle_axis,
        };
        if let Some(index) = sd.first_sigma_violation() {
            return Err(Error::SigmaNotPositive { index });
        }
        Ok(sd)
    }

    pub fn grid(&self) -> &Grid3 {
        self.beta.grid()
    }

    fn frame_at(&self, linear: usize) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| self.alphas[i].vector_at(linear))
    }

    /// Density of `α¹∧α²∧α³` against `dy¹²³`, which is `det F`.
    pub fn frame_density(&self) -> ScalarField3 {
        let grid = *self.grid();
        let v = (0..grid.len())
            .map(|l| {
                let a = self.frame_at(l);
                dot(a[0], cross(a[1], a[2]))
            })
            .collect();
        ScalarField3::from_raw(grid, v)
    }

    /// Largest `‖F‖_F ‖F⁻¹‖_F` over the grid, with F the frame matrix.
    pub fn frame_condition(&self) -> f64 {
        (0..self.grid().len())
            .map(|l| {
                let a = self.frame_at(l);
                let f = Matrix3::from_fn(|i, j| a[i][j]);
                f.try_inverse().map_or(f64::INFINITY, |inv| f.norm() * inv.norm())
            })
            .fold(0.0, f64::max)
    }

    /// `‖dαⁱ‖∞ / (1 + ‖αⁱ‖∞)` for each i.
    pub fn alpha_residuals(&self) -> [f64; 3] {
        std::array::from_fn(|i| {
            let a = &self.alphas[i];
            a.d().expect("1-form").max_abs() / (1.0 + a.max_abs())
        })
    }

    /// Smallest eigenvalue of `orientation · σ` over the grid.
    pub fn sigma_min_eigenvalue(&self) -> f64 {
        let s = self.orientation as f64;
        (0..self.grid().len())
            .map(|l| self.sigma.at(l).scale(s).min_eigenvalue())
            .fold(f64::INFINITY, f64::min)
    }

    fn first_sigma_violation(&self) -> Option<usize> {
        let s = self.orientation as f64;
        (0..self.grid().len()).find(|&l| self.sigma.at(l).scale(s).min_eigenvalue() <= 0.0)
    }

    /// Largest deviation from `other` over β, αⁱ and σ, relative to the
    /// larger of the two max-norms (at least 1).
    pub fn max_relative_difference(&self, other: &StructuralData) -> f64 {
        let rel = |a: &Form3, b: &Form3| a.sub(b).max_abs() / a.max_abs().max(b.max_abs()).max(1.0);
        let mut worst = rel(&self.beta, &other.beta);
        for i in 0..3 {
            worst = worst.max(rel(&self.alphas[i], &other.alphas[i]));
        }
        let scale = self.sigma.max_abs().max(other.sigma.max_abs()).max(1.0);
        worst.max(self.sigma.max_abs_diff(&other.sigma) / scale)
    }
}

/// Per-point extraction of the structural data.
///
/// Requires a definite wedge Gram matrix and a nondegenerate frame; input
/// closedness is not required (it is reflected in [`StructuralData::alpha_residuals`]).
pub fn extract(t: &HypersymplecticTriple, tol: &Tolerances) -> Result<StructuralData> {
    let scan = definiteness_scan(&t.wedge_gram(), tol);
    if scan.status == Status::Fail {
        return Err(Error::NotVerified {
            reason: format!("wedge Gram matrix is not definite at linear index {}", scan.witness),
        });
    }
    let grid = *t.grid();
    let n = grid.len();
    let a_forms = t.circle_contractions();
    let b_forms: [&Form3; 3] = std::array::from_fn(|i| t.form(i).base_part().expect("2-form"));

    let mut beta: [Vec<f64>; 3] = std::array::from_fn(|_| Vec::with_capacity(n));
    let mut sigma = Vec::with_capacity(n);
    let mut frame_sign = 0.0;
    for l in 0..n {
        let a: [[f64; 3]; 3] = std::array::from_fn(|i| a_forms[i].vector_at(l));
        let det = dot(a[0], cross(a[1], a[2]));
        let scale = norm(a[0]) * norm(a[1]) * norm(a[2]);
        if !(det.abs() >= tol.frame * scale) || (l > 0 && det.signum() != frame_sign) {
            return Err(Error::FrameDegenerate { index: l, det });
        }
        frame_sign = det.signum();
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            let b = b_forms[i].vector_at(l);
            for (p, entry) in row.iter_mut().enumerate() {
                *entry = dot(b, a[p]) / det;
            }
        }
        sigma.push(Sym3::sym_part(&m));
        let c = [
            0.5 * (m[1][2] - m[2][1]),
            0.5 * (m[2][0] - m[0][2]),
            0.5 * (m[0][1] - m[1][0]),
        ];
        for (axis, col) in beta.iter_mut().enumerate() {
            col.push(c[0] * a[0][axis] + c[1] * a[1][axis] + c[2] * a[2][axis]);
        }
    }
    Ok(StructuralData {
        beta: from_columns(grid, beta, 1),
        alphas: a_forms,
        sigma: SymMatrixField3::from_points(grid, &sigma),
        orientation: (frame_sign * scan.sign as f64) as i8,
        circle_axis: t.circle_axis(),
    })
}

/// `ω_i = (dθ + β)∧αⁱ + Σ_cyc σ_ip α^q∧α^r`. Closedness of the result is
/// not enforced; it is whatever `d(β∧αⁱ + Σ σ_ip α^q∧α^r)` gives.
pub fn reconstruct(sd: &StructuralData) -> Result<HypersymplecticTriple> {
    if let Some(index) = sd.first_sigma_violation() {
        return Err(Error::SigmaNotPositive { index });
    }
    let grid = *sd.grid();
    let n = grid.len();
    let mut b: [[Vec<f64>; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| Vec::with_capacity(n)));
    for l in 0..n {
        let a = sd.frame_at(l);
        let c = coframe_pairs(&a);
        let beta = sd.beta.vector_at(l);
        let s = sd.sigma.at(l);
        for (i, bi) in b.iter_mut().enumerate() {
            let twist = cross(beta, a[i]);
            for (comp, col) in bi.iter_mut().enumerate() {
                let v = twist[comp] + (0..3).map(|p| s.get(i, p) * c[p][comp]).sum::<f64>();
                col.push(v);
            }
        }
    }
    let mut cols = b.into_iter();
    let omega = std::array::from_fn(|i| {
        let base = from_columns(grid, cols.next().expect("three forms"), 2);
        InvariantForm4::two_form(sd.alphas[i].clone(), base).expect("degrees match")
    });
    HypersymplecticTriple::new(omega, sd.circle_axis)
}

/// Returns the triple unchanged when positively oriented, else `(ω₂, ω₁, ω₃)`.
pub fn orient_or_swap(t: &HypersymplecticTriple, tol: &Tolerances) -> Result<HypersymplecticTriple> {
    let sd = extract(t, tol)?;
    Ok(if sd.orientation < 0 { t.swap_first_two() } else { t.clone() })
}

/// Loop periods of the closed coframe on T³.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientLattice {
    /// `lattice[i][j]` is the period of αⁱ along the loop in base direction j.
    pub lattice: [[f64; 3]; 3],
    pub det: f64,
    pub rank_ok: bool,
}

pub fn quotient_flat_check(sd: &StructuralData, tol: &Tolerances) -> Result<QuotientLattice> {
    for r in sd.alpha_residuals() {
        if r > tol.closed {
            return Err(Error::NotClosed {
                residual: r,
                tol: tol.closed,
            });
        }
    }
    let lattice: [[f64; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| sd.alphas[i].loop_period(j).expect("1-form")));
    let det = dot(lattice[0], cross(lattice[1], lattice[2]));
    let scale = norm(lattice[0]) * norm(lattice[1]) * norm(lattice[2]);
    Ok(QuotientLattice {
        lattice,
        det,
        rank_ok: scale > 0.0 && det.abs() >= tol.lattice * scale,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::TAU;

    use super::*;

    fn flat_sd(grid: Grid3) -> StructuralData {
        let e = |i: usize| {
            let mut v = [0.0; 3];
            v[i] = 1.0;
            Form3::constant_one_form(grid, v)
        };
        StructuralData::new(
            Form3::zero(grid, 1),
            [e(0), e(1), e(2)],
            SymMatrixField3::constant(grid, Sym3::IDENTITY),
            CircleAxis::X0,
        )
        .unwrap()
    }

    #[test]
    fn flat_round_trip() {
        let g = Grid3::new(4).unwrap();
        let sd = flat_sd(g);
        let t = reconstruct(&sd).unwrap();
        assert_eq!(t.wedge_gram().entries.at(3), Sym3::diag(2.0, 2.0, 2.0));
        let back = extract(&t, &Tolerances::default()).unwrap();
        assert_eq!(back, sd);
        let lat = quotient_flat_check(&back, &Tolerances::default()).unwrap();
        assert!(lat.rank_ok);
        assert_eq!(lat.lattice[1], [0.0, TAU, 0.0]);
    }

    #[test]
    fn swapped_flat_is_negative_and_swaps_back() {
        let g = Grid3::new(4).unwrap();
        let t = reconstruct(&flat_sd(g)).unwrap();
        let swapped = t.swap_first_two();
        let tol = Tolerances::default();
        let sd = extract(&swapped, &tol).unwrap();
        assert_eq!(sd.orientation, -1);
        assert!(sd.sigma.at(0).max_abs() > 0.0 && sd.sigma.at(0).trace() < 0.0);
        assert_eq!(orient_or_swap(&swapped, &tol).unwrap(), t);
        assert_eq!(orient_or_swap(&t, &tol).unwrap(), t);
    }

    #[test]
    fn twisted_connection_is_recovered() {
        // β = α¹ adds an antisymmetric part to A that extract must attribute to β.
        let g = Grid3::new(4).unwrap();
        let mut sd = flat_sd(g);
        sd.beta = sd.alphas[0].scale(0.5);
        let back = extract(&reconstruct(&sd).unwrap(), &Tolerances::default()).unwrap();
        assert!(back.max_relative_difference(&sd) < 1e-15);
    }

    #[test]
    fn degenerate_frame_is_reported() {
        let g = Grid3::new(4).unwrap();
        let mut sd = flat_sd(g);
        sd.alphas[2] = sd.alphas[1].clone();
        // build the triple by hand; reconstruct's output would still have a
        // definite Gram matrix only if the frame were independent
        let t = reconstruct(&sd).unwrap();
        assert!(matches!(
            extract(&t, &Tolerances::default()),
            Err(Error::FrameDegenerate { .. }) | Err(Error::NotVerified { .. })
        ));
    }

    #[test]
    fn indefinite_sigma_rejected() {
        let g = Grid3::new(4).unwrap();
        let sd = flat_sd(g);
        let bad = SymMatrixField3::constant(g, Sym3::diag(1.0, 1.0, -1.0));
        assert!(matches!(
            StructuralData::new(sd.beta, sd.alphas, bad, CircleAxis::X0),
            Err(Error::SigmaNotPositive { index: 0 })
        ));
    }
}
