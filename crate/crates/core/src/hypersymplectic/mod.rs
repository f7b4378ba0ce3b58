//! Invariant triples of closed 2-forms and their hypersymplectic certification.

mod metric;

pub use metric::{gformula_entry, metric_from_gformula, metric_from_structural, MetricField, VectorSlot};

use std::f64::consts::TAU;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Form3, Grid3};
use crate::forms4::{wedge_gram, CircleAxis, InvariantForm4, WedgeGram};
use crate::tolerances::Tolerances;

/// Three invariant 2-forms on T⁴ sharing a grid and a circle axis.
#[derive(Clone, Debug, PartialEq)]
pub struct HypersymplecticTriple {
    omega: [InvariantForm4; 3],
    circle_axis: CircleAxis,
}

impl HypersymplecticTriple {
    pub fn new(omega: [InvariantForm4; 3], circle_axis: CircleAxis) -> Result<Self> {
        if let Some(w) = omega.iter().find(|w| w.degree() != 2) {
            return Err(Error::DegreeOutOfRange {
                op: "HypersymplecticTriple::new",
                degree: w.degree(),
            });
        }
        let grid = *omega[0].grid();
        for w in &omega[1..] {
            grid.ensure_same(w.grid())?;
        }
        Ok(Self { omega, circle_axis })
    }

    pub fn omega(&self) -> &[InvariantForm4; 3] {
        &self.omega
    }

    pub fn form(&self, i: usize) -> &InvariantForm4 {
        &self.omega[i]
    }

    pub fn into_forms(self) -> [InvariantForm4; 3] {
        self.omega
    }

    pub fn grid(&self) -> &Grid3 {
        self.omega[0].grid()
    }

    pub fn circle_axis(&self) -> CircleAxis {
        self.circle_axis
    }

    /// The base 1-forms `ι_{∂θ} ω_i`.
    pub fn circle_contractions(&self) -> [Form3; 3] {
        std::array::from_fn(|i| self.omega[i].contract_circle().expect("2-form"))
    }

    pub fn closedness_residuals(&self) -> [f64; 3] {
        std::array::from_fn(|i| self.omega[i].closedness_residual().expect("2-form"))
    }

    /// `ω̃_i = Σ_j P_ij ω_j` for any constant matrix.
    pub fn transform(&self, p: &Matrix3<f64>) -> Self {
        let omega = std::array::from_fn(|i| {
            InvariantForm4::linear_combination(
                &[p[(i, 0)], p[(i, 1)], p[(i, 2)]],
                &[&self.omega[0], &self.omega[1], &self.omega[2]],
            )
        });
        Self {
            omega,
            circle_axis: self.circle_axis,
        }
    }

    /// `(ω₂, ω₁, ω₃)`.
    pub fn swap_first_two(&self) -> Self {
        let [a, b, c] = self.omega.clone();
        Self {
            omega: [b, a, c],
            circle_axis: self.circle_axis,
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            omega: std::array::from_fn(|i| self.omega[i].scale(c)),
            circle_axis: self.circle_axis,
        }
    }

    pub fn wedge_gram(&self) -> WedgeGram {
        wedge_gram(&self.omega).expect("2-forms")
    }

    /// Periods of the three forms (3 × 6), refusing non-closed forms.
    pub fn periods(&self, tol_closed: f64) -> Result<[[f64; 6]; 3]> {
        Ok([
            self.omega[0].torus_periods(tol_closed)?,
            self.omega[1].torus_periods(tol_closed)?,
            self.omega[2].torus_periods(tol_closed)?,
        ])
    }

    pub fn resample(&self, n: usize) -> Result<Self> {
        Ok(Self {
            omega: [
                self.omega[0].resample(n)?,
                self.omega[1].resample(n)?,
                self.omega[2].resample(n)?,
            ],
            circle_axis: self.circle_axis,
        })
    }
}

/// Outcome of a definiteness scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Marginal,
    Fail,
}

/// A grid point named in a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPoint {
    pub linear: usize,
    pub index: [usize; 3],
}

impl GridPoint {
    pub fn new(grid: &Grid3, linear: usize) -> Self {
        Self {
            linear,
            index: grid.multi_index(linear),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub closedness_residuals: [f64; 3],
    pub closed: bool,
    /// Sign `s` with `s·W` positive definite in the internal frame
    /// `dθ∧dy¹²³`; the majority trace sign when no sign works.
    pub sign: i8,
    /// `sign` relative to the ambient orientation `dx⁰¹²³`.
    pub ambient_sign: i8,
    /// Smallest eigenvalue of `s·W` over the grid.
    pub min_eigenvalue: f64,
    /// Smallest `λ_min(s·W) / (tr(s·W)/3)` over the grid.
    pub margin: f64,
    /// Where `margin` is attained.
    pub witness: GridPoint,
    pub definiteness: Status,
    pub status: Status,
    pub passed: bool,
}

/// Pointwise definiteness scan of the wedge Gram matrix plus closedness.
pub fn verify_hypersymplectic(t: &HypersymplecticTriple, tol: &Tolerances) -> VerificationReport {
    let residuals = t.closedness_residuals();
    let closed = residuals.iter().all(|r| *r <= tol.closed);
    let scan = definiteness_scan(&t.wedge_gram(), tol);
    let status = match (closed, scan.status) {
        (false, _) => Status::Fail,
        (true, s) => s,
    };
    let ambient_sign = (scan.sign as f64 * t.circle_axis().parity()) as i8;
    VerificationReport {
        closedness_residuals: residuals,
        closed,
        sign: scan.sign,
        ambient_sign,
        min_eigenvalue: scan.min_eigenvalue,
        margin: scan.margin,
        witness: GridPoint::new(t.grid(), scan.witness),
        definiteness: scan.status,
        status,
        passed: status == Status::Pass,
    }
}

pub(crate) struct DefinitenessScan {
    pub sign: i8,
    pub min_eigenvalue: f64,
    pub margin: f64,
    pub witness: usize,
    pub status: Status,
}

pub(crate) fn definiteness_scan(w: &WedgeGram, tol: &Tolerances) -> DefinitenessScan {
    let grid = *w.entries.grid();
    let positive = (0..grid.len()).filter(|&l| w.entries.at(l).trace() > 0.0).count();
    let sign: i8 = if 2 * positive >= grid.len() { 1 } else { -1 };
    let mut min_eigenvalue = f64::INFINITY;
    let mut margin = f64::INFINITY;
    let mut witness = 0;
    for l in 0..grid.len() {
        let m = w.entries.at(l).scale(sign as f64);
        let lambda = m.min_eigenvalue();
        let scale = (m.trace().abs() / 3.0).max(f64::MIN_POSITIVE);
        let rel = lambda / scale;
        // a non-positive trace cannot belong to a positive definite matrix
        let rel = if m.trace() <= 0.0 { rel.min(-1.0) } else { rel };
        min_eigenvalue = min_eigenvalue.min(lambda);
        if rel < margin {
            margin = rel;
            witness = l;
        }
    }
    let status = if margin > tol.pd {
        Status::Pass
    } else if margin > 0.0 {
        Status::Marginal
    } else {
        Status::Fail
    };
    DefinitenessScan {
        sign,
        min_eigenvalue,
        margin,
        witness,
        status,
    }
}

/// `G_ij = ∫_{T⁴} ω_i∧ω_j` for the ambient orientation `dx⁰∧dx¹∧dx²∧dx³`.
pub fn intersection_matrix(t: &HypersymplecticTriple) -> Matrix3<f64> {
    let w = t.wedge_gram();
    let c = t.circle_axis().parity() * TAU * TAU.powi(3);
    Matrix3::from_fn(|i, j| c * w.entries.entry(i, j).mean())
}

/// Rescales the triple so that `∫ω̃_i∧ω̃_j = 2δ_ij`, using `P = √2·L⁻¹`
/// with `G = L Lᵀ` the Cholesky factorisation.
pub fn normalize_triple(t: &HypersymplecticTriple) -> Result<(HypersymplecticTriple, Matrix3<f64>)> {
    let g = intersection_matrix(t);
    let chol = nalgebra::Cholesky::new(g).ok_or_else(|| Error::GramNotPositive {
        min_eigenvalue: g.symmetric_eigenvalues().min(),
    })?;
    let l_inv = chol
        .l()
        .try_inverse()
        .ok_or(Error::GramNotPositive { min_eigenvalue: 0.0 })?;
    let p = l_inv * std::f64::consts::SQRT_2;
    Ok((t.transform(&p), p))
}

/// Constant SL(3,ℝ) action `ω̃_i = P_ij ω_j`.
pub fn sl3_act(p: &Matrix3<f64>, t: &HypersymplecticTriple) -> Result<HypersymplecticTriple> {
    let det = p.determinant();
    if (det - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnimodular { det });
    }
    Ok(t.transform(p))
}
