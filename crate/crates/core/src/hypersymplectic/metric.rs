//! The metric `g_ω`, volume `μ_ω` and Q-matrix of a hypersymplectic triple,
//! computed two independent ways.

use nalgebra::{Matrix3, Matrix4, Vector4};

use super::{definiteness_scan, HypersymplecticTriple, Status};
use crate::error::{Error, Result};
use crate::fields::{ScalarField3, Sym3, SymMatrixField3};
use crate::forms4::InvariantForm4;
use crate::structural::StructuralData;
use crate::tolerances::Tolerances;

/// A coordinate vector field of the frame `(∂θ, ∂₁, ∂₂, ∂₃)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorSlot {
    Theta,
    Base(usize),
}

impl VectorSlot {
    pub const ALL: [VectorSlot; 4] = [
        VectorSlot::Theta,
        VectorSlot::Base(0),
        VectorSlot::Base(1),
        VectorSlot::Base(2),
    ];

    fn index(&self) -> usize {
        match self {
            VectorSlot::Theta => 0,
            VectorSlot::Base(a) => a + 1,
        }
    }
}

/// Upper-triangle index pairs of a symmetric 4×4 matrix, row-major.
const PAIRS: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

/// Metric in the coframe `(dθ, dy¹, dy², dy³)` together with the volume
/// density (coefficient of `μ_ω` against `dθ∧dy¹²³`) and the Q-matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricField {
    /// Entries `g_θθ, g_θ1, g_θ2, g_θ3, g_11, g_12, g_13, g_22, g_23, g_33`.
    pub g: [ScalarField3; 10],
    pub volume_density: ScalarField3,
    pub q: SymMatrixField3,
}

impl MetricField {
    pub fn at(&self, linear: usize) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        for (slot, &(i, j)) in PAIRS.iter().enumerate() {
            let v = self.g[slot].get(linear);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        m
    }

    pub fn entry(&self, u: VectorSlot, w: VectorSlot) -> &ScalarField3 {
        let (i, j) = (u.index().min(w.index()), u.index().max(w.index()));
        let slot = PAIRS.iter().position(|&p| p == (i, j)).expect("valid pair");
        &self.g[slot]
    }

    /// First grid index where the metric fails a Cholesky factorisation.
    pub fn first_non_positive(&self) -> Option<usize> {
        let grid = *self.volume_density.grid();
        (0..grid.len()).find(|&l| self.at(l).cholesky().is_none())
    }

    /// Largest of the entrywise relative deviations of `g`, volume and Q
    /// from `reference`, each relative to the reference's max-norm.
    pub fn max_relative_difference(&self, reference: &MetricField) -> f64 {
        let g_scale = reference.g.iter().map(ScalarField3::max_abs).fold(0.0, f64::max);
        let g_diff = self
            .g
            .iter()
            .zip(&reference.g)
            .map(|(a, b)| (a - b).max_abs())
            .fold(0.0, f64::max);
        let v_diff = (&self.volume_density - &reference.volume_density).max_abs() / reference.volume_density.max_abs();
        let q_diff = self.q.max_abs_diff(&reference.q) / reference.q.max_abs();
        (g_diff / g_scale).max(v_diff).max(q_diff)
    }

    /// `max |det Q − 1|` over the grid.
    pub fn det_q_deviation(&self) -> f64 {
        let grid = *self.q.grid();
        (0..grid.len()).map(|l| (self.q.at(l).det() - 1.0).abs()).fold(0.0, f64::max)
    }
}

fn contraction(t: &HypersymplecticTriple, u: VectorSlot, i: usize) -> InvariantForm4 {
    let w = t.form(i);
    match u {
        VectorSlot::Theta => InvariantForm4::from_base(w.contract_circle().expect("2-form")),
        VectorSlot::Base(a) => w.contract_base(a).expect("2-form"),
    }
}

const EPSILON: [([usize; 3], f64); 6] = [
    ([0, 1, 2], 1.0),
    ([1, 2, 0], 1.0),
    ([2, 0, 1], 1.0),
    ([1, 0, 2], -1.0),
    ([0, 2, 1], -1.0),
    ([2, 1, 0], -1.0),
];

/// Top coefficient of `(1/6) ε^{ijk} ι_u ω_i ∧ ι_w ω_j ∧ ω_k`, i.e.
/// `g(u, w)` times the volume density.
pub fn gformula_entry(t: &HypersymplecticTriple, u: VectorSlot, w: VectorSlot) -> ScalarField3 {
    let cu: [InvariantForm4; 3] = std::array::from_fn(|i| contraction(t, u, i));
    let cw: [InvariantForm4; 3] = std::array::from_fn(|i| contraction(t, w, i));
    let mut acc = ScalarField3::zeros(*t.grid());
    for ([i, j, k], sign) in EPSILON {
        let term = cu[i].wedge4(&cw[j]).and_then(|x| x.wedge4(t.form(k))).expect("degrees add to 4");
        let top = term.top_coefficient().expect("4-form");
        acc = &acc + &top.scale(sign);
    }
    acc.scale(1.0 / 6.0)
}

/// Antisymmetric coefficient matrix of `dθ∧a + b` in `(θ, y¹, y², y³)`.
fn two_form_matrix(w: &InvariantForm4, linear: usize) -> Matrix4<f64> {
    let a = w.dtheta_part().expect("2-form").vector_at(linear);
    let b = w.base_part().expect("2-form").vector_at(linear);
    let mut m = Matrix4::zeros();
    for j in 0..3 {
        m[(0, j + 1)] = a[j];
        m[(j + 1, 0)] = -a[j];
    }
    // b = b₂₃ dy²³ + b₃₁ dy³¹ + b₁₂ dy¹²
    m[(2, 3)] = b[0];
    m[(3, 2)] = -b[0];
    m[(3, 1)] = b[1];
    m[(1, 3)] = -b[1];
    m[(1, 2)] = b[2];
    m[(2, 1)] = -b[2];
    m
}

/// Metric from the triple alone: `g(u,w)μ = (1/6)ε^{ijk} ι_uω_i∧ι_wω_j∧ω_k`,
/// volume density `s·(det(sW)/8)^{1/3}`, and `Q_ij = ½ g(ω_i, ω_j)` using
/// the induced inner product on 2-forms.
pub fn metric_from_gformula(t: &HypersymplecticTriple, tol: &Tolerances) -> Result<MetricField> {
    let w = t.wedge_gram();
    let scan = definiteness_scan(&w, tol);
    if scan.status == Status::Fail {
        return Err(Error::NotVerified {
            reason: format!("wedge Gram matrix is not definite at linear index {}", scan.witness),
        });
    }
    let grid = *t.grid();
    let s = scan.sign as f64;
    let volume: Vec<f64> = (0..grid.len())
        .map(|l| s * (w.entries.at(l).scale(s).det() / 8.0).cbrt())
        .collect();
    let volume_density = ScalarField3::from_raw(grid, volume);

    let g: [ScalarField3; 10] = std::array::from_fn(|slot| {
        let (i, j) = PAIRS[slot];
        let top = gformula_entry(t, VectorSlot::ALL[i], VectorSlot::ALL[j]);
        top.zip_map(&volume_density, |x, mu| x / mu)
    });
    let partial = MetricField {
        g,
        volume_density,
        q: SymMatrixField3::constant(grid, Sym3::IDENTITY),
    };
    if let Some(index) = partial.first_non_positive() {
        return Err(Error::MetricNotPositive { index });
    }

    let q_points: Vec<Sym3> = (0..grid.len())
        .map(|l| {
            let inv = partial.at(l).try_inverse().expect("positive definite");
            let om: [Matrix4<f64>; 3] = std::array::from_fn(|i| two_form_matrix(t.form(i), l));
            let pair = |i: usize, j: usize| 0.25 * (om[i].transpose() * inv * om[j] * inv).trace();
            Sym3 {
                xx: pair(0, 0),
                yy: pair(1, 1),
                zz: pair(2, 2),
                xy: pair(0, 1),
                xz: pair(0, 2),
                yz: pair(1, 2),
            }
        })
        .collect();
    Ok(MetricField {
        q: SymMatrixField3::from_points(grid, &q_points),
        ..partial
    })
}

/// Metric from structural data: `g = V⁻¹α² + V Q⁻¹_ij αⁱαʲ`, `μ = V α∧α¹²³`,
/// `Q = σ/V` with `V = (det σ)^{1/3}`.
pub fn metric_from_structural(sd: &StructuralData) -> Result<MetricField> {
    let grid = *sd.grid();
    let n = grid.len();
    let mut g_vals: [Vec<f64>; 10] = std::array::from_fn(|_| Vec::with_capacity(n));
    let mut vol = Vec::with_capacity(n);
    let mut q = Vec::with_capacity(n);
    for l in 0..n {
        let sigma = sd.sigma.at(l);
        if sigma.min_eigenvalue() <= 0.0 {
            return Err(Error::SigmaNotPositive { index: l });
        }
        let v = sigma.det().cbrt();
        let sigma_inv = sigma.inverse().ok_or(Error::SigmaNotPositive { index: l })?;
        let beta = sd.beta.vector_at(l);
        let e_alpha = Vector4::new(1.0, beta[0], beta[1], beta[2]);
        let e: [Vector4<f64>; 3] = std::array::from_fn(|i| {
            let a = sd.alphas[i].vector_at(l);
            Vector4::new(0.0, a[0], a[1], a[2])
        });
        let mut g = e_alpha * e_alpha.transpose() / v;
        for i in 0..3 {
            for j in 0..3 {
                g += e[i] * e[j].transpose() * (v * v * sigma_inv.get(i, j));
            }
        }
        for (slot, &(i, j)) in PAIRS.iter().enumerate() {
            g_vals[slot].push(g[(i, j)]);
        }
        let frame = Matrix3::from_fn(|i, j| sd.alphas[i].vector_at(l)[j]);
        vol.push(v * frame.determinant());
        q.push(sigma.scale(1.0 / v));
    }
    let field = MetricField {
        g: g_vals.map(|v| ScalarField3::from_raw(grid, v)),
        volume_density: ScalarField3::from_raw(grid, vol),
        q: SymMatrixField3::from_points(grid, &q),
    };
    Ok(field)
}
