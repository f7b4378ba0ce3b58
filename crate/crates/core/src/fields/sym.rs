use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::grid::Grid3;
use super::scalar::ScalarField3;
use crate::error::{Error, Result};

/// Symmetric 3×3 matrix stored by its upper triangle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Sym3 {
    pub xx: f64,
    pub yy: f64,
    pub zz: f64,
    pub xy: f64,
    pub xz: f64,
    pub yz: f64,
}

impl Sym3 {
    pub const IDENTITY: Self = Self::diag(1.0, 1.0, 1.0);

    pub const fn diag(a: f64, b: f64, c: f64) -> Self {
        Self {
            xx: a,
            yy: b,
            zz: c,
            xy: 0.0,
            xz: 0.0,
            yz: 0.0,
        }
    }

    /// Symmetric part of a full matrix.
    pub fn sym_part(m: &[[f64; 3]; 3]) -> Self {
        Self {
            xx: m[0][0],
            yy: m[1][1],
            zz: m[2][2],
            xy: 0.5 * (m[0][1] + m[1][0]),
            xz: 0.5 * (m[0][2] + m[2][0]),
            yz: 0.5 * (m[1][2] + m[2][1]),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match (i.min(j), i.max(j)) {
            (0, 0) => self.xx,
            (1, 1) => self.yy,
            (2, 2) => self.zz,
            (0, 1) => self.xy,
            (0, 2) => self.xz,
            (1, 2) => self.yz,
            _ => panic!("index out of range"),
        }
    }

    pub fn to_array(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.get(i, j)))
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy + self.zz
    }

    pub fn det(&self) -> f64 {
        self.xx * (self.yy * self.zz - self.yz * self.yz) - self.xy * (self.xy * self.zz - self.yz * self.xz)
            + self.xz * (self.xy * self.yz - self.yy * self.xz)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            xx: c * self.xx,
            yy: c * self.yy,
            zz: c * self.zz,
            xy: c * self.xy,
            xz: c * self.xz,
            yz: c * self.yz,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            xx: self.xx + o.xx,
            yy: self.yy + o.yy,
            zz: self.zz + o.zz,
            xy: self.xy + o.xy,
            xz: self.xz + o.xz,
            yz: self.yz + o.yz,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1.0))
    }

    pub fn max_abs(&self) -> f64 {
        [self.xx, self.yy, self.zz, self.xy, self.xz, self.yz]
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Inverse through the adjugate; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let inv = 1.0 / det;
        Some(Self {
            xx: (self.yy * self.zz - self.yz * self.yz) * inv,
            yy: (self.xx * self.zz - self.xz * self.xz) * inv,
            zz: (self.xx * self.yy - self.xy * self.xy) * inv,
            xy: (self.xz * self.yz - self.xy * self.zz) * inv,
            xz: (self.xy * self.yz - self.xz * self.yy) * inv,
            yz: (self.xy * self.xz - self.xx * self.yz) * inv,
        })
    }

    /// `P S Pᵀ`.
    pub fn congruence(&self, p: &[[f64; 3]; 3]) -> Self {
        let s = self.to_array();
        let mut ps = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                ps[i][j] = (0..3).map(|k| p[i][k] * s[k][j]).sum();
            }
        }
        let e = |i: usize, j: usize| -> f64 { (0..3).map(|k| ps[i][k] * p[j][k]).sum() };
        Self {
            xx: e(0, 0),
            yy: e(1, 1),
            zz: e(2, 2),
            xy: e(0, 1),
            xz: e(0, 2),
            yz: e(1, 2),
        }
    }

    /// Eigenvalues in ascending order, closed-form trigonometric method.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let p1 = self.xy * self.xy + self.xz * self.xz + self.yz * self.yz;
        if p1 == 0.0 {
            let mut d = [self.xx, self.yy, self.zz];
            d.sort_by(f64::total_cmp);
            return d;
        }
        let q = self.trace() / 3.0;
        let p2 = (self.xx - q).powi(2) + (self.yy - q).powi(2) + (self.zz - q).powi(2) + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        let b = Self {
            xx: self.xx - q,
            yy: self.yy - q,
            zz: self.zz - q,
            ..*self
        }
        .scale(1.0 / p);
        let r = (0.5 * b.det()).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let largest = q + 2.0 * p * phi.cos();
        let smallest = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
        let middle = 3.0 * q - largest - smallest;
        [smallest, middle, largest]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

/// Symmetric-matrix-valued field (σ₁₁, σ₂₂, σ₃₃, σ₁₂, σ₁₃, σ₂₃).
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrixField3 {
    entries: [ScalarField3; 6],
}

const SLOTS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

impl SymMatrixField3 {
    pub fn new(entries: [ScalarField3; 6]) -> Result<Self> {
        let grid = *entries[0].grid();
        if entries.iter().any(|e| *e.grid() != grid) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { entries })
    }

    pub fn from_fn(grid: Grid3, f: impl Fn(usize) -> Sym3) -> Self {
        let mats: Vec<Sym3> = (0..grid.len()).map(f).collect();
        Self::from_points(grid, &mats)
    }

    pub fn from_points(grid: Grid3, mats: &[Sym3]) -> Self {
        assert_eq!(mats.len(), grid.len());
        let pick = |g: fn(&Sym3) -> f64| ScalarField3::from_raw(grid, mats.iter().map(g).collect());
        Self {
            entries: [
                pick(|m| m.xx),
                pick(|m| m.yy),
                pick(|m| m.zz),
                pick(|m| m.xy),
                pick(|m| m.xz),
                pick(|m| m.yz),
            ],
        }
    }

    pub fn constant(grid: Grid3, m: Sym3) -> Self {
        Self::from_fn(grid, |_| m)
    }

    pub fn grid(&self) -> &Grid3 {
        self.entries[0].grid()
    }

    /// Entries in storage order (11, 22, 33, 12, 13, 23).
    pub fn entries(&self) -> &[ScalarField3; 6] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarField3 {
        let key = (i.min(j), i.max(j));
        let slot = SLOTS.iter().position(|&s| s == key).expect("index out of range");
        &self.entries[slot]
    }

    pub fn at(&self, linear: usize) -> Sym3 {
        let e = |s: usize| self.entries[s].get(linear);
        Sym3 {
            xx: e(0),
            yy: e(1),
            zz: e(2),
            xy: e(3),
            xz: e(4),
            yz: e(5),
        }
    }

    pub fn map_points(&self, f: impl Fn(Sym3) -> Sym3) -> Self {
        let grid = *self.grid();
        Self::from_fn(grid, |l| f(self.at(l)))
    }

    pub fn mean(&self) -> Sym3 {
        let m: Vec<f64> = self.entries.iter().map(ScalarField3::mean).collect();
        Sym3 {
            xx: m[0],
            yy: m[1],
            zz: m[2],
            xy: m[3],
            xz: m[4],
            yz: m[5],
        }
    }

    /// Pointwise smallest eigenvalue.
    pub fn min_eigenvalue_field(&self) -> ScalarField3 {
        let grid = *self.grid();
        ScalarField3::from_raw(grid, (0..grid.len()).map(|l| self.at(l).min_eigenvalue()).collect())
    }

    /// Largest entrywise deviation from another field.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).max_abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(ScalarField3::max_abs).fold(0.0, f64::max)
    }
}
