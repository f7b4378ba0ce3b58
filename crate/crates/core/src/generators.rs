//! Test inputs: the flat triple, the T³-invariant family built from a
//! positive matrix function `M(x⁰)`, seeded random triples and two stress
//! presets.

use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{random_band_limited, random_one_form, Form3, Grid3, ScalarField3, Sym3, SymMatrixField3};
use crate::forms4::{AmbientTwoForm, CircleAxis, InvariantForm4};
use crate::hypersymplectic::{verify_hypersymplectic, HypersymplecticTriple, Status};
use crate::structural::{reconstruct, StructuralData};
use crate::tolerances::Tolerances;

/// `ω_i = dθ∧dxⁱ + ½ε_ijk dxʲ∧dxᵏ` with the circle along x⁰.
pub fn flat_triple(grid: Grid3) -> HypersymplecticTriple {
    let omega = std::array::from_fn(|i| {
        let mut e = [0.0; 3];
        e[i] = 1.0;
        InvariantForm4::two_form(Form3::constant_one_form(grid, e), Form3::constant_two_form(grid, e)).expect("2-form")
    });
    HypersymplecticTriple::new(omega, CircleAxis::X0).expect("consistent grid")
}

/// Trigonometric series for one entry: `c + Σ_k (a_k cos kx + b_k sin kx)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Series {
    pub constant: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl Series {
    pub fn constant(c: f64) -> Self {
        Self {
            constant: c,
            ..Self::default()
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut v = self.constant;
        for (k, a) in self.cos.iter().enumerate() {
            v += a * ((k + 1) as f64 * x).cos();
        }
        for (k, b) in self.sin.iter().enumerate() {
            v += b * ((k + 1) as f64 * x).sin();
        }
        v
    }
}

/// Fourier description of a symmetric matrix function `M(x⁰)`, entries
/// in the order (11, 22, 33, 12, 13, 23).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FhyCoefficients {
    pub entries: [Series; 6],
}

impl FhyCoefficients {
    pub fn constant(m: Sym3) -> Self {
        Self {
            entries: [m.xx, m.yy, m.zz, m.xy, m.xz, m.yz].map(Series::constant),
        }
    }

    /// `M(x⁰) = I + ½ sin(x⁰) E₁₁`.
    pub fn sine_perturbed() -> Self {
        let mut c = Self::constant(Sym3::IDENTITY);
        c.entries[0].sin = vec![0.5];
        c
    }

    pub fn eval(&self, x: f64) -> Sym3 {
        let e = |i: usize| self.entries[i].eval(x);
        Sym3 {
            xx: e(0),
            yy: e(1),
            zz: e(2),
            xy: e(3),
            xz: e(4),
            yz: e(5),
        }
    }

    /// `M` at each x⁰ node of an `n`-point grid; fails at the first node
    /// where it is not positive definite.
    pub fn sample(&self, n: usize) -> Result<Vec<Sym3>> {
        (0..n)
            .map(|i| {
                let m = self.eval(TAU * i as f64 / n as f64);
                if m.min_eigenvalue() > 0.0 {
                    Ok(m)
                } else {
                    Err(Error::MNotPositive { index: i })
                }
            })
            .collect()
    }
}

/// The family `ω_i = dx⁰∧M_ip dx^p + ½ε_ijk dxʲ∧dxᵏ`, viewed with the
/// circle along `axis` (1, 2 or 3; x⁰ cannot be the circle since M
/// depends on it).
pub fn fhy_triple(c: &FhyCoefficients, grid: Grid3, axis: CircleAxis) -> Result<HypersymplecticTriple> {
    if axis.index() == 0 {
        return Err(Error::InvalidParameter {
            name: "circle_axis",
            reason: "the circle cannot be x⁰, which M depends on".into(),
        });
    }
    let samples = c.sample(grid.n())?;
    // x⁰ is the first base coordinate for every admissible axis
    let line = |f: &dyn Fn(&Sym3) -> f64| {
        let v = (0..grid.len()).map(|l| f(&samples[grid.multi_index(l)[0]])).collect();
        ScalarField3::new(grid, v).expect("finite samples")
    };
    let k = |v: f64| ScalarField3::constant(grid, v);
    let omega = std::array::from_fn(|i| {
        let m0 = line(&|m| m.get(i, 0));
        let m1 = line(&|m| m.get(i, 1));
        let m2 = line(&|m| m.get(i, 2));
        // cyclic base part in (x¹, x², x³): dx²³, dx³¹, dx¹² for i = 1, 2, 3
        let (c12, c13, c23) = match i {
            0 => (0.0, 0.0, 1.0),
            1 => (0.0, -1.0, 0.0),
            _ => (1.0, 0.0, 0.0),
        };
        AmbientTwoForm {
            coefficients: [m0, m1, m2, k(c12), k(c13), k(c23)],
        }
        .to_invariant(axis)
    });
    HypersymplecticTriple::new(omega, axis)
}

/// Roughness used when none is given.
pub const DEFAULT_ROUGHNESS: f64 = 0.25;
const MAX_ATTEMPTS: u64 = 8;
const MIN_MARGIN: f64 = 0.1;

/// Seeded random triple near the flat one.
///
/// Draws exact perturbations of the flat coframe, a symmetric σ with
/// eigenvalues in `[½, 3/2]` and a small connection, reconstructs, then
/// replaces each base part by its closed part. Draws are repeated on fresh
/// ChaCha8 streams until the result verifies with margin at least 0.1.
pub fn random_valid_triple(seed: u64, grid: Grid3, roughness: f64) -> Result<HypersymplecticTriple> {
    if !(0.0..1.0).contains(&roughness) {
        return Err(Error::InvalidParameter {
            name: "roughness",
            reason: format!("must lie in [0, 1), got {roughness}"),
        });
    }
    let tol = Tolerances::default();
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let sd = random_structural_data(&mut rng, grid, roughness);
        let raw = reconstruct(&sd)?;
        let t = if raw.closedness_residuals().iter().all(|r| *r <= tol.closed) {
            raw
        } else {
            project_closed(&raw)?
        };
        let report = verify_hypersymplectic(&t, &tol);
        if report.status == Status::Pass && report.margin >= MIN_MARGIN {
            return Ok(t);
        }
    }
    Err(Error::GenerationFailed {
        attempts: MAX_ATTEMPTS as usize,
    })
}

/// Random structural data with closed coframe, scaled by `roughness`.
pub fn random_structural_data(rng: &mut ChaCha8Rng, grid: Grid3, roughness: f64) -> StructuralData {
    // pairwise coframe products must stay below Nyquist
    let modes = 2.min((grid.n() as i64 / 2 - 1) / 2);
    let r = roughness;

    let potentials: [ScalarField3; 3] = std::array::from_fn(|_| random_band_limited(rng, grid, modes, false));
    let grads: [Form3; 3] = std::array::from_fn(|i| Form3::scalar(potentials[i].clone()).d().expect("0-form"));
    let jac = (0..grid.len())
        .map(|l| grads.iter().map(|g| g.at(l).iter().map(|v| v * v).sum::<f64>()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let jac_scale = if jac > 0.0 { 0.3 / jac } else { 0.0 };
    let alphas = std::array::from_fn(|i| {
        let mut e = [0.0; 3];
        e[i] = 1.0;
        Form3::constant_one_form(grid, e).add(&grads[i].scale(r * jac_scale))
    });

    let s_entries: [ScalarField3; 6] = std::array::from_fn(|_| random_band_limited(rng, grid, modes, true));
    let s = SymMatrixField3::new(s_entries).expect("same grid");
    let spread = (0..grid.len())
        .map(|l| {
            let e = s.at(l).eigenvalues();
            e[0].abs().max(e[2].abs())
        })
        .fold(0.0, f64::max);
    let s_scale = if spread > 0.0 { 0.5 / spread } else { 0.0 };
    let sigma = s.map_points(|m| Sym3::IDENTITY.add(&m.scale(r * s_scale)));

    let beta_raw = random_one_form(rng, grid, modes, true);
    let b_max = beta_raw.max_abs();
    let beta = beta_raw.scale(if b_max > 0.0 { 0.3 * r / b_max } else { 0.0 });

    StructuralData::new(beta, alphas, sigma, CircleAxis::X0).expect("σ ≥ ½I by construction")
}

fn project_closed(t: &HypersymplecticTriple) -> Result<HypersymplecticTriple> {
    let omega = std::array::from_fn(|i| {
        let w = t.form(i);
        let a = w.dtheta_part().expect("2-form").clone();
        let b = w.base_part().expect("2-form").closed_part().expect("2-form");
        InvariantForm4::two_form(a, b).expect("2-form")
    });
    HypersymplecticTriple::new(omega, t.circle_axis())
}

/// Near-degenerate member of the T³-invariant family: σ has smallest
/// eigenvalue about 1e-3.
pub fn adversarial_coefficients() -> FhyCoefficients {
    let mut c = FhyCoefficients::sine_perturbed();
    c.entries[1] = Series {
        constant: 1.5e-3,
        cos: vec![],
        sin: vec![0.5e-3],
    };
    c
}

/// Flat triple with the sign of the base part of ω₃ flipped: the wedge
/// Gram matrix is `diag(2, 2, −2)`.
pub fn indefinite_triple(grid: Grid3) -> HypersymplecticTriple {
    let mut omega = flat_triple(grid).into_forms();
    omega[2] = InvariantForm4::two_form(
        Form3::constant_one_form(grid, [0.0, 0.0, 1.0]),
        Form3::constant_two_form(grid, [0.0, 0.0, -1.0]),
    )
    .expect("2-form");
    HypersymplecticTriple::new(omega, CircleAxis::X0).expect("consistent grid")
}

/// Generators addressable by name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Preset {
    Flat,
    Fhy {
        #[serde(default = "FhyCoefficients::sine_perturbed")]
        m: FhyCoefficients,
        #[serde(default = "default_fhy_axis")]
        circle_axis: CircleAxis,
    },
    Random {
        #[serde(default)]
        seed: u64,
        #[serde(default = "default_roughness")]
        roughness: f64,
    },
    Adversarial,
    Indefinite,
}

fn default_fhy_axis() -> CircleAxis {
    CircleAxis::X3
}

fn default_roughness() -> f64 {
    DEFAULT_ROUGHNESS
}

impl Preset {
    pub const NAMES: [&'static str; 5] = ["flat", "fhy", "random", "adversarial", "indefinite"];

    /// Preset with default parameters.
    pub fn named(name: &str) -> Result<Self> {
        Ok(match name {
            "flat" => Preset::Flat,
            "fhy" => Preset::Fhy {
                m: FhyCoefficients::sine_perturbed(),
                circle_axis: CircleAxis::X3,
            },
            "random" => Preset::Random {
                seed: 0,
                roughness: DEFAULT_ROUGHNESS,
            },
            "adversarial" => Preset::Adversarial,
            "indefinite" => Preset::Indefinite,
            other => {
                return Err(Error::InvalidParameter {
                    name: "preset",
                    reason: format!("unknown preset {other:?}, expected one of {:?}", Self::NAMES),
                })
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Flat => "flat",
            Preset::Fhy { .. } => "fhy",
            Preset::Random { .. } => "random",
            Preset::Adversarial => "adversarial",
            Preset::Indefinite => "indefinite",
        }
    }

    pub fn build(&self, grid: Grid3) -> Result<HypersymplecticTriple> {
        match self {
            Preset::Flat => Ok(flat_triple(grid)),
            Preset::Fhy { m, circle_axis } => fhy_triple(m, grid, *circle_axis),
            Preset::Random { seed, roughness } => random_valid_triple(*seed, grid, *roughness),
            Preset::Adversarial => fhy_triple(&adversarial_coefficients(), grid, CircleAxis::X3),
            Preset::Indefinite => Ok(indefinite_triple(grid)),
        }
    }
}
