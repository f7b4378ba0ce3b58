//! The interpolation matrix B, the hyperkähler endpoint `ω^B` and the
//! linear path `(1−s)ω + sω^B` with its diagnostics.

use std::io::Write;

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{CompensatedSum, Form3, ScalarField3, Sym3, SymMatrixField3};
use crate::forms4::InvariantForm4;
use crate::hypersymplectic::{
    definiteness_scan, metric_from_structural, verify_hypersymplectic, HypersymplecticTriple, Status,
};
use crate::structural::{cross, dot, extract, StructuralData};
use crate::tolerances::Tolerances;

/// Constant 3×3 matrix with positive definite symmetric part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BMatrix {
    pub b: [[f64; 3]; 3],
    pub b_sym: Sym3,
    /// Skew part as `(B̌₂₃, B̌₃₁, B̌₁₂)`.
    pub b_skew: [f64; 3],
}

impl BMatrix {
    pub fn new(b: [[f64; 3]; 3]) -> Result<Self> {
        let b_sym = Sym3::sym_part(&b);
        let min = b_sym.min_eigenvalue();
        if min <= 0.0 {
            return Err(Error::BhatNotPositive { min_eigenvalue: min });
        }
        Ok(Self {
            b,
            b_sym,
            b_skew: [
                0.5 * (b[1][2] - b[2][1]),
                0.5 * (b[2][0] - b[0][2]),
                0.5 * (b[0][1] - b[1][0]),
            ],
        })
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.b[i][j])
    }

    pub fn det(&self) -> f64 {
        self.matrix().determinant()
    }
}

/// `B_ij = (∫σ_ij dθ∧α¹²³ + ∫dθ∧α∧αⁱ∧αʲ) / ∫dθ∧α¹²³`.
///
/// The common factor 2π from the circle cancels, so each integral is taken
/// as a grid mean over T³.
pub fn compute_b(sd: &StructuralData) -> Result<BMatrix> {
    if sd.orientation < 0 {
        return Err(Error::NegativeOrientation);
    }
    let grid = *sd.grid();
    let density = sd.frame_density();
    let mut num = [[CompensatedSum::default(); 3]; 3];
    let mut total = CompensatedSum::default();
    for l in 0..grid.len() {
        let d = density.get(l);
        total.add(d);
        let s = sd.sigma.at(l);
        if s.min_eigenvalue() <= 0.0 {
            return Err(Error::SigmaNotPositive { index: l });
        }
        let beta = sd.beta.vector_at(l);
        let a: [[f64; 3]; 3] = std::array::from_fn(|i| sd.alphas[i].vector_at(l));
        for (i, row) in num.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                v.add(s.get(i, j) * d);
                v.add(dot(beta, cross(a[i], a[j])));
            }
        }
    }
    let total = total.value();
    BMatrix::new(num.map(|row| row.map(|v| v.value() / total)))
}

/// `ω_i^B = dθ∧αⁱ + Σ_cyc B_ip α^q∧α^r`.
pub fn hyperkahler_endpoint(sd: &StructuralData, b: &BMatrix) -> Result<HypersymplecticTriple> {
    let min = b.b_sym.min_eigenvalue();
    if min <= 0.0 {
        return Err(Error::BhatNotPositive { min_eigenvalue: min });
    }
    let a = &sd.alphas;
    let c = [a[1].wedge(&a[2])?, a[2].wedge(&a[0])?, a[0].wedge(&a[1])?];
    let omega = std::array::from_fn(|i| {
        let base = Form3::linear_combination(&b.b[i], &[&c[0], &c[1], &c[2]]);
        InvariantForm4::two_form(a[i].clone(), base).expect("2-form")
    });
    HypersymplecticTriple::new(omega, sd.circle_axis)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HkReport {
    /// Max over the grid of `max_ij |Q_ij(x) − Q̄_ij|`.
    pub delta_q: f64,
    /// `tol_hk × tr Q̄`.
    pub threshold: f64,
    pub q_mean: Sym3,
    /// `P = Q̄^{−1/2}`.
    pub normalizer: [[f64; 3]; 3],
    /// Max over the grid of `|ω̃_i∧ω̃_j / (2μ̃) − δ_ij|`.
    pub identity_residual: f64,
    pub passed: bool,
}

/// Checks whether the Q field is constant and how well `Q̄^{−1/2}` turns the
/// triple into a pointwise hyperkähler one.
pub fn verify_hyperkahler(t: &HypersymplecticTriple, tol: &Tolerances) -> Result<HkReport> {
    let mut sd = extract(t, tol)?;
    let mut triple = t.clone();
    if sd.orientation < 0 {
        triple = t.swap_first_two();
        sd = extract(&triple, tol)?;
    }
    let q = metric_from_structural(&sd)?.q;
    let q_mean = q.mean();
    let grid = *q.grid();
    let delta_q = (0..grid.len()).map(|l| q.at(l).sub(&q_mean).max_abs()).fold(0.0, f64::max);
    let threshold = tol.hk * q_mean.trace();

    let eig = SymmetricEigen::new(Matrix3::from_fn(|i, j| q_mean.get(i, j)));
    let inv_sqrt = eig.eigenvalues.map(|l| 1.0 / l.sqrt());
    let p = eig.eigenvectors * Matrix3::from_diagonal(&inv_sqrt) * eig.eigenvectors.transpose();
    let normalized = triple.transform(&p);
    let w = normalized.wedge_gram();
    let scan = definiteness_scan(&w, tol);
    let s = scan.sign as f64;
    let mut identity_residual: f64 = 0.0;
    for l in 0..grid.len() {
        let m = w.entries.at(l);
        let mu = s * (m.scale(s).det() / 8.0).cbrt();
        let dev = m.scale(0.5 / mu).sub(&Sym3::IDENTITY).max_abs();
        identity_residual = identity_residual.max(dev);
    }
    Ok(HkReport {
        delta_q,
        threshold,
        q_mean,
        normalizer: std::array::from_fn(|i| std::array::from_fn(|j| p[(i, j)])),
        identity_residual,
        passed: delta_q <= threshold && scan.status == Status::Pass,
    })
}

/// `(1−s)·t0 + s·t1`.
pub fn interpolate(t0: &HypersymplecticTriple, t1: &HypersymplecticTriple, s: f64) -> Result<HypersymplecticTriple> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameter {
            name: "s",
            reason: format!("must lie in [0, 1], got {s}"),
        });
    }
    t0.grid().ensure_same(t1.grid())?;
    if t0.circle_axis() != t1.circle_axis() {
        return Err(Error::InvalidParameter {
            name: "circle_axis",
            reason: "triples use different circle axes".into(),
        });
    }
    let omega = std::array::from_fn(|i| {
        InvariantForm4::linear_combination(&[1.0 - s, s], &[t0.form(i), t1.form(i)])
    });
    HypersymplecticTriple::new(omega, t0.circle_axis())
}

/// `n` equally spaced samples of `[0, 1]`, endpoints included.
pub fn uniform_samples(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "s_samples",
            reason: format!("need at least 2 samples, got {n}"),
        });
    }
    Ok((0..n).map(|k| k as f64 / (n - 1) as f64).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsotopyOptions {
    pub s_samples: Vec<f64>,
    pub tolerances: Tolerances,
    /// Replaces the computed B; the path may then leave the cohomology class.
    pub manual_b: Option<[[f64; 3]; 3]>,
}

impl Default for IsotopyOptions {
    fn default() -> Self {
        Self {
            s_samples: uniform_samples(11).expect("11 ≥ 2"),
            tolerances: Tolerances::default(),
            manual_b: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleDiagnostics {
    pub s: f64,
    pub passed: bool,
    /// Verification margin of the wedge Gram matrix.
    pub margin_min: f64,
    /// Smallest eigenvalue of σ(s) over the grid.
    pub sigma_min_eigenvalue: f64,
    pub closed_residual_max: f64,
    /// Periods of ω₁, ω₂, ω₃ on the coordinate 2-tori `(θ1, θ2, θ3, 23, 31, 12)`.
    pub periods: [[f64; 6]; 3],
    pub delta_q: f64,
}

/// The two readings of the endpoint Q-matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QReadings {
    /// `B̂ / (det B̂)^{1/3}`.
    pub sym_det: Sym3,
    /// `B̂ / (det B)^{1/3}`.
    pub full_det: Sym3,
    pub max_difference: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotopyReport {
    pub b: BMatrix,
    pub manual_b: bool,
    pub s_samples: Vec<f64>,
    pub samples: Vec<SampleDiagnostics>,
    /// Max over s of `|periods(s) − periods(0)|`.
    pub period_drift: f64,
    /// `period_drift / (1 + max |period|)`.
    pub period_drift_relative: f64,
    /// `|periods(ω^B) − periods(ω)|` relative to `1 + max |period|`.
    pub endpoint_period_mismatch: f64,
    pub class_changing: bool,
    /// Min over the grid of `λ_min σ(½) − min(λ_min σ(0), λ_min σ(1))`.
    pub midpoint_concavity_gap: f64,
    pub endpoint: HkReport,
    pub q_readings: QReadings,
    pub passed: bool,
}

fn periods_max_abs(p: &[[f64; 6]; 3]) -> f64 {
    p.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
}

fn periods_diff(a: &[[f64; 6]; 3], b: &[[f64; 6]; 3]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn delta_q(sd: &StructuralData) -> Result<f64> {
    let q = metric_from_structural(sd)?.q;
    let mean = q.mean();
    Ok((0..q.grid().len()).map(|l| q.at(l).sub(&mean).max_abs()).fold(0.0, f64::max))
}

fn sigma_min_field(sd: &StructuralData) -> ScalarField3 {
    sd.sigma.min_eigenvalue_field()
}

/// Runs the linear isotopy from a verified, positively oriented triple to
/// its hyperkähler endpoint.
pub fn run_isotopy(t: &HypersymplecticTriple, opts: &IsotopyOptions) -> Result<IsotopyReport> {
    let tol = &opts.tolerances;
    let check = verify_hypersymplectic(t, tol);
    if !check.passed {
        return Err(Error::NotVerified {
            reason: format!(
                "input status {:?} (margin {:e} at {:?})",
                check.status, check.margin, check.witness.index
            ),
        });
    }
    let sd = extract(t, tol)?;
    if sd.orientation < 0 {
        return Err(Error::NegativeOrientation);
    }
    let (b, manual_b) = match opts.manual_b {
        Some(m) => (BMatrix::new(m)?, true),
        None => (compute_b(&sd)?, false),
    };
    let endpoint = hyperkahler_endpoint(&sd, &b)?;
    let p0 = t.periods(tol.closed)?;
    let p_end = endpoint.periods(tol.closed)?;
    let scale = 1.0 + periods_max_abs(&p0).max(periods_max_abs(&p_end));
    let endpoint_period_mismatch = periods_diff(&p_end, &p0) / scale;
    let class_changing = endpoint_period_mismatch > tol.period;

    let mut samples = Vec::with_capacity(opts.s_samples.len());
    let mut drift: f64 = 0.0;
    for &s in &opts.s_samples {
        let ts = interpolate(t, &endpoint, s)?;
        let report = verify_hypersymplectic(&ts, tol);
        let periods = ts.periods(tol.closed).unwrap_or_else(|_| {
            std::array::from_fn(|i| ts.form(i).torus_periods_unchecked())
        });
        drift = drift.max(periods_diff(&periods, &p0));
        let (sigma_min, dq) = match extract(&ts, tol) {
            Ok(sds) => (sds.sigma_min_eigenvalue(), delta_q(&sds).unwrap_or(f64::NAN)),
            Err(_) => (f64::NAN, f64::NAN),
        };
        samples.push(SampleDiagnostics {
            s,
            passed: report.passed,
            margin_min: report.margin,
            sigma_min_eigenvalue: sigma_min,
            closed_residual_max: report.closedness_residuals.iter().fold(0.0, |m: f64, r| m.max(*r)),
            periods,
            delta_q: dq,
        });
    }
    let period_drift_relative = drift / scale;

    let mid = extract(&interpolate(t, &endpoint, 0.5)?, tol)?;
    let end_sd = extract(&endpoint, tol)?;
    let (l0, l_half, l1) = (sigma_min_field(&sd), sigma_min_field(&mid), sigma_min_field(&end_sd));
    let midpoint_concavity_gap = (0..t.grid().len())
        .map(|l| l_half.get(l) - l0.get(l).min(l1.get(l)))
        .fold(f64::INFINITY, f64::min);

    let hk = verify_hyperkahler(&endpoint, tol)?;
    let bs = b.b_sym;
    let sym_det = bs.scale(1.0 / bs.det().cbrt());
    let full_det = bs.scale(1.0 / b.det().cbrt());
    let q_readings = QReadings {
        sym_det,
        full_det,
        max_difference: sym_det.sub(&full_det).max_abs(),
    };
    let passed = samples.iter().all(|s| s.passed)
        && period_drift_relative <= tol.period
        && hk.passed
        && midpoint_concavity_gap >= -1e-10;
    Ok(IsotopyReport {
        b,
        manual_b,
        s_samples: opts.s_samples.clone(),
        samples,
        period_drift: drift,
        period_drift_relative,
        endpoint_period_mismatch,
        class_changing,
        midpoint_concavity_gap,
        endpoint: hk,
        q_readings,
        passed,
    })
}

const PERIOD_LABELS: [&str; 6] = ["t1", "t2", "t3", "23", "31", "12"];

impl IsotopyReport {
    /// Per-sample diagnostics as CSV: `s, margin_min, closed_residual_max`,
    /// 18 period columns, `delta_Q`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["s".to_string(), "margin_min".into(), "closed_residual_max".into()];
        for i in 1..=3 {
            for label in PERIOD_LABELS {
                header.push(format!("omega{i}_{label}"));
            }
        }
        header.push("delta_Q".into());
        w.write_record(&header)?;
        for s in &self.samples {
            let mut row = vec![s.s.to_string(), s.margin_min.to_string(), s.closed_residual_max.to_string()];
            row.extend(s.periods.iter().flatten().map(f64::to_string));
            row.push(s.delta_q.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Pointwise σ of a triple's extraction, for path checks.
pub fn extracted_sigma(t: &HypersymplecticTriple, tol: &Tolerances) -> Result<SymMatrixField3> {
    Ok(extract(t, tol)?.sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Grid3;
    use crate::forms4::CircleAxis;
    use crate::generators::{fhy_triple, flat_triple, FhyCoefficients};

    #[test]
    fn flat_has_identity_b_and_trivial_path() {
        let g = Grid3::new(4).unwrap();
        let t = flat_triple(g);
        let tol = Tolerances::default();
        let sd = extract(&t, &tol).unwrap();
        let b = compute_b(&sd).unwrap();
        assert_eq!(b.b_sym, Sym3::IDENTITY);
        assert_eq!(hyperkahler_endpoint(&sd, &b).unwrap(), t);
        let r = run_isotopy(&t, &IsotopyOptions::default()).unwrap();
        assert!(r.passed);
        assert_eq!(r.period_drift, 0.0);
        assert_eq!(r.samples.len(), 11);
        assert!(r.samples.iter().all(|s| s.margin_min == 1.0));
    }

    #[test]
    fn b_split_is_exact() {
        let m = [[2.0, 0.5, 0.0], [-0.5, 1.0, 0.25], [0.1, 0.0, 1.5]];
        let b = BMatrix::new(m).unwrap();
        let a = b.b_sym.to_array();
        let skew = [[0.0, b.b_skew[2], -b.b_skew[1]], [-b.b_skew[2], 0.0, b.b_skew[0]], [b.b_skew[1], -b.b_skew[0], 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a[i][j] + skew[i][j], m[i][j]);
            }
        }
        assert!(matches!(
            BMatrix::new([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]]),
            Err(Error::BhatNotPositive { .. })
        ));
    }

    #[test]
    fn interpolation_endpoints_and_errors() {
        let t = flat_triple(Grid3::new(4).unwrap());
        let u = t.scale(2.0);
        assert_eq!(interpolate(&t, &u, 0.0).unwrap(), t);
        assert_eq!(interpolate(&t, &u, 1.0).unwrap(), u);
        assert!(interpolate(&t, &u, 1.5).is_err());
        let other = flat_triple(Grid3::new(6).unwrap());
        assert!(matches!(interpolate(&t, &other, 0.5), Err(Error::GridMismatch)));
    }

    #[test]
    fn csv_has_22_columns() {
        let g = Grid3::new(4).unwrap();
        let t = fhy_triple(&FhyCoefficients::sine_perturbed(), g, CircleAxis::X3).unwrap();
        let opts = IsotopyOptions {
            s_samples: uniform_samples(3).unwrap(),
            ..IsotopyOptions::default()
        };
        let r = run_isotopy(&t, &opts).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines.iter().all(|l| l.split(',').count() == 22));
    }
}
