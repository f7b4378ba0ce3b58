use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::config::{Command, RunConfig};
use crate::error::Result;
use crate::fields::{ProductRule, Sym3};
use crate::forms4::CircleAxis;
use crate::hypersymplectic::{
    intersection_matrix, normalize_triple, verify_hypersymplectic, GridPoint, HypersymplecticTriple, VerificationReport,
};
use crate::io::save_triple;
use crate::isotopy::{run_isotopy, uniform_samples, IsotopyOptions, IsotopyReport};
use crate::structural::{extract, orient_or_swap, quotient_flat_check, QuotientLattice, StructuralData};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Source {
    pub preset: Option<String>,
    pub input: Option<PathBuf>,
    pub grid_n: usize,
    pub circle_axis: CircleAxis,
    pub products: ProductRule,
}

#[derive(Clone, Debug, Serialize)]
pub struct Normalization {
    pub intersection_matrix: [[f64; 3]; 3],
    pub p: [[f64; 3]; 3],
    pub normalized_intersection_matrix: [[f64; 3]; 3],
}

#[derive(Clone, Debug, Serialize)]
pub struct StructuralSummary {
    pub orientation: i8,
    pub sigma_mean: Sym3,
    pub sigma_min_eigenvalue: f64,
    pub sigma_min_witness: GridPoint,
    pub sigma_max_eigenvalue: f64,
    pub sigma_max_witness: GridPoint,
    /// Largest entrywise deviation of σ from its mean.
    pub sigma_variation: f64,
    pub beta_mean: [f64; 3],
    pub beta_max_abs: f64,
    pub alpha_residuals: [f64; 3],
    pub frame_condition: f64,
    pub frame_density_min: f64,
    pub frame_density_max: f64,
}

impl StructuralSummary {
    pub fn new(sd: &StructuralData) -> Self {
        let grid = *sd.grid();
        let mut lo = (f64::INFINITY, 0);
        let mut hi = (f64::NEG_INFINITY, 0);
        for l in 0..grid.len() {
            let e = sd.sigma.at(l).eigenvalues();
            if e[0] < lo.0 {
                lo = (e[0], l);
            }
            if e[2] > hi.0 {
                hi = (e[2], l);
            }
        }
        let mean = sd.sigma.mean();
        let density = sd.frame_density();
        Self {
            orientation: sd.orientation,
            sigma_mean: mean,
            sigma_min_eigenvalue: lo.0,
            sigma_min_witness: GridPoint::new(&grid, lo.1),
            sigma_max_eigenvalue: hi.0,
            sigma_max_witness: GridPoint::new(&grid, hi.1),
            sigma_variation: (0..grid.len()).map(|l| sd.sigma.at(l).sub(&mean).max_abs()).fold(0.0, f64::max),
            beta_mean: std::array::from_fn(|a| sd.beta.component(a).mean()),
            beta_max_abs: sd.beta.max_abs(),
            alpha_residuals: sd.alpha_residuals(),
            frame_condition: sd.frame_condition(),
            frame_density_min: density.min(),
            frame_density_max: -density.map(|v| -v).min(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: Command,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at_unix: Option<u64>,
    pub source: Source,
    pub orientation_swapped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<Normalization>,
    pub verification: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structural: Option<StructuralSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<QuotientLattice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isotopy: Option<IsotopyReport>,
    pub artifacts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub passed: bool,
}

/// What a run produced.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: Report,
    pub report_path: PathBuf,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.passed {
            0
        } else {
            1
        }
    }
}

fn to_rows(m: &nalgebra::Matrix3<f64>) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
}

fn load_input(cfg: &RunConfig) -> Result<(HypersymplecticTriple, Source)> {
    let (t, preset) = match &cfg.input {
        Some(path) => (crate::io::load_triple(path)?, None),
        None => (cfg.generator.build(cfg.grid()?)?, Some(cfg.generator.name().to_string())),
    };
    let source = Source {
        preset,
        input: cfg.input.clone(),
        grid_n: t.grid().n(),
        circle_axis: t.circle_axis(),
        products: t.grid().products(),
    };
    Ok((t, source))
}

fn write_structural_fields(sd: &StructuralData, path: &Path) -> Result<()> {
    let grid = *sd.grid();
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record([
        "i1", "i2", "i3", "beta1", "beta2", "beta3", "alpha1_1", "alpha1_2", "alpha1_3", "alpha2_1", "alpha2_2",
        "alpha2_3", "alpha3_1", "alpha3_2", "alpha3_3", "sigma11", "sigma22", "sigma33", "sigma12", "sigma13",
        "sigma23",
    ])?;
    for l in 0..grid.len() {
        let idx = grid.multi_index(l);
        let mut row: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        row.extend(sd.beta.at(l).iter().map(f64::to_string));
        for a in &sd.alphas {
            row.extend(a.at(l).iter().map(f64::to_string));
        }
        let s = sd.sigma.at(l);
        row.extend([s.xx, s.yy, s.zz, s.xy, s.xz, s.yz].iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json(value: &impl Serialize, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Executes one command and writes its artifacts under `cfg.out`.
///
/// Configuration, input and I/O problems are errors. Numerical failures
/// after the input is built are recorded in the report, which is still
/// written, and make the run fail.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.out)?;
    let (mut t, source) = load_input(cfg)?;
    let tol = cfg.tolerances;

    let mut normalization = None;
    if cfg.normalize {
        let g = intersection_matrix(&t);
        let (tn, p) = normalize_triple(&t)?;
        normalization = Some(Normalization {
            intersection_matrix: to_rows(&g),
            p: to_rows(&p),
            normalized_intersection_matrix: to_rows(&intersection_matrix(&tn)),
        });
        t = tn;
    }
    let mut orientation_swapped = false;
    if cfg.auto_orient {
        if let Ok(oriented) = orient_or_swap(&t, &tol) {
            orientation_swapped = oriented != t;
            t = oriented;
        }
    }
    let verification = verify_hypersymplectic(&t, &tol);
    let mut report = Report {
        schema_version: REPORT_SCHEMA_VERSION,
        command: cfg.command,
        config: cfg.clone(),
        generated_at_unix: cfg
            .timestamp
            .then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())),
        source,
        orientation_swapped,
        normalization,
        passed: verification.passed,
        verification,
        structural: None,
        lattice: None,
        isotopy: None,
        artifacts: Vec::new(),
        error: None,
    };

    let step: Result<()> = (|| {
        match cfg.command {
            Command::Verify => {}
            Command::Generate => {
                let path = cfg.out.join("triple.bin");
                let side = save_triple(&t, &path)?;
                report.artifacts.push("triple.bin".into());
                report.artifacts.push(file_name(&side));
            }
            Command::Extract => {
                let sd = extract(&t, &tol)?;
                report.structural = Some(StructuralSummary::new(&sd));
                let lattice = quotient_flat_check(&sd, &tol)?;
                report.passed &= lattice.rank_ok && sd.orientation > 0;
                report.lattice = Some(lattice);
                if cfg.dump_fields {
                    write_structural_fields(&sd, &cfg.out.join("structural_fields.csv"))?;
                    report.artifacts.push("structural_fields.csv".into());
                }
            }
            Command::Isotopy => {
                let opts = IsotopyOptions {
                    s_samples: uniform_samples(cfg.s_samples)?,
                    tolerances: tol,
                    manual_b: cfg.manual_b,
                };
                let iso = run_isotopy(&t, &opts)?;
                iso.write_csv(BufWriter::new(File::create(cfg.out.join("isotopy.csv"))?))?;
                report.artifacts.push("isotopy.csv".into());
                report.passed &= iso.passed;
                report.isotopy = Some(iso);
            }
        }
        Ok(())
    })();
    if let Err(e) = step {
        report.error = Some(e.to_string());
        report.passed = false;
    }

    let report_path = cfg.out.join(format!("{}_report.json", cfg.command.name()));
    write_json(&report, &report_path)?;
    Ok(RunOutcome { report, report_path })
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}
