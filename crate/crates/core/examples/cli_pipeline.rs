//! Drives the same pipeline as the `hypersym` binary from a TOML config and
//! reads back the JSON report.

use hypersym::cli::{run as run_pipeline, RunConfig};

pub fn run() -> hypersym::Result<()> {
    let out = std::env::temp_dir().join(format!("hypersym-pipeline-{}", std::process::id()));
    let mut cfg = RunConfig::from_toml(
        r#"
        command = "isotopy"
        grid_n = 8
        s_samples = 3
        timestamp = false

        [generator]
        name = "random"
        seed = 9
        roughness = 0.3
        "#,
    )?;
    cfg.out = out.clone();
    let outcome = run_pipeline(&cfg)?;
    let iso = outcome.report.isotopy.as_ref().expect("isotopy section");
    println!("exit code     {}", outcome.exit_code());
    println!("report        {}", outcome.report_path.display());
    println!("artifacts     {:?}", outcome.report.artifacts);
    println!("B             {:?}", iso.b.b);
    println!("period drift  {:.2e}", iso.period_drift);
    std::fs::remove_dir_all(&out)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> hypersym::Result<()> {
    run()
}
