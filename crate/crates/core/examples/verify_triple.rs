//! Certifies the generator presets and prints the definiteness margin,
//! closedness and, for the failing control, the witness point.

use hypersym::fields::Grid3;
use hypersym::generators::Preset;
use hypersym::hypersymplectic::verify_hypersymplectic;
use hypersym::Tolerances;

pub fn run() -> hypersym::Result<()> {
    let grid = Grid3::new(16)?;
    let tol = Tolerances::default();
    for name in Preset::NAMES {
        let t = Preset::named(name)?.build(grid)?;
        let r = verify_hypersymplectic(&t, &tol);
        println!(
            "{name:<12} {:?}  margin {:+.3e}  closed {:.1e}  sign {:+}  witness {:?}",
            r.status,
            r.margin,
            r.closedness_residuals.iter().fold(0.0_f64, |m, v| m.max(*v)),
            r.sign,
            r.witness.index,
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> hypersym::Result<()> {
    run()
}
