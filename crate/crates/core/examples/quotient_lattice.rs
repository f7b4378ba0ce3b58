//! Loop periods of the closed coframe: a full-rank lattice means the
//! quotient by the circle is a flat 3-torus.

use hypersym::fields::Grid3;
use hypersym::generators::Preset;
use hypersym::structural::{extract, orient_or_swap, quotient_flat_check};
use hypersym::Tolerances;

pub fn run() -> hypersym::Result<()> {
    let grid = Grid3::new(16)?;
    let tol = Tolerances::default();
    for name in ["flat", "fhy", "random", "adversarial"] {
        let t = orient_or_swap(&Preset::named(name)?.build(grid)?, &tol)?;
        let lat = quotient_flat_check(&extract(&t, &tol)?, &tol)?;
        println!("{name:<12} rank ok {}  det {:+.6}", lat.rank_ok, lat.det);
        for row in lat.lattice {
            println!("    [{:+.6} {:+.6} {:+.6}]", row[0], row[1], row[2]);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> hypersym::Result<()> {
    run()
}
