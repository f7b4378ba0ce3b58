//! The metric of a hypersymplectic triple, computed from the wedge formula
//! and from structural data. The two must agree and det Q must be 1.

use hypersym::fields::Grid3;
use hypersym::generators::random_valid_triple;
use hypersym::hypersymplectic::{metric_from_gformula, metric_from_structural};
use hypersym::structural::extract;
use hypersym::Tolerances;

pub fn run() -> hypersym::Result<()> {
    let grid = Grid3::new(16)?;
    let tol = Tolerances::default();
    let t = random_valid_triple(11, grid, 0.4)?;
    let direct = metric_from_gformula(&t, &tol)?;
    let via_sd = metric_from_structural(&extract(&t, &tol)?)?;

    println!("relative difference  {:.2e}", direct.max_relative_difference(&via_sd));
    println!("max |det Q − 1|      {:.2e}", direct.det_q_deviation());
    println!("positive definite    {}", direct.first_non_positive().is_none());
    println!("g at the origin:\n{:.6}", direct.at(0));
    println!("Q at the origin: {:?}", direct.q.at(0));
    Ok(())
}

#[allow(dead_code)]
fn main() -> hypersym::Result<()> {
    run()
}
