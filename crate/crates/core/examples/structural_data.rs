//! Structural data of a T³-invariant triple with the circle along x³,
//! compared against the closed-form coframe `α¹ = −dx² − M₁₃dx⁰`,
//! `α² = dx¹ − M₂₃dx⁰`, `α³ = −M₃₃dx⁰`, `σ = M/M₃₃`.

use hypersym::fields::{Grid3, Sym3};
use hypersym::forms4::CircleAxis;
use hypersym::generators::{fhy_triple, FhyCoefficients};
use hypersym::structural::{extract, reconstruct};
use hypersym::Tolerances;

pub fn run() -> hypersym::Result<()> {
    let grid = Grid3::new(16)?;
    let m = Sym3 {
        xx: 2.0,
        yy: 1.5,
        zz: 1.2,
        xy: 0.1,
        xz: 0.3,
        yz: -0.2,
    };
    let t = fhy_triple(&FhyCoefficients::constant(m), grid, CircleAxis::X3)?;
    let sd = extract(&t, &Tolerances::default())?;

    let expected_alpha = [[-m.xz, 0.0, -1.0], [-m.yz, 1.0, 0.0], [-m.zz, 0.0, 0.0]];
    let expected_beta = [0.0, m.xz / m.zz, m.yz / m.zz];
    let l = grid.len() / 3;
    let err_alpha = (0..3)
        .flat_map(|i| (0..3).map(move |p| (i, p)))
        .map(|(i, p)| (sd.alphas[i].at(l)[p] - expected_alpha[i][p]).abs())
        .fold(0.0, f64::max);
    let err_beta = (0..3).map(|p| (sd.beta.at(l)[p] - expected_beta[p]).abs()).fold(0.0, f64::max);
    let err_sigma = sd.sigma.at(l).sub(&m.scale(1.0 / m.zz)).max_abs();
    println!("orientation      {:+}", sd.orientation);
    println!("alpha error      {err_alpha:.2e}");
    println!("beta error       {err_beta:.2e}");
    println!("sigma error      {err_sigma:.2e}");

    let back = reconstruct(&sd)?;
    let diff = (0..3).map(|i| back.form(i).sub(t.form(i)).max_abs()).fold(0.0, f64::max);
    println!("round trip       {diff:.2e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> hypersym::Result<()> {
    run()
}
