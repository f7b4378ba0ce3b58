//! Spectral exterior calculus on T³: d∘d, the Leibniz rule, Stokes and
//! exact quadrature on a 16³ grid.

use hypersym::fields::{random_band_limited, random_one_form, Form3, Grid3, ScalarField3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run() -> hypersym::Result<()> {
    let grid = Grid3::new(16)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let f = Form3::scalar(random_band_limited(&mut rng, grid, 3, true));
    let a = random_one_form(&mut rng, grid, 3, false);
    let b = random_one_form(&mut rng, grid, 3, false);

    println!("|d d f|      = {:.2e}", f.d()?.d()?.max_abs());
    println!("|d d a|      = {:.2e}", a.d()?.d()?.max_abs());

    // d(a∧b) = da∧b − a∧db for 1-forms
    let lhs = a.wedge(&b)?.d()?;
    let rhs = a.d()?.wedge(&b)?.sub(&a.wedge(&b.d()?)?);
    println!("Leibniz      = {:.2e}", lhs.sub(&rhs).max_abs());

    let two = a.wedge(&b)?;
    println!("∫ d(a∧b)     = {:.2e}", two.d()?.integrate()?);

    let cos = ScalarField3::from_fn(grid, |[x, y, z]| (2.0 * x - y + 3.0 * z).cos())?;
    println!("∫ cos(k·x)   = {:.2e}", Form3::three_form(cos).integrate()?);
    let one = Form3::three_form(ScalarField3::constant(grid, 1.0));
    println!("vol(T³)      = {:.12}", one.integrate()?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> hypersym::Result<()> {
    run()
}
