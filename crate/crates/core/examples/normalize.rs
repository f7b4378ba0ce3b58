//! Rescales a triple so its intersection matrix is `2·I`.

use hypersym::fields::Grid3;
use hypersym::generators::random_valid_triple;
use hypersym::hypersymplectic::{intersection_matrix, normalize_triple};

pub fn run() -> hypersym::Result<()> {
    let grid = Grid3::new(16)?;
    let t = random_valid_triple(5, grid, 0.5)?.scale(1.7);
    println!("G before:{:.6}", intersection_matrix(&t));
    let (tn, p) = normalize_triple(&t)?;
    println!("P:{p:.6}");
    println!("G after:{:.6}", intersection_matrix(&tn));
    Ok(())
}

#[allow(dead_code)]
fn main() -> hypersym::Result<()> {
    run()
}
