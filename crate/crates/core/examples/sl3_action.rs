//! A constant unimodular change of the triple acts on structural data by
//! `σ ↦ PσPᵀ`, `αⁱ ↦ P_ij αʲ`, leaving the connection alone.

use hypersym::fields::Grid3;
use hypersym::generators::random_valid_triple;
use hypersym::hypersymplectic::sl3_act;
use hypersym::structural::extract;
use hypersym::Tolerances;
use nalgebra::Matrix3;

pub fn run() -> hypersym::Result<()> {
    let grid = Grid3::new(16)?;
    let tol = Tolerances::default();
    let t = random_valid_triple(3, grid, 0.3)?;
    let raw: Matrix3<f64> = Matrix3::new(1.2, 0.3, -0.1, 0.0, 0.9, 0.4, 0.2, -0.3, 1.1);
    let p = raw / raw.determinant().cbrt();
    let pt = sl3_act(&p, &t)?;

    let sd = extract(&t, &tol)?;
    let sd_p = extract(&pt, &tol)?;
    let rows: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| p[(i, j)]));

    let l = grid.len() / 2;
    let sigma_err = sd_p.sigma.at(l).sub(&sd.sigma.at(l).congruence(&rows)).max_abs();
    let alpha_err = (0..3)
        .map(|i| {
            let mixed: Vec<f64> = (0..3)
                .map(|c| (0..3).map(|j| rows[i][j] * sd.alphas[j].at(l)[c]).sum())
                .collect();
            (0..3).map(|c| (mixed[c] - sd_p.alphas[i].at(l)[c]).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let beta_err = sd_p.beta.sub(&sd.beta).max_abs();
    println!("det P         {:.15}", p.determinant());
    println!("sigma error   {sigma_err:.2e}");
    println!("alpha error   {alpha_err:.2e}");
    println!("beta change   {beta_err:.2e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> hypersym::Result<()> {
    run()
}
