//! Writes a triple as a binary bundle plus JSON sidecar and reads it back
//! bit for bit.

use hypersym::fields::Grid3;
use hypersym::generators::random_valid_triple;
use hypersym::io::{load_triple, save_triple};

pub fn run() -> hypersym::Result<()> {
    let grid = Grid3::new(8)?;
    let t = random_valid_triple(1, grid, 0.3)?;
    let dir = std::env::temp_dir().join(format!("hypersym-serialization-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("triple.bin");
    let sidecar = save_triple(&t, &path)?;
    let back = load_triple(&path)?;
    println!("bundle   {} bytes", std::fs::metadata(&path)?.len());
    println!("sidecar  {}", std::fs::read_to_string(&sidecar)?.lines().take(4).collect::<Vec<_>>().join(" "));
    println!("identical after reload: {}", back == t);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> hypersym::Result<()> {
    run()
}
