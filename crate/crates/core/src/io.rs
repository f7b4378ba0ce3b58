//! Binary triple bundles.
//!
//! Layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 8     | magic `HSYMFLD\0` |
//! | 4     | schema version (u32) |
//! | 4     | grid N (u32) |
//! | 4     | circle axis 0..=3 (u32) |
//! | 4     | flags (u32), bit 0 set for dealiased products |
//! | 4     | component count (u32), always 18 |
//! | 8·N³ per component | f64 samples, row-major, i₁ slowest |
//!
//! A JSON sidecar next to the bundle lists the component order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Form3, Grid3, ProductRule, ScalarField3};
use crate::forms4::{CircleAxis, InvariantForm4};
use crate::hypersymplectic::HypersymplecticTriple;

pub const MAGIC: &[u8; 8] = b"HSYMFLD\0";
pub const SCHEMA_VERSION: u32 = 1;
const COMPONENTS: u32 = 18;
const LABELS: [&str; 6] = ["theta1", "theta2", "theta3", "23", "31", "12"];

/// Component names in storage order, e.g. `omega1.theta1` for the
/// `dθ∧dy¹` coefficient of ω₁.
pub fn component_names() -> Vec<String> {
    (1..=3)
        .flat_map(|i| LABELS.iter().map(move |l| format!("omega{i}.{l}")))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub schema_version: u32,
    pub grid_n: usize,
    pub circle_axis: CircleAxis,
    pub products: ProductRule,
    pub byte_order: String,
    pub layout: String,
    pub components: Vec<String>,
}

pub fn sidecar(t: &HypersymplecticTriple) -> Sidecar {
    Sidecar {
        schema_version: SCHEMA_VERSION,
        grid_n: t.grid().n(),
        circle_axis: t.circle_axis(),
        products: t.grid().products(),
        byte_order: "little_endian_f64".into(),
        layout: "row_major_i1_slowest".into(),
        components: component_names(),
    }
}

fn fields_of(t: &HypersymplecticTriple) -> Vec<&ScalarField3> {
    t.omega()
        .iter()
        .flat_map(|w| {
            let a = w.dtheta_part().expect("2-form").components();
            let b = w.base_part().expect("2-form").components();
            a.iter().chain(b.iter())
        })
        .collect()
}

pub fn write_triple<W: Write>(t: &HypersymplecticTriple, mut out: W) -> Result<()> {
    let grid = t.grid();
    out.write_all(MAGIC)?;
    let flags = u32::from(grid.products() == ProductRule::Dealiased);
    for v in [SCHEMA_VERSION, grid.n() as u32, t.circle_axis().index() as u32, flags, COMPONENTS] {
        out.write_all(&v.to_le_bytes())?;
    }
    for f in fields_of(t) {
        for v in f.values() {
            out.write_all(&v.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub fn read_triple<R: Read>(mut input: R) -> Result<HypersymplecticTriple> {
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("not a triple bundle (bad magic)".into()));
    }
    let version = read_u32(&mut input)?;
    if version != SCHEMA_VERSION {
        return Err(Error::Format(format!("unsupported schema version {version}")));
    }
    let n = read_u32(&mut input)? as usize;
    let axis = CircleAxis::new(read_u32(&mut input)?.try_into().unwrap_or(u8::MAX))
        .map_err(|e| Error::Format(e.to_string()))?;
    let flags = read_u32(&mut input)?;
    let count = read_u32(&mut input)?;
    if count != COMPONENTS {
        return Err(Error::Format(format!("expected {COMPONENTS} components, got {count}")));
    }
    let products = if flags & 1 == 1 {
        ProductRule::Dealiased
    } else {
        ProductRule::Plain
    };
    let grid = Grid3::new(n)?.with_products(products);
    let mut fields = Vec::with_capacity(COMPONENTS as usize);
    let mut buf = vec![0u8; 8 * grid.len()];
    for _ in 0..COMPONENTS {
        input.read_exact(&mut buf)?;
        let values = buf
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        fields.push(ScalarField3::new(grid, values)?);
    }
    let mut trailing = [0u8; 1];
    if input.read(&mut trailing)? != 0 {
        return Err(Error::Format("trailing bytes after last component".into()));
    }
    let mut it = fields.into_iter();
    let mut take3 = || -> [ScalarField3; 3] { std::array::from_fn(|_| it.next().expect("18 fields")) };
    let mut omega = Vec::with_capacity(3);
    for _ in 0..3 {
        let a = Form3::one_form(take3());
        let b = Form3::two_form(take3());
        omega.push(InvariantForm4::two_form(a, b)?);
    }
    let omega: [InvariantForm4; 3] = omega.try_into().expect("three forms");
    HypersymplecticTriple::new(omega, axis)
}

/// The sidecar path for a bundle: same name with a `.json` extension.
pub fn sidecar_path(bundle: &Path) -> PathBuf {
    bundle.with_extension("json")
}

/// Writes the bundle and its sidecar.
pub fn save_triple(t: &HypersymplecticTriple, path: &Path) -> Result<PathBuf> {
    write_triple(t, BufWriter::new(File::create(path)?))?;
    let side = sidecar_path(path);
    let mut text = serde_json::to_string_pretty(&sidecar(t))?;
    text.push('\n');
    std::fs::write(&side, text)?;
    Ok(side)
}

pub fn load_triple(path: &Path) -> Result<HypersymplecticTriple> {
    read_triple(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fhy_triple, FhyCoefficients};

    #[test]
    fn bit_exact_round_trip() {
        let g = Grid3::new(6).unwrap().with_products(ProductRule::Dealiased);
        let t = fhy_triple(&FhyCoefficients::sine_perturbed(), g, CircleAxis::X3).unwrap();
        let mut buf = Vec::new();
        write_triple(&t, &mut buf).unwrap();
        assert_eq!(buf.len(), 28 + 18 * 8 * 216);
        let back = read_triple(buf.as_slice()).unwrap();
        assert_eq!(back, t);
        let mut again = Vec::new();
        write_triple(&back, &mut again).unwrap();
        assert_eq!(again, buf);
    }

    #[test]
    fn corrupt_headers_rejected() {
        let t = fhy_triple(&FhyCoefficients::sine_perturbed(), Grid3::new(4).unwrap(), CircleAxis::X3).unwrap();
        let mut buf = Vec::new();
        write_triple(&t, &mut buf).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(read_triple(bad.as_slice()), Err(Error::Format(_))));
        let mut long = buf.clone();
        long.push(0);
        assert!(matches!(read_triple(long.as_slice()), Err(Error::Format(_))));
        assert!(read_triple(&buf[..buf.len() - 1]).is_err());
    }
}
