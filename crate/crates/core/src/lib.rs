//! Numerical toolkit for S¹-invariant hypersymplectic triples on T⁴.
//!
//! Fields live on a uniform grid of the base T³ with spectral derivatives.
//! A triple is certified (closed, definite), decomposed into its structural
//! data, and deformed along a linear path to a hyperkähler triple in the
//! same cohomology class.

pub mod cli;
pub mod error;
pub mod fields;
pub mod forms4;
pub mod generators;
pub mod hypersymplectic;
pub mod io;
pub mod isotopy;
pub mod structural;
pub mod tolerances;

pub use error::{Error, Result};
pub use forms4::{CircleAxis, InvariantForm4};
pub use hypersymplectic::HypersymplecticTriple;
pub use structural::StructuralData;
pub use tolerances::Tolerances;
