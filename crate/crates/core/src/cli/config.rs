use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Grid3, ProductRule};
use crate::generators::Preset;
use crate::isotopy::uniform_samples;
use crate::tolerances::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Generate,
    Verify,
    Extract,
    Isotopy,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate => "generate",
            Command::Verify => "verify",
            Command::Extract => "extract",
            Command::Isotopy => "isotopy",
        }
    }
}

/// Everything a run needs. Loaded from TOML, then overridden by flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub generator: Preset,
    /// Serialized triple to use instead of `generator`.
    pub input: Option<PathBuf>,
    pub grid_n: usize,
    pub s_samples: usize,
    pub out: PathBuf,
    pub auto_orient: bool,
    pub normalize: bool,
    pub dealias: bool,
    pub timestamp: bool,
    /// Write structural fields next to the extract report.
    pub dump_fields: bool,
    /// Replaces the computed interpolation matrix (class-changing in general).
    pub manual_b: Option<[[f64; 3]; 3]>,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Verify,
            generator: Preset::Flat,
            input: None,
            grid_n: Grid3::DEFAULT_N,
            s_samples: 11,
            out: PathBuf::from("out"),
            auto_orient: false,
            normalize: false,
            dealias: false,
            timestamp: true,
            dump_fields: false,
            manual_b: None,
            tolerances: Tolerances::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidParameter {
            name: "config",
            reason: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_n < 4 || !self.grid_n.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "grid_n",
                reason: format!("must be even and at least 4, got {}", self.grid_n),
            });
        }
        uniform_samples(self.s_samples)?;
        self.tolerances.validate()?;
        if let Preset::Random { roughness, .. } = self.generator {
            if !(0.0..1.0).contains(&roughness) {
                return Err(Error::InvalidParameter {
                    name: "generator.roughness",
                    reason: format!("must lie in [0, 1), got {roughness}"),
                });
            }
        }
        if let Some(b) = &self.manual_b {
            if b.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "manual_b",
                    reason: "entries must be finite".into(),
                });
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid3> {
        let products = if self.dealias {
            ProductRule::Dealiased
        } else {
            ProductRule::Plain
        };
        Ok(Grid3::new(self.grid_n)?.with_products(products))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_with_nested_generator() {
        let cfg = RunConfig::from_toml(
            r#"
            command = "isotopy"
            grid_n = 16

            [generator]
            name = "fhy"
            circle_axis = 3

            [[generator.m.entries]]
            constant = 1.0
            sin = [0.5]
            [[generator.m.entries]]
            constant = 1.0
            [[generator.m.entries]]
            constant = 1.0
            [[generator.m.entries]]
            [[generator.m.entries]]
            [[generator.m.entries]]

            [tolerances]
            hk = 1e-8
            "#,
        )
        .unwrap();
        assert_eq!(cfg.command, Command::Isotopy);
        assert_eq!(cfg.generator, Preset::named("fhy").unwrap());
        assert_eq!(cfg.tolerances.hk, 1e-8);
        assert_eq!(cfg.tolerances.closed, 1e-10);
        cfg.validate().unwrap();
    }

    #[test]
    fn errors_name_the_field() {
        let e = RunConfig::from_toml("grid_size = 8").unwrap_err().to_string();
        assert!(e.contains("grid_size"), "{e}");
        let mut cfg = RunConfig {
            grid_n: 6,
            ..RunConfig::default()
        };
        cfg.validate().unwrap();
        cfg.grid_n = 7;
        assert!(cfg.validate().unwrap_err().to_string().contains("grid_n"));
        cfg.grid_n = 8;
        cfg.tolerances.pd = 0.0;
        assert!(cfg.validate().unwrap_err().to_string().contains("tolerances.pd"));
        cfg.tolerances.pd = 1e-10;
        cfg.s_samples = 1;
        assert!(cfg.validate().unwrap_err().to_string().contains("s_samples"));
    }
}
