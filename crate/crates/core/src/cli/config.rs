//! Configuration file.
//!
//! TOML with up to four tables, every key optional, unknown keys rejected:
//!
//! ```toml
//! [system]
//! m = 64            # transmit antennas
//! k = 64            # users; or give `beta` instead
//! rho_db = 10.0
//! xi = "auto"       # "auto", "empirical" or a number
//! tau_sq = 0.0
//! trials = 500
//! seed = 7
//! precoder = "rci"  # or "rci_pr"
//!
//! [sweep]
//! parameter = "rho_db"   # beta, rho_db, m, tau_sq, feedback_bits
//! values = [0.0, 10.0, 20.0]
//! series = ["mc", "deteq"]
//!
//! [admissibility]
//! c = 1e-3
//! epsilon = 0.1
//!
//! [figure]
//! m = 64
//! trials = 500
//! seed = 7
//! rho_db = [0.0, 10.0, 20.0]
//! betas = [0.8, 1.0, 1.2]
//! ```
//!
//! Command-line options override file values, which override defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{FigureOverrides, PrecoderChoice, Series, SweptParameter, XiChoice};
use crate::rmt::AdmissibilityConstants;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub beta: Option<f64>,
    pub rho_db: Option<f64>,
    pub xi: Option<XiChoice>,
    pub tau_sq: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub precoder: Option<PrecoderChoice>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub parameter: Option<SweptParameter>,
    pub values: Option<Vec<f64>>,
    pub series: Option<Vec<Series>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub system: SystemSection,
    #[serde(default)]
    pub sweep: SweepSection,
    pub admissibility: Option<AdmissibilityConstants>,
    #[serde(default)]
    pub figure: FigureOverrides,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::validation(format!("config: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| Error::validation(format!("{}: {e}", path.display())))
    }

    pub fn load_optional(path: Option<&Path>) -> Result<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }
}
