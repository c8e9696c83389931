use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Table;
use crate::error::{Error, Result};
use crate::mc::{ergodic_run, PrecoderKind, SystemConfig};
use crate::rmt::{
    db_to_linear, linear_to_db, rcipr_operating_point, rcipr_rate_deteq, rcipr_rate_deteq_csi, rcipr_rate_highsnr,
    secrecy_rate_deteq, secrecy_rate_deteq_csi, su_secrecy_capacity_highsnr, sumrate_nosecrecy_deteq, xi_star,
    AdmissibilityConstants, CsiDistortion, LoadPoint,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweptParameter {
    /// Load; `K = round(beta M)` users, so the recorded `beta` is `K / M`.
    Beta,
    RhoDb,
    /// Antennas, at the load of the fixed configuration.
    M,
    TauSq,
    /// Feedback bits `B` of a random vector quantizer, `tau^2 = 2^(-B/(M-1))`.
    FeedbackBits,
}

impl SweptParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweptParameter::Beta => "beta",
            SweptParameter::RhoDb => "rho_db",
            SweptParameter::M => "m",
            SweptParameter::TauSq => "tau_sq",
            SweptParameter::FeedbackBits => "feedback_bits",
        }
    }
}

impl FromStr for SweptParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "beta" => SweptParameter::Beta,
            "rho_db" | "rho-db" => SweptParameter::RhoDb,
            "m" | "M" => SweptParameter::M,
            "tau_sq" | "tau-sq" => SweptParameter::TauSq,
            "feedback_bits" | "feedback-bits" | "b" | "B" => SweptParameter::FeedbackBits,
            _ => return Err(Error::validation(format!("unknown sweep parameter `{s}`"))),
        })
    }
}

/// Rate series evaluated at every swept value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Series {
    /// Ergodic Monte Carlo rate of the chosen precoder.
    Mc,
    /// Large-system rate with perfect CSI.
    Deteq,
    /// Large-system rate with the CSI distortion of the row.
    DeteqCsi,
    /// High-SNR law of the power-reduced precoder.
    Highsnr,
    /// Large-system rate without secrecy constraints.
    Nosecrecy,
    /// High-SNR law of the single-user secrecy capacity.
    SuCapacityHighsnr,
}

impl Series {
    pub fn name(self) -> &'static str {
        match self {
            Series::Mc => "mc",
            Series::Deteq => "deteq",
            Series::DeteqCsi => "deteq_csi",
            Series::Highsnr => "highsnr",
            Series::Nosecrecy => "nosecrecy",
            Series::SuCapacityHighsnr => "su_capacity_highsnr",
        }
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.replace('-', "_").as_str() {
            "mc" => Series::Mc,
            "deteq" => Series::Deteq,
            "deteq_csi" => Series::DeteqCsi,
            "highsnr" => Series::Highsnr,
            "nosecrecy" => Series::Nosecrecy,
            "su_capacity_highsnr" => Series::SuCapacityHighsnr,
            _ => return Err(Error::validation(format!("unknown series `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrecoderChoice {
    Rci,
    RciPr,
}

/// How the RCI regularization is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "XiRepr", into = "String")]
pub enum XiChoice {
    /// Large-system optimum at the row's load and SNR.
    Auto,
    /// Per-realization optimum in Monte Carlo series; analytic series use the
    /// large-system optimum.
    Empirical,
    Value(f64),
}

impl fmt::Display for XiChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XiChoice::Auto => f.write_str("auto"),
            XiChoice::Empirical => f.write_str("empirical"),
            XiChoice::Value(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for XiChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(XiChoice::Auto),
            "empirical" => Ok(XiChoice::Empirical),
            _ => match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(XiChoice::Value(v)),
                _ => Err(Error::validation(format!("xi must be `auto`, `empirical` or a finite number, got `{s}`"))),
            },
        }
    }
}

/// Accepts both `xi = "auto"` and `xi = 0.05` in configuration files.
#[derive(Deserialize)]
#[serde(untagged)]
enum XiRepr {
    Number(f64),
    Text(String),
}

impl TryFrom<XiRepr> for XiChoice {
    type Error = Error;

    fn try_from(r: XiRepr) -> Result<Self> {
        match r {
            XiRepr::Number(v) => v.to_string().parse(),
            XiRepr::Text(s) => s.parse(),
        }
    }
}

impl From<XiChoice> for String {
    fn from(x: XiChoice) -> String {
        x.to_string()
    }
}

/// A one-parameter sweep around a fixed configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: SweptParameter,
    pub values: Vec<f64>,
    pub fixed: SystemConfig,
    pub series: Vec<Series>,
    pub precoder: PrecoderChoice,
    pub xi: XiChoice,
    pub admissibility: AdmissibilityConstants,
}

impl SweepSpec {
    pub fn new(parameter: SweptParameter, values: Vec<f64>, fixed: SystemConfig, series: Vec<Series>) -> Self {
        SweepSpec {
            parameter,
            values,
            fixed,
            series,
            precoder: PrecoderChoice::Rci,
            xi: XiChoice::Auto,
            admissibility: AdmissibilityConstants::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.series.is_empty() {
            return Err(Error::validation("no output series requested"));
        }
        for (i, s) in self.series.iter().enumerate() {
            if self.series[..i].contains(s) {
                return Err(Error::validation(format!("series `{}` requested twice", s.name())));
            }
        }
        if self.values.is_empty() {
            return Err(Error::validation("sweep has no values"));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("sweep values must be finite"));
        }
        let up = self.values.windows(2).all(|w| w[1] > w[0]);
        let down = self.values.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(Error::validation("sweep values must be strictly monotone"));
        }
        let csi_aware = self.series.contains(&Series::Mc) || self.series.contains(&Series::DeteqCsi);
        if matches!(self.parameter, SweptParameter::TauSq | SweptParameter::FeedbackBits) && !csi_aware {
            return Err(Error::validation(format!(
                "sweeping {} needs the `mc` or `deteq_csi` series",
                self.parameter.name()
            )));
        }
        if self.precoder == PrecoderChoice::RciPr && self.xi != XiChoice::Auto {
            return Err(Error::validation("the power-reduced precoder picks its own xi; use --xi auto"));
        }
        self.fixed.validate()?;
        for &v in &self.values {
            self.point(v)?;
        }
        Ok(())
    }

    /// Configuration of the row with swept value `v`.
    fn point(&self, v: f64) -> Result<SystemConfig> {
        let mut c = self.fixed;
        match self.parameter {
            SweptParameter::Beta => {
                if !(v > 0.0) {
                    return Err(Error::validation(format!("beta must be positive, got {v}")));
                }
                c.k = ((v * c.m as f64).round() as usize).max(1);
            }
            SweptParameter::RhoDb => c.rho = db_to_linear(v),
            SweptParameter::M => {
                if !(v >= 1.0 && v.fract() == 0.0) {
                    return Err(Error::validation(format!("M must be a positive integer, got {v}")));
                }
                let beta = self.fixed.beta();
                c.m = v as usize;
                c.k = ((beta * v).round() as usize).max(1);
            }
            SweptParameter::TauSq => c.tau_sq = v,
            SweptParameter::FeedbackBits => {
                if c.m < 2 || v < 0.0 {
                    return Err(Error::validation("feedback sweeps need M >= 2 and B >= 0"));
                }
                c.tau_sq = (-v / (c.m as f64 - 1.0)).exp2();
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = ["m", "k", "beta", "rho_db", "tau_sq"].iter().map(|s| s.to_string()).collect();
        if self.parameter == SweptParameter::FeedbackBits {
            cols.push("feedback_bits".into());
        }
        cols.extend(["xi".to_string(), "r".to_string()]);
        for s in &self.series {
            let n = s.name();
            cols.push(format!("{n}_per_user"));
            cols.push(format!("{n}_per_antenna"));
            if *s == Series::Mc {
                cols.push("mc_stderr_per_user".into());
                cols.push("mc_stderr_per_antenna".into());
                cols.push("mc_skipped".into());
            }
        }
        cols
    }

    fn row(&self, v: f64) -> Result<Vec<f64>> {
        let c = self.point(v)?;
        let beta = c.beta();
        let pr = self.precoder == PrecoderChoice::RciPr;
        let op = rcipr_operating_point(beta, c.rho);
        let xi = match (pr, self.xi) {
            (true, _) => op.xi,
            (false, XiChoice::Value(x)) => x,
            (false, _) => xi_star(beta, c.rho),
        };
        let mut row = vec![c.m as f64, c.k as f64, beta, linear_to_db(c.rho), c.tau_sq];
        if self.parameter == SweptParameter::FeedbackBits {
            row.push(v);
        }
        row.push(xi);
        row.push(if pr { op.r } else { 1.0 });

        for s in &self.series {
            let per_user = match s {
                Series::Mc => {
                    let kind = match (pr, self.xi) {
                        (true, _) => PrecoderKind::RciPr,
                        (false, XiChoice::Empirical) => PrecoderKind::RciEmpirical {
                            constants: self.admissibility,
                        },
                        (false, _) => PrecoderKind::Rci { xi },
                    };
                    let sum = ergodic_run(&c, kind)?;
                    let (k, m) = (c.k as f64, c.m as f64);
                    row.extend([sum.mean / k, sum.mean / m, sum.stderr / k, sum.stderr / m, sum.skipped as f64]);
                    continue;
                }
                Series::Deteq if pr => rcipr_rate_deteq(beta, c.rho)?,
                Series::Deteq => secrecy_rate_deteq(&LoadPoint::new(beta, c.rho, xi)?)?.rate_per_user,
                Series::DeteqCsi if pr => rcipr_rate_deteq_csi(beta, c.rho, c.tau_sq)?,
                Series::DeteqCsi => {
                    let p = LoadPoint::new(beta, c.rho, xi)?;
                    secrecy_rate_deteq_csi(&p, &CsiDistortion::new(c.rho, xi, c.tau_sq)?)?.rate_per_user
                }
                Series::Highsnr => rcipr_rate_highsnr(beta, c.rho),
                Series::Nosecrecy => sumrate_nosecrecy_deteq(beta, c.rho),
                Series::SuCapacityHighsnr => su_secrecy_capacity_highsnr(beta, c.rho),
            };
            row.push(per_user);
            row.push(beta * per_user);
        }
        Ok(row)
    }
}

/// Evaluates every requested series at every swept value, in value order.
///
/// Monte Carlo rows share one seed, so neighbouring rows see the same channel
/// draws up to scaling.
pub fn run_sweep(spec: &SweepSpec) -> Result<Table> {
    spec.validate()?;
    let mut table = Table::new(spec.columns());
    for &v in &spec.values {
        let row = spec.row(v).map_err(|e| Error::Row {
            context: format!("{} = {v}", spec.parameter.name()),
            source: Box::new(e),
        })?;
        table.push(row);
    }
    Ok(table)
}
