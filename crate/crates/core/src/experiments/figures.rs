use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::sweep::{run_sweep, Series, SweepSpec, SweptParameter};
use super::Table;
use crate::error::{Error, Result};
use crate::mc::{
    build_rci, compute_rates, ergodic_run, map_trials, mean_and_stderr, PrecoderKind, SystemConfig,
};
use crate::optimize::{
    maximize_scalar, optimal_user_count, solve_beta_fixedpoint, xi_star_empirical,
    SearchDomain,
};
use crate::rmt::{
    db_to_linear, gap_constant, rcipr_operating_point, rcipr_rate_deteq, rcipr_rate_deteq_csi, rcipr_rate_highsnr,
    secrecy_rate_deteq, su_secrecy_capacity_highsnr, sumrate_nosecrecy_deteq, sumrate_nosecrecy_highsnr, xi_star,
    AdmissibilityConstants, LoadPoint,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    /// Large-system rate per antenna against the load, with the optimal load.
    Fig1,
    /// Monte Carlo against large-system rate over the SNR.
    Fig2,
    /// Loss from using the large-system regularization instead of the
    /// per-realization optimum.
    Fig3,
    /// Optimal number of users over the SNR.
    Fig4,
    /// RCI against power-reduced RCI for overloaded networks.
    Fig5,
    /// Power-reduced RCI against the no-secrecy and single-user bounds.
    Fig6,
    /// Perfect CSI against CSI error shrinking with the SNR.
    Fig7,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
    ];
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = FigureId::ALL.iter().position(|x| x == self).unwrap() + 1;
        write!(f, "fig{i}")
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .iter()
            .copied()
            .find(|id| id.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::validation(format!("unknown figure `{s}` (expected fig1 to fig7)")))
    }
}

/// Replacements for preset defaults. Unset fields keep the preset's value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigureOverrides {
    /// Antennas. Presets that sweep several antenna counts use this one only.
    pub m: Option<usize>,
    /// Users, for presets defined at a fixed user count.
    pub k: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub rho_db: Option<Vec<f64>>,
    pub betas: Option<Vec<f64>>,
}

const DEFAULT_TRIALS: usize = 500;
const DEFAULT_SEED: u64 = 1;

impl FigureOverrides {
    fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn rho_db(&self, default: &[f64]) -> Vec<f64> {
        self.rho_db.clone().unwrap_or_else(|| default.to_vec())
    }

    fn betas(&self, default: &[f64]) -> Vec<f64> {
        self.betas.clone().unwrap_or_else(|| default.to_vec())
    }

    fn ms(&self, default: &[usize]) -> Vec<usize> {
        self.m.map_or_else(|| default.to_vec(), |m| vec![m])
    }

    fn validate(&self) -> Result<()> {
        if self.m == Some(0) || self.k == Some(0) || self.trials == Some(0) {
            return Err(Error::validation("M, K and trials must be at least 1"));
        }
        for list in [&self.rho_db, &self.betas].into_iter().flatten() {
            if list.is_empty() || list.iter().any(|v| !v.is_finite()) {
                return Err(Error::validation("override lists must be nonempty and finite"));
            }
        }
        if self.betas.iter().flatten().any(|&b| b <= 0.0) {
            return Err(Error::validation("loads must be positive"));
        }
        Ok(())
    }
}

fn steps(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

fn users(beta: f64, m: usize) -> usize {
    ((beta * m as f64).round() as usize).max(1)
}

fn with_context<T>(context: impl FnOnce() -> String, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Row {
        context: context(),
        source: Box::new(e),
    })
}

/// Reproduces one figure as a table.
pub fn run_figure(id: FigureId, o: &FigureOverrides) -> Result<Table> {
    o.validate()?;
    match id {
        FigureId::Fig1 => fig1(o),
        FigureId::Fig2 => fig2(o),
        FigureId::Fig3 => fig3(o),
        FigureId::Fig4 => fig4(o),
        FigureId::Fig5 => fig5(o),
        FigureId::Fig6 => fig6(o),
        FigureId::Fig7 => fig7(o),
    }
}

fn deteq_per_antenna(beta: f64, rho: f64) -> f64 {
    LoadPoint::new(beta, rho, xi_star(beta, rho))
        .and_then(|p| secrecy_rate_deteq(&p))
        .map_or(f64::NAN, |r| r.rate_per_antenna)
}

/// Rate per antenna against the load on a grid, at each SNR, marking the grid
/// maximum. `beta_opt` is the continuous maximizer and `beta_highsnr` the
/// high-SNR fixed point.
fn fig1(o: &FigureOverrides) -> Result<Table> {
    let betas = o.betas(&steps(0.01, 1.99, 0.01));
    let mut t = Table::new(["rho_db", "beta", "deteq_per_antenna", "is_peak", "beta_opt", "beta_highsnr"]);
    for rho_db in o.rho_db(&[0.0, 10.0, 20.0, 30.0]) {
        let rho = db_to_linear(rho_db);
        let rates: Vec<f64> = betas.iter().map(|&b| deteq_per_antenna(b, rho)).collect();
        let mut peak = 0;
        for (i, &r) in rates.iter().enumerate() {
            if r > rates[peak] {
                peak = i;
            }
        }
        let domain = SearchDomain::interval(1e-3, 2.0 - 1e-3)?;
        let (beta_opt, _) = maximize_scalar(|b| deteq_per_antenna(b, rho), &domain, 1e-6)?;
        let beta_hs = solve_beta_fixedpoint(rho, 1e-12)?;
        for (i, (&b, &r)) in betas.iter().zip(&rates).enumerate() {
            t.push(vec![rho_db, b, r, if i == peak { 1.0 } else { 0.0 }, beta_opt, beta_hs]);
        }
    }
    Ok(t)
}

/// Monte Carlo and large-system rate per antenna over the SNR for several
/// loads, one row per (load, SNR).
fn fig2(o: &FigureOverrides) -> Result<Table> {
    let m = o.m.unwrap_or(64);
    let mut out: Option<Table> = None;
    for beta in o.betas(&[0.8, 1.0, 1.2]) {
        let fixed = SystemConfig {
            trials: o.trials(DEFAULT_TRIALS),
            seed: o.seed(),
            ..SystemConfig::new(m, users(beta, m), 1.0)
        };
        let spec = SweepSpec::new(
            SweptParameter::RhoDb,
            o.rho_db(&steps(0.0, 30.0, 5.0)),
            fixed,
            vec![Series::Mc, Series::Deteq],
        );
        let t = with_context(|| format!("beta = {beta}"), run_sweep(&spec))?;
        match out.as_mut() {
            Some(acc) => acc.append(t)?,
            None => out = Some(t),
        }
    }
    Ok(out.expect("at least one load"))
}

/// Mean normalized loss `(R(xi*_M) - R(xi*)) / R(xi*_M)` of the large-system
/// regularization `xi*` against the per-realization optimum `xi*_M`.
fn fig3(o: &FigureOverrides) -> Result<Table> {
    let mut t = Table::new([
        "m",
        "k",
        "beta",
        "rho_db",
        "xi",
        "optimal_per_antenna",
        "large_system_per_antenna",
        "loss",
        "loss_stderr",
        "skipped",
    ]);
    let constants = AdmissibilityConstants::default();
    for beta in o.betas(&[0.8]) {
        for m in o.ms(&[16, 32, 64]) {
            for rho_db in o.rho_db(&[0.0, 10.0, 20.0]) {
                let k = users(beta, m);
                let cfg = SystemConfig {
                    trials: o.trials(DEFAULT_TRIALS),
                    seed: o.seed(),
                    ..SystemConfig::new(m, k, db_to_linear(rho_db))
                };
                let row = with_context(
                    || format!("M = {m}, rho_db = {rho_db}"),
                    loss_row(&cfg, &constants),
                )?;
                let mut r = vec![m as f64, k as f64, cfg.beta(), rho_db];
                r.extend(row);
                t.push(r);
            }
        }
    }
    Ok(t)
}

fn loss_row(cfg: &SystemConfig, constants: &AdmissibilityConstants) -> Result<Vec<f64>> {
    let xi0 = xi_star(cfg.beta(), cfg.rho);
    let domain = SearchDomain::admissible(cfg.beta(), cfg.m, constants);
    let (pairs, skipped) = map_trials(cfg, |_, ch| {
        let xi_m = xi_star_empirical(&ch.h, cfg.rho, &domain)?;
        let best = compute_rates(&ch.h, &build_rci(&ch.h, xi_m)?, cfg.rho)?.sum;
        let large = compute_rates(&ch.h, &build_rci(&ch.h, xi0)?, cfg.rho)?.sum;
        Ok((best, large))
    })?;
    let m = cfg.m as f64;
    let losses: Vec<f64> = pairs
        .iter()
        .map(|&(b, l)| if b > 0.0 { (b - l) / b } else { 0.0 })
        .collect();
    let (loss, loss_se) = mean_and_stderr(&losses);
    let best: Vec<f64> = pairs.iter().map(|p| p.0 / m).collect();
    let large: Vec<f64> = pairs.iter().map(|p| p.1 / m).collect();
    Ok(vec![
        xi0,
        mean_and_stderr(&best).0,
        mean_and_stderr(&large).0,
        loss,
        loss_se,
        skipped as f64,
    ])
}

/// Optimal user count from simulation (exhaustive over `K` with the
/// large-system regularization), from the large-system rate, and from the
/// high-SNR fixed point.
fn fig4(o: &FigureOverrides) -> Result<Table> {
    let mut t = Table::new(["m", "rho_db", "k_mc", "k_deteq", "k_highsnr"]);
    for m in o.ms(&[10, 20, 40]) {
        for rho_db in o.rho_db(&steps(0.0, 30.0, 5.0)) {
            let rho = db_to_linear(rho_db);
            let mut best = (1usize, f64::NEG_INFINITY);
            for k in 1..(2 * m).max(2) {
                let beta = k as f64 / m as f64;
                let cfg = SystemConfig {
                    trials: o.trials(100),
                    seed: o.seed(),
                    ..SystemConfig::new(m, k, rho)
                };
                let s = with_context(
                    || format!("M = {m}, K = {k}, rho_db = {rho_db}"),
                    ergodic_run(&cfg, PrecoderKind::Rci { xi: xi_star(beta, rho) }),
                )?;
                if s.mean > best.1 {
                    best = (k, s.mean);
                }
            }
            let k_hs = (m as f64 * solve_beta_fixedpoint(rho, 1e-12)?).round().max(1.0);
            t.push(vec![m as f64, rho_db, best.0 as f64, optimal_user_count(m, rho) as f64, k_hs]);
        }
    }
    Ok(t)
}

/// Per-user ergodic rate of RCI and of power-reduced RCI for `1 < beta < 2`,
/// with the large-system values and the power reduction.
fn fig5(o: &FigureOverrides) -> Result<Table> {
    let m = o.m.unwrap_or(10);
    let mut t = Table::new([
        "m",
        "k",
        "beta",
        "rho_db",
        "xi",
        "r",
        "power_saving",
        "rci_mc_per_user",
        "rci_mc_stderr",
        "pr_mc_per_user",
        "pr_mc_stderr",
        "rci_deteq_per_user",
        "pr_deteq_per_user",
        "skipped",
    ]);
    for beta in o.betas(&[1.2, 1.4, 1.6]) {
        let k = users(beta, m);
        for rho_db in o.rho_db(&steps(0.0, 40.0, 2.5)) {
            let rho = db_to_linear(rho_db);
            let cfg = SystemConfig {
                trials: o.trials(DEFAULT_TRIALS),
                seed: o.seed(),
                ..SystemConfig::new(m, k, rho)
            };
            let b = cfg.beta();
            let ctx = || format!("beta = {b}, rho_db = {rho_db}");
            let xi = xi_star(b, rho);
            let rci = with_context(ctx, ergodic_run(&cfg, PrecoderKind::Rci { xi }))?;
            let pr = with_context(ctx, ergodic_run(&cfg, PrecoderKind::RciPr))?;
            let op = rcipr_operating_point(b, rho);
            let kf = k as f64;
            let rci_det = with_context(ctx, LoadPoint::new(b, rho, xi).and_then(|p| secrecy_rate_deteq(&p)))?;
            t.push(vec![
                m as f64,
                kf,
                b,
                rho_db,
                op.xi,
                op.r,
                op.power_saving(),
                rci.mean / kf,
                rci.stderr / kf,
                pr.mean / kf,
                pr.stderr / kf,
                rci_det.rate_per_user,
                with_context(ctx, rcipr_rate_deteq(b, rho))?,
                (rci.skipped + pr.skipped) as f64,
            ]);
        }
    }
    Ok(t)
}

/// Per-user rate of power-reduced RCI against RCI without secrecy and the
/// single-user high-SNR law, at a fixed number of users.
fn fig6(o: &FigureOverrides) -> Result<Table> {
    let k = o.k.unwrap_or(12);
    let mut t = Table::new([
        "m",
        "k",
        "beta",
        "rho_db",
        "r",
        "power_saving",
        "pr_mc_per_user",
        "pr_mc_stderr",
        "nosecrecy_mc_per_user",
        "nosecrecy_mc_stderr",
        "pr_deteq_per_user",
        "nosecrecy_deteq_per_user",
        "pr_highsnr_per_user",
        "nosecrecy_highsnr_per_user",
        "su_capacity_highsnr",
        "gap_nosecrecy",
        "gap_su_capacity",
    ]);
    for beta in o.betas(&[0.8, 1.0, 1.2]) {
        let m = o.m.unwrap_or(((k as f64 / beta).round() as usize).max(1));
        for rho_db in o.rho_db(&steps(0.0, 30.0, 5.0)) {
            let rho = db_to_linear(rho_db);
            let cfg = SystemConfig {
                trials: o.trials(DEFAULT_TRIALS),
                seed: o.seed(),
                ..SystemConfig::new(m, k, rho)
            };
            let b = cfg.beta();
            let ctx = || format!("beta = {b}, rho_db = {rho_db}");
            let pr = with_context(ctx, ergodic_run(&cfg, PrecoderKind::RciPr))?;
            let ns = with_context(ctx, ergodic_run(&cfg, PrecoderKind::Rci { xi: b / rho }))?;
            let ns_rates: Vec<f64> = ns.outcomes.iter().map(|x| x.sum_no_secrecy).collect();
            let (ns_mean, ns_se) = mean_and_stderr(&ns_rates);
            let kf = k as f64;
            let op = rcipr_operating_point(b, rho);
            let su = su_secrecy_capacity_highsnr(b, rho);
            t.push(vec![
                m as f64,
                kf,
                b,
                rho_db,
                op.r,
                op.power_saving(),
                pr.mean / kf,
                pr.stderr / kf,
                ns_mean / kf,
                ns_se / kf,
                with_context(ctx, rcipr_rate_deteq(b, rho))?,
                sumrate_nosecrecy_deteq(b, rho),
                rcipr_rate_highsnr(b, rho),
                sumrate_nosecrecy_highsnr(b, rho),
                su,
                (ns_mean - pr.mean) / kf,
                su - pr.mean / kf,
            ]);
        }
    }
    Ok(t)
}

/// CSI error `tau^2 = C / rho` targeting a one-bit gap for `beta <= 1` and
/// `tau^2 = 0.1 / rho` above, against perfect CSI, for power-reduced RCI.
fn fig7(o: &FigureOverrides) -> Result<Table> {
    let m = o.m.unwrap_or(10);
    let mut t = Table::new([
        "m",
        "k",
        "beta",
        "rho_db",
        "tau_sq",
        "target_gap",
        "perfect_mc_per_user",
        "perfect_mc_stderr",
        "csi_mc_per_user",
        "csi_mc_stderr",
        "gap_mc",
        "perfect_deteq_per_user",
        "csi_deteq_per_user",
        "gap_deteq",
    ]);
    for beta in o.betas(&[0.8, 1.0, 1.2]) {
        let k = users(beta, m);
        let b = k as f64 / m as f64;
        let (c, target) = if b <= 1.0 {
            let g = gap_constant(b, 2.0)?;
            (g.c, g.gap_bits())
        } else {
            (0.1, 0.0)
        };
        for rho_db in o.rho_db(&steps(0.0, 40.0, 5.0)) {
            let rho = db_to_linear(rho_db);
            let tau_sq = (c / rho).min(1.0);
            let perfect_cfg = SystemConfig {
                trials: o.trials(DEFAULT_TRIALS),
                seed: o.seed(),
                ..SystemConfig::new(m, k, rho)
            };
            let csi_cfg = SystemConfig { tau_sq, ..perfect_cfg };
            let ctx = || format!("beta = {b}, rho_db = {rho_db}");
            let perfect = with_context(ctx, ergodic_run(&perfect_cfg, PrecoderKind::RciPr))?;
            let csi = with_context(ctx, ergodic_run(&csi_cfg, PrecoderKind::RciPr))?;
            let det_p = with_context(ctx, rcipr_rate_deteq(b, rho))?;
            let det_c = with_context(ctx, rcipr_rate_deteq_csi(b, rho, tau_sq))?;
            let kf = k as f64;
            t.push(vec![
                m as f64,
                kf,
                b,
                rho_db,
                tau_sq,
                target,
                perfect.mean / kf,
                perfect.stderr / kf,
                csi.mean / kf,
                csi.stderr / kf,
                (perfect.mean - csi.mean) / kf,
                det_p,
                det_c,
                det_p - det_c,
            ]);
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> FigureOverrides {
        FigureOverrides {
            m: Some(8),
            k: Some(8),
            trials: Some(8),
            seed: Some(3),
            rho_db: Some(vec![0.0, 10.0]),
            betas: None,
        }
    }

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(id.to_string().parse::<FigureId>().unwrap(), id);
        }
        assert!("fig8".parse::<FigureId>().is_err());
    }

    #[test]
    fn every_preset_runs_small() {
        for id in FigureId::ALL {
            let t = run_figure(id, &small()).unwrap_or_else(|e| panic!("{id}: {e}"));
            assert!(!t.is_empty(), "{id}");
            assert!(t.rows.iter().all(|r| r.len() == t.columns.len()));
        }
    }

    #[test]
    fn fig1_marks_one_peak_per_snr() {
        let o = FigureOverrides {
            rho_db: Some(vec![10.0, 30.0]),
            ..Default::default()
        };
        let t = run_figure(FigureId::Fig1, &o).unwrap();
        let peaks = t.column("is_peak").unwrap().iter().filter(|&&p| p == 1.0).count();
        assert_eq!(peaks, 2);
        for i in 0..t.len() {
            if t.get(i, "is_peak") == 1.0 {
                assert!((t.get(i, "beta") - t.get(i, "beta_opt")).abs() <= 0.01);
            }
        }
    }

    #[test]
    fn fig5_power_reduction_at_25db() {
        let o = FigureOverrides {
            trials: Some(4),
            rho_db: Some(vec![25.0]),
            betas: Some(vec![1.2]),
            ..Default::default()
        };
        let t = run_figure(FigureId::Fig5, &o).unwrap();
        assert!((t.get(0, "r") - 13.176).abs() < 1e-2);
        assert!((t.get(0, "power_saving") - 0.924).abs() < 1e-3);
    }

    #[test]
    fn bad_overrides() {
        let o = FigureOverrides {
            trials: Some(0),
            ..Default::default()
        };
        assert!(run_figure(FigureId::Fig2, &o).is_err());
        let o = FigureOverrides {
            betas: Some(vec![]),
            ..Default::default()
        };
        assert!(run_figure(FigureId::Fig1, &o).is_err());
    }
}
