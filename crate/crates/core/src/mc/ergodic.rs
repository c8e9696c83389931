use rayon::prelude::*;
use serde::Serialize;

use super::{
    build_rci, build_rci_pr, compute_rates, sample_channel, trial_rng, ChannelSet, SystemConfig, XiPolicy,
};
use crate::error::{Error, Result};
use crate::optimize::{xi_star_empirical, SearchDomain};
use crate::rmt::AdmissibilityConstants;

/// Precoder applied in every trial. The transmitter always works from the
/// estimate `H_hat`; rates are measured on the true channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PrecoderKind {
    Rci { xi: f64 },
    RciPr,
    /// RCI at the regularization maximizing that realization's secrecy rate.
    RciEmpirical { constants: AdmissibilityConstants },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial: u64,
    pub sum: f64,
    pub sum_no_secrecy: f64,
    pub rate_per_user: Vec<f64>,
    pub xi: f64,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErgodicSummary {
    /// Mean secrecy sum-rate over completed trials, bits.
    pub mean: f64,
    /// Sample standard deviation over `sqrt(completed trials)`; zero for one trial.
    pub stderr: f64,
    /// Mean rate of each user index.
    pub per_user: Vec<f64>,
    pub mean_no_secrecy: f64,
    pub skipped: usize,
    pub outcomes: Vec<TrialOutcome>,
}

impl ErgodicSummary {
    pub fn completed(&self) -> usize {
        self.outcomes.len()
    }

    pub fn mean_per_antenna(&self, m: usize) -> f64 {
        self.mean / m as f64
    }
}

fn run_trial(cfg: &SystemConfig, kind: PrecoderKind, trial: u64, ch: &ChannelSet) -> Result<TrialOutcome> {
    let p = match kind {
        PrecoderKind::Rci { xi } => build_rci(&ch.h_hat, xi)?,
        PrecoderKind::RciPr => build_rci_pr(&ch.h_hat, cfg.rho, XiPolicy::LargeSystem)?,
        PrecoderKind::RciEmpirical { constants } => {
            let domain = SearchDomain::admissible(cfg.beta(), cfg.m, &constants);
            let xi = xi_star_empirical(&ch.h_hat, cfg.rho, &domain)?;
            build_rci(&ch.h_hat, xi)?
        }
    };
    let report = compute_rates(&ch.h, &p, cfg.rho)?;
    Ok(TrialOutcome {
        trial,
        sum: report.sum,
        sum_no_secrecy: report.sum_rate_no_secrecy(),
        rate_per_user: report.rate_per_user,
        xi: p.xi,
        r: p.r,
    })
}

/// Runs `f` on the channel of every trial of `cfg` in parallel and returns the
/// completed values in trial order with the number of skipped trials.
///
/// Trial `t` draws from stream `t` of the seed, so results do not depend on
/// thread count or scheduling. Numerical failures skip the trial; more than
/// 1% skipped fails with [`Error::TooManySkips`]. Any other error aborts.
pub fn map_trials<T, F>(cfg: &SystemConfig, f: F) -> Result<(Vec<T>, usize)>
where
    T: Send,
    F: Fn(u64, &ChannelSet) -> Result<T> + Sync,
{
    cfg.validate()?;
    let results: Vec<Result<T>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| f(t, &sample_channel(cfg, &mut trial_rng(cfg.seed, t))))
        .collect();
    apply_skip_policy(results)
}

fn apply_skip_policy<T>(results: Vec<Result<T>>) -> Result<(Vec<T>, usize)> {
    let trials = results.len();
    let mut done = Vec::with_capacity(trials);
    let mut skipped = 0usize;
    for (t, res) in results.into_iter().enumerate() {
        match res {
            Ok(v) => done.push(v),
            Err(e) if e.is_numerical() => skipped += 1,
            Err(e) => {
                return Err(Error::Trial {
                    trial: t as u64,
                    source: Box::new(e),
                })
            }
        }
    }
    if skipped * 100 > trials || done.is_empty() {
        return Err(Error::TooManySkips { skipped, trials });
    }
    Ok((done, skipped))
}

/// Averages the secrecy sum-rate over `cfg.trials` independent channels.
///
/// Trials are drawn and skipped as in [`map_trials`].
pub fn ergodic_run(cfg: &SystemConfig, kind: PrecoderKind) -> Result<ErgodicSummary> {
    ergodic_run_with_sink(cfg, kind, |_| {})
}

/// As [`ergodic_run`], handing every completed trial to `sink` in trial order.
pub fn ergodic_run_with_sink(
    cfg: &SystemConfig,
    kind: PrecoderKind,
    mut sink: impl FnMut(&TrialOutcome),
) -> Result<ErgodicSummary> {
    cfg.validate()?;
    if let PrecoderKind::Rci { xi } = kind {
        if !xi.is_finite() {
            return Err(Error::validation("xi must be finite"));
        }
    }
    let results: Vec<Result<TrialOutcome>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(cfg, kind, t, &sample_channel(cfg, &mut trial_rng(cfg.seed, t))))
        .collect();
    summarize(cfg.k, results, &mut sink)
}

/// Sample mean and its standard error, summed in index order. The standard
/// error of a single value is zero.
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn summarize(
    users: usize,
    results: Vec<Result<TrialOutcome>>,
    sink: &mut impl FnMut(&TrialOutcome),
) -> Result<ErgodicSummary> {
    let (outcomes, skipped) = apply_skip_policy(results)?;
    outcomes.iter().for_each(sink);
    let n = outcomes.len() as f64;
    let sums: Vec<f64> = outcomes.iter().map(|o| o.sum).collect();
    let (mean, stderr) = mean_and_stderr(&sums);
    let mut per_user = vec![0.0; users];
    for o in &outcomes {
        for (acc, r) in per_user.iter_mut().zip(&o.rate_per_user) {
            *acc += r;
        }
    }
    per_user.iter_mut().for_each(|x| *x /= n);
    let mean_no_secrecy = outcomes.iter().map(|o| o.sum_no_secrecy).sum::<f64>() / n;
    Ok(ErgodicSummary {
        mean,
        stderr,
        per_user,
        mean_no_secrecy,
        skipped,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmt::{secrecy_rate_deteq, xi_star, LoadPoint};

    fn cfg(m: usize, k: usize, rho: f64, trials: usize, seed: u64) -> SystemConfig {
        SystemConfig {
            trials,
            seed,
            ..SystemConfig::new(m, k, rho)
        }
    }

    #[test]
    fn single_trial_is_one_evaluation() {
        let c = cfg(6, 4, 10.0, 1, 99);
        let s = ergodic_run(&c, PrecoderKind::Rci { xi: 0.1 }).unwrap();
        let ch = sample_channel(&c, &mut trial_rng(99, 0));
        let direct = compute_rates(&ch.h, &build_rci(&ch.h, 0.1).unwrap(), 10.0).unwrap();
        assert_eq!(s.mean, direct.sum);
        assert_eq!(s.stderr, 0.0);
        assert_eq!(s.per_user, direct.rate_per_user);
    }

    #[test]
    fn longer_run_extends_shorter() {
        let short = ergodic_run(&cfg(8, 6, 10.0, 10, 5), PrecoderKind::RciPr).unwrap();
        let long = ergodic_run(&cfg(8, 6, 10.0, 20, 5), PrecoderKind::RciPr).unwrap();
        assert_eq!(short.outcomes[..], long.outcomes[..10]);
    }

    #[test]
    fn sink_sees_trials_in_order() {
        let mut seen = Vec::new();
        ergodic_run_with_sink(&cfg(4, 4, 1.0, 16, 1), PrecoderKind::Rci { xi: 0.5 }, |o| seen.push(o.trial)).unwrap();
        assert_eq!(seen, (0..16).collect::<Vec<_>>());
    }

    #[test]
    fn zero_rate_above_twice_the_antennas() {
        let s = ergodic_run(&cfg(8, 20, 10.0, 5, 0), PrecoderKind::RciPr).unwrap();
        assert_eq!(s.mean, 0.0);
        assert!(s.per_user.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn matches_large_system_at_64_antennas() {
        let rho = 10.0;
        let xi = xi_star(1.0, rho);
        let s = ergodic_run(&cfg(64, 64, rho, 200, 3), PrecoderKind::Rci { xi }).unwrap();
        let det = secrecy_rate_deteq(&LoadPoint::new(1.0, rho, xi).unwrap()).unwrap();
        assert!((s.mean_per_antenna(64) - det.rate_per_antenna).abs() < 0.05);
    }

    fn outcome(trial: u64, sum: f64) -> Result<TrialOutcome> {
        Ok(TrialOutcome {
            trial,
            sum,
            sum_no_secrecy: sum,
            rate_per_user: vec![sum],
            xi: 0.0,
            r: 1.0,
        })
    }

    fn singular() -> Result<TrialOutcome> {
        Err(Error::IllConditioned { condition: 1e13 })
    }

    #[test]
    fn skip_policy() {
        let mut results: Vec<_> = (0..200).map(|t| outcome(t, 1.0)).collect();
        results[17] = singular();
        results[90] = singular();
        let s = summarize(1, results, &mut |_| {}).unwrap();
        assert_eq!((s.skipped, s.completed()), (2, 198));
        assert_eq!(s.mean, 1.0);

        let mut results: Vec<_> = (0..200).map(|t| outcome(t, 1.0)).collect();
        for t in [3, 4, 5] {
            results[t] = singular();
        }
        let err = summarize(1, results, &mut |_| {}).unwrap_err();
        assert!(matches!(err, Error::TooManySkips { skipped: 3, trials: 200 }));
        assert!(err.is_numerical());
    }

    #[test]
    fn validation_errors_carry_trial_index() {
        let results = vec![outcome(0, 1.0), Err(Error::validation("bad")), outcome(2, 1.0)];
        match summarize(1, results, &mut |_| {}).unwrap_err() {
            Error::Trial { trial, .. } => assert_eq!(trial, 1),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn stderr_of_known_sample() {
        let results: Vec<_> = [1.0, 2.0, 3.0, 4.0].iter().enumerate().map(|(t, &x)| outcome(t as u64, x)).collect();
        let s = summarize(1, results, &mut |_| {}).unwrap();
        assert_eq!(s.mean, 2.5);
        // sample variance 5/3, over 4 trials
        assert!((s.stderr - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn invalid_config_is_not_numerical() {
        let err = ergodic_run(&cfg(4, 4, -1.0, 3, 0), PrecoderKind::RciPr).unwrap_err();
        assert!(!err.is_numerical());
    }
}
