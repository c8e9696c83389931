use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rmt::AdmissibilityConstants;

/// Default clip range for the unbounded ends of the admissible set.
pub const DEFAULT_CLIP: (f64, f64) = (-50.0, 50.0);

/// Grid points per interval before golden-section refinement.
pub const GRID_POINTS: usize = 64;

/// Scale of the `asinh` warp used to place grid points; resolves both the
/// small regularizations of the high-SNR regime and the far tails.
const GRID_SCALE: f64 = 1e-3;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// A finite union of disjoint closed intervals, sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchDomain {
    intervals: Vec<(f64, f64)>,
}

impl SearchDomain {
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.iter().any(|&(a, b)| !(a.is_finite() && b.is_finite() && a <= b)) {
            return Err(Error::validation("search intervals must be finite with lo <= hi"));
        }
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        if intervals.windows(2).any(|w| w[0].1 >= w[1].0) {
            return Err(Error::validation("search intervals overlap"));
        }
        Ok(SearchDomain { intervals })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![(lo, hi)])
    }

    /// Admissible regularizations for `M` antennas at load `beta`, clipped to
    /// [`DEFAULT_CLIP`].
    pub fn admissible(beta: f64, m: usize, constants: &AdmissibilityConstants) -> Self {
        Self::admissible_clipped(beta, m, constants, DEFAULT_CLIP)
    }

    pub fn admissible_clipped(beta: f64, m: usize, constants: &AdmissibilityConstants, clip: (f64, f64)) -> Self {
        let (lo, hi) = constants.excluded_interval(beta, m);
        // The excluded interval is closed; step just off its ends.
        let lo = lo - 1e-12 * lo.abs().max(1.0);
        let hi = hi + 1e-12 * hi.abs().max(1.0);
        let mut intervals = Vec::new();
        if clip.0 <= lo.min(clip.1) {
            intervals.push((clip.0, lo.min(clip.1)));
        }
        if hi.max(clip.0) <= clip.1 {
            intervals.push((hi.max(clip.0), clip.1));
        }
        SearchDomain { intervals }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= x && x <= b)
    }
}

fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if a == b || n < 2 {
        return vec![a];
    }
    let (sa, sb) = ((a / GRID_SCALE).asinh(), (b / GRID_SCALE).asinh());
    let mut pts: Vec<f64> = (0..n)
        .map(|i| GRID_SCALE * (sa + (sb - sa) * i as f64 / (n - 1) as f64).sinh())
        .collect();
    // Pin the ends so rounding in sinh never leaves the interval.
    pts[0] = a;
    pts[n - 1] = b;
    for p in pts.iter_mut() {
        *p = p.clamp(a, b);
    }
    pts
}

/// Golden-section search for a maximum inside `[a, b]`.
fn golden<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (finite_or_neg(f(c)), finite_or_neg(f(d)));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = finite_or_neg(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = finite_or_neg(f(d));
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

fn finite_or_neg(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Maximizes `f` over `domain`.
///
/// Each interval is sampled on [`GRID_POINTS`] points and the best grid point
/// is refined by golden section on its neighbouring cell down to width `tol`.
/// Points where `f` returns NaN are treated as missing. Ties go to the smaller
/// argument.
pub fn maximize_scalar<F>(f: F, domain: &SearchDomain, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(tol > 0.0) {
        return Err(Error::validation("tolerance must be positive"));
    }
    let mut best: Option<(f64, f64)> = None;
    for &(a, b) in domain.intervals() {
        let pts = grid(a, b, GRID_POINTS);
        let vals: Vec<f64> = pts.par_iter().map(|&x| finite_or_neg(f(x))).collect();
        let mut i_best = 0;
        for (i, &v) in vals.iter().enumerate() {
            if v > vals[i_best] {
                i_best = i;
            }
        }
        let mut cand = (pts[i_best], vals[i_best]);
        if pts.len() > 1 {
            let lo = pts[i_best.saturating_sub(1)];
            let hi = pts[(i_best + 1).min(pts.len() - 1)];
            let refined = golden(&f, lo, hi, tol);
            if refined.1 > cand.1 {
                cand = refined;
            }
        }
        if cand.1 > f64::NEG_INFINITY && best.is_none_or(|(_, v)| cand.1 > v) {
            best = Some(cand);
        }
    }
    best.ok_or(Error::EmptyDomain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmt::{marchenko_pastur_excluded, secrecy_rate_deteq, xi_star, LoadPoint};

    #[test]
    fn parabola() {
        let d = SearchDomain::interval(0.0, 5.0).unwrap();
        let (x, v) = maximize_scalar(|x| -(x - 2.0) * (x - 2.0), &d, 1e-6).unwrap();
        assert!((x - 2.0).abs() <= 1e-6);
        assert!(v <= 0.0 && v > -1e-11);
    }

    #[test]
    fn maximum_in_second_interval() {
        let d = SearchDomain::new(vec![(3.0, 4.0), (-2.0, -1.0)]).unwrap();
        let (x, _) = maximize_scalar(|x| -(x - 3.7).abs(), &d, 1e-7).unwrap();
        assert!((x - 3.7).abs() < 1e-6);
        assert_eq!(d.intervals()[0], (-2.0, -1.0));
    }

    #[test]
    fn recovers_closed_form_optimum() {
        let d = SearchDomain::admissible(1.0, 64, &AdmissibilityConstants::default());
        let f = |xi: f64| {
            LoadPoint::new(1.0, 10.0, xi)
                .and_then(|p| secrecy_rate_deteq(&p))
                .map_or(f64::NAN, |r| r.rate_per_user)
        };
        let (x, _) = maximize_scalar(f, &d, 1e-6).unwrap();
        assert!((x - xi_star(1.0, 10.0)).abs() < 2e-6, "{x}");
    }

    #[test]
    fn ties_go_to_smallest() {
        let d = SearchDomain::interval(-1.0, 1.0).unwrap();
        let (x, v) = maximize_scalar(|_| 1.0, &d, 1e-6).unwrap();
        assert_eq!((x, v), (-1.0, 1.0));
    }

    #[test]
    fn empty_and_all_missing() {
        let d = SearchDomain::new(vec![]).unwrap();
        assert!(matches!(maximize_scalar(|x| x, &d, 1e-6), Err(Error::EmptyDomain)));
        let d = SearchDomain::interval(0.0, 1.0).unwrap();
        assert!(matches!(maximize_scalar(|_| f64::NAN, &d, 1e-6), Err(Error::EmptyDomain)));
        assert!(maximize_scalar(|x| x, &d, 0.0).is_err());
    }

    #[test]
    fn admissible_domain_excludes_spectrum() {
        let c = AdmissibilityConstants::default();
        for beta in [0.5, 1.0, 1.2, 2.5] {
            let d = SearchDomain::admissible(beta, 16, &c);
            let (lo, hi) = c.excluded_interval(beta, 16);
            assert!(!d.contains(lo) && !d.contains(hi) && !d.contains(0.5 * (lo + hi)));
            assert!(d.contains(50.0) && d.contains(-50.0));
            let (mlo, mhi) = marchenko_pastur_excluded(beta);
            assert!(lo < mlo && hi > mhi);
        }
        assert_eq!(SearchDomain::admissible_clipped(1.0, 16, &c, (0.1, 1.0)).intervals(), &[(0.1, 1.0)]);
    }

    #[test]
    fn overlapping_rejected() {
        assert!(SearchDomain::new(vec![(0.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(SearchDomain::new(vec![(2.0, 1.0)]).is_err());
    }
}
