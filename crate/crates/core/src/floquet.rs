//! Floquet analysis of the homogeneous Hill equation `x'' + omega^2(t) x = 0`.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::hillde::{HillCoefficients, HillOptions};
use crate::kernel::SystemConfig;
use crate::ode::{integrate_fixed, DormandPrince};
use crate::zones::InstabilityZone;

/// Margin above 2 that `|trace|` must exceed to count as unstable.
pub const INSTABILITY_MARGIN: f64 = 1e-10;
/// Largest tolerated `|det M - 1|` before an integration is rejected.
pub const DETERMINANT_LIMIT: f64 = 1e-6;
/// Steps per period of the fixed-step propagation.
pub const FIXED_STEPS: usize = 4096;
/// Grid points of the coarse tongue search.
pub const WINDOW_POINTS: usize = 200;
/// Relative tolerance of the bisected tongue edges.
pub const EDGE_RTOL: f64 = 1e-8;

/// Displacement `x` normal to the reference orbit, its rate `v`, at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalState {
    pub x: f64,
    pub v: f64,
    pub t: f64,
}

impl VariationalState {
    /// Advance along the Hill equation to `t_end`.
    pub fn propagate(&self, coeffs: &HillCoefficients, t_end: f64, tol: f64) -> Result<Self> {
        let sys = |t: f64, y: &[f64; 2]| Ok([y[1], -coeffs.omega_sq(t) * y[0]]);
        let (y, _) = DormandPrince::new(tol).integrate(&sys, self.t, [self.x, self.v], t_end)?;
        if !(y[0].is_finite() && y[1].is_finite()) {
            return Err(Error::Integration("non-finite variational state".into()));
        }
        Ok(Self { x: y[0], v: y[1], t: t_end })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyResult {
    pub trace: f64,
    /// Magnitudes of the two Floquet multipliers.
    pub multipliers: [f64; 2],
    pub unstable: bool,
    pub period_used: f64,
    pub determinant: f64,
}

impl MonodromyResult {
    fn from_matrix(m: [[f64; 2]; 2], period: f64) -> Result<Self> {
        let trace = m[0][0] + m[1][1];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !(trace.is_finite() && det.is_finite()) {
            return Err(Error::Integration("non-finite monodromy matrix".into()));
        }
        if (det - 1.0).abs() > DETERMINANT_LIMIT {
            return Err(Error::Integration(format!(
                "monodromy determinant drifted to {det} (limit 1 ± {DETERMINANT_LIMIT:e})"
            )));
        }
        let disc = trace * trace - 4.0 * det;
        let multipliers = if disc >= 0.0 {
            let s = disc.sqrt();
            let big = 0.5 * (trace.abs() + s);
            [big, det.abs() / big]
        } else {
            let m = det.abs().sqrt();
            [m, m]
        };
        Ok(Self {
            trace,
            multipliers,
            unstable: is_unstable(trace),
            period_used: period,
            determinant: det,
        })
    }
}

pub fn is_unstable(trace: f64) -> bool {
    trace.abs() > 2.0 + INSTABILITY_MARGIN
}

fn check(coeffs: &HillCoefficients, period: f64) -> Result<()> {
    if !(period.is_finite() && period > 0.0) {
        return Err(invalid("period", format!("must be > 0, got {period}")));
    }
    let finite = coeffs.omega0_sq.is_finite()
        && coeffs.drive_freq.is_finite()
        && coeffs.h.iter().all(|v| v.is_finite());
    if !finite {
        return Err(invalid("coefficients", "non-finite Hill coefficients"));
    }
    Ok(())
}

fn variational(coeffs: &HillCoefficients) -> impl Fn(f64, &[f64; 4]) -> Result<[f64; 4]> + '_ {
    move |t, y| {
        let w2 = coeffs.omega_sq(t);
        Ok([y[1], -w2 * y[0], y[3], -w2 * y[2]])
    }
}

/// Monodromy matrix over `period` with adaptive steps at tolerance `tol`.
pub fn monodromy_over(coeffs: &HillCoefficients, period: f64, tol: f64) -> Result<MonodromyResult> {
    check(coeffs, period)?;
    let sys = variational(coeffs);
    let (y, _) = DormandPrince::new(tol).integrate(&sys, 0.0, [1.0, 0.0, 0.0, 1.0], period)?;
    MonodromyResult::from_matrix([[y[0], y[2]], [y[1], y[3]]], period)
}

/// Monodromy over one full synodic period, the common period of every harmonic.
pub fn monodromy(coeffs: &HillCoefficients, tol: f64) -> Result<MonodromyResult> {
    monodromy_over(coeffs, coeffs.period(), tol)
}

/// Fixed-step variant: [`FIXED_STEPS`] steps per period, no error control.
pub fn monodromy_fixed(coeffs: &HillCoefficients) -> Result<MonodromyResult> {
    let period = coeffs.period();
    check(coeffs, period)?;
    let sys = variational(coeffs);
    let y = integrate_fixed(&sys, 0.0, [1.0, 0.0, 0.0, 1.0], period, FIXED_STEPS)?;
    MonodromyResult::from_matrix([[y[0], y[2]], [y[1], y[3]]], period)
}

/// A one-parameter family of Hill equations indexed by a frequency ratio.
pub trait RatioFamily: Sync {
    fn coefficients(&self, ratio: f64) -> Result<HillCoefficients>;
}

/// `x'' + omega0^2 (1 + h cos(nu t)) x = 0` with `ratio = nu / omega0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MathieuFamily {
    pub omega0: f64,
    pub h: f64,
}

impl RatioFamily for MathieuFamily {
    fn coefficients(&self, ratio: f64) -> Result<HillCoefficients> {
        if !(ratio > 0.0) {
            return Err(invalid("ratio", format!("must be > 0, got {ratio}")));
        }
        Ok(HillCoefficients::single_harmonic(self.omega0, self.h, 1, ratio * self.omega0))
    }
}

/// The perturbed-orbit Hill equation with `ratio = omega0 / omega_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonantFamily {
    pub cfg: SystemConfig,
    pub e: f64,
    pub phi: f64,
    pub opts: HillOptions,
}

impl ResonantFamily {
    pub fn new(cfg: SystemConfig, e: f64) -> Self {
        Self { cfg, e, phi: 0.0, opts: HillOptions::default() }
    }
}

impl RatioFamily for ResonantFamily {
    fn coefficients(&self, ratio: f64) -> Result<HillCoefficients> {
        HillCoefficients::at_ratio(&self.cfg, ratio, self.e, self.phi, &self.opts)
    }
}

/// Trace of the monodromy at one ratio, minus 2 in absolute value.
fn excess(family: &dyn RatioFamily, ratio: f64, tol: f64) -> Result<f64> {
    let m = monodromy(&family.coefficients(ratio)?, tol)?;
    Ok(m.trace.abs() - 2.0 - INSTABILITY_MARGIN)
}

/// Measured edges of an instability tongue, in the family's ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tongue {
    pub lo: f64,
    pub hi: f64,
}

impl Tongue {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, ratio: f64) -> bool {
        (self.lo..=self.hi).contains(&ratio)
    }
}

/// Locate the single tongue inside `window` by a coarse scan and bisect each
/// edge to relative precision [`EDGE_RTOL`].
pub fn tongue_boundaries(family: &dyn RatioFamily, window: (f64, f64), tol: f64) -> Result<Tongue> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::NoTongue { lo, hi });
    }
    let grid: Vec<f64> = (0..WINDOW_POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / (WINDOW_POINTS - 1) as f64)
        .collect();
    let values = grid
        .par_iter()
        .map(|&x| excess(family, x, tol))
        .collect::<Result<Vec<f64>>>()?;
    let first = values.iter().position(|&v| v > 0.0).ok_or(Error::NoTongue { lo, hi })?;
    let last = values.iter().rposition(|&v| v > 0.0).unwrap();
    if first == 0 || last == WINDOW_POINTS - 1 {
        return Err(Error::Unbracketed { lo, hi });
    }
    let left = bisect(family, grid[first - 1], grid[first], tol)?;
    let right = bisect(family, grid[last + 1], grid[last], tol)?;
    Ok(Tongue { lo: left, hi: right })
}

/// Bisection between a stable point and an unstable point.
fn bisect(family: &dyn RatioFamily, mut stable: f64, mut unstable: f64, tol: f64) -> Result<f64> {
    while (unstable - stable).abs() > EDGE_RTOL * unstable.abs() {
        let mid = 0.5 * (stable + unstable);
        if excess(family, mid, tol)? > 0.0 {
            unstable = mid;
        } else {
            stable = mid;
        }
    }
    Ok(0.5 * (stable + unstable))
}

/// `center ± 5 width`.
pub fn seeded_window(center: f64, width: f64) -> (f64, f64) {
    (center - 5.0 * width, center + 5.0 * width)
}

/// Search window around an analytic zone, in units of `omega0 / omega_s`.
pub fn zone_window(cfg: &SystemConfig, zone: &InstabilityZone) -> (f64, f64) {
    seeded_window(zone.center_ratio, zone.width_eps1 / cfg.omega_s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub ratio: f64,
    pub result: Result<MonodromyResult>,
}

impl ScanPoint {
    pub fn unstable(&self) -> bool {
        matches!(self.result, Ok(MonodromyResult { unstable: true, .. }))
    }
}

/// Classify every ratio of a strictly increasing grid (all > 1). Points are
/// evaluated in parallel and returned in grid order; a failing point carries
/// its error and does not stop the scan.
pub fn stability_scan(
    cfg: &SystemConfig,
    e: f64,
    ratio_grid: &[f64],
    opts: &HillOptions,
    tol: f64,
) -> Result<Vec<ScanPoint>> {
    if ratio_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("ratio_grid", "must be strictly increasing"));
    }
    if let Some(&r) = ratio_grid.iter().find(|&&r| !(r > 1.0)) {
        return Err(invalid("ratio_grid", format!("ratios must exceed 1, got {r}")));
    }
    let family = ResonantFamily { cfg: cfg.clone(), e, phi: 0.0, opts: opts.clone() };
    Ok(ratio_grid
        .par_iter()
        .map(|&ratio| ScanPoint {
            ratio,
            result: family.coefficients(ratio).and_then(|c| monodromy(&c, tol)),
        })
        .collect())
}

/// Maximal runs of consecutive unstable grid points, as `(first, last)` ratios.
pub fn unstable_clusters(points: &[ScanPoint]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut run: Option<(f64, f64)> = None;
    for p in points {
        match (p.unstable(), run) {
            (true, None) => run = Some((p.ratio, p.ratio)),
            (true, Some((a, _))) => run = Some((a, p.ratio)),
            (false, Some(r)) => {
                out.push(r);
                run = None;
            }
            (false, None) => {}
        }
    }
    out.extend(run);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zones::{self, ZoneParams};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const TOL: f64 = 1e-12;

    fn mathieu(h: f64) -> MathieuFamily {
        MathieuFamily { omega0: 1.0, h }
    }

    #[test]
    fn constant_frequency_trace() {
        let c = HillCoefficients::single_harmonic(1.0, 0.0, 1, 1.0);
        let m = monodromy_over(&c, PI / 2.0, TOL).unwrap();
        assert!(m.trace.abs() < 1e-10);
        assert!(!m.unstable);
        for t in [0.3, 1.0, 2.5, 5.0] {
            let m = monodromy_over(&c, t, TOL).unwrap();
            assert!((m.trace - 2.0 * t.cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn principal_tongue_classification() {
        let inside = monodromy(&mathieu(0.05).coefficients(2.0).unwrap(), TOL).unwrap();
        assert!(inside.unstable, "{inside:?}");
        assert!(inside.multipliers[0] > 1.0);
        let outside = monodromy(&mathieu(0.05).coefficients(3.5).unwrap(), TOL).unwrap();
        assert!(!outside.unstable && outside.trace.abs() < 2.0);
        for m in [inside, outside] {
            assert!((m.determinant - 1.0).abs() < 1e-8);
            assert!((m.multipliers[0] * m.multipliers[1] - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn fixed_step_agrees() {
        let c = mathieu(0.05).coefficients(2.0).unwrap();
        let a = monodromy(&c, TOL).unwrap();
        let f = monodromy_fixed(&c).unwrap();
        assert!((a.trace - f.trace).abs() < 1e-9);
        assert_eq!(f, monodromy_fixed(&c).unwrap());
    }

    #[test]
    fn unperturbed_has_no_tongue() {
        assert!(matches!(
            tongue_boundaries(&mathieu(0.0), (1.9, 2.1), 1e-10),
            Err(Error::NoTongue { .. })
        ));
    }

    #[test]
    fn window_must_bracket() {
        assert!(matches!(
            tongue_boundaries(&mathieu(0.05), (1.999, 2.001), 1e-10),
            Err(Error::Unbracketed { .. })
        ));
    }

    #[test]
    fn mathieu_tongue_scales_with_h() {
        let measure = |h: f64| {
            tongue_boundaries(&mathieu(h), seeded_window(2.0, h / 2.0), 1e-11).unwrap()
        };
        let (t1, t2) = (measure(0.02), measure(0.04));
        assert!(t1.contains(2.0) && t2.contains(2.0));
        let ratio = t2.width() / t1.width();
        assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
        // first-order principal tongue: |nu - 2 omega0| < h omega0 / 2
        assert!((t1.width() / 0.02 - 1.0).abs() < 0.05, "{}", t1.width());
        // and centered on 2 up to O(h^2)
        assert!((t1.center() - 2.0).abs() < 0.02 * 0.02 * 10.0);
    }

    #[test]
    fn resonant_zone_matches_analytic_center() {
        let cfg = SystemConfig::normalized(1e-3).unwrap();
        let z = zones::zone(&cfg, 3, 0.0, &ZoneParams::default(), &HillOptions::default()).unwrap();
        let fam = ResonantFamily::new(cfg.clone(), 0.0);
        let t = tongue_boundaries(&fam, zone_window(&cfg, &z), TOL).unwrap();
        assert!(t.contains(z.center_ratio), "{t:?}");
        let ratio = z.width_eps1 / (cfg.omega_s * t.width());
        assert!((0.5..=2.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn scan_without_perturber_is_stable() {
        let cfg = SystemConfig::normalized(0.0).unwrap();
        let grid: Vec<f64> = (0..40).map(|i| 1.4 + 0.05 * i as f64).collect();
        let pts = stability_scan(&cfg, 0.0, &grid, &HillOptions::default(), 1e-10).unwrap();
        assert_eq!(pts.len(), grid.len());
        assert!(pts.iter().all(|p| p.result.is_ok() && !p.unstable()));
        assert!(unstable_clusters(&pts).is_empty());
    }

    #[test]
    fn scan_validates_grid() {
        let cfg = SystemConfig::normalized(1e-3).unwrap();
        let o = HillOptions::default();
        assert!(stability_scan(&cfg, 0.0, &[1.5, 1.5], &o, 1e-10).is_err());
        assert!(stability_scan(&cfg, 0.0, &[0.9, 1.5], &o, 1e-10).is_err());
    }

    #[test]
    fn scan_is_ordered_and_reproducible() {
        let cfg = SystemConfig::normalized(0.1).unwrap();
        let grid: Vec<f64> = (0..30).map(|i| 2.95 + 0.005 * i as f64).collect();
        let a = stability_scan(&cfg, 0.0, &grid, &HillOptions::default(), 1e-10).unwrap();
        let b = stability_scan(&cfg, 0.0, &grid, &HillOptions::default(), 1e-10).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().zip(&grid).all(|(p, &r)| p.ratio == r));
        assert!(a.iter().any(|p| p.unstable()));
    }

    #[test]
    fn clusters_group_runs() {
        let pt = |ratio: f64, unstable: bool| ScanPoint {
            ratio,
            result: Ok(MonodromyResult {
                trace: if unstable { 3.0 } else { 0.0 },
                multipliers: [1.0, 1.0],
                unstable,
                period_used: 1.0,
                determinant: 1.0,
            }),
        };
        let pts = [pt(1.0, true), pt(2.0, true), pt(3.0, false), pt(4.0, true)];
        assert_eq!(unstable_clusters(&pts), vec![(1.0, 2.0), (4.0, 4.0)]);
    }

    #[test]
    fn variational_state_matches_monodromy() {
        let c = mathieu(0.05).coefficients(2.0).unwrap();
        let m = monodromy(&c, TOL).unwrap();
        let s0 = VariationalState { x: 1.0, v: 0.0, t: 0.0 };
        let s1 = VariationalState { x: 0.0, v: 1.0, t: 0.0 };
        let t = c.period();
        let tr = s0.propagate(&c, t, TOL).unwrap().x + s1.propagate(&c, t, TOL).unwrap().v;
        assert!((tr - m.trace).abs() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn unit_determinant(h in 0.0f64..0.3, ratio in 0.5f64..4.0) {
            let m = monodromy(&mathieu(h).coefficients(ratio).unwrap(), 1e-11).unwrap();
            prop_assert!((m.determinant - 1.0).abs() < 1e-8);
        }

        #[test]
        fn classification_stable_under_tightening(h in 0.0f64..0.2, ratio in 0.5f64..4.0) {
            let c = mathieu(h).coefficients(ratio).unwrap();
            let a = monodromy(&c, 1e-9).unwrap();
            let b = monodromy(&c, 1e-10).unwrap();
            if (a.trace.abs() - 2.0).abs() > 1e-4 {
                prop_assert_eq!(a.unstable, b.unstable);
            }
        }
    }
}
