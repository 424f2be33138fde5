//! Planar circular restricted three-body problem in primary-centered polar
//! coordinates.
//!
//! The perturber moves on a circle of radius `r` at rate `omega_s` with
//! longitude `omega_s t`; the probe state is `(R, lambda, v_R, L)` with
//! `L = R^2 lambda'`. Angular momentum is integrated in conservative form,
//! `dL/dt = dU/d(lambda)`.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::kernel::SystemConfig;
use crate::ode::{DormandPrince, Stats};

/// Distances (in units of `r`) below which a close approach counts as a collision.
pub const COLLISION_FRACTION: f64 = 1e-9;

/// Perturbing potential used for the force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PotentialModel {
    /// `gamma m (1/Delta - R cos S / r^2)`, including the indirect term of a
    /// frame attached to the primary.
    #[default]
    Heliocentric,
    /// `gamma m / Delta` alone.
    LiteralNoIndirect,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryState {
    pub radius: f64,
    pub lambda: f64,
    pub v_radial: f64,
    /// Specific angular momentum `R^2 d(lambda)/dt`.
    pub ang_mom: f64,
    pub t: f64,
}

impl TrajectoryState {
    fn to_array(self) -> [f64; 4] {
        [self.radius, self.lambda, self.v_radial, self.ang_mom]
    }

    fn from_array(y: [f64; 4], t: f64) -> Self {
        Self { radius: y[0], lambda: y[1], v_radial: y[2], ang_mom: y[3], t }
    }
}

/// Circular Keplerian start at radius `a`, longitude `lambda`.
pub fn circular_state(cfg: &SystemConfig, a: f64, lambda: f64) -> Result<TrajectoryState> {
    pericenter_state(cfg, a, 0.0, lambda)
}

/// Keplerian start at the pericenter of an ellipse `(a, e)` whose pericenter
/// longitude is `varpi`.
pub fn pericenter_state(cfg: &SystemConfig, a: f64, e: f64, varpi: f64) -> Result<TrajectoryState> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid("a", format!("must be > 0, got {a}")));
    }
    if !(0.0..1.0).contains(&e) {
        return Err(invalid("e", format!("must lie in [0, 1), got {e}")));
    }
    Ok(TrajectoryState {
        radius: a * (1.0 - e),
        lambda: varpi,
        v_radial: 0.0,
        ang_mom: (cfg.mu() * a * (1.0 - e * e)).sqrt(),
        t: 0.0,
    })
}

/// Osculating two-body elements about the primary alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Osculating {
    pub a: f64,
    pub e: f64,
}

pub fn osculating(cfg: &SystemConfig, s: &TrajectoryState) -> Osculating {
    let mu = cfg.mu();
    let energy = 0.5 * (s.v_radial.powi(2) + (s.ang_mom / s.radius).powi(2)) - mu / s.radius;
    let a = -mu / (2.0 * energy);
    let e = if energy < 0.0 {
        (1.0 - s.ang_mom * s.ang_mom / (mu * a)).max(0.0).sqrt()
    } else {
        (1.0 + 2.0 * energy * s.ang_mom * s.ang_mom / (mu * mu)).sqrt()
    };
    Osculating { a, e }
}

struct Geometry {
    cos_s: f64,
    sin_s: f64,
    delta: f64,
}

fn geometry(cfg: &SystemConfig, s: &TrajectoryState) -> Result<Geometry> {
    let angle = s.lambda - cfg.omega_s * s.t;
    let (sin_s, cos_s) = angle.sin_cos();
    let r = cfg.r_perturber;
    let delta = crate::kernel::mutual_distance(s.radius, r, angle);
    let limit = COLLISION_FRACTION * r;
    if s.radius < limit || delta < limit || !s.radius.is_finite() {
        return Err(Error::Collision { t: s.t, separation: s.radius.min(delta) });
    }
    Ok(Geometry { cos_s, sin_s, delta })
}

/// Total potential `U` (positive convention).
pub fn potential(cfg: &SystemConfig, model: PotentialModel, s: &TrajectoryState) -> Result<f64> {
    let g = geometry(cfg, s)?;
    let mut u = cfg.gamma * cfg.m_primary / s.radius + cfg.gamma * cfg.m_perturber / g.delta;
    if model == PotentialModel::Heliocentric {
        u -= cfg.gamma * cfg.m_perturber * s.radius * g.cos_s / cfg.r_perturber.powi(2);
    }
    Ok(u)
}

/// Time derivative of the state.
pub fn rhs(cfg: &SystemConfig, model: PotentialModel, s: &TrajectoryState) -> Result<[f64; 4]> {
    let g = geometry(cfg, s)?;
    let (big_r, r) = (s.radius, cfg.r_perturber);
    let gm = cfg.gamma * cfg.m_perturber;
    let d3 = g.delta.powi(3);
    let mut du_dr = -cfg.mu() / (big_r * big_r) - gm * (big_r - r * g.cos_s) / d3;
    let mut du_ds = -gm * big_r * r * g.sin_s / d3;
    if model == PotentialModel::Heliocentric {
        du_dr -= gm * g.cos_s / (r * r);
        du_ds += gm * big_r * g.sin_s / (r * r);
    }
    let l = s.ang_mom;
    Ok([
        s.v_radial,
        l / (big_r * big_r),
        l * l / big_r.powi(3) + du_dr,
        du_ds,
    ])
}

/// Jacobi constant `C_J = 2 U_rot - v_rot^2 = -2 (H - omega_s L)`.
pub fn jacobi_constant(cfg: &SystemConfig, model: PotentialModel, s: &TrajectoryState) -> Result<f64> {
    let u = potential(cfg, model, s)?;
    let h = 0.5 * (s.v_radial.powi(2) + (s.ang_mom / s.radius).powi(2)) - u;
    Ok(-2.0 * (h - cfg.omega_s * s.ang_mom))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub state: TrajectoryState,
    pub elements: Osculating,
    pub jacobi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Largest `|C_J(t) / C_J(0) - 1|` over the samples.
    pub jacobi_drift: f64,
    pub warnings: Vec<String>,
    pub stats: Stats,
}

/// Integrator settings for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    pub cfg: SystemConfig,
    pub model: PotentialModel,
    pub tol: f64,
    /// Relative Jacobi drift above which a warning is recorded.
    pub jacobi_bound: f64,
}

impl Propagator {
    pub fn new(cfg: SystemConfig, tol: f64) -> Self {
        Self { cfg, model: PotentialModel::default(), tol, jacobi_bound: 1e-6 }
    }

    pub fn with_model(mut self, model: PotentialModel) -> Self {
        self.model = model;
        self
    }

    fn system(&self) -> impl Fn(f64, &[f64; 4]) -> Result<[f64; 4]> + '_ {
        move |t, y| rhs(&self.cfg, self.model, &TrajectoryState::from_array(*y, t))
    }

    /// State at `t_end` (which may precede `state0.t`).
    pub fn advance(&self, state0: &TrajectoryState, t_end: f64) -> Result<TrajectoryState> {
        let (y, _) =
            DormandPrince::new(self.tol).integrate(&self.system(), state0.t, state0.to_array(), t_end)?;
        Ok(TrajectoryState::from_array(y, t_end))
    }

    /// Integrate to `t_end`, recording the state at each sorted time in `times`.
    pub fn integrate(&self, state0: &TrajectoryState, t_end: f64, times: &[f64]) -> Result<Trajectory> {
        if !(t_end > state0.t) {
            return Err(invalid("t_end", format!("must exceed the start time {}", state0.t)));
        }
        if times.windows(2).any(|w| w[1] < w[0]) || times.iter().any(|&t| t < state0.t || t > t_end) {
            return Err(invalid("times", "sample times must be sorted and inside the span"));
        }
        let c0 = jacobi_constant(&self.cfg, self.model, state0)?;
        let (ys, stats) = DormandPrince::new(self.tol).integrate_dense(
            &self.system(),
            state0.t,
            state0.to_array(),
            t_end,
            times,
        )?;
        let mut samples = Vec::with_capacity(ys.len());
        let mut drift: f64 = 0.0;
        for (y, &t) in ys.into_iter().zip(times) {
            let state = TrajectoryState::from_array(y, t);
            let jacobi = jacobi_constant(&self.cfg, self.model, &state)?;
            drift = drift.max((jacobi / c0 - 1.0).abs());
            samples.push(Sample { state, elements: osculating(&self.cfg, &state), jacobi });
        }
        let mut warnings = Vec::new();
        if drift > self.jacobi_bound {
            warnings.push(format!(
                "Jacobi constant drifted by {drift:e} (bound {:e})",
                self.jacobi_bound
            ));
        }
        Ok(Trajectory { samples, jacobi_drift: drift, warnings, stats })
    }

    /// Finite-time Lyapunov exponent by the two-trajectory method: the
    /// companion starts `delta0` further out in `R` and is pulled back to
    /// `delta0` whenever the separation exceeds `1e3 delta0`.
    pub fn divergence(&self, state0: &TrajectoryState, delta0: f64, horizon: f64) -> Result<DivergenceResult> {
        if !(delta0 > 0.0 && delta0 < 1e-2 * state0.radius) {
            return Err(invalid("delta0", format!("must satisfy 0 < delta0 << R, got {delta0}")));
        }
        if !(horizon > 0.0) {
            return Err(invalid("horizon", format!("must be > 0, got {horizon}")));
        }
        let scale = StateMetric::new(&self.cfg);
        let mut reference = *state0;
        let mut companion = TrajectoryState { radius: state0.radius + delta0, ..*state0 };
        let chunks = (horizon * self.cfg.omega_s / (2.0 * std::f64::consts::PI) * 32.0).ceil().max(1.0) as usize;
        let dt = horizon / chunks as f64;
        let mut log_growth = 0.0;
        let mut renormalizations = 0;
        for k in 1..=chunks {
            let t = state0.t + k as f64 * dt;
            reference = self.advance(&reference, t)?;
            companion = self.advance(&companion, t)?;
            let d = scale.distance(&reference, &companion);
            if d > 1e3 * delta0 || k == chunks {
                log_growth += (d / delta0).ln();
                if k < chunks {
                    companion = scale.pull_back(&reference, &companion, delta0 / d);
                    renormalizations += 1;
                }
            }
        }
        Ok(DivergenceResult { ftle: log_growth / horizon, renormalizations, horizon })
    }
}

/// Distance on state space with every component brought to a length.
struct StateMetric {
    inv_rate: f64,
}

impl StateMetric {
    fn new(cfg: &SystemConfig) -> Self {
        Self { inv_rate: 1.0 / cfg.omega_s }
    }

    fn distance(&self, a: &TrajectoryState, b: &TrajectoryState) -> f64 {
        let r = a.radius;
        let d = [
            b.radius - a.radius,
            r * (b.lambda - a.lambda),
            (b.v_radial - a.v_radial) * self.inv_rate,
            (b.ang_mom - a.ang_mom) * self.inv_rate / r,
        ];
        d.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn pull_back(&self, a: &TrajectoryState, b: &TrajectoryState, k: f64) -> TrajectoryState {
        TrajectoryState {
            radius: a.radius + k * (b.radius - a.radius),
            lambda: a.lambda + k * (b.lambda - a.lambda),
            v_radial: a.v_radial + k * (b.v_radial - a.v_radial),
            ang_mom: a.ang_mom + k * (b.ang_mom - a.ang_mom),
            t: a.t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceResult {
    pub ftle: f64,
    pub renormalizations: usize,
    pub horizon: f64,
}

/// Integrate with the default heliocentric potential.
pub fn integrate(
    cfg: &SystemConfig,
    state0: &TrajectoryState,
    t_end: f64,
    tol: f64,
    times: &[f64],
) -> Result<Trajectory> {
    Propagator::new(cfg.clone(), tol).integrate(state0, t_end, times)
}

pub fn divergence(
    cfg: &SystemConfig,
    state0: &TrajectoryState,
    delta0: f64,
    horizon: f64,
    tol: f64,
) -> Result<DivergenceResult> {
    Propagator::new(cfg.clone(), tol).divergence(state0, delta0, horizon)
}

/// Perturber orbital period `2 pi / omega_s`.
pub fn perturber_period(cfg: &SystemConfig) -> f64 {
    2.0 * std::f64::consts::PI / cfg.omega_s
}

/// `count + 1` equally spaced times from 0 to `t_end`.
pub fn uniform_times(t_end: f64, count: usize) -> Vec<f64> {
    (0..=count).map(|i| t_end * i as f64 / count as f64).collect()
}

/// Largest osculating eccentricity reached by a circular start at each
/// semimajor axis, over `periods` perturber periods.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthPoint {
    pub a: f64,
    pub result: Result<EccentricityGrowth>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EccentricityGrowth {
    pub max_e: f64,
    /// First sampled time at which `e` exceeded the threshold, if any.
    pub first_crossing: Option<f64>,
    pub jacobi_drift: f64,
}

pub fn eccentricity_growth(
    prop: &Propagator,
    a: f64,
    periods: f64,
    samples_per_period: usize,
    threshold: f64,
) -> Result<EccentricityGrowth> {
    let state0 = circular_state(&prop.cfg, a, 0.0)?;
    let t_end = periods * perturber_period(&prop.cfg);
    let count = (periods * samples_per_period as f64).ceil().max(1.0) as usize;
    let traj = prop.integrate(&state0, t_end, &uniform_times(t_end, count))?;
    let max_e = traj.samples.iter().map(|s| s.elements.e).fold(0.0, f64::max);
    let first_crossing = traj.samples.iter().find(|s| s.elements.e > threshold).map(|s| s.state.t);
    Ok(EccentricityGrowth { max_e, first_crossing, jacobi_drift: traj.jacobi_drift })
}

/// [`eccentricity_growth`] over a grid of semimajor axes, in parallel, in grid order.
pub fn growth_scan(
    prop: &Propagator,
    a_grid: &[f64],
    periods: f64,
    samples_per_period: usize,
    threshold: f64,
) -> Vec<GrowthPoint> {
    a_grid
        .par_iter()
        .map(|&a| GrowthPoint {
            a,
            result: eccentricity_growth(prop, a, periods, samples_per_period, threshold),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zones;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn norm(m: f64) -> SystemConfig {
        SystemConfig::normalized(m).unwrap()
    }

    #[test]
    fn circular_balance_without_perturber() {
        let cfg = norm(0.0);
        let s = circular_state(&cfg, 0.7, 0.3).unwrap();
        let d = rhs(&cfg, PotentialModel::Heliocentric, &s).unwrap();
        assert!(d[2].abs() < 1e-14 && d[3] == 0.0);
    }

    #[test]
    fn torque_vanishes_at_conjunction_and_opposition() {
        let cfg = norm(1e-3);
        for model in [PotentialModel::Heliocentric, PotentialModel::LiteralNoIndirect] {
            for lambda in [0.0, PI] {
                let s = TrajectoryState { radius: 0.6, lambda, v_radial: 0.0, ang_mom: 0.7, t: 0.0 };
                assert!(rhs(&cfg, model, &s).unwrap()[3].abs() < 1e-15);
            }
            let s = TrajectoryState { radius: 0.6, lambda: 1.0, v_radial: 0.0, ang_mom: 0.7, t: 0.0 };
            assert!(rhs(&cfg, model, &s).unwrap()[3].abs() > 1e-6);
        }
    }

    #[test]
    fn force_is_gradient_of_potential() {
        let cfg = norm(0.05);
        for model in [PotentialModel::Heliocentric, PotentialModel::LiteralNoIndirect] {
            let s = TrajectoryState { radius: 0.55, lambda: 0.8, v_radial: 0.0, ang_mom: 0.7, t: 0.2 };
            let d = rhs(&cfg, model, &s).unwrap();
            let h = 1e-6;
            let u = |ds: TrajectoryState| potential(&cfg, model, &ds).unwrap();
            let du_dr = (u(TrajectoryState { radius: s.radius + h, ..s })
                - u(TrajectoryState { radius: s.radius - h, ..s }))
                / (2.0 * h);
            let du_dl = (u(TrajectoryState { lambda: s.lambda + h, ..s })
                - u(TrajectoryState { lambda: s.lambda - h, ..s }))
                / (2.0 * h);
            let centrifugal = s.ang_mom.powi(2) / s.radius.powi(3);
            assert!((d[2] - centrifugal - du_dr).abs() < 1e-8);
            assert!((d[3] - du_dl).abs() < 1e-8);
        }
    }

    #[test]
    fn collision_is_flagged() {
        let cfg = norm(1e-3);
        let s = TrajectoryState { radius: 1.0, lambda: 0.0, v_radial: 0.0, ang_mom: 1.0, t: 0.0 };
        assert!(matches!(rhs(&cfg, PotentialModel::Heliocentric, &s), Err(Error::Collision { .. })));
        let s = TrajectoryState { radius: 0.0, ..s };
        assert!(matches!(rhs(&cfg, PotentialModel::Heliocentric, &s), Err(Error::Collision { .. })));
    }

    #[test]
    fn kepler_closure() {
        let cfg = norm(0.0);
        for e in [0.0, 0.2] {
            let s0 = pericenter_state(&cfg, 0.6, e, 0.4).unwrap();
            let period = 2.0 * PI * 0.6f64.powf(1.5);
            let s1 = Propagator::new(cfg.clone(), 1e-13).advance(&s0, period).unwrap();
            assert!((s1.radius / s0.radius - 1.0).abs() < 1e-9);
            assert!(((s1.lambda - 2.0 * PI) / s0.lambda - 1.0).abs() < 1e-9);
            assert!(s1.v_radial.abs() < 1e-9 * s0.ang_mom / s0.radius);
            assert!((s1.ang_mom / s0.ang_mom - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_body_elements_constant() {
        let cfg = norm(0.0);
        let s0 = pericenter_state(&cfg, 0.6, 0.2, 0.0).unwrap();
        let t_end = 100.0 * perturber_period(&cfg);
        let traj = integrate(&cfg, &s0, t_end, 1e-14, &uniform_times(t_end, 400)).unwrap();
        for s in &traj.samples {
            assert!((s.elements.a / 0.6 - 1.0).abs() < 1e-10, "{:?}", s.elements);
            assert!((s.elements.e / 0.2 - 1.0).abs() < 1e-10, "{:?}", s.elements);
        }
    }

    #[test]
    fn osculating_inverts_pericenter_state() {
        let cfg = norm(1e-3);
        let o = osculating(&cfg, &pericenter_state(&cfg, 0.8, 0.3, 1.0).unwrap());
        assert!((o.a - 0.8).abs() < 1e-14 && (o.e - 0.3).abs() < 1e-14);
        let o = osculating(&cfg, &circular_state(&cfg, 0.8, 0.0).unwrap());
        assert!(o.e < 1e-7);
    }

    #[test]
    fn jacobi_conserved() {
        let cfg = norm(1e-3);
        let s0 = circular_state(&cfg, zones::center_semimajor_axis(&cfg, 3.0).unwrap(), 0.0).unwrap();
        let t_end = 100.0 * perturber_period(&cfg);
        for model in [PotentialModel::Heliocentric, PotentialModel::LiteralNoIndirect] {
            let traj = Propagator::new(cfg.clone(), 1e-12)
                .with_model(model)
                .integrate(&s0, t_end, &uniform_times(t_end, 200))
                .unwrap();
            assert!(traj.jacobi_drift <= 1e-9, "{model:?} {}", traj.jacobi_drift);
            assert!(traj.warnings.is_empty());
        }
    }

    #[test]
    fn drift_warning_not_abort() {
        let cfg = norm(1e-3);
        let s0 = circular_state(&cfg, 0.5, 0.0).unwrap();
        let mut prop = Propagator::new(cfg.clone(), 1e-6);
        prop.jacobi_bound = 0.0;
        let t_end = 10.0 * perturber_period(&cfg);
        let traj = prop.integrate(&s0, t_end, &uniform_times(t_end, 20)).unwrap();
        assert_eq!(traj.samples.len(), 21);
        assert_eq!(traj.warnings.len(), 1);
    }

    #[test]
    fn time_reversal() {
        let cfg = norm(1e-3);
        let tol = 1e-11;
        let prop = Propagator::new(cfg.clone(), tol);
        let s0 = pericenter_state(&cfg, 0.6, 0.1, 0.5).unwrap();
        let t = perturber_period(&cfg);
        let back = prop.advance(&prop.advance(&s0, t).unwrap(), 0.0).unwrap();
        assert!((back.radius - s0.radius).abs() < 100.0 * tol * s0.radius);
        assert!((back.lambda - s0.lambda).abs() < 100.0 * tol * s0.lambda.abs().max(1.0));
        assert!((back.ang_mom - s0.ang_mom).abs() < 100.0 * tol * s0.ang_mom);
    }

    #[test]
    fn unperturbed_ftle_vanishes() {
        let cfg = norm(0.0);
        let s0 = circular_state(&cfg, 0.8, 0.0).unwrap();
        let horizon = 100.0 * perturber_period(&cfg);
        let d = divergence(&cfg, &s0, 1e-8, horizon, 1e-11).unwrap();
        // linear shear growth only: log(growth) / horizon
        assert!(d.ftle.abs() < 10.0 / horizon, "{d:?}");
    }

    #[test]
    fn overlapped_configuration_is_chaotic() {
        let horizon = 100.0 * perturber_period(&norm(0.1));
        let ftle = |m: f64, delta0: f64| {
            let cfg = norm(m);
            // between the 5:3 and 3:2 centers, where adjacent zones overlap at m/M = 0.1
            let s0 = circular_state(&cfg, 0.72, 0.0).unwrap();
            divergence(&cfg, &s0, delta0, horizon, 1e-11).unwrap()
        };
        let base = ftle(0.0, 1e-8);
        let chaotic = ftle(0.1, 1e-8);
        assert!(chaotic.ftle >= 5.0 * base.ftle.abs(), "{chaotic:?} vs {base:?}");
        assert!(chaotic.renormalizations > 0);
        let doubled = ftle(0.1, 2e-8);
        assert!((doubled.ftle / chaotic.ftle - 1.0).abs() < 0.2, "{doubled:?} vs {chaotic:?}");
    }

    #[test]
    fn resonance_localization() {
        let cfg = norm(1e-3);
        let prop = Propagator::new(cfg.clone(), 1e-10);
        let periods = 200.0;
        let control = zones::center_semimajor_axis(&cfg, 2.5).unwrap();
        let baseline = eccentricity_growth(&prop, control, periods, 16, 1.0).unwrap().max_e;
        for (n, center) in [(3u32, 3.0), (4, 2.0)] {
            let z = zones::zone(&cfg, n, 0.0, &Default::default(), &Default::default()).unwrap();
            let grid: Vec<f64> = (-4..=4)
                .map(|k| zones::center_semimajor_axis(&cfg, center + 0.02 * k as f64).unwrap())
                .rev()
                .collect();
            let excited: Vec<f64> = growth_scan(&prop, &grid, periods, 16, 1.0)
                .into_iter()
                .filter(|p| p.result.as_ref().unwrap().max_e > baseline)
                .map(|p| p.a)
                .collect();
            let (lo, hi) = (excited.first().copied().unwrap(), excited.last().copied().unwrap());
            assert!(lo <= z.center_a + z.width_a && hi >= z.center_a - z.width_a, "n={n}: [{lo}, {hi}]");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn literal_and_heliocentric_differ_by_indirect_term(
            radius in 0.2f64..0.9, lambda in -PI..PI, t in 0.0f64..10.0
        ) {
            let cfg = norm(1e-2);
            let s = TrajectoryState { radius, lambda, v_radial: 0.0, ang_mom: 0.5, t };
            let a = potential(&cfg, PotentialModel::Heliocentric, &s).unwrap();
            let b = potential(&cfg, PotentialModel::LiteralNoIndirect, &s).unwrap();
            let cos_s = (lambda - cfg.omega_s * t).cos();
            prop_assert!((b - a - 1e-2 * radius * cos_s).abs() < 1e-14);
        }
    }
}
