//! Configuration, orbital geometry and the special functions shared by every
//! other module.
//!
//! All quantities are plain `f64` in whatever unit system the
//! [`SystemConfig`] was built with. The normalized convention fixes
//! `gamma = M = r = 1`, which makes every formula dimensionless.

use crate::error::{invalid, Error, Result};

/// Default truncation order of the Legendre series.
pub const DEFAULT_PMAX: usize = 16;

/// Which unit convention a [`SystemConfig`] was built with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitSystem {
    /// `gamma = 1`, `M = 1`, `r = 1`.
    Normalized,
    /// User-supplied values.
    Physical,
}

/// Fixed parameters of the planar circular restricted problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Gravitational constant.
    pub gamma: f64,
    /// Primary mass `M`.
    pub m_primary: f64,
    /// Perturber mass `m`.
    pub m_perturber: f64,
    /// Radius of the perturber's circular orbit.
    pub r_perturber: f64,
    /// Perturber mean motion.
    pub omega_s: f64,
    pub units: UnitSystem,
}

impl SystemConfig {
    /// Normalized units with perturber mass ratio `m/M`.
    pub fn normalized(mass_ratio: f64) -> Result<Self> {
        Self::build(1.0, 1.0, mass_ratio, 1.0, None, UnitSystem::Normalized)
    }

    /// Physical units. The perturber mean motion is the two-body value
    /// `sqrt(gamma (M + m) / r^3)`; use [`SystemConfig::with_omega_s`] to
    /// override it.
    pub fn physical(gamma: f64, m_primary: f64, m_perturber: f64, r_perturber: f64) -> Result<Self> {
        Self::build(gamma, m_primary, m_perturber, r_perturber, None, UnitSystem::Physical)
    }

    /// Replace the perturber mean motion. Only allowed for physical units;
    /// the normalized convention pins `omega_s`.
    pub fn with_omega_s(self, omega_s: f64) -> Result<Self> {
        if self.units == UnitSystem::Normalized {
            return Err(invalid("omega_s", "normalized units fix omega_s = sqrt(1 + m)"));
        }
        Self::build(
            self.gamma,
            self.m_primary,
            self.m_perturber,
            self.r_perturber,
            Some(omega_s),
            self.units,
        )
    }

    /// Same system with a different perturber mass; `omega_s` is recomputed
    /// from the two-body relation.
    pub fn with_perturber_mass(self, m_perturber: f64) -> Result<Self> {
        Self::build(
            self.gamma,
            self.m_primary,
            m_perturber,
            self.r_perturber,
            None,
            self.units,
        )
    }

    fn build(
        gamma: f64,
        m_primary: f64,
        m_perturber: f64,
        r_perturber: f64,
        omega_s: Option<f64>,
        units: UnitSystem,
    ) -> Result<Self> {
        positive("gamma", gamma)?;
        positive("M", m_primary)?;
        positive("r", r_perturber)?;
        if !(m_perturber.is_finite() && m_perturber >= 0.0) {
            return Err(invalid("m", format!("must be >= 0, got {m_perturber}")));
        }
        if m_perturber >= m_primary {
            return Err(invalid("m", format!("must be < M = {m_primary}, got {m_perturber}")));
        }
        let omega_s = match omega_s {
            Some(w) => w,
            None => (gamma * (m_primary + m_perturber) / r_perturber.powi(3)).sqrt(),
        };
        positive("omega_s", omega_s)?;
        Ok(Self {
            gamma,
            m_primary,
            m_perturber,
            r_perturber,
            omega_s,
            units,
        })
    }

    pub fn mass_ratio(&self) -> f64 {
        self.m_perturber / self.m_primary
    }

    /// `gamma * M`.
    pub fn mu(&self) -> f64 {
        self.gamma * self.m_primary
    }

    /// `gamma * m / r^3`, the scale of the perturbing term in the frequency.
    pub fn tidal_scale(&self) -> f64 {
        self.gamma * self.m_perturber / self.r_perturber.powi(3)
    }
}

/// Osculating elements of the massless probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeOrbit {
    /// Semimajor axis.
    pub a: f64,
    /// Eccentricity.
    pub e: f64,
    /// Initial phase of the mutual longitude.
    pub phi: f64,
}

impl ProbeOrbit {
    pub fn new(a: f64, e: f64, phi: f64) -> Result<Self> {
        positive("a", a)?;
        if !(e.is_finite() && (0.0..1.0).contains(&e)) {
            return Err(invalid("e", format!("must lie in [0, 1), got {e}")));
        }
        if !phi.is_finite() {
            return Err(invalid("phi", "must be finite"));
        }
        Ok(Self { a, e, phi })
    }

    pub fn circular(a: f64) -> Result<Self> {
        Self::new(a, 0.0, 0.0)
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {v}")))
    }
}

/// Legendre polynomial `P_p(x)` by the Bonnet recurrence.
pub fn legendre_p(p: usize, x: f64) -> Result<f64> {
    check_unit_interval(x)?;
    let (mut prev, mut cur) = (1.0, x);
    if p == 0 {
        return Ok(prev);
    }
    for k in 1..p {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `P_0(x) ..= P_pmax(x)` in one recurrence pass.
pub fn legendre_all(pmax: usize, x: f64) -> Result<Vec<f64>> {
    check_unit_interval(x)?;
    Ok(legendre_table(pmax, x))
}

pub(crate) fn legendre_table(pmax: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(pmax + 1);
    out.push(1.0);
    if pmax >= 1 {
        out.push(x);
    }
    for k in 1..pmax {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * out[k] - kf * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

fn check_unit_interval(x: f64) -> Result<()> {
    if x.is_finite() && x.abs() <= 1.0 {
        Ok(())
    } else {
        Err(invalid("x", format!("must lie in [-1, 1], got {x}")))
    }
}

/// Distance between probe and perturber.
pub fn mutual_distance(radius: f64, r_perturber: f64, angle: f64) -> f64 {
    // |R - r|^2 + 2Rr(1 - cos S) avoids cancellation near conjunction
    let half = (0.5 * angle).sin();
    ((radius - r_perturber).powi(2) + 4.0 * radius * r_perturber * half * half).sqrt()
}

/// Truncated outer-perturber expansion of the potential:
/// `-gamma M / R - (gamma m / r) sum_{p=2}^{pmax} y^p P_p(cos S)`, `y = R / r`.
pub fn perturbing_potential(cfg: &SystemConfig, radius: f64, angle: f64, pmax: usize) -> Result<f64> {
    check_inner(cfg, radius)?;
    if pmax < 2 {
        return Err(invalid("pmax", format!("must be >= 2, got {pmax}")));
    }
    let y = radius / cfg.r_perturber;
    let legendre = legendre_table(pmax, angle.cos());
    let mut sum = 0.0;
    let mut yp = y * y;
    for pl in &legendre[2..] {
        sum += yp * pl;
        yp *= y;
    }
    Ok(-cfg.mu() / radius - cfg.gamma * cfg.m_perturber / cfg.r_perturber * sum)
}

/// Bound on the dropped tail `sum_{p > pmax} y^p` of the Legendre series.
pub fn series_error_bound(y: f64, pmax: usize) -> f64 {
    y.powi(pmax as i32 + 1) / (1.0 - y)
}

/// Phase-averaged radius `a sqrt(1 - e^2)`.
pub fn mean_radius(orbit: &ProbeOrbit) -> f64 {
    orbit.a * (1.0 - orbit.e * orbit.e).sqrt()
}

/// Specific angular momentum `sqrt(gamma M a (1 - e^2))`.
pub fn angular_momentum(cfg: &SystemConfig, orbit: &ProbeOrbit) -> f64 {
    (cfg.mu() * orbit.a * (1.0 - orbit.e * orbit.e)).sqrt()
}

pub(crate) fn check_inner(cfg: &SystemConfig, radius: f64) -> Result<()> {
    if radius.is_finite() && radius > 0.0 && radius < cfg.r_perturber {
        Ok(())
    } else {
        Err(Error::OuterProbe {
            radius,
            perturber: cfg.r_perturber,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn legendre_known_values() {
        assert_eq!(legendre_p(2, 1.0).unwrap(), 1.0);
        assert_eq!(legendre_p(3, 0.0).unwrap(), 0.0);
        // P4(x) = (35x^4 - 30x^2 + 3)/8 at x = 0.3
        let closed = (35.0 * 0.3f64.powi(4) - 30.0 * 0.09 + 3.0) / 8.0;
        assert!((closed - 0.0729375).abs() < 1e-15);
        assert!((legendre_p(4, 0.3).unwrap() - closed).abs() < 1e-15);
    }

    #[test]
    fn legendre_rejects_outside_interval() {
        assert!(legendre_p(2, 1.5).is_err());
        assert!(legendre_all(4, -1.0001).is_err());
    }

    #[test]
    fn legendre_table_matches_single() {
        let t = legendre_all(10, -0.37).unwrap();
        for (p, v) in t.iter().enumerate() {
            assert!((v - legendre_p(p, -0.37).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn mutual_distance_examples() {
        assert_eq!(mutual_distance(1.0, 1.0, 0.0), 0.0);
        assert!((mutual_distance(3.0, 4.0, PI / 2.0) - 5.0).abs() < 1e-14);
        assert!((mutual_distance(2.5, 5.2, PI) - 7.7).abs() < 1e-14);
    }

    #[test]
    fn potential_two_body_limit() {
        let cfg = SystemConfig::normalized(0.0).unwrap();
        let u = perturbing_potential(&cfg, 0.4, 1.1, 12).unwrap();
        assert_eq!(u, -1.0 / 0.4);
    }

    #[test]
    fn potential_matches_direct_evaluation() {
        let cfg = SystemConfig::normalized(1e-3).unwrap();
        let (radius, s, pmax) = (0.5, 0.0, 12);
        let delta = mutual_distance(radius, 1.0, s);
        // direct potential with the p = 0, 1 terms removed; the constant
        // p = 0 term gamma m / r is dropped as well
        let direct = -1.0 / radius - 1e-3 / delta + 1e-3 * radius * s.cos() + 1e-3;
        let series = perturbing_potential(&cfg, radius, s, pmax).unwrap();
        let bound = 1e-3 * series_error_bound(0.5, pmax);
        assert!((series - direct).abs() <= bound, "{series} vs {direct}");
    }

    #[test]
    fn potential_rejects_outer_probe_and_short_series() {
        let cfg = SystemConfig::normalized(1e-3).unwrap();
        assert!(matches!(
            perturbing_potential(&cfg, 1.2, 0.0, 8),
            Err(Error::OuterProbe { .. })
        ));
        assert!(perturbing_potential(&cfg, 0.5, 0.0, 1).is_err());
    }

    #[test]
    fn mean_radius_examples() {
        let o = ProbeOrbit::circular(1.0).unwrap();
        assert_eq!(mean_radius(&o), 1.0);
        let o = ProbeOrbit::new(1.0, 0.5, 0.0).unwrap();
        assert!((mean_radius(&o) - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn mean_radius_matches_phase_average() {
        let o = ProbeOrbit::new(2.5, 0.1, 0.0).unwrap();
        let n = 2048;
        let p = o.a * (1.0 - o.e * o.e);
        let avg = (0..n)
            .map(|j| p / (1.0 + o.e * (2.0 * PI * j as f64 / n as f64).cos()))
            .sum::<f64>()
            / n as f64;
        assert!((mean_radius(&o) - avg).abs() < 1e-10);
        assert!((mean_radius(&o) - 2.48747).abs() < 1e-5);
    }

    #[test]
    fn angular_momentum_examples() {
        let cfg = SystemConfig::normalized(0.0).unwrap();
        assert_eq!(angular_momentum(&cfg, &ProbeOrbit::circular(1.0).unwrap()), 1.0);
        let l = angular_momentum(&cfg, &ProbeOrbit::new(1.0, 0.5, 0.0).unwrap());
        assert!((l - 0.75f64.sqrt()).abs() < 1e-15);
        let cfg4 = SystemConfig::physical(4.0, 1.0, 0.0, 10.0).unwrap();
        let l = angular_momentum(&cfg4, &ProbeOrbit::circular(2.0).unwrap());
        assert!((l - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(SystemConfig::normalized(-0.1).is_err());
        assert!(SystemConfig::normalized(1.0).is_err());
        assert!(SystemConfig::physical(0.0, 1.0, 0.0, 1.0).is_err());
        let cfg = SystemConfig::normalized(0.1).unwrap();
        assert!((cfg.omega_s - 1.1f64.sqrt()).abs() < 1e-15);
        assert!(cfg.with_omega_s(2.0).is_err());
        let phys = SystemConfig::physical(1.0, 1.0, 0.0, 4.0).unwrap();
        assert_eq!(phys.with_omega_s(2.0).unwrap().omega_s, 2.0);
        assert!(ProbeOrbit::new(1.0, 1.0, 0.0).is_err());
        assert!(ProbeOrbit::new(-1.0, 0.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn legendre_bounded(p in 0usize..40, x in -1.0f64..=1.0) {
            prop_assert!(legendre_p(p, x).unwrap().abs() <= 1.0 + 1e-12);
        }

        #[test]
        fn mutual_distance_triangle(r1 in 0.01f64..10.0, r2 in 0.01f64..10.0, s in -7.0f64..7.0) {
            let d = mutual_distance(r1, r2, s);
            prop_assert!(d >= (r1 - r2).abs() - 1e-12);
            prop_assert!(d <= r1 + r2 + 1e-12);
        }

        #[test]
        fn potential_error_shrinks_with_order(y in 0.05f64..0.9, s in 0.0f64..6.28) {
            let cfg = SystemConfig::normalized(0.01).unwrap();
            let delta = mutual_distance(y, 1.0, s);
            let direct = -1.0 / y - 0.01 / delta + 0.01 * y * s.cos() + 0.01;
            let mut last_bound = f64::INFINITY;
            for pmax in [4usize, 8, 16, 32] {
                let err = (perturbing_potential(&cfg, y, s, pmax).unwrap() - direct).abs();
                let bound = 0.01 * series_error_bound(y, pmax);
                prop_assert!(err <= bound + 1e-13);
                prop_assert!(bound < last_bound);
                last_bound = bound;
            }
        }

        #[test]
        fn mean_radius_not_above_a(a in 0.1f64..10.0, e in 0.0f64..0.99) {
            let o = ProbeOrbit::new(a, e, 0.0).unwrap();
            let rbar = mean_radius(&o);
            prop_assert!(rbar <= a);
            if e > 0.0 { prop_assert!(rbar < a); }
        }
    }
}
