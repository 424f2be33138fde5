//! The linear variational equation for the radial offset `x = R - R0`:
//!
//! ```text
//! x'' + omega^2(t) x = f(t),   omega^2 = omega0^2 (1 + sum_p h_p cos(p S))
//! ```
//!
//! where `S = (omega - omega_s) t + phi` is the mutual longitude. The
//! frequency can be evaluated three ways: the closed form in the mutual
//! distance, its zero-order limit in `y = R0 / r`, and the truncated Legendre
//! series. The series is projected onto cosine harmonics of `S` to obtain the
//! dimensionless amplitudes `b_p`, and those are rescaled into the relative
//! amplitudes `h_p` that drive the parametric instability.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::kernel::{self, ProbeOrbit, SystemConfig, DEFAULT_PMAX};

/// Default coefficient of the `e^4` correction to the base frequency.
pub const DEFAULT_ECC_COEFF: f64 = 0.75;
/// Default number of quadrature nodes for the Fourier projection.
pub const DEFAULT_QUAD_NODES: usize = 4096;
/// Allowed relative change of any `b_p` under grid refinement.
pub const QUAD_REFINE_TOL: f64 = 1e-10;

/// Numerical knobs shared by the coefficient builders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HillOptions {
    pub pmax: usize,
    pub quad_nodes: usize,
    /// Coefficient `c_e` in `1 - c_e e^4`.
    pub ecc_coeff: f64,
}

impl Default for HillOptions {
    fn default() -> Self {
        Self {
            pmax: DEFAULT_PMAX,
            quad_nodes: DEFAULT_QUAD_NODES,
            ecc_coeff: DEFAULT_ECC_COEFF,
        }
    }
}

impl HillOptions {
    pub fn with_pmax(mut self, pmax: usize) -> Self {
        self.pmax = pmax;
        self
    }
}

/// Coefficients of one Hill equation.
///
/// `omega0_sq * h[p] == tidal_scale * b[p]` for every `p`, so the frequency
/// can be rebuilt from either ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct HillCoefficients {
    pub omega0_sq: f64,
    pub b: Vec<f64>,
    pub h: Vec<f64>,
    /// Multiplier of `b` in the frequency, `gamma m / r^3` for the physical
    /// problem.
    pub tidal_scale: f64,
    /// Synodic rate `omega0 - omega_s`.
    pub drive_freq: f64,
    pub phase: f64,
    pub e_used: f64,
}

impl HillCoefficients {
    /// Coefficients for a probe on `orbit`. The probe's mean motion is taken
    /// to be the base frequency `omega0`, so the drive is `omega0 - omega_s`.
    pub fn build(cfg: &SystemConfig, orbit: &ProbeOrbit, opts: &HillOptions) -> Result<Self> {
        let b = fourier_b_with(cfg, orbit, opts.pmax, opts.quad_nodes)?;
        let h = hill_amplitudes_with(cfg, orbit, &b, opts.ecc_coeff);
        let omega0_sq = base_frequency_sq(cfg, orbit, opts.ecc_coeff);
        if !(omega0_sq > 0.0) {
            return Err(invalid("e", "eccentricity correction makes omega0^2 non-positive"));
        }
        let drive_freq = omega0_sq.sqrt() - cfg.omega_s;
        if drive_freq == 0.0 {
            return Err(invalid("a", "probe is co-orbital with the perturber"));
        }
        Ok(Self {
            omega0_sq,
            b,
            h,
            tidal_scale: cfg.tidal_scale(),
            drive_freq,
            phase: orbit.phi,
            e_used: orbit.e,
        })
    }

    /// Coefficients for the probe whose base frequency is `ratio * omega_s`.
    pub fn at_ratio(
        cfg: &SystemConfig,
        ratio: f64,
        e: f64,
        phi: f64,
        opts: &HillOptions,
    ) -> Result<Self> {
        let a = semimajor_axis_for_ratio(cfg, ratio, e, opts.ecc_coeff)?;
        Self::build(cfg, &ProbeOrbit::new(a, e, phi)?, opts)
    }

    /// Single-harmonic (Mathieu) equation
    /// `x'' + omega0^2 (1 + h cos(p (nu t))) x = 0` with `p = harmonic`.
    pub fn single_harmonic(omega0: f64, h: f64, harmonic: usize, drive_freq: f64) -> Self {
        let mut amps = vec![0.0; harmonic + 1];
        amps[harmonic] = h;
        Self {
            omega0_sq: omega0 * omega0,
            b: amps.clone(),
            h: amps,
            tidal_scale: omega0 * omega0,
            drive_freq,
            phase: 0.0,
            e_used: 0.0,
        }
    }

    /// One full synodic period, the common period of every harmonic.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.drive_freq.abs()
    }

    pub fn base_frequency(&self) -> f64 {
        self.omega0_sq.sqrt()
    }

    /// `omega^2` at mutual longitude `s`.
    pub fn omega_sq_at_angle(&self, s: f64) -> f64 {
        self.omega0_sq * (1.0 + cosine_series(&self.h, s))
    }

    /// `omega^2(t)` with `S = drive_freq * t + phase`.
    pub fn omega_sq(&self, t: f64) -> f64 {
        self.omega_sq_at_angle(self.drive_freq * t + self.phase)
    }

    /// The same frequency assembled from `b`: `omega0^2 + tidal_scale * sum b_p cos pS`.
    pub fn omega_sq_from_b(&self, s: f64) -> f64 {
        self.omega0_sq + self.tidal_scale * cosine_series(&self.b, s)
    }
}

/// Semimajor axis whose base frequency is `ratio * omega_s`.
pub fn semimajor_axis_for_ratio(cfg: &SystemConfig, ratio: f64, e: f64, ecc_coeff: f64) -> Result<f64> {
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(invalid("ratio", format!("must be > 0, got {ratio}")));
    }
    let damp = 1.0 - ecc_coeff * e.powi(4);
    if !(damp > 0.0) {
        return Err(invalid("e", "eccentricity correction makes omega0^2 non-positive"));
    }
    let omega = ratio * cfg.omega_s;
    Ok((cfg.mu() * damp / (omega * omega)).cbrt())
}

/// `sum_p c_p cos(p s)` by Clenshaw summation.
pub fn cosine_series(coeffs: &[f64], s: f64) -> f64 {
    let x = s.cos();
    let (mut b1, mut b2) = (0.0, 0.0);
    for c in coeffs.iter().skip(1).rev() {
        let b0 = c + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    coeffs.first().copied().unwrap_or(0.0) + x * b1 - b2
}

/// Synodic rate of a circular probe at radius `r0`.
pub fn synodic_rate(cfg: &SystemConfig, r0: f64) -> f64 {
    (cfg.mu() / r0.powi(3)).sqrt() - cfg.omega_s
}

/// Closed-form frequency at mutual longitude `s`:
/// `gamma M / R^3 - gamma m / Delta^3 (1 - 3 (R - r cos S)^2 / Delta^2)`.
pub fn omega_sq_exact_at(cfg: &SystemConfig, r0: f64, s: f64) -> Result<f64> {
    kernel::check_inner(cfg, r0)?;
    let r = cfg.r_perturber;
    let delta = kernel::mutual_distance(r0, r, s);
    if delta <= 1e-9 * r {
        return Err(Error::Collision { t: f64::NAN, separation: delta });
    }
    let radial = r0 - r * s.cos();
    let gm = cfg.gamma * cfg.m_perturber;
    Ok(cfg.mu() / r0.powi(3) - gm / delta.powi(3) * (1.0 - 3.0 * radial * radial / (delta * delta)))
}

/// [`omega_sq_exact_at`] at time `t` for a circular probe at `r0`.
pub fn omega_sq_exact(cfg: &SystemConfig, r0: f64, t: f64, phi: f64) -> Result<f64> {
    omega_sq_exact_at(cfg, r0, synodic_rate(cfg, r0) * t + phi)
}

/// Zero-order limit in `y`:
/// `gamma M / R^3 + gamma m / (2 r^3) + (3/2) (gamma m / r^3) cos(2 dw t)`.
pub fn omega_sq_zero_order(cfg: &SystemConfig, r0: f64, t: f64) -> Result<f64> {
    kernel::check_inner(cfg, r0)?;
    let s = synodic_rate(cfg, r0) * t;
    Ok(omega_sq_zero_order_at(cfg, r0, s))
}

pub fn omega_sq_zero_order_at(cfg: &SystemConfig, r0: f64, s: f64) -> f64 {
    let k = cfg.tidal_scale();
    cfg.mu() / r0.powi(3) + 0.5 * k + 1.5 * k * (2.0 * s).cos()
}

/// Dimensionless tidal sum `W(S) = sum_{q=2}^{pmax} q (q-1) y^(q-2) P_q(cos S)`.
pub fn tidal_sum(y: f64, s: f64, pmax: usize) -> f64 {
    let legendre = kernel::legendre_table(pmax, s.cos());
    let mut sum = 0.0;
    let mut yq = 1.0;
    for (q, pq) in legendre.iter().enumerate().skip(2) {
        sum += (q * (q - 1)) as f64 * yq * pq;
        yq *= y;
    }
    sum
}

/// Radial-force sum `sum_{q=2}^{pmax} q y^(q-1) P_q(cos S)` appearing in the forcing.
fn force_sum(y: f64, s: f64, pmax: usize) -> f64 {
    let legendre = kernel::legendre_table(pmax, s.cos());
    let mut sum = 0.0;
    let mut yq = y;
    for (q, pq) in legendre.iter().enumerate().skip(2) {
        sum += q as f64 * yq * pq;
        yq *= y;
    }
    sum
}

/// Frequency from the truncated series for an elliptic probe, using the
/// default `c_e = 3/4`:
/// `(gamma M / a^3)(1 - c_e e^4) + (gamma m / r^3) W(S)`, `y = Rbar0 / r`.
pub fn omega_sq_series(cfg: &SystemConfig, orbit: &ProbeOrbit, s: f64, pmax: usize) -> Result<f64> {
    if pmax < 2 {
        return Err(invalid("pmax", format!("must be >= 2, got {pmax}")));
    }
    let rbar = kernel::mean_radius(orbit);
    kernel::check_inner(cfg, rbar)?;
    let y = rbar / cfg.r_perturber;
    Ok(base_frequency_sq(cfg, orbit, DEFAULT_ECC_COEFF) + cfg.tidal_scale() * tidal_sum(y, s, pmax))
}

/// Base frequency `omega0^2 = (gamma M / a^3)(1 - c_e e^4)`.
pub fn base_frequency_sq(cfg: &SystemConfig, orbit: &ProbeOrbit, ecc_coeff: f64) -> f64 {
    cfg.mu() / orbit.a.powi(3) * (1.0 - ecc_coeff * orbit.e.powi(4))
}

/// Unexpanded radial stiffness `3 L0^2 / Rbar0^4 - 2 gamma M / Rbar0^3`.
pub fn radial_stiffness_exact(cfg: &SystemConfig, orbit: &ProbeOrbit) -> f64 {
    let l0 = kernel::angular_momentum(cfg, orbit);
    let rbar = kernel::mean_radius(orbit);
    3.0 * l0 * l0 / rbar.powi(4) - 2.0 * cfg.mu() / rbar.powi(3)
}

/// Cosine-Fourier coefficients `b_0 ..= b_pmax` of `W(S)` for the probe
/// orbit, with the default quadrature grid.
pub fn fourier_b(cfg: &SystemConfig, orbit: &ProbeOrbit, pmax: usize) -> Result<Vec<f64>> {
    fourier_b_with(cfg, orbit, pmax, DEFAULT_QUAD_NODES)
}

pub fn fourier_b_with(cfg: &SystemConfig, orbit: &ProbeOrbit, pmax: usize, nodes: usize) -> Result<Vec<f64>> {
    if pmax < 2 {
        return Err(invalid("pmax", format!("must be >= 2, got {pmax}")));
    }
    let rbar = kernel::mean_radius(orbit);
    kernel::check_inner(cfg, rbar)?;
    let y = rbar / cfg.r_perturber;
    fourier_refined(|s| tidal_sum(y, s, pmax), pmax, nodes)
}

/// Trapezoid projection on `nodes` and `2 nodes` points; fails when the two
/// disagree by more than [`QUAD_REFINE_TOL`] relative to the largest
/// coefficient.
fn fourier_refined(f: impl Fn(f64) -> f64, pmax: usize, nodes: usize) -> Result<Vec<f64>> {
    if nodes < 4 {
        return Err(invalid("quad_nodes", format!("must be >= 4, got {nodes}")));
    }
    let coarse = cosine_projection(&f, pmax, nodes);
    let fine = cosine_projection(&f, pmax, 2 * nodes);
    let scale = fine.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale > 0.0 {
        for (p, (c, f)) in coarse.iter().zip(&fine).enumerate() {
            let change = (c - f).abs() / scale;
            if change > QUAD_REFINE_TOL {
                return Err(Error::Quadrature { p, change });
            }
        }
    }
    Ok(fine)
}

/// `c_0 = mean f`, `c_p = (1/pi) int f cos(pS) dS` by the trapezoid rule.
pub fn cosine_projection(f: impl Fn(f64) -> f64, pmax: usize, nodes: usize) -> Vec<f64> {
    let step = 2.0 * PI / nodes as f64;
    let cos_table: Vec<f64> = (0..nodes).map(|j| (step * j as f64).cos()).collect();
    let values: Vec<f64> = (0..nodes).map(|j| f(step * j as f64)).collect();
    (0..=pmax)
        .map(|p| {
            let sum: f64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| v * cos_table[(p * j) % nodes])
                .sum();
            let norm = if p == 0 { 1.0 } else { 2.0 };
            norm * sum / nodes as f64
        })
        .collect()
}

/// Relative amplitudes `h_p = (m / M) (a / r)^3 b_p / (1 - (3/4) e^4)`.
pub fn hill_amplitudes(cfg: &SystemConfig, orbit: &ProbeOrbit, b: &[f64]) -> Vec<f64> {
    hill_amplitudes_with(cfg, orbit, b, DEFAULT_ECC_COEFF)
}

pub fn hill_amplitudes_with(cfg: &SystemConfig, orbit: &ProbeOrbit, b: &[f64], ecc_coeff: f64) -> Vec<f64> {
    // omega0^2 h_p = (gamma m / r^3) b_p exactly
    let factor = cfg.mass_ratio() * (orbit.a / cfg.r_perturber).powi(3)
        / (1.0 - ecc_coeff * orbit.e.powi(4));
    b.iter().map(|bp| factor * bp).collect()
}

/// Forcing term of the variational equation, split into the two-body
/// balance and the perturber's harmonics in `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForcingSpec {
    /// `L0^2 / Rbar0^3 - gamma M / Rbar0^2`.
    pub constant: f64,
    /// Cosine coefficients of `-(gamma m / r^2) sum_p p y^(p-1) P_p(cos S)`.
    pub harmonics: Vec<f64>,
}

impl ForcingSpec {
    pub fn eval(&self, s: f64) -> f64 {
        self.constant + cosine_series(&self.harmonics, s)
    }
}

pub fn forcing(cfg: &SystemConfig, orbit: &ProbeOrbit, pmax: usize) -> Result<ForcingSpec> {
    forcing_with(cfg, orbit, pmax, DEFAULT_QUAD_NODES)
}

pub fn forcing_with(cfg: &SystemConfig, orbit: &ProbeOrbit, pmax: usize, nodes: usize) -> Result<ForcingSpec> {
    if pmax < 2 {
        return Err(invalid("pmax", format!("must be >= 2, got {pmax}")));
    }
    let rbar = kernel::mean_radius(orbit);
    kernel::check_inner(cfg, rbar)?;
    let l0 = kernel::angular_momentum(cfg, orbit);
    let constant = l0 * l0 / rbar.powi(3) - cfg.mu() / (rbar * rbar);
    let y = rbar / cfg.r_perturber;
    let scale = -cfg.gamma * cfg.m_perturber / cfg.r_perturber.powi(2);
    let harmonics = if scale == 0.0 {
        vec![0.0; pmax + 1]
    } else {
        fourier_refined(|s| scale * force_sum(y, s, pmax), pmax, nodes)?
    };
    Ok(ForcingSpec { constant, harmonics })
}
