//! Analytic catalog of parametric-instability zones.
//!
//! Zone `n` is the principal parametric resonance of harmonic `n` of the
//! synodic drive: `n (omega - omega_s) = 2 omega`, i.e. the commensurability
//! `omega / omega_s = n / (n - 2)`. Eccentricity shifts the centers through
//! the `e^4` correction to the base frequency.

use crate::error::{invalid, Error, Result};
use crate::hillde::{self, HillOptions};
use crate::kernel::{ProbeOrbit, SystemConfig};

/// Knobs of the zone formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZoneParams {
    /// Shift parameter `alpha` of the center condition.
    pub alpha: f64,
    /// `e^4` coefficient in the zone centers (and in the overlap gap).
    pub center_coeff: f64,
    /// `e^4` coefficient in the denominator of the overlap width term.
    pub width_coeff: f64,
}

impl Default for ZoneParams {
    fn default() -> Self {
        Self {
            alpha: 0.0,
            center_coeff: 0.75,
            width_coeff: 0.375,
        }
    }
}

/// A mean-motion commensurability `p:q`, together with the family order it
/// was generated from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resonance {
    pub p: u32,
    pub q: u32,
    /// Numerator `n` of the unreduced family member `n:(n-2)`.
    pub order_k: u32,
}

impl Resonance {
    /// Family member `n:(n-2)` in lowest terms.
    pub fn from_order(n: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::Pole { n, denominator: n as f64 - 2.0 });
        }
        let g = gcd(n, n - 2);
        Ok(Self { p: n / g, q: (n - 2) / g, order_k: n })
    }

    pub fn ratio(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn label(&self) -> String {
        format!("{}:{}", self.p, self.q)
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Frequency ratio `omega / omega_s` of the family member with order `pk`,
/// `pk / (pk - 2)`.
pub fn family_ratio(pk: u32) -> f64 {
    pk as f64 / (pk as f64 - 2.0)
}

/// Center of zone `n`: `n / (n - 2 (1 - alpha / 2) + c_e e^4)`.
pub fn zone_center(n: u32, e: f64, alpha: f64, center_coeff: f64) -> Result<f64> {
    check_ecc(e)?;
    let denominator = n as f64 - 2.0 * (1.0 - 0.5 * alpha) + center_coeff * e.powi(4);
    if n < 3 || denominator <= 0.0 {
        return Err(Error::Pole { n, denominator });
    }
    Ok(n as f64 / denominator)
}

/// Kepler's third law for the frequency ratio: `a = r ratio^(-2/3)`.
pub fn center_semimajor_axis(cfg: &SystemConfig, ratio: f64) -> Result<f64> {
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(invalid("ratio", format!("must be > 0, got {ratio}")));
    }
    Ok(cfg.r_perturber * ratio.powf(-2.0 / 3.0))
}

/// First- and second-order widths
/// `eps1 = omega0 n h / (2 (n - 2))`, `eps2 = omega0 n h^2 / (8 (n - 2))`.
pub fn zone_width(omega0: f64, n: u32, h_n: f64) -> Result<(f64, f64)> {
    if n < 3 {
        return Err(Error::Pole { n, denominator: n as f64 - 2.0 });
    }
    if !(h_n >= 0.0) {
        return Err(invalid("h_n", format!("must be >= 0, got {h_n}")));
    }
    let k = n as f64 / (n as f64 - 2.0);
    Ok((omega0 * k * h_n / 2.0, omega0 * k * h_n * h_n / 8.0))
}

/// Frequency width converted to semimajor axis by `da / a = (2/3) dw / w`.
pub fn width_in_semimajor_axis(eps: f64, omega0: f64, a: f64) -> f64 {
    2.0 / 3.0 * eps / omega0 * a
}

/// One instability tongue.
#[derive(Debug, Clone, PartialEq)]
pub struct InstabilityZone {
    pub n: u32,
    pub resonance: Resonance,
    pub center_ratio: f64,
    pub center_a: f64,
    pub omega0: f64,
    pub h_n: f64,
    pub b_n: f64,
    pub width_eps1: f64,
    pub width_eps2: f64,
    pub width_a: f64,
    pub e: f64,
}

/// Build zone `n` at eccentricity `e`, with `h_n` from the Hill coefficients
/// of a probe sitting at the zone center.
pub fn zone(
    cfg: &SystemConfig,
    n: u32,
    e: f64,
    params: &ZoneParams,
    opts: &HillOptions,
) -> Result<InstabilityZone> {
    let center_ratio = zone_center(n, e, params.alpha, params.center_coeff)?;
    zone_at_ratio(cfg, n, center_ratio, e, opts)
}

/// Like [`zone`] but with an explicitly supplied center ratio.
pub fn zone_at_ratio(
    cfg: &SystemConfig,
    n: u32,
    center_ratio: f64,
    e: f64,
    opts: &HillOptions,
) -> Result<InstabilityZone> {
    let resonance = Resonance::from_order(n)?;
    let center_a = center_semimajor_axis(cfg, center_ratio)?;
    let orbit = ProbeOrbit::new(center_a, e, 0.0)?;
    let pmax = opts.pmax.max(n as usize);
    let b = hillde::fourier_b_with(cfg, &orbit, pmax, opts.quad_nodes)?;
    let h = hillde::hill_amplitudes_with(cfg, &orbit, &b, opts.ecc_coeff);
    let omega0 = hillde::base_frequency_sq(cfg, &orbit, opts.ecc_coeff).sqrt();
    let (b_n, h_n) = (b[n as usize], h[n as usize].abs());
    let (eps1, eps2) = zone_width(omega0, n, h_n)?;
    Ok(InstabilityZone {
        n,
        resonance,
        center_ratio,
        center_a,
        omega0,
        h_n,
        b_n,
        width_eps1: eps1,
        width_eps2: eps2,
        width_a: width_in_semimajor_axis(eps1, omega0, center_a),
        e,
    })
}

/// Zones `n_lo ..= n_hi` at one eccentricity.
pub fn zone_catalog(
    cfg: &SystemConfig,
    orders: std::ops::RangeInclusive<u32>,
    e: f64,
    params: &ZoneParams,
    opts: &HillOptions,
) -> Result<Vec<InstabilityZone>> {
    orders.map(|n| zone(cfg, n, e, params, opts)).collect()
}

/// Adjacent-zone overlap test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapReport {
    pub n: u32,
    /// Distance between the centers of zones `n` and `n + 1`.
    pub gap: f64,
    /// `n (m/M) b_n / (2 (n - 2) (1 - c_w e^4))`.
    pub width_term: f64,
    pub margin: f64,
    pub overlapped: bool,
}

pub fn overlap_margin(
    cfg: &SystemConfig,
    n: u32,
    e: f64,
    b_n: f64,
    params: &ZoneParams,
) -> Result<OverlapReport> {
    check_ecc(e)?;
    if n < 3 {
        return Err(Error::Pole { n, denominator: n as f64 - 2.0 });
    }
    let nf = n as f64;
    let shift = params.center_coeff * e.powi(4);
    let d_next = nf - (1.0 - shift);
    let d_this = nf - (2.0 - shift);
    let d_width = 2.0 * (nf - 2.0) * (1.0 - params.width_coeff * e.powi(4));
    for d in [d_next, d_this, d_width] {
        if d <= 0.0 {
            return Err(Error::Pole { n, denominator: d });
        }
    }
    let gap = ((nf + 1.0) / d_next - nf / d_this).abs();
    let width_term = nf * cfg.mass_ratio() * b_n / d_width;
    let margin = gap - width_term;
    Ok(OverlapReport {
        n,
        gap,
        width_term,
        margin,
        overlapped: margin <= 0.0,
    })
}

/// Real root of the circular-orbit overlap condition,
/// `(m b + sqrt((m b)^2 + 16 M m b)) / (2 m b)`.
pub fn critical_order_raw(cfg: &SystemConfig, b: f64) -> Result<f64> {
    let mb = cfg.m_perturber * b;
    if !(mb > 0.0) {
        return Err(Error::NoOverlap(format!(
            "m = {} and b = {b}: zones overlap only as n -> infinity",
            cfg.m_perturber
        )));
    }
    Ok((mb + (mb * mb + 16.0 * cfg.m_primary * mb).sqrt()) / (2.0 * mb))
}

/// Smallest order at which circular-orbit zones overlap (ceiling of the
/// raw root, never below the first family member `n = 3`).
pub fn critical_order(cfg: &SystemConfig, b: f64) -> Result<u32> {
    let raw = critical_order_raw(cfg, b)?;
    if raw > u32::MAX as f64 {
        return Err(Error::NoOverlap(format!("critical order {raw:e} out of range")));
    }
    Ok((raw.ceil() as u32).max(3))
}

/// One row of the eccentricity scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EccentricityRow {
    pub e: f64,
    /// Relative zone width `eps1 / omega0` with `h_n = (m/M) b_n / (1 - c_w e^4)`.
    pub width: f64,
    pub gap: f64,
    pub margin: f64,
}

pub fn eccentricity_scan(
    cfg: &SystemConfig,
    n: u32,
    b_n: f64,
    e_grid: &[f64],
    params: &ZoneParams,
) -> Result<Vec<EccentricityRow>> {
    e_grid
        .iter()
        .map(|&e| {
            if !(0.0..=0.9).contains(&e) {
                return Err(invalid("e", format!("scan grid must lie in [0, 0.9], got {e}")));
            }
            let h = cfg.mass_ratio() * b_n / (1.0 - params.width_coeff * e.powi(4));
            let (eps1, _) = zone_width(1.0, n, h)?;
            let report = overlap_margin(cfg, n, e, b_n, params)?;
            Ok(EccentricityRow {
                e,
                width: eps1,
                gap: report.gap,
                margin: report.gap - eps1,
            })
        })
        .collect()
}

/// First grid eccentricity where the width reaches the gap.
pub fn overlap_onset(rows: &[EccentricityRow]) -> Option<f64> {
    rows.iter().find(|r| r.margin <= 0.0).map(|r| r.e)
}

fn check_ecc(e: f64) -> Result<()> {
    if e.is_finite() && (0.0..1.0).contains(&e) {
        Ok(())
    } else {
        Err(invalid("e", format!("must lie in [0, 1), got {e}")))
    }
}
