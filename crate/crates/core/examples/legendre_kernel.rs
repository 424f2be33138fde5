//! Multipole expansion of the perturbing potential and its truncation error.

use rtbp_resonance::kernel::{self, SystemConfig};

fn main() -> rtbp_resonance::error::Result<()> {
    let cfg = SystemConfig::normalized(1e-3)?;
    let (radius, angle) = (0.6, 0.7);
    let r = cfg.r_perturber;
    let gm = cfg.gamma * cfg.m_perturber;
    // closed form of the same sum: 1/Delta minus its p = 0 and p = 1 terms
    let delta = kernel::mutual_distance(radius, r, angle);
    let exact = -cfg.mu() / radius - gm * (1.0 / delta - 1.0 / r - radius * angle.cos() / (r * r));

    println!("P_p(0.3), p = 0..6: {:?}", kernel::legendre_all(6, 0.3)?);
    println!("{:>5} {:>22} {:>12} {:>12}", "pmax", "series", "|error|", "bound");
    for pmax in [2, 4, 8, 16, 32] {
        let series = kernel::perturbing_potential(&cfg, radius, angle, pmax)?;
        let bound = gm / r * kernel::series_error_bound(radius / r, pmax);
        println!("{pmax:>5} {series:>22.15} {:>12.3e} {bound:>12.3e}", (series - exact).abs());
    }
    Ok(())
}
