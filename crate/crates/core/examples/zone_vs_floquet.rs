//! Analytic zone widths against Floquet-measured tongues of the full Hill
//! equation.

use rtbp_resonance::floquet::{self, ResonantFamily};
use rtbp_resonance::hillde::HillOptions;
use rtbp_resonance::kernel::SystemConfig;
use rtbp_resonance::zones::{self, ZoneParams};

fn main() -> rtbp_resonance::error::Result<()> {
    let cfg = SystemConfig::normalized(1e-3)?;
    let family = ResonantFamily::new(cfg.clone(), 0.0);
    println!("{:>3} {:>12} {:>14} {:>14} {:>12} {:>12} {:>8}", "n", "center", "lo", "hi", "measured", "eps1", "ratio");
    for n in [3, 4, 5, 6] {
        let z = zones::zone(&cfg, n, 0.0, &ZoneParams::default(), &HillOptions::default())?;
        let t = floquet::tongue_boundaries(&family, floquet::zone_window(&cfg, &z), 1e-12)?;
        let measured = cfg.omega_s * t.width();
        println!(
            "{n:>3} {:>12.8} {:>14.10} {:>14.10} {measured:>12.4e} {:>12.4e} {:>8.4}",
            z.center_ratio,
            t.lo,
            t.hi,
            z.width_eps1,
            z.width_eps1 / measured
        );
    }
    Ok(())
}
