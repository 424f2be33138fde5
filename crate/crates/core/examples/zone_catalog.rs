//! Analytic instability zones `n:(n-2)` and their outward drift with
//! eccentricity.

use rtbp_resonance::hillde::HillOptions;
use rtbp_resonance::kernel::SystemConfig;
use rtbp_resonance::zones::{self, ZoneParams};

fn main() -> rtbp_resonance::error::Result<()> {
    let cfg = SystemConfig::normalized(1e-3)?;
    let (params, opts) = (ZoneParams::default(), HillOptions::default());
    println!("{:>3} {:>5} {:>10} {:>10} {:>12} {:>12} {:>12}", "n", "res", "ratio", "a", "h_n", "eps1", "width_a");
    for z in zones::zone_catalog(&cfg, 3..=12, 0.0, &params, &opts)? {
        println!(
            "{:>3} {:>5} {:>10.6} {:>10.6} {:>12.4e} {:>12.4e} {:>12.4e}",
            z.n,
            z.resonance.label(),
            z.center_ratio,
            z.center_a,
            z.h_n,
            z.width_eps1,
            z.width_a
        );
    }
    println!("\ncenter of zone 5 against eccentricity");
    for e in [0.0, 0.1, 0.2, 0.3, 0.4, 0.5] {
        let ratio = zones::zone_center(5, e, params.alpha, params.center_coeff)?;
        println!("e = {e:.1}  ratio = {ratio:.8}  a = {:.8}", zones::center_semimajor_axis(&cfg, ratio)?);
    }
    Ok(())
}
