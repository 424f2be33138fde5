//! Direct integration of circular starts: eccentricity growth at the 3:1
//! center against a control between resonances.

use rtbp_resonance::kernel::SystemConfig;
use rtbp_resonance::rtbp::{self, Propagator};
use rtbp_resonance::zones;

fn main() -> rtbp_resonance::error::Result<()> {
    let cfg = SystemConfig::normalized(1e-3)?;
    let prop = Propagator::new(cfg.clone(), 1e-11);
    let period = rtbp::perturber_period(&cfg);
    for ratio in [3.0, 2.5] {
        let a = zones::center_semimajor_axis(&cfg, ratio)?;
        let g = rtbp::eccentricity_growth(&prop, a, 500.0, 64, 0.01)?;
        println!(
            "ratio {ratio}: a = {a:.6}, max e = {:.5}, e > 0.01 after {}, Jacobi drift {:.1e}",
            g.max_e,
            g.first_crossing.map_or("never".into(), |t| format!("{:.1} periods", t / period)),
            g.jacobi_drift
        );
    }
    Ok(())
}
