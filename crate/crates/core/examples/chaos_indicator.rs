//! Finite-time Lyapunov exponents with and without the perturber.

use rtbp_resonance::kernel::SystemConfig;
use rtbp_resonance::rtbp;

fn main() -> rtbp_resonance::error::Result<()> {
    println!("{:>6} {:>6} {:>12} {:>8}", "m/M", "a", "ftle", "renorm");
    for m in [0.0, 1e-3, 0.1] {
        let cfg = SystemConfig::normalized(m)?;
        let horizon = 100.0 * rtbp::perturber_period(&cfg);
        for a in [0.48, 0.6, 0.72] {
            let s0 = rtbp::circular_state(&cfg, a, 0.0)?;
            match rtbp::divergence(&cfg, &s0, 1e-8, horizon, 1e-11) {
                Ok(d) => println!("{m:>6} {a:>6} {:>12.4e} {:>8}", d.ftle, d.renormalizations),
                Err(e) => println!("{m:>6} {a:>6} {e}"),
            }
        }
    }
    Ok(())
}
