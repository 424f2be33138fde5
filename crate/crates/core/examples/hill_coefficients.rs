//! Fourier ladder `b_p`, Hill amplitudes `h_p` and the rebuilt frequency for
//! one probe orbit.

use rtbp_resonance::hillde::{self, HillCoefficients, HillOptions};
use rtbp_resonance::kernel::{ProbeOrbit, SystemConfig};

fn main() -> rtbp_resonance::error::Result<()> {
    let cfg = SystemConfig::normalized(1e-3)?;
    let orbit = ProbeOrbit::circular(0.48)?;
    let c = HillCoefficients::build(&cfg, &orbit, &HillOptions::default())?;
    println!("omega0^2 = {:.12}  drive = {:.9}  period = {:.6}", c.omega0_sq, c.drive_freq, c.period());
    println!("{:>3} {:>16} {:>16}", "p", "b_p", "h_p");
    for (p, (b, h)) in c.b.iter().zip(&c.h).enumerate().take(8) {
        println!("{p:>3} {b:>16.9e} {h:>16.9e}");
    }
    println!("\n{:>6} {:>18} {:>18} {:>18}", "S", "exact", "Legendre series", "Fourier ladder");
    for k in 0..=6 {
        let s = std::f64::consts::PI * k as f64 / 6.0;
        let exact = hillde::omega_sq_exact_at(&cfg, orbit.a, s)?;
        let series = hillde::omega_sq_series(&cfg, &orbit, s, 16)?;
        println!("{s:>6.3} {exact:>18.12} {series:>18.12} {:>18.12}", c.omega_sq_at_angle(s));
    }
    Ok(())
}
