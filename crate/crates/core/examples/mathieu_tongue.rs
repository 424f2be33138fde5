//! Principal instability tongue of the Mathieu equation
//! `x'' + (1 + h cos(nu t)) x = 0`, measured by Floquet bisection.

use rtbp_resonance::floquet::{self, MathieuFamily};

fn main() -> rtbp_resonance::error::Result<()> {
    println!("{:>6} {:>14} {:>14} {:>12} {:>10}", "h", "lo", "hi", "width", "width/h");
    for h in [0.01, 0.02, 0.04, 0.08] {
        let family = MathieuFamily { omega0: 1.0, h };
        let t = floquet::tongue_boundaries(&family, floquet::seeded_window(2.0, h / 2.0), 1e-12)?;
        println!("{h:>6} {:>14.10} {:>14.10} {:>12.4e} {:>10.6}", t.lo, t.hi, t.width(), t.width() / h);
    }
    Ok(())
}
