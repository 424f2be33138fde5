//! Adjacent-zone overlap: critical order for circular orbits and the
//! eccentricity at which zone 13 meets zone 14.

use rtbp_resonance::kernel::SystemConfig;
use rtbp_resonance::zones::{self, ZoneParams};

fn main() -> rtbp_resonance::error::Result<()> {
    for m in [1e-4, 1e-3, 1e-2, 0.1] {
        let cfg = SystemConfig::normalized(m)?;
        println!("m/M = {m:<6} b = 0.1: zones overlap from n = {}", zones::critical_order(&cfg, 0.1)?);
    }
    let cfg = SystemConfig::normalized(0.1)?;
    let grid: Vec<f64> = (0..=90).map(|i| i as f64 * 0.01).collect();
    for b in [0.1, 0.2, 0.3] {
        let rows = zones::eccentricity_scan(&cfg, 13, b, &grid, &ZoneParams::default())?;
        match zones::overlap_onset(&rows) {
            Some(e) => println!("n = 13, b = {b}: overlap from e = {e:.2}"),
            None => println!("n = 13, b = {b}: no overlap for e <= 0.9"),
        }
    }
    Ok(())
}
