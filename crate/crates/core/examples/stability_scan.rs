//! Floquet stability of circular orbits across frequency ratios; prints the
//! clusters of unstable grid points.

use rtbp_resonance::floquet;
use rtbp_resonance::hillde::HillOptions;
use rtbp_resonance::kernel::SystemConfig;

fn main() -> rtbp_resonance::error::Result<()> {
    let mass_ratio = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.1);
    let cfg = SystemConfig::normalized(mass_ratio)?;
    let grid: Vec<f64> = (0..=980).map(|i| 1.4 + 0.005 * i as f64).collect();
    let points = floquet::stability_scan(&cfg, 0.0, &grid, &HillOptions::default(), 1e-12)?;
    let failures = points.iter().filter(|p| p.result.is_err()).count();
    println!("m/M = {mass_ratio}: {} grid points, {failures} failures", points.len());
    for (lo, hi) in floquet::unstable_clusters(&points) {
        println!("unstable {lo:.3} .. {hi:.3}");
    }
    Ok(())
}
