//! Width and gap of zone 13 against eccentricity at m/M = 0.1.

use rtbp_resonance::cli::{self, parse_config};

fn main() {
    let cfg = parse_config("[system]\nmass_ratio = 0.1\n[scan]\nn = 13\nb = 0.1\n").expect("static config");
    match cli::cmd_fig1(&cfg) {
        Ok(report) => print!("{}", report.csv),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
