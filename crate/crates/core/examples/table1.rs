//! Reproduce the tabulated zone positions and print the CSV.

use rtbp_resonance::cli::{self, RunConfig};

fn main() {
    match cli::cmd_table1(&RunConfig::default()) {
        Ok(report) => print!("{}", report.csv),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
