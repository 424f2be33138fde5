//! Subcommands behind the `rtbp-resonance` binary. Each one is a
//! deterministic function from a [`RunConfig`] to a CSV document.

pub mod config;

use sha2::{Digest, Sha256};
use thiserror::Error;

pub use config::{grid, parse_config, ConfigError, Placement, RunConfig};

use crate::error::Error;
use crate::floquet;
use crate::hillde::HillCoefficients;
use crate::kernel::{ProbeOrbit, SystemConfig};
use crate::rtbp;
use crate::zones::{self, ZoneParams};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 0 success, 1 configuration problem, 2 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

/// CSV text plus any non-fatal warnings raised while producing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub csv: String,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanKind {
    Zones,
    Floquet,
    Rtbp,
    Overlap,
}

impl ScanKind {
    pub fn name(self) -> &'static str {
        match self {
            ScanKind::Zones => "zones",
            ScanKind::Floquet => "floquet",
            ScanKind::Rtbp => "rtbp",
            ScanKind::Overlap => "overlap",
        }
    }
}

/// One tabulated commensurability: order, printed label, driving ratio,
/// printed distance (with `r = 5.2025`), printed `b` and printed width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub order_k: u32,
    pub label: &'static str,
    pub ratio: f64,
    pub distance: f64,
    pub b: f64,
    pub width: f64,
}

pub const TABLE1_RADIUS: f64 = 5.2025;

/// The k = 6 row carries the label 3:2, but its distance belongs to 5:3.
pub const TABLE1: [Table1Row; 3] = [
    Table1Row { order_k: 3, label: "3:1", ratio: 3.0, distance: 2.501120, b: 0.077800, width: 0.0120 },
    Table1Row { order_k: 4, label: "2:1", ratio: 2.0, distance: 3.277395, b: 0.107630, width: 0.0114 },
    Table1Row { order_k: 6, label: "3:2", ratio: 5.0 / 3.0, distance: 3.700976, b: 0.132076, width: 0.0108 },
];

pub const TABLE1_HEADER: [&str; 7] =
    ["order_k", "resonance", "center_a", "b_computed", "b_paper", "width_a", "width_paper"];
pub const FIG1_HEADER: [&str; 4] = ["e", "width", "gap", "margin"];

fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Hex SHA-256 of the canonical configuration text.
pub fn config_hash(cfg: &RunConfig) -> String {
    hex::encode(Sha256::digest(cfg.serialize().as_bytes()))
}

fn document(
    cfg: &RunConfig,
    command: &str,
    notes: &[String],
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<String, CliError> {
    let mut text = format!(
        "# {} {} command={command} config-sha256={}\n# config: {}\n",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION"),
        config_hash(cfg),
        cfg.one_line()
    );
    for note in notes {
        text.push_str(&format!("# {note}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let body = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    text.push_str(&String::from_utf8(body).map_err(|e| CliError::Io(e.to_string()))?);
    Ok(text)
}

fn system(cfg: &RunConfig) -> Result<SystemConfig, CliError> {
    cfg.system_config().map_err(|e| {
        CliError::Config(ConfigError::Constraint { key: "system", message: e.to_string() })
    })
}

fn zone_params(cfg: &RunConfig) -> ZoneParams {
    ZoneParams { center_coeff: cfg.numeric.c_e, ..cfg.zone_params() }
}

/// Error cells: empty values followed by the message.
fn failed(ncols: usize, lead: Vec<String>, err: &Error) -> Vec<String> {
    let mut row = lead;
    row.resize(ncols - 1, String::new());
    row.push(err.to_string());
    row
}

/// Tabulated zones at `r = 5.2025` with the configured mass ratio, `e = 0`.
pub fn cmd_table1(cfg: &RunConfig) -> Result<Report, CliError> {
    let sys = system(cfg)?;
    let table_sys = SystemConfig::physical(1.0, 1.0, sys.mass_ratio(), TABLE1_RADIUS)?;
    let opts = cfg.hill_options();
    let mut rows = Vec::new();
    for t in TABLE1 {
        let z = zones::zone_at_ratio(&table_sys, t.order_k, t.ratio, 0.0, &opts)?;
        rows.push(vec![
            t.order_k.to_string(),
            t.label.to_string(),
            num(z.center_a),
            num(z.b_n),
            num(t.b),
            num(z.width_a),
            num(t.width),
        ]);
    }
    let notes = ["order_k=6 is evaluated at ratio 5/3, the ratio whose distance is tabulated; its label 3:2 is kept".to_string()];
    let csv = document(cfg, "table1", &notes, &TABLE1_HEADER, &rows)?;
    Ok(Report { csv, warnings: Vec::new() })
}

/// Width, gap and margin of zone `scan.n` with fixed `scan.b` over the
/// eccentricity grid.
pub fn cmd_fig1(cfg: &RunConfig) -> Result<Report, CliError> {
    let sys = system(cfg)?;
    let es = grid(cfg.scan.e_min, cfg.scan.e_max, cfg.scan.e_step);
    let scan = zones::eccentricity_scan(&sys, cfg.scan.n, cfg.scan.b, &es, &cfg.zone_params())?;
    let rows: Vec<Vec<String>> = scan
        .iter()
        .map(|r| vec![num(r.e), num(r.width), num(r.gap), num(r.margin)])
        .collect();
    let csv = document(cfg, "fig1", &[], &FIG1_HEADER, &rows)?;
    Ok(Report { csv, warnings: Vec::new() })
}

pub fn cmd_scan(cfg: &RunConfig, kind: ScanKind) -> Result<Report, CliError> {
    let sys = system(cfg)?;
    let command = format!("scan:{}", kind.name());
    let mut warnings = Vec::new();
    let (header, rows): (Vec<&str>, Vec<Vec<String>>) = match kind {
        ScanKind::Zones => {
            let header = vec![
                "n", "resonance", "center_ratio", "center_a", "b_n", "h_n", "width_eps1", "width_eps2", "width_a",
                "error",
            ];
            let (params, opts) = (zone_params(cfg), cfg.hill_options());
            let rows = (cfg.scan.n_min..=cfg.scan.n_max)
                .map(|n| match zones::zone(&sys, n, cfg.orbit.e, &params, &opts) {
                    Ok(z) => vec![
                        n.to_string(),
                        z.resonance.label(),
                        num(z.center_ratio),
                        num(z.center_a),
                        num(z.b_n),
                        num(z.h_n),
                        num(z.width_eps1),
                        num(z.width_eps2),
                        num(z.width_a),
                        String::new(),
                    ],
                    Err(e) => failed(header.len(), vec![n.to_string()], &e),
                })
                .collect();
            (header, rows)
        }
        ScanKind::Floquet => {
            let header = vec!["ratio", "trace", "multiplier", "unstable", "error"];
            let ratios = grid(cfg.scan.ratio_min, cfg.scan.ratio_max, cfg.scan.ratio_step);
            let points =
                floquet::stability_scan(&sys, cfg.orbit.e, &ratios, &cfg.hill_options(), cfg.numeric.floquet_tol)?;
            let rows = points
                .iter()
                .map(|p| match &p.result {
                    Ok(m) => vec![
                        num(p.ratio),
                        num(m.trace),
                        num(m.multipliers[0]),
                        m.unstable.to_string(),
                        String::new(),
                    ],
                    Err(e) => failed(header.len(), vec![num(p.ratio)], e),
                })
                .collect();
            (header, rows)
        }
        ScanKind::Rtbp => {
            let header = vec!["t", "R", "lambda", "vR", "L", "a_osc", "e_osc", "C_J"];
            let a = match cfg.orbit.placement {
                Placement::SemimajorAxis(a) => a,
                Placement::Ratio(r) => zones::center_semimajor_axis(&sys, r)?,
            };
            let state0 = rtbp::pericenter_state(&sys, a, cfg.orbit.e, cfg.orbit.phi)?;
            let t_end = cfg.scan.periods * rtbp::perturber_period(&sys);
            let mut prop = rtbp::Propagator::new(sys.clone(), cfg.numeric.rtbp_tol);
            prop.jacobi_bound = cfg.output.jacobi_bound;
            let traj = prop.integrate(&state0, t_end, &rtbp::uniform_times(t_end, cfg.output.samples))?;
            warnings = traj.warnings;
            let rows = traj
                .samples
                .iter()
                .map(|s| {
                    let st = &s.state;
                    vec![
                        num(st.t),
                        num(st.radius),
                        num(st.lambda),
                        num(st.v_radial),
                        num(st.ang_mom),
                        num(s.elements.a),
                        num(s.elements.e),
                        num(s.jacobi),
                    ]
                })
                .collect();
            (header, rows)
        }
        ScanKind::Overlap => {
            let header = vec!["n", "e", "gap", "width_term", "margin", "overlapped", "error"];
            let params = cfg.zone_params();
            let es = grid(cfg.scan.e_min, cfg.scan.e_max, cfg.scan.e_step);
            let mut rows = Vec::new();
            for n in cfg.scan.n_min..=cfg.scan.n_max {
                for &e in &es {
                    rows.push(match zones::overlap_margin(&sys, n, e, cfg.scan.b, &params) {
                        Ok(r) => vec![
                            n.to_string(),
                            num(e),
                            num(r.gap),
                            num(r.width_term),
                            num(r.margin),
                            r.overlapped.to_string(),
                            String::new(),
                        ],
                        Err(err) => failed(header.len(), vec![n.to_string(), num(e)], &err),
                    });
                }
            }
            (header, rows)
        }
    };
    let has_error_column = header.last() == Some(&"error");
    if has_error_column && !rows.is_empty() && rows.iter().all(|r| !r.last().unwrap().is_empty()) {
        return Err(CliError::Numerical(Error::Integration(format!(
            "every point of the {} scan failed: {}",
            kind.name(),
            rows[0].last().unwrap()
        ))));
    }
    let csv = document(cfg, &command, &[], &header, &rows)?;
    Ok(Report { csv, warnings })
}

/// Hill coefficients of the configured orbit.
pub fn cmd_coeffs(cfg: &RunConfig) -> Result<Report, CliError> {
    let sys = system(cfg)?;
    let opts = cfg.hill_options();
    let o = &cfg.orbit;
    let c = match o.placement {
        Placement::Ratio(r) => HillCoefficients::at_ratio(&sys, r, o.e, o.phi, &opts)?,
        Placement::SemimajorAxis(a) => HillCoefficients::build(&sys, &ProbeOrbit::new(a, o.e, o.phi)?, &opts)?,
    };
    let notes = [format!(
        "omega0_sq={} drive_freq={} period={} tidal_scale={}",
        num(c.omega0_sq),
        num(c.drive_freq),
        num(c.period()),
        num(c.tidal_scale)
    )];
    let rows: Vec<Vec<String>> = c
        .b
        .iter()
        .zip(&c.h)
        .enumerate()
        .map(|(p, (b, h))| vec![p.to_string(), num(*b), num(*h)])
        .collect();
    let csv = document(cfg, "coeffs", &notes, &["p", "b", "h"], &rows)?;
    Ok(Report { csv, warnings: Vec::new() })
}

/// Smallest overlapping order for circular orbits with `b = scan.b`.
pub fn cmd_critical_order(cfg: &RunConfig) -> Result<Report, CliError> {
    let sys = system(cfg)?;
    let raw = zones::critical_order_raw(&sys, cfg.scan.b)?;
    let n = zones::critical_order(&sys, cfg.scan.b)?;
    let rows = vec![vec![num(sys.mass_ratio()), num(cfg.scan.b), num(raw), n.to_string()]];
    let csv = document(cfg, "critical-order", &[], &["mass_ratio", "b", "n_raw", "n_critical"], &rows)?;
    Ok(Report { csv, warnings: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header_of(csv: &str) -> &str {
        csv.lines().find(|l| !l.starts_with('#')).unwrap()
    }

    fn data(csv: &str) -> Vec<Vec<String>> {
        csv.lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .map(|l| l.split(',').map(String::from).collect())
            .collect()
    }

    #[test]
    fn provenance_first() {
        let cfg = RunConfig::default();
        let r = cmd_fig1(&cfg).unwrap();
        let mut lines = r.csv.lines();
        let first = lines.next().unwrap();
        assert!(first.starts_with("# rtbp-resonance ") && first.contains(&config_hash(&cfg)));
        assert!(lines.next().unwrap().starts_with("# config: system.normalized=true"));
        assert_eq!(header_of(&r.csv), "e,width,gap,margin");
    }

    #[test]
    fn table1_shape() {
        let r = cmd_table1(&RunConfig::default()).unwrap();
        assert_eq!(header_of(&r.csv), TABLE1_HEADER.join(","));
        let rows = data(&r.csv);
        assert_eq!(rows.len(), 3);
        for (row, t) in rows.iter().zip(TABLE1) {
            let a: f64 = row[2].parse().unwrap();
            assert!((a - t.distance).abs() < 1e-4, "{row:?}");
        }
        let b: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
        assert!(b.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn fig1_first_row_has_positive_margin() {
        let cfg = parse_config("mass_ratio = 0.1\n").unwrap();
        let rows = data(&cmd_fig1(&cfg).unwrap().csv);
        assert_eq!(rows.len(), 11);
        assert_eq!(rows[0][0], "0.0");
        assert!(rows[0][3].parse::<f64>().unwrap() > 0.0);
    }

    #[test]
    fn zone_scan_without_perturber_has_zero_widths() {
        let cfg = parse_config("mass_ratio = 0\nn_max = 12\n").unwrap();
        let rows = data(&cmd_scan(&cfg, ScanKind::Zones).unwrap().csv);
        assert_eq!(rows.len(), 10);
        for r in rows {
            for col in [6, 7, 8] {
                assert_eq!(r[col].parse::<f64>().unwrap(), 0.0);
            }
            assert!(r[9].is_empty());
        }
    }

    #[test]
    fn overlap_scan_rows() {
        let cfg = parse_config("n_min = 3\nn_max = 3\ne_max = 0.1\ne_step = 0.1\n").unwrap();
        let rows = data(&cmd_scan(&cfg, ScanKind::Overlap).unwrap().csv);
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r[6].is_empty()));
    }

    #[test]
    fn critical_order_row() {
        let cfg = parse_config("mass_ratio = 0.1\nb = 0.1\n").unwrap();
        let rows = data(&cmd_critical_order(&cfg).unwrap().csv);
        assert_eq!(rows[0][3], "21");
        let zero = parse_config("mass_ratio = 0\n").unwrap();
        assert_eq!(cmd_critical_order(&zero).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn coeffs_dump_has_all_orders() {
        let rows = data(&cmd_coeffs(&RunConfig::default()).unwrap().csv);
        assert_eq!(rows.len(), 17);
        assert_eq!(rows[3][0], "3");
    }

    #[test]
    fn rtbp_dump_is_sampled() {
        let cfg = parse_config("periods = 2\nsamples = 8\nrtbp_tol = 1e-9\n").unwrap();
        let r = cmd_scan(&cfg, ScanKind::Rtbp).unwrap();
        assert_eq!(header_of(&r.csv), "t,R,lambda,vR,L,a_osc,e_osc,C_J");
        assert_eq!(data(&r.csv).len(), 9);
    }

    #[test]
    fn deterministic_output() {
        let cfg = parse_config("ratio_min = 2.9\nratio_max = 3.1\nratio_step = 0.02\n").unwrap();
        let a = cmd_scan(&cfg, ScanKind::Floquet).unwrap();
        let b = cmd_scan(&cfg, ScanKind::Floquet).unwrap();
        assert_eq!(a, b);
    }
}
