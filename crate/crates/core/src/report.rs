//! CSV outputs and console summaries.
//!
//! The station table carries full `f64` precision so it can be re-integrated
//! without loss. Sweep, site and plot-series tables use 9 significant
//! digits; console summaries use 4.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rotor::{reynolds_number, FlowConditions, RotorGeometry, RotorSolution};
use crate::search::DesignCandidate;
use crate::site::RankedSite;

pub const FILE_DIGITS: usize = 9;
pub const CONSOLE_DIGITS: usize = 4;

/// Formats `x` with `digits` significant digits, trailing zeros removed.
/// Magnitudes outside `1e-4..10^digits` switch to exponent notation.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: "<output>".into(),
            source,
        },
        other => Error::Config(format!("csv write failed: {other:?}")),
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Station table laid out as hub, stations 1..N, tip. Hub and tip rows
/// leave the blade angle empty.
pub fn write_station_csv(solution: &RotorSolution, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    write_station_rows(solution, &mut w).map_err(csv_error)?;
    w.flush().map_err(|source| Error::Io {
        path: "<output>".into(),
        source,
    })
}

fn write_station_rows<W: Write>(solution: &RotorSolution, w: &mut csv::Writer<W>) -> csv::Result<()> {
    w.write_record(["station", "radius_m", "blade_angle_deg", "power_per_span_kW_per_m"])?;
    let full = |x: f64| x.to_string();
    w.write_record([
        "hub".to_string(),
        full(solution.hub_radius),
        String::new(),
        full(solution.hub_power_per_span / 1000.0),
    ])?;
    for (i, s) in solution.stations.iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            full(s.radius),
            full(s.blade_angle_deg),
            full(s.power_per_span / 1000.0),
        ])?;
    }
    w.write_record([
        "tip".to_string(),
        full(solution.tip_radius),
        String::new(),
        full(solution.tip_power_per_span / 1000.0),
    ])
}

/// Three two-column tables: relative angle, blade angle and power per unit
/// span against radius.
pub fn write_series(solution: &RotorSolution, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(io_error(dir))?;
    let sig = |x: f64| fmt_sig(x, FILE_DIGITS);

    let relative: Vec<[String; 2]> = solution
        .stations
        .iter()
        .map(|s| [sig(s.radius), sig(s.relative_angle_deg)])
        .collect();
    let blade: Vec<[String; 2]> = solution
        .stations
        .iter()
        .map(|s| [sig(s.radius), sig(s.blade_angle_deg)])
        .collect();
    let mut power = vec![[sig(solution.hub_radius), sig(solution.hub_power_per_span / 1000.0)]];
    power.extend(
        solution
            .stations
            .iter()
            .map(|s| [sig(s.radius), sig(s.power_per_span / 1000.0)]),
    );
    power.push([sig(solution.tip_radius), sig(solution.tip_power_per_span / 1000.0)]);

    let tables = [
        ("relative_angle.csv", ["radius_m", "relative_angle_deg"], relative),
        ("blade_angle.csv", ["radius_m", "blade_angle_deg"], blade),
        ("power_per_span.csv", ["radius_m", "power_per_span_kW_per_m"], power),
    ];
    for (name, header, rows) in tables {
        let path = dir.join(name);
        let file = std::fs::File::create(&path).map_err(io_error(&path))?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(header).map_err(csv_error)?;
        for row in rows {
            w.write_record(&row).map_err(csv_error)?;
        }
        w.flush().map_err(io_error(&path))?;
    }
    Ok(())
}

pub fn write_sweep_csv(candidates: &[DesignCandidate], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let sig = |x: f64| fmt_sig(x, FILE_DIGITS);
    w.write_record([
        "rank",
        "diameter_m",
        "rpm",
        "chord_m",
        "rotor_power_MW",
        "electric_power_MW",
        "tip_speed_m_per_s",
        "feasible",
    ])
    .map_err(csv_error)?;
    for (i, c) in candidates.iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            sig(c.geometry.diameter()),
            sig(c.geometry.rotational_speed_rpm()),
            sig(c.geometry.chord()),
            sig(c.solution.rotor_power / 1e6),
            sig(c.solution.electric_power / 1e6),
            sig(c.tip_speed),
            c.feasible.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: "<output>".into(),
        source,
    })
}

pub fn write_site_csv(ranked: &[RankedSite], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let sig = |x: f64| fmt_sig(x, FILE_DIGITS);
    w.write_record([
        "rank",
        "name",
        "mean_wind_speed_m_per_s",
        "air_density_kg_per_m3",
        "power_density_W_per_m2",
    ])
    .map_err(csv_error)?;
    for r in ranked {
        w.write_record([
            r.rank.to_string(),
            r.site.name.clone(),
            sig(r.site.mean_wind_speed),
            sig(r.site.air_density),
            sig(r.power_density),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: "<output>".into(),
        source,
    })
}

pub fn evaluate_summary(flow: &FlowConditions, geometry: &RotorGeometry, solution: &RotorSolution) -> String {
    let c = |x: f64| fmt_sig(x, CONSOLE_DIGITS);
    format!(
        "rotor power      {} MW\n\
         electric power   {} MW (drivetrain efficiency {})\n\
         Reynolds number  {}\n\
         tip speed        {} m/s\n\
         stations         {}\n",
        c(solution.rotor_power / 1e6),
        c(solution.electric_power / 1e6),
        c(solution.drivetrain_efficiency),
        c(reynolds_number(flow, geometry.chord())),
        c(geometry.tip_speed()),
        solution.stations.len(),
    )
}

pub fn candidate_summary(candidate: &DesignCandidate) -> String {
    let c = |x: f64| fmt_sig(x, CONSOLE_DIGITS);
    format!(
        "diameter {} m, {} rpm, chord {} m: rotor power {} MW, electric power {} MW, tip speed {} m/s",
        c(candidate.geometry.diameter()),
        c(candidate.geometry.rotational_speed_rpm()),
        c(candidate.geometry.chord()),
        c(candidate.solution.rotor_power / 1e6),
        c(candidate.solution.electric_power / 1e6),
        c(candidate.tip_speed),
    )
}
