use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{debug, info};

use rotorkit::config::{RunConfig, RunLayout};
use rotorkit::polar::{PolarSet, DEFAULT_STALL_MARGIN};
use rotorkit::report::{self, fmt_sig, CONSOLE_DIGITS};
use rotorkit::rotor::evaluate_rotor;
use rotorkit::search::sweep_with;
use rotorkit::{site, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "rotorkit", version, about = "Blade-element wind turbine rotor evaluation and design sweep")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one rotor and write its radial station table.
    Evaluate {
        #[arg(long)]
        config: PathBuf,
        /// Station CSV path; stdout when neither this nor output.csv is set.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for the relative-angle, blade-angle and power series.
        #[arg(long)]
        emit_series: Option<PathBuf>,
    },
    /// Sweep a design space and write the ranked candidates.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the stall-margined design point of a polar file.
    Polar {
        #[arg(long)]
        file: PathBuf,
        /// Operating Reynolds number.
        #[arg(long = "re")]
        reynolds: f64,
        #[arg(long, default_value_t = DEFAULT_STALL_MARGIN)]
        margin: f64,
        #[arg(long, default_value_t = 1.0)]
        drag_factor: f64,
    },
    /// Rank sites by wind power density.
    SiteRank {
        #[arg(long)]
        file: PathBuf,
        /// Ranked CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ROTORKIT_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Evaluate {
            config,
            out,
            emit_series,
        } => cmd_evaluate(&config, out, emit_series),
        Command::Sweep { config, out } => cmd_sweep(&config, out),
        Command::Polar {
            file,
            reynolds,
            margin,
            drag_factor,
        } => cmd_polar(&file, reynolds, margin, drag_factor),
        Command::SiteRank { file, out } => cmd_site_rank(&file, out),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|source| Error::Io {
            path: parent.display().to_string(),
            source,
        })?;
    }
    File::create(path).map(BufWriter::new).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn cmd_evaluate(config_path: &Path, out: Option<PathBuf>, series: Option<PathBuf>) -> Result<()> {
    let config = RunConfig::from_path(config_path)?;
    let geometry = match &config.layout {
        RunLayout::Rotor(g) => *g,
        RunLayout::Sweep { .. } => {
            return Err(Error::Config(
                "evaluate needs rotor.diameter, rotor.chord and rotor.rpm, not a sweep.* design space".into(),
            ))
        }
    };
    let design = config.design.resolve(&config.flow, geometry.chord())?;
    debug!("design point {design:?}");
    let solution = evaluate_rotor(
        &config.flow,
        &geometry,
        &design,
        config.station_count,
        config.drivetrain_efficiency,
    )?;

    let summary = report::evaluate_summary(&config.flow, &geometry, &solution);
    match out.or(config.output_csv.clone()) {
        Some(path) => {
            let mut w = create(&path)?;
            report::write_station_csv(&solution, &mut w)?;
            w.flush().map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
            info!("wrote {}", path.display());
            print!("{summary}");
        }
        None => {
            report::write_station_csv(&solution, io::stdout().lock())?;
            eprint!("{summary}");
        }
    }
    if let Some(dir) = series.or(config.series_dir.clone()) {
        report::write_series(&solution, &dir)?;
        info!("wrote series to {}", dir.display());
    }
    Ok(())
}

fn cmd_sweep(config_path: &Path, out: Option<PathBuf>) -> Result<()> {
    let config = RunConfig::from_path(config_path)?;
    let (space, fixed) = match &config.layout {
        RunLayout::Sweep { space, fixed, .. } => (*space, *fixed),
        RunLayout::Rotor(_) => {
            return Err(Error::Config(
                "sweep needs a sweep.* design space, not a single rotor geometry".into(),
            ))
        }
    };
    let path = out
        .or(config.output_csv.clone())
        .ok_or_else(|| Error::Config("sweep needs --out or output.csv".into()))?;
    let constraints = config.constraints().expect("sweep layout has constraints");
    let candidates = sweep_with(&space, &constraints, &config.flow, fixed, |g| {
        config.design.resolve(&config.flow, g.chord())
    })?;

    let mut w = create(&path)?;
    report::write_sweep_csv(&candidates, &mut w)?;
    w.flush().map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;

    let feasible = candidates.iter().filter(|c| c.feasible).count();
    println!("{} candidates, {} feasible", candidates.len(), feasible);
    match candidates.first().filter(|c| c.feasible) {
        Some(best) => println!("best: {}", report::candidate_summary(best)),
        None => println!("no feasible candidate"),
    }
    Ok(())
}

fn cmd_polar(file: &Path, reynolds: f64, margin: f64, drag_factor: f64) -> Result<()> {
    let polars = PolarSet::from_path(file)?;
    let curve = polars.select_curve(reynolds)?;
    let point = curve.design_point_with_drag_factor(margin, drag_factor)?;
    let c = |x: f64| fmt_sig(x, CONSOLE_DIGITS);
    println!("airfoil            {}", polars.airfoil_name());
    println!("curve Reynolds     {}", c(curve.reynolds()));
    println!("stall CL           {}", c(curve.stall_lift_coefficient()));
    println!("design CL          {}", c(point.lift_coefficient()));
    println!("design incidence   {} deg", c(point.incidence_deg()));
    println!("design CD          {}", c(point.drag_coefficient()));
    Ok(())
}

fn cmd_site_rank(file: &Path, out: Option<PathBuf>) -> Result<()> {
    let ranked = site::rank_sites(site::read_sites_path(file)?);
    match out {
        Some(path) => {
            let mut w = create(&path)?;
            report::write_site_csv(&ranked, &mut w)?;
            w.flush().map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })
        }
        None => report::write_site_csv(&ranked, io::stdout().lock()),
    }
}
