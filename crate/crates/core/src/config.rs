//! Flat `section.key = value` run configuration.
//!
//! ```text
//! # comments start with '#'
//! flow.wind_speed = 6.0
//! rotor.diameter  = 80
//! design.polar_file = naca0012_synthetic.csv
//! ```
//!
//! A run describes either one rotor (`rotor.diameter`, `rotor.chord`,
//! `rotor.rpm`) or a design space (`sweep.*`), never both. The design point
//! is either fixed (`design.lift_coefficient`, `design.drag_coefficient`,
//! `design.incidence_deg`) or read from a polar file. Relative paths are
//! resolved against the directory holding the config file. The key list is
//! in [`KNOWN_KEYS`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::polar::{AerodynamicDesignPoint, PolarSet, DEFAULT_STALL_MARGIN};
use crate::rotor::{
    reynolds_number, FlowConditions, RotorGeometry, DEFAULT_DRIVETRAIN_EFFICIENCY,
    DEFAULT_STATION_COUNT,
};
use crate::search::{AxisRange, DesignConstraints, DesignSpace, FixedParameters};

pub const KNOWN_KEYS: &[&str] = &[
    "flow.wind_speed",
    "flow.air_density",
    "flow.kinematic_viscosity",
    "rotor.diameter",
    "rotor.chord",
    "rotor.rpm",
    "rotor.hub_to_tip_ratio",
    "rotor.blade_count",
    "design.lift_coefficient",
    "design.drag_coefficient",
    "design.incidence_deg",
    "design.polar_file",
    "design.stall_margin",
    "design.drag_safety_factor",
    "solver.station_count",
    "solver.drivetrain_efficiency",
    "sweep.diameter_min",
    "sweep.diameter_max",
    "sweep.diameter_step",
    "sweep.rpm_min",
    "sweep.rpm_max",
    "sweep.rpm_step",
    "sweep.chord_min",
    "sweep.chord_max",
    "sweep.chord_step",
    "sweep.target_electric_power",
    "sweep.max_tip_speed",
    "output.csv",
    "output.series_dir",
];

const GEOMETRY_KEYS: &[&str] = &["rotor.diameter", "rotor.chord", "rotor.rpm"];
const FIXED_POINT_KEYS: &[&str] = &[
    "design.lift_coefficient",
    "design.drag_coefficient",
    "design.incidence_deg",
];

#[derive(Debug, Clone)]
pub enum DesignSource {
    Fixed(AerodynamicDesignPoint),
    Polar {
        path: PathBuf,
        polars: PolarSet,
        stall_margin: f64,
        drag_safety_factor: f64,
    },
}

impl DesignSource {
    /// Design point for a blade of the given chord. Polar sources pick their
    /// curve from the chord Reynolds number.
    pub fn resolve(&self, flow: &FlowConditions, chord: f64) -> Result<AerodynamicDesignPoint> {
        match self {
            DesignSource::Fixed(point) => Ok(*point),
            DesignSource::Polar {
                polars,
                stall_margin,
                drag_safety_factor,
                ..
            } => {
                let curve = polars.select_curve(reynolds_number(flow, chord))?;
                curve.design_point_with_drag_factor(*stall_margin, *drag_safety_factor)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum RunLayout {
    Rotor(RotorGeometry),
    Sweep {
        space: DesignSpace,
        fixed: FixedParameters,
        target_electric_power: f64,
        max_tip_speed: Option<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub flow: FlowConditions,
    pub layout: RunLayout,
    pub design: DesignSource,
    pub station_count: usize,
    pub drivetrain_efficiency: f64,
    pub output_csv: Option<PathBuf>,
    pub series_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        Self::parse(&text, &path.display().to_string(), base)
    }

    pub fn parse(text: &str, source_name: &str, base_dir: &Path) -> Result<Self> {
        let entries = KeyValues::parse(text, source_name)?;
        entries.build(base_dir)
    }

    pub fn geometry(&self) -> Option<&RotorGeometry> {
        match &self.layout {
            RunLayout::Rotor(g) => Some(g),
            RunLayout::Sweep { .. } => None,
        }
    }

    pub fn constraints(&self) -> Option<DesignConstraints> {
        match &self.layout {
            RunLayout::Sweep {
                target_electric_power,
                max_tip_speed,
                ..
            } => Some(DesignConstraints {
                target_electric_power: *target_electric_power,
                drivetrain_efficiency: self.drivetrain_efficiency,
                max_tip_speed: *max_tip_speed,
                station_count: self.station_count,
            }),
            RunLayout::Rotor(_) => None,
        }
    }
}

struct KeyValues {
    values: BTreeMap<String, (u64, String)>,
}

impl KeyValues {
    fn parse(text: &str, source_name: &str) -> Result<Self> {
        let err = |line: u64, message: String| Error::Parse {
            source_name: source_name.to_string(),
            line,
            message,
        };
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx as u64 + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(line, format!("expected 'key = value', found '{content}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN_KEYS.contains(&key) {
                return Err(err(line, format!("unknown key '{key}'")));
            }
            if value.is_empty() {
                return Err(err(line, format!("key '{key}' has no value")));
            }
            if let Some((first, _)) = values.insert(key.to_string(), (line, value.to_string())) {
                return Err(err(line, format!("key '{key}' already set on line {first}")));
            }
        }
        Ok(Self { values })
    }

    fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    fn has_prefix(&self, prefix: &str) -> bool {
        self.values.keys().any(|k| k.starts_with(prefix))
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        match self.values.get(key) {
            None => Ok(None),
            Some((_, v)) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(Some)
                .ok_or_else(|| Error::invalid(key, v, "not a finite number")),
        }
    }

    fn number_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.number(key)?.unwrap_or(default))
    }

    fn required(&self, key: &str) -> Result<f64> {
        self.number(key)?
            .ok_or_else(|| Error::Config(format!("missing required key '{key}'")))
    }

    fn count(&self, key: &str, default: u64) -> Result<u64> {
        match self.values.get(key) {
            None => Ok(default),
            Some((_, v)) => v
                .parse::<u64>()
                .map_err(|_| Error::invalid(key, v, "not a non-negative integer")),
        }
    }

    fn path(&self, key: &str, base: &Path) -> Option<PathBuf> {
        self.values.get(key).map(|(_, v)| base.join(v))
    }

    fn build(&self, base: &Path) -> Result<RunConfig> {
        let flow = FlowConditions::new(
            self.number_or("flow.wind_speed", 6.0)?,
            self.number_or("flow.air_density", 1.22)?,
            self.number_or("flow.kinematic_viscosity", 1.5e-5)?,
        )
        .map_err(|e| qualify(e, "flow"))?;

        let hub_to_tip_ratio = self.number_or("rotor.hub_to_tip_ratio", 0.05)?;
        let blade_count = self.count("rotor.blade_count", 3)?;
        let blade_count = u32::try_from(blade_count)
            .map_err(|_| Error::invalid("rotor.blade_count", blade_count, "too large"))?;

        let has_geometry = GEOMETRY_KEYS.iter().any(|k| self.has(k));
        let has_space = self.has_prefix("sweep.");
        let layout = match (has_geometry, has_space) {
            (true, true) => {
                return Err(Error::Config(
                    "config sets both rotor geometry (rotor.diameter/chord/rpm) and a design space (sweep.*); choose one".into(),
                ))
            }
            (false, false) => {
                return Err(Error::Config(
                    "config sets neither rotor geometry (rotor.diameter/chord/rpm) nor a design space (sweep.*)".into(),
                ))
            }
            (true, false) => RunLayout::Rotor(
                RotorGeometry::from_diameter(
                    self.required("rotor.diameter")?,
                    hub_to_tip_ratio,
                    self.required("rotor.chord")?,
                    blade_count,
                    self.required("rotor.rpm")?,
                )
                .map_err(|e| qualify(e, "rotor"))?,
            ),
            (false, true) => {
                let defaults = DesignSpace::recommended();
                let axis = |name: &str, d: AxisRange| -> Result<AxisRange> {
                    Ok(AxisRange::new(
                        self.number_or(&format!("sweep.{name}_min"), d.min)?,
                        self.number_or(&format!("sweep.{name}_max"), d.max)?,
                        self.number_or(&format!("sweep.{name}_step"), d.step)?,
                    ))
                };
                if !(hub_to_tip_ratio > 0.0 && hub_to_tip_ratio < 1.0) {
                    return Err(Error::invalid(
                        "rotor.hub_to_tip_ratio",
                        hub_to_tip_ratio,
                        "must lie strictly between 0 and 1",
                    ));
                }
                RunLayout::Sweep {
                    space: DesignSpace {
                        diameter: axis("diameter", defaults.diameter)?,
                        rpm: axis("rpm", defaults.rpm)?,
                        chord: axis("chord", defaults.chord)?,
                    },
                    fixed: FixedParameters {
                        hub_to_tip_ratio,
                        blade_count,
                    },
                    target_electric_power: self.required("sweep.target_electric_power")?,
                    max_tip_speed: self.number("sweep.max_tip_speed")?,
                }
            }
        };

        let design = self.design_source(base)?;

        let station_count = self.count("solver.station_count", DEFAULT_STATION_COUNT as u64)? as usize;
        if station_count < 2 {
            return Err(Error::invalid("solver.station_count", station_count, "must be at least 2"));
        }
        let drivetrain_efficiency =
            self.number_or("solver.drivetrain_efficiency", DEFAULT_DRIVETRAIN_EFFICIENCY)?;
        if !(drivetrain_efficiency > 0.0 && drivetrain_efficiency <= 1.0) {
            return Err(Error::invalid(
                "solver.drivetrain_efficiency",
                drivetrain_efficiency,
                "must be a fraction in (0, 1]",
            ));
        }

        Ok(RunConfig {
            flow,
            layout,
            design,
            station_count,
            drivetrain_efficiency,
            output_csv: self.path("output.csv", base),
            series_dir: self.path("output.series_dir", base),
        })
    }

    fn design_source(&self, base: &Path) -> Result<DesignSource> {
        let fixed_keys = FIXED_POINT_KEYS.iter().filter(|k| self.has(k)).count();
        let polar = self.path("design.polar_file", base);
        match (fixed_keys, polar) {
            (0, None) => Err(Error::Config(
                "no design point: set design.lift_coefficient, design.drag_coefficient and design.incidence_deg, or design.polar_file".into(),
            )),
            (_, Some(_)) if fixed_keys > 0 => Err(Error::Config(
                "design point given twice: use either the fixed design.* coefficients or design.polar_file".into(),
            )),
            (_, Some(path)) => {
                let polars = PolarSet::from_path(&path)?;
                Ok(DesignSource::Polar {
                    path,
                    polars,
                    stall_margin: self.number_or("design.stall_margin", DEFAULT_STALL_MARGIN)?,
                    drag_safety_factor: self.number_or("design.drag_safety_factor", 1.0)?,
                })
            }
            (_, None) => {
                if self.has("design.stall_margin") || self.has("design.drag_safety_factor") {
                    return Err(Error::Config(
                        "design.stall_margin and design.drag_safety_factor only apply with design.polar_file".into(),
                    ));
                }
                let point = AerodynamicDesignPoint::fixed(
                    self.required("design.lift_coefficient")?,
                    self.required("design.drag_coefficient")?,
                    self.required("design.incidence_deg")?,
                )
                .map_err(|e| qualify(e, "design"))?;
                Ok(DesignSource::Fixed(point))
            }
        }
    }
}

/// Prefixes a bare parameter name with its config section.
fn qualify(err: Error, section: &str) -> Error {
    match err {
        Error::InvalidParameter { name, value, reason } if !name.contains('.') => Error::InvalidParameter {
            name: format!("{section}.{name}"),
            value,
            reason,
        },
        other => other,
    }
}
