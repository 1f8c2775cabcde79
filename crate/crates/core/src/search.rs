//! Exhaustive grid sweep over rotor diameter, shaft speed and chord.
//!
//! Every grid point is evaluated with the blade-element model and checked
//! against the electric-power target and an optional tip-speed cap. The
//! ranked list prefers feasible designs, then small rotors, then low tip
//! speed.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polar::AerodynamicDesignPoint;
use crate::rotor::{evaluate_rotor, FlowConditions, RotorGeometry, RotorSolution};

/// Inclusive `min..=max` grid with a fixed step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, step: f64) -> Self {
        Self { min, max, step }
    }

    pub fn single(value: f64) -> Self {
        Self {
            min: value,
            max: value,
            step: 1.0,
        }
    }

    fn validate(&self, axis: &str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.step.is_finite()) {
            return Err(Error::Config(format!("{axis} range has non-finite bounds")));
        }
        if self.min > self.max {
            return Err(Error::Config(format!(
                "{axis} range is empty: min {} > max {}",
                self.min, self.max
            )));
        }
        if self.step <= 0.0 {
            return Err(Error::Config(format!("{axis} step must be positive, got {}", self.step)));
        }
        Ok(())
    }

    /// Grid values `min + k * step`. `max` is included when a whole number
    /// of steps reaches it (up to a relative slack of 1e-9).
    pub fn values(&self) -> Vec<f64> {
        let steps = ((self.max - self.min) / self.step * (1.0 + 1e-9)).floor() as usize;
        (0..=steps).map(|k| self.min + k as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignSpace {
    pub diameter: AxisRange,
    pub rpm: AxisRange,
    pub chord: AxisRange,
}

impl DesignSpace {
    /// Diameter 80–110 m every 5 m, 6–18 rpm every 1 rpm, chord 1–4 m every
    /// 0.25 m.
    pub fn recommended() -> Self {
        Self {
            diameter: AxisRange::new(80.0, 110.0, 5.0),
            rpm: AxisRange::new(6.0, 18.0, 1.0),
            chord: AxisRange::new(1.0, 4.0, 0.25),
        }
    }

    /// Grid points in canonical order: diameter-major, then rpm, then chord.
    pub fn grid(&self) -> Result<Vec<(f64, f64, f64)>> {
        self.diameter.validate("diameter")?;
        self.rpm.validate("rpm")?;
        self.chord.validate("chord")?;
        let diameters = self.diameter.values();
        let speeds = self.rpm.values();
        let chords = self.chord.values();
        let mut points = Vec::with_capacity(diameters.len() * speeds.len() * chords.len());
        for &d in &diameters {
            for &n in &speeds {
                for &c in &chords {
                    points.push((d, n, c));
                }
            }
        }
        if points.is_empty() {
            return Err(Error::Config("design space has no grid points".into()));
        }
        Ok(points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignConstraints {
    /// Watts. Zero accepts every design.
    pub target_electric_power: f64,
    pub drivetrain_efficiency: f64,
    pub max_tip_speed: Option<f64>,
    pub station_count: usize,
}

impl DesignConstraints {
    fn validate(&self) -> Result<()> {
        if !(self.target_electric_power.is_finite() && self.target_electric_power >= 0.0) {
            return Err(Error::invalid(
                "target_electric_power",
                self.target_electric_power,
                "must be a finite number >= 0",
            ));
        }
        if !(self.drivetrain_efficiency > 0.0 && self.drivetrain_efficiency <= 1.0) {
            return Err(Error::invalid(
                "drivetrain_efficiency",
                self.drivetrain_efficiency,
                "must be a fraction in (0, 1]",
            ));
        }
        if let Some(limit) = self.max_tip_speed {
            if !(limit.is_finite() && limit > 0.0) {
                return Err(Error::invalid("max_tip_speed", limit, "must be positive"));
            }
        }
        Ok(())
    }
}

/// Parameters held constant across the sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedParameters {
    pub hub_to_tip_ratio: f64,
    pub blade_count: u32,
}

impl Default for FixedParameters {
    fn default() -> Self {
        Self {
            hub_to_tip_ratio: 0.05,
            blade_count: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignCandidate {
    pub geometry: RotorGeometry,
    pub solution: RotorSolution,
    pub feasible: bool,
    pub tip_speed: f64,
}

/// Sweeps `space` with one aerodynamic design point for every chord.
pub fn sweep(
    space: &DesignSpace,
    constraints: &DesignConstraints,
    flow: &FlowConditions,
    design: &AerodynamicDesignPoint,
    fixed: FixedParameters,
) -> Result<Vec<DesignCandidate>> {
    sweep_with(space, constraints, flow, fixed, |_| Ok(*design))
}

/// Like [`sweep`], but asks `design_for` for the design point of each
/// geometry (the polar curve may change with chord through the Reynolds
/// number).
///
/// Grid points are evaluated in parallel and reassembled in grid order
/// before ranking, so the result does not depend on the thread count.
pub fn sweep_with<F>(
    space: &DesignSpace,
    constraints: &DesignConstraints,
    flow: &FlowConditions,
    fixed: FixedParameters,
    design_for: F,
) -> Result<Vec<DesignCandidate>>
where
    F: Fn(&RotorGeometry) -> Result<AerodynamicDesignPoint> + Sync,
{
    constraints.validate()?;
    let grid = space.grid()?;
    log::debug!("sweeping {} grid points", grid.len());

    let candidates = grid
        .par_iter()
        .map(|&(diameter, rpm, chord)| {
            let geometry = RotorGeometry::from_diameter(
                diameter,
                fixed.hub_to_tip_ratio,
                chord,
                fixed.blade_count,
                rpm,
            )?;
            let design = design_for(&geometry)?;
            let solution = evaluate_rotor(
                flow,
                &geometry,
                &design,
                constraints.station_count,
                constraints.drivetrain_efficiency,
            )?;
            let tip_speed = geometry.tip_speed();
            let feasible = solution.electric_power >= constraints.target_electric_power
                && constraints.max_tip_speed.map_or(true, |limit| tip_speed <= limit);
            Ok(DesignCandidate {
                geometry,
                solution,
                feasible,
                tip_speed,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(rank(candidates))
}

/// Stable sort: feasible first, then ascending diameter, tip speed, rpm and
/// chord.
pub fn rank(mut candidates: Vec<DesignCandidate>) -> Vec<DesignCandidate> {
    candidates.sort_by(compare_candidates);
    candidates
}

fn compare_candidates(a: &DesignCandidate, b: &DesignCandidate) -> Ordering {
    b.feasible
        .cmp(&a.feasible)
        .then_with(|| a.geometry.diameter().total_cmp(&b.geometry.diameter()))
        .then_with(|| a.tip_speed.total_cmp(&b.tip_speed))
        .then_with(|| {
            a.geometry
                .rotational_speed_rpm()
                .total_cmp(&b.geometry.rotational_speed_rpm())
        })
        .then_with(|| a.geometry.chord().total_cmp(&b.geometry.chord()))
}
