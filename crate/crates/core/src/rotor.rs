//! Blade-element rotor power model.
//!
//! Each radial station sees the axial wind `V` and the blade's own
//! tangential speed `U = ωr`. The relative wind `W` meets the axis at
//! `β = atan(U/V)`; lift and drag per unit span act across and along `W`,
//! and their tangential resultant times `U` is the power per unit span.
//! Stations are integrated with trapezoids from a zero-power hub to a
//! linearly extrapolated tip.
//!
//! There are no induction factors, tip losses or wake effects.

use std::f64::consts::PI;

use crate::error::{require_positive, Error, Result};
use crate::polar::AerodynamicDesignPoint;

/// Gearbox, generator and other conversion losses lumped together.
pub const DEFAULT_DRIVETRAIN_EFFICIENCY: f64 = 0.85;

pub const DEFAULT_STATION_COUNT: usize = 16;

/// Ambient wind state at the rotor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowConditions {
    wind_speed: f64,
    air_density: f64,
    kinematic_viscosity: f64,
}

impl FlowConditions {
    pub fn new(wind_speed: f64, air_density: f64, kinematic_viscosity: f64) -> Result<Self> {
        Ok(Self {
            wind_speed: require_positive("wind_speed", wind_speed)?,
            air_density: require_positive("air_density", air_density)?,
            kinematic_viscosity: require_positive("kinematic_viscosity", kinematic_viscosity)?,
        })
    }

    /// 6 m/s mean wind at Thumrait, 1.22 kg/m³, 1.5e-5 m²/s.
    pub fn dhofar() -> Self {
        Self {
            wind_speed: 6.0,
            air_density: 1.22,
            kinematic_viscosity: 1.5e-5,
        }
    }

    pub fn wind_speed(&self) -> f64 {
        self.wind_speed
    }

    pub fn air_density(&self) -> f64 {
        self.air_density
    }

    pub fn kinematic_viscosity(&self) -> f64 {
        self.kinematic_viscosity
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorGeometry {
    tip_radius: f64,
    hub_radius: f64,
    chord: f64,
    blade_count: u32,
    rotational_speed_rpm: f64,
}

impl RotorGeometry {
    pub fn new(
        tip_radius: f64,
        hub_radius: f64,
        chord: f64,
        blade_count: u32,
        rotational_speed_rpm: f64,
    ) -> Result<Self> {
        require_positive("tip_radius", tip_radius)?;
        require_positive("hub_radius", hub_radius)?;
        if hub_radius >= tip_radius {
            return Err(Error::invalid(
                "hub_radius",
                hub_radius,
                "must be smaller than the tip radius",
            ));
        }
        require_positive("chord", chord)?;
        if blade_count == 0 {
            return Err(Error::invalid("blade_count", blade_count, "must be at least 1"));
        }
        require_positive("rotational_speed_rpm", rotational_speed_rpm)?;
        Ok(Self {
            tip_radius,
            hub_radius,
            chord,
            blade_count,
            rotational_speed_rpm,
        })
    }

    /// Geometry from the rotor diameter and the hub-to-tip ratio.
    pub fn from_diameter(
        diameter: f64,
        hub_to_tip_ratio: f64,
        chord: f64,
        blade_count: u32,
        rotational_speed_rpm: f64,
    ) -> Result<Self> {
        require_positive("diameter", diameter)?;
        if !(hub_to_tip_ratio > 0.0 && hub_to_tip_ratio < 1.0) {
            return Err(Error::invalid(
                "hub_to_tip_ratio",
                hub_to_tip_ratio,
                "must lie strictly between 0 and 1",
            ));
        }
        let tip_radius = diameter / 2.0;
        Self::new(
            tip_radius,
            hub_to_tip_ratio * tip_radius,
            chord,
            blade_count,
            rotational_speed_rpm,
        )
    }

    /// 80 m diameter, 5% hub, 3.5 m chord, 3 blades at 15 rpm.
    pub fn dhofar() -> Self {
        Self::from_diameter(80.0, 0.05, 3.5, 3, 15.0).expect("valid geometry")
    }

    pub fn tip_radius(&self) -> f64 {
        self.tip_radius
    }

    pub fn hub_radius(&self) -> f64 {
        self.hub_radius
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.tip_radius
    }

    pub fn span(&self) -> f64 {
        self.tip_radius - self.hub_radius
    }

    pub fn chord(&self) -> f64 {
        self.chord
    }

    pub fn blade_count(&self) -> u32 {
        self.blade_count
    }

    pub fn rotational_speed_rpm(&self) -> f64 {
        self.rotational_speed_rpm
    }

    pub fn angular_velocity(&self) -> f64 {
        rpm_to_rad_per_s(self.rotational_speed_rpm)
    }

    pub fn tip_speed(&self) -> f64 {
        self.angular_velocity() * self.tip_radius
    }
}

/// Solution of the velocity triangle and forces at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialStation {
    pub radius: f64,
    pub tangential_velocity: f64,
    pub relative_angle_deg: f64,
    pub relative_velocity: f64,
    pub lift_per_span: f64,
    pub drag_per_span: f64,
    pub tangential_force_per_span: f64,
    pub power_per_span: f64,
    pub blade_angle_deg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotorSolution {
    pub stations: Vec<RadialStation>,
    pub hub_radius: f64,
    pub tip_radius: f64,
    /// Always 0: the hub contributes no power.
    pub hub_power_per_span: f64,
    /// Linear extrapolation through the two outermost stations.
    pub tip_power_per_span: f64,
    pub rotor_power: f64,
    pub electric_power: f64,
    pub drivetrain_efficiency: f64,
}

/// `Re = V c / ν`.
pub fn reynolds_number(flow: &FlowConditions, chord: f64) -> f64 {
    flow.wind_speed * chord / flow.kinematic_viscosity
}

/// Shaft speed in rad/s.
pub fn angular_velocity(rotational_speed_rpm: f64) -> Result<f64> {
    require_positive("rotational_speed_rpm", rotational_speed_rpm)?;
    Ok(rpm_to_rad_per_s(rotational_speed_rpm))
}

fn rpm_to_rad_per_s(rpm: f64) -> f64 {
    2.0 * PI * rpm / 60.0
}

/// `r_n = n / (N + 1) * span + r_hub` for `n = 1..=N`. Neither the hub nor
/// the tip is a station.
pub fn station_radii(geometry: &RotorGeometry, station_count: usize) -> Result<Vec<f64>> {
    if station_count < 2 {
        return Err(Error::Config(format!(
            "station_count must be at least 2, got {station_count}"
        )));
    }
    let span = geometry.span();
    let divisions = (station_count + 1) as f64;
    Ok((1..=station_count)
        .map(|n| n as f64 / divisions * span + geometry.hub_radius)
        .collect())
}

pub fn solve_station(
    radius: f64,
    flow: &FlowConditions,
    geometry: &RotorGeometry,
    design: &AerodynamicDesignPoint,
) -> Result<RadialStation> {
    if !(radius >= geometry.hub_radius && radius <= geometry.tip_radius) {
        return Err(Error::OutOfRange {
            what: "station radius",
            value: radius,
            min: geometry.hub_radius,
            max: geometry.tip_radius,
        });
    }
    Ok(blade_element(
        radius,
        geometry.angular_velocity(),
        flow,
        geometry.chord,
        design,
    ))
}

fn blade_element(
    radius: f64,
    omega: f64,
    flow: &FlowConditions,
    chord: f64,
    design: &AerodynamicDesignPoint,
) -> RadialStation {
    let v = flow.wind_speed;
    let u = omega * radius;
    let beta = (u / v).atan();
    let w_squared = u * u + v * v;
    let dynamic_pressure_chord = 0.5 * flow.air_density * w_squared * chord;
    let lift = dynamic_pressure_chord * design.lift_coefficient();
    let drag = dynamic_pressure_chord * design.drag_coefficient();
    let tangential = lift * beta.cos() - drag * beta.sin();
    let relative_angle_deg = beta.to_degrees();
    RadialStation {
        radius,
        tangential_velocity: u,
        relative_angle_deg,
        relative_velocity: w_squared.sqrt(),
        lift_per_span: lift,
        drag_per_span: drag,
        tangential_force_per_span: tangential,
        power_per_span: tangential * u,
        blade_angle_deg: relative_angle_deg + design.incidence_deg(),
    }
}

/// Per-blade integral of a power-per-span profile sampled at `radii`, with
/// zero power at `hub_radius` and the tip value extrapolated from the last
/// two samples. Returns `(integral, tip_power_per_span)`.
///
/// Terms are accumulated as hub segment, tip segment, then interior
/// segments from the hub outward.
pub fn integrate_span(
    hub_radius: f64,
    tip_radius: f64,
    radii: &[f64],
    power_per_span: &[f64],
) -> Result<(f64, f64)> {
    integrate_scaled(hub_radius, tip_radius, radii, power_per_span, 1.0)
}

fn integrate_scaled(
    hub_radius: f64,
    tip_radius: f64,
    radii: &[f64],
    power: &[f64],
    blades: f64,
) -> Result<(f64, f64)> {
    let n = radii.len();
    if n < 2 || power.len() != n {
        return Err(Error::Config(format!(
            "integration needs at least 2 stations with one power value each, got {n} radii and {} values",
            power.len()
        )));
    }
    let mut prev = hub_radius;
    for &r in radii {
        if !(r > prev && r < tip_radius) {
            return Err(Error::Config(format!(
                "station radius {r} breaks the strictly increasing order inside ({hub_radius}, {tip_radius})"
            )));
        }
        prev = r;
    }

    let last = n - 1;
    let tip_power = power[last]
        + (power[last] - power[last - 1]) / (radii[last] - radii[last - 1])
            * (tip_radius - radii[last]);

    let mut total = blades * 0.5 * (power[0] + 0.0) * (radii[0] - hub_radius);
    total += blades * 0.5 * (tip_power + power[last]) * (tip_radius - radii[last]);
    for i in 0..last {
        total += blades * 0.5 * (power[i + 1] + power[i]) * (radii[i + 1] - radii[i]);
    }
    Ok((total, tip_power))
}

pub fn integrate_rotor_power(
    stations: &[RadialStation],
    geometry: &RotorGeometry,
    drivetrain_efficiency: f64,
) -> Result<RotorSolution> {
    if !(drivetrain_efficiency > 0.0 && drivetrain_efficiency <= 1.0) {
        return Err(Error::invalid(
            "drivetrain_efficiency",
            drivetrain_efficiency,
            "must be a fraction in (0, 1]",
        ));
    }
    let radii: Vec<f64> = stations.iter().map(|s| s.radius).collect();
    let power: Vec<f64> = stations.iter().map(|s| s.power_per_span).collect();
    let (rotor_power, tip_power) = integrate_scaled(
        geometry.hub_radius,
        geometry.tip_radius,
        &radii,
        &power,
        geometry.blade_count as f64,
    )?;
    Ok(RotorSolution {
        stations: stations.to_vec(),
        hub_radius: geometry.hub_radius,
        tip_radius: geometry.tip_radius,
        hub_power_per_span: 0.0,
        tip_power_per_span: tip_power,
        rotor_power,
        electric_power: drivetrain_efficiency * rotor_power,
        drivetrain_efficiency,
    })
}

/// Places stations, solves each one and integrates to rotor power.
pub fn evaluate_rotor(
    flow: &FlowConditions,
    geometry: &RotorGeometry,
    design: &AerodynamicDesignPoint,
    station_count: usize,
    drivetrain_efficiency: f64,
) -> Result<RotorSolution> {
    let stations = station_radii(geometry, station_count)?
        .into_iter()
        .map(|r| solve_station(r, flow, geometry, design))
        .collect::<Result<Vec<_>>>()?;
    integrate_rotor_power(&stations, geometry, drivetrain_efficiency)
}
