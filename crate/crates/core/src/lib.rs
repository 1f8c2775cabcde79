//! Blade-element performance model and design sweep for horizontal-axis
//! wind turbine rotors.
//!
//! - [`polar`]: tabulated airfoil polars and the stall-margined design point
//! - [`rotor`]: velocity triangle, forces and spanwise power integration
//! - [`search`]: constrained grid sweep over diameter, rpm and chord
//! - [`site`]: wind power density ranking of candidate sites
//! - [`config`] and [`report`]: run files and CSV outputs for the CLI

pub mod config;
pub mod error;
pub mod polar;
pub mod report;
pub mod rotor;
pub mod search;
pub mod site;

pub use error::{Error, Result};
pub use polar::{AerodynamicDesignPoint, PolarCurve, PolarSet, PointSource};
pub use rotor::{
    evaluate_rotor, FlowConditions, RadialStation, RotorGeometry, RotorSolution,
};
pub use search::{DesignCandidate, DesignConstraints, DesignSpace, FixedParameters};
pub use site::SiteRecord;
