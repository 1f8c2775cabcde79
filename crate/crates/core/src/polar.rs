//! Tabulated airfoil polars and the stall-margined design point.
//!
//! A [`PolarCurve`] holds the lift curve (incidence to lift coefficient) and
//! the drag polar (lift coefficient to drag coefficient) measured at one
//! Reynolds number. A [`PolarSet`] groups the curves of a single airfoil.
//!
//! The design point sits a fixed fraction below stall: the design lift
//! coefficient is `stall_margin * max(CL)`, the design incidence is where the
//! rising branch of the lift curve first reaches it, and the design drag is
//! read off the drag polar at that lift coefficient.

use std::io::Read;
use std::path::Path;

use crate::error::{require_positive, Error, Result};

/// Stall margin applied when none is given: operate at 85% of stall lift.
pub const DEFAULT_STALL_MARGIN: f64 = 0.85;

const BUNDLED_POLAR: &str = include_str!("../data/naca0012_synthetic.csv");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftSample {
    pub incidence_deg: f64,
    pub lift_coefficient: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DragSample {
    pub lift_coefficient: f64,
    pub drag_coefficient: f64,
}

/// Where an [`AerodynamicDesignPoint`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointSource {
    Fixed,
    DerivedFromPolar,
}

/// Operating lift, drag and incidence of the blade section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AerodynamicDesignPoint {
    lift_coefficient: f64,
    drag_coefficient: f64,
    incidence_deg: f64,
    source: PointSource,
}

impl AerodynamicDesignPoint {
    pub fn fixed(lift_coefficient: f64, drag_coefficient: f64, incidence_deg: f64) -> Result<Self> {
        Self::with_source(
            lift_coefficient,
            drag_coefficient,
            incidence_deg,
            PointSource::Fixed,
        )
    }

    fn with_source(
        lift_coefficient: f64,
        drag_coefficient: f64,
        incidence_deg: f64,
        source: PointSource,
    ) -> Result<Self> {
        require_positive("lift_coefficient", lift_coefficient)?;
        // zero drag is accepted as an idealized section; polar-derived points
        // always carry positive drag
        if !(drag_coefficient.is_finite() && drag_coefficient >= 0.0) {
            return Err(Error::invalid("drag_coefficient", drag_coefficient, "must be >= 0"));
        }
        if drag_coefficient >= lift_coefficient {
            return Err(Error::invalid(
                "drag_coefficient",
                drag_coefficient,
                "must be smaller than the lift coefficient",
            ));
        }
        if !(incidence_deg > 0.0 && incidence_deg < 90.0) {
            return Err(Error::invalid(
                "incidence_deg",
                incidence_deg,
                "must lie strictly between 0 and 90 degrees",
            ));
        }
        Ok(Self {
            lift_coefficient,
            drag_coefficient,
            incidence_deg,
            source,
        })
    }

    /// CL = 1.3, CD = 0.018, i = 12.5 deg: the NACA 0012 operating point of
    /// the 2 MW Dhofar rotor.
    pub fn dhofar() -> Self {
        Self {
            lift_coefficient: 1.3,
            drag_coefficient: 0.018,
            incidence_deg: 12.5,
            source: PointSource::Fixed,
        }
    }

    pub fn lift_coefficient(&self) -> f64 {
        self.lift_coefficient
    }

    pub fn drag_coefficient(&self) -> f64 {
        self.drag_coefficient
    }

    pub fn incidence_deg(&self) -> f64 {
        self.incidence_deg
    }

    pub fn source(&self) -> PointSource {
        self.source
    }
}

/// Lift and drag curves of one airfoil at one Reynolds number.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarCurve {
    reynolds: f64,
    lift: Vec<LiftSample>,
    drag: Vec<DragSample>,
}

impl PolarCurve {
    pub fn new(reynolds: f64, lift: Vec<LiftSample>, drag: Vec<DragSample>) -> Result<Self> {
        require_positive("reynolds", reynolds)?;
        if lift.len() < 3 {
            return Err(Error::invalid(
                "lift_samples",
                lift.len(),
                "a lift curve needs at least 3 samples",
            ));
        }
        for s in &lift {
            if !s.incidence_deg.is_finite() || !s.lift_coefficient.is_finite() {
                return Err(Error::invalid("lift_samples", format!("{s:?}"), "non-finite sample"));
            }
        }
        if lift.windows(2).any(|w| w[1].incidence_deg <= w[0].incidence_deg) {
            return Err(Error::invalid(
                "lift_samples",
                format!("Re {reynolds}"),
                "incidence must be strictly increasing",
            ));
        }
        if drag.is_empty() {
            return Err(Error::invalid("drag_samples", 0, "a drag polar needs at least 1 sample"));
        }
        for s in &drag {
            if !s.lift_coefficient.is_finite() || !(s.drag_coefficient.is_finite() && s.drag_coefficient > 0.0) {
                return Err(Error::invalid(
                    "drag_samples",
                    format!("{s:?}"),
                    "drag coefficients must be finite and positive",
                ));
            }
        }
        if drag.windows(2).any(|w| w[1].lift_coefficient <= w[0].lift_coefficient) {
            return Err(Error::invalid(
                "drag_samples",
                format!("Re {reynolds}"),
                "lift coefficient must be strictly increasing",
            ));
        }
        Ok(Self { reynolds, lift, drag })
    }

    pub fn reynolds(&self) -> f64 {
        self.reynolds
    }

    pub fn lift_samples(&self) -> &[LiftSample] {
        &self.lift
    }

    pub fn drag_samples(&self) -> &[DragSample] {
        &self.drag
    }

    /// Index of the first sample carrying the maximum lift coefficient.
    fn stall_index(&self) -> usize {
        let mut best = 0;
        for (i, s) in self.lift.iter().enumerate() {
            if s.lift_coefficient > self.lift[best].lift_coefficient {
                best = i;
            }
        }
        best
    }

    pub fn stall_lift_coefficient(&self) -> f64 {
        self.lift[self.stall_index()].lift_coefficient
    }

    pub fn stall_incidence_deg(&self) -> f64 {
        self.lift[self.stall_index()].incidence_deg
    }

    /// Incidence at which the lift curve first reaches `lift_coefficient`,
    /// scanning upward from the lowest incidence. Samples past stall are
    /// never used.
    pub fn incidence_at_lift(&self, lift_coefficient: f64) -> Result<f64> {
        let rising = &self.lift[..=self.stall_index()];
        for (i, s) in rising.iter().enumerate() {
            if s.lift_coefficient == lift_coefficient {
                return Ok(s.incidence_deg);
            }
            if let Some(next) = rising.get(i + 1) {
                if s.lift_coefficient < lift_coefficient && lift_coefficient < next.lift_coefficient {
                    return Ok(interpolate(
                        (s.lift_coefficient, s.incidence_deg),
                        (next.lift_coefficient, next.incidence_deg),
                        lift_coefficient,
                    ));
                }
            }
        }
        Err(Error::OutOfRange {
            what: "lift coefficient",
            value: lift_coefficient,
            min: rising[0].lift_coefficient,
            max: self.stall_lift_coefficient(),
        })
    }

    /// Drag coefficient interpolated from the drag polar, scaled by
    /// `drag_safety_factor` (>= 1). No extrapolation outside the samples.
    pub fn drag_at_lift(&self, lift_coefficient: f64, drag_safety_factor: f64) -> Result<f64> {
        if !(drag_safety_factor.is_finite() && drag_safety_factor >= 1.0) {
            return Err(Error::invalid(
                "drag_safety_factor",
                drag_safety_factor,
                "must be a finite number >= 1",
            ));
        }
        let first = self.drag[0];
        let last = self.drag[self.drag.len() - 1];
        let out_of_range = || Error::OutOfRange {
            what: "lift coefficient",
            value: lift_coefficient,
            min: first.lift_coefficient,
            max: last.lift_coefficient,
        };
        if !(lift_coefficient >= first.lift_coefficient && lift_coefficient <= last.lift_coefficient) {
            return Err(out_of_range());
        }
        // first sample whose CL is >= the query
        let upper = self.drag.partition_point(|s| s.lift_coefficient < lift_coefficient);
        let hi = self.drag[upper];
        let cd = if hi.lift_coefficient == lift_coefficient {
            hi.drag_coefficient
        } else {
            let lo = self.drag[upper - 1];
            interpolate(
                (lo.lift_coefficient, lo.drag_coefficient),
                (hi.lift_coefficient, hi.drag_coefficient),
                lift_coefficient,
            )
        };
        Ok(cd * drag_safety_factor)
    }

    /// Design point at `stall_margin` times the stall lift coefficient.
    pub fn design_point(&self, stall_margin: f64) -> Result<AerodynamicDesignPoint> {
        self.design_point_with_drag_factor(stall_margin, 1.0)
    }

    pub fn design_point_with_drag_factor(
        &self,
        stall_margin: f64,
        drag_safety_factor: f64,
    ) -> Result<AerodynamicDesignPoint> {
        if !(stall_margin.is_finite() && stall_margin > 0.0) {
            return Err(Error::invalid(
                "stall_margin",
                stall_margin,
                "must be a fraction in (0, 1]",
            ));
        }
        let stall = self.stall_lift_coefficient();
        let target = stall_margin * stall;
        if stall_margin > 1.0 {
            return Err(Error::InfeasibleMargin {
                margin: stall_margin,
                target,
                available: stall,
            });
        }
        let incidence = self.incidence_at_lift(target)?;
        let drag = self.drag_at_lift(target, drag_safety_factor)?;
        AerodynamicDesignPoint::with_source(target, drag, incidence, PointSource::DerivedFromPolar)
    }
}

/// Linear interpolation through two points, evaluated at `x`.
fn interpolate((x0, y0): (f64, f64), (x1, y1): (f64, f64), x: f64) -> f64 {
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Every measured curve of one airfoil, ordered by Reynolds number.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarSet {
    airfoil_name: String,
    curves: Vec<PolarCurve>,
}

impl PolarSet {
    /// Sorts `curves` by Reynolds number. Fails on an empty list or on two
    /// curves sharing a Reynolds number.
    pub fn new(airfoil_name: impl Into<String>, mut curves: Vec<PolarCurve>) -> Result<Self> {
        let airfoil_name = airfoil_name.into();
        if curves.is_empty() {
            return Err(Error::Config(format!("polar set '{airfoil_name}' has no curves")));
        }
        curves.sort_by(|a, b| a.reynolds.total_cmp(&b.reynolds));
        if let Some(w) = curves.windows(2).find(|w| w[0].reynolds == w[1].reynolds) {
            return Err(Error::Config(format!(
                "polar set '{airfoil_name}' has two curves at Re {}",
                w[0].reynolds
            )));
        }
        Ok(Self { airfoil_name, curves })
    }

    /// The bundled synthetic NACA 0012-like polar.
    pub fn bundled_naca0012() -> Self {
        Self::from_csv_reader("NACA 0012 (synthetic)", BUNDLED_POLAR.as_bytes())
            .expect("bundled polar is valid")
    }

    pub fn airfoil_name(&self) -> &str {
        &self.airfoil_name
    }

    pub fn curves(&self) -> &[PolarCurve] {
        &self.curves
    }

    /// Curve with the largest Reynolds number not above `operating_reynolds`;
    /// the lowest-Reynolds curve when the operating point is below them all.
    pub fn select_curve(&self, operating_reynolds: f64) -> Result<&PolarCurve> {
        require_positive("operating_reynolds", operating_reynolds)?;
        let below = self.curves.partition_point(|c| c.reynolds <= operating_reynolds);
        Ok(&self.curves[below.saturating_sub(1)])
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        Self::parse(&name, &path.display().to_string(), file)
    }

    /// Parses the `kind,reynolds,x,y` polar format. `#` starts a comment line.
    pub fn from_csv_reader(airfoil_name: &str, reader: impl Read) -> Result<Self> {
        Self::parse(airfoil_name, airfoil_name, reader)
    }

    fn parse(airfoil_name: &str, source_name: &str, reader: impl Read) -> Result<Self> {
        let parse_err = |line: u64, message: String| Error::Parse {
            source_name: source_name.to_string(),
            line,
            message,
        };

        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);

        let headers = rdr
            .headers()
            .map_err(|e| parse_err(e.position().map_or(1, |p| p.line()), e.to_string()))?
            .clone();
        let expected = ["kind", "reynolds", "x", "y"];
        if headers.iter().ne(expected.iter().copied()) {
            return Err(parse_err(
                1,
                format!("expected header 'kind,reynolds,x,y', found '{}'", headers.iter().collect::<Vec<_>>().join(",")),
            ));
        }

        // (reynolds, lift, drag) in first-seen order
        let mut groups: Vec<(f64, Vec<LiftSample>, Vec<DragSample>)> = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| parse_err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
            let line = record.position().map_or(0, |p| p.line());
            if record.len() != 4 {
                return Err(parse_err(line, format!("expected 4 fields, found {}", record.len())));
            }
            let number = |idx: usize, label: &str| -> Result<f64> {
                record[idx]
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(line, format!("{label} '{}' is not a finite number", &record[idx])))
            };
            let reynolds = number(1, "reynolds")?;
            let x = number(2, "x")?;
            let y = number(3, "y")?;

            let idx = match groups.iter().position(|g| g.0 == reynolds) {
                Some(i) => i,
                None => {
                    groups.push((reynolds, Vec::new(), Vec::new()));
                    groups.len() - 1
                }
            };
            match &record[0] {
                "lift" => groups[idx].1.push(LiftSample {
                    incidence_deg: x,
                    lift_coefficient: y,
                }),
                "drag" => groups[idx].2.push(DragSample {
                    lift_coefficient: x,
                    drag_coefficient: y,
                }),
                other => {
                    return Err(parse_err(line, format!("unknown kind '{other}', expected 'lift' or 'drag'")));
                }
            }
        }

        let curves = groups
            .into_iter()
            .map(|(re, lift, drag)| {
                PolarCurve::new(re, lift, drag)
                    .map_err(|e| Error::Config(format!("{source_name}: curve at Re {re}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PolarSet::new(airfoil_name, curves)
    }
}
