//! Ranking candidate sites by the kinetic power density of the wind.

use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

pub const DEFAULT_AIR_DENSITY: f64 = 1.22;

#[derive(Debug, Clone, PartialEq)]
pub struct SiteRecord {
    pub name: String,
    pub mean_wind_speed: f64,
    pub air_density: f64,
    pub elevation: Option<f64>,
}

impl SiteRecord {
    pub fn new(name: impl Into<String>, mean_wind_speed: f64, air_density: Option<f64>) -> Result<Self> {
        let name = name.into();
        if !(mean_wind_speed.is_finite() && mean_wind_speed >= 0.0) {
            return Err(Error::invalid("mean_wind_speed", mean_wind_speed, "must be >= 0"));
        }
        let air_density = air_density.unwrap_or(DEFAULT_AIR_DENSITY);
        if !(air_density.is_finite() && air_density > 0.0) {
            return Err(Error::invalid("air_density", air_density, "must be positive"));
        }
        Ok(Self {
            name,
            mean_wind_speed,
            air_density,
            elevation: None,
        })
    }

    /// ½ρV³ in W/m².
    pub fn power_density(&self) -> f64 {
        0.5 * self.air_density * self.mean_wind_speed.powi(3)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedSite {
    pub rank: usize,
    pub site: SiteRecord,
    pub power_density: f64,
}

/// Highest power density first; ties go to the denser air, then to the
/// name in lexical order.
pub fn rank_sites(sites: Vec<SiteRecord>) -> Vec<RankedSite> {
    let mut scored: Vec<(f64, SiteRecord)> = sites.into_iter().map(|s| (s.power_density(), s)).collect();
    scored.sort_by(|(pa, a), (pb, b)| {
        pb.total_cmp(pa)
            .then_with(|| b.air_density.total_cmp(&a.air_density))
            .then_with(|| a.name.cmp(&b.name))
    });
    scored
        .into_iter()
        .enumerate()
        .map(|(i, (power_density, site))| RankedSite {
            rank: i + 1,
            site,
            power_density,
        })
        .collect()
}

pub fn read_sites_path(path: impl AsRef<Path>) -> Result<Vec<SiteRecord>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_sites(&path.display().to_string(), file)
}

/// Reads `name,mean_wind_speed,air_density,elevation`; the last two columns
/// may be left empty. `#` starts a comment line.
pub fn read_sites(source_name: &str, reader: impl Read) -> Result<Vec<SiteRecord>> {
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
    let expected = ["name", "mean_wind_speed", "air_density", "elevation"];
    if headers.iter().ne(expected.iter().copied()) {
        return Err(parse_err(
            1,
            format!("expected header '{}'", expected.join(",")),
        ));
    }

    let mut sites = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| parse_err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 4 {
            return Err(parse_err(line, format!("expected 4 fields, found {}", record.len())));
        }
        let optional = |idx: usize, label: &str| -> Result<Option<f64>> {
            let field = &record[idx];
            if field.is_empty() {
                return Ok(None);
            }
            field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(Some)
                .ok_or_else(|| parse_err(line, format!("{label} '{field}' is not a finite number")))
        };
        if record[0].is_empty() {
            return Err(parse_err(line, "site name is empty".into()));
        }
        let speed = optional(1, "mean_wind_speed")?
            .ok_or_else(|| parse_err(line, "mean_wind_speed is required".into()))?;
        let density = optional(2, "air_density")?;
        let elevation = optional(3, "elevation")?;
        let mut site = SiteRecord::new(&record[0], speed, density).map_err(|e| parse_err(line, e.to_string()))?;
        site.elevation = elevation;
        sites.push(site);
    }
    if sites.is_empty() {
        return Err(parse_err(1, "no site rows".into()));
    }
    Ok(sites)
}
