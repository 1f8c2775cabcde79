//! Acceptance suite for the 2 MW Dhofar rotor. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use rotorkit::polar::{PolarSet, DEFAULT_STALL_MARGIN};
use rotorkit::rotor::{
    evaluate_rotor, integrate_rotor_power, reynolds_number, FlowConditions, RadialStation,
    RotorGeometry, RotorSolution,
};
use rotorkit::search::{sweep, DesignCandidate, DesignConstraints, DesignSpace, FixedParameters};
use rotorkit::site::{rank_sites, SiteRecord};
use rotorkit::AerodynamicDesignPoint;

/// Published radial distribution: (radius m, blade angle deg, power kW/m).
const TABLE_2: [(f64, f64, f64); 16] = [
    (4.2, 60.5, 0.98),
    (6.5, 71.9, 1.95),
    (8.7, 78.8, 3.29),
    (10.9, 83.3, 5.00),
    (13.2, 86.3, 7.07),
    (15.4, 88.6, 9.49),
    (17.6, 90.3, 12.25),
    (19.9, 91.6, 15.35),
    (22.1, 92.7, 18.76),
    (24.4, 93.6, 22.49),
    (26.6, 94.3, 26.52),
    (28.8, 95.0, 30.84),
    (31.1, 95.5, 35.44),
    (33.3, 96.0, 40.31),
    (35.5, 96.4, 45.45),
    (37.8, 96.7, 50.84),
];
const TABLE_2_TIP_KW_PER_M: f64 = 56.22;

const ANGLE_TOL_DEG: f64 = 0.3;
const POWER_REL_TOL: f64 = 0.005;
/// Radii are printed to one decimal.
const RADIUS_ABS_TOL: f64 = 0.05 + 1e-9;
const PUBLISHED_ROTOR_POWER: f64 = 2.37e6;
const ROTOR_POWER_REL_TOL: f64 = 0.01;
const ELECTRIC_POWER_MIN: f64 = 2.0e6;
const GRID_REL_TOL: f64 = 0.01;
const IDENTITY_REL_TOL: f64 = 1e-12;
const EVALUATION_BUDGET: Duration = Duration::from_millis(10);
const SUITE_BUDGET: Duration = Duration::from_secs(10);

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs())
    }
}

fn dhofar(station_count: usize) -> RotorSolution {
    evaluate_rotor(
        &FlowConditions::dhofar(),
        &RotorGeometry::dhofar(),
        &AerodynamicDesignPoint::dhofar(),
        station_count,
        0.85,
    )
    .expect("reference design evaluates")
}

fn table_reproduction() -> Check {
    let start = Instant::now();
    let sol = dhofar(16);
    let elapsed = start.elapsed();
    ensure(sol.stations.len() == TABLE_2.len(), || "wrong station count".into())?;
    let mut worst_angle: f64 = 0.0;
    let mut worst_power: f64 = 0.0;
    for (i, (s, &(r, gamma, p))) in sol.stations.iter().zip(TABLE_2.iter()).enumerate() {
        ensure((s.radius - r).abs() <= RADIUS_ABS_TOL, || {
            format!("station {}: radius {} vs printed {r}", i + 1, s.radius)
        })?;
        let da = (s.blade_angle_deg - gamma).abs();
        ensure(da <= ANGLE_TOL_DEG, || {
            format!("station {}: blade angle {} vs {gamma}", i + 1, s.blade_angle_deg)
        })?;
        let dp = rel(s.power_per_span / 1000.0, p);
        ensure(dp <= POWER_REL_TOL, || {
            format!("station {}: P_r {} kW/m vs {p}", i + 1, s.power_per_span / 1000.0)
        })?;
        worst_angle = worst_angle.max(da);
        worst_power = worst_power.max(dp);
    }
    let tip = sol.tip_power_per_span / 1000.0;
    ensure(rel(tip, TABLE_2_TIP_KW_PER_M) <= POWER_REL_TOL, || {
        format!("tip P_r {tip} kW/m vs {TABLE_2_TIP_KW_PER_M}")
    })?;
    ensure(elapsed <= EVALUATION_BUDGET, || format!("evaluation took {elapsed:?}"))?;
    Ok(format!(
        "max angle error {worst_angle:.3} deg, max P_r error {:.3}%, tip {tip:.3} kW/m, {elapsed:?}",
        worst_power * 100.0
    ))
}

fn rotor_power() -> Check {
    let sol = dhofar(16);
    ensure(rel(sol.rotor_power, PUBLISHED_ROTOR_POWER) <= ROTOR_POWER_REL_TOL, || {
        format!("rotor power {} W", sol.rotor_power)
    })?;
    ensure(sol.electric_power >= ELECTRIC_POWER_MIN, || {
        format!("electric power {} W", sol.electric_power)
    })?;
    Ok(format!(
        "rotor {:.4} MW, electric {:.4} MW",
        sol.rotor_power / 1e6,
        sol.electric_power / 1e6
    ))
}

fn grid_independence() -> Check {
    let p16 = dhofar(16).rotor_power;
    let p32 = dhofar(32).rotor_power;
    let change = (p32 - p16).abs() / p16;
    ensure(change < GRID_REL_TOL, || format!("relative change {change}"))?;
    Ok(format!("|P32 - P16| / P16 = {:.3e}", change))
}

fn reynolds() -> Check {
    let re = reynolds_number(&FlowConditions::dhofar(), RotorGeometry::dhofar().chord());
    ensure(rel(re, 1.4e6) <= IDENTITY_REL_TOL, || format!("Re = {re}"))?;
    Ok(format!("Re = V c / nu = {re:.6e}"))
}

fn solve(
    flow: &FlowConditions,
    geometry: &RotorGeometry,
    design: &AerodynamicDesignPoint,
    n: usize,
) -> RotorSolution {
    evaluate_rotor(flow, geometry, design, n, 0.85).expect("valid case")
}

fn property_cases() -> Vec<(FlowConditions, RotorGeometry, AerodynamicDesignPoint)> {
    let mut cases = Vec::new();
    for &v in &[4.0, 6.0, 9.5] {
        for &(d, rpm, c) in &[(80.0, 15.0, 3.5), (110.0, 6.0, 1.0), (95.0, 18.0, 4.0)] {
            for &(cl, cd, i) in &[(1.3, 0.018, 12.5), (0.9, 0.05, 8.0)] {
                cases.push((
                    FlowConditions::new(v, 1.22, 1.5e-5).unwrap(),
                    RotorGeometry::from_diameter(d, 0.05, c, 3, rpm).unwrap(),
                    AerodynamicDesignPoint::fixed(cl, cd, i).unwrap(),
                ));
            }
        }
    }
    cases
}

fn property_suite() -> Check {
    let cases = property_cases();
    for (flow, geom, design) in &cases {
        let sol = solve(flow, geom, design, 16);
        let v = flow.wind_speed();

        for s in &sol.stations {
            let w2 = s.relative_velocity * s.relative_velocity;
            let uv = s.tangential_velocity * s.tangential_velocity + v * v;
            ensure(rel(w2, uv) <= IDENTITY_REL_TOL, || format!("W^2 identity at r={}", s.radius))?;
            ensure(s.blade_angle_deg == s.relative_angle_deg + design.incidence_deg(), || {
                format!("blade angle != beta + i at r={}", s.radius)
            })?;
        }
        for w in sol.stations.windows(2) {
            ensure(w[1].relative_angle_deg > w[0].relative_angle_deg, || "beta not increasing".into())?;
            ensure(w[1].blade_angle_deg > w[0].blade_angle_deg, || "gamma not increasing".into())?;
        }

        // linearity in blade count, density and chord
        let six = RotorGeometry::new(geom.tip_radius(), geom.hub_radius(), geom.chord(), 6, geom.rotational_speed_rpm()).unwrap();
        ensure(solve(flow, &six, design, 16).rotor_power == 2.0 * sol.rotor_power, || {
            "power not exactly doubled by doubling blades".into()
        })?;
        let dense = FlowConditions::new(v, 1.22 * 1.7, 1.5e-5).unwrap();
        ensure(rel(solve(&dense, geom, design, 16).rotor_power, 1.7 * sol.rotor_power) <= IDENTITY_REL_TOL, || {
            "power not linear in density".into()
        })?;
        let wide = RotorGeometry::new(geom.tip_radius(), geom.hub_radius(), geom.chord() * 1.3, 3, geom.rotational_speed_rpm()).unwrap();
        ensure(rel(solve(flow, &wide, design, 16).rotor_power, 1.3 * sol.rotor_power) <= IDENTITY_REL_TOL, || {
            "power not linear in chord".into()
        })?;

        // speed scaling
        for &lambda in &[0.5, 1.5, 2.0] {
            let fast_flow = FlowConditions::new(v * lambda, 1.22, 1.5e-5).unwrap();
            let fast_geom = RotorGeometry::new(
                geom.tip_radius(),
                geom.hub_radius(),
                geom.chord(),
                3,
                geom.rotational_speed_rpm() * lambda,
            )
            .unwrap();
            let scaled = solve(&fast_flow, &fast_geom, design, 16);
            let l3 = lambda * lambda * lambda;
            for (a, b) in sol.stations.iter().zip(&scaled.stations) {
                ensure(rel(b.relative_angle_deg, a.relative_angle_deg) <= IDENTITY_REL_TOL, || {
                    format!("beta changed under speed scaling at r={}", a.radius)
                })?;
                ensure(rel(b.power_per_span, l3 * a.power_per_span) <= IDENTITY_REL_TOL, || {
                    format!("P_r not scaled by lambda^3 at r={}", a.radius)
                })?;
            }
            ensure(rel(scaled.rotor_power, l3 * sol.rotor_power) <= IDENTITY_REL_TOL, || {
                "rotor power not scaled by lambda^3".into()
            })?;
        }

        // zero drag
        let frictionless = AerodynamicDesignPoint::fixed(design.lift_coefficient(), 0.0, design.incidence_deg()).unwrap();
        let ideal = solve(flow, geom, &frictionless, 16);
        for s in &ideal.stations {
            let beta = (s.tangential_velocity / flow.wind_speed()).atan();
            ensure(s.tangential_force_per_span == s.lift_per_span * beta.cos(), || {
                format!("F_theta != L cos beta with zero drag at r={}", s.radius)
            })?;
        }
        ensure(ideal.rotor_power > sol.rotor_power, || "zero drag did not raise power".into())?;

        // trapezoids are exact on an affine profile anchored at the hub
        let slope = 1234.5;
        let affine: Vec<RadialStation> = sol
            .stations
            .iter()
            .map(|s| RadialStation {
                power_per_span: slope * (s.radius - geom.hub_radius()),
                ..*s
            })
            .collect();
        let integrated = integrate_rotor_power(&affine, geom, 0.85).unwrap().rotor_power;
        let span = geom.span();
        let exact = geom.blade_count() as f64 * slope * span * span / 2.0;
        ensure(rel(integrated, exact) <= IDENTITY_REL_TOL, || {
            format!("affine integral {integrated} vs closed form {exact}")
        })?;
    }

    // grid refinement on the reference design
    let powers: Vec<f64> = [16, 32, 64, 128].iter().map(|&n| dhofar(n).rotor_power).collect();
    let diffs: Vec<f64> = powers.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    ensure(diffs.windows(2).all(|d| d[1] < d[0]), || format!("refinement differences {diffs:?} not decreasing"))?;

    Ok(format!(
        "{} cases; refinement |dP| = {:.1}, {:.1}, {:.1} W",
        cases.len(),
        diffs[0],
        diffs[1],
        diffs[2]
    ))
}

fn fingerprint(candidates: &[DesignCandidate]) -> String {
    format!("{candidates:?}")
}

fn run_sweep(threads: Option<usize>) -> Vec<DesignCandidate> {
    let constraints = DesignConstraints {
        target_electric_power: 2.0e6,
        drivetrain_efficiency: 0.85,
        max_tip_speed: None,
        station_count: 16,
    };
    let job = || {
        sweep(
            &DesignSpace::recommended(),
            &constraints,
            &FlowConditions::dhofar(),
            &AerodynamicDesignPoint::dhofar(),
            FixedParameters::default(),
        )
        .expect("sweep succeeds")
    };
    match threads {
        None => job(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(job),
    }
}

fn sweep_acceptance() -> Check {
    let first = run_sweep(None);
    let reference = first
        .iter()
        .position(|c| {
            c.geometry.diameter() == 80.0
                && c.geometry.rotational_speed_rpm() == 15.0
                && c.geometry.chord() == 3.5
        })
        .ok_or("reference design missing from grid")?;
    ensure(first[reference].feasible, || "reference design infeasible".into())?;
    ensure(first[0].feasible && first[0].geometry.diameter() == 80.0, || {
        "top candidate is not a feasible 80 m rotor".into()
    })?;

    let baseline = fingerprint(&first);
    ensure(fingerprint(&run_sweep(None)) == baseline, || "repeat run differs".into())?;
    ensure(fingerprint(&run_sweep(Some(1))) == baseline, || "1-thread run differs".into())?;
    ensure(fingerprint(&run_sweep(Some(8))) == baseline, || "8-thread run differs".into())?;
    Ok(format!(
        "{} candidates, {} feasible, reference ranked #{}",
        first.len(),
        first.iter().filter(|c| c.feasible).count(),
        reference + 1
    ))
}

fn polar_acceptance() -> Check {
    let set = PolarSet::bundled_naca0012();
    let point = set
        .select_curve(1.4e6)
        .and_then(|c| c.design_point(DEFAULT_STALL_MARGIN))
        .map_err(|e| e.to_string())?;
    ensure(
        point.lift_coefficient() == 1.3 && point.incidence_deg() == 12.5 && point.drag_coefficient() == 0.018,
        || format!("{point:?}"),
    )?;
    Ok("CL 1.3, i 12.5 deg, CD 0.018".into())
}

fn site_acceptance() -> Check {
    let thumrait = SiteRecord::new("Thumrait", 6.0, Some(1.22)).unwrap();
    let density = thumrait.power_density();
    ensure(rel(density, 131.76) <= 1e-9, || format!("power density {density}"))?;
    let ranked = rank_sites(vec![
        SiteRecord::new("Thinner air", 6.0, Some(1.10)).unwrap(),
        thumrait,
        SiteRecord::new("Thin air", 6.0, Some(1.0)).unwrap(),
    ]);
    ensure(ranked[0].site.name == "Thumrait", || format!("ranked first: {}", ranked[0].site.name))?;
    Ok(format!("{density} W/m^2, ranked first of {}", ranked.len()))
}

fn main() {
    let suite_start = Instant::now();
    let criteria: [(&str, fn() -> Check); 8] = [
        ("AC1 radial distribution table", table_reproduction),
        ("AC2 rotor and electric power", rotor_power),
        ("AC3 station-count independence", grid_independence),
        ("AC4 Reynolds number", reynolds),
        ("AC5 model property suite", property_suite),
        ("AC6 design sweep", sweep_acceptance),
        ("AC7 bundled polar design point", polar_acceptance),
        ("AC8 site ranking", site_acceptance),
    ];

    let mut failures = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    let elapsed = suite_start.elapsed();
    if elapsed <= SUITE_BUDGET {
        println!("PASS  suite runtime: {elapsed:?}");
    } else {
        failures += 1;
        println!("FAIL  suite runtime: {elapsed:?} over {SUITE_BUDGET:?}");
    }

    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
