use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{OutputFormat, RunConfig};
use super::output::{Cell, Table};
use super::RunError;
use crate::chain::{self, ChainSpec};
use crate::diagnostics::Flag;
use crate::emission::{self, ObservationPoint, TimeGrid};
use crate::scenario::{self, ScenarioPath};
use crate::segments::{self, SegmentLayout};
use crate::units::{self, ELEMENTARY_CHARGE, EPSILON_0, HBAR, SPEED_OF_LIGHT};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// Mode table and mode profiles of the configured chain.
    Modes,
    /// Angular emission pattern of one mode.
    Pattern,
    /// Multi-segment intensity traces at every observation point.
    Trace,
    /// Closed-form single-atom plus two-atom example, exact and far zone.
    ScenarioTwoSeg,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Modes => "modes",
            Command::Pattern => "pattern",
            Command::Trace => "trace",
            Command::ScenarioTwoSeg => "scenario-two-seg",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub threads: Option<usize>,
}

impl RunOptions {
    pub fn from_config(cfg: &RunConfig) -> Self {
        Self {
            out_dir: PathBuf::from(&cfg.output.dir),
            format: cfg.output.format,
            threads: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

struct Artifacts {
    tables: Vec<Table>,
    analysis: Value,
    flags: Vec<Flag>,
}

fn push_flags(into: &mut Vec<Flag>, flags: impl IntoIterator<Item = Flag>) {
    for f in flags {
        if !into.contains(&f) {
            into.push(f);
        }
    }
}

fn ratio_to_atom(spec: &ChainSpec, k: usize) -> Result<f64, RunError> {
    let e = chain::mode_energy(spec, k)? / spec.params.atom_energy;
    Ok(e.powi(3) * chain::dipole_factor(spec, k)?.powi(2))
}

fn modes(cfg: &RunConfig) -> Result<Artifacts, RunError> {
    let spec = &cfg.chain;
    let mut table = Table::new(
        "modes",
        [
            "k",
            "parity",
            "energy_shift_ev",
            "dipole_ratio",
            "gamma_per_s",
            "gamma_ratio",
        ],
    );
    let mut flags = Vec::new();
    for m in chain::all_modes(spec) {
        push_flags(&mut flags, chain::damping_rate(spec, m.k)?.flags);
        let parity = match m.parity {
            chain::Parity::Bright => "bright",
            chain::Parity::Dark => "dark",
        };
        table.push(vec![
            m.k.into(),
            parity.into(),
            units::joule_to_ev(m.shift).into(),
            chain::dipole_factor(spec, m.k)?.abs().into(),
            m.gamma.into(),
            ratio_to_atom(spec, m.k)?.into(),
        ]);
    }
    let n = spec.n_sites;
    let mut cols = vec!["site".to_string()];
    cols.extend((1..=n).map(|k| format!("k{k}")));
    let mut profiles = Table::new("profiles", cols);
    for site in 0..=n + 1 {
        let mut row: Vec<Cell> = vec![site.into()];
        for k in 1..=n {
            row.push(chain::mode_profile(spec, k, site)?.into());
        }
        profiles.push(row);
    }
    let bright = (1..=n).filter(|k| k % 2 == 1).count();
    Ok(Artifacts {
        tables: vec![table, profiles],
        analysis: json!({ "bright_modes": bright, "dark_modes": n - bright }),
        flags,
    })
}

fn pattern(cfg: &RunConfig) -> Result<Artifacts, RunError> {
    let p = emission::angular_pattern(
        &cfg.chain,
        cfg.pattern_k,
        cfg.pattern_radius,
        cfg.pattern_angles,
        &cfg.emission,
    )?;
    let max = p.value.iter().map(|s| s.intensity).fold(0.0, f64::max);
    let mut table = Table::new("pattern", ["phi_rad", "phi_deg", "intensity", "relative"]);
    for s in &p.value {
        let rel = if max > 0.0 { s.intensity / max } else { 0.0 };
        table.push(vec![
            s.phi.into(),
            s.phi.to_degrees().into(),
            s.intensity.into(),
            rel.into(),
        ]);
    }
    let power = if chain::mode(&cfg.chain, cfg.pattern_k)?.is_bright() {
        emission::radiated_power(&cfg.chain, cfg.pattern_k, cfg.pattern_radius, 0.0, 256)?
    } else {
        0.0
    };
    Ok(Artifacts {
        tables: vec![table],
        analysis: json!({
            "k": cfg.pattern_k,
            "radius_m": cfg.pattern_radius,
            "peak_intensity": max,
            "radiated_power_w": power,
        }),
        flags: p.flags,
    })
}

type LayoutParts<'a> = (SegmentLayout, &'a super::config::LayoutConfig, Vec<Flag>);

fn layout_of(cfg: &RunConfig) -> Result<LayoutParts<'_>, RunError> {
    let lc = cfg.layout.as_ref().ok_or_else(|| {
        RunError::Config(super::ConfigError {
            key: "layout".into(),
            message: "this command requires a [layout] section".into(),
        })
    })?;
    let layout = segments::decompose(&lc.occupancy, cfg.chain.params)?;
    Ok((layout.value, lc, layout.flags))
}

fn segment_tables(layout: &SegmentLayout, linewidth_scale: f64) -> Result<(Table, Table, Vec<Flag>), RunError> {
    let p = &layout.params;
    let mut segs = Table::new(
        "segments",
        [
            "segment",
            "first_site",
            "n_sites",
            "center_m",
            "energy_shift_ev",
            "dipole_ratio",
            "gamma_ratio",
        ],
    );
    for (i, s) in layout.segments.iter().enumerate() {
        let spec = ChainSpec::new(s.n_sites, *p)?;
        segs.push(vec![
            (i + 1).into(),
            s.first_site.into(),
            s.n_sites.into(),
            s.center[0].into(),
            units::joule_to_ev(s.superradiant.shift).into(),
            chain::dipole_factor(&spec, 1)?.into(),
            ratio_to_atom(&spec, 1)?.into(),
        ]);
    }
    let mut pairs = Table::new(
        "neighbours",
        ["first", "second", "detuning_ev", "coupling_ev", "status"],
    );
    let mut flags = Vec::new();
    for (i, w) in layout.segments.windows(2).enumerate() {
        let c = segments::segment_coupling(&w[0], &w[1])?;
        push_flags(&mut flags, c.flags);
        let status = match segments::resonance_check(&w[0], &w[1], linewidth_scale) {
            segments::Resonance::Resonant => "resonant",
            segments::Resonance::Blocked => "blocked",
        };
        pairs.push(vec![
            (i + 1).into(),
            (i + 2).into(),
            units::joule_to_ev(w[1].superradiant.shift - w[0].superradiant.shift).into(),
            units::joule_to_ev(c.value).into(),
            status.into(),
        ]);
    }
    Ok((segs, pairs, flags))
}

fn beat_json(a: &scenario::BeatAnalysis) -> Value {
    let rates: serde_json::Map<String, Value> = a.envelope_rates.iter().map(|(l, r)| (l.clone(), json!(r))).collect();
    json!({
        "oscillation_detected": a.oscillation_detected,
        "period_s": a.period,
        "zero_crossings": a.zero_crossings,
        "envelope_rates_per_s": rates,
    })
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, RunError> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| RunError::Compute(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn trace(cfg: &RunConfig, threads: Option<usize>) -> Result<Artifacts, RunError> {
    let (layout, lc, mut flags) = layout_of(cfg)?;
    let gamma_a = cfg.chain.params.single_atom_rate();
    let (segs, pairs, pair_flags) = segment_tables(&layout, lc.linewidth_scale)?;
    push_flags(&mut flags, pair_flags);

    let per_point = in_pool(threads, || {
        cfg.observation
            .par_iter()
            .enumerate()
            .map(|(i, obs)| -> Result<_, RunError> {
                let arrival = layout
                    .segments
                    .iter()
                    .map(|s| (obs.vector() - s.center_vec()).norm() / SPEED_OF_LIGHT)
                    .fold(f64::INFINITY, f64::min);
                let grid = TimeGrid::new(arrival, arrival + cfg.lifetimes / gamma_a, cfg.n_points)?;
                let tr = segments::intensity_trace(&layout, &lc.state, obs, &grid, &cfg.emission)?;
                let mut cols = vec!["time_s".to_string(), "elapsed_s".into(), "total".into()];
                cols.extend(tr.value.terms.iter().map(|t| t.label.clone()));
                let mut table = Table::new(format!("trace_{}", i + 1), cols);
                for (j, &t) in tr.value.times.iter().enumerate() {
                    let mut row: Vec<Cell> = vec![t.into(), (t - arrival).into(), tr.value.total[j].into()];
                    row.extend(tr.value.terms.iter().map(|s| Cell::Num(s.values[j])));
                    table.push(row);
                }
                let beats = scenario::beat_extract(&tr.value);
                let analysis = json!({
                    "point": i + 1,
                    "position_m": obs.position,
                    "first_arrival_s": arrival,
                    "beats": beat_json(&beats),
                });
                Ok((table, analysis, tr.flags))
            })
            .collect::<Result<Vec<_>, _>>()
    })??;

    let mut tables = vec![segs, pairs];
    let mut points = Vec::new();
    for (table, analysis, f) in per_point {
        tables.push(table);
        points.push(analysis);
        push_flags(&mut flags, f);
    }
    Ok(Artifacts {
        tables,
        analysis: json!({ "segments": layout.len(), "points": points }),
        flags,
    })
}

fn scenario_two_seg(cfg: &RunConfig, threads: Option<usize>) -> Result<Artifacts, RunError> {
    let params = cfg.chain.params;
    let rates = cfg.rate_convention;
    let jbar = params.coupling() / HBAR;
    let per_point = in_pool(threads, || {
        cfg.observation
            .par_iter()
            .enumerate()
            .map(|(i, obs)| -> Result<_, RunError> {
                let [x, y, r0] = obs.position;
                if x != 0.0 || y != 0.0 || !(r0 > 0.0) {
                    return Err(RunError::Config(super::ConfigError {
                        key: format!("observation.points[{i}]"),
                        message: "scenario-two-seg requires points on the positive z axis".into(),
                    }));
                }
                let grid = scenario::default_grid(&params, r0, cfg.lifetimes, cfg.n_points)?;
                let exact = scenario::two_segment_trace(&params, r0, &grid, ScenarioPath::Exact, rates)?;
                let far = scenario::two_segment_trace(&params, r0, &grid, ScenarioPath::FarZone, rates)?;
                let norm = scenario::normalized_to_arrival(&params, r0, &exact, rates)?;
                let mut table = Table::new(
                    format!("scenario_{}", i + 1),
                    [
                        "time_s",
                        "normalized",
                        "total_exact",
                        "total_far_zone",
                        "I_1",
                        "I_2",
                        "G_1_2",
                        "G_1_2_far_zone",
                    ],
                );
                let g_far = far.term("G_1_2").expect("far-zone trace carries G_1_2");
                for j in 0..exact.len() {
                    table.push(vec![
                        exact.times[j].into(),
                        norm[j].into(),
                        exact.total[j].into(),
                        far.total[j].into(),
                        exact.terms[0].values[j].into(),
                        exact.terms[1].values[j].into(),
                        exact.terms[2].values[j].into(),
                        g_far[j].into(),
                    ]);
                }
                let deviation = scenario::far_zone_deviation(&params, r0, &grid, rates)?;
                let analysis = json!({
                    "point": i + 1,
                    "r0_m": r0,
                    "far_zone_deviation": deviation,
                    "beats_far_zone": beat_json(&scenario::beat_extract(&far)),
                });
                Ok((table, analysis))
            })
            .collect::<Result<Vec<_>, _>>()
    })??;
    let (tables, points): (Vec<_>, Vec<_>) = per_point.into_iter().unzip();
    let expected = if jbar != 0.0 {
        Some(std::f64::consts::TAU / jbar.abs())
    } else {
        None
    };
    Ok(Artifacts {
        tables,
        analysis: json!({
            "expected_beat_period_s": expected,
            "gamma_a_per_s": params.single_atom_rate(),
            "rate_convention": rates,
            "points": points,
        }),
        flags: Vec::new(),
    })
}

fn manifest(cfg: &RunConfig, command: Command, files: &[String], warnings: &[String], analysis: Value) -> Value {
    let p = &cfg.chain.params;
    let obs: Vec<[f64; 3]> = cfg.observation.iter().map(|o: &ObservationPoint| o.position).collect();
    json!({
        "software": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
        "command": command.name(),
        "config": cfg.source,
        "resolved": {
            "n_sites": cfg.chain.n_sites,
            "lattice_const_m": p.lattice_const,
            "atom_energy_j": p.atom_energy,
            "dipole_mag_c_m": p.dipole_mag,
            "dipole_angle_rad": p.dipole_angle,
            "chain_length_m": cfg.chain.length(),
            "coupling_j": p.coupling(),
            "single_atom_rate_per_s": p.single_atom_rate(),
            "transition_wavelength_m": p.transition_wavelength(),
            "observation_points_m": obs,
            "far_field_ratio": cfg.emission.far_field_ratio,
        },
        "constants": {
            "hbar_j_s": HBAR,
            "speed_of_light_m_per_s": SPEED_OF_LIGHT,
            "epsilon_0_f_per_m": EPSILON_0,
            "elementary_charge_c": ELEMENTARY_CHARGE,
        },
        "outputs": files,
        "warnings": warnings,
        "analysis": analysis,
    })
}

/// Evaluate `command` for `cfg` and write its tables plus `manifest.json`
/// into `opts.out_dir`. Output is a pure function of the configuration.
pub fn run(cfg: &RunConfig, command: Command, opts: &RunOptions) -> Result<RunReport, RunError> {
    let artifacts = match command {
        Command::Modes => modes(cfg)?,
        Command::Pattern => pattern(cfg)?,
        Command::Trace => trace(cfg, opts.threads)?,
        Command::ScenarioTwoSeg => scenario_two_seg(cfg, opts.threads)?,
    };
    let dir: &Path = &opts.out_dir;
    fs::create_dir_all(dir).map_err(|e| RunError::Io(format!("{}: {e}", dir.display())))?;

    let mut warnings = cfg.warnings.clone();
    for f in &artifacts.flags {
        let s = f.to_string();
        if !warnings.contains(&s) {
            warnings.push(s);
        }
    }
    let mut files = Vec::new();
    for t in &artifacts.tables {
        files.push(t.write(dir, opts.format)?);
    }
    let names: Vec<String> = files
        .iter()
        .map(|p| p.file_name().unwrap_or_default().to_string_lossy().into_owned())
        .collect();
    let m = manifest(cfg, command, &names, &warnings, artifacts.analysis);
    let path = dir.join("manifest.json");
    let mut body = serde_json::to_string_pretty(&m).map_err(|e| RunError::Compute(e.to_string()))?;
    body.push('\n');
    fs::write(&path, body).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
    files.push(path);
    Ok(RunReport { files, warnings })
}
