//! Closed-form emission of the smallest defected lattice: a single atom
//! (`alpha`, at the origin) and a two-atom segment (`beta`, sites `2a` and
//! `3a`, centred at `5a/2`), separated by one vacancy, observed on the z
//! axis and prepared in `(|1,0> + |0,1>)/sqrt 2`.
//!
//! These expressions are coded independently of the general multi-segment
//! engine in [`crate::segments`] and serve as its cross-check.

mod beats;

pub use beats::{beat_extract, BeatAnalysis, NOISE_FLOOR};

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::chain::LatticeParams;
use crate::emission::{IntensityTrace, ObservationPoint, TermSeries, TimeGrid};
use crate::error::{invalid, Error, Result};
use crate::units::{EPSILON_0, HBAR, SPEED_OF_LIGHT};

/// How the decay rate of the two-site bright mode is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateConvention {
    /// `Gamma_beta = 2 Gamma_A (1 + J/E_A)^3`, consistent with the `E^3`
    /// scaling of every other rate.
    #[default]
    EnergyScaled,
    /// `Gamma_beta = 2 Gamma_A`, dropping the `O(J/E_A)` correction.
    Bare,
}

/// Intensity contributions per unit population [W/m^2]: `i_alpha`,
/// `i_beta` and `cross = G_ab + G_ba`; `total` is the intensity of the
/// symmetric superposition, `(i_alpha + i_beta + cross) / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TwoSegmentTerms {
    pub i_alpha: f64,
    pub i_beta: f64,
    pub cross: f64,
    pub total: f64,
}

/// Inputs shared by the exact and far-zone expressions.
struct Setup {
    r: f64,
    rbar: f64,
    theta: f64,
    omega_a: f64,
    jbar: f64,
    gamma_a: f64,
    gamma_b: f64,
    /// `mu^2 / (pi^2 eps0 c^3)`
    base: f64,
}

impl Setup {
    fn new(params: &LatticeParams, obs: &ObservationPoint, rates: RateConvention) -> Result<Self> {
        params.validate()?;
        let [x, y, z] = obs.position;
        if y != 0.0 {
            return Err(Error::UnsupportedGeometry { y });
        }
        if x != 0.0 || !(z > 0.0) {
            return Err(invalid(
                "observation",
                "closed form requires a point (0, 0, r) with r > 0",
            ));
        }
        let omega_a = params.atom_energy / HBAR;
        let jbar = params.coupling() / HBAR;
        let gamma_a = params.single_atom_rate();
        let gamma_b = match rates {
            RateConvention::EnergyScaled => 2.0 * gamma_a * (1.0 + jbar / omega_a).powi(3),
            RateConvention::Bare => 2.0 * gamma_a,
        };
        Ok(Self {
            r: z,
            rbar: 2.5 * params.lattice_const,
            theta: params.dipole_angle,
            omega_a,
            jbar,
            gamma_a,
            gamma_b,
            base: params.dipole_mag.powi(2) / (PI * PI * EPSILON_0 * SPEED_OF_LIGHT.powi(3)),
        })
    }

    fn omega_b(&self) -> f64 {
        self.omega_a + self.jbar
    }
}

/// The two-segment intensities with full geometry: distinct distances,
/// angles and retardation of the two segments.
pub fn two_segment_exact(
    params: &LatticeParams,
    obs: &ObservationPoint,
    t: f64,
    rates: RateConvention,
) -> Result<TwoSegmentTerms> {
    let s = Setup::new(params, obs, rates)?;
    let (r, rbar) = (s.r, s.rbar);
    let d2 = r * r + rbar * rbar;
    let d = d2.sqrt();
    let t_a = r / SPEED_OF_LIGHT;
    // t_b - t_a without cancellation
    let dt = rbar * rbar / ((d + r) * SPEED_OF_LIGHT);
    let t_b = t_a + dt;

    let phi_a = PI / 2.0 - s.theta;
    let phi_b = PI - s.theta - (r / rbar).atan();
    let (sa, sb) = (phi_a.sin(), phi_b.sin());
    let wa = s.omega_a;
    let wb = s.omega_b();

    let i_alpha = if t < t_a {
        0.0
    } else {
        s.base * wa.powi(4) / 32.0 * sa * sa / (r * r) * (-s.gamma_a * (t - t_a)).exp()
    };
    let (i_beta, cross) = if t < t_b {
        (0.0, 0.0)
    } else {
        let i_beta = s.base * wb.powi(4) / 16.0 * sb * sb / d2 * (-s.gamma_b * (t - t_b)).exp();
        // omega_a (t - t_a) - omega_b (t - t_b) = -J (t - t_b) + omega_a (t_b - t_a)
        let phase = -s.jbar * (t - t_b) + wa * dt;
        let cross = s.base * wa * wa * wb * wb / (8.0 * SQRT_2) * sa * sb / d2
            * (-s.gamma_a * (t - t_a) / 2.0).exp()
            * (-s.gamma_b * (t - t_b) / 2.0).exp()
            * phase.cos();
        (i_beta, cross)
    };
    Ok(TwoSegmentTerms {
        i_alpha,
        i_beta,
        cross,
        total: 0.5 * (i_alpha + i_beta + cross),
    })
}

/// Far-zone form (`r >> 5a/2`): both segments seen under the same angle and
/// distance, retardation difference kept only in the beat phase.
pub fn two_segment_far_zone(
    params: &LatticeParams,
    obs: &ObservationPoint,
    t: f64,
    rates: RateConvention,
) -> Result<TwoSegmentTerms> {
    let s = Setup::new(params, obs, rates)?;
    let r = s.r;
    let tau = t - r / SPEED_OF_LIGHT;
    if tau < 0.0 {
        return Ok(TwoSegmentTerms {
            i_alpha: 0.0,
            i_beta: 0.0,
            cross: 0.0,
            total: 0.0,
        });
    }
    let sin2 = (PI / 2.0 - s.theta).sin().powi(2);
    let wa = s.omega_a;
    let wb = s.omega_b();
    let geo = sin2 / (r * r);
    let i_alpha = s.base * wa.powi(4) / 32.0 * geo * (-s.gamma_a * tau).exp();
    let i_beta = s.base * wb.powi(4) / 16.0 * geo * (-s.gamma_b * tau).exp();
    let phase = wb * s.rbar * s.rbar / (2.0 * r * SPEED_OF_LIGHT) - s.jbar * tau;
    let cross =
        s.base * wa * wa * wb * wb / (8.0 * SQRT_2) * geo * (-(s.gamma_a + s.gamma_b) / 2.0 * tau).exp() * phase.cos();
    Ok(TwoSegmentTerms {
        i_alpha,
        i_beta,
        cross,
        total: 0.5 * (i_alpha + i_beta + cross),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioPath {
    Exact,
    FarZone,
}

/// Time at which the later (beta) wavefront reaches `(0, 0, r0)`.
pub fn last_arrival(params: &LatticeParams, r0: f64) -> f64 {
    let rbar = 2.5 * params.lattice_const;
    let d = r0.hypot(rbar);
    r0 / SPEED_OF_LIGHT + rbar * rbar / ((d + r0) * SPEED_OF_LIGHT)
}

/// [`last_arrival`] plus a relative `1e-12`, so that rounding in the
/// arrival times of either evaluation path cannot drop a segment.
fn settled_arrival(params: &LatticeParams, r0: f64) -> f64 {
    last_arrival(params, r0) * (1.0 + 1e-12)
}

/// Default sampling: `n_points` over `lifetimes / Gamma_A`, starting once
/// both wavefronts have arrived.
pub fn default_grid(params: &LatticeParams, r0: f64, lifetimes: f64, n_points: usize) -> Result<TimeGrid> {
    let t0 = settled_arrival(params, r0);
    TimeGrid::new(t0, t0 + lifetimes / params.single_atom_rate(), n_points)
}

/// Trace of the symmetric superposition. Terms are contributions to the
/// total: `I_1 = i_alpha/2`, `I_2 = i_beta/2`, `G_1_2 = cross/2`.
pub fn two_segment_trace(
    params: &LatticeParams,
    r0: f64,
    grid: &TimeGrid,
    path: ScenarioPath,
    rates: RateConvention,
) -> Result<IntensityTrace> {
    let obs = ObservationPoint::on_axis(r0)?;
    let times = grid.times();
    let n = times.len();
    let (mut total, mut ia, mut ib, mut g) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for &t in &times {
        let terms = match path {
            ScenarioPath::Exact => two_segment_exact(params, &obs, t, rates)?,
            ScenarioPath::FarZone => two_segment_far_zone(params, &obs, t, rates)?,
        };
        ia.push(0.5 * terms.i_alpha);
        ib.push(0.5 * terms.i_beta);
        g.push(0.5 * terms.cross);
        total.push(terms.total);
    }
    Ok(IntensityTrace {
        times,
        total,
        terms: vec![
            TermSeries {
                label: "I_1".into(),
                values: ia,
            },
            TermSeries {
                label: "I_2".into(),
                values: ib,
            },
            TermSeries {
                label: "G_1_2".into(),
                values: g,
            },
        ],
        observation: obs,
    })
}

/// `I(t) / I_0` with `I_0 = I(r/c)`, when only the alpha wavefront has
/// arrived.
pub fn normalized_to_arrival(
    params: &LatticeParams,
    r0: f64,
    trace: &IntensityTrace,
    rates: RateConvention,
) -> Result<Vec<f64>> {
    let obs = ObservationPoint::on_axis(r0)?;
    let i0 = two_segment_exact(params, &obs, r0 / SPEED_OF_LIGHT, rates)?.total;
    if !(i0 > 0.0) {
        return Err(invalid("observation", "no intensity at arrival time; cannot normalize"));
    }
    Ok(trace.total.iter().map(|v| v / i0).collect())
}

/// Largest deviation of the far-zone total from the exact total over the
/// grid, relative to the largest exact total. Pointwise ratios are not
/// used: near destructive-interference minima the exact total nearly
/// vanishes. Samples before [`last_arrival`] are skipped, since the far
/// zone merges the two arrival times.
pub fn far_zone_deviation(params: &LatticeParams, r0: f64, grid: &TimeGrid, rates: RateConvention) -> Result<f64> {
    let exact = two_segment_trace(params, r0, grid, ScenarioPath::Exact, rates)?;
    let far = two_segment_trace(params, r0, grid, ScenarioPath::FarZone, rates)?;
    let t0 = settled_arrival(params, r0);
    let mut scale = 0.0f64;
    let mut worst = 0.0f64;
    for ((&t, e), f) in exact.times.iter().zip(&exact.total).zip(&far.total) {
        if t < t0 {
            continue;
        }
        scale = scale.max(e.abs());
        worst = worst.max((e - f).abs());
    }
    if !(scale > 0.0) {
        return Err(invalid("grid", "no samples after both wavefronts arrive"));
    }
    Ok(worst / scale)
}
