//! Far-field emission of a single chain excited in one collective mode.
//!
//! The chain is centred at the origin with its axis along x. Observation
//! points are restricted to the x-z plane, where the field polarization is
//! `y x n`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::chain::{self, ChainSpec, Vec3};
use crate::diagnostics::{Flag, Flagged};
use crate::error::{invalid, Error, Result};
use crate::units::{EPSILON_0, HBAR, SPEED_OF_LIGHT};

/// Observation position [m].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ObservationPoint {
    pub position: [f64; 3],
}

impl ObservationPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if ![x, y, z].iter().all(|v| v.is_finite()) {
            return Err(invalid("observation", "components must be finite"));
        }
        Ok(Self { position: [x, y, z] })
    }

    /// Point on the z axis at height `z`.
    pub fn on_axis(z: f64) -> Result<Self> {
        Self::new(0.0, 0.0, z)
    }

    pub fn vector(&self) -> Vec3 {
        Vec3::from(self.position)
    }
}

/// Source-to-observer geometry for one point dipole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmissionGeometry {
    pub source_center: Vec3,
    pub distance: f64,
    /// Angle between dipole and `r - R`, in `[0, pi]`.
    pub phi: f64,
    /// `sin(phi)`, computed from the cross product rather than from `phi`.
    pub sin_phi: f64,
    pub unit_n: Vec3,
    /// Field polarization `y x n`.
    pub polarization: Vec3,
    /// `|r - R| / c`.
    pub retarded_delay: f64,
}

pub fn geometry(source_center: Vec3, dipole_dir: Vec3, obs: &ObservationPoint) -> Result<EmissionGeometry> {
    let dipole_norm = dipole_dir.norm();
    if !(dipole_norm > 0.0) {
        return Err(invalid("dipole_dir", "must be nonzero"));
    }
    let d = obs.vector() - source_center;
    let distance = d.norm();
    if distance == 0.0 || distance <= 1e-300 {
        return Err(Error::DegenerateGeometry);
    }
    if d.y.abs() > 1e-12 * distance {
        return Err(Error::UnsupportedGeometry { y: obs.position[1] });
    }
    let unit_n = d / distance;
    let mu_hat = dipole_dir / dipole_norm;
    let sin_phi = mu_hat.cross(&unit_n).norm();
    let cos_phi = mu_hat.dot(&unit_n);
    Ok(EmissionGeometry {
        source_center,
        distance,
        phi: sin_phi.atan2(cos_phi),
        sin_phi,
        unit_n,
        polarization: Vec3::y().cross(&unit_n),
        retarded_delay: distance / SPEED_OF_LIGHT,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EmissionOptions {
    /// Observation distances below `far_field_ratio * L` are flagged.
    pub far_field_ratio: f64,
}

impl Default for EmissionOptions {
    fn default() -> Self {
        Self { far_field_ratio: 10.0 }
    }
}

pub(crate) fn near_field_flag(distance: f64, source_length: f64, opts: &EmissionOptions) -> Option<Flag> {
    (distance < opts.far_field_ratio * source_length).then_some(Flag::NearField {
        distance,
        source_length,
    })
}

/// Angular-independent prefactor of the single-mode intensity,
/// `mu^2 E_k^4 / (16 pi^2 eps0 hbar^4 c^3) (a/L) cot^2(pi k a / 2L)` [W].
/// Zero for dark modes.
pub fn emission_coefficient(spec: &ChainSpec, k: usize) -> Result<f64> {
    let energy = chain::mode_energy(spec, k)?;
    if k.is_multiple_of(2) {
        return Ok(0.0);
    }
    let a = spec.params.lattice_const;
    let l = spec.length();
    let x = PI * k as f64 * a / (2.0 * l);
    let cot = x.cos() / x.sin();
    Ok(spec.params.dipole_mag.powi(2) * energy.powi(4)
        / (16.0 * PI * PI * EPSILON_0 * HBAR.powi(4) * SPEED_OF_LIGHT.powi(3))
        * (a / l)
        * cot
        * cot)
}

/// Far-field intensity [W/m^2] at `obs` and time `t` from mode `k` with
/// initial population `population` (0 or 1 for a definite excitation).
///
/// Zero before the wavefront arrives (`t < |r| / c`). Dark modes give exactly
/// zero and a [`Flag::DarkMode`].
pub fn intensity_single_mode(
    spec: &ChainSpec,
    k: usize,
    obs: &ObservationPoint,
    t: f64,
    population: f64,
    opts: &EmissionOptions,
) -> Result<Flagged<f64>> {
    if !(0.0..=1.0).contains(&population) {
        return Err(invalid("population", format!("must lie in [0, 1], got {population}")));
    }
    let mode = chain::mode(spec, k)?;
    if !mode.is_bright() {
        return Ok(Flagged::with_flags(0.0, vec![Flag::DarkMode { k }]));
    }
    let geo = geometry(Vec3::zeros(), spec.params.dipole_unit(), obs)?;
    let flags = near_field_flag(geo.distance, spec.length(), opts).into_iter().collect();
    let elapsed = t - geo.retarded_delay;
    if elapsed < 0.0 {
        return Ok(Flagged::with_flags(0.0, flags));
    }
    let value = population * emission_coefficient(spec, k)? * geo.sin_phi.powi(2) / geo.distance.powi(2)
        * (-mode.gamma * elapsed).exp();
    Ok(Flagged::with_flags(value, flags))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PatternSample {
    /// Angle from the collective dipole [rad].
    pub phi: f64,
    pub intensity: f64,
}

/// Intensity on a circle of `radius` in the x-z plane, sampled at
/// `n_angles` equally spaced angles `phi` in `[0, pi]` from the dipole, at
/// the instant the wavefront arrives.
pub fn angular_pattern(
    spec: &ChainSpec,
    k: usize,
    radius: f64,
    n_angles: usize,
    opts: &EmissionOptions,
) -> Result<Flagged<Vec<PatternSample>>> {
    if n_angles < 2 {
        return Err(invalid("n_angles", "need at least two samples"));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(invalid("radius", "must be > 0"));
    }
    let theta = spec.params.dipole_angle;
    let mut flags = Vec::new();
    let mut samples = Vec::with_capacity(n_angles);
    for j in 0..n_angles {
        let phi = PI * j as f64 / (n_angles - 1) as f64;
        let obs = ObservationPoint::new(radius * (theta + phi).cos(), 0.0, radius * (theta + phi).sin())?;
        let geo = geometry(Vec3::zeros(), spec.params.dipole_unit(), &obs)?;
        let r = intensity_single_mode(spec, k, &obs, geo.retarded_delay, 1.0, opts)?;
        for f in r.flags {
            if !flags.contains(&f) {
                flags.push(f);
            }
        }
        samples.push(PatternSample {
            phi: geo.phi,
            intensity: r.value,
        });
    }
    Ok(Flagged::with_flags(samples, flags))
}

/// Total power [W] through a sphere of `radius`, `elapsed` seconds after the
/// wavefront reaches it, by composite
/// Simpson quadrature over the polar angle from the dipole axis
/// (`n_intervals` must be even). The pattern is symmetric about the dipole
/// axis, so the azimuthal integral contributes `2 pi`.
pub fn radiated_power(spec: &ChainSpec, k: usize, radius: f64, elapsed: f64, n_intervals: usize) -> Result<f64> {
    if n_intervals < 2 || !n_intervals.is_multiple_of(2) {
        return Err(invalid("n_intervals", "must be even and >= 2"));
    }
    let opts = EmissionOptions::default();
    let theta = spec.params.dipole_angle;
    let h = PI / n_intervals as f64;
    let mut acc = 0.0;
    for j in 0..=n_intervals {
        let phi = h * j as f64;
        let obs = ObservationPoint::new(radius * (theta + phi).cos(), 0.0, radius * (theta + phi).sin())?;
        let delay = geometry(Vec3::zeros(), spec.params.dipole_unit(), &obs)?.retarded_delay;
        let i = intensity_single_mode(spec, k, &obs, delay + elapsed, 1.0, &opts)?.value;
        let w = if j == 0 || j == n_intervals {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * i * phi.sin();
    }
    Ok(acc * h / 3.0 * 2.0 * PI * radius * radius)
}

/// Uniform time grid `[start, end]` with `n_points` samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeGrid {
    pub start: f64,
    pub end: f64,
    pub n_points: usize,
}

impl TimeGrid {
    pub fn new(start: f64, end: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return Err(invalid("n_points", "need at least two time samples"));
        }
        if !(start.is_finite() && end.is_finite() && end > start) {
            return Err(invalid(
                "time grid",
                format!("need finite start < end, got [{start}, {end}]"),
            ));
        }
        Ok(Self { start, end, n_points })
    }

    pub fn times(&self) -> Vec<f64> {
        let step = (self.end - self.start) / (self.n_points - 1) as f64;
        (0..self.n_points).map(|i| self.start + step * i as f64).collect()
    }
}

/// A named contribution to an intensity trace.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermSeries {
    pub label: String,
    pub values: Vec<f64>,
}

/// Intensity time series at one observation point, with its decomposition
/// into diagonal (`I_i`) and cross (`G_i_j`, meaning `G_ij + G_ji`) terms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntensityTrace {
    pub times: Vec<f64>,
    pub total: Vec<f64>,
    pub terms: Vec<TermSeries>,
    pub observation: ObservationPoint,
}

impl IntensityTrace {
    pub fn term(&self, label: &str) -> Option<&[f64]> {
        self.terms
            .iter()
            .find(|t| t.label == label)
            .map(|t| t.values.as_slice())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn diagonal_terms(&self) -> impl Iterator<Item = &TermSeries> {
        self.terms.iter().filter(|t| t.label.starts_with("I_"))
    }

    pub fn cross_terms(&self) -> impl Iterator<Item = &TermSeries> {
        self.terms.iter().filter(|t| t.label.starts_with("G_"))
    }

    /// Largest relative deviation between `total` and the sum of the terms.
    pub fn additivity_error(&self) -> f64 {
        let scale = self.total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        (0..self.len())
            .map(|i| {
                let sum: f64 = self.terms.iter().map(|t| t.values[i]).sum();
                (sum - self.total[i]).abs() / scale.max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max)
    }
}

/// Trace of a single chain excited in mode `k` with unit population.
pub fn single_mode_trace(
    spec: &ChainSpec,
    k: usize,
    obs: &ObservationPoint,
    grid: &TimeGrid,
    opts: &EmissionOptions,
) -> Result<Flagged<IntensityTrace>> {
    let times = grid.times();
    let mut flags = Vec::new();
    let mut values = Vec::with_capacity(times.len());
    for &t in &times {
        let r = intensity_single_mode(spec, k, obs, t, 1.0, opts)?;
        if flags.is_empty() {
            flags = r.flags;
        }
        values.push(r.value);
    }
    Ok(Flagged::with_flags(
        IntensityTrace {
            times,
            total: values.clone(),
            terms: vec![TermSeries {
                label: "I_1".into(),
                values,
            }],
            observation: *obs,
        },
        flags,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::LatticeParams;

    fn spec(n: usize) -> ChainSpec {
        ChainSpec::new(n, LatticeParams::reference()).unwrap()
    }

    #[test]
    fn orthogonal_geometry() {
        let obs = ObservationPoint::on_axis(2.0).unwrap();
        let g = geometry(Vec3::zeros(), Vec3::x(), &obs).unwrap();
        assert!((g.phi - PI / 2.0).abs() < 1e-15);
        assert!((g.unit_n - Vec3::z()).norm() < 1e-15);
        assert!((g.distance - 2.0).abs() < 1e-15);
        assert!((g.polarization - Vec3::x()).norm() < 1e-15);
        assert!((g.unit_n.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn geometry_errors() {
        let origin = ObservationPoint::new(0.0, 0.0, 0.0).unwrap();
        assert_eq!(
            geometry(Vec3::zeros(), Vec3::x(), &origin),
            Err(Error::DegenerateGeometry)
        );
        let off_plane = ObservationPoint::new(0.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            geometry(Vec3::zeros(), Vec3::x(), &off_plane),
            Err(Error::UnsupportedGeometry { .. })
        ));
        let obs = ObservationPoint::on_axis(1.0).unwrap();
        assert!(geometry(Vec3::zeros(), Vec3::zeros(), &obs).is_err());
        assert!(ObservationPoint::new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn offset_source_angle() {
        // source at (5a/2, 0, 0), observer at (0, 0, r): phi = pi - theta - atan(r / R)
        let a = 1e-7;
        let r0 = 100.0 * a;
        let rbar = 2.5 * a;
        let theta: f64 = 0.3;
        let dip = Vec3::new(theta.cos(), 0.0, theta.sin());
        let obs = ObservationPoint::on_axis(r0).unwrap();
        let g = geometry(Vec3::new(rbar, 0.0, 0.0), dip, &obs).unwrap();
        assert!((g.distance - (r0 * r0 + rbar * rbar).sqrt()).abs() < 1e-20);
        let want = PI - theta - (r0 / rbar).atan();
        assert!((g.phi - want).abs() < 1e-13);
        let ga = geometry(Vec3::zeros(), dip, &obs).unwrap();
        let overlap = ga.unit_n.dot(&g.unit_n);
        assert!((overlap - r0 / (r0 * r0 + rbar * rbar).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_atom_intensity_coefficient() {
        // mu^2 E_A^4 / (32 pi^2 eps0 hbar^4 c^3) = 1.8150857900845982e-14 W (mpmath)
        let c = emission_coefficient(&spec(1), 1).unwrap();
        assert!((c / 1.815_085_790_084_598e-14 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_emission_along_dipole() {
        let s = spec(1);
        let obs = ObservationPoint::new(1.0, 0.0, 0.0).unwrap();
        for t in [0.0, 1e-8, 1e-6] {
            assert_eq!(
                intensity_single_mode(&s, 1, &obs, t, 1.0, &Default::default())
                    .unwrap()
                    .value,
                0.0
            );
        }
    }

    #[test]
    fn exponential_envelope_and_causality() {
        let s = spec(5);
        let obs = ObservationPoint::on_axis(1e-3).unwrap();
        let opts = EmissionOptions::default();
        let tr = 1e-3 / SPEED_OF_LIGHT;
        let gamma = chain::damping_rate(&s, 1).unwrap().value;
        let i0 = intensity_single_mode(&s, 1, &obs, tr, 1.0, &opts).unwrap().value;
        let i1 = intensity_single_mode(&s, 1, &obs, tr + 1.0 / gamma, 1.0, &opts)
            .unwrap()
            .value;
        assert!((i1 / i0 - (-1f64).exp()).abs() < 1e-12);
        assert_eq!(
            intensity_single_mode(&s, 1, &obs, 0.9 * tr, 1.0, &opts).unwrap().value,
            0.0
        );
        assert_eq!(intensity_single_mode(&s, 1, &obs, tr, 0.0, &opts).unwrap().value, 0.0);
        assert!(intensity_single_mode(&s, 1, &obs, tr, 1.5, &opts).is_err());
    }

    #[test]
    fn dark_mode_is_zero_and_flagged() {
        let s = spec(4);
        let obs = ObservationPoint::on_axis(1e-3).unwrap();
        let r = intensity_single_mode(&s, 2, &obs, 1.0, 1.0, &Default::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.flags, vec![Flag::DarkMode { k: 2 }]);
    }

    #[test]
    fn near_field_flag_raised() {
        let s = spec(10);
        let obs = ObservationPoint::on_axis(5.0 * s.length()).unwrap();
        let r = intensity_single_mode(&s, 1, &obs, 1.0, 1.0, &Default::default()).unwrap();
        assert!(r.has(|f| matches!(f, Flag::NearField { .. })));
        let relaxed = EmissionOptions { far_field_ratio: 2.0 };
        assert!(intensity_single_mode(&s, 1, &obs, 1.0, 1.0, &relaxed)
            .unwrap()
            .is_clean());
    }

    #[test]
    fn pattern_shape() {
        let s = spec(10);
        let p = angular_pattern(&s, 1, 1e-3, 181, &Default::default()).unwrap();
        assert!(p.is_clean());
        let v = &p.value;
        assert!(v[0].intensity.abs() < 1e-30 * v[90].intensity.max(1.0) || v[0].intensity < 1e-25 * v[90].intensity);
        let max = v.iter().map(|s| s.intensity).fold(0.0, f64::max);
        assert_eq!(max, v[90].intensity);
        assert!((v[90].phi - PI / 2.0).abs() < 1e-12);
        assert!(v[180].intensity < 1e-25 * max);
    }

    #[test]
    fn pattern_ratio_between_bright_modes() {
        // I_1/I_3 at fixed phi = (Gamma_1/Gamma_3) (E_1/E_3)
        let s = spec(10);
        let opts = EmissionOptions::default();
        let p1 = angular_pattern(&s, 1, 1e-3, 7, &opts).unwrap().value;
        let p3 = angular_pattern(&s, 3, 1e-3, 7, &opts).unwrap().value;
        let g = chain::damping_rate(&s, 1).unwrap().value / chain::damping_rate(&s, 3).unwrap().value;
        let e = chain::mode_energy(&s, 1).unwrap() / chain::mode_energy(&s, 3).unwrap();
        for j in 1..6 {
            let r = p1[j].intensity / p3[j].intensity;
            assert!((r / (g * e) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn simpson_power_converges() {
        let s = spec(10);
        let p128 = radiated_power(&s, 1, 1e-3, 0.0, 128).unwrap();
        let p256 = radiated_power(&s, 1, 1e-3, 0.0, 256).unwrap();
        assert!((p128 / p256 - 1.0).abs() < 1e-7);
        let exact = 8.0 * PI / 3.0 * emission_coefficient(&s, 1).unwrap();
        assert!((p256 / exact - 1.0).abs() < 1e-8);
        assert!(radiated_power(&s, 1, 1e-3, 0.0, 7).is_err());
    }

    #[test]
    fn time_grid() {
        let g = TimeGrid::new(1.0, 2.0, 5).unwrap();
        assert_eq!(g.times(), vec![1.0, 1.25, 1.5, 1.75, 2.0]);
        assert!(TimeGrid::new(1.0, 1.0, 5).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
    }
}
