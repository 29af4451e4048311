use std::f64::consts::PI;

use num_complex::Complex64;

use super::{InitialState, SegmentLayout};
use crate::chain::Vec3;
use crate::diagnostics::{Flag, Flagged};
use crate::emission::{self, near_field_flag, EmissionOptions, IntensityTrace, ObservationPoint, TermSeries, TimeGrid};
use crate::error::{Error, Result};
use crate::units::{EPSILON_0, HBAR, SPEED_OF_LIGHT};

/// Intensity at one instant, decomposed into labelled terms.
#[derive(Clone, Debug, PartialEq)]
pub struct IntensityPoint {
    pub total: f64,
    pub terms: Vec<(String, f64)>,
}

/// Time-independent part of one segment's far field at a fixed observer.
struct Emitter {
    /// Real field amplitude such that `I_i = amp^2 <n_i> exp(-Gamma tau)`.
    amplitude: f64,
    unit_n: Vec3,
    delay: f64,
    omega: f64,
    /// `E_i - E_A` over hbar.
    detuning: f64,
    gamma: f64,
}

struct Emitters {
    emitters: Vec<Emitter>,
    /// Segment pairs `(i, j)`, `i < j`, with nonzero coherence.
    pairs: Vec<(usize, usize, Complex64)>,
    populations: Vec<f64>,
    labels: Vec<String>,
    flags: Vec<Flag>,
}

impl Emitters {
    fn prepare(
        layout: &SegmentLayout,
        state: &InitialState,
        obs: &ObservationPoint,
        opts: &EmissionOptions,
    ) -> Result<Self> {
        let m = layout.len();
        if state.n_segments() != m {
            return Err(Error::InvalidState(format!(
                "state describes {} segments, layout has {m}",
                state.n_segments()
            )));
        }
        let p = &layout.params;
        let a = p.lattice_const;
        let mut flags = Vec::new();
        let mut emitters = Vec::with_capacity(m);
        for seg in &layout.segments {
            let geo = emission::geometry(seg.center_vec(), p.dipole_unit(), obs)?;
            if let Some(f) = near_field_flag(geo.distance, seg.length, opts) {
                flags.push(f);
            }
            let x = PI * a / (2.0 * seg.length);
            let cot = x.cos() / x.sin();
            let omega = seg.superradiant.energy / HBAR;
            // mu^2 a omega^4 / (16 pi^2 eps0 c^3 L) cot^2 sin^2(phi) / |r - R|^2, square-rooted
            let coef = p.dipole_mag.powi(2) * a / (16.0 * PI * PI * EPSILON_0 * SPEED_OF_LIGHT.powi(3) * seg.length);
            emitters.push(Emitter {
                amplitude: coef.sqrt() * omega * omega * cot * geo.sin_phi / geo.distance,
                unit_n: geo.unit_n,
                delay: geo.retarded_delay,
                omega,
                detuning: seg.superradiant.shift / HBAR,
                gamma: seg.superradiant.gamma,
            });
        }
        let populations: Vec<f64> = (0..m).map(|i| state.coherence(i, i).re).collect();
        let mut pairs = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let rho = state.coherence(i, j);
                if rho != Complex64::new(0.0, 0.0) {
                    pairs.push((i, j, rho));
                }
            }
        }
        let mut labels: Vec<String> = (1..=m).map(|i| format!("I_{i}")).collect();
        labels.extend(pairs.iter().map(|(i, j, _)| format!("G_{}_{}", i + 1, j + 1)));
        Ok(Self {
            emitters,
            pairs,
            populations,
            labels,
            flags,
        })
    }

    fn evaluate(&self, t: f64, out: &mut Vec<f64>) -> f64 {
        out.clear();
        for (e, &n) in self.emitters.iter().zip(&self.populations) {
            let tau = t - e.delay;
            let v = if tau < 0.0 {
                0.0
            } else {
                e.amplitude * e.amplitude * n * (-e.gamma * tau).exp()
            };
            out.push(v);
        }
        for &(i, j, rho) in &self.pairs {
            let (ei, ej) = (&self.emitters[i], &self.emitters[j]);
            let (ti, tj) = (t - ei.delay, t - ej.delay);
            if ti < 0.0 || tj < 0.0 {
                out.push(0.0);
                continue;
            }
            // omega_i tau_i - omega_j tau_j, with the large common carrier removed
            let phase = (ei.detuning - ej.detuning) * t - ei.omega * ei.delay + ej.omega * ej.delay;
            let g_ij = rho
                * Complex64::from_polar(1.0, phase)
                * (ei.amplitude * ej.amplitude * ei.unit_n.dot(&ej.unit_n))
                * (-(ei.gamma * ti + ej.gamma * tj) / 2.0).exp();
            // G_ij + G_ji = 2 Re G_ij
            out.push(2.0 * g_ij.re);
        }
        out.iter().sum()
    }
}

/// Total intensity [W/m^2] at `obs` and time `t`: the sum of each
/// segment's superradiant emission and the pairwise interference terms
/// weighted by the initial coherences `<B_i^dagger B_j>`.
pub fn total_intensity(
    layout: &SegmentLayout,
    state: &InitialState,
    obs: &ObservationPoint,
    t: f64,
    opts: &EmissionOptions,
) -> Result<Flagged<IntensityPoint>> {
    let em = Emitters::prepare(layout, state, obs, opts)?;
    let mut values = Vec::new();
    let total = em.evaluate(t, &mut values);
    let terms = em.labels.iter().cloned().zip(values).collect();
    Ok(Flagged::with_flags(IntensityPoint { total, terms }, em.flags))
}

pub fn intensity_trace(
    layout: &SegmentLayout,
    state: &InitialState,
    obs: &ObservationPoint,
    grid: &TimeGrid,
    opts: &EmissionOptions,
) -> Result<Flagged<IntensityTrace>> {
    let em = Emitters::prepare(layout, state, obs, opts)?;
    let times = grid.times();
    let mut total = Vec::with_capacity(times.len());
    let mut columns: Vec<Vec<f64>> = vec![Vec::with_capacity(times.len()); em.labels.len()];
    let mut buf = Vec::new();
    for &t in &times {
        total.push(em.evaluate(t, &mut buf));
        for (col, v) in columns.iter_mut().zip(&buf) {
            col.push(*v);
        }
    }
    let terms = em
        .labels
        .iter()
        .cloned()
        .zip(columns)
        .map(|(label, values)| TermSeries { label, values })
        .collect();
    Ok(Flagged::with_flags(
        IntensityTrace {
            times,
            total,
            terms,
            observation: *obs,
        },
        em.flags,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{ChainSpec, LatticeParams};
    use crate::segments::{decompose, parse_occupancy};

    fn two_segment() -> SegmentLayout {
        decompose(&parse_occupancy("1011").unwrap(), LatticeParams::reference())
            .unwrap()
            .value
    }

    #[test]
    fn single_segment_reduces_to_single_mode() {
        let p = LatticeParams::reference();
        let layout = decompose(&[true; 5], p).unwrap().value;
        // segment centre sits at x = 2a; shift the observer accordingly
        let obs = ObservationPoint::new(2.0 * p.lattice_const + 3e-4, 0.0, 8e-4).unwrap();
        let rel = ObservationPoint::new(3e-4, 0.0, 8e-4).unwrap();
        let spec = ChainSpec::new(5, p).unwrap();
        let state = InitialState::product(vec![true]);
        let opts = EmissionOptions::default();
        for t in [2e-12, 3e-12, 1e-7, 5e-7] {
            let a = total_intensity(&layout, &state, &obs, t, &opts).unwrap().value.total;
            let b = emission::intensity_single_mode(&spec, 1, &rel, t, 1.0, &opts)
                .unwrap()
                .value;
            assert!((a - b).abs() <= 1e-13 * b.abs().max(1e-300), "{a} vs {b}");
        }
    }

    #[test]
    fn doubly_excited_has_no_cross_term() {
        let layout = two_segment();
        let obs = ObservationPoint::on_axis(100.0 * layout.params.lattice_const).unwrap();
        let both = InitialState::product(vec![true, true]);
        let p = total_intensity(&layout, &both, &obs, 1e-7, &Default::default())
            .unwrap()
            .value;
        assert_eq!(p.terms.len(), 2);
        let ia = total_intensity(
            &layout,
            &InitialState::single(2, 0).unwrap(),
            &obs,
            1e-7,
            &Default::default(),
        )
        .unwrap()
        .value
        .total;
        let ib = total_intensity(
            &layout,
            &InitialState::single(2, 1).unwrap(),
            &obs,
            1e-7,
            &Default::default(),
        )
        .unwrap()
        .value
        .total;
        assert!((p.total - (ia + ib)).abs() < 1e-15 * p.total);
    }

    #[test]
    fn wrong_state_size_rejected() {
        let layout = two_segment();
        let obs = ObservationPoint::on_axis(1e-5).unwrap();
        let s = InitialState::product(vec![true]);
        assert!(total_intensity(&layout, &s, &obs, 1e-7, &Default::default()).is_err());
    }

    #[test]
    fn before_arrival_is_dark() {
        let layout = two_segment();
        let obs = ObservationPoint::on_axis(1.0).unwrap();
        let s = InitialState::symmetric_single_excitation(2).unwrap();
        let p = total_intensity(&layout, &s, &obs, 0.5 / SPEED_OF_LIGHT, &Default::default()).unwrap();
        assert_eq!(p.value.total, 0.0);
    }
}
