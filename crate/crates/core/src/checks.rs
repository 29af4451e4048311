//! Quick internal invariant suite, exposed through `exciton-chain --check`.

use std::f64::consts::PI;

use crate::chain::{self, ChainSpec, LatticeParams};
use crate::emission::ObservationPoint;
use crate::scenario::{self, RateConvention};
use crate::segments::{self, InitialState};
use crate::tridiag::fix_sign;
use crate::units::magic_angle;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Largest deviations between the analytic spectrum and the numerical
/// diagonalization of the same chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralAgreement {
    /// Max relative energy error.
    pub energy: f64,
    /// Max `|shift error| / |2J|` (zero when `J = 0`).
    pub shift: f64,
    /// Max component (or, inside degenerate clusters, projector entry) error.
    pub profile: f64,
}

pub fn spectral_agreement(spec: &ChainSpec) -> SpectralAgreement {
    let n = spec.n_sites;
    let numeric = chain::numeric_diagonalize(spec);
    let mut analytic: Vec<(f64, f64, Vec<f64>)> = (1..=n)
        .map(|k| {
            let mut v: Vec<f64> = (1..=n).map(|s| chain::mode_profile(spec, k, s).unwrap()).collect();
            fix_sign(&mut v, 1e-12);
            (
                chain::mode_energy(spec, k).unwrap(),
                chain::mode_shift(spec, k).unwrap(),
                v,
            )
        })
        .collect();
    analytic.sort_by(|a, b| a.1.total_cmp(&b.1));

    let band = 2.0 * chain::coupling_j(spec).abs();
    let mut out = SpectralAgreement {
        energy: 0.0,
        shift: 0.0,
        profile: 0.0,
    };
    for (num, ana) in numeric.iter().zip(&analytic) {
        out.energy = out.energy.max((num.energy - ana.0).abs() / ana.0.abs());
        if band > 0.0 {
            out.shift = out.shift.max((num.shift - ana.1).abs() / band);
        }
    }

    // clusters of (numerically) degenerate eigenvalues
    let tol = 1e-9 * band.max(f64::MIN_POSITIVE);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (analytic[end].1 - analytic[end - 1].1).abs() <= tol {
            end += 1;
        }
        if end - start == 1 {
            let err = numeric[start]
                .profile
                .iter()
                .zip(&analytic[start].2)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            out.profile = out.profile.max(err);
        } else {
            for r in 0..n {
                for c in 0..n {
                    let pn: f64 = (start..end)
                        .map(|i| numeric[i].profile[r] * numeric[i].profile[c])
                        .sum();
                    let pa: f64 = (start..end).map(|i| analytic[i].2[r] * analytic[i].2[c]).sum();
                    out.profile = out.profile.max((pn - pa).abs());
                }
            }
        }
        start = end;
    }
    out
}

fn outcome(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome { name, passed, detail }
}

pub fn run_all() -> Vec<CheckOutcome> {
    let base = LatticeParams::reference();
    let mut results = Vec::new();

    let mut worst = SpectralAgreement {
        energy: 0.0,
        shift: 0.0,
        profile: 0.0,
    };
    for theta in [0.0, PI / 4.0, magic_angle(), PI / 2.0] {
        for n in 1..=30 {
            let spec = ChainSpec::new(n, base.with_angle(theta).unwrap()).unwrap();
            let a = spectral_agreement(&spec);
            worst.energy = worst.energy.max(a.energy);
            worst.shift = worst.shift.max(a.shift);
            worst.profile = worst.profile.max(a.profile);
        }
    }
    results.push(outcome(
        "analytic spectrum matches numeric diagonalization",
        worst.energy < 1e-10 && worst.shift < 1e-10 && worst.profile < 1e-10,
        format!(
            "energy {:.1e}, shift {:.1e}, profile {:.1e}",
            worst.energy, worst.shift, worst.profile
        ),
    ));

    let spec10 = ChainSpec::new(10, base).unwrap();
    let modes = chain::all_modes(&spec10);
    let rule = modes.iter().all(|m| {
        let ratio = m.dipole().norm() / base.dipole_mag;
        (m.k % 2 == 0) == (ratio < chain::DARK_TOLERANCE)
    });
    results.push(outcome("even modes are dark", rule, "N = 10".into()));

    let worst_sum = (1..=50)
        .map(|n| {
            let spec = ChainSpec::new(n, base).unwrap();
            let s: f64 = chain::all_modes(&spec).iter().map(|m| m.dipole().norm_squared()).sum();
            (s / (n as f64 * base.dipole_mag.powi(2)) - 1.0).abs()
        })
        .fold(0.0, f64::max);
    results.push(outcome(
        "dipole sum rule",
        worst_sum < 1e-12,
        format!("max rel. error {worst_sum:.1e}"),
    ));

    let single = ChainSpec::new(1, base).unwrap();
    let g = chain::damping_rate(&single, 1).unwrap().value;
    let rel = (g / base.single_atom_rate() - 1.0).abs();
    results.push(outcome(
        "single atom recovers bare rate",
        rel < 1e-12,
        format!("rel. error {rel:.1e}"),
    ));

    let layout = segments::decompose(&[true, false, true, true], base).unwrap().value;
    let state = InitialState::symmetric_single_excitation(2).unwrap();
    let r0 = 100.0 * base.lattice_const;
    let obs = ObservationPoint::on_axis(r0).unwrap();
    let grid = scenario::default_grid(&base, r0, 5.0, 400).unwrap();
    let engine = segments::intensity_trace(&layout, &state, &obs, &grid, &Default::default())
        .unwrap()
        .value;
    let closed = scenario::two_segment_trace(
        &base,
        r0,
        &grid,
        scenario::ScenarioPath::Exact,
        RateConvention::EnergyScaled,
    )
    .unwrap();
    let scale = closed.total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let dev = engine
        .total
        .iter()
        .zip(&closed.total)
        .map(|(a, b)| (a - b).abs() / scale)
        .fold(0.0, f64::max);
    results.push(outcome(
        "closed-form two-segment intensity matches general engine",
        dev < 1e-10,
        format!("max deviation {dev:.1e} of peak"),
    ));

    let add = engine.additivity_error();
    results.push(outcome(
        "trace terms sum to total",
        add < 1e-12,
        format!("max rel. error {add:.1e}"),
    ));

    results
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        for c in run_all() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn degenerate_cluster_uses_projectors() {
        // exactly zero hopping: all modes degenerate
        let p = LatticeParams::new(1e-7, 1.6e-19, 0.0, 0.0).unwrap();
        let a = spectral_agreement(&ChainSpec::new(6, p).unwrap());
        assert!(a.profile < 1e-12);
        assert_eq!(a.shift, 0.0);
    }
}
