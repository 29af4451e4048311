//! Interference between a single atom and a two-atom segment sharing one
//! excitation: exact and far-zone traces, and the beat analysis.

use exciton_chain::chain::LatticeParams;
use exciton_chain::scenario::{self, RateConvention, ScenarioPath};
use exciton_chain::units::HBAR;

fn main() -> exciton_chain::Result<()> {
    let params = LatticeParams::reference();
    let r0 = 100.0 * params.lattice_const;
    let rates = RateConvention::EnergyScaled;
    let grid = scenario::default_grid(&params, r0, 5.0, 2000)?;
    let exact = scenario::two_segment_trace(&params, r0, &grid, ScenarioPath::Exact, rates)?;
    let far = scenario::two_segment_trace(&params, r0, &grid, ScenarioPath::FarZone, rates)?;
    let norm = scenario::normalized_to_arrival(&params, r0, &exact, rates)?;

    let gamma = params.single_atom_rate();
    for i in (0..exact.len()).step_by(100) {
        let x = (exact.times[i] - grid.start) * gamma;
        println!(
            "{x:>6.3} / Gamma_A  I/I0 = {:>8.4}  {}",
            norm[i],
            "#".repeat((norm[i] * 8.0) as usize)
        );
    }

    let beats = scenario::beat_extract(&far);
    let expected = 2.0 * std::f64::consts::PI * HBAR / params.coupling().abs();
    println!("beat period {:?} s (expected {expected:.6e} s)", beats.period);
    for (label, rate) in &beats.envelope_rates {
        println!("{label} decays at {:.6} Gamma_A", rate / gamma);
    }
    println!(
        "far-zone deviation {:.3e}",
        scenario::far_zone_deviation(&params, r0, &grid, rates)?
    );
    Ok(())
}
