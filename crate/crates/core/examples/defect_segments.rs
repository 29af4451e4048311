//! A lattice with vacancies: segment decomposition, inter-segment couplings
//! and the intensity of a delocalized excitation at one detector.

use exciton_chain::chain::LatticeParams;
use exciton_chain::emission::{EmissionOptions, ObservationPoint, TimeGrid};
use exciton_chain::segments::{self, InitialState};
use exciton_chain::units::SPEED_OF_LIGHT;

fn main() -> exciton_chain::Result<()> {
    let params = LatticeParams::reference();
    let occupancy = segments::parse_occupancy("1101110_1111")?;
    let layout = segments::decompose(&occupancy, params)?;
    for f in &layout.flags {
        println!("note: {f}");
    }
    let layout = layout.value;
    for (i, s) in layout.segments.iter().enumerate() {
        println!(
            "segment {}: sites {:?}, centre {:.3e} m, Gamma {:.4e} /s",
            i + 1,
            s.sites(),
            s.center[0],
            s.superradiant.gamma
        );
    }
    for w in layout.segments.windows(2) {
        let c = segments::segment_coupling(&w[0], &w[1])?;
        println!(
            "coupling {:.3e} J, {:?}",
            c.value,
            segments::resonance_check(&w[0], &w[1], 1.0)
        );
    }

    let state = InitialState::symmetric_single_excitation(layout.len())?;
    let obs = ObservationPoint::new(2e-6, 0.0, 5e-5)?;
    let t0 = obs.vector().norm() / SPEED_OF_LIGHT;
    let grid = TimeGrid::new(t0, t0 + 1e-6, 11)?;
    let trace = segments::intensity_trace(&layout, &state, &obs, &grid, &EmissionOptions::default())?.value;
    let labels: Vec<&str> = trace.terms.iter().map(|t| t.label.as_str()).collect();
    println!("{:>12} {:>12} {}", "t - t0 [s]", "total", labels.join(" "));
    for i in 0..trace.len() {
        let terms: Vec<String> = trace.terms.iter().map(|t| format!("{:.3e}", t.values[i])).collect();
        println!(
            "{:>12.3e} {:>12.4e} {}",
            trace.times[i] - t0,
            trace.total[i],
            terms.join(" ")
        );
    }
    println!("additivity error {:.1e}", trace.additivity_error());
    Ok(())
}
