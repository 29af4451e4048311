//! Excitation transfer between a single atom and a two-atom segment is
//! blocked by their energy mismatch, except near the magic angle.

use exciton_chain::chain::LatticeParams;
use exciton_chain::segments;
use exciton_chain::units::{magic_angle, HBAR};

fn main() -> exciton_chain::Result<()> {
    let occupancy = segments::parse_occupancy("1011")?;
    for deg in [0.0, 30.0, 50.0, magic_angle().to_degrees(), 60.0, 90.0] {
        let params = LatticeParams::reference().with_angle(deg.to_radians())?;
        let layout = segments::decompose(&occupancy, params)?.value;
        let (a, b) = (&layout.segments[0], &layout.segments[1]);
        let gap = (a.superradiant.shift - b.superradiant.shift).abs();
        let width = HBAR * a.superradiant.gamma.max(b.superradiant.gamma);
        println!(
            "theta {deg:>7.3} deg: |dE| / hbar Gamma = {:>9.3e} -> {:?}",
            gap / width,
            segments::resonance_check(a, b, 1.0)
        );
    }
    Ok(())
}
