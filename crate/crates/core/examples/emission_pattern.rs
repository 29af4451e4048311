//! Far-field angular pattern of the superradiant mode and the total power
//! it radiates through a sphere.

use std::f64::consts::PI;

use exciton_chain::chain::{ChainSpec, LatticeParams};
use exciton_chain::emission::{self, EmissionOptions};

fn main() -> exciton_chain::Result<()> {
    let spec = ChainSpec::new(10, LatticeParams::reference())?;
    let radius = 1e-4;
    let pattern = emission::angular_pattern(&spec, 1, radius, 19, &EmissionOptions::default())?;
    for f in &pattern.flags {
        println!("note: {f}");
    }
    let peak = pattern.value.iter().map(|s| s.intensity).fold(0.0, f64::max);
    for s in &pattern.value {
        let rel = s.intensity / peak;
        println!(
            "{:>6.1} deg {:>10.3e} W/m^2 {}",
            s.phi.to_degrees(),
            s.intensity,
            "*".repeat((rel * 50.0) as usize)
        );
    }

    let p = emission::radiated_power(&spec, 1, radius, 0.0, 256)?;
    let expected = 8.0 * PI / 3.0 * emission::emission_coefficient(&spec, 1)?;
    println!("radiated power {p:.9e} W (8 pi/3 times the coefficient: {expected:.9e} W)");
    Ok(())
}
