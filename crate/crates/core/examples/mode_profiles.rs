//! Standing-wave amplitudes of the first four modes, drawn as text bars.

use exciton_chain::chain::{self, ChainSpec, LatticeParams};

fn main() -> exciton_chain::Result<()> {
    let n = 12;
    let spec = ChainSpec::new(n, LatticeParams::reference())?;
    for k in 1..=4 {
        println!("k = {k}");
        for site in 0..=n + 1 {
            let c = chain::mode_profile(&spec, k, site)?;
            let w = (c.abs() * 60.0).round() as usize;
            let bar = if c >= 0.0 {
                format!("{:>30}|{}", "", "#".repeat(w))
            } else {
                format!("{:>30}|", "-".repeat(w))
            };
            println!("{site:>3} {c:>+8.4} {bar}");
        }
    }
    Ok(())
}
