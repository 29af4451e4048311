//! Mode energies, collective dipoles and decay rates of a ten-atom chain,
//! compared against direct diagonalization of the hopping matrix.

use exciton_chain::chain::{self, ChainSpec, LatticeParams};
use exciton_chain::units::joule_to_ev;

fn main() -> exciton_chain::Result<()> {
    let params = LatticeParams::reference();
    let spec = ChainSpec::new(10, params)?;
    let gamma_a = params.single_atom_rate();

    println!(
        "J = {:.6e} eV, Gamma_A = {:.6e} /s",
        joule_to_ev(chain::coupling_j(&spec)),
        gamma_a
    );
    println!(
        "{:>3} {:>7} {:>16} {:>12} {:>12}",
        "k", "parity", "E_k - E_A [eV]", "|mu_k|/mu", "Gamma/Gamma_A"
    );
    for m in chain::all_modes(&spec) {
        println!(
            "{:>3} {:>7} {:>16.6e} {:>12.6} {:>12.6}",
            m.k,
            format!("{:?}", m.parity).to_lowercase(),
            joule_to_ev(m.shift),
            m.dipole().norm() / params.dipole_mag,
            m.gamma / gamma_a,
        );
    }

    let numeric = chain::numeric_diagonalize(&spec);
    let worst = numeric
        .iter()
        .map(|e| {
            let nearest = (1..=10)
                .map(|k| (chain::mode_shift(&spec, k).unwrap() - e.shift).abs())
                .fold(f64::INFINITY, f64::min);
            nearest / chain::coupling_j(&spec).abs()
        })
        .fold(0.0, f64::max);
    println!("largest |numeric - analytic| shift: {worst:.1e} |J|");

    let g = |n| -> exciton_chain::Result<f64> {
        let s = ChainSpec::new(n, params)?;
        Ok(chain::damping_rate(&s, 1)?.value / chain::damping_rate(&s, 3)?.value)
    };
    println!(
        "Gamma_1/Gamma_3: N=10 {:.4}, N=50 {:.4}, N=200 {:.4}",
        g(10)?,
        g(50)?,
        g(200)?
    );
    Ok(())
}
