//! Single-excitation spectrum of a finite chain with nearest-neighbour
//! resonant dipole-dipole hopping and fixed (vanishing) boundary sites at
//! `n = 0` and `n = N + 1`.
//!
//! Mode indices `k` are 1-based throughout. Odd modes are symmetric about
//! the chain centre and carry a collective transition dipole; even modes are
//! antisymmetric and dark.

use std::f64::consts::PI;

use nalgebra::Vector3;
use serde::Serialize;

use crate::diagnostics::{Flag, Flagged};
use crate::error::{invalid, Error, Result};
use crate::tridiag::{fix_sign, symmetric_tridiagonal_eigen};
use crate::units::{transition_wavelength, EPSILON_0, HBAR, SPEED_OF_LIGHT};

pub type Vec3 = Vector3<f64>;

/// `|mu_k| / mu` below this classifies a mode as dark.
pub const DARK_TOLERANCE: f64 = 1e-12;

/// Per-atom and lattice parameters shared by every segment cut from the
/// same lattice. SI units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LatticeParams {
    /// Lattice constant `a` [m].
    pub lattice_const: f64,
    /// Bare transition energy `E_A` [J].
    pub atom_energy: f64,
    /// Transition dipole magnitude `mu` [C m].
    pub dipole_mag: f64,
    /// Angle between dipole and chain axis [rad], in `[0, pi/2]`.
    pub dipole_angle: f64,
}

impl LatticeParams {
    pub fn new(lattice_const: f64, atom_energy: f64, dipole_mag: f64, dipole_angle: f64) -> Result<Self> {
        let p = Self {
            lattice_const,
            atom_energy,
            dipole_mag,
            dipole_angle,
        };
        p.validate()?;
        Ok(p)
    }

    /// 1 eV transition, 1000 Å lattice constant, 1 e·Å dipole along the chain.
    pub fn reference() -> Self {
        use crate::units::*;
        Self {
            lattice_const: angstrom_to_metre(1000.0),
            atom_energy: ev_to_joule(1.0),
            dipole_mag: e_angstrom_to_coulomb_metre(1.0),
            dipole_angle: 0.0,
        }
    }

    pub fn with_angle(mut self, dipole_angle: f64) -> Result<Self> {
        self.dipole_angle = dipole_angle;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lattice_const.is_finite() && self.lattice_const > 0.0) {
            return Err(invalid(
                "lattice_const",
                format!("must be > 0, got {}", self.lattice_const),
            ));
        }
        if !(self.atom_energy.is_finite() && self.atom_energy > 0.0) {
            return Err(invalid("atom_energy", format!("must be > 0, got {}", self.atom_energy)));
        }
        if !(self.dipole_mag.is_finite() && self.dipole_mag >= 0.0) {
            return Err(invalid("dipole_mag", format!("must be >= 0, got {}", self.dipole_mag)));
        }
        if !(0.0..=PI / 2.0).contains(&self.dipole_angle) {
            return Err(invalid(
                "dipole_angle",
                format!("must lie in [0, pi/2], got {}", self.dipole_angle),
            ));
        }
        Ok(())
    }

    /// Unit dipole direction `(cos theta, 0, sin theta)`.
    pub fn dipole_unit(&self) -> Vec3 {
        Vec3::new(self.dipole_angle.cos(), 0.0, self.dipole_angle.sin())
    }

    pub fn dipole_vector(&self) -> Vec3 {
        self.dipole_unit() * self.dipole_mag
    }

    /// `mu^2 / (4 pi eps0 a^3)`, the magnitude scale of the hopping energy.
    pub fn coupling_scale(&self) -> f64 {
        self.dipole_mag.powi(2) / (4.0 * PI * EPSILON_0 * self.lattice_const.powi(3))
    }

    /// Nearest-neighbour hopping `J = mu^2 (1 - 3 cos^2 theta) / (4 pi eps0 a^3)`.
    pub fn coupling(&self) -> f64 {
        self.coupling_scale() * (1.0 - 3.0 * self.dipole_angle.cos().powi(2))
    }

    /// Free-space decay rate of a two-level system with this dipole at the
    /// given transition energy, `mu^2 E^3 / (3 pi eps0 hbar^4 c^3)`.
    pub fn rate_at_energy(&self, energy: f64) -> f64 {
        self.dipole_mag.powi(2) * energy.powi(3) / (3.0 * PI * EPSILON_0 * HBAR.powi(4) * SPEED_OF_LIGHT.powi(3))
    }

    /// Single-atom decay rate `Gamma_A`.
    pub fn single_atom_rate(&self) -> f64 {
        self.rate_at_energy(self.atom_energy)
    }

    pub fn transition_wavelength(&self) -> f64 {
        transition_wavelength(self.atom_energy)
    }
}

/// A contiguous chain of `n_sites` occupied sites.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChainSpec {
    pub n_sites: usize,
    pub params: LatticeParams,
}

impl ChainSpec {
    pub fn new(n_sites: usize, params: LatticeParams) -> Result<Self> {
        if n_sites == 0 {
            return Err(invalid("n_sites", "a chain needs at least one site"));
        }
        params.validate()?;
        Ok(Self { n_sites, params })
    }

    /// `L = a (N + 1)`, including the two empty boundary sites.
    pub fn length(&self) -> f64 {
        self.params.lattice_const * (self.n_sites as f64 + 1.0)
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.n_sites {
            return Err(Error::OutOfRange {
                name: "k",
                value: k,
                min: 1,
                max: self.n_sites,
            });
        }
        Ok(())
    }

    fn long_chain_flag(&self) -> Option<Flag> {
        let wavelength = self.params.transition_wavelength();
        let length = self.length();
        (length > wavelength).then_some(Flag::LongChain { length, wavelength })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Bright,
    Dark,
}

/// One collective eigenmode of a chain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollectiveMode {
    pub k: usize,
    /// `E_k` [J].
    pub energy: f64,
    /// `E_k - E_A` [J], kept separately since it is many orders of magnitude
    /// below `E_A`.
    pub shift: f64,
    /// Collective transition dipole [C m], in the x-z plane.
    pub dipole_vec: [f64; 3],
    /// Decay rate `Gamma_k` [1/s].
    pub gamma: f64,
    pub parity: Parity,
}

impl CollectiveMode {
    pub fn dipole(&self) -> Vec3 {
        Vec3::from(self.dipole_vec)
    }

    pub fn is_bright(&self) -> bool {
        self.parity == Parity::Bright
    }
}

pub fn coupling_j(spec: &ChainSpec) -> f64 {
    spec.params.coupling()
}

/// `E_k - E_A = 2 J cos(pi k / (N + 1))`, evaluated as
/// `2 J sin(pi (N + 1 - 2k) / (2(N + 1)))` so that `k` and `N + 1 - k`
/// give exactly opposite shifts and a middle mode exactly none.
pub fn mode_shift(spec: &ChainSpec, k: usize) -> Result<f64> {
    spec.check_k(k)?;
    let n1 = spec.n_sites as f64 + 1.0;
    let m = spec.n_sites as f64 + 1.0 - 2.0 * k as f64;
    Ok(2.0 * coupling_j(spec) * (PI * m / (2.0 * n1)).sin())
}

pub fn mode_energy(spec: &ChainSpec, k: usize) -> Result<f64> {
    Ok(spec.params.atom_energy + mode_shift(spec, k)?)
}

/// Amplitude of mode `k` on site `n`; `n = 0` and `n = N + 1` are the empty
/// boundary sites where every mode vanishes.
pub fn mode_profile(spec: &ChainSpec, k: usize, n: usize) -> Result<f64> {
    spec.check_k(k)?;
    if n > spec.n_sites + 1 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n,
            min: 0,
            max: spec.n_sites + 1,
        });
    }
    if n == 0 || n == spec.n_sites + 1 {
        return Ok(0.0);
    }
    let n1 = spec.n_sites as f64 + 1.0;
    Ok((2.0 / n1).sqrt() * (PI * (n * k) as f64 / n1).sin())
}

/// `|mu_k| / mu`: `sqrt(2/(N+1)) cot(pi k / (2(N+1)))` for odd `k`, zero for even.
pub fn dipole_factor(spec: &ChainSpec, k: usize) -> Result<f64> {
    spec.check_k(k)?;
    if k.is_multiple_of(2) {
        return Ok(0.0);
    }
    let n1 = spec.n_sites as f64 + 1.0;
    let x = PI * k as f64 / (2.0 * n1);
    Ok((2.0 / n1).sqrt() * x.cos() / x.sin())
}

pub fn collective_dipole(spec: &ChainSpec, k: usize) -> Result<Vec3> {
    Ok(spec.params.dipole_vector() * dipole_factor(spec, k)?)
}

/// Decay rate of mode `k`,
/// `mu^2 E_k^3 / (3 pi eps0 hbar^4 c^3) (2a/L) cot^2(pi k a / 2L)`.
///
/// Carries a [`Flag::LongChain`] when the chain is longer than the
/// transition wavelength.
pub fn damping_rate(spec: &ChainSpec, k: usize) -> Result<Flagged<f64>> {
    let energy = mode_energy(spec, k)?;
    let flags = spec.long_chain_flag().into_iter().collect();
    if k.is_multiple_of(2) {
        return Ok(Flagged::with_flags(0.0, flags));
    }
    let a = spec.params.lattice_const;
    let l = spec.length();
    let x = PI * k as f64 * a / (2.0 * l);
    let cot = x.cos() / x.sin();
    let gamma = spec.params.rate_at_energy(energy) * (2.0 * a / l) * cot * cot;
    Ok(Flagged::with_flags(gamma, flags))
}

pub fn mode(spec: &ChainSpec, k: usize) -> Result<CollectiveMode> {
    let shift = mode_shift(spec, k)?;
    let factor = dipole_factor(spec, k)?;
    let parity = if factor.abs() < DARK_TOLERANCE {
        Parity::Dark
    } else {
        Parity::Bright
    };
    Ok(CollectiveMode {
        k,
        energy: spec.params.atom_energy + shift,
        shift,
        dipole_vec: (spec.params.dipole_vector() * factor).into(),
        gamma: damping_rate(spec, k)?.value,
        parity,
    })
}

/// All `N` modes, `k = 1..=N`.
pub fn all_modes(spec: &ChainSpec) -> Vec<CollectiveMode> {
    (1..=spec.n_sites)
        .map(|k| mode(spec, k).expect("k in range by construction"))
        .collect()
}

/// One eigenpair from the numerical diagonalization.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpair {
    pub energy: f64,
    /// `energy - E_A`.
    pub shift: f64,
    /// Normalized site amplitudes for sites `1..=N`, first nonzero entry positive.
    pub profile: Vec<f64>,
}

/// Diagonalize the `N x N` hopping Hamiltonian (diagonal `E_A`, off-diagonal
/// `J`) numerically. Eigenpairs are sorted by ascending energy.
///
/// The uniform diagonal is removed before the QL iteration and added back
/// afterwards, since `J / E_A` is typically far below machine precision
/// relative to the diagonal.
pub fn numeric_diagonalize(spec: &ChainSpec) -> Vec<Eigenpair> {
    let n = spec.n_sites;
    let j = coupling_j(spec);
    let diag = vec![0.0; n];
    let off = vec![j; n.saturating_sub(1)];
    let eig = symmetric_tridiagonal_eigen(&diag, &off).expect("well-formed tridiagonal matrix");
    eig.values
        .into_iter()
        .zip(eig.vectors)
        .map(|(shift, mut profile)| {
            fix_sign(&mut profile, 1e-12);
            Eigenpair {
                energy: spec.params.atom_energy + shift,
                shift,
                profile,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::*;

    fn reference_chain(n: usize) -> ChainSpec {
        ChainSpec::new(n, LatticeParams::reference()).unwrap()
    }

    #[test]
    fn coupling_at_reference_parameters() {
        // mpmath, 40 digits: mu^2/(4 pi eps0 a^3) = 2.3070775523417362878e-27 J
        let p = LatticeParams::reference();
        assert!((p.coupling_scale() / 2.307_077_552_341_736_3e-27 - 1.0).abs() < 1e-14);
        assert!((p.coupling() / -4.614_155_104_683_473e-27 - 1.0).abs() < 1e-14);
        // hand calculation in eV: J = -2.8799e-8 eV
        assert!((joule_to_ev(p.coupling()) / -2.879_929_095_685_134e-8 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coupling_special_angles() {
        let p = LatticeParams::reference();
        let perp = p.with_angle(PI / 2.0).unwrap();
        assert!((perp.coupling() / p.coupling_scale() - 1.0).abs() < 1e-15);
        let magic = p.with_angle(magic_angle()).unwrap();
        assert!(magic.coupling().abs() < 1e-12 * p.coupling_scale());
    }

    #[test]
    fn single_atom_rate_reference() {
        // mpmath: Gamma_A = 3796342.2594032574 1/s
        let g = LatticeParams::reference().single_atom_rate();
        assert!((g / 3_796_342.259_403_257_4 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn validation() {
        let p = LatticeParams::reference();
        assert!(ChainSpec::new(0, p).is_err());
        assert!(p.with_angle(-0.1).is_err());
        assert!(p.with_angle(2.0).is_err());
        assert!(LatticeParams::new(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(LatticeParams::new(1.0, -1.0, 1.0, 0.0).is_err());
        assert!(LatticeParams::new(1.0, 1.0, -1.0, 0.0).is_err());
        assert!(LatticeParams::new(1.0, 1.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn single_site_is_bare_atom() {
        let spec = reference_chain(1);
        assert_eq!(mode_energy(&spec, 1).unwrap(), spec.params.atom_energy);
        assert_eq!(mode_shift(&spec, 1).unwrap(), 0.0);
        let d = collective_dipole(&spec, 1).unwrap();
        assert!((d.norm() / spec.params.dipole_mag - 1.0).abs() < 1e-15);
        let g = damping_rate(&spec, 1).unwrap();
        assert!(g.is_clean());
        let rel = (g.value / spec.params.single_atom_rate() - 1.0).abs();
        assert!(rel < 1e-12, "{rel}");
    }

    #[test]
    fn out_of_range_indices() {
        let spec = reference_chain(4);
        assert!(matches!(mode_energy(&spec, 0), Err(Error::OutOfRange { .. })));
        assert!(mode_energy(&spec, 5).is_err());
        assert!(mode_profile(&spec, 1, 6).is_err());
        assert_eq!(mode_profile(&spec, 2, 0).unwrap(), 0.0);
        assert_eq!(mode_profile(&spec, 2, 5).unwrap(), 0.0);
    }

    #[test]
    fn reference_dipole_factors() {
        // mpmath: direct site sum sqrt(2/11) sum_n sin(pi k n / 11)
        let expected = [
            2.965_687_106_609_628,
            0.0,
            0.933_688_898_858_770_7,
            0.0,
            0.492_093_485_792_165_3,
            0.0,
            0.274_031_561_412_169_6,
            0.0,
            0.125_202_757_270_890_74,
            0.0,
        ];
        let spec = reference_chain(10);
        for (k, want) in (1..=10).zip(expected) {
            let got = dipole_factor(&spec, k).unwrap();
            assert!((got - want).abs() < 1e-14, "k={k}: {got} vs {want}");
        }
    }

    #[test]
    fn reference_shifts_in_units_of_j() {
        // mpmath: 2 cos(pi k / 11)
        let expected = [
            1.918_985_947_228_994_8,
            1.682_507_065_662_362_3,
            1.309_721_467_890_570_1,
            0.830_830_026_003_772_9,
            0.284_629_676_546_570_3,
        ];
        let spec = reference_chain(10);
        let j = coupling_j(&spec);
        for (k, want) in (1..=5).zip(expected) {
            assert!((mode_shift(&spec, k).unwrap() / j - want).abs() < 1e-14);
            assert!((mode_shift(&spec, 11 - k).unwrap() / j + want).abs() < 1e-14);
        }
    }

    #[test]
    fn superradiant_ratio_n10() {
        // mpmath: Gamma_1/Gamma_3 = 10.088956389416755 at the reference parameters
        let spec = reference_chain(10);
        let r = damping_rate(&spec, 1).unwrap().value / damping_rate(&spec, 3).unwrap().value;
        assert!((r - 10.088_956_389_416_755).abs() < 1e-11, "{r}");
    }

    #[test]
    fn long_chain_flagged() {
        assert!(damping_rate(&reference_chain(10), 1).unwrap().is_clean());
        let g = damping_rate(&reference_chain(12), 1).unwrap();
        assert!(g.has(|f| matches!(f, Flag::LongChain { .. })));
        assert!(g.value > 0.0);
    }

    #[test]
    fn parity_sets() {
        let modes = all_modes(&reference_chain(3));
        let bright: Vec<_> = modes.iter().filter(|m| m.is_bright()).map(|m| m.k).collect();
        assert_eq!(bright, vec![1, 3]);
        assert_eq!(modes[1].gamma, 0.0);
        assert_eq!(modes[1].dipole_vec, [0.0; 3]);
    }

    #[test]
    fn two_site_numeric() {
        let spec = reference_chain(2);
        let j = coupling_j(&spec).abs();
        let pairs = numeric_diagonalize(&spec);
        assert!((pairs[0].shift + j).abs() < 1e-15 * j);
        assert!((pairs[1].shift - j).abs() < 1e-15 * j);
    }

    #[test]
    fn numeric_matches_analytic_n10() {
        let spec = reference_chain(10);
        let pairs = numeric_diagonalize(&spec);
        // J < 0 at theta = 0, so energy ascends with k
        for (k, pair) in (1..=10).zip(&pairs) {
            let e = mode_energy(&spec, k).unwrap();
            assert!((pair.energy / e - 1.0).abs() < 1e-10);
            let s = mode_shift(&spec, k).unwrap();
            assert!((pair.shift - s).abs() < 1e-12 * coupling_j(&spec).abs());
            let mut analytic: Vec<f64> = (1..=10).map(|n| mode_profile(&spec, k, n).unwrap()).collect();
            fix_sign(&mut analytic, 1e-12);
            for (a, b) in analytic.iter().zip(&pair.profile) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }
}
