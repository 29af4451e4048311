//! Collective electronic excitations of finite chains of trapped two-level
//! atoms coupled by resonant dipole-dipole interaction.
//!
//! The crate covers
//!
//! * [`chain`]: standing-wave modes of a finite chain, their energies,
//!   collective transition dipoles (dark/bright) and decay rates, with a
//!   numerical diagonalization ([`tridiag`]) for cross-checking;
//! * [`emission`]: far-field intensity, angular pattern and radiated power of
//!   a single collective mode;
//! * [`segments`]: lattices broken into segments by vacancies, inter-segment
//!   coupling and blockade, and the interfering emission of all segments;
//! * [`scenario`]: closed-form single-atom plus two-atom example, its
//!   far-zone approximation and quantum-beat analysis;
//! * [`io`]: TOML run configuration, CSV/JSON output and the run driver
//!   behind the `exciton-chain` binary.
//!
//! All quantities are SI internally. See `examples/` for one runnable
//! program per capability.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod checks;
pub mod diagnostics;
pub mod emission;
pub mod error;
pub mod io;
pub mod scenario;
pub mod segments;
pub mod tridiag;
pub mod units;

pub use chain::{ChainSpec, CollectiveMode, LatticeParams, Parity, Vec3};
pub use diagnostics::{Flag, Flagged};
pub use emission::{EmissionOptions, IntensityTrace, ObservationPoint, TimeGrid};
pub use error::{Error, Result};
pub use segments::{InitialState, Segment, SegmentLayout};
