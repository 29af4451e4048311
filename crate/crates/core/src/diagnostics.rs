//! Soft warnings carried alongside computed values.

use serde::Serialize;
use std::fmt;

/// A non-fatal condition detected while computing a result.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Flag {
    /// Chain length exceeds the transition wavelength; the small-sample
    /// decay-rate formula is outside its range of validity.
    LongChain { length: f64, wavelength: f64 },
    /// Observation distance below the configured far-field ratio.
    NearField { distance: f64, source_length: f64 },
    /// The requested mode carries no transition dipole.
    DarkMode { k: usize },
    /// Dipole-dipole coupling between segments evaluated at a separation not
    /// larger than the segment lengths.
    ShortSeparation { separation: f64, max_length: f64 },
    /// Two neighbouring segments have the same number of sites and are
    /// therefore resonant; independent decay no longer strictly holds.
    /// Indices are 0-based, the message 1-based.
    ResonantNeighbours { first: usize, second: usize },
    /// Initial-state amplitudes were renormalized.
    Renormalized { norm_squared: f64 },
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::LongChain { length, wavelength } => write!(
                f,
                "chain length {length:.3e} m exceeds transition wavelength {wavelength:.3e} m"
            ),
            Flag::NearField { distance, source_length } => write!(
                f,
                "observation distance {distance:.3e} m is not in the far zone of a source of length {source_length:.3e} m"
            ),
            Flag::DarkMode { k } => write!(f, "mode k={k} is dark"),
            Flag::ShortSeparation { separation, max_length } => write!(
                f,
                "segment separation {separation:.3e} m does not exceed segment length {max_length:.3e} m"
            ),
            Flag::ResonantNeighbours { first, second } => write!(
                f,
                "neighbouring segments {} and {} have equal length and are resonant",
                first + 1,
                second + 1
            ),
            Flag::Renormalized { norm_squared } => {
                write!(f, "initial state renormalized (norm^2 was {norm_squared})")
            }
        }
    }
}

/// A value together with any warnings raised while computing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Flagged<T> {
    pub value: T,
    pub flags: Vec<Flag>,
}

impl<T> Flagged<T> {
    pub fn clean(value: T) -> Self {
        Self {
            value,
            flags: Vec::new(),
        }
    }

    pub fn with_flags(value: T, flags: Vec<Flag>) -> Self {
        Self { value, flags }
    }

    pub fn is_clean(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn has(&self, pred: impl Fn(&Flag) -> bool) -> bool {
        self.flags.iter().any(pred)
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Flagged<U> {
        Flagged {
            value: f(self.value),
            flags: self.flags,
        }
    }
}
