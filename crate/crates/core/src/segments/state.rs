use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::diagnostics::{Flag, Flagged};
use crate::error::{Error, Result};

/// Per-segment occupation (at most one excitation per segment).
pub type Occupation = Vec<bool>;

/// Normalization drift beyond which renormalization is reported.
const RENORMALIZE_WARN: f64 = 1e-6;

/// Initial state of `M` segments in the product basis of per-segment
/// occupations `|n_1, ..., n_M>`, `n_i in {0, 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialState {
    n_segments: usize,
    amplitudes: BTreeMap<Occupation, Complex64>,
}

impl InitialState {
    /// Build a state from basis amplitudes; always normalized on return.
    pub fn new(n_segments: usize, entries: impl IntoIterator<Item = (Occupation, Complex64)>) -> Result<Flagged<Self>> {
        let mut amplitudes = BTreeMap::new();
        for (occ, c) in entries {
            if occ.len() != n_segments {
                return Err(Error::InvalidState(format!(
                    "occupation has {} entries, layout has {n_segments} segments",
                    occ.len()
                )));
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::InvalidState("non-finite amplitude".into()));
            }
            if amplitudes.insert(occ, c).is_some() {
                return Err(Error::InvalidState("duplicate basis state".into()));
            }
        }
        let norm_sq: f64 = amplitudes.values().map(|c| c.norm_sqr()).sum();
        if !(norm_sq > 0.0) {
            return Err(Error::InvalidState("state has zero norm".into()));
        }
        let scale = norm_sq.sqrt().recip();
        amplitudes.values_mut().for_each(|c| *c *= scale);
        let flags = if (norm_sq - 1.0).abs() > RENORMALIZE_WARN {
            vec![Flag::Renormalized { norm_squared: norm_sq }]
        } else {
            Vec::new()
        };
        Ok(Flagged::with_flags(Self { n_segments, amplitudes }, flags))
    }

    /// A single basis state.
    pub fn product(occupation: Occupation) -> Self {
        let n = occupation.len();
        Self {
            n_segments: n,
            amplitudes: BTreeMap::from([(occupation, Complex64::new(1.0, 0.0))]),
        }
    }

    /// One excitation in segment `i`.
    pub fn single(n_segments: usize, i: usize) -> Result<Self> {
        if i >= n_segments {
            return Err(Error::InvalidState(format!("segment {i} out of range")));
        }
        let mut occ = vec![false; n_segments];
        occ[i] = true;
        Ok(Self::product(occ))
    }

    /// Equal-weight superposition of one excitation in each segment.
    pub fn symmetric_single_excitation(n_segments: usize) -> Result<Self> {
        if n_segments == 0 {
            return Err(Error::InvalidState("no segments".into()));
        }
        let amp = Complex64::new((n_segments as f64).sqrt().recip(), 0.0);
        let entries = (0..n_segments).map(|i| {
            let mut occ = vec![false; n_segments];
            occ[i] = true;
            (occ, amp)
        });
        Ok(Self::new(n_segments, entries)?.value)
    }

    pub fn n_segments(&self) -> usize {
        self.n_segments
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.values().map(|c| c.norm_sqr()).sum()
    }

    /// Multiply every amplitude by `exp(i phase)`.
    pub fn with_global_phase(&self, phase: f64) -> Self {
        let f = Complex64::from_polar(1.0, phase);
        Self {
            n_segments: self.n_segments,
            amplitudes: self.amplitudes.iter().map(|(k, v)| (k.clone(), v * f)).collect(),
        }
    }

    /// `<B_i^dagger B_j>` with hard-core (0/1) segment occupations.
    pub fn coherence(&self, i: usize, j: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, cn) in &self.amplitudes {
            if !n[j] {
                continue;
            }
            let mut m = n.clone();
            m[j] = false;
            if m[i] {
                continue;
            }
            m[i] = true;
            if let Some(cm) = self.amplitudes.get(&m) {
                acc += cm.conj() * cn;
            }
        }
        acc
    }

    /// `rho[i][j] = <B_i^dagger B_j>`.
    pub fn coherence_matrix(&self) -> Vec<Vec<Complex64>> {
        (0..self.n_segments)
            .map(|i| (0..self.n_segments).map(|j| self.coherence(i, j)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn populations_of_product_state() {
        let s = InitialState::product(vec![true, true]);
        assert_eq!(s.coherence(0, 0), c(1.0, 0.0));
        assert_eq!(s.coherence(1, 1), c(1.0, 0.0));
        assert_eq!(s.coherence(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn superposition_coherence() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = InitialState::new(2, [(vec![true, false], c(h, 0.0)), (vec![false, true], c(0.0, h))])
            .unwrap()
            .value;
        // <B_0^dag B_1> = c_10^* c_01 = h * i h
        assert!((s.coherence(0, 1) - c(0.0, 0.5)).norm() < 1e-15);
        assert!((s.coherence(1, 0) - c(0.0, -0.5)).norm() < 1e-15);
        assert!((s.coherence(0, 0) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn coherence_with_doubly_excited_component() {
        // |psi> = (|10> + |11>)/sqrt2: <B_1^dag B_1> = 1/2, <B_0^dag B_1> = 0
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = InitialState::new(2, [(vec![true, false], c(h, 0.0)), (vec![true, true], c(h, 0.0))])
            .unwrap()
            .value;
        assert!((s.coherence(1, 1).re - 0.5).abs() < 1e-15);
        assert!((s.coherence(0, 0).re - 1.0).abs() < 1e-15);
        assert_eq!(s.coherence(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn normalization() {
        let s = InitialState::new(1, [(vec![true], c(2.0, 0.0))]).unwrap();
        assert_eq!(s.flags, vec![Flag::Renormalized { norm_squared: 4.0 }]);
        assert!((s.value.norm_squared() - 1.0).abs() < 1e-12);
        let quiet = InitialState::new(1, [(vec![true], c(1.0 + 1e-8, 0.0))]).unwrap();
        assert!(quiet.is_clean());
        assert!(InitialState::new(1, [(vec![true], c(0.0, 0.0))]).is_err());
        assert!(InitialState::new(2, [(vec![true], c(1.0, 0.0))]).is_err());
        assert!(InitialState::new(1, [(vec![true], c(1.0, 0.0)), (vec![true], c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn w_state() {
        let s = InitialState::symmetric_single_excitation(3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((s.coherence(i, j).re - 1.0 / 3.0).abs() < 1e-15);
            }
        }
    }
}
