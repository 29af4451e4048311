//! Lattices with vacancies: decomposition into contiguous segments, each
//! acting as an independent emitter through its superradiant (`k = 1`)
//! mode, and the interference of their far fields.

mod intensity;
mod state;

pub use intensity::{intensity_trace, total_intensity, IntensityPoint};
pub use state::{InitialState, Occupation};

use serde::Serialize;

use crate::chain::{self, ChainSpec, CollectiveMode, LatticeParams, Vec3};
use crate::diagnostics::{Flag, Flagged};
use crate::error::{invalid, Error, Result};
use crate::units::{EPSILON_0, HBAR};

/// A maximal run of occupied sites.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Segment {
    /// Lattice index of the first occupied site.
    pub first_site: usize,
    pub n_sites: usize,
    /// `L_i = a (N_i + 1)` [m].
    pub length: f64,
    /// Mean position of the occupied sites [m]; on the x axis.
    pub center: [f64; 3],
    pub superradiant: CollectiveMode,
}

impl Segment {
    pub fn center_vec(&self) -> Vec3 {
        Vec3::from(self.center)
    }

    pub fn sites(&self) -> std::ops::Range<usize> {
        self.first_site..self.first_site + self.n_sites
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegmentLayout {
    pub occupancy: Vec<bool>,
    pub params: LatticeParams,
    pub segments: Vec<Segment>,
}

/// Parse an occupancy string of `1` (occupied) and `0` (vacant) characters.
/// Whitespace and `_` separators are ignored.
pub fn parse_occupancy(s: &str) -> Result<Vec<bool>> {
    let sites: Vec<bool> = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '_')
        .map(|c| match c {
            '1' => Ok(true),
            '0' => Ok(false),
            other => Err(invalid("occupancy", format!("unexpected character {other:?}"))),
        })
        .collect::<Result<_>>()?;
    if sites.is_empty() {
        return Err(invalid("occupancy", "empty occupancy string"));
    }
    Ok(sites)
}

pub fn format_occupancy(sites: &[bool]) -> String {
    sites.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Split a lattice occupancy into segments. Site `i` sits at `x = i a`.
///
/// Flags neighbouring segments of equal length, which are resonant and
/// violate the independent-decay assumption.
pub fn decompose(occupancy: &[bool], params: LatticeParams) -> Result<Flagged<SegmentLayout>> {
    params.validate()?;
    if occupancy.is_empty() {
        return Err(invalid("occupancy", "empty occupancy"));
    }
    let a = params.lattice_const;
    let mut segments = Vec::new();
    let mut i = 0;
    while i < occupancy.len() {
        if !occupancy[i] {
            i += 1;
            continue;
        }
        let first = i;
        while i < occupancy.len() && occupancy[i] {
            i += 1;
        }
        let n_sites = i - first;
        let spec = ChainSpec::new(n_sites, params)?;
        let mid = (first + i - 1) as f64 / 2.0;
        segments.push(Segment {
            first_site: first,
            n_sites,
            length: spec.length(),
            center: [mid * a, 0.0, 0.0],
            superradiant: chain::mode(&spec, 1)?,
        });
    }
    if segments.is_empty() {
        return Err(Error::EmptyLayout);
    }
    let flags = segments
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].n_sites == w[1].n_sites)
        .map(|(i, _)| Flag::ResonantNeighbours {
            first: i,
            second: i + 1,
        })
        .collect();
    Ok(Flagged::with_flags(
        SegmentLayout {
            occupancy: occupancy.to_vec(),
            params,
            segments,
        },
        flags,
    ))
}

impl SegmentLayout {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn occupied_sites(&self) -> usize {
        self.occupancy.iter().filter(|&&b| b).count()
    }

    /// Rebuild the occupancy bitmap from the segment list.
    pub fn reconstruct_occupancy(&self) -> Vec<bool> {
        let mut occ = vec![false; self.occupancy.len()];
        for seg in &self.segments {
            occ[seg.sites()].iter_mut().for_each(|b| *b = true);
        }
        occ
    }
}

/// Resonant dipole-dipole energy between two point dipoles [J],
/// `(mu_a . mu_b)/|R|^3 - 3 (mu_a . R)(mu_b . R)/|R|^5`, over `4 pi eps0`.
pub fn inter_segment_coupling(mu_a: Vec3, mu_b: Vec3, separation: Vec3) -> Result<f64> {
    let r = separation.norm();
    if r == 0.0 {
        return Err(Error::ZeroSeparation);
    }
    let dd = mu_a.dot(&mu_b) / r.powi(3) - 3.0 * mu_a.dot(&separation) * mu_b.dot(&separation) / r.powi(5);
    Ok(dd / (4.0 * std::f64::consts::PI * EPSILON_0))
}

/// Coupling between the superradiant dipoles of two segments, flagged when
/// the separation does not exceed the larger segment length.
pub fn segment_coupling(a: &Segment, b: &Segment) -> Result<Flagged<f64>> {
    let sep = b.center_vec() - a.center_vec();
    let value = inter_segment_coupling(a.superradiant.dipole(), b.superradiant.dipole(), sep)?;
    let max_length = a.length.max(b.length);
    let flags = if sep.norm() <= max_length {
        vec![Flag::ShortSeparation {
            separation: sep.norm(),
            max_length,
        }]
    } else {
        Vec::new()
    };
    Ok(Flagged::with_flags(value, flags))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Resonance {
    Resonant,
    Blocked,
}

/// Excitation transfer between two segments is possible only when their
/// superradiant energies agree within `linewidth_scale` collective
/// linewidths, `|E_a - E_b| <= s hbar max(Gamma_a, Gamma_b)`.
pub fn resonance_check(a: &Segment, b: &Segment, linewidth_scale: f64) -> Resonance {
    if a.n_sites == b.n_sites {
        return Resonance::Resonant;
    }
    let detuning = (a.superradiant.shift - b.superradiant.shift).abs();
    let linewidth = HBAR * a.superradiant.gamma.max(b.superradiant.gamma);
    if detuning <= linewidth_scale * linewidth {
        Resonance::Resonant
    } else {
        Resonance::Blocked
    }
}
