use serde::Serialize;

use crate::emission::IntensityTrace;

/// Cross terms whose peak is below this fraction of the peak total are
/// treated as absent.
pub const NOISE_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BeatAnalysis {
    pub oscillation_detected: bool,
    /// Beat period [s], from the spacing of zero crossings of the
    /// interference signal.
    pub period: Option<f64>,
    pub zero_crossings: usize,
    /// `(label, rate)` for every diagonal term, from a log-linear fit [1/s].
    pub envelope_rates: Vec<(String, f64)>,
}

impl BeatAnalysis {
    pub fn angular_frequency(&self) -> Option<f64> {
        self.period.map(|p| std::f64::consts::TAU / p)
    }

    pub fn rate(&self, label: &str) -> Option<f64> {
        self.envelope_rates.iter().find(|(l, _)| l == label).map(|(_, r)| *r)
    }
}

/// Least-squares slope and intercept of `y` against `x`.
fn linear_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len() as f64;
    if x.len() < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

fn zero_crossings(times: &[f64], signal: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    // first exact zero since the last nonzero sample
    let mut touched: Option<f64> = None;
    for (&t, &v) in times.iter().zip(signal) {
        if v == 0.0 {
            touched.get_or_insert(t);
            continue;
        }
        if let Some((tp, vp)) = prev {
            if vp.signum() != v.signum() {
                out.push(touched.unwrap_or(tp + (t - tp) * vp / (vp - v)));
            }
        }
        touched = None;
        prev = Some((t, v));
    }
    out
}

/// Recover the beat period and the decay rates from an intensity trace.
///
/// The interference signal is the sum of the trace's cross terms, or, if
/// it has none, the total minus the diagonal terms. Envelope rates are fitted
/// to each diagonal term with `ln I = c - Gamma t`.
pub fn beat_extract(trace: &IntensityTrace) -> BeatAnalysis {
    let n = trace.len();
    let diagonal: Vec<_> = trace.diagonal_terms().collect();
    let cross: Vec<_> = trace.cross_terms().collect();
    let signal: Vec<f64> = if !cross.is_empty() {
        (0..n).map(|i| cross.iter().map(|c| c.values[i]).sum()).collect()
    } else if !diagonal.is_empty() {
        (0..n)
            .map(|i| trace.total[i] - diagonal.iter().map(|d| d.values[i]).sum::<f64>())
            .collect()
    } else {
        vec![0.0; n]
    };

    let peak_total = trace.total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let peak_signal = signal.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let crossings = if peak_signal > NOISE_FLOOR * peak_total {
        zero_crossings(&trace.times, &signal)
    } else {
        Vec::new()
    };
    // crossing m sits at t0 + m T/2
    let period = if crossings.len() >= 3 {
        let idx: Vec<f64> = (0..crossings.len()).map(|m| m as f64).collect();
        linear_fit(&idx, &crossings).map(|(half, _)| 2.0 * half)
    } else {
        None
    };

    let envelope_rates = diagonal
        .iter()
        .filter_map(|d| {
            let (t, ln): (Vec<f64>, Vec<f64>) = trace
                .times
                .iter()
                .zip(&d.values)
                .filter(|(_, v)| **v > 0.0)
                .map(|(t, v)| (*t, v.ln()))
                .unzip();
            linear_fit(&t, &ln).map(|(slope, _)| (d.label.clone(), -slope))
        })
        .collect();

    BeatAnalysis {
        oscillation_detected: period.is_some(),
        period,
        zero_crossings: crossings.len(),
        envelope_rates,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emission::{ObservationPoint, TermSeries};
    use std::f64::consts::TAU;

    fn synthetic(omega: f64, gamma: f64, span: f64, n: usize, with_cross: bool) -> IntensityTrace {
        let times: Vec<f64> = (0..n).map(|i| span * i as f64 / (n - 1) as f64).collect();
        let ia: Vec<f64> = times.iter().map(|t| (-gamma * t).exp()).collect();
        let ib: Vec<f64> = times.iter().map(|t| 2.0 * (-2.0 * gamma * t).exp()).collect();
        let g: Vec<f64> = times
            .iter()
            .map(|t| {
                if with_cross {
                    2.5 * (-1.5 * gamma * t).exp() * (0.3 - omega * t).cos()
                } else {
                    0.0
                }
            })
            .collect();
        let total = (0..n).map(|i| ia[i] + ib[i] + g[i]).collect();
        let mut terms = vec![
            TermSeries {
                label: "I_1".into(),
                values: ia,
            },
            TermSeries {
                label: "I_2".into(),
                values: ib,
            },
        ];
        if with_cross {
            terms.push(TermSeries {
                label: "G_1_2".into(),
                values: g,
            });
        }
        IntensityTrace {
            times,
            total,
            terms,
            observation: ObservationPoint::on_axis(1.0).unwrap(),
        }
    }

    #[test]
    fn closed_loop_period_recovery() {
        let omega = 4.37e7;
        let gamma = 3.8e6;
        // twelve oscillations
        let span = 12.0 * TAU / omega;
        let a = beat_extract(&synthetic(omega, gamma, span, 2000, true));
        assert!(a.oscillation_detected);
        let rel = (a.period.unwrap() / (TAU / omega) - 1.0).abs();
        assert!(rel < 1e-3, "{rel}");
        assert!((a.rate("I_1").unwrap() / gamma - 1.0).abs() < 1e-9);
        assert!((a.rate("I_2").unwrap() / (2.0 * gamma) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn detrended_total_without_cross_columns() {
        let omega = 1.0e3;
        let mut tr = synthetic(omega, 10.0, 15.0 * TAU / omega, 3000, true);
        tr.terms.pop();
        let a = beat_extract(&tr);
        assert!((a.period.unwrap() / (TAU / omega) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn no_coherence_no_beats() {
        let a = beat_extract(&synthetic(1e3, 10.0, 0.1, 500, false));
        assert!(!a.oscillation_detected);
        assert_eq!(a.period, None);
        assert_eq!(a.envelope_rates.len(), 2);
    }

    #[test]
    fn crossing_interpolation() {
        let c = zero_crossings(&[0.0, 1.0, 2.0, 3.0], &[1.0, -1.0, 0.0, 3.0]);
        assert_eq!(c, vec![0.5, 2.0]);
        assert_eq!(zero_crossings(&[0.0, 1.0, 2.0], &[1.0, 0.0, 2.0]), Vec::<f64>::new());
    }
}
