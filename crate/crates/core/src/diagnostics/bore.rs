//! Features of the undular bore: the leading crest, the mean state around
//! `x_u2`, and the shape of the oscillations there.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::reference::SwweSolution;
use crate::snapshot::Snapshot;

/// The leading crest of a bore.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crest {
    pub x: f64,
    /// Total depth at the crest.
    pub amplitude: f64,
}

/// Rightmost local maximum of `h` standing more than `0.01 (h1 - h0)` above
/// `h0`, located by a parabola through it and its neighbours. `None` means
/// there is no bore.
pub fn leading_wave(snap: &Snapshot, h0: f64, h1: f64) -> Option<Crest> {
    let h = &snap.h;
    let threshold = h0 + 0.01 * (h1 - h0);
    (1..h.len().saturating_sub(1))
        .rev()
        .find(|&i| h[i] > threshold && h[i] > h[i - 1] && h[i] >= h[i + 1])
        .map(|i| {
            let (l, c, r) = (h[i - 1], h[i], h[i + 1]);
            let curv = l - 2.0 * c + r;
            if curv == 0.0 {
                return Crest {
                    x: snap.x[i],
                    amplitude: c,
                };
            }
            let shift = 0.5 * (l - r) / curv;
            Crest {
                x: snap.x[i] + shift * snap.dx,
                amplitude: c - 0.25 * (l - r) * shift,
            }
        })
}

/// Half-width of the averaging window around `x_u2`.
pub const MEAN_HALF_WIDTH: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoreMeans {
    pub h: f64,
    pub u: f64,
    pub cells: usize,
    /// The window reached past an end of the domain.
    pub clipped: bool,
}

/// Arithmetic means of `h` and `u` over the cells with centres in
/// `[x_u2 - 50, x_u2 + 50]` at the snapshot's time.
pub fn bore_means(snap: &Snapshot, sol: &SwweSolution) -> Result<BoreMeans> {
    let xu = sol.x_u2(snap.t);
    let (lo, hi) = (xu - MEAN_HALF_WIDTH, xu + MEAN_HALF_WIDTH);
    let clipped = lo < snap.a || hi > snap.b();
    let cells: Vec<usize> = (0..snap.len())
        .filter(|&i| snap.x[i] >= lo && snap.x[i] <= hi)
        .collect();
    let Some(&first) = cells.first() else {
        return Err(Error::Domain(format!(
            "averaging window [{lo}, {hi}] contains no cells"
        )));
    };
    let n = cells.len();
    // Averaging offsets from the first cell keeps a uniform window exact.
    let mean = |q: &[f64]| q[first] + cells.iter().map(|&i| q[i] - q[first]).sum::<f64>() / n as f64;
    Ok(BoreMeans {
        h: mean(&snap.h),
        u: mean(&snap.u),
        cells: n,
        clipped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Structure {
    /// No oscillations.
    S1,
    /// A flat plateau at `x_u2` between oscillating flanks.
    S2,
    /// An amplitude minimum (node) at `x_u2`.
    S3,
    /// Amplitude growth at `x_u2`.
    S4,
    Unclassified,
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Structure::S1 => "S1",
            Structure::S2 => "S2",
            Structure::S3 => "S3",
            Structure::S4 => "S4",
            Structure::Unclassified => "Unclassified",
        })
    }
}

impl FromStr for Structure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "S1" => Structure::S1,
            "S2" => Structure::S2,
            "S3" => Structure::S3,
            "S4" => Structure::S4,
            "Unclassified" => Structure::Unclassified,
            _ => return Err(Error::Domain(format!("unknown structure label {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureThresholds {
    /// Amplitudes below this count as no oscillation.
    pub eps1: f64,
    /// Ratio separating a node or a bulge from the flanks.
    pub rho: f64,
    /// The middle window is `x_u2 +- mid_half_width`.
    pub mid_half_width: f64,
    /// Width of each flank window, adjacent to the middle one.
    pub flank_width: f64,
}

impl Default for StructureThresholds {
    fn default() -> Self {
        StructureThresholds {
            eps1: 5e-3,
            rho: 0.5,
            mid_half_width: 10.0,
            flank_width: 20.0,
        }
    }
}

/// A crest or trough of `h`, with the local oscillation amplitude: half the
/// smaller of the heights to the neighbouring extrema. Taking the smaller
/// keeps a small ripple next to a large wave from inheriting its size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillation {
    pub x: f64,
    pub amplitude: f64,
}

/// Extrema of `h` from sign changes of the discrete slope over cells with
/// centres in `[lo, hi]`. Flat steps keep the previous sign.
pub fn oscillations(snap: &Snapshot, lo: f64, hi: f64) -> Vec<Oscillation> {
    let idx: Vec<usize> = (0..snap.len())
        .filter(|&i| snap.x[i] >= lo && snap.x[i] <= hi)
        .collect();
    let mut extrema: Vec<usize> = Vec::new();
    let mut prev_sign = 0.0;
    for w in idx.windows(2) {
        let (i, j) = (w[0], w[1]);
        let d = snap.h[j] - snap.h[i];
        let sign = if d > 0.0 {
            1.0
        } else if d < 0.0 {
            -1.0
        } else {
            prev_sign
        };
        if prev_sign != 0.0 && sign != prev_sign {
            extrema.push(i);
        }
        if sign != 0.0 {
            prev_sign = sign;
        }
    }
    let h = |k: usize| snap.h[extrema[k]];
    (0..extrema.len())
        .filter(|_| extrema.len() > 1)
        .map(|k| {
            let left = (k > 0).then(|| (h(k) - h(k - 1)).abs());
            let right = (k + 1 < extrema.len()).then(|| (h(k) - h(k + 1)).abs());
            let height = match (left, right) {
                (Some(l), Some(r)) => l.min(r),
                (Some(v), None) | (None, Some(v)) => v,
                (None, None) => 0.0,
            };
            Oscillation {
                x: snap.x[extrema[k]],
                amplitude: 0.5 * height,
            }
        })
        .collect()
}

fn window_amplitude(osc: &[Oscillation], lo: f64, hi: f64) -> f64 {
    osc.iter()
        .filter(|o| o.x >= lo && o.x <= hi)
        .map(|o| o.amplitude)
        .fold(0.0, f64::max)
}

/// Window amplitudes used by the classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureAmplitudes {
    pub overall: f64,
    pub left: f64,
    pub mid: f64,
    pub right: f64,
}

pub fn structure_amplitudes(
    snap: &Snapshot,
    sol: &SwweSolution,
    th: &StructureThresholds,
) -> StructureAmplitudes {
    let t = snap.t;
    let osc = oscillations(snap, sol.x_fan_tail(t), sol.x_s2(t));
    let xu = sol.x_u2(t);
    let m = th.mid_half_width;
    StructureAmplitudes {
        overall: osc.iter().map(|o| o.amplitude).fold(0.0, f64::max),
        left: window_amplitude(&osc, xu - m - th.flank_width, xu - m),
        mid: window_amplitude(&osc, xu - m, xu + m),
        right: window_amplitude(&osc, xu + m, xu + m + th.flank_width),
    }
}

/// Classify the bore between the tail of the rarefaction and the shock of
/// the shallow-water solution.
pub fn classify_structure(
    snap: &Snapshot,
    sol: &SwweSolution,
    th: &StructureThresholds,
) -> Structure {
    let xu = sol.x_u2(snap.t);
    if snap.t <= 0.0 || snap.is_empty() || xu < snap.a || xu > snap.b() {
        return Structure::Unclassified;
    }
    let a = structure_amplitudes(snap, sol, th);
    let (fmin, fmax) = (a.left.min(a.right), a.left.max(a.right));
    if a.overall < th.eps1 {
        Structure::S1
    } else if a.mid < th.eps1 && fmax >= th.eps1 {
        Structure::S2
    } else if a.mid < th.rho * fmin {
        Structure::S3
    } else if a.mid > fmax / th.rho {
        Structure::S4
    } else {
        Structure::Unclassified
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::solve_swwe_dambreak;
    use proptest::prelude::*;

    const G: f64 = 9.81;

    fn sol() -> SwweSolution {
        solve_swwe_dambreak(1.0, 1.8, G, 500.0).unwrap()
    }

    #[test]
    fn monotone_profile_has_no_bore() {
        let s = Snapshot::sample(0.0, 1.0, 1000, 0.0, |x| {
            (1.0 + 0.4 * (1.0 + ((500.0 - x) / 40.0).tanh()), 0.0)
        });
        assert_eq!(leading_wave(&s, 1.0, 1.8), None);
    }

    #[test]
    fn sech_crest_located() {
        let dx = 10.0 / 64.0;
        let s = Snapshot::sample(0.0, dx, 6400, 0.0, |x| {
            (1.0 + 0.7 / (x - 600.0).cosh().powi(2), 0.0)
        });
        let c = leading_wave(&s, 1.0, 1.8).unwrap();
        assert!((c.x - 600.0).abs() <= dx / 10.0, "{c:?}");
        assert!((c.amplitude - 1.7).abs() <= 1e-3, "{c:?}");
    }

    #[test]
    fn rightmost_crest_wins() {
        let s = Snapshot::sample(0.0, 0.5, 400, 0.0, |x| {
            let bump = |c: f64, a: f64| a / ((x - c) / 3.0).cosh().powi(2);
            (1.0 + bump(60.0, 0.5) + bump(150.0, 0.2) + bump(190.0, 0.001), 0.0)
        });
        let c = leading_wave(&s, 1.0, 1.8).unwrap();
        assert!((c.x - 150.0).abs() < 0.05, "{c:?}");
    }

    #[test]
    fn means_of_uniform_state() {
        let sl = sol();
        let s = Snapshot::sample(0.0, 0.25, 4000, 30.0, |_| (sl.h2, sl.u2));
        let m = bore_means(&s, &sl).unwrap();
        assert_eq!((m.h, m.u), (sl.h2, sl.u2));
        assert!(!m.clipped);
        assert_eq!(m.cells, 400);
    }

    #[test]
    fn means_of_symmetric_sawtooth() {
        let sl = sol();
        let xu = sl.x_u2(30.0);
        let dx = 0.25;
        // Two-cell sawtooth, even count of cells in the window.
        let s = Snapshot::sample(0.0, dx, 4000, 30.0, |x| {
            let k = ((x - xu) / dx).floor() as i64;
            (sl.h2 + if k % 2 == 0 { 0.1 } else { -0.1 }, sl.u2)
        });
        let m = bore_means(&s, &sl).unwrap();
        assert_eq!(m.cells % 2, 0);
        assert!((m.h - sl.h2).abs() <= 1e-12, "{}", m.h - sl.h2);
    }

    #[test]
    fn means_flag_clipping() {
        let sl = sol();
        let s = Snapshot::sample(480.0, 0.5, 100, 3.0, |_| (1.3, 1.0));
        let m = bore_means(&s, &sl).unwrap();
        assert!(m.clipped);
        assert_eq!(m.cells, 100);
    }

    fn flanked_plateau(mid_amp: f64, flank_amp: f64) -> Snapshot {
        let sl = sol();
        let t = 30.0;
        let xu = sl.x_u2(t);
        Snapshot::sample(0.0, 0.125, 8000, t, |x| {
            let d = (x - xu).abs();
            let amp = if d <= 10.0 { mid_amp } else { flank_amp };
            // Wavelength 4 with nodes at the window edges, so the envelope
            // switch leaves no step.
            (sl.h2 + amp * (2.0 * std::f64::consts::PI * (x - xu) / 4.0).sin(), sl.u2)
        })
    }

    #[test]
    fn canonical_synthetic_structures() {
        let sl = sol();
        let th = StructureThresholds::default();
        assert_eq!(classify_structure(&flanked_plateau(0.0, 0.0), &sl, &th), Structure::S1);
        assert_eq!(classify_structure(&flanked_plateau(0.0, 0.05), &sl, &th), Structure::S2);
        assert_eq!(classify_structure(&flanked_plateau(0.01, 0.05), &sl, &th), Structure::S3);
        assert_eq!(classify_structure(&flanked_plateau(0.2, 0.05), &sl, &th), Structure::S4);
        assert_eq!(
            classify_structure(&flanked_plateau(0.05, 0.05), &sl, &th),
            Structure::Unclassified
        );
    }

    #[test]
    fn bore_outside_domain_is_unclassified() {
        let sl = sol();
        let s = Snapshot::sample(600.0, 0.5, 400, 30.0, |_| (1.0, 0.0));
        assert_eq!(
            classify_structure(&s, &sl, &StructureThresholds::default()),
            Structure::Unclassified
        );
    }

    #[test]
    fn labels_round_trip() {
        for s in [Structure::S1, Structure::S2, Structure::S3, Structure::S4, Structure::Unclassified] {
            assert_eq!(s.to_string().parse::<Structure>().unwrap(), s);
        }
    }

    proptest! {
        #[test]
        fn classification_ignores_velocity_offset(mid in 0.0f64..0.1, flank in 0.0f64..0.1, du in -2.0f64..2.0) {
            let sl = sol();
            let th = StructureThresholds::default();
            let s = flanked_plateau(mid, flank);
            let mut shifted = s.clone();
            shifted.u.iter_mut().for_each(|u| *u += du);
            prop_assert_eq!(classify_structure(&s, &sl, &th), classify_structure(&shifted, &sl, &th));
        }
    }
}
