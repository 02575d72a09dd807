//! Totals of conserved quantities from cell-centred samples.
//!
//! Each cell gets a quartic interpolant of `h` and of `u` through five
//! neighbouring centres (centred where possible, shifted inward at the two
//! cells nearest each end). The integrand is evaluated at three
//! Gauss-Legendre points per cell, so any integrand that is a polynomial of
//! degree at most five within a cell is integrated exactly once the samples
//! come from a quartic.

use crate::error::{Error, Result};
use crate::snapshot::Snapshot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Conserved {
    /// `h`
    Mass,
    /// `u h`
    Momentum,
    /// `(h u^2 + h^3 u_x^2 / 3 + g h^2) / 2`
    Energy,
}

pub const STENCIL: usize = 5;

/// Gauss-Legendre nodes on [-1, 1] and their weights.
fn gauss3() -> ([f64; 3], [f64; 3]) {
    let r = (3.0f64 / 5.0).sqrt();
    ([-r, 0.0, r], [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])
}

/// Lagrange weights for value and first derivative (per unit spacing) at the
/// three Gauss points of a cell, for a stencil whose first point sits
/// `start` cells from the cell being integrated (`start` in -4..=0).
#[derive(Debug, Clone, Copy)]
struct StencilWeights {
    value: [[f64; STENCIL]; 3],
    deriv: [[f64; STENCIL]; 3],
}

fn stencil_weights(start: i32) -> StencilWeights {
    let (nodes, _) = gauss3();
    let pts: Vec<f64> = (0..STENCIL as i32).map(|m| f64::from(start + m)).collect();
    let mut value = [[0.0; STENCIL]; 3];
    let mut deriv = [[0.0; STENCIL]; 3];
    for (q, &xi) in nodes.iter().enumerate() {
        let z = 0.5 * xi;
        for m in 0..STENCIL {
            let mut denom = 1.0;
            let mut prod = 1.0;
            for l in 0..STENCIL {
                if l != m {
                    denom *= pts[m] - pts[l];
                    prod *= z - pts[l];
                }
            }
            value[q][m] = prod / denom;
            // d/dz of prod_{l != m} (z - p_l)
            let mut d = 0.0;
            for skip in 0..STENCIL {
                if skip == m {
                    continue;
                }
                let mut p = 1.0;
                for l in 0..STENCIL {
                    if l != m && l != skip {
                        p *= z - pts[l];
                    }
                }
                d += p;
            }
            deriv[q][m] = d / denom;
        }
    }
    StencilWeights { value, deriv }
}

/// Total of `quantity` over the snapshot's domain.
pub fn total_quantity(snap: &Snapshot, quantity: Conserved, g: f64) -> Result<f64> {
    let n = snap.len();
    if n < STENCIL {
        return Err(Error::TooFewCells {
            needed: STENCIL,
            got: n,
        });
    }
    let (_, weights) = gauss3();
    let tables: Vec<StencilWeights> = (-4..=0).map(stencil_weights).collect();
    let half = 0.5 * snap.dx;
    let mut total = 0.0;

    for i in 0..n {
        let j0 = i.saturating_sub(2).min(n - STENCIL);
        let start = j0 as i32 - i as i32;
        let w = &tables[(start + 4) as usize];
        let hs = &snap.h[j0..j0 + STENCIL];
        let us = &snap.u[j0..j0 + STENCIL];
        let mut cell = 0.0;
        for q in 0..3 {
            let dot = |c: &[f64; STENCIL], v: &[f64]| -> f64 {
                c.iter().zip(v).map(|(a, b)| a * b).sum()
            };
            let h = dot(&w.value[q], hs);
            let f = match quantity {
                Conserved::Mass => h,
                Conserved::Momentum => h * dot(&w.value[q], us),
                Conserved::Energy => {
                    let u = dot(&w.value[q], us);
                    let ux = dot(&w.deriv[q], us) / snap.dx;
                    0.5 * (h * u * u + h * h * h / 3.0 * ux * ux + g * h * h)
                }
            };
            cell += weights[q] * f;
        }
        total += half * cell;
    }
    Ok(total)
}

/// Mass, momentum and energy totals.
pub fn totals(snap: &Snapshot, g: f64) -> Result<[f64; 3]> {
    Ok([
        total_quantity(snap, Conserved::Mass, g)?,
        total_quantity(snap, Conserved::Momentum, g)?,
        total_quantity(snap, Conserved::Energy, g)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constants_exact() {
        let s = Snapshot::sample(2.0, 0.25, 40, 0.0, |_| (1.7, 0.0));
        let m = total_quantity(&s, Conserved::Mass, 9.81).unwrap();
        assert!((m - 17.0).abs() <= 1e-13 * 17.0);
        let p = total_quantity(&s, Conserved::Momentum, 9.81).unwrap();
        assert_eq!(p, 0.0);
    }

    #[test]
    fn quartic_on_unit_interval() {
        let s = Snapshot::sample(0.0, 1.0 / 64.0, 64, 0.0, |x| (x.powi(4), 0.0));
        let m = total_quantity(&s, Conserved::Mass, 9.81).unwrap();
        assert!(((m - 0.2) / 0.2).abs() <= 1e-12, "{m}");
    }

    #[test]
    fn too_few_cells() {
        let s = Snapshot::sample(0.0, 1.0, 4, 0.0, |_| (1.0, 0.0));
        assert!(matches!(
            total_quantity(&s, Conserved::Mass, 9.81),
            Err(Error::TooFewCells { needed: 5, got: 4 })
        ));
    }

    // Energy with u linear and h constant: integrand is a polynomial of
    // degree 2 in x, integrated analytically.
    #[test]
    fn energy_of_linear_velocity() {
        let (h, g) = (1.3, 9.81);
        let s = Snapshot::sample(0.0, 0.1, 30, 0.0, |x| (h, 0.5 * x - 1.0));
        let e = total_quantity(&s, Conserved::Energy, g).unwrap();
        // int_0^3 (h (0.5x-1)^2 + h^3/3 * 0.25 + g h^2) / 2 dx
        let int_u2 = (0.5f64 * 3.0 - 1.0).powi(3) / 1.5 + 1.0 / 1.5;
        let exact = 0.5 * (h * int_u2 + h.powi(3) / 3.0 * 0.25 * 3.0 + g * h * h * 3.0);
        assert!(((e - exact) / exact).abs() < 1e-13, "{e} vs {exact}");
    }

    proptest! {
        #[test]
        fn exact_for_quartics(
            c in proptest::collection::vec(-2.0f64..2.0, 5),
            a in -10.0f64..10.0,
            n in 5usize..60,
        ) {
            let dx = 0.37;
            let p = |x: f64| c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * c[4])));
            let prim = |x: f64| x * (c[0] + x * (c[1] / 2.0 + x * (c[2] / 3.0 + x * (c[3] / 4.0 + x * c[4] / 5.0))));
            let s = Snapshot::sample(a, dx, n, 0.0, |x| (p(x), 0.0));
            let b = a + n as f64 * dx;
            let exact = prim(b) - prim(a);
            let got = total_quantity(&s, Conserved::Mass, 9.81).unwrap();
            let scale: f64 = s.h.iter().map(|v| v.abs()).sum::<f64>() * dx;
            prop_assert!((got - exact).abs() <= 1e-12 * scale.max(1e-300), "{} vs {}", got, exact);
        }
    }
}
