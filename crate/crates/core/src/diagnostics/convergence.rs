//! Differences between runs on nested grids.
//!
//! Halving `dx` on a cell-centred grid does not reuse cell centres: every
//! coarse centre sits on the face between two fine cells. The fine solution
//! is evaluated there as the mean of those two cells, which is second-order
//! accurate like the schemes themselves.

use crate::error::{Error, Result};
use crate::snapshot::Snapshot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    H,
    U,
}

/// The window left out of the mid-bore comparison in the published table.
pub const DAGGER_WINDOW: (f64, f64) = (520.0, 540.0);

/// The fine snapshot sampled at the coarse centres.
pub fn restrict(coarse: &Snapshot, fine: &Snapshot, field: Field) -> Result<Vec<f64>> {
    let ratio_f = coarse.dx / fine.dx;
    let ratio = ratio_f.round();
    let pow2 = ratio >= 1.0 && (ratio as u64).is_power_of_two();
    if !pow2 || (ratio_f - ratio).abs() > 1e-9 * ratio {
        return Err(Error::GridMismatch(format!(
            "fine spacing {} is not the coarse spacing {} halved a whole number of times",
            fine.dx, coarse.dx
        )));
    }
    let ratio = ratio as usize;
    if (coarse.a - fine.a).abs() > 1e-9 * coarse.dx || fine.len() != coarse.len() * ratio {
        return Err(Error::GridMismatch(format!(
            "domains differ: coarse [{}, {}] with {} cells, fine [{}, {}] with {} cells",
            coarse.a,
            coarse.b(),
            coarse.len(),
            fine.a,
            fine.b(),
            fine.len()
        )));
    }
    let q = match field {
        Field::H => &fine.h,
        Field::U => &fine.u,
    };
    let mut out = Vec::with_capacity(coarse.len());
    for (i, &xc) in coarse.x.iter().enumerate() {
        let v = if ratio == 1 {
            if (fine.x[i] - xc).abs() > 1e-9 * coarse.dx {
                return Err(mismatch_at(i, xc, fine.x[i]));
            }
            q[i]
        } else {
            let j = ratio * i + ratio / 2 - 1;
            let xf = 0.5 * (fine.x[j] + fine.x[j + 1]);
            if (xf - xc).abs() > 1e-9 * coarse.dx {
                return Err(mismatch_at(i, xc, xf));
            }
            0.5 * (q[j] + q[j + 1])
        };
        out.push(v);
    }
    Ok(out)
}

fn mismatch_at(i: usize, xc: f64, xf: f64) -> Error {
    Error::GridMismatch(format!(
        "coarse centre {i} at x = {xc} has no fine counterpart (nearest {xf})"
    ))
}

/// `sum |q' - q*| / sum |q*|` over coarse centres, where `q*` is the finer
/// solution. Centres inside `exclude` are skipped.
pub fn l1_difference(
    coarse: &Snapshot,
    fine: &Snapshot,
    field: Field,
    exclude: Option<(f64, f64)>,
) -> Result<f64> {
    let reference = restrict(coarse, fine, field)?;
    let q = match field {
        Field::H => &coarse.h,
        Field::U => &coarse.u,
    };
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..coarse.len() {
        if let Some((lo, hi)) = exclude {
            if coarse.x[i] >= lo && coarse.x[i] <= hi {
                continue;
            }
        }
        num += (q[i] - reference[i]).abs();
        den += reference[i].abs();
    }
    if num == 0.0 {
        return Ok(0.0);
    }
    if den == 0.0 {
        return Err(Error::Domain(
            "reference field is identically zero; relative difference undefined".into(),
        ));
    }
    Ok(num / den)
}

/// Observed orders `log2(e_k / e_{k+1})` between successive levels.
pub fn convergence_rates(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}
