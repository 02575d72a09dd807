//! Interior profiles at one instant, and their CSV form (`x,h,u`).

use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::State;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    /// Left end of the domain.
    pub a: f64,
    pub dx: f64,
    pub x: Vec<f64>,
    pub h: Vec<f64>,
    pub u: Vec<f64>,
}

impl Snapshot {
    pub fn from_state(state: &State) -> Self {
        Snapshot {
            t: state.t,
            a: state.grid.a,
            dx: state.grid.dx,
            x: state.grid.centers(),
            h: state.h().to_vec(),
            u: state.u().to_vec(),
        }
    }

    /// Snapshot on the cell-centred grid of `[a, a + n dx]` with profiles
    /// sampled from `f(x) -> (h, u)`.
    pub fn sample(a: f64, dx: f64, n: usize, t: f64, f: impl Fn(f64) -> (f64, f64)) -> Self {
        let x: Vec<f64> = (0..n).map(|i| a + (i as f64 + 0.5) * dx).collect();
        let (h, u) = x.iter().map(|&xi| f(xi)).unzip();
        Snapshot { t, a, dx, x, h, u }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Right end of the domain.
    pub fn b(&self) -> f64 {
        self.a + self.len() as f64 * self.dx
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, 0, e))?;
        w.write_record(["x", "h", "u"])
            .map_err(|e| csv_err(path, 1, e))?;
        for i in 0..self.len() {
            w.write_record([fmt17(self.x[i]), fmt17(self.h[i]), fmt17(self.u[i])])
                .map_err(|e| csv_err(path, i + 2, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    /// Read an `x,h,u` file. Time is not stored in the file and is taken
    /// from the caller; the grid spacing is inferred from the first two rows.
    pub fn read_csv(path: &Path, t: f64) -> Result<Self> {
        let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, 0, e))?;
        let headers = r.headers().map_err(|e| csv_err(path, 1, e))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["x", "h", "u"] {
            return Err(Error::Csv {
                path: path.into(),
                line: 1,
                msg: format!("expected header x,h,u, found {headers:?}"),
            });
        }
        let (mut x, mut h, mut u) = (Vec::new(), Vec::new(), Vec::new());
        for (i, rec) in r.records().enumerate() {
            let line = i + 2;
            let rec = rec.map_err(|e| csv_err(path, line, e))?;
            let field = |k: usize| -> Result<f64> {
                rec.get(k)
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::Csv {
                        path: path.into(),
                        line,
                        msg: format!("bad number in column {k}"),
                    })
            };
            x.push(field(0)?);
            h.push(field(1)?);
            u.push(field(2)?);
        }
        if x.len() < 2 {
            return Err(Error::Csv {
                path: path.into(),
                line: x.len() + 1,
                msg: "need at least two rows".into(),
            });
        }
        let dx = x[1] - x[0];
        Ok(Snapshot {
            t,
            a: x[0] - 0.5 * dx,
            dx,
            x,
            h,
            u,
        })
    }
}

/// 17 significant digits; parses back to the same `f64`.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_err(path: &Path, line: usize, e: csv::Error) -> Error {
    Error::Csv {
        path: path.into(),
        line,
        msg: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.csv");
        let s = Snapshot::sample(0.0, 0.1, 50, 3.0, |x| (1.0 + (x / 3.0).sin() / 7.0, x.cos() / 3.0));
        s.write_csv(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("x,h,u\n"));
        let back = Snapshot::read_csv(&path, 3.0).unwrap();
        assert_eq!(back.h, s.h);
        assert_eq!(back.u, s.u);
        assert_eq!(back.x, s.x);
    }

    proptest! {
        #[test]
        fn fmt17_round_trips(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            prop_assert_eq!(fmt17(v).parse::<f64>().unwrap(), v);
        }
    }
}
