//! Tridiagonal systems and the Thomas algorithm.

/// `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`.
///
/// `sub[0]` and `sup[n-1]` are ignored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn with_len(n: usize) -> Self {
        TridiagonalSystem {
            sub: vec![0.0; n],
            diag: vec![0.0; n],
            sup: vec![0.0; n],
            rhs: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Strict diagonal dominance by rows.
    pub fn is_diagonally_dominant(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            let off = if i > 0 { self.sub[i].abs() } else { 0.0 }
                + if i + 1 < n { self.sup[i].abs() } else { 0.0 };
            self.diag[i].abs() > off
        })
    }

    /// `A x - rhs`.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut r = self.diag[i] * x[i] - self.rhs[i];
                if i > 0 {
                    r += self.sub[i] * x[i - 1];
                }
                if i + 1 < n {
                    r += self.sup[i] * x[i + 1];
                }
                r
            })
            .collect()
    }

    /// Max-norm residual scaled by `max(|A| |x|, |rhs|)` row-wise.
    pub fn relative_residual(&self, x: &[f64]) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        let r = self.residual(x);
        let mut scale: f64 = 0.0;
        for i in 0..n {
            let mut s = (self.diag[i] * x[i]).abs() + self.rhs[i].abs();
            if i > 0 {
                s += (self.sub[i] * x[i - 1]).abs();
            }
            if i + 1 < n {
                s += (self.sup[i] * x[i + 1]).abs();
            }
            scale = scale.max(s);
            worst = worst.max(r[i].abs());
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    /// Solve into `x`, using `scratch` for the modified super-diagonal.
    /// Returns the row at which a zero pivot appeared.
    pub fn solve_into(&self, x: &mut [f64], scratch: &mut Vec<f64>) -> Result<(), usize> {
        thomas(&self.sub, &self.diag, &self.sup, &self.rhs, x, scratch)
    }

    pub fn solve(&self) -> Result<Vec<f64>, usize> {
        let mut x = vec![0.0; self.len()];
        let mut scratch = Vec::new();
        self.solve_into(&mut x, &mut scratch)?;
        Ok(x)
    }
}

/// Thomas algorithm without pivoting. Stable for diagonally dominant rows.
pub fn thomas(
    sub: &[f64],
    diag: &[f64],
    sup: &[f64],
    rhs: &[f64],
    x: &mut [f64],
    c: &mut Vec<f64>,
) -> Result<(), usize> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    c.clear();
    c.resize(n, 0.0);

    let mut pivot = diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(0);
    }
    c[0] = sup[0] / pivot;
    x[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - sub[i] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(i);
        }
        c[i] = sup[i] / pivot;
        x[i] = (rhs[i] - sub[i] * x[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(())
}
