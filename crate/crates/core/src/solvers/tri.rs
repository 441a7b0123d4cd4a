//! Per-column tridiagonal operators: all couplings within one vertical
//! column, no cross-column entries. Columns are independent work units.

use super::SolverError;

/// Tridiagonal matrices, one per local column, each nlayers x nlayers.
#[derive(Debug, Clone)]
pub struct ColumnTriMatrix {
    ncols: usize,
    nlayers: usize,
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

impl ColumnTriMatrix {
    pub fn zeros(ncols: usize, nlayers: usize) -> ColumnTriMatrix {
        assert!(nlayers >= 1);
        ColumnTriMatrix {
            ncols,
            nlayers,
            sub: vec![0.0; ncols * (nlayers - 1)],
            diag: vec![0.0; ncols * nlayers],
            sup: vec![0.0; ncols * (nlayers - 1)],
        }
    }

    /// Same bands in every column.
    pub fn uniform(ncols: usize, sub: &[f64], diag: &[f64], sup: &[f64]) -> ColumnTriMatrix {
        let nlayers = diag.len();
        assert_eq!(sub.len(), nlayers - 1);
        assert_eq!(sup.len(), nlayers - 1);
        let mut m = ColumnTriMatrix::zeros(ncols, nlayers);
        for c in 0..ncols {
            m.diag_mut(c).copy_from_slice(diag);
            m.sub_mut(c).copy_from_slice(sub);
            m.sup_mut(c).copy_from_slice(sup);
        }
        m
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nlayers(&self) -> usize {
        self.nlayers
    }

    pub fn diag(&self, col: usize) -> &[f64] {
        &self.diag[col * self.nlayers..(col + 1) * self.nlayers]
    }

    pub fn sub(&self, col: usize) -> &[f64] {
        &self.sub[col * (self.nlayers - 1)..(col + 1) * (self.nlayers - 1)]
    }

    pub fn sup(&self, col: usize) -> &[f64] {
        &self.sup[col * (self.nlayers - 1)..(col + 1) * (self.nlayers - 1)]
    }

    pub fn diag_mut(&mut self, col: usize) -> &mut [f64] {
        &mut self.diag[col * self.nlayers..(col + 1) * self.nlayers]
    }

    pub fn sub_mut(&mut self, col: usize) -> &mut [f64] {
        &mut self.sub[col * (self.nlayers - 1)..(col + 1) * (self.nlayers - 1)]
    }

    pub fn sup_mut(&mut self, col: usize) -> &mut [f64] {
        &mut self.sup[col * (self.nlayers - 1)..(col + 1) * (self.nlayers - 1)]
    }

    fn check_shape(&self, other: &ColumnTriMatrix) -> Result<(), SolverError> {
        if self.ncols != other.ncols || self.nlayers != other.nlayers {
            return Err(SolverError::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.ncols, self.nlayers, other.ncols, other.nlayers
            )));
        }
        Ok(())
    }

    /// Entrywise sum.
    pub fn add(&self, other: &ColumnTriMatrix) -> Result<ColumnTriMatrix, SolverError> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.sub.iter_mut().zip(&other.sub) {
            *a += b;
        }
        for (a, b) in out.diag.iter_mut().zip(&other.diag) {
            *a += b;
        }
        for (a, b) in out.sup.iter_mut().zip(&other.sup) {
            *a += b;
        }
        Ok(out)
    }

    pub fn scale(&self, alpha: f64) -> ColumnTriMatrix {
        let mut out = self.clone();
        out.sub.iter_mut().for_each(|v| *v *= alpha);
        out.diag.iter_mut().for_each(|v| *v *= alpha);
        out.sup.iter_mut().for_each(|v| *v *= alpha);
        out
    }

    /// Banded matvec on one column.
    pub fn apply_column(&self, col: usize, x: &[f64], y: &mut [f64]) {
        let n = self.nlayers;
        let d = self.diag(col);
        let l = self.sub(col);
        let u = self.sup(col);
        for k in 0..n {
            let mut v = d[k] * x[k];
            if k > 0 {
                v += l[k - 1] * x[k - 1];
            }
            if k + 1 < n {
                v += u[k] * x[k + 1];
            }
            y[k] = v;
        }
    }

    /// Thomas-algorithm solve of one column, in place. No pivoting; a zero
    /// pivot is reported with the column it occurred in.
    pub fn solve_column(&self, col: usize, rhs: &mut [f64]) -> Result<(), SolverError> {
        let n = self.nlayers;
        debug_assert_eq!(rhs.len(), n);
        let d = self.diag(col);
        let l = self.sub(col);
        let u = self.sup(col);
        let mut w = vec![0.0f64; n.saturating_sub(1)];
        if d[0] == 0.0 {
            return Err(SolverError::ZeroPivot { column: col, row: 0 });
        }
        if n > 1 {
            w[0] = u[0] / d[0];
        }
        rhs[0] /= d[0];
        for k in 1..n {
            let denom = d[k] - l[k - 1] * w[k - 1];
            if denom == 0.0 {
                return Err(SolverError::ZeroPivot { column: col, row: k });
            }
            if k + 1 < n {
                w[k] = u[k] / denom;
            }
            rhs[k] = (rhs[k] - l[k - 1] * rhs[k - 1]) / denom;
        }
        for k in (0..n.saturating_sub(1)).rev() {
            rhs[k] -= w[k] * rhs[k + 1];
        }
        Ok(())
    }

    /// Solves every column of `data`, laid out column-major with `bases[c]`
    /// the first index of column c's nlayers-long run.
    pub fn solve_columns(&self, bases: &[usize], data: &mut [f64]) -> Result<(), SolverError> {
        let n = self.nlayers;
        for (c, &b) in bases.iter().enumerate() {
            // In-place Thomas on the contiguous run.
            let mut col = data[b..b + n].to_vec();
            self.solve_column(c, &mut col)?;
            data[b..b + n].copy_from_slice(&col);
        }
        Ok(())
    }

    /// Banded matvec over all columns with the same layout as
    /// `solve_columns`.
    pub fn apply_columns(&self, bases: &[usize], x: &[f64], y: &mut [f64]) {
        let n = self.nlayers;
        for (c, &b) in bases.iter().enumerate() {
            let (xs, ys) = (&x[b..b + n], &mut y[b..b + n]);
            // apply_column cannot borrow both, copy the input run.
            let xc = xs.to_vec();
            self.apply_column(c, &xc, ys);
        }
    }
}
