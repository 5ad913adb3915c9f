//! Per-step linear systems `(d M + beta S) u = r`.
//!
//! `M` couples index `j` only with `j` and `j +- 2` and `S` is diagonal, so
//! the system splits into two independent tridiagonal blocks (even and odd
//! indices), each factored as `L D L^T` without pivoting.

use crate::error::{Error, Result};

/// Symmetric matrix whose only nonzero off-diagonals sit at distance two.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymMatrix {
    diag: Vec<f64>,
    /// `off2[j] = m[j][j + 2]`
    off2: Vec<f64>,
}

impl BandedSymMatrix {
    pub fn new(diag: Vec<f64>, off2: Vec<f64>) -> Result<Self> {
        let expected = diag.len().saturating_sub(2);
        if off2.len() != expected {
            return Err(Error::LengthMismatch { expected, got: off2.len() });
        }
        Ok(Self { diag, off2 })
    }

    pub fn identity(dim: usize) -> Self {
        Self { diag: vec![1.0; dim], off2: vec![0.0; dim.saturating_sub(2)] }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off2(&self) -> &[f64] {
        &self.off2
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.abs_diff(j) {
            0 => self.diag[i],
            2 => self.off2[i.min(j)],
            _ => 0.0,
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for j in 0..n.saturating_sub(2) {
            y[j] += self.off2[j] * x[j + 2];
            y[j + 2] += self.off2[j] * x[j];
        }
        y
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect()
    }
}

/// `L D L^T` factors of a symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
struct TridiagLdl {
    d: Vec<f64>,
    /// sub-diagonal of the unit lower factor
    l: Vec<f64>,
}

impl TridiagLdl {
    /// `offset` is the row of the first pivot in the unsplit numbering,
    /// `stride` the index spacing.
    fn factor(diag: &[f64], off: &[f64], offset: usize, stride: usize) -> Result<Self> {
        let n = diag.len();
        let mut d = Vec::with_capacity(n);
        let mut l = Vec::with_capacity(n.saturating_sub(1));
        for k in 0..n {
            let pivot = if k == 0 { diag[0] } else { diag[k] - l[k - 1] * l[k - 1] * d[k - 1] };
            if !(pivot > 0.0) {
                return Err(Error::Indefinite { row: offset + stride * k, pivot });
            }
            d.push(pivot);
            if k + 1 < n {
                l.push(off[k] / pivot);
            }
        }
        Ok(Self { d, l })
    }

    fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.d.len();
        for k in 1..n {
            x[k] -= self.l[k - 1] * x[k - 1];
        }
        for k in 0..n {
            x[k] /= self.d[k];
        }
        for k in (0..n.saturating_sub(1)).rev() {
            x[k] -= self.l[k] * x[k + 1];
        }
    }
}

/// Factored `d M + beta S`, split into its even and odd parity blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct ParitySplitSystem {
    dim: usize,
    even: TridiagLdl,
    odd: TridiagLdl,
}

/// Factor `d M + beta S` with `S` given by its diagonal.
pub fn factor(d: f64, beta: f64, mass: &BandedSymMatrix, stiffness: &[f64]) -> Result<ParitySplitSystem> {
    let n = mass.dim();
    if stiffness.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: stiffness.len() });
    }
    let block = |start: usize| -> Result<TridiagLdl> {
        let idx: Vec<usize> = (start..n).step_by(2).collect();
        let diag: Vec<f64> = idx.iter().map(|&j| d * mass.diag()[j] + beta * stiffness[j]).collect();
        let off: Vec<f64> = idx.iter().take(idx.len().saturating_sub(1)).map(|&j| d * mass.off2()[j]).collect();
        TridiagLdl::factor(&diag, &off, start, 2)
    };
    Ok(ParitySplitSystem { dim: n, even: block(0)?, odd: block(1)? })
}

impl ParitySplitSystem {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.len() != self.dim {
            return Err(Error::LengthMismatch { expected: self.dim, got: rhs.len() });
        }
        let mut even: Vec<f64> = rhs.iter().step_by(2).copied().collect();
        let mut odd: Vec<f64> = rhs.iter().skip(1).step_by(2).copied().collect();
        self.even.solve_in_place(&mut even);
        self.odd.solve_in_place(&mut odd);
        let mut out = vec![0.0; self.dim];
        for (k, v) in even.into_iter().enumerate() {
            out[2 * k] = v;
        }
        for (k, v) in odd.into_iter().enumerate() {
            out[2 * k + 1] = v;
        }
        Ok(out)
    }
}

/// `(d M + beta S) x` without forming the matrix.
pub fn apply_system(d: f64, beta: f64, mass: &BandedSymMatrix, stiffness: &[f64], x: &[f64]) -> Vec<f64> {
    let mut y = mass.matvec(x);
    for ((yi, si), xi) in y.iter_mut().zip(stiffness).zip(x) {
        *yi = d * *yi + beta * si * xi;
    }
    y
}

/// Textbook dense LU with partial pivoting, kept as an equivalence oracle for
/// the banded path.
pub mod dense {
    use crate::error::{Error, Result};

    pub fn lu_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
        let n = b.len();
        if a.len() != n || a.iter().any(|row| row.len() != n) {
            return Err(Error::LengthMismatch { expected: n, got: a.len() });
        }
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .expect("non-empty range");
            if a[pivot_row][col] == 0.0 {
                return Err(Error::Singular(col));
            }
            a.swap(col, pivot_row);
            b.swap(col, pivot_row);
            for row in col + 1..n {
                let factor = a[row][col] / a[col][col];
                if factor == 0.0 {
                    continue;
                }
                for k in col..n {
                    a[row][k] -= factor * a[col][k];
                }
                b[row] -= factor * b[col];
            }
        }
        let mut x = vec![0.0; n];
        for row in (0..n).rev() {
            let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
            x[row] = (b[row] - s) / a[row][row];
        }
        Ok(x)
    }

    pub fn matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        a.iter().map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum()).collect()
    }
}
