//! Ordinary least squares through Householder QR.
//!
//! Lagged price columns are often nearly collinear, so the normal equations
//! are never formed here.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Relative tolerance on the diagonal of R, scaled by the largest column norm.
pub const RANK_TOL: f64 = 1e-10;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Panics if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self { rows, cols, data }
    }

    /// Builds a matrix from equally sized rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend_from_slice(r.as_ref());
        }
        Self::from_row_major(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn leading_columns(&self, k: usize) -> Matrix {
        assert!(k <= self.cols);
        let data = (0..self.rows)
            .flat_map(|r| self.row(r)[..k].iter().copied())
            .collect();
        Matrix::from_row_major(self.rows, k, data)
    }

    pub fn skip_rows(&self, n: usize) -> Matrix {
        assert!(n <= self.rows);
        Matrix::from_row_major(self.rows - n, self.cols, self.data[n * self.cols..].to_vec())
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    pub rss: f64,
    pub n_rows: usize,
    pub n_cols: usize,
    pub rank: usize,
    /// Upper-triangular R factor, row-major `k × k`.
    r: Vec<f64>,
}

impl OlsFit {
    /// Residual degrees of freedom, `n_rows − n_cols`.
    pub fn df_resid(&self) -> usize {
        self.n_rows - self.n_cols
    }

    /// Diagonal element `j` of `(XᵀX)⁻¹`, from the R factor.
    ///
    /// Multiply by `rss / df_resid` for the coefficient variance.
    pub fn unscaled_variance(&self, j: usize) -> f64 {
        let k = self.n_cols;
        assert!(j < k);
        // Row j of R⁻¹: solve e_jᵀ = z R, i.e. Rᵀ zᵀ = e_j, forward in i.
        let mut z = vec![0.0; k];
        for i in j..k {
            let mut acc = if i == j { 1.0 } else { 0.0 };
            for l in j..i {
                acc -= z[l] * self.r[l * k + i];
            }
            z[i] = acc / self.r[i * k + i];
        }
        z.iter().map(|v| v * v).sum()
    }
}

/// Least-squares fit of `y` on the columns of `x`.
///
/// Requires `rows ≥ cols ≥ 1` and full column rank: a diagonal entry of R
/// smaller than [`RANK_TOL`] times the largest column norm is reported as
/// [`Error::RankDeficient`].
pub fn ols_fit(x: &Matrix, y: &[f64]) -> Result<OlsFit> {
    let (m, k) = (x.rows(), x.cols());
    if y.len() != m || k == 0 || m < k {
        return Err(Error::ShapeMismatch {
            rows: m,
            cols: k,
            target: y.len(),
        });
    }

    let mut a = x.data.clone();
    let mut b = y.to_vec();
    let col_norm_max = (0..k)
        .map(|j| libm::sqrt((0..m).map(|i| a[i * k + j] * a[i * k + j]).sum::<f64>()))
        .fold(0.0, f64::max);
    let tol = RANK_TOL * col_norm_max;

    let mut v = vec![0.0; m];
    let mut diag = vec![0.0; k];
    for j in 0..k {
        let norm = libm::sqrt((j..m).map(|i| a[i * k + j] * a[i * k + j]).sum::<f64>());
        if norm == 0.0 {
            diag[j] = 0.0;
            continue;
        }
        let pivot = a[j * k + j];
        let alpha = if pivot > 0.0 { -norm } else { norm };
        for i in j..m {
            v[i] = a[i * k + j];
        }
        v[j] -= alpha;
        let vnorm2: f64 = (j..m).map(|i| v[i] * v[i]).sum();
        if vnorm2 > 0.0 {
            for c in j..k {
                let dot: f64 = (j..m).map(|i| v[i] * a[i * k + c]).sum();
                let s = 2.0 * dot / vnorm2;
                for i in j..m {
                    a[i * k + c] -= s * v[i];
                }
            }
            let dot: f64 = (j..m).map(|i| v[i] * b[i]).sum();
            let s = 2.0 * dot / vnorm2;
            for i in j..m {
                b[i] -= s * v[i];
            }
        }
        diag[j] = a[j * k + j];
    }

    let rank = diag.iter().filter(|d| libm::fabs(**d) >= tol && **d != 0.0).count();
    if rank < k {
        return Err(Error::RankDeficient { rank, cols: k });
    }

    let mut r = vec![0.0; k * k];
    for i in 0..k {
        for j in i..k {
            r[i * k + j] = a[i * k + j];
        }
    }

    let mut beta = vec![0.0; k];
    for i in (0..k).rev() {
        let mut acc = b[i];
        for j in i + 1..k {
            acc -= r[i * k + j] * beta[j];
        }
        beta[i] = acc / r[i * k + i];
    }

    let fitted = x.mul_vec(&beta);
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(yi, fi)| yi - fi).collect();
    let rss = residuals.iter().map(|e| e * e).sum();

    Ok(OlsFit {
        coefficients: beta,
        residuals,
        rss,
        n_rows: m,
        n_cols: k,
        rank,
        r,
    })
}
