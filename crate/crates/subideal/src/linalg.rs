//! Linear algebra kernels: exact kernel bases and reduced row echelon
//! form over the rationals, and their numerical counterparts (SVD-based
//! approximate kernels and tau-stabilized row echelon form).

use nalgebra::DMatrix;
use num::traits::Zero;

use crate::scalar::{Coeff, Rat};

/// A dense matrix of exact rationals.
#[derive(Clone, PartialEq, Debug)]
pub struct ExactMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<Vec<Rat>>,
}

impl ExactMatrix {
    pub fn new(data: Vec<Vec<Rat>>) -> Self {
        let nrows = data.len();
        let ncols = data.first().map_or(0, |r| r.len());
        assert!(data.iter().all(|r| r.len() == ncols), "ragged matrix");
        ExactMatrix { nrows, ncols, data }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        ExactMatrix {
            nrows,
            ncols,
            data: vec![vec![Rat::zero(); ncols]; nrows],
        }
    }

    pub fn from_columns(ncols_rows: usize, cols: &[Vec<Rat>]) -> Self {
        let nrows = ncols_rows;
        let ncols = cols.len();
        let mut data = vec![Vec::with_capacity(ncols); nrows];
        for col in cols {
            assert_eq!(col.len(), nrows);
            for (i, v) in col.iter().enumerate() {
                data[i].push(v.clone());
            }
        }
        ExactMatrix { nrows, ncols, data }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i][j]
    }

    /// Reduced row echelon form: pivots normalized to 1, zeros above and
    /// below each pivot, strictly increasing pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.ncols {
            if row >= self.nrows {
                break;
            }
            let Some(prow) = (row..self.nrows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, prow);
            let inv = m[row][col].clone();
            for j in col..self.ncols {
                m[row][j] = m[row][j].clone() / inv.clone();
            }
            for r in 0..self.nrows {
                if r != row && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for j in col..self.ncols {
                        let sub = f.clone() * m[row][j].clone();
                        m[r][j] = m[r][j].clone() - sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (ExactMatrix::new(m), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A matrix whose rows are a basis of `{v : A v = 0}`; the row count
    /// is `ncols - rank`.
    pub fn kernel_basis(&self) -> ExactMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rat::zero(); self.ncols];
            v[f] = Rat::from_int(1);
            for (ri, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(ri, f).clone();
            }
            rows.push(v);
        }
        if rows.is_empty() {
            ExactMatrix {
                nrows: 0,
                ncols: self.ncols,
                data: vec![],
            }
        } else {
            ExactMatrix::new(rows)
        }
    }

    /// Row space equality, via ranks of stacked matrices.
    pub fn same_row_space(&self, other: &ExactMatrix) -> bool {
        if self.ncols != other.ncols {
            return false;
        }
        let mut stacked = self.data.clone();
        stacked.extend(other.data.clone());
        let stacked = if stacked.is_empty() {
            ExactMatrix {
                nrows: 0,
                ncols: self.ncols,
                data: vec![],
            }
        } else {
            ExactMatrix::new(stacked)
        };
        let r = stacked.rank();
        r == self.rank() && r == other.rank()
    }
}

/// Orthonormal basis of the approximate kernel of `a`: the right singular
/// vectors whose singular values are at most `eps` (inclusive), one per
/// row of the result.
pub fn apker(a: &DMatrix<f64>, eps: f64) -> DMatrix<f64> {
    apker_with_values(a, eps).0
}

/// Like [`apker`], additionally returning the full singular value
/// spectrum of the input.
pub fn apker_with_values(a: &DMatrix<f64>, eps: f64) -> (DMatrix<f64>, Vec<f64>) {
    let (nrows, ncols) = a.shape();
    if ncols == 0 {
        return (DMatrix::zeros(0, 0), Vec::new());
    }
    // Pad with zero rows so the full set of right singular vectors is
    // available even when ncols > nrows.
    let padded = if nrows < ncols {
        let mut p = DMatrix::zeros(ncols, ncols);
        p.view_mut((0, 0), (nrows, ncols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= eps)
        .collect();
    // Most-null directions last, matching descending singular values.
    keep.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .unwrap()
    });
    let mut out = DMatrix::zeros(keep.len(), ncols);
    for (r, &i) in keep.iter().enumerate() {
        out.set_row(r, &v_t.row(i));
    }
    let mut values: Vec<f64> = svd.singular_values.iter().cloned().collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (out, values)
}

/// Tau-stabilized row echelon form.
///
/// Columns are swept left to right; a column becomes a pivot when some
/// not-yet-pivoted row carries an entry of absolute value above `tau`
/// there (the bottom-most candidate row wins, which favors the most-null
/// singular direction when the input rows come from [`apker`]). The pivot
/// column is eliminated from the remaining unpivoted rows; earlier pivot
/// rows are left untouched. Output rows are rescaled to
/// unit Euclidean norm with a positive pivot, entries at or below `tau`
/// are cleared, and rows are listed by increasing pivot column.
///
/// Returns the matrix together with the pivot column of each row.
pub fn stabilized_rref(b: &DMatrix<f64>, tau: f64) -> (DMatrix<f64>, Vec<usize>) {
    let (nrows, ncols) = b.shape();
    let mut rows: Vec<Vec<f64>> = (0..nrows)
        .map(|i| b.row(i).iter().cloned().collect())
        .collect();
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; nrows];
    for col in 0..ncols {
        let Some(p) = (0..nrows)
            .rev()
            .find(|&r| pivot_of_row[r].is_none() && rows[r][col].abs() > tau)
        else {
            continue;
        };
        pivot_of_row[p] = Some(col);
        let pval = rows[p][col];
        let prow = rows[p].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != p && pivot_of_row[r].is_none() && row[col] != 0.0 {
                let f = row[col] / pval;
                for j in 0..ncols {
                    row[j] -= f * prow[j];
                }
                row[col] = 0.0;
            }
        }
    }
    let mut picked: Vec<(usize, Vec<f64>)> = rows
        .into_iter()
        .zip(pivot_of_row)
        .filter_map(|(row, p)| p.map(|c| (c, row)))
        .collect();
    picked.sort_by_key(|(c, _)| *c);
    let mut out = DMatrix::zeros(picked.len(), ncols);
    let mut pivots = Vec::with_capacity(picked.len());
    for (r, (pc, mut row)) in picked.into_iter().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            if j < pc || v.abs() <= tau {
                *v = 0.0;
            }
        }
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        let sign = if row[pc] < 0.0 { -1.0 } else { 1.0 };
        if norm > 0.0 {
            for v in row.iter_mut() {
                *v *= sign / norm;
            }
        }
        for (j, v) in row.iter().enumerate() {
            out[(r, j)] = *v;
        }
        pivots.push(pc);
    }
    (out, pivots)
}
