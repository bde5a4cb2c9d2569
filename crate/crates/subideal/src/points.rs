//! Finite point sets and evaluation matrices.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Coeff;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// A finite set of points in `K^n`, one row per point.
#[derive(Clone, PartialEq, Debug)]
pub struct PointSet<C> {
    names: Vec<String>,
    rows: Vec<Vec<C>>,
}

impl<C: Coeff> PointSet<C> {
    pub fn new(names: Vec<String>, rows: Vec<Vec<C>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let n = names.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} coordinates, expected {n}",
                    row.len()
                )));
            }
        }
        Ok(PointSet { names, rows })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn points(&self) -> &[Vec<C>] {
        &self.rows
    }

    pub fn point(&self, i: usize) -> &[C] {
        &self.rows[i]
    }

    /// Checks that every coordinate lies in `[-1, 1]`.
    pub fn check_unit_box(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.iter().any(|c| c.abs_f64() > 1.0) {
                return Err(Error::PointOutOfRange(i));
            }
        }
        Ok(())
    }

    /// Affine per-coordinate map of all coordinates into `[-1, 1]`.
    /// Returns the rescaled set together with `(offset, scale)` per
    /// coordinate, where `new = (old - offset) / scale`.
    pub fn auto_scaled(&self) -> (PointSet<f64>, Vec<(f64, f64)>) {
        let n = self.nvars();
        let mut maps = Vec::with_capacity(n);
        for j in 0..n {
            let vals: Vec<f64> = self.rows.iter().map(|r| r[j].to_f64()).collect();
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let offset = (lo + hi) / 2.0;
            let scale = if hi > lo { (hi - lo) / 2.0 } else { 1.0 };
            maps.push((offset, scale));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .map(|(j, c)| (c.to_f64() - maps[j].0) / maps[j].1)
                    .collect()
            })
            .collect();
        (
            PointSet {
                names: self.names.clone(),
                rows,
            },
            maps,
        )
    }
}

/// Evaluates `f` at every point of `X`, in row order.
pub fn evaluate<C: Coeff>(f: &Polynomial<C>, x: &PointSet<C>) -> Result<Vec<C>> {
    if f.nvars() != x.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial in {} indeterminates evaluated on points in {}",
            f.nvars(),
            x.nvars()
        )));
    }
    Ok(eval_rows(f, x))
}

#[cfg(feature = "parallel")]
fn eval_rows<C: Coeff>(f: &Polynomial<C>, x: &PointSet<C>) -> Vec<C> {
    x.points().par_iter().map(|p| f.evaluate_at(p)).collect()
}

#[cfg(not(feature = "parallel"))]
fn eval_rows<C: Coeff>(f: &Polynomial<C>, x: &PointSet<C>) -> Vec<C> {
    x.points().iter().map(|p| f.evaluate_at(p)).collect()
}

/// Column-major evaluation matrix of a family of polynomials.
pub fn evaluation_columns<C: Coeff>(polys: &[Polynomial<C>], x: &PointSet<C>) -> Vec<Vec<C>> {
    eval_columns_impl(polys, x)
}

#[cfg(feature = "parallel")]
fn eval_columns_impl<C: Coeff>(polys: &[Polynomial<C>], x: &PointSet<C>) -> Vec<Vec<C>> {
    polys
        .par_iter()
        .map(|f| x.points().iter().map(|p| f.evaluate_at(p)).collect())
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn eval_columns_impl<C: Coeff>(polys: &[Polynomial<C>], x: &PointSet<C>) -> Vec<Vec<C>> {
    polys
        .iter()
        .map(|f| x.points().iter().map(|p| f.evaluate_at(p)).collect())
        .collect()
}

/// Sequential reference for the evaluation matrix, kept available for
/// benchmark comparison regardless of the `parallel` feature.
pub fn evaluation_columns_seq<C: Coeff>(polys: &[Polynomial<C>], x: &PointSet<C>) -> Vec<Vec<C>> {
    polys
        .iter()
        .map(|f| x.points().iter().map(|p| f.evaluate_at(p)).collect())
        .collect()
}
