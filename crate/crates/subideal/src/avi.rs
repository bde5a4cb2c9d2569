//! Approximate border basis engines for empirical point sets: the
//! threshold-driven vanishing loop for plain border bases, its subideal
//! variant over F-terms, the a-posteriori error bounds, and the
//! S-polynomial check for approximate bases.

use nalgebra::DMatrix;

use crate::bm::{degree_candidates, DegreeTrace};
use crate::division::{spoly_residuals, SubidealBorderPrebasis};
use crate::error::{Error, Result};
use crate::linalg::{apker_with_values, stabilized_rref};
use crate::order::{FOrderIdeal, FTerm, OrderIdeal};
use crate::points::{evaluate, PointSet};
use crate::poly::Polynomial;
use crate::term::{Term, TermOrdering};

/// The two tolerances of the approximate engines: `epsilon` bounds the
/// singular values treated as vanishing, `tau` guards the pivot search
/// of the stabilized echelon form. Requires `epsilon > tau > 0`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Thresholds {
    epsilon: f64,
    tau: f64,
}

impl Thresholds {
    pub fn new(epsilon: f64, tau: f64) -> Result<Self> {
        if epsilon.is_finite() && tau.is_finite() && epsilon > tau && tau > 0.0 {
            Ok(Thresholds { epsilon, tau })
        } else {
            Err(Error::InvalidThresholds)
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

/// A-posteriori bounds for an approximate basis: every basis element
/// evaluates below `delta` on the points, and the basis passes the
/// S-polynomial check at tolerance `eta`. `eta` is undefined when the
/// smallest marked coefficient `gamma` is zero.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ErrorBounds {
    pub delta: f64,
    pub eta: Option<f64>,
    pub gamma: f64,
}

/// Bounds from the shape data: `mu` order ideal elements, `nu` border
/// elements, `s` points, and the smallest marked coefficient `gamma`.
pub fn bounds(th: &Thresholds, mu: usize, nu: usize, s: usize, gamma: f64) -> ErrorBounds {
    if nu == 0 {
        return ErrorBounds {
            delta: 0.0,
            eta: Some(0.0),
            gamma,
        };
    }
    let (eps, tau) = (th.epsilon, th.tau);
    let (muf, nuf, sf) = (mu as f64, nu as f64, s as f64);
    let delta = eps * nuf.sqrt() + tau * nuf * (muf + nuf) * sf.sqrt();
    let eta = if gamma > 0.0 {
        Some(2.0 * delta + 2.0 * nuf * delta * delta / (gamma * eps) + 2.0 * nuf * delta * sf.sqrt() / eps)
    } else {
        None
    };
    ErrorBounds { delta, eta, gamma }
}

/// One S-polynomial residual of the approximate check: the pair of
/// border positions, the norm of the S-polynomial itself, and the norm
/// of its normal remainder after border division.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SPolyResidual {
    pub pair: (usize, usize),
    pub spoly_norm: f64,
    pub remainder_norm: f64,
}

/// Outcome of the approximate basis check.
#[derive(Clone, PartialEq, Debug)]
pub struct ApproxCheckReport {
    pub ok: bool,
    pub residuals: Vec<SPolyResidual>,
    pub max_remainder: f64,
}

/// Checks an approximate prebasis: for every neighboring border pair the
/// S-polynomial of the monic-scaled elements is divided by the prebasis,
/// and the check passes when every normal remainder norm stays below
/// `epsilon`.
pub fn check_approx_basis(
    g: &SubidealBorderPrebasis<f64>,
    epsilon: f64,
) -> Result<ApproxCheckReport> {
    let mut residuals = Vec::new();
    let mut max_remainder = 0.0f64;
    for (i, j, spoly_norm, remainder_norm) in spoly_residuals(g)? {
        max_remainder = max_remainder.max(remainder_norm);
        residuals.push(SPolyResidual {
            pair: (i, j),
            spoly_norm,
            remainder_norm,
        });
    }
    Ok(ApproxCheckReport {
        ok: max_remainder < epsilon,
        residuals,
        max_remainder,
    })
}

/// One raw basis element, a unit row of a stabilized echelon form: the
/// element is `lead_coeff * lead + sum c * ft`. A raw tail may touch the
/// marked F-term of another element; the packaged prebasis eliminates
/// those entries, the raw rows are kept verbatim.
#[derive(Clone, PartialEq, Debug)]
pub struct RawGElement {
    pub lead: FTerm,
    pub lead_coeff: f64,
    pub tail: Vec<(FTerm, f64)>,
}

/// Output of the approximate engines. `raw_elements` are the unit rows
/// of the stabilized echelon forms in discovery order; `basis` is the
/// reduced prebasis over the border, with tails confined to the F-order
/// ideal; `elements_unit` holds the raw elements expanded and rescaled
/// to Euclidean coefficient norm 1. `singular_values` logs the spectrum
/// of every approximate kernel computation in order.
#[derive(Clone, PartialEq, Debug)]
pub struct ApproxBasisReport {
    pub order_ideal: FOrderIdeal<f64>,
    pub basis: SubidealBorderPrebasis<f64>,
    pub raw_elements: Vec<RawGElement>,
    pub elements_unit: Vec<Polynomial<f64>>,
    pub extras: Vec<Polynomial<f64>>,
    pub bounds: ErrorBounds,
    pub singular_values: Vec<Vec<f64>>,
    pub check: ApproxCheckReport,
    pub trace: Vec<DegreeTrace>,
    pub warnings: Vec<String>,
}

pub(crate) fn matrix_from_columns(nrows: usize, cols: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(nrows, cols.len(), |r, c| cols[c][r])
}

/// Re-establishes the near-independence of the order ideal evaluations:
/// as long as the evaluation matrix has an approximate kernel vector,
/// its stabilized echelon rows are moved into the basis and their pivot
/// columns are removed from the order ideal.
fn prune_order_ideal(
    of_list: &mut Vec<FTerm>,
    m_cols: &mut Vec<Vec<f64>>,
    raw: &mut Vec<RawGElement>,
    passes: &mut Vec<Vec<f64>>,
    warnings: &mut Vec<String>,
    s: usize,
    th: &Thresholds,
) {
    loop {
        if of_list.is_empty() {
            return;
        }
        let m = matrix_from_columns(s, m_cols);
        let (b, values) = apker_with_values(&m, th.epsilon);
        passes.push(values);
        if b.nrows() == 0 {
            return;
        }
        let (c, pivots) = stabilized_rref(&b, th.tau);
        if pivots.is_empty() {
            warnings.push(
                "order ideal evaluations stay nearly dependent but every pivot \
                 candidate falls below tau"
                    .into(),
            );
            return;
        }
        for (i, &p) in pivots.iter().enumerate() {
            let mut tail = Vec::new();
            for j in 0..c.ncols() {
                if j != p && c[(i, j)] != 0.0 {
                    tail.push((of_list[j].clone(), c[(i, j)]));
                }
            }
            raw.push(RawGElement {
                lead: of_list[p].clone(),
                lead_coeff: c[(i, p)],
                tail,
            });
        }
        let mut ps = pivots.clone();
        ps.sort_unstable();
        for &p in ps.iter().rev() {
            of_list.remove(p);
            m_cols.remove(p);
        }
    }
}

/// Packages raw elements over the finished F-order ideal, computes the
/// bounds and runs the S-polynomial check.
fn package_float(
    of: FOrderIdeal<f64>,
    ord: &TermOrdering,
    raw: Vec<RawGElement>,
    passes: Vec<Vec<f64>>,
    trace: Vec<DegreeTrace>,
    warnings: Vec<String>,
    s: usize,
    th: &Thresholds,
) -> Result<ApproxBasisReport> {
    let border = of.border(ord);
    let mu = of.len();
    let nu = border.len();
    let mut lead = vec![0.0f64; nu];
    let mut table: Vec<Option<Vec<f64>>> = vec![None; nu];
    let mut extras = Vec::new();
    for (e, el) in raw.iter().enumerate() {
        // A raw tail may contain the marked F-term of a sibling element.
        // Subtracting the matching multiple of that sibling confines the
        // tail to the F-order ideal without leaving the ideal; the
        // echelon structure makes these substitutions acyclic.
        let mut row = vec![0.0f64; mu];
        let mut work = el.tail.clone();
        let mut resolved = true;
        let mut guard = 0usize;
        while let Some((ft, c)) = work.pop() {
            if c == 0.0 {
                continue;
            }
            if let Some(k) = of.position(&ft) {
                row[k] -= c;
                continue;
            }
            match raw.iter().position(|other| other.lead == ft) {
                Some(k) if k != e => {
                    let f = c / raw[k].lead_coeff;
                    for (ft2, c2) in &raw[k].tail {
                        work.push((ft2.clone(), -f * c2));
                    }
                }
                _ => {
                    resolved = false;
                    break;
                }
            }
            guard += 1;
            if guard > 10_000 {
                resolved = false;
                break;
            }
        }
        match border.fterms().iter().position(|b| *b == el.lead) {
            Some(j) if resolved && table[j].is_none() => {
                lead[j] = el.lead_coeff;
                table[j] = Some(row);
            }
            _ => {
                let mut p = of.expand(&el.lead).scalar_mul(&el.lead_coeff);
                for (ft, c) in &el.tail {
                    p = p.add(&of.expand(ft).scalar_mul(c));
                }
                extras.push(p);
            }
        }
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(j, row)| {
            row.ok_or_else(|| {
                Error::DegenerateBasis(format!(
                    "border F-term {} has no basis element",
                    border.fterms()[j]
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let basis = SubidealBorderPrebasis::new(of.clone(), ord.clone(), lead, table)?;
    // gamma is taken over the unit-normalized reduced rows, where each
    // element carries exactly one marked border F-term.
    let gamma = (0..nu)
        .map(|j| {
            let l = basis.lead_coeff(j);
            let norm = (l * l
                + basis.tail_coeffs(j).iter().map(|c| c * c).sum::<f64>())
            .sqrt();
            l.abs() / norm
        })
        .fold(f64::INFINITY, f64::min);
    let gamma = if nu == 0 { 0.0 } else { gamma };
    let bounds = bounds(th, mu, nu, s, gamma);
    let check = check_approx_basis(&basis, th.epsilon())?;
    let elements_unit = raw
        .iter()
        .map(|el| {
            let mut p = of.expand(&el.lead).scalar_mul(&el.lead_coeff);
            for (ft, c) in &el.tail {
                p = p.add(&of.expand(ft).scalar_mul(c));
            }
            let n2 = p.norm2();
            p.scalar_mul(&(1.0 / n2))
        })
        .collect();
    Ok(ApproxBasisReport {
        order_ideal: of,
        basis,
        raw_elements: raw,
        elements_unit,
        extras,
        bounds,
        singular_values: passes,
        check,
        trace,
        warnings,
    })
}

fn validate_points(x: &PointSet<f64>, ord: &TermOrdering) -> Result<()> {
    if ord.nvars() != x.nvars() {
        return Err(Error::DimensionMismatch(
            "ordering and points disagree on the indeterminate count".into(),
        ));
    }
    x.check_unit_box()
}

/// Rescales a polynomial to 1-norm 1.
pub fn normalize_l1(f: &Polynomial<f64>) -> Result<Polynomial<f64>> {
    let n1 = f.norm1();
    if n1 == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f.scalar_mul(&(1.0 / n1)))
}

fn validate_generators(x: &PointSet<f64>, gens: &[Polynomial<f64>]) -> Result<()> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    for (i, f) in gens.iter().enumerate() {
        if f.is_zero() {
            return Err(Error::ZeroGenerator(i));
        }
        if f.nvars() != x.nvars() {
            return Err(Error::DimensionMismatch(
                "generator and points disagree on the indeterminate count".into(),
            ));
        }
        if (f.norm1() - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnitary(i));
        }
    }
    Ok(())
}

/// Approximate vanishing loop for plain border bases: degree by degree,
/// the candidate border terms are evaluated, the approximate kernel of
/// the joint evaluation matrix is brought to stabilized echelon form,
/// pivot rows become basis elements and the remaining candidates extend
/// the order ideal.
pub fn avi(x: &PointSet<f64>, ord: &TermOrdering, th: &Thresholds) -> Result<ApproxBasisReport> {
    validate_points(x, ord)?;
    let n = x.nvars();
    let s = x.len();
    let one = Polynomial::one(n);
    let mut warnings = Vec::new();
    let mut of_list: Vec<FTerm> = vec![FTerm::new(Term::one(n), 0)];
    let mut m_cols: Vec<Vec<f64>> = vec![evaluate(&one, x)?];
    let mut raw: Vec<RawGElement> = Vec::new();
    let mut passes: Vec<Vec<f64>> = Vec::new();
    let mut trace = Vec::new();
    prune_order_ideal(
        &mut of_list,
        &mut m_cols,
        &mut raw,
        &mut passes,
        &mut warnings,
        s,
        th,
    );
    let cap = s as i64 + 1;
    let mut d: i64 = 0;
    loop {
        d += 1;
        if d > cap {
            return Err(Error::DegreeCap(cap as usize));
        }
        let oi = OrderIdeal::new(of_list.iter().map(|ft| ft.term.clone()).collect())
            .map_err(|_| Error::DegenerateBasis("order ideal lost divisor closure".into()))?;
        let l: Vec<FTerm> = oi
            .border(n, ord)
            .into_iter()
            .filter(|t| t.degree() as i64 == d)
            .map(|t| FTerm::new(t, 0))
            .collect();
        if l.is_empty() {
            break;
        }
        degree_block(
            x,
            &[one.clone()],
            l,
            d,
            &mut of_list,
            &mut m_cols,
            &mut raw,
            &mut passes,
            &mut trace,
            &mut warnings,
            th,
        )?;
    }
    let of = FOrderIdeal::new(vec![one], of_list)
        .map_err(|_| Error::DegenerateBasis("order ideal lost divisor closure".into()))?;
    package_float(of, ord, raw, passes, trace, warnings, s, th)
}

/// Subideal approximate vanishing loop: like [`avi`], but the candidates
/// are F-terms over the unitary generators, so the computed elements
/// stay inside the generated ideal.
pub fn subideal_avi(
    x: &PointSet<f64>,
    ord: &TermOrdering,
    gens: Vec<Polynomial<f64>>,
    th: &Thresholds,
) -> Result<ApproxBasisReport> {
    validate_points(x, ord)?;
    validate_generators(x, &gens)?;
    let n = x.nvars();
    let s = x.len();
    let mut warnings = Vec::new();
    let degs: Vec<i64> = gens
        .iter()
        .map(|f| f.total_degree().unwrap_or(0) as i64)
        .collect();
    let min_deg = *degs.iter().min().expect("nonempty");
    let max_deg = *degs.iter().max().expect("nonempty");
    let cap = s as i64 + max_deg + 1;
    let mut of_list: Vec<FTerm> = Vec::new();
    let mut m_cols: Vec<Vec<f64>> = Vec::new();
    let mut raw: Vec<RawGElement> = Vec::new();
    let mut passes: Vec<Vec<f64>> = Vec::new();
    let mut trace = Vec::new();
    let mut d = min_deg - 1;
    loop {
        d += 1;
        if d > cap {
            return Err(Error::DegreeCap(cap as usize));
        }
        let l = degree_candidates(&gens, &of_list, d, n, ord);
        if l.is_empty() {
            if d >= max_deg {
                break;
            }
            trace.push(DegreeTrace {
                degree: d,
                candidates: Vec::new(),
                kernel_dim: 0,
                pivot_columns: Vec::new(),
                new_order_ideal: Vec::new(),
            });
            continue;
        }
        degree_block(
            x,
            &gens,
            l,
            d,
            &mut of_list,
            &mut m_cols,
            &mut raw,
            &mut passes,
            &mut trace,
            &mut warnings,
            th,
        )?;
    }
    let of = FOrderIdeal::new(gens, of_list)
        .map_err(|_| Error::DegenerateBasis("F-order ideal lost divisor closure".into()))?;
    package_float(of, ord, raw, passes, trace, warnings, s, th)
}

/// One degree block shared by both loops: builds the joint evaluation
/// matrix of the candidates and the order ideal, turns approximate
/// kernel rows into raw elements, prepends the non-pivot candidates to
/// the order ideal, and then prunes the order ideal evaluations back to
/// near-independence.
#[allow(clippy::too_many_arguments)]
fn degree_block(
    x: &PointSet<f64>,
    gens: &[Polynomial<f64>],
    l: Vec<FTerm>,
    d: i64,
    of_list: &mut Vec<FTerm>,
    m_cols: &mut Vec<Vec<f64>>,
    raw: &mut Vec<RawGElement>,
    passes: &mut Vec<Vec<f64>>,
    trace: &mut Vec<DegreeTrace>,
    warnings: &mut Vec<String>,
    th: &Thresholds,
) -> Result<()> {
    let s = x.len();
    let mut cols: Vec<Vec<f64>> = l
        .iter()
        .map(|ft| evaluate(&gens[ft.gen].mul_term(&ft.term), x))
        .collect::<Result<_>>()?;
    let new_cols = cols.clone();
    cols.extend(m_cols.iter().cloned());
    let a = matrix_from_columns(s, &cols);
    let (b, values) = apker_with_values(&a, th.epsilon);
    passes.push(values);
    let kernel_dim = b.nrows();
    let (c, pivots) = stabilized_rref(&b, th.tau);
    if kernel_dim > 0 && pivots.is_empty() {
        warnings.push(format!(
            "degree {d}: an approximate kernel vector has no entry above tau"
        ));
    }
    let mut removed_of: Vec<usize> = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        let mut tail = Vec::new();
        for j in 0..c.ncols() {
            if j != p && c[(i, j)] != 0.0 {
                let ft = if j < l.len() {
                    l[j].clone()
                } else {
                    of_list[j - l.len()].clone()
                };
                tail.push((ft, c[(i, j)]));
            }
        }
        let lead = if p < l.len() {
            l[p].clone()
        } else {
            removed_of.push(p - l.len());
            of_list[p - l.len()].clone()
        };
        raw.push(RawGElement {
            lead,
            lead_coeff: c[(i, p)],
            tail,
        });
    }
    removed_of.sort_unstable();
    for &k in removed_of.iter().rev() {
        of_list.remove(k);
        m_cols.remove(k);
    }
    let mut new_of = Vec::new();
    for (j, ft) in l.iter().enumerate() {
        if !pivots.contains(&j) {
            new_of.push(ft.clone());
        }
    }
    for (j, ft) in l.iter().enumerate().rev() {
        if !pivots.contains(&j) {
            of_list.insert(0, ft.clone());
            m_cols.insert(0, new_cols[j].clone());
        }
    }
    trace.push(DegreeTrace {
        degree: d,
        candidates: l,
        kernel_dim,
        pivot_columns: pivots,
        new_order_ideal: new_of,
    });
    prune_order_ideal(of_list, m_cols, raw, passes, warnings, s, th);
    Ok(())
}
