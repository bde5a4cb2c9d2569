//! Exact border basis engines: the blockwise Buchberger-Moeller loop for
//! plain border bases, its subideal variant over F-terms, and the greedy
//! extension of a plain border basis to a subideal one.

use num::traits::Zero;

use crate::division::{DivisionTieBreak, SubidealBorderPrebasis};
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::order::{FOrderIdeal, FTerm, OrderIdeal};
use crate::points::{evaluate, PointSet};
use crate::poly::Polynomial;
use crate::scalar::{Coeff, Rat};
use crate::term::{Term, TermOrdering};

/// Log of one degree block: the candidate list, the kernel dimension and
/// the pivot positions within the candidate columns, and the candidates
/// that joined the order ideal.
#[derive(Clone, PartialEq, Debug)]
pub struct DegreeTrace {
    pub degree: i64,
    pub candidates: Vec<FTerm>,
    pub kernel_dim: usize,
    pub pivot_columns: Vec<usize>,
    pub new_order_ideal: Vec<FTerm>,
}

/// Output of the exact engines. The F-order ideal keeps the discovery
/// order (new elements are prepended); the prebasis border is canonical.
/// `extras` holds basis elements whose marked F-term fell outside the
/// final border; that happens only when a whole generator is rejected.
#[derive(Clone, PartialEq, Debug)]
pub struct BMResult {
    pub order_ideal: FOrderIdeal<Rat>,
    pub basis: SubidealBorderPrebasis<Rat>,
    pub extras: Vec<Polynomial<Rat>>,
    pub trace: Vec<DegreeTrace>,
    pub warnings: Vec<String>,
}

fn duplicate_point_warning<C: Coeff>(x: &PointSet<C>) -> Option<String> {
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if x.point(i) == x.point(j) {
                return Some(format!(
                    "points {i} and {j} coincide; they only lower the rank"
                ));
            }
        }
    }
    None
}

/// One raw basis element: the marked F-term and the trailing summands
/// with the row coefficients as they appear in the echelon form. The
/// element is `lead + sum c * ft`.
struct RawElement {
    lead: FTerm,
    tail: Vec<(FTerm, Rat)>,
}

/// Packages raw elements over a finished F-order ideal into a prebasis
/// with the canonical border numbering, spilling unmatched leads into
/// expanded extra polynomials.
fn package(
    of: FOrderIdeal<Rat>,
    ord: &TermOrdering,
    raw: Vec<RawElement>,
    trace: Vec<DegreeTrace>,
    warnings: Vec<String>,
) -> Result<BMResult> {
    let border = of.border(ord);
    let mu = of.len();
    let mut table: Vec<Option<Vec<Rat>>> = vec![None; border.len()];
    let mut extras = Vec::new();
    for el in raw {
        let mut row = vec![Rat::zero(); mu];
        let mut resolved = true;
        for (ft, c) in &el.tail {
            match of.position(ft) {
                Some(k) => row[k] -= c.clone(),
                None => resolved = false,
            }
        }
        match border.fterms().iter().position(|b| *b == el.lead) {
            Some(j) if resolved => {
                if table[j].is_some() {
                    return Err(Error::DegenerateBasis(format!(
                        "two basis elements marked by {}",
                        el.lead
                    )));
                }
                table[j] = Some(row);
            }
            _ => {
                let mut p = of.expand(&el.lead);
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
    let basis = SubidealBorderPrebasis::monic(of.clone(), ord.clone(), table)?;
    Ok(BMResult {
        order_ideal: of,
        basis,
        extras,
        trace,
        warnings,
    })
}

/// Blockwise Buchberger-Moeller loop: computes the order ideal of terms
/// whose evaluation vectors on `x` are linearly independent and the
/// monic border basis of the vanishing ideal, degree by degree.
pub fn bm_border_basis(x: &PointSet<Rat>, ord: &TermOrdering) -> Result<BMResult> {
    let n = x.nvars();
    if ord.nvars() != n {
        return Err(Error::DimensionMismatch(
            "ordering and points disagree on the indeterminate count".into(),
        ));
    }
    let mut warnings = Vec::new();
    if let Some(w) = duplicate_point_warning(x) {
        warnings.push(w);
    }
    let one = Polynomial::one(n);
    let mut o: Vec<Term> = vec![Term::one(n)];
    let mut m_cols: Vec<Vec<Rat>> = vec![evaluate(&one, x)?];
    let mut raw: Vec<RawElement> = Vec::new();
    let mut trace = Vec::new();
    let cap = x.len() as i64 + 1;
    let mut d: i64 = 0;
    loop {
        d += 1;
        if d > cap {
            return Err(Error::DegreeCap(cap as usize));
        }
        let oi = OrderIdeal::new(o.clone()).expect("order ideal stays divisor closed");
        let l: Vec<Term> = oi
            .border(n, ord)
            .into_iter()
            .filter(|t| t.degree() as i64 == d)
            .collect();
        if l.is_empty() {
            break;
        }
        let mut cols: Vec<Vec<Rat>> = l
            .iter()
            .map(|t| evaluate(&Polynomial::monomial(n, t.clone(), Rat::from_int(1)), x))
            .collect::<Result<_>>()?;
        let new_cols = cols.clone();
        cols.extend(m_cols.iter().cloned());
        let a = ExactMatrix::from_columns(x.len(), &cols);
        let kernel = a.kernel_basis();
        let (c, pivots) = kernel.rref();
        if pivots.iter().any(|&p| p >= l.len()) {
            return Err(Error::DegenerateBasis(
                "pivot fell on an order ideal column".into(),
            ));
        }
        for (i, &j) in pivots.iter().enumerate() {
            let mut tail = Vec::new();
            for j2 in 0..cols.len() {
                if j2 == j || c.get(i, j2).is_zero() {
                    continue;
                }
                let t = if j2 < l.len() {
                    l[j2].clone()
                } else {
                    o[j2 - l.len()].clone()
                };
                tail.push((FTerm::new(t, 0), c.get(i, j2).clone()));
            }
            raw.push(RawElement {
                lead: FTerm::new(l[j].clone(), 0),
                tail,
            });
        }
        let mut new_of = Vec::new();
        for (j, t) in l.iter().enumerate() {
            if !pivots.contains(&j) {
                new_of.push(FTerm::new(t.clone(), 0));
            }
        }
        for (j, t) in l.iter().enumerate().rev() {
            if !pivots.contains(&j) {
                o.insert(0, t.clone());
                m_cols.insert(0, new_cols[j].clone());
            }
        }
        trace.push(DegreeTrace {
            degree: d,
            candidates: l.iter().map(|t| FTerm::new(t.clone(), 0)).collect(),
            kernel_dim: kernel.nrows(),
            pivot_columns: pivots,
            new_order_ideal: new_of,
        });
    }
    let of = FOrderIdeal::new(
        vec![one],
        o.into_iter().map(|t| FTerm::new(t, 0)).collect(),
    )?;
    package(of, ord, raw, trace, warnings)
}

/// Candidate F-terms of total degree `d`: each generator once at its own
/// degree, plus the degree-`d` part of the border of the current F-order
/// ideal. Sorted by decreasing leading term, ties by ascending generator
/// index, then ascending term factor.
pub(crate) fn degree_candidates<C: Coeff>(
    gens: &[Polynomial<C>],
    of_list: &[FTerm],
    d: i64,
    nvars: usize,
    ord: &TermOrdering,
) -> Vec<FTerm> {
    let mut l: Vec<FTerm> = Vec::new();
    for (i, f) in gens.iter().enumerate() {
        let ft = FTerm::new(Term::one(nvars), i);
        if f.total_degree().unwrap_or(0) as i64 == d && !of_list.contains(&ft) {
            l.push(ft);
        }
    }
    for i in 0..gens.len() {
        let terms: Vec<Term> = of_list
            .iter()
            .filter(|ft| ft.gen == i)
            .map(|ft| ft.term.clone())
            .collect();
        let deg_f = gens[i].total_degree().unwrap_or(0) as i64;
        let oi = OrderIdeal::new(terms).expect("per generator sets stay divisor closed");
        for b in oi.border(nvars, ord) {
            if b.degree() as i64 + deg_f == d {
                l.push(FTerm::new(b, i));
            }
        }
    }
    l.sort_by(|a, b| {
        let la = gens[a.gen].mul_term(&a.term);
        let lb = gens[b.gen].mul_term(&b.term);
        let (ta, _) = la.leading_term(ord).expect("nonzero");
        let (tb, _) = lb.leading_term(ord).expect("nonzero");
        ord.cmp(tb, ta)
            .then(a.gen.cmp(&b.gen))
            .then_with(|| ord.cmp(&a.term, &b.term))
    });
    l
}

/// Subideal Buchberger-Moeller loop over F-terms: computes an F-order
/// ideal whose residue classes are a basis of `J/(I_X cap J)` and the
/// subideal border basis of the vanishing ideal of `x` inside
/// `J = <gens>`.
pub fn subideal_bm(
    x: &PointSet<Rat>,
    ord: &TermOrdering,
    gens: Vec<Polynomial<Rat>>,
) -> Result<BMResult> {
    let n = x.nvars();
    if ord.nvars() != n {
        return Err(Error::DimensionMismatch(
            "ordering and points disagree on the indeterminate count".into(),
        ));
    }
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    for (i, f) in gens.iter().enumerate() {
        if f.is_zero() {
            return Err(Error::ZeroGenerator(i));
        }
        if f.nvars() != n {
            return Err(Error::DimensionMismatch(
                "generator and points disagree on the indeterminate count".into(),
            ));
        }
    }
    let mut warnings = Vec::new();
    if let Some(w) = duplicate_point_warning(x) {
        warnings.push(w);
    }
    let degs: Vec<i64> = gens
        .iter()
        .map(|f| f.total_degree().unwrap_or(0) as i64)
        .collect();
    let min_deg = *degs.iter().min().expect("nonempty");
    let max_deg = *degs.iter().max().expect("nonempty");
    let cap = x.len() as i64 + max_deg + 1;
    let mut of_list: Vec<FTerm> = Vec::new();
    let mut m_cols: Vec<Vec<Rat>> = Vec::new();
    let mut raw: Vec<RawElement> = Vec::new();
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
        let mut cols: Vec<Vec<Rat>> = l
            .iter()
            .map(|ft| evaluate(&gens[ft.gen].mul_term(&ft.term), x))
            .collect::<Result<_>>()?;
        let new_cols = cols.clone();
        cols.extend(m_cols.iter().cloned());
        let a = ExactMatrix::from_columns(x.len(), &cols);
        let kernel = a.kernel_basis();
        let (c, pivots) = kernel.rref();
        if pivots.iter().any(|&p| p >= l.len()) {
            return Err(Error::DegenerateBasis(
                "pivot fell on an F-order ideal column".into(),
            ));
        }
        for (i, &j) in pivots.iter().enumerate() {
            let mut tail = Vec::new();
            for j2 in 0..cols.len() {
                if j2 == j || c.get(i, j2).is_zero() {
                    continue;
                }
                let ft = if j2 < l.len() {
                    l[j2].clone()
                } else {
                    of_list[j2 - l.len()].clone()
                };
                tail.push((ft, c.get(i, j2).clone()));
            }
            raw.push(RawElement {
                lead: l[j].clone(),
                tail,
            });
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
            kernel_dim: kernel.nrows(),
            pivot_columns: pivots,
            new_order_ideal: new_of,
        });
    }
    let of = FOrderIdeal::new(gens, of_list)?;
    package(of, ord, raw, trace, warnings)
}

/// Solves `sum_k c_k cols[k] = rhs` exactly; `None` if inconsistent.
fn solve_in_span(cols: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let mut all = cols.to_vec();
    all.push(rhs.to_vec());
    let a = ExactMatrix::from_columns(rhs.len(), &all);
    let (r, pivots) = a.rref();
    let mut sol = vec![Rat::zero(); cols.len()];
    for (i, &p) in pivots.iter().enumerate() {
        if p == cols.len() {
            return None;
        }
        sol[p] = r.get(i, cols.len()).clone();
    }
    Some(sol)
}

/// Extends a plain border basis of an ideal `I` (the single generator
/// must be 1) to a subideal border basis inside `J = <gens>`: scan the
/// products `t * f_i` with `t` ascending in the ordering, keep those
/// whose normal forms modulo `I` stay linearly independent, and prune
/// every multiple of a rejected term for the same generator. The border
/// elements are then rewritten over the accepted F-order ideal.
pub fn extend_border_basis_to_subideal(
    classical: &SubidealBorderPrebasis<Rat>,
    gens: Vec<Polynomial<Rat>>,
) -> Result<(FOrderIdeal<Rat>, SubidealBorderPrebasis<Rat>)> {
    let n = classical.order_ideal().nvars();
    if classical.order_ideal().generators() != [Polynomial::one(n)] {
        return Err(Error::DimensionMismatch(
            "expected a plain border basis with the single generator 1".into(),
        ));
    }
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    for (i, f) in gens.iter().enumerate() {
        if f.is_zero() {
            return Err(Error::ZeroGenerator(i));
        }
    }
    let ord = classical.ordering().clone();
    let nf = |p: &Polynomial<Rat>| -> Result<Vec<Rat>> {
        Ok(classical
            .divide(&[p.clone()], DivisionTieBreak::default())?
            .remainder_coeffs)
    };
    // Ascending degree so divisors come first, largest term first within
    // a degree.
    let mut scan: Vec<Term> = classical.order_ideal().gen_terms(0);
    scan.sort_by(|a, b| a.degree().cmp(&b.degree()).then(ord.cmp(b, a)));
    let mut accepted: Vec<FTerm> = Vec::new();
    let mut accepted_nf: Vec<Vec<Rat>> = Vec::new();
    let mut rejected: Vec<Vec<Term>> = vec![Vec::new(); gens.len()];
    for t in &scan {
        for (i, f) in gens.iter().enumerate() {
            if rejected[i].iter().any(|r| r.divides(t)) {
                continue;
            }
            let v = nf(&f.mul_term(t))?;
            let mut stacked = accepted_nf.clone();
            stacked.push(v.clone());
            let m = ExactMatrix::new(stacked);
            if m.rank() == accepted_nf.len() + 1 {
                accepted.push(FTerm::new(t.clone(), i));
                accepted_nf.push(v);
            } else {
                rejected[i].push(t.clone());
            }
        }
    }
    let of = FOrderIdeal::new(gens.clone(), accepted)?;
    let border = of.border(&ord);
    let mut table = Vec::with_capacity(border.len());
    for b in border.fterms() {
        let v = nf(&gens[b.gen].mul_term(&b.term))?;
        let row = solve_in_span(&accepted_nf, &v).ok_or_else(|| {
            Error::DegenerateBasis(format!(
                "border element {b} is not spanned by the F-order ideal"
            ))
        })?;
        table.push(row);
    }
    let basis = SubidealBorderPrebasis::monic(of.clone(), ord, table)?;
    Ok((of, basis))
}
