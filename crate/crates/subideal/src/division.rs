//! Border division: rewriting a representation of an ideal element
//! against a prebasis marked by border F-terms, yielding quotients and a
//! normal remainder supported inside the F-order ideal.

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::order::{Border, FOrderIdeal, FTerm};
use crate::points::{evaluate, PointSet};
use crate::poly::Polynomial;
use crate::scalar::{Coeff, Rat};
use crate::term::{Term, TermOrdering};
use num::traits::Zero;

/// Tie break for the term picked inside the reduction step. The remainder
/// of a genuine border basis does not depend on this choice; exposing both
/// makes that testable.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum DivisionTieBreak {
    #[default]
    LargestTerm,
    SmallestTerm,
}

/// A family `g_1, ..., g_nu` marked by the border of an F-order ideal:
///
/// `g_j = lead_j * b_j f_{beta_j} - sum_k table[j][k] * t_k f_{alpha_k}`
///
/// where `b_j f_{beta_j}` runs over the border and `t_k f_{alpha_k}` over
/// the F-order ideal, both in their canonical order.
#[derive(Clone, PartialEq, Debug)]
pub struct SubidealBorderPrebasis<C> {
    of: FOrderIdeal<C>,
    border: Border,
    ord: TermOrdering,
    lead: Vec<C>,
    table: Vec<Vec<C>>,
}

impl<C: Coeff> SubidealBorderPrebasis<C> {
    pub fn new(
        of: FOrderIdeal<C>,
        ord: TermOrdering,
        lead: Vec<C>,
        table: Vec<Vec<C>>,
    ) -> Result<Self> {
        let border = of.border(&ord);
        let (nu, mu) = (border.len(), of.len());
        if lead.len() != nu || table.len() != nu {
            return Err(Error::DimensionMismatch(format!(
                "expected {nu} marked elements, got {} leads and {} rows",
                lead.len(),
                table.len()
            )));
        }
        for row in &table {
            if row.len() != mu {
                return Err(Error::DimensionMismatch(format!(
                    "expected {mu} tail coefficients per element, got {}",
                    row.len()
                )));
            }
        }
        for (j, c) in lead.iter().enumerate() {
            if c.is_zero() {
                return Err(Error::NotUnitary(j));
            }
        }
        Ok(SubidealBorderPrebasis {
            of,
            border,
            ord,
            lead,
            table,
        })
    }

    /// Monic prebasis, every leading coefficient 1.
    pub fn monic(of: FOrderIdeal<C>, ord: TermOrdering, table: Vec<Vec<C>>) -> Result<Self> {
        let nu = of.border(&ord).len();
        Self::new(of, ord, vec![C::one(); nu], table)
    }

    pub fn order_ideal(&self) -> &FOrderIdeal<C> {
        &self.of
    }

    pub fn border(&self) -> &Border {
        &self.border
    }

    pub fn ordering(&self) -> &TermOrdering {
        &self.ord
    }

    pub fn len(&self) -> usize {
        self.border.len()
    }

    pub fn is_empty(&self) -> bool {
        self.border.is_empty()
    }

    pub fn lead_coeff(&self, j: usize) -> &C {
        &self.lead[j]
    }

    pub fn tail_coeffs(&self, j: usize) -> &[C] {
        &self.table[j]
    }

    /// The representation tuple `(p_1, ..., p_m)` of `g_j`.
    pub fn element_rep(&self, j: usize) -> Vec<Polynomial<C>> {
        let n = self.of.nvars();
        let mut rep = vec![Polynomial::zero(n); self.of.generators().len()];
        let b = &self.border.fterms()[j];
        rep[b.gen] = rep[b.gen].add(&Polynomial::monomial(
            n,
            b.term.clone(),
            self.lead[j].clone(),
        ));
        for (k, ft) in self.of.fterms().iter().enumerate() {
            let c = &self.table[j][k];
            if !c.is_zero() {
                rep[ft.gen] = rep[ft.gen].sub(&Polynomial::monomial(n, ft.term.clone(), c.clone()));
            }
        }
        rep
    }

    /// The polynomial value of `g_j`.
    pub fn element(&self, j: usize) -> Polynomial<C> {
        expand_rep(&self.of, &self.element_rep(j))
    }

    /// Divides the representation `(p_1, ..., p_m)` by the prebasis.
    pub fn divide(
        &self,
        rep: &[Polynomial<C>],
        tie: DivisionTieBreak,
    ) -> Result<DivisionResult<C>> {
        let m = self.of.generators().len();
        if rep.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "representation has {} entries, expected {m}",
                rep.len()
            )));
        }
        let n = self.of.nvars();
        let mut q: Vec<Polynomial<C>> = rep.to_vec();
        let mut h = vec![Polynomial::zero(n); self.border.len()];
        let mut steps = 0usize;
        let cap = 1_000_000usize;
        loop {
            // Index of the current tuple and its offending term, if any.
            let mut worst: Option<(u32, usize, Term)> = None;
            for (i, p) in q.iter().enumerate() {
                for (t, _) in p.terms() {
                    let k = self.of.of_index(&FTerm::new(t.clone(), i))?;
                    if k == 0 {
                        continue;
                    }
                    let better = match &worst {
                        None => true,
                        Some((wk, wi, wt)) => {
                            k > *wk
                                || (k == *wk
                                    && (i < *wi
                                        || (i == *wi && {
                                            let c = self.ord.cmp(t, wt);
                                            match tie {
                                                DivisionTieBreak::LargestTerm => c.is_gt(),
                                                DivisionTieBreak::SmallestTerm => c.is_lt(),
                                            }
                                        })))
                        }
                    };
                    if better {
                        worst = Some((k, i, t.clone()));
                    }
                }
            }
            let Some((ind, i, t)) = worst else {
                // Everything sits inside the F-order ideal.
                let coeffs = self
                    .of
                    .fterms()
                    .iter()
                    .map(|ft| q[ft.gen].coeff(&ft.term).cloned().unwrap_or_else(C::zero))
                    .collect();
                return Ok(DivisionResult {
                    quotients: h,
                    remainder_coeffs: coeffs,
                    steps,
                });
            };
            // Factor the term over a border element of the same generator.
            let j = self
                .border
                .fterms()
                .iter()
                .position(|b| {
                    b.gen == i
                        && b.term.divides(&t)
                        && t.degree() - b.term.degree() == ind - 1
                })
                .ok_or_else(|| {
                    Error::InconsistentPrebasis(format!(
                        "no border factorization for {}*f[{}]",
                        t,
                        i + 1
                    ))
                })?;
            let tp = self.border.fterms()[j].term.quotient_of(&t).expect("divides");
            let a = q[i].coeff(&t).expect("support term").clone();
            let factor = a.clone() / self.lead[j].clone();
            q[i] = q[i].sub(&Polynomial::monomial(n, t, a));
            for (k, ft) in self.of.fterms().iter().enumerate() {
                let c = self.table[j][k].clone();
                if !c.is_zero() {
                    q[ft.gen] = q[ft.gen].add(&Polynomial::monomial(
                        n,
                        tp.mul(&ft.term),
                        factor.clone() * c,
                    ));
                }
            }
            h[j] = h[j].add(&Polynomial::monomial(n, tp, factor));
            steps += 1;
            if steps > cap {
                return Err(Error::InconsistentPrebasis(
                    "division does not terminate".into(),
                ));
            }
        }
    }

    /// The normal remainder of a representation: the residue after
    /// division, expanded to a polynomial.
    pub fn normal_remainder(&self, rep: &[Polynomial<C>]) -> Result<Polynomial<C>> {
        let res = self.divide(rep, DivisionTieBreak::default())?;
        Ok(res.remainder_polynomial(&self.of))
    }
}

/// The polynomial `sum_i p_i f_i` of a representation tuple.
pub fn expand_rep<C: Coeff>(of: &FOrderIdeal<C>, rep: &[Polynomial<C>]) -> Polynomial<C> {
    let n = of.nvars();
    rep.iter()
        .zip(of.generators())
        .fold(Polynomial::zero(n), |acc, (p, f)| acc.add(&p.mul(f)))
}

/// Result of a border division: `sum_i p_i f_i = sum_j h_j g_j + r` with
/// `r = sum_k c_k t_k f_{alpha_k}` supported inside the F-order ideal.
#[derive(Clone, PartialEq, Debug)]
pub struct DivisionResult<C> {
    pub quotients: Vec<Polynomial<C>>,
    pub remainder_coeffs: Vec<C>,
    pub steps: usize,
}

impl<C: Coeff> DivisionResult<C> {
    pub fn remainder_polynomial(&self, of: &FOrderIdeal<C>) -> Polynomial<C> {
        let n = of.nvars();
        of.fterms()
            .iter()
            .zip(&self.remainder_coeffs)
            .fold(Polynomial::zero(n), |acc, (ft, c)| {
                acc.add(&of.expand(ft).scalar_mul(c))
            })
    }

    /// The remainder as a representation tuple over the generators.
    pub fn remainder_rep(&self, of: &FOrderIdeal<C>) -> Vec<Polynomial<C>> {
        let n = of.nvars();
        let mut rep = vec![Polynomial::zero(n); of.generators().len()];
        for (ft, c) in of.fterms().iter().zip(&self.remainder_coeffs) {
            if !c.is_zero() {
                rep[ft.gen] =
                    rep[ft.gen].add(&Polynomial::monomial(n, ft.term.clone(), c.clone()));
            }
        }
        rep
    }
}

/// S-polynomial residuals of a prebasis: for every neighboring border
/// pair `(i, j)`, the S-polynomial of the monic-scaled elements is
/// divided by the prebasis. Returns `(i, j, spoly_norm, remainder_norm)`
/// with Euclidean coefficient norms.
pub fn spoly_residuals<C: Coeff>(
    g: &SubidealBorderPrebasis<C>,
) -> Result<Vec<(usize, usize, f64, f64)>> {
    let of = g.order_ideal();
    let border = g.border();
    let mut out = Vec::new();
    for (i, j) in border.neighbors() {
        let bi = &border.fterms()[i];
        let bj = &border.fterms()[j];
        let lcm = Term::new(
            bi.term
                .exps()
                .iter()
                .zip(bj.term.exps())
                .map(|(a, b)| *a.max(b))
                .collect(),
        );
        let ti = bi.term.quotient_of(&lcm).expect("border term divides lcm");
        let tj = bj.term.quotient_of(&lcm).expect("border term divides lcm");
        let scale_i = C::one() / g.lead_coeff(i).clone();
        let scale_j = C::one() / g.lead_coeff(j).clone();
        let s_rep: Vec<Polynomial<C>> = g
            .element_rep(i)
            .iter()
            .zip(g.element_rep(j).iter())
            .map(|(pi, pj)| {
                pi.mul_term(&ti)
                    .scalar_mul(&scale_i)
                    .sub(&pj.mul_term(&tj).scalar_mul(&scale_j))
            })
            .collect();
        let spoly_norm = expand_rep(of, &s_rep).norm2();
        let res = g.divide(&s_rep, DivisionTieBreak::default())?;
        let remainder_norm = res.remainder_polynomial(of).norm2();
        out.push((i, j, spoly_norm, remainder_norm));
    }
    Ok(out)
}

/// Outcome of the evaluation-based exact basis check.
#[derive(Clone, PartialEq, Debug)]
pub struct ExactCheckReport {
    pub ok: bool,
    /// `(element, point)` pairs where an element fails to vanish.
    pub nonvanishing: Vec<(usize, usize)>,
    /// A nontrivial linear relation among the F-order ideal evaluation
    /// vectors, if they are dependent.
    pub dependence_witness: Option<Vec<Rat>>,
}

/// Checks whether an exact prebasis is the border basis of the vanishing
/// subideal of `x`: every element must vanish on `x` and the evaluation
/// vectors of the F-order ideal elements must be linearly independent.
pub fn is_subideal_border_basis_exact(
    g: &SubidealBorderPrebasis<Rat>,
    x: &PointSet<Rat>,
) -> Result<ExactCheckReport> {
    let mut nonvanishing = Vec::new();
    for j in 0..g.len() {
        let vals = evaluate(&g.element(j), x)?;
        for (p, v) in vals.iter().enumerate() {
            if !v.is_zero() {
                nonvanishing.push((j, p));
            }
        }
    }
    let of = g.order_ideal();
    let cols: Vec<Vec<Rat>> = of
        .fterms()
        .iter()
        .map(|ft| evaluate(&of.expand(ft), x))
        .collect::<Result<_>>()?;
    let mat = ExactMatrix::from_columns(x.len(), &cols);
    let kernel = mat.kernel_basis();
    let dependence_witness = kernel.rows().first().cloned();
    Ok(ExactCheckReport {
        ok: nonvanishing.is_empty() && dependence_witness.is_none(),
        nonvanishing,
        dependence_witness,
    })
}
