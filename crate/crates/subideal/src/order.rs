//! Order ideals, F-order ideals, borders, higher border closures and the
//! index measuring the distance of an F-term from an F-order ideal.
//!
//! An F-term is the pair (term, generator index); its identity is
//! positional. Two F-terms with equal polynomial value but different pairs
//! are distinct, and an F-term may occur in the order ideal of one
//! generator and in the border of another at the same time.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Coeff;
use crate::term::{terms_up_to_degree, Term, TermOrdering};

/// A finite, divisor-closed set of terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrderIdeal {
    terms: Vec<Term>,
}

impl OrderIdeal {
    /// Builds an order ideal from a term list, preserving its order.
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        let set: BTreeSet<&Term> = terms.iter().collect();
        if set.len() != terms.len() {
            return Err(Error::InconsistentPrebasis(
                "order ideal contains duplicate terms".into(),
            ));
        }
        for t in &terms {
            for (i, &e) in t.exps().iter().enumerate() {
                if e > 0 {
                    let mut parent = t.exps().to_vec();
                    parent[i] -= 1;
                    if !set.contains(&Term::new(parent)) {
                        return Err(Error::InconsistentPrebasis(format!(
                            "order ideal is not divisor closed at {t}"
                        )));
                    }
                }
            }
        }
        Ok(OrderIdeal { terms })
    }

    pub fn empty() -> Self {
        OrderIdeal { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.terms.contains(t)
    }

    /// Classical border: `(x_1 O ∪ ... ∪ x_n O) \ O`, sorted decreasingly
    /// by `ord`.
    pub fn border(&self, nvars: usize, ord: &TermOrdering) -> Vec<Term> {
        let mut out: BTreeSet<Term> = BTreeSet::new();
        for t in &self.terms {
            for i in 0..nvars {
                let m = t.mul_var(i);
                if !self.contains(&m) {
                    out.insert(m);
                }
            }
        }
        let mut v: Vec<Term> = out.into_iter().collect();
        v.sort_by(|a, b| ord.cmp(b, a));
        v
    }
}

/// A term times a fixed generator, identified by the pair.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FTerm {
    pub term: Term,
    /// 0-based index into the generator list.
    pub gen: usize,
}

impl FTerm {
    pub fn new(term: Term, gen: usize) -> Self {
        FTerm { term, gen }
    }
}

impl fmt::Display for FTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*f[{}]", self.term, self.gen + 1)
    }
}

/// An F-order ideal: per-generator order ideals `O_1, ..., O_m` with an
/// explicit ordering of the flattened F-term list.
#[derive(Clone, PartialEq, Debug)]
pub struct FOrderIdeal<C> {
    gens: Vec<Polynomial<C>>,
    fterms: Vec<FTerm>,
    nvars: usize,
}

impl<C: Coeff> FOrderIdeal<C> {
    /// Builds an F-order ideal from nonzero generators and an ordered
    /// F-term list whose per-generator term sets are divisor closed.
    pub fn new(gens: Vec<Polynomial<C>>, fterms: Vec<FTerm>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let nvars = gens[0].nvars();
        for (i, g) in gens.iter().enumerate() {
            if g.is_zero() {
                return Err(Error::ZeroGenerator(i));
            }
            if g.nvars() != nvars {
                return Err(Error::DimensionMismatch(
                    "generators live in different rings".into(),
                ));
            }
        }
        for ft in &fterms {
            if ft.gen >= gens.len() {
                return Err(Error::GeneratorIndex(ft.gen));
            }
        }
        let of = FOrderIdeal { gens, fterms, nvars };
        for i in 0..of.gens.len() {
            // Validates divisor closure per generator.
            OrderIdeal::new(of.gen_terms(i))?;
        }
        let set: BTreeSet<&FTerm> = of.fterms.iter().collect();
        if set.len() != of.fterms.len() {
            return Err(Error::InconsistentPrebasis(
                "duplicate F-term in F-order ideal".into(),
            ));
        }
        Ok(of)
    }

    /// The flattened disjoint union of per-generator order ideals times
    /// their generators, in the canonical order used for borders:
    /// decreasing `ord` on the term, ties by ascending generator index.
    pub fn from_per_gen(
        gens: Vec<Polynomial<C>>,
        per_gen: Vec<OrderIdeal>,
        ord: &TermOrdering,
    ) -> Result<Self> {
        if gens.len() != per_gen.len() {
            return Err(Error::DimensionMismatch(
                "one order ideal per generator required".into(),
            ));
        }
        let mut fterms = Vec::new();
        for (i, oi) in per_gen.iter().enumerate() {
            for t in oi.terms() {
                fterms.push(FTerm::new(t.clone(), i));
            }
        }
        fterms.sort_by(|a, b| ord.cmp(&b.term, &a.term).then(a.gen.cmp(&b.gen)));
        Self::new(gens, fterms)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial<C>] {
        &self.gens
    }

    pub fn fterms(&self) -> &[FTerm] {
        &self.fterms
    }

    /// mu, the number of F-terms.
    pub fn len(&self) -> usize {
        self.fterms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fterms.is_empty()
    }

    pub fn contains(&self, ft: &FTerm) -> bool {
        self.fterms.contains(ft)
    }

    pub fn position(&self, ft: &FTerm) -> Option<usize> {
        self.fterms.iter().position(|x| x == ft)
    }

    /// Terms of `O_i`, in flattened order.
    pub fn gen_terms(&self, i: usize) -> Vec<Term> {
        self.fterms
            .iter()
            .filter(|ft| ft.gen == i)
            .map(|ft| ft.term.clone())
            .collect()
    }

    /// Total degree of an F-term: deg(t) + deg(f_i).
    pub fn fterm_degree(&self, ft: &FTerm) -> u32 {
        ft.term.degree() + self.gens[ft.gen].total_degree().unwrap_or(0)
    }

    /// The polynomial value `t * f_i` of an F-term.
    pub fn expand(&self, ft: &FTerm) -> Polynomial<C> {
        self.gens[ft.gen].mul_term(&ft.term)
    }

    /// Border, computed positionally per generator and listed in
    /// decreasing `ord` on the term component, ties by ascending
    /// generator index.
    pub fn border(&self, ord: &TermOrdering) -> Border {
        let mut fterms = Vec::new();
        for i in 0..self.gens.len() {
            let oi = OrderIdeal::new(self.gen_terms(i)).expect("validated at construction");
            for b in oi.border(self.nvars, ord) {
                fterms.push(FTerm::new(b, i));
            }
        }
        fterms.sort_by(|a, b| ord.cmp(&b.term, &a.term).then(a.gen.cmp(&b.gen)));
        Border { fterms }
    }

    /// The k-th border closure `T^n_{<=k} * O_F`, computed per generator.
    pub fn border_closure(&self, k: u32) -> BTreeSet<FTerm> {
        let mut out = BTreeSet::new();
        let factors = terms_up_to_degree(self.nvars, k);
        for ft in &self.fterms {
            for u in &factors {
                out.insert(FTerm::new(ft.term.mul(u), ft.gen));
            }
        }
        out
    }

    /// The k-th border: `closure(k) \ closure(k-1)` for k >= 1, and the
    /// F-order ideal itself for k = 0.
    pub fn kth_border(&self, k: u32) -> BTreeSet<FTerm> {
        if k == 0 {
            return self.fterms.iter().cloned().collect();
        }
        let big = self.border_closure(k);
        let small = self.border_closure(k - 1);
        big.difference(&small).cloned().collect()
    }

    /// The minimal `k` with `t f_i` in the k-th border closure, computed
    /// via the minimal factorization `t = t' t''` with `t'' f_i` in the
    /// F-order ideal.
    pub fn of_index(&self, ft: &FTerm) -> Result<u32> {
        if ft.gen >= self.gens.len() {
            return Err(Error::GeneratorIndex(ft.gen));
        }
        self.fterms
            .iter()
            .filter(|of| of.gen == ft.gen && of.term.divides(&ft.term))
            .map(|of| ft.term.degree() - of.term.degree())
            .min()
            .ok_or(Error::EmptyOrderIdeal(ft.gen))
    }

    /// Index of a representation `(p_1, ..., p_m)`: the maximum index over
    /// all support F-terms.
    pub fn representation_index(&self, rep: &[Polynomial<C>]) -> Result<u32> {
        if rep.len() != self.gens.len() {
            return Err(Error::DimensionMismatch(
                "representation length must equal generator count".into(),
            ));
        }
        let mut max: Option<u32> = None;
        for (i, p) in rep.iter().enumerate() {
            for (t, _) in p.terms() {
                let k = self.of_index(&FTerm::new(t.clone(), i))?;
                max = Some(max.map_or(k, |m| m.max(k)));
            }
        }
        max.ok_or(Error::ZeroRepresentation)
    }
}

/// The ordered border of an F-order ideal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Border {
    fterms: Vec<FTerm>,
}

impl Border {
    pub fn fterms(&self) -> &[FTerm] {
        &self.fterms
    }

    /// nu, the number of border F-terms.
    pub fn len(&self) -> usize {
        self.fterms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fterms.is_empty()
    }

    /// Neighbor pairs `(i, j)` with `i < j`: equal generator index and the
    /// terms either next-door (`b_i = x_k b_j` either way) or
    /// across-the-street (`x_k b_i = x_l b_j` with `k != l`).
    pub fn neighbors(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for i in 0..self.fterms.len() {
            for j in i + 1..self.fterms.len() {
                let (a, b) = (&self.fterms[i], &self.fterms[j]);
                if a.gen == b.gen && terms_are_neighbors(&a.term, &b.term) {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }
}

fn terms_are_neighbors(a: &Term, b: &Term) -> bool {
    let n = a.nvars();
    // Next-door: one is an indeterminate multiple of the other.
    for k in 0..n {
        if a.mul_var(k) == *b || b.mul_var(k) == *a {
            return true;
        }
    }
    // Across-the-street: x_k a = x_l b with k != l.
    for k in 0..n {
        for l in 0..n {
            if k != l && a.mul_var(k) == b.mul_var(l) {
                return true;
            }
        }
    }
    false
}
