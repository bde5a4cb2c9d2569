//! Sparse multivariate polynomials over an abstract coefficient type.
//!
//! Polynomials are immutable values: all operations return fresh values.
//! No zero coefficient is ever stored; in float mode only the literal 0.0
//! is pruned, thresholding is the business of the approximate engine.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Coeff;
use crate::term::{default_var_names, Term, TermOrdering};

#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<C> {
    nvars: usize,
    coeffs: BTreeMap<Term, C>,
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::from_terms(nvars, vec![(Term::one(nvars), c)])
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    /// The monomial `c * t`.
    pub fn monomial(nvars: usize, t: Term, c: C) -> Self {
        Self::from_terms(nvars, vec![(t, c)])
    }

    /// The indeterminate `x_i` (0-based).
    pub fn variable(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, Term::var(nvars, i), C::one())
    }

    pub fn from_terms(nvars: usize, terms: Vec<(Term, C)>) -> Self {
        let mut coeffs: BTreeMap<Term, C> = BTreeMap::new();
        for (t, c) in terms {
            assert_eq!(t.nvars(), nvars, "term width mismatch");
            match coeffs.entry(t) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                }
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Polynomial { nvars, coeffs }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, t: &Term) -> Option<&C> {
        self.coeffs.get(t)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &C)> {
        self.coeffs.iter()
    }

    /// Support in decreasing order with respect to `ord`.
    pub fn support_desc(&self, ord: &TermOrdering) -> Vec<&Term> {
        let mut sup: Vec<&Term> = self.coeffs.keys().collect();
        sup.sort_by(|a, b| ord.cmp(b, a));
        sup
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|t| t.degree()).max()
    }

    /// The sigma-maximal term of the support with its coefficient.
    pub fn leading_term(&self, ord: &TermOrdering) -> Result<(&Term, &C)> {
        self.coeffs
            .iter()
            .max_by(|(a, _), (b, _)| ord.cmp(a, b))
            .map(|(t, c)| (t, c))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "indeterminate count mismatch");
        let mut coeffs = self.coeffs.clone();
        for (t, c) in &other.coeffs {
            match coeffs.entry(t.clone()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c.clone();
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        Polynomial {
            nvars: self.nvars,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            nvars: self.nvars,
            coeffs: self
                .coeffs
                .iter()
                .map(|(t, c)| (t.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scalar_mul(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            coeffs: self
                .coeffs
                .iter()
                .map(|(t, c)| (t.clone(), c.clone() * s.clone()))
                .collect(),
        }
    }

    pub fn mul_term(&self, t: &Term) -> Self {
        Polynomial {
            nvars: self.nvars,
            coeffs: self
                .coeffs
                .iter()
                .map(|(u, c)| (u.mul(t), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "indeterminate count mismatch");
        let mut acc: Vec<(Term, C)> = Vec::with_capacity(self.coeffs.len() * other.coeffs.len());
        for (s, a) in &self.coeffs {
            for (t, b) in &other.coeffs {
                acc.push((s.mul(t), a.clone() * b.clone()));
            }
        }
        Self::from_terms(self.nvars, acc)
    }

    /// Adds `c * t * other` to `self`.
    pub fn add_scaled_term(&self, c: &C, t: &Term, other: &Self) -> Self {
        self.add(&other.mul_term(t).scalar_mul(c))
    }

    pub fn evaluate_at(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars, "point width mismatch");
        let mut acc = C::zero();
        for (t, c) in &self.coeffs {
            let mut v = c.clone();
            for (i, &e) in t.exps().iter().enumerate() {
                for _ in 0..e {
                    v *= point[i].clone();
                }
            }
            acc += v;
        }
        acc
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm2(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| {
                let v = c.to_f64();
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Sum of absolute coefficient values.
    pub fn norm1(&self) -> f64 {
        self.coeffs.values().map(|c| c.abs_f64()).sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.abs_f64())
            .fold(0.0, f64::max)
    }

    pub fn to_string_with(&self, names: &[String], ord: &TermOrdering) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, t) in self.support_desc(ord).into_iter().enumerate() {
            let c = &self.coeffs[t];
            let cs = format!("{c}");
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, cs),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if t.is_one() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&t.fmt_with(names));
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&t.fmt_with(names));
            }
        }
        out
    }
}

impl<C: Coeff> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_var_names(self.nvars);
        let ord = TermOrdering::degrevlex(self.nvars);
        write!(f, "{}", self.to_string_with(&names, &ord))
    }
}
