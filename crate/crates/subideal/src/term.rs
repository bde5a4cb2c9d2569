//! Terms (power products) and degree compatible term orderings.

use std::cmp::Ordering;
use std::fmt;

/// A power product in `n` indeterminates, stored as an exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Term {
    exps: Vec<u32>,
}

impl Term {
    pub fn new(exps: Vec<u32>) -> Self {
        Term { exps }
    }

    /// The term 1 in `n` indeterminates.
    pub fn one(nvars: usize) -> Self {
        Term { exps: vec![0; nvars] }
    }

    /// The indeterminate `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Term { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Term) -> Term {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Term {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn mul_var(&self, i: usize) -> Term {
        let mut exps = self.exps.clone();
        exps[i] += 1;
        Term { exps }
    }

    pub fn divides(&self, other: &Term) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, if the quotient is a term.
    pub fn quotient_of(&self, other: &Term) -> Option<Term> {
        if self.divides(other) {
            Some(Term {
                exps: other
                    .exps
                    .iter()
                    .zip(&self.exps)
                    .map(|(b, a)| b - a)
                    .collect(),
            })
        } else {
            None
        }
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 1 {
                parts.push(names[i].clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", names[i], e));
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&default_var_names(self.exps.len())))
    }
}

/// Default indeterminate names: `x, y, z` for up to three variables,
/// `x1, ..., xn` otherwise.
pub fn default_var_names(nvars: usize) -> Vec<String> {
    if nvars <= 3 {
        ["x", "y", "z"][..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrderingKind {
    DegRevLex,
    DegLex,
}

/// A degree compatible term ordering with an explicit variable order.
/// `var_order[0]` is the most significant indeterminate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TermOrdering {
    kind: OrderingKind,
    var_order: Vec<usize>,
}

impl TermOrdering {
    pub fn new(kind: OrderingKind, var_order: Vec<usize>) -> Self {
        TermOrdering { kind, var_order }
    }

    /// DegRevLex with `x_1 > x_2 > ... > x_n`.
    pub fn degrevlex(nvars: usize) -> Self {
        TermOrdering {
            kind: OrderingKind::DegRevLex,
            var_order: (0..nvars).collect(),
        }
    }

    pub fn deglex(nvars: usize) -> Self {
        TermOrdering {
            kind: OrderingKind::DegLex,
            var_order: (0..nvars).collect(),
        }
    }

    pub fn kind(&self) -> OrderingKind {
        self.kind
    }

    pub fn nvars(&self) -> usize {
        self.var_order.len()
    }

    pub fn cmp(&self, a: &Term, b: &Term) -> Ordering {
        match a.degree().cmp(&b.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        match self.kind {
            OrderingKind::DegLex => {
                for &v in &self.var_order {
                    match a.exps()[v].cmp(&b.exps()[v]) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            OrderingKind::DegRevLex => {
                for &v in self.var_order.iter().rev() {
                    match a.exps()[v].cmp(&b.exps()[v]) {
                        Ordering::Equal => {}
                        // Smaller exponent in the least significant position
                        // means the larger term.
                        ord => return ord.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// All terms of exact degree `d` in `nvars` indeterminates.
pub fn terms_of_degree(nvars: usize, d: u32) -> Vec<Term> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn rec(exps: &mut Vec<u32>, pos: usize, rem: u32, out: &mut Vec<Term>) {
        if pos + 1 == exps.len() {
            exps[pos] = rem;
            out.push(Term::new(exps.clone()));
            return;
        }
        for e in 0..=rem {
            exps[pos] = e;
            rec(exps, pos + 1, rem - e, out);
        }
        exps[pos] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Term::new(vec![]));
        }
        return out;
    }
    rec(&mut exps, 0, d, &mut out);
    out
}

/// All terms of degree at most `d`.
pub fn terms_up_to_degree(nvars: usize, d: u32) -> Vec<Term> {
    (0..=d).flat_map(|k| terms_of_degree(nvars, k)).collect()
}
