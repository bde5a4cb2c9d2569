//! Production allocation for a two-zone well: zone models constrained
//! into the valve ideals, an interaction term fitted inside the ideal
//! generated by the cross products, and the resulting per-zone
//! contributions to the commingled production.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::avi::{matrix_from_columns, normalize_l1, subideal_avi, ApproxBasisReport, Thresholds};
use crate::error::{Error, Result};
use crate::order::FOrderIdeal;
use crate::points::{evaluate, PointSet};
use crate::poly::Polynomial;
use crate::term::{Term, TermOrdering};

/// One measurement phase: points over the process variables and the
/// measured production per row.
#[derive(Clone, PartialEq, Debug)]
pub struct AllocationData {
    points: PointSet<f64>,
    production: Vec<f64>,
}

impl AllocationData {
    pub fn new(points: PointSet<f64>, production: Vec<f64>) -> Result<Self> {
        if production.len() != points.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} production values for {} points",
                production.len(),
                points.len()
            )));
        }
        Ok(AllocationData { points, production })
    }

    pub fn points(&self) -> &PointSet<f64> {
        &self.points
    }

    pub fn production(&self) -> &[f64] {
        &self.production
    }
}

/// Result of the allocation pipeline. The contributions satisfy
/// `c_a + c_b = p_a + p_b + q_ab` as a polynomial identity, `p_a` and
/// `c_a` are multiples of the valve variable of zone A (likewise for
/// zone B), and every monomial of `q_ab` carries both valve variables.
#[derive(Clone, PartialEq, Debug)]
pub struct AllocationResult {
    pub p_a: Polynomial<f64>,
    pub p_b: Polynomial<f64>,
    pub f_a: Polynomial<f64>,
    pub f_b: Polynomial<f64>,
    pub q_ab: Polynomial<f64>,
    pub c_a: Polynomial<f64>,
    pub c_b: Polynomial<f64>,
    /// Euclidean norm of `eval(p_a + p_b + q_ab) - production` on the
    /// commingled rows.
    pub residual: f64,
    /// Root mean square of the same residual vector.
    pub rms: f64,
    /// Largest vanishing bound delta over the three basis computations.
    pub delta: f64,
}

/// Least squares fit of a target vector by the evaluation columns of
/// the F-order ideal elements; returns the fitted polynomial and the
/// coefficient per F-term.
fn least_squares_fit(
    of: &FOrderIdeal<f64>,
    x: &PointSet<f64>,
    target: &[f64],
) -> Result<(Polynomial<f64>, Vec<f64>)> {
    let n = of.nvars();
    if of.is_empty() {
        return Ok((Polynomial::zero(n), Vec::new()));
    }
    let cols: Vec<Vec<f64>> = of
        .fterms()
        .iter()
        .map(|ft| evaluate(&of.expand(ft), x))
        .collect::<Result<_>>()?;
    let m = matrix_from_columns(x.len(), &cols);
    let svd = m.svd(true, true);
    let rhs = DVector::from_column_slice(target);
    let c = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::DegenerateBasis(e.to_string()))?;
    let mut p = Polynomial::zero(n);
    for (k, ft) in of.fterms().iter().enumerate() {
        p = p.add(&of.expand(ft).scalar_mul(&c[k]));
    }
    Ok((p, c.iter().cloned().collect()))
}

/// Fits a zone production model inside the principal ideal of a single
/// generator.
fn fit_in_ideal(
    data: &AllocationData,
    gen: &Polynomial<f64>,
    ord: &TermOrdering,
    th: &Thresholds,
) -> Result<(Polynomial<f64>, ApproxBasisReport)> {
    let scale = gen.norm1();
    if scale == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let unit = gen.scalar_mul(&(1.0 / scale));
    let report = subideal_avi(&data.points, ord, vec![unit], th)?;
    let (p, _) = least_squares_fit(&report.order_ideal, &data.points, &data.production)?;
    Ok((p, report))
}

/// Allocates the commingled production of a two-zone well.
///
/// Test-phase data of each zone fits the zone model `p` inside the
/// ideal of its valve variable; the interaction of the leftover
/// production is fitted inside the ideal of the cross products
/// `x_b p_a` and `x_a p_b`, yielding `q_ab = f_a x_b p_a + f_b x_a p_b`
/// and the contributions `c_a = (1 + f_a x_b) p_a` and
/// `c_b = (1 + f_b x_a) p_b`.
pub fn allocate(
    commingled: &AllocationData,
    test_a: &AllocationData,
    test_b: &AllocationData,
    valve_a: usize,
    valve_b: usize,
    ord: &TermOrdering,
    th: &Thresholds,
) -> Result<AllocationResult> {
    let n = commingled.points.nvars();
    if valve_a >= n || valve_b >= n || valve_a == valve_b {
        return Err(Error::DimensionMismatch(
            "valve columns must be two distinct variables".into(),
        ));
    }
    for d in [test_a, test_b] {
        if d.points.nvars() != n {
            return Err(Error::DimensionMismatch(
                "test and commingled data disagree on the variable count".into(),
            ));
        }
    }
    let xa = Polynomial::variable(n, valve_a);
    let xb = Polynomial::variable(n, valve_b);
    let (p_a, rep_a) = fit_in_ideal(test_a, &xa, ord, th)?;
    let (p_b, rep_b) = fit_in_ideal(test_b, &xb, ord, th)?;
    if p_a.norm2() < 1e-12 {
        return Err(Error::DegenerateBasis(
            "zone A test phase shows no production".into(),
        ));
    }
    if p_b.norm2() < 1e-12 {
        return Err(Error::DegenerateBasis(
            "zone B test phase shows no production".into(),
        ));
    }
    // Leftover production on the commingled rows.
    let base = p_a.add(&p_b);
    let base_vals = evaluate(&base, &commingled.points)?;
    let leftover: Vec<f64> = commingled
        .production
        .iter()
        .zip(&base_vals)
        .map(|(p, v)| p - v)
        .collect();
    // Interaction inside the ideal of the cross products, with the
    // generators rescaled to unit 1-norm and the scales restored in the
    // extracted cofactors.
    let cross_a = p_a.mul(&xb);
    let cross_b = p_b.mul(&xa);
    let scale_a = cross_a.norm1();
    let scale_b = cross_b.norm1();
    let gens = vec![normalize_l1(&cross_a)?, normalize_l1(&cross_b)?];
    let rep_q = subideal_avi(&commingled.points, ord, gens, th)?;
    let (_, coeffs) = least_squares_fit(&rep_q.order_ideal, &commingled.points, &leftover)?;
    let mut f_a = Polynomial::zero(n);
    let mut f_b = Polynomial::zero(n);
    for (k, ft) in rep_q.order_ideal.fterms().iter().enumerate() {
        let mono = |c: f64, t: &Term| Polynomial::monomial(n, t.clone(), c);
        match ft.gen {
            0 => f_a = f_a.add(&mono(coeffs[k] / scale_a, &ft.term)),
            _ => f_b = f_b.add(&mono(coeffs[k] / scale_b, &ft.term)),
        }
    }
    let q_ab = f_a.mul(&cross_a).add(&f_b.mul(&cross_b));
    let one = Polynomial::one(n);
    let c_a = one.add(&f_a.mul(&xb)).mul(&p_a);
    let c_b = one.add(&f_b.mul(&xa)).mul(&p_b);
    let model_vals = evaluate(&base.add(&q_ab), &commingled.points)?;
    let residual = commingled
        .production
        .iter()
        .zip(&model_vals)
        .map(|(p, v)| (p - v) * (p - v))
        .sum::<f64>()
        .sqrt();
    let rms = residual / (commingled.points.len() as f64).sqrt();
    let delta = rep_a
        .bounds
        .delta
        .max(rep_b.bounds.delta)
        .max(rep_q.bounds.delta);
    Ok(AllocationResult {
        p_a,
        p_b,
        f_a,
        f_b,
        q_ab,
        c_a,
        c_b,
        residual,
        rms,
        delta,
    })
}

/// Ground truth behind a synthetic two-zone data set.
#[derive(Clone, PartialEq, Debug)]
pub struct SyntheticTruth {
    pub p_a: Polynomial<f64>,
    pub p_b: Polynomial<f64>,
    pub f_a: Polynomial<f64>,
    pub f_b: Polynomial<f64>,
    pub q_ab: Polynomial<f64>,
}

/// Variable names of the synthetic data set: the two valve positions
/// and one auxiliary sensor reading.
pub fn synthetic_variable_names() -> Vec<String> {
    vec!["xA".into(), "xB".into(), "u".into()]
}

/// Seeded synthetic two-zone well data: test phases with the other
/// valve closed, commingled rows with both valves open, and Gaussian
/// measurement noise on the production column. Returns
/// `(commingled, test_a, test_b, truth)`.
pub fn synthetic_two_zone(
    seed: u64,
    s_test: usize,
    s_commingled: usize,
    noise: f64,
) -> (
    AllocationData,
    AllocationData,
    AllocationData,
    SyntheticTruth,
) {
    let n = 3;
    let names = synthetic_variable_names();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = |ea: u32, eb: u32, eu: u32| Term::new(vec![ea, eb, eu]);
    let p_a = Polynomial::from_terms(n, vec![(t(1, 0, 0), 0.4), (t(1, 0, 1), 0.1)]);
    let p_b = Polynomial::from_terms(n, vec![(t(0, 1, 0), 0.5), (t(0, 1, 1), -0.15)]);
    let f_a = Polynomial::from_terms(n, vec![(t(0, 0, 0), 0.15), (t(0, 0, 1), 0.1)]);
    let f_b = Polynomial::from_terms(n, vec![(t(0, 0, 0), -0.1), (t(0, 0, 1), 0.05)]);
    let xa = Polynomial::variable(n, 0);
    let xb = Polynomial::variable(n, 1);
    let q_ab = f_a.mul(&xb).mul(&p_a).add(&f_b.mul(&xa).mul(&p_b));
    let total = p_a.add(&p_b).add(&q_ab);
    let gauss = Normal::new(0.0, noise.max(f64::MIN_POSITIVE)).expect("valid noise level");
    let mut sample = |model: &Polynomial<f64>, open_a: bool, open_b: bool, s: usize| {
        let rows: Vec<Vec<f64>> = (0..s)
            .map(|_| {
                vec![
                    if open_a { rng.gen_range(0.2..1.0) } else { 0.0 },
                    if open_b { rng.gen_range(0.2..1.0) } else { 0.0 },
                    rng.gen_range(-1.0..1.0),
                ]
            })
            .collect();
        let production: Vec<f64> = rows
            .iter()
            .map(|p| {
                let v = model.evaluate_at(p);
                if noise > 0.0 {
                    v + gauss.sample(&mut rng)
                } else {
                    v
                }
            })
            .collect();
        let points = PointSet::new(names.clone(), rows).expect("nonempty synthetic rows");
        AllocationData::new(points, production).expect("matching lengths")
    };
    let test_a = sample(&p_a, true, false, s_test);
    let test_b = sample(&p_b, false, true, s_test);
    let commingled = sample(&total, true, true, s_commingled);
    (
        commingled,
        test_a,
        test_b,
        SyntheticTruth {
            p_a,
            p_b,
            f_a,
            f_b,
            q_ab,
        },
    )
}
