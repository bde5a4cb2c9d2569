//! Command-line front end: CSV ingestion, engine dispatch, and JSON
//! reports for the exact and approximate border basis computations and
//! the two-zone production allocation pipeline.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use subideal::allocate::{allocate, synthetic_two_zone, AllocationData, AllocationResult};
use subideal::avi::{avi, check_approx_basis, subideal_avi, ApproxBasisReport, Thresholds};
use subideal::bm::{bm_border_basis, subideal_bm, BMResult};
use subideal::division::{
    is_subideal_border_basis_exact, spoly_residuals, DivisionTieBreak, SubidealBorderPrebasis,
};
use subideal::order::FTerm;
use subideal::parse::parse_polynomial;
use subideal::{Coeff, Error, PointSet, Polynomial, Rat, TermOrdering};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "subideal",
    about = "Exact and approximate border bases of vanishing ideals, \
             with subideal variants and a production allocation pipeline"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Order {
    Degrevlex,
    Deglex,
}

impl Order {
    fn build(self, nvars: usize) -> TermOrdering {
        match self {
            Order::Degrevlex => TermOrdering::degrevlex(nvars),
            Order::Deglex => TermOrdering::deglex(nvars),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Order::Degrevlex => "degrevlex",
            Order::Deglex => "deglex",
        }
    }
}

#[derive(Args)]
struct FloatArgs {
    /// Singular value threshold for approximate vanishing.
    #[arg(long)]
    epsilon: f64,
    /// Pivot threshold of the stabilized echelon form.
    #[arg(long)]
    tau: f64,
    /// Rescale every coordinate into [-1, 1] before computing.
    #[arg(long)]
    auto_scale: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact border basis of the vanishing ideal of a point set.
    Bm {
        /// CSV file of points; header row names the variables.
        #[arg(long)]
        points: PathBuf,
        #[arg(long, value_enum, default_value_t = Order::Degrevlex)]
        order: Order,
    },
    /// Exact subideal border basis inside the ideal of the generators.
    Sbm {
        #[arg(long)]
        points: PathBuf,
        /// Generators, semicolon separated, e.g. "x^2 - 1; y - z".
        #[arg(long)]
        gens: String,
        #[arg(long, value_enum, default_value_t = Order::Degrevlex)]
        order: Order,
    },
    /// Approximate border basis of an empirical point set.
    Avi {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, value_enum, default_value_t = Order::Degrevlex)]
        order: Order,
        #[command(flatten)]
        float: FloatArgs,
    },
    /// Approximate subideal border basis inside the ideal of the
    /// generators.
    Savi {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        gens: String,
        #[arg(long, value_enum, default_value_t = Order::Degrevlex)]
        order: Order,
        #[command(flatten)]
        float: FloatArgs,
        /// Rescale each generator to 1-norm 1.
        #[arg(long)]
        normalize_generators: bool,
    },
    /// Divide a representation by the exact subideal border basis of
    /// the point set.
    Divide {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        gens: String,
        /// Representation tuple, one polynomial per generator,
        /// semicolon separated.
        #[arg(long)]
        rep: String,
        #[arg(long, value_enum, default_value_t = Order::Degrevlex)]
        order: Order,
    },
    /// Recompute the basis and verify it: exact S-polynomial residuals
    /// and vanishing, or the approximate check when epsilon is given.
    Check {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        gens: String,
        #[arg(long, value_enum, default_value_t = Order::Degrevlex)]
        order: Order,
        #[arg(long, requires = "tau")]
        epsilon: Option<f64>,
        #[arg(long, requires = "epsilon")]
        tau: Option<f64>,
        #[arg(long)]
        auto_scale: bool,
        #[arg(long)]
        normalize_generators: bool,
    },
    /// Two-zone production allocation from test phase and commingled
    /// data, or from the seeded synthetic generator.
    Allocate {
        /// Commingled CSV: variable columns plus the production column.
        #[arg(long, required_unless_present = "synthetic")]
        commingled: Option<PathBuf>,
        #[arg(long, required_unless_present = "synthetic")]
        test_a: Option<PathBuf>,
        #[arg(long, required_unless_present = "synthetic")]
        test_b: Option<PathBuf>,
        /// Column name of the valve position of zone A.
        #[arg(long, default_value = "xA")]
        valve_a: String,
        /// Column name of the valve position of zone B.
        #[arg(long, default_value = "xB")]
        valve_b: String,
        /// Column name of the measured production.
        #[arg(long, default_value = "p")]
        production: String,
        #[arg(long, value_enum, default_value_t = Order::Degrevlex)]
        order: Order,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        tau: f64,
        /// Use the built-in synthetic two-zone data set.
        #[arg(long)]
        synthetic: bool,
        /// Seed of the synthetic generator.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Noise level of the synthetic production column.
        #[arg(long, default_value_t = 1e-3)]
        noise: f64,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Engine(#[from] Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    /// 2 for invalid input or configuration, 3 for numeric failures
    /// inside the engines.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Engine(e) => match e {
                Error::DegenerateBasis(_)
                | Error::DegreeCap(_)
                | Error::InconsistentPrebasis(_)
                | Error::EmptyOrderIdeal(_)
                | Error::ZeroPolynomial
                | Error::ZeroRepresentation => 3,
                _ => 2,
            },
            _ => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.cmd) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("serializable report");
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                }
                None => println!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_points<C: Coeff>(path: &Path) -> Result<PointSet<C>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let names: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if names.is_empty() {
        return Err(CliError::Input(format!("{}: no columns", path.display())));
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let row: Vec<C> = record
            .iter()
            .map(|s| {
                C::parse_scalar(s)
                    .ok_or_else(|| CliError::Input(format!("{}: bad scalar `{s}`", path.display())))
            })
            .collect::<Result<_, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Input(format!(
            "{}: empty point set",
            path.display()
        )));
    }
    Ok(PointSet::new(names, rows)?)
}

/// Loads an allocation phase: all columns except the production column
/// are variables.
fn load_allocation(path: &Path, production: &str) -> Result<AllocationData, CliError> {
    let all: PointSet<f64> = load_points(path)?;
    let names = all.names().to_vec();
    let pcol = names.iter().position(|n| n == production).ok_or_else(|| {
        CliError::Input(format!(
            "{}: no production column `{production}`",
            path.display()
        ))
    })?;
    let var_names: Vec<String> = names
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != pcol)
        .map(|(_, n)| n.clone())
        .collect();
    let mut rows = Vec::new();
    let mut target = Vec::new();
    for point in all.points() {
        target.push(point[pcol]);
        rows.push(
            point
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != pcol)
                .map(|(_, v)| *v)
                .collect(),
        );
    }
    Ok(AllocationData::new(
        PointSet::new(var_names, rows)?,
        target,
    )?)
}

fn parse_gens<C: Coeff>(gens: &str, names: &[String]) -> Result<Vec<Polynomial<C>>, CliError> {
    gens.split(';')
        .map(|s| Ok(parse_polynomial(s, names)?))
        .collect()
}

fn fterm_str(ft: &FTerm, names: &[String]) -> String {
    if ft.term.is_one() {
        format!("f[{}]", ft.gen + 1)
    } else {
        format!("{}*f[{}]", ft.term.fmt_with(names), ft.gen + 1)
    }
}

fn poly_str<C: Coeff>(p: &Polynomial<C>, names: &[String], ord: &TermOrdering) -> String {
    p.to_string_with(names, ord)
}

fn exact_basis_json(
    basis: &SubidealBorderPrebasis<Rat>,
    names: &[String],
    ord: &TermOrdering,
) -> Value {
    let m = basis.order_ideal().generators().len();
    let elements: Vec<Value> = (0..basis.len())
        .map(|j| {
            let rep = basis.element_rep(j);
            json!({
                "lead": fterm_str(&basis.border().fterms()[j], names),
                "polynomial": poly_str(&basis.element(j), names, ord),
                "representation": (0..m)
                    .map(|i| poly_str(&rep[i], names, ord))
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    Value::Array(elements)
}

fn bm_json(cmd: &str, res: &BMResult, order: Order, names: &[String]) -> Value {
    let ord = order.build(names.len());
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": cmd,
        "order": order.name(),
        "variables": names,
        "generators": res.order_ideal.generators()
            .iter()
            .map(|f| poly_str(f, names, &ord))
            .collect::<Vec<_>>(),
        "order_ideal": res.order_ideal.fterms()
            .iter()
            .map(|ft| fterm_str(ft, names))
            .collect::<Vec<_>>(),
        "basis": exact_basis_json(&res.basis, names, &ord),
        "extras": res.extras.iter().map(|p| poly_str(p, names, &ord)).collect::<Vec<_>>(),
        "warnings": res.warnings,
    })
}

fn approx_json(
    cmd: &str,
    rep: &ApproxBasisReport,
    order: Order,
    names: &[String],
    scaling: Option<&[(f64, f64)]>,
) -> Value {
    let ord = order.build(names.len());
    let basis: Vec<Value> = (0..rep.basis.len())
        .map(|j| {
            json!({
                "lead": fterm_str(&rep.basis.border().fterms()[j], names),
                "lead_coefficient": rep.basis.lead_coeff(j),
                "polynomial": poly_str(&rep.basis.element(j), names, &ord),
            })
        })
        .collect();
    let raw: Vec<Value> = rep
        .raw_elements
        .iter()
        .map(|el| {
            json!({
                "lead": fterm_str(&el.lead, names),
                "lead_coefficient": el.lead_coeff,
                "tail": el.tail
                    .iter()
                    .map(|(ft, c)| json!([fterm_str(ft, names), c]))
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": cmd,
        "order": order.name(),
        "variables": names,
        "generators": rep.order_ideal.generators()
            .iter()
            .map(|f| poly_str(f, names, &ord))
            .collect::<Vec<_>>(),
        "order_ideal": rep.order_ideal.fterms()
            .iter()
            .map(|ft| fterm_str(ft, names))
            .collect::<Vec<_>>(),
        "basis": basis,
        "raw_elements": raw,
        "extras": rep.extras.iter().map(|p| poly_str(p, names, &ord)).collect::<Vec<_>>(),
        "delta": rep.bounds.delta,
        "eta": rep.bounds.eta,
        "gamma": rep.bounds.gamma,
        "singular_values": rep.singular_values,
        "spoly_residuals": rep.check.residuals
            .iter()
            .map(|r| json!({
                "pair": [r.pair.0, r.pair.1],
                "spoly_norm": r.spoly_norm,
                "remainder_norm": r.remainder_norm,
            }))
            .collect::<Vec<_>>(),
        "check_ok": rep.check.ok,
        "scaling": scaling.map(|maps| maps
            .iter()
            .map(|(offset, scale)| json!({"offset": offset, "scale": scale}))
            .collect::<Vec<_>>()),
        "warnings": rep.warnings,
    })
}

fn allocation_json(
    res: &AllocationResult,
    names: &[String],
    order: Order,
    synthetic: Option<(u64, f64)>,
) -> Value {
    let ord = order.build(names.len());
    let p = |q: &Polynomial<f64>| poly_str(q, names, &ord);
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": "allocate",
        "order": order.name(),
        "variables": names,
        "p_a": p(&res.p_a),
        "p_b": p(&res.p_b),
        "f_a": p(&res.f_a),
        "f_b": p(&res.f_b),
        "q_ab": p(&res.q_ab),
        "c_a": p(&res.c_a),
        "c_b": p(&res.c_b),
        "residual": res.residual,
        "rms": res.rms,
        "delta": res.delta,
        "synthetic": synthetic.map(|(seed, noise)| json!({"seed": seed, "noise": noise})),
    })
}

fn prepare_float(
    points: PointSet<f64>,
    auto_scale: bool,
) -> Result<(PointSet<f64>, Option<Vec<(f64, f64)>>), CliError> {
    if auto_scale {
        let (scaled, maps) = points.auto_scaled();
        Ok((scaled, Some(maps)))
    } else {
        points.check_unit_box()?;
        Ok((points, None))
    }
}

fn prepare_gens(
    gens: &str,
    names: &[String],
    normalize: bool,
) -> Result<Vec<Polynomial<f64>>, CliError> {
    let gens: Vec<Polynomial<f64>> = parse_gens(gens, names)?;
    if normalize {
        gens.iter()
            .map(|f| Ok(subideal::avi::normalize_l1(f)?))
            .collect()
    } else {
        Ok(gens)
    }
}

fn run(cmd: &Cmd) -> Result<Value, CliError> {
    match cmd {
        Cmd::Bm { points, order } => {
            let x: PointSet<Rat> = load_points(points)?;
            let names = x.names().to_vec();
            let res = bm_border_basis(&x, &order.build(names.len()))?;
            Ok(bm_json("bm", &res, *order, &names))
        }
        Cmd::Sbm {
            points,
            gens,
            order,
        } => {
            let x: PointSet<Rat> = load_points(points)?;
            let names = x.names().to_vec();
            let gens = parse_gens(gens, &names)?;
            let res = subideal_bm(&x, &order.build(names.len()), gens)?;
            Ok(bm_json("sbm", &res, *order, &names))
        }
        Cmd::Avi {
            points,
            order,
            float,
        } => {
            let th = Thresholds::new(float.epsilon, float.tau)?;
            let x: PointSet<f64> = load_points(points)?;
            let names = x.names().to_vec();
            let (x, scaling) = prepare_float(x, float.auto_scale)?;
            let rep = avi(&x, &order.build(names.len()), &th)?;
            Ok(approx_json("avi", &rep, *order, &names, scaling.as_deref()))
        }
        Cmd::Savi {
            points,
            gens,
            order,
            float,
            normalize_generators,
        } => {
            let th = Thresholds::new(float.epsilon, float.tau)?;
            let x: PointSet<f64> = load_points(points)?;
            let names = x.names().to_vec();
            let (x, scaling) = prepare_float(x, float.auto_scale)?;
            let gens = prepare_gens(gens, &names, *normalize_generators)?;
            let rep = subideal_avi(&x, &order.build(names.len()), gens, &th)?;
            Ok(approx_json("savi", &rep, *order, &names, scaling.as_deref()))
        }
        Cmd::Divide {
            points,
            gens,
            rep,
            order,
        } => {
            let x: PointSet<Rat> = load_points(points)?;
            let names = x.names().to_vec();
            let ord = order.build(names.len());
            let gens: Vec<Polynomial<Rat>> = parse_gens(gens, &names)?;
            let rep: Vec<Polynomial<Rat>> = parse_gens(rep, &names)?;
            if rep.len() != gens.len() {
                return Err(CliError::Input(format!(
                    "representation has {} entries for {} generators",
                    rep.len(),
                    gens.len()
                )));
            }
            let res = subideal_bm(&x, &ord, gens)?;
            let div = res.basis.divide(&rep, DivisionTieBreak::default())?;
            Ok(json!({
                "schema_version": SCHEMA_VERSION,
                "command": "divide",
                "order": order.name(),
                "variables": names,
                "quotients": div.quotients
                    .iter()
                    .map(|q| poly_str(q, &names, &ord))
                    .collect::<Vec<_>>(),
                "remainder": poly_str(
                    &div.remainder_polynomial(res.basis.order_ideal()),
                    &names,
                    &ord
                ),
                "remainder_coefficients": div.remainder_coeffs
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>(),
                "steps": div.steps,
            }))
        }
        Cmd::Check {
            points,
            gens,
            order,
            epsilon,
            tau,
            auto_scale,
            normalize_generators,
        } => match (epsilon, tau) {
            (Some(eps), Some(tau)) => {
                let th = Thresholds::new(*eps, *tau)?;
                let x: PointSet<f64> = load_points(points)?;
                let names = x.names().to_vec();
                let (x, _) = prepare_float(x, *auto_scale)?;
                let gens = prepare_gens(gens, &names, *normalize_generators)?;
                let rep = subideal_avi(&x, &order.build(names.len()), gens, &th)?;
                let check = check_approx_basis(&rep.basis, *eps)?;
                Ok(json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": "check",
                    "mode": "float",
                    "ok": check.ok,
                    "max_remainder": check.max_remainder,
                    "spoly_residuals": check.residuals
                        .iter()
                        .map(|r| json!({
                            "pair": [r.pair.0, r.pair.1],
                            "spoly_norm": r.spoly_norm,
                            "remainder_norm": r.remainder_norm,
                        }))
                        .collect::<Vec<_>>(),
                }))
            }
            _ => {
                let x: PointSet<Rat> = load_points(points)?;
                let names = x.names().to_vec();
                let gens = parse_gens(gens, &names)?;
                let res = subideal_bm(&x, &order.build(names.len()), gens)?;
                let exact = is_subideal_border_basis_exact(&res.basis, &x)?;
                let residuals = spoly_residuals(&res.basis)?;
                let spolys_ok = residuals.iter().all(|(_, _, _, r)| *r == 0.0);
                Ok(json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": "check",
                    "mode": "exact",
                    "ok": exact.ok && spolys_ok,
                    "vanishing_ok": exact.nonvanishing.is_empty(),
                    "independent_ok": exact.dependence_witness.is_none(),
                    "spoly_residuals": residuals
                        .iter()
                        .map(|(i, j, s, r)| json!({
                            "pair": [i, j],
                            "spoly_norm": s,
                            "remainder_norm": r,
                        }))
                        .collect::<Vec<_>>(),
                }))
            }
        },
        Cmd::Allocate {
            commingled,
            test_a,
            test_b,
            valve_a,
            valve_b,
            production,
            order,
            epsilon,
            tau,
            synthetic,
            seed,
            noise,
        } => {
            let th = Thresholds::new(*epsilon, *tau)?;
            let (commingled, test_a, test_b) = if *synthetic {
                let (c, a, b, _) = synthetic_two_zone(*seed, 30, 40, *noise);
                (c, a, b)
            } else {
                (
                    load_allocation(commingled.as_ref().expect("required"), production)?,
                    load_allocation(test_a.as_ref().expect("required"), production)?,
                    load_allocation(test_b.as_ref().expect("required"), production)?,
                )
            };
            let names = commingled.points().names().to_vec();
            let find = |name: &str| {
                names.iter().position(|n| n == name).ok_or_else(|| {
                    CliError::Input(format!("no valve column `{name}`"))
                })
            };
            let va = find(valve_a)?;
            let vb = find(valve_b)?;
            let res = allocate(
                &commingled,
                &test_a,
                &test_b,
                va,
                vb,
                &order.build(names.len()),
                &th,
            )?;
            let synthetic = synthetic.then_some((*seed, *noise));
            Ok(allocation_json(&res, &names, *order, synthetic))
        }
    }
}
