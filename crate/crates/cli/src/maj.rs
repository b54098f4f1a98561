use clap::Args;
use gksl_thermal::{is_ento_generator, ladder_ops, markov_to_generator, GKSLGenerator, ThermalSetup};
use serde::Serialize;
use serde_json::json;
use thermo_core::json::rmat_to_rows;
use thermo_core::{CMat, Error, Permutation, Result};
use thermomaj::{Transition, Violation};

use crate::output::{csv_string, deliver, fmt, print_json};
use crate::problem::{cmat, ProblemFile};

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub d: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub y: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Equispaced samples on [0, 𝟙ᵀd], written before the elbow rows.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct PolytopeArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Also test membership of this point.
    #[arg(long, value_delimiter = ',')]
    pub x: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct TransitionArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    pub x: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct GeneratorCheckArgs {
    /// Problem file with a "thermal" section. The generator comes from
    /// "H_tot" and "H_B", or from explicit Lindblad operators "V", or from
    /// the ladder pair when neither is given; "H" is added in all cases.
    #[arg(long)]
    pub problem: String,
}

pub fn curve(a: CurveArgs) -> Result<u8> {
    let c = thermomaj::ThermoCurve::new(&a.pair.d, &a.pair.y)?;
    let total = c.total_d();
    let mut rows: Vec<Vec<String>> = (0..a.samples)
        .map(|k| {
            let x = if a.samples < 2 { 0.0 } else { total * k as f64 / (a.samples - 1) as f64 };
            vec!["sample".into(), fmt(x), fmt(c.eval(x))]
        })
        .collect();
    rows.extend(c.elbows().into_iter().map(|(x, v)| vec!["elbow".into(), fmt(x), fmt(v)]));
    deliver(a.out.as_deref(), &csv_string(&["kind", "c", "th"], &rows)?)?;
    Ok(0)
}

#[derive(Serialize)]
struct PolytopeOut {
    total: f64,
    halfspaces: Vec<thermomaj::Halfspace>,
    vertices: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    contains: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    slack: Option<f64>,
}

pub fn polytope(a: PolytopeArgs) -> Result<u8> {
    let p = thermomaj::polytope(&a.pair.d, &a.pair.y)?;
    let tol = crate::tolerance()?;
    let out = PolytopeOut {
        total: p.total,
        vertices: p.vertices(),
        contains: a.x.as_ref().map(|x| p.contains(x, tol)),
        slack: a.x.as_ref().map(|x| p.slack(x)),
        halfspaces: p.halfspaces,
    };
    print_json(&out)?;
    Ok(0)
}

pub fn extremes(a: PairArgs) -> Result<u8> {
    let n = a.d.len();
    let points = Permutation::all(n)
        .into_iter()
        .map(|p| {
            let e = thermomaj::extreme_point(&a.d, &a.y, p.image())?;
            Ok(json!({"order": p.image(), "point": e}))
        })
        .collect::<Result<Vec<_>>>()?;
    let corner = thermomaj::max_corner(&a.d, &a.y)?;
    print_json(&json!({"extremes": points, "max_corner": corner}))?;
    Ok(0)
}

fn violation_json(v: Option<Violation>) -> serde_json::Value {
    match v {
        Some(Violation::Index(i)) => json!(i),
        Some(Violation::Total) => json!("total"),
        None => serde_json::Value::Null,
    }
}

pub fn transition(a: TransitionArgs) -> Result<u8> {
    match thermomaj::find_transition_matrix(&a.pair.d, &a.pair.y, &a.x)? {
        Transition::Feasible {
            a: m,
            max_residual,
            warning,
        } => {
            print_json(&json!({
                "feasible": true,
                "matrix": rmat_to_rows(&m),
                "max_residual": max_residual,
                "warning": warning,
            }))?;
            Ok(0)
        }
        Transition::Infeasible { violated } => {
            print_json(&json!({"feasible": false, "violated": violation_json(violated)}))?;
            Ok(1)
        }
    }
}

pub fn generator_check(a: GeneratorCheckArgs) -> Result<u8> {
    let pf = ProblemFile::load(&a.problem)?;
    let th = pf
        .thermal
        .ok_or_else(|| Error::invalid("generator-check needs a \"thermal\" section"))?;
    let setup = ThermalSetup::new(th.h0_diag.clone(), th.temperature)?;
    let n = setup.dim();
    let h = match &th.h {
        Some(j) => cmat(j)?,
        None => CMat::zeros(n, n),
    };
    let (g, source) = match (&th.h_tot, &th.h_b, &th.v) {
        (Some(ht), Some(hb), None) => (markov_to_generator(&cmat(ht)?, &cmat(hb)?, &h, &setup)?.generator, "H_tot"),
        (None, None, Some(list)) => (
            GKSLGenerator::new(h, list.iter().map(cmat).collect::<Result<Vec<_>>>()?)?,
            "V",
        ),
        (None, None, None) => {
            let (p, m) = ladder_ops(setup.gibbs(), n)?;
            (GKSLGenerator::new(h, vec![p, m])?, "ladder")
        }
        _ => return Err(Error::invalid("thermal section: give H_tot with H_B, or V, or neither")),
    };
    let report = is_ento_generator(g.superoperator(), &setup)?;
    print_json(&json!({"lindblad_source": source, "report": report, "valid": report.all()}))?;
    Ok(if report.all() { 0 } else { 1 })
}
