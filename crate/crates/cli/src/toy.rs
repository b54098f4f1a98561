use clap::{Args, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thermo_core::{Error, Result};
use toymodel::{
    containment_sweep, random_schedule, reach_bound, simulate, vectorfield_inward_check, Schedule, SimOptions,
};

use crate::output::{csv_string, deliver, fmt, json_string, print_json, sig, write_file};
use crate::GenArgs;

#[derive(Debug, Subcommand)]
pub enum ToyCmd {
    /// Trajectory of a switching schedule, as CSV `t,x1..xn`.
    Simulate(SimulateArgs),
    /// The ordered past cone point z and its permutation polytope.
    Bound(BoundArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub gen: GenArgs,
    /// Initial state; falls back to the problem file, then to the first basis vector.
    #[arg(long, value_delimiter = ',')]
    pub x0: Option<Vec<f64>>,
    /// Schedule JSON file; otherwise the problem file, otherwise a random one.
    #[arg(long)]
    pub schedule: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output spacing inside flow segments; 0 records switch points only.
    #[arg(long, default_value_t = 0.01)]
    pub dense_dt: f64,
    #[arg(long, default_value_t = 0.0)]
    pub tail: f64,
    #[arg(long)]
    pub out: Option<String>,
    /// Write the schedule that was run.
    #[arg(long)]
    pub schedule_out: Option<String>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub gen: GenArgs,
    #[arg(long, value_delimiter = ',')]
    pub x0: Option<Vec<f64>>,
    /// Also run this many random trajectories and report the smallest slack.
    #[arg(long)]
    pub check: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn pick_x0(flag: Option<Vec<f64>>, file: Option<&Vec<f64>>, n: usize) -> Vec<f64> {
    flag.or_else(|| file.cloned()).unwrap_or_else(|| {
        let mut e = vec![0.0; n];
        e[0] = 1.0;
        e
    })
}

fn load_schedule(path: &str) -> Result<Schedule> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("reading {path}: {e}")))?;
    let s: Schedule =
        serde_json::from_str(&text).map_err(|e| Error::invalid(format!("schedule {path}: {e}")))?;
    s.validate()?;
    Ok(s)
}

pub fn run(c: ToyCmd) -> Result<u8> {
    match c {
        ToyCmd::Simulate(a) => simulate_cmd(a),
        ToyCmd::Bound(a) => bound_cmd(a),
    }
}

fn simulate_cmd(a: SimulateArgs) -> Result<u8> {
    let (g, pf) = a.gen.load()?;
    let n = g.dim();
    let x0 = pick_x0(a.x0, pf.as_ref().and_then(|p| p.toy.as_ref()?.x0.as_ref()), n);
    let schedule = match (&a.schedule, pf.as_ref().and_then(|p| p.schedule.clone())) {
        (Some(path), _) => load_schedule(path)?,
        (None, Some(s)) => {
            s.validate()?;
            s
        }
        (None, None) => {
            // run the durations as printed so --schedule-out replays exactly
            let mut s = random_schedule(&mut ChaCha8Rng::seed_from_u64(a.seed), n);
            s.steps.iter_mut().for_each(|st| st.dt = sig(st.dt));
            s
        }
    };
    if !(a.dense_dt >= 0.0 && a.tail >= 0.0) {
        return Err(Error::invalid("--dense-dt and --tail must be ≥ 0"));
    }
    let opts = SimOptions {
        dense_dt: (a.dense_dt > 0.0).then_some(a.dense_dt),
        tail: a.tail,
    };
    let tr = simulate(&x0, &g, &schedule, &opts)?;
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x{i}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = tr
        .times
        .iter()
        .zip(&tr.states)
        .map(|(t, x)| std::iter::once(fmt(*t)).chain(x.iter().map(|v| fmt(*v))).collect())
        .collect();
    if let Some(path) = &a.schedule_out {
        write_file(path, &json_string(&schedule)?)?;
    }
    deliver(a.out.as_deref(), &csv_string(&header, &rows)?)?;
    Ok(0)
}

fn bound_cmd(a: BoundArgs) -> Result<u8> {
    let (g, pf) = a.gen.load()?;
    let x0 = pick_x0(a.x0, pf.as_ref().and_then(|p| p.toy.as_ref()?.x0.as_ref()), g.dim());
    let tol = crate::tolerance()?;
    let b = reach_bound(&x0, &g)?;
    let inward = vectorfield_inward_check(&b.z, &g, tol)?;
    let worst = match a.check {
        Some(count) => Some(containment_sweep(&x0, &g, count, a.seed, 0.01, |x| b.slack(x))?),
        None => None,
    };
    print_json(&json!({
        "x0": x0,
        "d": g.fixed_point(),
        "z": b.z,
        "vertices": b.vertices,
        "inward": inward,
        "check": worst.map(|w| json!({"trajectories": a.check, "seed": a.seed, "min_slack": w, "contained": w >= -tol})),
    }))?;
    Ok(0)
}
