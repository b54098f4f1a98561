use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thermo_core::{Error, Result, GEOM_TOL};

mod maj;
mod output;
mod problem;
mod qubit;
mod qutrit;
mod svg;
mod toy;

/// Thermal majorisation, Markovian thermal maps and permutation-controlled relaxation.
///
/// Vectors are comma separated. Set THERMO_TOL to override the geometric tolerance.
#[derive(Debug, Parser)]
#[command(name = "thermo", version, allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Thermomajorisation curve of (d, y) as CSV.
    Curve(maj::CurveArgs),
    /// Halfspaces and vertices of the d-majorisation polytope of y.
    Polytope(maj::PolytopeArgs),
    /// Extreme points E(σ) of the polytope and its max corner.
    Extremes(maj::PairArgs),
    /// d-stochastic matrix taking y to x, if any.
    Transition(maj::TransitionArgs),
    /// Check a GKSL generator for Gibbs preservation and covariance.
    GeneratorCheck(maj::GeneratorCheckArgs),
    /// Single-qubit thermal maps.
    #[command(subcommand)]
    Qubit(qubit::QubitCmd),
    /// Relaxation interleaved with population permutations.
    #[command(subcommand)]
    Toy(toy::ToyCmd),
    /// Three-level geometry: stabilisable set, reachable sets, reachability order.
    #[command(subcommand)]
    Qutrit(qutrit::QutritCmd),
}

/// Generator selection shared by the toy and qutrit commands.
#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    /// Boltzmann ratio of the ladder generator.
    #[arg(long)]
    pub a: Option<f64>,
    /// Number of levels of the ladder generator.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Problem file with a "toy" section.
    #[arg(long)]
    pub problem: Option<String>,
}

impl GenArgs {
    pub fn load(&self) -> Result<(toymodel::ToyGenerator, Option<problem::ProblemFile>)> {
        let pf = self.problem.as_deref().map(problem::ProblemFile::load).transpose()?;
        let g = match (self.a, pf.as_ref().and_then(|p| p.toy.as_ref())) {
            (Some(a), None) => toymodel::ToyGenerator::ladder(a, self.n)?,
            (None, Some(t)) => t.generator()?,
            (Some(_), Some(_)) => return Err(Error::invalid("give --a or a toy section, not both")),
            (None, None) => return Err(Error::invalid("need --a or --problem with a toy section")),
        };
        Ok((g, pf))
    }
}

/// `THERMO_TOL`, or the library default.
pub fn tolerance() -> Result<f64> {
    match std::env::var("THERMO_TOL") {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| *t >= 0.0 && t.is_finite())
            .ok_or_else(|| Error::invalid(format!("THERMO_TOL = {s:?} is not a tolerance"))),
        Err(_) => Ok(GEOM_TOL),
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Command::Curve(a) => maj::curve(a),
        Command::Polytope(a) => maj::polytope(a),
        Command::Extremes(a) => maj::extremes(a),
        Command::Transition(a) => maj::transition(a),
        Command::GeneratorCheck(a) => maj::generator_check(a),
        Command::Qubit(c) => qubit::run(c),
        Command::Toy(c) => toy::run(c),
        Command::Qutrit(c) => qutrit::run(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
