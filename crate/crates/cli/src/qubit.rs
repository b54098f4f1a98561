use clap::{Args, Subcommand};
use qubit_mto::{classify, compose, hausdorff_gap, mto_region_sample, QubitThermalParams};
use serde_json::json;
use thermo_core::{Complex64, Error, Result};

use crate::output::{csv_string, deliver, fmt, print_json, write_file};
use crate::problem::ProblemFile;
use crate::svg::Svg;

#[derive(Debug, Subcommand)]
pub enum QubitCmd {
    /// Thermal / Markovian region of each map.
    Classify(MapsArgs),
    /// Compose maps in application order and classify the result.
    Compose(MapsArgs),
    /// Boundary samples of both regions and their gap.
    Region(RegionArgs),
}

#[derive(Debug, Args)]
pub struct MapsArgs {
    /// A map as mu,eps,c_re[,c_im]; repeat for several.
    #[arg(long = "map", allow_hyphen_values = true)]
    pub maps: Vec<String>,
    /// Problem file with a "qubit" section, used when no --map is given.
    #[arg(long)]
    pub problem: Option<String>,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 200)]
    pub resolution: usize,
    /// CSV of boundary samples.
    #[arg(long)]
    pub csv: Option<String>,
    /// Both surfaces seen from two fixed angles.
    #[arg(long)]
    pub svg: Option<String>,
}

/// Oblique view of `(μ, Re c, Im c)`, `μ` vertical, in a panel centred at `cx`.
fn project(p: &[f64; 3], azimuth: f64, cx: f64) -> (f64, f64) {
    let (s, c) = azimuth.sin_cos();
    let u = c * p[1] - s * p[2];
    let depth = s * p[1] + c * p[2];
    (cx + 170.0 * u, 560.0 - 380.0 * p[0] - 60.0 * depth)
}

/// `res × res` samples drawn as rings of constant μ and meridians.
fn surface(svg: &mut Svg, pts: &[[f64; 3]], res: usize, azimuth: f64, cx: f64, style: &str) {
    let step = (res / 12).max(1);
    for i in (0..res).step_by(step).chain(std::iter::once(res - 1)) {
        let mut ring: Vec<_> = pts[i * res..(i + 1) * res].iter().map(|p| project(p, azimuth, cx)).collect();
        ring.push(ring[0]);
        svg.polyline_px(&ring, style);
    }
    for k in (0..res).step_by((res / 8).max(1)) {
        let m: Vec<_> = (0..res).map(|i| project(&pts[i * res + k], azimuth, cx)).collect();
        svg.polyline_px(&m, style);
    }
}

fn region_svg(s: &qubit_mto::RegionSample, res: usize) -> String {
    let mut svg = Svg::new();
    svg.title(&format!("thermal (grey) and Markovian (red) qubit maps, eps = {}", fmt(s.eps)));
    for (id, az, cx) in [("view-a", 0.35, 200.0), ("view-b", 1.2, 600.0)] {
        svg.layer(id, |g| {
            surface(g, &s.thermal, res, az, cx, "stroke:#888;stroke-width:0.6");
            surface(g, &s.markovian, res, az, cx, "stroke:#c22;stroke-width:0.8");
        });
    }
    svg.finish()
}

fn parse_map(s: &str) -> Result<QubitThermalParams> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::invalid(format!("--map {s}: {e}")))?;
    match v[..] {
        [mu, eps, re] => Ok(QubitThermalParams::new(mu, eps, Complex64::new(re, 0.0))),
        [mu, eps, re, im] => Ok(QubitThermalParams::new(mu, eps, Complex64::new(re, im))),
        _ => Err(Error::invalid(format!("--map {s}: expected mu,eps,c_re[,c_im]"))),
    }
}

impl MapsArgs {
    fn load(&self) -> Result<Vec<QubitThermalParams>> {
        if !self.maps.is_empty() {
            return self.maps.iter().map(|m| parse_map(m)).collect();
        }
        let path = self
            .problem
            .as_deref()
            .ok_or_else(|| Error::invalid("need --map or --problem"))?;
        ProblemFile::load(path)?
            .qubit
            .map(|q| q.maps)
            .filter(|m| !m.is_empty())
            .ok_or_else(|| Error::invalid("problem file has no qubit maps"))
    }
}

pub fn run(c: QubitCmd) -> Result<u8> {
    match c {
        QubitCmd::Classify(a) => {
            let maps = a.load()?;
            let out: Vec<_> = maps
                .iter()
                .map(|p| json!({"map": p, "classification": classify(p)}))
                .collect();
            print_json(&out)?;
            Ok(0)
        }
        QubitCmd::Compose(a) => {
            let maps = a.load()?;
            let mut acc = maps[0];
            let mut degenerate = false;
            for p in &maps[1..] {
                let c = compose(p, &acc);
                acc = c.params;
                degenerate |= c.degenerate;
            }
            print_json(&json!({
                "composite": acc,
                "degenerate": degenerate,
                "classification": classify(&acc),
            }))?;
            Ok(0)
        }
        QubitCmd::Region(a) => {
            let s = mto_region_sample(a.eps, a.resolution)?;
            let gap = hausdorff_gap(a.eps, a.resolution.max(2))?;
            if let Some(path) = &a.svg {
                write_file(path, &region_svg(&s, a.resolution.max(2)))?;
            }
            if let Some(path) = &a.csv {
                let mut rows = Vec::new();
                for (name, pts) in [("markovian", &s.markovian), ("thermal", &s.thermal)] {
                    for p in pts {
                        rows.push(vec![name.to_string(), fmt(p[0]), fmt(p[1]), fmt(p[2])]);
                    }
                }
                deliver(Some(path), &csv_string(&["surface", "mu", "c_re", "c_im"], &rows)?)?;
            }
            print_json(&json!({
                "eps": a.eps,
                "markovian_points": s.markovian.len(),
                "thermal_points": s.thermal.len(),
                "hausdorff_gap": gap,
            }))?;
            Ok(0)
        }
    }
}
