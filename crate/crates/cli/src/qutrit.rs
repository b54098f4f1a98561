use clap::{Args, Subcommand};
use qutrit_reach::embed::{embed, unembed};
use qutrit_reach::{
    extremal_field, reach_order_with_margin, reachable_set, stab_boundary, stab_grid, EmbeddedCurve, Side,
    StabBoundary,
};
use serde_json::json;
use thermo_core::{Error, Permutation, Result};
use toymodel::{GeneratorSource, ToyGenerator};

use crate::output::{csv_string, fmt, print_json, write_file};
use crate::svg::Svg;
use crate::GenArgs;

#[derive(Debug, Subcommand)]
pub enum QutritCmd {
    /// Stabilisable set: conic boundary and LP classification on a grid.
    Stab(StabArgs),
    /// Closure of the reachable set of a point.
    Reach(ReachArgs),
    /// Reachability order between two points.
    Order(OrderArgs),
}

#[derive(Debug, Args)]
pub struct StabArgs {
    #[command(flatten)]
    pub gen: GenArgs,
    /// Classify a barycentric grid with this many steps per side.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub svg: Option<String>,
    /// Boundary samples `arc,lambda,ex,ey,x1,x2,x3`.
    #[arg(long)]
    pub csv: Option<String>,
    /// Add a layer of extremal-velocity glyphs.
    #[arg(long)]
    pub field: bool,
    /// Samples per boundary arc.
    #[arg(long, default_value_t = 200)]
    pub per_arc: usize,
}

#[derive(Debug, Args)]
pub struct ReachArgs {
    #[command(flatten)]
    pub gen: GenArgs,
    /// `d`, `centroid` or comma separated populations.
    #[arg(long)]
    pub x0: String,
    #[arg(long)]
    pub svg: Option<String>,
    /// Curve samples `curve,t,ex,ey,x1,x2,x3`.
    #[arg(long)]
    pub csv: Option<String>,
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    #[command(flatten)]
    pub gen: GenArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    pub x: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub y: Vec<f64>,
}

pub fn run(c: QutritCmd) -> Result<u8> {
    match c {
        QutritCmd::Stab(a) => stab(a),
        QutritCmd::Reach(a) => reach(a),
        QutritCmd::Order(a) => order(a),
    }
}

fn generator(g: &GenArgs) -> Result<ToyGenerator> {
    let (g, _) = g.load()?;
    if g.dim() != 3 {
        return Err(Error::invalid("qutrit commands need n = 3"));
    }
    Ok(g)
}

fn ladder_a(g: &ToyGenerator) -> Option<f64> {
    match g.source() {
        GeneratorSource::Ladder { a } => Some(a),
        GeneratorSource::Custom => None,
    }
}

fn point(x: &[f64; 3]) -> [f64; 2] {
    embed(x)
}

fn conic_layer(svg: &mut Svg, b: &StabBoundary, per_arc: usize) {
    svg.layer("conics", |s| {
        for arc in &b.arcs {
            s.polyline(&arc.sample(per_arc), "stroke:#c22;stroke-width:1.5");
        }
    });
}

fn fixed_point_layer(svg: &mut Svg, g: &ToyGenerator) {
    svg.layer("fixed-points", |s| {
        for p in Permutation::all(3) {
            s.dot(embed(&p.apply(g.fixed_point())), 3.0, "fill:#000");
        }
        s.dot(embed(&[1.0 / 3.0; 3]), 2.0, "fill:#fff;stroke:#000");
    });
}

fn stab(a: StabArgs) -> Result<u8> {
    let g = generator(&a.gen)?;
    let boundary = ladder_a(&g).map(stab_boundary).transpose()?;
    let per_arc = a.per_arc.max(1);
    let grid = a.grid.map(|n| stab_grid(&g, n)).transpose()?;

    let mut out = json!({
        "d": g.fixed_point(),
        "ladder_a": ladder_a(&g),
    });
    if let Some(b) = &boundary {
        out["case"] = json!(b.case);
        out["arcs"] = json!(b
            .arcs
            .iter()
            .map(|c| json!({"b": c.b, "rotation": c.rotation, "lambda_max": c.lambda_max, "start": c.start, "end": c.end}))
            .collect::<Vec<_>>());
    }
    if let Some(pts) = &grid {
        let inside = pts.iter().filter(|(_, s)| *s).count();
        let mut summary = json!({"resolution": a.grid, "points": pts.len(), "stabilisable": inside});
        if let Some(b) = boundary.as_ref().filter(|b| !b.is_degenerate()) {
            let poly = b.polygon(per_arc);
            let agree = pts.iter().filter(|(p, s)| poly.contains_strict(embed(p)) == *s).count();
            summary["conic_agreement"] = json!(agree as f64 / pts.len() as f64);
        }
        out["grid"] = summary;
    }

    if let Some(path) = &a.csv {
        let mut rows = Vec::new();
        for (k, arc) in boundary.iter().flat_map(|b| b.arcs.iter()).enumerate() {
            for i in 0..=per_arc {
                let l = arc.lambda_max * (2.0 * i as f64 / per_arc as f64 - 1.0);
                let p = arc.point(l);
                let x = unembed(p);
                rows.push([k.to_string(), fmt(l), fmt(p[0]), fmt(p[1]), fmt(x[0]), fmt(x[1]), fmt(x[2])].to_vec());
            }
        }
        write_file(path, &csv_string(&["arc", "lambda", "ex", "ey", "x1", "x2", "x3"], &rows)?)?;
    }

    if let Some(path) = &a.svg {
        let mut svg = Svg::new();
        svg.title(&match ladder_a(&g) {
            Some(v) => format!("stabilisable set, a = {}", fmt(v)),
            None => "stabilisable set".to_string(),
        });
        svg.simplex();
        if let Some(pts) = &grid {
            svg.layer("stab-grid", |s| {
                for (p, _) in pts.iter().filter(|(_, st)| *st) {
                    s.dot(point(p), 0.6, "fill:#9bd");
                }
            });
        }
        if let Some(b) = &boundary {
            conic_layer(&mut svg, b, per_arc);
        }
        if a.field {
            let pts = stab_grid(&g, 24)?;
            svg.layer("field", |s| {
                for (p, stab) in &pts {
                    if *stab {
                        continue;
                    }
                    for side in [Side::Left, Side::Right] {
                        if let Ok(v) = extremal_field(p, &g, side) {
                            s.glyph(point(p), v.embedded, 0.018);
                        }
                    }
                }
            });
        }
        fixed_point_layer(&mut svg, &g);
        write_file(path, &svg.finish())?;
    }
    print_json(&out)?;
    Ok(0)
}

fn parse_x0(s: &str, g: &ToyGenerator) -> Result<Vec<f64>> {
    match s.trim() {
        "d" => Ok(g.fixed_point().to_vec()),
        "centroid" => Ok(vec![1.0 / 3.0; 3]),
        list => {
            let v = list
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::invalid(format!("--x0 {list}: {e}")))?;
            if v.len() != 3 {
                return Err(Error::invalid("--x0 needs three populations"));
            }
            Ok(v)
        }
    }
}

fn curve_json(c: &EmbeddedCurve) -> serde_json::Value {
    json!({
        "side": c.side,
        "termination": c.termination,
        "duration": c.duration(),
        "end": c.end(),
        "samples": c.points.len(),
    })
}

fn curve_rows(name: &str, c: &EmbeddedCurve, rows: &mut Vec<Vec<String>>) {
    for (t, x) in c.times.iter().zip(&c.points) {
        let p = embed(x);
        rows.push(vec![name.into(), fmt(*t), fmt(p[0]), fmt(p[1]), fmt(x[0]), fmt(x[1]), fmt(x[2])]);
    }
}

/// The curve and its images under all coordinate permutations.
fn curve_orbit(c: &EmbeddedCurve) -> Vec<Vec<[f64; 2]>> {
    Permutation::all(3)
        .iter()
        .map(|p| c.points.iter().map(|x| embed(&p.apply(x))).collect())
        .collect()
}

fn reach(a: ReachArgs) -> Result<u8> {
    let g = generator(&a.gen)?;
    let x0 = parse_x0(&a.x0, &g)?;
    let r = reachable_set(&x0, &g)?;
    let mut out = json!({
        "x0": x0,
        "d": g.fixed_point(),
        "in_class_of_d": r.in_class_of_d(),
        "class": {
            "chamber": r.class.chamber,
            "left": curve_json(&r.class.left),
            "right": curve_json(&r.class.right),
        },
    });
    if let (Some(l), Some(rt)) = (&r.left, &r.right) {
        out["left"] = curve_json(l);
        out["right"] = curve_json(rt);
    }

    if let Some(path) = &a.csv {
        let mut rows = Vec::new();
        curve_rows("class-left", &r.class.left, &mut rows);
        curve_rows("class-right", &r.class.right, &mut rows);
        if let (Some(l), Some(rt)) = (&r.left, &r.right) {
            curve_rows("left", l, &mut rows);
            curve_rows("right", rt, &mut rows);
        }
        write_file(path, &csv_string(&["curve", "t", "ex", "ey", "x1", "x2", "x3"], &rows)?)?;
    }

    if let Some(path) = &a.svg {
        let mut svg = Svg::new();
        svg.title(&format!(
            "reachable set of ({}, {}, {})",
            fmt(x0[0]),
            fmt(x0[1]),
            fmt(x0[2])
        ));
        svg.simplex();
        let (class, extra) = {
            let all = r.polygons();
            let k = r.class.orbit().len();
            (all[..k].to_vec(), all[k..].to_vec())
        };
        svg.layer("reach", |s| {
            for p in &extra {
                s.polygon(&p.vertices, "fill:#fde2b8;stroke:none");
            }
        });
        svg.layer("class-d", |s| {
            for p in &class {
                s.polygon(&p.vertices, "fill:#b8d8f0;stroke:none");
            }
        });
        if let Some(b) = ladder_a(&g).map(stab_boundary).transpose()? {
            conic_layer(&mut svg, &b, 200);
        }
        svg.layer("extremals", |s| {
            for c in [&r.class.left, &r.class.right] {
                for arc in curve_orbit(c) {
                    s.polyline(&arc, "stroke:#135;stroke-width:1");
                }
            }
            for c in [&r.left, &r.right].into_iter().flatten() {
                for arc in curve_orbit(c) {
                    s.polyline(&arc, "stroke:#a50;stroke-width:1");
                }
            }
        });
        fixed_point_layer(&mut svg, &g);
        svg.layer("x0", |s| s.dot(embed(&x0), 3.5, "fill:#d40"));
        write_file(path, &svg.finish())?;
    }
    print_json(&out)?;
    Ok(0)
}

fn order(a: OrderArgs) -> Result<u8> {
    let g = generator(&a.gen)?;
    let tol = crate::tolerance()?;
    let o = reach_order_with_margin(&a.x, &a.y, &g, tol)?;
    print_json(&json!({"x": a.x, "y": a.y, "order": o, "margin": tol}))?;
    Ok(0)
}
