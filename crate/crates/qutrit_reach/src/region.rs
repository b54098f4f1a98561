use serde::Serialize;
use thermo_core::{Error, Permutation, Result};
use toymodel::ToyGenerator;

use crate::cone::{is_stabilisable, Side};
use crate::embed::{embed, unembed};
use crate::extremal::{integrate_extremal_with, EmbeddedCurve, ExtremalOptions, Termination};
use crate::polygon::Polygon;

/// Default membership margin in the embedded plane.
pub const MEMBERSHIP_MARGIN: f64 = 1e-7;

const CENTROID: [f64; 3] = [1.0 / 3.0; 3];

fn map_points(p: &Permutation, pts: &[[f64; 2]]) -> Vec<[f64; 2]> {
    pts.iter().map(|&q| embed(&p.apply(&unembed(q)))).collect()
}

/// `y` with the entries of `x` arranged in the chamber of `d`.
fn into_chamber(x: &[f64], order: &[usize; 3]) -> [f64; 3] {
    let mut xs = [x[0], x[1], x[2]];
    xs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut y = [0.0; 3];
    for k in 0..3 {
        y[order[k]] = xs[k];
    }
    y
}

/// Polygon `x0 → first curve → centroid → second curve reversed`.
fn piece(first: &EmbeddedCurve, second: &EmbeddedCurve) -> Polygon {
    let mut v = first.embedded();
    v.push(embed(&CENTROID));
    let back = second.embedded();
    v.extend(back.iter().rev().take(back.len() - 1));
    Polygon::new(v)
}

/// The equivalence class `[d]`: points that reach `d` and are reached from it.
#[derive(Debug, Clone, Serialize)]
pub struct DClass {
    pub d: Vec<f64>,
    pub chamber: [usize; 3],
    pub left: EmbeddedCurve,
    pub right: EmbeddedCurve,
    /// `[d]` intersected with the chamber of `d`.
    pub piece: Polygon,
}

impl DClass {
    pub fn new(g: &ToyGenerator) -> Result<Self> {
        let d = g.fixed_point().to_vec();
        if d.len() != 3 {
            return Err(Error::invalid("qutrit geometry needs n = 3"));
        }
        if d.iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-12) {
            return Err(Error::domain("unital generator: [d] is the centroid alone"));
        }
        let opts = ExtremalOptions::default();
        let left = integrate_extremal_with(&d, g, Side::Left, &opts, None)?;
        let right = integrate_extremal_with(&d, g, Side::Right, &opts, None)?;
        for c in [&left, &right] {
            if !matches!(c.termination, Termination::Wall { .. }) {
                return Err(Error::Internal(format!(
                    "{:?} extremal from d ended with {:?} at {:?} after t = {}; expected a chamber wall",
                    c.side,
                    c.termination,
                    c.end(),
                    c.duration()
                )));
            }
        }
        let piece = piece(&left, &right);
        Ok(Self {
            chamber: left.chamber,
            d,
            left,
            right,
            piece,
        })
    }

    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        self.piece.signed_distance(embed(&into_chamber(x, &self.chamber)))
    }

    pub fn contains(&self, x: &[f64], margin: f64) -> bool {
        self.piece.contains(embed(&into_chamber(x, &self.chamber)), margin)
    }

    /// The twelve extremal arcs chained into one closed curve.
    pub fn boundary(&self) -> Result<Polygon> {
        let (l, r) = (self.left.embedded(), self.right.embedded());
        let mut arcs: Vec<Vec<[f64; 2]>> = Vec::with_capacity(12);
        for p in Permutation::all(3) {
            arcs.push(map_points(&p, &l));
            arcs.push(map_points(&p, &r));
        }
        let near = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]) < 1e-7;
        let mut pts = arcs.remove(0);
        while !arcs.is_empty() {
            let tail = *pts.last().unwrap();
            let k = arcs
                .iter()
                .position(|a| near(a[0], tail) || near(*a.last().unwrap(), tail))
                .ok_or_else(|| Error::Internal("extremal arcs of [d] do not chain".into()))?;
            let mut a = arcs.remove(k);
            if !near(a[0], tail) {
                a.reverse();
            }
            pts.extend_from_slice(&a[1..]);
        }
        if !near(pts[0], *pts.last().unwrap()) {
            return Err(Error::Internal("extremal arcs of [d] do not close".into()));
        }
        pts.pop();
        Ok(Polygon::new(pts))
    }

    /// The six images of [`DClass::piece`].
    pub fn orbit(&self) -> Vec<Polygon> {
        orbit(&self.piece)
    }
}

fn orbit(p: &Polygon) -> Vec<Polygon> {
    Permutation::all(3)
        .iter()
        .map(|s| Polygon::new(map_points(s, &p.vertices)))
        .collect()
}

/// Closure of the reachable set of `x0`, as a union of `[d]` and the region
/// cut out by the extremal curves from `x0`, both folded into one chamber.
#[derive(Debug, Clone, Serialize)]
pub struct ReachRegion {
    pub x0: Vec<f64>,
    pub class: DClass,
    /// `None` when `x0 ∈ [d]`.
    pub left: Option<EmbeddedCurve>,
    pub right: Option<EmbeddedCurve>,
    pub piece: Option<Polygon>,
}

impl ReachRegion {
    pub fn in_class_of_d(&self) -> bool {
        self.piece.is_none()
    }

    /// Positive inside, negative outside, in the embedded plane.
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        let p = embed(&into_chamber(x, &self.class.chamber));
        let base = self.class.piece.signed_distance(p);
        match &self.piece {
            Some(q) => base.max(q.signed_distance(p)),
            None => base,
        }
    }

    pub fn contains(&self, x: &[f64], margin: f64) -> bool {
        self.signed_distance(x) >= -margin
    }

    /// Polygons whose union is the region.
    pub fn polygons(&self) -> Vec<Polygon> {
        let mut out = self.class.orbit();
        if let Some(p) = &self.piece {
            out.extend(orbit(p));
        }
        out
    }
}

pub fn reachable_set(x0: &[f64], g: &ToyGenerator) -> Result<ReachRegion> {
    reachable_set_in(x0, g, DClass::new(g)?)
}

/// [`reachable_set`] reusing a computed `[d]`.
pub fn reachable_set_in(x0: &[f64], g: &ToyGenerator, class: DClass) -> Result<ReachRegion> {
    if x0.len() != 3 || g.dim() != 3 {
        return Err(Error::invalid("qutrit geometry needs n = 3"));
    }
    let inside = class.contains(x0, MEMBERSHIP_MARGIN) || is_stabilisable(x0, g)?.holds();
    if inside {
        return Ok(ReachRegion {
            x0: x0.to_vec(),
            class,
            left: None,
            right: None,
            piece: None,
        });
    }
    let y0 = into_chamber(x0, &class.chamber);
    let stop = |y: &[f64; 3]| class.piece.contains_strict(embed(y));
    let opts = ExtremalOptions::default();
    let left = integrate_extremal_with(&y0, g, Side::Left, &opts, Some(&stop))?;
    let right = integrate_extremal_with(&y0, g, Side::Right, &opts, Some(&stop))?;
    let piece = piece(&left, &right);
    Ok(ReachRegion {
        x0: x0.to_vec(),
        class,
        left: Some(left),
        right: Some(right),
        piece: Some(piece),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReachOrder {
    /// `y` lies in the closure of the reachable set of `x` but not conversely.
    XReachesY,
    YReachesX,
    Equivalent,
    Incomparable,
}

pub fn reach_order(x: &[f64], y: &[f64], g: &ToyGenerator) -> Result<ReachOrder> {
    reach_order_with_margin(x, y, g, MEMBERSHIP_MARGIN)
}

/// [`reach_order`] with an explicit membership margin.
pub fn reach_order_with_margin(x: &[f64], y: &[f64], g: &ToyGenerator, margin: f64) -> Result<ReachOrder> {
    let class = DClass::new(g)?;
    let rx = reachable_set_in(x, g, class.clone())?;
    let ry = reachable_set_in(y, g, class)?;
    let xy = rx.contains(y, margin);
    let yx = ry.contains(x, margin);
    Ok(match (xy, yx) {
        (true, true) => ReachOrder::Equivalent,
        (true, false) => ReachOrder::XReachesY,
        (false, true) => ReachOrder::YReachesX,
        (false, false) => ReachOrder::Incomparable,
    })
}
