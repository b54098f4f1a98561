use serde::Serialize;

/// Closed polygon in the embedded plane; the last vertex connects to the first.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Polygon {
    pub vertices: Vec<[f64; 2]>,
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(crate) fn seg_dist(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let l2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if l2 > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / l2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (ap[0] - t * ab[0]).hypot(ap[1] - t * ab[1])
}

/// Proper or touching intersection of two closed segments.
pub(crate) fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let d1 = cross(sub(b, a), sub(c, a));
    let d2 = cross(sub(b, a), sub(d, a));
    let d3 = cross(sub(d, c), sub(a, c));
    let d4 = cross(sub(d, c), sub(b, c));
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return true;
    }
    let on = |p: [f64; 2], q: [f64; 2], r: [f64; 2], v: f64| {
        v == 0.0
            && r[0] >= p[0].min(q[0])
            && r[0] <= p[0].max(q[0])
            && r[1] >= p[1].min(q[1])
            && r[1] <= p[1].max(q[1])
    };
    on(a, b, c, d1) || on(a, b, d, d2) || on(c, d, a, d3) || on(c, d, b, d4)
}

impl Polygon {
    pub fn new(vertices: Vec<[f64; 2]>) -> Self {
        Self { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Even-odd rule.
    pub fn contains_strict(&self, p: [f64; 2]) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                if p[0] < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn boundary_distance(&self, p: [f64; 2]) -> f64 {
        self.edges().map(|(a, b)| seg_dist(p, a, b)).fold(f64::INFINITY, f64::min)
    }

    /// Positive inside, negative outside.
    pub fn signed_distance(&self, p: [f64; 2]) -> f64 {
        let d = self.boundary_distance(p);
        if self.contains_strict(p) {
            d
        } else {
            -d
        }
    }

    /// Inside or within `margin` of the boundary.
    pub fn contains(&self, p: [f64; 2], margin: f64) -> bool {
        self.contains_strict(p) || self.boundary_distance(p) <= margin
    }

    /// Shoelace area, positive for counterclockwise order.
    pub fn signed_area(&self) -> f64 {
        0.5 * self.edges().map(|(a, b)| cross(a, b)).sum::<f64>()
    }

    /// No two non-adjacent edges meet. Quadratic in the vertex count, pruned by
    /// bounding boxes.
    pub fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        if n < 3 {
            return false;
        }
        let edges: Vec<_> = self.edges().collect();
        let boxes: Vec<[f64; 4]> = edges
            .iter()
            .map(|(a, b)| [a[0].min(b[0]), a[0].max(b[0]), a[1].min(b[1]), a[1].max(b[1])])
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| boxes[i][0].partial_cmp(&boxes[j][0]).unwrap());
        for (k, &i) in order.iter().enumerate() {
            for &j in &order[k + 1..] {
                if boxes[j][0] > boxes[i][1] {
                    break;
                }
                if (i + 1) % n == j || (j + 1) % n == i {
                    continue;
                }
                if boxes[j][3] < boxes[i][2] || boxes[j][2] > boxes[i][3] {
                    continue;
                }
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                if segments_intersect(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square() {
        let p = Polygon::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        assert!(p.contains_strict([0.5, 0.5]));
        assert!(!p.contains_strict([1.5, 0.5]));
        assert!(p.contains([1.0 + 1e-9, 0.5], 1e-8));
        assert!((p.signed_distance([0.5, 0.25]) - 0.25).abs() < 1e-15);
        assert!((p.signed_area() - 1.0).abs() < 1e-15);
        assert!(p.is_simple());
        let bow = Polygon::new(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]);
        assert!(!bow.is_simple());
    }
}
