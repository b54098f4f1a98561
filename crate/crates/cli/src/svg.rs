//! Hand-written SVG on a fixed 800×700 canvas. The simplex is drawn through the
//! isometric embedding, vertex 1 at the top.

use std::fmt::Write;

use qutrit_reach::embed::embed;

const SCALE: f64 = 500.0;
const CX: f64 = 400.0;
const CY: f64 = 438.0;

pub struct Svg {
    body: String,
}

fn px(p: [f64; 2]) -> (f64, f64) {
    (CX + SCALE * p[0], CY - SCALE * p[1])
}

fn pts(points: &[[f64; 2]]) -> String {
    let mut s = String::with_capacity(points.len() * 16);
    for (k, &p) in points.iter().enumerate() {
        let (x, y) = px(p);
        if k > 0 {
            s.push(' ');
        }
        write!(s, "{x:.3},{y:.3}").unwrap();
    }
    s
}

impl Default for Svg {
    fn default() -> Self {
        Self::new()
    }
}

impl Svg {
    pub fn new() -> Self {
        Self {
            body: String::new(),
        }
    }

    fn open_layer(&mut self, id: &str) {
        writeln!(self.body, r#"<g id="{id}">"#).unwrap();
    }

    fn close_layer(&mut self) {
        self.body.push_str("</g>\n");
    }

    /// Triangle and the three chamber walls.
    pub fn simplex(&mut self) {
        let v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]].map(|e| embed(&e));
        self.open_layer("simplex");
        self.polygon(&v, "fill:none;stroke:#000;stroke-width:1.5");
        self.close_layer();
        self.open_layer("chambers");
        for i in 0..3 {
            let mut mid = [0.5; 3];
            mid[i] = 0.0;
            let mut e = [0.0; 3];
            e[i] = 1.0;
            self.polyline(&[embed(&e), embed(&mid)], "stroke:#999;stroke-width:0.75;stroke-dasharray:2,3");
        }
        self.close_layer();
    }

    pub fn polyline(&mut self, points: &[[f64; 2]], style: &str) {
        writeln!(self.body, r#"<polyline points="{}" style="fill:none;{style}"/>"#, pts(points)).unwrap();
    }

    /// Polyline in canvas pixels, bypassing the simplex embedding.
    pub fn polyline_px(&mut self, points: &[(f64, f64)], style: &str) {
        let mut p = String::new();
        for (k, (x, y)) in points.iter().enumerate() {
            if k > 0 {
                p.push(' ');
            }
            write!(p, "{x:.3},{y:.3}").unwrap();
        }
        writeln!(self.body, r#"<polyline points="{p}" style="fill:none;{style}"/>"#).unwrap();
    }

    pub fn polygon(&mut self, points: &[[f64; 2]], style: &str) {
        writeln!(self.body, r#"<polygon points="{}" style="{style}"/>"#, pts(points)).unwrap();
    }

    pub fn dot(&mut self, p: [f64; 2], r: f64, style: &str) {
        let (x, y) = px(p);
        writeln!(self.body, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{r}" style="{style}"/>"#).unwrap();
    }

    /// Arrow glyph of fixed length in direction `v`.
    pub fn glyph(&mut self, p: [f64; 2], v: [f64; 2], len: f64) {
        let n = v[0].hypot(v[1]);
        if n == 0.0 {
            return;
        }
        let q = [p[0] + len * v[0] / n, p[1] + len * v[1] / n];
        self.polyline(&[p, q], "stroke:#468;stroke-width:0.8");
        self.dot(q, 1.2, "fill:#468");
    }

    pub fn layer(&mut self, id: &str, f: impl FnOnce(&mut Self)) {
        self.open_layer(id);
        f(self);
        self.close_layer();
    }

    pub fn title(&mut self, text: &str) {
        writeln!(
            self.body,
            r#"<text x="20" y="24" style="font-family:sans-serif;font-size:14px">{}</text>"#,
            text.replace('&', "&amp;").replace('<', "&lt;")
        )
        .unwrap();
    }

    pub fn finish(self) -> String {
        format!(
            concat!(
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="700" viewBox="0 0 800 700">"#,
                "\n",
                r#"<rect width="800" height="700" style="fill:#fff"/>"#,
                "\n{}</svg>\n"
            ),
            self.body
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_fits_the_canvas() {
        for e in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
            let (x, y) = px(embed(&e));
            assert!((20.0..780.0).contains(&x) && (20.0..680.0).contains(&y), "{x} {y}");
        }
        let mut s = Svg::new();
        s.simplex();
        let out = s.finish();
        assert!(out.starts_with("<svg") && out.contains(r#"viewBox="0 0 800 700""#));
    }
}
