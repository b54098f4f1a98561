//! Isometric picture of the 2-simplex in the plane.

const S2: f64 = std::f64::consts::SQRT_2;

/// Rows `(0, −1/√2, 1/√2)` and `(√(2/3), −1/√6, −1/√6)`.
pub const P: [[f64; 3]; 2] = [
    [0.0, -1.0 / S2, 1.0 / S2],
    [0.816_496_580_927_726, -0.408_248_290_463_863, -0.408_248_290_463_863],
];

/// Planar coordinates of a point (or a sum-free direction) in `ℝ³`.
pub fn embed(x: &[f64]) -> [f64; 2] {
    [
        P[0][0] * x[0] + P[0][1] * x[1] + P[0][2] * x[2],
        P[1][0] * x[0] + P[1][1] * x[1] + P[1][2] * x[2],
    ]
}

/// Inverse of [`embed`] on the plane `Σx = 1`.
pub fn unembed(p: [f64; 2]) -> [f64; 3] {
    let mut x = [1.0 / 3.0; 3];
    for (i, xi) in x.iter_mut().enumerate() {
        *xi += P[0][i] * p[0] + P[1][i] * p[1];
    }
    x
}

/// Inverse of [`embed`] on sum-free directions.
pub fn unembed_dir(v: [f64; 2]) -> [f64; 3] {
    let mut x = [0.0; 3];
    for (i, xi) in x.iter_mut().enumerate() {
        *xi = P[0][i] * v[0] + P[1][i] * v[1];
    }
    x
}
