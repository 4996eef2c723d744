//! Closed-form P1 element integrals on triangles and segments.

use crate::error::{FsiError, Result};

/// Linear triangle with precomputed barycentric gradients.
#[derive(Debug, Clone, Copy)]
pub struct P1Triangle {
    pub area: f64,
    /// Gradient of each barycentric coordinate (constant on the element).
    pub grads: [[f64; 2]; 3],
}

impl P1Triangle {
    /// Vertices must be counter-clockwise.
    pub fn new(v: [[f64; 2]; 3]) -> Result<Self> {
        let twice = (v[1][0] - v[0][0]) * (v[2][1] - v[0][1])
            - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]);
        let area = 0.5 * twice;
        let scale = (v[1][0] - v[0][0])
            .abs()
            .max((v[2][1] - v[0][1]).abs())
            .max((v[2][0] - v[0][0]).abs())
            .max((v[1][1] - v[0][1]).abs());
        if !(area > 1e-14 * scale * scale) {
            return Err(FsiError::DegenerateElement { area });
        }
        let mut grads = [[0.0; 2]; 3];
        for i in 0..3 {
            let j = (i + 1) % 3;
            let k = (i + 2) % 3;
            grads[i] = [(v[j][1] - v[k][1]) / twice, (v[k][0] - v[j][0]) / twice];
        }
        Ok(P1Triangle { area, grads })
    }

    /// `∫ φ_i φ_j`.
    pub fn mass(&self) -> [[f64; 3]; 3] {
        let d = self.area / 6.0;
        let o = self.area / 12.0;
        [[d, o, o], [o, d, o], [o, o, d]]
    }

    /// `∫ ∇φ_i · ∇φ_j`.
    pub fn stiffness(&self) -> [[f64; 3]; 3] {
        let mut k = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                k[i][j] = self.area
                    * (self.grads[i][0] * self.grads[j][0] + self.grads[i][1] * self.grads[j][1]);
            }
        }
        k
    }

    /// `∫ φ_i`.
    pub fn load(&self) -> [f64; 3] {
        [self.area / 3.0; 3]
    }

    /// `∫ φ_i ∂_c φ_j`, i.e. the mixed P1/P1 gradient operator for component `c`.
    pub fn gradient_operator(&self, c: usize) -> [[f64; 3]; 3] {
        let mut g = [[0.0; 3]; 3];
        for row in g.iter_mut() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.area / 3.0 * self.grads[j][c];
            }
        }
        g
    }

    /// Maps barycentric coordinates to physical space.
    pub fn point(v: &[[f64; 2]; 3], bary: [f64; 3]) -> [f64; 2] {
        [
            bary[0] * v[0][0] + bary[1] * v[1][0] + bary[2] * v[2][0],
            bary[0] * v[0][1] + bary[1] * v[1][1] + bary[2] * v[2][1],
        ]
    }
}

/// Edge-midpoint rule, exact for quadratics: (barycentric point, weight / area).
pub const MIDPOINT_RULE: [([f64; 3], f64); 3] = [
    ([0.5, 0.5, 0.0], 1.0 / 3.0),
    ([0.0, 0.5, 0.5], 1.0 / 3.0),
    ([0.5, 0.0, 0.5], 1.0 / 3.0),
];

/// Mass and stiffness of a 1D linear segment of length `len`.
pub fn segment_matrices(len: f64) -> ([[f64; 2]; 2], [[f64; 2]; 2]) {
    let m = [[len / 3.0, len / 6.0], [len / 6.0, len / 3.0]];
    let k = [[1.0 / len, -1.0 / len], [-1.0 / len, 1.0 / len]];
    (m, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const UNIT: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

    #[test]
    fn unit_triangle_mass() {
        let t = P1Triangle::new(UNIT).unwrap();
        assert_eq!(t.area, 0.5);
        let m = t.mass();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 2.0 } else { 1.0 } * 0.5 / 12.0;
                assert_relative_eq!(m[i][j], want, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn mass_sums_to_area() {
        let t = P1Triangle::new([[0.3, 0.1], [2.0, 0.4], [0.7, 1.9]]).unwrap();
        let s: f64 = t.mass().iter().flatten().sum();
        assert_relative_eq!(s, t.area, epsilon = 1e-14);
    }

    #[test]
    fn stiffness_kills_constants() {
        let t = P1Triangle::new([[0.3, 0.1], [2.0, 0.4], [0.7, 1.9]]).unwrap();
        for row in t.stiffness() {
            assert!(row.iter().sum::<f64>().abs() < 1e-13);
        }
    }

    #[test]
    fn gradients_reproduce_linear_functions() {
        let v = [[0.3, 0.1], [2.0, 0.4], [0.7, 1.9]];
        let t = P1Triangle::new(v).unwrap();
        let f = |p: [f64; 2]| 2.0 * p[0] - 3.0 * p[1] + 1.0;
        let mut g = [0.0; 2];
        for i in 0..3 {
            g[0] += f(v[i]) * t.grads[i][0];
            g[1] += f(v[i]) * t.grads[i][1];
        }
        assert_relative_eq!(g[0], 2.0, epsilon = 1e-13);
        assert_relative_eq!(g[1], -3.0, epsilon = 1e-13);
    }

    #[test]
    fn mass_matches_midpoint_quadrature() {
        let v = [[0.3, 0.1], [2.0, 0.4], [0.7, 1.9]];
        let t = P1Triangle::new(v).unwrap();
        let m = t.mass();
        for i in 0..3 {
            for j in 0..3 {
                let q: f64 = MIDPOINT_RULE
                    .iter()
                    .map(|(b, w)| w * t.area * b[i] * b[j])
                    .sum();
                assert_relative_eq!(q, m[i][j], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn degenerate_rejected() {
        let err = P1Triangle::new([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap_err();
        assert!(matches!(err, FsiError::DegenerateElement { .. }));
        assert!(P1Triangle::new([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).is_err());
    }

    #[test]
    fn segment_identities() {
        let (m, k) = segment_matrices(0.25);
        assert_relative_eq!(m.iter().flatten().sum::<f64>(), 0.25, epsilon = 1e-15);
        assert_eq!(k[0][0] + k[0][1], 0.0);
    }
}
