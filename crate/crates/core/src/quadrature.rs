//! Quadrature rules on chart domains and unit spheres, plus deterministic
//! parallel reduction.

use rayon::prelude::*;

use crate::calculus::Vector;
use crate::error::{GeomError, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1, "Gauss–Legendre rule needs at least one node");
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-16 {
                let (_, d) = legendre_with_derivative(m, z);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[m - 1 - i] = z;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(m: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    let d = m as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// A tensor-product grid over the spherical chart of `S^{d}` (`d = n − 1`),
/// in chart coordinates `u`, with weights for the flat measure `du`.
///
/// Polar angles use Gauss–Legendre nodes (never hitting the poles) and the
/// azimuth uses the periodic trapezoid rule, offset by half a step.
#[derive(Clone, Debug)]
pub struct ChartGrid {
    pub order: usize,
    pub nodes: Vec<Vector>,
    pub weights: Vec<f64>,
}

impl ChartGrid {
    /// `order` is the number of polar nodes; the azimuth gets `2·order`.
    /// For `d = 1` the circle gets `2·order` nodes.
    pub fn sphere_chart(ambient_dim: usize, order: usize) -> Result<ChartGrid> {
        if order < 2 {
            return Err(GeomError::Config(format!("grid order must be at least 2, got {order}")));
        }
        let two_pi = 2.0 * std::f64::consts::PI;
        let m_az = 2 * order;
        let h = two_pi / m_az as f64;
        let azimuth: Vec<f64> = (0..m_az).map(|k| (k as f64 + 0.5) * h).collect();
        let (gl, glw) = gauss_legendre(order);
        let half_pi = std::f64::consts::FRAC_PI_2;
        let polar: Vec<(f64, f64)> =
            gl.iter().zip(&glw).map(|(&z, &w)| (half_pi * (z + 1.0), half_pi * w)).collect();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        match ambient_dim {
            2 => {
                for &a in &azimuth {
                    nodes.push(Vector::from_slice(&[a]));
                    weights.push(h);
                }
            }
            3 => {
                for &(th, wt) in &polar {
                    for &a in &azimuth {
                        nodes.push(Vector::from_slice(&[th, a]));
                        weights.push(wt * h);
                    }
                }
            }
            4 => {
                for &(chi, wc) in &polar {
                    for &(th, wt) in &polar {
                        for &a in &azimuth {
                            nodes.push(Vector::from_slice(&[chi, th, a]));
                            weights.push(wc * wt * h);
                        }
                    }
                }
            }
            d => return Err(GeomError::Config(format!("ambient dimension {d} outside 2..=4"))),
        }
        Ok(ChartGrid { order, nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_k f(u_k)`, evaluated in parallel and reduced in a fixed order.
    pub fn integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&Vector) -> Result<f64> + Sync + Send,
    {
        let terms: Vec<f64> = self
            .nodes
            .par_iter()
            .zip(self.weights.par_iter())
            .map(|(u, &w)| f(u).map(|v| w * v))
            .collect::<Result<_>>()?;
        Ok(pairwise_sum(&terms))
    }

    /// Evaluate `f` at every node in parallel; output order matches `nodes`.
    pub fn map<R, F>(&self, f: F) -> Result<Vec<R>>
    where
        R: Send,
        F: Fn(&Vector) -> Result<R> + Sync + Send,
    {
        self.nodes.par_iter().map(f).collect()
    }
}

/// Point on the unit sphere `S^{n−1}` at spherical chart coordinates `u`.
pub fn unit_sphere_point(ambient_dim: usize, u: &Vector) -> Vector {
    match ambient_dim {
        2 => Vector::from_slice(&[u[0].cos(), u[0].sin()]),
        3 => {
            let (st, ct) = u[0].sin_cos();
            let (sp, cp) = u[1].sin_cos();
            Vector::from_slice(&[st * cp, st * sp, ct])
        }
        _ => {
            let (sc, cc) = u[0].sin_cos();
            let (st, ct) = u[1].sin_cos();
            let (sp, cp) = u[2].sin_cos();
            Vector::from_slice(&[sc * st * cp, sc * st * sp, sc * ct, cc])
        }
    }
}

/// Jacobian factor of the spherical chart: `|det(p, ∂p)|` for the unit sphere.
pub fn sphere_area_element(ambient_dim: usize, u: &Vector) -> f64 {
    match ambient_dim {
        2 => 1.0,
        3 => u[0].sin(),
        _ => u[0].sin().powi(2) * u[1].sin(),
    }
}

/// Integral of `f` over the unit sphere `S^{n−1}` with the round measure.
pub fn integrate_unit_sphere<F>(ambient_dim: usize, order: usize, f: F) -> Result<f64>
where
    F: Fn(&Vector) -> Result<f64> + Sync + Send,
{
    let grid = ChartGrid::sphere_chart(ambient_dim, order)?;
    grid.integrate(|u| Ok(f(&unit_sphere_point(ambient_dim, u))? * sphere_area_element(ambient_dim, u)))
}

/// Pairwise (tree) summation; the association order depends only on the
/// length, so results are bit-stable regardless of how terms were produced.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n if n <= 8 => v.iter().fold(0.0, |a, &b| a + b),
        n => {
            let (l, r) = v.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}

/// Volume of the Euclidean unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    use std::f64::consts::PI;
    match n {
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        4 => PI * PI / 2.0,
        _ => unit_ball_volume(n - 2) * 2.0 * PI / n as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(5);
        let sum_w: f64 = w.iter().sum();
        assert!((sum_w - 2.0).abs() < 1e-14);
        // ∫ x^8 = 2/9 is within the degree-9 exactness of a 5-node rule.
        let i8: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((i8 - 2.0 / 9.0).abs() < 1e-14);
        let (x, _) = gauss_legendre(4);
        assert!((x[3] - (3.0 / 7.0 + 2.0 / 7.0 * 1.2f64.sqrt()).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn sphere_areas() {
        for (n, area) in [(2, 2.0 * std::f64::consts::PI), (3, 4.0 * std::f64::consts::PI), (4, 2.0 * std::f64::consts::PI.powi(2))] {
            let a = integrate_unit_sphere(n, 16, |_| Ok(1.0)).unwrap();
            assert!((a - area).abs() < 1e-12, "n = {n}: {a}");
        }
    }

    #[test]
    fn chart_points_lie_on_sphere() {
        for n in 2..=4 {
            let g = ChartGrid::sphere_chart(n, 4).unwrap();
            for u in &g.nodes {
                assert!((unit_sphere_point(n, u).norm() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
    }
}
