//! Frames, shape operators, induced volume densities and the Euclidean
//! anisotropic formulation on a parametrized hypersurface.

use serde::Serialize;

use crate::calculus::linalg::{cholesky, inverse, sym_generalized_eigen};
use crate::calculus::{DiffConfig, Matrix, Tensor3, Vector};
use crate::error::{GeomError, Result};
use crate::metric::{connection_at, dual_hessian, dual_norm, legendre_inv, MetricSpec};
use crate::quadrature::ChartGrid;

use super::chart::{chart_orientation, generalized_cross, Tangents};
use super::embedding::{EmbeddingSpec, Orientation, SphereProfile, SurfaceJet};

/// Which of the two unit normals to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WhichNormal {
    /// `ξ`, on the side chosen by the surface orientation.
    Primary,
    /// `ξ₋`, on the opposite side; not `−ξ` for irreversible metrics.
    Opposite,
}

/// A hypersurface together with the ambient metric, the normal side and
/// the (position independent) ambient density `σ̃`.
#[derive(Clone, Debug)]
pub struct Surface<'a> {
    pub embedding: &'a EmbeddingSpec,
    pub metric: &'a MetricSpec,
    pub orientation: Orientation,
    pub ambient_density: f64,
}

#[derive(Clone, Debug)]
pub struct FrameData {
    pub point: Vector,
    pub tangents: Vec<Vector>,
    /// Generalized cross product of the tangents; `|N|` is the Euclidean area element.
    pub cross: Vector,
    /// Euclidean unit conormal on the selected side.
    pub nu_bar: Vector,
    /// `F*(ν̄)`.
    pub dual_norm: f64,
    /// `ν = ν̄ / F*(ν̄)`.
    pub nu: Vector,
    pub xi: Vector,
    pub xi_minus: Vector,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureData {
    pub point: Vector,
    pub xi: Vector,
    pub second_form: Matrix,
    pub induced_metric: Matrix,
    /// Ascending.
    pub principal: Vec<f64>,
    /// Principal directions in chart coordinates, `ĝ`-orthonormal columns.
    pub directions: Matrix,
    pub mean: f64,
    /// `Ĥ_r` for `r = 1, …, n − 1`.
    pub r_means: Vec<f64>,
    /// `σ_ξ`, density of `dμ_ξ` against the chart measure.
    pub density: f64,
    pub asymmetry: f64,
}

#[derive(Clone, Debug)]
pub struct AnisotropicData {
    /// `ν_F = ∇F*(ν̄)`.
    pub normal: Vector,
    /// `S_F = −dν_F` in the chart tangent basis.
    pub weingarten: Matrix,
    pub mean: f64,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Normalized elementary symmetric means `Ĥ_r = ρ_r / C(m, r)`.
pub fn r_means(k: &[f64]) -> Vec<f64> {
    let m = k.len();
    let mut e = vec![0.0; m + 1];
    e[0] = 1.0;
    for &ki in k {
        for r in (1..=m).rev() {
            e[r] += e[r - 1] * ki;
        }
    }
    (1..=m).map(|r| e[r] / binomial(m, r)).collect()
}

impl<'a> Surface<'a> {
    pub fn new(embedding: &'a EmbeddingSpec, metric: &'a MetricSpec, orientation: Orientation) -> Self {
        Surface { embedding, metric, orientation, ambient_density: 1.0 }
    }

    pub fn with_density(mut self, sigma: f64) -> Self {
        self.ambient_density = sigma;
        self
    }

    pub fn dim(&self) -> usize {
        self.embedding.dim()
    }

    fn side(&self, which: WhichNormal) -> Orientation {
        match which {
            WhichNormal::Primary => self.orientation,
            WhichNormal::Opposite => self.orientation.flipped(),
        }
    }

    fn frame_from(&self, u: &Vector, point: Vector, tangents: &Tangents<f64>) -> Result<FrameData> {
        let n = self.dim();
        let cross = generalized_cross(n, tangents);
        let area = cross.norm();
        let scale = self.embedding.scale_length().max(1e-300);
        if !(area > 1e-12 * scale.powi(n as i32 - 1)) {
            return Err(GeomError::ChartDegeneracy(u.to_vec()));
        }
        let sign = self.orientation.sign() * chart_orientation(n);
        let nu_bar = cross.scale(sign / area);
        let fs = dual_norm(self.metric, &point, &nu_bar)?;
        let nu = nu_bar.scale(1.0 / fs);
        let xi = legendre_inv(self.metric, &point, &nu)?;
        let minus = -nu_bar;
        let nu_minus = minus.scale(1.0 / dual_norm(self.metric, &point, &minus)?);
        let xi_minus = legendre_inv(self.metric, &point, &nu_minus)?;
        Ok(FrameData {
            point,
            tangents: tangents[..n - 1].to_vec(),
            cross,
            nu_bar,
            dual_norm: fs,
            nu,
            xi,
            xi_minus,
        })
    }

    pub fn frame_at(&self, u: &Vector) -> Result<FrameData> {
        let (point, tangents) = self.embedding.jet1(u)?;
        self.frame_from(u, point, &tangents)
    }

    /// `σ_ξ = σ̃ F*(ν̄) |N|`, equal to `σ̃ · o · det(ξ, ∂φ)` with `o` the
    /// orientation sign of the selected side.
    pub fn induced_volume_density(&self, u: &Vector) -> Result<f64> {
        let f = self.frame_at(u)?;
        let density = self.ambient_density * f.dual_norm * f.cross.norm();
        if density > 0.0 {
            Ok(density)
        } else {
            Err(GeomError::Orientation(density))
        }
    }

    /// `σ̃ · o · det(ξ, ∂_1φ, …)`, the contraction form of the same density.
    pub fn contracted_volume_density(&self, u: &Vector) -> Result<f64> {
        let f = self.frame_at(u)?;
        let sign = self.orientation.sign() * chart_orientation(self.dim());
        let density = self.ambient_density * sign * f.xi.dot(&f.cross);
        if density > 0.0 {
            Ok(density)
        } else {
            Err(GeomError::Orientation(density))
        }
    }

    pub fn shape_operator_at(&self, u: &Vector, which: WhichNormal) -> Result<CurvatureData> {
        let jet = self.embedding.jet2(u)?;
        let side = Surface { orientation: self.side(which), ..self.clone() };
        side.curvature_from_jet(u, &jet)
    }

    fn curvature_from_jet(&self, u: &Vector, jet: &SurfaceJet) -> Result<CurvatureData> {
        let n = self.dim();
        let m = n - 1;
        let frame = self.frame_from(u, jet.point, &jet.tangents)?;
        let (g, chern) = if self.metric.is_minkowski() {
            (self.metric.fundamental_tensor(&frame.point, &frame.xi)?.g, Tensor3::zeros(n))
        } else {
            let conn = connection_at(self.metric, &frame.point, &frame.xi, &DiffConfig::default())?;
            (conn.g, conn.chern)
        };
        let t = &frame.tangents;
        let second_form = Matrix::from_fn(m, m, |a, b| {
            frame.nu.dot(&(jet.second[a][b] + chern.contract(&t[a], &t[b])))
        });
        let induced_metric = Matrix::from_fn(m, m, |a, b| g.bilinear(&t[a], &t[b]));
        let asymmetry = second_form.asymmetry();
        if asymmetry > 1e-9 * second_form.max_abs().max(1.0) {
            return Err(GeomError::InternalConsistency(format!(
                "second fundamental form asymmetric by {asymmetry:e}"
            )));
        }
        let eig = sym_generalized_eigen(&second_form, &induced_metric)?;
        let principal = eig.values;
        let mean = principal.iter().sum::<f64>() / m as f64;
        let density = self.ambient_density * frame.dual_norm * frame.cross.norm();
        Ok(CurvatureData {
            point: frame.point,
            xi: frame.xi,
            second_form,
            induced_metric,
            r_means: r_means(&principal),
            principal,
            directions: eig.vectors,
            mean,
            density,
            asymmetry,
        })
    }

    /// Mean curvature `H_ξ` from the first variation of the induced density
    /// along `ξ`: `H_ξ = −(∂_t σ_{ξ_t}) / σ_ξ` at `t = 0` under `φ + tξ`,
    /// by central differences with step `h` (relative to the surface size).
    pub fn sigma_mean_curvature(&self, u: &Vector, h: f64) -> Result<f64> {
        if !self.embedding.is_primitive() {
            return Err(GeomError::Unsupported(
                "density variation needs a primitive embedding".into(),
            ));
        }
        let step = h * self.embedding.scale_length();
        let density_at = |t: f64| -> Result<f64> {
            let moved = EmbeddingSpec::Deformed {
                base: Box::new(self.embedding.clone()),
                metric: self.metric.clone(),
                orientation: self.orientation,
                profile: Some(SphereProfile::constant(1.0)),
                ambient: None,
                scale: t,
            };
            Surface { embedding: &moved, ..self.clone() }.induced_volume_density(u)
        };
        let s0 = density_at(0.0)?;
        Ok(-(density_at(step)? - density_at(-step)?) / (2.0 * step * s0))
    }

    /// Euclidean anisotropic quantities for a position-independent metric:
    /// `ν_F = ∇F*(ν̄)`, `S_F = −dν_F = −Hess F*(ν̄) dν̄`, `H_F = tr S_F`.
    pub fn euclidean_anisotropic(&self, u: &Vector) -> Result<AnisotropicData> {
        if !self.metric.is_minkowski() {
            return Err(GeomError::Unsupported(
                "anisotropic Weingarten map needs a position-independent metric".into(),
            ));
        }
        let n = self.dim();
        let m = n - 1;
        let jet = self.embedding.jet2(u)?;
        let t = &jet.tangents;
        let cross = generalized_cross(n, t);
        let sign = self.orientation.sign() * chart_orientation(n);
        let nu_bar = cross.scale(sign / cross.norm());
        let origin = Vector::zeros(n);
        let hess = dual_hessian(self.metric, &origin, &nu_bar)?;

        let restricted = Matrix::from_fn(m, m, |a, b| hess.bilinear(&t[a], &t[b]));
        if cholesky(&restricted).is_err() {
            return Err(GeomError::InvalidNorm(format!(
                "Hess F* is not positive definite on the tangent space at u = {:?}",
                u.to_vec()
            )));
        }

        let fs = dual_norm(self.metric, &origin, &nu_bar)?;
        let normal = legendre_inv(self.metric, &origin, &nu_bar)?.scale(1.0 / fs);

        let gram = Matrix::from_fn(m, m, |a, b| t[a].dot(&t[b]));
        let gram_inv = inverse(&gram)?;
        let h_euclid = Matrix::from_fn(m, m, |a, b| nu_bar.dot(&jet.second[a][b]));
        let mut weingarten = Matrix::zeros(m, m);
        for a in 0..m {
            // ∂_a ν̄ = −h_ab G^{bc} t_c
            let mut dnu = Vector::zeros(n);
            for b in 0..m {
                for c in 0..m {
                    dnu = dnu - t[c] * (h_euclid[(a, b)] * gram_inv[(b, c)]);
                }
            }
            let image = hess.mul_vec(&dnu) * -1.0;
            let proj = Vector::from_fn(m, |b| t[b].dot(&image));
            let coeffs = gram_inv.mul_vec(&proj);
            for b in 0..m {
                weingarten[(b, a)] = coeffs[b];
            }
        }
        let mean = weingarten.trace();
        Ok(AnisotropicData { normal, weingarten, mean })
    }

    /// `∫ f dμ_ξ`, with `f` evaluated on the frame.
    pub fn integrate_frame<F>(&self, grid: &ChartGrid, f: F) -> Result<f64>
    where
        F: Fn(&FrameData) -> Result<f64> + Sync + Send,
    {
        grid.integrate(|u| {
            let frame = self.frame_at(u)?;
            let density = self.ambient_density * frame.dual_norm * frame.cross.norm();
            Ok(f(&frame)? * density)
        })
    }

    /// `∫ dμ_ξ`.
    pub fn area(&self, grid: &ChartGrid) -> Result<f64> {
        self.integrate_frame(grid, |_| Ok(1.0))
    }

    /// Curvature data at every grid node, in node order.
    pub fn curvatures(&self, grid: &ChartGrid, which: WhichNormal) -> Result<Vec<CurvatureData>> {
        grid.map(|u| self.shape_operator_at(u, which))
    }

    /// Enclosed volume (against `σ̃ dx`) in two independent forms:
    /// the pairing form `(o/n) ∫ ν(φ − c) dμ_ξ` and the determinant form
    /// `(σ̃/n) ∫ det(φ − c, ∂φ) du` (chart-orientation corrected).
    pub fn domain_volume(&self, grid: &ChartGrid) -> Result<DomainVolume> {
        let n = self.dim();
        let c = self.embedding.center();
        let chart = chart_orientation(n);
        let o = self.orientation.sign();
        let rows: Vec<(f64, f64)> = grid.map(|u| {
            let frame = self.frame_at(u)?;
            let radial = frame.point - c;
            let det = chart * radial.dot(&frame.cross);
            if !(det > 0.0) {
                return Err(GeomError::Unsupported(format!(
                    "surface is not star-shaped about its center at u = {:?}",
                    u.to_vec()
                )));
            }
            let density = self.ambient_density * frame.dual_norm * frame.cross.norm();
            Ok((o * frame.nu.dot(&radial) * density, self.ambient_density * det))
        })?;
        let w = &grid.weights;
        let pairing: Vec<f64> = rows.iter().zip(w).map(|(r, w)| r.0 * w).collect();
        let determinant: Vec<f64> = rows.iter().zip(w).map(|(r, w)| r.1 * w).collect();
        Ok(DomainVolume {
            pairing: crate::quadrature::pairwise_sum(&pairing) / n as f64,
            determinant: crate::quadrature::pairwise_sum(&determinant) / n as f64,
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DomainVolume {
    pub pairing: f64,
    pub determinant: f64,
}
