//! Closed star-shaped hypersurfaces parametrized over the spherical chart.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::real::{seed1, seed2};
use crate::calculus::{Dual, Real, SVec, Vector, VectorField, D1, D2};
use crate::error::{GeomError, Result};
use crate::metric::{dual_norm_generic, legendre_inv_generic, MetricSpec};
use crate::navigation::{affine_flow, WindFieldSpec};

use super::chart::{chart_orientation, generalized_cross, sphere_chart_jet, Tangents};

/// Which side of the hypersurface the conormal points to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    #[default]
    Inner,
    Outer,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Inner => -1.0,
            Orientation::Outer => 1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Inner => Orientation::Outer,
            Orientation::Outer => Orientation::Inner,
        }
    }
}

/// Polynomial of degree ≤ 2 restricted to the unit sphere:
/// `η(p) = c + ⟨l, p⟩ + pᵀ Q p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereProfile {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub linear: Vec<f64>,
    #[serde(default)]
    pub quadratic: Vec<Vec<f64>>,
}

impl SphereProfile {
    pub fn constant(c: f64) -> Self {
        SphereProfile { constant: c, linear: Vec::new(), quadratic: Vec::new() }
    }

    /// Random coefficients uniform in `[-amplitude, amplitude]`.
    pub fn random<R: Rng>(rng: &mut R, n: usize, amplitude: f64) -> Self {
        let mut draw = || rng.gen_range(-amplitude..=amplitude);
        let constant = draw();
        let linear = (0..n).map(|_| draw()).collect();
        let quadratic = (0..n).map(|_| (0..n).map(|_| draw()).collect()).collect();
        SphereProfile { constant, linear, quadratic }
    }

    pub fn eval<T: Real>(&self, p: &SVec<T>) -> T {
        let mut s = T::cst(self.constant);
        for (i, &l) in self.linear.iter().enumerate().take(p.len()) {
            s += p[i] * l;
        }
        for (i, row) in self.quadratic.iter().enumerate().take(p.len()) {
            for (j, &q) in row.iter().enumerate().take(p.len()) {
                s += p[i] * p[j] * q;
            }
        }
        s
    }

    fn validate(&self, n: usize) -> Result<()> {
        let bad_linear = !self.linear.is_empty() && self.linear.len() != n;
        let bad_quadratic = !self.quadratic.is_empty()
            && (self.quadratic.len() != n || self.quadratic.iter().any(|r| r.len() != n));
        if bad_linear || bad_quadratic {
            return Err(GeomError::Config(format!("profile coefficients must have dimension {n}")));
        }
        Ok(())
    }
}

/// A closed hypersurface `φ: S^{n−1} → R^n`, described declaratively.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EmbeddingSpec {
    /// Euclidean round sphere.
    Sphere {
        dim: usize,
        radius: f64,
        #[serde(default)]
        center: Option<Vector>,
    },
    /// `{x : F(x − center) = r}`, or `{x : F(center − x) = r}` when reversed.
    /// `metric` must be position independent.
    FSphere {
        radius: f64,
        metric: MetricSpec,
        #[serde(default)]
        reversed: bool,
        #[serde(default)]
        center: Option<Vector>,
    },
    Ellipsoid {
        semi_axes: Vector,
        #[serde(default)]
        center: Option<Vector>,
    },
    /// Radial graph `r (1 + η(p)) p` over the unit sphere.
    PerturbedSphere {
        dim: usize,
        radius: f64,
        profile: SphereProfile,
        #[serde(default)]
        center: Option<Vector>,
    },
    /// `φ + scale · (η ξ + X(φ))` for a primitive base, with `ξ` its unit
    /// normal under `metric` on the given side and `X` an ambient affine field.
    Deformed {
        base: Box<EmbeddingSpec>,
        metric: MetricSpec,
        #[serde(default)]
        orientation: Orientation,
        #[serde(default)]
        profile: Option<SphereProfile>,
        #[serde(default)]
        ambient: Option<WindFieldSpec>,
        scale: f64,
    },
    /// `ψ_t ∘ φ` for the flow `ψ_t` of an affine field.
    Flowed { base: Box<EmbeddingSpec>, wind: WindFieldSpec, t: f64 },
}

fn center_or_origin(center: &Option<Vector>, n: usize) -> Vector {
    center.unwrap_or_else(|| Vector::zeros(n))
}

impl EmbeddingSpec {
    pub fn sphere(dim: usize, radius: f64) -> Self {
        EmbeddingSpec::Sphere { dim, radius, center: None }
    }

    pub fn f_sphere(metric: MetricSpec, radius: f64, reversed: bool) -> Self {
        EmbeddingSpec::FSphere { radius, metric, reversed, center: None }
    }

    pub fn ellipsoid(semi_axes: Vector) -> Self {
        EmbeddingSpec::Ellipsoid { semi_axes, center: None }
    }

    pub fn dim(&self) -> usize {
        match self {
            EmbeddingSpec::Sphere { dim, .. } | EmbeddingSpec::PerturbedSphere { dim, .. } => *dim,
            EmbeddingSpec::FSphere { metric, .. } => metric.dim(),
            EmbeddingSpec::Ellipsoid { semi_axes, .. } => semi_axes.len(),
            EmbeddingSpec::Deformed { base, .. } | EmbeddingSpec::Flowed { base, .. } => base.dim(),
        }
    }

    pub fn is_primitive(&self) -> bool {
        !matches!(self, EmbeddingSpec::Deformed { .. } | EmbeddingSpec::Flowed { .. })
    }

    /// Reference point the surface is star-shaped around.
    pub fn center(&self) -> Vector {
        let n = self.dim();
        match self {
            EmbeddingSpec::Sphere { center, .. }
            | EmbeddingSpec::FSphere { center, .. }
            | EmbeddingSpec::Ellipsoid { center, .. }
            | EmbeddingSpec::PerturbedSphere { center, .. } => center_or_origin(center, n),
            EmbeddingSpec::Deformed { base, .. } => base.center(),
            EmbeddingSpec::Flowed { base, wind, t } => affine_flow(wind, *t).apply(&base.center()),
        }
    }

    /// A length scale of the surface (used to size difference steps).
    pub fn scale_length(&self) -> f64 {
        match self {
            EmbeddingSpec::Sphere { radius, .. }
            | EmbeddingSpec::FSphere { radius, .. }
            | EmbeddingSpec::PerturbedSphere { radius, .. } => *radius,
            EmbeddingSpec::Ellipsoid { semi_axes, .. } => semi_axes.max_abs(),
            EmbeddingSpec::Deformed { base, .. } => base.scale_length(),
            EmbeddingSpec::Flowed { base, wind, t } => {
                base.scale_length() * affine_flow(wind, *t).linear.norm() / (self.dim() as f64).sqrt()
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if !(2..=4).contains(&n) {
            return Err(GeomError::Config(format!("embedding dimension {n} outside 2..=4")));
        }
        let check_center = |c: &Option<Vector>| match c {
            Some(c) if c.len() != n => {
                Err(GeomError::Config(format!("center has {} components, expected {n}", c.len())))
            }
            _ => Ok(()),
        };
        let positive = |what: &str, r: f64| {
            if r > 0.0 && r.is_finite() {
                Ok(())
            } else {
                Err(GeomError::Config(format!("{what} must be positive, got {r}")))
            }
        };
        match self {
            EmbeddingSpec::Sphere { radius, center, .. } => {
                positive("radius", *radius)?;
                check_center(center)
            }
            EmbeddingSpec::FSphere { radius, metric, center, .. } => {
                positive("radius", *radius)?;
                metric.validate()?;
                if !metric.is_minkowski() {
                    return Err(GeomError::Config(
                        "f-sphere metric must be position independent".into(),
                    ));
                }
                check_center(center)
            }
            EmbeddingSpec::Ellipsoid { semi_axes, center } => {
                for i in 0..n {
                    positive("semi-axis", semi_axes[i])?;
                }
                check_center(center)
            }
            EmbeddingSpec::PerturbedSphere { radius, profile, center, .. } => {
                positive("radius", *radius)?;
                profile.validate(n)?;
                check_center(center)
            }
            EmbeddingSpec::Deformed { base, metric, profile, ambient, .. } => {
                if !base.is_primitive() {
                    return Err(GeomError::Config("deformed embedding needs a primitive base".into()));
                }
                base.validate()?;
                metric.validate()?;
                if metric.dim() != n {
                    return Err(GeomError::Config("deformation metric dimension mismatch".into()));
                }
                if let Some(p) = profile {
                    p.validate(n)?;
                }
                if let Some(w) = ambient {
                    w.validate(n)?;
                }
                Ok(())
            }
            EmbeddingSpec::Flowed { base, wind, .. } => {
                base.validate()?;
                wind.validate(n)
            }
        }
    }

    /// Radius function of a primitive surface along the unit direction `p`.
    fn radial<T: Real>(&self, p: &SVec<T>) -> Result<T> {
        match self {
            EmbeddingSpec::Sphere { radius, .. } => Ok(T::cst(*radius)),
            EmbeddingSpec::Ellipsoid { .. } => Ok(T::cst(1.0)),
            EmbeddingSpec::FSphere { radius, metric, reversed, .. } => {
                let origin = SVec::zeros(p.len());
                let dir = if *reversed { -*p } else { *p };
                Ok(T::cst(*radius) / metric.eval(&origin, &dir)?)
            }
            EmbeddingSpec::PerturbedSphere { radius, profile, .. } => {
                Ok((profile.eval(p) + 1.0) * *radius)
            }
            _ => Err(GeomError::InternalConsistency("radial() on a composite embedding".into())),
        }
    }

    fn linear_part<T: Real>(&self, v: SVec<T>) -> SVec<T> {
        match self {
            EmbeddingSpec::Ellipsoid { semi_axes, .. } => SVec::from_fn(v.len(), |i| v[i] * semi_axes[i]),
            _ => v,
        }
    }

    /// Point and chart tangents of a primitive surface, over any scalar type.
    fn primitive_jet<T: Real>(&self, u: &SVec<T>) -> Result<(SVec<T>, Tangents<T>)> {
        let n = self.dim();
        let (p, pt) = sphere_chart_jet(n, u);
        let rho = self.radial(&p)?;
        let c = SVec::lift(&self.center());
        let mut tangents = pt;
        for a in 0..n - 1 {
            let pd = SVec::from_fn(n, |i| Dual::new(p[i], pt[a][i]));
            let drho = self.radial(&pd)?.d;
            tangents[a] = self.linear_part(p.scale(drho) + pt[a].scale(rho));
        }
        Ok((c + self.linear_part(p.scale(rho)), tangents))
    }

    /// `φ(u)` over any scalar type.
    pub fn point<T: Real>(&self, u: &SVec<T>) -> Result<SVec<T>> {
        match self {
            EmbeddingSpec::Deformed { base, metric, orientation, profile, ambient, scale } => {
                let n = self.dim();
                let (phi, tangents) = base.primitive_jet(u)?;
                let mut out = phi;
                if let Some(profile) = profile {
                    let xi = unit_normal_generic(metric, *orientation, n, &phi, &tangents)?;
                    let (p, _) = sphere_chart_jet(n, u);
                    out = out + xi.scale(profile.eval(&p) * *scale);
                }
                if let Some(field) = ambient {
                    out = out + field.eval(&phi) * *scale;
                }
                Ok(out)
            }
            EmbeddingSpec::Flowed { base, wind, t } => {
                let flow = affine_flow(wind, *t);
                Ok(flow.linear.mul_vec(&base.point(u)?) + SVec::lift(&flow.offset))
            }
            _ => Ok(self.primitive_jet(u)?.0),
        }
    }

    /// `φ` and `∂_a φ` at `u`.
    pub fn jet1(&self, u: &Vector) -> Result<(Vector, Tangents<f64>)> {
        let n = self.dim();
        let z = Vector::zeros(n);
        let mut tangents = [z, z, z];
        let mut phi = z;
        for (a, t) in tangents.iter_mut().enumerate().take(n - 1) {
            let us = SVec::from_fn(n - 1, |b| seed1(u[b], a == b));
            let r: SVec<D1> = self.point(&us)?;
            phi = r.re();
            *t = Vector::from_fn(n, |i| r[i].d);
        }
        Ok((phi, tangents))
    }

    /// `φ`, `∂_a φ` and `∂_a ∂_b φ` at `u`.
    pub fn jet2(&self, u: &Vector) -> Result<SurfaceJet> {
        let n = self.dim();
        let m = n - 1;
        let z = Vector::zeros(n);
        let mut jet = SurfaceJet { point: z, tangents: [z, z, z], second: [[z; 3]; 3] };
        for a in 0..m {
            for b in a..m {
                let us = SVec::from_fn(m, |c| seed2(u[c], c == a, c == b));
                let r: SVec<D2> = self.point(&us)?;
                jet.point = r.re();
                jet.tangents[a] = Vector::from_fn(n, |i| r[i].v.d);
                jet.tangents[b] = Vector::from_fn(n, |i| r[i].d.v);
                let s = Vector::from_fn(n, |i| r[i].d.d);
                jet.second[a][b] = s;
                jet.second[b][a] = s;
            }
        }
        Ok(jet)
    }
}

#[derive(Clone, Debug)]
pub struct SurfaceJet {
    pub point: Vector,
    pub tangents: Tangents<f64>,
    pub second: [[Vector; 3]; 3],
}

/// Unit normal `ξ = L⁻¹(ν)` with `ν = ν̄/F*(ν̄)` over any scalar type, for the
/// side selected by `orientation`.
pub(crate) fn unit_normal_generic<T: Real>(
    metric: &MetricSpec,
    orientation: Orientation,
    n: usize,
    x: &SVec<T>,
    tangents: &Tangents<T>,
) -> Result<SVec<T>> {
    let cross = generalized_cross(n, tangents);
    let len = cross.norm();
    if len.re() <= 1e-300 {
        return Err(GeomError::ChartDegeneracy(Vec::new()));
    }
    let sign = orientation.sign() * chart_orientation(n);
    let nu_bar = cross.scale(len.recip() * sign);
    let nu = nu_bar.scale(dual_norm_generic(metric, x, &nu_bar)?.recip());
    legendre_inv_generic(metric, x, &nu)
}
