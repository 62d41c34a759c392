//! Normals, mean curvatures and shape operators of surfaces in S³, both for
//! the round metric and for a Berger metric.
//!
//! Normals follow a fixed orientation: `det(Φ, Φ_s, Φ_t, N) < 0`. With this
//! choice `⟨Φ_x, JΦ_y⟩ = e^{2u}⟨N, JΦ⟩` in conformal coordinates, which is
//! the convention of the compatibility equations in [`crate::families`].

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{complex_j, connection_correction, tangent_part, BergerParams, SpherePoint, TangentVector, Vec4};
use crate::surface::{Jet, ParamSurface};

/// Relative threshold below which the first fundamental form is considered singular.
pub const DEGENERACY_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub s: f64,
    pub t: f64,
    #[serde(with = "vec4_serde")]
    pub normal: Vec4,
    #[serde(with = "vec4_serde")]
    pub berger_normal: Vec4,
    pub nu: f64,
    pub mean_round: f64,
    pub mean_berger: f64,
    pub grad_nu_dot_v: f64,
    pub shape: [[f64; 2]; 2],
}

pub(crate) mod vec4_serde {
    use super::Vec4;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Vec4, s: S) -> Result<S::Ok, S::Error> {
        [v[0], v[1], v[2], v[3]].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec4, D::Error> {
        let a = <[f64; 4]>::deserialize(d)?;
        Ok(Vec4::new(a[0], a[1], a[2], a[3]))
    }
}

/// Round-metric data at one point of a surface.
#[derive(Debug, Clone, Copy)]
pub struct RoundData {
    pub normal: Vec4,
    pub first: Matrix2<f64>,
    pub first_inv: Matrix2<f64>,
    pub second: Matrix2<f64>,
    pub mean: f64,
    pub nu: f64,
    pub grad_nu_dot_v: f64,
}

fn check_metric(first: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    let det = first.determinant();
    let scale = first[(0, 0)] * first[(1, 1)];
    if !(det > DEGENERACY_TOL * scale.max(DEGENERACY_TOL)) {
        return Err(Error::Degenerate(format!("first fundamental form is singular (det = {det:e})")));
    }
    Ok(first.try_inverse().expect("checked determinant"))
}

/// Unit normal in the round metric, completing `(Φ, Φ_s, Φ_t)` by Gram–Schmidt.
pub fn normal_from_jet(jet: &Jet) -> Result<Vec4> {
    let p = jet.p;
    let mut basis: Vec<Vec4> = Vec::with_capacity(3);
    for v in [p, jet.ds, jet.dt] {
        let mut u = v;
        for b in &basis {
            u -= b * b.dot(&u);
        }
        let n = u.norm();
        if n <= 1e-10 * v.norm().max(1e-300) {
            return Err(Error::Degenerate("partial derivatives are linearly dependent".into()));
        }
        basis.push(u / n);
    }
    // the coordinate axis least aligned with the span gives the best-conditioned completion
    let mut best = Vec4::zeros();
    for k in 0..4 {
        let mut u = Vec4::zeros();
        u[k] = 1.0;
        for b in &basis {
            u -= b * b.dot(&u);
        }
        if u.norm() > best.norm() {
            best = u;
        }
    }
    let mut n = best.normalize();
    let det = Matrix4::from_columns(&[p, jet.ds, jet.dt, n]).determinant();
    if det > 0.0 {
        n = -n;
    }
    Ok(n)
}

pub fn round_data(jet: &Jet) -> Result<RoundData> {
    let n = normal_from_jet(jet)?;
    let d = [jet.ds, jet.dt];
    let first = Matrix2::new(d[0].dot(&d[0]), d[0].dot(&d[1]), d[1].dot(&d[0]), d[1].dot(&d[1]));
    let first_inv = check_metric(&first)?;
    let second = Matrix2::new(jet.dss.dot(&n), jet.dst.dot(&n), jet.dst.dot(&n), jet.dtt.dot(&n));
    let mean = 0.5 * (first_inv * second).trace();

    let v = complex_j(&jet.p);
    let nu = n.dot(&v);
    let dv = Vec4::new(d[0].dot(&v), d[1].dot(&v), 0.0, 0.0);
    let dv = nalgebra::Vector2::new(dv[0], dv[1]);
    // N_i = −h_i^k Φ_k, so ν_i = −(h g⁻¹)_i·⟨Φ,V⟩ + ⟨N, JΦ_i⟩
    let weingarten = second * first_inv;
    let dnu = -weingarten * dv + nalgebra::Vector2::new(n.dot(&complex_j(&d[0])), n.dot(&complex_j(&d[1])));
    let grad_nu_dot_v = dnu.dot(&(first_inv * dv));
    Ok(RoundData { normal: n, first, first_inv, second, mean, nu, grad_nu_dot_v })
}

pub fn round_normal<S: ParamSurface + ?Sized>(surface: &S, s: f64, t: f64) -> Result<TangentVector> {
    let jet = surface.jet(s, t);
    let n = normal_from_jet(&jet)?;
    Ok(TangentVector::projected(SpherePoint::normalize(jet.p)?, n))
}

/// `N^b = f [N − ν(1 − κ/4τ²) V]`, `f = √κ / (2√(1 − (1 − κ/4τ²)ν²))`.
pub fn berger_normal_from_round(params: &BergerParams, p: &Vec4, n: &Vec4) -> Result<Vec4> {
    let v = complex_j(p);
    let nu = n.dot(&v);
    let defect = params.bundle_defect();
    let radicand = 1.0 - defect * nu * nu;
    if !(radicand > 0.0) {
        return Err(Error::Degenerate(format!("Berger normal factor is not positive ({radicand:e})")));
    }
    let f = params.kappa().sqrt() / (2.0 * radicand.sqrt());
    Ok((n - v * (nu * defect)) * f)
}

pub fn berger_normal<S: ParamSurface + ?Sized>(
    params: &BergerParams,
    surface: &S,
    s: f64,
    t: f64,
) -> Result<TangentVector> {
    let jet = surface.jet(s, t);
    let n = normal_from_jet(&jet)?;
    let nb = berger_normal_from_round(params, &jet.p, &n)?;
    Ok(TangentVector::projected(SpherePoint::normalize(jet.p)?, nb))
}

pub fn mean_curvature_round<S: ParamSurface + ?Sized>(surface: &S, s: f64, t: f64) -> Result<f64> {
    Ok(round_data(&surface.jet(s, t))?.mean)
}

/// Berger mean curvature from round data through the closed-form relation.
pub fn mean_curvature_berger_lemma(params: &BergerParams, h: f64, nu: f64, grad_nu_dot_v: f64) -> f64 {
    let defect = params.bundle_defect();
    let d = 1.0 - defect * nu * nu;
    params.kappa().sqrt() / 2.0 / d.sqrt() * (h + defect * grad_nu_dot_v / (2.0 * d))
}

/// Berger second fundamental form data at one point.
#[derive(Debug, Clone, Copy)]
pub struct BergerData {
    pub normal: Vec4,
    pub first: Matrix2<f64>,
    pub second: Matrix2<f64>,
    pub mean: f64,
    /// Columns express a Berger-orthonormal frame in terms of `(Φ_s, Φ_t)`.
    pub frame: Matrix2<f64>,
}

impl BergerData {
    pub fn shape_operator(&self) -> Matrix2<f64> {
        self.frame.transpose() * self.second * self.frame
    }

    pub fn frame_vectors(&self, jet: &Jet) -> [Vec4; 2] {
        let f = &self.frame;
        [jet.ds * f[(0, 0)] + jet.dt * f[(1, 0)], jet.ds * f[(0, 1)] + jet.dt * f[(1, 1)]]
    }
}

pub fn berger_data(params: &BergerParams, jet: &Jet) -> Result<BergerData> {
    let n = normal_from_jet(jet)?;
    let nb = berger_normal_from_round(params, &jet.p, &n)?;
    let p = &jet.p;
    let d = [jet.ds, jet.dt];
    let g = |x: &Vec4, y: &Vec4| params.inner(p, x, y);
    let first = Matrix2::new(g(&d[0], &d[0]), g(&d[0], &d[1]), g(&d[1], &d[0]), g(&d[1], &d[1]));
    let first_inv = check_metric(&first)?;
    let dd = [[jet.dss, jet.dst], [jet.dst, jet.dtt]];
    let mut second = Matrix2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let cov = tangent_part(p, &dd[i][j]) + connection_correction(params, p, &d[i], &d[j]);
            second[(i, j)] = g(&cov, &nb);
        }
    }
    let mean = 0.5 * (first_inv * second).trace();

    // Gram–Schmidt in the Berger metric, first vector along Φ_s
    let a = 1.0 / first[(0, 0)].sqrt();
    let proj = first[(0, 1)] / first[(0, 0)];
    let rest = (first[(1, 1)] - proj * first[(0, 1)]).sqrt();
    let frame = Matrix2::new(a, -proj / rest, 0.0, 1.0 / rest);
    Ok(BergerData { normal: nb, first, second, mean, frame })
}

pub fn mean_curvature_berger_direct<S: ParamSurface + ?Sized>(
    params: &BergerParams,
    surface: &S,
    s: f64,
    t: f64,
) -> Result<f64> {
    Ok(berger_data(params, &surface.jet(s, t))?.mean)
}

/// Shape operator `−∇ᵇN^b` in a Berger-orthonormal frame; its trace is `2H^b`.
pub fn shape_operator<S: ParamSurface + ?Sized>(
    params: &BergerParams,
    surface: &S,
    s: f64,
    t: f64,
) -> Result<Matrix2<f64>> {
    Ok(berger_data(params, &surface.jet(s, t))?.shape_operator())
}

pub fn curvature_sample<S: ParamSurface + ?Sized>(
    params: &BergerParams,
    surface: &S,
    s: f64,
    t: f64,
) -> Result<CurvatureSample> {
    let jet = surface.jet(s, t);
    let round = round_data(&jet)?;
    let berger = berger_data(params, &jet)?;
    let shape = berger.shape_operator();
    Ok(CurvatureSample {
        s,
        t,
        normal: round.normal,
        berger_normal: berger.normal,
        nu: round.nu,
        mean_round: round.mean,
        mean_berger: berger.mean,
        grad_nu_dot_v: round.grad_nu_dot_v,
        shape: [[shape[(0, 0)], shape[(0, 1)]], [shape[(1, 0)], shape[(1, 1)]]],
    })
}

impl CurvatureSample {
    fn flipped(mut self) -> Self {
        self.normal = -self.normal;
        self.berger_normal = -self.berger_normal;
        self.nu = -self.nu;
        self.mean_round = -self.mean_round;
        self.mean_berger = -self.mean_berger;
        self.grad_nu_dot_v = -self.grad_nu_dot_v;
        for row in &mut self.shape {
            for x in row {
                *x = -*x;
            }
        }
        self
    }
}

/// Samples a patch, orienting it so that `ν ≥ 0` at the first sample.
pub fn curvature_grid<S: ParamSurface + ?Sized>(
    params: &BergerParams,
    surface: &S,
    points: &[(f64, f64)],
) -> Result<Vec<CurvatureSample>> {
    let mut out = points
        .iter()
        .map(|&(s, t)| curvature_sample(params, surface, s, t))
        .collect::<Result<Vec<_>>>()?;
    if out.first().is_some_and(|c| c.nu < 0.0) {
        out = out.into_iter().map(CurvatureSample::flipped).collect();
    }
    Ok(out)
}
