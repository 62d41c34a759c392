//! Closed-form geodesics of the Berger spheres and the geodesic reflections
//! that are ambient isometries.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::geometry::{complex_j, from_complex, tangent_part, BergerParams, Isometry, SpherePoint, TangentVector, Vec4};

/// Relative tolerance used to classify a velocity as horizontal or vertical.
pub const CLASSIFY_TOL: f64 = 1e-10;

/// Unit-speed geodesic through `(1, 0)`: `theta` is the angle between the
/// initial velocity and the vertical direction, `phi` the horizontal phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSpec {
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeodesicKind {
    Horizontal,
    Vertical,
    Generic,
}

impl GeodesicSpec {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return domain(format!("theta must lie in [0, π], got {theta}"));
        }
        Ok(Self { theta, phi })
    }

    pub fn horizontal(phi: f64) -> Self {
        Self { theta: PI / 2.0, phi }
    }

    pub fn vertical() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    /// `λ = √(sin²θ + (4τ²/κ) cos²θ)`.
    pub fn lambda(&self, params: &BergerParams) -> f64 {
        let (s, c) = self.theta.sin_cos();
        (s * s + 4.0 * params.tau() * params.tau() / params.kappa() * c * c).sqrt()
    }

    /// Unit initial velocity at `(1, 0)`.
    pub fn initial_velocity(&self, params: &BergerParams) -> Vec4 {
        let (k, t) = (params.kappa(), params.tau());
        let z = Complex64::new(0.0, k / (4.0 * t) * self.theta.cos());
        let w = Complex64::from_polar(k.sqrt() / 2.0 * self.theta.sin(), self.phi);
        from_complex(z, w)
    }

    fn coefficients(&self, params: &BergerParams) -> Coefficients {
        let (k, t) = (params.kappa(), params.tau());
        let lambda = self.lambda(params);
        let (sin_t, cos_t) = self.theta.sin_cos();
        Coefficients {
            drift: (k - 4.0 * t * t) / (4.0 * t) * cos_t,
            freq: lambda * k.sqrt() / 2.0,
            z_imag: 2.0 * t / k.sqrt() * cos_t / lambda,
            w_amp: sin_t / lambda,
        }
    }

    /// Position, velocity and acceleration at arclength `s`.
    pub fn jet(&self, params: &BergerParams, s: f64) -> [Vec4; 3] {
        let c = self.coefficients(params);
        let (sb, cb) = (c.freq * s).sin_cos();
        let rot1 = Complex64::from_polar(1.0, c.drift * s);
        let rot2 = Complex64::from_polar(1.0, self.phi + c.drift * s);
        let i = Complex64::i();

        let g1 = Complex64::new(cb, c.z_imag * sb);
        let g1p = Complex64::new(-c.freq * sb, c.z_imag * c.freq * cb);
        let g2 = c.w_amp * sb;
        let g2p = c.w_amp * c.freq * cb;

        let z1 = rot1 * g1;
        let z2 = rot2 * g2;
        let z1p = i * c.drift * z1 + rot1 * g1p;
        let z2p = i * c.drift * z2 + rot2 * g2p;
        // z = e^{iα} g with g'' = −b² g ⇒ z'' = 2ia z' + (a² − b²) z
        let a2b2 = c.drift * c.drift - c.freq * c.freq;
        let z1pp = 2.0 * i * c.drift * z1p + a2b2 * z1;
        let z2pp = 2.0 * i * c.drift * z2p + a2b2 * z2;
        [from_complex(z1, z2), from_complex(z1p, z2p), from_complex(z1pp, z2pp)]
    }
}

struct Coefficients {
    drift: f64,
    freq: f64,
    z_imag: f64,
    w_amp: f64,
}

pub fn geodesic_point(params: &BergerParams, spec: &GeodesicSpec, s: f64) -> SpherePoint {
    let [p, _, _] = spec.jet(params, s);
    SpherePoint::normalize(p).expect("closed-form geodesic stays on S³")
}

pub fn geodesic_velocity(params: &BergerParams, spec: &GeodesicSpec, s: f64) -> TangentVector {
    let [p, v, _] = spec.jet(params, s);
    TangentVector::projected(SpherePoint::normalize(p).expect("on S³"), v)
}

/// `(vertical_length, horizontal_length) = (8|τ|π/κ, 4π/√κ)`.
pub fn geodesic_lengths(params: &BergerParams) -> (f64, f64) {
    (8.0 * params.tau().abs() * PI / params.kappa(), 4.0 * PI / params.kappa().sqrt())
}

/// `h_φ(s)`: horizontal geodesic through `(1, 0)`.
pub fn horizontal_geodesic(params: &BergerParams, phi: f64, s: f64) -> Vec4 {
    let (sn, cs) = (params.kappa().sqrt() / 2.0 * s).sin_cos();
    from_complex(Complex64::new(cs, 0.0), Complex64::from_polar(sn, phi))
}

/// `v(s)`: the vertical geodesic (Hopf fiber) through `(1, 0)`.
pub fn vertical_geodesic(params: &BergerParams, s: f64) -> Vec4 {
    from_complex(
        Complex64::from_polar(1.0, params.kappa() / (4.0 * params.tau()) * s),
        Complex64::new(0.0, 0.0),
    )
}

/// Berger covariant acceleration `∇ᵇ_{γ'}γ'` from position, velocity and flat acceleration.
pub fn covariant_acceleration(params: &BergerParams, p: &Vec4, v: &Vec4, a: &Vec4) -> Vec4 {
    let vj = complex_j(p);
    let jv = tangent_part(p, &complex_j(v));
    tangent_part(p, a) + jv * (2.0 * params.vertical_excess() * v.dot(&vj))
}

/// `r_v(z, w) = (z, −w)`: reflection across the vertical geodesic through `(1, 0)`.
pub fn reflect_vertical(p: &SpherePoint) -> SpherePoint {
    vertical_reflection().apply(p)
}

/// `R_φ(z, w) = (z̄, e^{2iφ} w̄)`: reflection across `h_φ`.
pub fn reflect_horizontal(phi: f64, p: &SpherePoint) -> SpherePoint {
    horizontal_reflection(phi).apply(p)
}

pub fn vertical_reflection() -> Isometry {
    Isometry::rotation(0.0, PI)
}

pub fn horizontal_reflection(phi: f64) -> Isometry {
    Isometry::conj_rotation(0.0, 2.0 * phi)
}

pub fn classify(v0: &TangentVector) -> Result<GeodesicKind> {
    let v = v0.vec();
    let n = v.norm();
    if n == 0.0 {
        return domain("cannot classify a geodesic with zero initial velocity");
    }
    let vf = v0.base().hopf();
    let along = v.dot(&vf);
    if along.abs() <= CLASSIFY_TOL * n {
        Ok(GeodesicKind::Horizontal)
    } else if (v - vf * along).norm() <= CLASSIFY_TOL * n {
        Ok(GeodesicKind::Vertical)
    } else {
        Ok(GeodesicKind::Generic)
    }
}

/// A geodesic with arbitrary base point and initial velocity, obtained by
/// moving the closed form at `(1, 0)` with a U₊(2) element.
#[derive(Debug, Clone, Copy)]
pub struct Geodesic {
    params: BergerParams,
    frame: Isometry,
    spec: GeodesicSpec,
    speed: f64,
}

impl Geodesic {
    pub fn from_initial(params: &BergerParams, v0: &TangentVector) -> Result<Self> {
        let p = v0.base();
        let (a, b) = (p.z(), p.w());
        let frame = Isometry::unitary([[a, -b.conj()], [b, a.conj()]])?;
        let local = frame.inverse().apply_vec(v0.vec());
        let (k, t) = (params.kappa(), params.tau());
        let vertical = local[1] * 4.0 * t / k;
        let horizontal = (local[2] * local[2] + local[3] * local[3]).sqrt() * 2.0 / k.sqrt();
        let speed = vertical.hypot(horizontal);
        if speed == 0.0 {
            return domain("geodesic needs a nonzero initial velocity");
        }
        let spec = GeodesicSpec { theta: horizontal.atan2(vertical), phi: local[3].atan2(local[2]) };
        Ok(Self { params: *params, frame, spec, speed })
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn spec(&self) -> &GeodesicSpec {
        &self.spec
    }

    pub fn point(&self, s: f64) -> SpherePoint {
        self.frame.apply(&geodesic_point(&self.params, &self.spec, self.speed * s))
    }

    pub fn velocity(&self, s: f64) -> Vec4 {
        let [_, v, _] = self.spec.jet(&self.params, self.speed * s);
        self.frame.apply_vec(&v) * self.speed
    }
}
