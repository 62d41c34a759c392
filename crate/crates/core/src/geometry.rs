//! Berger sphere ambient geometry.
//!
//! Points of S³ ⊂ ℂ² are stored as real 4-vectors `(Re z, Im z, Re w, Im w)`;
//! the complex structure `J(z, w) = (iz, iw)` acts as a fixed block matrix.

use nalgebra::{Matrix2, Matrix4, Vector3, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub type Vec4 = Vector4<f64>;
pub type Mat4 = Matrix4<f64>;

/// Tolerance on `κ = 4τ²` for the round-sphere flag.
pub const ROUND_TOL: f64 = 1e-12;
/// Tolerance on `|p| = 1` for sphere points.
pub const SPHERE_TOL: f64 = 1e-12;
/// Tolerance on round-metric orthogonality of tangent vectors.
pub const TANGENT_TOL: f64 = 1e-10;
/// Tolerance on `AᵀA = Id` and `AJ = ±JA`.
pub const ISOMETRY_TOL: f64 = 1e-12;
/// Finite-difference step for directional derivatives of vector fields.
pub const FIELD_FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BergerParams {
    kappa: f64,
    tau: f64,
}

impl BergerParams {
    pub fn new(kappa: f64, tau: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return domain(format!("kappa must be positive, got {kappa}"));
        }
        if !tau.is_finite() || tau == 0.0 {
            return domain(format!("tau must be nonzero, got {tau}"));
        }
        Ok(Self { kappa, tau })
    }

    /// The round sphere of radius 1: κ = 4, τ = 1.
    pub fn round() -> Self {
        Self { kappa: 4.0, tau: 1.0 }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn is_round(&self) -> bool {
        (self.kappa - 4.0 * self.tau * self.tau).abs() <= ROUND_TOL * self.kappa.max(1.0)
    }

    /// `4τ²/κ − 1`, the coefficient of the vertical correction.
    pub fn vertical_excess(&self) -> f64 {
        4.0 * self.tau * self.tau / self.kappa - 1.0
    }

    /// `1 − κ/4τ²`, the coefficient appearing in the normal and mean curvature relations.
    pub fn bundle_defect(&self) -> f64 {
        1.0 - self.kappa / (4.0 * self.tau * self.tau)
    }

    /// Berger inner product of two vectors tangent at `p`, without validation.
    pub fn inner(&self, p: &Vec4, x: &Vec4, y: &Vec4) -> f64 {
        let v = complex_j(p);
        4.0 / self.kappa * (x.dot(y) + self.vertical_excess() * x.dot(&v) * y.dot(&v))
    }

    pub fn norm(&self, p: &Vec4, x: &Vec4) -> f64 {
        self.inner(p, x, x).max(0.0).sqrt()
    }

    /// The metric at `p` as a 4×4 matrix acting on tangent vectors, with the
    /// radial direction projected out: `(4/κ)(I − ppᵀ + c VVᵀ)`.
    pub fn metric_matrix(&self, p: &Vec4) -> Mat4 {
        let v = complex_j(p);
        (Mat4::identity() - p * p.transpose() + self.vertical_excess() * v * v.transpose())
            * (4.0 / self.kappa)
    }

    /// Inverse of the metric on `T_p S³`, extended by zero along `p`.
    pub fn inverse_metric_matrix(&self, p: &Vec4) -> Mat4 {
        let v = complex_j(p);
        let c = self.vertical_excess();
        (Mat4::identity() - p * p.transpose() - (c / (1.0 + c)) * v * v.transpose())
            * (self.kappa / 4.0)
    }

    /// Unit vertical Killing field `ξ = (κ/4τ) V`.
    pub fn killing(&self, p: &Vec4) -> Vec4 {
        complex_j(p) * (self.kappa / (4.0 * self.tau))
    }
}

/// `J(z, w) = (iz, iw)` on real coordinates.
pub fn complex_j(x: &Vec4) -> Vec4 {
    Vec4::new(-x[1], x[0], -x[3], x[2])
}

pub fn j_matrix() -> Mat4 {
    #[rustfmt::skip]
    let j = Mat4::new(
        0.0, -1.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, -1.0,
        0.0, 0.0, 1.0, 0.0,
    );
    j
}

/// Hopf field `V_p = Jp`.
pub fn hopf_field(p: &Vec4) -> Vec4 {
    complex_j(p)
}

/// Component of `x` tangent to the sphere at `p`.
pub fn tangent_part(p: &Vec4, x: &Vec4) -> Vec4 {
    x - p * p.dot(x)
}

pub fn from_complex(z: Complex64, w: Complex64) -> Vec4 {
    Vec4::new(z.re, z.im, w.re, w.im)
}

pub fn to_complex(x: &Vec4) -> (Complex64, Complex64) {
    (Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint(Vec4);

impl SpherePoint {
    pub fn new(coords: Vec4) -> Result<Self> {
        if (coords.norm_squared() - 1.0).abs() > SPHERE_TOL {
            return domain(format!("point is off the unit sphere: |p|² = {}", coords.norm_squared()));
        }
        Ok(Self(coords))
    }

    /// Radially projects a nonzero vector onto S³.
    pub fn normalize(coords: Vec4) -> Result<Self> {
        let n = coords.norm();
        if !(n > 0.0 && n.is_finite()) {
            return domain("cannot project the zero vector onto S³");
        }
        Ok(Self(coords / n))
    }

    pub fn from_complex(z: Complex64, w: Complex64) -> Result<Self> {
        Self::new(from_complex(z, w))
    }

    /// The base point `(1, 0)`.
    pub fn origin() -> Self {
        Self(Vec4::new(1.0, 0.0, 0.0, 0.0))
    }

    pub fn coords(&self) -> &Vec4 {
        &self.0
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.0[0], self.0[1])
    }

    pub fn w(&self) -> Complex64 {
        Complex64::new(self.0[2], self.0[3])
    }

    pub fn hopf(&self) -> Vec4 {
        complex_j(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    base: SpherePoint,
    vec: Vec4,
}

impl TangentVector {
    pub fn new(base: SpherePoint, vec: Vec4) -> Result<Self> {
        let dot = vec.dot(base.coords());
        if dot.abs() > TANGENT_TOL * vec.norm().max(1.0) {
            return domain(format!("vector is not tangent to S³ at the base point (⟨v, p⟩ = {dot:e})"));
        }
        Ok(Self { base, vec })
    }

    /// Projects an arbitrary vector onto `T_p S³`.
    pub fn projected(base: SpherePoint, vec: Vec4) -> Self {
        let vec = tangent_part(base.coords(), &vec);
        Self { base, vec }
    }

    pub fn base(&self) -> &SpherePoint {
        &self.base
    }

    pub fn vec(&self) -> &Vec4 {
        &self.vec
    }
}

pub fn metric(params: &BergerParams, x: &TangentVector, y: &TangentVector) -> Result<f64> {
    if (x.base.coords() - y.base.coords()).norm() > SPHERE_TOL {
        return domain("tangent vectors live at different base points");
    }
    Ok(params.inner(x.base.coords(), &x.vec, &y.vec))
}

/// A vector field on S³, evaluated in ambient coordinates.
pub trait VectorField {
    fn at(&self, p: &Vec4) -> Vec4;
}

impl<F> VectorField for F
where
    F: Fn(&Vec4) -> Vec4,
{
    fn at(&self, p: &Vec4) -> Vec4 {
        self(p)
    }
}

/// Derivative of `field` along `dir` at `p`, by central differences along
/// curves renormalized onto the sphere.
pub fn directional_derivative<F: VectorField + ?Sized>(field: &F, p: &Vec4, dir: &Vec4) -> Vec4 {
    let h = FIELD_FD_STEP;
    let fwd = (p + dir * h).normalize();
    let bwd = (p - dir * h).normalize();
    (field.at(&fwd) - field.at(&bwd)) / (2.0 * h)
}

/// The vertical correction `c[⟨Y,V⟩(JX)^⊥ + ⟨X,V⟩(JY)^⊥]` relating the
/// Berger and round connections.
pub fn connection_correction(params: &BergerParams, p: &Vec4, x: &Vec4, y: &Vec4) -> Vec4 {
    let v = complex_j(p);
    let jx = tangent_part(p, &complex_j(x));
    let jy = tangent_part(p, &complex_j(y));
    (jx * y.dot(&v) + jy * x.dot(&v)) * params.vertical_excess()
}

/// Round Levi-Civita connection: tangential part of the flat derivative.
pub fn round_connection<X, Y>(x: &X, y: &Y, p: &SpherePoint) -> Vec4
where
    X: VectorField + ?Sized,
    Y: VectorField + ?Sized,
{
    let p = p.coords();
    tangent_part(p, &directional_derivative(y, p, &x.at(p)))
}

/// Berger connection `∇ᵇ_X Y` at `p`.
pub fn connection<X, Y>(params: &BergerParams, x: &X, y: &Y, p: &SpherePoint) -> Result<TangentVector>
where
    X: VectorField + ?Sized,
    Y: VectorField + ?Sized,
{
    let xp = TangentVector::new(*p, x.at(p.coords()))?;
    let yp = TangentVector::new(*p, y.at(p.coords()))?;
    let round = round_connection(x, y, p);
    let corr = connection_correction(params, p.coords(), xp.vec(), yp.vec());
    Ok(TangentVector::projected(*p, round + corr))
}

/// Hopf projection onto the sphere of radius `1/√κ` in ℂ × ℝ ≅ ℝ³.
pub fn hopf_projection(params: &BergerParams, p: &SpherePoint) -> Vector3<f64> {
    let (z, w) = (p.z(), p.w());
    let zw = z * w.conj();
    let s = 2.0 / params.kappa().sqrt();
    Vector3::new(s * zw.re, s * zw.im, s * 0.5 * (z.norm_sqr() - w.norm_sqr()))
}

/// Stereographic projection from `(0, −1)` onto ℝ³, with coordinates
/// `(Re z, Im z, Im w) / (1 + Re w)`.
pub fn stereographic(p: &Vec4) -> [f64; 3] {
    let d = 1.0 + p[2];
    [p[0] / d, p[1] / d, p[3] / d]
}

/// An isometry of every Berger sphere: `A ∈ O(4)` with `AJ = sign·JA`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    matrix: Mat4,
    sign: i8,
}

impl Isometry {
    pub fn new(matrix: Mat4, sign: i8) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return domain(format!("isometry sign must be ±1, got {sign}"));
        }
        let orth = (matrix.transpose() * matrix - Mat4::identity()).abs().max();
        if orth > ISOMETRY_TOL {
            return domain(format!("matrix is not orthogonal (deviation {orth:e})"));
        }
        let j = j_matrix();
        let comm = (matrix * j - j * matrix * f64::from(sign)).abs().max();
        if comm > ISOMETRY_TOL {
            return domain(format!("matrix violates AJ = {sign}·JA (deviation {comm:e})"));
        }
        Ok(Self { matrix, sign })
    }

    /// Detects the component from the matrix itself.
    pub fn from_matrix(matrix: Mat4) -> Result<Self> {
        let j = j_matrix();
        let plus = (matrix * j - j * matrix).abs().max();
        let minus = (matrix * j + j * matrix).abs().max();
        Self::new(matrix, if plus <= minus { 1 } else { -1 })
    }

    pub fn identity() -> Self {
        Self { matrix: Mat4::identity(), sign: 1 }
    }

    /// Element of U₊(2): `(z, w) ↦ U (z, w)`.
    pub fn unitary(u: [[Complex64; 2]; 2]) -> Result<Self> {
        Self::new(complex_block(u, false), 1)
    }

    /// Element of U₋(2): `(z, w) ↦ U (z̄, w̄)`.
    pub fn antiunitary(u: [[Complex64; 2]; 2]) -> Result<Self> {
        Self::new(complex_block(u, true), -1)
    }

    /// `(z, w) ↦ (e^{iα} z, e^{iβ} w)`.
    pub fn rotation(alpha: f64, beta: f64) -> Self {
        let u = [
            [Complex64::from_polar(1.0, alpha), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, beta)],
        ];
        Self { matrix: complex_block(u, false), sign: 1 }
    }

    /// `(z, w) ↦ (e^{iα} z̄, e^{iβ} w̄)`.
    pub fn conj_rotation(alpha: f64, beta: f64) -> Self {
        let u = [
            [Complex64::from_polar(1.0, alpha), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, beta)],
        ];
        Self { matrix: complex_block(u, true), sign: -1 }
    }

    /// `(z, w) ↦ (w, z)`.
    pub fn swap() -> Self {
        #[rustfmt::skip]
        let m = Mat4::new(
            0.0, 0.0, 1.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
        );
        Self { matrix: m, sign: 1 }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry { matrix: self.matrix * other.matrix, sign: self.sign * other.sign }
    }

    pub fn inverse(&self) -> Isometry {
        Isometry { matrix: self.matrix.transpose(), sign: self.sign }
    }

    pub fn apply(&self, p: &SpherePoint) -> SpherePoint {
        SpherePoint(self.matrix * p.coords())
    }

    pub fn apply_vec(&self, x: &Vec4) -> Vec4 {
        self.matrix * x
    }

    /// Pushforward of a tangent vector.
    pub fn push(&self, x: &TangentVector) -> TangentVector {
        TangentVector { base: self.apply(x.base()), vec: self.matrix * x.vec() }
    }

    pub fn distance(&self, other: &Isometry) -> f64 {
        (self.matrix - other.matrix).abs().max()
    }

    pub fn is_involution(&self, tol: f64) -> bool {
        (self.matrix * self.matrix - Mat4::identity()).abs().max() <= tol
    }
}

pub fn apply_isometry(a: &Isometry, p: &SpherePoint) -> SpherePoint {
    a.apply(p)
}

fn complex_block(u: [[Complex64; 2]; 2], conjugate: bool) -> Mat4 {
    // multiplication by a + ib on (x, y) is [[a, −b], [b, a]]; precomposing
    // with conjugation flips the second column.
    let block = |c: Complex64| {
        if conjugate {
            Matrix2::new(c.re, c.im, c.im, -c.re)
        } else {
            Matrix2::new(c.re, -c.im, c.im, c.re)
        }
    };
    let mut m = Mat4::zeros();
    for (r, row) in u.iter().enumerate() {
        for (c, &entry) in row.iter().enumerate() {
            m.fixed_view_mut::<2, 2>(2 * r, 2 * c).copy_from(&block(entry));
        }
    }
    m
}
