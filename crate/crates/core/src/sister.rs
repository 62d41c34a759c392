//! Pointwise algebra of the sister correspondence between minimal surfaces
//! in Berger spheres and constant mean curvature surfaces in `S²×ℝ`, `ℍ²×ℝ`
//! and `Nil₃`.

use std::fmt;

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector2};
use serde::{Deserialize, Serialize};

use crate::assembler::ReflectionGroup;
use crate::curvature::berger_data;
use crate::error::{domain, Error, Result};
use crate::geodesics::{classify, GeodesicKind};
use crate::geometry::{complex_j, BergerParams, Isometry, SpherePoint, TangentVector, ROUND_TOL};
use crate::surface::ParamSurface;

/// Tolerance on the symmetry of an input shape operator.
pub const SYMMETRY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TargetSpace {
    S2xR,
    H2xR,
    Nil3,
}

impl fmt::Display for TargetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::S2xR => "S²×ℝ",
            Self::H2xR => "ℍ²×ℝ",
            Self::Nil3 => "Nil₃",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SisterTarget {
    pub space: TargetSpace,
    /// Constant mean curvature of the sister surface.
    pub h: f64,
    /// Curvature sign of the base of a product target; `None` for `Nil₃`.
    pub epsilon: Option<i8>,
}

impl SisterTarget {
    pub fn is_product(&self) -> bool {
        self.epsilon.is_some()
    }
}

/// Target space and mean curvature of the sister of a minimal surface in
/// `S³_b(κ, τ)`. The product cases are tested first, so `κ = 4τ² − 1`
/// maps to `ℍ²×ℝ` even though it also satisfies `κ < 4τ²`.
pub fn sister_params(kappa: f64, tau: f64) -> Result<SisterTarget> {
    let params = BergerParams::new(kappa, tau)?;
    let (k, t2) = (params.kappa(), tau * tau);
    let close = |a: f64, b: f64| (a - b).abs() <= ROUND_TOL * a.abs().max(b.abs()).max(1.0);
    if close(k, 4.0 * t2 + 1.0) {
        return Ok(SisterTarget { space: TargetSpace::S2xR, h: tau, epsilon: Some(1) });
    }
    if t2 > 0.25 && close(k, 4.0 * t2 - 1.0) {
        return Ok(SisterTarget { space: TargetSpace::H2xR, h: tau, epsilon: Some(-1) });
    }
    if k < 4.0 * t2 {
        return Ok(SisterTarget { space: TargetSpace::Nil3, h: k.sqrt() / (2.0 * (4.0 * t2 - k).sqrt()), epsilon: None });
    }
    Err(Error::UnsupportedCorrespondence { kappa, tau })
}

/// Rotation by `π/2` in an oriented orthonormal tangent frame.
pub fn rotation_j() -> Matrix2<f64> {
    Matrix2::new(0.0, -1.0, 1.0, 0.0)
}

/// `S* = −JS + τ·Id`.
pub fn sister_shape_operator(s: &Matrix2<f64>, tau: f64) -> Result<Matrix2<f64>> {
    let asym = (s[(0, 1)] - s[(1, 0)]).abs();
    if asym > SYMMETRY_TOL {
        return domain(format!("shape operator is not symmetric (off-diagonal gap {asym:e})"));
    }
    Ok(-rotation_j() * s + Matrix2::identity() * tau)
}

/// The unit vertical field `ξ = T + νN` split along a surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KillingDecomposition {
    /// Tangential part in the Berger-orthonormal frame (first vector along `Φ_s`).
    pub t: [f64; 2],
    pub nu: f64,
}

impl KillingDecomposition {
    pub fn unit_defect(&self) -> f64 {
        (self.t[0] * self.t[0] + self.t[1] * self.t[1] + self.nu * self.nu - 1.0).abs()
    }

    /// Frame components of `−JT` and the normal component `ν` of the
    /// vertical direction of a product target.
    pub fn target_vertical(&self) -> ([f64; 2], f64) {
        let jt = rotation_j() * Vector2::new(self.t[0], self.t[1]);
        ([-jt[0], -jt[1]], self.nu)
    }
}

/// Decomposes `ξ = V/|V|` at `(s, t)` against the Berger unit normal and a
/// Berger-orthonormal frame whose orientation follows `(Φ_s, Φ_t)`.
pub fn killing_decompose<S: ParamSurface + ?Sized>(params: &BergerParams, surface: &S, s: f64, t: f64) -> Result<KillingDecomposition> {
    let jet = surface.jet(s, t);
    let data = berger_data(params, &jet)?;
    let p = &jet.p;
    let v = complex_j(p);
    let xi = v / params.norm(p, &v);
    let [e1, e2] = data.frame_vectors(&jet);
    Ok(KillingDecomposition {
        t: [params.inner(p, &xi, &e1), params.inner(p, &xi, &e2)],
        nu: params.inner(p, &xi, &data.normal),
    })
}

/// Geometric type of an isometry of the Berger sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryKind {
    Identity,
    /// Reflection across a horizontal geodesic.
    HorizontalReflection,
    /// Reflection across a vertical geodesic (a Hopf fibre).
    VerticalReflection,
    /// Any other isometry, such as a rotation about a geodesic.
    Rotation,
}

/// Predicted symmetry of the sister immersion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SisterSymmetry {
    Identity,
    /// Reflection across a vertical plane of `M²(ε)×ℝ`.
    VerticalPlaneReflection,
    /// An ambient congruence of unspecified type.
    Congruence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryEntry {
    pub kind: SymmetryKind,
    /// Prediction for the product targets `S²×ℝ` and `ℍ²×ℝ`.
    pub product: SisterSymmetry,
    /// Prediction for `Nil₃`, where only the existence of a congruence is known.
    pub nil: SisterSymmetry,
}

/// Tolerance for eigenvalue classification of isometry matrices.
const CLASSIFY_TOL: f64 = 1e-9;

pub fn classify_isometry(g: &Isometry) -> Result<SymmetryKind> {
    let m: &Matrix4<f64> = g.matrix();
    if (m - Matrix4::identity()).abs().max() <= CLASSIFY_TOL {
        return Ok(SymmetryKind::Identity);
    }
    if !g.is_involution(CLASSIFY_TOL) {
        return Ok(SymmetryKind::Rotation);
    }
    // an involution is symmetric; a geodesic reflection fixes exactly a plane
    let eig = SymmetricEigen::new((m + m.transpose()) * 0.5);
    let fixed: Vec<usize> = (0..4).filter(|&k| (eig.eigenvalues[k] - 1.0).abs() < 1e-6).collect();
    if fixed.len() != 2 {
        return Ok(SymmetryKind::Rotation);
    }
    let a = eig.eigenvectors.column(fixed[0]).into_owned();
    let b = eig.eigenvectors.column(fixed[1]).into_owned();
    let axis = TangentVector::projected(SpherePoint::normalize(a)?, b);
    Ok(match classify(&axis)? {
        GeodesicKind::Horizontal => SymmetryKind::HorizontalReflection,
        GeodesicKind::Vertical => SymmetryKind::VerticalReflection,
        GeodesicKind::Generic => SymmetryKind::Rotation,
    })
}

pub fn symmetry_entry(g: &Isometry) -> Result<SymmetryEntry> {
    let kind = classify_isometry(g)?;
    let (product, nil) = match kind {
        SymmetryKind::Identity => (SisterSymmetry::Identity, SisterSymmetry::Identity),
        SymmetryKind::HorizontalReflection => (SisterSymmetry::VerticalPlaneReflection, SisterSymmetry::Congruence),
        SymmetryKind::VerticalReflection | SymmetryKind::Rotation => (SisterSymmetry::Congruence, SisterSymmetry::Congruence),
    };
    Ok(SymmetryEntry { kind, product, nil })
}

/// One entry per generator of the group, in generator order.
pub fn symmetry_transfer_catalog(group: &ReflectionGroup) -> Result<Vec<SymmetryEntry>> {
    group.generators.iter().map(symmetry_entry).collect()
}
