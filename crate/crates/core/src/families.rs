//! Explicit surface families in `S³`: the one-parameter family `Φ_c`, the
//! Clifford torus, Lawson's `τ_{m,n}`, and the conformal data entering the
//! compatibility equations of a surface.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curvature::normal_from_jet;
use crate::error::{domain, Error, Result};
use crate::geometry::{from_complex, hopf_field, to_complex, Vec4};
use crate::mesh::{weld, TriMesh};
use crate::surface::{Domain, Jet, ParamSurface};

/// `Φ_c(s, t) = (cos s · e^{ict}, sin s · e^{it})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiC {
    pub c: f64,
    domain: Domain,
}

impl PhiC {
    pub fn new(c: f64) -> Self {
        Self { c, domain: Domain::rect((0.0, PI), (0.0, 2.0 * PI)) }
    }

    pub fn with_domain(c: f64, domain: Domain) -> Self {
        Self { c, domain }
    }
}

pub fn phi_c(c: f64) -> PhiC {
    PhiC::new(c)
}

/// The totally geodesic sphere `{w ∈ ℝ·e^{it}}`, that is `Φ_0`.
pub fn equator() -> PhiC {
    PhiC::new(0.0)
}

impl ParamSurface for PhiC {
    fn eval(&self, s: f64, t: f64) -> Vec4 {
        let (ss, cs) = s.sin_cos();
        from_complex(Complex64::from_polar(cs, self.c * t), Complex64::from_polar(ss, t))
    }

    fn domain(&self) -> Domain {
        self.domain
    }

    fn jet(&self, s: f64, t: f64) -> Jet {
        let c = self.c;
        let (ss, cs) = s.sin_cos();
        let ez = Complex64::from_polar(1.0, c * t);
        let ew = Complex64::from_polar(1.0, t);
        let i = Complex64::i();
        Jet {
            p: from_complex(ez * cs, ew * ss),
            ds: from_complex(-ez * ss, ew * cs),
            dt: from_complex(i * c * ez * cs, i * ew * ss),
            dss: from_complex(-ez * cs, -ew * ss),
            dst: from_complex(-i * c * ez * ss, i * ew * cs),
            dtt: from_complex(-c * c * ez * cs, -ew * ss),
        }
    }
}

/// Clifford torus `(1/√2)(e^{is}, e^{it})`, conformally parametrized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clifford;

pub fn clifford() -> Clifford {
    Clifford
}

impl ParamSurface for Clifford {
    fn eval(&self, s: f64, t: f64) -> Vec4 {
        from_complex(Complex64::from_polar(FRAC_1_SQRT_2, s), Complex64::from_polar(FRAC_1_SQRT_2, t))
    }

    fn domain(&self) -> Domain {
        Domain { s: (0.0, 2.0 * PI), t: (0.0, 2.0 * PI), periodic_s: true, periodic_t: true }
    }

    fn jet(&self, s: f64, t: f64) -> Jet {
        let z = Complex64::from_polar(FRAC_1_SQRT_2, s);
        let w = Complex64::from_polar(FRAC_1_SQRT_2, t);
        let i = Complex64::i();
        let zero = Complex64::new(0.0, 0.0);
        Jet {
            p: from_complex(z, w),
            ds: from_complex(i * z, zero),
            dt: from_complex(zero, i * w),
            dss: from_complex(-z, zero),
            dst: Vec4::zeros(),
            dtt: from_complex(zero, -w),
        }
    }
}

/// Lawson's `τ_{m,n}` as `Φ_{m/n}` on `[0, 2π] × [0, 2πn]`.
pub fn tau_mn(m: u32, n: u32) -> Result<PhiC> {
    if m == 0 || n == 0 {
        return domain("τ_(m,n) needs m, n ≥ 1");
    }
    if gcd(m, n) != 1 {
        return domain(format!("τ_(m,n) needs coprime m, n, got ({m}, {n})"));
    }
    let domain = Domain { s: (0.0, 2.0 * PI), t: (0.0, 2.0 * PI * n as f64), periodic_s: true, periodic_t: true };
    Ok(PhiC::with_domain(m as f64 / n as f64, domain))
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawsonTopology {
    pub euler_characteristic: i64,
    pub orientable: bool,
    /// Whether the welded mesh agrees with "Klein bottle iff m·n is even".
    pub matches_parity_rule: bool,
}

/// Topology of `τ_{m,n}` computed from a welded parameter grid.
///
/// Grid points are identified when their positions agree and their normal
/// lines agree, so transversal self-intersections are not glued.
pub fn lawson_topology(m: u32, n: u32, resolution: usize) -> Result<LawsonTopology> {
    let surf = tau_mn(m, n)?;
    let k = resolution.max(2);
    // the grid must be invariant under u ↦ u + 2π/m, u ↦ u + 2π/n and (s, u) ↦ (s + π, u + π)
    let nn = 2 * (m * n) as usize * k;
    let step = 2.0 * PI / nn as f64;
    let idx = |i: usize, j: usize| (i % nn) * nn + (j % nn);
    let centre = |i: usize, j: usize| nn * nn + i * nn + j;
    // corners first, then quad centres; the centred fan is invariant under the
    // orientation-reversing deck maps, unlike a fixed diagonal
    let mut points = Vec::with_capacity(2 * nn * nn);
    let mut normals = Vec::with_capacity(2 * nn * nn);
    for offset in [0.0, 0.5] {
        for i in 0..nn {
            for j in 0..nn {
                let (s, u) = ((i as f64 + offset) * step, (j as f64 + offset) * step);
                let jet = surf.jet(s, n as f64 * u);
                points.push(jet.p);
                normals.push(normal_from_jet(&jet)?);
            }
        }
    }
    let mut faces = Vec::with_capacity(4 * nn * nn);
    for i in 0..nn {
        for j in 0..nn {
            let ring = [idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)];
            for k in 0..4 {
                faces.push([centre(i, j), ring[k], ring[(k + 1) % 4]]);
            }
        }
    }
    let tol = 1e-9;
    let same = |a: usize, b: usize| normals[a].dot(&normals[b]).abs() > 1.0 - 1e-6;
    let (map, count) = weld(&points, tol, same);
    let mut mesh = TriMesh::new(vec![Vec4::zeros(); count], Vec::new());
    for (i, &target) in map.iter().enumerate() {
        mesh.vertices[target] = points[i];
    }
    mesh.faces = faces.iter().map(|f| [map[f[0]], map[f[1]], map[f[2]]]).collect();
    mesh.dedup_faces();
    let orientable = mesh.orientation().is_some();
    let klein = (m * n).is_multiple_of(2);
    Ok(LawsonTopology {
        euler_characteristic: mesh.euler_characteristic(),
        orientable,
        matches_parity_rule: orientable != klein,
    })
}

/// `(1/√2)[[1, i], [1, −i]]`, which maps `Φ_1` onto the Clifford torus.
pub fn clifford_map(p: &Vec4) -> Vec4 {
    let (z, w) = to_complex(p);
    let i = Complex64::i();
    from_complex((z + i * w) * FRAC_1_SQRT_2, (z - i * w) * FRAC_1_SQRT_2)
}

/// Whether the image of a surface under [`clifford_map`] lies on the Clifford
/// torus `|z|² = |w|² = 1/2`, tested on an `n × n` sample grid.
pub fn is_clifford_congruent<S: ParamSurface + ?Sized>(surface: &S, samples: usize, tol: f64) -> bool {
    surface.domain().interior_grid(samples).into_iter().all(|(s, t)| {
        let (z, _) = to_complex(&clifford_map(&surface.eval(s, t)));
        (z.norm_sqr() - 0.5).abs() < tol
    })
}

/// Conformal data of a surface at a point, for coordinates `x = s`, `y = t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalData {
    /// `e^{2u} = |Φ_x|²`.
    pub e2u: f64,
    /// Hopf differential coefficient `p = ⟨Φ_zz, N⟩`.
    pub hopf: Complex64,
    /// `A = ⟨Φ_z, V⟩`.
    pub a: Complex64,
    /// Angle function `ν = ⟨N, V⟩`.
    pub nu: f64,
}

/// Relative tolerance for deciding that a parametrization is conformal.
pub const CONFORMAL_TOL: f64 = 1e-8;

pub fn conformal_data(jet: &Jet) -> Result<ConformalData> {
    let (ex, ey, f) = (jet.ds.norm_squared(), jet.dt.norm_squared(), jet.ds.dot(&jet.dt));
    if (ex - ey).abs() > CONFORMAL_TOL * ex.max(ey) || f.abs() > CONFORMAL_TOL * ex.max(ey) {
        return Err(Error::Domain(format!(
            "parametrization is not conformal: |Φx|² = {ex}, |Φy|² = {ey}, ⟨Φx,Φy⟩ = {f}"
        )));
    }
    let n = normal_from_jet(jet)?;
    let v = hopf_field(&jet.p);
    let hopf = Complex64::new(
        0.25 * (jet.dss.dot(&n) - jet.dtt.dot(&n)),
        -0.5 * jet.dst.dot(&n),
    );
    let a = Complex64::new(0.5 * jet.ds.dot(&v), -0.5 * jet.dt.dot(&v));
    Ok(ConformalData { e2u: 0.5 * (ex + ey), hopf, a, nu: n.dot(&v) })
}

/// Maximal residuals of the four compatibility equations over a sample grid:
///
/// * `p_z̄ = 0` (minimal, so the Codazzi equation is holomorphy),
/// * `A_z̄ = (i/2) e^{2u} ν`,
/// * `ν_z = iA − 2e^{−2u} p Ā`,
/// * `|A|² = e^{2u}(1 − ν²)/4`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CompatibilityResiduals {
    pub codazzi: f64,
    pub a_bar: f64,
    pub nu_z: f64,
    pub modulus: f64,
}

impl CompatibilityResiduals {
    pub fn max(&self) -> f64 {
        self.codazzi.max(self.a_bar).max(self.nu_z).max(self.modulus)
    }
}

const WIRTINGER_STEP: f64 = 1e-4;

/// `(∂_z f, ∂_z̄ f)` by central differences with one Richardson step.
fn wirtinger<F: Fn(f64, f64) -> Result<Complex64>>(f: F, x: f64, y: f64) -> Result<(Complex64, Complex64)> {
    let d = |h: f64| -> Result<(Complex64, Complex64)> {
        let fx = (f(x + h, y)? - f(x - h, y)?) / (2.0 * h);
        let fy = (f(x, y + h)? - f(x, y - h)?) / (2.0 * h);
        Ok((fx, fy))
    };
    let (x1, y1) = d(WIRTINGER_STEP)?;
    let (x2, y2) = d(WIRTINGER_STEP / 2.0)?;
    let fx = (x2 * 4.0 - x1) / 3.0;
    let fy = (y2 * 4.0 - y1) / 3.0;
    let i = Complex64::i();
    Ok(((fx - i * fy) * 0.5, (fx + i * fy) * 0.5))
}

pub fn compatibility_residuals<S: ParamSurface + ?Sized>(
    surface: &S,
    samples: &[(f64, f64)],
) -> Result<CompatibilityResiduals> {
    let data = |x: f64, y: f64| conformal_data(&surface.jet(x, y));
    let i = Complex64::i();
    let mut out = CompatibilityResiduals::default();
    for &(x, y) in samples {
        let d = data(x, y)?;
        let (_, p_zbar) = wirtinger(|x, y| Ok(data(x, y)?.hopf), x, y)?;
        let (_, a_zbar) = wirtinger(|x, y| Ok(data(x, y)?.a), x, y)?;
        let (nu_z, _) = wirtinger(|x, y| Ok(Complex64::new(data(x, y)?.nu, 0.0)), x, y)?;
        let scale = d.e2u.max(1e-300);
        out.codazzi = out.codazzi.max(p_zbar.norm() / scale);
        out.a_bar = out.a_bar.max((a_zbar - i * 0.5 * d.e2u * d.nu).norm() / scale);
        let nu_z_expected = i * d.a - 2.0 * d.hopf * d.a.conj() / d.e2u;
        out.nu_z = out.nu_z.max((nu_z - nu_z_expected).norm() / scale.sqrt());
        out.modulus = out.modulus.max((d.a.norm_sqr() - 0.25 * d.e2u * (1.0 - d.nu * d.nu)).abs() / scale);
    }
    Ok(out)
}
