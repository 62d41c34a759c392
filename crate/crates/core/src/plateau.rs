//! Geodesic polygons on the boundary of a solid tetrahedron in `S³`, the
//! minimal spheres bounding it, and a discrete Berger-area minimizer with
//! fixed boundary.
//!
//! Polygon vertices are `P₁ = (1, 0)`, `Q₁ = (0, 1)`, `Q₂ = (0, e^{iφ})` and
//! `P₂ = (e^{iθ}, 0)`, with `θ = π/(m+1)` and `φ = π/(n+1)`. The vertical
//! geodesics `v₁ = {z = 0}` and `v₂ = {w = 0}` carry the `Q`s and the `P`s.

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geodesics::{classify, GeodesicKind};
use crate::geometry::{complex_j, from_complex, tangent_part, to_complex, BergerParams, Isometry, Mat4, SpherePoint, TangentVector, Vec4};
use crate::mesh::{BoundaryTag, TriMesh};
use crate::surface::{Domain, Jet, ParamSurface};

/// Which geodesic polygon on the tetrahedron to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `Γ = Q₁P₁Q₂P₂`, four horizontal edges; yields the orientable `Σ^{(m,n)}`.
    Orientable,
    /// `Γ′ = P₁Q₂P₂(−P₂)`, three horizontal edges and one vertical; yields `Λ^{(m,n)}`.
    Nonorientable,
    /// `Γ̃ = P₁Q₁Q₂P₂`, two horizontal and two vertical edges; bounds a piece of `Φ_{θ/φ}`.
    Lawson,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orientable" => Ok(Self::Orientable),
            "nonorientable" => Ok(Self::Nonorientable),
            "lawson" => Ok(Self::Lawson),
            other => domain(format!("unknown polygon variant `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolygonSpec {
    pub m: u32,
    pub n: u32,
    pub variant: Variant,
    theta: f64,
    phi: f64,
}

impl PolygonSpec {
    /// Angles `θ = π/(m+1)`, `φ = π/(n+1)`. The non-orientable polygon needs `n` odd.
    pub fn new(m: u32, n: u32, variant: Variant) -> Result<Self> {
        if variant == Variant::Nonorientable && n.is_multiple_of(2) {
            return domain(format!("the non-orientable polygon needs n odd, got n = {n}"));
        }
        Self::with_angles(PI / (m as f64 + 1.0), PI / (n as f64 + 1.0), variant).map(|s| Self { m, n, ..s })
    }

    /// Arbitrary corner angles, for polygons outside the discrete family.
    pub fn with_angles(theta: f64, phi: f64, variant: Variant) -> Result<Self> {
        for (name, a) in [("θ", theta), ("φ", phi)] {
            if !(a > 0.0 && a <= PI) {
                return domain(format!("{name} = {a} is outside (0, π]"));
            }
        }
        let index = |a: f64| {
            let k = PI / a - 1.0;
            if (k - k.round()).abs() < 1e-12 { k.round() as u32 } else { 0 }
        };
        Ok(Self { m: index(theta), n: index(phi), variant, theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn p1(&self) -> Vec4 {
        Vec4::new(1.0, 0.0, 0.0, 0.0)
    }

    pub fn p2(&self) -> Vec4 {
        from_complex(Complex64::from_polar(1.0, self.theta), Complex64::new(0.0, 0.0))
    }

    pub fn q1(&self) -> Vec4 {
        Vec4::new(0.0, 0.0, 1.0, 0.0)
    }

    pub fn q2(&self) -> Vec4 {
        from_complex(Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, self.phi))
    }

    /// Interior angles at the polygon corners, in circuit order.
    pub fn corner_angles(&self) -> [f64; 4] {
        let (t, p) = (self.theta, self.phi);
        match self.variant {
            // corners Q₁, P₁, Q₂, P₂
            Variant::Orientable => [t, p, t, p],
            // corners P₁, Q₂, P₂, −P₂
            Variant::Nonorientable => [FRAC_PI_2, t, p, FRAC_PI_2],
            // corners P₁, Q₁, Q₂, P₂
            Variant::Lawson => [FRAC_PI_2; 4],
        }
    }

    /// `∫K` over a minimal disk bounded by the polygon, by Gauss–Bonnet.
    pub fn gauss_bonnet_target(&self) -> f64 {
        2.0 * PI - self.corner_angles().iter().map(|a| PI - a).sum::<f64>()
    }

    /// Largest violation of the inequalities describing the solid region
    /// bounded by the minimal spheres through the polygon.
    pub fn region_violation(&self, p: &Vec4) -> f64 {
        let (z, w) = to_complex(p);
        let rot = |a: f64, x: Complex64| (Complex64::from_polar(1.0, -a) * x).im;
        let z_wedge = [(-z.im).max(0.0), rot(self.theta, z).max(0.0)];
        let w_wedge = [(-w.im).max(0.0), rot(self.phi, w).max(0.0)];
        match self.variant {
            Variant::Orientable | Variant::Lawson => z_wedge.into_iter().chain(w_wedge).fold(0.0, f64::max),
            Variant::Nonorientable => w_wedge.into_iter().fold(z_wedge[1], f64::max),
        }
    }
}

/// Arc `t ↦ cos(ωt)·a + sin(ωt)·b` of a great circle, for `t` running from
/// `t_range.0` to `t_range.1` (possibly decreasing).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicEdge {
    pub label: &'static str,
    #[serde(with = "crate::curvature::vec4_serde")]
    pub a: Vec4,
    #[serde(with = "crate::curvature::vec4_serde")]
    pub b: Vec4,
    pub freq: f64,
    pub t_range: (f64, f64),
}

impl GeodesicEdge {
    fn new(label: &'static str, a: Vec4, b: Vec4, freq: f64, t_range: (f64, f64)) -> Self {
        Self { label, a, b, freq, t_range }
    }

    pub fn point(&self, t: f64) -> Vec4 {
        let (s, c) = (self.freq * t).sin_cos();
        self.a * c + self.b * s
    }

    pub fn velocity(&self, t: f64) -> Vec4 {
        let (s, c) = (self.freq * t).sin_cos();
        (self.b * c - self.a * s) * self.freq
    }

    /// Parameter at fraction `σ ∈ [0, 1]` of the traversal.
    pub fn param_at(&self, sigma: f64) -> f64 {
        self.t_range.0 + sigma * (self.t_range.1 - self.t_range.0)
    }

    pub fn start(&self) -> Vec4 {
        self.point(self.t_range.0)
    }

    pub fn end(&self) -> Vec4 {
        self.point(self.t_range.1)
    }

    pub fn kind(&self) -> Result<GeodesicKind> {
        let t = self.t_range.0;
        classify(&TangentVector::projected(SpherePoint::normalize(self.point(t))?, self.velocity(t)))
    }

    /// Berger length: the speed is constant along horizontal and vertical arcs.
    pub fn length(&self, params: &BergerParams) -> f64 {
        let t = self.t_range.0;
        params.norm(&self.point(t), &self.velocity(t)) * (self.t_range.1 - self.t_range.0).abs()
    }

    /// Geodesic reflection: fixes the great circle and negates its orthogonal plane.
    pub fn reflection(&self) -> Result<Isometry> {
        let m: Mat4 = (self.a * self.a.transpose() + self.b * self.b.transpose()) * 2.0 - Mat4::identity();
        Isometry::from_matrix(m)
    }

    pub fn transformed(&self, g: &Isometry) -> Self {
        Self { a: g.apply_vec(&self.a), b: g.apply_vec(&self.b), ..*self }
    }
}

fn c4(z: Complex64, w: Complex64) -> Vec4 {
    from_complex(z, w)
}

/// The closed circuit of edges; edge `k` ends where edge `k+1` starts.
pub fn build_polygon(spec: &PolygonSpec) -> Vec<GeodesicEdge> {
    let (th, ph) = (spec.theta, spec.phi);
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let eth = Complex64::from_polar(1.0, th);
    let eph = Complex64::from_polar(1.0, ph);
    let h1 = |r| GeodesicEdge::new("h1", c4(one, zero), c4(zero, one), 1.0, r);
    let h2 = |r| GeodesicEdge::new("h2", c4(one, zero), c4(zero, eph), 1.0, r);
    let f1 = |r, freq| GeodesicEdge::new("f1", c4(eth, zero), c4(zero, one), freq, r);
    let f2 = |r| GeodesicEdge::new("f2", c4(eth, zero), c4(zero, eph), 1.0, r);
    let v1 = |r| GeodesicEdge::new("v1", c4(zero, one), c4(zero, Complex64::i()), 1.0, r);
    let v2 = |r| GeodesicEdge::new("v2", c4(one, zero), c4(Complex64::i(), zero), 1.0, r);
    match spec.variant {
        Variant::Orientable => vec![h1((FRAC_PI_2, 0.0)), h2((0.0, FRAC_PI_2)), f2((FRAC_PI_2, 0.0)), f1((0.0, FRAC_PI_2), 1.0)],
        // the vertical arc runs from −P₂ = (e^{i(θ−π)}, 0) back to P₁
        Variant::Nonorientable => vec![h2((0.0, FRAC_PI_2)), f2((FRAC_PI_2, 0.0)), f1((0.0, FRAC_PI_2), 2.0), v2((th - PI, 0.0))],
        Variant::Lawson => vec![h1((0.0, FRAC_PI_2)), v1((0.0, ph)), f2((FRAC_PI_2, 0.0)), v2((th, 0.0))],
    }
}

/// Largest gap between the end of one edge and the start of the next.
pub fn closure_gap(edges: &[GeodesicEdge]) -> f64 {
    (0..edges.len()).map(|k| (edges[k].end() - edges[(k + 1) % edges.len()].start()).norm()).fold(0.0, f64::max)
}

/// `(cos t · e^{iα(s)}, sin t · e^{iβ(s)})` where exactly one of the phases moves with `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereFace {
    pub z_phase: f64,
    pub w_phase: f64,
    /// `true`: `α(s) = z_phase + s`, `β = w_phase`; `false`: `α = z_phase`, `β(s) = w_phase + s`.
    pub z_moves: bool,
    pub domain: Domain,
}

impl ParamSurface for SphereFace {
    fn eval(&self, t: f64, s: f64) -> Vec4 {
        self.jet(t, s).p
    }

    fn domain(&self) -> Domain {
        self.domain
    }

    fn jet(&self, t: f64, s: f64) -> Jet {
        let (st, ct) = t.sin_cos();
        let (za, wa) = if self.z_moves { (self.z_phase + s, self.w_phase) } else { (self.z_phase, self.w_phase + s) };
        let e = Complex64::from_polar(1.0, za);
        let f = Complex64::from_polar(1.0, wa);
        let i = Complex64::i();
        let zero = Complex64::new(0.0, 0.0);
        let (z, zt, ztt) = (e * ct, -e * st, -e * ct);
        let (w, wt, wtt) = (f * st, f * ct, -f * st);
        let (zs, zts, zss, ws, wts, wss) = if self.z_moves {
            (i * z, i * zt, -z, zero, zero, zero)
        } else {
            (zero, zero, zero, i * w, i * wt, -w)
        };
        Jet {
            p: from_complex(z, w),
            ds: from_complex(zt, wt),
            dt: from_complex(zs, ws),
            dss: from_complex(ztt, wtt),
            dst: from_complex(zts, wts),
            dtt: from_complex(zss, wss),
        }
    }
}

/// The four faces `Q₁Q₂P₁`, `Q₁Q₂P₂`, `Q₁P₁P₂`, `Q₂P₁P₂` of the solid tetrahedron.
pub fn tetrahedron_faces(spec: &PolygonSpec) -> Result<[SphereFace; 4]> {
    if spec.variant == Variant::Nonorientable {
        return domain("the tetrahedron faces belong to the orientable configuration");
    }
    let (th, ph) = (spec.theta, spec.phi);
    let dom = |b: f64| Domain::rect((0.0, FRAC_PI_2), (0.0, b));
    Ok([
        SphereFace { z_phase: 0.0, w_phase: 0.0, z_moves: false, domain: dom(ph) },
        SphereFace { z_phase: th, w_phase: 0.0, z_moves: false, domain: dom(ph) },
        SphereFace { z_phase: 0.0, w_phase: 0.0, z_moves: true, domain: dom(th) },
        SphereFace { z_phase: 0.0, w_phase: ph, z_moves: true, domain: dom(th) },
    ])
}

/// The piece of `Φ_{θ/φ}` bounded by the polygon `Γ̃`.
pub fn lawson_piece(spec: &PolygonSpec) -> crate::families::PhiC {
    crate::families::PhiC::with_domain(spec.theta / spec.phi, Domain::rect((0.0, FRAC_PI_2), (0.0, spec.phi)))
}

/// Triangulated disk on an `(r+1) × (r+1)` grid: boundary samples uniform in
/// the edge parameters (hence in arclength), interior from the bilinear
/// (Coons) blend of the four edges, projected to `S³`.
pub fn init_mesh(edges: &[GeodesicEdge], resolution: usize) -> Result<TriMesh> {
    if resolution < 2 {
        return domain(format!("resolution must be at least 2, got {resolution}"));
    }
    if edges.len() != 4 {
        return domain("a Coons patch needs exactly four edges");
    }
    let gap = closure_gap(edges);
    if gap > 1e-10 {
        return domain(format!("edges do not form a closed circuit (gap {gap:e})"));
    }
    let r = resolution;
    let rf = r as f64;
    let at = |k: usize, sigma: f64| edges[k].point(edges[k].param_at(sigma));
    let corners = [edges[0].start(), edges[1].start(), edges[2].start(), edges[3].start()];
    let idx = |i: usize, j: usize| j * (r + 1) + i;
    let mut vertices = vec![Vec4::zeros(); (r + 1) * (r + 1)];
    let mut boundary = vec![None; (r + 1) * (r + 1)];
    for j in 0..=r {
        for i in 0..=r {
            let (u, v) = (i as f64 / rf, j as f64 / rf);
            let bottom = at(0, u);
            let right = at(1, v);
            let top = at(2, 1.0 - u);
            let left = at(3, 1.0 - v);
            let blend = bottom * (1.0 - v) + top * v + left * (1.0 - u) + right * u
                - (corners[0] * ((1.0 - u) * (1.0 - v)) + corners[1] * (u * (1.0 - v)) + corners[2] * (u * v) + corners[3] * ((1.0 - u) * v));
            let norm = blend.norm();
            if norm < 1e-8 {
                return Err(Error::Degenerate(format!("Coons blend vanishes at grid node ({i}, {j})")));
            }
            vertices[idx(i, j)] = blend / norm;
        }
    }
    let mut tag = |i: usize, j: usize, edge: usize, index: usize| {
        let sigma = index as f64 / rf;
        let param = edges[edge].param_at(sigma);
        vertices[idx(i, j)] = edges[edge].point(param);
        boundary[idx(i, j)] = Some(BoundaryTag { edge, index, param });
    };
    for k in 0..r {
        tag(k, 0, 0, k);
        tag(r, k, 1, k);
        tag(r - k, r, 2, k);
        tag(0, r - k, 3, k);
    }
    let mut faces = Vec::with_capacity(2 * r * r);
    for j in 0..r {
        for i in 0..r {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            // diagonals point into the grid corners, so each corner sits in one triangle per quad
            if (2 * i < r) == (2 * j < r) {
                faces.push([a, b, c]);
                faces.push([a, c, d]);
            } else {
                faces.push([a, b, d]);
                faces.push([b, c, d]);
            }
        }
    }
    Ok(TriMesh { vertices, faces, boundary })
}

/// Quadrature rule for the metric over a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quadrature {
    /// Metric at the normalized centroid.
    #[default]
    Centroid,
    /// Average of the areas measured with the metric at three interior points.
    ThreePoint,
}

impl Quadrature {
    fn points(self) -> &'static [(f64, [f64; 3])] {
        const C: [(f64, [f64; 3]); 1] = [(1.0, [1.0 / 3.0; 3])];
        const T: [(f64, [f64; 3]); 3] = [
            (1.0 / 3.0, [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]),
            (1.0 / 3.0, [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]),
            (1.0 / 3.0, [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0]),
        ];
        match self {
            Self::Centroid => &C,
            Self::ThreePoint => &T,
        }
    }
}

/// Triangles below this area count as zero.
pub const DEGENERATE_AREA: f64 = 1e-16;

/// Gram matrix of the edge chords `e₁ = p₁ − p₀`, `e₂ = p₂ − p₀` under the
/// metric at the quadrature point `c` (unit vector).
fn gram(params: &BergerParams, c: &Vec4, e1: &Vec4, e2: &Vec4) -> (Mat4, [f64; 3]) {
    let m = params.metric_matrix(c);
    let (me1, me2) = (m * e1, m * e2);
    (m, [e1.dot(&me1), e1.dot(&me2), e2.dot(&me2)])
}

/// Berger area of the radial projection of one chord triangle to `S³` and,
/// optionally, its Euclidean gradient with respect to the three vertices.
///
/// Measuring the flat chord triangle itself would under-count large
/// triangles by a relative `O(h²)`, which rewards clustering vertices.
fn face_area(params: &BergerParams, p: [Vec4; 3], rule: Quadrature, with_grad: bool) -> (f64, [Vec4; 3], bool) {
    let (e1, e2) = (p[1] - p[0], p[2] - p[0]);
    let scale = 4.0 / params.kappa();
    let cb = params.vertical_excess();
    let mut area = 0.0;
    let mut grad = [Vec4::zeros(); 3];
    let mut degenerate = false;
    for &(weight, bary) in rule.points() {
        let mvec = p[0] * bary[0] + p[1] * bary[1] + p[2] * bary[2];
        let mnorm = mvec.norm();
        let c = mvec / mnorm;
        let (m, [g11, g12, g22]) = gram(params, &c, &e1, &e2);
        let det = g11 * g22 - g12 * g12;
        let a0 = 0.5 * det.max(0.0).sqrt();
        if a0 < DEGENERATE_AREA {
            degenerate = true;
            continue;
        }
        // the radial projection x ↦ x/|x| shrinks areas by |x|²
        let inv2 = 1.0 / (mnorm * mnorm);
        area += weight * a0 * inv2;
        if !with_grad {
            continue;
        }
        let k = weight * inv2 / (8.0 * a0);
        let (me1, me2) = (m * e1, m * e2);
        let d1 = (me1 * (2.0 * g22) - me2 * (2.0 * g12)) * k;
        let d2 = (me2 * (2.0 * g11) - me1 * (2.0 * g12)) * k;
        // dependence of the metric on the quadrature point
        let jc = complex_j(&c);
        let (je1, je2) = (complex_j(&e1), complex_j(&e2));
        let q = |ei: &Vec4, ej: &Vec4, jei: &Vec4, jej: &Vec4| {
            (-(ei * c.dot(ej)) - ej * ei.dot(&c) - (jei * jc.dot(ej) + jej * ei.dot(&jc)) * cb) * scale
        };
        let qd = q(&e1, &e1, &je1, &je1) * g22 + q(&e2, &e2, &je2, &je2) * g11 - q(&e1, &e2, &je1, &je2) * (2.0 * g12);
        let dc = tangent_part(&c, &qd) * (k / mnorm) - c * (2.0 * weight * a0 * inv2 / mnorm);
        grad[0] += -d1 - d2 + dc * bary[0];
        grad[1] += d1 + dc * bary[1];
        grad[2] += d2 + dc * bary[2];
    }
    (area, grad, degenerate)
}

fn face_points(vertices: &[Vec4], f: &[usize; 3]) -> [Vec4; 3] {
    [vertices[f[0]], vertices[f[1]], vertices[f[2]]]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaSummary {
    pub area: f64,
    pub degenerate_faces: usize,
}

/// Berger area with per-face terms summed in face order, independent of the thread count.
pub fn berger_area_summary(params: &BergerParams, mesh: &TriMesh, rule: Quadrature) -> AreaSummary {
    let terms: Vec<(f64, bool)> = mesh
        .faces
        .par_iter()
        .map(|f| {
            let (a, _, d) = face_area(params, face_points(&mesh.vertices, f), rule, false);
            (a, d)
        })
        .collect();
    AreaSummary {
        area: terms.iter().map(|t| t.0).sum(),
        degenerate_faces: terms.iter().filter(|t| t.1).count(),
    }
}

pub fn berger_area(params: &BergerParams, mesh: &TriMesh) -> f64 {
    berger_area_summary(params, mesh, Quadrature::Centroid).area
}

/// Per-face areas, in face order.
fn face_terms(params: &BergerParams, vertices: &[Vec4], faces: &[[usize; 3]], rule: Quadrature) -> Vec<f64> {
    faces.par_iter().map(|f| face_area(params, face_points(vertices, f), rule, false).0).collect()
}

fn terms_and_gradient(params: &BergerParams, vertices: &[Vec4], faces: &[[usize; 3]], rule: Quadrature) -> (Vec<f64>, Vec<Vec4>) {
    let terms: Vec<(f64, [Vec4; 3])> = faces
        .par_iter()
        .map(|f| {
            let (a, g, _) = face_area(params, face_points(vertices, f), rule, true);
            (a, g)
        })
        .collect();
    let mut grad = vec![Vec4::zeros(); vertices.len()];
    for (f, (_, g)) in faces.iter().zip(&terms) {
        for k in 0..3 {
            grad[f[k]] += g[k];
        }
    }
    (terms.into_iter().map(|t| t.0).collect(), grad)
}

/// Total area and its Euclidean gradient per vertex.
pub fn area_gradient(params: &BergerParams, vertices: &[Vec4], faces: &[[usize; 3]], rule: Quadrature) -> (f64, Vec<Vec4>) {
    let (terms, grad) = terms_and_gradient(params, vertices, faces, rule);
    (terms.iter().sum(), grad)
}

/// Interior angles of a triangle under the metric at its quadrature point.
pub fn face_angles(params: &BergerParams, p: [Vec4; 3]) -> [f64; 3] {
    let c = (p[0] + p[1] + p[2]).normalize();
    let m = params.metric_matrix(&c);
    let angle = |a: &Vec4, b: &Vec4| {
        let (ma, mb) = (m * a, m * b);
        (a.dot(&mb) / (a.dot(&ma) * b.dot(&mb)).sqrt()).clamp(-1.0, 1.0).acos()
    };
    std::array::from_fn(|k| angle(&(p[(k + 1) % 3] - p[k]), &(p[(k + 2) % 3] - p[k])))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum StepRule {
    /// Limited-memory quasi-Newton directions with Armijo backtracking.
    Lbfgs { memory: usize },
    /// Steepest descent with Armijo backtracking.
    SteepestDescent,
}

impl Default for StepRule {
    fn default() -> Self {
        Self::Lbfgs { memory: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub max_iter: usize,
    /// Absolute tolerance on the norm of the area gradient with respect to
    /// the normal offsets of the free vertices; `None` means `1e-7 ×` the
    /// mean edge length of the input mesh.
    pub grad_tol: Option<f64>,
    pub step_rule: StepRule,
    pub quadrature: Quadrature,
    pub armijo: f64,
    /// Smooth between rounds when the smallest angle drops below this (degrees).
    pub smoothing_angle_deg: f64,
    /// After smoothing, a smallest angle below this (degrees) requires remeshing.
    pub remesh_angle_deg: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iter: 50_000,
            grad_tol: None,
            step_rule: StepRule::default(),
            quadrature: Quadrature::Centroid,
            armijo: 1e-4,
            smoothing_angle_deg: 5.0,
            remesh_angle_deg: 0.5,
        }
    }
}

/// Relative area change treated as zero by the line search.
pub const ROUNDING_LEVEL: f64 = 1e-14;

/// Relative factor for the default gradient tolerance.
pub const GRAD_TOL_FACTOR: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub initial_area: f64,
    pub area: f64,
    pub grad_norm: f64,
    pub grad_tol: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Largest per-vertex gradient norm divided by the vertex's dual area.
    pub mean_curvature_residual: f64,
    pub min_angle_deg: f64,
    pub smoothing_passes: usize,
    pub degenerate_faces: usize,
    /// Whether no accepted descent step increased the area by more than
    /// [`ROUNDING_LEVEL`] relative.
    pub area_monotone: bool,
}

/// Runs `f` on a pool sized by `BERGER_NUM_THREADS`, or on the global pool.
pub fn with_thread_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var("BERGER_NUM_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    match threads.and_then(|t| rayon::ThreadPoolBuilder::new().num_threads(t).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

/// Free vertices move along fixed directions: `x_v(h) = (x⁰_v + h_v d_v)/|·|`.
/// Freezing the tangential placement removes the zero-energy sliding modes
/// of the discrete area; the directions are refreshed between rounds.
struct Chart {
    vars: Vec<usize>,
    base: Vec<Vec4>,
    dirs: Vec<Vec4>,
}

impl Chart {
    fn new(x: &[Vec4], faces: &[[usize; 3]], free: &[bool]) -> Self {
        let normals = vertex_normals(x, faces);
        let vars: Vec<usize> = (0..x.len()).filter(|&v| free[v] && normals[v].norm() > 0.0).collect();
        Self { base: vars.iter().map(|&v| x[v]).collect(), dirs: vars.iter().map(|&v| normals[v]).collect(), vars }
    }

    fn positions(&self, template: &[Vec4], h: &[f64]) -> Vec<Vec4> {
        let mut x = template.to_vec();
        for (i, &v) in self.vars.iter().enumerate() {
            x[v] = (self.base[i] + self.dirs[i] * h[i]).normalize();
        }
        x
    }
}

struct State {
    h: Vec<f64>,
    x: Vec<Vec4>,
    area: f64,
    terms: Vec<f64>,
    grad: Vec<f64>,
    norm: f64,
}

fn evaluate(params: &BergerParams, chart: &Chart, template: &[Vec4], h: Vec<f64>, faces: &[[usize; 3]], rule: Quadrature) -> State {
    let x = chart.positions(template, &h);
    let (terms, eg) = terms_and_gradient(params, &x, faces, rule);
    let grad: Vec<f64> = chart
        .vars
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let raw = chart.base[i] + chart.dirs[i] * h[i];
            let dx = (chart.dirs[i] - x[v] * x[v].dot(&chart.dirs[i])) / raw.norm();
            eg[v].dot(&dx)
        })
        .collect();
    let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    State { h, x, area: terms.iter().sum(), terms, grad, norm }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Unit normal of a triangle inside `T_c S³`.
fn face_normal(p: [Vec4; 3]) -> Vec4 {
    let c = (p[0] + p[1] + p[2]).normalize();
    let n = cross3(&c, &(p[1] - p[0]), &(p[2] - p[0]));
    let len = n.norm();
    if len > 0.0 { n / len } else { n }
}

/// Area-weighted vertex normals, tangent to `S³` and of unit length.
fn vertex_normals(x: &[Vec4], faces: &[[usize; 3]]) -> Vec<Vec4> {
    let mut acc = vec![Vec4::zeros(); x.len()];
    for f in faces {
        let p = face_points(x, f);
        let c = (p[0] + p[1] + p[2]).normalize();
        let n = cross3(&c, &(p[1] - p[0]), &(p[2] - p[0]));
        for &v in f {
            acc[v] += n;
        }
    }
    acc.iter().zip(x).map(|(n, p)| tangent_part(p, n).try_normalize(1e-300).unwrap_or_else(Vec4::zeros)).collect()
}

/// Vector orthogonal to `a`, `b`, `c` in `ℝ⁴` with `det(a, b, c, ·) = |·|²`.
pub fn cross3(a: &Vec4, b: &Vec4, c: &Vec4) -> Vec4 {
    let minor = |i: usize| {
        let cols: Vec<usize> = (0..4).filter(|&k| k != i).collect();
        let r = |v: &Vec4| nalgebra::Vector3::new(v[cols[0]], v[cols[1]], v[cols[2]]);
        nalgebra::Matrix3::from_columns(&[r(a), r(b), r(c)]).determinant()
    };
    Vec4::new(-minor(0), minor(1), -minor(2), minor(3))
}

/// `det(p₀, p₁, p₂, ·)` per face, a normal inside the tangent space of `S³`.
fn face_orientations(x: &[Vec4], faces: &[[usize; 3]]) -> Vec<Vec4> {
    faces.par_iter().map(|f| cross3(&x[f[0]], &x[f[1]], &x[f[2]])).collect()
}

/// Whether a face with a free vertex turned over relative to `reference`.
fn flips_a_face(x: &[Vec4], faces: &[[usize; 3]], free: &[bool], reference: &[Vec4]) -> bool {
    faces.par_iter().zip(reference).any(|(f, r)| {
        f.iter().any(|&v| free[v]) && cross3(&x[f[0]], &x[f[1]], &x[f[2]]).dot(r) <= 0.0
    })
}

/// Smallest angle (degrees) over faces with at least one free vertex.
fn min_free_angle(x: &[Vec4], faces: &[[usize; 3]], free: &[bool]) -> f64 {
    faces
        .iter()
        .filter(|f| f.iter().any(|&v| free[v]))
        .flat_map(|f| {
            let p = face_points(x, f);
            (0..3).map(move |k| {
                let a = p[(k + 1) % 3] - p[k];
                let b = p[(k + 2) % 3] - p[k];
                (a.dot(&b) / (a.norm() * b.norm())).clamp(-1.0, 1.0).acos()
            })
        })
        .fold(f64::INFINITY, f64::min)
        .to_degrees()
}

/// One pass of tangential Laplacian smoothing of the free vertices.
fn smooth(x: &mut [Vec4], faces: &[[usize; 3]], free: &[bool]) {
    let mut sum = vec![Vec4::zeros(); x.len()];
    let mut count = vec![0usize; x.len()];
    let mut normal = vec![Vec4::zeros(); x.len()];
    for f in faces {
        let n = face_normal(face_points(x, f));
        for k in 0..3 {
            let v = f[k];
            sum[v] += x[f[(k + 1) % 3]] + x[f[(k + 2) % 3]];
            count[v] += 2;
            normal[v] += n;
        }
    }
    for v in 0..x.len() {
        if !free[v] || count[v] == 0 {
            continue;
        }
        let n = tangent_part(&x[v], &normal[v]).try_normalize(1e-300).unwrap_or_else(Vec4::zeros);
        let delta = tangent_part(&x[v], &(sum[v] / count[v] as f64 - x[v]));
        let delta = delta - n * n.dot(&delta);
        x[v] = (x[v] + delta * 0.5).normalize();
    }
}

/// Per-vertex normal gradient over dual area, maximized over free vertices.
fn curvature_residual(params: &BergerParams, chart: &Chart, st: &State, faces: &[[usize; 3]], rule: Quadrature) -> f64 {
    let mut dual = vec![0.0; st.x.len()];
    for f in faces {
        let a = face_area(params, face_points(&st.x, f), rule, false).0;
        for &v in f {
            dual[v] += a / 3.0;
        }
    }
    chart
        .vars
        .iter()
        .zip(&st.grad)
        .filter(|(&v, _)| dual[v] > 0.0)
        .map(|(&v, g)| g.abs() / dual[v])
        .fold(0.0, f64::max)
}

/// Largest normal offset, relative to the mean edge length, before the
/// directions are refreshed: fixed normals of a curved patch converge, so
/// long moves along them would collapse triangles.
const CHART_DRIFT: f64 = 0.25;

/// Minimizes the discrete Berger area over the free (untagged) vertices.
///
/// Vertices move along their normals; the directions are refreshed after
/// each converged round until the gradient in fresh normal directions is
/// below tolerance. Non-convergence within `max_iter` is reported through
/// `converged = false`; a mesh whose smallest angle stays below
/// `remesh_angle_deg` after smoothing is an error.
pub fn minimize_area(params: &BergerParams, mesh: &TriMesh, opts: &SolveOptions) -> Result<(TriMesh, SolveReport)> {
    with_thread_pool(|| minimize_area_inner(params, mesh, opts))
}

struct Progress {
    iterations: usize,
    monotone: bool,
    stalled: bool,
}

fn minimize_area_inner(params: &BergerParams, mesh: &TriMesh, opts: &SolveOptions) -> Result<(TriMesh, SolveReport)> {
    let nv = mesh.vertices.len();
    if mesh.faces.iter().flatten().any(|&v| v >= nv) {
        return domain("face index out of range");
    }
    let free: Vec<bool> = (0..nv).map(|v| !mesh.is_fixed(v)).collect();
    let faces = &mesh.faces;
    let rule = opts.quadrature;
    let tol = opts.grad_tol.unwrap_or(GRAD_TOL_FACTOR * mesh.mean_edge_length());
    let initial_area = berger_area_summary(params, mesh, rule).area;
    let mut x = mesh.vertices.clone();
    let mut progress = Progress { iterations: 0, monotone: true, stalled: false };
    let mut smoothing_passes = 0;
    let mut rounds = 0;
    let drift = CHART_DRIFT * mesh.mean_edge_length();
    let (chart, st) = loop {
        if min_free_angle(&x, faces, &free) < opts.smoothing_angle_deg && rounds > 0 {
            smooth(&mut x, faces, &free);
            smoothing_passes += 1;
            let angle = min_free_angle(&x, faces, &free);
            if angle < opts.remesh_angle_deg {
                return Err(Error::RemeshNeeded { min_angle_deg: angle });
            }
        }
        let chart = Chart::new(&x, faces, &free);
        let h0 = vec![0.0; chart.vars.len()];
        let st = evaluate(params, &chart, &x, h0, faces, rule);
        rounds += 1;
        if st.norm <= tol || progress.iterations >= opts.max_iter || progress.stalled {
            break (chart, st);
        }
        let st = descend(params, &chart, &x, st, faces, &free, tol, drift, opts, &mut progress);
        x = st.x.clone();
    };
    let converged = st.norm <= tol && !progress.stalled;
    let residual = curvature_residual(params, &chart, &st, faces, rule);
    let out = TriMesh { vertices: st.x.clone(), faces: faces.clone(), boundary: mesh.boundary.clone() };
    let summary = berger_area_summary(params, &out, rule);
    let report = SolveReport {
        initial_area,
        area: st.area,
        grad_norm: st.norm,
        grad_tol: tol,
        iterations: progress.iterations,
        converged,
        mean_curvature_residual: residual,
        min_angle_deg: min_free_angle(&out.vertices, faces, &free),
        smoothing_passes,
        degenerate_faces: summary.degenerate_faces,
        area_monotone: progress.monotone,
    };
    Ok((out, report))
}

/// Line-search descent on the heights of one chart.
#[allow(clippy::too_many_arguments)]
fn descend(
    params: &BergerParams,
    chart: &Chart,
    template: &[Vec4],
    mut st: State,
    faces: &[[usize; 3]],
    free: &[bool],
    tol: f64,
    drift: f64,
    opts: &SolveOptions,
    progress: &mut Progress,
) -> State {
    let rule = opts.quadrature;
    let memory = match opts.step_rule {
        StepRule::Lbfgs { memory } => memory,
        StepRule::SteepestDescent => 0,
    };
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut alpha_sd = 1.0;
    while st.norm > tol && progress.iterations < opts.max_iter {
        if st.h.iter().any(|h| h.abs() > drift) {
            break;
        }
        let d = direction(&st, &history);
        let slope = dot(&st.grad, &d);
        let (d, slope, quasi_newton) = if slope < 0.0 && !history.is_empty() {
            (d, slope, true)
        } else {
            let sd: Vec<f64> = st.grad.iter().map(|g| -g).collect();
            (sd, -st.norm * st.norm, false)
        };
        let mut alpha = if quasi_newton { 1.0 } else { alpha_sd };
        let mut accepted = None;
        let orientation = face_orientations(&st.x, faces);
        for _ in 0..80 {
            let h: Vec<f64> = st.h.iter().zip(&d).map(|(h, d)| h + alpha * d).collect();
            let x = chart.positions(template, &h);
            if flips_a_face(&x, faces, free, &orientation) {
                alpha *= 0.5;
                continue;
            }
            // the change is summed face by face, which resolves it far below
            // the rounding level of the total area
            let delta: f64 = face_terms(params, &x, faces, rule).iter().zip(&st.terms).map(|(a, b)| a - b).sum();
            if delta <= opts.armijo * alpha * slope {
                accepted = Some((h, None));
                break;
            }
            if delta.abs() <= ROUNDING_LEVEL * st.area {
                // no measurable change: accept when the gradient improves
                let trial = evaluate(params, chart, template, h.clone(), faces, rule);
                if trial.norm < st.norm {
                    accepted = Some((h, Some(trial)));
                    break;
                }
            }
            alpha *= 0.5;
        }
        let Some((h, evaluated)) = accepted else {
            if history.is_empty() {
                progress.stalled = true;
                break;
            }
            history.clear();
            continue;
        };
        if !quasi_newton {
            alpha_sd = alpha * 2.0;
        }
        let new = evaluated.unwrap_or_else(|| evaluate(params, chart, template, h, faces, rule));
        let delta: f64 = new.terms.iter().zip(&st.terms).map(|(a, b)| a - b).sum();
        if delta > ROUNDING_LEVEL * st.area {
            progress.monotone = false;
        }
        if memory > 0 {
            let s: Vec<f64> = new.h.iter().zip(&st.h).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = new.grad.iter().zip(&st.grad).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &y);
            if sy > 1e-14 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
                history.push_back((s, y, sy));
                if history.len() > memory {
                    history.pop_front();
                }
            }
        }
        st = new;
        progress.iterations += 1;
    }
    st
}

/// L-BFGS two-loop recursion with the scaled identity as initial inverse Hessian.
fn direction(st: &State, history: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let Some((_, y_last, sy_last)) = history.back() else {
        return st.grad.iter().map(|g| -g).collect();
    };
    let mut q = st.grad.clone();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, sy) in history.iter().rev() {
        let a = dot(s, &q) / sy;
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= yi * a;
        }
        alphas.push(a);
    }
    let gamma = sy_last / dot(y_last, y_last);
    let mut r: Vec<f64> = q.iter().map(|v| v * gamma).collect();
    for ((s, y, sy), a) in history.iter().zip(alphas.into_iter().rev()) {
        let b = dot(y, &r) / sy;
        for (ri, si) in r.iter_mut().zip(s) {
            *ri += si * (a - b);
        }
    }
    r.iter().map(|v| -v).collect()
}

/// Distance from `p` to the nearest point of a surface patch, by Gauss–Newton
/// from the initial parameter guess, clamped to the patch domain.
pub fn distance_to_surface<S: ParamSurface + ?Sized>(surface: &S, p: &Vec4, guess: (f64, f64)) -> f64 {
    let dom = surface.domain();
    let (mut s, mut t) = guess;
    for _ in 0..30 {
        let j = surface.jet(s, t);
        let r = j.p - p;
        let (a, b, c) = (j.ds.dot(&j.ds), j.ds.dot(&j.dt), j.dt.dot(&j.dt));
        let (g1, g2) = (j.ds.dot(&r), j.dt.dot(&r));
        let det = a * c - b * b;
        if det.abs() < 1e-300 {
            break;
        }
        let ds = (c * g1 - b * g2) / det;
        let dt = (a * g2 - b * g1) / det;
        s = (s - ds).clamp(dom.s.0, dom.s.1);
        t = (t - dt).clamp(dom.t.0, dom.t.1);
        if ds.abs() + dt.abs() < 1e-15 {
            break;
        }
    }
    (surface.eval(s, t) - p).norm()
}

/// Largest distance between any two vertices (ambient chord length).
pub fn mesh_diameter(mesh: &TriMesh) -> f64 {
    let v = &mesh.vertices;
    (0..v.len())
        .into_par_iter()
        .map(|i| (i + 1..v.len()).map(|j| (v[i] - v[j]).norm()).fold(0.0, f64::max))
        .reduce(|| 0.0, f64::max)
}

/// Maximal distance from the mesh vertices to the exact `Φ_{θ/φ}` piece of
/// the polygon `Γ̃`, relative to the mesh diameter.
pub fn lawson_piece_deviation(spec: &PolygonSpec, mesh: &TriMesh) -> f64 {
    let piece = lawson_piece(spec);
    let c = piece.c;
    let worst = mesh
        .vertices
        .par_iter()
        .map(|p| {
            let (z, w) = to_complex(p);
            // invert (cos s · e^{ict}, sin s · e^{it}) where possible
            let s = w.norm().atan2(z.norm());
            let t = if w.norm() > 1e-3 { w.arg() } else { z.arg() / c.max(1e-12) };
            distance_to_surface(&piece, p, (s, t.clamp(0.0, spec.phi)))
        })
        .reduce(|| 0.0, f64::max);
    worst / mesh_diameter(mesh)
}

/// Worst violation of the solid region inequalities over the mesh vertices.
pub fn region_violation(spec: &PolygonSpec, mesh: &TriMesh) -> f64 {
    mesh.vertices.iter().map(|p| spec.region_violation(p)).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::mean_curvature_berger_direct;

    fn berger() -> BergerParams {
        BergerParams::new(4.0, 0.7).unwrap()
    }

    #[test]
    fn polygons_close_and_classify() {
        for variant in [Variant::Orientable, Variant::Nonorientable, Variant::Lawson] {
            for (m, n) in [(1, 1), (2, 1), (3, 3)] {
                let spec = PolygonSpec::new(m, n, variant).unwrap();
                let edges = build_polygon(&spec);
                assert!(closure_gap(&edges) < 1e-12, "{variant:?}");
                let vertical = edges.iter().filter(|e| e.kind().unwrap() == GeodesicKind::Vertical).count();
                let horizontal = edges.iter().filter(|e| e.kind().unwrap() == GeodesicKind::Horizontal).count();
                let expected = match variant {
                    Variant::Orientable => 0,
                    Variant::Nonorientable => 1,
                    Variant::Lawson => 2,
                };
                assert_eq!((vertical, horizontal), (expected, 4 - expected), "{variant:?}");
            }
        }
    }

    #[test]
    fn nonorientable_needs_odd_n() {
        assert!(PolygonSpec::new(1, 2, Variant::Nonorientable).is_err());
        assert!(PolygonSpec::with_angles(0.0, 1.0, Variant::Orientable).is_err());
        assert!(PolygonSpec::with_angles(1.0, 4.0, Variant::Orientable).is_err());
    }

    #[test]
    fn edge_lengths_match_quadrature() {
        let params = berger();
        let spec = PolygonSpec::new(2, 1, Variant::Nonorientable).unwrap();
        for e in build_polygon(&spec) {
            let (t0, t1) = e.t_range;
            let n = 2000;
            let h = (t1 - t0) / n as f64;
            let quad: f64 = (0..n).map(|i| {
                let t = t0 + (i as f64 + 0.5) * h;
                params.norm(&e.point(t), &e.velocity(t)) * h.abs()
            }).sum();
            assert!((quad - e.length(&params)).abs() < 1e-10, "{}", e.label);
        }
    }

    #[test]
    fn reflections_fix_their_edges() {
        let spec = PolygonSpec::new(2, 3, Variant::Nonorientable).unwrap();
        for e in build_polygon(&spec) {
            let r = e.reflection().unwrap();
            assert!(r.is_involution(1e-14));
            for k in 0..5 {
                let p = e.point(e.param_at(k as f64 / 4.0));
                assert!((r.apply_vec(&p) - p).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn tetrahedron_faces_are_minimal_and_related() {
        let spec = PolygonSpec::new(2, 1, Variant::Orientable).unwrap();
        let faces = tetrahedron_faces(&spec).unwrap();
        let params = berger();
        for face in &faces {
            for (t, s) in face.domain.interior_grid(4) {
                assert!(mean_curvature_berger_direct(&params, face, t, s).unwrap().abs() < 1e-6);
            }
        }
        let rho = Isometry::rotation(spec.theta(), 0.0);
        let swap = Isometry::swap();
        for (t, s) in [(0.3, 0.2), (1.1, 0.9)] {
            assert!((faces[1].eval(t, s) - rho.apply_vec(&faces[0].eval(t, s))).norm() < 1e-14);
            assert!((faces[2].eval(t, s) - swap.apply_vec(&faces[0].eval(FRAC_PI_2 - t, s))).norm() < 1e-14);
        }
    }

    #[test]
    fn init_mesh_is_a_disk_on_the_sphere() {
        let spec = PolygonSpec::new(2, 1, Variant::Orientable).unwrap();
        let mesh = init_mesh(&build_polygon(&spec), 6).unwrap();
        assert_eq!(mesh.boundary.iter().flatten().count(), 24);
        assert_eq!(mesh.euler_characteristic(), 1);
        assert!(mesh.vertices.iter().all(|p| (p.norm() - 1.0).abs() < 1e-12));
        assert!(init_mesh(&build_polygon(&spec), 1).is_err());
    }

    #[test]
    fn area_gradient_matches_finite_differences() {
        let params = berger();
        let spec = PolygonSpec::new(1, 1, Variant::Orientable).unwrap();
        let mesh = init_mesh(&build_polygon(&spec), 3).unwrap();
        for rule in [Quadrature::Centroid, Quadrature::ThreePoint] {
            let (_, g) = area_gradient(&params, &mesh.vertices, &mesh.faces, rule);
            let h = 1e-6;
            for v in [5, 6, 9] {
                for k in 0..4 {
                    let mut plus = mesh.vertices.clone();
                    let mut minus = mesh.vertices.clone();
                    plus[v][k] += h;
                    minus[v][k] -= h;
                    let fd = (face_terms(&params, &plus, &mesh.faces, rule).iter().sum::<f64>() - face_terms(&params, &minus, &mesh.faces, rule).iter().sum::<f64>()) / (2.0 * h);
                    assert!((fd - g[v][k]).abs() < 1e-7, "{rule:?} v{v} k{k}: {fd} vs {}", g[v][k]);
                }
            }
        }
    }

    #[test]
    fn round_area_of_a_face_patch() {
        let params = BergerParams::new(4.0, 1.0).unwrap();
        let spec = PolygonSpec::new(1, 2, Variant::Orientable).unwrap();
        let face = tetrahedron_faces(&spec).unwrap()[0];
        let r = 60;
        let mut mesh = TriMesh::default();
        for j in 0..=r {
            for i in 0..=r {
                mesh.vertices.push(face.eval(FRAC_PI_2 * i as f64 / r as f64, spec.phi() * j as f64 / r as f64));
            }
        }
        for j in 0..r {
            for i in 0..r {
                let a = j * (r + 1) + i;
                mesh.faces.push([a, a + 1, a + r + 2]);
                mesh.faces.push([a, a + r + 2, a + r + 1]);
            }
        }
        // the round area of {(cos t, sin t e^{is})} over [0, π/2] × [0, φ] is φ
        assert!((berger_area(&params, &mesh) - spec.phi()).abs() < 0.01 * spec.phi());
    }

    #[test]
    fn area_is_isometry_invariant() {
        let params = berger();
        let spec = PolygonSpec::new(2, 1, Variant::Orientable).unwrap();
        let mesh = init_mesh(&build_polygon(&spec), 5).unwrap();
        let g = Isometry::conj_rotation(0.4, 1.3).compose(&Isometry::swap());
        let moved = TriMesh { vertices: mesh.vertices.iter().map(|p| g.apply_vec(p)).collect(), ..mesh.clone() };
        assert!((berger_area(&params, &mesh) - berger_area(&params, &moved)).abs() < 1e-10);
    }

    #[test]
    fn minimizer_decreases_area_and_stays_in_region() {
        let params = berger();
        let spec = PolygonSpec::new(2, 1, Variant::Orientable).unwrap();
        let mesh = init_mesh(&build_polygon(&spec), 8).unwrap();
        let (out, report) = minimize_area(&params, &mesh, &SolveOptions::default()).unwrap();
        assert!(report.converged, "{report:?}");
        assert!(report.area <= report.initial_area && report.area_monotone);
        assert!(region_violation(&spec, &out) < 1e-6);
        for (a, b) in mesh.vertices.iter().zip(&out.vertices).zip(&mesh.boundary).filter(|(_, t)| t.is_some()).map(|(v, _)| v) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn steepest_descent_reaches_the_same_minimum() {
        let params = berger();
        let spec = PolygonSpec::new(1, 1, Variant::Orientable).unwrap();
        let mesh = init_mesh(&build_polygon(&spec), 4).unwrap();
        let (a, ra) = minimize_area(&params, &mesh, &SolveOptions::default()).unwrap();
        let sd = SolveOptions { step_rule: StepRule::SteepestDescent, ..Default::default() };
        let (b, rb) = minimize_area(&params, &mesh, &sd).unwrap();
        assert!(ra.converged && rb.converged, "{ra:?} {rb:?}");
        assert!((ra.area - rb.area).abs() < 1e-10);
        let dev = a.vertices.iter().zip(&b.vertices).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        assert!(dev < 1e-5, "{dev}");
    }
}
