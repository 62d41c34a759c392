//! Reflection-group orbits of a fundamental piece, welded into closed surfaces.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::{BergerParams, Isometry, Vec4};
use crate::mesh::{weld, TriMesh, UnionFind};
use crate::plateau::{build_polygon, face_angles, PolygonSpec, SolveReport, Variant};

/// Matrix distance below which two group elements are the same.
pub const ELEMENT_TOL: f64 = 1e-9;
/// Ambient distance for welding copies when no exact identification is available.
pub const WELD_TOL: f64 = 1e-7;

/// A finite group of isometries generated by edge reflections.
/// `generators[k]` is the reflection across polygon edge `k`.
#[derive(Debug, Clone)]
pub struct ReflectionGroup {
    pub elements: Vec<Isometry>,
    pub generators: Vec<Isometry>,
    pub stabilizer_order: usize,
    pub orbit_ratio: usize,
}

impl ReflectionGroup {
    /// Closes `generators` under composition, failing past `cap` elements.
    /// The stabilizer is the set of elements mapping `reference` onto itself.
    pub fn generate(generators: Vec<Isometry>, cap: usize, reference: &[Vec4]) -> Result<Self> {
        let mut elements = vec![Isometry::identity()];
        let mut next = 0;
        while next < elements.len() {
            let g = elements[next];
            next += 1;
            for r in &generators {
                let h = g.compose(r);
                if find_element(&elements, &h).is_none() {
                    if elements.len() >= cap {
                        return Err(Error::NonDiscrete { cap });
                    }
                    elements.push(h);
                }
            }
        }
        let stabilizer_order = elements.iter().filter(|g| preserves(g, reference)).count();
        let orbit_ratio = elements.len() / stabilizer_order;
        Ok(Self { elements, generators, stabilizer_order, orbit_ratio })
    }

    /// The group containing only the identity.
    pub fn trivial() -> Self {
        Self { elements: vec![Isometry::identity()], generators: Vec::new(), stabilizer_order: 1, orbit_ratio: 1 }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, g: &Isometry) -> Option<usize> {
        find_element(&self.elements, g)
    }

    /// Largest deviation from closure: `d(gh, G)` over all pairs.
    pub fn closure_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for g in &self.elements {
            for h in &self.elements {
                let gh = g.compose(h);
                let d = self.elements.iter().map(|e| e.distance(&gh)).fold(f64::INFINITY, f64::min);
                worst = worst.max(d);
            }
        }
        worst
    }

    fn stabilizer(&self, reference: &[Vec4]) -> Vec<Isometry> {
        self.elements.iter().copied().filter(|g| preserves(g, reference)).collect()
    }
}

fn find_element(elements: &[Isometry], g: &Isometry) -> Option<usize> {
    elements.iter().position(|e| e.distance(g) < ELEMENT_TOL)
}

fn preserves(g: &Isometry, points: &[Vec4]) -> bool {
    points.iter().all(|p| {
        let q = g.apply_vec(p);
        points.iter().any(|x| (x - q).norm() < WELD_TOL)
    })
}

/// Corners and two interior samples of every polygon edge.
fn polygon_reference(spec: &PolygonSpec) -> Vec<Vec4> {
    build_polygon(spec).iter().flat_map(|e| [0.0, 1.0 / 3.0, 2.0 / 3.0].map(|s| e.point(e.param_at(s)))).collect()
}

/// The group generated by the reflections across the edges of the polygon of `spec`.
pub fn generate_group(spec: &PolygonSpec) -> Result<ReflectionGroup> {
    let generators = build_polygon(spec).iter().map(|e| e.reflection()).collect::<Result<Vec<_>>>()?;
    let cap = 16 * (spec.m as usize + 1) * (spec.n as usize + 1) * 8;
    ReflectionGroup::generate(generators, cap, &polygon_reference(spec))
}

/// Result of a local embeddedness check at one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexProbe {
    pub vertex: usize,
    pub link_is_disk: bool,
    /// Pairs of non-adjacent faces near the vertex whose interiors cross.
    pub intersecting_pairs: usize,
}

impl VertexProbe {
    pub fn is_embedded(&self) -> bool {
        self.link_is_disk && self.intersecting_pairs == 0
    }
}

#[derive(Debug, Clone)]
pub struct AssembledSurface {
    pub mesh: TriMesh,
    pub chi: i64,
    pub genus: Option<i64>,
    /// Cross-cap count `2 − χ`, reported for non-orientable surfaces only.
    pub crosscaps: Option<i64>,
    pub orientable: bool,
    /// Number of distinct copies of the fundamental piece.
    pub copies: usize,
    /// Welded indices of the images of the polygon vertices.
    pub polygon_vertices: Vec<usize>,
    pub singular_vertex_report: Vec<VertexProbe>,
}

/// Vertices of `fund` lying on edge `k`: its own samples plus the start of
/// edge `k + 1`, which is where edge `k` ends.
fn edge_members(fund: &TriMesh, edges: usize) -> Vec<Vec<usize>> {
    let mut members = vec![Vec::new(); edges];
    for v in 0..fund.vertices.len() {
        if let Some(tag) = fund.tag(v) {
            members[tag.edge].push(v);
            if tag.index == 0 {
                members[(tag.edge + edges - 1) % edges].push(v);
            }
        }
    }
    members
}

/// Union of the images `g(fund)`, welded along shared boundary samples.
pub fn assemble(fund: &TriMesh, group: &ReflectionGroup) -> Result<AssembledSurface> {
    let nv = fund.vertices.len();
    let edges = group.generators.len();
    let tagged = !fund.boundary.is_empty() && (0..nv).filter_map(|v| fund.tag(v)).all(|t| t.edge < edges);

    // one representative per coset of the stabilizer of the piece
    let stab = group.stabilizer(&fund.vertices);
    let mut reps: Vec<Isometry> = Vec::new();
    for g in &group.elements {
        let gi = g.inverse();
        if !reps.iter().any(|r| stab.iter().any(|h| gi.compose(r).distance(h) < ELEMENT_TOL)) {
            reps.push(*g);
        }
    }
    let exact = tagged && stab.len() == 1 && edges > 0;

    let points: Vec<Vec4> =
        reps.par_iter().flat_map_iter(|g| fund.vertices.iter().map(move |p| g.apply_vec(p))).collect();

    let (map, count) = if exact {
        let members = edge_members(fund, edges);
        let mut uf = UnionFind::new(points.len());
        for (a, g) in reps.iter().enumerate() {
            for (k, r) in group.generators.iter().enumerate() {
                let b = find_element(&reps, &g.compose(r))
                    .ok_or_else(|| Error::Assembly(format!("copy {a} reflected across edge {k} is not in the group")))?;
                for &v in &members[k] {
                    uf.union(a * nv + v, b * nv + v);
                }
            }
        }
        let mut rep_of = vec![usize::MAX; points.len()];
        let mut out = Vec::with_capacity(points.len());
        let mut firsts: Vec<usize> = Vec::new();
        for i in 0..points.len() {
            let root = uf.find(i);
            if rep_of[root] == usize::MAX {
                rep_of[root] = firsts.len();
                firsts.push(i);
            }
            let id = rep_of[root];
            let gap = (points[i] - points[firsts[id]]).norm();
            if gap > WELD_TOL {
                return Err(Error::Assembly(format!(
                    "weld mismatch: identified samples are {gap:.3e} apart (tolerance {WELD_TOL:e})"
                )));
            }
            out.push(id);
        }
        let count = firsts.len();
        (out, count)
    } else {
        weld(&points, WELD_TOL, |_, _| true)
    };

    let mut vertices = vec![Vec4::zeros(); count];
    for (i, &id) in map.iter().enumerate() {
        vertices[id] = points[i];
    }
    let faces: Vec<[usize; 3]> = (0..reps.len())
        .flat_map(|a| fund.faces.iter().map(move |f| f.map(|v| a * nv + v)))
        .map(|f| f.map(|i| map[i]))
        .collect();
    let mut mesh = TriMesh::new(vertices, faces);
    mesh.dedup_faces();
    if !mesh.is_closed() {
        let open = mesh.edge_faces().values().filter(|f| f.len() != 2).count();
        return Err(Error::Assembly(format!("welded surface is not closed: {open} edges without exactly two faces")));
    }
    let orientation = mesh.orientation();
    let orientable = orientation.is_some();
    if let Some(faces) = orientation {
        mesh.faces = faces;
    }
    let chi = mesh.euler_characteristic();
    let mut polygon_vertices: Vec<usize> = (0..reps.len())
        .flat_map(|a| (0..nv).filter(|&v| fund.tag(v).is_some_and(|t| t.index == 0)).map(move |v| a * nv + v))
        .map(|i| map[i])
        .collect();
    polygon_vertices.sort_unstable();
    polygon_vertices.dedup();
    let mut surface = AssembledSurface {
        chi,
        genus: orientable.then_some((2 - chi) / 2),
        crosscaps: (!orientable).then_some(2 - chi),
        orientable,
        copies: reps.len(),
        polygon_vertices,
        singular_vertex_report: Vec::new(),
        mesh,
    };
    let radius = 3.0 * surface.mesh.mean_edge_length();
    let ids = surface.polygon_vertices.clone();
    surface.singular_vertex_report = local_embeddedness_probe(&surface, &ids, radius);
    Ok(surface)
}

/// The non-orientable surface over the polygon with a vertical edge; `n` must be odd.
pub fn assemble_nonorientable(fund: &TriMesh, spec: &PolygonSpec) -> Result<AssembledSurface> {
    if spec.variant != Variant::Nonorientable {
        return domain(format!("non-orientable assembly needs the vertical-edge polygon, got {:?}", spec.variant));
    }
    if spec.n.is_multiple_of(2) {
        return domain(format!("non-orientable assembly needs n odd, got n = {}", spec.n));
    }
    assemble(fund, &generate_group(spec)?)
}

/// Contributions to the discrete total curvature of a fundamental piece.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussBonnetTerms {
    /// `Σ (2π − Σθ)` over interior vertices.
    pub interior: f64,
    /// `Σ (π − Σθ)` over boundary vertices that are not polygon corners:
    /// the discrete geodesic curvature of the boundary.
    pub boundary: f64,
    /// Mesh angle at each polygon corner, in edge order.
    pub corner_angles: [f64; 4],
}

impl GaussBonnetTerms {
    /// Discrete `∫K`: interior defects plus boundary curvature terms.
    pub fn integral(&self) -> f64 {
        self.interior + self.boundary
    }
}

fn angle_sums(params: &BergerParams, mesh: &TriMesh) -> Vec<f64> {
    let per_face: Vec<[f64; 3]> = mesh
        .faces
        .par_iter()
        .map(|f| face_angles(params, [mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]]))
        .collect();
    let mut sums = vec![0.0; mesh.vertices.len()];
    for (f, a) in mesh.faces.iter().zip(&per_face) {
        for k in 0..3 {
            sums[f[k]] += a[k];
        }
    }
    sums
}

pub fn gauss_bonnet_terms(params: &BergerParams, fund: &TriMesh) -> Result<GaussBonnetTerms> {
    if fund.boundary.is_empty() {
        return domain("fundamental piece carries no boundary tags");
    }
    let sums = angle_sums(params, fund);
    let mut terms = GaussBonnetTerms { interior: 0.0, boundary: 0.0, corner_angles: [f64::NAN; 4] };
    let stars = fund.vertex_stars();
    for (v, &sum) in sums.iter().enumerate() {
        if stars[v].is_empty() {
            continue;
        }
        match fund.tag(v) {
            None => terms.interior += 2.0 * PI - sum,
            Some(t) if t.index == 0 && t.edge < 4 => terms.corner_angles[t.edge] = sum,
            Some(_) => terms.boundary += PI - sum,
        }
    }
    if terms.corner_angles.iter().any(|a| a.is_nan()) {
        return domain("fundamental piece does not have four tagged corners");
    }
    Ok(terms)
}

/// Discrete total curvature of a fundamental piece. With a solver report,
/// a non-converged piece is refused; pass `None` for report-only use.
pub fn gauss_bonnet_fundamental(params: &BergerParams, fund: &TriMesh, solve: Option<&SolveReport>) -> Result<f64> {
    if let Some(r) = solve {
        if !r.converged {
            return Err(Error::NotConverged(format!(
                "gradient norm {:.3e} above tolerance {:.3e} after {} iterations",
                r.grad_norm, r.grad_tol, r.iterations
            )));
        }
    }
    Ok(gauss_bonnet_terms(params, fund)?.integral())
}

/// `Σ (2π − Σθ)` over all vertices of a closed mesh.
pub fn gauss_bonnet_closed(params: &BergerParams, mesh: &TriMesh) -> f64 {
    let stars = mesh.vertex_stars();
    angle_sums(params, mesh).iter().zip(&stars).filter(|(_, s)| !s.is_empty()).map(|(sum, _)| 2.0 * PI - sum).sum()
}

/// Link and self-intersection check around the given vertices. Faces within
/// ambient distance `radius` of a vertex are projected to its tangent space and
/// every pair without a shared vertex is tested for crossing.
pub fn local_embeddedness_probe(surface: &AssembledSurface, vertex_ids: &[usize], radius: f64) -> Vec<VertexProbe> {
    let mesh = &surface.mesh;
    let stars = mesh.vertex_stars();
    vertex_ids
        .par_iter()
        .map(|&v| {
            let p = mesh.vertices[v];
            let near: Vec<usize> = (0..mesh.faces.len())
                .filter(|&f| mesh.faces[f].iter().any(|&w| (mesh.vertices[w] - p).norm() < radius))
                .collect();
            let frame = tangent_frame(&p);
            let chart = |x: &Vec4| -> [f64; 3] { std::array::from_fn(|k| frame[k].dot(x)) };
            let tris: Vec<[[f64; 3]; 3]> =
                near.iter().map(|&f| mesh.faces[f].map(|w| chart(&mesh.vertices[w]))).collect();
            let mut crossings = 0;
            for i in 0..near.len() {
                for j in (i + 1)..near.len() {
                    let (fa, fb) = (mesh.faces[near[i]], mesh.faces[near[j]]);
                    if fa.iter().any(|a| fb.contains(a)) {
                        continue;
                    }
                    if triangles_cross(&tris[i], &tris[j]) {
                        crossings += 1;
                    }
                }
            }
            VertexProbe { vertex: v, link_is_disk: mesh_link_is_disk(mesh, v, &stars[v]), intersecting_pairs: crossings }
        })
        .collect()
}

fn mesh_link_is_disk(mesh: &TriMesh, v: usize, star: &[usize]) -> bool {
    !star.is_empty() && mesh.link_is_disk(v, star)
}

/// Orthonormal basis of the tangent space of `S³` at `p`.
fn tangent_frame(p: &Vec4) -> [Vec4; 3] {
    let mut basis: Vec<Vec4> = Vec::with_capacity(3);
    for k in 0..4 {
        let mut e = Vec4::zeros();
        e[k] = 1.0;
        let mut x = e - p * p.dot(&e);
        for b in &basis {
            x -= b * b.dot(&x);
        }
        if x.norm() > 1e-3 {
            basis.push(x.normalize());
        }
        if basis.len() == 3 {
            break;
        }
    }
    [basis[0], basis[1], basis[2]]
}

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Whether the segment `p → q` passes through the interior of triangle `t`.
fn segment_hits(p: &[f64; 3], q: &[f64; 3], t: &[[f64; 3]; 3]) -> bool {
    const EPS: f64 = 1e-12;
    let d = sub(q, p);
    let (e1, e2) = (sub(&t[1], &t[0]), sub(&t[2], &t[0]));
    let h = cross(&d, &e2);
    let det = dot(&e1, &h);
    let scale = dot(&d, &d).sqrt() * dot(&e1, &e1).sqrt() * dot(&e2, &e2).sqrt();
    if det.abs() <= EPS * scale {
        return false;
    }
    let s = sub(p, &t[0]);
    let u = dot(&s, &h) / det;
    let qv = cross(&s, &e1);
    let v = dot(&d, &qv) / det;
    let w = dot(&e2, &qv) / det;
    u > EPS && v > EPS && u + v < 1.0 - EPS && w > EPS && w < 1.0 - EPS
}

fn triangles_cross(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> bool {
    (0..3).any(|k| segment_hits(&a[k], &a[(k + 1) % 3], b) || segment_hits(&b[k], &b[(k + 1) % 3], a))
}
