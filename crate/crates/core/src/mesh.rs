//! Triangle meshes on `S³`: welding, combinatorial topology and orientation.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::geometry::Vec4;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TriMesh {
    #[serde(with = "vec4_list")]
    pub vertices: Vec<Vec4>,
    pub faces: Vec<[usize; 3]>,
    /// Per-vertex boundary constraint; empty when the mesh carries none.
    #[serde(default)]
    pub boundary: Vec<Option<BoundaryTag>>,
}

/// A vertex fixed on polygon edge `edge`, at sample `index` along it.
/// Sample 0 of edge `k` is the polygon vertex where edge `k` starts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTag {
    pub edge: usize,
    pub index: usize,
    /// Curve parameter of the sample.
    pub param: f64,
}

pub(crate) mod vec4_list {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::geometry::Vec4;

    pub fn serialize<S: Serializer>(v: &[Vec4], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<[f64; 4]> = v.iter().map(|p| [p[0], p[1], p[2], p[3]]).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec4>, D::Error> {
        let rows = Vec::<[f64; 4]>::deserialize(d)?;
        Ok(rows.into_iter().map(Vec4::from).collect())
    }
}

/// An undirected edge with its vertices in increasing order.
pub fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl TriMesh {
    pub fn new(vertices: Vec<Vec4>, faces: Vec<[usize; 3]>) -> Self {
        Self { vertices, faces, boundary: Vec::new() }
    }

    pub fn tag(&self, v: usize) -> Option<BoundaryTag> {
        self.boundary.get(v).copied().flatten()
    }

    pub fn is_fixed(&self, v: usize) -> bool {
        self.tag(v).is_some()
    }

    /// Faces incident to each undirected edge.
    pub fn edge_faces(&self) -> HashMap<(usize, usize), Vec<usize>> {
        let mut map: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for k in 0..3 {
                map.entry(edge_key(f[k], f[(k + 1) % 3])).or_default().push(fi);
            }
        }
        map
    }

    pub fn edge_count(&self) -> usize {
        self.edge_faces().len()
    }

    /// Number of vertices referenced by at least one face.
    pub fn used_vertex_count(&self) -> usize {
        let mut used = vec![false; self.vertices.len()];
        for f in &self.faces {
            for &v in f {
                used[v] = true;
            }
        }
        used.iter().filter(|&&u| u).count()
    }

    /// `V − E + F` over the vertices that are used by faces.
    pub fn euler_characteristic(&self) -> i64 {
        self.used_vertex_count() as i64 - self.edge_count() as i64 + self.faces.len() as i64
    }

    pub fn boundary_edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self.edge_faces().into_iter().filter(|(_, f)| f.len() == 1).map(|(e, _)| e).collect();
        out.sort_unstable();
        out
    }

    pub fn is_closed(&self) -> bool {
        self.edge_faces().values().all(|f| f.len() == 2)
    }

    /// Every edge has one or two faces.
    pub fn is_edge_manifold(&self) -> bool {
        self.edge_faces().values().all(|f| f.len() <= 2)
    }

    /// Remove degenerate faces and faces sharing a vertex set with an earlier face.
    pub fn dedup_faces(&mut self) {
        let mut seen = std::collections::HashSet::new();
        self.faces.retain(|f| {
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return false;
            }
            let mut key = *f;
            key.sort_unstable();
            seen.insert(key)
        });
    }

    /// A coherent reorientation of the faces, or `None` when the mesh is not
    /// orientable. Each connected component keeps the orientation of its
    /// lowest-index face.
    pub fn orientation(&self) -> Option<Vec<[usize; 3]>> {
        let ef = self.edge_faces();
        let mut flip: Vec<Option<bool>> = vec![None; self.faces.len()];
        for start in 0..self.faces.len() {
            if flip[start].is_some() {
                continue;
            }
            flip[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(fi) = queue.pop_front() {
                let f = oriented(self.faces[fi], flip[fi].unwrap_or(false));
                for k in 0..3 {
                    let (a, b) = (f[k], f[(k + 1) % 3]);
                    for &gi in &ef[&edge_key(a, b)] {
                        if gi == fi {
                            continue;
                        }
                        // a coherent neighbour traverses the shared edge as (b, a)
                        let g = self.faces[gi];
                        let same_dir = (0..3).any(|j| g[j] == a && g[(j + 1) % 3] == b);
                        match flip[gi] {
                            None => {
                                flip[gi] = Some(same_dir);
                                queue.push_back(gi);
                            }
                            Some(fl) => {
                                if fl != same_dir {
                                    return None;
                                }
                            }
                        }
                    }
                }
            }
        }
        Some(self.faces.iter().zip(flip).map(|(&f, fl)| oriented(f, fl.unwrap_or(false))).collect())
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation().is_some()
    }

    /// Number of connected components of the face adjacency graph.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for f in &self.faces {
            uf.union(f[0], f[1]);
            uf.union(f[1], f[2]);
        }
        let mut roots: Vec<usize> = self.faces.iter().map(|f| uf.find(f[0])).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    /// Faces incident to each vertex.
    pub fn vertex_stars(&self) -> Vec<Vec<usize>> {
        let mut star: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for (fi, f) in self.faces.iter().enumerate() {
            for &v in f {
                star[v].push(fi);
            }
        }
        star
    }

    /// Whether the faces around each vertex form a single disk or fan.
    pub fn vertex_links_are_disks(&self) -> bool {
        let stars = self.vertex_stars();
        (0..self.vertices.len()).all(|v| self.link_is_disk(v, &stars[v]))
    }

    /// Whether the faces around `v` form a single disk or fan (no pinch).
    pub fn vertex_link_is_disk(&self, v: usize) -> bool {
        let star: Vec<usize> = (0..self.faces.len()).filter(|&f| self.faces[f].contains(&v)).collect();
        self.link_is_disk(v, &star)
    }

    pub(crate) fn link_is_disk(&self, v: usize, faces: &[usize]) -> bool {
        if faces.is_empty() {
            return true;
        }
        // faces sharing an edge through v are adjacent in the link
        let mut uf = UnionFind::new(faces.len());
        let mut by_vertex: HashMap<usize, Vec<usize>> = HashMap::new();
        for (k, &fi) in faces.iter().enumerate() {
            for &w in &self.faces[fi] {
                if w != v {
                    by_vertex.entry(w).or_default().push(k);
                }
            }
        }
        for ks in by_vertex.values() {
            if ks.len() > 2 {
                return false;
            }
            if ks.len() == 2 {
                uf.union(ks[0], ks[1]);
            }
        }
        let root = uf.find(0);
        (1..faces.len()).all(|k| uf.find(k) == root)
    }

    /// Smallest interior angle over all faces, in radians, measured in `ℝ⁴`.
    pub fn min_angle(&self) -> f64 {
        self.faces
            .iter()
            .flat_map(|f| {
                let p = [self.vertices[f[0]], self.vertices[f[1]], self.vertices[f[2]]];
                (0..3).map(move |k| {
                    let a = p[(k + 1) % 3] - p[k];
                    let b = p[(k + 2) % 3] - p[k];
                    (a.dot(&b) / (a.norm() * b.norm())).clamp(-1.0, 1.0).acos()
                })
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn mean_edge_length(&self) -> f64 {
        let ef = self.edge_faces();
        if ef.is_empty() {
            return 0.0;
        }
        ef.keys().map(|&(a, b)| (self.vertices[a] - self.vertices[b]).norm()).sum::<f64>() / ef.len() as f64
    }
}

fn oriented(f: [usize; 3], flip: bool) -> [usize; 3] {
    if flip {
        [f[0], f[2], f[1]]
    } else {
        f
    }
}

#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Union by smaller root, so representatives are deterministic.
    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

/// Identify points closer than `tol` (and accepted by `same`). Returns the
/// compacted index of every input point and the number of distinct points.
/// Indices follow the order of first appearance.
pub fn weld<F: Fn(usize, usize) -> bool>(points: &[Vec4], tol: f64, same: F) -> (Vec<usize>, usize) {
    let cell = |p: &Vec4| -> [i64; 4] { std::array::from_fn(|k| (p[k] / tol).floor() as i64) };
    let mut grid: HashMap<[i64; 4], Vec<usize>> = HashMap::new();
    let mut uf = UnionFind::new(points.len());
    for (i, p) in points.iter().enumerate() {
        let c = cell(p);
        for off in 0..81 {
            let mut key = c;
            let mut o = off;
            for slot in &mut key {
                *slot += (o % 3) as i64 - 1;
                o /= 3;
            }
            if let Some(list) = grid.get(&key) {
                for &j in list {
                    if (points[j] - p).norm() < tol && same(i, j) {
                        uf.union(i, j);
                    }
                }
            }
        }
        grid.entry(c).or_default().push(i);
    }
    let mut compact = HashMap::new();
    let mut out = Vec::with_capacity(points.len());
    for i in 0..points.len() {
        let r = uf.find(i);
        let next = compact.len();
        out.push(*compact.entry(r).or_insert(next));
    }
    (out, compact.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetrahedron() -> TriMesh {
        let v = (0..4).map(|i| Vec4::ith(i, 1.0)).collect();
        TriMesh::new(v, vec![[0, 1, 2], [0, 3, 1], [1, 3, 2], [2, 3, 0]])
    }

    /// Torus or Klein bottle from an `n × n` periodic grid.
    fn periodic_grid(n: usize, twist: bool) -> TriMesh {
        let idx = |i: usize, j: usize| {
            let (i, j) = if i == n && twist { (0, (n - j) % n) } else { (i % n, j % n) };
            i * n + j
        };
        let mut faces = Vec::new();
        for i in 0..n {
            for j in 0..n {
                faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
                faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
            }
        }
        TriMesh::new(vec![Vec4::zeros(); n * n], faces)
    }

    #[test]
    fn sphere_topology() {
        let mut m = tetrahedron();
        assert_eq!(m.euler_characteristic(), 2);
        assert!(m.is_closed() && m.vertex_links_are_disks());
        m.faces[1] = [0, 1, 3];
        let fixed = m.orientation().expect("orientable");
        let mut directed: Vec<(usize, usize)> = fixed.iter().flat_map(|f| (0..3).map(move |k| (f[k], f[(k + 1) % 3]))).collect();
        directed.sort_unstable();
        directed.dedup();
        assert_eq!(directed.len(), 12);
    }

    #[test]
    fn torus_and_klein_bottle() {
        let torus = periodic_grid(6, false);
        assert_eq!(torus.euler_characteristic(), 0);
        assert!(torus.is_orientable() && torus.is_closed());
        let klein = periodic_grid(6, true);
        assert_eq!(klein.euler_characteristic(), 0);
        assert!(!klein.is_orientable() && klein.is_closed());
    }

    #[test]
    fn weld_merges_close_points_only() {
        let pts = vec![Vec4::x(), Vec4::x() * (1.0 + 1e-12), Vec4::y(), Vec4::x() * (1.0 + 1e-3)];
        let (map, count) = weld(&pts, 1e-9, |_, _| true);
        assert_eq!(count, 3);
        assert_eq!(map, vec![0, 0, 1, 2]);
    }

    #[test]
    fn pinched_vertex_is_detected() {
        // two tetrahedra sharing one vertex
        let mut m = tetrahedron();
        m.vertices.extend((0..3).map(|i| Vec4::ith(i, 2.0)));
        m.faces.extend([[0, 4, 5], [0, 6, 4], [4, 6, 5], [5, 6, 0]]);
        assert!(!m.vertex_links_are_disks());
    }
}
