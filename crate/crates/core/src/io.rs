//! Mesh checkpoints, run reports and OBJ/PLY exports.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::stereographic;
use crate::mesh::TriMesh;
use crate::plateau::{SolveReport, Variant};
use crate::surface::ParamSurface;

/// Schema version written into every checkpoint and report.
pub const FORMAT_VERSION: u32 = 1;

/// A fundamental piece together with the problem it solves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: u32,
    pub kappa: f64,
    pub tau: f64,
    pub m: u32,
    pub n: u32,
    pub variant: Variant,
    pub mesh: TriMesh,
    pub solve: Option<SolveReport>,
}

impl Checkpoint {
    pub fn new(kappa: f64, tau: f64, m: u32, n: u32, variant: Variant, mesh: TriMesh, solve: Option<SolveReport>) -> Self {
        Self { format: FORMAT_VERSION, kappa, tau, m, n, variant, mesh, solve }
    }

    /// Fails with a spec mismatch unless the checkpoint solves `(m, n, variant)`.
    pub fn ensure_matches(&self, m: u32, n: u32, variant: Variant) -> Result<()> {
        if (self.m, self.n, self.variant) != (m, n, variant) {
            return Err(Error::SpecMismatch(format!(
                "checkpoint holds ({}, {}, {:?}), requested ({m}, {n}, {variant:?})",
                self.m, self.n, self.variant
            )));
        }
        Ok(())
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(std::io::BufReader::new(File::open(path)?))?)
}

pub fn save_checkpoint(path: &Path, checkpoint: &Checkpoint) -> Result<()> {
    write_json(path, checkpoint)
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    let c: Checkpoint = read_json(path)?;
    if c.format != FORMAT_VERSION {
        return Err(Error::SpecMismatch(format!("checkpoint format {} is not {FORMAT_VERSION}", c.format)));
    }
    Ok(c)
}

/// Wavefront OBJ of the stereographic image of the mesh.
pub fn write_obj<W: Write>(mut w: W, mesh: &TriMesh) -> Result<()> {
    writeln!(w, "# {} vertices, {} faces; stereographic projection from (0, -1)", mesh.vertices.len(), mesh.faces.len())?;
    for p in &mesh.vertices {
        let [x, y, z] = stereographic(p);
        writeln!(w, "v {x:.17e} {y:.17e} {z:.17e}")?;
    }
    for f in &mesh.faces {
        writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    Ok(())
}

/// Binary little-endian PLY of the stereographic image of the mesh.
pub fn write_ply<W: Write>(mut w: W, mesh: &TriMesh) -> Result<()> {
    write!(
        w,
        "ply\nformat binary_little_endian 1.0\ncomment stereographic projection from (0, -1)\n\
         element vertex {}\nproperty double x\nproperty double y\nproperty double z\n\
         element face {}\nproperty list uchar uint vertex_indices\nend_header\n",
        mesh.vertices.len(),
        mesh.faces.len()
    )?;
    for p in &mesh.vertices {
        for c in stereographic(p) {
            w.write_all(&c.to_le_bytes())?;
        }
    }
    for f in &mesh.faces {
        w.write_all(&[3u8])?;
        for &v in f {
            let v = u32::try_from(v).map_err(|_| Error::Domain(format!("vertex index {v} does not fit in 32 bits")))?;
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Writes OBJ, PLY or JSON according to the file extension.
pub fn export_mesh(path: &Path, mesh: &TriMesh) -> Result<()> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    match ext.as_str() {
        "obj" => write_obj(BufWriter::new(File::create(path)?), mesh),
        "ply" => write_ply(BufWriter::new(File::create(path)?), mesh),
        "json" => write_json(path, mesh),
        _ => Err(Error::Domain(format!("unknown mesh format for {}", path.display()))),
    }
}

/// Samples an `n × n` grid of the parameter rectangle and triangulates it.
pub fn grid_mesh<S: ParamSurface + ?Sized>(surface: &S, n: usize) -> TriMesh {
    let d = surface.domain();
    let n = n.max(1);
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        let s = d.s.0 + (d.s.1 - d.s.0) * i as f64 / n as f64;
        for j in 0..=n {
            let t = d.t.0 + (d.t.1 - d.t.0) * j as f64 / n as f64;
            vertices.push(surface.eval(s, t));
        }
    }
    let id = |i: usize, j: usize| i * (n + 1) + j;
    let mut faces = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            faces.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            faces.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    TriMesh::new(vertices, faces)
}

/// A residual checked against the tolerance it was compared with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub format: u32,
    pub command: String,
    pub config: Value,
    pub values: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub wall_clock_s: f64,
}

impl RunReport {
    pub fn new(command: impl Into<String>, config: Value) -> Self {
        Self { format: FORMAT_VERSION, command: command.into(), config, values: BTreeMap::new(), checks: Vec::new(), wall_clock_s: 0.0 }
    }

    pub fn value(&mut self, key: impl Into<String>, v: impl Serialize) {
        self.values.insert(key.into(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    /// Records `value ≤ tolerance` (NaN fails) and returns the outcome.
    pub fn check(&mut self, name: impl Into<String>, value: f64, tolerance: f64) -> bool {
        let passed = value <= tolerance;
        self.checks.push(Check { name: name.into(), value, tolerance, passed });
        passed
    }

    /// Records a boolean property as a check with zero tolerance.
    pub fn check_flag(&mut self, name: impl Into<String>, ok: bool) -> bool {
        self.check(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec4;
    use crate::plateau::{build_polygon, init_mesh, PolygonSpec};

    #[test]
    fn checkpoint_round_trip_is_lossless() {
        let spec = PolygonSpec::new(2, 1, Variant::Orientable).unwrap();
        let mut mesh = init_mesh(&build_polygon(&spec), 5).unwrap();
        // digits that need all 17 significant places
        mesh.vertices[7] = Vec4::new(0.1 + 0.2, 1.0 / 3.0, -2f64.sqrt() / 7.0, 1e-300);
        let c = Checkpoint::new(4.0, 0.7, 2, 1, Variant::Orientable, mesh, None);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("piece.json");
        save_checkpoint(&path, &c).unwrap();
        let back = load_checkpoint(&path).unwrap();
        assert_eq!(back, c);
        assert!(back.ensure_matches(2, 1, Variant::Orientable).is_ok());
        assert!(matches!(back.ensure_matches(1, 1, Variant::Orientable), Err(Error::SpecMismatch(_))));
    }

    #[test]
    fn stereographic_exports() {
        let mesh = TriMesh::new(
            vec![Vec4::new(1.0, 0.0, 0.0, 0.0), Vec4::new(0.0, 1.0, 0.0, 0.0), Vec4::new(0.0, 0.0, 1.0, 0.0)],
            vec![[0, 1, 2]],
        );
        let mut obj = Vec::new();
        write_obj(&mut obj, &mesh).unwrap();
        let text = String::from_utf8(obj).unwrap();
        assert!(text.contains("\nf 1 2 3\n"));
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 3);
        let mut ply = Vec::new();
        write_ply(&mut ply, &mesh).unwrap();
        let header_end = ply.windows(11).position(|w| w == b"end_header\n").unwrap() + 11;
        assert_eq!(ply.len() - header_end, 3 * 24 + 13);
        // (0, 1) is the antipode of the pole and maps to the origin
        let x = f64::from_le_bytes(ply[header_end + 48..header_end + 56].try_into().unwrap());
        assert_eq!(x, 0.0);
    }

    #[test]
    fn report_pairs_values_with_tolerances() {
        let mut r = RunReport::new("verify", Value::Null);
        assert!(r.check("small", 1e-9, 1e-6));
        assert!(!r.check("nan", f64::NAN, 1.0));
        assert!(!r.passed());
        assert_eq!(r.failures().len(), 1);
    }
}
