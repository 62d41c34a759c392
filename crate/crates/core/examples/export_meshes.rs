//! Checkpoints and exports: save a piece as JSON, load it back bit-for-bit,
//! and write OBJ/PLY files of the stereographic image of a family.
//!
//! Run with `cargo run --example export_meshes -- /tmp/berger-out`.

use std::path::PathBuf;

use berger::families::tau_mn;
use berger::io::{export_mesh, grid_mesh, load_checkpoint, save_checkpoint, Checkpoint};
use berger::plateau::{build_polygon, init_mesh, PolygonSpec, Variant};

fn main() -> berger::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir)?;

    let spec = PolygonSpec::new(1, 1, Variant::Orientable)?;
    let mesh = init_mesh(&build_polygon(&spec), 12)?;
    let checkpoint = Checkpoint::new(4.0, 0.7, 1, 1, Variant::Orientable, mesh, None);
    let path = dir.join("initial_piece.json");
    save_checkpoint(&path, &checkpoint)?;
    let back = load_checkpoint(&path)?;
    println!("{}: {} vertices, lossless round trip: {}", path.display(), back.mesh.vertices.len(), back == checkpoint);

    let torus = grid_mesh(&tau_mn(1, 2)?, 80);
    for name in ["klein_bottle.obj", "klein_bottle.ply"] {
        export_mesh(&dir.join(name), &torus)?;
        println!("wrote {}", dir.join(name).display());
    }
    Ok(())
}
