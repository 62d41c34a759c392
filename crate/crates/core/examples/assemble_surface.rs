//! From polygon to closed surface: solve the fundamental piece, generate the
//! reflection group, weld the orbit and read off the topology.
//!
//! Run with `cargo run --release --example assemble_surface -- 2 1 orientable`.

use std::f64::consts::PI;

use berger::assembler::{assemble, gauss_bonnet_closed, generate_group};
use berger::plateau::{build_polygon, init_mesh, minimize_area, PolygonSpec, SolveOptions, Variant};
use berger::BergerParams;

fn main() -> berger::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let m = args.first().and_then(|a| a.parse().ok()).unwrap_or(2);
    let n = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(1);
    let variant: Variant = args.get(2).map(|v| v.parse()).transpose()?.unwrap_or(Variant::Orientable);

    let params = BergerParams::new(4.0, 0.7)?;
    let spec = PolygonSpec::new(m, n, variant)?;
    let (piece, report) = minimize_area(&params, &init_mesh(&build_polygon(&spec), 16)?, &SolveOptions::default())?;
    println!("fundamental piece: {} faces, converged {}", piece.faces.len(), report.converged);

    let group = generate_group(&spec)?;
    println!(
        "reflection group: order {}, stabilizer {}, orbit ratio {} (2(m+1)(n+1) = {})",
        group.order(),
        group.stabilizer_order,
        group.orbit_ratio,
        2 * (m + 1) * (n + 1)
    );
    let surface = assemble(&piece, &group)?;
    println!(
        "closed {}, χ = {}, orientable {}, genus {:?}, cross-caps {:?}, {} copies",
        surface.mesh.is_closed(),
        surface.chi,
        surface.orientable,
        surface.genus,
        surface.crosscaps,
        surface.copies
    );
    let gb = gauss_bonnet_closed(&params, &surface.mesh);
    println!("Σ angle defects = {gb:.10}, 2πχ = {:.10}", 2.0 * PI * surface.chi as f64);
    for probe in &surface.singular_vertex_report {
        if !probe.is_embedded() {
            println!("  vertex {}: disk link {}, {} crossing face pairs", probe.vertex, probe.link_is_disk, probe.intersecting_pairs);
        }
    }
    Ok(())
}
