//! Discrete Plateau problem: minimize Berger area over the geodesic polygon
//! of a fundamental piece and compare total curvature with Gauss–Bonnet.
//! Pass `m n variant resolution` to change the problem.
//!
//! Run with `cargo run --release --example plateau_piece -- 2 1 orientable 30`.

use berger::assembler::gauss_bonnet_terms;
use berger::plateau::{build_polygon, closure_gap, init_mesh, minimize_area, region_violation, PolygonSpec, SolveOptions, Variant};
use berger::BergerParams;

fn main() -> berger::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let m = args.first().and_then(|a| a.parse().ok()).unwrap_or(2);
    let n = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(1);
    let variant: Variant = args.get(2).map(|v| v.parse()).transpose()?.unwrap_or(Variant::Orientable);
    let res = args.get(3).and_then(|a| a.parse().ok()).unwrap_or(30);

    let params = BergerParams::new(4.0, 0.7)?;
    let spec = PolygonSpec::new(m, n, variant)?;
    let edges = build_polygon(&spec);
    println!("polygon {variant:?} ({m}, {n}): θ = {:.4}, φ = {:.4}, closure gap {:.1e}", spec.theta(), spec.phi(), closure_gap(&edges));
    for e in &edges {
        println!("  edge {:<4} {:?}, length {:.5}", e.label, e.kind()?, e.length(&params));
    }

    let mesh = init_mesh(&edges, res)?;
    let (piece, report) = minimize_area(&params, &mesh, &SolveOptions::default())?;
    println!(
        "area {:.8} → {:.8} in {} iterations; |∇A| = {:.2e} (tol {:.2e}), converged {}",
        report.initial_area, report.area, report.iterations, report.grad_norm, report.grad_tol, report.converged
    );
    println!("smallest angle {:.2}°, region violation {:.1e}", report.min_angle_deg, region_violation(&spec, &piece));

    let terms = gauss_bonnet_terms(&params, &piece)?;
    println!(
        "∫K ≈ {:.6} (interior {:.6}, boundary {:.6}); target {:.6}",
        terms.integral(),
        terms.interior,
        terms.boundary,
        spec.gauss_bonnet_target()
    );
    Ok(())
}
