//! The Berger metric, its unit vertical field and the isometries shared by
//! every Berger sphere.
//!
//! Run with `cargo run --example berger_metric`.

use berger::geodesics::{horizontal_reflection, vertical_reflection};
use berger::geometry::{complex_j, hopf_projection, tangent_part};
use berger::{BergerParams, Isometry, SpherePoint, Vec4};

fn main() -> berger::Result<()> {
    let params = BergerParams::new(4.0, 0.7)?;
    println!("S³_b(κ = {}, τ = {}), round: {}", params.kappa(), params.tau(), params.is_round());

    let p = SpherePoint::normalize(Vec4::new(0.3, -0.5, 0.7, 0.4))?;
    let x = p.coords();
    let v = complex_j(x);
    println!("|V|_b = {:.6} (expected 4|τ|/κ = {:.6})", params.norm(x, &v), 4.0 * params.tau().abs() / params.kappa());

    let h = tangent_part(x, &Vec4::new(1.0, 0.0, -1.0, 0.5));
    let horizontal = h - v * (params.inner(x, &h, &v) / params.inner(x, &v, &v));
    println!("horizontal vector: ⟨h, V⟩_b = {:.1e}", params.inner(x, &horizontal, &v));
    println!("Hopf image: {:?}", hopf_projection(&params, &p).as_slice());

    for (name, g) in [
        ("vertical reflection", vertical_reflection()),
        ("horizontal reflection φ = 0.4", horizontal_reflection(0.4)),
        ("rotation (0.3, −1.2)", Isometry::rotation(0.3, -1.2)),
        ("swap", Isometry::swap()),
    ] {
        let gp = g.apply_vec(x);
        let before = params.inner(x, &h, &v);
        let after = params.inner(&gp, &g.apply_vec(&h), &g.apply_vec(&v));
        println!("{name:<32} sign {:+}  pullback defect {:.1e}", g.sign(), (after - before).abs());
    }
    Ok(())
}
