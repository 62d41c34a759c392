//! Pointwise sister-surface algebra: target spaces, the sister shape
//! operator, the split of the vertical field, and how the symmetries of an
//! assembled surface transfer.
//!
//! Run with `cargo run --example sister_surfaces`.

use berger::assembler::generate_group;
use berger::families::phi_c;
use berger::plateau::{PolygonSpec, Variant};
use berger::sister::{killing_decompose, sister_params, sister_shape_operator, symmetry_transfer_catalog};
use berger::BergerParams;
use nalgebra::Matrix2;

fn main() -> berger::Result<()> {
    for (kappa, tau) in [(5.0, 1.0), (3.0, 1.0), (1.0, 1.0), (4.0, 0.5)] {
        match sister_params(kappa, tau) {
            Ok(t) => println!("S³_b({kappa}, {tau}) → {} with H = {:.6}", t.space, t.h),
            Err(e) => println!("S³_b({kappa}, {tau}): {e}"),
        }
    }

    let tau = 0.7;
    let s = Matrix2::new(0.4, 0.3, 0.3, -0.4);
    let star = sister_shape_operator(&s, tau)?;
    println!("S = {s}S* = {star}trace S* = {:.3} = 2τ", star.trace());

    let params = BergerParams::new(3.0, 1.0)?;
    for (x, y) in [(0.4, 0.3), (1.2, 2.5)] {
        let k = killing_decompose(&params, &phi_c(0.5), x, y)?;
        let (jt, nu) = k.target_vertical();
        println!("ξ at ({x}, {y}): T = {:?}, ν = {:.5}; sister vertical −JT = {jt:?}, ν = {nu:.5}", k.t, k.nu);
    }

    let spec = PolygonSpec::new(2, 1, Variant::Orientable)?;
    for (k, entry) in symmetry_transfer_catalog(&generate_group(&spec)?)?.iter().enumerate() {
        println!("generator {k}: {:?} → product {:?}, Nil₃ {:?}", entry.kind, entry.product, entry.nil);
    }
    Ok(())
}
