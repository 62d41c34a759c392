//! The family `Φ_c`, minimal in every Berger sphere, the Clifford torus and
//! Lawson's `τ_{m,n}` with their topology.
//!
//! Run with `cargo run --example minimal_families`.

use berger::families::{clifford, is_clifford_congruent, lawson_topology, phi_c, tau_mn};
use berger::verify::max_mean_curvature;
use berger::BergerParams;

fn main() -> berger::Result<()> {
    for (kappa, tau) in [(4.0, 1.0), (2.0, 0.8), (1.0, 1.5)] {
        let params = BergerParams::new(kappa, tau)?;
        for c in [0.0, 0.5, 1.0, 2.0] {
            println!("κ = {kappa}, τ = {tau}, c = {c}: max|H^b| = {:.1e}", max_mean_curvature(&params, &phi_c(c), 40)?);
        }
        println!("κ = {kappa}, τ = {tau}, Clifford torus: max|H^b| = {:.1e}", max_mean_curvature(&params, &clifford(), 40)?);
    }
    println!("τ_(1,1) congruent to the Clifford torus: {}", is_clifford_congruent(&tau_mn(1, 1)?, 20, 1e-12));
    for (m, n) in [(1, 1), (1, 2), (2, 3), (3, 1)] {
        let t = lawson_topology(m, n, 2)?;
        let kind = if t.orientable { "torus" } else { "Klein bottle" };
        println!("τ_({m},{n}): χ = {}, {kind}, parity rule holds: {}", t.euler_characteristic, t.matches_parity_rule);
    }
    Ok(())
}
