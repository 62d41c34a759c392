//! The sinh-Gordon reduction behind the minimal tori `Ψ_{a,b}`: orbit,
//! period, energy conservation, and the immersion itself.
//!
//! Run with `cargo run --example sinh_gordon`.

use berger::curvature::mean_curvature_round;
use berger::families::compatibility_residuals;
use berger::sinh_gordon::{psi_ab, solve_sinh_gordon};
use berger::surface::ParamSurface;

fn main() -> berger::Result<()> {
    let (a, b) = (1.3, 0.6);
    let (lambda, energy) = (a * b / 2.0, a * a + b * b);
    let orbit = solve_sinh_gordon(lambda, energy, (0.0, 30.0), 0.01)?;
    let period = orbit.period().expect("the orbit is periodic");
    println!("a = {a}, b = {b}: λ = {lambda}, E = {energy}, period {period:.6}");
    println!("energy drift over {:.1} periods: {:.1e}", 30.0 / period, orbit.max_energy_drift());
    let (lo, hi) = orbit.u.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &u| (lo.min(u), hi.max(u)));
    println!("e^(2u) ranges over [{:.6}, {:.6}] (b² = {:.2}, a² = {:.2})", (2.0 * lo).exp(), (2.0 * hi).exp(), b * b, a * a);

    let psi = psi_ab(a, b, solve_sinh_gordon(lambda, energy, (0.0, period), 0.005)?)?;
    let points = psi.domain().interior_grid(8);
    let mut h = 0.0f64;
    let mut sphere = 0.0f64;
    for &(x, y) in &points {
        h = h.max(mean_curvature_round(&psi, x, y)?.abs());
        sphere = sphere.max((psi.eval(x, y).norm() - 1.0).abs());
    }
    println!("Ψ: max|H_round| = {h:.1e}, max||Ψ|−1| = {sphere:.1e}");
    println!("compatibility residuals: {:?}", compatibility_residuals(&psi, &points)?);
    Ok(())
}
