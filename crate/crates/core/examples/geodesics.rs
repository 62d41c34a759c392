//! Closed-form geodesics: lengths of vertical and horizontal geodesics,
//! a generic geodesic through an arbitrary point, and classification.
//!
//! Run with `cargo run --example geodesics`.

use std::f64::consts::PI;

use berger::geodesics::{classify, covariant_acceleration, geodesic_lengths, Geodesic, GeodesicSpec};
use berger::{BergerParams, SpherePoint, TangentVector, Vec4};

fn main() -> berger::Result<()> {
    for (kappa, tau) in [(4.0, 1.0), (4.0, 0.5), (1.0, 1.5)] {
        let params = BergerParams::new(kappa, tau)?;
        let (lv, lh) = geodesic_lengths(&params);
        println!("κ = {kappa}, τ = {tau}: vertical {lv:.6} (8|τ|π/κ = {:.6}), horizontal {lh:.6} (4π/√κ = {:.6})",
            8.0 * tau.abs() * PI / kappa, 4.0 * PI / kappa.sqrt());
        for (name, spec, period) in [("vertical", GeodesicSpec::vertical(), lv), ("horizontal", GeodesicSpec::horizontal(0.7), lh)] {
            let gap = (spec.jet(&params, period)[0] - spec.jet(&params, 0.0)[0]).norm();
            println!("  {name:<10} closes after one period to {gap:.1e}");
        }
    }

    let params = BergerParams::new(2.0, 0.8)?;
    let p = SpherePoint::normalize(Vec4::new(0.5, 0.5, -0.5, 0.5))?;
    let v0 = TangentVector::projected(p, Vec4::new(0.2, -1.0, 0.4, 0.3));
    let geo = Geodesic::from_initial(&params, &v0)?;
    println!("generic geodesic: θ = {:.4}, kind {:?}", geo.spec().theta, classify(&v0)?);
    for s in [0.0, 0.5, 1.0, 2.0] {
        let spec = geo.spec();
        let [x, v, a] = spec.jet(&params, s);
        let acc = covariant_acceleration(&params, &x, &v, &a);
        println!("  s = {s:.1}: |γ|−1 = {:.1e}, covariant acceleration {:.1e}", geo.point(s).coords().norm() - 1.0, params.norm(&x, &acc));
    }
    Ok(())
}
