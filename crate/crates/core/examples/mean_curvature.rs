//! Berger mean curvature two ways: directly from the Berger second
//! fundamental form, and from round-metric data through the closed-form
//! relation. Shown on a geodesic sphere, which is not minimal.
//!
//! Run with `cargo run --example mean_curvature`.

use berger::curvature::{curvature_sample, mean_curvature_berger_lemma};
use berger::surface::ParamSurface;
use berger::verify::geodesic_sphere;
use berger::BergerParams;

fn main() -> berger::Result<()> {
    let params = BergerParams::new(2.0, 0.8)?;
    let sphere = geodesic_sphere(0.8);
    println!("{:>6} {:>6} {:>10} {:>10} {:>12} {:>12} {:>9}", "s", "t", "H_round", "ν", "H^b direct", "H^b lemma", "gap");
    for (s, t) in sphere.domain().interior_grid(4) {
        let c = curvature_sample(&params, &sphere, s, t)?;
        let lemma = mean_curvature_berger_lemma(&params, c.mean_round, c.nu, c.grad_nu_dot_v);
        println!(
            "{s:>6.3} {t:>6.3} {:>10.6} {:>10.6} {:>12.8} {:>12.8} {:>9.1e}",
            c.mean_round, c.nu, c.mean_berger, lemma, (lemma - c.mean_berger).abs()
        );
    }
    Ok(())
}
