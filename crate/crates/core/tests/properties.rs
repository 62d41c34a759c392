//! Randomized properties of the geometric primitives.

use berger::geodesics::{horizontal_reflection, vertical_reflection, Geodesic};
use berger::io::{load_checkpoint, save_checkpoint, Checkpoint};
use berger::mesh::TriMesh;
use berger::plateau::Variant;
use berger::sister::sister_shape_operator;
use berger::{BergerParams, SpherePoint, TangentVector, Vec4};
use nalgebra::Matrix2;
use proptest::prelude::*;

fn unit() -> impl Strategy<Value = Vec4> {
    prop::array::uniform4(-1.0f64..1.0).prop_filter_map("away from the origin", |a| {
        let v = Vec4::from(a);
        (v.norm() > 0.1).then(|| v / v.norm())
    })
}

fn metric() -> impl Strategy<Value = BergerParams> {
    (0.5f64..4.0, 0.25f64..2.0, any::<bool>()).prop_map(|(k, t, neg)| BergerParams::new(k, if neg { -t } else { t }).unwrap())
}

proptest! {
    #[test]
    fn reflections_preserve_the_metric(params in metric(), p in unit(), a in unit(), b in unit(), phi in -3.2f64..3.2) {
        let x = berger::geometry::tangent_part(&p, &a);
        let y = berger::geometry::tangent_part(&p, &b);
        for g in [vertical_reflection(), horizontal_reflection(phi)] {
            let before = params.inner(&p, &x, &y);
            let after = params.inner(&g.apply_vec(&p), &g.apply_vec(&x), &g.apply_vec(&y));
            prop_assert!((after - before).abs() < 1e-12);
        }
    }

    #[test]
    fn geodesics_from_any_point_have_constant_speed(params in metric(), p in unit(), v in unit(), s in 0.0f64..10.0) {
        let v0 = TangentVector::projected(SpherePoint::new(p).unwrap(), v);
        prop_assume!(v0.vec().norm() > 1e-3);
        let geo = Geodesic::from_initial(&params, &v0).unwrap();
        let q = geo.point(s);
        let speed = params.norm(q.coords(), &geo.velocity(s));
        prop_assert!((speed - geo.speed()).abs() < 1e-9 * geo.speed().max(1.0));
        prop_assert!((q.coords().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sister_operator_trace(a in -5.0f64..5.0, b in -5.0f64..5.0, d in -5.0f64..5.0, tau in -3.0f64..3.0) {
        let s = sister_shape_operator(&Matrix2::new(a, b, b, d), tau).unwrap();
        prop_assert!((s.trace() - 2.0 * tau).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn checkpoints_round_trip_exactly(coords in prop::collection::vec(prop::array::uniform4(any::<f64>().prop_filter("finite", |x| x.is_finite())), 3..20)) {
        let n = coords.len();
        let mesh = TriMesh::new(coords.into_iter().map(Vec4::from).collect(), (0..n - 2).map(|i| [i, i + 1, i + 2]).collect());
        let c = Checkpoint::new(4.0, 0.7, 1, 1, Variant::Lawson, mesh, None);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        save_checkpoint(&path, &c).unwrap();
        prop_assert_eq!(load_checkpoint(&path).unwrap(), c);
    }
}
