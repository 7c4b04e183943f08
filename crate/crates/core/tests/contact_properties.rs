use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wipeplan::catalog::default_objects;
use wipeplan::contact::{
    label_contact, node_offsets, press, ContactPredictor, PressPredictor, SpongeModel, ToolPose,
};
use wipeplan::geometry::{generate_object, IndexedCloud, ObjectKind, ObjectSpec};
use wipeplan::Vec3;

fn spec(kind: ObjectKind, radius: f64, depth: f64, p: f64, seed: u64) -> ObjectSpec<f64> {
    ObjectSpec {
        kind,
        radius,
        depth,
        rim_curvature: p,
        sample_count: 2000,
        seed,
    }
}

fn scene(s: &ObjectSpec<f64>) -> IndexedCloud<f64> {
    generate_object(s).unwrap().into()
}

/// Height of the profile `z = depth (r/R)^2` above its tangent line at `r0`,
/// measured along the normal, at tangent offset `s` (exact, by bisection).
fn parabola_height(depth: f64, radius: f64, r0: f64, s: f64) -> f64 {
    let a = depth / (radius * radius);
    let f = |r: f64| a * r * r;
    let slope = 2.0 * a * r0;
    let norm = (1.0 + slope * slope).sqrt();
    let (tr, tz) = (1.0 / norm, slope / norm);
    let (nr, nz) = (-slope / norm, 1.0 / norm);
    let gap = |w: f64| {
        let r = r0 + s * tr + w * nr;
        let z = f(r0) + s * tz + w * nz;
        z - f(r)
    };
    let (mut lo, mut hi) = (-0.05, 0.05);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn bowl_wall_loads_the_downhill_side() {
    let (radius, depth) = (0.08, 0.04);
    let bowl = scene(&spec(ObjectKind::Bowl, radius, depth, 2.0, 7));
    // a wall point on the +x meridian, so the tool x axis points uphill
    let target = Vec3::new(0.045, 0.0, depth * (0.045f64 / radius).powi(2));
    let c = bowl.cloud().closest_to(target);
    let p = bowl.cloud().point(c);
    let r0 = p.x.hypot(p.y);
    let sponge = SpongeModel::default();
    let result = press(&sponge, &bowl, &ToolPose::new(c, 0.0)).unwrap();
    assert!(!result.force_unreached);

    let offsets = node_offsets(&sponge);
    let side_force = |downhill: bool| -> f64 {
        offsets
            .iter()
            .zip(&result.node_forces)
            .filter(|((u, _), _)| if downhill { *u < -1e-9 } else { *u > 1e-9 })
            .map(|(_, f)| f)
            .sum()
    };
    let (down, up) = (side_force(true), side_force(false));

    let edge = 0.5 * sponge.width;
    let h_down = parabola_height(depth, radius, r0, -edge);
    let h_up = parabola_height(depth, radius, r0, edge);
    assert!(h_down > h_up, "oracle: downhill {h_down} uphill {h_up}");
    assert!(down > up, "measured: downhill {down} N uphill {up} N");

    // centre-row nodes against the analytic profile, with the solved depth
    let k = sponge.node_stiffness();
    for ((u, v), f) in offsets.iter().zip(&result.node_forces) {
        if v.abs() > 1e-9 {
            continue;
        }
        let expected = k * (parabola_height(depth, radius, r0, *u) + result.press_depth).max(0.0);
        assert!(
            (f - expected).abs() < 0.25 * k * 1e-3 + 0.15 * expected,
            "u={u}: {f} vs {expected}"
        );
    }
}

#[test]
fn rigid_press_on_flat_disc_matches_soft_labels() {
    let disc = scene(&spec(ObjectKind::Plate, 0.1, 0.0, 2.0, 3));
    let soft = SpongeModel::default();
    let rigid = soft.rigid_variant();
    assert_eq!(
        (rigid.width, rigid.length, rigid.height),
        (soft.width, soft.length, soft.height)
    );
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let target = Vec3::new(
            rng.random_range(-0.03..0.03),
            rng.random_range(-0.03..0.03),
            0.0,
        );
        let pose = ToolPose::new(
            disc.cloud().closest_to(target),
            rng.random_range(0.0..std::f64::consts::TAU),
        );
        let a = label_contact(&press(&soft, &disc, &pose).unwrap(), &soft, &disc);
        let b = label_contact(&press(&rigid, &disc, &pose).unwrap(), &rigid, &disc);
        assert_eq!(a, b);
    }
}

/// The soft tool conforms to curved surfaces: away from rims, a press on a
/// curved catalog object labels nearly as much as a press on a flat disc.
#[test]
fn soft_tool_conforms_to_curved_walls() {
    let sponge = SpongeModel::default();
    let flat = scene(&spec(ObjectKind::Plate, 0.2, 0.0, 2.0, 1));
    let centre = flat.cloud().closest_to(Vec3::zero());
    let flat_count = label_contact(
        &press(&sponge, &flat, &ToolPose::new(centre, 0.0)).unwrap(),
        &sponge,
        &flat,
    )
    .count();
    let reach = 0.5 * sponge.width.hypot(sponge.length);

    for object in default_objects::<f64>()
        .iter()
        .filter(|o| o.spec.kind == ObjectKind::Bowl)
    {
        let bowl = scene(&object.spec);
        let density = flat.len() as f64 / (std::f64::consts::PI * 0.2 * 0.2);
        let bowl_area = bowl_area(
            object.spec.radius,
            object.spec.depth,
            object.spec.rim_curvature,
        );
        let scale = bowl.len() as f64 / bowl_area / density;
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut ratios = Vec::new();
        while ratios.len() < 30 {
            let i = rng.random_range(0..bowl.len());
            let p = bowl.cloud().point(i);
            // keep the whole footprint on the object
            if p.x.hypot(p.y) > object.spec.radius - reach {
                continue;
            }
            let pose = ToolPose::new(i, rng.random_range(0.0..std::f64::consts::TAU));
            let n = label_contact(&press(&sponge, &bowl, &pose).unwrap(), &sponge, &bowl).count();
            ratios.push(n as f64 / (flat_count as f64 * scale));
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        assert!(
            mean > 0.8,
            "{}: curved/flat label ratio {mean:.2}",
            object.name
        );
    }
}

fn bowl_area(radius: f64, depth: f64, p: f64) -> f64 {
    let steps = 20_000;
    let dr = radius / steps as f64;
    (0..steps)
        .map(|i| {
            let r = (i as f64 + 0.5) * dr;
            let slope = depth * p * r.powf(p - 1.0) / radius.powf(p);
            2.0 * std::f64::consts::PI * r * (1.0 + slope * slope).sqrt() * dr
        })
        .sum()
}

#[test]
fn yaw_quarter_turns_at_bowl_axis_preserve_labels() {
    let bowl = scene(&spec(ObjectKind::Bowl, 0.08, 0.04, 2.0, 7));
    let sponge = SpongeModel::default();
    let c = bowl.cloud().closest_to(Vec3::zero());
    for base in [0.0, 0.3, 1.1] {
        let reference = label_contact(
            &press(&sponge, &bowl, &ToolPose::new(c, base)).unwrap(),
            &sponge,
            &bowl,
        );
        for quarter in 1..4 {
            let theta = base + quarter as f64 * std::f64::consts::FRAC_PI_2;
            let m = label_contact(
                &press(&sponge, &bowl, &ToolPose::new(c, theta)).unwrap(),
                &sponge,
                &bowl,
            );
            let ratio = reference.symmetric_difference_count(&m) as f64 / reference.count() as f64;
            assert!(
                ratio < 0.1,
                "base {base} + {quarter} quarter turns: {ratio}"
            );
        }
    }
}

#[test]
fn stiffer_tool_presses_shallower() {
    let disc = scene(&spec(ObjectKind::Plate, 0.1, 0.0, 2.0, 3));
    let c = disc.cloud().closest_to(Vec3::zero());
    let soft = SpongeModel::default();
    let stiff = SpongeModel {
        youngs_modulus: 2.0 * soft.youngs_modulus,
        ..soft.clone()
    };
    let a = press(&soft, &disc, &ToolPose::new(c, 0.0)).unwrap();
    let b = press(&stiff, &disc, &ToolPose::new(c, 0.0)).unwrap();
    assert!((b.press_depth / a.press_depth - 0.5).abs() < 1e-3);
}

fn catalog_scenes() -> &'static Vec<IndexedCloud<f64>> {
    static SCENES: std::sync::OnceLock<Vec<IndexedCloud<f64>>> = std::sync::OnceLock::new();
    SCENES.get_or_init(|| {
        default_objects::<f64>()
            .iter()
            .map(|o| scene(&o.spec))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn labels_stay_local(object in 0usize..10, pick in 0usize..2000, theta in 0.0f64..std::f64::consts::TAU, force in 1.0f64..10.0) {
        let scene = &catalog_scenes()[object];
        let sponge = SpongeModel { target_force: force, ..SpongeModel::default() };
        let pose = ToolPose::new(pick % scene.len(), theta);
        let result = press(&sponge, scene, &pose).unwrap();
        let map = label_contact(&result, &sponge, scene);
        let reach = 0.5 * sponge.width.hypot(sponge.length) + sponge.label_radius + sponge.height;
        let pc = scene.cloud().point(pose.contact_index);
        for i in map.indices() {
            prop_assert!(scene.cloud().point(i).distance(pc) <= reach + 1e-12);
        }
        prop_assert!(map.contains(pose.contact_index));
        if !result.force_unreached {
            prop_assert!((result.net_force - force).abs() <= 1e-3);
        }
        for (f, s) in result.node_forces.iter().zip(&result.node_support) {
            prop_assert!(*f >= 0.0);
            if !matches!(s, wipeplan::contact::NodeSupport::Supported(_)) {
                prop_assert_eq!(*f, 0.0);
            }
        }
    }

    #[test]
    fn prediction_is_deterministic(object in 0usize..10, pick in 0usize..2000, theta in 0.0f64..std::f64::consts::TAU) {
        let scene = &catalog_scenes()[object];
        let predictor = PressPredictor::new(SpongeModel::default());
        let pose = ToolPose::new(pick % scene.len(), theta);
        prop_assert_eq!(predictor.predict(scene, &pose).unwrap(), predictor.predict(scene, &pose).unwrap());
    }
}
