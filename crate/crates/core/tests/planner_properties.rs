use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wipeplan::catalog::default_objects;
use wipeplan::contact::{
    ContactMap, ContactPredictor, MapSource, PressPredictor, SpongeModel, ToolPose,
};
use wipeplan::geometry::{generate_object, IndexedCloud, ObjectKind, ObjectSpec, PointCloud};
use wipeplan::planner::{
    covers_all, plan, sample_cover_set, sample_cover_sets, select_best_set, solve_tsp_2opt,
    tour_length, PlanConfig, Trajectory,
};
use wipeplan::{Error, Vec3};

fn disc() -> IndexedCloud<f64> {
    generate_object(&ObjectSpec {
        kind: ObjectKind::Plate,
        radius: 0.1,
        depth: 0.0,
        rim_curvature: 2.0,
        sample_count: 2000,
        seed: 9,
    })
    .unwrap()
    .into()
}

#[test]
fn flat_disc_cover_sizes_sit_between_area_bound_and_four_times_it() {
    let scene = disc();
    let predictor = PressPredictor::new(SpongeModel::default());
    let lower = (std::f64::consts::PI * 0.1 * 0.1 / (0.05 * 0.05)).ceil() as usize;
    assert_eq!(lower, 13);
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = sample_cover_set(&scene, &predictor, &mut rng).unwrap();
        assert!(set.is_full_cover());
        assert!(
            (lower..=4 * lower).contains(&set.len()),
            "seed {seed}: {} poses",
            set.len()
        );
    }
}

#[test]
fn best_set_is_no_larger_than_the_median() {
    let scene = disc();
    let predictor = PressPredictor::new(SpongeModel::default());
    let sets = sample_cover_sets(&scene, &predictor, 50, 17).unwrap();
    let mut sizes: Vec<usize> = sets.iter().map(|s| s.len()).collect();
    let best = select_best_set(scene.cloud(), &sets).unwrap();
    sizes.sort_unstable();
    assert!(sets[best].len() <= sizes[25]);
    assert_eq!(sets[best].len(), sizes[0]);
}

struct OnlyContactPoint;

impl ContactPredictor<f64> for OnlyContactPoint {
    fn id(&self) -> String {
        "only-contact-point".into()
    }

    fn predict(
        &self,
        scene: &IndexedCloud<f64>,
        pose: &ToolPose<f64>,
    ) -> wipeplan::Result<ContactMap> {
        let mut mask = vec![false; scene.len()];
        mask[pose.contact_index] = true;
        Ok(ContactMap::new(mask, MapSource::Predicted))
    }
}

struct CoversNothing;

impl ContactPredictor<f64> for CoversNothing {
    fn id(&self) -> String {
        "covers-nothing".into()
    }

    fn predict(
        &self,
        scene: &IndexedCloud<f64>,
        _: &ToolPose<f64>,
    ) -> wipeplan::Result<ContactMap> {
        Ok(ContactMap::empty(scene.len(), MapSource::Predicted))
    }
}

#[test]
fn degenerate_predictor_needs_one_pose_per_point() {
    let cloud = generate_object(&default_objects::<f64>()[4].spec).unwrap();
    let small = PointCloud::new(
        cloud.points()[..150].to_vec(),
        cloud.normals()[..150].to_vec(),
    )
    .unwrap();
    let scene = IndexedCloud::new(small);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let set = sample_cover_set(&scene, &OnlyContactPoint, &mut rng).unwrap();
    assert_eq!(set.len(), 150);
    let mut idx: Vec<usize> = set.poses.iter().map(|p| p.contact_index).collect();
    idx.sort_unstable();
    assert_eq!(idx, (0..150).collect::<Vec<_>>());
}

#[test]
fn predictor_without_progress_is_an_invariant_error() {
    let scene = disc();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    assert!(matches!(
        sample_cover_set(&scene, &CoversNothing, &mut rng),
        Err(Error::Invariant(_))
    ));
}

#[test]
fn single_point_cloud_needs_one_press() {
    let cloud = PointCloud::<f64>::new(vec![Vec3::zero()], vec![Vec3::unit_z()]).unwrap();
    let scene = IndexedCloud::new(cloud);
    let t = plan(&scene, &PlanConfig::default()).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t.path_length, 0.0);
}

#[test]
fn collinear_points_are_swept_in_order() {
    let xs = [0.3, -0.1, 0.5, 0.0, 0.2];
    let pts: Vec<Vec3<f64>> = xs.iter().map(|&x| Vec3::new(x, 0.0, 0.0)).collect();
    let cloud = PointCloud::new(pts, vec![Vec3::unit_z(); 5]).unwrap();
    let poses: Vec<ToolPose<f64>> = (0..5).map(|i| ToolPose::new(i, 0.0)).collect();
    let t = solve_tsp_2opt(&cloud, &poses, false);
    let visited: Vec<f64> = t.poses.iter().map(|p| xs[p.contact_index]).collect();
    let mut sorted = visited.clone();
    sorted.sort_by(f64::total_cmp);
    let reversed: Vec<f64> = sorted.iter().rev().copied().collect();
    assert!(visited == sorted || visited == reversed, "{visited:?}");
    assert!((t.path_length - 0.6).abs() < 1e-12);
}

fn assert_plan_invariants(
    scene: &IndexedCloud<f64>,
    config: &PlanConfig<f64>,
    t: &Trajectory<f64>,
) {
    let predictor = PressPredictor::new(config.sponge.clone());
    assert!(covers_all(scene, &predictor, &t.poses).unwrap());
    let recomputed = t.recompute_length(scene.cloud());
    assert!((t.path_length - recomputed).abs() <= 1e-9 * recomputed.max(1e-12));
    assert!(t.path_length <= t.initial_length + 1e-12);

    let provenance = t.provenance.as_ref().unwrap();
    assert_eq!(t.len(), provenance.set_sizes[provenance.selected_set]);
    assert_eq!(t.len(), *provenance.set_sizes.iter().min().unwrap());

    let pts = t.contact_points(scene.cloud());
    let order: Vec<usize> = (0..pts.len()).collect();
    let current = tour_length(&pts, &order, t.closed);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let mut candidate = order.clone();
            candidate[i..=j].reverse();
            assert!(
                tour_length(&pts, &candidate, t.closed) >= current - 1e-12,
                "exchange {i}..{j} improves"
            );
        }
    }
}

#[test]
fn plans_on_catalog_objects_satisfy_invariants() {
    for (k, object) in default_objects::<f64>().iter().enumerate() {
        let scene = IndexedCloud::new(generate_object(&object.spec).unwrap());
        let config = PlanConfig {
            n_sets: 8,
            seed: 100 + k as u64,
            closed_tour: k % 2 == 1,
            ..PlanConfig::default()
        };
        let t = plan(&scene, &config).unwrap();
        assert_plan_invariants(&scene, &config, &t);
        assert_eq!(
            plan(&scene, &config).unwrap(),
            t,
            "{} not deterministic",
            object.name
        );
    }
}

#[test]
fn set_sampling_is_reproducible() {
    let scene = disc();
    let predictor = PressPredictor::new(SpongeModel::default());
    let a = sample_cover_sets(&scene, &predictor, 1, 5).unwrap();
    let b = sample_cover_sets(&scene, &predictor, 1, 5).unwrap();
    assert_eq!(a, b);
}

fn brute_force(points: &[Vec3<f64>], closed: bool) -> f64 {
    fn go(k: usize, order: &mut [usize], points: &[Vec3<f64>], closed: bool, best: &mut f64) {
        if k == order.len() {
            *best = best.min(tour_length(points, order, closed));
            return;
        }
        for i in k..order.len() {
            order.swap(k, i);
            go(k + 1, order, points, closed, best);
            order.swap(k, i);
        }
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    let mut best = f64::INFINITY;
    go(0, &mut order, points, closed, &mut best);
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn two_opt_is_bounded_by_optimum_and_initial_tour(
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0.0f64..0.5), 1..=7),
        closed in any::<bool>(),
    ) {
        let mut pts: Vec<Vec3<f64>> = Vec::new();
        for (x, y, z) in raw {
            let p = Vec3::new(x, y, z);
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let n = pts.len();
        let cloud = PointCloud::new(pts.clone(), vec![Vec3::unit_z(); n]).unwrap();
        let poses: Vec<ToolPose<f64>> = (0..n).map(|i| ToolPose::new(i, 0.0)).collect();
        let t = solve_tsp_2opt(&cloud, &poses, closed);
        let optimum = brute_force(&pts, closed);
        prop_assert!(t.path_length >= optimum - 1e-12);
        prop_assert!(t.path_length <= t.initial_length + 1e-12);
        let mut seen: Vec<usize> = t.poses.iter().map(|p| p.contact_index).collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..n).collect::<Vec<_>>());
    }
}

#[test]
fn single_precision_pipeline_plans_a_full_cover() {
    let spec = ObjectSpec::<f32> {
        kind: ObjectKind::Bowl,
        radius: 0.06,
        depth: 0.03,
        rim_curvature: 2.0,
        sample_count: 800,
        seed: 2,
    };
    let scene: IndexedCloud<f32> = generate_object(&spec).unwrap().into();
    let config = PlanConfig::<f32> {
        n_sets: 4,
        seed: 1,
        ..PlanConfig::default()
    };
    let t = plan(&scene, &config).unwrap();
    let predictor = PressPredictor::new(config.sponge.clone());
    assert!(covers_all(&scene, &predictor, &t.poses).unwrap());
    assert!(t.path_length.is_finite() && t.path_length > 0.0);
}
