use rand::Rng;
use rayon::prelude::*;

use crate::contact::{predict_contact, ContactPredictor, ToolPose};
use crate::error::{Error, Result};
use crate::geometry::{IndexedCloud, PointCloud};
use crate::{rng, Real, Vec3};

/// An unordered set of presses whose predicted contact maps cover the cloud.
#[derive(Clone, Debug, PartialEq)]
pub struct WaypointSet<T> {
    pub poses: Vec<ToolPose<T>>,
    /// Union of the predicted maps of `poses`.
    pub covered: Vec<bool>,
}

impl<T: Real> WaypointSet<T> {
    pub fn len(&self) -> usize {
        self.poses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poses.is_empty()
    }

    pub fn is_full_cover(&self) -> bool {
        self.covered.iter().all(|&c| c)
    }
}

/// Bottom-up random cover: repeatedly press at a uniformly chosen uncovered
/// point with a uniform yaw, predict the contact map on the full cloud and
/// drop every covered point, until nothing remains.
pub fn sample_cover_set<T, P, R>(
    scene: &IndexedCloud<T>,
    predictor: &P,
    rng: &mut R,
) -> Result<WaypointSet<T>>
where
    T: Real,
    P: ContactPredictor<T> + ?Sized,
    R: Rng + ?Sized,
{
    let n = scene.len();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut covered = vec![false; n];
    let mut poses = Vec::new();
    while !remaining.is_empty() {
        let pick = rng.random_range(0..remaining.len());
        let yaw: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        let pose = ToolPose::new(remaining[pick], T::lit(yaw));
        let map = predict_contact(predictor, scene, &pose)?;
        let before = remaining.len();
        remaining.retain(|&i| !map.mask[i]);
        if remaining.len() == before {
            return Err(Error::Invariant(format!(
                "predictor {} covered no uncovered point at index {}",
                predictor.id(),
                pose.contact_index
            )));
        }
        for (c, &m) in covered.iter_mut().zip(&map.mask) {
            *c |= m;
        }
        poses.push(pose);
    }
    Ok(WaypointSet { poses, covered })
}

/// `n_sets` independent covers; set `j` uses its own stream derived from `seed`.
/// Sets are sampled in parallel and returned in index order.
pub fn sample_cover_sets<T, P>(
    scene: &IndexedCloud<T>,
    predictor: &P,
    n_sets: usize,
    seed: u64,
) -> Result<Vec<WaypointSet<T>>>
where
    T: Real,
    P: ContactPredictor<T> + ?Sized,
{
    if n_sets == 0 {
        return Err(Error::Parameter("n_sets must be >= 1".into()));
    }
    (0..n_sets)
        .into_par_iter()
        .map(|j| {
            let mut rng = rng::stream(seed, "cover-set", j as u64);
            sample_cover_set(scene, predictor, &mut rng)
        })
        .collect()
}

/// Re-predicts every pose and checks that the union covers all points.
pub fn covers_all<T, P>(
    scene: &IndexedCloud<T>,
    predictor: &P,
    poses: &[ToolPose<T>],
) -> Result<bool>
where
    T: Real,
    P: ContactPredictor<T> + ?Sized,
{
    let mut covered = vec![false; scene.len()];
    for pose in poses {
        let map = predict_contact(predictor, scene, pose)?;
        for (c, &m) in covered.iter_mut().zip(&map.mask) {
            *c |= m;
        }
    }
    Ok(covered.into_iter().all(|c| c))
}

/// Weight of the Euclidean minimum spanning tree over `points`; a lower
/// bound on the shortest open path through them.
pub fn spanning_tree_length<T: Real>(points: &[Vec3<T>]) -> T {
    let n = points.len();
    if n < 2 {
        return T::zero();
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![T::infinity(); n];
    best[0] = T::zero();
    let mut total = T::zero();
    for _ in 0..n {
        let mut u = usize::MAX;
        for i in 0..n {
            if !in_tree[i] && (u == usize::MAX || best[i] < best[u]) {
                u = i;
            }
        }
        in_tree[u] = true;
        total += best[u];
        for v in 0..n {
            if !in_tree[v] {
                let d = points[u].distance(points[v]);
                if d < best[v] {
                    best[v] = d;
                }
            }
        }
    }
    total
}

/// Index of the best set: fewest poses, then the smaller spanning-tree
/// bound on travel, then the lower index.
pub fn select_best_set<T: Real>(cloud: &PointCloud<T>, sets: &[WaypointSet<T>]) -> Result<usize> {
    if sets.is_empty() {
        return Err(Error::Parameter(
            "cannot select from zero waypoint sets".into(),
        ));
    }
    let bound = |s: &WaypointSet<T>| {
        let pts: Vec<Vec3<T>> = s.poses.iter().map(|p| p.contact_point(cloud)).collect();
        spanning_tree_length(&pts)
    };
    let min_len = sets.iter().map(WaypointSet::len).min().unwrap_or(0);
    let mut best: Option<(usize, T)> = None;
    for (j, s) in sets.iter().enumerate().filter(|(_, s)| s.len() == min_len) {
        let b = bound(s);
        if best.is_none_or(|(_, bb)| b < bb) {
            best = Some((j, b));
        }
    }
    Ok(best.map(|(j, _)| j).unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::{ContactMap, MapSource, PressPredictor, SpongeModel};
    use crate::geometry::{generate_object, ObjectKind, ObjectSpec};

    struct OnlyContactPoint;

    impl ContactPredictor<f64> for OnlyContactPoint {
        fn id(&self) -> String {
            "only-contact-point".into()
        }

        fn predict(&self, scene: &IndexedCloud<f64>, pose: &ToolPose<f64>) -> Result<ContactMap> {
            let mut m = ContactMap::empty(scene.len(), MapSource::Predicted);
            m.mask[pose.contact_index] = true;
            Ok(m)
        }
    }

    struct Nothing;

    impl ContactPredictor<f64> for Nothing {
        fn id(&self) -> String {
            "nothing".into()
        }

        fn predict(&self, scene: &IndexedCloud<f64>, _: &ToolPose<f64>) -> Result<ContactMap> {
            Ok(ContactMap::empty(scene.len(), MapSource::Predicted))
        }
    }

    fn small_disc() -> IndexedCloud<f64> {
        generate_object(&ObjectSpec {
            kind: ObjectKind::Plate,
            radius: 0.05,
            depth: 0.0,
            rim_curvature: 2.0,
            sample_count: 150,
            seed: 1,
        })
        .unwrap()
        .into()
    }

    #[test]
    fn single_point_cloud_needs_one_press() {
        let cloud = PointCloud::new(vec![Vec3::<f64>::zero()], vec![Vec3::unit_z()]).unwrap();
        let scene = IndexedCloud::new(cloud);
        let p = PressPredictor::new(SpongeModel::default());
        let set = sample_cover_set(&scene, &p, &mut rng::stream(1, "t", 0)).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.is_full_cover());
    }

    #[test]
    fn degenerate_predictor_needs_one_press_per_point() {
        let scene = small_disc();
        let set = sample_cover_set(&scene, &OnlyContactPoint, &mut rng::stream(3, "t", 0)).unwrap();
        assert_eq!(set.len(), scene.len());
        let mut idx: Vec<usize> = set.poses.iter().map(|p| p.contact_index).collect();
        idx.sort_unstable();
        assert_eq!(idx, (0..scene.len()).collect::<Vec<_>>());
    }

    #[test]
    fn stalled_predictor_is_reported() {
        let scene = small_disc();
        let err = sample_cover_set(&scene, &Nothing, &mut rng::stream(3, "t", 0)).unwrap_err();
        assert!(matches!(err, Error::Invariant(_)));
    }

    #[test]
    fn sets_are_deterministic_and_complete() {
        let scene = small_disc();
        let p = PressPredictor::new(SpongeModel::default());
        let a = sample_cover_sets(&scene, &p, 4, 11).unwrap();
        let b = sample_cover_sets(&scene, &p, 4, 11).unwrap();
        assert_eq!(a, b);
        for s in &a {
            assert!(s.is_full_cover());
            assert!(covers_all(&scene, &p, &s.poses).unwrap());
        }
        assert!(sample_cover_sets(&scene, &p, 0, 11).is_err());
    }

    fn set_at(points: &[usize]) -> WaypointSet<f64> {
        WaypointSet {
            poses: points.iter().map(|&i| ToolPose::new(i, 0.0)).collect(),
            covered: vec![],
        }
    }

    #[test]
    fn best_set_prefers_fewest_poses_then_shorter_bound() {
        let pts = (0..10).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect();
        let cloud = PointCloud::new(pts, vec![Vec3::unit_z(); 10]).unwrap();
        let sets = vec![
            set_at(&[0, 1, 2, 3, 4]),
            set_at(&[0, 5, 9]),
            set_at(&[0, 1, 2, 3, 4, 5, 6]),
        ];
        assert_eq!(select_best_set(&cloud, &sets).unwrap(), 1);

        let tied = vec![set_at(&[0, 5, 9]), set_at(&[0, 1, 2]), set_at(&[3, 4, 5])];
        // spanning bounds 9, 2, 2: the lower index wins the remaining tie
        assert_eq!(select_best_set(&cloud, &tied).unwrap(), 1);
        assert!(select_best_set::<f64>(&cloud, &[]).is_err());
    }

    #[test]
    fn spanning_tree_of_a_square() {
        let pts = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ];
        assert!((spanning_tree_length(&pts) - 3.0f64).abs() < 1e-12);
    }
}
