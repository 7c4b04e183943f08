//! Coverage planning: random set-cover waypoint sampling, best-set
//! selection and 2-opt sequencing.

mod cover;
mod tsp;

use serde::{Deserialize, Serialize};

use crate::contact::{ContactPredictor, PressPredictor, SpongeModel, ToolPose};
use crate::error::{Error, Result};
use crate::geometry::{IndexedCloud, PointCloud};
use crate::{Real, Vec3, SCHEMA_VERSION};

pub use cover::{
    covers_all, sample_cover_set, sample_cover_sets, select_best_set, spanning_tree_length,
    WaypointSet,
};
pub use tsp::{nearest_neighbour_tour, tour_length, two_opt, IMPROVEMENT_EPS};

/// Which contact predictor drives planning.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictorChoice {
    /// Elastic press plus labeling with the configured sponge.
    #[default]
    Press,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PlanConfig<T> {
    pub n_sets: usize,
    pub seed: u64,
    pub sponge: SpongeModel<T>,
    #[serde(default)]
    pub predictor: PredictorChoice,
    /// Return to the first waypoint at the end of the path.
    #[serde(default)]
    pub closed_tour: bool,
}

impl<T: Real> Default for PlanConfig<T> {
    fn default() -> Self {
        Self {
            n_sets: 50,
            seed: 0,
            sponge: SpongeModel::default(),
            predictor: PredictorChoice::Press,
            closed_tour: false,
        }
    }
}

impl<T: Real> PlanConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.n_sets == 0 {
            return Err(Error::Parameter("n_sets must be >= 1".into()));
        }
        self.sponge.validate()
    }

    pub fn build_predictor(&self) -> PressPredictor<T> {
        match self.predictor {
            PredictorChoice::Press => PressPredictor::new(self.sponge.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub n_sets: usize,
    pub predictor: String,
    pub selected_set: usize,
    pub set_sizes: Vec<usize>,
}

/// Ordered waypoints and the length of the path through their contact points.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    pub poses: Vec<ToolPose<T>>,
    pub path_length: T,
    pub closed: bool,
    /// Length of the nearest-neighbour tour 2-opt started from.
    pub initial_length: T,
    pub provenance: Option<Provenance>,
}

impl<T: Real> Trajectory<T> {
    pub fn empty() -> Self {
        Self {
            poses: Vec::new(),
            path_length: T::zero(),
            closed: false,
            initial_length: T::zero(),
            provenance: None,
        }
    }

    pub fn len(&self) -> usize {
        self.poses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poses.is_empty()
    }

    pub fn contact_points(&self, cloud: &PointCloud<T>) -> Vec<Vec3<T>> {
        self.poses.iter().map(|p| p.contact_point(cloud)).collect()
    }

    /// Path length recomputed from the cloud.
    pub fn recompute_length(&self, cloud: &PointCloud<T>) -> T {
        let pts = self.contact_points(cloud);
        let order: Vec<usize> = (0..pts.len()).collect();
        tour_length(&pts, &order, self.closed)
    }
}

/// Orders `poses` into a short path over the 3D distance between contact
/// points: nearest-neighbour from the pose closest to the cloud centroid,
/// then best-improvement 2-opt.
pub fn solve_tsp_2opt<T: Real>(
    cloud: &PointCloud<T>,
    poses: &[ToolPose<T>],
    closed: bool,
) -> Trajectory<T> {
    if poses.is_empty() {
        return Trajectory {
            closed,
            ..Trajectory::empty()
        };
    }
    let points: Vec<Vec3<T>> = poses.iter().map(|p| p.contact_point(cloud)).collect();
    let centroid = cloud.centroid();
    let start = (0..points.len())
        .min_by(|&a, &b| {
            points[a]
                .distance_squared(centroid)
                .partial_cmp(&points[b].distance_squared(centroid))
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        })
        .unwrap_or(0);
    let initial = nearest_neighbour_tour(&points, start);
    let initial_length = tour_length(&points, &initial, closed);
    let (order, _) = two_opt(&points, initial, closed);
    let path_length = tour_length(&points, &order, closed);
    Trajectory {
        poses: order.iter().map(|&i| poses[i]).collect(),
        path_length,
        closed,
        initial_length,
        provenance: None,
    }
}

/// Full pipeline with the predictor selected by `config`.
pub fn plan<T: Real>(scene: &IndexedCloud<T>, config: &PlanConfig<T>) -> Result<Trajectory<T>> {
    config.validate()?;
    let predictor = config.build_predictor();
    plan_with(scene, config, &predictor)
}

/// Samples `config.n_sets` covers with `predictor`, keeps the smallest and
/// sequences it.
pub fn plan_with<T: Real, P: ContactPredictor<T> + ?Sized>(
    scene: &IndexedCloud<T>,
    config: &PlanConfig<T>,
    predictor: &P,
) -> Result<Trajectory<T>> {
    let sets = sample_cover_sets(scene, predictor, config.n_sets, config.seed)?;
    let best = select_best_set(scene.cloud(), &sets)?;
    let mut trajectory = solve_tsp_2opt(scene.cloud(), &sets[best].poses, config.closed_tour);
    trajectory.provenance = Some(Provenance {
        seed: config.seed,
        n_sets: config.n_sets,
        predictor: predictor.id(),
        selected_set: best,
        set_sizes: sets.iter().map(WaypointSet::len).collect(),
    });
    Ok(trajectory)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct WaypointRecord<T> {
    pub index: usize,
    pub position: Vec3<T>,
    pub normal: Vec3<T>,
    pub theta: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct TrajectoryConfigRecord<T> {
    pub n_sets: usize,
    pub seed: u64,
    pub sponge: SpongeModel<T>,
    #[serde(default)]
    pub closed_tour: bool,
    #[serde(default)]
    pub predictor: PredictorChoice,
}

/// On-disk trajectory document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct TrajectoryDocument<T> {
    pub schema_version: u32,
    pub object: String,
    pub config: TrajectoryConfigRecord<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    pub waypoints: Vec<WaypointRecord<T>>,
    pub path_length_m: T,
}

impl<T: Real> TrajectoryDocument<T> {
    pub fn new(
        object: impl Into<String>,
        cloud: &PointCloud<T>,
        config: &PlanConfig<T>,
        trajectory: &Trajectory<T>,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            object: object.into(),
            config: TrajectoryConfigRecord {
                n_sets: config.n_sets,
                seed: config.seed,
                sponge: config.sponge.clone(),
                closed_tour: trajectory.closed,
                predictor: config.predictor,
            },
            provenance: trajectory.provenance.clone(),
            waypoints: trajectory
                .poses
                .iter()
                .map(|p| WaypointRecord {
                    index: p.contact_index,
                    position: cloud.point(p.contact_index),
                    normal: cloud.normal(p.contact_index),
                    theta: p.yaw,
                })
                .collect(),
            path_length_m: trajectory.path_length,
        }
    }

    /// Rebuilds the trajectory, checking every waypoint against `cloud`.
    pub fn to_trajectory(&self, cloud: &PointCloud<T>) -> Result<Trajectory<T>> {
        let mut poses = Vec::with_capacity(self.waypoints.len());
        for (k, w) in self.waypoints.iter().enumerate() {
            let pose = ToolPose::new(w.index, w.theta);
            pose.validate(cloud)
                .map_err(|e| Error::InvalidPose(format!("waypoint {k}: {e}")))?;
            poses.push(pose);
        }
        let mut t = Trajectory {
            poses,
            path_length: T::zero(),
            closed: self.config.closed_tour,
            initial_length: T::zero(),
            provenance: self.provenance.clone(),
        };
        t.path_length = t.recompute_length(cloud);
        t.initial_length = t.path_length;
        Ok(t)
    }

    pub fn plan_config(&self) -> PlanConfig<T> {
        PlanConfig {
            n_sets: self.config.n_sets,
            seed: self.config.seed,
            sponge: self.config.sponge.clone(),
            predictor: self.config.predictor,
            closed_tour: self.config.closed_tour,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_cloud(xs: &[f64]) -> PointCloud<f64> {
        let pts = xs.iter().map(|&x| Vec3::new(x, 0.0, 0.0)).collect();
        PointCloud::new(pts, vec![Vec3::unit_z(); xs.len()]).unwrap()
    }

    #[test]
    fn single_pose_has_zero_length() {
        let cloud = line_cloud(&[0.0, 1.0]);
        let t = solve_tsp_2opt(&cloud, &[ToolPose::new(1, 0.0)], false);
        assert_eq!(t.len(), 1);
        assert_eq!(t.path_length, 0.0);
    }

    #[test]
    fn collinear_points_are_swept_in_order() {
        let xs = [0.3, -0.2, 0.5, 0.0, -0.4];
        let cloud = line_cloud(&xs);
        let poses: Vec<_> = (0..5).map(|i| ToolPose::new(i, 0.0)).collect();
        let t = solve_tsp_2opt(&cloud, &poses, false);
        assert!((t.path_length - 0.9).abs() < 1e-12);
        let visited: Vec<f64> = t.poses.iter().map(|p| xs[p.contact_index]).collect();
        let ascending = visited.windows(2).all(|w| w[0] < w[1]);
        let descending = visited.windows(2).all(|w| w[0] > w[1]);
        assert!(ascending || descending, "{visited:?}");
    }

    #[test]
    fn document_round_trip() {
        let cloud = line_cloud(&[0.0, 0.1, 0.25]);
        let poses: Vec<_> = (0..3).map(|i| ToolPose::new(i, 0.5 * i as f64)).collect();
        let t = solve_tsp_2opt(&cloud, &poses, false);
        let doc = TrajectoryDocument::new("line", &cloud, &PlanConfig::default(), &t);
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.contains("\"schema_version\":1"));
        assert!(json.contains("\"path_length_m\":0.25"));
        let back: TrajectoryDocument<f64> = serde_json::from_str(&json).unwrap();
        let t2 = back.to_trajectory(&cloud).unwrap();
        assert_eq!(t2.poses, t.poses);
        assert_eq!(t2.path_length, t.path_length);

        let small = line_cloud(&[0.0]);
        assert!(back.to_trajectory(&small).is_err());
    }
}
