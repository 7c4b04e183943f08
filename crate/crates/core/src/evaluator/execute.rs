use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::contact::{label_contact, press_with_force, ContactMap, SpongeModel, ToolPose};
use crate::error::{Error, Result};
use crate::geometry::IndexedCloud;
use crate::planner::Trajectory;
use crate::{rng, Real, Vec3};

/// Fraction of the target force applied by an under-forced press.
pub const DEFAULT_DEFICIT_FACTOR: f64 = 0.6;

/// Execution noise: Gaussian jitter of each contact point and occasional
/// under-forced presses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct NoiseModel<T> {
    pub position_sigma: T,
    pub force_deficit_prob: T,
    #[serde(default = "default_deficit_factor")]
    pub deficit_factor: T,
    pub seed: u64,
}

fn default_deficit_factor<T: Real>() -> T {
    T::lit(DEFAULT_DEFICIT_FACTOR)
}

impl<T: Real> NoiseModel<T> {
    pub fn none() -> Self {
        Self {
            position_sigma: T::zero(),
            force_deficit_prob: T::zero(),
            deficit_factor: default_deficit_factor(),
            seed: 0,
        }
    }

    pub fn new(position_sigma: T, force_deficit_prob: T, seed: u64) -> Self {
        Self {
            position_sigma,
            force_deficit_prob,
            deficit_factor: default_deficit_factor(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.position_sigma >= T::zero()) || !self.position_sigma.is_finite() {
            return Err(Error::Parameter(format!(
                "position_sigma must be >= 0, got {}",
                self.position_sigma
            )));
        }
        if !(self.force_deficit_prob >= T::zero() && self.force_deficit_prob <= T::one()) {
            return Err(Error::Parameter(format!(
                "force_deficit_prob must be in [0, 1], got {}",
                self.force_deficit_prob
            )));
        }
        if !(self.deficit_factor > T::zero() && self.deficit_factor <= T::one()) {
            return Err(Error::Parameter(format!(
                "deficit_factor must be in (0, 1], got {}",
                self.deficit_factor
            )));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct CoverageReport<T> {
    pub coverage_percent: T,
    pub covered_points: usize,
    pub total_points: usize,
    pub waypoint_count: usize,
    pub path_length: T,
    /// Points labeled by each executed press, in execution order.
    pub per_waypoint_contacts: Vec<usize>,
    /// Cloud index each press actually landed on after position noise.
    pub executed_indices: Vec<usize>,
    pub deficit_presses: usize,
    pub force_unreached_presses: usize,
    #[serde(skip)]
    pub masks: Vec<ContactMap>,
}

impl<T: Real> CoverageReport<T> {
    /// Coverage recomputed from the stored per-waypoint masks.
    pub fn recompute_coverage(&self) -> T {
        let mut covered = vec![false; self.total_points];
        for m in &self.masks {
            for (c, &b) in covered.iter_mut().zip(&m.mask) {
                *c |= b;
            }
        }
        coverage_percent(covered.iter().filter(|&&c| c).count(), self.total_points)
    }
}

fn coverage_percent<T: Real>(covered: usize, total: usize) -> T {
    T::lit(100.0) * T::from_usize_lossy(covered) / T::from_usize_lossy(total)
}

/// Replays `trajectory` with the press model, perturbed by `noise`, and
/// measures the fraction of cloud points contacted at least once.
pub fn execute_and_evaluate<T: Real>(
    scene: &IndexedCloud<T>,
    trajectory: &Trajectory<T>,
    sponge: &SpongeModel<T>,
    noise: &NoiseModel<T>,
) -> Result<CoverageReport<T>> {
    noise.validate()?;
    sponge.validate()?;
    let cloud = scene.cloud();
    let sigma = noise.position_sigma.to_f64_lossy();
    let jitter = Normal::new(0.0, sigma).map_err(|e| Error::Parameter(e.to_string()))?;
    let deficit_prob = noise.force_deficit_prob.to_f64_lossy();
    let mut rng = rng::stream(noise.seed, "execute", 0);

    let mut covered = vec![false; scene.len()];
    let mut report = CoverageReport {
        coverage_percent: T::zero(),
        covered_points: 0,
        total_points: scene.len(),
        waypoint_count: trajectory.len(),
        path_length: trajectory.path_length,
        per_waypoint_contacts: Vec::with_capacity(trajectory.len()),
        executed_indices: Vec::with_capacity(trajectory.len()),
        deficit_presses: 0,
        force_unreached_presses: 0,
        masks: Vec::with_capacity(trajectory.len()),
    };

    for planned in &trajectory.poses {
        planned.validate(cloud)?;
        let index = if sigma > 0.0 {
            let p = cloud.point(planned.contact_index);
            let offset = Vec3::new(
                T::lit(jitter.sample(&mut rng)),
                T::lit(jitter.sample(&mut rng)),
                T::lit(jitter.sample(&mut rng)),
            );
            scene
                .index()
                .nearest(p + offset)
                .unwrap_or(planned.contact_index)
        } else {
            planned.contact_index
        };
        let mut force = sponge.target_force;
        if deficit_prob > 0.0 && rng.random::<f64>() < deficit_prob {
            force *= noise.deficit_factor;
            report.deficit_presses += 1;
        }
        let pose = ToolPose::new(index, planned.yaw);
        let result = press_with_force(sponge, scene, &pose, force)?;
        if result.force_unreached {
            report.force_unreached_presses += 1;
        }
        let map = label_contact(&result, sponge, scene);
        for (c, &m) in covered.iter_mut().zip(&map.mask) {
            *c |= m;
        }
        report.per_waypoint_contacts.push(map.count());
        report.executed_indices.push(index);
        report.masks.push(map);
    }
    report.covered_points = covered.iter().filter(|&&c| c).count();
    report.coverage_percent = coverage_percent(report.covered_points, scene.len());
    Ok(report)
}
