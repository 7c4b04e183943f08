//! Quasi-static press of the tool onto a point cloud.
//!
//! The tool's bottom face is a bed of independent springs (an elastic
//! foundation). For a press depth `d` along the approach axis, a node whose
//! local surface height (measured along the contact normal, relative to the
//! contact point) is `h` penetrates by `max(0, h + d)` and carries
//! `k_node * max(0, h + d)`. The depth is found by bisection so that the
//! nodal forces sum to the requested force.

use serde::{Deserialize, Serialize};

use crate::contact::{SpongeModel, ToolFrame, ToolPose};
use crate::error::Result;
use crate::geometry::IndexedCloud;
use crate::{Real, Vec3};

/// Absolute tolerance on the net force, N.
pub const FORCE_TOLERANCE: f64 = 1e-3;
/// Upper bound on bisection iterations.
pub const MAX_BISECTION_ITERATIONS: usize = 60;

/// Number of cloud points interpolated for the surface height under a node.
const SURFACE_NEIGHBOURS: usize = 4;

/// How a node relates to the surface below it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "state", content = "height")]
pub enum NodeSupport<T> {
    /// Surface found at this height above the contact tangent plane.
    Supported(T),
    /// No cloud point close enough laterally; the node hangs over an edge.
    Overhanging,
    /// Surface rises more than the tool height above the tangent plane; the
    /// node cannot reach it without crushing the tool.
    Obstructed,
}

impl<T: Real> NodeSupport<T> {
    fn height(&self) -> Option<T> {
        match *self {
            NodeSupport::Supported(h) => Some(h),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PressResult<T> {
    pub contact_index: usize,
    pub grid_nx: usize,
    pub grid_ny: usize,
    /// Node positions after the press, row-major (`grid_ny` rows of `grid_nx`).
    pub node_positions: Vec<Vec3<T>>,
    /// Nodal contact forces, N, same layout as `node_positions`.
    pub node_forces: Vec<T>,
    pub node_support: Vec<NodeSupport<T>>,
    /// Displacement of the tool face past the contact point along the approach axis.
    pub press_depth: T,
    pub net_force: T,
    /// Force the press was asked to reach.
    pub requested_force: T,
    pub force_unreached: bool,
    pub iterations: usize,
}

impl<T: Real> PressResult<T> {
    pub fn node_count(&self) -> usize {
        self.node_forces.len()
    }
}

/// Presses `sponge` onto the cloud at `pose` with the sponge's target force.
pub fn press<T: Real>(
    sponge: &SpongeModel<T>,
    scene: &IndexedCloud<T>,
    pose: &ToolPose<T>,
) -> Result<PressResult<T>> {
    press_with_force(sponge, scene, pose, sponge.target_force)
}

/// Presses with an explicit total force instead of `sponge.target_force`.
pub fn press_with_force<T: Real>(
    sponge: &SpongeModel<T>,
    scene: &IndexedCloud<T>,
    pose: &ToolPose<T>,
    force: T,
) -> Result<PressResult<T>> {
    sponge.validate()?;
    pose.validate(scene.cloud())?;
    let frame = ToolFrame::for_pose(scene.cloud(), pose);
    let offsets = node_offsets(sponge);
    let support: Vec<NodeSupport<T>> = offsets
        .iter()
        .map(|&(u, v)| surface_support(sponge, scene, &frame, u, v))
        .collect();

    let k = sponge.node_stiffness();
    let heights: Vec<T> = support.iter().filter_map(NodeSupport::height).collect();
    let net = |d: T| -> T { heights.iter().map(|&h| k * (h + d).max(T::zero())).sum() };

    let tol = T::lit(FORCE_TOLERANCE);
    let d_max = sponge.height;
    let mut iterations = 0;
    let (depth, force_unreached) = if heights.is_empty() || net(d_max) < force - tol {
        (d_max, true)
    } else {
        let highest = heights.iter().copied().fold(T::neg_infinity(), T::max);
        // no node touches at `lo`; every bracket keeps net(lo) < force <= net(hi)
        let mut lo = -highest;
        let mut hi = d_max;
        let mut mid = hi;
        while iterations < MAX_BISECTION_ITERATIONS {
            iterations += 1;
            mid = (lo + hi) * T::lit(0.5);
            let f = net(mid);
            if (f - force).abs() <= tol {
                break;
            }
            if f < force {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (mid, false)
    };

    let mut node_positions = Vec::with_capacity(offsets.len());
    let mut node_forces = Vec::with_capacity(offsets.len());
    let face = -depth;
    for (&(u, v), s) in offsets.iter().zip(&support) {
        match s.height() {
            Some(h) if h > face => {
                node_positions.push(frame.to_world(u, v, h));
                node_forces.push(k * (h - face));
            }
            _ => {
                node_positions.push(frame.to_world(u, v, face));
                node_forces.push(T::zero());
            }
        }
    }
    let net_force = node_forces.iter().copied().sum();

    Ok(PressResult {
        contact_index: pose.contact_index,
        grid_nx: sponge.grid_nx,
        grid_ny: sponge.grid_ny,
        node_positions,
        node_forces,
        node_support: support,
        press_depth: depth,
        net_force,
        requested_force: force,
        force_unreached,
        iterations,
    })
}

/// Tool-frame `(u, v)` offsets of the bottom-face nodes, row-major.
pub fn node_offsets<T: Real>(sponge: &SpongeModel<T>) -> Vec<(T, T)> {
    let half_w = sponge.width * T::lit(0.5);
    let half_l = sponge.length * T::lit(0.5);
    let step_u = sponge.width / T::from_usize_lossy(sponge.grid_nx - 1);
    let step_v = sponge.length / T::from_usize_lossy(sponge.grid_ny - 1);
    let mut out = Vec::with_capacity(sponge.node_count());
    for j in 0..sponge.grid_ny {
        for i in 0..sponge.grid_nx {
            out.push((
                -half_w + step_u * T::from_usize_lossy(i),
                -half_l + step_v * T::from_usize_lossy(j),
            ));
        }
    }
    out
}

/// Surface height under the node at tool-frame offset `(u, v)`: inverse
/// lateral-distance weighted mean of the nearest cloud points' heights along
/// the contact normal.
fn surface_support<T: Real>(
    sponge: &SpongeModel<T>,
    scene: &IndexedCloud<T>,
    frame: &ToolFrame<T>,
    u: T,
    v: T,
) -> NodeSupport<T> {
    let anchor = frame.to_world(u, v, T::zero());
    let neighbours = scene.index().knn(anchor, SURFACE_NEIGHBOURS);
    let cloud = scene.cloud();
    let reach = sponge.overhang_distance();
    let exact = T::lit(1e-12);

    let mut weighted = T::zero();
    let mut weights = T::zero();
    let mut any_close = false;
    for &i in &neighbours {
        let q = cloud.point(i);
        let offset = q - anchor;
        let lateral = (offset - frame.normal * offset.dot(frame.normal)).norm();
        let h = (q - frame.origin).dot(frame.normal);
        if lateral <= reach {
            any_close = true;
        }
        if lateral <= exact {
            weighted = h;
            weights = T::one();
            break;
        }
        let w = T::one() / lateral;
        weighted += w * h;
        weights += w;
    }
    if !any_close {
        return NodeSupport::Overhanging;
    }
    let h = weighted / weights;
    if h > sponge.height {
        NodeSupport::Obstructed
    } else {
        NodeSupport::Supported(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_object, ObjectKind, ObjectSpec};

    fn disc(radius: f64, n: usize) -> IndexedCloud<f64> {
        generate_object(&ObjectSpec {
            kind: ObjectKind::Plate,
            radius,
            depth: 0.0,
            rim_curvature: 2.0,
            sample_count: n,
            seed: 5,
        })
        .unwrap()
        .into()
    }

    fn centre(scene: &IndexedCloud<f64>) -> usize {
        scene.cloud().closest_to(Vec3::zero())
    }

    #[test]
    fn flat_centre_press_is_uniform() {
        let scene = disc(0.1, 2000);
        let sponge = SpongeModel::default();
        for yaw in [0.0, 0.7, 2.0, 4.5] {
            let r = press(&sponge, &scene, &ToolPose::new(centre(&scene), yaw)).unwrap();
            assert!(!r.force_unreached);
            assert!((r.net_force - 5.0).abs() <= 1e-3);
            let f0 = r.node_forces[0];
            assert!(r.node_forces.iter().all(|&f| (f - f0).abs() < 1e-12));
            assert!(r.iterations <= MAX_BISECTION_ITERATIONS);
        }
    }

    #[test]
    fn flat_press_depth_matches_closed_form() {
        let scene = disc(0.1, 2000);
        let sponge = SpongeModel::default();
        let r = press(&sponge, &scene, &ToolPose::new(centre(&scene), 0.0)).unwrap();
        let closed = 5.0 * 0.02 / (1e4 * 0.05 * 0.05);
        assert!((r.press_depth - closed).abs() / closed < 1e-3);

        let stiff = SpongeModel {
            youngs_modulus: 2e4,
            ..sponge
        };
        let r2 = press(&stiff, &scene, &ToolPose::new(centre(&scene), 0.0)).unwrap();
        assert!((r2.press_depth / r.press_depth - 0.5).abs() < 1e-3);
    }

    #[test]
    fn edge_press_overhangs() {
        let scene = disc(0.1, 2000);
        let edge = scene.cloud().closest_to(Vec3::new(0.1, 0.0, 0.0));
        let r = press(&SpongeModel::default(), &scene, &ToolPose::new(edge, 0.0)).unwrap();
        let overhanging = r
            .node_support
            .iter()
            .filter(|s| matches!(s, NodeSupport::Overhanging))
            .count();
        assert!(overhanging > 0);
        assert!(!r.force_unreached);
        assert!((r.net_force - 5.0).abs() <= 1e-3);
    }

    #[test]
    fn unreachable_force_is_flagged() {
        // a tiny cloud cannot hold the press: most nodes overhang and
        // the remaining ones saturate at the maximum depth
        let pts = vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(0.001, 0.0, 0.0)];
        let cloud = crate::geometry::PointCloud::new(pts, vec![Vec3::unit_z(); 2]).unwrap();
        let scene = IndexedCloud::new(cloud);
        let sponge = SpongeModel {
            youngs_modulus: 1e3,
            ..SpongeModel::default()
        };
        let r = press(&sponge, &scene, &ToolPose::new(0, 0.0)).unwrap();
        assert!(r.force_unreached);
        assert_eq!(r.press_depth, sponge.height);
        assert!(r.net_force < 5.0);
    }

    #[test]
    fn invalid_pose_is_rejected() {
        let scene = disc(0.05, 200);
        assert!(press(&SpongeModel::default(), &scene, &ToolPose::new(200, 0.0)).is_err());
    }

    #[test]
    fn forces_are_non_negative_and_zero_off_surface() {
        let scene = disc(0.1, 2000);
        let edge = scene.cloud().closest_to(Vec3::new(-0.09, 0.03, 0.0));
        let r = press(&SpongeModel::default(), &scene, &ToolPose::new(edge, 1.1)).unwrap();
        for (f, s) in r.node_forces.iter().zip(&r.node_support) {
            assert!(*f >= 0.0);
            if !matches!(s, NodeSupport::Supported(_)) {
                assert_eq!(*f, 0.0);
            }
        }
    }

    #[test]
    fn f32_press_balances() {
        let scene: IndexedCloud<f32> = generate_object(&ObjectSpec {
            kind: ObjectKind::Bowl,
            radius: 0.08f32,
            depth: 0.03,
            rim_curvature: 2.0,
            sample_count: 1000,
            seed: 2,
        })
        .unwrap()
        .into();
        let i = scene.cloud().closest_to(Vec3::new(0.03, 0.0, 0.0));
        let r = press(
            &SpongeModel::<f32>::default(),
            &scene,
            &ToolPose::new(i, 0.3),
        )
        .unwrap();
        assert!((r.net_force - 5.0).abs() <= 1e-3, "{}", r.net_force);
    }
}
