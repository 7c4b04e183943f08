use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::{Real, Vec3};

/// A candidate press: the tool approaches cloud point `contact_index` along
/// its inverted normal, rotated by `yaw` about the approach axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ToolPose<T> {
    #[serde(rename = "index")]
    pub contact_index: usize,
    #[serde(rename = "theta")]
    pub yaw: T,
}

impl<T: Real> ToolPose<T> {
    /// Builds a pose with `yaw` wrapped into `[0, 2pi)`.
    pub fn new(contact_index: usize, yaw: T) -> Self {
        let tau = T::TAU();
        let mut yaw = yaw % tau;
        if yaw < T::zero() {
            yaw += tau;
        }
        if yaw >= tau {
            yaw = T::zero();
        }
        Self { contact_index, yaw }
    }

    pub fn validate(&self, cloud: &PointCloud<T>) -> Result<()> {
        if self.contact_index >= cloud.len() {
            return Err(Error::InvalidPose(format!(
                "contact index {} out of range for a cloud of {} points",
                self.contact_index,
                cloud.len()
            )));
        }
        if !self.yaw.is_finite() {
            return Err(Error::InvalidPose(format!(
                "yaw {} is not finite",
                self.yaw
            )));
        }
        Ok(())
    }

    /// Orientation feature `[sin(yaw), cos(yaw)]`.
    pub fn feature(&self) -> [T; 2] {
        [self.yaw.sin(), self.yaw.cos()]
    }

    pub fn contact_point(&self, cloud: &PointCloud<T>) -> Vec3<T> {
        cloud.point(self.contact_index)
    }

    pub fn approach_axis(&self, cloud: &PointCloud<T>) -> Vec3<T> {
        -cloud.normal(self.contact_index)
    }
}

/// Orthonormal tool frame at a contact point. `normal` points from the
/// surface towards the tool; `x` and `y` span the bottom face.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToolFrame<T> {
    pub origin: Vec3<T>,
    pub x: Vec3<T>,
    pub y: Vec3<T>,
    pub normal: Vec3<T>,
}

impl<T: Real> ToolFrame<T> {
    /// Frame whose `x` axis is the reference tangent rotated by `yaw`.
    ///
    /// The reference tangent is global `+x` projected onto the tangent plane,
    /// or global `+y` when the normal is within 1e-6 of `+-x`.
    pub fn new(origin: Vec3<T>, normal: Vec3<T>, yaw: T) -> Self {
        let reference = if (T::one() - normal.x.abs()) <= T::lit(1e-6) {
            Vec3::unit_y()
        } else {
            Vec3::unit_x()
        };
        let tangent = (reference - normal * reference.dot(normal))
            .normalized()
            .unwrap_or_else(Vec3::unit_y);
        let bitangent = normal.cross(tangent);
        let (s, c) = yaw.sin_cos();
        let x = tangent * c + bitangent * s;
        let y = normal.cross(x);
        Self {
            origin,
            x,
            y,
            normal,
        }
    }

    pub fn for_pose(cloud: &PointCloud<T>, pose: &ToolPose<T>) -> Self {
        Self::new(
            pose.contact_point(cloud),
            cloud.normal(pose.contact_index),
            pose.yaw,
        )
    }

    /// World position of tool-frame coordinates `(u, v, w)`.
    #[inline]
    pub fn to_world(&self, u: T, v: T, w: T) -> Vec3<T> {
        self.origin + self.x * u + self.y * v + self.normal * w
    }
}
