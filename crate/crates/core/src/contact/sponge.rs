use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Real;

/// Young's modulus used for the rigid-tool comparison, in Pa.
pub const RIGID_YOUNGS_MODULUS: f64 = 2e9;

/// Deformable tool parameters.
///
/// The tool is a `width x length x height` block whose bottom face is
/// discretised into a `grid_nx x grid_ny` node grid. Each node is an
/// independent compressive spring carrying an equal share of the face area.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SpongeModel<T> {
    pub width: T,
    pub length: T,
    pub height: T,
    pub youngs_modulus: T,
    pub grid_nx: usize,
    pub grid_ny: usize,
    /// Total normal force applied by the press, N.
    pub target_force: T,
    /// Contact threshold on the face-equivalent nodal force, N: a node is in
    /// contact when its force times the node count exceeds this value, i.e.
    /// when its pressure would exceed the threshold spread over the whole face.
    pub node_force_threshold: T,
    /// Labeling radius around contact nodes, m.
    pub label_radius: T,
}

impl<T: Real> Default for SpongeModel<T> {
    fn default() -> Self {
        Self {
            width: T::lit(0.05),
            length: T::lit(0.05),
            height: T::lit(0.02),
            youngs_modulus: T::lit(1e4),
            grid_nx: 9,
            grid_ny: 9,
            target_force: T::lit(5.0),
            node_force_threshold: T::lit(0.5),
            label_radius: T::lit(0.005),
        }
    }
}

impl<T: Real> SpongeModel<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("width", self.width),
            ("length", self.length),
            ("height", self.height),
            ("youngs_modulus", self.youngs_modulus),
            ("label_radius", self.label_radius),
        ];
        for (name, v) in positive {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::Parameter(format!(
                    "sponge {name} must be > 0, got {v}"
                )));
            }
        }
        if self.grid_nx < 2 || self.grid_ny < 2 {
            return Err(Error::Parameter(format!(
                "sponge grid must be at least 2x2, got {}x{}",
                self.grid_nx, self.grid_ny
            )));
        }
        if !(self.node_force_threshold > T::zero()) {
            return Err(Error::Parameter(format!(
                "node_force_threshold must be > 0, got {}",
                self.node_force_threshold
            )));
        }
        if !(self.target_force > self.node_force_threshold) || !self.target_force.is_finite() {
            return Err(Error::Parameter(format!(
                "target_force ({}) must exceed node_force_threshold ({})",
                self.target_force, self.node_force_threshold
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.grid_nx * self.grid_ny
    }

    /// Tributary face area of one node.
    #[inline]
    pub fn cell_area(&self) -> T {
        self.width * self.length / T::from_usize_lossy(self.node_count())
    }

    /// Spring stiffness of one node, `E * A_cell / height`.
    #[inline]
    pub fn node_stiffness(&self) -> T {
        self.youngs_modulus * self.cell_area() / self.height
    }

    /// Lateral distance beyond which a node has no supporting surface.
    #[inline]
    pub fn overhang_distance(&self) -> T {
        T::lit(2.0) * self.width.max(self.length) / T::from_usize_lossy(self.grid_nx)
    }

    /// Same tool with the stiffness of a rigid body.
    pub fn rigid_variant(&self) -> Self {
        Self {
            youngs_modulus: T::lit(RIGID_YOUNGS_MODULUS),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let s = SpongeModel::<f64>::default();
        s.validate().unwrap();
        assert_eq!(s.node_count(), 81);
        assert_eq!(s.target_force, 5.0);
        assert_eq!(s.node_force_threshold, 0.5);
    }

    #[test]
    fn rigid_variant_only_changes_stiffness() {
        let s = SpongeModel::<f64>::default();
        let r = s.rigid_variant();
        assert_eq!(r.youngs_modulus, 2e9);
        assert_eq!(
            SpongeModel {
                youngs_modulus: s.youngs_modulus,
                ..r
            },
            s
        );
    }

    #[test]
    fn validation_catches_bad_parameters() {
        let ok = SpongeModel::<f64>::default();
        assert!(SpongeModel {
            grid_nx: 1,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(SpongeModel {
            height: 0.0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(SpongeModel {
            target_force: 0.4,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(SpongeModel {
            node_force_threshold: 0.0,
            ..ok
        }
        .validate()
        .is_err());
    }
}
