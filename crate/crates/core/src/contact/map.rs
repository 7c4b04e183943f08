use serde::{Deserialize, Serialize};

use crate::contact::ToolPose;
use crate::error::{Error, Result};
use crate::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapSource {
    GroundTruth,
    Predicted,
}

/// Per-point contact mask over a point cloud.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactMap {
    pub mask: Vec<bool>,
    pub source: MapSource,
}

impl ContactMap {
    pub fn new(mask: Vec<bool>, source: MapSource) -> Self {
        Self { mask, source }
    }

    pub fn empty(len: usize, source: MapSource) -> Self {
        Self::new(vec![false; len], source)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.mask.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    /// Number of points in contact.
    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask.get(i).copied().unwrap_or(false)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }

    /// True when every point marked here is also marked in `other`.
    pub fn is_subset_of(&self, other: &ContactMap) -> bool {
        self.mask.len() == other.mask.len()
            && self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b)
    }

    pub fn symmetric_difference_count(&self, other: &ContactMap) -> usize {
        self.mask
            .iter()
            .zip(&other.mask)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Run-length encoded boolean mask. `counts` alternate between runs of
/// `false` and `true`, starting with `false` (the first run may be empty).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RleMask {
    pub size: usize,
    pub counts: Vec<usize>,
}

impl RleMask {
    pub fn encode(mask: &[bool]) -> Self {
        let mut counts = Vec::new();
        let mut current = false;
        let mut run = 0;
        for &b in mask {
            if b == current {
                run += 1;
            } else {
                counts.push(run);
                current = b;
                run = 1;
            }
        }
        if run > 0 || counts.is_empty() {
            counts.push(run);
        }
        Self {
            size: mask.len(),
            counts,
        }
    }

    pub fn decode(&self) -> Result<Vec<bool>> {
        let total: usize = self.counts.iter().sum();
        if total != self.size {
            return Err(Error::Parameter(format!(
                "run lengths sum to {total}, mask size is {}",
                self.size
            )));
        }
        let mut mask = Vec::with_capacity(self.size);
        for (k, &run) in self.counts.iter().enumerate() {
            mask.extend(std::iter::repeat_n(k % 2 == 1, run));
        }
        Ok(mask)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PoseRef<T> {
    pub index: usize,
    pub theta: T,
}

/// Serialized form of a contact map: cloud id, generating pose, RLE mask
/// and source.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ContactMapRecord<T> {
    pub cloud_id: String,
    pub pose: PoseRef<T>,
    pub mask: RleMask,
    pub source: MapSource,
}

impl<T: Real> ContactMapRecord<T> {
    pub fn new(cloud_id: impl Into<String>, pose: &ToolPose<T>, map: &ContactMap) -> Self {
        Self {
            cloud_id: cloud_id.into(),
            pose: PoseRef {
                index: pose.contact_index,
                theta: pose.yaw,
            },
            mask: RleMask::encode(&map.mask),
            source: map.source,
        }
    }

    pub fn to_map(&self) -> Result<ContactMap> {
        Ok(ContactMap::new(self.mask.decode()?, self.source))
    }

    pub fn tool_pose(&self) -> ToolPose<T> {
        ToolPose::new(self.pose.index, self.pose.theta)
    }
}
