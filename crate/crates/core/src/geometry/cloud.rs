use serde::Serialize;

use crate::error::{Error, Result};
use crate::{Real, Vec3};

/// Tolerance on the Euclidean length of stored normals.
pub const NORMAL_UNIT_TOLERANCE: f64 = 1e-6;

/// Positions and unit normals of a rigid target surface.
///
/// Construction validates that both arrays have the same non-zero length,
/// that every normal is unit length and that no two points coincide.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct PointCloud<T> {
    points: Vec<Vec3<T>>,
    normals: Vec<Vec3<T>>,
}

impl<T: Real> PointCloud<T> {
    pub fn new(points: Vec<Vec3<T>>, normals: Vec<Vec3<T>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidCloud(
                "cloud must contain at least one point".into(),
            ));
        }
        if points.len() != normals.len() {
            return Err(Error::InvalidCloud(format!(
                "{} points but {} normals",
                points.len(),
                normals.len()
            )));
        }
        let tol = T::lit(NORMAL_UNIT_TOLERANCE);
        for (i, (p, n)) in points.iter().zip(&normals).enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidCloud(format!("point {i} is not finite")));
            }
            if !((n.norm() - T::one()).abs() <= tol) {
                return Err(Error::InvalidCloud(format!(
                    "normal {i} has length {}, expected 1",
                    n.norm()
                )));
            }
        }
        if let Some((a, b)) = find_duplicate(&points) {
            return Err(Error::InvalidCloud(format!("points {a} and {b} coincide")));
        }
        Ok(Self { points, normals })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false for a constructed cloud; provided for API symmetry.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn points(&self) -> &[Vec3<T>] {
        &self.points
    }

    #[inline]
    pub fn normals(&self) -> &[Vec3<T>] {
        &self.normals
    }

    #[inline]
    pub fn point(&self, i: usize) -> Vec3<T> {
        self.points[i]
    }

    #[inline]
    pub fn normal(&self, i: usize) -> Vec3<T> {
        self.normals[i]
    }

    pub fn centroid(&self) -> Vec3<T> {
        let sum = self.points.iter().fold(Vec3::zero(), |acc, &p| acc + p);
        sum / T::from_usize_lossy(self.len())
    }

    /// Index of the point closest to `target`, lowest index on ties.
    pub fn closest_to(&self, target: Vec3<T>) -> usize {
        let mut best = 0;
        let mut best_d = T::infinity();
        for (i, p) in self.points.iter().enumerate() {
            let d = p.distance_squared(target);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }
}

fn find_duplicate<T: Real>(points: &[Vec3<T>]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    let key = |i: usize| {
        let p = points[i];
        // canonical() folds -0.0 into 0.0 so equal coordinates compare equal
        let p = p.canonical();
        [p.x, p.y, p.z]
    };
    order.sort_by(|&a, &b| {
        let (ka, kb) = (key(a), key(b));
        ka.iter()
            .zip(kb.iter())
            .map(|(x, y)| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    order
        .windows(2)
        .find(|w| key(w[0]) == key(w[1]))
        .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
}
