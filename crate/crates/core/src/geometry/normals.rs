use nalgebra::{Matrix3, SymmetricEigen};

use crate::error::{Error, Result};
use crate::geometry::SpatialIndex;
use crate::{Real, Vec3};

/// Neighbourhood size used when a loaded cloud carries no normals.
pub const DEFAULT_NORMAL_K: usize = 12;

/// Relative eigenvalue floor below which a neighbourhood does not span a plane.
const PLANARITY_EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct NormalEstimate<T> {
    pub normals: Vec<Vec3<T>>,
    /// Points whose neighbourhood was degenerate and received the fallback `+z`.
    pub degenerate: Vec<usize>,
}

impl<T> NormalEstimate<T> {
    pub fn degenerate_count(&self) -> usize {
        self.degenerate.len()
    }
}

/// Plane-fit normals from the `k` nearest neighbours of every point.
///
/// The normal is the eigenvector of the smallest eigenvalue of the local
/// covariance, oriented into the upper hemisphere (`n.z >= 0`). Exactly
/// horizontal normals are oriented towards `+x`, then `+y`.
pub fn estimate_normals<T: Real>(points: &[Vec3<T>], k: usize) -> Result<NormalEstimate<T>> {
    if k < 3 {
        return Err(Error::Parameter(format!(
            "normal estimation needs k >= 3, got {k}"
        )));
    }
    if points.len() < k {
        return Err(Error::Parameter(format!(
            "normal estimation with k = {k} needs at least {k} points, got {}",
            points.len()
        )));
    }
    let index = SpatialIndex::build(points);
    let mut normals = Vec::with_capacity(points.len());
    let mut degenerate = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        let neighbours = index.knn(p, k);
        match plane_normal(neighbours.iter().map(|&j| points[j])) {
            Some(n) => normals.push(orient_up(n)),
            None => {
                degenerate.push(i);
                normals.push(Vec3::unit_z());
            }
        }
    }
    if !degenerate.is_empty() {
        log::warn!(
            "{} of {} points had a degenerate neighbourhood; normal set to +z",
            degenerate.len(),
            points.len()
        );
    }
    Ok(NormalEstimate {
        normals,
        degenerate,
    })
}

fn plane_normal<T: Real>(neighbours: impl Iterator<Item = Vec3<T>> + Clone) -> Option<Vec3<T>> {
    let pts: Vec<[f64; 3]> = neighbours
        .map(|p| [p.x.to_f64_lossy(), p.y.to_f64_lossy(), p.z.to_f64_lossy()])
        .collect();
    let n = pts.len() as f64;
    let mut mean = [0.0; 3];
    for p in &pts {
        for a in 0..3 {
            mean[a] += p[a] / n;
        }
    }
    let mut cov = Matrix3::<f64>::zeros();
    for p in &pts {
        let d = [p[0] - mean[0], p[1] - mean[1], p[2] - mean[2]];
        for r in 0..3 {
            for c in 0..3 {
                cov[(r, c)] += d[r] * d[c];
            }
        }
    }
    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let largest = eig.eigenvalues[order[2]];
    let middle = eig.eigenvalues[order[1]];
    if !(largest > 0.0) || middle <= PLANARITY_EPS * largest {
        return None;
    }
    let v = eig.eigenvectors.column(order[0]);
    Vec3::new(T::lit(v[0]), T::lit(v[1]), T::lit(v[2])).normalized()
}

/// Flips `n` into the upper hemisphere; horizontal normals point to `+x`, then `+y`.
pub fn orient_up<T: Real>(n: Vec3<T>) -> Vec3<T> {
    let eps = T::lit(1e-12);
    let flip = if n.z.abs() > eps {
        n.z < T::zero()
    } else if n.x.abs() > eps {
        n.x < T::zero()
    } else {
        n.y < T::zero()
    };
    if flip {
        (-n).canonical()
    } else {
        n.canonical()
    }
}
