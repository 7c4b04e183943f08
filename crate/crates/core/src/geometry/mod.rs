//! Point-cloud data model, spatial indexing, normal estimation and
//! synthetic object generation.

mod cloud;
mod index;
mod io;
mod normals;
mod objects;

pub use cloud::{PointCloud, NORMAL_UNIT_TOLERANCE};
pub use index::SpatialIndex;
pub use io::{load_cloud, save_cloud, to_ply, to_xyz, CloudFormat};
pub use normals::{estimate_normals, orient_up, NormalEstimate, DEFAULT_NORMAL_K};
pub use objects::{
    generate_object, NamedObject, ObjectKind, ObjectSpec, Profile, DEFAULT_SAMPLE_COUNT,
    MIN_SAMPLE_COUNT, PLATE_FLAT_FRACTION,
};

/// A point cloud bundled with its spatial index.
#[derive(Clone, Debug)]
pub struct IndexedCloud<T> {
    cloud: PointCloud<T>,
    index: SpatialIndex<T>,
}

impl<T: crate::Real> IndexedCloud<T> {
    pub fn new(cloud: PointCloud<T>) -> Self {
        let index = SpatialIndex::build(cloud.points());
        Self { cloud, index }
    }

    #[inline]
    pub fn cloud(&self) -> &PointCloud<T> {
        &self.cloud
    }

    #[inline]
    pub fn index(&self) -> &SpatialIndex<T> {
        &self.index
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cloud.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_cloud(self) -> PointCloud<T> {
        self.cloud
    }
}

impl<T: crate::Real> From<PointCloud<T>> for IndexedCloud<T> {
    fn from(cloud: PointCloud<T>) -> Self {
        Self::new(cloud)
    }
}
