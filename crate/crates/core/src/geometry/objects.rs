//! Parametric surfaces of revolution standing in for dishware meshes.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::rng;
use crate::{Real, Vec3};

pub const DEFAULT_SAMPLE_COUNT: usize = 2000;
pub const MIN_SAMPLE_COUNT: usize = 100;

/// Fraction of a plate's radius that is flat before the rim starts rising.
pub const PLATE_FLAT_FRACTION: f64 = 0.7;

/// Resolution of the tabulated area CDF along the profile curve.
const CDF_INTERVALS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectKind {
    /// Flat disc whose outer rim rises as `depth * ((r - r0) / (R - r0))^p`.
    Plate,
    /// `z = depth * (r / R)^p`.
    Bowl,
    /// Flat bottom and vertical wall joined by a quarter-circle fillet of
    /// radius `rim_curvature * min(depth, R)`.
    Pan,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ObjectSpec<T> {
    pub kind: ObjectKind,
    pub radius: T,
    pub depth: T,
    pub rim_curvature: T,
    #[serde(default = "default_sample_count")]
    pub sample_count: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_sample_count() -> usize {
    DEFAULT_SAMPLE_COUNT
}

/// An object specification with a stable name, as listed in `objects.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct NamedObject<T> {
    pub name: String,
    #[serde(flatten)]
    pub spec: ObjectSpec<T>,
}

impl<T: Real> ObjectSpec<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parameter(msg));
        if !(self.radius > T::zero()) || !self.radius.is_finite() {
            return bad(format!("radius must be > 0, got {}", self.radius));
        }
        if !(self.depth >= T::zero()) || !self.depth.is_finite() {
            return bad(format!("depth must be >= 0, got {}", self.depth));
        }
        if self.sample_count < MIN_SAMPLE_COUNT {
            return bad(format!(
                "sample_count must be >= {MIN_SAMPLE_COUNT}, got {}",
                self.sample_count
            ));
        }
        match self.kind {
            ObjectKind::Plate | ObjectKind::Bowl => {
                if !(self.rim_curvature >= T::one()) || !self.rim_curvature.is_finite() {
                    return bad(format!(
                        "rim_curvature (profile exponent) must be >= 1, got {}",
                        self.rim_curvature
                    ));
                }
            }
            ObjectKind::Pan => {
                if !(self.rim_curvature > T::zero() && self.rim_curvature <= T::one()) {
                    return bad(format!(
                        "pan rim_curvature (fillet fraction) must be in (0, 1], got {}",
                        self.rim_curvature
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn profile(&self) -> Profile<T> {
        match self.kind {
            ObjectKind::Bowl => Profile::Bowl {
                radius: self.radius,
                depth: self.depth,
                exponent: self.rim_curvature,
            },
            ObjectKind::Plate => Profile::Plate {
                radius: self.radius,
                flat_radius: self.radius * T::lit(PLATE_FLAT_FRACTION),
                depth: self.depth,
                exponent: self.rim_curvature,
            },
            ObjectKind::Pan => {
                let fillet = self.rim_curvature * self.depth.min(self.radius);
                Profile::Pan {
                    radius: self.radius,
                    depth: self.depth,
                    fillet,
                }
            }
        }
    }
}

/// Profile curve `t in [0, 1] -> (r, z)` of a surface of revolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Profile<T> {
    Bowl {
        radius: T,
        depth: T,
        exponent: T,
    },
    Plate {
        radius: T,
        flat_radius: T,
        depth: T,
        exponent: T,
    },
    Pan {
        radius: T,
        depth: T,
        fillet: T,
    },
}

impl<T: Real> Profile<T> {
    /// Height of a graph-type profile (plate, bowl) at radial distance `r`.
    /// Returns `None` for pans, whose wall is not a function of `r`.
    pub fn height_at(&self, r: T) -> Option<T> {
        match *self {
            Profile::Bowl {
                radius,
                depth,
                exponent,
            } => Some(depth * (r / radius).powf(exponent)),
            Profile::Plate {
                radius,
                flat_radius,
                depth,
                exponent,
            } => Some(if r <= flat_radius {
                T::zero()
            } else {
                depth * ((r - flat_radius) / (radius - flat_radius)).powf(exponent)
            }),
            Profile::Pan { .. } => None,
        }
    }

    fn slope_at(&self, r: T) -> T {
        match *self {
            Profile::Bowl {
                radius,
                depth,
                exponent,
            } => depth * exponent * (r / radius).powf(exponent - T::one()) / radius,
            Profile::Plate {
                radius,
                flat_radius,
                depth,
                exponent,
            } => {
                if r <= flat_radius {
                    T::zero()
                } else {
                    let w = radius - flat_radius;
                    depth * exponent * ((r - flat_radius) / w).powf(exponent - T::one()) / w
                }
            }
            Profile::Pan { .. } => T::zero(),
        }
    }

    fn pan_segments(radius: T, depth: T, fillet: T) -> (T, T, T) {
        let bottom = radius - fillet;
        let arc = T::FRAC_PI_2() * fillet;
        let wall = depth - fillet;
        (bottom, arc, wall)
    }

    /// Position `(r, z)` and derivative `(dr/dt, dz/dt)` at parameter `t`.
    pub fn eval(&self, t: T) -> ((T, T), (T, T)) {
        match *self {
            Profile::Bowl { radius, .. } | Profile::Plate { radius, .. } => {
                let r = t * radius;
                let z = self.height_at(r).unwrap_or_else(T::zero);
                ((r, z), (radius, self.slope_at(r) * radius))
            }
            Profile::Pan {
                radius,
                depth,
                fillet,
            } => {
                let (bottom, arc, wall) = Self::pan_segments(radius, depth, fillet);
                let total = bottom + arc + wall;
                let s = t * total;
                if s <= bottom {
                    ((s, T::zero()), (total, T::zero()))
                } else if s <= bottom + arc {
                    let a = (s - bottom) / fillet;
                    let r = bottom + fillet * a.sin();
                    let z = fillet - fillet * a.cos();
                    ((r, z), (a.cos() * total, a.sin() * total))
                } else {
                    ((radius, fillet + (s - bottom - arc)), (T::zero(), total))
                }
            }
        }
    }

    /// Relative surface-area density `r * |d(r, z)/dt|` at parameter `t`.
    fn area_density(&self, t: T) -> T {
        let ((r, _), (dr, dz)) = self.eval(t);
        r * (dr * dr + dz * dz).sqrt()
    }
}

/// Tabulated area CDF along the profile parameter.
struct AreaCdf<T> {
    cumulative: Vec<T>,
}

impl<T: Real> AreaCdf<T> {
    fn new(profile: &Profile<T>) -> Self {
        let m = T::from_usize_lossy(CDF_INTERVALS);
        let mut cumulative = Vec::with_capacity(CDF_INTERVALS + 1);
        cumulative.push(T::zero());
        let mut acc = T::zero();
        let mut prev = profile.area_density(T::zero());
        for i in 1..=CDF_INTERVALS {
            let cur = profile.area_density(T::from_usize_lossy(i) / m);
            acc += (prev + cur) * T::lit(0.5);
            cumulative.push(acc);
            prev = cur;
        }
        for c in &mut cumulative {
            *c = *c / acc;
        }
        Self { cumulative }
    }

    /// Inverse CDF by linear interpolation inside the bracketing interval.
    fn invert(&self, u: T) -> T {
        let k = self
            .cumulative
            .partition_point(|&c| c < u)
            .clamp(1, CDF_INTERVALS);
        let (c0, c1) = (self.cumulative[k - 1], self.cumulative[k]);
        let frac = if c1 > c0 {
            (u - c0) / (c1 - c0)
        } else {
            T::zero()
        };
        (T::from_usize_lossy(k - 1) + frac.max(T::zero()).min(T::one()))
            / T::from_usize_lossy(CDF_INTERVALS)
    }
}

/// Samples a point cloud from the surface of revolution described by `spec`.
///
/// Radial strata are equal-area slices of the surface; azimuths follow a
/// jittered golden-angle sequence, so density is close to uniform. Normals
/// are analytic and point into the upper hemisphere (towards the tool).
pub fn generate_object<T: Real>(spec: &ObjectSpec<T>) -> Result<PointCloud<T>> {
    spec.validate()?;
    let profile = spec.profile();
    let cdf = AreaCdf::new(&profile);
    let mut rng = rng::stream(spec.seed, "object", 0);
    let n = spec.sample_count;
    let golden = T::PI() * (T::lit(3.0) - T::lit(5.0).sqrt());

    let mut points = Vec::with_capacity(n);
    let mut normals = Vec::with_capacity(n);
    for i in 0..n {
        let radial_jitter: f64 = rng.random();
        let angular_jitter: f64 = rng.random();
        let u = (T::from_usize_lossy(i) + T::lit(radial_jitter)) / T::from_usize_lossy(n);
        let t = cdf.invert(u);
        let phi = golden * (T::from_usize_lossy(i) + T::lit(0.5 * (angular_jitter - 0.5)));
        let (c, s) = (phi.cos(), phi.sin());
        let ((r, z), (dr, dz)) = profile.eval(t);
        points.push(Vec3::new(r * c, r * s, z).canonical());
        let normal = Vec3::new(-dz * c, -dz * s, dr)
            .normalized()
            .unwrap_or_else(Vec3::unit_z);
        normals.push(normal.canonical());
    }
    PointCloud::new(points, normals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(
        kind: ObjectKind,
        radius: f64,
        depth: f64,
        p: f64,
        n: usize,
        seed: u64,
    ) -> ObjectSpec<f64> {
        ObjectSpec {
            kind,
            radius,
            depth,
            rim_curvature: p,
            sample_count: n,
            seed,
        }
    }

    #[test]
    fn flat_plate_has_up_normals() {
        let cloud = generate_object(&spec(ObjectKind::Plate, 0.1, 0.0, 2.0, 1000, 3)).unwrap();
        assert_eq!(cloud.len(), 1000);
        for (p, n) in cloud.points().iter().zip(cloud.normals()) {
            assert_eq!(*n, Vec3::unit_z());
            assert_eq!(p.z, 0.0);
            assert!(p.x.hypot(p.y) <= 0.1 + 1e-15);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let s = spec(ObjectKind::Bowl, 0.08, 0.04, 2.0, 2000, 7);
        let a = generate_object(&s).unwrap();
        let b = generate_object(&s).unwrap();
        let bits = |c: &PointCloud<f64>| -> Vec<u64> {
            c.points()
                .iter()
                .chain(c.normals())
                .flat_map(|v| v.to_array())
                .map(f64::to_bits)
                .collect()
        };
        assert_eq!(bits(&a), bits(&b));
        let c = generate_object(&ObjectSpec { seed: 8, ..s }).unwrap();
        assert_ne!(bits(&a), bits(&c));
    }

    #[test]
    fn bowl_points_lie_on_profile() {
        let s = spec(ObjectKind::Bowl, 0.08, 0.04, 2.0, 2000, 7);
        let cloud = generate_object(&s).unwrap();
        let max_dev = cloud
            .points()
            .iter()
            .map(|p| (p.z - 0.04 * (p.x.hypot(p.y) / 0.08).powi(2)).abs())
            .fold(0.0, f64::max);
        assert!(max_dev < 1e-15, "deviation {max_dev}");
    }

    #[test]
    fn bowl_normals_are_perpendicular_to_profile() {
        let s = spec(ObjectKind::Bowl, 0.08, 0.04, 2.0, 500, 1);
        let cloud = generate_object(&s).unwrap();
        for (p, n) in cloud.points().iter().zip(cloud.normals()) {
            let r = p.x.hypot(p.y);
            // gradient of z - f(r) is (-f' x/r, -f' y/r, 1)
            let slope = 2.0 * 0.04 * r / (0.08 * 0.08);
            let g = Vec3::new(-slope * p.x / r, -slope * p.y / r, 1.0)
                .normalized()
                .unwrap();
            assert!((g.dot(*n) - 1.0).abs() < 1e-12);
            assert!(((n.norm()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pan_has_floor_fillet_and_wall() {
        let s = spec(ObjectKind::Pan, 0.1, 0.04, 0.5, 3000, 2);
        let cloud = generate_object(&s).unwrap();
        let fillet = 0.02;
        let mut wall = 0;
        for (p, n) in cloud.points().iter().zip(cloud.normals()) {
            let r = p.x.hypot(p.y);
            assert!(r <= 0.1 + 1e-12 && p.z >= 0.0 && p.z <= 0.04 + 1e-12);
            if p.z > fillet + 1e-9 {
                wall += 1;
                assert!((r - 0.1).abs() < 1e-12);
                assert!(n.z.abs() < 1e-12);
                // wall normals point to the axis
                assert!(n.x * p.x + n.y * p.y < 0.0);
            } else if r < 0.08 {
                assert_eq!(p.z, 0.0);
            }
        }
        assert!(wall > 0);
    }

    #[test]
    fn sampling_density_is_roughly_uniform() {
        // flat disc: fraction of points within r should track (r/R)^2
        let cloud = generate_object(&spec(ObjectKind::Plate, 0.1, 0.0, 2.0, 4000, 11)).unwrap();
        for frac in [0.25, 0.5, 0.75] {
            let r = 0.1 * frac;
            let inside = cloud
                .points()
                .iter()
                .filter(|p| p.x.hypot(p.y) <= r)
                .count();
            let expected = 4000.0 * frac * frac;
            assert!(
                (inside as f64 - expected).abs() < 0.01 * 4000.0,
                "{inside} vs {expected}"
            );
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(generate_object(&spec(ObjectKind::Bowl, 0.0, 0.04, 2.0, 1000, 0)).is_err());
        assert!(generate_object(&spec(ObjectKind::Bowl, 0.1, -0.01, 2.0, 1000, 0)).is_err());
        assert!(generate_object(&spec(ObjectKind::Bowl, 0.1, 0.01, 2.0, 99, 0)).is_err());
        assert!(generate_object(&spec(ObjectKind::Pan, 0.1, 0.01, 1.5, 1000, 0)).is_err());
        assert!(generate_object(&spec(ObjectKind::Plate, 0.1, 0.01, 0.5, 1000, 0)).is_err());
    }

    #[test]
    fn f32_generation_is_valid() {
        let s = ObjectSpec::<f32> {
            kind: ObjectKind::Bowl,
            radius: 0.08,
            depth: 0.04,
            rim_curvature: 2.0,
            sample_count: 500,
            seed: 1,
        };
        let cloud = generate_object(&s).unwrap();
        assert_eq!(cloud.len(), 500);
    }
}
