//! Built-in set of ten synthetic dishes of varying size and curvature.

use crate::geometry::{NamedObject, ObjectKind, ObjectSpec, DEFAULT_SAMPLE_COUNT};
use crate::Real;

const ENTRIES: [(&str, ObjectKind, f64, f64, f64); 10] = [
    ("plate-flat-08", ObjectKind::Plate, 0.08, 0.0, 2.0),
    ("plate-10", ObjectKind::Plate, 0.10, 0.010, 2.0),
    ("plate-12", ObjectKind::Plate, 0.12, 0.015, 2.0),
    ("plate-14", ObjectKind::Plate, 0.14, 0.020, 3.0),
    ("bowl-06", ObjectKind::Bowl, 0.06, 0.030, 2.0),
    ("bowl-07-shallow", ObjectKind::Bowl, 0.07, 0.020, 1.5),
    ("bowl-08", ObjectKind::Bowl, 0.08, 0.040, 2.0),
    ("bowl-10", ObjectKind::Bowl, 0.10, 0.040, 3.0),
    ("pan-09", ObjectKind::Pan, 0.09, 0.030, 0.5),
    ("pan-12", ObjectKind::Pan, 0.12, 0.040, 0.5),
];

/// The default ten objects, each sampled with `DEFAULT_SAMPLE_COUNT` points.
pub fn default_objects<T: Real>() -> Vec<NamedObject<T>> {
    ENTRIES
        .iter()
        .enumerate()
        .map(|(i, &(name, kind, radius, depth, p))| NamedObject {
            name: name.to_string(),
            spec: ObjectSpec {
                kind,
                radius: T::lit(radius),
                depth: T::lit(depth),
                rim_curvature: T::lit(p),
                sample_count: DEFAULT_SAMPLE_COUNT,
                seed: i as u64 + 1,
            },
        })
        .collect()
}
