use crate::contact::{ContactMap, MapSource, PressResult, SpongeModel};
use crate::geometry::IndexedCloud;
use crate::Real;

/// Indices of nodes whose face-equivalent force exceeds the threshold.
pub fn contact_nodes<T: Real>(result: &PressResult<T>, sponge: &SpongeModel<T>) -> Vec<usize> {
    let scale = T::from_usize_lossy(result.node_count());
    result
        .node_forces
        .iter()
        .enumerate()
        .filter(|(_, &f)| f * scale > sponge.node_force_threshold)
        .map(|(i, _)| i)
        .collect()
}

/// Ground-truth contact map of a press: every cloud point within
/// `label_radius` of a contact node, plus the press's own contact point.
pub fn label_contact<T: Real>(
    result: &PressResult<T>,
    sponge: &SpongeModel<T>,
    scene: &IndexedCloud<T>,
) -> ContactMap {
    let mut mask = vec![false; scene.len()];
    let mut hits = Vec::new();
    for node in contact_nodes(result, sponge) {
        scene.index().radius_query_into(
            result.node_positions[node],
            sponge.label_radius,
            &mut hits,
        );
        for &i in &hits {
            mask[i] = true;
        }
    }
    if let Some(m) = mask.get_mut(result.contact_index) {
        *m = true;
    }
    ContactMap::new(mask, MapSource::GroundTruth)
}
