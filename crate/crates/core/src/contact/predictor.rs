use crate::contact::{label_contact, press, ContactMap, MapSource, SpongeModel, ToolPose};
use crate::error::{Error, Result};
use crate::geometry::IndexedCloud;
use crate::Real;

/// Maps a cloud and a tool pose to a per-point contact map.
///
/// Implementations must be deterministic and return a mask with one entry
/// per cloud point.
pub trait ContactPredictor<T: Real>: Send + Sync {
    /// Short identifier recorded in plan provenance.
    fn id(&self) -> String;

    fn predict(&self, scene: &IndexedCloud<T>, pose: &ToolPose<T>) -> Result<ContactMap>;
}

/// Runs `predictor` and tags the result as a prediction.
pub fn predict_contact<T: Real, P: ContactPredictor<T> + ?Sized>(
    predictor: &P,
    scene: &IndexedCloud<T>,
    pose: &ToolPose<T>,
) -> Result<ContactMap> {
    pose.validate(scene.cloud())?;
    let mut map = predictor.predict(scene, pose)?;
    if map.len() != scene.len() {
        return Err(Error::Invariant(format!(
            "predictor {} returned {} mask entries for {} points",
            predictor.id(),
            map.len(),
            scene.len()
        )));
    }
    map.source = MapSource::Predicted;
    Ok(map)
}

/// Geometric predictor: the elastic press followed by contact labeling.
#[derive(Clone, Debug, PartialEq)]
pub struct PressPredictor<T> {
    pub sponge: SpongeModel<T>,
}

impl<T: Real> PressPredictor<T> {
    pub fn new(sponge: SpongeModel<T>) -> Self {
        Self { sponge }
    }
}

impl<T: Real> ContactPredictor<T> for PressPredictor<T> {
    fn id(&self) -> String {
        format!(
            "press-{}x{}-E{}",
            self.sponge.grid_nx, self.sponge.grid_ny, self.sponge.youngs_modulus
        )
    }

    fn predict(&self, scene: &IndexedCloud<T>, pose: &ToolPose<T>) -> Result<ContactMap> {
        let result = press(&self.sponge, scene, pose)?;
        Ok(label_contact(&result, &self.sponge, scene))
    }
}

impl<T: Real, P: ContactPredictor<T> + ?Sized> ContactPredictor<T> for &P {
    fn id(&self) -> String {
        (**self).id()
    }

    fn predict(&self, scene: &IndexedCloud<T>, pose: &ToolPose<T>) -> Result<ContactMap> {
        (**self).predict(scene, pose)
    }
}
