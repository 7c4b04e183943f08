//! Elastic press model, contact labeling and the predictor interface.

mod label;
mod map;
mod pose;
mod predictor;
mod press;
mod sponge;

pub use label::{contact_nodes, label_contact};
pub use map::{ContactMap, ContactMapRecord, MapSource, PoseRef, RleMask};
pub use pose::{ToolFrame, ToolPose};
pub use predictor::{predict_contact, ContactPredictor, PressPredictor};
pub use press::{
    node_offsets, press, press_with_force, NodeSupport, PressResult, FORCE_TOLERANCE,
    MAX_BISECTION_ITERATIONS,
};
pub use sponge::{SpongeModel, RIGID_YOUNGS_MODULUS};
