//! Finite stages of the S-extension: evaluation-vector polytopes, the
//! embedding of points, saturation, ε-face falsification and twisted
//! approximations between enumerations.

mod face;
mod stage;
mod twisted;

pub use face::{epsilon_face_check, EpsilonFaceOutcome};
pub use stage::{
    build_stage, check_saturation, dxd, verify_extreme_embedding, Enumeration, ExtremeReport, SStage, SaturationCheck,
};
pub use twisted::{build_twisted, verify_twisted, ConditionReport, TwistedReport, TwistedSequence};
