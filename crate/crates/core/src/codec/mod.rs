//! Metric schemes, blow-up stages, marker cones and the geometric decoder
//! that reads distances back off the finished polytope.

mod blowup;
mod decode;
mod detect;
mod roundtrip;
mod scheme;

pub use blowup::{
    apex_labels, build_blowup, build_phi, marker_label, marker_points, standard_functions, BlowupStage, Marker,
    MarkerSet, PhiParams, PhiStage, QRule,
};
pub use decode::{
    decode_all, decode_distance, decode_entry, default_neighborhood, reconstruct_window, DecodeEntry, Interval,
};
pub use detect::{
    detect_geometric, detect_structure, ground_truth, DetectMode, DetectedPair, DetectedStructure, Partition,
};
pub use roundtrip::{
    aligned_phi, cycle_depth, permutations, relabeled_copy, roundtrip, standard_phi, AgainstCheck, Checkpoint,
    CopyCheck, RoundtripOptions, RoundtripReport, ROUNDTRIP_GUARD,
};
pub use scheme::{build_scheme, MetricScheme, SchemeTriple, Window};
