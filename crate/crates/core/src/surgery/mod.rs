//! Ball-growth estimation, `(δ, ε)`-curve checks and the decomposition of a
//! closed curve into loops with controlled ball growth.

pub mod ball_growth;
pub mod decompose;
pub mod delta;
pub mod lemmas;
pub mod pairs;
pub mod verify;

pub use ball_growth::{ball_growth_constant, ball_mass, BallGrowthEstimate, BallGrowthSampling, CenterStrategy};
pub use decompose::{
    certify_pieces, cut_count_bounds, piece_bound, surgery_decompose, CutKind, CutRecord, SurgeryConfig, SurgeryReport,
};
pub use delta::{find_delta, max_oscillation};
pub use lemmas::{
    bilipschitz_constant, bilipschitz_instances, check_bilipschitz_growth, check_oscillation_growth, check_type_one_pieces,
    check_type_two_pieces, oscillation_instances, pieces_of_kind, type_one_instances, type_two_instances,
};
pub use pairs::{ceil_inv, corner_spacing_violation, corners_in_arc, violating_pair, ArcPair};
pub use verify::{additivity_defect, verify_decomposition, verify_with, CheckResult, PolyField, VerificationSummary};
