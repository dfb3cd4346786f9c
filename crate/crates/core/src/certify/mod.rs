//! Empirical certificates over finite word balls: sharpness envelopes, Anosov
//! gaps, limit-cone estimates, single-chamber consistency and the `τ` gap.
//!
//! Every verdict here is about a finite ball. `CERTIFIED_ON_BALL` means the
//! inequality holds on the enumerated elements with a stable slope; it is not
//! a proof of the asymptotic statement.

mod ball;
mod cone;
mod scan;
mod tau;

pub use ball::{
    enumerate_ball, relative_distance, BallConfig, BallEntry, GeneratorSet, Letter, WordBall, DEFAULT_BALL_CAP,
    DEFAULT_DEDUP_TOL, NEAR_COLLISION_FACTOR,
};
pub use cone::{component_consistency, hausdorff, limit_cone, ConsistencyReport, LimitConeEstimate, DIRECTION_MERGE_TOL};
pub use scan::{
    anosov_scan, fit_envelope, sharpness_scan, AnosovReport, Envelope, GrowthRow, Judgement, RootScan, ScanConfig,
    SharpnessReport, SharpnessSample, Verdict, WindowFit,
};
pub use tau::{
    sharpness_anosov_crosscheck, tau_gap, tau_gap_exact, CrossSample, CrosscheckReport, TauGap, TauGapData,
    DEFAULT_TAU_TOL,
};
