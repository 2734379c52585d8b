//! Multipartite spin-J nonlocality criteria.
//!
//! The crate builds pure states of spin-J sites, evaluates moment (MABK,
//! CFRD, CHSH) and collective-spin (squeezing, depth of entanglement,
//! steering) inequalities, and certifies every classical bound with a
//! brute-force oracle.
//!
//! Conventions used throughout:
//!
//! * Site basis ordered by descending `m`; index 0 is `m = +J`.
//! * Tensor products put site 0 in the slowest-varying index.
//! * MABK and CHSH quantities use Pauli units, CFRD and collective
//!   quantities standard spin units.
//!
//! ```
//! use multispin::{ghz_state, mabk_moment, MeasurementSettings, Sign};
//!
//! let psi = ghz_state(3)?;
//! let settings = MeasurementSettings::uniform(3, 0.0, Sign::Plus);
//! let moment = mabk_moment(&psi, &settings)?;
//! assert!((moment.re - 4.0).abs() < 1e-12);
//! # Ok::<(), multispin::Error>(())
//! ```

pub mod bounds;
pub mod collective;
pub mod criterion;
pub mod error;
pub mod linalg;
pub mod moments;
pub mod optimize;
pub mod oracle;
pub mod spin;
pub mod state;
pub mod states;

pub use bounds::{
    compute_cj, compute_fj_curve, fj_chord, fj_lookup, quadratic_separable_bound, CjValue, CurveBank, FjCurve, DEFAULT_FJ_SAMPLES,
};
pub use collective::{
    collective_steering_test, depth_of_entanglement, depth_of_entanglement_along, epr_paradox_test, inference_variances,
    pairwise_entanglement_test, sm_bound, steering_bound, xi_parameter, Axis, CollectiveMoments, DepthResult,
    InferenceVariances, LocalObservable,
};
pub use criterion::{CriterionResult, Sense, Verdict};
pub use error::{Error, Result};
pub use linalg::{hermitian_eigensolve, Eigen, Matrix, SymTridiagonal, C64};
pub use moments::{
    cfrd_lhs, cfrd_lhs_correlated, cfrd_rhs, cfrd_rhs_correlated, chsh_value, evaluate_cfrd, evaluate_cfrd_correlated,
    evaluate_genuine, evaluate_mabk, genuine_result, genuine_threshold, ghz_mabk_moment, mabk_moment, mabk_result,
    mabk_threshold, optimize_amplitudes, optimize_mabk_settings, AmplitudeOptimum, GenuineKind, HybridPartition, MabkForm,
    MeasurementSettings,
};
pub use oracle::{
    chsh_local_max, corner_max, genuine_entanglement_max, hybrid_max, random_state_min_scan, svetlichny_max, Objective,
    OracleReport, RandomScan, ScanObjective,
};
pub use spin::{Sign, SpinMagnitude, SpinOperators, UnitConvention};
pub use state::{embed_at_site, embed_on_sites, CompositeOperator, PureState};
pub use states::{
    bec_ground_state, bec_hamiltonian, correlated_state, ghz_state, schwinger_moments, singlet_state, BecParams,
    CorrelatedStateSpec, TwoModeState,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/conventions.md")]
    mod conventions {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/moment-criteria.md")]
    mod moment_criteria {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/collective.md")]
    mod collective {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
