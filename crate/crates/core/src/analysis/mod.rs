//! Stability region and bifurcation analysis of the scheme on two linear
//! test equations.

pub mod bifurcation;
pub mod complex;
pub mod stability;

pub use bifurcation::{
    bifurcation_coefficients, bifurcation_thresholds, classify_bifurcation, observe_sequence,
    region_of, simulate_difference, simulate_recurrence, BifurcationCoefficients,
    BifurcationReport, BifurcationThresholds, ObservedBehaviour, Region, SimulationError,
    ThresholdError,
};
pub use complex::{quadratic_roots, Complex};
pub use stability::{
    assess_stability, stability_coefficients, stability_region, RegionError, StabilityAssessment,
    StabilityGrid,
};
