//! Numerical tolerances shared by every module.

/// Tolerance constants used for validation and comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed deviation of a state norm from 1.
    pub norm: f64,
    /// Maximum ‖U†U − I‖ (max-abs entry) before a gate is rejected.
    pub unitarity: f64,
    /// Maximum ‖A − A†‖ for a matrix to be treated as Hermitian.
    pub hermitian: f64,
    /// Relative singular-value floor below which a matrix counts as singular.
    pub singular: f64,
    /// Smallest accepted post-selection probability.
    pub min_success: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    norm: 1e-10,
    unitarity: 1e-8,
    hermitian: 1e-10,
    singular: 1e-12,
    min_success: 1e-12,
};
