use serde::{Deserialize, Serialize};

/// Default cap on the dimension of any dense operator.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Numerical tolerances shared by every floating-point check.
///
/// `level_grouping` is relative to the operator's max-entry norm: eigenvalues
/// closer than `level_grouping * ‖A‖` are treated as one degenerate level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
    pub level_grouping: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            abs: 1e-10,
            rel: 1e-9,
            level_grouping: 1e-7,
        }
    }
}
