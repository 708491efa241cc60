//! Shipped parameter sets used by the examples, the configs under
//! `configs/` and the tests.
//!
//! These are illustrative choices, not calibrated data.

use crate::model::{BreachProb, ScenarioA, ScenarioB, Utility, ValueScale};

/// Sale: `V = 10`, `W = 50`, `L = 20`, `psi = 1`, `alpha = 0.1`,
/// `gamma = 0.5`, `U(x) = sqrt(x)`. Both investment thresholds equal 8.
pub fn sale() -> ScenarioA {
    ScenarioA::new(10.0, 50.0, 20.0, 1.0, 0.1, 0.5, Utility::power(0.5).unwrap()).unwrap()
}

/// Consortium: `W = 10`, `L = 5`, `k = 4`, `p(k) = 1 - 0.95^k`,
/// `v(k) = sqrt(k)`, `U(x) = sqrt(x)`. Joining is optimal at every size.
pub fn consortium() -> ScenarioB {
    ScenarioB::new(
        10.0,
        5.0,
        4,
        BreachProb::compound(0.05).unwrap(),
        ValueScale::power(0.5).unwrap(),
        Utility::power(0.5).unwrap(),
    )
    .unwrap()
}

/// Consortium with a finite participation threshold: `W = 100`, `L = 100`,
/// `p(k) = 1 - 0.95^k`, `v(k) = k^0.1`, `U(x) = 1 - exp(-0.01 x)`.
/// The participation margin is positive for `k <= 4` and negative for
/// `5 <= k <= 64`.
pub fn consortium_threshold() -> ScenarioB {
    ScenarioB::new(
        100.0,
        100.0,
        4,
        BreachProb::compound(0.05).unwrap(),
        ValueScale::power(0.1).unwrap(),
        Utility::exponential(0.01).unwrap(),
    )
    .unwrap()
}
