//! Domain model: utilities, consortium curves, the two contracting scenarios
//! and their exact profit and expected-utility evaluators.

mod consortium;
mod scenario_a;
mod scenario_b;
mod utility;

pub use consortium::{BreachFamily, BreachProb, ScaleFamily, ValueScale};
pub use scenario_a::{ContractA, Investment, ScenarioA};
pub use scenario_b::{ContractB, ScenarioB};
pub use utility::{Utility, UtilityFamily};

use crate::error::Result;

/// One state of the world: its probability and the provider's realised wealth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub prob: f64,
    pub wealth: f64,
}

/// Expected utility of a finite lottery.
///
/// The sum is anchored on the last outcome, `U_n + sum_j p_j (U_j - U_n)`,
/// which is algebraically `sum_j p_j U_j` and returns `U_n` bit-for-bit when
/// every outcome carries the same wealth. The probabilities of all but the
/// last outcome are used; the last one absorbs the remainder.
pub fn expected_utility(utility: &Utility, outcomes: &[Outcome]) -> Result<f64> {
    let (last, rest) = outcomes
        .split_last()
        .expect("a lottery has at least one outcome");
    let anchor = utility.eval(last.wealth)?;
    let mut acc = 0.0;
    for o in rest {
        let u = utility.eval(o.wealth)?;
        acc += o.prob * (u - anchor);
    }
    Ok(anchor + acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_lottery_is_exact() {
        let u = Utility::power(0.5).unwrap();
        let w = 57.0;
        let outcomes = [
            Outcome { prob: 0.1, wealth: w },
            Outcome { prob: 0.9, wealth: w },
        ];
        assert_eq!(expected_utility(&u, &outcomes).unwrap(), 57f64.sqrt());
    }

    #[test]
    fn matches_plain_weighted_sum() {
        let u = Utility::log_shifted(1.0).unwrap();
        let outcomes = [
            Outcome { prob: 0.2, wealth: 3.0 },
            Outcome { prob: 0.3, wealth: 7.0 },
            Outcome { prob: 0.5, wealth: 11.0 },
        ];
        let plain: f64 = outcomes.iter().map(|o| o.prob * (o.wealth + 1.0).ln()).sum();
        assert!((expected_utility(&u, &outcomes).unwrap() - plain).abs() < 1e-14);
    }
}
