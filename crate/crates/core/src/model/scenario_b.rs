//! A consortium of `k` identical providers pooling their data.
//!
//! A member whose systems are breached pays a fine `t` to each of the other
//! `k - 1` members; every member bears liability `L` for any breach in the
//! consortium and may buy an actuarially fair policy paying `L_c`.

use super::{expected_utility, BreachProb, Outcome, Utility, ValueScale};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioB {
    own_value: f64,
    liability: f64,
    size: usize,
    breach: BreachProb,
    scale: ValueScale,
    utility: Utility,
    // Cached curve values at `size`; the curves are validated on construction.
    p_single: f64,
    p_pool: f64,
    v_pool: f64,
}

impl ScenarioB {
    pub fn new(
        own_value: f64,
        liability: f64,
        size: usize,
        breach: BreachProb,
        scale: ValueScale,
        utility: Utility,
    ) -> Result<Self> {
        if !(own_value >= 0.0 && own_value.is_finite()) {
            return Err(Error::invalid("W", format!("must be non-negative and finite, got {own_value}")));
        }
        if !(liability > 0.0 && liability.is_finite()) {
            return Err(Error::invalid("L", format!("must be positive and finite, got {liability}")));
        }
        if size < 2 {
            return Err(Error::invalid("k", format!("consortium size must be at least 2, got {size}")));
        }
        let p_pool = breach.prob(size)?;
        let v_pool = scale.scale(size)?;
        Ok(Self {
            own_value,
            liability,
            size,
            p_single: breach.p1(),
            p_pool,
            v_pool,
            breach,
            scale,
            utility,
        })
    }

    /// Same provider and curves at another consortium size.
    pub fn with_size(&self, size: usize) -> Result<Self> {
        Self::new(
            self.own_value,
            self.liability,
            size,
            self.breach.clone(),
            self.scale.clone(),
            self.utility,
        )
    }

    /// Same parameters with a different liability.
    pub fn with_liability(&self, liability: f64) -> Result<Self> {
        Self::new(
            self.own_value,
            liability,
            self.size,
            self.breach.clone(),
            self.scale.clone(),
            self.utility,
        )
    }

    pub fn own_value(&self) -> f64 {
        self.own_value
    }
    pub fn liability(&self) -> f64 {
        self.liability
    }
    pub fn size(&self) -> usize {
        self.size
    }
    pub fn breach(&self) -> &BreachProb {
        &self.breach
    }
    pub fn scale(&self) -> &ValueScale {
        &self.scale
    }
    pub fn utility(&self) -> &Utility {
        &self.utility
    }
    /// `p(1)`.
    pub fn p_single(&self) -> f64 {
        self.p_single
    }
    /// `p(k)`.
    pub fn p_pool(&self) -> f64 {
        self.p_pool
    }
    /// `v(k)`.
    pub fn v_pool(&self) -> f64 {
        self.v_pool
    }

    /// Outcomes for a provider staying out: own breach, no breach.
    pub fn outcomes_alone(&self, payout: f64) -> [Outcome; 2] {
        let p = self.p_single;
        let secure = self.own_value - p * payout;
        let uncovered = self.liability - payout;
        [
            Outcome {
                prob: p,
                wealth: secure - uncovered,
            },
            Outcome {
                prob: 1.0 - p,
                wealth: secure,
            },
        ]
    }

    /// Outcomes for a member: own breach (pays `(k-1) t`), another member's
    /// breach (receives `t`), no breach.
    pub fn outcomes_pooled(&self, fine: f64, payout: f64) -> [Outcome; 3] {
        let secure = self.v_pool * self.own_value - self.p_pool * payout;
        let uncovered = self.liability - payout;
        let exposed = secure - uncovered;
        let others = (self.size - 1) as f64;
        [
            Outcome {
                prob: self.p_single,
                wealth: exposed - others * fine,
            },
            Outcome {
                prob: self.p_pool - self.p_single,
                wealth: exposed + fine,
            },
            Outcome {
                prob: 1.0 - self.p_pool,
                wealth: secure,
            },
        ]
    }

    /// Expected utility when not participating, `H^1(L_c)`.
    pub fn utility_alone(&self, payout: f64) -> Result<f64> {
        expected_utility(&self.utility, &self.outcomes_alone(payout))
    }

    /// Expected utility of a member, `H^k(t, L_c)`.
    pub fn utility_pooled(&self, fine: f64, payout: f64) -> Result<f64> {
        expected_utility(&self.utility, &self.outcomes_pooled(fine, payout))
    }

    pub fn provider_utility(&self, fine: f64, payout: f64, participate: bool) -> Result<f64> {
        if participate {
            self.utility_pooled(fine, payout)
        } else {
            self.utility_alone(payout)
        }
    }

    /// Certainty-equivalent gain from joining under full insurance,
    /// `(v(k) - 1) W - (p(k) - p(1)) L`.
    pub fn participation_margin(&self) -> f64 {
        self.pooled_wealth() - self.alone_wealth()
    }

    /// Fully insured wealth outside the consortium, `W - p(1) L`.
    pub fn alone_wealth(&self) -> f64 {
        self.own_value - self.p_single * self.liability
    }

    /// Fully insured wealth of a member, `v(k) W - p(k) L`.
    pub fn pooled_wealth(&self) -> f64 {
        self.v_pool * self.own_value - self.p_pool * self.liability
    }

    pub fn check_contract(&self, fine: f64, payout: f64) -> Result<()> {
        if !(fine >= 0.0 && fine <= self.liability) {
            return Err(Error::invalid("t", format!("fine must lie in [0, {}], got {fine}", self.liability)));
        }
        if !(payout >= 0.0 && payout.is_finite()) {
            return Err(Error::invalid("L_c", format!("payout must be non-negative, got {payout}")));
        }
        Ok(())
    }
}

/// Consortium contract `(s, t, L_c)` with the provider's expected utility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractB {
    pub participate: bool,
    pub fine: f64,
    pub payout: f64,
    pub provider_value: f64,
}

impl ContractB {
    pub fn evaluate(params: &ScenarioB, participate: bool, fine: f64, payout: f64) -> Result<Self> {
        params.check_contract(fine, payout)?;
        Ok(Self {
            participate,
            fine,
            payout,
            provider_value: params.provider_utility(fine, payout, participate)?,
        })
    }

    pub fn outcomes(&self, params: &ScenarioB) -> Vec<Outcome> {
        if self.participate {
            params.outcomes_pooled(self.fine, self.payout).to_vec()
        } else {
            params.outcomes_alone(self.payout).to_vec()
        }
    }
}
