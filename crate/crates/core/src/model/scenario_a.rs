//! A provider sells data to a risk-neutral technology firm.
//!
//! The provider fixes a price, a fine payable on breach and an insurance
//! payout; the firm then picks a low or high security investment to
//! maximise its own expected profit.

use super::{expected_utility, Outcome, Utility};
use crate::error::{Error, Result};

/// Security investment level chosen by the firm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Investment {
    /// `i = 0`: no spend, breach probability `gamma`.
    Low,
    /// `i = 1`: spend `psi`, breach probability `alpha`.
    High,
}

impl Investment {
    pub fn index(self) -> u8 {
        match self {
            Investment::Low => 0,
            Investment::High => 1,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            0 => Some(Investment::Low),
            1 => Some(Investment::High),
            _ => None,
        }
    }
}

/// Parameters of the provider-to-firm sale.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioA {
    firm_value: f64,
    own_value: f64,
    liability: f64,
    invest_cost: f64,
    p_invest: f64,
    p_no_invest: f64,
    utility: Utility,
}

impl ScenarioA {
    /// Validates and builds the parameter set.
    ///
    /// * `firm_value` (V) and `own_value` (W) are non-negative,
    /// * `liability` (L) and `invest_cost` (psi) are positive,
    /// * `0 < p_invest < p_no_invest < 1` (alpha < gamma).
    pub fn new(
        firm_value: f64,
        own_value: f64,
        liability: f64,
        invest_cost: f64,
        p_invest: f64,
        p_no_invest: f64,
        utility: Utility,
    ) -> Result<Self> {
        non_negative("V", firm_value)?;
        non_negative("W", own_value)?;
        positive("L", liability)?;
        positive("psi", invest_cost)?;
        if !(p_invest > 0.0 && p_invest < 1.0) {
            return Err(Error::invalid("alpha", format!("must lie in (0, 1), got {p_invest}")));
        }
        if !(p_no_invest > p_invest && p_no_invest < 1.0) {
            return Err(Error::invalid(
                "gamma",
                format!("must satisfy alpha < gamma < 1, got alpha = {p_invest}, gamma = {p_no_invest}"),
            ));
        }
        Ok(Self {
            firm_value,
            own_value,
            liability,
            invest_cost,
            p_invest,
            p_no_invest,
            utility,
        })
    }

    /// Same parameters with a different investment cost.
    pub fn with_invest_cost(&self, invest_cost: f64) -> Result<Self> {
        positive("psi", invest_cost)?;
        Ok(Self {
            invest_cost,
            ..self.clone()
        })
    }

    pub fn firm_value(&self) -> f64 {
        self.firm_value
    }
    pub fn own_value(&self) -> f64 {
        self.own_value
    }
    pub fn liability(&self) -> f64 {
        self.liability
    }
    pub fn invest_cost(&self) -> f64 {
        self.invest_cost
    }
    /// Breach probability under high investment (alpha).
    pub fn p_invest(&self) -> f64 {
        self.p_invest
    }
    /// Breach probability under low investment (gamma).
    pub fn p_no_invest(&self) -> f64 {
        self.p_no_invest
    }
    pub fn utility(&self) -> &Utility {
        &self.utility
    }

    pub fn breach_prob(&self, investment: Investment) -> f64 {
        match investment {
            Investment::Low => self.p_no_invest,
            Investment::High => self.p_invest,
        }
    }

    /// Reduction in breach probability bought by investing, `gamma - alpha`.
    pub fn risk_reduction(&self) -> f64 {
        self.p_no_invest - self.p_invest
    }

    /// Firm's expected profit at a given investment level.
    pub fn firm_profit(&self, price: f64, fine: f64, investment: Investment) -> f64 {
        match investment {
            Investment::Low => self.firm_value - price - self.p_no_invest * fine,
            Investment::High => self.firm_value - price - self.invest_cost - self.p_invest * fine,
        }
    }

    /// Smallest fine that makes high investment a best response,
    /// `psi / (gamma - alpha)`.
    pub fn min_inducing_fine(&self) -> f64 {
        self.invest_cost / self.risk_reduction()
    }

    /// The firm's best response to `(price, fine)`. Investing pays off when
    /// `(gamma - alpha) t >= psi`; indifference resolves to high investment.
    ///
    /// The test is evaluated as `t >= psi / (gamma - alpha)` so the closed-form
    /// minimal fine always induces investment bit-for-bit.
    pub fn firm_best_response(&self, _price: f64, fine: f64) -> Investment {
        if fine >= self.min_inducing_fine() {
            Investment::High
        } else {
            Investment::Low
        }
    }

    /// The two provider outcomes (breach, no breach) under an actuarially
    /// fair policy priced at the breach probability of `investment`.
    pub fn outcomes(&self, price: f64, fine: f64, payout: f64, investment: Investment) -> [Outcome; 2] {
        let p = self.breach_prob(investment);
        let secure = self.own_value + price - p * payout;
        // Liability left after the fine and the policy; exactly zero under
        // full insurance.
        let uncovered = (self.liability - fine) - payout;
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

    /// Provider expected utility for a contract and an investment level.
    pub fn provider_utility(&self, price: f64, fine: f64, payout: f64, investment: Investment) -> Result<f64> {
        expected_utility(&self.utility, &self.outcomes(price, fine, payout, investment))
    }

    /// Checks `price >= 0`, `0 <= fine <= L` and `payout >= 0`.
    pub fn check_contract(&self, price: f64, fine: f64, payout: f64) -> Result<()> {
        if !(price >= 0.0 && price.is_finite()) {
            return Err(Error::invalid("phi", format!("price must be non-negative, got {price}")));
        }
        if !(fine >= 0.0 && fine <= self.liability) {
            return Err(Error::invalid("t", format!("fine must lie in [0, {}], got {fine}", self.liability)));
        }
        if !(payout >= 0.0 && payout.is_finite()) {
            return Err(Error::invalid("L_c", format!("payout must be non-negative, got {payout}")));
        }
        Ok(())
    }
}

/// A contract `(phi, t, L_c)` offered to the firm, with the firm's induced
/// investment and the provider's resulting expected utility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractA {
    pub price: f64,
    pub fine: f64,
    pub payout: f64,
    pub investment: Investment,
    pub provider_value: f64,
}

impl ContractA {
    /// Builds a feasible contract, resolving the firm's response and the
    /// provider value.
    pub fn evaluate(params: &ScenarioA, price: f64, fine: f64, payout: f64) -> Result<Self> {
        params.check_contract(price, fine, payout)?;
        let investment = params.firm_best_response(price, fine);
        let provider_value = params.provider_utility(price, fine, payout, investment)?;
        Ok(Self {
            price,
            fine,
            payout,
            investment,
            provider_value,
        })
    }

    pub fn firm_profit(&self, params: &ScenarioA) -> f64 {
        params.firm_profit(self.price, self.fine, self.investment)
    }

    pub fn outcomes(&self, params: &ScenarioA) -> [Outcome; 2] {
        params.outcomes(self.price, self.fine, self.payout, self.investment)
    }

    /// Sure wealth the provider values as much as this contract.
    pub fn certainty_equivalent(&self, params: &ScenarioA) -> Result<f64> {
        params.utility().inverse(self.provider_value)
    }
}

fn non_negative(name: &'static str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be non-negative and finite, got {x}")))
    }
}

fn positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive and finite, got {x}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn canonical() -> ScenarioA {
        ScenarioA::new(10.0, 50.0, 20.0, 1.0, 0.1, 0.5, Utility::power(0.5).unwrap()).unwrap()
    }

    #[test]
    fn firm_profit_examples() {
        let p = canonical();
        assert_eq!(p.firm_profit(10.0, 0.0, Investment::Low), 0.0);
        assert_abs_diff_eq!(p.firm_profit(8.75, 2.5, Investment::High), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.firm_profit(8.75, 2.5, Investment::Low), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn best_response_examples() {
        let p = canonical();
        assert_eq!(p.firm_best_response(0.0, 0.0), Investment::Low);
        assert_eq!(p.firm_best_response(8.75, 2.5), Investment::High);
        assert_eq!(p.firm_best_response(8.75, 3.0), Investment::High);
        assert_eq!(p.firm_best_response(8.75, 2.4999), Investment::Low);
    }

    #[test]
    fn best_response_agrees_with_profit_comparison() {
        let p = canonical();
        for j in 0..=400 {
            let t = 20.0 * j as f64 / 400.0;
            let low = p.firm_profit(5.0, t, Investment::Low);
            let high = p.firm_profit(5.0, t, Investment::High);
            let expected = if high >= low { Investment::High } else { Investment::Low };
            assert_eq!(p.firm_best_response(5.0, t), expected, "t = {t}");
        }
    }

    #[test]
    fn provider_utility_examples() {
        let p = canonical();
        assert_eq!(p.provider_utility(8.75, 2.5, 17.5, Investment::High).unwrap(), 57f64.sqrt());
        assert_eq!(p.provider_utility(10.0, 0.0, 20.0, Investment::Low).unwrap(), 50f64.sqrt());
        // Two-point lottery: breach leaves 50 + 10 - 20, otherwise 60.
        let v = p.provider_utility(10.0, 0.0, 0.0, Investment::Low).unwrap();
        assert_abs_diff_eq!(v, 0.5 * 40f64.sqrt() + 0.5 * 60f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn domain_error_carries_wealth() {
        let p = ScenarioA::new(0.0, 5.0, 20.0, 1.0, 0.1, 0.5, Utility::power(0.5).unwrap()).unwrap();
        match p.provider_utility(0.0, 0.0, 0.0, Investment::Low) {
            Err(Error::Domain { wealth, .. }) => assert_eq!(wealth, -15.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parameter_validation() {
        let u = Utility::power(0.5).unwrap();
        assert!(ScenarioA::new(10.0, 50.0, 20.0, 1.0, 0.5, 0.5, u).is_err());
        assert!(ScenarioA::new(10.0, 50.0, 20.0, 1.0, 0.6, 0.5, u).is_err());
        assert!(ScenarioA::new(10.0, 50.0, 0.0, 1.0, 0.1, 0.5, u).is_err());
        assert!(ScenarioA::new(-1.0, 50.0, 20.0, 1.0, 0.1, 0.5, u).is_err());
        assert!(ScenarioA::new(10.0, 50.0, 20.0, 0.0, 0.1, 0.5, u).is_err());
        let err = ScenarioA::new(10.0, 50.0, 20.0, 1.0, 0.1, 1.0, u).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "gamma", .. }));
    }

    #[test]
    fn contract_feasibility() {
        let p = canonical();
        assert!(ContractA::evaluate(&p, -1.0, 0.0, 0.0).is_err());
        assert!(ContractA::evaluate(&p, 1.0, 21.0, 0.0).is_err());
        assert!(ContractA::evaluate(&p, 1.0, 1.0, -0.5).is_err());
        let c = ContractA::evaluate(&p, 8.75, 2.5, 17.5).unwrap();
        assert_eq!(c.investment, Investment::High);
        assert_abs_diff_eq!(c.certainty_equivalent(&p).unwrap(), 57.0, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn full_insurance_equalises_wealth(
            price in 0.0f64..100.0,
            frac in 0.0f64..=1.0,
            liability in 0.5f64..100.0,
            high in any::<bool>(),
        ) {
            let p = ScenarioA::new(100.0, 200.0, liability, 1.0, 0.1, 0.4, Utility::power(0.5).unwrap()).unwrap();
            let fine = frac * liability;
            let inv = if high { Investment::High } else { Investment::Low };
            let payout = liability - fine;
            let [breach, safe] = p.outcomes(price, fine, payout, inv);
            prop_assert!((breach.wealth - safe.wealth).abs() <= 1e-12);
            let expected = p.utility().eval(200.0 + price - p.breach_prob(inv) * payout).unwrap();
            prop_assert_eq!(p.provider_utility(price, fine, payout, inv).unwrap(), expected);
        }

        #[test]
        fn best_response_monotone_in_fine(a in 0.0f64..20.0, b in 0.0f64..20.0, psi in 0.1f64..10.0) {
            let p = canonical().with_invest_cost(psi).unwrap();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(p.firm_best_response(0.0, lo) <= p.firm_best_response(0.0, hi));
        }
    }
}
