//! Analytic optimal contracts and the reductions leading to them.
//!
//! Sale: insuring fully (`L_c = L - t`) is always optimal, which turns the
//! bilevel program into two linear programs in `(phi, t)`, one per induced
//! investment level. Their vertex solutions give the optimal contract:
//!
//! * high investment when `psi <= (gamma - alpha) L` and
//!   `psi <= (gamma - alpha) V / gamma`: `t = psi / (gamma - alpha)`,
//!   `phi = V - gamma t`, `L_c = L - t`;
//! * otherwise low investment: `(phi, t, L_c) = (V, 0, L)`.
//!
//! Consortium: the fine only transfers risk between members, so `t = 0`,
//! full insurance gives `L_c = L`, and a provider joins iff
//! `v(k) W - p(k) L >= W - p(1) L`.
//!
//! Equality at either threshold resolves to the high-investment and
//! participating branches.

use crate::error::Result;
use crate::model::{ContractA, ContractB, Investment, ScenarioA, ScenarioB};

/// A `(price, fine)` pair solving one of the reduced linear programs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpSolution {
    pub price: f64,
    pub fine: f64,
}

/// Which investment-cost threshold is the smaller one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binding {
    /// `(gamma - alpha) L`: the provider's liability caps the useful fine.
    Liability,
    /// `(gamma - alpha) V / gamma`: the firm's data value caps the fine it
    /// can be asked to risk.
    FirmValue,
    Both,
}

impl Binding {
    pub fn name(self) -> &'static str {
        match self {
            Binding::Liability => "liability",
            Binding::FirmValue => "firm_value",
            Binding::Both => "both",
        }
    }
}

/// Investment-cost thresholds above which the optimal contract stops
/// inducing high investment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdReport {
    /// `(gamma - alpha) L`.
    pub liability_threshold: f64,
    /// `(gamma - alpha) V / gamma`.
    pub value_threshold: f64,
    pub binding: Binding,
}

impl ThresholdReport {
    pub fn new(params: &ScenarioA) -> Self {
        let d = params.risk_reduction();
        let liability_threshold = d * params.liability();
        let value_threshold = d * params.firm_value() / params.p_no_invest();
        let binding = if liability_threshold < value_threshold {
            Binding::Liability
        } else if value_threshold < liability_threshold {
            Binding::FirmValue
        } else {
            Binding::Both
        };
        Self {
            liability_threshold,
            value_threshold,
            binding,
        }
    }

    /// `psi* = min` of the two thresholds.
    pub fn switch_point(&self) -> f64 {
        self.liability_threshold.min(self.value_threshold)
    }
}

/// Optimal payout given the fine: full insurance of the residual loss.
pub fn optimal_payout_a(params: &ScenarioA, fine: f64) -> f64 {
    params.liability() - fine
}

/// Low-investment program: maximise `phi + gamma t` subject to
/// `phi + gamma t <= V` and `(gamma - alpha) t < psi`. The vertex
/// `(V, 0)` is always feasible and attains the bound.
pub fn lp_branch_low(params: &ScenarioA) -> LpSolution {
    LpSolution {
        price: params.firm_value(),
        fine: 0.0,
    }
}

/// High-investment program: maximise `phi + alpha t` subject to
/// `phi + alpha t <= V - psi` and `(gamma - alpha) t >= psi`.
///
/// Returns the smallest inducing fine with the price that extracts the
/// remaining surplus, or `None` when the fine would exceed `L` or the price
/// would have to be negative.
pub fn lp_branch_high(params: &ScenarioA) -> Option<LpSolution> {
    let fine = params.min_inducing_fine();
    // Same conditions as psi <= (gamma - alpha) L and psi <= (gamma - alpha) V / gamma,
    // phrased on the fine so the result agrees with the firm's best response.
    let charged = params.p_no_invest() * fine;
    if fine <= params.liability() && charged <= params.firm_value() {
        Some(LpSolution {
            price: params.firm_value() - charged,
            fine,
        })
    } else {
        None
    }
}

/// Optimal sale contract.
pub fn optimal_contract_a(params: &ScenarioA) -> Result<ContractA> {
    let lp = lp_branch_high(params).unwrap_or_else(|| lp_branch_low(params));
    let contract = ContractA::evaluate(params, lp.price, lp.fine, optimal_payout_a(params, lp.fine))?;
    debug_assert_eq!(
        contract.investment,
        if lp.fine > 0.0 { Investment::High } else { Investment::Low }
    );
    Ok(contract)
}

pub fn optimal_fine_b(_params: &ScenarioB) -> f64 {
    0.0
}

pub fn optimal_payout_b(params: &ScenarioB) -> f64 {
    params.liability()
}

/// Joining is optimal iff the fully insured member wealth is at least the
/// fully insured stand-alone wealth.
pub fn participates(params: &ScenarioB) -> bool {
    params.pooled_wealth() >= params.alone_wealth()
}

/// Optimal consortium contract.
pub fn optimal_contract_b(params: &ScenarioB) -> Result<ContractB> {
    ContractB::evaluate(
        params,
        participates(params),
        optimal_fine_b(params),
        optimal_payout_b(params),
    )
}
