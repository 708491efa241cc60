//! Optimal cybersecurity-insurance contracts for medical data sharing.
//!
//! Two contracting problems are modelled:
//!
//! * **Sale** ([`ScenarioA`]): a risk-averse provider sells data to a
//!   risk-neutral firm, choosing a price, a breach fine and an insurance
//!   payout while the firm privately picks its security investment.
//! * **Consortium** ([`ScenarioB`]): `k` identical providers decide whether
//!   to pool data, with an intra-consortium fine and external insurance.
//!
//! [`closed_form`] gives the optimal contracts analytically, [`oracle`]
//! solves the raw bilevel programs by grid enumeration as an independent
//! check, [`analysis`] sweeps parameters to locate regime thresholds and
//! [`simulate`] validates expected utilities by seeded Monte Carlo. The
//! [`cli`] module backs the `datashare` binary.
//!
//! ```
//! use datashare_contracts::{closed_form, defaults};
//!
//! let params = defaults::sale();
//! let contract = closed_form::optimal_contract_a(&params).unwrap();
//! assert_eq!((contract.price, contract.fine, contract.payout), (8.75, 2.5, 17.5));
//! ```

pub mod analysis;
pub mod cli;
pub mod closed_form;
pub mod defaults;
mod error;
pub mod model;
pub mod oracle;
pub mod simulate;

pub use error::{Error, Result};
pub use model::{
    BreachProb, ContractA, ContractB, Investment, Outcome, ScenarioA, ScenarioB, Utility, UtilityFamily, ValueScale,
};
