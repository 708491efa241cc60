//! Brute-force grid search over the raw contract programs, compared with the
//! closed-form optima.
//!
//! Run with `cargo run --release --example oracle_cross_check`.

use datashare_contracts::closed_form::{optimal_contract_a, optimal_contract_b};
use datashare_contracts::oracle::{check_agreement_a, check_agreement_b, GridSpec};
use datashare_contracts::{defaults, Result};

fn main() -> Result<()> {
    let grid = GridSpec::default();

    for psi in [1.0, 9.0] {
        let params = defaults::sale().with_invest_cost(psi)?;
        let claimed = optimal_contract_a(&params)?;
        let (oracle, agreement) = check_agreement_a(&params, &claimed, &grid)?;
        let o = oracle.contract;
        println!(
            "sale, psi = {psi}: oracle ({}, {}, {}) vs closed form ({}, {}, {}); |diff| = {:.3e} <= {:.3e}: {}",
            o.price,
            o.fine,
            o.payout,
            claimed.price,
            claimed.fine,
            claimed.payout,
            agreement.difference.abs(),
            agreement.tolerance,
            agreement.passed()
        );
    }

    for params in [defaults::consortium(), defaults::consortium_threshold().with_size(8)?] {
        let claimed = optimal_contract_b(&params)?;
        let (oracle, agreement) = check_agreement_b(&params, &claimed, &grid)?;
        println!(
            "consortium, k = {}: oracle s = {}, t = {}, L_c = {}; |diff| = {:.3e}: {}",
            params.size(),
            oracle.contract.participate,
            oracle.contract.fine,
            oracle.contract.payout,
            agreement.difference.abs(),
            agreement.passed()
        );
    }
    Ok(())
}
