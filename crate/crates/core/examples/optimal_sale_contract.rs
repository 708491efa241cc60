//! Optimal contract for selling data to a firm, in both investment regimes.
//!
//! Run with `cargo run --example optimal_sale_contract`.

use datashare_contracts::closed_form::{lp_branch_high, lp_branch_low, optimal_contract_a, ThresholdReport};
use datashare_contracts::{defaults, Result};

fn main() -> Result<()> {
    let base = defaults::sale();
    let report = ThresholdReport::new(&base);
    println!(
        "thresholds: (gamma - alpha) L = {}, (gamma - alpha) V / gamma = {}, psi* = {} ({} binding)",
        report.liability_threshold,
        report.value_threshold,
        report.switch_point(),
        report.binding.name()
    );

    for psi in [1.0, 9.0] {
        let params = base.with_invest_cost(psi)?;
        let c = optimal_contract_a(&params)?;
        println!("\npsi = {psi}");
        println!("  high-investment LP vertex: {:?}", lp_branch_high(&params));
        println!("  low-investment LP vertex:  {:?}", lp_branch_low(&params));
        println!(
            "  optimal contract: phi = {}, t = {}, L_c = {}, induced investment = {:?}",
            c.price, c.fine, c.payout, c.investment
        );
        let [breach, safe] = c.outcomes(&params);
        println!("  wealth on breach = {}, without breach = {}", breach.wealth, safe.wealth);
        println!(
            "  provider value = {} (certainty equivalent {}), firm profit = {}",
            c.provider_value,
            c.certainty_equivalent(&params)?,
            c.firm_profit(&params)
        );
    }
    Ok(())
}
