//! Provider value as the firm's cost of security investment grows: high
//! investment is induced up to a threshold, after which the contract stops
//! depending on the cost.
//!
//! Run with `cargo run --example investment_cost_sweep`.

use datashare_contracts::analysis::{investment_threshold, linspace, sweep_psi};
use datashare_contracts::{defaults, Result};

fn main() -> Result<()> {
    let params = defaults::sale();
    let psi_star = investment_threshold(&params).switch_point();
    let sweep = sweep_psi(&params, &linspace(0.5, 1.5 * psi_star, 24))?;

    println!("psi* = {psi_star}");
    println!("{:>8} {:>8} {:>8} {:>8} {:>2} {:>12}", "psi", "phi", "t", "L_c", "i", "certainty");
    for p in &sweep.points {
        let c = &p.contract;
        println!(
            "{:8.3} {:8.3} {:8.3} {:8.3} {:>2} {:12.6}",
            p.psi,
            c.price,
            c.fine,
            c.payout,
            c.investment.index(),
            p.certainty_equivalent
        );
    }
    if let Some(i) = sweep.switch_index() {
        println!("first low-investment point: psi = {}", sweep.points[i].psi);
    }
    Ok(())
}
