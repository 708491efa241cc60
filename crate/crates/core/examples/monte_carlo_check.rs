//! Seeded Monte Carlo estimates of expected utility against the analytical
//! values, for optimal (fully insured) and deliberately uninsured contracts.
//!
//! Run with `cargo run --release --example monte_carlo_check`.

use datashare_contracts::closed_form::{optimal_contract_a, optimal_contract_b};
use datashare_contracts::simulate::{simulate_a, simulate_b, SimReport};
use datashare_contracts::{defaults, ContractA, ContractB, Result};

fn show(label: &str, r: &SimReport) {
    println!(
        "{label:<28} mean = {:.8}  expected = {:.8}  se = {:.2e}  z = {:+.3}  counts = {:?}",
        r.mean, r.expected, r.standard_error, r.z_score, r.counts
    );
}

fn main() -> Result<()> {
    let n = 1_000_000;
    let seed = 20_240_601;

    let sale = defaults::sale();
    show("sale, optimal", &simulate_a(&sale, &optimal_contract_a(&sale)?, n, seed)?);
    let uninsured = ContractA::evaluate(&sale, 10.0, 0.0, 0.0)?;
    show("sale, no insurance", &simulate_a(&sale, &uninsured, n, seed)?);

    let pool = defaults::consortium();
    show("consortium, optimal", &simulate_b(&pool, &optimal_contract_b(&pool)?, n, seed)?);
    let fined = ContractB::evaluate(&pool, true, 1.0, 0.0)?;
    show("consortium, fine 1, no cover", &simulate_b(&pool, &fined, n, seed)?);
    Ok(())
}
