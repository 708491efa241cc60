//! Whether a provider should join a data-sharing consortium.
//!
//! Run with `cargo run --example consortium_participation`.

use datashare_contracts::closed_form::optimal_contract_b;
use datashare_contracts::{defaults, Result};

fn main() -> Result<()> {
    for (name, params) in [
        ("value-dominated", defaults::consortium()),
        ("risk-sensitive", defaults::consortium_threshold()),
    ] {
        println!("{name} consortium: W = {}, L = {}", params.own_value(), params.liability());
        for k in [2, 4, 8, 16] {
            let at = params.with_size(k)?;
            let c = optimal_contract_b(&at)?;
            println!(
                "  k = {k:2}: p(k) = {:.6}, v(k) = {:.6}, margin = {:+.6} -> join = {}, t = {}, L_c = {}",
                at.p_pool(),
                at.v_pool(),
                at.participation_margin(),
                c.participate,
                c.fine,
                c.payout
            );
        }
    }
    Ok(())
}
