//! Member and stand-alone expected utility across consortium sizes, with the
//! size beyond which joining stops paying.
//!
//! Run with `cargo run --example consortium_size_sweep`.

use datashare_contracts::analysis::{participation_threshold, sweep_k};
use datashare_contracts::{defaults, Result};

fn main() -> Result<()> {
    let params = defaults::consortium_threshold();
    let ks: Vec<usize> = (2..=16).collect();
    let sweep = sweep_k(&params, &ks)?;

    println!("{:>3} {:>12} {:>12} {:>5} {:>12}", "k", "H1", "Hk", "join", "margin");
    for p in &sweep.points {
        println!(
            "{:3} {:12.8} {:12.8} {:>5} {:12.6}",
            p.k, p.alone, p.pooled, p.participate, p.margin
        );
    }

    let report = participation_threshold(&params, 64)?;
    match report.k_star {
        Some(k) => println!("largest participating size: {k} (decision changes at {:?})", report.changes),
        None if report.is_monotone() => println!("joining never pays"),
        None => println!("non-monotone margin, decision changes at {:?}", report.changes),
    }
    Ok(())
}
