//! Seeded Monte Carlo check of the expected-utility formulas.
//!
//! Each draw picks one outcome of the contract's lottery; the sample mean of
//! the realised utility is compared with the analytical expectation.
//!
//! Draws are generated in fixed-size chunks. Chunk `c` uses a ChaCha8 stream
//! seeded with `seed` and stream number `c`, and only per-outcome counts are
//! kept, so the report is identical for any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{expected_utility, ContractA, ContractB, Outcome, ScenarioA, ScenarioB, Utility};

/// Generator recorded in every report.
pub const RNG_NAME: &str = "chacha8";

/// Draws per chunk (and per RNG stream).
pub const CHUNK_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub n: u64,
    pub seed: u64,
    pub rng: &'static str,
    /// Draws per outcome, in the order of the contract's outcome list.
    pub counts: Vec<u64>,
    pub mean: f64,
    pub standard_error: f64,
    pub expected: f64,
    /// `(mean - expected) / standard_error`; zero when both the error and
    /// the deviation vanish.
    pub z_score: f64,
}

impl SimReport {
    /// Empirical frequency of outcome `j`.
    pub fn frequency(&self, j: usize) -> f64 {
        self.counts[j] as f64 / self.n as f64
    }
}

fn draw_chunk(seed: u64, chunk: u64, draws: u64, cumulative: &[f64]) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut counts = vec![0u64; cumulative.len() + 1];
    for _ in 0..draws {
        let u: f64 = rng.gen();
        let j = cumulative.iter().position(|&c| u < c).unwrap_or(cumulative.len());
        counts[j] += 1;
    }
    counts
}

/// Counts how often each outcome occurs in `n` draws.
pub fn sample_counts(outcomes: &[Outcome], n: u64, seed: u64) -> Vec<u64> {
    // Thresholds for all but the last outcome, which takes the remainder.
    let mut acc = 0.0;
    let cumulative: Vec<f64> = outcomes[..outcomes.len() - 1]
        .iter()
        .map(|o| {
            acc += o.prob;
            acc
        })
        .collect();
    let chunks = n.div_ceil(CHUNK_SIZE);
    (0..chunks)
        .into_par_iter()
        .map(|c| draw_chunk(seed, c, CHUNK_SIZE.min(n - c * CHUNK_SIZE), &cumulative))
        .reduce(
            || vec![0u64; outcomes.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Simulates `n` draws of a lottery and compares the mean utility with its
/// expectation.
pub fn simulate_outcomes(utility: &Utility, outcomes: &[Outcome], n: u64, seed: u64) -> Result<SimReport> {
    if n == 0 {
        return Err(Error::invalid("n", "sample count must be at least 1"));
    }
    let values = outcomes
        .iter()
        .map(|o| utility.eval(o.wealth))
        .collect::<Result<Vec<_>>>()?;
    let expected = expected_utility(utility, outcomes)?;
    let counts = sample_counts(outcomes, n, seed);

    let nf = n as f64;
    // Anchored like the analytical expectation so a degenerate lottery gives
    // the identical value.
    let anchor = values[values.len() - 1];
    let mean = anchor
        + counts
            .iter()
            .zip(&values)
            .map(|(&c, &u)| c as f64 / nf * (u - anchor))
            .sum::<f64>();
    let standard_error = if n > 1 {
        let ss: f64 = counts
            .iter()
            .zip(&values)
            .map(|(&c, &u)| c as f64 * (u - mean).powi(2))
            .sum();
        (ss / (nf - 1.0) / nf).sqrt()
    } else {
        0.0
    };
    let deviation = mean - expected;
    let z_score = if deviation == 0.0 {
        0.0
    } else {
        deviation / standard_error
    };
    Ok(SimReport {
        n,
        seed,
        rng: RNG_NAME,
        counts,
        mean,
        standard_error,
        expected,
        z_score,
    })
}

/// Monte Carlo check of a sale contract. Breaches occur with the probability
/// matching the contract's investment level.
pub fn simulate_a(params: &ScenarioA, contract: &ContractA, n: u64, seed: u64) -> Result<SimReport> {
    params.check_contract(contract.price, contract.fine, contract.payout)?;
    simulate_outcomes(params.utility(), &contract.outcomes(params), n, seed)
}

/// Monte Carlo check of a consortium contract: own breach, another member's
/// breach and no breach for members; breach or not for stand-alone providers.
pub fn simulate_b(params: &ScenarioB, contract: &ContractB, n: u64, seed: u64) -> Result<SimReport> {
    params.check_contract(contract.fine, contract.payout)?;
    simulate_outcomes(params.utility(), &contract.outcomes(params), n, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{optimal_contract_a, optimal_contract_b};
    use crate::defaults;
    use crate::model::Investment;
    use approx::assert_abs_diff_eq;

    fn uninsured_sale() -> (ScenarioA, ContractA) {
        let p = defaults::sale();
        let c = ContractA::evaluate(&p, 10.0, 0.0, 0.0).unwrap();
        assert_eq!(c.investment, Investment::Low);
        (p, c)
    }

    #[test]
    fn full_insurance_is_degenerate() {
        let p = defaults::sale();
        let c = optimal_contract_a(&p).unwrap();
        let r = simulate_a(&p, &c, 1_000_000, 7).unwrap();
        assert_eq!(r.standard_error, 0.0);
        assert_eq!(r.z_score, 0.0);
        assert_eq!(r.mean, r.expected);

        let p = defaults::consortium();
        let c = optimal_contract_b(&p).unwrap();
        let r = simulate_b(&p, &c, 100_000, 7).unwrap();
        assert_eq!(r.standard_error, 0.0);
        assert_eq!(r.z_score, 0.0);
    }

    #[test]
    fn uninsured_sale_mean() {
        let (p, c) = uninsured_sale();
        let r = simulate_a(&p, &c, 1_000_000, 2024).unwrap();
        assert_abs_diff_eq!(r.expected, 0.5 * 40f64.sqrt() + 0.5 * 60f64.sqrt(), epsilon = 1e-14);
        assert!(r.z_score.abs() <= 4.0, "z = {}", r.z_score);
        assert_eq!(r.counts.iter().sum::<u64>(), 1_000_000);
    }

    #[test]
    fn consortium_means() {
        let p = defaults::consortium();
        let fined = ContractB::evaluate(&p, true, 1.0, 0.0).unwrap();
        let r = simulate_b(&p, &fined, 1_000_000, 11).unwrap();
        assert_eq!(r.counts.len(), 3);
        assert!(r.z_score.abs() <= 4.0, "z = {}", r.z_score);

        let alone = ContractB::evaluate(&p, false, 0.0, 0.0).unwrap();
        let r = simulate_b(&p, &alone, 1_000_000, 12).unwrap();
        assert_abs_diff_eq!(r.expected, 0.05 * 5f64.sqrt() + 0.95 * 10f64.sqrt(), epsilon = 1e-14);
        assert!(r.z_score.abs() <= 4.0, "z = {}", r.z_score);
    }

    #[test]
    fn reproducible() {
        let (p, c) = uninsured_sale();
        let a = simulate_a(&p, &c, 200_001, 99).unwrap();
        let b = simulate_a(&p, &c, 200_001, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rng, RNG_NAME);
        assert_ne!(a.counts, simulate_a(&p, &c, 200_001, 100).unwrap().counts);

        let one = simulate_a(&p, &c, 1, 5).unwrap();
        assert_eq!(one, simulate_a(&p, &c, 1, 5).unwrap());
        assert_eq!(one.standard_error, 0.0);
    }

    #[test]
    fn independent_of_thread_count() {
        let p = defaults::consortium();
        let c = ContractB::evaluate(&p, true, 2.0, 1.0).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate_b(&p, &c, 500_000, 3).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn rejects_empty_sample() {
        let (p, c) = uninsured_sale();
        assert!(matches!(simulate_a(&p, &c, 0, 1), Err(Error::InvalidParameter { name: "n", .. })));
    }

    #[test]
    fn z_scores_are_calibrated() {
        let (p, c) = uninsured_sale();
        let wide = (0..20)
            .filter(|&s| simulate_a(&p, &c, 100_000, s).unwrap().z_score.abs() > 1.96)
            .count();
        assert!(wide <= 5, "{wide} of 20 seeds beyond 1.96");
    }

    #[test]
    fn own_breach_frequency_converges() {
        let p = defaults::consortium();
        let c = ContractB::evaluate(&p, true, 1.0, 0.0).unwrap();
        let n = 1_000_000;
        let r = simulate_b(&p, &c, n, 5).unwrap();
        let p1 = p.p_single();
        assert!((r.frequency(0) - p1).abs() <= 4.0 * (p1 * (1.0 - p1) / n as f64).sqrt());
        let other = p.p_pool() - p1;
        assert!((r.frequency(1) - other).abs() <= 4.0 * (other * (1.0 - other) / n as f64).sqrt());
    }
}
