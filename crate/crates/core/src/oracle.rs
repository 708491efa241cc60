//! Brute-force solver for the raw contract-design programs.
//!
//! The sale program is bilevel: for every candidate `(phi, t)` the firm's
//! investment is re-derived from its best response, candidates violating the
//! firm's participation constraint are discarded, and the provider's expected
//! utility is maximised over the payout axis. Nothing here relies on the
//! analytic structure of the optimum, so agreement with [`crate::closed_form`]
//! is a genuine cross-check.
//!
//! Grids are uniform and always contain both end points (`0`, `V` and `L`).
//! Exact ties are broken toward the lexicographically smallest contract,
//! keyed `(t, phi, L_c)` for the sale and `(s, t, L_c)` for the consortium,
//! so results do not depend on evaluation order or thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ContractA, ContractB, ScenarioA, ScenarioB};

pub const DEFAULT_POINTS: usize = 401;

/// Firm profits down to `-1e-12` count as participating, so float noise in a
/// binding constraint does not exclude the optimum.
pub const PARTICIPATION_SLACK: f64 = 1e-12;

/// Multiplier `C` in the sale agreement bound `C * step * max slope`.
pub const AGREEMENT_FACTOR: f64 = 4.0;

/// Consortium agreement bound; the optimum lies on grid corners.
pub const CORNER_TOLERANCE: f64 = 1e-9;

/// How the payout axis is scanned for each `(phi, t)` candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayoutSearch {
    /// Evaluate every payout grid point.
    Exhaustive,
    /// Bisect on the sign of the forward difference. For fixed `(phi, t, i)`
    /// the objective is a positive combination of a strictly concave `U` of
    /// affine functions of the payout, so its restriction to the grid is
    /// unimodal and bisection returns the same grid argmax as a full scan.
    Unimodal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub n_price: usize,
    pub n_fine: usize,
    pub n_payout: usize,
    pub payout_search: PayoutSearch,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::uniform(DEFAULT_POINTS)
    }
}

impl GridSpec {
    /// `n` points on every axis.
    pub fn uniform(n: usize) -> Self {
        Self {
            n_price: n,
            n_fine: n,
            n_payout: n,
            payout_search: PayoutSearch::Unimodal,
        }
    }

    pub fn with_search(self, payout_search: PayoutSearch) -> Self {
        Self { payout_search, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("n_phi", self.n_price), ("n_t", self.n_fine), ("n_Lc", self.n_payout)] {
            if n < 2 {
                return Err(Error::invalid(name, format!("grid needs at least 2 points per axis, got {n}")));
            }
        }
        Ok(())
    }
}

/// Best grid contract found by enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult<C> {
    pub contract: C,
    pub value: f64,
    pub grid: GridSpec,
    /// Grid points `(phi, t, L_c)` (or `(s, t, L_c)`) satisfying every
    /// constraint.
    pub feasible_points: u64,
}

/// `n` evenly spaced points on `[0, hi]` with both ends exact. A zero-width
/// axis collapses to the single point `0`.
pub fn axis(hi: f64, n: usize) -> Vec<f64> {
    if hi == 0.0 {
        return vec![0.0];
    }
    let last = (n - 1) as f64;
    let mut pts: Vec<f64> = (0..n).map(|i| hi * i as f64 / last).collect();
    pts[n - 1] = hi;
    pts
}

fn step(hi: f64, n: usize) -> f64 {
    hi / (n - 1) as f64
}

/// Largest grid spacing over the three sale axes.
pub fn grid_step_a(params: &ScenarioA, grid: &GridSpec) -> f64 {
    step(params.firm_value(), grid.n_price)
        .max(step(params.liability(), grid.n_fine))
        .max(step(params.liability(), grid.n_payout))
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    value: f64,
    /// Grid indices in tie-break order.
    idx: [usize; 3],
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        self.value > other.value || (self.value == other.value && self.idx < other.idx)
    }
}

fn keep_best(best: Option<Candidate>, c: Option<Candidate>) -> Option<Candidate> {
    match (best, c) {
        (Some(b), Some(c)) => Some(if c.beats(&b) { c } else { b }),
        (b, None) => b,
        (None, c) => c,
    }
}

fn argmax_payout(n: usize, search: PayoutSearch, mut f: impl FnMut(usize) -> Result<f64>) -> Result<(usize, f64)> {
    match search {
        PayoutSearch::Exhaustive => {
            let mut best = (0, f(0)?);
            for l in 1..n {
                let v = f(l)?;
                if v > best.1 {
                    best = (l, v);
                }
            }
            Ok(best)
        }
        PayoutSearch::Unimodal => {
            let (mut lo, mut hi) = (0, n - 1);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if f(mid)? < f(mid + 1)? {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            Ok((lo, f(lo)?))
        }
    }
}

/// Solves the sale program by enumerating the `(phi, t, L_c)` grid.
pub fn grid_solve_a(params: &ScenarioA, grid: &GridSpec) -> Result<OracleResult<ContractA>> {
    grid.validate()?;
    // Lowest wealth on the grid: phi = t = L_c = 0 and a breach.
    params.utility().eval(params.own_value() - params.liability())?;

    let prices = axis(params.firm_value(), grid.n_price);
    let fines = axis(params.liability(), grid.n_fine);
    let payouts = axis(params.liability(), grid.n_payout);

    let rows = (0..prices.len())
        .into_par_iter()
        .map(|i| {
            let price = prices[i];
            let mut best = None;
            let mut feasible = 0u64;
            for (j, &fine) in fines.iter().enumerate() {
                let inv = params.firm_best_response(price, fine);
                if params.firm_profit(price, fine, inv) < -PARTICIPATION_SLACK {
                    continue;
                }
                feasible += payouts.len() as u64;
                let (l, value) = argmax_payout(payouts.len(), grid.payout_search, |l| {
                    params.provider_utility(price, fine, payouts[l], inv)
                })?;
                best = keep_best(best, Some(Candidate { value, idx: [j, i, l] }));
            }
            Ok((best, feasible))
        })
        .collect::<Result<Vec<_>>>()?;

    let (best, feasible_points) = rows
        .into_iter()
        .fold((None, 0u64), |(best, n), (row, m)| (keep_best(best, row), n + m));
    let best = best.ok_or(Error::EmptyFeasibleSet)?;
    let [j, i, l] = best.idx;
    let contract = ContractA::evaluate(params, prices[i], fines[j], payouts[l])?;
    Ok(OracleResult {
        value: contract.provider_value,
        contract,
        grid: *grid,
        feasible_points,
    })
}

/// Enumerates the `(t, L_c)` grid for a fixed participation decision.
pub fn grid_solve_b_slice(params: &ScenarioB, grid: &GridSpec, participate: bool) -> Result<OracleResult<ContractB>> {
    grid.validate()?;
    let lowest = if participate {
        // Own breach with the largest fine and no cover.
        params.v_pool() * params.own_value() - params.size() as f64 * params.liability()
    } else {
        params.own_value() - params.liability()
    };
    params.utility().eval(lowest)?;

    let fines = axis(params.liability(), grid.n_fine);
    let payouts = axis(params.liability(), grid.n_payout);
    let s = usize::from(participate);

    let rows = (0..fines.len())
        .into_par_iter()
        .map(|j| {
            let mut best = None;
            for (l, &payout) in payouts.iter().enumerate() {
                let value = params.provider_utility(fines[j], payout, participate)?;
                best = keep_best(best, Some(Candidate { value, idx: [s, j, l] }));
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;

    let best = rows.into_iter().fold(None, keep_best).ok_or(Error::EmptyFeasibleSet)?;
    let [_, j, l] = best.idx;
    let contract = ContractB::evaluate(params, participate, fines[j], payouts[l])?;
    Ok(OracleResult {
        value: contract.provider_value,
        contract,
        grid: *grid,
        feasible_points: (fines.len() * payouts.len()) as u64,
    })
}

/// Solves the consortium program over `s in {0, 1}` and the `(t, L_c)` grid.
pub fn grid_solve_b(params: &ScenarioB, grid: &GridSpec) -> Result<OracleResult<ContractB>> {
    let stay = grid_solve_b_slice(params, grid, false)?;
    let join = grid_solve_b_slice(params, grid, true)?;
    let feasible_points = stay.feasible_points + join.feasible_points;
    // Ties keep s = 0, the lexicographically smaller contract.
    let best = if join.value > stay.value { join } else { stay };
    Ok(OracleResult { feasible_points, ..best })
}

/// Outcome of comparing a claimed optimum with the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Agreement {
    pub oracle_value: f64,
    pub claimed_value: f64,
    pub difference: f64,
    pub tolerance: f64,
}

impl Agreement {
    fn new(oracle_value: f64, claimed_value: f64, tolerance: f64) -> Self {
        Self {
            oracle_value,
            claimed_value,
            difference: claimed_value - oracle_value,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.difference.abs() <= self.tolerance
    }
}

/// Discretisation bound for the sale program:
/// `C * step * U'(ce - C * step)`, with `ce` the certainty equivalent of the
/// oracle's value and `step` the largest grid spacing. The slope is taken at
/// the low end of the window because `U'` is decreasing.
pub fn agreement_tolerance_a(params: &ScenarioA, grid: &GridSpec, oracle_value: f64) -> Result<f64> {
    let h = grid_step_a(params, grid);
    let u = params.utility();
    let ce = u.inverse(oracle_value)?;
    let low = ce - AGREEMENT_FACTOR * h;
    if !u.in_domain(low) {
        // The window reaches the edge of the domain, where U' is unbounded.
        return Ok(f64::INFINITY);
    }
    Ok(AGREEMENT_FACTOR * h * u.slope(low)?)
}

/// Runs the sale oracle and compares its value with `claimed`.
pub fn check_agreement_a(
    params: &ScenarioA,
    claimed: &ContractA,
    grid: &GridSpec,
) -> Result<(OracleResult<ContractA>, Agreement)> {
    let oracle = grid_solve_a(params, grid)?;
    let tolerance = agreement_tolerance_a(params, grid, oracle.value)?;
    Ok((oracle, Agreement::new(oracle.value, claimed.provider_value, tolerance)))
}

/// Runs the consortium oracle and compares its value with `claimed`.
pub fn check_agreement_b(
    params: &ScenarioB,
    claimed: &ContractB,
    grid: &GridSpec,
) -> Result<(OracleResult<ContractB>, Agreement)> {
    let oracle = grid_solve_b(params, grid)?;
    Ok((oracle, Agreement::new(oracle.value, claimed.provider_value, CORNER_TOLERANCE)))
}

/// Golden-section maximiser of a unimodal function on `[lo, hi]`.
pub fn golden_section_max(lo: f64, hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    golden_section_max_by(lo, hi, tol, |a, b| f(a) < f(b))
}

/// Golden-section search driven by a comparator: `rises(a, b)` is true when
/// the objective is larger at `b` than at `a` (`a < b`). Lets callers compare
/// through accurately computed differences instead of rounded values.
pub fn golden_section_max_by(mut lo: f64, mut hi: f64, tol: f64, rises: impl Fn(f64, f64) -> bool) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    while hi - lo > tol {
        if rises(a, b) {
            lo = a;
            a = b;
            b = lo + r * (hi - lo);
        } else {
            hi = b;
            b = a;
            a = hi - r * (hi - lo);
        }
    }
    0.5 * (lo + hi)
}
