//! Parameter sweeps and regime thresholds.
//!
//! For the sale, the optimal contract induces high investment up to
//! `psi* = min((gamma - alpha) L, (gamma - alpha) V / gamma)` and low
//! investment beyond it. For the consortium, joining pays while the
//! participation margin `(v(k) - 1) W - (p(k) - p(1)) L` is non-negative.

use rayon::prelude::*;

use crate::closed_form::{optimal_contract_a, optimal_contract_b, participates, ThresholdReport};
use crate::error::{Error, Result};
use crate::model::{ContractA, Investment, ScenarioA, ScenarioB};

/// Investment-cost thresholds of the sale; the `psi` of `params` is ignored.
pub fn investment_threshold(params: &ScenarioA) -> ThresholdReport {
    ThresholdReport::new(params)
}

/// `steps` evenly spaced values on `[start, stop]` with both ends exact.
pub fn linspace(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let last = (steps - 1) as f64;
            let mut v: Vec<f64> = (0..steps)
                .map(|i| start + (stop - start) * i as f64 / last)
                .collect();
            v[steps - 1] = stop;
            v
        }
    }
}

fn wrap(axis: &'static str, at: f64) -> impl FnOnce(Error) -> Error {
    move |e| Error::SweepPoint {
        axis,
        at,
        source: Box::new(e),
    }
}

fn check_axis<T: PartialOrd + Copy>(name: &'static str, values: &[T], valid: impl Fn(T) -> bool) -> Result<()> {
    if values.is_empty() {
        return Err(Error::invalid(name, "empty sweep"));
    }
    if !values.iter().all(|&x| valid(x)) {
        return Err(Error::invalid(name, "sweep value out of range"));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(name, "sweep values must be strictly increasing"));
    }
    Ok(())
}

/// One point of an investment-cost sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiPoint {
    pub psi: f64,
    pub contract: ContractA,
    pub certainty_equivalent: f64,
}

/// Optimal sale contracts along increasing investment costs.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiSweep {
    pub points: Vec<PsiPoint>,
}

impl PsiSweep {
    pub const AXIS: &'static str = "psi";

    pub fn axis_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.psi).collect()
    }

    pub fn regimes(&self) -> Vec<Investment> {
        self.points.iter().map(|p| p.contract.investment).collect()
    }

    /// Index of the first low-investment point, if any.
    pub fn switch_index(&self) -> Option<usize> {
        self.points
            .iter()
            .position(|p| p.contract.investment == Investment::Low)
    }

    /// True when the regimes are high investment followed only by low
    /// investment.
    pub fn is_step(&self) -> bool {
        let r = self.regimes();
        r.windows(2).all(|w| w[0] >= w[1])
    }
}

/// Optimal sale contract at each investment cost in `psi_values`.
pub fn sweep_psi(params: &ScenarioA, psi_values: &[f64]) -> Result<PsiSweep> {
    check_axis(PsiSweep::AXIS, psi_values, |x: f64| x > 0.0 && x.is_finite())?;
    let points = psi_values
        .par_iter()
        .map(|&psi| {
            let at = params.with_invest_cost(psi)?;
            let contract = optimal_contract_a(&at)?;
            let certainty_equivalent = contract.certainty_equivalent(&at)?;
            Ok(PsiPoint {
                psi,
                contract,
                certainty_equivalent,
            })
        })
        .enumerate()
        .map(|(i, r): (usize, Result<PsiPoint>)| r.map_err(wrap(PsiSweep::AXIS, psi_values[i])))
        .collect::<Result<Vec<_>>>()?;
    Ok(PsiSweep { points })
}

/// Sign scan of the participation margin over consortium sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticipationReport {
    /// `(k, margin)` for `k = 2..=k_max`.
    pub margins: Vec<(usize, f64)>,
    /// Sizes at which joining is optimal.
    pub participating: Vec<usize>,
    /// Sizes whose decision differs from the size just below.
    pub changes: Vec<usize>,
    /// Largest participating size, reported only when the decision changes
    /// at most once.
    pub k_star: Option<usize>,
}

impl ParticipationReport {
    /// At most one change of decision over the scanned sizes.
    pub fn is_monotone(&self) -> bool {
        self.changes.len() <= 1
    }
}

/// Scans the participation margin for `k = 2..=k_max`.
pub fn participation_threshold(params: &ScenarioB, k_max: usize) -> Result<ParticipationReport> {
    if k_max < 2 {
        return Err(Error::invalid("k_max", format!("must be at least 2, got {k_max}")));
    }
    let mut margins = Vec::with_capacity(k_max - 1);
    let mut decisions = Vec::with_capacity(k_max - 1);
    for k in 2..=k_max {
        let at = params.with_size(k).map_err(wrap("k", k as f64))?;
        margins.push((k, at.participation_margin()));
        decisions.push((k, participates(&at)));
    }
    let participating: Vec<usize> = decisions.iter().filter(|d| d.1).map(|d| d.0).collect();
    let changes: Vec<usize> = decisions
        .windows(2)
        .filter(|w| w[0].1 != w[1].1)
        .map(|w| w[1].0)
        .collect();
    let k_star = if changes.len() <= 1 {
        participating.last().copied()
    } else {
        None
    };
    Ok(ParticipationReport {
        margins,
        participating,
        changes,
        k_star,
    })
}

/// One point of a consortium-size sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizePoint {
    pub k: usize,
    /// Optimal stand-alone expected utility `H^1`.
    pub alone: f64,
    /// Optimal member expected utility `H^k`.
    pub pooled: f64,
    pub participate: bool,
    pub margin: f64,
}

/// Optimal consortium decisions along increasing sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeSweep {
    pub points: Vec<SizePoint>,
}

impl SizeSweep {
    pub const AXIS: &'static str = "k";

    pub fn axis_values(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.k).collect()
    }

    pub fn regimes(&self) -> Vec<bool> {
        self.points.iter().map(|p| p.participate).collect()
    }

    /// Number of times `H^k - H^1` changes sign along the sweep.
    pub fn crossings(&self) -> usize {
        self.points
            .windows(2)
            .filter(|w| (w[0].pooled >= w[0].alone) != (w[1].pooled >= w[1].alone))
            .count()
    }
}

/// Fully insured stand-alone and member utilities at each size in `k_values`.
pub fn sweep_k(params: &ScenarioB, k_values: &[usize]) -> Result<SizeSweep> {
    check_axis(SizeSweep::AXIS, k_values, |k: usize| k >= 2)?;
    let points = k_values
        .par_iter()
        .map(|&k| {
            let at = params.with_size(k)?;
            let contract = optimal_contract_b(&at)?;
            let payout = contract.payout;
            Ok(SizePoint {
                k,
                alone: at.utility_alone(payout)?,
                pooled: at.utility_pooled(contract.fine, payout)?,
                participate: contract.participate,
                margin: at.participation_margin(),
            })
        })
        .enumerate()
        .map(|(i, r): (usize, Result<SizePoint>)| r.map_err(wrap(SizeSweep::AXIS, k_values[i] as f64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SizeSweep { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::Binding;
    use crate::defaults;
    use crate::model::{BreachProb, Utility, ValueScale};
    use approx::assert_abs_diff_eq;

    #[test]
    fn threshold_examples() {
        let t = investment_threshold(&defaults::sale());
        assert_abs_diff_eq!(t.liability_threshold, 8.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.value_threshold, 8.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.switch_point(), 8.0, epsilon = 1e-12);

        let short = ScenarioA::new(10.0, 50.0, 2.0, 1.0, 0.1, 0.5, Utility::power(0.5).unwrap()).unwrap();
        let t = investment_threshold(&short);
        assert_abs_diff_eq!(t.switch_point(), 0.8, epsilon = 1e-12);
        assert_eq!(t.binding, Binding::Liability);

        let useless = ScenarioA::new(10.0, 50.0, 20.0, 1.0, 0.5 - 1e-12, 0.5, Utility::power(0.5).unwrap()).unwrap();
        assert!(investment_threshold(&useless).switch_point() < 1e-10);
    }

    #[test]
    fn linspace_has_exact_ends() {
        let v = linspace(1.0, 12.0, 12);
        assert_eq!(v, (1..=12).map(f64::from).collect::<Vec<_>>());
        assert_eq!(linspace(0.3, 0.7, 1), vec![0.3]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
        assert_eq!(*linspace(0.1, 0.7, 7).last().unwrap(), 0.7);
    }

    #[test]
    fn psi_sweep_flips_after_threshold() {
        let s = sweep_psi(&defaults::sale(), &linspace(1.0, 12.0, 12)).unwrap();
        let regimes: Vec<u8> = s.regimes().iter().map(|i| i.index()).collect();
        assert_eq!(regimes, [1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0]);
        assert_eq!(s.switch_index(), Some(8));
        assert!(s.is_step());
    }

    #[test]
    fn psi_sweep_shape() {
        let p = defaults::sale();
        let psis: Vec<f64> = (1..=120).map(|i| 0.1 * i as f64).collect();
        let s = sweep_psi(&p, &psis).unwrap();
        let flip = s.switch_index().unwrap();
        assert!(s.points[flip - 1].psi <= 8.0 && s.points[flip].psi > 8.0);
        for w in s.points[..flip].windows(2) {
            let slope = (w[1].certainty_equivalent - w[0].certainty_equivalent) / (w[1].psi - w[0].psi);
            assert_abs_diff_eq!(slope, -1.0, epsilon = 1e-9);
        }
        let low = &s.points[flip..];
        for pt in low {
            assert_eq!(pt.contract.provider_value.to_bits(), low[0].contract.provider_value.to_bits());
            assert_eq!(pt.certainty_equivalent, low[0].certainty_equivalent);
        }
        assert_abs_diff_eq!(low[0].contract.provider_value, 50f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn psi_sweep_validates_axis() {
        let p = defaults::sale();
        assert!(matches!(sweep_psi(&p, &[]), Err(Error::InvalidParameter { reason, .. }) if reason == "empty sweep"));
        assert!(sweep_psi(&p, &[2.0, 1.0]).is_err());
        assert!(sweep_psi(&p, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn psi_sweep_names_failing_point() {
        // Insured wealth is W + V - psi - alpha L = 3.99 on the high branch
        // but W + V - gamma L = -4 on the low one.
        let p = ScenarioA::new(1.0, 5.0, 20.0, 1.0, 0.1, 0.5, Utility::power(0.5).unwrap()).unwrap();
        let err = sweep_psi(&p, &[0.01, 5.0]).unwrap_err();
        assert!(err.is_domain());
        assert!(matches!(err, Error::SweepPoint { axis: "psi", .. }));
    }

    #[test]
    fn participation_examples() {
        let r = participation_threshold(&defaults::consortium(), 16).unwrap();
        let m4 = r.margins.iter().find(|m| m.0 == 4).unwrap().1;
        assert_abs_diff_eq!(m4, 10.0 - (0.18549375 - 0.05) * 5.0, epsilon = 1e-12);
        assert!(r.participating.contains(&4));

        let none = ScenarioB::new(
            10.0,
            100.0,
            2,
            BreachProb::compound(0.05).unwrap(),
            ValueScale::log(0.01).unwrap(),
            Utility::log_shifted(201.0).unwrap(),
        )
        .unwrap();
        let r = participation_threshold(&none, 64).unwrap();
        assert!(r.participating.is_empty());
        assert_eq!(r.k_star, None);
        assert!(r.is_monotone());
        assert!(participation_threshold(&none, 1).is_err());
    }

    #[test]
    fn shipped_threshold_default() {
        let p = defaults::consortium_threshold();
        let r = participation_threshold(&p, 64).unwrap();
        assert_eq!(r.changes, vec![5]);
        assert_eq!(r.k_star, Some(4));
        for &(k, _) in &r.margins {
            let s = optimal_contract_b(&p.with_size(k).unwrap()).unwrap().participate;
            assert_eq!(s, r.participating.contains(&k), "k = {k}");
        }
    }

    #[test]
    fn non_monotone_margin_is_reported() {
        // Margins -0.1, +0.2, -0.05.
        let p = ScenarioB::new(
            10.0,
            10.0,
            2,
            BreachProb::table(vec![0.1, 0.19, 0.22, 0.25]).unwrap(),
            ValueScale::table(vec![1.0, 1.08, 1.14, 1.145]).unwrap(),
            Utility::exponential(0.01).unwrap(),
        )
        .unwrap();
        let r = participation_threshold(&p, 4).unwrap();
        let signs: Vec<bool> = r.margins.iter().map(|m| m.1 >= 0.0).collect();
        assert_eq!(signs, [false, true, false]);
        assert_eq!(r.changes, vec![3, 4]);
        assert!(!r.is_monotone());
        assert_eq!(r.k_star, None);
    }

    #[test]
    fn size_sweep_columns() {
        let p = defaults::consortium();
        let ks: Vec<usize> = (2..=10).collect();
        let s = sweep_k(&p, &ks).unwrap();
        assert_eq!(s.axis_values(), ks);
        for pt in &s.points {
            assert_eq!(pt.alone, 9.75f64.sqrt());
            let at = p.with_size(pt.k).unwrap();
            let w = at.v_pool() * 10.0 - at.p_pool() * 5.0;
            assert_abs_diff_eq!(pt.pooled, w.sqrt(), epsilon = 1e-14);
            assert_eq!(pt.participate, pt.pooled >= pt.alone);
        }
        assert!(sweep_k(&p, &[3, 2]).is_err());
        assert!(sweep_k(&p, &[1, 2]).is_err());
    }

    #[test]
    fn size_sweep_single_crossing_for_default() {
        let ks: Vec<usize> = (2..=64).collect();
        let s = sweep_k(&defaults::consortium_threshold(), &ks).unwrap();
        assert_eq!(s.crossings(), 1);
        assert_eq!(s.regimes().iter().filter(|&&x| x).count(), 3);
    }
}
