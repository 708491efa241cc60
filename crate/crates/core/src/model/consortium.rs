//! Consortium-size curves: breach probability `p(k)` and value multiplier `v(k)`.
//!
//! Both curves are restricted to concrete families (plus an explicit table
//! for testing and calibration). The structural assumptions the contract
//! results depend on are checked whenever a value is requested, up to the
//! requested `k`:
//!
//! * `p`: `0 < p(k) < 1`, strictly increasing, `p(k) < k p(1)` for `k >= 2`,
//!   and discrete concavity.
//! * `v`: `v(1) = 1`, `v(k) > 0`, strictly increasing, discrete concavity,
//!   and `v(k) <= k`.

use crate::error::{Error, Result};

/// Slack for the discrete concavity comparisons; differences of closed-form
/// curves carry a few ulps of noise.
const CONCAVITY_SLACK: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub enum BreachFamily {
    /// `p(k) = 1 - (1 - p1)^k`: independent breaches at each member.
    Compound,
    /// `p(k) = cap (1 - (1 - p1/cap)^k)` with `p1 < cap <= 1`.
    Saturating { cap: f64 },
    /// Explicit values `p(1), p(2), ...`.
    Table(Vec<f64>),
}

/// Probability that some member of a `k`-provider consortium is breached.
#[derive(Debug, Clone, PartialEq)]
pub struct BreachProb {
    family: BreachFamily,
    p1: f64,
}

impl BreachProb {
    pub fn compound(p1: f64) -> Result<Self> {
        check_unit_interval("p1", p1)?;
        Ok(Self {
            family: BreachFamily::Compound,
            p1,
        })
    }

    pub fn saturating(p1: f64, cap: f64) -> Result<Self> {
        check_unit_interval("p1", p1)?;
        if !(cap > p1 && cap <= 1.0) {
            return Err(Error::invalid("p_max", format!("cap must satisfy p1 < p_max <= 1, got p1 = {p1}, p_max = {cap}")));
        }
        Ok(Self {
            family: BreachFamily::Saturating { cap },
            p1,
        })
    }

    /// Tabulated curve; entry `j` is `p(j + 1)`. Invariants are checked on
    /// use, so an inadmissible table is accepted here and rejected by
    /// [`BreachProb::prob`] / [`BreachProb::validate_up_to`].
    pub fn table(values: Vec<f64>) -> Result<Self> {
        let p1 = *values
            .first()
            .ok_or_else(|| Error::invalid("values", "breach probability table is empty"))?;
        Ok(Self {
            family: BreachFamily::Table(values),
            p1,
        })
    }

    pub fn family(&self) -> &BreachFamily {
        &self.family
    }

    /// Single-provider breach probability `p(1)`.
    pub fn p1(&self) -> f64 {
        self.p1
    }

    fn raw(&self, k: usize) -> Result<f64> {
        let kf = k as f64;
        Ok(match &self.family {
            BreachFamily::Compound | BreachFamily::Saturating { .. } if k == 1 => self.p1,
            // 1 - (1 - p1)^k without cancellation
            BreachFamily::Compound => -(kf * (-self.p1).ln_1p()).exp_m1(),
            BreachFamily::Saturating { cap } => cap * -(kf * (-self.p1 / cap).ln_1p()).exp_m1(),
            BreachFamily::Table(values) => *values.get(k - 1).ok_or_else(|| {
                Error::invalid("k", format!("breach probability table covers k <= {}, requested k = {k}", values.len()))
            })?,
        })
    }

    /// Checks every structural assumption for `1 <= j <= k`.
    pub fn validate_up_to(&self, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::invalid("k", "consortium size must be at least 1"));
        }
        let values = (1..=k).map(|j| self.raw(j)).collect::<Result<Vec<_>>>()?;
        let fail = |inequality, j, detail: String| Error::Invariant {
            function: "breach probability p(k)",
            inequality,
            k: j,
            detail,
        };
        for (idx, &p) in values.iter().enumerate() {
            let j = idx + 1;
            if !(p > 0.0 && p < 1.0) {
                return Err(fail("0 < p(k) < 1", j, format!("p({j}) = {p}")));
            }
            if j >= 2 {
                let prev = values[idx - 1];
                if p <= prev {
                    return Err(fail("p(k) > p(k-1)", j, format!("p({j}) = {p}, p({}) = {prev}", j - 1)));
                }
                let linear = j as f64 * self.p1;
                if p >= linear {
                    return Err(fail("p(k) < k*p(1)", j, format!("p({j}) = {p}, {j}*p(1) = {linear}")));
                }
            }
            if j >= 3 {
                let ahead = p - values[idx - 1];
                let behind = values[idx - 1] - values[idx - 2];
                if ahead > behind + CONCAVITY_SLACK {
                    return Err(fail(
                        "p(k+1) - p(k) <= p(k) - p(k-1)",
                        j - 1,
                        format!("forward increment {ahead} exceeds backward increment {behind}"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `p(k)`, after validating the curve up to `k`.
    pub fn prob(&self, k: usize) -> Result<f64> {
        self.validate_up_to(k)?;
        self.raw(k)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScaleFamily {
    /// `v(k) = k^b`, `0 < b < 1`.
    Power { exponent: f64 },
    /// `v(k) = 1 + c ln k`, `c > 0`.
    Log { coef: f64 },
    /// Explicit values `v(1), v(2), ...`.
    Table(Vec<f64>),
}

/// Value multiplier of pooled data: a `k`-member consortium's data is worth
/// `v(k) W` to each member.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueScale {
    family: ScaleFamily,
}

impl ValueScale {
    pub fn power(exponent: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent < 1.0) {
            return Err(Error::invalid("beta", format!("value exponent must lie in (0, 1), got {exponent}")));
        }
        Ok(Self {
            family: ScaleFamily::Power { exponent },
        })
    }

    pub fn log(coef: f64) -> Result<Self> {
        if !(coef.is_finite() && coef > 0.0) {
            return Err(Error::invalid("c", format!("log coefficient must be positive, got {coef}")));
        }
        Ok(Self {
            family: ScaleFamily::Log { coef },
        })
    }

    pub fn table(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("values", "value scale table is empty"));
        }
        Ok(Self {
            family: ScaleFamily::Table(values),
        })
    }

    pub fn family(&self) -> &ScaleFamily {
        &self.family
    }

    fn raw(&self, k: usize) -> Result<f64> {
        let kf = k as f64;
        Ok(match &self.family {
            ScaleFamily::Power { exponent } => kf.powf(*exponent),
            ScaleFamily::Log { coef } => coef.mul_add(kf.ln(), 1.0),
            ScaleFamily::Table(values) => *values.get(k - 1).ok_or_else(|| {
                Error::invalid("k", format!("value scale table covers k <= {}, requested k = {k}", values.len()))
            })?,
        })
    }

    pub fn validate_up_to(&self, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::invalid("k", "consortium size must be at least 1"));
        }
        let values = (1..=k).map(|j| self.raw(j)).collect::<Result<Vec<_>>>()?;
        let fail = |inequality, j, detail: String| Error::Invariant {
            function: "value scale v(k)",
            inequality,
            k: j,
            detail,
        };
        if values[0] != 1.0 {
            return Err(fail("v(1) = 1", 1, format!("v(1) = {}", values[0])));
        }
        for (idx, &v) in values.iter().enumerate().skip(1) {
            let j = idx + 1;
            let prev = values[idx - 1];
            if v.is_nan() || v <= 0.0 {
                return Err(fail("v(k) > 0", j, format!("v({j}) = {v}")));
            }
            if v <= prev {
                return Err(fail("v(k) > v(k-1)", j, format!("v({j}) = {v}, v({}) = {prev}", j - 1)));
            }
            if v > j as f64 {
                return Err(fail("v(k) <= k", j, format!("v({j}) = {v}")));
            }
            if j >= 3 {
                let ahead = v - prev;
                let behind = prev - values[idx - 2];
                if ahead > behind + CONCAVITY_SLACK {
                    return Err(fail(
                        "v(k+1) - v(k) <= v(k) - v(k-1)",
                        j - 1,
                        format!("forward increment {ahead} exceeds backward increment {behind}"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `v(k)`, after validating the curve up to `k`.
    pub fn scale(&self, k: usize) -> Result<f64> {
        self.validate_up_to(k)?;
        self.raw(k)
    }
}

fn check_unit_interval(name: &'static str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("probability must lie in (0, 1), got {p}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn compound_values() {
        let p = BreachProb::compound(0.05).unwrap();
        assert_eq!(p.prob(1).unwrap(), 0.05);
        let p4 = p.prob(4).unwrap();
        assert_abs_diff_eq!(p4, 0.18549375, epsilon = 1e-15);
        assert!(p4 < 4.0 * 0.05);
    }

    #[test]
    fn saturating_values() {
        let p = BreachProb::saturating(0.05, 0.5).unwrap();
        assert_abs_diff_eq!(p.prob(1).unwrap(), 0.05, epsilon = 1e-16);
        // 0.5 * (1 - 0.9^2) = 0.095
        assert_abs_diff_eq!(p.prob(2).unwrap(), 0.095, epsilon = 1e-15);
        p.validate_up_to(64).unwrap();
        assert!(p.prob(64).unwrap() < 0.5);
        assert!(BreachProb::saturating(0.05, 0.04).is_err());
    }

    #[test]
    fn value_scale_values() {
        let v = ValueScale::power(0.5).unwrap();
        assert_eq!(v.scale(1).unwrap(), 1.0);
        assert_eq!(v.scale(4).unwrap(), 2.0);
        let l = ValueScale::log(0.01).unwrap();
        assert_abs_diff_eq!(l.scale(2).unwrap(), 1.0069314718055995, epsilon = 1e-12);
    }

    #[test]
    fn defaults_hold_up_to_64() {
        let curves = [
            BreachProb::compound(0.05).unwrap(),
            BreachProb::compound(0.3).unwrap(),
            BreachProb::saturating(0.02, 0.6).unwrap(),
        ];
        for p in &curves {
            p.validate_up_to(64).unwrap();
            for k in 2..=64 {
                assert!(p.prob(k).unwrap() < k as f64 * p.p1());
            }
        }
        for v in [ValueScale::power(0.5).unwrap(), ValueScale::power(0.1).unwrap(), ValueScale::log(0.01).unwrap()] {
            v.validate_up_to(64).unwrap();
            for k in 1..=64 {
                assert!(v.scale(k).unwrap() <= k as f64);
            }
        }
    }

    #[test]
    fn linear_breach_table_is_rejected() {
        let p1 = 0.05;
        let table = BreachProb::table((1..=8).map(|k| k as f64 * p1).collect()).unwrap();
        assert_eq!(table.prob(1).unwrap(), p1);
        let err = table.prob(4).unwrap_err();
        match err {
            Error::Invariant { inequality, k, .. } => {
                assert_eq!(inequality, "p(k) < k*p(1)");
                assert_eq!(k, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn convex_breach_table_is_rejected() {
        let table = BreachProb::table(vec![0.05, 0.06, 0.08]).unwrap();
        let err = table.validate_up_to(3).unwrap_err();
        assert!(matches!(err, Error::Invariant { inequality: "p(k+1) - p(k) <= p(k) - p(k-1)", k: 2, .. }));
        assert!(table.validate_up_to(2).is_ok());
    }

    #[test]
    fn scale_tables_are_checked() {
        let bad_origin = ValueScale::table(vec![1.5, 2.0]).unwrap();
        assert!(matches!(bad_origin.scale(1), Err(Error::Invariant { inequality: "v(1) = 1", .. })));
        let convex = ValueScale::table(vec![1.0, 1.1, 1.3]).unwrap();
        assert!(matches!(convex.scale(3), Err(Error::Invariant { k: 2, .. })));
        let flat = ValueScale::table(vec![1.0, 1.0]).unwrap();
        assert!(matches!(flat.scale(2), Err(Error::Invariant { inequality: "v(k) > v(k-1)", .. })));
        assert!(ValueScale::table(vec![1.0]).unwrap().scale(2).is_err());
    }

    #[test]
    fn probability_bounds() {
        assert!(BreachProb::compound(1.0).is_err());
        assert!(BreachProb::compound(0.0).is_err());
        let table = BreachProb::table(vec![0.5, 0.9, 1.0]).unwrap();
        assert!(matches!(table.prob(3), Err(Error::Invariant { inequality: "0 < p(k) < 1", k: 3, .. })));
    }
}
