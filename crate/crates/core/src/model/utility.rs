//! Risk-averse utility functions over monetary wealth.
//!
//! Three concrete families are provided, each strictly increasing and
//! strictly concave on its domain:
//!
//! | family        | U(x)            | domain   |
//! |---------------|-----------------|----------|
//! | exponential   | 1 - exp(-a x)   | all x    |
//! | power         | x^b, 0 < b < 1  | x >= 0   |
//! | log-shifted   | ln(x + c)       | x > -c   |

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UtilityFamily {
    Exponential,
    Power,
    LogShifted,
}

impl UtilityFamily {
    pub fn name(self) -> &'static str {
        match self {
            UtilityFamily::Exponential => "exponential",
            UtilityFamily::Power => "power",
            UtilityFamily::LogShifted => "log-shifted",
        }
    }
}

impl fmt::Display for UtilityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated utility function `U`.
///
/// Construct through [`Utility::exponential`], [`Utility::power`] or
/// [`Utility::log_shifted`]; the parameter is checked once and the value is
/// immutable afterwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Utility {
    family: UtilityFamily,
    param: f64,
}

impl Utility {
    /// CARA utility `1 - exp(-a x)` with absolute risk aversion `a > 0`.
    pub fn exponential(risk_aversion: f64) -> Result<Self> {
        if !(risk_aversion.is_finite() && risk_aversion > 0.0) {
            return Err(Error::invalid("a", format!("risk aversion must be positive and finite, got {risk_aversion}")));
        }
        Ok(Self {
            family: UtilityFamily::Exponential,
            param: risk_aversion,
        })
    }

    /// Power utility `x^b` with `b` in (0, 1).
    pub fn power(exponent: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent < 1.0) {
            return Err(Error::invalid("beta", format!("power exponent must lie in (0, 1), got {exponent}")));
        }
        Ok(Self {
            family: UtilityFamily::Power,
            param: exponent,
        })
    }

    /// Shifted log utility `ln(x + c)` with `c > 0`.
    pub fn log_shifted(shift: f64) -> Result<Self> {
        if !(shift.is_finite() && shift > 0.0) {
            return Err(Error::invalid("c", format!("log shift must be positive and finite, got {shift}")));
        }
        Ok(Self {
            family: UtilityFamily::LogShifted,
            param: shift,
        })
    }

    pub fn family(&self) -> UtilityFamily {
        self.family
    }

    /// The single shape parameter (`a`, `b` or `c` depending on the family).
    pub fn param(&self) -> f64 {
        self.param
    }

    /// Lower end of the valid wealth domain, if any. The bound itself is
    /// admissible for the power family and excluded for the log family.
    pub fn domain_lower_bound(&self) -> Option<f64> {
        match self.family {
            UtilityFamily::Exponential => None,
            UtilityFamily::Power => Some(0.0),
            UtilityFamily::LogShifted => Some(-self.param),
        }
    }

    pub fn in_domain(&self, wealth: f64) -> bool {
        if wealth.is_nan() {
            return false;
        }
        match self.family {
            UtilityFamily::Exponential => true,
            UtilityFamily::Power => wealth >= 0.0,
            UtilityFamily::LogShifted => wealth > -self.param,
        }
    }

    fn check(&self, wealth: f64) -> Result<()> {
        if self.in_domain(wealth) {
            return Ok(());
        }
        let requirement = match self.family {
            UtilityFamily::Exponential => "a real number".to_string(),
            UtilityFamily::Power => "x >= 0".to_string(),
            UtilityFamily::LogShifted => format!("x > {}", -self.param),
        };
        Err(Error::Domain {
            family: self.family.name(),
            wealth,
            requirement,
        })
    }

    /// Evaluates `U(wealth)`.
    pub fn eval(&self, wealth: f64) -> Result<f64> {
        self.check(wealth)?;
        Ok(match self.family {
            UtilityFamily::Exponential => -(-self.param * wealth).exp_m1(),
            UtilityFamily::Power => wealth.powf(self.param),
            UtilityFamily::LogShifted => (wealth + self.param).ln(),
        })
    }

    /// Analytic `U'(wealth)`.
    pub fn slope(&self, wealth: f64) -> Result<f64> {
        self.check(wealth)?;
        Ok(match self.family {
            UtilityFamily::Exponential => self.param * (-self.param * wealth).exp(),
            UtilityFamily::Power => self.param * wealth.powf(self.param - 1.0),
            UtilityFamily::LogShifted => 1.0 / (wealth + self.param),
        })
    }

    /// `U(wealth + delta) - U(wealth)` without cancellation, for comparing
    /// nearby wealth levels.
    pub fn increment(&self, wealth: f64, delta: f64) -> Result<f64> {
        self.check(wealth)?;
        self.check(wealth + delta)?;
        let a = self.param;
        Ok(match self.family {
            UtilityFamily::Exponential => -(-a * wealth).exp() * (-a * delta).exp_m1(),
            UtilityFamily::Power if wealth == 0.0 => delta.powf(a),
            UtilityFamily::Power => wealth.powf(a) * (a * (delta / wealth).ln_1p()).exp_m1(),
            UtilityFamily::LogShifted => (delta / (wealth + a)).ln_1p(),
        })
    }

    /// Inverse utility: the sure wealth whose utility is `value`.
    pub fn inverse(&self, value: f64) -> Result<f64> {
        let wealth = match self.family {
            UtilityFamily::Exponential => {
                if value >= 1.0 {
                    return Err(Error::invalid("value", format!("exponential utility is bounded by 1, got {value}")));
                }
                -(-value).ln_1p() / self.param
            }
            UtilityFamily::Power => {
                if value < 0.0 {
                    return Err(Error::invalid("value", format!("power utility is non-negative, got {value}")));
                }
                value.powf(1.0 / self.param)
            }
            UtilityFamily::LogShifted => value.exp() - self.param,
        };
        Ok(wealth)
    }
}

impl fmt::Display for Utility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            UtilityFamily::Exponential => write!(f, "exponential(a = {})", self.param),
            UtilityFamily::Power => write!(f, "power(beta = {})", self.param),
            UtilityFamily::LogShifted => write!(f, "log-shifted(c = {})", self.param),
        }
    }
}
