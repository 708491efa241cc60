//! JSON configuration files.
//!
//! ```json
//! {
//!   "scenario": "A",
//!   "scenario_a": { "V": 10, "W": 50, "L": 20, "psi": 1, "alpha": 0.1, "gamma": 0.5 },
//!   "utility": { "family": "power", "beta": 0.5 },
//!   "grid": { "n_phi": 401, "n_t": 401, "n_Lc": 401 },
//!   "sweep": { "axis": "psi", "start": 1, "stop": 12, "steps": 12 },
//!   "simulate": { "n": 1000000, "seed": 42, "contract": { "phi": 10, "t": 0, "L_c": 0 } }
//! }
//! ```
//!
//! A consortium uses `"scenario": "B"` with a `scenario_b` block holding `W`,
//! `L`, `k`, `breach` (`compound {p1}`, `saturating {p1, p_max}` or
//! `table {values}`) and `scale` (`power {beta}`, `log {c}` or
//! `table {values}`), sweeps over `"axis": "k"`, and an optional
//! `thresholds {k_max}` block (default 64). Utilities are
//! `exponential {a}`, `power {beta}` or `log_shifted {c}`.
//!
//! Every model invariant is checked on load; failures name the field and
//! the line it appears on.

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::analysis::linspace;
use crate::error::Error;
use crate::model::{BreachProb, ContractA, ContractB, Investment, ScenarioA, ScenarioB, Utility, ValueScale};
use crate::oracle::{GridSpec, DEFAULT_POINTS};

pub const DEFAULT_K_MAX: usize = 64;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: ScenarioTag,
    scenario_a: Option<RawSale>,
    scenario_b: Option<RawConsortium>,
    utility: RawUtility,
    grid: Option<RawGrid>,
    sweep: Option<RawSweep>,
    simulate: Option<RawSimulate>,
    thresholds: Option<RawThresholds>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
enum ScenarioTag {
    A,
    B,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawSale {
    V: f64,
    W: f64,
    L: f64,
    psi: f64,
    alpha: f64,
    gamma: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawConsortium {
    W: f64,
    L: f64,
    k: usize,
    breach: RawBreach,
    scale: RawScale,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum RawUtility {
    Exponential { a: f64 },
    Power { beta: f64 },
    LogShifted { c: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum RawBreach {
    Compound { p1: f64 },
    Saturating { p1: f64, p_max: f64 },
    Table { values: Vec<f64> },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum RawScale {
    Power { beta: f64 },
    Log { c: f64 },
    Table { values: Vec<f64> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawGrid {
    n_phi: Option<usize>,
    n_t: Option<usize>,
    n_Lc: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: String,
    start: f64,
    stop: f64,
    steps: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSimulate {
    n: u64,
    seed: u64,
    contract: Option<RawContract>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawContract {
    phi: Option<f64>,
    t: f64,
    L_c: f64,
    i: Option<u8>,
    s: Option<u8>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawThresholds {
    k_max: usize,
}

/// A rejected configuration, anchored to the offending field when it can be
/// found in the file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub file: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    /// Dotted field path such as `scenario_a.gamma`.
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.file)?;
        if let Some(line) = self.line {
            write!(f, ":{line}")?;
            if let Some(col) = self.column {
                write!(f, ":{col}")?;
            }
        }
        if !self.field.is_empty() {
            write!(f, ": {}", self.field)?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Sale(ScenarioA),
    Consortium(ScenarioB),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    Psi(Vec<f64>),
    Size(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContractOverride {
    Sale(ContractA),
    Consortium(ContractB),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulateSettings {
    pub n: u64,
    pub seed: u64,
    pub contract: Option<ContractOverride>,
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub scenario: Scenario,
    pub grid: GridSpec,
    pub sweep: Option<Sweep>,
    pub simulate: Option<SimulateSettings>,
    pub k_max: usize,
}

/// Reads and validates a configuration file.
pub fn load(path: &Path, text: &str) -> Result<Config, ConfigError> {
    Loader {
        file: path.display().to_string(),
        text,
    }
    .load()
}

struct Loader<'a> {
    file: String,
    text: &'a str,
}

impl Loader<'_> {
    fn load(&self) -> Result<Config, ConfigError> {
        let raw: RawConfig = serde_json::from_str(self.text).map_err(|e| ConfigError {
            file: self.file.clone(),
            line: Some(e.line()),
            column: Some(e.column()),
            field: String::new(),
            message: strip_position(&e.to_string()),
        })?;

        let utility = self.utility(&raw.utility)?;
        let scenario = match raw.scenario {
            ScenarioTag::A => {
                if raw.scenario_b.is_some() {
                    return Err(self.fail("scenario_b", "not allowed when scenario is \"A\""));
                }
                let Some(a) = &raw.scenario_a else {
                    return Err(self.fail("scenario_a", "missing block for scenario \"A\""));
                };
                Scenario::Sale(
                    ScenarioA::new(a.V, a.W, a.L, a.psi, a.alpha, a.gamma, utility)
                        .map_err(|e| self.model("scenario_a", e))?,
                )
            }
            ScenarioTag::B => {
                if raw.scenario_a.is_some() {
                    return Err(self.fail("scenario_a", "not allowed when scenario is \"B\""));
                }
                let Some(b) = &raw.scenario_b else {
                    return Err(self.fail("scenario_b", "missing block for scenario \"B\""));
                };
                let breach = self.breach(&b.breach)?;
                let scale = self.scale(&b.scale)?;
                Scenario::Consortium(
                    ScenarioB::new(b.W, b.L, b.k, breach, scale, utility).map_err(|e| self.model("scenario_b", e))?,
                )
            }
        };

        let grid = match &raw.grid {
            None => GridSpec::default(),
            Some(g) => {
                let spec = GridSpec {
                    n_price: g.n_phi.unwrap_or(DEFAULT_POINTS),
                    n_fine: g.n_t.unwrap_or(DEFAULT_POINTS),
                    n_payout: g.n_Lc.unwrap_or(DEFAULT_POINTS),
                    ..GridSpec::default()
                };
                spec.validate().map_err(|e| self.model("grid", e))?;
                spec
            }
        };

        let sweep = raw.sweep.as_ref().map(|s| self.sweep(&scenario, s)).transpose()?;
        let simulate = raw
            .simulate
            .as_ref()
            .map(|s| self.simulate(&scenario, s))
            .transpose()?;
        let k_max = match &raw.thresholds {
            None => DEFAULT_K_MAX,
            Some(t) if t.k_max >= 2 => t.k_max,
            Some(t) => return Err(self.fail("thresholds.k_max", format!("must be at least 2, got {}", t.k_max))),
        };

        Ok(Config {
            scenario,
            grid,
            sweep,
            simulate,
            k_max,
        })
    }

    fn utility(&self, raw: &RawUtility) -> Result<Utility, ConfigError> {
        match *raw {
            RawUtility::Exponential { a } => Utility::exponential(a),
            RawUtility::Power { beta } => Utility::power(beta),
            RawUtility::LogShifted { c } => Utility::log_shifted(c),
        }
        .map_err(|e| self.model("utility", e))
    }

    fn breach(&self, raw: &RawBreach) -> Result<BreachProb, ConfigError> {
        match raw {
            RawBreach::Compound { p1 } => BreachProb::compound(*p1),
            RawBreach::Saturating { p1, p_max } => BreachProb::saturating(*p1, *p_max),
            RawBreach::Table { values } => BreachProb::table(values.clone()),
        }
        .map_err(|e| self.model("scenario_b.breach", e))
    }

    fn scale(&self, raw: &RawScale) -> Result<ValueScale, ConfigError> {
        match raw {
            RawScale::Power { beta } => ValueScale::power(*beta),
            RawScale::Log { c } => ValueScale::log(*c),
            RawScale::Table { values } => ValueScale::table(values.clone()),
        }
        .map_err(|e| self.model("scenario_b.scale", e))
    }

    fn sweep(&self, scenario: &Scenario, raw: &RawSweep) -> Result<Sweep, ConfigError> {
        let expected = match scenario {
            Scenario::Sale(_) => "psi",
            Scenario::Consortium(_) => "k",
        };
        if raw.axis != expected {
            return Err(self.fail(
                "sweep.axis",
                format!("must be \"{expected}\" for this scenario, got \"{}\"", raw.axis),
            ));
        }
        if !(raw.start.is_finite() && raw.stop.is_finite()) || raw.stop < raw.start || raw.steps == Some(0) {
            return Err(self.fail("sweep", "empty sweep"));
        }
        match scenario {
            Scenario::Sale(_) => {
                let Some(steps) = raw.steps else {
                    return Err(self.fail("sweep.steps", "required for a psi sweep"));
                };
                if raw.start <= 0.0 {
                    return Err(self.fail("sweep.start", format!("psi must be positive, got {}", raw.start)));
                }
                if steps > 1 && raw.start == raw.stop {
                    return Err(self.fail("sweep.steps", "a single-point range needs steps = 1"));
                }
                Ok(Sweep::Psi(linspace(raw.start, raw.stop, steps)))
            }
            Scenario::Consortium(_) => {
                if raw.start.fract() != 0.0 || raw.stop.fract() != 0.0 || raw.start < 2.0 {
                    return Err(self.fail("sweep.start", "k bounds must be integers of at least 2"));
                }
                let count = (raw.stop - raw.start) as usize + 1;
                let values = linspace(raw.start, raw.stop, raw.steps.unwrap_or(count));
                if values.iter().any(|k| k.fract() != 0.0) || values.windows(2).any(|w| w[0] == w[1]) {
                    return Err(self.fail("sweep.steps", "k values must be distinct integers"));
                }
                Ok(Sweep::Size(values.iter().map(|&k| k as usize).collect()))
            }
        }
    }

    fn simulate(&self, scenario: &Scenario, raw: &RawSimulate) -> Result<SimulateSettings, ConfigError> {
        if raw.n == 0 {
            return Err(self.fail("simulate.n", "sample count must be at least 1"));
        }
        let contract = match (&raw.contract, scenario) {
            (None, _) => None,
            (Some(c), Scenario::Sale(p)) => {
                if c.s.is_some() {
                    return Err(self.fail("simulate.contract.s", "only valid for scenario \"B\""));
                }
                let Some(phi) = c.phi else {
                    return Err(self.fail("simulate.contract", "missing field `phi`"));
                };
                let contract = ContractA::evaluate(p, phi, c.t, c.L_c).map_err(|e| self.model("simulate.contract", e))?;
                if let Some(i) = c.i {
                    let stated = Investment::from_index(i)
                        .ok_or_else(|| self.fail("simulate.contract.i", format!("must be 0 or 1, got {i}")))?;
                    if stated != contract.investment {
                        return Err(self.fail(
                            "simulate.contract.i",
                            format!("the firm's best response to this contract is i = {}", contract.investment.index()),
                        ));
                    }
                }
                Some(ContractOverride::Sale(contract))
            }
            (Some(c), Scenario::Consortium(p)) => {
                if c.phi.is_some() || c.i.is_some() {
                    return Err(self.fail("simulate.contract", "`phi` and `i` are only valid for scenario \"A\""));
                }
                let participate = match c.s {
                    Some(0) => false,
                    Some(1) => true,
                    Some(s) => return Err(self.fail("simulate.contract.s", format!("must be 0 or 1, got {s}"))),
                    None => return Err(self.fail("simulate.contract", "missing field `s`")),
                };
                let contract =
                    ContractB::evaluate(p, participate, c.t, c.L_c).map_err(|e| self.model("simulate.contract", e))?;
                Some(ContractOverride::Consortium(contract))
            }
        };
        Ok(SimulateSettings {
            n: raw.n,
            seed: raw.seed,
            contract,
        })
    }

    /// Maps a model error raised while building `block` to the field it
    /// names.
    fn model(&self, block: &str, err: Error) -> ConfigError {
        let field = match &err {
            Error::InvalidParameter { name, .. } => format!("{block}.{name}"),
            Error::Invariant { function, .. } if block == "scenario_b" => {
                let curve = if function.starts_with("breach") { "breach" } else { "scale" };
                format!("{block}.{curve}")
            }
            _ => block.to_string(),
        };
        let message = match err {
            Error::InvalidParameter { reason, .. } => reason,
            other => other.to_string(),
        };
        self.fail(&field, message)
    }

    fn fail(&self, field: &str, message: impl Into<String>) -> ConfigError {
        let (line, column) = match locate(self.text, field) {
            Some((l, c)) => (Some(l), Some(c)),
            None => (None, None),
        };
        ConfigError {
            file: self.file.clone(),
            line,
            column,
            field: field.to_string(),
            message: message.into(),
        }
    }
}

/// 1-based line and column of the innermost key of a dotted path, found by
/// searching for each key after the previous one. Falls back to the deepest
/// key found.
fn locate(text: &str, field: &str) -> Option<(usize, usize)> {
    let mut from = 0;
    let mut found = None;
    for key in field.split('.') {
        let needle = format!("\"{key}\"");
        let Some(rel) = text[from..].find(&needle) else { break };
        let at = from + rel;
        found = Some(at);
        from = at + needle.len();
    }
    let at = found?;
    let line_start = text[..at].rfind('\n').map_or(0, |i| i + 1);
    Some((text[..at].matches('\n').count() + 1, text[line_start..at].chars().count() + 1))
}

/// serde_json appends " at line L column C"; the position is reported
/// separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}
