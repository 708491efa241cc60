//! The five commands. Each writes `name = value` lines in a fixed order and
//! reports whether its check passed.

use std::fmt::Display;
use std::io::Write;
use std::path::Path;

use super::config::{Config, ContractOverride, Scenario, Sweep};
use super::CliError;
use crate::analysis::{investment_threshold, participation_threshold, sweep_k, sweep_psi};
use crate::closed_form::{optimal_contract_a, optimal_contract_b};
use crate::model::{ContractA, ContractB, ScenarioA, ScenarioB};
use crate::oracle::{check_agreement_a, check_agreement_b, GridSpec};
use crate::simulate::{simulate_a, simulate_b};

/// Largest `|z|` accepted by `simulate`.
pub const Z_LIMIT: f64 = 4.0;

/// Whether a command's check succeeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => super::EXIT_OK,
            Status::Fail => super::EXIT_FAIL,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

/// Key-value report writer.
struct Report<'a> {
    out: &'a mut dyn Write,
}

impl Report<'_> {
    fn kv(&mut self, key: &str, value: impl Display) -> Result<(), CliError> {
        writeln!(self.out, "{key} = {value}").map_err(CliError::stdout)
    }
}

fn bit(b: bool) -> u8 {
    u8::from(b)
}

pub fn solve(config: &Config, out: &mut dyn Write) -> Result<Status, CliError> {
    let mut r = Report { out };
    match &config.scenario {
        Scenario::Sale(p) => {
            let c = optimal_contract_a(p)?;
            let t = investment_threshold(p);
            r.kv("scenario", "A")?;
            write_contract_a(&mut r, &c)?;
            r.kv("certainty_equivalent", c.certainty_equivalent(p)?)?;
            r.kv("firm_profit", c.firm_profit(p))?;
            r.kv("psi_threshold_L", t.liability_threshold)?;
            r.kv("psi_threshold_V", t.value_threshold)?;
            r.kv("psi_star", t.switch_point())?;
            r.kv("binding", t.binding.name())?;
        }
        Scenario::Consortium(p) => {
            let c = optimal_contract_b(p)?;
            r.kv("scenario", "B")?;
            r.kv("k", p.size())?;
            write_contract_b(&mut r, &c)?;
            r.kv("H1", p.utility_alone(c.payout)?)?;
            r.kv("Hk", p.utility_pooled(c.fine, c.payout)?)?;
            r.kv("margin", p.participation_margin())?;
        }
    }
    Ok(Status::Pass)
}

fn write_contract_a(r: &mut Report, c: &ContractA) -> Result<(), CliError> {
    r.kv("phi", c.price)?;
    r.kv("t", c.fine)?;
    r.kv("L_c", c.payout)?;
    r.kv("investment", c.investment.index())?;
    r.kv("provider_value", c.provider_value)
}

fn write_contract_b(r: &mut Report, c: &ContractB) -> Result<(), CliError> {
    r.kv("s", bit(c.participate))?;
    r.kv("t", c.fine)?;
    r.kv("L_c", c.payout)?;
    r.kv("provider_value", c.provider_value)
}

/// Contract whose value `verify` checks against the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Claim {
    Sale(ContractA),
    Consortium(ContractB),
}

/// The closed-form optimum for the configured scenario.
pub fn closed_form_claim(config: &Config) -> Result<Claim, CliError> {
    Ok(match &config.scenario {
        Scenario::Sale(p) => Claim::Sale(optimal_contract_a(p)?),
        Scenario::Consortium(p) => Claim::Consortium(optimal_contract_b(p)?),
    })
}

pub fn verify(config: &Config, grid_points: Option<usize>, out: &mut dyn Write) -> Result<Status, CliError> {
    let claim = closed_form_claim(config)?;
    verify_claim(config, grid_points, &claim, out)
}

/// Compares `claim` with the oracle on the configured grid, or on a uniform
/// `grid_points` grid when given.
pub fn verify_claim(
    config: &Config,
    grid_points: Option<usize>,
    claim: &Claim,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let grid = match grid_points {
        Some(n) => {
            let g = GridSpec::uniform(n);
            g.validate().map_err(|e| CliError::Usage(format!("--grid: {e}")))?;
            g
        }
        None => config.grid,
    };
    let mut r = Report { out };
    let agreement = match (&config.scenario, claim) {
        (Scenario::Sale(p), Claim::Sale(c)) => {
            let (oracle, agreement) = check_agreement_a(p, c, &grid)?;
            r.kv("scenario", "A")?;
            r.kv("grid", format!("{}x{}x{}", grid.n_price, grid.n_fine, grid.n_payout))?;
            r.kv("feasible_points", oracle.feasible_points)?;
            r.kv("closed_form_phi", c.price)?;
            r.kv("closed_form_t", c.fine)?;
            r.kv("closed_form_L_c", c.payout)?;
            r.kv("closed_form_investment", c.investment.index())?;
            r.kv("oracle_phi", oracle.contract.price)?;
            r.kv("oracle_t", oracle.contract.fine)?;
            r.kv("oracle_L_c", oracle.contract.payout)?;
            r.kv("oracle_investment", oracle.contract.investment.index())?;
            agreement
        }
        (Scenario::Consortium(p), Claim::Consortium(c)) => {
            let (oracle, agreement) = check_agreement_b(p, c, &grid)?;
            r.kv("scenario", "B")?;
            r.kv("grid", format!("2x{}x{}", grid.n_fine, grid.n_payout))?;
            r.kv("feasible_points", oracle.feasible_points)?;
            r.kv("closed_form_s", bit(c.participate))?;
            r.kv("closed_form_t", c.fine)?;
            r.kv("closed_form_L_c", c.payout)?;
            r.kv("oracle_s", bit(oracle.contract.participate))?;
            r.kv("oracle_t", oracle.contract.fine)?;
            r.kv("oracle_L_c", oracle.contract.payout)?;
            agreement
        }
        _ => return Err(CliError::Usage("claimed contract does not match the configured scenario".into())),
    };
    let status = Status::from_bool(agreement.passed());
    r.kv("closed_form_value", agreement.claimed_value)?;
    r.kv("oracle_value", agreement.oracle_value)?;
    r.kv("difference", agreement.difference)?;
    r.kv("tolerance", agreement.tolerance)?;
    r.kv("result", status.label())?;
    Ok(status)
}

pub const SALE_COLUMNS: [&str; 7] = ["psi", "phi", "t", "L_c", "investment", "value", "certainty_equivalent"];
pub const CONSORTIUM_COLUMNS: [&str; 5] = ["k", "H1", "Hk", "s", "margin"];

/// Writes the configured sweep as CSV to `path`.
pub fn sweep(config: &Config, path: &Path, out: &mut dyn Write) -> Result<Status, CliError> {
    let Some(axis) = &config.sweep else {
        return Err(CliError::Usage("config has no sweep block".into()));
    };
    let (header, rows): (&[&str], Vec<Vec<String>>) = match (&config.scenario, axis) {
        (Scenario::Sale(p), Sweep::Psi(psis)) => {
            let s = sweep_psi(p, psis)?;
            let rows = s
                .points
                .iter()
                .map(|pt| {
                    let c = &pt.contract;
                    vec![
                        pt.psi.to_string(),
                        c.price.to_string(),
                        c.fine.to_string(),
                        c.payout.to_string(),
                        c.investment.index().to_string(),
                        c.provider_value.to_string(),
                        pt.certainty_equivalent.to_string(),
                    ]
                })
                .collect();
            (&SALE_COLUMNS, rows)
        }
        (Scenario::Consortium(p), Sweep::Size(ks)) => {
            let s = sweep_k(p, ks)?;
            let rows = s
                .points
                .iter()
                .map(|pt| {
                    vec![
                        pt.k.to_string(),
                        pt.alone.to_string(),
                        pt.pooled.to_string(),
                        bit(pt.participate).to_string(),
                        pt.margin.to_string(),
                    ]
                })
                .collect();
            (&CONSORTIUM_COLUMNS, rows)
        }
        _ => unreachable!("sweep axis is validated against the scenario on load"),
    };

    let io = |e: csv::Error| CliError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(io)?;
    w.write_record(header).map_err(io)?;
    for row in &rows {
        w.write_record(row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;

    let mut r = Report { out };
    r.kv("axis", header[0])?;
    r.kv("rows", rows.len())?;
    r.kv("out", path.display())?;
    Ok(Status::Pass)
}

pub fn simulate(config: &Config, out: &mut dyn Write) -> Result<Status, CliError> {
    let Some(sim) = &config.simulate else {
        return Err(CliError::Usage("config has no simulate block".into()));
    };
    let mut r = Report { out };
    let report = match &config.scenario {
        Scenario::Sale(p) => {
            let c = match sim.contract {
                Some(ContractOverride::Sale(c)) => c,
                _ => optimal_contract_a(p)?,
            };
            r.kv("scenario", "A")?;
            r.kv("contract", if sim.contract.is_some() { "override" } else { "optimal" })?;
            write_contract_a(&mut r, &c)?;
            simulate_a(p, &c, sim.n, sim.seed)?
        }
        Scenario::Consortium(p) => {
            let c = match sim.contract {
                Some(ContractOverride::Consortium(c)) => c,
                _ => optimal_contract_b(p)?,
            };
            r.kv("scenario", "B")?;
            r.kv("contract", if sim.contract.is_some() { "override" } else { "optimal" })?;
            write_contract_b(&mut r, &c)?;
            simulate_b(p, &c, sim.n, sim.seed)?
        }
    };
    let status = Status::from_bool(report.z_score.abs() <= Z_LIMIT);
    r.kv("n", report.n)?;
    r.kv("seed", report.seed)?;
    r.kv("rng", report.rng)?;
    r.kv(
        "counts",
        report.counts.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
    )?;
    r.kv("mean", report.mean)?;
    r.kv("standard_error", report.standard_error)?;
    r.kv("expected", report.expected)?;
    r.kv("z_score", report.z_score)?;
    r.kv("result", status.label())?;
    Ok(status)
}

pub fn thresholds(config: &Config, out: &mut dyn Write) -> Result<Status, CliError> {
    let mut r = Report { out };
    match &config.scenario {
        Scenario::Sale(p) => thresholds_a(&mut r, p)?,
        Scenario::Consortium(p) => thresholds_b(&mut r, p, config.k_max)?,
    }
    Ok(Status::Pass)
}

fn thresholds_a(r: &mut Report, p: &ScenarioA) -> Result<(), CliError> {
    let t = investment_threshold(p);
    r.kv("scenario", "A")?;
    r.kv("psi_threshold_L", t.liability_threshold)?;
    r.kv("psi_threshold_V", t.value_threshold)?;
    r.kv("psi_star", t.switch_point())?;
    r.kv("binding", t.binding.name())
}

fn thresholds_b(r: &mut Report, p: &ScenarioB, k_max: usize) -> Result<(), CliError> {
    let t = participation_threshold(p, k_max)?;
    let join = |ks: &[usize]| {
        if ks.is_empty() {
            "none".to_string()
        } else {
            ks.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
        }
    };
    r.kv("scenario", "B")?;
    r.kv("k_max", k_max)?;
    for &(k, m) in &t.margins {
        r.kv(&format!("margin[{k}]"), m)?;
    }
    r.kv("participating", join(&t.participating))?;
    r.kv("changes", join(&t.changes))?;
    r.kv("monotone", t.is_monotone())?;
    r.kv("k_star", t.k_star.map_or("none".to_string(), |k| k.to_string()))
}
