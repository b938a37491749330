//! `generate`: one run of the fan schedule with a full report.

use fanstate_core::{
    default_dimension, fan_schedule, fan_state, fidelity, oracle_protocol, run_protocol, truncation_tail, FockVector,
    Outcome, ProtocolRun, TauOrder, C64,
};
use serde::Serialize;

use crate::CliError;

/// Largest accepted atom count; the target fan-state has `(2k)²` raw terms.
pub const MAX_ATOMS: usize = 8;

/// Engine-versus-oracle deviation above which `generate --verify` exits 3.
pub const DEVIATION_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerateConfig {
    pub alpha: C64,
    pub atoms: usize,
    pub basis: Outcome,
    pub tau_order: TauOrder,
    pub verify: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub tau: f64,
    pub xi: [f64; 2],
    pub eta: [f64; 2],
    pub outcome: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermRecord {
    pub coeff: [f64; 2],
    pub amplitude: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub dimension: usize,
    pub truncation_tail: f64,
    pub oracle_per_step_norm_sq: Vec<f64>,
    pub oracle_paper_probability: f64,
    pub oracle_record_probability: f64,
    pub max_deviation: f64,
}

/// Everything one run produces. Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub alpha: [f64; 2],
    pub atoms: usize,
    pub basis: &'static str,
    pub tau_order: &'static str,
    pub k: usize,
    pub steps: Vec<StepRecord>,
    pub per_step_norm_sq: Vec<f64>,
    pub conditional_probabilities: Vec<f64>,
    pub paper_probability: f64,
    pub record_probability: f64,
    pub fidelity: f64,
    pub final_state: Vec<TermRecord>,
    pub verification: Option<Verification>,
}

impl RunReport {
    pub fn max_deviation(&self) -> Option<f64> {
        self.verification.as_ref().map(|v| v.max_deviation)
    }
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Minus => "minus",
        Outcome::Plus => "plus",
    }
}

fn order_name(t: TauOrder) -> &'static str {
    match t {
        TauOrder::PiFirst => "pi-first",
        TauOrder::HalfPiFirst => "half-pi-first",
    }
}

fn verification(run: &ProtocolRun) -> Result<Verification, CliError> {
    let dimension = default_dimension(run.alpha0.norm());
    let oracle = oracle_protocol(run.alpha0, &run.steps, dimension)?;
    let embedded = FockVector::from_superposition(&run.final_state, dimension)?;
    let max_deviation = run
        .per_step_norm_sq
        .iter()
        .zip(&oracle.per_step_norm_sq)
        .map(|(a, b)| (a - b).abs())
        .fold(embedded.sup_distance(&oracle.final_state), f64::max);
    Ok(Verification {
        dimension,
        truncation_tail: truncation_tail(run.alpha0.norm(), dimension),
        oracle_paper_probability: oracle.per_step_norm_sq.iter().product(),
        oracle_record_probability: oracle.per_step_norm_sq.last().copied().unwrap_or(1.0),
        oracle_per_step_norm_sq: oracle.per_step_norm_sq,
        max_deviation,
    })
}

pub fn generate(cfg: &GenerateConfig) -> Result<RunReport, CliError> {
    if !(2..=MAX_ATOMS).contains(&cfg.atoms) {
        return Err(CliError::Usage(format!("--atoms must be in 2..={MAX_ATOMS}, got {}", cfg.atoms)));
    }
    let mut steps = fan_schedule(cfg.atoms, cfg.basis)?;
    let [t1, t2] = cfg.tau_order.taus();
    steps[0].tau = t1;
    steps[1].tau = t2;

    let run = run_protocol(cfg.alpha, &steps);
    let k = 1usize << (cfg.atoms - 2);
    let fidelity = fidelity(&run.final_state, &fan_state(cfg.alpha, k)?)?;
    let verification = if cfg.verify { Some(verification(&run)?) } else { None };

    Ok(RunReport {
        alpha: pair(cfg.alpha),
        atoms: cfg.atoms,
        basis: outcome_name(cfg.basis),
        tau_order: order_name(cfg.tau_order),
        k,
        steps: steps
            .iter()
            .map(|s| StepRecord {
                tau: s.tau,
                xi: pair(s.prep.xi()),
                eta: pair(s.prep.eta()),
                outcome: outcome_name(s.outcome),
            })
            .collect(),
        per_step_norm_sq: run.per_step_norm_sq.clone(),
        conditional_probabilities: run.conditional_probs.clone(),
        paper_probability: run.paper_probability,
        record_probability: run.record_probability,
        fidelity,
        final_state: run
            .final_state
            .terms()
            .iter()
            .map(|t| TermRecord {
                coeff: pair(t.coeff),
                amplitude: pair(t.amp),
            })
            .collect(),
        verification,
    })
}
