//! `verify`: seeded randomized cross-checks between the analytic engine, its
//! closed forms and the number-basis oracle. Stops at the first counterexample.

use std::f64::consts::PI;

use fanstate_core::{
    apply_u_closed, apply_u_series, closed_form_state, coherent_fock, fan_schedule, fan_state, fidelity,
    oracle_protocol, run_protocol, single_atom_probability, AtomPreparation, FockVector, JointState, Outcome,
    ProtocolStep, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_DIM: usize = 60;
const SERIES_DIM: usize = 40;
const SERIES_ORDER: u32 = 30;

const ORACLE_TOL: f64 = 1e-8;
const CLOSED_FORM_TOL: f64 = 1e-12;
const SINGLE_ATOM_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-14;
const SERIES_TOL: f64 = 1e-10;
const FAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub cases: usize,
    pub tol_scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub name: &'static str,
    pub tolerance: f64,
    pub max_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub checks: Vec<CheckSummary>,
    pub counterexample: Option<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn render(&self) -> String {
        let mut out = format!("seed {} cases {} tol-scale {}\n", self.config.seed, self.config.cases, self.config.tol_scale);
        for c in &self.checks {
            out.push_str(&format!("{:<20} max error {:.3e} (tol {:.1e})\n", c.name, c.max_error, c.tolerance));
        }
        match &self.counterexample {
            Some(ce) => out.push_str(&format!("FAIL {ce}\n")),
            None => out.push_str("ok\n"),
        }
        out
    }
}

fn random_complex(rng: &mut ChaCha8Rng, max_modulus: f64) -> C64 {
    C64::from_polar(max_modulus * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI))
}

fn random_prep(rng: &mut ChaCha8Rng) -> AtomPreparation {
    loop {
        let (xi, eta) = (random_complex(rng, 1.0), random_complex(rng, 1.0));
        if let Ok(p) = AtomPreparation::normalized(xi, eta) {
            return p;
        }
    }
}

fn random_outcome(rng: &mut ChaCha8Rng) -> Outcome {
    if rng.gen() {
        Outcome::Plus
    } else {
        Outcome::Minus
    }
}

fn random_steps(rng: &mut ChaCha8Rng, n: usize) -> Vec<ProtocolStep> {
    (0..n)
        .map(|_| ProtocolStep {
            prep: random_prep(rng),
            tau: rng.gen_range(0.0..2.0 * PI),
            outcome: random_outcome(rng),
        })
        .collect()
}

struct Check {
    summary: CheckSummary,
}

impl Check {
    fn new(name: &'static str, tol: f64, scale: f64) -> Self {
        Self {
            summary: CheckSummary {
                name,
                tolerance: tol * scale,
                max_error: 0.0,
            },
        }
    }

    /// Records `err`; returns a counterexample description when it exceeds the tolerance.
    fn record(&mut self, case: usize, err: f64, detail: impl FnOnce() -> String) -> Option<String> {
        self.summary.max_error = self.summary.max_error.max(err);
        (err.is_nan() || err > self.summary.tolerance).then(|| {
            format!(
                "{} case {case}: error {err:e} > {:e}; {}",
                self.summary.name,
                self.summary.tolerance,
                detail()
            )
        })
    }
}

type CaseResult = Result<Option<String>, fanstate_core::Error>;

fn oracle_case(rng: &mut ChaCha8Rng, case: usize, check: &mut Check) -> CaseResult {
    let n = rng.gen_range(1..=4);
    let alpha = random_complex(rng, 2.5);
    let steps = random_steps(rng, n);
    let analytic = run_protocol(alpha, &steps);
    let oracle = oracle_protocol(alpha, &steps, ORACLE_DIM)?;
    let embedded = FockVector::from_superposition(&analytic.final_state, ORACLE_DIM)?;
    let err = analytic
        .per_step_norm_sq
        .iter()
        .zip(&oracle.per_step_norm_sq)
        .map(|(a, b)| (a - b).abs())
        .fold(embedded.sup_distance(&oracle.final_state), f64::max);
    Ok(check.record(case, err, || format!("alpha = {alpha}, steps = {steps:?}")))
}

fn closed_form_case(rng: &mut ChaCha8Rng, case: usize, check: &mut Check) -> CaseResult {
    let n = rng.gen_range(1..=5);
    let alpha = random_complex(rng, 2.5);
    let steps = random_steps(rng, n);
    let preps: Vec<_> = steps.iter().map(|s| s.prep).collect();
    let taus: Vec<_> = steps.iter().map(|s| s.tau).collect();
    let outcomes: Vec<_> = steps.iter().map(|s| s.outcome).collect();
    let direct = closed_form_state(alpha, &preps, &taus, &outcomes)?;
    let sequential = run_protocol(alpha, &steps).final_state;
    let err = FockVector::from_superposition(&direct, ORACLE_DIM)?
        .sup_distance(&FockVector::from_superposition(&sequential, ORACLE_DIM)?);
    Ok(check.record(case, err, || format!("alpha = {alpha}, steps = {steps:?}")))
}

fn single_atom_case(rng: &mut ChaCha8Rng, case: usize, check: &mut Check) -> CaseResult {
    let alpha = random_complex(rng, 3.0);
    let step = random_steps(rng, 1)[0];
    let formula = single_atom_probability(&step.prep, step.outcome, step.tau, alpha.norm());
    let kraus = run_protocol(alpha, &[step]).record_probability;
    let err = (formula - kraus).abs();
    Ok(check.record(case, err, || format!("alpha = {alpha}, step = {step:?}: {formula} vs {kraus}")))
}

fn symmetry_case(rng: &mut ChaCha8Rng, case: usize, check: &mut Check) -> CaseResult {
    let tau = rng.gen_range(0.0..2.0 * PI);
    let r = rng.gen_range(0.0..5.0);
    let p = |prep, det| single_atom_probability(&AtomPreparation::pure(prep), det, tau, r);
    use Outcome::{Minus, Plus};
    let err = (p(Plus, Plus) - p(Minus, Minus)).abs().max((p(Minus, Plus) - p(Plus, Minus)).abs());
    Ok(check.record(case, err, || format!("tau = {tau}, r = {r}")))
}

fn series_case(rng: &mut ChaCha8Rng, case: usize, check: &mut Check) -> CaseResult {
    let alpha = random_complex(rng, 2.5);
    let field = coherent_fock(alpha, SERIES_DIM)?;
    let psi = JointState::prepare(&random_prep(rng), &field);
    let tau = rng.gen_range(0.0..2.0 * PI);
    let err = apply_u_closed(&psi, tau).sup_distance(&apply_u_series(&psi, tau, SERIES_ORDER)?);
    Ok(check.record(case, err, || format!("alpha = {alpha}, tau = {tau}")))
}

fn fan_case(rng: &mut ChaCha8Rng, case: usize, check: &mut Check) -> CaseResult {
    let n = rng.gen_range(2..=5);
    let basis = random_outcome(rng);
    let alpha = random_complex(rng, 2.5);
    let run = run_protocol(alpha, &fan_schedule(n, basis)?);
    let f = fidelity(&run.final_state, &fan_state(alpha, 1 << (n - 2))?)?;
    Ok(check.record(case, 1.0 - f, || format!("alpha = {alpha}, atoms = {n}, basis = {basis:?}")))
}

type CaseFn = fn(&mut ChaCha8Rng, usize, &mut Check) -> CaseResult;

pub fn run_verify(config: VerifyConfig) -> Result<VerifyReport, fanstate_core::Error> {
    let suite: [(&'static str, f64, CaseFn); 6] = [
        ("oracle-equivalence", ORACLE_TOL, oracle_case),
        ("closed-form", CLOSED_FORM_TOL, closed_form_case),
        ("single-atom", SINGLE_ATOM_TOL, single_atom_case),
        ("symmetries", SYMMETRY_TOL, symmetry_case),
        ("evolution-series", SERIES_TOL, series_case),
        ("fan-fidelity", FAN_TOL, fan_case),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut checks = Vec::new();
    let mut counterexample = None;
    'suite: for (name, tol, case_fn) in suite {
        let mut check = Check::new(name, tol, config.tol_scale);
        for case in 0..config.cases {
            if let Some(ce) = case_fn(&mut rng, case, &mut check)? {
                counterexample = Some(ce);
                checks.push(check.summary);
                break 'suite;
            }
        }
        checks.push(check.summary);
    }
    Ok(VerifyReport {
        config,
        checks,
        counterexample,
    })
}
