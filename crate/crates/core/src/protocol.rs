//! Sequential atom passages through the cavity, executed on coherent-state
//! superpositions.
//!
//! An atom prepared in `ξ|−⟩ + η|+⟩`, interacting for dimensionless time `τ`
//! and detected in `|s⟩` (`s = ±1`), maps the field `|ψ⟩` to the unnormalized
//! state
//!
//! `½ [ s(η − ξ) |ψ⟩ + (η + ξ) e^{iτ a†a} |ψ⟩ ]`.
//!
//! Two probability conventions are tracked for a run: the product of all
//! intermediate squared norms (`paper_probability`) and the squared norm of the
//! final conditional state (`record_probability`).

use std::f64::consts::PI;

use crate::coherent::{gram_sum, CoherentSuperposition, CoherentTerm};
use crate::error::{Error, Result};
use crate::C64;

const PREP_NORM_TOL: f64 = 1e-12;

/// Detected atomic level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// Ground state `|−⟩`.
    Minus,
    /// Excited state `|+⟩`.
    Plus,
}

impl Outcome {
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Minus => -1.0,
            Outcome::Plus => 1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Outcome::Minus => Outcome::Plus,
            Outcome::Plus => Outcome::Minus,
        }
    }
}

/// Entry state `ξ|−⟩ + η|+⟩` with `|ξ|² + |η|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomPreparation {
    xi: C64,
    eta: C64,
}

impl AtomPreparation {
    /// Rejects coefficients that are not normalized to within `1e-12`.
    pub fn new(xi: C64, eta: C64) -> Result<Self> {
        if !(xi.is_finite() && eta.is_finite()) {
            return Err(Error::NonFinite("atom preparation"));
        }
        let n = xi.norm_sqr() + eta.norm_sqr();
        if (n - 1.0).abs() > PREP_NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "|ξ|² + |η|² = {n}, expected 1"
            )));
        }
        Ok(Self { xi, eta })
    }

    /// Rescales `(ξ, η)` onto the unit sphere.
    pub fn normalized(xi: C64, eta: C64) -> Result<Self> {
        if !(xi.is_finite() && eta.is_finite()) {
            return Err(Error::NonFinite("atom preparation"));
        }
        let n = (xi.norm_sqr() + eta.norm_sqr()).sqrt();
        if !(n > 0.0) {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            xi: xi / n,
            eta: eta / n,
        })
    }

    pub fn ground() -> Self {
        Self {
            xi: C64::new(1.0, 0.0),
            eta: C64::new(0.0, 0.0),
        }
    }

    pub fn excited() -> Self {
        Self {
            xi: C64::new(0.0, 0.0),
            eta: C64::new(1.0, 0.0),
        }
    }

    /// The pure level matching a detection basis.
    pub fn pure(level: Outcome) -> Self {
        match level {
            Outcome::Minus => Self::ground(),
            Outcome::Plus => Self::excited(),
        }
    }

    pub fn xi(&self) -> C64 {
        self.xi
    }

    pub fn eta(&self) -> C64 {
        self.eta
    }

    /// Weight on the unrotated field, `s(η − ξ)`, before the overall ½.
    fn stay_weight(&self, outcome: Outcome) -> C64 {
        (self.eta - self.xi) * outcome.sign()
    }

    /// Weight on the rotated field, `η + ξ`, before the overall ½.
    fn rotate_weight(&self) -> C64 {
        self.eta + self.xi
    }
}

/// One atom: preparation, interaction time `τ = 2λt`, and detected level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolStep {
    pub prep: AtomPreparation,
    pub tau: f64,
    pub outcome: Outcome,
}

impl ProtocolStep {
    pub fn new(prep: AtomPreparation, tau: f64, outcome: Outcome) -> Result<Self> {
        if !tau.is_finite() {
            return Err(Error::NonFinite("tau"));
        }
        if tau < 0.0 {
            return Err(Error::InvalidArgument(format!("tau must be >= 0, got {tau}")));
        }
        Ok(Self { prep, tau, outcome })
    }
}

/// Applies one atom passage with post-selection on `step.outcome`.
pub fn kraus_step(state: &CoherentSuperposition, step: &ProtocolStep) -> CoherentSuperposition {
    let half = C64::new(0.5, 0.0);
    let stay = step.prep.stay_weight(step.outcome) * half;
    let turn = step.prep.rotate_weight() * half;
    let phase = C64::from_polar(1.0, step.tau);
    let mut raw = Vec::with_capacity(2 * state.len());
    for t in state.terms() {
        raw.push(CoherentTerm::new(t.coeff * stay, t.amp));
        raw.push(CoherentTerm::new(t.coeff * turn, t.amp * phase));
    }
    CoherentSuperposition::from_raw(raw, state.merge_tol())
}

/// A completed protocol with both probability conventions.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolRun {
    pub alpha0: C64,
    pub steps: Vec<ProtocolStep>,
    /// `‖Φ_n‖²` after each atom.
    pub per_step_norm_sq: Vec<f64>,
    /// `‖Φ_n‖² / ‖Φ_{n−1}‖²`; zero once the conditional state has vanished.
    pub conditional_probs: Vec<f64>,
    /// `Π_n ‖Φ_n‖²`.
    pub paper_probability: f64,
    /// `‖Φ_N‖²`.
    pub record_probability: f64,
    /// Unnormalized `Φ_N`.
    pub final_state: CoherentSuperposition,
}

/// Runs the atoms in order starting from `|alpha0⟩`.
///
/// # Panics
///
/// If `alpha0` is not finite.
pub fn run_protocol(alpha0: C64, steps: &[ProtocolStep]) -> ProtocolRun {
    let mut state = CoherentSuperposition::coherent(alpha0).expect("alpha0 must be finite");
    let mut per_step_norm_sq = Vec::with_capacity(steps.len());
    let mut conditional_probs = Vec::with_capacity(steps.len());
    let mut prior = 1.0;
    for step in steps {
        state = kraus_step(&state, step);
        let n = state.norm_sq();
        conditional_probs.push(if prior > 0.0 { n / prior } else { 0.0 });
        per_step_norm_sq.push(n);
        prior = n;
    }
    ProtocolRun {
        alpha0,
        steps: steps.to_vec(),
        paper_probability: per_step_norm_sq.iter().product(),
        record_probability: per_step_norm_sq.last().copied().unwrap_or(1.0),
        per_step_norm_sq,
        conditional_probs,
        final_state: state,
    }
}

/// Builds `Φ_N` directly as the sum over subsets `L` of rotated atoms:
///
/// `2^{−N} Σ_L [Π_{p∉L} s_p(η_p − ξ_p)] [Π_{q∈L} (η_q + ξ_q)] |α e^{i Σ_{q∈L} τ_q}⟩`.
pub fn closed_form_state(
    alpha0: C64,
    preps: &[AtomPreparation],
    taus: &[f64],
    outcomes: &[Outcome],
) -> Result<CoherentSuperposition> {
    let n = preps.len();
    if taus.len() != n || outcomes.len() != n {
        return Err(Error::LengthMismatch(format!(
            "{} preparations, {} times, {} outcomes",
            n,
            taus.len(),
            outcomes.len()
        )));
    }
    if n >= usize::BITS as usize - 1 {
        return Err(Error::InvalidArgument(format!("too many atoms: {n}")));
    }
    if !alpha0.is_finite() || taus.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite("closed-form input"));
    }
    let scale = 0.5f64.powi(n as i32);
    let mut raw = Vec::with_capacity(1 << n);
    for subset in 0usize..(1 << n) {
        let mut coeff = C64::new(scale, 0.0);
        let mut angle = 0.0;
        for (i, prep) in preps.iter().enumerate() {
            if subset & (1 << i) != 0 {
                coeff *= prep.rotate_weight();
                angle += taus[i];
            } else {
                coeff *= prep.stay_weight(outcomes[i]);
            }
        }
        raw.push(CoherentTerm::new(coeff, alpha0 * C64::from_polar(1.0, angle)));
    }
    CoherentSuperposition::new(raw)
}

/// Outcome probability for a single atom meeting a coherent field of modulus `r`:
///
/// `½{1 + s e^{−r²(1−cos τ)} [(|η|² − |ξ|²) cos(r² sin τ) + 2 Im(ξ*η) sin(r² sin τ)]}`.
pub fn single_atom_probability(prep: &AtomPreparation, outcome: Outcome, tau: f64, r: f64) -> f64 {
    let r_sq = r * r;
    let envelope = (-r_sq * (1.0 - tau.cos())).exp();
    let phase = r_sq * tau.sin();
    let population = prep.eta.norm_sqr() - prep.xi.norm_sqr();
    let coherence = (prep.xi.conj() * prep.eta).im;
    0.5 * (1.0 + outcome.sign() * envelope * (population * phase.cos() + 2.0 * coherence * phase.sin()))
}

/// Checks `P₊⁺ = P₋⁻` and `P₋⁺ = P₊⁻` for pure preparations to within `1e-14`.
pub fn probability_symmetries_check(tau: f64, r: f64) -> bool {
    let p = |prep: Outcome, det: Outcome| {
        single_atom_probability(&AtomPreparation::pure(prep), det, tau, r)
    };
    use Outcome::{Minus, Plus};
    (p(Plus, Plus) - p(Minus, Minus)).abs() <= 1e-14
        && (p(Plus, Minus) - p(Minus, Plus)).abs() <= 1e-14
}

/// Velocity-selected schedule `τ_j = π / 2^{j−1}` with every atom prepared and
/// detected in `basis`. After `n` atoms the field is proportional to the
/// fan-state with `k = 2^{n−2}`.
pub fn fan_schedule(n: usize, basis: Outcome) -> Result<Vec<ProtocolStep>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "fan generation needs at least 2 atoms, got {n}"
        )));
    }
    let prep = AtomPreparation::pure(basis);
    Ok((0..n)
        .map(|j| ProtocolStep {
            prep,
            tau: PI / (1u64 << j) as f64,
            outcome: basis,
        })
        .collect())
}

/// Which atom of the two-atom `k = 1` run gets the longer interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TauOrder {
    /// `τ₁ = π`, `τ₂ = π/2`.
    PiFirst,
    /// `τ₁ = π/2`, `τ₂ = π`.
    HalfPiFirst,
}

impl TauOrder {
    pub fn taus(self) -> [f64; 2] {
        match self {
            TauOrder::PiFirst => [PI, PI / 2.0],
            TauOrder::HalfPiFirst => [PI / 2.0, PI],
        }
    }

    pub fn schedule(self, basis: Outcome) -> Vec<ProtocolStep> {
        let prep = AtomPreparation::pure(basis);
        self.taus()
            .into_iter()
            .map(|tau| ProtocolStep {
                prep,
                tau,
                outcome: basis,
            })
            .collect()
    }
}

/// Two-atom product probability of reaching the `k = 1` fan-state.
pub fn p1_closed_form(r: f64, order: TauOrder) -> f64 {
    let r_sq = r * r;
    let e1 = (-r_sq).exp();
    let e2 = (-2.0 * r_sq).exp();
    let common = (1.0 + e2 + 2.0 * e1 * r_sq.cos()) / 8.0;
    match order {
        TauOrder::PiFirst => common * (1.0 + e2),
        TauOrder::HalfPiFirst => common * (1.0 + e1 * r_sq.cos()),
    }
}

/// `P_k = Π_{n=1}^{N} S(r², 2^n) / 2^{2n}` for the `N`-atom fan schedule.
pub fn pk_paper_formula(r: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "fan generation needs at least 2 atoms, got {n}"
        )));
    }
    if n > 30 {
        return Err(Error::InvalidArgument(format!("too many atoms: {n}")));
    }
    let r_sq = r * r;
    (1..=n).try_fold(1.0, |acc, m| {
        let k = 1usize << m;
        Ok(acc * gram_sum(r_sq, k)?.value / (k * k) as f64)
    })
}
