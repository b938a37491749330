//! Truncated number-basis simulation of the atom ⊗ field system.
//!
//! This is the oracle for the analytic engine: it never uses the
//! coherent-state rotation identity, only the number-basis action of
//! `U(τ) = 1 + (W/2)(e^{iτ a†a} − 1)` or its Taylor series.

use crate::coherent::CoherentSuperposition;
use crate::error::{Error, Result};
use crate::protocol::{AtomPreparation, Outcome, ProtocolStep};
use crate::C64;

/// Largest truncation tail accepted by [`oracle_protocol`].
pub const TRUNCATION_BUDGET: f64 = 1e-12;

/// Relative size of the first omitted Taylor term above which
/// [`apply_u_series`] reports non-convergence.
pub const SERIES_GUARD: f64 = 1e-13;

/// Field amplitudes `c_n`, `n = 0..D`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<C64>,
}

impl FockVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidArgument("Fock dimension must be at least 1".into()));
        }
        if amps.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite("Fock amplitude"));
        }
        Ok(Self { amps })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            amps: vec![C64::new(0.0, 0.0); dim.max(1)],
        }
    }

    /// Embeds `Σ c_i |β_i⟩` by summing truncated coherent vectors.
    pub fn from_superposition(state: &CoherentSuperposition, dim: usize) -> Result<Self> {
        let mut out = Self::zeros(dim);
        for t in state.terms() {
            let v = coherent_fock(t.amp, dim)?;
            for (o, a) in out.amps.iter_mut().zip(&v.amps) {
                *o += t.coeff * a;
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩` over the shared levels.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest component-wise modulus of the difference.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        let n = self.dim().max(other.dim());
        let zero = C64::new(0.0, 0.0);
        (0..n)
            .map(|i| {
                let a = self.amps.get(i).copied().unwrap_or(zero);
                let b = other.amps.get(i).copied().unwrap_or(zero);
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    fn scaled(&self, c: C64) -> Self {
        Self {
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }
}

/// `e^{−|α|²/2} α^n / √n!`, built with `c_{n+1} = c_n α / √(n+1)`.
pub fn coherent_fock(alpha: C64, dim: usize) -> Result<FockVector> {
    if dim == 0 {
        return Err(Error::InvalidArgument("Fock dimension must be at least 1".into()));
    }
    if !alpha.is_finite() {
        return Err(Error::NonFinite("alpha"));
    }
    let mut amps = Vec::with_capacity(dim);
    let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        amps.push(c);
        c = c * alpha / ((n + 1) as f64).sqrt();
    }
    Ok(FockVector { amps })
}

/// Poisson weight beyond the truncation, `Σ_{n≥D} e^{−r²} r^{2n} / n!`.
///
/// Summed upward from `n = D` so small tails keep full relative precision.
pub fn truncation_tail(r: f64, dim: usize) -> f64 {
    let mean = r * r;
    if dim == 0 {
        return 1.0;
    }
    if mean == 0.0 {
        return 0.0;
    }
    let ln_fact: f64 = (2..=dim).map(|k| (k as f64).ln()).sum();
    let mut term = (-mean + dim as f64 * mean.ln() - ln_fact).exp();
    let mut sum = 0.0;
    let mut n = dim;
    loop {
        sum += term;
        n += 1;
        term *= mean / n as f64;
        // past the Poisson mode the terms shrink geometrically
        if (n as f64 > mean && term <= sum * 1e-17) || term == 0.0 {
            break;
        }
    }
    sum.min(1.0)
}

/// Default truncation: `max(32, ⌈r² + 10r + 20⌉)`.
pub fn default_dimension(r: f64) -> usize {
    let d = (r * r + 10.0 * r + 20.0).ceil();
    (d as usize).max(32)
}

/// 2×2 operator on the atom, basis order `(|−⟩, |+⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomMatrix(pub [[C64; 2]; 2]);

impl AtomMatrix {
    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self([[one, zero], [zero, one]])
    }

    /// `W = |+⟩⟨−| + |−⟩⟨+| + |−⟩⟨−| + |+⟩⟨+|`, the all-ones matrix.
    pub fn w() -> Self {
        let one = C64::new(1.0, 0.0);
        Self([[one, one], [one, one]])
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        Self(out)
    }

    pub fn pow(&self, l: u32) -> Self {
        (0..l).fold(Self::identity(), |acc, _| acc.mul(self))
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self(self.0.map(|row| row.map(|x| x * c)))
    }
}

/// Joint state `|−⟩ ⊗ ψ₋ + |+⟩ ⊗ ψ₊`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub minus: FockVector,
    pub plus: FockVector,
}

impl JointState {
    pub fn new(minus: FockVector, plus: FockVector) -> Result<Self> {
        if minus.dim() != plus.dim() {
            return Err(Error::LengthMismatch(format!(
                "atom blocks have dimensions {} and {}",
                minus.dim(),
                plus.dim()
            )));
        }
        Ok(Self { minus, plus })
    }

    /// Product state `(ξ|−⟩ + η|+⟩) ⊗ field`.
    pub fn prepare(prep: &AtomPreparation, field: &FockVector) -> Self {
        Self {
            minus: field.scaled(prep.xi()),
            plus: field.scaled(prep.eta()),
        }
    }

    pub fn dim(&self) -> usize {
        self.minus.dim()
    }

    pub fn norm_sq(&self) -> f64 {
        self.minus.norm_sq() + self.plus.norm_sq()
    }

    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.minus
            .sup_distance(&other.minus)
            .max(self.plus.sup_distance(&other.plus))
    }

    fn add_assign_scaled(&mut self, other: &Self, c: f64) {
        for (a, b) in self.minus.amps.iter_mut().zip(&other.minus.amps) {
            *a += b * c;
        }
        for (a, b) in self.plus.amps.iter_mut().zip(&other.plus.amps) {
            *a += b * c;
        }
    }

    /// `(M ⊗ a†a) ψ` scaled by `c`.
    fn apply_number_coupling(&self, m: &AtomMatrix, c: C64) -> Self {
        let [[m00, m01], [m10, m11]] = m.0;
        let mut minus = Vec::with_capacity(self.dim());
        let mut plus = Vec::with_capacity(self.dim());
        for (n, (lo, hi)) in self.minus.amps.iter().zip(&self.plus.amps).enumerate() {
            let w = c * n as f64;
            minus.push(w * (m00 * lo + m01 * hi));
            plus.push(w * (m10 * lo + m11 * hi));
        }
        Self {
            minus: FockVector { amps: minus },
            plus: FockVector { amps: plus },
        }
    }
}

/// Exact `U(τ) = 1 + (W/2)(e^{iτ a†a} − 1)` on the truncated space.
pub fn apply_u_closed(psi: &JointState, tau: f64) -> JointState {
    let mut minus = Vec::with_capacity(psi.dim());
    let mut plus = Vec::with_capacity(psi.dim());
    for (n, (lo, hi)) in psi.minus.amps.iter().zip(&psi.plus.amps).enumerate() {
        let shift = 0.5 * (C64::from_polar(1.0, tau * n as f64) - 1.0) * (lo + hi);
        minus.push(lo + shift);
        plus.push(hi + shift);
    }
    JointState {
        minus: FockVector { amps: minus },
        plus: FockVector { amps: plus },
    }
}

/// `exp(−i H t)` with `H t = −(τ/2) a†a W`, summed as a Taylor series up to
/// power `order`.
///
/// The interval is split into `⌈τ (D − 1)⌉` equal sub-steps so each sub-step's
/// generator has spectral radius at most one and the partial sums never suffer
/// cancellation. `order = 30` is ample; the call fails if the first omitted
/// term of any sub-step exceeds [`SERIES_GUARD`] of the partial sum.
pub fn apply_u_series(psi: &JointState, tau: f64, order: u32) -> Result<JointState> {
    if !tau.is_finite() {
        return Err(Error::NonFinite("tau"));
    }
    let top_level = psi.dim().saturating_sub(1) as f64;
    let substeps = (tau.abs() * top_level).ceil().max(1.0) as u64;
    let delta = tau / substeps as f64;
    // −iHδt = i(δ/2) a†a W
    let generator = AtomMatrix::w();
    let coupling = C64::new(0.0, 0.5 * delta);

    let mut state = psi.clone();
    for _ in 0..substeps {
        let mut sum = state.clone();
        let mut term = state;
        for l in 1..=order {
            term = term.apply_number_coupling(&generator, coupling / l as f64);
            sum.add_assign_scaled(&term, 1.0);
        }
        let omitted = term
            .apply_number_coupling(&generator, coupling / (order + 1) as f64)
            .norm_sq()
            .sqrt();
        let result = sum.norm_sq().sqrt();
        if omitted > SERIES_GUARD * result {
            return Err(Error::SeriesNotConverged { omitted, result });
        }
        state = sum;
    }
    Ok(state)
}

/// Unnormalized conditional field after detecting the atom in `outcome`.
pub fn project_outcome(psi: &JointState, outcome: Outcome) -> FockVector {
    match outcome {
        Outcome::Minus => psi.minus.clone(),
        Outcome::Plus => psi.plus.clone(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRun {
    pub final_state: FockVector,
    pub per_step_norm_sq: Vec<f64>,
}

/// Runs a protocol on the truncated number basis.
pub fn oracle_protocol(alpha0: C64, steps: &[ProtocolStep], dim: usize) -> Result<OracleRun> {
    let tail = truncation_tail(alpha0.norm(), dim);
    if !(tail < TRUNCATION_BUDGET) {
        return Err(Error::TruncationBudget {
            dim,
            tail,
            budget: TRUNCATION_BUDGET,
        });
    }
    let mut field = coherent_fock(alpha0, dim)?;
    let mut per_step_norm_sq = Vec::with_capacity(steps.len());
    for step in steps {
        let joint = apply_u_closed(&JointState::prepare(&step.prep, &field), step.tau);
        field = project_outcome(&joint, step.outcome);
        per_step_norm_sq.push(field.norm_sq());
    }
    Ok(OracleRun {
        final_state: field,
        per_step_norm_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn vacuum_vector() {
        let v = coherent_fock(c(0.0, 0.0), 5).unwrap();
        assert_eq!(v.amps()[0], c(1.0, 0.0));
        assert!(v.amps()[1..].iter().all(|a| *a == c(0.0, 0.0)));
        assert!(coherent_fock(c(1.0, 0.0), 0).is_err());
    }

    #[test]
    fn tail_edge_cases() {
        assert_eq!(truncation_tail(0.0, 1), 0.0);
        assert_eq!(truncation_tail(1.0, 0), 1.0);
        assert!(truncation_tail(2.0, 60) < 1e-15);
        let mut prev = 1.0;
        for d in 1..40 {
            let t = truncation_tail(1.7, d);
            assert!(t < prev, "tail not decreasing at D = {d}");
            prev = t;
        }
    }

    #[test]
    fn tail_matches_complement_of_head() {
        for (r, d) in [(1.0, 3), (2.0, 5), (0.5, 2)] {
            let head = coherent_fock(c(r, 0.0), d).unwrap().norm_sq();
            assert_relative_eq!(truncation_tail(r, d), 1.0 - head, max_relative = 1e-12);
        }
    }

    #[test]
    fn default_dimension_policy() {
        assert_eq!(default_dimension(0.0), 32);
        assert_eq!(default_dimension(2.0), 44);
        assert_eq!(default_dimension(5.0), 95);
        for r in [0.0, 1.0, 2.5, 4.0, 6.0] {
            assert!(truncation_tail(r, default_dimension(r)) < TRUNCATION_BUDGET);
        }
    }

    #[test]
    fn w_matrix_powers() {
        let w = AtomMatrix::w();
        for l in 1..=10u32 {
            assert_eq!(w.pow(l), w.scaled(c((1u32 << (l - 1)) as f64, 0.0)));
        }
        assert_eq!(w.pow(0), AtomMatrix::identity());
    }

    #[test]
    fn closed_u_at_zero_and_full_turn() {
        let field = coherent_fock(c(1.2, -0.5), 30).unwrap();
        let prep = AtomPreparation::normalized(c(0.6, 0.1), c(-0.3, 0.7)).unwrap();
        let psi = JointState::prepare(&prep, &field);
        assert!(apply_u_closed(&psi, 0.0).sup_distance(&psi) < 1e-16);
        assert!(apply_u_closed(&psi, 2.0 * PI).sup_distance(&psi) < 1e-13);
    }

    #[test]
    fn series_at_zero_is_identity_for_any_order() {
        let field = coherent_fock(c(0.8, 0.0), 20).unwrap();
        let psi = JointState::prepare(&AtomPreparation::excited(), &field);
        for order in [0, 1, 5, 30] {
            assert_eq!(apply_u_series(&psi, 0.0, order).unwrap(), psi);
        }
    }

    #[test]
    fn series_guard_trips_on_short_expansion() {
        let field = coherent_fock(c(1.5, 0.0), 40).unwrap();
        let psi = JointState::prepare(&AtomPreparation::ground(), &field);
        assert!(matches!(apply_u_series(&psi, 2.0, 3), Err(Error::SeriesNotConverged { .. })));
    }

    #[test]
    fn joint_dims_must_match() {
        assert!(JointState::new(FockVector::zeros(3), FockVector::zeros(4)).is_err());
    }

    #[test]
    fn projection_completeness() {
        let field = coherent_fock(c(1.0, 0.4), 40).unwrap();
        let prep = AtomPreparation::normalized(c(0.2, 0.0), c(0.5, 0.5)).unwrap();
        let psi = apply_u_closed(&JointState::prepare(&prep, &field), 1.1);
        let total = project_outcome(&psi, Outcome::Minus).norm_sq() + project_outcome(&psi, Outcome::Plus).norm_sq();
        assert_relative_eq!(total, psi.norm_sq(), epsilon = 1e-15);
    }

    #[test]
    fn zero_time_projection_returns_field() {
        let field = coherent_fock(c(1.0, 0.4), 40).unwrap();
        let psi = apply_u_closed(&JointState::prepare(&AtomPreparation::ground(), &field), 0.0);
        assert!(project_outcome(&psi, Outcome::Minus).sup_distance(&field) < 1e-16);
    }

    #[test]
    fn oracle_rejects_short_truncation() {
        assert!(matches!(
            oracle_protocol(c(3.0, 0.0), &[], 20),
            Err(Error::TruncationBudget { .. })
        ));
        let run = oracle_protocol(c(1.0, 0.0), &[], 60).unwrap();
        assert!(run.per_step_norm_sq.is_empty());
        assert_relative_eq!(run.final_state.norm_sq(), 1.0, epsilon = 1e-15);
    }
}
