//! Finite superpositions of coherent states.
//!
//! Everything here is exact up to floating point: overlaps between coherent
//! states have a closed form, so norms, inner products and fidelities of
//! finite sums need no truncation.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::C64;

/// Absolute distance below which two coherent amplitudes are treated as the
/// same component.
pub const DEFAULT_MERGE_TOL: f64 = 1e-9;

/// `⟨β|α⟩ = exp[½(2β*α − |α|² − |β|²)]`.
pub fn coherent_overlap(beta: C64, alpha: C64) -> C64 {
    (0.5 * (2.0 * beta.conj() * alpha - alpha.norm_sqr() - beta.norm_sqr())).exp()
}

/// One summand `coeff · |amp⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentTerm {
    pub coeff: C64,
    pub amp: C64,
}

impl CoherentTerm {
    pub fn new(coeff: C64, amp: C64) -> Self {
        Self { coeff, amp }
    }

    fn is_finite(&self) -> bool {
        self.coeff.is_finite() && self.amp.is_finite()
    }
}

/// A finite weighted sum of coherent states.
///
/// Terms whose amplitudes lie within `merge_tol` of each other are merged by
/// summing their coefficients, terms with an exactly vanishing coefficient are
/// dropped, and the survivors are kept sorted by `(arg amp, |amp|, arg coeff)`.
/// The state is not normalized unless a constructor says so.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentSuperposition {
    terms: Vec<CoherentTerm>,
    merge_tol: f64,
}

impl Default for CoherentSuperposition {
    fn default() -> Self {
        Self::empty()
    }
}

impl CoherentSuperposition {
    /// Builds a superposition, rejecting non-finite input.
    pub fn new(terms: impl IntoIterator<Item = CoherentTerm>) -> Result<Self> {
        Self::with_tolerance(terms, DEFAULT_MERGE_TOL)
    }

    pub fn with_tolerance(
        terms: impl IntoIterator<Item = CoherentTerm>,
        merge_tol: f64,
    ) -> Result<Self> {
        if !(merge_tol.is_finite() && merge_tol >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "merge tolerance must be finite and non-negative, got {merge_tol}"
            )));
        }
        let terms: Vec<_> = terms.into_iter().collect();
        if terms.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite("coherent term"));
        }
        Ok(Self::from_raw(terms, merge_tol))
    }

    /// Internal constructor for terms already known to be finite.
    pub(crate) fn from_raw(raw: Vec<CoherentTerm>, merge_tol: f64) -> Self {
        let mut merged: Vec<CoherentTerm> = Vec::with_capacity(raw.len());
        for term in raw {
            match merged
                .iter_mut()
                .find(|m| (m.amp - term.amp).norm() <= merge_tol)
            {
                Some(m) => m.coeff += term.coeff,
                None => merged.push(term),
            }
        }
        merged.retain(|t| t.coeff.norm_sqr() != 0.0);
        merged.sort_by(term_order);
        Self {
            terms: merged,
            merge_tol,
        }
    }

    /// The empty sum (the zero vector).
    pub fn empty() -> Self {
        Self {
            terms: Vec::new(),
            merge_tol: DEFAULT_MERGE_TOL,
        }
    }

    /// `1·|amp⟩`.
    pub fn coherent(amp: C64) -> Result<Self> {
        Self::new([CoherentTerm::new(C64::new(1.0, 0.0), amp)])
    }

    pub fn vacuum() -> Self {
        Self::from_raw(
            vec![CoherentTerm::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0))],
            DEFAULT_MERGE_TOL,
        )
    }

    pub fn terms(&self) -> &[CoherentTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn merge_tol(&self) -> f64 {
        self.merge_tol
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for a in &self.terms {
            let ca = a.coeff.conj();
            for b in &other.terms {
                acc += ca * b.coeff * coherent_overlap(a.amp, b.amp);
            }
        }
        acc
    }

    /// `‖self‖²`, summed as `Σ|c_i|² + 2 Σ_{i<j} Re(c_i* c_j ⟨β_i|β_j⟩)` so
    /// the result is real by construction.
    pub fn norm_sq(&self) -> f64 {
        let mut total = 0.0;
        for (i, a) in self.terms.iter().enumerate() {
            total += a.coeff.norm_sqr();
            let ca = a.coeff.conj();
            for b in &self.terms[i + 1..] {
                total += 2.0 * (ca * b.coeff * coherent_overlap(a.amp, b.amp)).re;
            }
        }
        total
    }

    /// Rescales to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sq();
        if !(n > 0.0) {
            return Err(Error::ZeroNorm);
        }
        Ok(self * C64::new(n.sqrt().recip(), 0.0))
    }

    /// Multiplies every amplitude by `e^{iθ}`, i.e. applies `e^{iθ a†a}`.
    pub fn rotate(&self, theta: f64) -> Self {
        let phase = C64::from_polar(1.0, theta);
        Self::from_raw(
            self.terms
                .iter()
                .map(|t| CoherentTerm::new(t.coeff, t.amp * phase))
                .collect(),
            self.merge_tol,
        )
    }

    /// Applies `a^K`, using `a^K|β⟩ = β^K|β⟩`. The result is not normalized.
    pub fn apply_annihilation_power(&self, k: u32) -> Self {
        Self::from_raw(
            self.terms
                .iter()
                .map(|t| CoherentTerm::new(t.coeff * t.amp.powu(k), t.amp))
                .collect(),
            self.merge_tol,
        )
    }
}

fn term_order(a: &CoherentTerm, b: &CoherentTerm) -> Ordering {
    a.amp
        .arg()
        .total_cmp(&b.amp.arg())
        .then(a.amp.norm().total_cmp(&b.amp.norm()))
        .then(a.coeff.arg().total_cmp(&b.coeff.arg()))
}

impl Add for &CoherentSuperposition {
    type Output = CoherentSuperposition;

    fn add(self, rhs: Self) -> CoherentSuperposition {
        let raw = self.terms.iter().chain(rhs.terms.iter()).copied().collect();
        CoherentSuperposition::from_raw(raw, self.merge_tol)
    }
}

impl Mul<C64> for &CoherentSuperposition {
    type Output = CoherentSuperposition;

    fn mul(self, rhs: C64) -> CoherentSuperposition {
        let raw = self
            .terms
            .iter()
            .map(|t| CoherentTerm::new(t.coeff * rhs, t.amp))
            .collect();
        CoherentSuperposition::from_raw(raw, self.merge_tol)
    }
}

/// Global-phase-insensitive overlap `|⟨a|b⟩|² / (‖a‖²‖b‖²)`.
pub fn fidelity(a: &CoherentSuperposition, b: &CoherentSuperposition) -> Result<f64> {
    let na = a.norm_sq();
    let nb = b.norm_sq();
    if !(na > 0.0 && nb > 0.0) {
        return Err(Error::ZeroNorm);
    }
    Ok(a.inner(b).norm_sqr() / (na * nb))
}

/// Sum of all pairwise overlaps among `K` coherent states spaced evenly on a
/// circle of squared radius `r_sq`,
///
/// `S(r², K) = K + 2 Σ_{q=1}^{K−1} q cos[r² sin(2πq/K)] exp[r²(cos(2πq/K) − 1)]`.
///
/// The unit-norm circle state carries coefficient `S^{-1/2}` on each component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramSum {
    pub r_sq: f64,
    pub k: usize,
    pub value: f64,
}

impl GramSum {
    /// Coefficient that normalizes the equally weighted circle state.
    pub fn circle_normalization(&self) -> f64 {
        self.value.sqrt().recip()
    }
}

fn check_gram_args(r_sq: f64, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("K must be at least 1".into()));
    }
    if !(r_sq.is_finite() && r_sq >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "r² must be finite and non-negative, got {r_sq}"
        )));
    }
    Ok(())
}

/// Evaluates `S(r², K)` as `K² e^{−r²} Σ_{n ≡ 0 (mod K)} r^{2n} / n!`.
///
/// Expanding each overlap in the number basis, the sum over the `K` roots of
/// unity keeps only photon numbers divisible by `K`. Every term is positive,
/// so unlike [`gram_sum_brace`] this stays accurate when `S ≪ K²`.
pub fn gram_sum(r_sq: f64, k: usize) -> Result<GramSum> {
    check_gram_args(r_sq, k)?;
    Ok(GramSum {
        r_sq,
        k,
        value: phased_gram_value(r_sq, k, 0),
    })
}

/// `Σ_{l,l'} e^{2πij(l−l')/K} ⟨α_{l'}|α_l⟩ = K² e^{−r²} Σ_{n ≡ −j (mod K)} r^{2n}/n!`.
fn phased_gram_value(r_sq: f64, k: usize, j: usize) -> f64 {
    let kf = k as f64;
    let first = (k - j % k) % k;
    if r_sq == 0.0 {
        return if first == 0 { kf * kf } else { 0.0 };
    }
    let ln_r_sq = r_sq.ln();
    let mut ln_fact: f64 = (2..=first).map(|m| (m as f64).ln()).sum();
    let mut total = 0.0;
    let mut n = first;
    loop {
        let term = (n as f64 * ln_r_sq - ln_fact - r_sq).exp();
        total += term;
        // terms shrink geometrically once n passes the Poisson mean
        if (n as f64 > r_sq && term <= total * 1e-17) || n > 1_000_000 {
            break;
        }
        for m in n + 1..=n + k {
            ln_fact += (m as f64).ln();
        }
        n += k;
    }
    kf * kf * total
}

/// `S(r², K)` summed literally from the brace expression. Loses relative
/// accuracy through cancellation once `S` is many orders below `K`.
pub fn gram_sum_brace(r_sq: f64, k: usize) -> Result<GramSum> {
    check_gram_args(r_sq, k)?;
    let kf = k as f64;
    let tail: f64 = (1..k)
        .map(|q| {
            let angle = 2.0 * PI * q as f64 / kf;
            q as f64 * (r_sq * angle.sin()).cos() * (r_sq * (angle.cos() - 1.0)).exp()
        })
        .sum();
    Ok(GramSum {
        r_sq,
        k,
        value: kf + 2.0 * tail,
    })
}

/// The `K`-photon coherent state `|α, K, j⟩ ∝ Σ_l e^{2πijl/K} |α e^{2πil/K}⟩`,
/// normalized to unit norm.
///
/// For `j = 0` the coefficient is `S(r², K)^{-1/2}`. Other `j` use the
/// phase-weighted Gram sum, which only collects photon numbers `n ≡ −j (mod K)`.
pub fn k_photon_coherent(alpha: C64, k: usize, j: usize) -> Result<CoherentSuperposition> {
    if k == 0 {
        return Err(Error::InvalidArgument("K must be at least 1".into()));
    }
    if j >= k {
        return Err(Error::InvalidArgument(format!(
            "j = {j} out of range for K = {k}"
        )));
    }
    if !alpha.is_finite() {
        return Err(Error::NonFinite("alpha"));
    }
    let kf = k as f64;
    let raw = (0..k).map(|l| {
        let angle = 2.0 * PI * l as f64 / kf;
        CoherentTerm::new(
            C64::from_polar(1.0, angle * j as f64),
            alpha * C64::from_polar(1.0, angle),
        )
    });
    let weight = phased_gram_value(alpha.norm_sqr(), k, j);
    if !(weight > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let norm = weight.sqrt().recip();
    let scaled = raw.map(|t| CoherentTerm::new(t.coeff * norm, t.amp)).collect();
    Ok(CoherentSuperposition::from_raw(scaled, DEFAULT_MERGE_TOL))
}

/// `𝒩_F(r², k) = 𝒩(r², 4k) / (k 𝒩(r², 2k))` with `𝒩 = S^{-1/2}`.
pub fn fan_normalization(r_sq: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("fan index k must be at least 1".into()));
    }
    let outer = gram_sum(r_sq, 4 * k)?.circle_normalization();
    let inner = gram_sum(r_sq, 2 * k)?.circle_normalization();
    Ok(outer / (k as f64 * inner))
}

/// The fan-state `|α, 2k⟩_F = 𝒩_F Σ_{p=0}^{2k−1} |α e^{iπp/2k}, 2k⟩`.
///
/// After merging this has exactly `4k` components at `α e^{iπm/2k}` (a single
/// vacuum term when `α = 0`).
pub fn fan_state(alpha: C64, k: usize) -> Result<CoherentSuperposition> {
    if k == 0 {
        return Err(Error::InvalidArgument("fan index k must be at least 1".into()));
    }
    if !alpha.is_finite() {
        return Err(Error::NonFinite("alpha"));
    }
    let r_sq = alpha.norm_sqr();
    let circle = 2 * k;
    let weight = fan_normalization(r_sq, k)? * gram_sum(r_sq, circle)?.circle_normalization();
    let mut raw = Vec::with_capacity(circle * circle);
    for p in 0..circle {
        let alpha_p = alpha * C64::from_polar(1.0, PI * p as f64 / circle as f64);
        for q in 0..circle {
            let amp = alpha_p * C64::from_polar(1.0, 2.0 * PI * q as f64 / circle as f64);
            raw.push(CoherentTerm::new(C64::new(weight, 0.0), amp));
        }
    }
    Ok(CoherentSuperposition::from_raw(raw, DEFAULT_MERGE_TOL))
}
