mod common;

use approx::assert_relative_eq;
use common::{fock_inner, fock_norm_sq, fock_superposition};
use fanstate_core::{
    coherent_overlap, fan_normalization, fan_state, fidelity, gram_sum, gram_sum_brace, k_photon_coherent, CoherentSuperposition,
    CoherentTerm, GramSum, C64,
};
use proptest::prelude::*;
use std::f64::consts::PI;

const D: usize = 60;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn sup(terms: &[(C64, C64)]) -> CoherentSuperposition {
    CoherentSuperposition::new(terms.iter().map(|&(k, a)| CoherentTerm::new(k, a))).unwrap()
}

// Frozen values from an mpmath number-basis sum at D = 60, 40 digits.
const OVERLAP_2_2I: (f64, f64) = (-0.011971900521662590793, -0.013861321214152957694);
const OVERLAP_NEG1_1: f64 = 0.13533528323661269189;
const CAT_NORM: f64 = 0.56766764161830634595;
const QUARTET_NORM: f64 = 0.38321687598235964329;
const GRAM_1_2: f64 = 2.2706705664732253838;
const FID_OPPOSITE: f64 = 0.018315638888734180294;

#[test]
fn overlap_matches_fock_sum() {
    let got = coherent_overlap(c(2.0, 0.0), c(0.0, 2.0));
    assert_relative_eq!(got.re, OVERLAP_2_2I.0, epsilon = 1e-15);
    assert_relative_eq!(got.im, OVERLAP_2_2I.1, epsilon = 1e-15);
    let expected = (-4.0f64).exp() * C64::from_polar(1.0, 4.0);
    assert!((got - expected).norm() < 1e-16);
    assert_relative_eq!(coherent_overlap(c(-1.0, 0.0), c(1.0, 0.0)).re, OVERLAP_NEG1_1, epsilon = 1e-15);
}

#[test]
fn inner_norm_and_fidelity_examples() {
    let one = c(1.0, 0.0);
    let cat = sup(&[(c(0.5, 0.0), one), (c(0.5, 0.0), -one)]);
    assert_relative_eq!(cat.inner(&cat).re, CAT_NORM, epsilon = 1e-15);
    assert_relative_eq!(CAT_NORM, 0.5 * (1.0 + (-2.0f64).exp()), epsilon = 1e-15);

    let quartet = sup(&[
        (c(0.25, 0.0), one),
        (c(0.25, 0.0), -one),
        (c(0.25, 0.0), C64::i()),
        (c(0.25, 0.0), -C64::i()),
    ]);
    assert_relative_eq!(quartet.norm_sq(), QUARTET_NORM, epsilon = 1e-15);

    let single = CoherentSuperposition::coherent(c(0.3, 2.0)).unwrap();
    assert_relative_eq!(single.norm_sq(), 1.0, epsilon = 1e-15);

    let a = CoherentSuperposition::coherent(one).unwrap();
    let b = CoherentSuperposition::coherent(-one).unwrap();
    assert_relative_eq!(fidelity(&a, &b).unwrap(), FID_OPPOSITE, epsilon = 1e-15);
}

#[test]
fn gram_sum_two_components() {
    assert_relative_eq!(gram_sum(1.0, 2).unwrap().value, GRAM_1_2, epsilon = 1e-14);
    let brute = {
        let amps = [c(1.0, 0.0), c(-1.0, 0.0)];
        amps.iter()
            .flat_map(|a| amps.iter().map(move |b| coherent_overlap(*a, *b)))
            .sum::<C64>()
    };
    assert_relative_eq!(brute.re, GRAM_1_2, epsilon = 1e-14);
}

#[test]
fn embedded_states_match_analytic_norms() {
    let terms = [(c(0.3, -0.2), c(1.5, 0.5)), (c(-0.7, 0.1), c(-0.4, 1.9)), (c(0.2, 0.2), c(0.0, 0.0))];
    let s = sup(&terms);
    let v = fock_superposition(&terms, D);
    assert_relative_eq!(s.norm_sq(), fock_norm_sq(&v), epsilon = 1e-13);
    let other = [(c(1.0, 0.0), c(0.5, -1.0))];
    let w = fock_superposition(&other, D);
    let ip = s.inner(&sup(&other));
    assert!((ip - fock_inner(&v, &w)).norm() < 1e-13);
}

#[test]
fn fan_state_with_k_one_equals_simplest_fan() {
    for alpha in [c(1.0, 0.0), c(2.0, 0.0), c(0.3, 1.2)] {
        let f = fan_state(alpha, 1).unwrap();
        let expected = sup(&[
            (c(1.0, 0.0), alpha),
            (c(1.0, 0.0), -alpha),
            (c(1.0, 0.0), alpha * C64::i()),
            (c(1.0, 0.0), -alpha * C64::i()),
        ]);
        assert_relative_eq!(fidelity(&f, &expected).unwrap(), 1.0, epsilon = 1e-13);
        assert_relative_eq!(f.norm_sq(), 1.0, epsilon = 1e-13);
    }
}

#[test]
fn fan_state_equals_circle_state_of_eight() {
    let alpha = c(1.5, 0.0);
    let f = fan_state(alpha, 2).unwrap();
    assert_eq!(f.len(), 8);
    let k8 = k_photon_coherent(alpha, 8, 0).unwrap();
    assert_relative_eq!(fidelity(&f, &k8).unwrap(), 1.0, epsilon = 1e-12);
}

#[test]
fn fan_components_sit_on_half_turn_spacing() {
    let alpha = c(1.1, 0.7);
    for k in [1usize, 2, 3, 4] {
        let f = fan_state(alpha, k).unwrap();
        assert_eq!(f.len(), 4 * k);
        for m in 0..4 * k {
            let target = alpha * C64::from_polar(1.0, PI * m as f64 / (2 * k) as f64);
            assert!(f.terms().iter().any(|t| (t.amp - target).norm() < 1e-12), "missing component {m} for k = {k}");
        }
        let expected = gram_sum(alpha.norm_sqr(), 4 * k).unwrap().circle_normalization();
        for t in f.terms() {
            assert_relative_eq!(t.coeff.re, expected, max_relative = 1e-12);
        }
    }
}

#[test]
fn fan_normalization_from_raw_sum() {
    // Build Σ_p |α_p, 2k⟩ by hand from normalized circle states, then rescale.
    for k in [1usize, 2, 4, 8] {
        for r in [0.5, 1.0, 2.0] {
            let alpha = c(r, 0.0);
            let nf = fan_normalization(r * r, k).unwrap();
            let mut acc = CoherentSuperposition::empty();
            for p in 0..2 * k {
                let alpha_p = alpha * C64::from_polar(1.0, PI * p as f64 / (2 * k) as f64);
                acc = &acc + &k_photon_coherent(alpha_p, 2 * k, 0).unwrap();
            }
            let fan = &acc * c(nf, 0.0);
            assert_relative_eq!(fan.norm_sq(), 1.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn even_circle_states_are_parity_even_odd_ones_are_not() {
    let alpha = c(0.9, 0.4);
    for k in [2usize, 4, 6, 8] {
        let s = k_photon_coherent(alpha, k, 0).unwrap();
        assert_relative_eq!(fidelity(&s, &s.rotate(PI)).unwrap(), 1.0, epsilon = 1e-12);
    }
    for k in [1usize, 3, 5, 7] {
        let s = k_photon_coherent(alpha, k, 0).unwrap();
        assert!(fidelity(&s, &s.rotate(PI)).unwrap() < 1.0 - 1e-6, "K = {k}");
    }
}

#[test]
fn annihilation_power_on_fan_state() {
    let alpha = c(1.2, -0.3);
    for k in [1usize, 2, 4] {
        let f = fan_state(alpha, k).unwrap();
        // the fan-state is the 4k-photon circle state, so a^{4k} is the eigen-operator
        let power = 4 * k as u32;
        let out = f.apply_annihilation_power(power);
        let expected = &f * alpha.powu(power);
        assert!((out.inner(&expected) - expected.norm_sq()).norm() < 1e-10 * expected.norm_sq());
        assert_relative_eq!(fidelity(&out, &f).unwrap(), 1.0, epsilon = 1e-12);
        // a^{2k} flips the sign of every odd component instead
        let half = f.apply_annihilation_power(2 * k as u32);
        let alternating = k_photon_coherent(alpha, 4 * k, 2 * k).unwrap();
        assert_relative_eq!(fidelity(&half, &alternating).unwrap(), 1.0, epsilon = 1e-12);
    }
}

#[test]
fn fan_state_rotation_invariance() {
    let alpha = c(1.7, 0.2);
    for k in [1usize, 2, 4] {
        let f = fan_state(alpha, k).unwrap();
        let rotated = f.rotate(PI / (2 * k) as f64);
        assert_relative_eq!(fidelity(&f, &rotated).unwrap(), 1.0, epsilon = 1e-12);
    }
}

fn arb_complex(max: f64) -> impl Strategy<Value = C64> {
    (-max..max, -max..max).prop_map(|(re, im)| C64::new(re, im))
}

fn arb_superposition() -> impl Strategy<Value = Vec<(C64, C64)>> {
    prop::collection::vec((arb_complex(1.0), arb_complex(2.5)), 0..8)
}

/// Direct double sum over the roots-of-unity amplitudes, plus the sum of
/// moduli (which bounds its own rounding error).
fn brute_gram(r_sq: f64, k: usize) -> (f64, f64) {
    let r = r_sq.sqrt();
    let amps: Vec<C64> = (0..k).map(|q| C64::from_polar(r, 2.0 * PI * q as f64 / k as f64)).collect();
    let overlaps: Vec<C64> = amps
        .iter()
        .flat_map(|a| amps.iter().map(move |b| coherent_overlap(*b, *a)))
        .collect();
    (overlaps.iter().sum::<C64>().re, overlaps.iter().map(|o| o.norm()).sum())
}

proptest! {
    #[test]
    fn merging_preserves_norm(terms in arb_superposition(), dup in 0usize..8) {
        let mut doubled = terms.clone();
        if let Some(&(k, a)) = terms.get(dup % terms.len().max(1)) {
            // split one term into two exact copies
            doubled.retain(|t| *t != (k, a));
            doubled.push((k * 0.5, a));
            doubled.push((k * 0.5, a));
        }
        let direct: f64 = {
            let mut acc = C64::new(0.0, 0.0);
            for (ka, aa) in &doubled {
                for (kb, ab) in &doubled {
                    acc += ka.conj() * kb * coherent_overlap(*aa, *ab);
                }
            }
            acc.re
        };
        let merged = sup(&doubled);
        prop_assert!((merged.norm_sq() - direct).abs() < 1e-12 * direct.max(1.0));
    }

    #[test]
    fn inner_is_conjugate_symmetric(a in arb_superposition(), b in arb_superposition()) {
        let (a, b) = (sup(&a), sup(&b));
        prop_assert!((a.inner(&b) - b.inner(&a).conj()).norm() < 1e-12);
    }

    #[test]
    fn gram_sum_positive_and_bounded(r_sq in 0.0f64..25.0, k in 1usize..=64) {
        let GramSum { value, .. } = gram_sum(r_sq, k).unwrap();
        prop_assert!(value > 0.0);
        prop_assert!(value <= (k * k) as f64 * (1.0 + 1e-12));
    }

    #[test]
    fn gram_sum_matches_pairwise_overlaps(r_sq in 0.0f64..25.0, k in 1usize..=64) {
        let closed = gram_sum(r_sq, k).unwrap().value;
        let (brute, moduli) = brute_gram(r_sq, k);
        // beyond r² ≈ 9 the double sum itself cancels below 1e-10 relative
        let rounding = if r_sq <= 9.0 { 0.0 } else { 32.0 * f64::EPSILON * moduli };
        prop_assert!((closed - brute).abs() <= 1e-10 * brute.abs() + rounding, "closed {closed}, brute {brute}");
        // the literal brace form agrees wherever it is well conditioned
        let brace = gram_sum_brace(r_sq, k).unwrap().value;
        prop_assert!((brace - closed).abs() <= 1e-13 * (k * k) as f64);
    }

    #[test]
    fn fan_state_matches_circle_state(re in -3.0f64..3.0, im in -3.0f64..3.0, ki in 0usize..4) {
        let alpha = C64::new(re, im);
        prop_assume!(alpha.norm() <= 3.0);
        let k = [1usize, 2, 4, 8][ki];
        let f = fan_state(alpha, k).unwrap();
        let circle = k_photon_coherent(alpha, 4 * k, 0).unwrap();
        prop_assert!((fidelity(&f, &circle).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circle_states_are_annihilation_eigenstates(r in 1.0f64..2.5, theta in 0.0f64..6.3, k in 1usize..=8, j in 0usize..8) {
        // below |α| ≈ 1 the high-j states are ~1e-8 in norm before scaling and
        // coherent-basis inner products cancel
        let alpha = C64::from_polar(r, theta);
        let j = j % k;
        let s = k_photon_coherent(alpha, k, j).unwrap();
        prop_assert!((s.norm_sq() - 1.0).abs() < 1e-10);
        let out = s.apply_annihilation_power(k as u32);
        prop_assert!((fidelity(&out, &s).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rotation_preserves_norm(terms in arb_superposition(), theta in -10.0f64..10.0) {
        let s = sup(&terms);
        prop_assert!((s.rotate(theta).norm_sq() - s.norm_sq()).abs() < 1e-12 * s.norm_sq().max(1.0));
    }

    #[test]
    fn global_phase_does_not_change_fidelity(terms in arb_superposition(), phi in 0.0f64..6.3) {
        let s = sup(&terms);
        prop_assume!(s.norm_sq() > 1e-6);
        let f = fidelity(&s, &(&s * C64::from_polar(1.0, phi))).unwrap();
        prop_assert!((f - 1.0).abs() < 1e-10);
        prop_assert!(f <= 1.0 + 1e-12);
    }
}

#[test]
fn gram_sum_in_cancellation_regime() {
    // 50-digit reference from both the brace form and the Poisson series.
    let value = gram_sum(22.94956202323419, 49).unwrap().value;
    assert_relative_eq!(value, 0.002029645920119952727, max_relative = 1e-13);
}
