//! Test-only reference implementations, kept independent of the crate's
//! engines.
#![allow(dead_code)]

use fanstate_core::{AtomPreparation, Outcome, ProtocolStep, C64};
use rand::Rng;
use std::f64::consts::PI;

/// Number-basis coefficients of `|α⟩` from the closed form
/// `exp(−r²/2 + n ln r − ½ ln n!) e^{i n arg α}`.
pub fn fock_expansion(alpha: C64, dim: usize) -> Vec<C64> {
    let r = alpha.norm();
    let theta = alpha.arg();
    let mut ln_fact = 0.0;
    (0..dim)
        .map(|n| {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            if r == 0.0 {
                return if n == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            }
            let modulus = (-0.5 * r * r + n as f64 * r.ln() - 0.5 * ln_fact).exp();
            C64::from_polar(modulus, n as f64 * theta)
        })
        .collect()
}

pub fn fock_superposition(terms: &[(C64, C64)], dim: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); dim];
    for &(coeff, amp) in terms {
        for (o, a) in out.iter_mut().zip(fock_expansion(amp, dim)) {
            *o += coeff * a;
        }
    }
    out
}

pub fn fock_inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn fock_norm_sq(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn random_complex<R: Rng>(rng: &mut R, max_modulus: f64) -> C64 {
    C64::from_polar(max_modulus * rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>())
}

pub fn random_prep<R: Rng>(rng: &mut R) -> AtomPreparation {
    loop {
        let xi = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let eta = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if xi.norm_sqr() + eta.norm_sqr() > 1e-3 {
            return AtomPreparation::normalized(xi, eta).unwrap();
        }
    }
}

pub fn random_outcome<R: Rng>(rng: &mut R) -> Outcome {
    if rng.gen::<bool>() {
        Outcome::Plus
    } else {
        Outcome::Minus
    }
}

pub fn random_steps<R: Rng>(rng: &mut R, n: usize) -> Vec<ProtocolStep> {
    (0..n)
        .map(|_| {
            ProtocolStep::new(random_prep(rng), rng.gen_range(0.0..2.0 * PI), random_outcome(rng)).unwrap()
        })
        .collect()
}
