//! Fidelity-based entanglement witness for the eight-photon state,
//! `W = 1/2 - |ψ⟩⟨ψ| + |ψ'⟩⟨ψ'|`, and its decomposition into local
//! measurement settings.
//!
//! Qubit order follows [`StateVector::prepare_lab_state`]: photons
//! `1, 3, 4, 1', 3', 4'` on qubits 0..=5 and `2, 2'` on 6 and 7.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::statevector::{Ensemble, Observable, SingleQubitFactor, StateVector};

const N: usize = 8;
const PHOTON_2: usize = 6;
const PHOTON_2P: usize = 7;

/// Value of `W` on the maximally mixed state: `1/2 - 1/256 + 1/256`.
pub const MIXED_WITNESS: f64 = 0.5;

/// The target state `|ψ⟩`.
pub fn ideal_psi() -> StateVector {
    StateVector::prepare_lab_state()
}

/// `|ψ'⟩ = ½[|HHH⟩|H'H'H'⟩(|HH'⟩+|VV'⟩) - |VVV⟩|V'V'V'⟩(|HH'⟩-|VV'⟩)]`.
pub fn psi_prime() -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << N];
    let pair = (1 << PHOTON_2) | (1 << PHOTON_2P);
    let rest = (1 << 6) - 1;
    amps[0] = Complex64::new(0.5, 0.0);
    amps[pair] = Complex64::new(0.5, 0.0);
    amps[rest] = Complex64::new(-0.5, 0.0);
    amps[rest | pair] = Complex64::new(0.5, 0.0);
    StateVector::from_amplitudes(N, amps).expect("256 amplitudes")
}

fn check(state: &StateVector) -> Result<()> {
    if state.n() == N {
        Ok(())
    } else {
        Err(Error::QubitCountMismatch {
            expected: N,
            found: state.n(),
        })
    }
}

/// `1/2 - |⟨ψ|state⟩|² + |⟨ψ'|state⟩|²`.
pub fn witness_value(state: &StateVector) -> Result<f64> {
    check(state)?;
    Ok(0.5 - ideal_psi().fidelity(state)? + psi_prime().fidelity(state)?)
}

/// Lower bound on the fidelity with `|ψ⟩` implied by a witness value.
pub fn fidelity_bound(witness: f64) -> f64 {
    0.5 - witness
}

/// `M_k = (-1)^k (cos(kπ/8) X + sin(kπ/8) Y)^⊗8`.
pub fn m_observable(k: usize) -> Observable {
    let alpha = k as f64 * PI / 8.0;
    Observable::new(sign(k), vec![SingleQubitFactor::Equatorial(alpha); N])
}

/// `X₂X₂' M_k X₂X₂'`: conjugation by `X` reflects the angle on `2, 2'`.
pub fn m_conjugated_observable(k: usize) -> Observable {
    let alpha = k as f64 * PI / 8.0;
    m_observable(k)
        .with(PHOTON_2, SingleQubitFactor::Equatorial(-alpha))
        .with(PHOTON_2P, SingleQubitFactor::Equatorial(-alpha))
}

/// `N_k ⊗ |HH'⟩⟨HH'|` and `N_k ⊗ |VV'⟩⟨VV'|`, whose difference is the
/// `k`-th term of the third setting.
pub fn n_observables(k: usize) -> [Observable; 2] {
    let alpha = k as f64 * PI / 6.0;
    let base = Observable::new(sign(k), vec![SingleQubitFactor::Equatorial(alpha); N]);
    [false, true].map(|bit| {
        base.clone()
            .with(PHOTON_2, SingleQubitFactor::Projector(bit))
            .with(PHOTON_2P, SingleQubitFactor::Projector(bit))
    })
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Expectation values of every local setting and the witness they give.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessTerms {
    pub m: Vec<f64>,
    pub m_conjugated: Vec<f64>,
    pub n: Vec<f64>,
    pub value: f64,
}

impl WitnessTerms {
    /// Evaluates every setting with `expect`, then
    /// `W = 1/2 - ½[-mean(M) + mean(X₂X₂' M X₂X₂') + mean(N (P_HH' - P_VV'))]`.
    pub fn evaluate<F>(expect: F) -> Result<Self>
    where
        F: Fn(&Observable) -> Result<f64>,
    {
        let m = (0..8)
            .map(|k| expect(&m_observable(k)))
            .collect::<Result<Vec<_>>>()?;
        let m_conjugated = (0..8)
            .map(|k| expect(&m_conjugated_observable(k)))
            .collect::<Result<Vec<_>>>()?;
        let n = (0..6)
            .map(|k| {
                let [hh, vv] = n_observables(k);
                Ok(expect(&hh)? - expect(&vv)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let value = 0.5 - 0.5 * (-mean(&m) + mean(&m_conjugated) + mean(&n));
        Ok(Self {
            m,
            m_conjugated,
            n,
            value,
        })
    }
}

pub fn witness_terms(state: &StateVector) -> Result<WitnessTerms> {
    check(state)?;
    WitnessTerms::evaluate(|obs| state.expectation(obs))
}

pub fn witness_via_decomposition(state: &StateVector) -> Result<f64> {
    Ok(witness_terms(state)?.value)
}

fn check_ensemble(ensemble: &Ensemble) -> Result<()> {
    ensemble.components.iter().try_for_each(|(_, s)| check(s))
}

pub fn ensemble_witness(ensemble: &Ensemble) -> Result<f64> {
    check_ensemble(ensemble)?;
    ensemble.average(witness_value, MIXED_WITNESS)
}

pub fn ensemble_witness_terms(ensemble: &Ensemble) -> Result<WitnessTerms> {
    check_ensemble(ensemble)?;
    WitnessTerms::evaluate(|obs| ensemble.expectation(obs))
}

/// Witness of `v |ψ⟩⟨ψ| + (1 - v) 1/256`, which is `1/2 - v`.
pub fn depolarized_witness(visibility: f64) -> Result<f64> {
    ensemble_witness(&Ensemble::depolarized(ideal_psi(), visibility))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::Frame;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = crate::TOLERANCE;

    #[test]
    fn ideal_and_prime() {
        let psi = ideal_psi();
        let prime = psi_prime();
        assert!(psi.inner(&prime).unwrap().norm() < TOL);
        assert!((witness_value(&psi).unwrap() + 0.5).abs() < TOL);
        assert!((witness_value(&prime).unwrap() - 1.5).abs() < TOL);
        let uniform = StateVector::plus(8).unwrap();
        assert!((witness_value(&uniform).unwrap() - 0.5).abs() < TOL);
    }

    #[test]
    fn prime_is_conjugated_psi() {
        let mut s = ideal_psi();
        s.x(PHOTON_2).unwrap();
        s.x(PHOTON_2P).unwrap();
        assert!((s.fidelity(&psi_prime()).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn ideal_terms() {
        let t = witness_terms(&ideal_psi()).unwrap();
        let want = [0.0, -0.5, -1.0, -0.5, 0.0, -0.5, -1.0, -0.5];
        for (k, want) in want.iter().enumerate() {
            assert!((t.m[k] - want).abs() < TOL, "M_{k} = {}", t.m[k]);
            assert!((t.m_conjugated[k] + want).abs() < TOL);
        }
        for v in &t.n {
            assert!((v - 1.0).abs() < TOL);
        }
        assert!((t.value + 0.5).abs() < TOL);
    }

    #[test]
    fn decomposition_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            for s in [
                StateVector::random(8, &mut rng).unwrap(),
                StateVector::random_product(8, &mut rng).unwrap(),
            ] {
                let a = witness_value(&s).unwrap();
                let b = witness_via_decomposition(&s).unwrap();
                assert!((a - b).abs() < TOL, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn bound_values() {
        assert!((fidelity_bound(-0.5) - 1.0).abs() < TOL);
        assert!((fidelity_bound(-0.23) - 0.73).abs() < TOL);
        assert!((fidelity_bound(0.0) - 0.5).abs() < TOL);
    }

    #[test]
    fn depolarized_sign_change() {
        for v in [0.0, 0.3, 0.5, 0.7, 1.0] {
            assert!((depolarized_witness(v).unwrap() - (0.5 - v)).abs() < TOL);
        }
        let e = Ensemble::depolarized(ideal_psi(), 0.8);
        let t = ensemble_witness_terms(&e).unwrap();
        assert!((t.value - ensemble_witness(&e).unwrap()).abs() < TOL);
    }

    #[test]
    fn noisy_ensemble_agrees() {
        let e = Ensemble::flip_average(&ideal_psi(), &[0.05; 8], Frame::Lab).unwrap();
        let a = ensemble_witness(&e).unwrap();
        let b = ensemble_witness_terms(&e).unwrap().value;
        assert!((a - b).abs() < TOL);
        assert!(a > -0.5 && a < 0.0);
    }

    #[test]
    fn wrong_size() {
        let s = StateVector::zero(3).unwrap();
        assert!(witness_value(&s).is_err());
        assert!(witness_via_decomposition(&s).is_err());
    }
}
