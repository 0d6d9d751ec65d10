use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::GeneratorSet;
use crate::error::{Error, Result};
use crate::pauli::{PauliString, Phase};
use crate::spinor::{orthogonal_pair, EigenstateSpec, Sign};
use crate::statevector::{apply_pauli, sample_bitstrings, Histogram, SampleStream, StateVector};

/// Tolerance on `⟨ψ_i|ψ_j⟩ = δ_ij` for the reflection states.
pub const ORTHONORMALITY_TOLERANCE: f64 = 1e-10;

fn check_angle(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::parameter(format!("θ = {theta} outside (0, π/2)")));
    }
    Ok(())
}

/// Round count `k = ⌊π/(4θ) - ½⌉`, nearest integer with ties rounded up.
pub fn grover_iterations(theta: f64) -> Result<u32> {
    check_angle(theta)?;
    let x = PI / (4.0 * theta) - 0.5;
    Ok((x + 0.5).floor().max(0.0) as u32)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchTask {
    pub theta: f64,
    pub i: usize,
    pub j: usize,
    pub eigen_spec: EigenstateSpec,
    pub shots: u64,
}

/// States and operators of one search: bad state `|α⟩ = |Γ_j⟩`, good state
/// `|β⟩ = Γ_iΓ_j|α⟩`, initial `cos θ|α⟩ + sin θ|β⟩` and oracle `λΓ_j`, which
/// fixes `|α⟩` and negates `|β⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchSetup {
    pub theta: f64,
    pub alpha: StateVector,
    pub beta: StateVector,
    pub initial: StateVector,
    pub oracle: PauliString,
}

pub fn search_setup(task: &SearchTask, gens: &GeneratorSet) -> Result<SearchSetup> {
    check_angle(task.theta)?;
    gens.check_index(task.i)?;
    gens.check_index(task.j)?;
    if task.eigen_spec.j != task.j {
        return Err(Error::parameter(format!(
            "eigenstate is for Γ_{} but the oracle is Γ_{}",
            task.eigen_spec.j, task.j
        )));
    }
    let (alpha, beta) = orthogonal_pair(task.i, &task.eigen_spec, gens)?;
    let initial = alpha.combine(
        Complex64::new(task.theta.cos(), 0.0),
        &beta,
        Complex64::new(task.theta.sin(), 0.0),
    )?;
    let gamma = gens.gamma(task.j)?;
    let oracle = match task.eigen_spec.eigenvalue() {
        Sign::Plus => gamma.clone(),
        Sign::Minus => gamma.scaled(Phase::MINUS_ONE),
    };
    Ok(SearchSetup {
        theta: task.theta,
        alpha,
        beta,
        initial,
        oracle,
    })
}

impl SearchSetup {
    /// One round: oracle, then reflection `2|ψ⟩⟨ψ| - I` about the initial state.
    pub fn iterate(&self, psi: &StateVector) -> Result<StateVector> {
        let marked = apply_pauli(&self.oracle, psi)?;
        reflect_about(std::slice::from_ref(&self.initial), &marked)
    }

    /// `[ψ_0, ψ_1, …, ψ_k]`.
    pub fn trajectory(&self, k: u32) -> Result<Vec<StateVector>> {
        let mut states = Vec::with_capacity(k as usize + 1);
        states.push(self.initial.clone());
        for _ in 0..k {
            let next = self.iterate(states.last().expect("non-empty"))?;
            states.push(next);
        }
        Ok(states)
    }

    /// `|⟨β|ψ⟩|²`.
    pub fn p_solution(&self, psi: &StateVector) -> Result<f64> {
        self.beta.overlap(psi)
    }

    /// `cos((2k+1)θ)|α⟩ + sin((2k+1)θ)|β⟩`.
    pub fn closed_form(&self, k: u32) -> Result<StateVector> {
        let angle = (2 * k + 1) as f64 * self.theta;
        self.alpha.combine(
            Complex64::new(angle.cos(), 0.0),
            &self.beta,
            Complex64::new(angle.sin(), 0.0),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub final_state: StateVector,
    pub p_solution_exact: f64,
    /// Empty when the task has zero shots.
    pub histogram: Histogram,
    pub k_used: u32,
}

/// Runs `grover_iterations(θ)` rounds and samples the final state.
pub fn grover_search(task: &SearchTask, gens: &GeneratorSet, stream: SampleStream) -> Result<SearchOutcome> {
    let setup = search_setup(task, gens)?;
    let k_used = grover_iterations(task.theta)?;
    let final_state = setup
        .trajectory(k_used)?
        .pop()
        .expect("trajectory holds the initial state");
    let p_solution_exact = setup.p_solution(&final_state)?;
    let histogram = if task.shots == 0 {
        Histogram {
            n_qubits: final_state.n_qubits(),
            ..Default::default()
        }
    } else {
        sample_bitstrings(&final_state, task.shots, stream)?
    };
    Ok(SearchOutcome {
        final_state,
        p_solution_exact,
        histogram,
        k_used,
    })
}

/// `(2 Σ_i |ψ_i⟩⟨ψ_i| - I) φ`.
pub fn reflect_about(states: &[StateVector], phi: &StateVector) -> Result<StateVector> {
    let mut out: Vec<Complex64> = phi.amplitudes().iter().map(|a| -a).collect();
    for s in states {
        let w = 2.0 * s.inner(phi)?;
        for (o, a) in out.iter_mut().zip(s.amplitudes()) {
            *o += w * a;
        }
    }
    StateVector::from_amplitudes(phi.n_qubits(), out)
}

/// `Ĝ = (2 Σ |ψ_i⟩⟨ψ_i| - I) Π Ô_i` over `k` orthonormal states and `k`
/// mutually commuting Pauli-string oracles.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedGroverSpec {
    psi_states: Vec<StateVector>,
    oracles: Vec<PauliString>,
}

impl GeneralizedGroverSpec {
    pub fn new(psi_states: Vec<StateVector>, oracles: Vec<PauliString>) -> Result<Self> {
        let first = psi_states
            .first()
            .ok_or_else(|| Error::parameter("generalized Grover operator needs at least one state"))?;
        let n = first.n_qubits();
        if oracles.len() != psi_states.len() {
            return Err(Error::parameter(format!(
                "{} states but {} oracles",
                psi_states.len(),
                oracles.len()
            )));
        }
        for o in &oracles {
            if o.num_qubits() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: o.num_qubits(),
                });
            }
        }
        for (a, x) in psi_states.iter().enumerate() {
            for (b, y) in psi_states.iter().enumerate().skip(a) {
                let g = x.inner(y)?;
                let want = if a == b { 1.0 } else { 0.0 };
                if (g - Complex64::new(want, 0.0)).norm() > ORTHONORMALITY_TOLERANCE {
                    return Err(Error::contract(format!(
                        "reflection states are not orthonormal: ⟨ψ_{}|ψ_{}⟩ = {g}",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        for (a, x) in oracles.iter().enumerate() {
            for y in &oracles[a + 1..] {
                if x.anticommutes(y)? {
                    return Err(Error::contract(format!(
                        "oracles {x} and {y} do not commute, so their product order matters"
                    )));
                }
            }
        }
        Ok(GeneralizedGroverSpec { psi_states, oracles })
    }

    pub fn k_states(&self) -> usize {
        self.psi_states.len()
    }

    pub fn psi_states(&self) -> &[StateVector] {
        &self.psi_states
    }

    pub fn oracles(&self) -> &[PauliString] {
        &self.oracles
    }
}

/// Oracles in ascending index order, then the multi-state reflection.
pub fn generalized_grover_apply(spec: &GeneralizedGroverSpec, psi: &StateVector) -> Result<StateVector> {
    let mut phi = psi.clone();
    for o in &spec.oracles {
        phi = apply_pauli(o, &phi)?;
    }
    reflect_about(&spec.psi_states, &phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{build_generators, GeneratorConvention};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    fn task(n: usize, theta: f64) -> SearchTask {
        SearchTask {
            theta,
            i: 2,
            j: 1,
            eigen_spec: EigenstateSpec::principal(1, n),
            shots: 1000,
        }
    }

    #[test]
    fn iteration_counts() {
        assert_eq!(grover_iterations(FRAC_PI_6).unwrap(), 1);
        assert_eq!(grover_iterations(PI / 14.0).unwrap(), 3);
        assert_eq!(grover_iterations(PI / 10.0).unwrap(), 2);
        assert_eq!(grover_iterations(0.9).unwrap(), 0);
        assert_eq!(grover_iterations(1.5).unwrap(), 0);
        // π/(4θ) - ½ = ½ exactly, rounded up
        assert_eq!(grover_iterations(FRAC_PI_4).unwrap(), 1);
        assert!(grover_iterations(0.0).is_err());
        assert!(grover_iterations(FRAC_PI_2).is_err());
    }

    #[test]
    fn pi_over_six_lands_on_beta() {
        let gens = build_generators(2, GeneratorConvention::XPrefix, false).unwrap();
        let out = grover_search(&task(2, FRAC_PI_6), &gens, SampleStream::new(1, 0)).unwrap();
        assert_eq!(out.k_used, 1);
        assert!((out.p_solution_exact - 1.0).abs() < 1e-10);
        assert_eq!(out.histogram.total(), 1000);
    }

    #[test]
    fn pi_over_fourteen_lands_on_beta() {
        let gens = build_generators(3, GeneratorConvention::XPrefix, false).unwrap();
        let mut t = task(3, PI / 14.0);
        t.i = 5;
        t.j = 2;
        t.eigen_spec = EigenstateSpec::principal(2, 3);
        let out = grover_search(&t, &gens, SampleStream::new(1, 0)).unwrap();
        assert_eq!(out.k_used, 3);
        assert!((out.p_solution_exact - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_rounds_keep_the_prior() {
        let gens = build_generators(2, GeneratorConvention::XPrefix, false).unwrap();
        let t = task(2, 1.0);
        let out = grover_search(&t, &gens, SampleStream::new(1, 0)).unwrap();
        assert_eq!(out.k_used, 0);
        assert!((out.p_solution_exact - 1.0f64.sin().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn negative_eigenvalue_branch_still_marks_beta() {
        let gens = build_generators(3, GeneratorConvention::XPrefix, false).unwrap();
        let t = SearchTask {
            theta: 0.2,
            i: 1,
            j: 3,
            eigen_spec: EigenstateSpec {
                j: 3,
                signs: vec![Sign::Minus, Sign::Plus],
                middle_sign: Sign::Plus,
            },
            shots: 0,
        };
        let setup = search_setup(&t, &gens).unwrap();
        for (k, psi) in setup.trajectory(6).unwrap().iter().enumerate() {
            assert!(psi.distance(&setup.closed_form(k as u32).unwrap()).unwrap() < 1e-9);
        }
    }

    #[test]
    fn non_orthonormal_states_are_rejected() {
        let a = StateVector::basis(2, 0).unwrap();
        let b = StateVector::normalized(2, vec![Complex64::new(1.0, 0.0); 4]).unwrap();
        let o = "ZI".parse::<PauliString>().unwrap();
        let err = GeneralizedGroverSpec::new(vec![a, b], vec![o.clone(), o]).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn non_commuting_oracles_are_rejected() {
        let a = StateVector::basis(2, 0).unwrap();
        let b = StateVector::basis(2, 3).unwrap();
        let err = GeneralizedGroverSpec::new(
            vec![a, b],
            vec!["XI".parse().unwrap(), "ZI".parse().unwrap()],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn single_state_reduces_to_a_grover_round() {
        let gens = build_generators(2, GeneratorConvention::XPrefix, false).unwrap();
        let setup = search_setup(&task(2, 0.3), &gens).unwrap();
        let spec = GeneralizedGroverSpec::new(vec![setup.initial.clone()], vec![setup.oracle.clone()]).unwrap();
        let a = generalized_grover_apply(&spec, &setup.initial).unwrap();
        let b = setup.iterate(&setup.initial).unwrap();
        assert!(a.distance(&b).unwrap() < 1e-14);
    }
}
