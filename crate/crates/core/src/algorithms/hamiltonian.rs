use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::clifford::GeneratorSet;
use crate::error::{Error, Result};
use crate::spinor::{orthogonal_pair, EigenstateSpec};
use crate::statevector::{apply_pauli, apply_rotor_factor, StateVector};

/// Sign convention of the evolution, echoed in experiment records.
pub const EVOLUTION_CONVENTION: &str =
    "psi(t) = exp(+t*theta*G_i*G_j) psi(0), i.e. H = +i*theta*G_i*G_j with psi(t) = exp(-iHt) psi(0)";

/// Time at which `ψ(t)` reaches `Γ_i|Γ_j⟩` up to phase: `(1+t)θ = π/2`.
pub fn readout_time(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::parameter(format!("θ = {theta} outside (0, π/2)")));
    }
    Ok(PI / (2.0 * theta) - 1.0)
}

/// `exp(tθ Γ_iΓ_j) ψ`.
pub fn evolve(i: usize, j: usize, theta: f64, t: f64, gens: &GeneratorSet, psi: &StateVector) -> Result<StateVector> {
    apply_rotor_factor(i, j, t * theta, gens, psi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSearch {
    pub theta: f64,
    pub t_star: f64,
    #[serde(skip)]
    pub initial: Option<StateVector>,
    #[serde(skip)]
    pub target: Option<StateVector>,
    #[serde(skip)]
    pub final_state: Option<StateVector>,
    /// `|⟨target|ψ(t*)⟩|²`.
    pub overlap: f64,
}

/// Prepares `R_ij(θ)|Γ_j⟩`, evolves it for `t*` and reports the overlap with
/// `Γ_i|Γ_j⟩`.
pub fn hamiltonian_search(
    theta: f64,
    i: usize,
    spec: &EigenstateSpec,
    gens: &GeneratorSet,
) -> Result<HamiltonianSearch> {
    let t_star = readout_time(theta)?;
    let j = spec.j;
    let (alpha, _) = orthogonal_pair(i, spec, gens)?;
    let initial = apply_rotor_factor(i, j, theta, gens, &alpha)?;
    let target = apply_pauli(gens.gamma(i)?, &alpha)?;
    let final_state = evolve(i, j, theta, t_star, gens, &initial)?;
    let overlap = target.overlap(&final_state)?;
    Ok(HamiltonianSearch {
        theta,
        t_star,
        initial: Some(initial),
        target: Some(target),
        final_state: Some(final_state),
        overlap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{build_generators, GeneratorConvention};
    use crate::spinor::eigenstate;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn readout_times() {
        assert!((readout_time(FRAC_PI_4).unwrap() - 1.0).abs() < 1e-15);
        assert!((readout_time(FRAC_PI_6).unwrap() - 2.0).abs() < 1e-14);
        assert!(readout_time(0.0).is_err());
        assert!(readout_time(FRAC_PI_2).is_err());
    }

    #[test]
    fn reaches_target_for_several_angles() {
        let gens = build_generators(3, GeneratorConvention::XPrefix, false).unwrap();
        for theta in [0.05, 0.3, FRAC_PI_6, FRAC_PI_4, 1.2] {
            let r = hamiltonian_search(theta, 4, &EigenstateSpec::principal(2, 3), &gens).unwrap();
            assert!((r.overlap - 1.0).abs() < 1e-10, "θ = {theta}: {}", r.overlap);
        }
    }

    #[test]
    fn overlap_at_time_zero_is_sin_squared() {
        let gens = build_generators(2, GeneratorConvention::XPrefix, false).unwrap();
        let spec = EigenstateSpec::principal(1, 2);
        let alpha = eigenstate(&spec, &gens).unwrap();
        let target = apply_pauli(gens.gamma(3).unwrap(), &alpha).unwrap();
        let theta = 0.4;
        let psi0 = apply_rotor_factor(3, 1, theta, &gens, &alpha).unwrap();
        let still = evolve(3, 1, theta, 0.0, &gens, &psi0).unwrap();
        assert!((target.overlap(&still).unwrap() - theta.sin().powi(2)).abs() < 1e-12);
    }
}
