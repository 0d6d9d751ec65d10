//! Spinor eigenstates of single generators, tensor-product rotors, class
//! signatures and chiral sector membership.
//!
//! Multi-factor states live in one flat register of `n · m` qubits; factor
//! slot `k` (0-based) owns qubits `k·n .. (k+1)·n`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{ChiralityOperator, GeneratorConvention, GeneratorSet};
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::statevector::{
    apply_bivector_exp, apply_pauli, expectation_string, sample_pm_observable, SampleStream, StateVector,
};

/// Tolerance for deciding that `Γ_*ψ = ±ψ`.
pub const CHIRALITY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `sgn` with `sgn(0) = +1`.
    pub fn of(x: f64) -> Sign {
        if x >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Sign, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be +1 or -1, got {other}")),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Branch choices for the closed-form eigenvector of `Γ_j`.
///
/// `signs[q]` picks `(1, ±1)` on qubit `q` before the generator's slot;
/// `middle_sign` picks `(1, ±i)` in the σ₂ slot of `Γ_j` (`j ≤ n`), or
/// `(1,0)` / `(0,1)` in the σ₃ slot of `Γ_{n+j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenstateSpec {
    pub j: usize,
    pub signs: Vec<Sign>,
    pub middle_sign: Sign,
}

impl EigenstateSpec {
    /// All branches `+`, so the eigenvalue is `+1`.
    pub fn principal(j: usize, n: usize) -> Self {
        EigenstateSpec {
            j,
            signs: vec![Sign::Plus; slot_of(j, n).unwrap_or(0)],
            middle_sign: Sign::Plus,
        }
    }

    /// Eigenvalue `λ ∈ {+1, -1}` selected by the branches.
    pub fn eigenvalue(&self) -> Sign {
        self.signs.iter().fold(self.middle_sign, |acc, &s| acc * s)
    }
}

/// Zero-based qubit carrying the σ₂/σ₃ letter of `Γ_j`.
fn slot_of(j: usize, n: usize) -> Option<usize> {
    match j {
        0 => None,
        j if j <= n => Some(j - 1),
        j if j <= 2 * n => Some(j - n - 1),
        _ => None,
    }
}

/// `2^{-k/2}` without rounding for even `k`, one rounding for odd `k`.
fn inverse_sqrt2_pow(k: usize) -> f64 {
    let half = 0.5f64.powi((k / 2) as i32);
    if k % 2 == 1 {
        half * FRAC_1_SQRT_2
    } else {
        half
    }
}

/// Closed-form eigenvector of `Γ_j` under the X-prefix convention:
/// `(1,±1)^{⊗(j-1)} ⊗ (1,±i) ⊗ (1,0)^{⊗(n-j)}` for `j ≤ n` and
/// `(1,±1)^{⊗(j-1)} ⊗ (1,0)^{⊗(n-j+1)}` for the σ₃ generators, normalized.
pub fn eigenstate(spec: &EigenstateSpec, gens: &GeneratorSet) -> Result<StateVector> {
    if gens.convention() != GeneratorConvention::XPrefix {
        return Err(Error::Unsupported(format!(
            "closed-form eigenstates are defined for the X-prefix convention, not {}",
            gens.convention()
        )));
    }
    let n = gens.n();
    let slot = slot_of(spec.j, n).ok_or_else(|| {
        Error::parameter(format!("generator index {} outside [1, {}]", spec.j, 2 * n))
    })?;
    if spec.signs.len() != slot {
        return Err(Error::parameter(format!(
            "Γ_{} needs {slot} branch signs, got {}",
            spec.j,
            spec.signs.len()
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut factors: Vec<[Complex64; 2]> = spec
        .signs
        .iter()
        .map(|s| [one, Complex64::new(s.value(), 0.0)])
        .collect();
    let mut spread = slot;
    if spec.j <= n {
        factors.push([one, Complex64::new(0.0, spec.middle_sign.value())]);
        spread += 1;
    } else {
        factors.push(match spec.middle_sign {
            Sign::Plus => [one, zero],
            Sign::Minus => [zero, one],
        });
    }
    factors.resize(n, [one, zero]);

    let scale = inverse_sqrt2_pow(spread);
    let mut amplitudes = vec![Complex64::new(scale, 0.0)];
    for f in &factors {
        amplitudes = amplitudes
            .iter()
            .flat_map(|a| [a * f[0], a * f[1]])
            .collect();
    }
    StateVector::from_amplitudes(n, amplitudes)
}

/// `(|Γ_j⟩, Γ_iΓ_j|Γ_j⟩)`, two orthonormal states with opposite `Γ_j` eigenvalues.
pub fn orthogonal_pair(
    i: usize,
    spec: &EigenstateSpec,
    gens: &GeneratorSet,
) -> Result<(StateVector, StateVector)> {
    if i == spec.j {
        return Err(Error::parameter(format!("orthogonal pair needs i ≠ j, got {i}")));
    }
    let alpha = eigenstate(spec, gens)?;
    let beta = apply_pauli(&gens.bivector(i, spec.j)?, &alpha)?;
    Ok((alpha, beta))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotorFactor {
    pub i: usize,
    pub j: usize,
    pub theta: f64,
}

/// `exp(θ_1 Γ_{i_1}Γ_{j_1}) ⊗ ⋯ ⊗ exp(θ_m Γ_{i_m}Γ_{j_m})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorRotorSpec {
    pub factors: Vec<RotorFactor>,
}

impl TensorRotorSpec {
    pub fn slots(&self) -> usize {
        self.factors.len()
    }
}

/// Applies each factor's rotor on its own slot.
pub fn apply_tensor_rotor(
    spec: &TensorRotorSpec,
    gens: &GeneratorSet,
    psi: &StateVector,
) -> Result<StateVector> {
    let m = spec.slots();
    if m == 0 {
        return Err(Error::parameter("tensor rotor needs at least one factor"));
    }
    let expected = gens.n() * m;
    if psi.n_qubits() != expected {
        return Err(Error::Dimension {
            expected,
            found: psi.n_qubits(),
        });
    }
    let mut out = psi.clone();
    for (slot, f) in spec.factors.iter().enumerate() {
        if f.i == f.j {
            return Err(Error::parameter(format!("factor {slot} has i = j = {}", f.i)));
        }
        let bivector = gens.bivector(f.i, f.j)?.embed(slot, m)?;
        out = apply_bivector_exp(&bivector, f.theta, &out)?;
    }
    Ok(out)
}

/// `ψ_1 ⊗ ψ_2 ⊗ ⋯`.
pub fn product_state(states: &[StateVector]) -> Result<StateVector> {
    let (first, rest) = states
        .split_first()
        .ok_or_else(|| Error::parameter("product of zero states"))?;
    rest.iter().try_fold(first.clone(), |acc, s| acc.tensor(s))
}

/// `M = I ⊗ ⋯ ⊗ Γ_j ⊗ ⋯ ⊗ I` with `Γ_j` in slot `slot` of `slots`.
pub fn slot_observable(gens: &GeneratorSet, slots: usize, slot: usize, j: usize) -> Result<PauliString> {
    gens.gamma(j)?.embed(slot, slots)
}

/// `(sgn⟨M_1⟩, …, sgn⟨M_m⟩)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSignature {
    pub signs: Vec<Sign>,
}

impl fmt::Display for ClassSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, s) in self.signs.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}1")?;
        }
        f.write_str(")")
    }
}

/// Signs of the observables' expectations: exact for `shots = 0`, otherwise
/// the sign of the empirical mean of `shots` ±1 draws per observable
/// (observable `k` uses `stream.child(k)`).
pub fn class_signature(
    psi: &StateVector,
    observables: &[PauliString],
    shots: u64,
    stream: SampleStream,
) -> Result<ClassSignature> {
    let mut signs = Vec::with_capacity(observables.len());
    for (k, obs) in observables.iter().enumerate() {
        if obs.num_qubits() != psi.n_qubits() {
            return Err(Error::contract(format!(
                "observable {k} acts on {} qubits, state has {}",
                obs.num_qubits(),
                psi.n_qubits()
            )));
        }
        if !obs.is_hermitian() {
            return Err(Error::contract(format!("observable {k} ({obs}) is not Hermitian")));
        }
        let mean = if shots == 0 {
            expectation_string(obs, psi)?.re
        } else {
            let draws = sample_pm_observable(obs, psi, shots, stream.child(k as u64))?;
            draws.iter().map(|&d| d as f64).sum::<f64>() / shots as f64
        };
        signs.push(Sign::of(mean));
    }
    Ok(ClassSignature { signs })
}

/// Chiral sector of one factor slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Plus,
    Minus,
    Mixed,
}

fn check_slots(psi: &StateVector, chir: &ChiralityOperator, slots: usize) -> Result<()> {
    let expected = chir.num_qubits() * slots;
    if slots == 0 || psi.n_qubits() != expected {
        return Err(Error::Dimension {
            expected,
            found: psi.n_qubits(),
        });
    }
    Ok(())
}

/// For each slot: `Plus` if `Γ_*^{(k)}ψ = ψ`, `Minus` if `= -ψ`, else `Mixed`.
pub fn chiral_membership(
    psi: &StateVector,
    chir: &ChiralityOperator,
    slots: usize,
) -> Result<Vec<Membership>> {
    check_slots(psi, chir, slots)?;
    (0..slots)
        .map(|slot| {
            let image = apply_pauli(&chir.string().embed(slot, slots)?, psi)?;
            let mut plus = 0.0;
            let mut minus = 0.0;
            for (a, b) in image.amplitudes().iter().zip(psi.amplitudes()) {
                plus += (a - b).norm_sqr();
                minus += (a + b).norm_sqr();
            }
            Ok(if plus.sqrt() < CHIRALITY_TOLERANCE {
                Membership::Plus
            } else if minus.sqrt() < CHIRALITY_TOLERANCE {
                Membership::Minus
            } else {
                Membership::Mixed
            })
        })
        .collect()
}

/// `P_±^{(slot)} ψ` normalized, with its weight `‖P_±ψ‖²`; `None` when the
/// projection vanishes.
pub fn chiral_projection(
    psi: &StateVector,
    chir: &ChiralityOperator,
    slot: usize,
    slots: usize,
    sector: Sign,
) -> Result<(f64, Option<StateVector>)> {
    check_slots(psi, chir, slots)?;
    let image = apply_pauli(&chir.string().embed(slot, slots)?, psi)?;
    let s = sector.value();
    let projected: Vec<Complex64> = psi
        .amplitudes()
        .iter()
        .zip(image.amplitudes())
        .map(|(a, b)| 0.5 * (a + s * b))
        .collect();
    let weight: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
    if weight < CHIRALITY_TOLERANCE * CHIRALITY_TOLERANCE {
        return Ok((weight, None));
    }
    Ok((weight, Some(StateVector::normalized(psi.n_qubits(), projected)?)))
}
