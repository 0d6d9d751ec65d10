//! Dense complex statevectors and structured Pauli-string application.
//!
//! Basis index bit `n-1-q` holds qubit `q` (tensor factor `q+1`), so factor 1
//! is the most significant bit, the same ordering as
//! [`dense_matrix`](crate::pauli::dense_matrix).

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::GeneratorSet;
use crate::error::{Error, Result};
use crate::pauli::{PauliString, WeightedPauliSum};

/// Largest register the simulator will allocate.
pub const MAX_STATE_QUBITS: usize = 24;

/// Allowed drift of `‖ψ‖` from 1.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Registers at least this large are updated in parallel.
const PARALLEL_MIN_LEN: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_qubits(n_qubits: usize) -> Result<usize> {
    if n_qubits == 0 {
        return Err(Error::parameter("a register needs at least one qubit"));
    }
    if n_qubits > MAX_STATE_QUBITS {
        return Err(Error::Capacity {
            what: "statevector qubit count",
            requested: n_qubits,
            limit: MAX_STATE_QUBITS,
        });
    }
    Ok(1usize << n_qubits)
}

fn norm_of(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

impl StateVector {
    /// Wraps `amplitudes`, which must already have unit norm.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = check_qubits(n_qubits)?;
        if amplitudes.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: amplitudes.len(),
            });
        }
        let norm = norm_of(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::contract(format!("state norm {norm} is not 1")));
        }
        Ok(StateVector { n_qubits, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(n_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = check_qubits(n_qubits)?;
        if amplitudes.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: amplitudes.len(),
            });
        }
        let norm = norm_of(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::parameter("cannot normalize a zero or non-finite vector"));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(StateVector { n_qubits, amplitudes })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = check_qubits(n_qubits)?;
        if index >= dim {
            return Err(Error::parameter(format!("basis index {index} outside [0, {dim})")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amplitudes)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_register(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        self.inner(other).map(|z| z.norm_sqr())
    }

    /// Euclidean distance `‖self - other‖`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        self.check_same_register(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Born-rule probabilities indexed by basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.n_qubits + other.n_qubits;
        check_qubits(n)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        StateVector::from_amplitudes(n, amplitudes)
    }

    /// `a·self + b·other`, which must come out unit-norm.
    pub fn combine(&self, a: Complex64, other: &StateVector, b: Complex64) -> Result<StateVector> {
        self.check_same_register(other)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(x, y)| a * x + b * y)
            .collect();
        StateVector::from_amplitudes(self.n_qubits, amplitudes)
    }

    fn check_same_register(&self, other: &StateVector) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(())
    }
}

/// Bitstring label of basis index `index`, most significant qubit first.
pub fn bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| if index >> (n_qubits - 1 - q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// `s · amplitudes` on a raw amplitude slice of length `2^{s.num_qubits()}`.
///
/// No normalization is involved, so this is linear in the input.
pub fn apply_pauli_raw(s: &PauliString, amplitudes: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = s.num_qubits();
    let dim = check_qubits(n)?;
    if amplitudes.len() != dim {
        return Err(Error::Dimension {
            expected: dim,
            found: amplitudes.len(),
        });
    }
    let (flip, sign, scalar) = s.action_masks();
    // out[b] = scalar · (-1)^{|src & sign|} · in[src], src = b ^ flip
    let gather = |b: usize| {
        let src = b ^ flip;
        let v = scalar * amplitudes[src];
        if (src & sign).count_ones() % 2 == 1 {
            -v
        } else {
            v
        }
    };
    let out = if dim >= PARALLEL_MIN_LEN {
        (0..dim).into_par_iter().map(gather).collect()
    } else {
        (0..dim).map(gather).collect()
    };
    Ok(out)
}

/// `s · ψ` in `O(2^n)` without building a matrix.
pub fn apply_pauli(s: &PauliString, psi: &StateVector) -> Result<StateVector> {
    if s.num_qubits() != psi.n_qubits {
        return Err(Error::Dimension {
            expected: psi.n_qubits,
            found: s.num_qubits(),
        });
    }
    let amplitudes = apply_pauli_raw(s, &psi.amplitudes)?;
    StateVector::from_amplitudes(psi.n_qubits, amplitudes)
}

/// `exp(θB) ψ = cos θ ψ + sin θ Bψ` for a bivector string with `B² = -I`.
pub fn apply_bivector_exp(bivector: &PauliString, theta: f64, psi: &StateVector) -> Result<StateVector> {
    if bivector.phase().is_real() {
        return Err(Error::contract(format!(
            "{bivector} does not square to -I, so exp(θB) has no cos/sin closed form"
        )));
    }
    let b_psi = apply_pauli(bivector, psi)?;
    psi.combine(
        Complex64::new(theta.cos(), 0.0),
        &b_psi,
        Complex64::new(theta.sin(), 0.0),
    )
}

/// Rotor `R_ij(θ) = cos θ I + sin θ Γ_iΓ_j` applied to `ψ`.
pub fn apply_rotor_factor(
    i: usize,
    j: usize,
    theta: f64,
    gens: &GeneratorSet,
    psi: &StateVector,
) -> Result<StateVector> {
    if i == j {
        return Err(Error::parameter(format!(
            "rotor needs distinct generators, got i = j = {i}"
        )));
    }
    apply_bivector_exp(&gens.bivector(i, j)?, theta, psi)
}

/// Imaginary residue tolerated in `⟨ψ|O|ψ⟩` for Hermitian `O`.
pub const EXPECTATION_IMAG_TOLERANCE: f64 = 1e-10;

/// `⟨ψ|s|ψ⟩` for a single string (complex in general).
pub fn expectation_string(s: &PauliString, psi: &StateVector) -> Result<Complex64> {
    psi.inner(&StateVector {
        n_qubits: psi.n_qubits,
        amplitudes: apply_pauli_raw(s, &psi.amplitudes)?,
    })
}

/// Real expectation `⟨ψ|obs|ψ⟩` of a Hermitian observable.
pub fn expectation(obs: &WeightedPauliSum, psi: &StateVector) -> Result<f64> {
    if obs.num_qubits() != psi.n_qubits {
        return Err(Error::Dimension {
            expected: psi.n_qubits,
            found: obs.num_qubits(),
        });
    }
    if !obs.is_hermitian(1e-12) {
        return Err(Error::contract(format!("observable {obs} is not Hermitian")));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for (c, s) in obs.terms() {
        total += c * expectation_string(s, psi)?;
    }
    if total.im.abs() > EXPECTATION_IMAG_TOLERANCE {
        return Err(Error::contract(format!(
            "expectation has imaginary residue {:e}",
            total.im
        )));
    }
    Ok(total.re)
}

/// Reproducible random stream addressed by `(master_seed, stream_index)`.
///
/// Each pair maps to its own ChaCha8 keystream (seed from `master_seed`,
/// stream id from `stream_index`), so draws do not depend on the order in
/// which streams are consumed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SampleStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SampleStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        SampleStream {
            master_seed,
            stream_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }

    /// Independent sub-stream `k` of this stream.
    pub fn child(&self, k: u64) -> SampleStream {
        SampleStream {
            master_seed: splitmix64(self.master_seed ^ splitmix64(self.stream_index)),
            stream_index: k,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Counts of computational-basis outcomes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub n_qubits: usize,
    pub counts: BTreeMap<usize, u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    /// Counts keyed by bitstring label.
    pub fn by_bitstring(&self) -> BTreeMap<String, u64> {
        self.counts
            .iter()
            .map(|(&i, &c)| (bitstring(i, self.n_qubits), c))
            .collect()
    }

    /// Total-variation distance between empirical frequencies and `probabilities`.
    pub fn total_variation(&self, probabilities: &[f64]) -> f64 {
        let shots = self.total().max(1) as f64;
        0.5 * probabilities
            .iter()
            .enumerate()
            .map(|(i, p)| (self.count(i) as f64 / shots - p).abs())
            .sum::<f64>()
    }
}

/// Samples `shots` computational-basis outcomes from `|amplitude|²`.
pub fn sample_bitstrings(psi: &StateVector, shots: u64, stream: SampleStream) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::parameter("shots must be at least 1"));
    }
    let mut cumulative = Vec::with_capacity(psi.dim());
    let mut acc = 0.0;
    for p in psi.probabilities() {
        acc += p;
        cumulative.push(acc);
    }
    let total = acc;
    let last = psi.dim() - 1;
    let mut rng = stream.rng();
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let u = rng.random::<f64>() * total;
        let idx = cumulative.partition_point(|&c| c <= u).min(last);
        *counts.entry(idx).or_insert(0) += 1;
    }
    Ok(Histogram {
        n_qubits: psi.n_qubits,
        counts,
    })
}

/// `shots` i.i.d. ±1 outcomes of measuring a Hermitian Pauli string, with
/// `P(+1) = (1 + ⟨obs⟩)/2`.
pub fn sample_pm_observable(
    obs: &PauliString,
    psi: &StateVector,
    shots: u64,
    stream: SampleStream,
) -> Result<Vec<i8>> {
    if !obs.is_hermitian() {
        return Err(Error::contract(format!(
            "{obs} has phase ±i and is not an observable"
        )));
    }
    if shots == 0 {
        return Err(Error::parameter("shots must be at least 1"));
    }
    let mean = expectation_string(obs, psi)?.re;
    let p_plus = ((1.0 + mean) / 2.0).clamp(0.0, 1.0);
    let mut rng = stream.rng();
    Ok((0..shots)
        .map(|_| if rng.random::<f64>() < p_plus { 1 } else { -1 })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{build_generators, GeneratorConvention};
    use crate::pauli::{dense_matrix, PauliLetter, Phase};
    use nalgebra::DVector;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn state_strategy(n: usize) -> impl Strategy<Value = StateVector> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map("nonzero", move |v| {
            StateVector::normalized(n, v.into_iter().map(|(a, b)| c(a, b)).collect()).ok()
        })
    }

    fn string_strategy(n: usize) -> impl Strategy<Value = PauliString> {
        (0u32..4, prop::collection::vec(prop::sample::select(PauliLetter::ALL.to_vec()), n))
            .prop_map(|(k, l)| PauliString::new(Phase::from_exponent(k), l))
    }

    #[test]
    fn x_flips_zero_to_one() {
        let out = apply_pauli(&p("X"), &StateVector::basis(1, 0).unwrap()).unwrap();
        assert_eq!(out.amplitudes(), &[c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn gamma1_fixes_its_eigenstate() {
        let s = FRAC_1_SQRT_2;
        let psi = StateVector::from_amplitudes(2, vec![c(s, 0.0), c(0.0, 0.0), c(0.0, s), c(0.0, 0.0)]).unwrap();
        let out = apply_pauli(&p("YI"), &psi).unwrap();
        assert!(out.distance(&psi).unwrap() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let psi = StateVector::basis(2, 0).unwrap();
        assert!(matches!(apply_pauli(&p("X"), &psi), Err(Error::Dimension { .. })));
        assert!(StateVector::from_amplitudes(2, vec![c(1.0, 0.0); 3]).is_err());
        assert!(StateVector::from_amplitudes(1, vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn bitstrings_are_msb_first() {
        assert_eq!(bitstring(1, 3), "001");
        assert_eq!(bitstring(4, 3), "100");
    }

    #[test]
    fn rotor_limits() {
        let g = build_generators(2, GeneratorConvention::XPrefix, false).unwrap();
        let psi = StateVector::normalized(2, vec![c(0.3, 0.1), c(-0.2, 0.5), c(0.7, 0.0), c(0.1, -0.4)]).unwrap();
        let same = apply_rotor_factor(1, 3, 0.0, &g, &psi).unwrap();
        assert_eq!(same, psi);
        let quarter = apply_rotor_factor(1, 3, FRAC_PI_2, &g, &psi).unwrap();
        let direct = apply_pauli(&g.bivector(1, 3).unwrap(), &psi).unwrap();
        assert!(quarter.distance(&direct).unwrap() < 1e-15);
        assert!(matches!(apply_rotor_factor(2, 2, 0.1, &g, &psi), Err(Error::Parameter(_))));
    }

    #[test]
    fn expectation_examples() {
        let s = FRAC_1_SQRT_2;
        let alpha = StateVector::from_amplitudes(2, vec![c(s, 0.0), c(0.0, 0.0), c(0.0, s), c(0.0, 0.0)]).unwrap();
        let g1 = WeightedPauliSum::from_string(&p("YI"));
        assert!((expectation(&g1, &alpha).unwrap() - 1.0).abs() < 1e-15);

        let gens = build_generators(2, GeneratorConvention::XPrefix, false).unwrap();
        for theta in [0.1, FRAC_PI_6, 1.0, FRAC_PI_4] {
            let psi = apply_rotor_factor(2, 1, theta, &gens, &alpha).unwrap();
            let e = expectation(&g1, &psi).unwrap();
            assert!((e - (2.0 * theta).cos()).abs() < 1e-12, "θ = {theta}");
        }
        let psi = apply_rotor_factor(2, 1, FRAC_PI_4, &gens, &alpha).unwrap();
        assert!(expectation(&g1, &psi).unwrap().abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_observable_is_rejected() {
        let obs = WeightedPauliSum::from_string(&p("iX"));
        let psi = StateVector::basis(1, 0).unwrap();
        assert!(matches!(expectation(&obs, &psi), Err(Error::Contract(_))));
        assert!(matches!(
            sample_pm_observable(&p("-iZ"), &psi, 10, SampleStream::new(1, 0)),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn deterministic_state_samples_one_outcome() {
        let psi = StateVector::basis(2, 0).unwrap();
        let h = sample_bitstrings(&psi, 1000, SampleStream::new(9, 3)).unwrap();
        assert_eq!(h.by_bitstring(), BTreeMap::from([("00".to_string(), 1000)]));
    }

    #[test]
    fn fair_coin_within_three_sigma() {
        let psi = StateVector::normalized(1, vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let h = sample_bitstrings(&psi, 10_000, SampleStream::new(42, 0)).unwrap();
        assert_eq!(h.total(), 10_000);
        let bound = 3.0 * (10_000.0f64 * 0.25).sqrt();
        for i in 0..2 {
            assert!((h.count(i) as f64 - 5000.0).abs() <= bound, "{:?}", h);
        }
    }

    #[test]
    fn sampling_is_reproducible_per_stream() {
        let psi = StateVector::normalized(3, (0..8).map(|k| c(k as f64 + 1.0, 0.5)).collect()).unwrap();
        let a = sample_bitstrings(&psi, 500, SampleStream::new(7, 11)).unwrap();
        let _ = sample_bitstrings(&psi, 500, SampleStream::new(7, 12)).unwrap();
        let b = sample_bitstrings(&psi, 500, SampleStream::new(7, 11)).unwrap();
        assert_eq!(a, b);
        let other = sample_bitstrings(&psi, 500, SampleStream::new(7, 12)).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn pm_samples_on_eigenstate_are_all_plus() {
        let psi = StateVector::basis(2, 0).unwrap();
        let draws = sample_pm_observable(&p("ZI"), &psi, 200, SampleStream::new(5, 0)).unwrap();
        assert!(draws.iter().all(|&d| d == 1));
    }

    #[test]
    fn pm_mean_for_zero_expectation() {
        let psi = StateVector::basis(1, 0).unwrap();
        let draws = sample_pm_observable(&p("X"), &psi, 10_000, SampleStream::new(3, 1)).unwrap();
        let mean = draws.iter().map(|&d| d as f64).sum::<f64>() / 10_000.0;
        assert!(mean.abs() <= 0.03, "mean {mean}");
    }

    #[test]
    fn pm_mean_tracks_cos_two_theta() {
        let gens = build_generators(2, GeneratorConvention::XPrefix, false).unwrap();
        let s = FRAC_1_SQRT_2;
        let alpha = StateVector::from_amplitudes(2, vec![c(s, 0.0), c(0.0, 0.0), c(0.0, s), c(0.0, 0.0)]).unwrap();
        let psi = apply_rotor_factor(2, 1, FRAC_PI_6, &gens, &alpha).unwrap();
        let exact = expectation_string(&p("YI"), &psi).unwrap().re;
        assert!((exact - 0.5).abs() < 1e-12);
        let shots = 10_000u64;
        let draws = sample_pm_observable(&p("YI"), &psi, shots, SampleStream::new(8, 0)).unwrap();
        let mean = draws.iter().map(|&d| d as f64).sum::<f64>() / shots as f64;
        let sigma = ((1.0 - exact * exact) / shots as f64).sqrt();
        assert!((mean - exact).abs() <= 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn norm_survives_long_operator_chains() {
        let gens = build_generators(3, GeneratorConvention::JordanWigner, false).unwrap();
        let mut psi = StateVector::normalized(3, (0..8).map(|k| c((k as f64).sin(), (k as f64).cos())).collect()).unwrap();
        for step in 0..100usize {
            let a = step % 6 + 1;
            let b = (step * 5 + 2) % 6 + 1;
            psi = if a == b {
                apply_pauli(gens.gamma(a).unwrap(), &psi).unwrap()
            } else {
                apply_rotor_factor(a, b, 0.37 * step as f64, &gens, &psi).unwrap()
            };
        }
        assert!((psi.norm() - 1.0).abs() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn structured_application_matches_dense(
            (s, psi) in (1usize..=5).prop_flat_map(|n| (string_strategy(n), state_strategy(n)))
        ) {
            let out = apply_pauli(&s, &psi).unwrap();
            let dense = dense_matrix(&s).unwrap() * DVector::from_column_slice(psi.amplitudes());
            for (a, b) in out.amplitudes().iter().zip(dense.iter()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }

        #[test]
        fn application_is_linear(
            (s, x, y, a, b) in (1usize..=4).prop_flat_map(|n| (
                string_strategy(n),
                prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n),
                prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n),
                (-2.0f64..2.0, -2.0f64..2.0),
                (-2.0f64..2.0, -2.0f64..2.0),
            ))
        ) {
            let x: Vec<Complex64> = x.into_iter().map(|(r, i)| c(r, i)).collect();
            let y: Vec<Complex64> = y.into_iter().map(|(r, i)| c(r, i)).collect();
            let (a, b) = (c(a.0, a.1), c(b.0, b.1));
            let mixed: Vec<Complex64> = x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
            let lhs = apply_pauli_raw(&s, &mixed).unwrap();
            let sx = apply_pauli_raw(&s, &x).unwrap();
            let sy = apply_pauli_raw(&s, &y).unwrap();
            for k in 0..lhs.len() {
                prop_assert!((lhs[k] - (a * sx[k] + b * sy[k])).norm() < 1e-12);
            }
        }

        #[test]
        fn histogram_counts_sum_to_shots(psi in state_strategy(3), shots in 1u64..2000, seed in any::<u64>()) {
            let h = sample_bitstrings(&psi, shots, SampleStream::new(seed, 0)).unwrap();
            prop_assert_eq!(h.total(), shots);
        }
    }
}
