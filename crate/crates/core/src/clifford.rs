//! Generators of Cl(2n) as Pauli strings, the chirality operator and its
//! projectors, and the so(2n) bracket of bivectors.
//!
//! Generator indices are 1-based throughout: `gamma(1)` … `gamma(2n)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{multiply, PauliLetter, PauliString, Phase, WeightedPauliSum};

/// Largest `n` accepted by the symbolic generator construction.
pub const MAX_SYMBOLIC_QUBITS: usize = 16;

/// Which tensor-product pattern builds the generators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorConvention {
    /// `Γ_j = X^{j-1} ⊗ Y ⊗ I^{n-j}`, `Γ_{n+j} = X^{j-1} ⊗ Z ⊗ I^{n-j}`.
    #[default]
    XPrefix,
    /// Jordan–Wigner: `Γ_j = Z^{j-1} ⊗ X ⊗ I^{n-j}`, `Γ_{n+j} = Z^{j-1} ⊗ Y ⊗ I^{n-j}`.
    JordanWigner,
}

impl GeneratorConvention {
    fn letters(self) -> (PauliLetter, PauliLetter, PauliLetter) {
        match self {
            GeneratorConvention::XPrefix => (PauliLetter::X, PauliLetter::Y, PauliLetter::Z),
            GeneratorConvention::JordanWigner => (PauliLetter::Z, PauliLetter::X, PauliLetter::Y),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorConvention::XPrefix => "x-prefix",
            GeneratorConvention::JordanWigner => "jordan-wigner",
        }
    }
}

impl fmt::Display for GeneratorConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GeneratorConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "x-prefix" | "xprefix" | "x" => Ok(GeneratorConvention::XPrefix),
            "jordan-wigner" | "jw" | "jordanwigner" => Ok(GeneratorConvention::JordanWigner),
            _ => Err(Error::parameter(format!(
                "unknown convention {s:?} (expected x-prefix or jordan-wigner)"
            ))),
        }
    }
}

/// The `2n` anticommuting generators of Cl(2n), optionally with `Γ_{2n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    n: usize,
    convention: GeneratorConvention,
    gammas: Vec<PauliString>,
    odd_extra: Option<PauliString>,
}

impl GeneratorSet {
    /// Qubits per spinor, so the algebra is Cl(2n) acting on `2^n` amplitudes.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn convention(&self) -> GeneratorConvention {
        self.convention
    }

    /// Number of generators, `2n`.
    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn gammas(&self) -> &[PauliString] {
        &self.gammas
    }

    pub fn odd_extra(&self) -> Option<&PauliString> {
        self.odd_extra.as_ref()
    }

    /// `Γ_a` for `1 ≤ a ≤ 2n`.
    pub fn gamma(&self, a: usize) -> Result<&PauliString> {
        self.check_index(a)?;
        Ok(&self.gammas[a - 1])
    }

    pub fn check_index(&self, a: usize) -> Result<()> {
        if a == 0 || a > self.gammas.len() {
            return Err(Error::parameter(format!(
                "generator index {a} outside [1, {}]",
                self.gammas.len()
            )));
        }
        Ok(())
    }

    /// The bivector `Γ_i Γ_j` as a single Pauli string.
    pub fn bivector(&self, i: usize, j: usize) -> Result<PauliString> {
        multiply(self.gamma(i)?, self.gamma(j)?)
    }

    /// Exact check of `{Γ_a, Γ_b} = 2δ_ab` over every pair, including the
    /// odd generator when present.
    pub fn relation_report(&self) -> RelationReport {
        let all: Vec<&PauliString> = self.gammas.iter().chain(self.odd_extra.iter()).collect();
        let mut pairs = Vec::with_capacity(all.len() * (all.len() - 1) / 2);
        for a in 0..all.len() {
            for b in a + 1..all.len() {
                pairs.push(PairStatus {
                    a: a + 1,
                    b: b + 1,
                    anticommutes: all[a].anticommutes(all[b]).expect("equal lengths"),
                });
            }
        }
        let squares = all
            .iter()
            .enumerate()
            .map(|(a, g)| SquareStatus {
                a: a + 1,
                squares_to_identity: multiply(g, g).expect("equal lengths").is_identity(),
            })
            .collect();
        RelationReport { pairs, squares }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairStatus {
    pub a: usize,
    pub b: usize,
    pub anticommutes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareStatus {
    pub a: usize,
    pub squares_to_identity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub pairs: Vec<PairStatus>,
    pub squares: Vec<SquareStatus>,
}

impl RelationReport {
    pub fn failures(&self) -> usize {
        self.pairs.iter().filter(|p| !p.anticommutes).count()
            + self.squares.iter().filter(|s| !s.squares_to_identity).count()
    }
}

/// Builds `Γ_1 … Γ_{2n}` under `convention`; `include_odd` appends
/// `Γ_{2n+1}`, the prefix letter on every qubit: `Z^{⊗n}` for Jordan–Wigner
/// and `X^{⊗n}` for the X-prefix pattern, where `Z^{⊗n}` would commute with
/// half of the generators.
pub fn build_generators(
    n: usize,
    convention: GeneratorConvention,
    include_odd: bool,
) -> Result<GeneratorSet> {
    if n == 0 || n > MAX_SYMBOLIC_QUBITS {
        return Err(Error::parameter(format!(
            "n = {n} outside [1, {MAX_SYMBOLIC_QUBITS}]"
        )));
    }
    let (prefix, first, second) = convention.letters();
    let make = |j: usize, slot: PauliLetter| {
        let mut letters = vec![PauliLetter::I; n];
        letters[..j].fill(prefix);
        letters[j] = slot;
        PauliString::new(Phase::ONE, letters)
    };
    let mut gammas: Vec<PauliString> = (0..n).map(|j| make(j, first)).collect();
    gammas.extend((0..n).map(|j| make(j, second)));
    let odd_extra = include_odd.then(|| PauliString::new(Phase::ONE, vec![prefix; n]));
    Ok(GeneratorSet {
        n,
        convention,
        gammas,
        odd_extra,
    })
}

/// `Γ_* = i^n Γ_1 Γ_2 ⋯ Γ_{2n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiralityOperator {
    string: PauliString,
}

impl ChiralityOperator {
    pub fn string(&self) -> &PauliString {
        &self.string
    }

    pub fn num_qubits(&self) -> usize {
        self.string.num_qubits()
    }
}

pub fn chirality(gens: &GeneratorSet) -> ChiralityOperator {
    let n = gens.n();
    let mut acc = PauliString::identity(n).with_phase(Phase::from_exponent(n as u32));
    for g in gens.gammas() {
        acc = multiply(&acc, g).expect("generators share a length");
    }
    ChiralityOperator { string: acc }
}

/// `P_± = ½(I ± Γ_*)`.
pub fn chiral_projectors(gens: &GeneratorSet) -> (WeightedPauliSum, WeightedPauliSum) {
    let n = gens.n();
    let gamma_star = chirality(gens).string;
    let half = Complex64::new(0.5, 0.0);
    let id = PauliString::identity(n);
    let plus = WeightedPauliSum::from_terms(n, [(half, id.clone()), (half, gamma_star.clone())])
        .expect("same length");
    let minus = WeightedPauliSum::from_terms(n, [(half, id), (-half, gamma_star)]).expect("same length");
    (plus, minus)
}

fn check_bivector_indices(gens: &GeneratorSet, i: usize, j: usize, r: usize, s: usize) -> Result<()> {
    for a in [i, j, r, s] {
        gens.check_index(a)?;
    }
    if i == j || r == s {
        return Err(Error::parameter(format!(
            "bivector indices must differ: ({i},{j}), ({r},{s})"
        )));
    }
    Ok(())
}

/// `[½Γ_iΓ_j, ½Γ_rΓ_s]`, computed from symbolic products.
pub fn bivector_commutator(
    gens: &GeneratorSet,
    i: usize,
    j: usize,
    r: usize,
    s: usize,
) -> Result<WeightedPauliSum> {
    check_bivector_indices(gens, i, j, r, s)?;
    let quarter = Complex64::new(0.25, 0.0);
    let ijrs = multiply(&gens.bivector(i, j)?, &gens.bivector(r, s)?)?;
    let rsij = multiply(&gens.bivector(r, s)?, &gens.bivector(i, j)?)?;
    WeightedPauliSum::from_terms(gens.n(), [(quarter, ijrs), (-quarter, rsij)])
}

/// The so(2n) generator `Γ_ab = ¼[Γ_a, Γ_b]`, equal to `½Γ_aΓ_b` for `a ≠ b`
/// and zero for `a = b`.
pub fn so_generator(gens: &GeneratorSet, a: usize, b: usize) -> Result<WeightedPauliSum> {
    if a == b {
        gens.check_index(a)?;
        return Ok(WeightedPauliSum::zero(gens.n()));
    }
    let half = Complex64::new(0.5, 0.0);
    WeightedPauliSum::from_terms(gens.n(), [(half, gens.bivector(a, b)?)])
}

/// Structure constants of so(2n):
/// `[Γ_ij, Γ_rs] = δ_is Γ_jr + δ_ir Γ_sj + δ_sj Γ_ri + δ_rj Γ_is`.
pub fn so_bracket_closed_form(
    gens: &GeneratorSet,
    i: usize,
    j: usize,
    r: usize,
    s: usize,
) -> Result<WeightedPauliSum> {
    check_bivector_indices(gens, i, j, r, s)?;
    let terms = [
        (i == s, (j, r)),
        (i == r, (s, j)),
        (s == j, (r, i)),
        (r == j, (i, s)),
    ];
    let mut acc = WeightedPauliSum::zero(gens.n());
    for (delta, (a, b)) in terms {
        if delta {
            acc = acc.add(&so_generator(gens, a, b)?)?;
        }
    }
    Ok(acc)
}
