//! Phase-tracked Pauli strings.
//!
//! A [`PauliString`] is a global phase in `{1, i, -1, -i}` times a tensor
//! product of single-qubit letters. All algebra here is exact: phases are
//! stored as an exponent of `i` and letters as an enum, so products,
//! commutation tests and grades never touch floating point. Dense matrices
//! are only produced on request, for small qubit counts, as test oracles.
//!
//! Letter `0` of a string is tensor factor 1 and maps to the most
//! significant bit of a basis index.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest qubit count for which [`dense_matrix`] will materialize a matrix.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Coefficients below this magnitude are dropped when a sum is canonicalized.
pub const SUM_ZERO_TOLERANCE: f64 = 1e-14;

/// A fourth root of unity, stored as the exponent `k` in `i^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    /// `true` for `±1`.
    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn conj(self) -> Self {
        Phase((4 - self.0) % 4)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl std::ops::Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        self * Phase::MINUS_ONE
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

/// Single-qubit Pauli letter. `X`, `Y`, `Z` are σ₁, σ₂, σ₃.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    /// Product `self · rhs` as `(i^k, letter)`.
    pub fn mul(self, rhs: PauliLetter) -> (Phase, PauliLetter) {
        use PauliLetter::*;
        match (self, rhs) {
            (I, p) | (p, I) => (Phase::ONE, p),
            (a, b) if a == b => (Phase::ONE, I),
            (X, Y) => (Phase::I, Z),
            (Y, X) => (Phase::MINUS_I, Z),
            (Y, Z) => (Phase::I, X),
            (Z, Y) => (Phase::MINUS_I, X),
            (Z, X) => (Phase::I, Y),
            (X, Z) => (Phase::MINUS_I, Y),
            _ => unreachable!(),
        }
    }

    pub fn is_identity(self) -> bool {
        self == PauliLetter::I
    }

    /// The 2×2 matrix of the letter.
    pub fn matrix(self) -> DMatrix<Complex64> {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let entries = match self {
            PauliLetter::I => [l, o, o, l],
            PauliLetter::X => [o, l, l, o],
            PauliLetter::Y => [o, -i, i, o],
            PauliLetter::Z => [l, o, o, -l],
        };
        DMatrix::from_row_slice(2, 2, &entries)
    }

    fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

/// A phase times a tensor product of Pauli letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    phase: Phase,
    letters: Box<[PauliLetter]>,
}

impl PauliString {
    pub fn new(phase: Phase, letters: impl Into<Vec<PauliLetter>>) -> Self {
        PauliString {
            phase,
            letters: letters.into().into_boxed_slice(),
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        PauliString::new(Phase::ONE, vec![PauliLetter::I; n_qubits])
    }

    /// `letter` on qubit `qubit` (0-based, factor order), identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, letter: PauliLetter) -> Self {
        let mut letters = vec![PauliLetter::I; n_qubits];
        letters[qubit] = letter;
        PauliString::new(Phase::ONE, letters)
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|l| !l.is_identity()).count()
    }

    pub fn is_identity(&self) -> bool {
        self.phase == Phase::ONE && self.weight() == 0
    }

    /// A Pauli string is Hermitian exactly when its phase is `±1`.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn with_phase(&self, phase: Phase) -> Self {
        PauliString {
            phase,
            letters: self.letters.clone(),
        }
    }

    /// `c · self` for a fourth root of unity `c`.
    pub fn scaled(&self, c: Phase) -> Self {
        self.with_phase(self.phase * c)
    }

    /// Conjugate transpose. Letters are Hermitian, so only the phase changes.
    pub fn adjoint(&self) -> Self {
        self.with_phase(self.phase.conj())
    }

    pub fn multiply(&self, rhs: &PauliString) -> Result<PauliString> {
        multiply(self, rhs)
    }

    pub fn anticommutes(&self, rhs: &PauliString) -> Result<bool> {
        anticommutes(self, rhs)
    }

    pub fn commutes(&self, rhs: &PauliString) -> Result<bool> {
        anticommutes(self, rhs).map(|a| !a)
    }

    /// Tensor product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &PauliString) -> PauliString {
        let mut letters = Vec::with_capacity(self.num_qubits() + rhs.num_qubits());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&rhs.letters);
        PauliString::new(self.phase * rhs.phase, letters)
    }

    /// `I^{⊗slot} ⊗ self ⊗ I^{⊗(slots-slot-1)}`, with every identity block the
    /// width of `self`.
    pub fn embed(&self, slot: usize, slots: usize) -> Result<PauliString> {
        if slot >= slots {
            return Err(Error::parameter(format!("slot {slot} out of range for {slots} slots")));
        }
        let width = self.num_qubits();
        let mut letters = vec![PauliLetter::I; width * slots];
        letters[slot * width..(slot + 1) * width].copy_from_slice(&self.letters);
        Ok(PauliString::new(self.phase, letters))
    }

    /// Basis-index bit masks `(flip, sign)` and the scalar `phase · i^{#Y}`.
    ///
    /// Acting on `|b⟩` the string gives `scalar · (-1)^{popcount(b & sign)} |b ^ flip⟩`.
    pub(crate) fn action_masks(&self) -> (usize, usize, Complex64) {
        let n = self.num_qubits();
        debug_assert!(n < usize::BITS as usize);
        let mut flip = 0usize;
        let mut sign = 0usize;
        let mut y_count = 0u32;
        for (q, letter) in self.letters.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match letter {
                PauliLetter::I => {}
                PauliLetter::X => flip |= bit,
                PauliLetter::Z => sign |= bit,
                PauliLetter::Y => {
                    flip |= bit;
                    sign |= bit;
                    y_count += 1;
                }
            }
        }
        let scalar = (self.phase * Phase::from_exponent(y_count)).to_complex();
        (flip, sign, scalar)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase.exponent() {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for l in self.letters.iter() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `[+|-][i]LETTERS`, e.g. `"XYZ"`, `"-iXI"`, `"+Z"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (neg, rest) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (imag, rest) = match rest.strip_prefix('i') {
            Some(r) => (true, r),
            None => (false, rest),
        };
        let letters = rest
            .chars()
            .map(|c| match c {
                'I' => Ok(PauliLetter::I),
                'X' => Ok(PauliLetter::X),
                'Y' => Ok(PauliLetter::Y),
                'Z' => Ok(PauliLetter::Z),
                other => Err(Error::parameter(format!("invalid Pauli letter {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut phase = Phase::ONE;
        if imag {
            phase = phase * Phase::I;
        }
        if neg {
            phase = -phase;
        }
        Ok(PauliString::new(phase, letters))
    }
}

fn check_lengths(a: &PauliString, b: &PauliString) -> Result<()> {
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::Dimension {
            expected: a.num_qubits(),
            found: b.num_qubits(),
        });
    }
    Ok(())
}

/// Exact product `a · b`.
pub fn multiply(a: &PauliString, b: &PauliString) -> Result<PauliString> {
    check_lengths(a, b)?;
    let mut phase = a.phase * b.phase;
    let letters: Vec<PauliLetter> = a
        .letters
        .iter()
        .zip(b.letters.iter())
        .map(|(&x, &y)| {
            let (p, l) = x.mul(y);
            phase = phase * p;
            l
        })
        .collect();
    Ok(PauliString::new(phase, letters))
}

/// `true` iff `ab = -ba`: an odd number of positions hold two different
/// non-identity letters.
pub fn anticommutes(a: &PauliString, b: &PauliString) -> Result<bool> {
    check_lengths(a, b)?;
    let clashes = a
        .letters
        .iter()
        .zip(b.letters.iter())
        .filter(|(x, y)| !x.is_identity() && !y.is_identity() && x != y)
        .count();
    Ok(clashes % 2 == 1)
}

/// Kronecker product of the letter matrices times the phase; factor 1 is the
/// most significant qubit.
pub fn dense_matrix(s: &PauliString) -> Result<DMatrix<Complex64>> {
    let n = s.num_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::Capacity {
            what: "dense qubit count",
            requested: n,
            limit: MAX_DENSE_QUBITS,
        });
    }
    let mut m = DMatrix::from_element(1, 1, s.phase.to_complex());
    for l in s.letters.iter() {
        m = m.kronecker(&l.matrix());
    }
    Ok(m)
}

/// The three canonical involutions of a Clifford algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Involution {
    /// `(-1)^k`
    Grade,
    /// `(-1)^{k(k-1)/2}`
    Reversion,
    /// `(-1)^{k(k+1)/2}`, grade involution followed by reversion.
    Conjugation,
}

/// Sign picked up by a grade-`k` element under `kind`.
pub fn involution_sign(kind: Involution, grade: u32) -> i32 {
    let k = grade as u64;
    let exponent = match kind {
        Involution::Grade => k,
        Involution::Reversion => k * k.saturating_sub(1) / 2,
        Involution::Conjugation => k * (k + 1) / 2,
    };
    if exponent % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A complex linear combination of Pauli strings in canonical form.
///
/// Phases are folded into the coefficients, equal strings merged, tiny
/// coefficients dropped and terms sorted by their letters, so two sums of the
/// same operator compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPauliSum {
    n_qubits: usize,
    terms: Vec<(Complex64, PauliString)>,
}

impl WeightedPauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        WeightedPauliSum {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        WeightedPauliSum::from_string(&PauliString::identity(n_qubits))
    }

    pub fn from_string(s: &PauliString) -> Self {
        WeightedPauliSum::from_terms(s.num_qubits(), [(Complex64::new(1.0, 0.0), s.clone())])
            .expect("single term has matching length")
    }

    pub fn from_terms(
        n_qubits: usize,
        terms: impl IntoIterator<Item = (Complex64, PauliString)>,
    ) -> Result<Self> {
        let mut merged: BTreeMap<Box<[PauliLetter]>, Complex64> = BTreeMap::new();
        for (c, s) in terms {
            if s.num_qubits() != n_qubits {
                return Err(Error::Dimension {
                    expected: n_qubits,
                    found: s.num_qubits(),
                });
            }
            *merged.entry(s.letters.clone()).or_default() += c * s.phase.to_complex();
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| c.norm() >= SUM_ZERO_TOLERANCE)
            .map(|(letters, c)| (c, PauliString { phase: Phase::ONE, letters }))
            .collect();
        Ok(WeightedPauliSum { n_qubits, terms })
    }

    pub fn num_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Canonical terms; every string has phase `+1`.
    pub fn terms(&self) -> &[(Complex64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        WeightedPauliSum::from_terms(self.n_qubits, self.terms.iter().map(|(k, s)| (k * c, s.clone())))
            .expect("same length")
    }

    pub fn add(&self, rhs: &WeightedPauliSum) -> Result<Self> {
        WeightedPauliSum::from_terms(self.n_qubits, self.terms.iter().chain(rhs.terms.iter()).cloned())
    }

    pub fn sub(&self, rhs: &WeightedPauliSum) -> Result<Self> {
        self.add(&rhs.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Operator product `self · rhs`.
    pub fn mul(&self, rhs: &WeightedPauliSum) -> Result<Self> {
        if self.n_qubits != rhs.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits,
                found: rhs.n_qubits,
            });
        }
        let mut products = Vec::with_capacity(self.len() * rhs.len());
        for (a, sa) in &self.terms {
            for (b, sb) in &rhs.terms {
                products.push((a * b, multiply(sa, sb)?));
            }
        }
        WeightedPauliSum::from_terms(self.n_qubits, products)
    }

    /// `[self, rhs] = self·rhs - rhs·self`.
    pub fn commutator(&self, rhs: &WeightedPauliSum) -> Result<Self> {
        self.mul(rhs)?.sub(&rhs.mul(self)?)
    }

    /// Hermitian iff every canonical coefficient is real (within `tol`).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|(c, _)| c.im.abs() <= tol)
    }

    /// Largest coefficient difference against `rhs`.
    pub fn distance(&self, rhs: &WeightedPauliSum) -> Result<f64> {
        Ok(self
            .sub(rhs)?
            .terms
            .iter()
            .map(|(c, _)| c.norm())
            .fold(0.0, f64::max))
    }

    pub fn dense_matrix(&self) -> Result<DMatrix<Complex64>> {
        let dim = 1usize
            .checked_shl(self.n_qubits as u32)
            .filter(|_| self.n_qubits <= MAX_DENSE_QUBITS)
            .ok_or(Error::Capacity {
                what: "dense qubit count",
                requested: self.n_qubits,
                limit: MAX_DENSE_QUBITS,
            })?;
        let mut m = DMatrix::zeros(dim, dim);
        for (c, s) in &self.terms {
            m += dense_matrix(s)? * *c;
        }
        Ok(m)
    }
}

impl fmt::Display for WeightedPauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (c, s)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:+}{:+}i)·{}", c.re, c.im, s)?;
        }
        Ok(())
    }
}
