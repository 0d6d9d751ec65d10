//! Clifford-algebra spinor toolkit: Cl(2n) generators as Pauli strings,
//! a dense statevector simulator with structured Pauli application, spinor
//! eigenstates and rotors, and the classification and search routines built
//! on them.
//!
//! ```
//! use spinorq::{build_generators, GeneratorConvention};
//!
//! let gens = build_generators(3, GeneratorConvention::XPrefix, false).unwrap();
//! assert_eq!(gens.len(), 6);
//! assert_eq!(gens.relation_report().failures(), 0);
//! ```

pub mod algorithms;
pub mod clifford;
pub mod error;
pub mod pauli;
pub mod spinor;
pub mod statevector;

pub use clifford::{build_generators, chirality, GeneratorConvention, GeneratorSet};
pub use error::{Error, Result};
pub use pauli::{PauliLetter, PauliString, Phase, WeightedPauliSum};
pub use spinor::{eigenstate, EigenstateSpec, Sign};
pub use statevector::{SampleStream, StateVector};

/// Crate version, recorded in experiment outputs.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
