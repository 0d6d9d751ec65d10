//! The experiment record written by every run.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use spinorq::algorithms::ClassLabel;
use spinorq::clifford::{PairStatus, SquareStatus};
use spinorq::spinor::Membership;
use spinorq::statevector::bitstring;
use spinorq::{GeneratorConvention, StateVector};

use crate::config::ExperimentConfig;

pub const RECORD_SCHEMA_VERSION: u32 = 1;

/// Registers up to this size list every basis state in `theoretical`;
/// larger ones list only states with non-zero probability.
pub const FULL_LISTING_QUBITS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub schema_version: u32,
    pub library_version: String,
    pub config: ExperimentConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_radians: Option<f64>,
    pub shots: u64,
    /// Bitstring (qubit 1 first) to Born probability.
    pub theoretical: BTreeMap<String, f64>,
    /// Bitstring to observed count; empty when `shots` is 0.
    pub sampled: BTreeMap<String, u64>,
    pub details: Details,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Details {
    /// Outcomes are keyed `"0"` for the `+1` eigenvalue of the observable and
    /// `"1"` for `-1`.
    Classify {
        observable: String,
        gap: f64,
        exact_mean: f64,
        empirical_mean: f64,
        label: ClassLabel,
        hoeffding_budget: u64,
        draws: u64,
    },
    Search {
        oracle: String,
        k_used: u32,
        p_solution_exact: f64,
        beta_support: Vec<String>,
        beta_support_probability: f64,
    },
    HamSearch {
        t_star: f64,
        overlap: f64,
        evolution_convention: String,
    },
    VerifyAlgebra {
        convention: GeneratorConvention,
        generators: Vec<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        odd_generator: Option<String>,
        pairs: Vec<PairStatus>,
        squares: Vec<SquareStatus>,
        failures: usize,
    },
    Chirality {
        chirality: String,
        membership: Membership,
        plus_weight: f64,
        minus_weight: f64,
    },
}

/// Born distribution of `psi` in the computational basis.
pub fn distribution(psi: &StateVector) -> BTreeMap<String, f64> {
    let n = psi.n_qubits();
    psi.probabilities()
        .into_iter()
        .enumerate()
        .filter(|(_, p)| n <= FULL_LISTING_QUBITS || *p > 0.0)
        .map(|(k, p)| (bitstring(k, n), p))
        .collect()
}

impl ExperimentRecord {
    /// `(bitstring, theoretical p, sampled count)` over the union of keys,
    /// in basis order.
    pub fn rows(&self) -> Vec<(String, f64, u64)> {
        let mut keys: Vec<&String> = self.theoretical.keys().chain(self.sampled.keys()).collect();
        keys.sort_by(|a, b| (a.len(), a.as_str()).cmp(&(b.len(), b.as_str())));
        keys.dedup();
        keys.into_iter()
            .map(|k| {
                (
                    k.clone(),
                    self.theoretical.get(k).copied().unwrap_or(0.0),
                    self.sampled.get(k).copied().unwrap_or(0),
                )
            })
            .collect()
    }

    /// JSON with the wall time zeroed, for determinism comparisons.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.wall_time_s = 0.0;
        serde_json::to_string_pretty(&r).expect("record serializes")
    }
}
