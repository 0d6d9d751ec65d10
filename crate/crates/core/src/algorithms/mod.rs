//! Sign classification, non-uniform Grover search and Hamiltonian-evolution
//! search on spinor states.

mod classify;
mod grover;
mod hamiltonian;

pub use classify::{
    classification_operator, classify, classify_with_shots, prepare_state, shot_budget, ClassLabel,
    Classification, ClassificationTask, BOUNDARY_MARGIN,
};
pub use grover::{
    generalized_grover_apply, grover_iterations, grover_search, reflect_about, search_setup,
    GeneralizedGroverSpec, SearchOutcome, SearchSetup, SearchTask, ORTHONORMALITY_TOLERANCE,
};
pub use hamiltonian::{
    evolve, hamiltonian_search, readout_time, HamiltonianSearch, EVOLUTION_CONVENTION,
};
