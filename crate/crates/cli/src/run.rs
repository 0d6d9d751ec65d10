//! Executes one configured experiment.

use std::collections::BTreeMap;
use std::time::Instant;

use spinorq::algorithms::{
    classification_operator, classify_with_shots, grover_search, hamiltonian_search, search_setup, shot_budget,
    ClassificationTask, SearchTask, EVOLUTION_CONVENTION,
};
use spinorq::clifford::chirality;
use spinorq::spinor::{chiral_membership, chiral_projection};
use spinorq::statevector::{apply_rotor_factor, sample_bitstrings};
use spinorq::{build_generators, eigenstate, EigenstateSpec, GeneratorSet, SampleStream, Sign, StateVector};

use crate::config::{ExperimentConfig, Kind, DEFAULT_DELTA, DEFAULT_G_MIN};
use crate::error::CliError;
use crate::record::{distribution, Details, ExperimentRecord, RECORD_SCHEMA_VERSION};

const DISTRIBUTION_TOLERANCE: f64 = 1e-10;

fn eigen_spec(config: &ExperimentConfig) -> EigenstateSpec {
    let principal = EigenstateSpec::principal(config.j(), config.n_qubits);
    EigenstateSpec {
        j: config.j(),
        signs: config.branch_signs.clone().unwrap_or(principal.signs),
        middle_sign: config.middle_sign.unwrap_or(Sign::Plus),
    }
}

fn stream(config: &ExperimentConfig) -> SampleStream {
    SampleStream::new(config.seed, 0)
}

fn sampled_from(psi: &StateVector, shots: u64, config: &ExperimentConfig) -> Result<BTreeMap<String, u64>, CliError> {
    if shots == 0 {
        return Ok(BTreeMap::new());
    }
    Ok(sample_bitstrings(psi, shots, stream(config))?.by_bitstring())
}

struct Outcome {
    shots: u64,
    theoretical: BTreeMap<String, f64>,
    sampled: BTreeMap<String, u64>,
    details: Details,
}

fn run_classify(config: &ExperimentConfig, gens: &GeneratorSet, theta: f64) -> Result<Outcome, CliError> {
    let task = ClassificationTask {
        theta,
        i: config.i(),
        j: config.j(),
        eigen_spec: eigen_spec(config),
        class_operator_sign: config.operator_sign.unwrap_or(Sign::Plus),
        delta: config.delta.unwrap_or(DEFAULT_DELTA),
        g_min: config.g_min.unwrap_or(DEFAULT_G_MIN),
    };
    let budget = shot_budget(task.g_min, task.delta)?;
    let draws = config.shots.unwrap_or(budget);
    let r = classify_with_shots(&task, gens, draws, stream(config))?;
    let p_plus = (1.0 + r.exact_mean) / 2.0;
    let theoretical = BTreeMap::from([("0".to_string(), p_plus), ("1".to_string(), 1.0 - p_plus)]);
    let sampled = if draws == 0 {
        BTreeMap::new()
    } else {
        let plus = ((1.0 + r.empirical_mean) / 2.0 * draws as f64).round() as u64;
        BTreeMap::from([("0".to_string(), plus), ("1".to_string(), draws - plus)])
    };
    Ok(Outcome {
        shots: draws,
        theoretical,
        sampled,
        details: Details::Classify {
            observable: classification_operator(&task, gens)?.to_string(),
            gap: task.gap(),
            exact_mean: r.exact_mean,
            empirical_mean: r.empirical_mean,
            label: r.label,
            hoeffding_budget: budget,
            draws,
        },
    })
}

fn run_search(config: &ExperimentConfig, gens: &GeneratorSet, theta: f64) -> Result<Outcome, CliError> {
    let task = SearchTask {
        theta,
        i: config.i(),
        j: config.j(),
        eigen_spec: eigen_spec(config),
        shots: config.shots.unwrap_or(0),
    };
    let setup = search_setup(&task, gens)?;
    let out = grover_search(&task, gens, stream(config))?;
    let n = config.n_qubits;
    let beta_support: Vec<String> = setup
        .beta
        .probabilities()
        .iter()
        .enumerate()
        .filter(|(_, p)| **p > 1e-15)
        .map(|(k, _)| spinorq::statevector::bitstring(k, n))
        .collect();
    let probs = out.final_state.probabilities();
    let beta_support_probability = setup
        .beta
        .probabilities()
        .iter()
        .zip(&probs)
        .filter(|(b, _)| **b > 1e-15)
        .map(|(_, p)| p)
        .sum();
    Ok(Outcome {
        shots: task.shots,
        theoretical: distribution(&out.final_state),
        sampled: out.histogram.by_bitstring(),
        details: Details::Search {
            oracle: setup.oracle.to_string(),
            k_used: out.k_used,
            p_solution_exact: out.p_solution_exact,
            beta_support,
            beta_support_probability,
        },
    })
}

fn run_ham_search(config: &ExperimentConfig, gens: &GeneratorSet, theta: f64) -> Result<Outcome, CliError> {
    let r = hamiltonian_search(theta, config.i(), &eigen_spec(config), gens)?;
    let final_state = r
        .final_state
        .as_ref()
        .ok_or_else(|| CliError::Internal("Hamiltonian search returned no final state".into()))?;
    let shots = config.shots.unwrap_or(0);
    Ok(Outcome {
        shots,
        theoretical: distribution(final_state),
        sampled: sampled_from(final_state, shots, config)?,
        details: Details::HamSearch {
            t_star: r.t_star,
            overlap: r.overlap,
            evolution_convention: EVOLUTION_CONVENTION.to_string(),
        },
    })
}

fn run_chirality(config: &ExperimentConfig, gens: &GeneratorSet, theta: f64) -> Result<Outcome, CliError> {
    let alpha = eigenstate(&eigen_spec(config), gens)?;
    let psi = apply_rotor_factor(config.i(), config.j(), theta, gens, &alpha)?;
    let chir = chirality(gens);
    let membership = chiral_membership(&psi, &chir, 1)?[0];
    let (plus_weight, _) = chiral_projection(&psi, &chir, 0, 1, Sign::Plus)?;
    let (minus_weight, _) = chiral_projection(&psi, &chir, 0, 1, Sign::Minus)?;
    let shots = config.shots.unwrap_or(0);
    Ok(Outcome {
        shots,
        theoretical: distribution(&psi),
        sampled: sampled_from(&psi, shots, config)?,
        details: Details::Chirality {
            chirality: chir.string().to_string(),
            membership,
            plus_weight,
            minus_weight,
        },
    })
}

fn run_verify(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let gens = build_generators(config.n_qubits, config.convention, config.include_odd)?;
    let report = gens.relation_report();
    Ok(Outcome {
        shots: 0,
        theoretical: BTreeMap::new(),
        sampled: BTreeMap::new(),
        details: Details::VerifyAlgebra {
            convention: config.convention,
            generators: gens.gammas().iter().map(|g| g.to_string()).collect(),
            odd_generator: gens.odd_extra().map(|g| g.to_string()),
            failures: report.failures(),
            pairs: report.pairs,
            squares: report.squares,
        },
    })
}

fn check_invariants(kind: Kind, outcome: &Outcome) -> Result<(), CliError> {
    if kind != Kind::VerifyAlgebra {
        let total: f64 = outcome.theoretical.values().sum();
        if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
            return Err(CliError::Internal(format!(
                "theoretical probabilities sum to {total}, not 1"
            )));
        }
    }
    let counted: u64 = outcome.sampled.values().sum();
    if counted != 0 && counted != outcome.shots {
        return Err(CliError::Internal(format!(
            "sampled counts sum to {counted}, expected {}",
            outcome.shots
        )));
    }
    Ok(())
}

/// Runs a validated config and returns its record.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentRecord, CliError> {
    config.validate()?;
    let start = Instant::now();
    let theta = config.theta_radians()?;
    let outcome = match config.kind {
        Kind::VerifyAlgebra => run_verify(config)?,
        kind => {
            let gens = build_generators(config.n_qubits, config.convention, false)?;
            let theta = config.theta_required()?;
            match kind {
                Kind::Classify => run_classify(config, &gens, theta)?,
                Kind::Search => run_search(config, &gens, theta)?,
                Kind::HamSearch => run_ham_search(config, &gens, theta)?,
                Kind::Chirality => run_chirality(config, &gens, theta)?,
                Kind::VerifyAlgebra => unreachable!("handled above"),
            }
        }
    };
    check_invariants(config.kind, &outcome)?;
    Ok(ExperimentRecord {
        schema_version: RECORD_SCHEMA_VERSION,
        library_version: spinorq::VERSION.to_string(),
        config: config.clone(),
        theta_radians: theta,
        shots: outcome.shots,
        theoretical: outcome.theoretical,
        sampled: outcome.sampled,
        details: outcome.details,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::config::{Angle, SCHEMA_VERSION};
    use spinorq::GeneratorConvention;

    pub(crate) fn config(kind: Kind) -> ExperimentConfig {
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            kind,
            n_qubits: 2,
            convention: GeneratorConvention::XPrefix,
            theta: Some(Angle::Expr("pi/6".into())),
            i: Some(3),
            j: Some(1),
            branch_signs: None,
            middle_sign: None,
            operator_sign: None,
            delta: None,
            g_min: None,
            include_odd: false,
            shots: Some(10_000),
            seed: 42,
            out_dir: None,
            formats: None,
            name: None,
        }
    }

    #[test]
    fn search_concentrates_on_beta() {
        let r = run(&config(Kind::Search)).unwrap();
        let Details::Search {
            k_used,
            p_solution_exact,
            beta_support,
            beta_support_probability,
            ..
        } = &r.details
        else {
            panic!("wrong details");
        };
        assert_eq!(*k_used, 1);
        assert!((p_solution_exact - 1.0).abs() < 1e-10);
        assert!((beta_support_probability - 1.0).abs() < 1e-10);
        let on_support: u64 = beta_support.iter().map(|b| r.sampled.get(b).copied().unwrap_or(0)).sum();
        assert_eq!(on_support, 10_000);
        assert_eq!(r.sampled.values().sum::<u64>(), 10_000);
    }

    #[test]
    fn classify_uses_budget_when_shots_are_omitted() {
        let mut c = config(Kind::Classify);
        c.shots = None;
        c.operator_sign = Some(Sign::Minus);
        let r = run(&c).unwrap();
        assert_eq!(r.shots, 8);
        let Details::Classify { exact_mean, draws, .. } = r.details else {
            panic!("wrong details");
        };
        assert!((exact_mean + 0.5).abs() < 1e-12);
        assert_eq!(draws, 8);
        assert_eq!(r.sampled.values().sum::<u64>(), 8);
        assert!((r.theoretical["0"] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn ham_search_and_chirality_run() {
        let r = run(&config(Kind::HamSearch)).unwrap();
        let Details::HamSearch { overlap, t_star, .. } = r.details else {
            panic!("wrong details");
        };
        assert!((overlap - 1.0).abs() < 1e-10);
        assert!((t_star - 2.0).abs() < 1e-12);
        let r = run(&config(Kind::Chirality)).unwrap();
        let Details::Chirality { plus_weight, minus_weight, .. } = r.details else {
            panic!("wrong details");
        };
        assert!((plus_weight - 0.5).abs() < 1e-12 && (minus_weight - 0.5).abs() < 1e-12);
    }

    #[test]
    fn library_parameter_errors_are_config_errors() {
        let mut c = config(Kind::Classify);
        c.theta = Some(Angle::Radians(0.7));
        c.g_min = Some(0.5);
        assert_eq!(run(&c).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn verify_algebra_reports_every_pair() {
        let mut c = config(Kind::VerifyAlgebra);
        c.n_qubits = 5;
        c.theta = None;
        let r = run(&c).unwrap();
        let Details::VerifyAlgebra { pairs, failures, .. } = r.details else {
            panic!("wrong details");
        };
        assert_eq!(pairs.len(), 45);
        assert_eq!(failures, 0);
    }
}
