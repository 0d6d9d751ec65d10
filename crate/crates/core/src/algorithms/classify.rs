use serde::{Deserialize, Serialize};

use crate::clifford::GeneratorSet;
use crate::error::{Error, Result};
use crate::pauli::{PauliString, Phase};
use crate::spinor::{eigenstate, EigenstateSpec, Sign};
use crate::statevector::{apply_rotor_factor, expectation_string, sample_pm_observable, SampleStream, StateVector};

/// Smallest `|cos 2θ|` accepted as off the decision boundary.
pub const BOUNDARY_MARGIN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    A,
    B,
}

impl ClassLabel {
    /// Class A iff the mean is non-negative.
    pub fn from_mean(mean: f64) -> ClassLabel {
        match Sign::of(mean) {
            Sign::Plus => ClassLabel::A,
            Sign::Minus => ClassLabel::B,
        }
    }
}

/// One item to classify: `ψ = cos θ|Γ_j⟩ + sin θ Γ_iΓ_j|Γ_j⟩`, measured with
/// `O = ±Γ_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationTask {
    pub theta: f64,
    pub i: usize,
    pub j: usize,
    pub eigen_spec: EigenstateSpec,
    pub class_operator_sign: Sign,
    pub delta: f64,
    pub g_min: f64,
}

impl ClassificationTask {
    /// `|cos 2θ|`, the distance of `⟨O⟩` from the boundary.
    pub fn gap(&self) -> f64 {
        (2.0 * self.theta).cos().abs()
    }

    pub fn validate(&self, gens: &GeneratorSet) -> Result<()> {
        gens.check_index(self.i)?;
        gens.check_index(self.j)?;
        if self.i == self.j {
            return Err(Error::parameter(format!("i and j must differ, both are {}", self.i)));
        }
        if self.eigen_spec.j != self.j {
            return Err(Error::parameter(format!(
                "eigenstate is for Γ_{} but the task measures Γ_{}",
                self.eigen_spec.j, self.j
            )));
        }
        check_budget_args(self.g_min, self.delta)?;
        let gap = self.gap();
        if gap < BOUNDARY_MARGIN {
            return Err(Error::Boundary {
                gap,
                margin: BOUNDARY_MARGIN,
            });
        }
        if gap + 1e-12 < self.g_min {
            return Err(Error::parameter(format!(
                "g_min = {} exceeds this task's gap |cos 2θ| = {gap}",
                self.g_min
            )));
        }
        Ok(())
    }
}

fn check_budget_args(g_min: f64, delta: f64) -> Result<()> {
    if !(g_min > 0.0 && g_min <= 1.0) {
        return Err(Error::parameter(format!("g_min = {g_min} outside (0, 1]")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::parameter(format!("delta = {delta} outside (0, 1)")));
    }
    Ok(())
}

/// Hoeffding shot budget `⌈ln(2/δ) / (2 g_min²)⌉`.
pub fn shot_budget(g_min: f64, delta: f64) -> Result<u64> {
    check_budget_args(g_min, delta)?;
    let n = ((2.0 / delta).ln() / (2.0 * g_min * g_min)).ceil();
    Ok((n as u64).max(1))
}

/// `R_ij(θ)|Γ_j⟩`.
pub fn prepare_state(task: &ClassificationTask, gens: &GeneratorSet) -> Result<StateVector> {
    task.validate(gens)?;
    let alpha = eigenstate(&task.eigen_spec, gens)?;
    apply_rotor_factor(task.i, task.j, task.theta, gens, &alpha)
}

/// `O = ±Γ_j`.
pub fn classification_operator(task: &ClassificationTask, gens: &GeneratorSet) -> Result<PauliString> {
    let gamma = gens.gamma(task.j)?;
    Ok(match task.class_operator_sign {
        Sign::Plus => gamma.clone(),
        Sign::Minus => gamma.scaled(Phase::MINUS_ONE),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: ClassLabel,
    pub exact_mean: f64,
    pub empirical_mean: f64,
    pub budget_used: u64,
}

/// Classifies by the sign of `⟨O⟩`: exactly when `shots = 0`, otherwise
/// from the Hoeffding budget of ±1 draws.
pub fn classify(
    task: &ClassificationTask,
    gens: &GeneratorSet,
    shots: u64,
    stream: SampleStream,
) -> Result<Classification> {
    let budget = if shots == 0 {
        0
    } else {
        shot_budget(task.g_min, task.delta)?
    };
    classify_with_shots(task, gens, budget, stream)
}

/// Same as [`classify`] with an explicit number of ±1 draws (`0` = exact).
pub fn classify_with_shots(
    task: &ClassificationTask,
    gens: &GeneratorSet,
    shots: u64,
    stream: SampleStream,
) -> Result<Classification> {
    let psi = prepare_state(task, gens)?;
    let op = classification_operator(task, gens)?;
    let exact_mean = expectation_string(&op, &psi)?.re;
    let empirical_mean = if shots == 0 {
        exact_mean
    } else {
        let draws = sample_pm_observable(&op, &psi, shots, stream)?;
        draws.iter().map(|&d| d as f64).sum::<f64>() / shots as f64
    };
    Ok(Classification {
        label: ClassLabel::from_mean(empirical_mean),
        exact_mean,
        empirical_mean,
        budget_used: shots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{build_generators, GeneratorConvention};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    fn task(n: usize, theta: f64, sign: Sign) -> ClassificationTask {
        ClassificationTask {
            theta,
            i: 2,
            j: 1,
            eigen_spec: EigenstateSpec::principal(1, n),
            class_operator_sign: sign,
            delta: 0.05,
            g_min: 0.5,
        }
    }

    /// P(Bin(n, p) ∈ range), summed term by term.
    fn binomial_mass(n: u64, p: f64, keep: impl Fn(u64) -> bool) -> f64 {
        let mut total = 0.0;
        for k in 0..=n {
            if keep(k) {
                let mut log_c = 0.0;
                for t in 0..k {
                    log_c += ((n - t) as f64).ln() - ((t + 1) as f64).ln();
                }
                total += (log_c + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp();
            }
        }
        total
    }

    #[test]
    fn budget_examples() {
        assert_eq!(shot_budget(0.5, 0.05).unwrap(), 8);
        let delta = 2.0 / std::f64::consts::E.powi(2);
        assert_eq!(shot_budget(1.0, delta).unwrap(), 1);
        assert_eq!(shot_budget(1.0, 0.05).unwrap(), 2);
    }

    #[test]
    fn halving_gap_quadruples_budget() {
        for delta in [0.3, 0.05, 0.01, 1e-4] {
            for g in [1.0, 0.8, 0.5, 0.3] {
                let raw = |g: f64| (2.0f64 / delta).ln() / (2.0 * g * g);
                assert_eq!(shot_budget(g, delta).unwrap(), raw(g).ceil() as u64);
                assert_eq!(shot_budget(g / 2.0, delta).unwrap(), (4.0 * raw(g)).ceil() as u64);
            }
        }
    }

    #[test]
    fn budget_is_monotone() {
        let mut last = 0;
        for k in 1..=100 {
            let b = shot_budget(1.0 - k as f64 / 101.0, 0.05).unwrap();
            assert!(b >= last);
            last = b;
        }
        let mut last = u64::MAX;
        for k in 1..100 {
            let b = shot_budget(0.5, k as f64 / 100.0).unwrap();
            assert!(b <= last);
            last = b;
        }
    }

    #[test]
    fn budget_rejects_bad_arguments() {
        assert!(shot_budget(0.0, 0.05).is_err());
        assert!(shot_budget(1.5, 0.05).is_err());
        assert!(shot_budget(0.5, 0.0).is_err());
        assert!(shot_budget(0.5, 1.0).is_err());
    }

    #[test]
    fn exact_classification_examples() {
        let gens = build_generators(2, GeneratorConvention::XPrefix, false).unwrap();
        let a = classify(&task(2, FRAC_PI_6, Sign::Plus), &gens, 0, SampleStream::new(0, 0)).unwrap();
        assert_eq!(a.label, ClassLabel::A);
        assert!((a.empirical_mean - 0.5).abs() < 1e-12);
        assert_eq!(a.budget_used, 0);
        let b = classify(&task(2, FRAC_PI_6, Sign::Minus), &gens, 0, SampleStream::new(0, 0)).unwrap();
        assert_eq!(b.label, ClassLabel::B);
        assert!((b.empirical_mean + 0.5).abs() < 1e-12);
    }

    #[test]
    fn boundary_is_rejected() {
        let gens = build_generators(2, GeneratorConvention::XPrefix, false).unwrap();
        let mut t = task(2, FRAC_PI_4, Sign::Plus);
        t.g_min = 0.1;
        assert!(matches!(
            classify(&t, &gens, 0, SampleStream::new(0, 0)),
            Err(Error::Boundary { .. })
        ));
    }

    #[test]
    fn sampled_classification_uses_the_budget() {
        let gens = build_generators(3, GeneratorConvention::XPrefix, false).unwrap();
        let mut t = task(3, FRAC_PI_6, Sign::Plus);
        t.delta = 0.01;
        let r = classify(&t, &gens, 1, SampleStream::new(1, 2)).unwrap();
        assert_eq!(r.budget_used, 11);
        assert!((r.exact_mean - 0.5).abs() < 1e-12);
    }

    /// Monte-Carlo error rate against the exact binomial tail. With ±1 draws
    /// the Hoeffding range is 2, so the budget above does not by itself
    /// guarantee `δ`; the simulation has to agree with the binomial law.
    #[test]
    fn monte_carlo_error_rate_matches_binomial_law() {
        let gens = build_generators(2, GeneratorConvention::XPrefix, false).unwrap();
        let mut t = task(2, FRAC_PI_6, Sign::Plus);
        t.delta = 0.01;
        let n = shot_budget(t.g_min, t.delta).unwrap();
        let trials = 10_000u64;
        let errors = (0..trials)
            .filter(|&k| classify(&t, &gens, 1, SampleStream::new(2024, k)).unwrap().label != ClassLabel::A)
            .count() as f64;
        let rate = errors / trials as f64;
        // wrong iff fewer than n/2 of the n draws are +1, with P(+1) = 0.75
        let exact = binomial_mass(n, 0.75, |k| 2 * k < n);
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        assert!((rate - exact).abs() <= 4.0 * sigma, "rate {rate}, exact {exact}");
    }
}
