//! Violation verdicts from measurement counts.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hv_model::{estimate_correlations, CountsDataset};
use crate::inequality::{inequality_value, partial_bound, quantum_bound, CoefficientTensor, SignVariant};

pub const DEFAULT_THRESHOLD_SIGMA: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantVerdict {
    pub variant: SignVariant,
    pub value: f64,
    pub std_error: f64,
    /// `(|value| - 2^(n-1)) / std_error`; infinite when the error vanishes.
    pub z_score: f64,
    pub violates: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    pub n: usize,
    pub shots: u64,
    pub bound: f64,
    pub quantum_bound: f64,
    pub threshold_sigma: f64,
    pub variants: Vec<VariantVerdict>,
    /// Some variant exceeds the bound by more than `threshold_sigma`.
    pub violates_partial_separability: bool,
}

fn z_score(excess: f64, se: f64) -> f64 {
    if se > 0.0 {
        excess / se
    } else if excess > 0.0 {
        f64::INFINITY
    } else if excess < 0.0 {
        f64::NEG_INFINITY
    } else {
        0.0
    }
}

pub fn certify(data: &CountsDataset, threshold_sigma: f64) -> Result<CertificationReport> {
    if !(threshold_sigma.is_finite() && threshold_sigma >= 0.0) {
        return Err(Error::InvalidSettings(format!(
            "threshold {threshold_sigma} must be a nonnegative number"
        )));
    }
    let n = data.n();
    let corr = estimate_correlations(data)?;
    let bound = partial_bound(n);
    let variants = SignVariant::ALL
        .iter()
        .map(|&variant| {
            let v = inequality_value(&CoefficientTensor::alternating(n, variant)?, &corr)?;
            let std_error = v.std_error.unwrap_or(0.0);
            let z = z_score(v.value.abs() - bound, std_error);
            Ok(VariantVerdict {
                variant,
                value: v.value,
                std_error,
                z_score: z,
                violates: z > threshold_sigma,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CertificationReport {
        n,
        shots: data.shots(),
        bound,
        quantum_bound: quantum_bound(n),
        threshold_sigma,
        violates_partial_separability: variants.iter().any(|v| v.violates),
        variants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::Bipartition;
    use crate::exec::Execution;
    use crate::hv_model::{sample_dataset, HybridModel};
    use crate::quantum::{ghz_state, optimal_angles, sample_counts};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ghz_counts_violate() {
        let n = 3;
        let state = ghz_state(n, 1).unwrap();
        let data = sample_counts(
            &state,
            &optimal_angles(n, SignVariant::Plus).unwrap(),
            20_000,
            3,
            Execution::Parallel,
        )
        .unwrap();
        let report = certify(&data, DEFAULT_THRESHOLD_SIGMA).unwrap();
        assert!(report.violates_partial_separability);
        let plus = &report.variants[0];
        assert!((plus.value.abs() - report.quantum_bound).abs() < 6.0 * plus.std_error);
    }

    #[test]
    fn hybrid_models_do_not_violate() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for seed in 0..20 {
            let model = HybridModel::random(3, 3, &mut rng).unwrap();
            let data = sample_dataset(&model, 5_000, seed, Execution::Parallel).unwrap();
            assert!(
                !certify(&data, DEFAULT_THRESHOLD_SIGMA)
                    .unwrap()
                    .violates_partial_separability
            );
        }
    }

    #[test]
    fn zero_error_edge() {
        let part = Bipartition::new(2, &[1]).unwrap();
        let model = HybridModel::uniform(&part).unwrap();
        let data = sample_dataset(&model, 10, 0, Execution::Sequential).unwrap();
        assert!(certify(&data, -1.0).is_err());
        assert_eq!(z_score(0.0, 0.0), 0.0);
        assert_eq!(z_score(1.0, 0.0), f64::INFINITY);
        assert_eq!(z_score(-1.0, 0.0), f64::NEG_INFINITY);
    }
}
