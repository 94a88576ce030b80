use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{spin_matrix, AngleSettings, Mat2};
use crate::error::{Error, Result};
use crate::exec::{sub_seed, Execution};
use crate::hv_model::CountsDataset;
use crate::inequality::{extract_bits, CorrelationTensor, MultiIndex, SignVariant, EXACT_TOL};

/// Largest particle count for statevector evaluation.
pub const MAX_STATE_PARTICLES: usize = 24;

/// Imaginary residue above which an expectation value is treated as a
/// numerical fault.
const IMAG_FAULT: f64 = 1e-9;

/// Normalized pure state of `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParticleCount { n, min: 1 });
    }
    if n > MAX_STATE_PARTICLES {
        return Err(Error::Capacity {
            what: "statevector",
            required: format!("2^{n} amplitudes"),
            limit: format!("2^{MAX_STATE_PARTICLES}"),
        });
    }
    Ok(())
}

impl StateVector {
    /// Validates dimension and normalization (within `1e-12`).
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_n(n)?;
        if amplitudes.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                actual: amplitudes.len(),
            });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > EXACT_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm} ≠ 1")));
        }
        Ok(StateVector { n, amplitudes })
    }

    /// Rescales an arbitrary nonzero vector.
    pub fn normalized(n: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(n, amplitudes)
    }

    /// Haar-random state: normalized standard complex Gaussian vector.
    pub fn random(n: usize, rng: &mut impl Rng) -> Result<Self> {
        check_n(n)?;
        let amplitudes = (0..1usize << n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(n, amplitudes)
    }

    /// `|ψ⟩` on the full system built from one factor per cluster: factor
    /// `j` lives on the particles selected by `blocks[j].0` (in ascending
    /// order). The masks must partition all `n` particles.
    pub fn tensor_blocks(n: usize, blocks: &[(u32, &StateVector)]) -> Result<Self> {
        check_n(n)?;
        let mut covered = 0u32;
        for (mask, factor) in blocks {
            if mask & covered != 0 || factor.n != mask.count_ones() as usize {
                return Err(Error::InvalidState(format!(
                    "factor on mask {mask:#b} overlaps or has the wrong size"
                )));
            }
            covered |= mask;
        }
        if covered as u64 != (1u64 << n) - 1 {
            return Err(Error::InvalidState("factors do not cover every particle".into()));
        }
        let amplitudes = (0..1u32 << n)
            .map(|x| {
                blocks
                    .iter()
                    .map(|(mask, f)| f.amplitudes[extract_bits(x, *mask) as usize])
                    .product()
            })
            .collect();
        Self::normalized(n, amplitudes)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &[Complex64]) -> Complex64 {
        self.amplitudes.iter().zip(other).map(|(a, b)| a.conj() * b).sum()
    }
}

/// `(|0…0⟩ + sign·|1…1⟩)/√2`.
pub fn ghz_state(n: usize, sign: i8) -> Result<StateVector> {
    check_n(n)?;
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidState(format!("GHZ sign must be ±1, got {sign}")));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
    amplitudes[0] += h;
    amplitudes[(1 << n) - 1] += sign as f64 * h;
    StateVector::new(n, amplitudes)
}

/// Apply a 2×2 matrix to particle `k` (0-based) in place.
pub(crate) fn apply_single(amps: &mut [Complex64], k: usize, m: &Mat2) {
    let bit = 1usize << k;
    for x in 0..amps.len() {
        if x & bit == 0 {
            let (a0, a1) = (amps[x], amps[x | bit]);
            amps[x] = m[0][0] * a0 + m[0][1] * a1;
            amps[x | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

fn real_part(z: Complex64, scale: f64) -> Result<f64> {
    if z.im.abs() > IMAG_FAULT * scale.max(1.0) {
        return Err(Error::Numerical(format!("expectation has imaginary residue {}", z.im)));
    }
    Ok(z.re)
}

/// `⟨ψ| A^(1)_{i_1} ⊗ ⋯ ⊗ A^(n)_{i_n} |ψ⟩`.
pub fn correlation(state: &StateVector, settings: &AngleSettings, index: MultiIndex) -> Result<f64> {
    settings.check_n(state.n)?;
    if index.n() != state.n {
        return Err(Error::DimensionMismatch {
            expected: state.n,
            actual: index.n(),
        });
    }
    let mut phi = state.amplitudes.clone();
    for k in 0..state.n {
        apply_single(&mut phi, k, &spin_matrix(settings.angle_for(index, k)));
    }
    let e = real_part(state.inner(&phi), 1.0)?;
    Ok(e.clamp(-1.0 - EXACT_TOL, 1.0 + EXACT_TOL))
}

/// Correlations for all `2^n` setting choices.
pub fn correlation_tensor(state: &StateVector, settings: &AngleSettings, exec: Execution) -> Result<CorrelationTensor> {
    settings.check_n(state.n)?;
    let n = state.n;
    let values = exec
        .map_collect(0..1u64 << n, |c| {
            correlation(state, settings, MultiIndex::from_code(n, c as u32)?)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    CorrelationTensor::new(n, values, None)
}

/// `⟨S⁺⟩` and `⟨S⁻⟩` at once, by applying the recursion
/// `S_k^± = S_{k-1}^± A^(k)_1 ∓ S_{k-1}^∓ A^(k)_2` (with `S_0^± = 1`)
/// directly to the statevector: `4n` single-particle applications.
pub fn alternating_expectations(state: &StateVector, settings: &AngleSettings) -> Result<(f64, f64)> {
    settings.check_n(state.n)?;
    let mut plus = state.amplitudes.clone();
    let mut minus = state.amplitudes.clone();
    for (k, pair) in settings.angles().iter().enumerate() {
        let (a1, a2) = (spin_matrix(pair[0]), spin_matrix(pair[1]));
        let mut p1 = plus.clone();
        apply_single(&mut p1, k, &a1);
        let mut m2 = minus.clone();
        apply_single(&mut m2, k, &a2);
        let mut m1 = minus;
        apply_single(&mut m1, k, &a1);
        let mut p2 = plus;
        apply_single(&mut p2, k, &a2);
        plus = p1.iter().zip(&m2).map(|(a, b)| a - b).collect();
        minus = m1.iter().zip(&p2).map(|(a, b)| a + b).collect();
    }
    let scale = (1u64 << state.n) as f64;
    Ok((
        real_part(state.inner(&plus), scale)?,
        real_part(state.inner(&minus), scale)?,
    ))
}

/// `⟨ψ| S^variant |ψ⟩`.
pub fn alternating_expectation(state: &StateVector, variant: SignVariant, settings: &AngleSettings) -> Result<f64> {
    let (p, m) = alternating_expectations(state, settings)?;
    Ok(match variant {
        SignVariant::Plus => p,
        SignVariant::Minus => m,
    })
}

/// Joint outcome distribution for one setting choice. Entry `j` is the
/// probability of the outcome record whose bit `k` is set iff particle
/// `k+1` gave `-1`.
pub fn outcome_probabilities(state: &StateVector, settings: &AngleSettings, index: MultiIndex) -> Result<Vec<f64>> {
    settings.check_n(state.n)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = state.amplitudes.clone();
    for k in 0..state.n {
        // rows are ⟨+_α| and ⟨-_α| with |±_α⟩ = (|0⟩ ± e^{iα}|1⟩)/√2
        let e = Complex64::from_polar(h, -settings.angle_for(index, k));
        let u: Mat2 = [[Complex64::new(h, 0.0), e], [Complex64::new(h, 0.0), -e]];
        apply_single(&mut amps, k, &u);
    }
    Ok(amps.iter().map(|a| a.norm_sqr()).collect())
}

/// Sample `shots` measurement records per setting choice. Each setting uses
/// its own stream derived from `(seed, encoded index)`.
pub fn sample_counts(
    state: &StateVector,
    settings: &AngleSettings,
    shots: u64,
    seed: u64,
    exec: Execution,
) -> Result<CountsDataset> {
    settings.check_n(state.n)?;
    let n = state.n;
    let data = exec
        .map_collect(0..1u64 << n, |c| -> Result<Vec<u64>> {
            let probs = outcome_probabilities(state, settings, MultiIndex::from_code(n, c as u32)?)?;
            let dist =
                WeightedIndex::new(&probs).map_err(|e| Error::Numerical(format!("outcome distribution: {e}")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, c));
            let mut counts = vec![0u64; 1 << n];
            for _ in 0..shots {
                counts[dist.sample(&mut rng)] += 1;
            }
            Ok(counts)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    CountsDataset::new(n, shots, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::{inequality_value, quantum_bound, CoefficientTensor};
    use crate::quantum::{ghz_correlation_analytic, optimal_angles, OperatorMatrix};

    fn random_settings(n: usize, rng: &mut impl Rng) -> AngleSettings {
        AngleSettings::new(
            (0..n)
                .map(|_| [rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0)])
                .collect(),
        )
        .unwrap()
    }

    /// Oracle: the dense `2^n × 2^n` tensor product, built with the
    /// most-significant particle as the left Kronecker factor.
    fn dense_correlation(state: &StateVector, settings: &AngleSettings, index: MultiIndex) -> Complex64 {
        let mut op = OperatorMatrix::identity(1);
        for k in 0..state.n() {
            let a = OperatorMatrix::from_mat2(&spin_matrix(settings.angle_for(index, k)));
            op = a.kron(&op);
        }
        op.expectation_complex(state.amplitudes())
    }

    #[test]
    fn ghz_examples() {
        let g = ghz_state(3, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g.amplitudes()[0].re - h).abs() < 1e-15);
        assert!((g.amplitudes()[7].re - h).abs() < 1e-15);
        assert!(g.amplitudes()[1..7].iter().all(|a| a.norm() == 0.0));
        let g1 = ghz_state(1, 1).unwrap();
        assert!((g1.amplitudes()[0].re - h).abs() < 1e-15 && (g1.amplitudes()[1].re - h).abs() < 1e-15);
        for n in 1..=12 {
            let norm: f64 = ghz_state(n, -1)
                .unwrap()
                .amplitudes()
                .iter()
                .map(|a| a.norm_sqr())
                .sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        assert!(ghz_state(0, 1).is_err());
        assert!(ghz_state(2, 0).is_err());
    }

    #[test]
    fn ghz_zero_angle_correlations() {
        for n in 1..=6 {
            let zero = AngleSettings::new(vec![[0.0, 0.0]; n]).unwrap();
            for index in MultiIndex::all(n) {
                assert!((correlation(&ghz_state(n, 1).unwrap(), &zero, index).unwrap() - 1.0).abs() < 1e-12);
                assert!((correlation(&ghz_state(n, -1).unwrap(), &zero, index).unwrap() + 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn correlation_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=8 {
            for _ in 0..3 {
                let s = StateVector::random(n, &mut rng).unwrap();
                let a = random_settings(n, &mut rng);
                let code = rng.random_range(0..1u32 << n);
                let index = MultiIndex::from_code(n, code).unwrap();
                let oracle = dense_correlation(&s, &a, index);
                assert!(oracle.im.abs() < 1e-12);
                assert!((correlation(&s, &a, index).unwrap() - oracle.re).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn analytic_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for draw in 0..200 {
            let n = 1 + draw % 8;
            let sign = if draw % 2 == 0 { 1 } else { -1 };
            let g = ghz_state(n, sign).unwrap();
            let a = random_settings(n, &mut rng);
            let index = MultiIndex::from_code(n, rng.random_range(0..1u32 << n)).unwrap();
            let diff = correlation(&g, &a, index).unwrap() - ghz_correlation_analytic(sign, &a, index);
            assert!(diff.abs() < 1e-10);
        }
    }

    #[test]
    fn recursion_expectation_matches_tensor_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=7 {
            let s = StateVector::random(n, &mut rng).unwrap();
            let a = random_settings(n, &mut rng);
            let corr = correlation_tensor(&s, &a, Execution::Sequential).unwrap();
            let (p, m) = alternating_expectations(&s, &a).unwrap();
            for (v, got) in [(SignVariant::Plus, p), (SignVariant::Minus, m)] {
                let via_sum = inequality_value(&CoefficientTensor::alternating(n, v).unwrap(), &corr)
                    .unwrap()
                    .value;
                assert!((via_sum - got).abs() < 1e-10, "n={n} {v}");
            }
        }
    }

    #[test]
    fn ghz_reaches_quantum_bound() {
        for n in 2..=10 {
            for v in SignVariant::ALL {
                let a = optimal_angles(n, v).unwrap();
                let value = alternating_expectation(&ghz_state(n, 1).unwrap(), v, &a).unwrap();
                assert!((value - quantum_bound(n)).abs() < 1e-9);
                let value = alternating_expectation(&ghz_state(n, -1).unwrap(), v, &a).unwrap();
                assert!((value + quantum_bound(n)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn probabilities_reproduce_correlations() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for n in 1..=5 {
            let s = StateVector::random(n, &mut rng).unwrap();
            let a = random_settings(n, &mut rng);
            for index in MultiIndex::all(n) {
                let probs = outcome_probabilities(&s, &a, index).unwrap();
                assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                let parity: f64 = probs
                    .iter()
                    .enumerate()
                    .map(|(j, p)| if (j as u32).count_ones().is_multiple_of(2) { *p } else { -*p })
                    .sum();
                assert!((parity - correlation(&s, &a, index).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let g = ghz_state(3, 1).unwrap();
        let a = optimal_angles(3, SignVariant::Plus).unwrap();
        let x = sample_counts(&g, &a, 1000, 9, Execution::Parallel).unwrap();
        let y = sample_counts(&g, &a, 1000, 9, Execution::Sequential).unwrap();
        assert_eq!(x, y);
        assert_ne!(x, sample_counts(&g, &a, 1000, 10, Execution::Sequential).unwrap());
    }

    #[test]
    fn blocks_embed_in_place() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = StateVector::random(1, &mut rng).unwrap();
        let b = StateVector::random(2, &mut rng).unwrap();
        // particle 2 alone, particles 1 and 3 together
        let full = StateVector::tensor_blocks(3, &[(0b010, &a), (0b101, &b)]).unwrap();
        for x in 0..8usize {
            let expect = a.amplitudes()[(x >> 1) & 1] * b.amplitudes()[(x & 1) | ((x >> 2) << 1)];
            assert!((full.amplitudes()[x] - expect).norm() < 1e-12);
        }
        assert!(StateVector::tensor_blocks(3, &[(0b011, &a), (0b101, &b)]).is_err());
    }
}
