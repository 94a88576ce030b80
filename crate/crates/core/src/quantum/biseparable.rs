//! Convex mixtures of pure states that factorize across a bipartition.
//!
//! Any such mixture obeys the partially separable bound `2^(n-1)`; the
//! sweep here searches for the largest value it can reach with optimized
//! local angles.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::optimize::{coordinate_ascent, AscentConfig, LineSearch};
use super::state::StateVector;
use super::AngleSettings;
use crate::bound::Bipartition;
use crate::error::{Error, Result};
use crate::exec::{sub_seed, Execution};
use crate::inequality::{extract_bits, nu, partial_bound, SignVariant, EXACT_TOL};

/// `ψ_a ⊗ ψ_b` placed on the particles of `partition`, with a mixing weight.
#[derive(Debug, Clone, PartialEq)]
pub struct BiseparableComponent {
    pub weight: f64,
    pub partition: Bipartition,
    /// State of `partition.subset_a()`, in ascending particle order.
    pub factor_a: StateVector,
    pub factor_b: StateVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiseparableEnsemble {
    n: usize,
    components: Vec<BiseparableComponent>,
}

impl BiseparableEnsemble {
    pub fn new(n: usize, components: Vec<BiseparableComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidState("ensemble has no components".into()));
        }
        let mut total = 0.0;
        for (j, c) in components.iter().enumerate() {
            if c.partition.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: c.partition.n(),
                });
            }
            if c.weight.is_nan() || c.weight < 0.0 {
                return Err(Error::InvalidState(format!("component {j} has negative weight")));
            }
            if c.factor_a.n() != c.partition.size_a() || c.factor_b.n() != c.partition.size_b() {
                return Err(Error::InvalidState(format!(
                    "component {j} factors do not match partition {}",
                    c.partition
                )));
            }
            total += c.weight;
        }
        if (total - 1.0).abs() > EXACT_TOL {
            return Err(Error::InvalidState(format!("weights sum to {total}, not 1")));
        }
        Ok(BiseparableEnsemble { n, components })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[BiseparableComponent] {
        &self.components
    }

    /// Component `j` as an `n`-particle statevector.
    pub fn embedded(&self, j: usize) -> Result<StateVector> {
        let c = &self.components[j];
        StateVector::tensor_blocks(
            self.n,
            &[(c.partition.mask_a(), &c.factor_a), (c.partition.mask_b(), &c.factor_b)],
        )
    }
}

/// Correlations of one factor for all of its local setting choices.
///
/// `A(α)` maps `|0⟩ → e^{iα}|1⟩` and `|1⟩ → e^{-iα}|0⟩`, so a product of
/// observables flips every bit and `⟨φ|A|φ⟩ = Σ_x conj(φ[!x]) φ[x] e^{iθ(x)}`.
fn factor_correlations(factor: &StateVector, angles: &[[f64; 2]]) -> Vec<f64> {
    let p = factor.n();
    let amps = factor.amplitudes();
    let full = (1usize << p) - 1;
    let phases: Vec<[Complex64; 2]> = angles
        .iter()
        .map(|pair| pair.map(|a| Complex64::from_polar(1.0, a)))
        .collect();
    (0..1u32 << p)
        .map(|setting| {
            let local: Vec<Complex64> = (0..p).map(|k| phases[k][(setting >> k & 1) as usize]).collect();
            (0..=full)
                .map(|x| {
                    let phase = local.iter().enumerate().fold(Complex64::new(1.0, 0.0), |acc, (k, e)| {
                        if x >> k & 1 == 0 {
                            acc * e
                        } else {
                            acc * e.conj()
                        }
                    });
                    (amps[full ^ x].conj() * amps[x] * phase).re
                })
                .sum()
        })
        .collect()
}

/// `Σ_j w_j ⟨ψ_j| S |ψ_j⟩` with `ψ_j = ψ_{a,j} ⊗ ψ_{b,j}`, evaluated from the
/// factor correlations since `E(I) = E_a(I_a) E_b(I_b)` on a product state.
pub fn biseparable_expectation(
    ensemble: &BiseparableEnsemble,
    variant: SignVariant,
    settings: &AngleSettings,
) -> Result<f64> {
    settings.check_n(ensemble.n)?;
    if ensemble.n > 10 {
        return Err(Error::Capacity {
            what: "biseparable expectation",
            required: format!("{} particles", ensemble.n),
            limit: "n ≤ 10".into(),
        });
    }
    let n = ensemble.n;
    let pick = |mask: u32| -> Vec<[f64; 2]> {
        (0..n)
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| settings.angles()[k])
            .collect()
    };
    Ok(ensemble
        .components
        .iter()
        .map(|c| {
            let (ma, mb) = (c.partition.mask_a(), c.partition.mask_b());
            let ea = factor_correlations(&c.factor_a, &pick(ma));
            let eb = factor_correlations(&c.factor_b, &pick(mb));
            let s: f64 = (0..1u32 << n)
                .map(|code| {
                    nu(variant, code.count_ones() as usize) as f64
                        * ea[extract_bits(code, ma) as usize]
                        * eb[extract_bits(code, mb) as usize]
                })
                .sum();
            c.weight * s
        })
        .sum())
}

/// One to three components on uniformly chosen bipartitions, Haar-random
/// factors, weights uniform on the simplex.
pub fn random_ensemble(n: usize, rng: &mut impl Rng) -> Result<BiseparableEnsemble> {
    let parts = Bipartition::all(n);
    if parts.is_empty() {
        return Err(Error::InvalidParticleCount { n, min: 2 });
    }
    let count = rng.random_range(1..=3);
    let raw: Vec<f64> = (0..count)
        .map(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let mut components = Vec::with_capacity(count);
    for w in &raw {
        let partition = parts[rng.random_range(0..parts.len())];
        components.push(BiseparableComponent {
            weight: w / total,
            partition,
            factor_a: StateVector::random(partition.size_a(), rng)?,
            factor_b: StateVector::random(partition.size_b(), rng)?,
        });
    }
    // renormalize so the weights sum to 1 exactly enough for validation
    let sum: f64 = components.iter().map(|c| c.weight).sum();
    components.iter_mut().for_each(|c| c.weight /= sum);
    BiseparableEnsemble::new(n, components)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub samples: usize,
    pub seed: u64,
    pub ascent: AscentConfig,
    pub exec: Execution,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            samples: 10_000,
            seed: 0,
            ascent: AscentConfig {
                tol: 1e-9,
                max_sweeps: 200,
                line_search: LineSearch::Sinusoid,
                ..AscentConfig::default()
            },
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub n: usize,
    pub variant: SignVariant,
    pub samples: usize,
    pub seed: u64,
    /// Largest optimized `|⟨S⟩|` over all sampled ensembles.
    pub supremum: f64,
    pub argmax_sample: usize,
    pub bound: f64,
}

/// Sample random biseparable ensembles, optimize the local angles of each,
/// and record the largest value reached. Sample `i` uses the stream
/// `(seed, i)`.
pub fn biseparable_sweep(n: usize, variant: SignVariant, cfg: &SweepConfig) -> Result<SweepReport> {
    if !(2..=10).contains(&n) {
        return Err(Error::InvalidParticleCount { n, min: 2 });
    }
    let values = cfg
        .exec
        .map_collect(0..cfg.samples as u64, |i| -> Result<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, i));
            let ensemble = random_ensemble(n, &mut rng)?;
            let x0: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-PI..PI)).collect();
            let objective = |x: &[f64]| {
                let s = AngleSettings::from_flat(x).expect("finite angles");
                biseparable_expectation(&ensemble, variant, &s).unwrap_or(f64::NAN)
            };
            let r = coordinate_ascent(objective, x0, &cfg.ascent);
            if r.value.is_nan() {
                return Err(Error::Numerical("biseparable objective failed".into()));
            }
            Ok(r.value.abs())
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let (argmax_sample, supremum) =
        values.iter().copied().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
        );
    Ok(SweepReport {
        n,
        variant,
        samples: cfg.samples,
        seed: cfg.seed,
        supremum,
        argmax_sample,
        bound: partial_bound(n),
    })
}
