//! Quantum mechanical side: statevectors, planar spin observables, the
//! alternating Bell operator and its GHZ violation.
//!
//! Conventions: `|↑⟩` is basis index 0 and `|↓⟩` index 1; particle `k`
//! occupies bit `k-1` of the basis index, matching the setting-index layout
//! of [`crate::inequality`]. Observables lie in the x–y plane,
//! `A(α) = cos α σ_x + sin α σ_y`, with eigenvalues ±1.

mod biseparable;
mod operator;
mod optimize;
mod state;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequality::{MultiIndex, SignVariant};

pub use biseparable::{
    biseparable_expectation, biseparable_sweep, random_ensemble, BiseparableComponent, BiseparableEnsemble,
    SweepConfig, SweepReport,
};
pub use operator::{alternating_operator, BuildMethod, OperatorMatrix, MAX_OPERATOR_PARTICLES};
pub use optimize::{
    coordinate_ascent, maximize_violation, maximize_violation_with, AscentConfig, AscentResult, LineSearch,
    ViolationSearch,
};
pub use state::{
    alternating_expectation, alternating_expectations, correlation, correlation_tensor, ghz_state,
    outcome_probabilities, sample_counts, StateVector, MAX_STATE_PARTICLES,
};

/// 2×2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

/// `cos α σ_x + sin α σ_y`: off-diagonal `e^{-iα}` (row 0) and `e^{iα}`
/// (row 1).
pub fn spin_matrix(alpha: f64) -> Mat2 {
    let zero = Complex64::new(0.0, 0.0);
    [
        [zero, Complex64::from_polar(1.0, -alpha)],
        [Complex64::from_polar(1.0, alpha), zero],
    ]
}

/// [`spin_matrix`] as a 2×2 [`OperatorMatrix`].
pub fn spin_observable(alpha: f64) -> Result<OperatorMatrix> {
    if !alpha.is_finite() {
        return Err(Error::InvalidSettings(format!("angle {alpha} is not finite")));
    }
    Ok(OperatorMatrix::from_mat2(&spin_matrix(alpha)))
}

/// Measurement angles `α^(k)_i` for every particle `k` and setting `i ∈ {1,2}`
/// (radians).
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSettings {
    angles: Vec<[f64; 2]>,
}

impl AngleSettings {
    pub fn new(angles: Vec<[f64; 2]>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidParticleCount { n: 0, min: 1 });
        }
        if angles.iter().flatten().any(|a| !a.is_finite()) {
            return Err(Error::InvalidSettings("angles must be finite".into()));
        }
        Ok(AngleSettings { angles })
    }

    /// From a flat vector `[α^(1)_1, α^(1)_2, α^(2)_1, …]`.
    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if !flat.len().is_multiple_of(2) {
            return Err(Error::InvalidSettings("odd number of angles".into()));
        }
        Self::new(flat.chunks(2).map(|c| [c[0], c[1]]).collect())
    }

    pub fn n(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[[f64; 2]] {
        &self.angles
    }

    pub fn flat(&self) -> Vec<f64> {
        self.angles.iter().flatten().copied().collect()
    }

    /// Angle of particle `k` (0-based) for the setting chosen by `index`.
    pub fn angle_for(&self, index: MultiIndex, k: usize) -> f64 {
        self.angles[k][(index.code() >> k & 1) as usize]
    }

    /// Every angle reduced to `(-π, π]`.
    pub fn wrapped(&self) -> AngleSettings {
        AngleSettings {
            angles: self.angles.iter().map(|p| p.map(wrap_angle)).collect(),
        }
    }

    pub(crate) fn check_n(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: self.n(),
            });
        }
        Ok(())
    }
}

pub(crate) fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let r = a.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r - two_pi
    } else {
        r
    }
}

/// `{"n", "angles": [[a1, a2] × n]}` in radians.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnglesDocument {
    pub n: usize,
    pub angles: Vec<[f64; 2]>,
}

impl From<&AngleSettings> for AnglesDocument {
    fn from(s: &AngleSettings) -> Self {
        AnglesDocument {
            n: s.n(),
            angles: s.angles.clone(),
        }
    }
}

impl TryFrom<AnglesDocument> for AngleSettings {
    type Error = Error;

    fn try_from(doc: AnglesDocument) -> Result<Self> {
        if doc.angles.len() != doc.n {
            return Err(Error::DimensionMismatch {
                expected: doc.n,
                actual: doc.angles.len(),
            });
        }
        AngleSettings::new(doc.angles)
    }
}

/// GHZ correlation in closed form: `ghz_sign · cos(Σ_k α^(k)_{i_k})`.
pub fn ghz_correlation_analytic(ghz_sign: i8, settings: &AngleSettings, index: MultiIndex) -> f64 {
    let total: f64 = (0..settings.n()).map(|k| settings.angle_for(index, k)).sum();
    ghz_sign as f64 * total.cos()
}

/// Angles at which the GHZ state reaches `2^(n-1)√2` on the chosen
/// inequality: setting 1 is `(s·π/4, 0, …, 0)` and setting 2 is
/// `(s·π/4 + π/2, π/2, …, π/2)` with `s = ±1` for `Plus`/`Minus`. Every
/// 1→2 switch then adds `π/2` to the cosine argument, so
/// `cos(s·π/4 + t·π/2) = ν(t)·√2/2`.
pub fn optimal_angles(n: usize, variant: SignVariant) -> Result<AngleSettings> {
    if n < 2 {
        return Err(Error::InvalidParticleCount { n, min: 2 });
    }
    let s = variant.sign() as f64;
    let mut angles = vec![[0.0, FRAC_PI_2]; n];
    angles[0] = [s * FRAC_PI_4, s * FRAC_PI_4 + FRAC_PI_2];
    AngleSettings::new(angles)
}

/// `⟨S⟩` on a GHZ state in `O(n)`.
///
/// With `z_{k,i} = e^{iα^(k)_i}` and `ν(t)·√2/2 = Re(e^{±iπ/4} i^t)`, the
/// sum over all `2^n` setting choices factorizes:
/// `Σ_I ν(t(I)) e^{iθ_I} = (√2/2)[e^{±iπ/4} Π_k (z_{k1} + i z_{k2}) +
/// e^{∓iπ/4} Π_k (z_{k1} − i z_{k2})]`.
pub fn ghz_expectation_closed_form(ghz_sign: i8, variant: SignVariant, settings: &AngleSettings) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    let (mut up, mut down) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    for pair in settings.angles() {
        let (z1, z2) = (Complex64::from_polar(1.0, pair[0]), Complex64::from_polar(1.0, pair[1]));
        up *= z1 + i * z2;
        down *= z1 - i * z2;
    }
    let phase = Complex64::from_polar(1.0, variant.sign() as f64 * FRAC_PI_4);
    let sum = (phase * up + phase.conj() * down) * (std::f64::consts::SQRT_2 / 2.0);
    ghz_sign as f64 * sum.re
}
