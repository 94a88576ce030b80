//! Alternating sign sequences, coefficient tensors and correlation tensors.
//!
//! Every dense tensor over setting choices uses the same layout: a setting
//! choice `(i_1, …, i_n)` with `i_k ∈ {1, 2}` is encoded as an integer in
//! `[0, 2^n)` whose bit `k-1` is set iff particle `k` uses setting 2. The
//! number of 2-labels `t(I)` is then a popcount and a global 1↔2 relabeling
//! is a bitwise complement.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest particle count for which dense `2^n` tensors are built.
pub const MAX_TENSOR_PARTICLES: usize = 24;

/// Absolute tolerance for real-valued equality checks.
pub const EXACT_TOL: f64 = 1e-12;

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParticleCount { n, min: 1 });
    }
    if n > MAX_TENSOR_PARTICLES {
        return Err(Error::Capacity {
            what: "dense tensor",
            required: format!("2^{n} entries"),
            limit: format!("2^{MAX_TENSOR_PARTICLES}"),
        });
    }
    Ok(())
}

/// Which of the two alternating sign sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignVariant {
    Plus,
    Minus,
}

impl SignVariant {
    pub const ALL: [SignVariant; 2] = [SignVariant::Plus, SignVariant::Minus];

    pub fn other(self) -> SignVariant {
        match self {
            SignVariant::Plus => SignVariant::Minus,
            SignVariant::Minus => SignVariant::Plus,
        }
    }

    /// `+1` for `Plus`, `-1` for `Minus`.
    pub fn sign(self) -> i8 {
        match self {
            SignVariant::Plus => 1,
            SignVariant::Minus => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SignVariant::Plus => "plus",
            SignVariant::Minus => "minus",
        }
    }
}

impl fmt::Display for SignVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SignVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plus" | "+" | "p" => Ok(SignVariant::Plus),
            "minus" | "-" | "m" => Ok(SignVariant::Minus),
            other => Err(Error::Parse(format!("unknown variant `{other}`"))),
        }
    }
}

/// `(-1)^(k(k±1)/2)`: period four, cycles `(1,-1,-1,1)` for `Plus` and
/// `(1,1,-1,-1)` for `Minus`.
pub fn nu(variant: SignVariant, k: usize) -> i8 {
    const PLUS: [i8; 4] = [1, -1, -1, 1];
    const MINUS: [i8; 4] = [1, 1, -1, -1];
    match variant {
        SignVariant::Plus => PLUS[k % 4],
        SignVariant::Minus => MINUS[k % 4],
    }
}

/// One joint setting choice `I = (i_1, …, i_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    n: usize,
    code: u32,
}

impl MultiIndex {
    /// Build from the encoded integer (bit `k-1` set iff `i_k = 2`).
    pub fn from_code(n: usize, code: u32) -> Result<Self> {
        check_n(n)?;
        if (code as u64) >= (1u64 << n) {
            return Err(Error::InvalidSettings(format!(
                "encoded index {code} out of range for n = {n}"
            )));
        }
        Ok(MultiIndex { n, code })
    }

    /// Build from labels, each 1 or 2.
    pub fn from_settings(settings: &[u8]) -> Result<Self> {
        let n = settings.len();
        check_n(n)?;
        let mut code = 0u32;
        for (k, &s) in settings.iter().enumerate() {
            match s {
                1 => {}
                2 => code |= 1 << k,
                other => {
                    return Err(Error::InvalidSettings(format!(
                        "label {other} at particle {} (must be 1 or 2)",
                        k + 1
                    )))
                }
            }
        }
        Ok(MultiIndex { n, code })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    /// Number of particles using setting 2.
    pub fn t(&self) -> usize {
        self.code.count_ones() as usize
    }

    /// Setting label (1 or 2) of particle `k` (1-based).
    pub fn label(&self, k: usize) -> u8 {
        1 + ((self.code >> (k - 1)) & 1) as u8
    }

    pub fn settings(&self) -> Vec<u8> {
        (1..=self.n).map(|k| self.label(k)).collect()
    }

    /// All `2^n` indices in ascending encoded order.
    pub fn all(n: usize) -> impl Iterator<Item = MultiIndex> {
        (0..(1u32 << n)).map(move |code| MultiIndex { n, code })
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 1..=self.n {
            write!(f, "{}", self.label(k))?;
        }
        Ok(())
    }
}

/// Validate a 0-based permutation of `{0, …, n-1}`.
pub fn validate_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} does not match n = {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(format!(
                "{perm:?} is not a bijection on 0..{n}"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Inverse of a validated permutation.
pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    inv
}

/// Relabel the bits of an encoded index: bit `k` of the result is bit
/// `perm[k]` of `code`.
pub(crate) fn permute_code(code: u32, perm: &[usize]) -> u32 {
    perm.iter()
        .enumerate()
        .fold(0, |acc, (k, &src)| acc | (((code >> src) & 1) << k))
}

/// Gather the bits of `code` selected by `mask` into a compact integer,
/// lowest selected bit first. This maps a joint index to the local index of a
/// particle cluster.
#[inline]
pub fn extract_bits(code: u32, mask: u32) -> u32 {
    let mut out = 0;
    let mut bit = 0;
    let mut m = mask;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if code & low != 0 {
            out |= 1 << bit;
        }
        bit += 1;
        m ^= low;
    }
    out
}

/// Inverse of [`extract_bits`]: scatter the low bits of `local` onto the
/// positions selected by `mask`.
#[inline]
pub fn deposit_bits(local: u32, mask: u32) -> u32 {
    let mut out = 0;
    let mut bit = 0;
    let mut m = mask;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if local >> bit & 1 == 1 {
            out |= low;
        }
        bit += 1;
        m ^= low;
    }
    out
}

/// Signs `σ_I ∈ {±1}` over all `2^n` setting choices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoefficientTensor {
    n: usize,
    signs: Vec<i8>,
}

impl CoefficientTensor {
    /// Alternating tensor `σ_I = ν(variant, t(I))`.
    pub fn alternating(n: usize, variant: SignVariant) -> Result<Self> {
        check_n(n)?;
        let signs = (0..1u32 << n).map(|c| nu(variant, c.count_ones() as usize)).collect();
        Ok(CoefficientTensor { n, signs })
    }

    /// Arbitrary tensor from dense signs in encoded order.
    pub fn from_signs(n: usize, signs: Vec<i8>) -> Result<Self> {
        check_n(n)?;
        if signs.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                actual: signs.len(),
            });
        }
        if let Some(pos) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidTensor(format!(
                "entry {pos} is {} (must be ±1)",
                signs[pos]
            )));
        }
        Ok(CoefficientTensor { n, signs })
    }

    /// Tensor whose entry `c` is `+1` iff bit `c` of `mask` is clear.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::Capacity {
                what: "bitmask tensor",
                required: format!("2^{n} bits"),
                limit: "64 bits".into(),
            });
        }
        let signs = (0..1usize << n)
            .map(|c| if (mask >> c) & 1 == 0 { 1 } else { -1 })
            .collect();
        Self::from_signs(n, signs)
    }

    pub fn constant(n: usize, sign: i8) -> Result<Self> {
        check_n(n)?;
        Self::from_signs(n, vec![sign; 1 << n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn get(&self, index: MultiIndex) -> i8 {
        self.signs[index.code as usize]
    }

    pub fn sign_at(&self, code: usize) -> i8 {
        self.signs[code]
    }

    /// `σ'_I = σ_{flip(I)}` with every 1↔2 exchanged.
    pub fn swap_labels(&self) -> CoefficientTensor {
        let mask = (1usize << self.n) - 1;
        let signs = (0..=mask).map(|c| self.signs[!c & mask]).collect();
        CoefficientTensor { n: self.n, signs }
    }

    /// `σ'_I = σ_{π(I)}` where `π(I)_k = i_{perm[k]}` (0-based particle
    /// positions). Applying `perm` and then its inverse is the identity.
    pub fn permute_particles(&self, perm: &[usize]) -> Result<CoefficientTensor> {
        validate_permutation(perm, self.n)?;
        let signs = (0..1u32 << self.n)
            .map(|c| self.signs[permute_code(c, perm) as usize])
            .collect();
        Ok(CoefficientTensor { n: self.n, signs })
    }

    pub fn negate(&self) -> CoefficientTensor {
        CoefficientTensor {
            n: self.n,
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    /// `Some(s)` when `self == s · other` entrywise.
    pub fn proportionality(&self, other: &CoefficientTensor) -> Option<i8> {
        if self.n != other.n {
            return None;
        }
        let s = self.signs[0] * other.signs[0];
        self.signs
            .iter()
            .zip(&other.signs)
            .all(|(a, b)| *a == s * *b)
            .then_some(s)
    }

    /// Whether the tensor depends on `I` only through `t(I)`.
    pub fn is_permutation_symmetric(&self) -> bool {
        let mut by_t = vec![0i8; self.n + 1];
        self.signs.iter().enumerate().all(|(c, &s)| {
            let t = (c as u32).count_ones() as usize;
            if by_t[t] == 0 {
                by_t[t] = s;
            }
            by_t[t] == s
        })
    }
}

/// Correlations `E(I)` over all `2^n` setting choices, optionally with
/// standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor {
    n: usize,
    values: Vec<f64>,
    std_errors: Option<Vec<f64>>,
}

impl CorrelationTensor {
    pub fn new(n: usize, values: Vec<f64>, std_errors: Option<Vec<f64>>) -> Result<Self> {
        check_n(n)?;
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                actual: values.len(),
            });
        }
        for (c, v) in values.iter().enumerate() {
            if !v.is_finite() || v.abs() > 1.0 + EXACT_TOL {
                return Err(Error::InvalidCorrelation(format!(
                    "E({}) = {v} outside [-1, 1]",
                    MultiIndex { n, code: c as u32 }
                )));
            }
        }
        if let Some(se) = &std_errors {
            if se.len() != 1 << n {
                return Err(Error::DimensionMismatch {
                    expected: 1 << n,
                    actual: se.len(),
                });
            }
            if let Some(c) = se.iter().position(|e| !e.is_finite() || *e < 0.0) {
                return Err(Error::InvalidCorrelation(format!(
                    "std_error({}) = {} is negative",
                    MultiIndex { n, code: c as u32 },
                    se[c]
                )));
            }
        }
        Ok(CorrelationTensor { n, values, std_errors })
    }

    /// Tensor filled by evaluating `f` on every setting choice.
    pub fn from_fn(n: usize, f: impl Fn(MultiIndex) -> f64) -> Result<Self> {
        check_n(n)?;
        let values = MultiIndex::all(n).map(f).collect();
        Self::new(n, values, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn std_errors(&self) -> Option<&[f64]> {
        self.std_errors.as_deref()
    }

    pub fn get(&self, index: MultiIndex) -> f64 {
        self.values[index.code as usize]
    }

    /// `a·self + (1-a)·other`, errors dropped.
    pub fn mix(&self, other: &CorrelationTensor, a: f64) -> Result<CorrelationTensor> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + (1.0 - a) * y)
            .collect();
        CorrelationTensor::new(self.n, values, None)
    }
}

/// Left-hand side of an inequality, with a propagated standard error when
/// the correlations carry one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityValue {
    pub value: f64,
    pub std_error: Option<f64>,
}

/// `Σ_I σ_I E(I)`, with error `sqrt(Σ_I se(I)²)` when available.
pub fn inequality_value(coeffs: &CoefficientTensor, corr: &CorrelationTensor) -> Result<InequalityValue> {
    if coeffs.n != corr.n {
        return Err(Error::DimensionMismatch {
            expected: coeffs.n,
            actual: corr.n,
        });
    }
    let value = coeffs.signs.iter().zip(&corr.values).map(|(&s, &e)| s as f64 * e).sum();
    let std_error = corr
        .std_errors
        .as_ref()
        .map(|se| se.iter().map(|e| e * e).sum::<f64>().sqrt());
    Ok(InequalityValue { value, std_error })
}

/// Classical bound `2^(n-1)` of the alternating inequalities.
pub fn partial_bound(n: usize) -> f64 {
    (1u64 << (n - 1)) as f64
}

/// Quantum maximum `2^(n-1)·√2` of the alternating inequalities.
pub fn quantum_bound(n: usize) -> f64 {
    partial_bound(n) * std::f64::consts::SQRT_2
}

// Serialized forms.

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationEntry {
    pub settings: Vec<u8>,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
}

/// `{"n", "entries": [{"settings", "value", "std_error"?}]}`, settings in
/// ascending encoded order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationDocument {
    pub n: usize,
    pub entries: Vec<CorrelationEntry>,
}

impl From<&CorrelationTensor> for CorrelationDocument {
    fn from(t: &CorrelationTensor) -> Self {
        let entries = MultiIndex::all(t.n)
            .map(|i| CorrelationEntry {
                settings: i.settings(),
                value: t.values[i.code as usize],
                std_error: t.std_errors.as_ref().map(|se| se[i.code as usize]),
            })
            .collect();
        CorrelationDocument { n: t.n, entries }
    }
}

impl TryFrom<CorrelationDocument> for CorrelationTensor {
    type Error = Error;

    fn try_from(doc: CorrelationDocument) -> Result<Self> {
        check_n(doc.n)?;
        let size = 1usize << doc.n;
        if doc.entries.len() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                actual: doc.entries.len(),
            });
        }
        let with_err = doc.entries.iter().filter(|e| e.std_error.is_some()).count();
        if with_err != 0 && with_err != size {
            return Err(Error::InvalidCorrelation(
                "std_error must be given for all entries or none".into(),
            ));
        }
        let mut values = Vec::with_capacity(size);
        let mut errors = Vec::with_capacity(size);
        for (expected, e) in doc.entries.iter().enumerate() {
            let index = MultiIndex::from_settings(&e.settings)?;
            if index.n != doc.n || index.code as usize != expected {
                return Err(Error::InvalidCorrelation(format!(
                    "entry {expected} has settings {index}; entries must be complete and in ascending encoded order"
                )));
            }
            values.push(e.value);
            errors.push(e.std_error.unwrap_or(0.0));
        }
        CorrelationTensor::new(doc.n, values, (with_err == size).then_some(errors))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub settings: Vec<u8>,
    pub sign: i8,
}

/// `{"n", "variant"?, "entries": [{"settings", "sign"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientDocument {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<SignVariant>,
    pub entries: Vec<CoefficientEntry>,
}

impl CoefficientDocument {
    pub fn new(t: &CoefficientTensor, variant: Option<SignVariant>) -> Self {
        let entries = MultiIndex::all(t.n)
            .map(|i| CoefficientEntry {
                settings: i.settings(),
                sign: t.get(i),
            })
            .collect();
        CoefficientDocument {
            n: t.n,
            variant,
            entries,
        }
    }
}

impl TryFrom<CoefficientDocument> for CoefficientTensor {
    type Error = Error;

    /// Entries may come in any order but every setting must appear once.
    fn try_from(doc: CoefficientDocument) -> Result<Self> {
        check_n(doc.n)?;
        let mut signs = vec![0i8; 1 << doc.n];
        for e in &doc.entries {
            let index = MultiIndex::from_settings(&e.settings)?;
            if index.n != doc.n {
                return Err(Error::InvalidTensor(format!(
                    "settings {index} has length {} (n = {})",
                    index.n, doc.n
                )));
            }
            if signs[index.code as usize] != 0 {
                return Err(Error::InvalidTensor(format!("duplicate settings {index}")));
            }
            signs[index.code as usize] = e.sign;
        }
        if let Some(c) = signs.iter().position(|&s| s == 0) {
            return Err(Error::InvalidTensor(format!(
                "missing settings {}",
                MultiIndex::from_code(doc.n, c as u32)?
            )));
        }
        CoefficientTensor::from_signs(doc.n, signs)
    }
}
