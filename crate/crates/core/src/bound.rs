//! Exact hybrid hidden-variable bounds by strategy enumeration.
//!
//! For a sign tensor `σ` and a split of the particles into two clusters
//! `A | B`, the largest value a partially separable model can give the
//! inequality is reached by deterministic cluster responses `ξ` (on `A`'s
//! setting tuples) and `η` (on `B`'s):
//!
//! ```text
//! m_σ = max_{ξ,η} Σ_I σ_I ξ_{I_A} η_{I_B}
//! ```
//!
//! The objective is linear in each `η` entry, so for fixed `ξ` the best `η`
//! is the sign of the corresponding partial sum. Only the side with the
//! smaller strategy space is enumerated.
//!
//! The module also carries the analytic relaxation `m̂_σ ≥ m_σ`, the
//! half-and-half minimality condition, admissibility under particle
//! permutations, and the linear conditions on `μ_k = ν_k ν_{k+1}` that
//! characterize permutation-symmetric minimal tensors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::inequality::{extract_bits as extract, nu, CoefficientTensor, SignVariant};

/// Explicit enumeration limits. Exceeding one is an error, never a silent
/// truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum `2^min(p, n-p)`, i.e. log2 of the enumerated strategy count.
    pub max_strategy_bits: u32,
    /// Largest `n` for the `n!` admissibility scan.
    pub max_admissible_n: usize,
    /// Largest `n` for the `2^n` μ-sequence scan.
    pub max_mu_n: usize,
    /// Largest `n` for the `2^(2^n)` full minimax.
    pub max_minimax_n: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_strategy_bits: 16,
            max_admissible_n: 8,
            max_mu_n: 20,
            max_minimax_n: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchConfig {
    pub caps: Caps,
    pub exec: Execution,
}

impl SearchConfig {
    pub fn sequential() -> Self {
        SearchConfig {
            exec: Execution::Sequential,
            ..Default::default()
        }
    }
}

fn full_mask(n: usize) -> u32 {
    ((1u64 << n) - 1) as u32
}

/// A split of the `n` particles into two nonempty clusters.
///
/// Stored canonically as the cluster containing particle 1 (`subset_a`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    n: usize,
    mask_a: u32,
}

impl Bipartition {
    /// From a bitmask of one cluster (bit `k-1` = particle `k`); either
    /// cluster may be given.
    pub fn from_mask(n: usize, mask: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParticleCount { n, min: 2 });
        }
        if n > 31 {
            return Err(Error::Capacity {
                what: "bipartition",
                required: format!("{n} particles"),
                limit: "31".into(),
            });
        }
        let full = full_mask(n);
        if mask & !full != 0 || mask == 0 || mask == full {
            return Err(Error::InvalidPartition(format!(
                "mask {mask:#b} is not a nonempty proper subset of {n} particles"
            )));
        }
        let mask_a = if mask & 1 != 0 { mask } else { full & !mask };
        Ok(Bipartition { n, mask_a })
    }

    /// From 1-based particle indices of one cluster.
    pub fn new(n: usize, subset: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &k in subset {
            if k == 0 || k > n || k > 31 {
                return Err(Error::InvalidPartition(format!("particle {k} out of range 1..={n}")));
            }
            if mask & (1 << (k - 1)) != 0 {
                return Err(Error::InvalidPartition(format!("particle {k} listed twice")));
            }
            mask |= 1 << (k - 1);
        }
        Self::from_mask(n, mask)
    }

    /// All `2^(n-1) - 1` bipartitions, ascending by `subset_a` mask.
    pub fn all(n: usize) -> Vec<Bipartition> {
        if n < 2 {
            return Vec::new();
        }
        let full = full_mask(n);
        (1..full)
            .filter(|m| m & 1 == 1)
            .map(|mask_a| Bipartition { n, mask_a })
            .collect()
    }

    /// `{1, …, n-1} | {n}`.
    pub fn last_split(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParticleCount { n, min: 2 });
        }
        Self::from_mask(n, full_mask(n - 1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask_a(&self) -> u32 {
        self.mask_a
    }

    pub fn mask_b(&self) -> u32 {
        full_mask(self.n) & !self.mask_a
    }

    pub fn size_a(&self) -> usize {
        self.mask_a.count_ones() as usize
    }

    pub fn size_b(&self) -> usize {
        self.n - self.size_a()
    }

    /// 1-based particle indices of the cluster containing particle 1.
    pub fn subset_a(&self) -> Vec<usize> {
        bits(self.mask_a)
    }

    pub fn subset_b(&self) -> Vec<usize> {
        bits(self.mask_b())
    }

    /// Cluster sizes seen from the particle-`n` convention of
    /// [`mhat_upper_bound`]: `p` is the size of the cluster *not*
    /// containing particle `n`.
    pub fn block_size(&self) -> usize {
        self.frame().mask_xi.count_ones() as usize
    }

    /// Image under a relabeling of particles: particle `k` (0-based) moves to
    /// position `perm[k]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Bipartition> {
        crate::inequality::validate_permutation(perm, self.n)?;
        let mask = bits(self.mask_a)
            .into_iter()
            .fold(0u32, |acc, k| acc | 1 << perm[k - 1]);
        Bipartition::from_mask(self.n, mask)
    }

    fn frame(&self) -> MinimalityFrame {
        let split = 1u32 << (self.n - 1);
        let mask_b = if self.mask_a & split != 0 {
            self.mask_a
        } else {
            self.mask_b()
        };
        MinimalityFrame {
            mask_xi: full_mask(self.n) & !mask_b,
            mask_rest: mask_b & !split,
            split,
        }
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |v: Vec<usize>| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{{{}}}|{{{}}}", show(self.subset_a()), show(self.subset_b()))
    }
}

fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect()
}

/// Roles used by the `m̂` reduction: `ξ` lives on the cluster without
/// particle `n`; particle `n` is the split index generating `ζ`; `rest` is
/// the remainder of particle `n`'s cluster.
struct MinimalityFrame {
    mask_xi: u32,
    mask_rest: u32,
    split: u32,
}

/// Deterministic responses of both clusters.
///
/// `xi` is indexed by the compact setting tuple of `subset_a`, `eta` by that
/// of `subset_b` (lowest particle = least significant bit, setting 2 = set
/// bit). `zeta`, when present, satisfies `η_{…2} = ζ_{…} · η_{…1}` with the
/// split taken at the highest particle of `subset_b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResponseAssignment {
    pub xi: Vec<i8>,
    pub eta: Vec<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<Vec<i8>>,
}

impl ResponseAssignment {
    pub fn new(part: &Bipartition, xi: Vec<i8>, eta: Vec<i8>) -> Result<Self> {
        let resp = ResponseAssignment { xi, eta, zeta: None };
        resp.validate(part)?;
        Ok(resp)
    }

    /// Fill `zeta` from `eta`.
    pub fn with_zeta(mut self) -> Self {
        let half = self.eta.len() / 2;
        self.zeta = Some((0..half).map(|j| self.eta[j + half] * self.eta[j]).collect());
        self
    }

    pub fn validate(&self, part: &Bipartition) -> Result<()> {
        let (na, nb) = (1usize << part.size_a(), 1usize << part.size_b());
        if self.xi.len() != na || self.eta.len() != nb {
            return Err(Error::InvalidAssignment(format!(
                "expected {na} xi and {nb} eta entries, got {} and {}",
                self.xi.len(),
                self.eta.len()
            )));
        }
        if self.xi.iter().chain(&self.eta).any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidAssignment("responses must be ±1".into()));
        }
        if let Some(zeta) = &self.zeta {
            let half = nb / 2;
            let consistent = zeta.len() == half && (0..half).all(|j| self.eta[j + half] == zeta[j] * self.eta[j]);
            if !consistent {
                return Err(Error::InvalidAssignment("zeta inconsistent with eta".into()));
            }
        }
        Ok(())
    }
}

fn check_dims(coeffs: &CoefficientTensor, part: &Bipartition) -> Result<()> {
    if coeffs.n() != part.n() {
        return Err(Error::DimensionMismatch {
            expected: coeffs.n(),
            actual: part.n(),
        });
    }
    Ok(())
}

/// `Σ_I σ_I ξ_{I_A} η_{I_B}`.
pub fn bilinear_value(coeffs: &CoefficientTensor, part: &Bipartition, resp: &ResponseAssignment) -> Result<i64> {
    check_dims(coeffs, part)?;
    resp.validate(part)?;
    let (ma, mb) = (part.mask_a(), part.mask_b());
    Ok((0..1u32 << part.n())
        .map(|c| {
            let s = coeffs.sign_at(c as usize) as i64;
            s * resp.xi[extract(c, ma) as usize] as i64 * resp.eta[extract(c, mb) as usize] as i64
        })
        .sum())
}

/// Fails if [`hybrid_max_with`] would have to enumerate more than
/// `2^max_strategy_bits` strategies for `part`.
pub fn check_strategy_capacity(part: &Bipartition, config: &SearchConfig) -> Result<()> {
    let s = part.size_a().min(part.size_b()) as u32;
    let strategy_bits = 1u64 << s;
    if strategy_bits > config.caps.max_strategy_bits as u64 {
        return Err(Error::Capacity {
            what: "hybrid_max strategy enumeration",
            required: format!("2^{strategy_bits} assignments of the smaller cluster ({s} particles)"),
            limit: format!("2^{}", config.caps.max_strategy_bits),
        });
    }
    Ok(())
}

/// Result of the inner maximization for one bipartition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridMax {
    pub value: i64,
    pub witness: ResponseAssignment,
}

/// Exact `m_σ` for one bipartition, with an achieving strategy.
pub fn hybrid_max(coeffs: &CoefficientTensor, part: &Bipartition) -> Result<HybridMax> {
    hybrid_max_with(coeffs, part, &SearchConfig::default())
}

pub fn hybrid_max_with(coeffs: &CoefficientTensor, part: &Bipartition, config: &SearchConfig) -> Result<HybridMax> {
    check_dims(coeffs, part)?;
    check_strategy_capacity(part, config)?;
    let a_small = part.size_a() <= part.size_b();
    let (mask_s, mask_l) = if a_small {
        (part.mask_a(), part.mask_b())
    } else {
        (part.mask_b(), part.mask_a())
    };
    let s = mask_s.count_ones();
    let (rows, cols) = (1usize << s, 1usize << mask_l.count_ones());
    // matrix[row * cols + col] = σ at the joint code
    let mut matrix = vec![0i32; rows * cols];
    for c in 0..1u32 << part.n() {
        let (r, l) = (extract(c, mask_s) as usize, extract(c, mask_l) as usize);
        matrix[r * cols + l] = coeffs.sign_at(c as usize) as i32;
    }

    let evaluate = |m: u64| -> i64 {
        let mut total = 0i64;
        for l in 0..cols {
            let mut partial = 0i32;
            for r in 0..rows {
                let x = matrix[r * cols + l];
                partial += if (m >> r) & 1 == 0 { x } else { -x };
            }
            total += partial.unsigned_abs() as i64;
        }
        total
    };
    // ξ and -ξ give the same value; the lower mask of each pair has the top
    // strategy bit clear.
    let count = 1u64 << (rows - 1);
    let best = |a: (i64, u64), b: (i64, u64)| {
        if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
            b
        } else {
            a
        }
    };
    let (value, mask) = config
        .exec
        .map_reduce(0..count, (i64::MIN, u64::MAX), |m| (evaluate(m), m), best);

    let small: Vec<i8> = (0..rows).map(|r| if (mask >> r) & 1 == 0 { 1 } else { -1 }).collect();
    let large: Vec<i8> = (0..cols)
        .map(|l| {
            let partial: i32 = (0..rows).map(|r| small[r] as i32 * matrix[r * cols + l]).sum();
            if partial >= 0 {
                1
            } else {
                -1
            }
        })
        .collect();
    let (xi, eta) = if a_small { (small, large) } else { (large, small) };
    Ok(HybridMax {
        value,
        witness: ResponseAssignment { xi, eta, zeta: None }.with_zeta(),
    })
}

/// Per-group counts of `σ_{Î1} σ_{Î2} = +1`, grouped by the settings of the
/// split index's cluster mates.
fn product_counts(coeffs: &CoefficientTensor, part: &Bipartition) -> (Vec<u32>, u32) {
    let frame = part.frame();
    let groups = 1usize << frame.mask_rest.count_ones();
    let mut plus = vec![0u32; groups];
    for c in 0..1u32 << part.n() {
        if c & frame.split != 0 {
            continue;
        }
        let prod = coeffs.sign_at(c as usize) * coeffs.sign_at((c | frame.split) as usize);
        if prod == 1 {
            plus[extract(c, frame.mask_rest) as usize] += 1;
        }
    }
    let group_size = 1u32 << frame.mask_xi.count_ones();
    (plus, group_size)
}

/// `m̂_σ = max_ζ Σ_Î |1 + σ_{Î1} σ_{Î2} ζ|`, split at particle `n`.
///
/// Each fixed setting of the split index's cluster mates forms one group of
/// `2^p` products; the best `ζ` for it matches the majority sign, giving
/// `2·max(#(+1), #(-1))`.
pub fn mhat_upper_bound(coeffs: &CoefficientTensor, part: &Bipartition) -> Result<i64> {
    check_dims(coeffs, part)?;
    let (plus, size) = product_counts(coeffs, part);
    Ok(plus.iter().map(|&p| 2 * p.max(size - p) as i64).sum())
}

/// Exactly half of the products `σ_{Î1} σ_{Î2}` are `+1` in every group.
pub fn check_minimal(coeffs: &CoefficientTensor, part: &Bipartition) -> Result<bool> {
    check_dims(coeffs, part)?;
    let (plus, size) = product_counts(coeffs, part);
    Ok(plus.iter().all(|&p| 2 * p == size))
}

/// Decode the `index`-th permutation of `0..n` (Lehmer code order).
fn nth_permutation(n: usize, mut index: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for k in (1..=n).rev() {
        let f = factorial(k - 1);
        let pick = (index / f) as usize;
        index %= f;
        out.push(pool.remove(pick));
    }
    out
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Minimal for every particle permutation. For `n ≤ 5` every bipartition is
/// checked; above that the `{1..n-1}|{n}` split suffices because it ranges
/// over all splits as the permutation varies.
pub fn check_admissible(coeffs: &CoefficientTensor) -> Result<bool> {
    check_admissible_with(coeffs, &SearchConfig::default())
}

pub fn check_admissible_with(coeffs: &CoefficientTensor, config: &SearchConfig) -> Result<bool> {
    let n = coeffs.n();
    if n < 2 {
        return Err(Error::InvalidParticleCount { n, min: 2 });
    }
    if n > config.caps.max_admissible_n {
        return Err(Error::Capacity {
            what: "admissibility scan",
            required: format!("{n}! permutations"),
            limit: format!("{}!", config.caps.max_admissible_n),
        });
    }
    let parts = if n <= 5 {
        Bipartition::all(n)
    } else {
        vec![Bipartition::last_split(n)?]
    };
    let ok = config.exec.map_reduce(
        0..factorial(n),
        true,
        |i| {
            let permuted = coeffs
                .permute_particles(&nth_permutation(n, i))
                .expect("generated permutation is valid");
            parts
                .iter()
                .all(|p| check_minimal(&permuted, p).expect("dimensions match"))
        },
        |a, b| a && b,
    );
    Ok(ok)
}

/// Pairwise products `μ_k = ν_k ν_{k+1}` of a permutation-symmetric tensor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MuSequence {
    mu: Vec<i8>,
}

impl MuSequence {
    pub fn new(mu: Vec<i8>) -> Result<Self> {
        if mu.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidTensor("μ entries must be ±1".into()));
        }
        Ok(MuSequence { mu })
    }

    /// `μ_k = ±(-1)^k`.
    pub fn alternating(n: usize, leading: i8) -> Self {
        MuSequence {
            mu: (0..n).map(|k| if k % 2 == 0 { leading } else { -leading }).collect(),
        }
    }

    pub fn mu(&self) -> &[i8] {
        &self.mu
    }

    pub fn nu(&self) -> Vec<i8> {
        nu_from_mu(self)
    }

    pub fn is_alternating(&self) -> bool {
        self.mu.windows(2).all(|w| w[0] == -w[1])
    }

    /// Symmetric tensor `σ_I = ν_{t(I)}` on `n = len(μ)` particles.
    pub fn to_tensor(&self) -> Result<CoefficientTensor> {
        let n = self.mu.len();
        let nu = self.nu();
        CoefficientTensor::from_signs(n, (0..1u32 << n).map(|c| nu[c.count_ones() as usize]).collect())
    }
}

/// `ν_0 = 1`, `ν_{k+1} = μ_k ν_k`.
pub fn nu_from_mu(mu: &MuSequence) -> Vec<i8> {
    let mut out = Vec::with_capacity(mu.mu.len() + 1);
    out.push(1i8);
    for &m in &mu.mu {
        let last = *out.last().expect("nonempty");
        out.push(m * last);
    }
    out
}

fn binomial_row(p: usize) -> Vec<i64> {
    let mut row = vec![1i64];
    for k in 0..p {
        let next = *row.last().expect("nonempty") * (p - k) as i64 / (k + 1) as i64;
        row.push(next);
    }
    row
}

/// Every `μ ∈ {±1}^n` with `Σ_b C(p,b) μ_{a+b} = 0` for `a = 0, …, n-p-1`,
/// ascending by the bitmask of `-1` entries.
pub fn enumerate_mu_solutions(n: usize, p: usize) -> Result<Vec<MuSequence>> {
    enumerate_mu_solutions_with(n, p, &SearchConfig::default())
}

pub fn enumerate_mu_solutions_with(n: usize, p: usize, config: &SearchConfig) -> Result<Vec<MuSequence>> {
    if n < 2 {
        return Err(Error::InvalidParticleCount { n, min: 2 });
    }
    if p == 0 || p >= n {
        return Err(Error::InvalidPartition(format!(
            "block size p = {p} must satisfy 1 ≤ p ≤ n-1 = {}",
            n - 1
        )));
    }
    if n > config.caps.max_mu_n {
        return Err(Error::Capacity {
            what: "μ-sequence enumeration",
            required: format!("2^{n} sign vectors"),
            limit: format!("2^{}", config.caps.max_mu_n),
        });
    }
    let row = binomial_row(p);
    let solves = |mask: u64| {
        (0..n - p).all(|a| {
            row.iter()
                .enumerate()
                .map(|(b, c)| if (mask >> (a + b)) & 1 == 0 { *c } else { -*c })
                .sum::<i64>()
                == 0
        })
    };
    let hits = config
        .exec
        .map_collect(0..1u64 << n, |mask| solves(mask).then_some(mask));
    Ok(hits
        .into_iter()
        .flatten()
        .map(|mask| MuSequence {
            mu: (0..n).map(|k| if (mask >> k) & 1 == 0 { 1 } else { -1 }).collect(),
        })
        .collect())
}

/// `m_σ` maximized over every bipartition.
pub fn partial_separability_bound(coeffs: &CoefficientTensor) -> Result<i64> {
    partial_separability_bound_with(coeffs, &SearchConfig::default())
}

pub fn partial_separability_bound_with(coeffs: &CoefficientTensor, config: &SearchConfig) -> Result<i64> {
    let n = coeffs.n();
    if n < 2 {
        return Err(Error::InvalidParticleCount { n, min: 2 });
    }
    let parts = Bipartition::all(n);
    // fail before any enumeration if some split is out of reach
    for p in &parts {
        check_strategy_capacity(p, config)?;
    }
    parts
        .iter()
        .map(|p| hybrid_max_with(coeffs, p, config).map(|h| h.value))
        .try_fold(i64::MIN, |acc, v| v.map(|v| acc.max(v)))
}

/// Result of the exhaustive minimax over sign tensors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minimax {
    pub m: i64,
    /// Every minimizing tensor with `σ_{11…1} = +1`, ascending by sign mask.
    pub minimizers: Vec<CoefficientTensor>,
}

fn minimax_over(
    n: usize,
    config: &SearchConfig,
    score: impl Fn(&CoefficientTensor) -> Result<i64> + Send + Sync,
) -> Result<Minimax> {
    if n < 2 {
        return Err(Error::InvalidParticleCount { n, min: 2 });
    }
    if n > config.caps.max_minimax_n {
        return Err(Error::Capacity {
            what: "full minimax",
            required: format!("2^{} sign tensors", (1u64 << n) - 1),
            limit: format!("n ≤ {}", config.caps.max_minimax_n),
        });
    }
    // σ_{11…1} (code 0) is fixed to +1: the overall sign is not significant.
    let count = 1u64 << ((1u64 << n) - 1);
    let tensor = |m: u64| CoefficientTensor::from_mask(n, m << 1).expect("n ≤ 6");
    let scores: Vec<i64> = config
        .exec
        .map_collect(0..count, |m| score(&tensor(m)))
        .into_iter()
        .collect::<Result<_>>()?;
    let m = *scores.iter().min().expect("nonempty search space");
    let minimizers = scores
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == m)
        .map(|(i, _)| tensor(i as u64))
        .collect();
    Ok(Minimax { m, minimizers })
}

/// `min_σ max_{bipartitions} m_σ` over all sign tensors (up to global sign).
pub fn full_minimax(n: usize) -> Result<Minimax> {
    full_minimax_with(n, &SearchConfig::default())
}

pub fn full_minimax_with(n: usize, config: &SearchConfig) -> Result<Minimax> {
    let inner = SearchConfig {
        exec: Execution::Sequential,
        ..*config
    };
    let parts = Bipartition::all(n);
    minimax_over(n, config, |t| {
        parts
            .iter()
            .map(|p| hybrid_max_with(t, p, &inner).map(|h| h.value))
            .try_fold(i64::MIN, |acc, v| v.map(|v| acc.max(v)))
    })
}

/// `min_σ m_σ` for one fixed bipartition.
pub fn partition_minimax(part: &Bipartition, config: &SearchConfig) -> Result<Minimax> {
    let inner = SearchConfig {
        exec: Execution::Sequential,
        ..*config
    };
    let part = *part;
    minimax_over(part.n(), config, move |t| {
        hybrid_max_with(t, &part, &inner).map(|h| h.value)
    })
}

/// Whether `σ` is `±` an alternating tensor, and which one.
pub fn alternating_variant(coeffs: &CoefficientTensor) -> Option<(SignVariant, i8)> {
    SignVariant::ALL.into_iter().find_map(|v| {
        let alt = CoefficientTensor::alternating(coeffs.n(), v).ok()?;
        coeffs.proportionality(&alt).map(|s| (v, s))
    })
}

/// Convenience for reports: sign sequence `ν(variant, k)` for `k = 0..=n`.
pub fn nu_sequence(variant: SignVariant, n: usize) -> Vec<i8> {
    (0..=n).map(|k| nu(variant, k)).collect()
}
