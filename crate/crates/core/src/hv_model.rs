//! Partially separable hidden-variable models and measurement-count data.
//!
//! A [`HybridModel`] is a mixture of subensembles. Each subensemble splits
//! the particles into two clusters and, for every hidden state `λ`, gives
//! each cluster its own conditional outcome table:
//!
//! ```text
//! p(a_1 … a_n) = Σ_λ ρ(λ) q(a_A | λ) r(a_B | λ)
//! ```
//!
//! Tables are arbitrary joint distributions over the cluster's outcomes, so
//! correlations inside a cluster are unconstrained (they may even signal
//! between cluster members). The hidden-variable measure is a finite set of
//! atoms.

use std::collections::BTreeMap;
use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bound::{Bipartition, ResponseAssignment};
use crate::error::{Error, Result};
use crate::exec::{sub_seed, Execution};
use crate::inequality::{deposit_bits, extract_bits, CorrelationTensor, MultiIndex, EXACT_TOL};

/// Largest cluster for dense conditional tables.
pub const MAX_BLOCK_PARTICLES: usize = 10;

fn parity(outcome: u32) -> f64 {
    if outcome.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Outcomes `(a_1, …, a_n) ∈ {±1}^n` of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutcomeRecord {
    n: usize,
    /// bit `k` set iff particle `k+1` gave `-1`
    code: u32,
}

impl OutcomeRecord {
    pub fn from_code(n: usize, code: u32) -> Self {
        OutcomeRecord { n, code }
    }

    pub fn from_outcomes(outcomes: &[i8]) -> Result<Self> {
        let mut code = 0;
        for (k, &o) in outcomes.iter().enumerate() {
            match o {
                1 => {}
                -1 => code |= 1 << k,
                _ => return Err(Error::InvalidDataset(format!("outcome {o} is not ±1"))),
            }
        }
        Ok(OutcomeRecord {
            n: outcomes.len(),
            code,
        })
    }

    /// Parse a key such as `"+-+"`; `−` (U+2212) is accepted for minus.
    pub fn parse(key: &str) -> Result<Self> {
        let outcomes = key
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '−' => Ok(-1),
                other => Err(Error::Parse(format!("bad outcome symbol `{other}` in `{key}`"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::from_outcomes(&outcomes)
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn outcomes(&self) -> Vec<i8> {
        (0..self.n)
            .map(|k| if self.code >> k & 1 == 1 { -1 } else { 1 })
            .collect()
    }

    /// Number of `-1` entries.
    pub fn n_minus(&self) -> usize {
        self.code.count_ones() as usize
    }
}

impl fmt::Display for OutcomeRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.n {
            f.write_str(if self.code >> k & 1 == 1 { "-" } else { "+" })?;
        }
        Ok(())
    }
}

/// Conditional outcome distribution of one cluster: for each local setting
/// choice, a distribution over the cluster's `2^p` outcome records.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTable {
    size: usize,
    /// `probs[setting * 2^p + outcome]`
    probs: Vec<f64>,
}

impl BlockTable {
    pub fn new(size: usize, probs: Vec<f64>) -> Result<Self> {
        if size == 0 || size > MAX_BLOCK_PARTICLES {
            return Err(Error::Capacity {
                what: "conditional table",
                required: format!("cluster of {size} particles"),
                limit: format!("1..={MAX_BLOCK_PARTICLES}"),
            });
        }
        if probs.len() != 1 << (2 * size) {
            return Err(Error::DimensionMismatch {
                expected: 1 << (2 * size),
                actual: probs.len(),
            });
        }
        Ok(BlockTable { size, probs })
    }

    pub fn uniform(size: usize) -> Result<Self> {
        let w = 1.0 / (1u64 << size) as f64;
        Self::new(size, vec![w; 1 << (2 * size)])
    }

    /// Deterministic table whose outcome product equals `responses[setting]`:
    /// all `+1`, except the cluster's first particle flips for `-1`.
    pub fn deterministic(size: usize, responses: &[i8]) -> Result<Self> {
        let width = 1usize << size;
        if responses.len() != width {
            return Err(Error::DimensionMismatch {
                expected: width,
                actual: responses.len(),
            });
        }
        let mut probs = vec![0.0; width * width];
        for (s, &r) in responses.iter().enumerate() {
            probs[s * width + usize::from(r == -1)] = 1.0;
        }
        Self::new(size, probs)
    }

    /// Random table, each row uniform on the simplex.
    pub fn random(size: usize, rng: &mut impl Rng) -> Result<Self> {
        let width = 1usize << size;
        let mut probs = Vec::with_capacity(width * width);
        for _ in 0..width {
            let row: Vec<f64> = (0..width)
                .map(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln())
                .collect();
            let total: f64 = row.iter().sum();
            probs.extend(row.iter().map(|x| x / total));
        }
        Self::new(size, probs)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn row(&self, setting: u32) -> &[f64] {
        let w = 1usize << self.size;
        &self.probs[setting as usize * w..(setting as usize + 1) * w]
    }

    /// `Σ_a q(a | setting) · Π a`.
    pub fn expectation(&self, setting: u32) -> f64 {
        self.row(setting)
            .iter()
            .enumerate()
            .map(|(o, p)| p * parity(o as u32))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HiddenState {
    pub prob: f64,
    /// Table for the cluster given by the subensemble's `q_mask`.
    pub q: BlockTable,
    /// Table for the complementary cluster.
    pub r: BlockTable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subensemble {
    pub weight: f64,
    /// Particles (bit `k-1` = particle `k`) described by the `q` tables.
    pub q_mask: u32,
    pub lambdas: Vec<HiddenState>,
}

impl Subensemble {
    pub fn partition(&self, n: usize) -> Result<Bipartition> {
        Bipartition::from_mask(n, self.q_mask)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridModel {
    pub n: usize,
    pub subensembles: Vec<Subensemble>,
}

/// One violated model constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub constraint: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    /// In check order; the first entry is the first violated constraint.
    pub diagnostics: Vec<Diagnostic>,
}

impl HybridModel {
    /// Model realizing fixed cluster responses `ξ` (cluster `subset_a`) and
    /// `η` (cluster `subset_b`).
    pub fn deterministic(part: &Bipartition, resp: &ResponseAssignment) -> Result<Self> {
        resp.validate(part)?;
        Ok(HybridModel {
            n: part.n(),
            subensembles: vec![Subensemble {
                weight: 1.0,
                q_mask: part.mask_a(),
                lambdas: vec![HiddenState {
                    prob: 1.0,
                    q: BlockTable::deterministic(part.size_a(), &resp.xi)?,
                    r: BlockTable::deterministic(part.size_b(), &resp.eta)?,
                }],
            }],
        })
    }

    /// Uniform outcomes on every cluster.
    pub fn uniform(part: &Bipartition) -> Result<Self> {
        Ok(HybridModel {
            n: part.n(),
            subensembles: vec![Subensemble {
                weight: 1.0,
                q_mask: part.mask_a(),
                lambdas: vec![HiddenState {
                    prob: 1.0,
                    q: BlockTable::uniform(part.size_a())?,
                    r: BlockTable::uniform(part.size_b())?,
                }],
            }],
        })
    }

    /// One to three subensembles on random splits, one to `max_lambdas`
    /// hidden states each. Each table is deterministic with probability one
    /// half and simplex-uniform otherwise, so extremal models are well
    /// represented.
    pub fn random(n: usize, max_lambdas: usize, rng: &mut impl Rng) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParticleCount { n, min: 2 });
        }
        let full = ((1u64 << n) - 1) as u32;
        let simplex = |k: usize, rng: &mut dyn rand::RngCore| -> Vec<f64> {
            let raw: Vec<f64> = (0..k)
                .map(|_| -(rng.next_u64() as f64 / u64::MAX as f64).max(f64::MIN_POSITIVE).ln())
                .collect();
            let total: f64 = raw.iter().sum();
            raw.iter().map(|x| x / total).collect()
        };
        let table = |size: usize, rng: &mut ChaCha8Rng| -> Result<BlockTable> {
            if rng.random::<bool>() {
                let responses: Vec<i8> = (0..1 << size).map(|_| if rng.random() { 1 } else { -1 }).collect();
                BlockTable::deterministic(size, &responses)
            } else {
                BlockTable::random(size, rng)
            }
        };
        let mut inner = ChaCha8Rng::seed_from_u64(rng.next_u64());
        let count = inner.random_range(1..=3);
        let weights = simplex(count, &mut inner);
        let mut subensembles = Vec::with_capacity(count);
        for weight in weights {
            let q_mask = inner.random_range(1..full);
            let lambdas_count = inner.random_range(1..=max_lambdas.max(1));
            let probs = simplex(lambdas_count, &mut inner);
            let (pa, pb) = (q_mask.count_ones() as usize, n - q_mask.count_ones() as usize);
            let lambdas = probs
                .into_iter()
                .map(|prob| {
                    Ok(HiddenState {
                        prob,
                        q: table(pa, &mut inner)?,
                        r: table(pb, &mut inner)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            subensembles.push(Subensemble {
                weight,
                q_mask,
                lambdas,
            });
        }
        Ok(HybridModel { n, subensembles })
    }

    /// Weight-`a` mixture with `other` (both must be valid and of equal `n`).
    pub fn mixture(&self, other: &HybridModel, a: f64) -> Result<HybridModel> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        fn scaled(m: &HybridModel, w: f64) -> impl Iterator<Item = Subensemble> + '_ {
            m.subensembles.iter().map(move |s| Subensemble {
                weight: s.weight * w,
                ..s.clone()
            })
        }
        Ok(HybridModel {
            n: self.n,
            subensembles: scaled(self, a).chain(scaled(other, 1.0 - a)).collect(),
        })
    }
}

fn sum_close(total: f64) -> bool {
    (total - 1.0).abs() <= EXACT_TOL
}

fn in_unit(p: f64) -> bool {
    (0.0..=1.0).contains(&p)
}

/// Check every normalization and shape constraint.
pub fn validate_model(model: &HybridModel) -> ValidationReport {
    let mut diagnostics = Vec::new();
    let mut fail = |constraint: &'static str, message: String| diagnostics.push(Diagnostic { constraint, message });
    let n = model.n;
    if n < 2 {
        fail("particles", format!("n = {n}; a split needs at least two particles"));
    }
    if model.subensembles.is_empty() {
        fail("weights", "model has no subensembles".into());
    }
    let total: f64 = model.subensembles.iter().map(|s| s.weight).sum();
    if !model.subensembles.is_empty() && !sum_close(total) {
        fail("weights", format!("subensemble weights sum to {total}, not 1"));
    }
    for (j, s) in model.subensembles.iter().enumerate() {
        if !in_unit(s.weight) {
            fail(
                "probability_range",
                format!("subensemble {j} weight {} outside [0, 1]", s.weight),
            );
        }
        if n >= 2 && s.partition(n).is_err() {
            fail(
                "partition",
                format!("subensemble {j} does not split {n} particles into two nonempty clusters"),
            );
            continue;
        }
        let (pa, pb) = (
            s.q_mask.count_ones() as usize,
            n.saturating_sub(s.q_mask.count_ones() as usize),
        );
        if s.lambdas.is_empty() {
            fail("lambda_probs", format!("subensemble {j} has no hidden states"));
        }
        let lambda_total: f64 = s.lambdas.iter().map(|l| l.prob).sum();
        if !s.lambdas.is_empty() && !sum_close(lambda_total) {
            fail(
                "lambda_probs",
                format!("subensemble {j} hidden-state probabilities sum to {lambda_total}"),
            );
        }
        for (l, lambda) in s.lambdas.iter().enumerate() {
            if !in_unit(lambda.prob) {
                fail(
                    "probability_range",
                    format!("subensemble {j} λ{l} probability {}", lambda.prob),
                );
            }
            for (name, table, size) in [("q", &lambda.q, pa), ("r", &lambda.r, pb)] {
                if table.size != size {
                    fail(
                        "table_shape",
                        format!(
                            "subensemble {j} λ{l} {name} covers {} particles, cluster has {size}",
                            table.size
                        ),
                    );
                    continue;
                }
                if let Some(p) = table.probs.iter().find(|p| !in_unit(**p)) {
                    fail("probability_range", format!("subensemble {j} λ{l} {name} entry {p}"));
                }
                for setting in 0..1u32 << size {
                    let row_total: f64 = table.row(setting).iter().sum();
                    if !sum_close(row_total) {
                        fail(
                            "table_norm",
                            format!("subensemble {j} λ{l} {name} row {setting} sums to {row_total}"),
                        );
                        break;
                    }
                }
            }
        }
    }
    ValidationReport {
        valid: diagnostics.is_empty(),
        diagnostics,
    }
}

fn require_valid(model: &HybridModel) -> Result<()> {
    let report = validate_model(model);
    match report.diagnostics.first() {
        None => Ok(()),
        Some(d) => Err(Error::InvalidModel(format!("{}: {}", d.constraint, d.message))),
    }
}

/// Exact correlations: per hidden state the joint expectation is the product
/// of the two cluster expectations.
pub fn model_correlations(model: &HybridModel) -> Result<CorrelationTensor> {
    require_valid(model)?;
    let n = model.n;
    let full = ((1u64 << n) - 1) as u32;
    CorrelationTensor::from_fn(n, |index| {
        let code = index.code();
        model
            .subensembles
            .iter()
            .map(|s| {
                let (sa, sb) = (extract_bits(code, s.q_mask), extract_bits(code, full & !s.q_mask));
                s.weight
                    * s.lambdas
                        .iter()
                        .map(|l| l.prob * l.q.expectation(sa) * l.r.expectation(sb))
                        .sum::<f64>()
            })
            .sum::<f64>()
            .clamp(-1.0, 1.0)
    })
}

/// Draw `shots` records for one setting choice: subensemble and hidden state
/// by weight, then both cluster outcomes independently. Returns counts
/// indexed by outcome code.
pub fn sample_outcomes(model: &HybridModel, index: MultiIndex, shots: u64, seed: u64) -> Result<Vec<u64>> {
    require_valid(model)?;
    if index.n() != model.n {
        return Err(Error::DimensionMismatch {
            expected: model.n,
            actual: index.n(),
        });
    }
    let n = model.n;
    let full = ((1u64 << n) - 1) as u32;
    let code = index.code();
    let sampler = |row: &[f64]| WeightedIndex::new(row).map_err(|e| Error::InvalidModel(format!("outcome table: {e}")));
    struct Atom {
        q_mask: u32,
        b_mask: u32,
        q: WeightedIndex<f64>,
        r: WeightedIndex<f64>,
    }
    let mut weights = Vec::new();
    let mut atoms = Vec::new();
    for s in &model.subensembles {
        let b_mask = full & !s.q_mask;
        for l in &s.lambdas {
            let w = s.weight * l.prob;
            if w <= 0.0 {
                continue;
            }
            weights.push(w);
            atoms.push(Atom {
                q_mask: s.q_mask,
                b_mask,
                q: sampler(l.q.row(extract_bits(code, s.q_mask)))?,
                r: sampler(l.r.row(extract_bits(code, b_mask)))?,
            });
        }
    }
    let pick = sampler(&weights)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; 1 << n];
    for _ in 0..shots {
        let atom = &atoms[pick.sample(&mut rng)];
        let a = atom.q.sample(&mut rng) as u32;
        let b = atom.r.sample(&mut rng) as u32;
        counts[(deposit_bits(a, atom.q_mask) | deposit_bits(b, atom.b_mask)) as usize] += 1;
    }
    Ok(counts)
}

/// Sample every setting choice; setting `c` uses seed `sub_seed(seed, c)`.
pub fn sample_dataset(model: &HybridModel, shots: u64, seed: u64, exec: Execution) -> Result<CountsDataset> {
    require_valid(model)?;
    let n = model.n;
    let data = exec
        .map_collect(0..1u64 << n, |c| {
            sample_outcomes(model, MultiIndex::from_code(n, c as u32)?, shots, sub_seed(seed, c))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    CountsDataset::new(n, shots, data)
}

/// Outcome counts for every setting choice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsDataset {
    n: usize,
    shots: u64,
    /// `data[setting code][outcome code]`
    data: Vec<Vec<u64>>,
}

impl CountsDataset {
    pub fn new(n: usize, shots: u64, data: Vec<Vec<u64>>) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::InvalidDataset(format!("n = {n} outside 1..=16")));
        }
        let size = 1usize << n;
        if data.len() != size {
            return Err(Error::InvalidDataset(format!(
                "{} of {size} settings present",
                data.len()
            )));
        }
        for (c, row) in data.iter().enumerate() {
            let index = MultiIndex::from_code(n, c as u32)?;
            if row.len() != size {
                return Err(Error::InvalidDataset(format!(
                    "settings {index}: {} outcome bins, expected {size}",
                    row.len()
                )));
            }
            let total: u64 = row.iter().sum();
            if total != shots {
                return Err(Error::InvalidDataset(format!(
                    "settings {index}: counts sum to {total}, declared shots {shots}"
                )));
            }
        }
        Ok(CountsDataset { n, shots, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self, index: MultiIndex) -> &[u64] {
        &self.data[index.code() as usize]
    }
}

/// `Ê(I) = Σ_J (-1)^{n(J)} counts(J) / shots` with
/// `se(I) = sqrt((1 - Ê²) / shots)`.
pub fn estimate_correlations(data: &CountsDataset) -> Result<CorrelationTensor> {
    if data.shots == 0 {
        return Err(Error::InvalidDataset("zero shots".into()));
    }
    let shots = data.shots as f64;
    let values: Vec<f64> = data
        .data
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, &c)| parity(j as u32) * c as f64)
                .sum::<f64>()
                / shots
        })
        .collect();
    let errors = values.iter().map(|e| ((1.0 - e * e).max(0.0) / shots).sqrt()).collect();
    CorrelationTensor::new(data.n, values, Some(errors))
}

// Serialized forms.

fn setting_key(local: u32, size: usize) -> String {
    (0..size).map(|k| if local >> k & 1 == 1 { '2' } else { '1' }).collect()
}

fn parse_setting_key(key: &str, size: usize) -> Result<u32> {
    if key.chars().count() != size {
        return Err(Error::Parse(format!("setting key `{key}` should have {size} labels")));
    }
    key.chars().enumerate().try_fold(0u32, |acc, (k, c)| match c {
        '1' => Ok(acc),
        '2' => Ok(acc | 1 << k),
        other => Err(Error::Parse(format!("bad setting label `{other}` in `{key}`"))),
    })
}

/// `{setting-key: {outcome-key: prob}}`; omitted outcomes have probability 0.
pub type TableDocument = BTreeMap<String, BTreeMap<String, f64>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LambdaDocument {
    pub prob: f64,
    pub q: TableDocument,
    pub r: TableDocument,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubensembleDocument {
    pub weight: f64,
    /// 1-based particles described by `q`.
    pub partition: Vec<usize>,
    pub lambdas: Vec<LambdaDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HybridModelDocument {
    pub n: usize,
    pub subensembles: Vec<SubensembleDocument>,
}

fn table_to_doc(t: &BlockTable) -> TableDocument {
    let w = 1u32 << t.size;
    (0..w)
        .map(|s| {
            let row = (0..w)
                .filter(|&o| t.row(s)[o as usize] != 0.0)
                .map(|o| (OutcomeRecord::from_code(t.size, o).to_string(), t.row(s)[o as usize]))
                .collect();
            (setting_key(s, t.size), row)
        })
        .collect()
}

fn table_from_doc(doc: &TableDocument, size: usize) -> Result<BlockTable> {
    if size == 0 || size > MAX_BLOCK_PARTICLES {
        return Err(Error::InvalidModel(format!(
            "cluster size {size} outside 1..={MAX_BLOCK_PARTICLES}"
        )));
    }
    let w = 1usize << size;
    let mut probs = vec![0.0; w * w];
    let mut seen = vec![false; w];
    for (key, row) in doc {
        let s = parse_setting_key(key, size)? as usize;
        seen[s] = true;
        for (okey, p) in row {
            let o = OutcomeRecord::parse(okey)?;
            if o.n != size {
                return Err(Error::Parse(format!("outcome key `{okey}` should have {size} symbols")));
            }
            probs[s * w + o.code as usize] = *p;
        }
    }
    if let Some(s) = seen.iter().position(|x| !x) {
        return Err(Error::InvalidModel(format!(
            "table lacks setting `{}`",
            setting_key(s as u32, size)
        )));
    }
    BlockTable::new(size, probs)
}

impl From<&HybridModel> for HybridModelDocument {
    fn from(m: &HybridModel) -> Self {
        HybridModelDocument {
            n: m.n,
            subensembles: m
                .subensembles
                .iter()
                .map(|s| SubensembleDocument {
                    weight: s.weight,
                    partition: (0..32).filter(|k| s.q_mask >> k & 1 == 1).map(|k| k + 1).collect(),
                    lambdas: s
                        .lambdas
                        .iter()
                        .map(|l| LambdaDocument {
                            prob: l.prob,
                            q: table_to_doc(&l.q),
                            r: table_to_doc(&l.r),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<HybridModelDocument> for HybridModel {
    type Error = Error;

    fn try_from(doc: HybridModelDocument) -> Result<Self> {
        let n = doc.n;
        let subensembles = doc
            .subensembles
            .iter()
            .map(|s| {
                let mut q_mask = 0u32;
                for &k in &s.partition {
                    if k == 0 || k > n || k > 31 {
                        return Err(Error::InvalidModel(format!("partition particle {k} out of range")));
                    }
                    q_mask |= 1 << (k - 1);
                }
                let part = Bipartition::from_mask(n, q_mask)?;
                let pa = q_mask.count_ones() as usize;
                let pb = n - pa;
                let _ = part;
                let lambdas = s
                    .lambdas
                    .iter()
                    .map(|l| {
                        Ok(HiddenState {
                            prob: l.prob,
                            q: table_from_doc(&l.q, pa)?,
                            r: table_from_doc(&l.r, pb)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Subensemble {
                    weight: s.weight,
                    q_mask,
                    lambdas,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HybridModel { n, subensembles })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountsEntry {
    pub settings: Vec<u8>,
    pub counts: BTreeMap<String, u64>,
}

/// `{"n", "shots", "data": [{"settings", "counts": {outcome-key: int}}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountsDocument {
    pub n: usize,
    pub shots: u64,
    pub data: Vec<CountsEntry>,
}

impl From<&CountsDataset> for CountsDocument {
    fn from(d: &CountsDataset) -> Self {
        CountsDocument {
            n: d.n,
            shots: d.shots,
            data: MultiIndex::all(d.n)
                .map(|index| CountsEntry {
                    settings: index.settings(),
                    counts: d
                        .counts(index)
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c > 0)
                        .map(|(o, &c)| (OutcomeRecord::from_code(d.n, o as u32).to_string(), c))
                        .collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<CountsDocument> for CountsDataset {
    type Error = Error;

    /// Entries may appear in any order; missing settings are reported
    /// together.
    fn try_from(doc: CountsDocument) -> Result<Self> {
        let n = doc.n;
        if n == 0 || n > 16 {
            return Err(Error::InvalidDataset(format!("n = {n} outside 1..=16")));
        }
        let size = 1usize << n;
        let mut data: Vec<Option<Vec<u64>>> = vec![None; size];
        for e in &doc.data {
            let index = MultiIndex::from_settings(&e.settings)?;
            if index.n() != n {
                return Err(Error::InvalidDataset(format!("settings {index} has wrong length")));
            }
            let slot = &mut data[index.code() as usize];
            if slot.is_some() {
                return Err(Error::InvalidDataset(format!("settings {index} listed twice")));
            }
            let mut row = vec![0u64; size];
            for (key, &c) in &e.counts {
                let o = OutcomeRecord::parse(key)?;
                if o.n != n {
                    return Err(Error::InvalidDataset(format!("outcome key `{key}` has wrong length")));
                }
                row[o.code as usize] += c;
            }
            *slot = Some(row);
        }
        let missing: Vec<String> = data
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_none())
            .map(|(c, _)| MultiIndex::from_code(n, c as u32).map(|i| i.to_string()))
            .collect::<Result<_>>()?;
        if !missing.is_empty() {
            return Err(Error::InvalidDataset(format!(
                "missing settings: {}",
                missing.join(", ")
            )));
        }
        CountsDataset::new(n, doc.shots, data.into_iter().map(|r| r.expect("checked")).collect())
    }
}
