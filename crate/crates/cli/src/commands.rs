use std::path::PathBuf;

use partsep::bound::{
    alternating_variant, check_minimal, check_strategy_capacity, enumerate_mu_solutions, full_minimax, hybrid_max,
    mhat_upper_bound, partition_minimax, Bipartition, ResponseAssignment, SearchConfig,
};
use partsep::certify::certify as certify_counts;
use partsep::hv_model::{
    model_correlations, sample_dataset, validate_model, CountsDataset, CountsDocument, HybridModel, HybridModelDocument,
};
use partsep::inequality::{inequality_value, partial_bound, quantum_bound, CoefficientDocument, CorrelationDocument};
use partsep::quantum::{
    alternating_expectation, correlation_tensor, ghz_expectation_closed_form, ghz_state, maximize_violation,
    optimal_angles, sample_counts, AngleSettings, AnglesDocument,
};
use partsep::{CoefficientTensor, CorrelationTensor, Error, Execution, MultiIndex, SignVariant};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{read_input, Report};
use crate::{BoundArgs, CertifyArgs, GenArgs, MinimaxArgs, MuArgs, SimulateArgs, ViolateArgs};

/// Statevector evaluation up to here; the closed form beyond.
const STATEVECTOR_MAX_N: usize = 16;

fn usize_n(n: u64) -> usize {
    n as usize
}

fn signs_string(signs: &[i8]) -> String {
    signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}

fn parse_cluster(n: usize, spec: &str) -> Result<Bipartition, CliError> {
    let subset = spec
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad particle index `{t}` in partition `{spec}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Bipartition::new(n, &subset)?)
}

pub fn gen(a: &GenArgs) -> Result<Report, CliError> {
    let n = usize_n(a.n);
    let t = CoefficientTensor::alternating(n, a.variant)?;
    let doc = CoefficientDocument::new(&t, Some(a.variant));
    let mut report = Report::new(&doc, &["settings", "t", "sign"])?;
    for index in MultiIndex::all(n) {
        report.row([index.to_string(), index.t().to_string(), t.get(index).to_string()]);
    }
    Ok(report)
}

#[derive(Serialize)]
struct PartitionBound {
    partition: String,
    subset_a: Vec<usize>,
    subset_b: Vec<usize>,
    m_sigma: i64,
    mhat: i64,
    minimal: bool,
    /// `m_σ` falls short of the upper estimate `m̂_σ`.
    below_mhat: bool,
    witness: ResponseAssignment,
}

#[derive(Serialize)]
struct BoundReport {
    n: usize,
    tensor: String,
    partitions: Vec<PartitionBound>,
    /// Largest `m_σ` over the listed partitions.
    bound: i64,
    partial_bound: f64,
}

pub fn bound(a: &BoundArgs) -> Result<Report, CliError> {
    let (coeffs, label) = match &a.tensor {
        Some(path) => {
            let doc: CoefficientDocument = read_input(path, &[])?;
            let t = CoefficientTensor::try_from(doc)?;
            if let Some(n) = a.n {
                if usize_n(n) != t.n() {
                    return Err(CliError::Usage(format!(
                        "--n {n} disagrees with tensor of {} particles",
                        t.n()
                    )));
                }
            }
            (t, "custom".to_string())
        }
        None => {
            let n =
                a.n.ok_or_else(|| CliError::Usage("--n is required without --tensor".into()))?;
            let v = a.variant.unwrap_or(SignVariant::Plus);
            (CoefficientTensor::alternating(usize_n(n), v)?, v.name().to_string())
        }
    };
    let n = coeffs.n();
    let parts = match a.partition.as_str() {
        "all" => Bipartition::all(n),
        "last" => vec![Bipartition::last_split(n)?],
        spec => vec![parse_cluster(n, spec)?],
    };
    if parts.is_empty() {
        return Err(Error::InvalidParticleCount { n, min: 2 }.into());
    }
    let config = SearchConfig::default();
    for p in &parts {
        check_strategy_capacity(p, &config)?;
    }
    let mut rows = Vec::with_capacity(parts.len());
    for p in &parts {
        let h = hybrid_max(&coeffs, p)?;
        let mhat = mhat_upper_bound(&coeffs, p)?;
        rows.push(PartitionBound {
            partition: p.to_string(),
            subset_a: p.subset_a(),
            subset_b: p.subset_b(),
            m_sigma: h.value,
            mhat,
            minimal: check_minimal(&coeffs, p)?,
            below_mhat: h.value < mhat,
            witness: h.witness,
        });
    }
    let tensor = match alternating_variant(&coeffs) {
        Some((v, s)) if label == "custom" => format!("custom ({}{})", if s < 0 { "-" } else { "" }, v.name()),
        _ => label,
    };
    let result = BoundReport {
        n,
        tensor,
        bound: rows.iter().map(|r| r.m_sigma).max().expect("nonempty"),
        partitions: rows,
        partial_bound: partial_bound(n),
    };
    let mut report = Report::new(&result, &["partition", "m_sigma", "mhat", "minimal"])?;
    for r in &result.partitions {
        report.row([
            r.partition.clone(),
            r.m_sigma.to_string(),
            r.mhat.to_string(),
            r.minimal.to_string(),
        ]);
    }
    report.summary = Some(format!(
        "bound {} over {} bipartition(s)",
        result.bound,
        result.partitions.len()
    ));
    Ok(report)
}

#[derive(Serialize)]
struct MuSolution {
    mu: Vec<i8>,
    nu: Vec<i8>,
    alternating: bool,
}

#[derive(Serialize)]
struct MuReport {
    n: usize,
    p: usize,
    count: usize,
    solutions: Vec<MuSolution>,
}

pub fn mu(a: &MuArgs) -> Result<Report, CliError> {
    let (n, p) = (usize_n(a.n), usize_n(a.p));
    let solutions: Vec<MuSolution> = enumerate_mu_solutions(n, p)?
        .iter()
        .map(|m| MuSolution {
            mu: m.mu().to_vec(),
            nu: m.nu(),
            alternating: m.is_alternating(),
        })
        .collect();
    let result = MuReport {
        n,
        p,
        count: solutions.len(),
        solutions,
    };
    let mut report = Report::new(&result, &["mu", "nu", "alternating"])?;
    for s in &result.solutions {
        report.row([signs_string(&s.mu), signs_string(&s.nu), s.alternating.to_string()]);
    }
    Ok(report)
}

#[derive(Serialize)]
struct MinimaxReport {
    n: usize,
    partition: String,
    m: i64,
    partial_bound: f64,
    minimizer_count: usize,
    /// Minimizers that are (up to sign) alternating tensors.
    alternating_minimizers: Vec<String>,
    /// Sign patterns in encoded setting order, `+`/`-`.
    minimizers: Vec<String>,
}

pub fn minimax(a: &MinimaxArgs) -> Result<Report, CliError> {
    let n = usize_n(a.n);
    let (mm, partition) = match &a.partition {
        None => (full_minimax(n)?, "all".to_string()),
        Some(spec) => {
            let p = parse_cluster(n, spec)?;
            (partition_minimax(&p, &SearchConfig::default())?, p.to_string())
        }
    };
    let result = MinimaxReport {
        n,
        partition,
        m: mm.m,
        partial_bound: partial_bound(n),
        minimizer_count: mm.minimizers.len(),
        alternating_minimizers: mm
            .minimizers
            .iter()
            .filter_map(alternating_variant)
            .map(|(v, s)| format!("{}{}", if s < 0 { "-" } else { "" }, v.name()))
            .collect(),
        minimizers: mm.minimizers.iter().map(|t| signs_string(t.signs())).collect(),
    };
    let mut report = Report::new(&result, &["minimizer", "signs"])?;
    for (i, s) in result.minimizers.iter().enumerate() {
        report.row([i.to_string(), s.clone()]);
    }
    report.summary = Some(format!("m = {} ({} minimizers)", result.m, result.minimizer_count));
    Ok(report)
}

fn read_angles(path: &PathBuf, degrees: bool) -> Result<AngleSettings, CliError> {
    let mut doc: AnglesDocument = read_input(path, &["angles_document", "angles"])?;
    if degrees {
        doc.angles.iter_mut().for_each(|p| *p = p.map(f64::to_radians));
    }
    Ok(AngleSettings::try_from(doc)?)
}

fn ghz_value(
    n: usize,
    ghz_sign: i8,
    variant: SignVariant,
    settings: &AngleSettings,
) -> Result<(f64, &'static str), CliError> {
    if n <= STATEVECTOR_MAX_N {
        Ok((
            alternating_expectation(&ghz_state(n, ghz_sign)?, variant, settings)?,
            "statevector",
        ))
    } else {
        Ok((ghz_expectation_closed_form(ghz_sign, variant, settings), "closed_form"))
    }
}

#[derive(Serialize)]
struct ViolationReport {
    n: usize,
    variant: SignVariant,
    ghz_sign: i8,
    angles_source: String,
    value: f64,
    bound_partial: f64,
    bound_quantum: f64,
    /// `|value| / bound_partial`.
    ratio: f64,
    evaluation: &'static str,
    angles: AnglesDocument,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    restarts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    converged: Option<bool>,
}

pub fn violate(a: &ViolateArgs) -> Result<Report, CliError> {
    let n = usize_n(a.n);
    let ghz_sign = a.ghz_sign.sign();
    let (settings, restarts, converged) = match a.angles.as_str() {
        "optimal" => (optimal_angles(n, a.variant)?, None, None),
        "optimize" => {
            let r = maximize_violation(n, a.variant, a.restarts, a.seed)?;
            (r.settings, Some(r.restarts), Some(r.converged))
        }
        path => (read_angles(&PathBuf::from(path), a.degrees)?, None, None),
    };
    if settings.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: settings.n(),
        }
        .into());
    }
    let (value, evaluation) = ghz_value(n, ghz_sign, a.variant, &settings)?;
    let result = ViolationReport {
        n,
        variant: a.variant,
        ghz_sign,
        angles_source: a.angles.clone(),
        value,
        bound_partial: partial_bound(n),
        bound_quantum: quantum_bound(n),
        ratio: value.abs() / partial_bound(n),
        evaluation,
        angles: AnglesDocument::from(&settings),
        seed: a.seed,
        restarts,
        converged,
    };
    let mut report = Report::new(&result, &["particle", "alpha_1", "alpha_2"])?;
    for (k, p) in settings.angles().iter().enumerate() {
        report.row([(k + 1).to_string(), p[0].to_string(), p[1].to_string()]);
    }
    report.seeds = vec![a.seed];
    report.summary = Some(format!(
        "value {:.9} (partial bound {}, quantum bound {:.9}, ratio {:.9})",
        result.value, result.bound_partial, result.bound_quantum, result.ratio
    ));
    Ok(report)
}

#[derive(Serialize)]
struct InequalityEstimate {
    variant: SignVariant,
    value: f64,
    std_error: f64,
    exact: f64,
}

#[derive(Serialize)]
struct SimulationReport {
    source: &'static str,
    n: usize,
    shots: u64,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    angles_document: Option<AnglesDocument>,
    inequalities: Vec<InequalityEstimate>,
    bound_partial: f64,
    counts: CountsDocument,
    correlations: CorrelationDocument,
}

pub fn simulate(a: &SimulateArgs) -> Result<Report, CliError> {
    let (source, data, exact, angles) = match &a.model {
        Some(path) => {
            let doc: HybridModelDocument = read_input(path, &[])?;
            let model = HybridModel::try_from(doc)?;
            let check = validate_model(&model);
            for d in &check.diagnostics {
                eprintln!("model: {}: {}", d.constraint, d.message);
            }
            let exact = model_correlations(&model)?;
            let data = sample_dataset(&model, a.shots, a.seed, Execution::default())?;
            ("model", data, exact, None)
        }
        None => {
            let n = usize_n(a.n.ok_or_else(|| CliError::Usage("--ghz requires --n".into()))?);
            let settings = match &a.angles {
                Some(path) => read_angles(path, a.degrees)?,
                None => optimal_angles(n, a.variant)?,
            };
            let state = ghz_state(n, a.ghz_sign.sign())?;
            let exact = correlation_tensor(&state, &settings, Execution::default())?;
            let data = sample_counts(&state, &settings, a.shots, a.seed, Execution::default())?;
            ("ghz", data, exact, Some(AnglesDocument::from(&settings)))
        }
    };
    let n = data.n();
    let estimate = partsep::hv_model::estimate_correlations(&data)?;
    let inequalities = SignVariant::ALL
        .iter()
        .map(|&variant| {
            let coeffs = CoefficientTensor::alternating(n, variant)?;
            let est = inequality_value(&coeffs, &estimate)?;
            Ok(InequalityEstimate {
                variant,
                value: est.value,
                std_error: est.std_error.unwrap_or(0.0),
                exact: inequality_value(&coeffs, &exact)?.value,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let result = SimulationReport {
        source,
        n,
        shots: data.shots(),
        seed: a.seed,
        angles_document: angles,
        inequalities,
        bound_partial: partial_bound(n),
        counts: CountsDocument::from(&data),
        correlations: CorrelationDocument::from(&estimate),
    };
    let mut report = Report::new(&result, &["settings", "estimate", "std_error", "exact"])?;
    correlation_rows(&mut report, &estimate, &exact);
    report.seeds = vec![a.seed];
    Ok(report)
}

fn correlation_rows(report: &mut Report, estimate: &CorrelationTensor, exact: &CorrelationTensor) {
    let se = estimate.std_errors().map(<[f64]>::to_vec).unwrap_or_default();
    for index in MultiIndex::all(estimate.n()) {
        let c = index.code() as usize;
        report.row([
            index.to_string(),
            estimate.get(index).to_string(),
            se.get(c).copied().unwrap_or(0.0).to_string(),
            exact.get(index).to_string(),
        ]);
    }
}

#[derive(Serialize)]
struct CertifyReport {
    #[serde(flatten)]
    report: partsep::certify::CertificationReport,
    verdict: String,
}

pub fn certify(a: &CertifyArgs) -> Result<Report, CliError> {
    let doc: CountsDocument = read_input(&a.input, &["counts"])?;
    let data = CountsDataset::try_from(doc)?;
    let r = certify_counts(&data, a.threshold)?;
    let best = r
        .variants
        .iter()
        .max_by(|x, y| x.z_score.total_cmp(&y.z_score))
        .expect("two variants");
    let verdict = if r.violates_partial_separability {
        format!(
            "violates partial separability: value ≈ {:.3} ({}), bound {}, significance {:.1}σ > {}σ",
            best.value, best.variant, r.bound, best.z_score, r.threshold_sigma
        )
    } else {
        format!(
            "no violation of partial separability at {}σ: largest |value| ≈ {:.3} ({}), bound {}",
            r.threshold_sigma,
            best.value.abs(),
            best.variant,
            r.bound
        )
    };
    let result = CertifyReport { report: r, verdict };
    let mut report = Report::new(&result, &["variant", "value", "std_error", "z_score", "violates"])?;
    for v in &result.report.variants {
        report.row([
            v.variant.to_string(),
            v.value.to_string(),
            v.std_error.to_string(),
            v.z_score.to_string(),
            v.violates.to_string(),
        ]);
    }
    report.summary = Some(result.verdict.clone());
    Ok(report)
}
