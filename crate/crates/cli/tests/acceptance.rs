//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! if any criterion fails. Tolerances and time limits are fixed below.

use std::f64::consts::{PI, SQRT_2};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use partsep::bound::{
    check_minimal, enumerate_mu_solutions, full_minimax, hybrid_max, mhat_upper_bound, nu_from_mu, Bipartition,
};
use partsep::hv_model::{model_correlations, HybridModel, HybridModelDocument};
use partsep::inequality::{inequality_value, nu, partial_bound, quantum_bound};
use partsep::quantum::{
    alternating_expectation, alternating_operator, biseparable_sweep, correlation, ghz_correlation_analytic,
    ghz_expectation_closed_form, ghz_state, optimal_angles, AngleSettings, BuildMethod, SweepConfig,
};
use partsep::{CoefficientTensor, MultiIndex, SignVariant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const QUANTUM_TOL: f64 = 1e-9;
const RECURSION_TOL: f64 = 1e-12;
const CORRELATION_TOL: f64 = 1e-10;
const CEILING_TOL: f64 = 1e-9;
const SUPREMUM_FRACTION: f64 = 0.98;
const Z_REQUIRED: f64 = 20.0;
const SE_WINDOW: f64 = 5.0;
const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

/// The displayed four-particle inequality, term by term.
const FOUR_PARTICLE_FIXTURE: [(&str, i8); 16] = [
    ("1111", 1),
    ("2111", -1),
    ("1211", -1),
    ("1121", -1),
    ("1112", -1),
    ("2211", -1),
    ("2121", -1),
    ("2112", -1),
    ("1221", -1),
    ("1212", -1),
    ("1122", -1),
    ("2221", 1),
    ("2212", 1),
    ("2122", 1),
    ("1222", 1),
    ("2222", 1),
];

fn settings_of(label: &str) -> Vec<u8> {
    label.bytes().map(|b| b - b'0').collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let t = CoefficientTensor::alternating(4, SignVariant::Plus).map_err(|e| e.to_string())?;
    let mut seen = 0;
    for (label, sign) in FOUR_PARTICLE_FIXTURE {
        let index = MultiIndex::from_settings(&settings_of(label)).map_err(|e| e.to_string())?;
        ensure(t.get(index) == sign, || {
            format!("E({label}) has sign {}, fixture {sign}", t.get(index))
        })?;
        let by_t = if matches!(index.t(), 0 | 3 | 4) { 1 } else { -1 };
        ensure(sign == by_t, || {
            format!("fixture sign of E({label}) disagrees with t = {}", index.t())
        })?;
        seen |= 1u32 << index.code();
    }
    let elapsed = start.elapsed();
    ensure(seen == 0xffff, || "fixture does not cover all 16 terms".into())?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("16/16 terms, {elapsed:.2?}"))
}

/// Independent enumeration over both clusters' response functions.
fn brute_hybrid(coeffs: &CoefficientTensor, part: &Bipartition) -> i64 {
    let n = part.n();
    let (a, b) = (part.subset_a(), part.subset_b());
    let local = |code: u32, subset: &[usize]| -> usize {
        subset
            .iter()
            .enumerate()
            .map(|(j, &k)| ((code >> (k - 1) & 1) as usize) << j)
            .sum()
    };
    let (wa, wb) = (1usize << a.len(), 1usize << b.len());
    let mut best = i64::MIN;
    for xi in 0u64..1 << wa {
        for eta in 0u64..1 << wb {
            let mut s = 0i64;
            for code in 0..1u32 << n {
                let x = if xi >> local(code, &a) & 1 == 0 { 1 } else { -1 };
                let y = if eta >> local(code, &b) & 1 == 0 { 1 } else { -1 };
                s += coeffs.sign_at(code as usize) as i64 * x * y;
            }
            best = best.max(s);
        }
    }
    best
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (mut checked, mut oracle) = (0, 0);
    for n in 2..=8 {
        for v in SignVariant::ALL {
            let t = CoefficientTensor::alternating(n, v).map_err(|e| e.to_string())?;
            for p in Bipartition::all(n).iter().filter(|p| p.size_a().min(p.size_b()) <= 3) {
                let m = hybrid_max(&t, p).map_err(|e| e.to_string())?.value;
                let expect = 1i64 << (n - 1);
                ensure(m == expect, || format!("n={n} {v} {p}: m = {m}, expected {expect}"))?;
                checked += 1;
                if n <= 5 {
                    let b = brute_hybrid(&t, p);
                    ensure(b == m, || format!("n={n} {v} {p}: oracle {b} vs {m}"))?;
                    oracle += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "{checked} bipartitions ({oracle} against the enumeration oracle), {elapsed:.2?}"
    ))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let m3 = full_minimax(3).map_err(|e| e.to_string())?.m;
    ensure(m3 == 4, || format!("full_minimax(3) = {m3}"))?;
    let t4 = Instant::now();
    let m4 = full_minimax(4).map_err(|e| e.to_string())?.m;
    let n4 = t4.elapsed();
    ensure(m4 == 8, || format!("full_minimax(4) = {m4}"))?;
    within(n4, Duration::from_secs(300))?;
    Ok(format!(
        "m(3) = 4, m(4) = 8; n=4 in {n4:.2?}, total {:.2?}",
        start.elapsed()
    ))
}

/// Neumaier summation; a plain sum of 2^20 terms of size 1 drifts past 1e-9.
fn compensated_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in terms {
        let t = sum + x;
        comp += if sum.abs() >= x.abs() {
            (sum - t) + x
        } else {
            (x - t) + sum
        };
        sum = t;
    }
    sum + comp
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    for n in 2..=20 {
        for v in SignVariant::ALL {
            let a = optimal_angles(n, v).map_err(|e| e.to_string())?;
            let target = quantum_bound(n);
            // analytic path: explicit sum of ν(t)·cos(Σα) over all settings
            let sum =
                compensated_sum(MultiIndex::all(n).map(|i| nu(v, i.t()) as f64 * ghz_correlation_analytic(1, &a, i)));
            ensure((sum.abs() - target).abs() <= QUANTUM_TOL, || {
                format!("analytic n={n} {v}: {sum} vs {target}")
            })?;
            let closed = ghz_expectation_closed_form(1, v, &a);
            ensure((closed.abs() - target).abs() <= QUANTUM_TOL, || {
                format!("closed form n={n} {v}: {closed}")
            })?;
            if n <= 10 {
                let sv = alternating_expectation(&ghz_state(n, 1).map_err(|e| e.to_string())?, v, &a)
                    .map_err(|e| e.to_string())?;
                ensure((sv.abs() - target).abs() <= QUANTUM_TOL, || {
                    format!("statevector n={n} {v}: {sv} vs {target}")
                })?;
            }
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!("statevector n=2..10, analytic n=2..20, {elapsed:.2?}"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut worst = 0.0f64;
    for n in 1..=8 {
        for draw in 0..100 {
            let flat: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-PI..PI)).collect();
            let a = AngleSettings::from_flat(&flat).map_err(|e| e.to_string())?;
            let v = SignVariant::ALL[draw % 2];
            let d = alternating_operator(n, v, &a, BuildMethod::Direct).map_err(|e| e.to_string())?;
            let r = alternating_operator(n, v, &a, BuildMethod::Recursive).map_err(|e| e.to_string())?;
            worst = worst.max(d.max_abs_diff(&r));
        }
    }
    let elapsed = start.elapsed();
    ensure(worst <= RECURSION_TOL, || format!("max entry difference {worst:e}"))?;
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "100 draws for each n ≤ 8, max |Δ| = {worst:.1e}, {elapsed:.2?}"
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(1..=8);
        let sign = if rng.random() { 1 } else { -1 };
        let flat: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-PI..PI)).collect();
        let a = AngleSettings::from_flat(&flat).map_err(|e| e.to_string())?;
        let index = MultiIndex::from_code(n, rng.random_range(0..1u32 << n)).map_err(|e| e.to_string())?;
        let numeric =
            correlation(&ghz_state(n, sign).map_err(|e| e.to_string())?, &a, index).map_err(|e| e.to_string())?;
        worst = worst.max((numeric - ghz_correlation_analytic(sign, &a, index)).abs());
    }
    ensure(worst <= CORRELATION_TOL, || format!("max |Δ| = {worst:e}"))?;
    Ok(format!("1000 draws, max |Δ| = {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut detail = Vec::new();
    for n in [3, 4] {
        let cfg = SweepConfig {
            samples: 10_000,
            seed: SEED + n as u64,
            ..Default::default()
        };
        let r = biseparable_sweep(n, SignVariant::Plus, &cfg).map_err(|e| e.to_string())?;
        ensure(r.supremum <= r.bound + CEILING_TOL, || {
            format!("n={n}: sample {} reaches {} > {}", r.argmax_sample, r.supremum, r.bound)
        })?;
        if n == 3 {
            ensure(r.supremum >= SUPREMUM_FRACTION * r.bound, || {
                format!("n=3 supremum {} below {} of the bound", r.supremum, SUPREMUM_FRACTION)
            })?;
        }
        detail.push(format!("n={n} sup {:.6}/{}", r.supremum, r.bound));
    }
    Ok(format!("{}, {:.2?}", detail.join(", "), start.elapsed()))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let plus_cycle = [1i8, -1, -1, 1];
    let minus_cycle = [1i8, 1, -1, -1];
    for n in 2..=10 {
        for p in 1..n {
            let sols = enumerate_mu_solutions(n, p).map_err(|e| e.to_string())?;
            let mut found = [false; 2];
            for s in sols.iter().filter(|s| s.is_alternating()) {
                let nu = nu_from_mu(s);
                let plus = nu.iter().enumerate().all(|(k, &x)| x == plus_cycle[k % 4]);
                let minus = nu.iter().enumerate().all(|(k, &x)| x == minus_cycle[k % 4]);
                ensure(plus || minus, || format!("n={n} p={p}: alternating μ maps to {nu:?}"))?;
                found[usize::from(minus)] = true;
            }
            ensure(found == [true, true], || {
                format!("n={n} p={p}: alternating solutions {found:?}")
            })?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("n=2..10, all p, {elapsed:.2?}"))
}

fn criterion_9() -> Outcome {
    let n = 3;
    let parts = Bipartition::all(n);
    let mut checks = 0;
    for mask in 0u64..256 {
        let t = CoefficientTensor::from_mask(n, mask).map_err(|e| e.to_string())?;
        for p in &parts {
            let minimal = check_minimal(&t, p).map_err(|e| e.to_string())?;
            let mhat = mhat_upper_bound(&t, p).map_err(|e| e.to_string())?;
            ensure(minimal == (mhat == 4), || {
                format!("mask {mask:#010b} {p}: minimal {minimal}, m̂ {mhat}")
            })?;
            checks += 1;
        }
    }
    Ok(format!("{checks} (tensor, bipartition) pairs, 0 exceptions"))
}

fn run_cli(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_partsep"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "partsep {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let doc: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    Ok(doc["result"].clone())
}

fn certify_file(path: &Path) -> Result<Value, String> {
    run_cli(&["certify", path.to_str().expect("utf-8 path")])
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let sim = dir.path().join("ghz.json");
    let seed = SEED.to_string();
    let args = [
        "simulate", "--ghz", "--n", "3", "--shots", "100000", "--seed", &seed, "--out",
    ];
    let mut full: Vec<&str> = args.to_vec();
    full.push(sim.to_str().expect("utf-8 path"));
    Command::new(env!("CARGO_BIN_EXE_partsep"))
        .args(&full)
        .status()
        .map_err(|e| e.to_string())
        .and_then(|s| ensure(s.success(), || "simulate failed".into()))?;
    let report = certify_file(&sim)?;
    ensure(report["violates_partial_separability"] == Value::Bool(true), || {
        "GHZ data not certified".into()
    })?;
    ensure(report["variants"].as_array().map_or(0, Vec::len) == 2, || {
        "both variants must be reported".into()
    })?;
    let plus = &report["variants"][0];
    let (value, se, z) = (
        plus["value"].as_f64().unwrap_or(f64::NAN),
        plus["std_error"].as_f64().unwrap_or(f64::NAN),
        plus["z_score"].as_f64().unwrap_or(f64::NAN),
    );
    ensure(z > Z_REQUIRED, || format!("z = {z}"))?;
    let target = 4.0 * SQRT_2;
    ensure((value - target).abs() <= SE_WINDOW * se, || {
        format!("value {value} ± {se} vs {target}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let coeffs = SignVariant::ALL.map(|v| CoefficientTensor::alternating(3, v).expect("n = 3"));
    for k in 0..100 {
        let model = HybridModel::random(3, 4, &mut rng).map_err(|e| e.to_string())?;
        let exact = model_correlations(&model).map_err(|e| e.to_string())?;
        let path = dir.path().join(format!("model{k}.json"));
        let doc = serde_json::to_string(&HybridModelDocument::from(&model)).map_err(|e| e.to_string())?;
        std::fs::write(&path, doc).map_err(|e| e.to_string())?;
        let out = dir.path().join(format!("counts{k}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_partsep"))
            .args([
                "simulate",
                "--model",
                path.to_str().unwrap(),
                "--shots",
                "100000",
                "--seed",
            ])
            .arg((SEED + k).to_string())
            .arg("--out")
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), || format!("simulate model {k} failed"))?;
        let r = certify_file(&out)?;
        ensure(r["violates_partial_separability"] == Value::Bool(false), || {
            format!("model {k} certified as violating")
        })?;
        for (j, c) in coeffs.iter().enumerate() {
            let e = inequality_value(c, &exact).map_err(|e| e.to_string())?.value;
            ensure(e.abs() <= partial_bound(3) + 1e-12, || {
                format!("model {k}: exact value {e}")
            })?;
            let est = r["variants"][j]["value"].as_f64().unwrap_or(f64::NAN);
            let se = r["variants"][j]["std_error"].as_f64().unwrap_or(f64::NAN);
            ensure((est - e).abs() <= SE_WINDOW * se.max(1e-12), || {
                format!("model {k}: estimate {est} ± {se}, exact {e}")
            })?;
        }
    }
    Ok(format!(
        "GHZ value {value:.4} ± {se:.4}, z = {z:.1}; 100 hybrid models non-violating"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("four-particle coefficient fixture", criterion_1),
        ("hybrid bounds 2^(n-1), n = 2..8", criterion_2),
        ("full minimax n = 3, 4", criterion_3),
        ("GHZ quantum maximum", criterion_4),
        ("direct vs recursive operator", criterion_5),
        ("analytic vs statevector GHZ correlations", criterion_6),
        ("biseparable ceiling", criterion_7),
        ("alternating μ-solutions", criterion_8),
        ("minimality link at n = 3", criterion_9),
        ("end-to-end certification", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
