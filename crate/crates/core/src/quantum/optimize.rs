use std::f64::consts::{FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ghz_expectation_closed_form, ghz_state, state::alternating_expectation, wrap_angle, AngleSettings};
use crate::error::{Error, Result};
use crate::exec::{sub_seed, Execution};
use crate::inequality::SignVariant;

/// One-dimensional maximization along a single angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineSearch {
    /// Coarse 8-point scan of the circle, then golden-section refinement on
    /// the quarter-turn bracket around the best scan point.
    GoldenSection,
    /// Exact maximization for objectives of the form `A cos α + B sin α + C`
    /// (any expectation is of this form in one observable angle), from three
    /// evaluations.
    Sinusoid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentConfig {
    /// Stop when one full sweep improves the objective by less than this.
    pub tol: f64,
    pub max_sweeps: usize,
    /// Bracket width at which golden-section refinement stops.
    pub line_tol: f64,
    pub line_search: LineSearch,
}

impl Default for AscentConfig {
    fn default() -> Self {
        AscentConfig {
            tol: 1e-10,
            max_sweeps: 10_000,
            line_tol: 1e-9,
            line_search: LineSearch::GoldenSection,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AscentResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub sweeps: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn golden_max(g: &mut impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = g(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn line_max(mut g: impl FnMut(f64) -> f64, start: f64, current: f64, cfg: &AscentConfig) -> (f64, f64) {
    let (a, v) = match cfg.line_search {
        LineSearch::GoldenSection => {
            let (best_a, _) = (0..8)
                .map(|j| start + j as f64 * FRAC_PI_4)
                .map(|a| (a, g(a)))
                .fold((start, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { p } else { acc });
            golden_max(&mut g, best_a - FRAC_PI_4, best_a + FRAC_PI_4, cfg.line_tol)
        }
        LineSearch::Sinusoid => {
            let third = 2.0 * PI / 3.0;
            let (mut c, mut s) = (0.0, 0.0);
            for j in 0..3 {
                let theta = start + j as f64 * third;
                let v = g(theta);
                c += v * theta.cos();
                s += v * theta.sin();
            }
            // the constant term cancels in both projections
            let a = s.atan2(c);
            (a, g(a))
        }
    };
    if v > current {
        (wrap_angle(a), v)
    } else {
        (start, current)
    }
}

/// Cyclic coordinate ascent over angle variables.
pub fn coordinate_ascent(f: impl Fn(&[f64]) -> f64, x0: Vec<f64>, cfg: &AscentConfig) -> AscentResult {
    let mut x = x0;
    let mut value = f(&x);
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < cfg.max_sweeps {
        sweeps += 1;
        let before = value;
        for i in 0..x.len() {
            let start = x[i];
            let mut probe = x.clone();
            let (a, v) = line_max(
                |a| {
                    probe[i] = a;
                    f(&probe)
                },
                start,
                value,
                cfg,
            );
            x[i] = a;
            value = v;
        }
        if value - before < cfg.tol {
            converged = true;
            break;
        }
    }
    AscentResult {
        x,
        value,
        converged,
        sweeps,
    }
}

/// Best violation found by [`maximize_violation`].
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationSearch {
    pub settings: AngleSettings,
    /// `⟨S⟩` on GHZ(n, +) at `settings`, evaluated on the statevector.
    pub value: f64,
    pub converged: bool,
    pub best_restart: usize,
    pub restarts: usize,
    pub seed: u64,
}

/// Maximize `⟨S_n^variant⟩` on GHZ(n, +) over all `2n` angles from `restarts`
/// seeded random starts.
pub fn maximize_violation(n: usize, variant: SignVariant, restarts: usize, seed: u64) -> Result<ViolationSearch> {
    maximize_violation_with(
        n,
        variant,
        restarts,
        seed,
        &AscentConfig::default(),
        Execution::default(),
    )
}

pub fn maximize_violation_with(
    n: usize,
    variant: SignVariant,
    restarts: usize,
    seed: u64,
    cfg: &AscentConfig,
    exec: Execution,
) -> Result<ViolationSearch> {
    if n == 0 {
        return Err(Error::InvalidParticleCount { n, min: 1 });
    }
    if n > 10 {
        return Err(Error::Capacity {
            what: "violation search",
            required: format!("{n} particles"),
            limit: "n ≤ 10".into(),
        });
    }
    if restarts == 0 {
        return Err(Error::InvalidSettings("at least one restart is required".into()));
    }
    // The search runs on the closed-form GHZ expectation (O(n) per call);
    // the winner is re-evaluated on the statevector.
    let objective = |x: &[f64]| {
        let s = AngleSettings::from_flat(x).expect("finite angles");
        ghz_expectation_closed_form(1, variant, &s)
    };
    let runs = exec.map_collect(0..restarts as u64, |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, r));
        let x0: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-PI..PI)).collect();
        coordinate_ascent(objective, x0, cfg)
    });
    let (best_restart, best) = runs
        .iter()
        .enumerate()
        .fold(None, |acc: Option<(usize, &AscentResult)>, (i, r)| match acc {
            Some((_, b)) if b.value >= r.value => acc,
            _ => Some((i, r)),
        })
        .expect("restarts ≥ 1");
    let settings = AngleSettings::from_flat(&best.x)?.wrapped();
    let value = alternating_expectation(&ghz_state(n, 1)?, variant, &settings)?;
    Ok(ViolationSearch {
        settings,
        value,
        converged: best.converged,
        best_restart,
        restarts,
        seed,
    })
}
