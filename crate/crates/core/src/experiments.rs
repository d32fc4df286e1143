//! Seeded batch experiments and property suites. Each returns a serializable
//! report embedding its configuration, seed and the crate version, plus a
//! CSV table of per-trial rows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cayley::{
    affine_span_trace, cayley_ball, check_thmc_hypothesis, proof_identity_holds,
    substituted_product, thmc_polynomialize, SemigroupPresentation, DEFAULT_TERM_BUDGET,
};
use crate::error::{Error, Result};
use crate::expsum::{
    bmv_lower_bound_holds, complete_rational_sum, hq_sum_scaling, lemma24_certificate,
    loglog_slope, CompleteSumSpec,
};
use crate::intlinalg::{gcd_bound_factorize, gcd_bound_fuzz_report, smith_normal_form};
use crate::io::csv_table;
use crate::matrix::IntMatrix;
use crate::par;
use crate::polymat::{check_set_hypothesis, IntPolyMatrix};
use crate::sampling::{
    full_grid, grid_side_for, is_prime, random_far_points, random_int_matrix,
    random_low_height_set, random_rational_set, random_rational_vector, random_sl2_word,
    random_unipotent_presentation, Denominators, RationalSetSpec,
};
use crate::search::{
    find_group_dilation, find_poly_dilation, find_scalar_dilation, Dilator, SearchBudget,
};
use crate::torus::{DensityStatus, TorusPoint, TorusPointSet};
use crate::walk::{
    decay_profile, fourier_coeff, uniform_plateau, MonteCarloConfig, WalkMeasure, WalkMethod,
};
use crate::VERSION;

pub const REPORT_SCHEMA: &str = "glasner-lab/report/v1";

pub const EXPERIMENTS: [&str; 6] = [
    "glasner1d",
    "prop16",
    "thmC",
    "walk-decay",
    "bmv-fuzz",
    "hq-scaling",
];

/// Independent stream `trial` of the master seed.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A finished experiment: JSON summary, CSV rows, and whether its target was met.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub passed: bool,
    pub summary: Value,
    pub csv: String,
}

fn report<C: Serialize, S: Serialize>(
    name: &str,
    seed: u64,
    config: &C,
    summary: &S,
    passed: bool,
    csv: String,
) -> ExperimentReport {
    ExperimentReport {
        name: name.into(),
        passed,
        summary: json!({
            "schema": REPORT_SCHEMA,
            "experiment": name,
            "version": VERSION,
            "seed": seed,
            "config": config,
            "passed": passed,
            "summary": summary,
        }),
        csv,
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.12e}")
}

// ---------------------------------------------------------------- bmv-fuzz

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LowerBoundFuzzConfig {
    pub trials: usize,
    pub dims: Vec<usize>,
    pub eps_values: Vec<f64>,
    pub k_max: usize,
    pub den_max: u64,
    pub seed: u64,
}

impl Default for LowerBoundFuzzConfig {
    fn default() -> Self {
        LowerBoundFuzzConfig {
            trials: 1000,
            dims: vec![1, 2, 3],
            eps_values: vec![0.05, 0.1, 0.2],
            k_max: 200,
            den_max: 1000,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBoundFuzzSummary {
    pub trials: usize,
    pub violations: usize,
    /// Smallest `rhs / lhs` observed.
    pub min_ratio: f64,
}

pub fn lower_bound_fuzz(cfg: &LowerBoundFuzzConfig) -> Result<ExperimentReport> {
    if cfg.dims.is_empty() || cfg.eps_values.is_empty() || cfg.k_max == 0 {
        return Err(Error::InvalidArgument(
            "bmv-fuzz needs dims, eps values and k_max ≥ 1".into(),
        ));
    }
    let rows = par::map_range(cfg.trials, |t| {
        let mut rng = trial_rng(cfg.seed, t as u64);
        let d = *cfg.dims.choose(&mut rng).expect("nonempty");
        let eps = *cfg.eps_values.choose(&mut rng).expect("nonempty");
        let k = rng.gen_range(1..=cfg.k_max);
        let pts = random_far_points(&mut rng, d, k, eps, cfg.den_max);
        bmv_lower_bound_holds(&pts, eps).map(|c| (t, d, eps, k, c))
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let violations = rows.iter().filter(|r| !r.4.verified).count();
    let min_ratio = rows
        .iter()
        .map(|r| r.4.rhs / r.4.lhs)
        .fold(f64::INFINITY, f64::min);
    let csv = csv_table(
        &[
            "trial", "dim", "eps", "k", "radius", "lhs", "rhs", "verified",
        ],
        &rows
            .iter()
            .map(|(t, d, e, k, c)| {
                vec![
                    t.to_string(),
                    d.to_string(),
                    e.to_string(),
                    k.to_string(),
                    c.radius.to_string(),
                    fmt(c.lhs),
                    fmt(c.rhs),
                    c.verified.to_string(),
                ]
            })
            .collect::<Vec<_>>(),
    );
    let summary = LowerBoundFuzzSummary {
        trials: rows.len(),
        violations,
        min_ratio,
    };
    Ok(report(
        "bmv-fuzz",
        cfg.seed,
        cfg,
        &summary,
        violations == 0,
        csv,
    ))
}

// ---------------------------------------------------------- non-density certificates

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CertificateConfig {
    pub instances: usize,
    pub dims: Vec<usize>,
    pub eps_values: Vec<f64>,
    pub k_max: usize,
    pub den_max: u64,
    pub max_refinements: u32,
    pub seed: u64,
}

impl Default for CertificateConfig {
    fn default() -> Self {
        CertificateConfig {
            instances: 500,
            dims: vec![1, 2, 3],
            eps_values: vec![0.05, 0.1, 0.2],
            k_max: 12,
            den_max: 200,
            max_refinements: 6,
            seed: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateSummary {
    pub instances: usize,
    pub holds: usize,
    pub failures: usize,
    /// Draws discarded because `gY` was not certified NOT_DENSE.
    pub discarded: usize,
    pub min_ratio: f64,
}

fn random_dilator<R: Rng>(rng: &mut R, d: usize) -> IntMatrix {
    match d {
        1 => IntMatrix::from_i64(&[vec![rng.gen_range(1..=60)]]),
        2 => {
            let len = rng.gen_range(0..=6);
            random_sl2_word(rng, len)
        }
        _ => {
            let s = random_unipotent_presentation(rng, d, 1).expect("valid");
            s.generators()[0].pow(rng.gen_range(0..=4))
        }
    }
}

pub fn certificate_suite(cfg: &CertificateConfig) -> Result<ExperimentReport> {
    let rows = par::map_range(cfg.instances, |t| -> Result<_> {
        let mut rng = trial_rng(cfg.seed, t as u64);
        let mut discarded = 0;
        loop {
            let d = *cfg.dims.choose(&mut rng).expect("nonempty");
            let eps = *cfg.eps_values.choose(&mut rng).expect("nonempty");
            let k = rng.gen_range(1..=cfg.k_max);
            let spec = RationalSetSpec {
                dim: d,
                k,
                width: 1.0,
                denominators: Denominators::Uniform(1, cfg.den_max),
                distinct_coordinates: false,
            };
            let y = random_rational_set(&mut rng, &spec)?;
            let g = random_dilator(&mut rng, d);
            let c = lemma24_certificate(&y, &g, eps, cfg.max_refinements)?;
            if c.applicable {
                return Ok((t, d, eps, k, c, discarded));
            }
            discarded += 1;
        }
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let holds = rows.iter().filter(|r| r.4.holds()).count();
    let summary = CertificateSummary {
        instances: rows.len(),
        holds,
        failures: rows.len() - holds,
        discarded: rows.iter().map(|r| r.5).sum(),
        min_ratio: rows
            .iter()
            .map(|r| r.4.raw_rhs / r.4.raw_lhs)
            .fold(f64::INFINITY, f64::min),
    };
    let csv = csv_table(
        &[
            "instance",
            "dim",
            "eps",
            "k",
            "radius",
            "k2_over_9",
            "card_times_sq_sum",
            "holds",
        ],
        &rows
            .iter()
            .map(|(t, d, e, k, c, _)| {
                vec![
                    t.to_string(),
                    d.to_string(),
                    e.to_string(),
                    k.to_string(),
                    c.radius.to_string(),
                    fmt(c.raw_lhs),
                    fmt(c.raw_rhs),
                    c.holds().to_string(),
                ]
            })
            .collect::<Vec<_>>(),
    );
    let passed = summary.failures == 0;
    Ok(report("certificates", cfg.seed, cfg, &summary, passed, csv))
}

// ---------------------------------------------------------------- SNF suite

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SnfSuiteConfig {
    pub matrices: usize,
    pub max_dim: usize,
    pub entry_bound: i64,
    pub gcd_samples: usize,
    pub q_max: u64,
    pub seed: u64,
}

impl Default for SnfSuiteConfig {
    fn default() -> Self {
        SnfSuiteConfig {
            matrices: 500,
            max_dim: 6,
            entry_bound: 20,
            gcd_samples: 100,
            q_max: 10_000,
            seed: 3,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SnfSuiteSummary {
    pub matrices: usize,
    pub zero_matrices: usize,
    pub reconstruction_failures: usize,
    pub unimodular_failures: usize,
    pub chain_failures: usize,
    pub injectivity_failures: usize,
    pub surjectivity_failures: usize,
    pub factor_failures: usize,
    pub gcd_violations: usize,
    pub gcd_samples: usize,
}

impl SnfSuiteSummary {
    pub fn failures(&self) -> usize {
        self.reconstruction_failures
            + self.unimodular_failures
            + self.chain_failures
            + self.injectivity_failures
            + self.surjectivity_failures
            + self.factor_failures
            + self.gcd_violations
    }
}

pub fn snf_suite(cfg: &SnfSuiteConfig) -> Result<ExperimentReport> {
    let per = par::map_range(cfg.matrices, |t| {
        let mut rng = trial_rng(cfg.seed, t as u64);
        let r = rng.gen_range(1..=cfg.max_dim);
        let d = rng.gen_range(1..=cfg.max_dim);
        let t0 = random_int_matrix(&mut rng, r, d, cfg.entry_bound);
        let mut s = SnfSuiteSummary {
            matrices: 1,
            ..Default::default()
        };
        let snf = smith_normal_form(&t0);
        s.reconstruction_failures += usize::from(!snf.reconstructs(&t0));
        s.unimodular_failures += usize::from(!snf.is_unimodular());
        s.chain_failures += usize::from(!snf.divisor_chain_holds());
        match gcd_bound_factorize(&t0) {
            Ok(f) => {
                s.injectivity_failures += usize::from(!f.t_is_injective());
                s.surjectivity_failures += usize::from(!f.r_is_surjective());
                s.factor_failures += usize::from(&f.t * &f.r != t0);
                let fuzz = gcd_bound_fuzz_report(&f, cfg.gcd_samples, cfg.q_max, rng.gen());
                s.gcd_violations += fuzz.violations;
                s.gcd_samples += fuzz.samples;
            }
            Err(Error::ZeroMatrix) => s.zero_matrices += 1,
            Err(_) => s.factor_failures += 1,
        }
        (t, r, d, snf.k, s)
    });
    let mut total = SnfSuiteSummary::default();
    for (_, _, _, _, s) in &per {
        total.matrices += s.matrices;
        total.zero_matrices += s.zero_matrices;
        total.reconstruction_failures += s.reconstruction_failures;
        total.unimodular_failures += s.unimodular_failures;
        total.chain_failures += s.chain_failures;
        total.injectivity_failures += s.injectivity_failures;
        total.surjectivity_failures += s.surjectivity_failures;
        total.factor_failures += s.factor_failures;
        total.gcd_violations += s.gcd_violations;
        total.gcd_samples += s.gcd_samples;
    }
    let csv = csv_table(
        &["matrix", "rows", "cols", "rank", "failures"],
        &per.iter()
            .map(|(t, r, d, k, s)| {
                vec![
                    t.to_string(),
                    r.to_string(),
                    d.to_string(),
                    k.to_string(),
                    s.failures().to_string(),
                ]
            })
            .collect::<Vec<_>>(),
    );
    let passed = total.failures() == 0;
    Ok(report("snf-suite", cfg.seed, cfg, &total, passed, csv))
}

// ------------------------------------------------------- affine-span stabilization

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StabilizationConfig {
    pub presentations: usize,
    pub max_dim: usize,
    pub max_generators: usize,
    pub identity_samples: usize,
    pub seed: u64,
}

impl Default for StabilizationConfig {
    fn default() -> Self {
        StabilizationConfig {
            presentations: 200,
            max_dim: 4,
            max_generators: 3,
            identity_samples: 20,
            seed: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizationSummary {
    pub presentations: usize,
    /// Traces whose first repeat came after radius `d` (or never).
    pub late_stabilizations: usize,
    /// Traces that changed again after the first repeat.
    pub unstable_traces: usize,
    pub identity_checks: usize,
    pub identity_failures: usize,
    pub full_span: usize,
    pub max_stabilization: usize,
}

pub fn stabilization_suite(cfg: &StabilizationConfig) -> Result<ExperimentReport> {
    let per = par::map_range(cfg.presentations, |t| -> Result<_> {
        let mut rng = trial_rng(cfg.seed, t as u64);
        let d = rng.gen_range(1..=cfg.max_dim);
        let m = rng.gen_range(1..=cfg.max_generators);
        let s = random_unipotent_presentation(&mut rng, d, m)?;
        let a = random_rational_vector(&mut rng, d, 9);
        let trace = affine_span_trace(&s, &a, 2 * d)?;
        let n = trace.stabilization;
        let late = n.map_or(true, |n| n > d);
        let stable = trace.constant_after_stabilization();
        let ball = cayley_ball(&s, d, 1_000_000)?;
        let mut fails = 0;
        for _ in 0..cfg.identity_samples {
            let g = &ball.elements[rng.gen_range(0..ball.len())];
            let u = &s.generators()[rng.gen_range(0..m)];
            fails += usize::from(!proof_identity_holds(u, g, &a));
        }
        Ok((t, d, m, n, trace.final_dim, late, stable, fails))
    });
    let per = per.into_iter().collect::<Result<Vec<_>>>()?;
    let summary = StabilizationSummary {
        presentations: per.len(),
        late_stabilizations: per.iter().filter(|r| r.5).count(),
        unstable_traces: per.iter().filter(|r| !r.6).count(),
        identity_checks: per.len() * cfg.identity_samples,
        identity_failures: per.iter().map(|r| r.7).sum(),
        full_span: per.iter().filter(|r| r.4 == r.1).count(),
        max_stabilization: per.iter().filter_map(|r| r.3).max().unwrap_or(0),
    };
    let csv = csv_table(
        &[
            "presentation",
            "dim",
            "generators",
            "stabilization",
            "final_dim",
            "identity_failures",
        ],
        &per.iter()
            .map(|r| {
                vec![
                    r.0.to_string(),
                    r.1.to_string(),
                    r.2.to_string(),
                    r.3.map_or("none".into(), |n| n.to_string()),
                    r.4.to_string(),
                    r.7.to_string(),
                ]
            })
            .collect::<Vec<_>>(),
    );
    let passed = summary.late_stabilizations == 0
        && summary.unstable_traces == 0
        && summary.identity_failures == 0;
    Ok(report(
        "stabilization",
        cfg.seed,
        cfg,
        &summary,
        passed,
        csv,
    ))
}

// ---------------------------------------------------------------- Gauss sums

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaussSuiteConfig {
    pub q_max: u64,
    pub per_modulus: usize,
    pub seed: u64,
}

impl Default for GaussSuiteConfig {
    fn default() -> Self {
        GaussSuiteConfig {
            q_max: 499,
            per_modulus: 20,
            seed: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaussSuiteSummary {
    pub moduli: usize,
    pub sums: usize,
    /// Largest `| |S| − q^{−1/2} |` over quadratic sums.
    pub max_quadratic_error: f64,
    /// Largest `|S|` over linear sums.
    pub max_linear_modulus: f64,
}

pub const QUADRATIC_TOLERANCE: f64 = 1e-9;
pub const LINEAR_TOLERANCE: f64 = 1e-10;

pub fn gauss_suite(cfg: &GaussSuiteConfig) -> Result<ExperimentReport> {
    let primes: Vec<u64> = (3..=cfg.q_max).filter(|&q| is_prime(q)).collect();
    let per = par::map(&primes, |&q| -> Result<_> {
        let mut rng = trial_rng(cfg.seed, q);
        let mut quad = 0.0f64;
        let mut lin = 0.0f64;
        for _ in 0..cfg.per_modulus {
            let b = rng.gen_range(1..q as i64);
            let c = rng.gen_range(0..q as i64);
            let theta: f64 = rng.gen();
            let s2 = complete_rational_sum(&CompleteSumSpec {
                modulus: q,
                coeffs: vec![c, b],
                theta,
            })?;
            quad = quad.max((s2.norm() - (q as f64).powf(-0.5)).abs());
            let s1 = complete_rational_sum(&CompleteSumSpec {
                modulus: q,
                coeffs: vec![b],
                theta,
            })?;
            lin = lin.max(s1.norm());
        }
        Ok((q, quad, lin))
    });
    let per = per.into_iter().collect::<Result<Vec<_>>>()?;
    let summary = GaussSuiteSummary {
        moduli: per.len(),
        sums: 2 * per.len() * cfg.per_modulus,
        max_quadratic_error: per.iter().map(|r| r.1).fold(0.0, f64::max),
        max_linear_modulus: per.iter().map(|r| r.2).fold(0.0, f64::max),
    };
    let csv = csv_table(
        &["q", "max_quadratic_error", "max_linear_modulus"],
        &per.iter()
            .map(|r| vec![r.0.to_string(), fmt(r.1), fmt(r.2)])
            .collect::<Vec<_>>(),
    );
    let passed = summary.max_quadratic_error <= QUADRATIC_TOLERANCE
        && summary.max_linear_modulus <= LINEAR_TOLERANCE;
    Ok(report("gauss-sums", cfg.seed, cfg, &summary, passed, csv))
}

// ---------------------------------------------------------------- search trials

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchTrial {
    pub trial: usize,
    pub found: bool,
    pub dilator: Option<Dilator>,
    pub scanned: u64,
    /// `Y` itself was already ε-dense.
    pub dense_at_start: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchSummary {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub target_rate: f64,
    pub dense_at_start: usize,
    pub median_scanned: u64,
}

fn search_summary(rows: &[SearchTrial], target_rate: f64) -> SearchSummary {
    let successes = rows.iter().filter(|r| r.found).count();
    let mut scanned: Vec<u64> = rows.iter().map(|r| r.scanned).collect();
    scanned.sort_unstable();
    SearchSummary {
        trials: rows.len(),
        successes,
        success_rate: successes as f64 / rows.len().max(1) as f64,
        target_rate,
        dense_at_start: rows.iter().filter(|r| r.dense_at_start).count(),
        median_scanned: scanned.get(scanned.len() / 2).copied().unwrap_or(0),
    }
}

fn search_csv(rows: &[SearchTrial]) -> String {
    csv_table(
        &["trial", "found", "dilator", "scanned", "dense_at_start"],
        &rows
            .iter()
            .map(|r| {
                let dil = r.dilator.as_ref().map_or("-".into(), |d| match d {
                    Dilator::Scalar { n } | Dilator::Poly { n } => n.to_string(),
                    Dilator::Pair { n, m } => format!("({n} {m})"),
                    Dilator::Matrix { word, .. } => format!("word{word:?}").replace(',', ""),
                });
                vec![
                    r.trial.to_string(),
                    r.found.to_string(),
                    dil,
                    r.scanned.to_string(),
                    r.dense_at_start.to_string(),
                ]
            })
            .collect::<Vec<_>>(),
    )
}

fn dense_now(y: &TorusPointSet, eps: f64, max_refinements: u32) -> Result<bool> {
    Ok(crate::torus::is_eps_dense(y, eps, max_refinements)?.status == DensityStatus::Dense)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Glasner1dConfig {
    pub trials: usize,
    pub k: usize,
    pub eps: f64,
    pub n_max: u64,
    /// Side of the arc holding `Y`.
    pub width: f64,
    pub den_min: u64,
    pub den_max: u64,
    pub target_rate: f64,
    pub seed: u64,
}

impl Default for Glasner1dConfig {
    fn default() -> Self {
        Glasner1dConfig {
            trials: 40,
            k: 400,
            eps: 0.1,
            n_max: 100_000,
            width: 1e-4,
            den_min: 10_000_000,
            den_max: 1_000_000_000,
            target_rate: 0.95,
            seed: 7,
        }
    }
}

pub fn glasner1d(cfg: &Glasner1dConfig) -> Result<ExperimentReport> {
    let budget = SearchBudget {
        n_max: cfg.n_max,
        ..SearchBudget::default()
    };
    let rows = (0..cfg.trials)
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t as u64);
            let spec = RationalSetSpec {
                dim: 1,
                k: cfg.k,
                width: cfg.width,
                denominators: Denominators::Uniform(cfg.den_min, cfg.den_max),
                distinct_coordinates: true,
            };
            let y = random_rational_set(&mut rng, &spec)?;
            let out = find_scalar_dilation(&y, cfg.eps, &budget)?;
            Ok(SearchTrial {
                trial: t,
                found: out.found,
                dilator: out.dilator,
                scanned: out.scanned,
                dense_at_start: dense_now(&y, cfg.eps, budget.max_refinements)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = search_summary(&rows, cfg.target_rate);
    let passed = summary.success_rate >= cfg.target_rate;
    Ok(report(
        "glasner1d",
        cfg.seed,
        cfg,
        &summary,
        passed,
        search_csv(&rows),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PolyPairConfig {
    pub trials: usize,
    pub k: usize,
    pub eps: f64,
    pub n_max: u64,
    pub width: f64,
    pub den_min: u64,
    pub den_max: u64,
    pub target_rate: f64,
    pub seed: u64,
}

impl Default for PolyPairConfig {
    fn default() -> Self {
        PolyPairConfig {
            trials: 20,
            k: 60,
            eps: 0.25,
            n_max: 100_000,
            width: 0.002,
            den_min: 100_000,
            den_max: 10_000_000,
            target_rate: 0.9,
            seed: 6,
        }
    }
}

/// `diag(x, x²)`.
pub fn diag_x_x2() -> IntPolyMatrix {
    IntPolyMatrix::new(vec![
        IntMatrix::zeros(2, 2),
        IntMatrix::from_i64(&[vec![1, 0], vec![0, 0]]),
        IntMatrix::from_i64(&[vec![0, 0], vec![0, 1]]),
    ])
    .expect("valid")
}

fn lifts(y: &TorusPointSet) -> Vec<Vec<BigRational>> {
    y.points()
        .iter()
        .map(|p| p.as_exact().expect("exact").to_vec())
        .collect()
}

pub fn poly_pair(cfg: &PolyPairConfig) -> Result<ExperimentReport> {
    let a = diag_x_x2();
    let budget = SearchBudget {
        n_max: cfg.n_max,
        ..SearchBudget::default()
    };
    let mut hypothesis_failures = 0;
    let rows = (0..cfg.trials)
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t as u64);
            let spec = RationalSetSpec {
                dim: 2,
                k: cfg.k,
                width: cfg.width,
                denominators: Denominators::Uniform(cfg.den_min, cfg.den_max),
                distinct_coordinates: true,
            };
            let y = random_rational_set(&mut rng, &spec)?;
            if !check_set_hypothesis(&a, &lifts(&y))?.ok {
                hypothesis_failures += 1;
            }
            let out = find_poly_dilation(&y, &a, cfg.eps, &budget)?;
            Ok(SearchTrial {
                trial: t,
                found: out.found,
                dilator: out.dilator,
                scanned: out.scanned,
                dense_at_start: dense_now(&y, cfg.eps, budget.max_refinements)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = search_summary(&rows, cfg.target_rate);
    let passed = summary.success_rate >= cfg.target_rate && hypothesis_failures == 0;
    let full = json!({ "search": summary, "hypothesis_failures": hypothesis_failures });
    Ok(report(
        "prop16",
        cfg.seed,
        cfg,
        &full,
        passed,
        search_csv(&rows),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SemigroupConfig {
    pub trials: usize,
    pub k: usize,
    pub eps: f64,
    pub ball_radius: usize,
    pub element_budget: usize,
    pub width: f64,
    pub den_min: u64,
    pub den_max: u64,
    pub target_rate: f64,
    pub seed: u64,
}

impl Default for SemigroupConfig {
    fn default() -> Self {
        SemigroupConfig {
            trials: 20,
            k: 30,
            eps: 0.3,
            ball_radius: 8,
            element_budget: 100_000,
            width: 0.05,
            den_min: 1000,
            den_max: 100_000,
            target_rate: 0.8,
            seed: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SemigroupSummary {
    pub search: SearchSummary,
    pub hypothesis_failures: usize,
    /// Trials where `A(n₀)` matched the substituted product for all `n₀ ∈ {1,2,3}`.
    pub polynomial_matches: usize,
    pub polynomial_degree: usize,
    pub substitution_base: u64,
}

pub fn semigroup_pipeline(cfg: &SemigroupConfig) -> Result<ExperimentReport> {
    let s = SemigroupPresentation::sl2_elementary();
    let budget = SearchBudget {
        ball_radius: cfg.ball_radius,
        element_budget: cfg.element_budget,
        ..SearchBudget::default()
    };
    let mut hypothesis_failures = 0;
    let mut polynomial_matches = 0;
    let mut degree = 0;
    let mut base = 0;
    let mut rows = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, t as u64);
        let spec = RationalSetSpec {
            dim: 2,
            k: cfg.k,
            width: cfg.width,
            denominators: Denominators::Prime(cfg.den_min, cfg.den_max),
            distinct_coordinates: false,
        };
        let y = random_rational_set(&mut rng, &spec)?;
        let l = lifts(&y);
        if !check_thmc_hypothesis(&s, &l)?.ok {
            hypothesis_failures += 1;
        }
        let a: Vec<BigRational> = if l.len() > 1 {
            l[0].iter().zip(&l[1]).map(|(x, y)| x - y).collect()
        } else {
            l[0].clone()
        };
        let poly = thmc_polynomialize(&s, &a, DEFAULT_TERM_BUDGET)?;
        degree = poly.poly.degree();
        base = poly.r;
        let mut ok = true;
        for n0 in 1..=3u64 {
            let direct = substituted_product(&s, &poly, n0)?;
            ok &= poly.poly.eval_integer(&BigInt::from(n0)).as_ref() == Some(&direct);
        }
        polynomial_matches += usize::from(ok);
        let out = find_group_dilation(&y, &s, cfg.eps, &budget)?;
        rows.push(SearchTrial {
            trial: t,
            found: out.found,
            dilator: out.dilator,
            scanned: out.scanned,
            dense_at_start: dense_now(&y, cfg.eps, budget.max_refinements)?,
        });
    }
    let summary = SemigroupSummary {
        search: search_summary(&rows, cfg.target_rate),
        hypothesis_failures,
        polynomial_matches,
        polynomial_degree: degree,
        substitution_base: base,
    };
    let passed = summary.search.success_rate >= cfg.target_rate
        && hypothesis_failures == 0
        && polynomial_matches == cfg.trials;
    Ok(report(
        "thmC",
        cfg.seed,
        cfg,
        &summary,
        passed,
        search_csv(&rows),
    ))
}

// ---------------------------------------------------------------- walk decay

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WalkDecayConfig {
    pub moduli: Vec<u64>,
    pub n_max: usize,
    pub slack: f64,
    /// Steps at which exact and Monte Carlo values are compared.
    pub compare_steps: Vec<usize>,
    pub mc_samples: usize,
    pub se_multiple: f64,
    pub seed: u64,
}

impl Default for WalkDecayConfig {
    fn default() -> Self {
        WalkDecayConfig {
            moduli: vec![1, 2, 3, 5, 7, 11, 101],
            n_max: 120,
            slack: 0.05,
            compare_steps: vec![1, 2, 4, 8, 16],
            mc_samples: 20_000,
            se_multiple: 4.0,
            seed: 9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkDecayRow {
    pub q: u64,
    pub start: Vec<String>,
    pub plateau: f64,
    pub uniform_prediction: f64,
    pub comparisons: usize,
    pub disagreements: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkDecaySummary {
    pub rows: Vec<WalkDecayRow>,
    pub monotone: bool,
    pub trivial_plateau_exact: bool,
    pub comparisons: usize,
    pub disagreements: usize,
}

pub fn walk_decay(cfg: &WalkDecayConfig) -> Result<ExperimentReport> {
    let s = SemigroupPresentation::sl2_elementary();
    let mu = WalkMeasure::uniform(s.generators().to_vec())?;
    let a = [1i64, 0];
    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    for (i, &q) in cfg.moduli.iter().enumerate() {
        let mut rng = trial_rng(cfg.seed, q);
        // a starting point of exact order q
        let v: Vec<i64> = loop {
            let v: Vec<i64> = (0..2).map(|_| rng.gen_range(0..q as i64)).collect();
            if v.iter().fold(q as i64, |g, &x| num_integer::gcd(g, x)) == 1 {
                break v;
            }
        };
        let x = TorusPoint::from_fractions(&v.iter().map(|&c| (c, q as i64)).collect::<Vec<_>>())?;
        let mc = MonteCarloConfig {
            samples: cfg.mc_samples,
            seed: cfg.seed.wrapping_add(i as u64),
        };
        let profile = decay_profile(&mu, &x, &a, cfg.n_max, WalkMethod::ExactTree, mc)?;
        let mut disagreements = 0;
        for &n in &cfg.compare_steps {
            let exact = fourier_coeff(&mu, &x, &a, n, WalkMethod::ExactTree, mc)?;
            let est = fourier_coeff(&mu, &x, &a, n, WalkMethod::MonteCarlo, mc)?;
            let diff = (exact.value() - est.value()).norm();
            if diff > cfg.se_multiple * est.se + 1e-12 {
                disagreements += 1;
            }
            csv_rows.push(vec![
                q.to_string(),
                n.to_string(),
                fmt(exact.modulus()),
                fmt(est.modulus()),
                fmt(est.se),
            ]);
        }
        rows.push(WalkDecayRow {
            q,
            start: v.iter().map(|c| format!("{c}/{q}")).collect(),
            plateau: profile.plateau(),
            uniform_prediction: uniform_plateau(q, 2),
            comparisons: cfg.compare_steps.len(),
            disagreements,
        });
    }
    let mut sorted = rows.clone();
    sorted.sort_by_key(|r| r.q);
    let monotone = sorted
        .windows(2)
        .all(|w| w[1].plateau <= w[0].plateau + cfg.slack);
    let trivial_plateau_exact = sorted.iter().filter(|r| r.q == 1).all(|r| r.plateau == 1.0);
    let summary = WalkDecaySummary {
        monotone,
        trivial_plateau_exact,
        comparisons: rows.iter().map(|r| r.comparisons).sum(),
        disagreements: rows.iter().map(|r| r.disagreements).sum(),
        rows,
    };
    let passed = summary.monotone && summary.trivial_plateau_exact && summary.disagreements == 0;
    let csv = csv_table(
        &["q", "n", "exact_modulus", "mc_modulus", "mc_se"],
        &csv_rows,
    );
    Ok(report("walk-decay", cfg.seed, cfg, &summary, passed, csv))
}

// ---------------------------------------------------------------- h_q scaling

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HqScalingConfig {
    pub ks: Vec<usize>,
    pub dims: Vec<usize>,
    pub r: f64,
    pub repeats: usize,
    pub pool_factor: usize,
    pub slope_slack: f64,
    pub seed: u64,
}

impl Default for HqScalingConfig {
    fn default() -> Self {
        HqScalingConfig {
            ks: vec![32, 64, 128, 256],
            dims: vec![1, 2],
            r: 1.0,
            repeats: 4,
            pool_factor: 2,
            slope_slack: 0.3,
            seed: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HqFamilyRow {
    pub family: String,
    pub dim: usize,
    pub ks: Vec<usize>,
    pub sums: Vec<f64>,
    pub slope: f64,
    pub bound: f64,
    /// Part of the pass/fail decision.
    pub asserted: bool,
    pub within_bound: bool,
}

/// Families: full `(1/q₀)`-grids and random subsets of the lowest-height
/// rational points (asserted), plus uniform sets with large random
/// denominators (reported only).
pub fn hq_scaling(cfg: &HqScalingConfig) -> Result<ExperimentReport> {
    let mut rows = Vec::new();
    for &d in &cfg.dims {
        let bound = 2.0 - cfg.r / (d as f64 + 1.0) + cfg.slope_slack;
        let mut grid_k = Vec::new();
        let mut grid_s = Vec::new();
        for &k in &cfg.ks {
            let y = full_grid(d, grid_side_for(d, k))?;
            grid_k.push(y.len());
            grid_s.push(hq_sum_scaling(&y, cfg.r)?.sum);
        }
        let mut low_s = Vec::new();
        let mut uni_s = Vec::new();
        for (i, &k) in cfg.ks.iter().enumerate() {
            let mut low = 0.0;
            let mut uni = 0.0;
            for rep in 0..cfg.repeats {
                let mut rng = trial_rng(cfg.seed, (d * 1000 + i * 100 + rep) as u64);
                low += hq_sum_scaling(
                    &random_low_height_set(&mut rng, d, k, cfg.pool_factor)?,
                    cfg.r,
                )?
                .sum;
                let spec = RationalSetSpec {
                    dim: d,
                    k,
                    width: 1.0,
                    denominators: Denominators::Uniform(2, 1_000_000),
                    distinct_coordinates: false,
                };
                uni += hq_sum_scaling(&random_rational_set(&mut rng, &spec)?, cfg.r)?.sum;
            }
            low_s.push(low / cfg.repeats as f64);
            uni_s.push(uni / cfg.repeats as f64);
        }
        for (family, ks, sums, asserted) in [
            ("grid", grid_k.clone(), grid_s, true),
            ("low-height", cfg.ks.clone(), low_s, true),
            ("uniform-large-denominator", cfg.ks.clone(), uni_s, false),
        ] {
            let xs: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
            let slope = loglog_slope(&xs, &sums);
            rows.push(HqFamilyRow {
                family: family.into(),
                dim: d,
                ks,
                sums,
                slope,
                bound,
                asserted,
                within_bound: slope <= bound,
            });
        }
    }
    let passed = rows.iter().filter(|r| r.asserted).all(|r| r.within_bound);
    let csv = csv_table(
        &["family", "dim", "k", "sum", "slope", "bound"],
        &rows
            .iter()
            .flat_map(|r| {
                r.ks.iter().zip(&r.sums).map(move |(k, s)| {
                    vec![
                        r.family.clone(),
                        r.dim.to_string(),
                        k.to_string(),
                        fmt(*s),
                        fmt(r.slope),
                        fmt(r.bound),
                    ]
                })
            })
            .collect::<Vec<_>>(),
    );
    Ok(report(
        "hq-scaling",
        cfg.seed,
        cfg,
        &json!({ "families": rows }),
        passed,
        csv,
    ))
}

/// Runs a named experiment with a JSON configuration (missing fields take
/// their defaults); `seed` overrides the configured seed when given.
pub fn run_experiment(name: &str, config: &Value, seed: Option<u64>) -> Result<ExperimentReport> {
    fn parse<C: for<'de> Deserialize<'de> + Default>(v: &Value) -> Result<C> {
        if v.is_null() {
            return Ok(C::default());
        }
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))
    }
    let mut config = config.clone();
    if let (Some(s), Some(obj)) = (seed, config.as_object_mut()) {
        obj.insert("seed".into(), json!(s));
    } else if let Some(s) = seed {
        config = json!({ "seed": s });
    }
    match name {
        "glasner1d" => glasner1d(&parse(&config)?),
        "prop16" => poly_pair(&parse(&config)?),
        "thmC" => semigroup_pipeline(&parse(&config)?),
        "walk-decay" => walk_decay(&parse(&config)?),
        "bmv-fuzz" => lower_bound_fuzz(&parse(&config)?),
        "hq-scaling" => hq_scaling(&parse(&config)?),
        other => Err(Error::InvalidArgument(format!(
            "unknown experiment {other:?}; expected one of {EXPERIMENTS:?}"
        ))),
    }
}

/// A vector whose entries are all nonzero.
pub fn all_nonzero(v: &[BigRational]) -> bool {
    v.iter().all(|x| !x.is_zero())
}

/// `|x| ≤ 1/2` representative of a rational mod 1.
pub fn centered(x: &BigRational) -> BigRational {
    let f = x - x.floor();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if f > half {
        f - BigRational::one()
    } else if f.is_negative() {
        f + BigRational::one()
    } else {
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        let b = lower_bound_fuzz(&LowerBoundFuzzConfig {
            trials: 20,
            k_max: 20,
            ..Default::default()
        })
        .unwrap();
        assert!(b.passed, "{}", b.summary);
        let l = certificate_suite(&CertificateConfig {
            instances: 20,
            ..Default::default()
        })
        .unwrap();
        assert!(l.passed, "{}", l.summary);
        let s = snf_suite(&SnfSuiteConfig {
            matrices: 20,
            gcd_samples: 10,
            ..Default::default()
        })
        .unwrap();
        assert!(s.passed, "{}", s.summary);
        let g = gauss_suite(&GaussSuiteConfig {
            q_max: 50,
            per_modulus: 3,
            ..Default::default()
        })
        .unwrap();
        assert!(g.passed, "{}", g.summary);
    }

    #[test]
    fn deterministic_reports() {
        let cfg = LowerBoundFuzzConfig {
            trials: 8,
            k_max: 10,
            ..Default::default()
        };
        assert_eq!(
            lower_bound_fuzz(&cfg).unwrap(),
            lower_bound_fuzz(&cfg).unwrap()
        );
    }

    #[test]
    fn unknown_experiment() {
        assert!(run_experiment("nope", &Value::Null, None).is_err());
        let r = run_experiment("bmv-fuzz", &json!({"trials": 3, "k_max": 5}), Some(11)).unwrap();
        assert_eq!(r.summary["seed"], 11);
        assert_eq!(r.summary["config"]["trials"], 3);
    }

    #[test]
    fn centered_representative() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(centered(&q(3, 4)), q(-1, 4));
        assert_eq!(centered(&q(-1, 3)), q(-1, 3));
        assert!(all_nonzero(&[q(1, 2)]) && !all_nonzero(&[q(0, 1)]));
    }
}
