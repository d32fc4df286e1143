//! `glasner-lab`: density checks, dilation searches, diagnostics and seeded
//! batch experiments over `glasner-core`.
//!
//! Exit codes: 0 DENSE / found / target met, 1 NOT_DENSE / not found /
//! target missed, 2 UNDECIDED, 3 error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use glasner_core::cayley::SemigroupPresentation;
use glasner_core::experiments::{run_experiment, EXPERIMENTS};
use glasner_core::expsum::{
    box_terms, hq_sum_scaling, hua_decay_check, torsion_histogram, FreqBox,
};
use glasner_core::intlinalg::{gcd_bound_factorize, smith_normal_form};
use glasner_core::io::{
    csv_table, decay_csv, matrix_from_json, matrix_to_json, measure_from_json, outcome_to_json,
    point_set_from_json, poly_matrix_from_json, presentation_from_json, verdict_to_json,
};
use glasner_core::sampling::is_prime;
use glasner_core::search::{
    find_group_dilation, find_poly_dilation, find_product_dilation, find_scalar_dilation,
    FactorEngine, SearchBudget, SearchOutcome,
};
use glasner_core::walk::{decay_profile, MonteCarloConfig, WalkMeasure, WalkMethod};
use glasner_core::{is_eps_dense, DensityStatus, TorusPoint, VERSION};

const EXIT_ERROR: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "glasner-lab",
    version,
    about = "Dilation density laboratory for finite subsets of the torus"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Serialize)]
struct Common {
    /// Density radius (sup-norm on the torus)
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Candidate cap: n_max for scalar/polynomial searches, elements for
    /// group searches, samples for Monte Carlo walks
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Input JSON (point set, matrix or walk measure, per subcommand)
    #[arg(long, global = true)]
    #[serde(skip)]
    input: Option<PathBuf>,
    /// Directory receiving report files
    #[arg(long, global = true)]
    #[serde(skip)]
    out: Option<PathBuf>,
    /// Worker cap; results do not depend on it
    #[arg(long, global = true, env = "GLASNER_LAB_THREADS")]
    #[serde(skip)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 8)]
    max_refinements: u32,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Certify whether the input set is ε-dense
    CheckDensity,
    /// Search n = 1..budget for nY ε-dense
    FindDilate,
    /// Search n = 1..budget for A(n)Y ε-dense, or (n, m) pairs with --split
    FindPoly(FindPoly),
    /// Breadth-first search of a semigroup Cayley ball for gY ε-dense
    FindGroup(FindGroup),
    /// Torsion histogram, exponential-sum terms and complete-sum tables as CSV
    Diagnose(Diagnose),
    /// Smith normal form and gcd-bound factorization of an integer matrix
    Snf,
    /// Fourier decay profile of a random walk on the torus
    Walk(Walk),
    /// Run a named seeded experiment
    Experiment(Experiment),
}

#[derive(Args, Debug, Serialize)]
struct FindPoly {
    /// Polynomial matrix JSON
    #[arg(long)]
    #[serde(skip)]
    poly: PathBuf,
    /// Split 𝕋^d = 𝕋^s × 𝕋^{d−s} and search pairs (n, m)
    #[arg(long, requires = "poly2")]
    split: Option<usize>,
    /// Polynomial matrix for the second factor
    #[arg(long, requires = "split")]
    #[serde(skip)]
    poly2: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct FindGroup {
    /// Presentation JSON; defaults to the SL2 elementary generators
    #[arg(long)]
    #[serde(skip)]
    presentation: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    radius: usize,
}

#[derive(Args, Debug, Serialize)]
struct Diagnose {
    /// Exponent r in the torsion-weighted sum Σ h_q q^{−r}
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Also tabulate max |complete sum| over primes for this degree
    #[arg(long)]
    sum_degree: Option<u32>,
    #[arg(long, default_value_t = 200)]
    sum_q_max: u64,
    #[arg(long, default_value_t = 20)]
    sum_trials: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MethodArg {
    ExactTree,
    MonteCarlo,
}

#[derive(Args, Debug, Serialize)]
struct Walk {
    /// Starting point, comma-separated fractions such as 1/7,3/7
    #[arg(long)]
    x: String,
    /// Integer frequency vector, comma-separated
    #[arg(long, default_value = "1,0")]
    freq: String,
    #[arg(long, default_value_t = 60)]
    n_max: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::ExactTree)]
    method: MethodArg,
}

#[derive(Args, Debug, Serialize)]
struct Experiment {
    /// One of glasner1d, prop16, thmC, walk-decay, bmv-fuzz, hq-scaling
    name: String,
    /// JSON configuration; omitted fields take their defaults
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn input_json(common: &Common) -> Result<Value> {
    read_json(
        common
            .input
            .as_deref()
            .ok_or_else(|| anyhow!("--input is required"))?,
    )
}

fn need_eps(common: &Common) -> Result<f64> {
    common.eps.ok_or_else(|| anyhow!("--eps is required"))
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the effective configuration together with every input file.
fn config_hash(config: &Value, files: &[&Path]) -> Result<String> {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(config)?);
    for f in files {
        h.update(fs::read(f).with_context(|| format!("reading {}", f.display()))?);
    }
    Ok(hex::encode(h.finalize()))
}

fn meta(cli: &Cli, files: &[&Path]) -> Result<Value> {
    let config = json!({ "common": cli.common, "command": cli.command });
    Ok(json!({
        "version": VERSION,
        "seed": cli.common.seed,
        "config": config,
        "config_hash": config_hash(&config, files)?,
    }))
}

fn emit(cli: &Cli, stem: &str, report: &Value, extra: &[(&str, String)]) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = writeln!(stdout, "{}", serde_json::to_string_pretty(report)?) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            return Err(e.into());
        }
    }
    if let Some(dir) = &cli.common.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        fs::write(
            dir.join(format!("{stem}.json")),
            serde_json::to_string_pretty(report)? + "\n",
        )?;
        for (name, body) in extra {
            fs::write(dir.join(name), body)?;
        }
    }
    Ok(())
}

fn search_budget(common: &Common) -> SearchBudget {
    let mut b = SearchBudget {
        max_refinements: common.max_refinements,
        ..SearchBudget::default()
    };
    if let Some(n) = common.budget {
        b.n_max = n;
        b.element_budget = n as usize;
    }
    b
}

fn outcome_report(
    cli: &Cli,
    o: &SearchOutcome,
    budget: &SearchBudget,
    files: &[&Path],
) -> Result<(Value, u8)> {
    let mut v = outcome_to_json(o, cli.common.seed);
    v["budget"] = serde_json::to_value(budget)?;
    v["meta"] = meta(cli, files)?;
    Ok((v, if o.found { 0 } else { 1 }))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| anyhow!("bad {what} entry {t:?}"))
        })
        .collect()
}

fn parse_point(s: &str) -> Result<TorusPoint> {
    let coords = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            let (n, d) = t.split_once('/').unwrap_or((t, "1"));
            Ok((n.trim().parse::<i64>()?, d.trim().parse::<i64>()?))
        })
        .collect::<Result<Vec<_>>>()
        .context("point must look like 1/7,3/7")?;
    Ok(TorusPoint::from_fractions(&coords)?)
}

fn run(cli: &Cli) -> Result<u8> {
    let common = &cli.common;
    let input = common.input.as_deref();
    match &cli.command {
        Command::CheckDensity => {
            let y = point_set_from_json(&input_json(common)?)?;
            let v = is_eps_dense(&y, need_eps(common)?, common.max_refinements)?;
            let mut out = verdict_to_json(&v);
            out["eps"] = json!(common.eps);
            out["k"] = json!(y.len());
            out["meta"] = meta(cli, &input.into_iter().collect::<Vec<_>>())?;
            emit(cli, "check-density", &out, &[])?;
            Ok(match v.status {
                DensityStatus::Dense => 0,
                DensityStatus::NotDense => 1,
                DensityStatus::Undecided => 2,
            })
        }
        Command::FindDilate => {
            let y = point_set_from_json(&input_json(common)?)?;
            let budget = search_budget(common);
            let o = find_scalar_dilation(&y, need_eps(common)?, &budget)?;
            let (v, code) =
                outcome_report(cli, &o, &budget, &input.into_iter().collect::<Vec<_>>())?;
            emit(cli, "find-dilate", &v, &[])?;
            Ok(code)
        }
        Command::FindPoly(args) => {
            let y = point_set_from_json(&input_json(common)?)?;
            let a = poly_matrix_from_json(&read_json(&args.poly)?)?;
            let budget = search_budget(common);
            let eps = need_eps(common)?;
            let mut files: Vec<&Path> = input.into_iter().collect();
            files.push(&args.poly);
            let o = match (args.split, &args.poly2) {
                (Some(d1), Some(p2)) => {
                    files.push(p2);
                    let b = poly_matrix_from_json(&read_json(p2)?)?;
                    let engines = (FactorEngine::Poly(a), FactorEngine::Poly(b));
                    find_product_dilation(&y, d1, (&engines.0, &engines.1), eps, &budget)?
                }
                _ => find_poly_dilation(&y, &a, eps, &budget)?,
            };
            let (v, code) = outcome_report(cli, &o, &budget, &files)?;
            emit(cli, "find-poly", &v, &[])?;
            Ok(code)
        }
        Command::FindGroup(args) => {
            let y = point_set_from_json(&input_json(common)?)?;
            let s = match &args.presentation {
                Some(p) => presentation_from_json(&read_json(p)?)?,
                None => SemigroupPresentation::sl2_elementary(),
            };
            let budget = SearchBudget {
                ball_radius: args.radius,
                ..search_budget(common)
            };
            let o = find_group_dilation(&y, &s, need_eps(common)?, &budget)?;
            let mut files: Vec<&Path> = input.into_iter().collect();
            files.extend(args.presentation.as_deref());
            let (v, code) = outcome_report(cli, &o, &budget, &files)?;
            emit(cli, "find-group", &v, &[])?;
            Ok(code)
        }
        Command::Diagnose(args) => diagnose(cli, args),
        Command::Snf => {
            let t0 = matrix_from_json(&input_json(common)?)?;
            let snf = smith_normal_form(&t0);
            let mut out = json!({
                "schema": "glasner-lab/snf/v1",
                "l": matrix_to_json(&snf.l),
                "d": matrix_to_json(&snf.d),
                "r_prime": matrix_to_json(&snf.rp),
                "divisors": snf.divisors.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "rank": snf.k,
                "reconstructs": snf.reconstructs(&t0),
            });
            if !t0.is_zero() {
                let f = gcd_bound_factorize(&t0)?;
                out["t"] = matrix_to_json(&f.t);
                out["r"] = matrix_to_json(&f.r);
                out["q_bound"] = json!(f.q_bound.to_string());
            }
            out["meta"] = meta(cli, &input.into_iter().collect::<Vec<_>>())?;
            emit(cli, "snf", &out, &[])?;
            Ok(0)
        }
        Command::Walk(args) => walk(cli, args),
        Command::Experiment(args) => experiment(cli, args),
    }
}

fn diagnose(cli: &Cli, args: &Diagnose) -> Result<u8> {
    let common = &cli.common;
    let y = point_set_from_json(&input_json(common)?)?;
    let hist = torsion_histogram(&y)?;
    let hist_csv = csv_table(
        &["q", "h_q"],
        &hist
            .counts
            .iter()
            .map(|(q, h)| vec![q.to_string(), h.to_string()])
            .collect::<Vec<_>>(),
    );
    let hq = hq_sum_scaling(&y, args.r)?;
    let mut out = json!({
        "schema": "glasner-lab/diagnose/v1",
        "k": y.len(),
        "pairs": hist.total(),
        "hq_sum": hq.sum,
        "r": args.r,
    });
    let mut files = vec![("torsion.csv", hist_csv)];
    if let Some(eps) = common.eps {
        let bx = FreqBox::for_eps(y.dim(), eps)?;
        let terms = box_terms(y.points(), bx)?;
        let mut partial = 0.0;
        let rows = terms
            .iter()
            .map(|(m, s)| {
                partial += s.norm();
                vec![
                    m.iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(" "),
                    format!("{partial:.12e}"),
                ]
            })
            .collect::<Vec<_>>();
        out["box_radius"] = json!(bx.radius);
        out["box_abs_sum"] = json!(partial);
        files.push(("box_terms.csv", csv_table(&["m", "partial_sum"], &rows)));
    }
    if let Some(deg) = args.sum_degree {
        let moduli: Vec<u64> = (3..=args.sum_q_max).filter(|&q| is_prime(q)).collect();
        let table = hua_decay_check(deg, &moduli, args.sum_trials, common.seed.unwrap_or(0))?;
        out["complete_sums"] =
            json!({ "degree": deg, "slope": table.slope, "bounded": table.bounded });
        files.push((
            "complete_sums.csv",
            csv_table(
                &["q", "max_abs"],
                &table
                    .rows
                    .iter()
                    .map(|r| vec![r.modulus.to_string(), format!("{:.12e}", r.max_abs)])
                    .collect::<Vec<_>>(),
            ),
        ));
    }
    out["meta"] = meta(
        cli,
        &common.input.as_deref().into_iter().collect::<Vec<_>>(),
    )?;
    if common.out.is_none() {
        for (name, body) in &files {
            eprintln!("# {name}\n{body}");
        }
    }
    emit(cli, "diagnose", &out, &files)?;
    Ok(0)
}

fn walk(cli: &Cli, args: &Walk) -> Result<u8> {
    let common = &cli.common;
    let mu = match common.input.as_deref() {
        Some(p) => measure_from_json(&read_json(p)?)?,
        None => WalkMeasure::uniform(
            SemigroupPresentation::sl2_elementary()
                .generators()
                .to_vec(),
        )?,
    };
    let x = parse_point(&args.x)?;
    let a: Vec<i64> = parse_list(&args.freq, "frequency")?;
    let method = match args.method {
        MethodArg::ExactTree => WalkMethod::ExactTree,
        MethodArg::MonteCarlo => WalkMethod::MonteCarlo,
    };
    let mc = MonteCarloConfig {
        samples: common.budget.unwrap_or(10_000) as usize,
        seed: common.seed.unwrap_or(0),
    };
    if matches!(method, WalkMethod::MonteCarlo) && common.seed.is_none() {
        bail!("--seed is required for Monte Carlo walks");
    }
    let p = decay_profile(&mu, &x, &a, args.n_max, method, mc)?;
    let csv = decay_csv(&p);
    let out = json!({
        "schema": "glasner-lab/walk/v1",
        "q": p.q,
        "method": p.method,
        "plateau": p.plateau(),
        "rows": p.rows.len(),
        "samples": matches!(method, WalkMethod::MonteCarlo).then_some(mc.samples),
        "meta": meta(cli, &common.input.as_deref().into_iter().collect::<Vec<_>>())?,
    });
    if common.out.is_none() {
        eprint!("{csv}");
    }
    emit(cli, "walk", &out, &[("decay.csv", csv)])?;
    Ok(0)
}

fn experiment(cli: &Cli, args: &Experiment) -> Result<u8> {
    if !EXPERIMENTS.contains(&args.name.as_str()) {
        bail!(
            "unknown experiment {:?}; expected one of {}",
            args.name,
            EXPERIMENTS.join(", ")
        );
    }
    let config = match &args.config {
        Some(p) => read_json(p)?,
        None => json!({}),
    };
    if cli.common.seed.is_none() && config.get("seed").is_none() {
        bail!("experiments are randomized: pass --seed or set \"seed\" in the config");
    }
    let report = run_experiment(&args.name, &config, cli.common.seed)?;
    let mut summary = report.summary.clone();
    summary["config_hash"] = json!(config_hash(&summary["config"], &[])?);
    summary["csv_sha256"] = json!(sha256_hex(report.csv.as_bytes()));
    let csv_name = format!("{}.csv", args.name);
    emit(
        cli,
        &args.name,
        &summary,
        &[(&csv_name, report.csv.clone())],
    )?;
    Ok(if report.passed { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    if let Some(n) = cli.common.threads {
        if n == 0
            || rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .is_err()
        {
            eprintln!("error: invalid thread count {n}");
            return ExitCode::from(EXIT_ERROR);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_points_and_lists() {
        assert_eq!(
            parse_point("1/7, 3/7").unwrap(),
            TorusPoint::from_fractions(&[(1, 7), (3, 7)]).unwrap()
        );
        assert_eq!(
            parse_point("2").unwrap(),
            TorusPoint::from_fractions(&[(2, 1)]).unwrap()
        );
        assert!(parse_point("1/x").is_err());
        assert_eq!(parse_list::<i64>("1,-2", "f").unwrap(), vec![1, -2]);
    }

    #[test]
    fn config_hash_tracks_inputs() {
        let a = config_hash(&json!({"x": 1}), &[]).unwrap();
        assert_eq!(a, config_hash(&json!({"x": 1}), &[]).unwrap());
        assert_ne!(a, config_hash(&json!({"x": 2}), &[]).unwrap());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
