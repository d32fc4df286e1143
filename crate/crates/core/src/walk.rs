//! Random linear walks on `𝕋^d`: Fourier coefficients of `μ^{*n} ∗ δ_x`
//! by exact word-tree summation or seeded Monte Carlo, and decay profiles
//! over `n` for rational starting points `x = v/q`.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expsum::e;
use crate::matrix::IntMatrix;
use crate::par;
use crate::torus::{frac_f64, TorusPoint};

/// Cap on distinct states carried by the exact word tree.
pub const EXACT_STATE_BUDGET: usize = 1_000_000;
const PATHS_PER_CHUNK: usize = 1024;

#[derive(Clone, Debug, PartialEq)]
pub struct WalkMeasure {
    support: Vec<IntMatrix>,
    weights: Vec<BigRational>,
    /// Common denominator `D` of the weights and numerators `c_i = D·w_i`.
    den: BigUint,
    nums: Vec<BigUint>,
}

impl WalkMeasure {
    pub fn new(support: Vec<IntMatrix>, weights: Vec<BigRational>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidArgument("empty support".into()));
        }
        if support.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: support.len(),
                got: weights.len(),
            });
        }
        let d = support[0].rows();
        if support.iter().any(|g| g.rows() != d || g.cols() != d) {
            return Err(Error::InvalidArgument(
                "support matrices must be square of one size".into(),
            ));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidArgument("weights must be positive".into()));
        }
        if weights.iter().fold(BigRational::zero(), |a, w| a + w) != BigRational::one() {
            return Err(Error::InvalidArgument("weights must sum to 1".into()));
        }
        let den = weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let nums = weights
            .iter()
            .map(|w| {
                (w.numer() * (&den / w.denom()))
                    .to_biguint()
                    .expect("positive")
            })
            .collect();
        Ok(WalkMeasure {
            support,
            weights,
            den: den.to_biguint().expect("positive"),
            nums,
        })
    }

    pub fn uniform(support: Vec<IntMatrix>) -> Result<Self> {
        let n = support.len().max(1);
        let w = BigRational::new(BigInt::one(), BigInt::from(n));
        Self::new(support, vec![w; n])
    }

    pub fn dim(&self) -> usize {
        self.support[0].rows()
    }

    pub fn support(&self) -> &[IntMatrix] {
        &self.support
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WalkMethod {
    ExactTree,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourierEstimate {
    pub n: usize,
    pub a: Vec<i64>,
    pub re: f64,
    pub im: f64,
    pub method: WalkMethod,
    /// Standard error of the Monte Carlo mean; zero for the exact tree.
    pub se: f64,
    pub samples: usize,
    pub seed: u64,
}

impl FourierEstimate {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn modulus(&self) -> f64 {
        self.value().norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonteCarloConfig {
    pub samples: usize,
    pub seed: u64,
}

/// Integer state of an exact starting point: numerators mod `q`.
struct ModularWalk {
    q: u64,
    gens: Vec<Vec<Vec<u64>>>,
    start: Vec<u64>,
    a: Vec<u64>,
}

impl ModularWalk {
    fn new(mu: &WalkMeasure, x: &TorusPoint, a: &[i64]) -> Result<Self> {
        let (v, q) = x.common_denominator_form().ok_or(Error::FloatNotAllowed)?;
        let q = q
            .to_u64()
            .ok_or_else(|| Error::InvalidArgument("denominator exceeds 64 bits".into()))?;
        let qb = BigInt::from(q);
        let red = |z: &BigInt| z.mod_floor(&qb).to_u64().expect("reduced");
        let gens = mu
            .support
            .iter()
            .map(|g| {
                g.to_rows()
                    .iter()
                    .map(|r| r.iter().map(red).collect())
                    .collect()
            })
            .collect();
        Ok(ModularWalk {
            q,
            gens,
            start: v.iter().map(red).collect(),
            a: a.iter().map(|&c| red(&BigInt::from(c))).collect(),
        })
    }

    fn step(&self, g: usize, v: &[u64]) -> Vec<u64> {
        self.gens[g]
            .iter()
            .map(|row| {
                (row.iter()
                    .zip(v)
                    .map(|(&m, &x)| m as u128 * x as u128 % self.q as u128)
                    .sum::<u128>()
                    % self.q as u128) as u64
            })
            .collect()
    }

    fn phase(&self, v: &[u64]) -> Complex64 {
        let q = self.q as u128;
        let k = self
            .a
            .iter()
            .zip(v)
            .map(|(&c, &x)| c as u128 * x as u128 % q)
            .sum::<u128>()
            % q;
        e(k as f64 / self.q as f64)
    }
}

fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    BigRational::new_raw(BigInt::from(num.clone()), BigInt::from(den.clone()))
        .to_f64()
        .unwrap_or(f64::NAN)
}

fn validate(mu: &WalkMeasure, x: &TorusPoint, a: &[i64]) -> Result<()> {
    if x.dim() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            got: x.dim(),
        });
    }
    if a.len() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            got: a.len(),
        });
    }
    if a.iter().all(|&c| c == 0) {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// Distribution of `μ^{*n} ∗ δ_x` as weight numerators over `D^n`, with
/// words landing on the same point merged.
pub struct ExactTree<'a> {
    mu: &'a WalkMeasure,
    walk: ModularWalk,
    states: HashMap<Vec<u64>, BigUint>,
    total_den: BigUint,
    n: usize,
    budget: usize,
}

impl<'a> ExactTree<'a> {
    pub fn new(mu: &'a WalkMeasure, x: &TorusPoint, a: &[i64], budget: usize) -> Result<Self> {
        validate(mu, x, a)?;
        let walk = ModularWalk::new(mu, x, a)?;
        let states = HashMap::from([(walk.start.clone(), BigUint::one())]);
        Ok(ExactTree {
            mu,
            walk,
            states,
            total_den: BigUint::one(),
            n: 0,
            budget,
        })
    }

    pub fn steps(&self) -> usize {
        self.n
    }

    pub fn modulus_q(&self) -> u64 {
        self.walk.q
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn advance(&mut self) -> Result<()> {
        let mut next: HashMap<Vec<u64>, BigUint> = HashMap::with_capacity(self.states.len());
        for (v, w) in &self.states {
            for (g, c) in self.mu.nums.iter().enumerate() {
                *next.entry(self.walk.step(g, v)).or_default() += w * c;
            }
            if next.len() > self.budget {
                return Err(Error::BudgetExceeded {
                    what: "exact walk states",
                    limit: self.budget,
                });
            }
        }
        self.states = next;
        self.total_den *= &self.mu.den;
        self.n += 1;
        Ok(())
    }

    /// Total mass equals 1 exactly.
    pub fn mass_is_one(&self) -> bool {
        self.states.values().fold(BigUint::zero(), |a, w| a + w) == self.total_den
    }

    /// Every state is a point of `(1/q)ℤ^d/ℤ^d`.
    pub fn states_in_lattice(&self) -> bool {
        self.states
            .keys()
            .all(|v| v.iter().all(|&c| c < self.walk.q))
    }

    /// Sum in a fixed order so the result does not depend on hash iteration.
    pub fn value(&self) -> Complex64 {
        let mut terms: Vec<(&Vec<u64>, &BigUint)> = self.states.iter().collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(b.0));
        terms
            .into_iter()
            .map(|(v, w)| self.walk.phase(v) * ratio_f64(w, &self.total_den))
            .sum()
    }
}

fn pick(mu: &WalkMeasure, small: Option<(u64, &[u64])>, rng: &mut ChaCha8Rng) -> usize {
    match small {
        Some((den, nums)) => {
            let mut r = rng.gen_range(0..den);
            for (i, &c) in nums.iter().enumerate() {
                if r < c {
                    return i;
                }
                r -= c;
            }
            nums.len() - 1
        }
        None => {
            let mut r: f64 = rng.gen();
            for (i, w) in mu.weights.iter().enumerate() {
                let p = w.to_f64().unwrap_or(0.0);
                if r < p {
                    return i;
                }
                r -= p;
            }
            mu.weights.len() - 1
        }
    }
}

/// Runs `samples` paths of length `n_max`; returns per-`n` sums of the phase
/// and of its squared modulus. Path `i` draws from stream `i` of the seed.
fn monte_carlo_sums(
    mu: &WalkMeasure,
    x: &TorusPoint,
    a: &[i64],
    n_max: usize,
    cfg: MonteCarloConfig,
) -> Result<Vec<(Complex64, f64)>> {
    let modular = match x {
        TorusPoint::Exact(_) => Some(ModularWalk::new(mu, x, a)?),
        TorusPoint::Float(_) => None,
    };
    let small_nums: Option<Vec<u64>> = mu.nums.iter().map(ToPrimitive::to_u64).collect();
    let small = mu.den.to_u64().zip(small_nums);
    let float_gens: Vec<Vec<Vec<f64>>> = mu
        .support
        .iter()
        .map(|g| {
            g.to_rows()
                .iter()
                .map(|r| r.iter().map(|z| z.to_f64().unwrap_or(f64::NAN)).collect())
                .collect()
        })
        .collect();
    let x0 = x.to_f64();
    let chunks = cfg.samples.div_ceil(PATHS_PER_CHUNK);
    let partial = par::map_range(chunks, |c| {
        let mut acc = vec![(Complex64::zero(), 0.0); n_max + 1];
        let lo = c * PATHS_PER_CHUNK;
        let hi = (lo + PATHS_PER_CHUNK).min(cfg.samples);
        for path in lo..hi {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(path as u64);
            let small = small.as_ref().map(|(d, n)| (*d, n.as_slice()));
            match &modular {
                Some(w) => {
                    let mut v = w.start.clone();
                    for (n, slot) in acc.iter_mut().enumerate() {
                        if n > 0 {
                            v = w.step(pick(mu, small, &mut rng), &v);
                        }
                        let z = w.phase(&v);
                        slot.0 += z;
                        slot.1 += z.norm_sqr();
                    }
                }
                None => {
                    let mut v = x0.clone();
                    for (n, slot) in acc.iter_mut().enumerate() {
                        if n > 0 {
                            let g = &float_gens[pick(mu, small, &mut rng)];
                            v = g
                                .iter()
                                .map(|row| frac_f64(row.iter().zip(&v).map(|(m, t)| m * t).sum()))
                                .collect();
                        }
                        let t: f64 = a.iter().zip(&v).map(|(&c, t)| c as f64 * t).sum();
                        let z = e(t);
                        slot.0 += z;
                        slot.1 += z.norm_sqr();
                    }
                }
            }
        }
        acc
    });
    let mut total = vec![(Complex64::zero(), 0.0); n_max + 1];
    for chunk in partial {
        for (t, p) in total.iter_mut().zip(chunk) {
            t.0 += p.0;
            t.1 += p.1;
        }
    }
    Ok(total)
}

fn mc_estimate(sum: Complex64, sq: f64, s: usize) -> (Complex64, f64) {
    let sf = s as f64;
    let mean = sum / sf;
    let var = if s > 1 {
        ((sq - sf * mean.norm_sqr()) / (sf - 1.0)).max(0.0)
    } else {
        0.0
    };
    (mean, (var / sf).sqrt())
}

/// `Σ_w weight(w)·e(a·(w x))` over words of length `n`.
pub fn fourier_coeff(
    mu: &WalkMeasure,
    x: &TorusPoint,
    a: &[i64],
    n: usize,
    method: WalkMethod,
    mc: MonteCarloConfig,
) -> Result<FourierEstimate> {
    validate(mu, x, a)?;
    match method {
        WalkMethod::ExactTree => {
            let mut tree = ExactTree::new(mu, x, a, EXACT_STATE_BUDGET)?;
            for _ in 0..n {
                tree.advance()?;
            }
            let z = tree.value();
            Ok(FourierEstimate {
                n,
                a: a.to_vec(),
                re: z.re,
                im: z.im,
                method,
                se: 0.0,
                samples: 0,
                seed: mc.seed,
            })
        }
        WalkMethod::MonteCarlo => {
            if mc.samples == 0 {
                return Err(Error::InvalidArgument(
                    "Monte Carlo needs at least one sample".into(),
                ));
            }
            let sums = monte_carlo_sums(mu, x, a, n, mc)?;
            let (z, se) = mc_estimate(sums[n].0, sums[n].1, mc.samples);
            Ok(FourierEstimate {
                n,
                a: a.to_vec(),
                re: z.re,
                im: z.im,
                method,
                se,
                samples: mc.samples,
                seed: mc.seed,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayRow {
    pub n: usize,
    pub modulus: f64,
    pub se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayProfile {
    pub q: u64,
    pub method: WalkMethod,
    pub rows: Vec<DecayRow>,
    pub seed: u64,
}

impl DecayProfile {
    /// Mean modulus over the last quarter of the profile.
    pub fn plateau(&self) -> f64 {
        let take = (self.rows.len() / 4).max(1);
        let tail = &self.rows[self.rows.len() - take..];
        tail.iter().map(|r| r.modulus).sum::<f64>() / tail.len() as f64
    }
}

/// `|coefficient|` for `n = 0..=n_max`. The exact tree advances one step
/// per row; Monte Carlo records every prefix of each sampled path.
pub fn decay_profile(
    mu: &WalkMeasure,
    x: &TorusPoint,
    a: &[i64],
    n_max: usize,
    method: WalkMethod,
    mc: MonteCarloConfig,
) -> Result<DecayProfile> {
    validate(mu, x, a)?;
    if x.as_exact().is_none() {
        return Err(Error::FloatNotAllowed);
    }
    let rows = match method {
        WalkMethod::ExactTree => {
            let mut tree = ExactTree::new(mu, x, a, EXACT_STATE_BUDGET)?;
            let mut rows = Vec::with_capacity(n_max + 1);
            for n in 0..=n_max {
                if n > 0 {
                    tree.advance()?;
                }
                rows.push(DecayRow {
                    n,
                    modulus: tree.value().norm(),
                    se: 0.0,
                });
            }
            rows
        }
        WalkMethod::MonteCarlo => {
            if mc.samples == 0 {
                return Err(Error::InvalidArgument(
                    "Monte Carlo needs at least one sample".into(),
                ));
            }
            monte_carlo_sums(mu, x, a, n_max, mc)?
                .into_iter()
                .enumerate()
                .map(|(n, (s, sq))| {
                    let (z, se) = mc_estimate(s, sq, mc.samples);
                    DecayRow {
                        n,
                        modulus: z.norm(),
                        se,
                    }
                })
                .collect()
        }
    };
    let q = x
        .common_denominator_form()
        .and_then(|(_, q)| q.to_u64())
        .unwrap_or(0);
    Ok(DecayProfile {
        q,
        method,
        rows,
        seed: mc.seed,
    })
}

/// Stationary value `1/(q^d − 1)` of `|coefficient|` for a walk mixing
/// uniformly over the nonzero points of `(1/q)ℤ^d/ℤ^d`, `q` prime.
pub fn uniform_plateau(q: u64, d: u32) -> f64 {
    if q == 1 {
        1.0
    } else {
        1.0 / ((q as f64).powi(d as i32) - 1.0)
    }
}
