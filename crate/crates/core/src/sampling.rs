//! Seeded generators for point sets, presentations and matrices used by the
//! experiments and the test suites.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::cayley::SemigroupPresentation;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::torus::{TorusPoint, TorusPointSet};

const MAX_ATTEMPTS: usize = 1_000_000;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

/// Uniform prime in `[lo, hi]`.
pub fn random_prime<R: Rng>(rng: &mut R, lo: u64, hi: u64) -> Result<u64> {
    for _ in 0..MAX_ATTEMPTS {
        let p = rng.gen_range(lo..=hi);
        if is_prime(p) {
            return Ok(p);
        }
    }
    Err(Error::InvalidArgument(format!(
        "no prime found in [{lo}, {hi}]"
    )))
}

/// How denominators of generated rationals are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Denominators {
    /// Uniform integer in the range.
    Uniform(u64, u64),
    /// Uniform prime in the range.
    Prime(u64, u64),
}

impl Denominators {
    fn draw<R: Rng>(self, rng: &mut R) -> Result<u64> {
        match self {
            Denominators::Uniform(lo, hi) => Ok(rng.gen_range(lo.max(1)..=hi.max(lo.max(1)))),
            Denominators::Prime(lo, hi) => random_prime(rng, lo, hi),
        }
    }
}

/// Rational approximation `⌊t·q⌋/q` of `t ∈ [0,1)`.
fn rational_near(t: f64, q: u64) -> BigRational {
    let p = ((t * q as f64).floor() as u64).min(q - 1);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parameters of a random exact point set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RationalSetSpec {
    pub dim: usize,
    pub k: usize,
    /// Side of the box `[c, c + width)^d` (mod 1) holding the points; 1 means uniform.
    pub width: f64,
    pub denominators: Denominators,
    /// Points pairwise differ in every coordinate.
    pub distinct_coordinates: bool,
}

/// `k` distinct rational points in a random box of side `width`.
pub fn random_rational_set<R: Rng>(rng: &mut R, spec: &RationalSetSpec) -> Result<TorusPointSet> {
    if spec.k == 0 || spec.dim == 0 {
        return Err(Error::InvalidArgument("need k ≥ 1 and d ≥ 1".into()));
    }
    let corner: Vec<f64> = (0..spec.dim).map(|_| rng.gen()).collect();
    let mut seen: HashSet<Vec<BigRational>> = HashSet::new();
    let mut per_axis: Vec<HashSet<BigRational>> = vec![HashSet::new(); spec.dim];
    let mut pts = Vec::with_capacity(spec.k);
    let mut attempts = 0;
    while pts.len() < spec.k {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(Error::InvalidArgument(
                "could not draw enough distinct points".into(),
            ));
        }
        let q = spec.denominators.draw(rng)?;
        let c: Vec<BigRational> = corner
            .iter()
            .map(|&c0| {
                let t = c0 + spec.width.min(1.0) * rng.gen::<f64>();
                rational_near(t - t.floor(), q)
            })
            .collect();
        if spec.distinct_coordinates && c.iter().zip(&per_axis).any(|(x, s)| s.contains(x)) {
            continue;
        }
        if !seen.insert(c.clone()) {
            continue;
        }
        for (x, s) in c.iter().zip(per_axis.iter_mut()) {
            s.insert(x.clone());
        }
        pts.push(TorusPoint::exact(c));
    }
    TorusPointSet::new(spec.dim, pts)
}

/// All `(v_1, …, v_d)/q₀`, `0 ≤ v_i < q₀`.
pub fn full_grid(dim: usize, q0: u64) -> Result<TorusPointSet> {
    let n = (q0 as usize)
        .checked_pow(dim as u32)
        .ok_or(Error::BudgetExceeded {
            what: "grid size",
            limit: usize::MAX,
        })?;
    let pts = (0..n)
        .map(|mut flat| {
            let mut c = vec![BigRational::zero(); dim];
            for x in c.iter_mut().rev() {
                *x = BigRational::new(BigInt::from(flat % q0 as usize), BigInt::from(q0));
                flat /= q0 as usize;
            }
            TorusPoint::exact(c)
        })
        .collect();
    TorusPointSet::new(dim, pts)
}

/// Points of exact torsion order `q ≤ q_max`, ordered by `q` then lexicographically.
pub fn low_height_points(dim: usize, q_max: u64) -> Vec<Vec<BigRational>> {
    let mut out = Vec::new();
    for q in 1..=q_max {
        let total = (q as usize).pow(dim as u32);
        for mut flat in 0..total {
            let mut v = vec![0u64; dim];
            for x in v.iter_mut().rev() {
                *x = (flat % q as usize) as u64;
                flat /= q as usize;
            }
            if v.iter().fold(q, |g, &x| g.gcd(&x)) == 1 {
                out.push(
                    v.iter()
                        .map(|&x| BigRational::new(BigInt::from(x), BigInt::from(q)))
                        .collect(),
                );
            }
        }
    }
    out
}

/// A random `k`-subset of the smallest pool of low-height points holding at
/// least `pool_factor·k` points.
pub fn random_low_height_set<R: Rng>(
    rng: &mut R,
    dim: usize,
    k: usize,
    pool_factor: usize,
) -> Result<TorusPointSet> {
    let need = k.saturating_mul(pool_factor.max(1));
    let mut q_max = 1;
    let mut pool = low_height_points(dim, q_max);
    while pool.len() < need {
        q_max += 1;
        pool = low_height_points(dim, q_max);
    }
    let chosen: Vec<TorusPoint> = pool
        .choose_multiple(rng, k)
        .cloned()
        .map(TorusPoint::exact)
        .collect();
    TorusPointSet::new(dim, chosen)
}

/// A nonzero rational vector with entries `p/q`, `|p| < q ≤ den_max`.
pub fn random_rational_vector<R: Rng>(rng: &mut R, dim: usize, den_max: u64) -> Vec<BigRational> {
    loop {
        let v: Vec<BigRational> = (0..dim)
            .map(|_| {
                let q = rng.gen_range(1..=den_max.max(1)) as i64;
                BigRational::new(BigInt::from(rng.gen_range(-q + 1..q)), BigInt::from(q))
            })
            .collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// `E_{ij}(c)` and its inverse `E_{ij}(−c)`.
fn elementary(d: usize, i: usize, j: usize, c: i64) -> IntMatrix {
    let mut m = IntMatrix::identity(d);
    m[(i, j)] = BigInt::from(c);
    m
}

/// Random product of `steps` elementary matrices with coefficients ±1, and its inverse.
pub fn random_unimodular<R: Rng>(rng: &mut R, d: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(d);
    let mut p_inv = IntMatrix::identity(d);
    if d < 2 {
        return (p, p_inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..d);
        let j = (i + rng.gen_range(1..d)) % d;
        let c = if rng.gen() { 1 } else { -1 };
        p = &p * &elementary(d, i, j, c);
        p_inv = &elementary(d, i, j, -c) * &p_inv;
    }
    (p, p_inv)
}

/// `P(I + N)P⁻¹` with `N` strictly upper triangular, entries in `[−2, 2]`.
pub fn random_unipotent<R: Rng>(rng: &mut R, d: usize, conjugation_steps: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(d);
    for i in 0..d {
        for j in i + 1..d {
            u[(i, j)] = BigInt::from(rng.gen_range(-2i64..=2));
        }
    }
    let (p, p_inv) = random_unimodular(rng, d, conjugation_steps);
    &(&p * &u) * &p_inv
}

/// `m` random unipotent generators in dimension `d`.
pub fn random_unipotent_presentation<R: Rng>(
    rng: &mut R,
    d: usize,
    m: usize,
) -> Result<SemigroupPresentation> {
    let gens = (0..m).map(|_| random_unipotent(rng, d, 2)).collect();
    SemigroupPresentation::new(d, gens)
}

/// Integer matrix with entries uniform in `[−bound, bound]`.
pub fn random_int_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| {
        BigInt::from(rng.gen_range(-bound..=bound))
    })
}

/// Random element of the SL₂ Cayley ball: a word of the given length in the
/// elementary generators.
pub fn random_sl2_word<R: Rng>(rng: &mut R, len: usize) -> IntMatrix {
    let s = SemigroupPresentation::sl2_elementary();
    (0..len).fold(IntMatrix::identity(2), |acc, _| {
        &acc * &s.generators()[rng.gen_range(0..2)]
    })
}

/// `|u|_∞ > eps` for the point, exactly.
pub fn is_far_from_origin(p: &TorusPoint, eps: f64) -> bool {
    match (p.norm_exact(), BigRational::from_float(eps)) {
        (Some(n), Some(e)) => n > e,
        _ => p.norm() > eps,
    }
}

/// `k` exact points with `|u_i| > eps`, denominators up to `den_max`.
pub fn random_far_points<R: Rng>(
    rng: &mut R,
    dim: usize,
    k: usize,
    eps: f64,
    den_max: u64,
) -> Vec<TorusPoint> {
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let q = rng.gen_range(2..=den_max.max(2));
        let c: Vec<BigRational> = (0..dim)
            .map(|_| BigRational::new(BigInt::from(rng.gen_range(0..q)), BigInt::from(q)))
            .collect();
        let p = TorusPoint::exact(c);
        if is_far_from_origin(&p, eps) {
            out.push(p);
        }
    }
    out
}

/// Least `q₀` with `q₀^d ≥ k`.
pub fn grid_side_for(dim: usize, k: usize) -> u64 {
    let mut q = 1u64;
    while (q as usize).pow(dim as u32) < k {
        q += 1;
    }
    q
}

/// Reduced denominators of a rational vector are all one.
pub fn is_integral(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.denom().is_one())
}
