//! Search for a dilator making `gY` ε-dense: scalars `n`, polynomial
//! matrices `A(n)`, block products `(A₁(n), A₂(m))` and Cayley-ball
//! elements. Candidates are screened in floating point against the initial
//! density grid, and every reported hit is re-verified with
//! [`is_eps_dense`] on the exact image set.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::cayley::{CayleyBfs, SemigroupPresentation};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::par;
use crate::polymat::IntPolyMatrix;
use crate::torus::{
    is_eps_dense, screen_dense, DensityVerdict, NearestIndex, TorusPoint, TorusPointSet,
};

const BATCH: usize = 256;
/// Denominators below this use machine arithmetic.
const SMALL_MODULUS: u64 = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub n_max: u64,
    pub ball_radius: usize,
    pub element_budget: usize,
    pub time_budget_ms: Option<u64>,
    pub max_refinements: u32,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            n_max: 100_000,
            ball_radius: 8,
            element_budget: 100_000,
            time_budget_ms: None,
            max_refinements: 8,
        }
    }
}

impl SearchBudget {
    pub fn validate(&self) -> Result<()> {
        if self.n_max == 0 || self.element_budget == 0 || self.time_budget_ms == Some(0) {
            return Err(Error::InvalidArgument("budgets must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Dilator {
    Scalar {
        n: u64,
    },
    Poly {
        n: u64,
    },
    Pair {
        n: u64,
        m: u64,
    },
    Matrix {
        matrix: Vec<Vec<String>>,
        word: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub found: bool,
    pub dilator: Option<Dilator>,
    pub verdict: Option<DensityVerdict>,
    /// Candidates examined, counting the hit.
    pub scanned: u64,
    pub eps: f64,
    /// Why the search stopped without a hit.
    pub stop: Option<String>,
}

/// A candidate dilation as a `d×d` integer matrix.
trait Candidate: Sync {
    /// Row-major entries reduced into `[0, q)`.
    fn mod_q(&self, q: u64) -> Vec<u64>;
    fn matrix(&self) -> IntMatrix;
    fn dilator(&self) -> Dilator;
}

fn rem_i128(x: i128, q: u64) -> u64 {
    x.rem_euclid(q as i128) as u64
}

fn small_entries(m: &IntMatrix) -> Option<Vec<i128>> {
    m.to_rows().iter().flatten().map(|x| x.to_i128()).collect()
}

struct Scalar {
    n: u64,
    d: usize,
}

impl Candidate for Scalar {
    fn mod_q(&self, q: u64) -> Vec<u64> {
        let r = self.n % q;
        (0..self.d * self.d)
            .map(|i| if i % (self.d + 1) == 0 { r } else { 0 })
            .collect()
    }
    fn matrix(&self) -> IntMatrix {
        IntMatrix::identity(self.d).map(|x| x * BigInt::from(self.n))
    }
    fn dilator(&self) -> Dilator {
        Dilator::Scalar { n: self.n }
    }
}

/// `A(x)` with coefficient matrices cached as machine integers when they fit.
struct PolyPrep {
    poly: IntPolyMatrix,
    small: Option<Vec<Vec<i128>>>,
}

impl PolyPrep {
    fn new(poly: &IntPolyMatrix) -> Self {
        let small = poly.coeffs().iter().map(small_entries).collect();
        PolyPrep {
            poly: poly.clone(),
            small,
        }
    }

    fn mod_q(&self, n: u64, q: u64) -> Vec<u64> {
        let d = self.poly.dim();
        let x = (n % q) as u128;
        let q128 = q as u128;
        let coeff = |j: usize, i: usize| -> u64 {
            match &self.small {
                Some(c) => rem_i128(c[j][i], q),
                None => self.poly.coeff(j)[(i / d, i % d)]
                    .mod_floor(&BigInt::from(q))
                    .to_u64()
                    .expect("reduced"),
            }
        };
        (0..d * d)
            .map(|i| {
                (0..=self.poly.degree())
                    .rev()
                    .fold(0u128, |acc, j| (acc * x + coeff(j, i) as u128) % q128)
                    as u64
            })
            .collect()
    }
}

struct Poly<'a> {
    prep: &'a PolyPrep,
    n: u64,
}

impl Candidate for Poly<'_> {
    fn mod_q(&self, q: u64) -> Vec<u64> {
        self.prep.mod_q(self.n, q)
    }
    fn matrix(&self) -> IntMatrix {
        self.prep.poly.eval(&BigInt::from(self.n))
    }
    fn dilator(&self) -> Dilator {
        Dilator::Poly { n: self.n }
    }
}

struct Block<'a> {
    first: &'a PolyPrep,
    second: &'a PolyPrep,
    n: u64,
    m: u64,
}

impl Candidate for Block<'_> {
    fn mod_q(&self, q: u64) -> Vec<u64> {
        let (d1, d2) = (self.first.poly.dim(), self.second.poly.dim());
        let d = d1 + d2;
        let (a, b) = (self.first.mod_q(self.n, q), self.second.mod_q(self.m, q));
        let mut out = vec![0; d * d];
        for i in 0..d1 {
            for j in 0..d1 {
                out[i * d + j] = a[i * d1 + j];
            }
        }
        for i in 0..d2 {
            for j in 0..d2 {
                out[(d1 + i) * d + d1 + j] = b[i * d2 + j];
            }
        }
        out
    }
    fn matrix(&self) -> IntMatrix {
        let (d1, d2) = (self.first.poly.dim(), self.second.poly.dim());
        let a = self.first.poly.eval(&BigInt::from(self.n));
        let b = self.second.poly.eval(&BigInt::from(self.m));
        IntMatrix::from_fn(d1 + d2, d1 + d2, |i, j| match (i < d1, j < d1) {
            (true, true) => a[(i, j)].clone(),
            (false, false) => b[(i - d1, j - d1)].clone(),
            _ => BigInt::zero(),
        })
    }
    fn dilator(&self) -> Dilator {
        Dilator::Pair {
            n: self.n,
            m: self.m,
        }
    }
}

#[derive(Clone)]
struct Element {
    m: IntMatrix,
    small: Option<Vec<i128>>,
    word: Vec<usize>,
}

impl Candidate for Element {
    fn mod_q(&self, q: u64) -> Vec<u64> {
        match &self.small {
            Some(s) => s.iter().map(|&x| rem_i128(x, q)).collect(),
            None => {
                let qb = BigInt::from(q);
                self.m
                    .to_rows()
                    .iter()
                    .flatten()
                    .map(|x| x.mod_floor(&qb).to_u64().expect("reduced"))
                    .collect()
            }
        }
    }
    fn matrix(&self) -> IntMatrix {
        self.m.clone()
    }
    fn dilator(&self) -> Dilator {
        Dilator::Matrix {
            matrix: self
                .m
                .to_rows()
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
            word: self.word.clone(),
        }
    }
}

enum Prepared {
    /// Numerators and denominators of exact points, all denominators small.
    Small {
        nums: Vec<Vec<u64>>,
        dens: Vec<u64>,
    },
    /// Exact points with some large denominator.
    Big,
    Float,
}

/// The set `Y` with its image machinery.
struct Imager<'a> {
    y: &'a TorusPointSet,
    prep: Prepared,
}

impl<'a> Imager<'a> {
    fn new(y: &'a TorusPointSet) -> Result<Self> {
        if y.is_empty() {
            return Err(Error::EmptySet);
        }
        let prep = if y.points()[0].as_exact().is_none() {
            Prepared::Float
        } else {
            let forms: Vec<(Vec<BigInt>, BigInt)> = y
                .points()
                .iter()
                .map(|p| p.common_denominator_form().expect("exact"))
                .collect();
            let small = forms
                .iter()
                .all(|(_, q)| q.to_u64().is_some_and(|q| q < SMALL_MODULUS));
            if small {
                Prepared::Small {
                    nums: forms
                        .iter()
                        .map(|(v, _)| v.iter().map(|x| x.to_u64().expect("reduced")).collect())
                        .collect(),
                    dens: forms
                        .iter()
                        .map(|(_, q)| q.to_u64().expect("small"))
                        .collect(),
                }
            } else {
                Prepared::Big
            }
        };
        Ok(Imager { y, prep })
    }

    fn dim(&self) -> usize {
        self.y.dim()
    }

    /// Image numerators (small exact case) or floating coordinates.
    fn small_image(&self, c: &dyn Candidate, nums: &[Vec<u64>], dens: &[u64]) -> Vec<Vec<u64>> {
        let d = self.dim();
        let mut cache: HashMap<u64, Vec<u64>> = HashMap::new();
        nums.iter()
            .zip(dens)
            .map(|(v, &q)| {
                let m = cache.entry(q).or_insert_with(|| c.mod_q(q));
                let q128 = q as u128;
                (0..d)
                    .map(|r| {
                        (0..d).fold(0u128, |acc, k| {
                            (acc + m[r * d + k] as u128 * v[k] as u128) % q128
                        }) as u64
                    })
                    .collect()
            })
            .collect()
    }

    fn float_image(&self, m: &IntMatrix) -> Vec<Vec<f64>> {
        self.y
            .points()
            .iter()
            .map(|p| p.apply(m).expect("dimensions checked").to_f64())
            .collect()
    }

    fn exact_set(&self, c: &dyn Candidate) -> Result<TorusPointSet> {
        let m = c.matrix();
        let pts = self
            .y
            .points()
            .iter()
            .map(|p| p.apply(&m))
            .collect::<Result<Vec<_>>>()?;
        TorusPointSet::new_dedup(self.dim(), pts)
    }

    /// Certified verdict when the candidate passes the floating screen and
    /// the exact image is DENSE.
    fn evaluate(
        &self,
        c: &dyn Candidate,
        eps: f64,
        max_refinements: u32,
    ) -> Result<Option<DensityVerdict>> {
        let d = self.dim();
        let rows = match &self.prep {
            Prepared::Small { nums, dens } => self
                .small_image(c, nums, dens)
                .iter()
                .zip(dens.iter())
                .map(|(v, &q)| v.iter().map(|&x| x as f64 / q as f64).collect())
                .collect(),
            Prepared::Big | Prepared::Float => self.float_image(&c.matrix()),
        };
        if !screen_dense(&NearestIndex::new(d, &rows), eps) {
            return Ok(None);
        }
        let image = match &self.prep {
            Prepared::Small { nums, dens } => {
                let pts = self
                    .small_image(c, nums, dens)
                    .into_iter()
                    .zip(dens)
                    .map(|(v, &q)| {
                        TorusPoint::Exact(
                            v.into_iter()
                                .map(|x| BigRational::new(x.into(), q.into()))
                                .collect(),
                        )
                    })
                    .collect();
                TorusPointSet::new_dedup(d, pts)?
            }
            _ => self.exact_set(c)?,
        };
        let v = is_eps_dense(&image, eps, max_refinements)?;
        Ok(v.is_dense().then_some(v))
    }
}

struct Deadline(Option<(std::time::Instant, std::time::Duration)>);

impl Deadline {
    fn new(ms: Option<u64>) -> Self {
        Deadline(ms.map(|ms| {
            (
                std::time::Instant::now(),
                std::time::Duration::from_millis(ms),
            )
        }))
    }

    fn passed(&self) -> bool {
        self.0.is_some_and(|(t, d)| t.elapsed() >= d)
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 0.5 {
        Ok(())
    } else {
        Err(Error::EpsOutOfRange(eps))
    }
}

/// Evaluates `make(i)` for `i` in `0..count` in parallel batches and keeps
/// the least hit in canonical order.
fn scan<C: Candidate + Send>(
    imager: &Imager<'_>,
    count: u64,
    make: impl Fn(u64) -> C + Sync,
    eps: f64,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    let deadline = Deadline::new(budget.time_budget_ms);
    let mut start = 0u64;
    while start < count {
        let end = (start + BATCH as u64).min(count);
        let idx: Vec<u64> = (start..end).collect();
        let results = par::map(&idx, |&i| {
            let c = make(i);
            imager
                .evaluate(&c, eps, budget.max_refinements)
                .map(|v| v.map(|v| (c.dilator(), v)))
        });
        for (i, r) in idx.iter().zip(results) {
            if let Some((dilator, verdict)) = r? {
                return Ok(SearchOutcome {
                    found: true,
                    dilator: Some(dilator),
                    verdict: Some(verdict),
                    scanned: i + 1,
                    eps,
                    stop: None,
                });
            }
        }
        start = end;
        if start < count && deadline.passed() {
            return Ok(not_found(start, eps, "time budget exhausted"));
        }
    }
    Ok(not_found(count, eps, "candidate budget exhausted"))
}

fn not_found(scanned: u64, eps: f64, why: &str) -> SearchOutcome {
    SearchOutcome {
        found: false,
        dilator: None,
        verdict: None,
        scanned,
        eps,
        stop: Some(why.into()),
    }
}

/// Scans `n = 1..=n_max` for `nY` ε-dense.
pub fn find_scalar_dilation(
    y: &TorusPointSet,
    eps: f64,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    check_eps(eps)?;
    budget.validate()?;
    let imager = Imager::new(y)?;
    let d = y.dim();
    scan(
        &imager,
        budget.n_max,
        |i| Scalar { n: i + 1, d },
        eps,
        budget,
    )
}

/// Scans `n = 1..=n_max` for `A(n)Y` ε-dense.
pub fn find_poly_dilation(
    y: &TorusPointSet,
    a: &IntPolyMatrix,
    eps: f64,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    check_eps(eps)?;
    budget.validate()?;
    if a.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: y.dim(),
            got: a.dim(),
        });
    }
    let imager = Imager::new(y)?;
    if a.is_constant() {
        // A(n) = C₀ for every n: one candidate decides the search.
        let prep = PolyPrep::new(a);
        let c = Poly { prep: &prep, n: 1 };
        return match imager.evaluate(&c, eps, budget.max_refinements)? {
            Some(v) => Ok(SearchOutcome {
                found: true,
                dilator: Some(c.dilator()),
                verdict: Some(v),
                scanned: 1,
                eps,
                stop: None,
            }),
            None => Ok(not_found(1, eps, "constant polynomial")),
        };
    }
    let prep = PolyPrep::new(a);
    scan(
        &imager,
        budget.n_max,
        |i| Poly {
            prep: &prep,
            n: i + 1,
        },
        eps,
        budget,
    )
}

/// Per-factor dilation family of a product search.
#[derive(Clone, Debug, PartialEq)]
pub enum FactorEngine {
    /// `n ↦ n·I`.
    Scalar,
    /// `n ↦ A(n)`.
    Poly(IntPolyMatrix),
}

impl FactorEngine {
    fn as_poly(&self, dim: usize) -> Result<IntPolyMatrix> {
        match self {
            FactorEngine::Scalar => {
                IntPolyMatrix::new(vec![IntMatrix::zeros(dim, dim), IntMatrix::identity(dim)])
            }
            FactorEngine::Poly(p) if p.dim() == dim => Ok(p.clone()),
            FactorEngine::Poly(p) => Err(Error::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            }),
        }
    }
}

/// Both coordinate projections are injective on `Y`; otherwise the first
/// colliding pair is reported.
pub fn check_injective_projections(y: &TorusPointSet, d1: usize) -> Result<()> {
    let rows: Vec<Vec<String>> = y
        .points()
        .iter()
        .map(|p| match p {
            TorusPoint::Exact(c) => c.iter().map(ToString::to_string).collect(),
            TorusPoint::Float(c) => c.iter().map(|x| x.to_bits().to_string()).collect(),
        })
        .collect();
    for (lo, hi) in [(0, d1), (d1, y.dim())] {
        let mut seen: HashMap<&[String], usize> = HashMap::new();
        for (j, r) in rows.iter().enumerate() {
            if let Some(&i) = seen.get(&r[lo..hi]) {
                return Err(Error::NonInjectiveProjection(i, j));
            }
            seen.insert(&r[lo..hi], j);
        }
    }
    Ok(())
}

/// `k`-th pair of positive integers ordered by `n + m`, then by `n`.
pub fn pair_at(k: u64) -> (u64, u64) {
    // diagonal s = n + m holds s − 1 pairs; pairs before diagonal s number (s−1)(s−2)/2
    let mut s = (((8.0 * k as f64 + 1.0).sqrt() + 3.0) / 2.0).floor() as u64;
    while (s - 1) * (s - 2) / 2 > k {
        s -= 1;
    }
    while s * (s - 1) / 2 <= k {
        s += 1;
    }
    let n = k - (s - 1) * (s - 2) / 2 + 1;
    (n, s - n)
}

/// Grid search over `(n, m)` acting by `A₁(n) ⊕ A₂(m)` on `𝕋^{d₁} × 𝕋^{d₂}`.
/// `budget.n_max` caps the number of pairs.
pub fn find_product_dilation(
    y: &TorusPointSet,
    d1: usize,
    engines: (&FactorEngine, &FactorEngine),
    eps: f64,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    check_eps(eps)?;
    budget.validate()?;
    if d1 == 0 || d1 >= y.dim() {
        return Err(Error::InvalidArgument(format!(
            "factor split {d1} is outside 1..{}",
            y.dim()
        )));
    }
    check_injective_projections(y, d1)?;
    let first = PolyPrep::new(&engines.0.as_poly(d1)?);
    let second = PolyPrep::new(&engines.1.as_poly(y.dim() - d1)?);
    let imager = Imager::new(y)?;
    scan(
        &imager,
        budget.n_max,
        |k| {
            let (n, m) = pair_at(k);
            Block {
                first: &first,
                second: &second,
                n,
                m,
            }
        },
        eps,
        budget,
    )
}

/// Breadth-first scan of the Cayley ball of radius `budget.ball_radius`,
/// identity first.
pub fn find_group_dilation(
    y: &TorusPointSet,
    s: &SemigroupPresentation,
    eps: f64,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    check_eps(eps)?;
    budget.validate()?;
    if s.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: y.dim(),
            got: s.dim(),
        });
    }
    let imager = Imager::new(y)?;
    let deadline = Deadline::new(budget.time_budget_ms);
    let mut bfs = CayleyBfs::new(s, budget.element_budget);
    let mut scanned = 0u64;
    for _ in 0..=budget.ball_radius {
        let layer = match bfs.next_layer() {
            Ok(Some(layer)) => layer,
            Ok(None) => return Ok(not_found(scanned, eps, "semigroup exhausted")),
            Err(Error::BudgetExceeded { .. }) => {
                return Ok(not_found(scanned, eps, "element budget exhausted"))
            }
            Err(e) => return Err(e),
        };
        let elems: Vec<Element> = layer
            .into_iter()
            .map(|(m, word)| Element {
                small: small_entries(&m),
                m,
                word,
            })
            .collect();
        let out = scan(
            &imager,
            elems.len() as u64,
            |i| elems[i as usize].clone(),
            eps,
            budget,
        )?;
        if out.found {
            return Ok(SearchOutcome {
                scanned: scanned + out.scanned,
                ..out
            });
        }
        scanned += out.scanned;
        if deadline.passed() {
            return Ok(not_found(scanned, eps, "time budget exhausted"));
        }
    }
    Ok(not_found(scanned, eps, "ball radius exhausted"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::DensityStatus;

    fn budget(n_max: u64) -> SearchBudget {
        SearchBudget {
            n_max,
            ..SearchBudget::default()
        }
    }

    fn reverify(y: &TorusPointSet, out: &SearchOutcome, m: &IntMatrix) {
        let img = TorusPointSet::new_dedup(
            y.dim(),
            y.points().iter().map(|p| p.apply(m).unwrap()).collect(),
        )
        .unwrap();
        assert_eq!(
            is_eps_dense(&img, out.eps, 12).unwrap().status,
            DensityStatus::Dense
        );
    }

    #[test]
    fn pair_order() {
        let pairs: Vec<_> = (0..6).map(pair_at).collect();
        assert_eq!(pairs, vec![(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)]);
        for k in [100u64, 12345, 999_999] {
            let (n, m) = pair_at(k);
            let s = n + m;
            assert_eq!((s - 1) * (s - 2) / 2 + n - 1, k);
        }
    }

    #[test]
    fn scalar_examples() {
        let fine: Vec<Vec<(i64, i64)>> = (0..101).map(|j| vec![(j, 101)]).collect();
        let y = TorusPointSet::from_fractions(1, &fine).unwrap();
        let out = find_scalar_dilation(&y, 0.02, &budget(10)).unwrap();
        assert_eq!(
            (out.found, out.dilator),
            (true, Some(Dilator::Scalar { n: 1 }))
        );

        let y = TorusPointSet::from_fractions(1, &[vec![(0, 1)], vec![(1, 1000)]]).unwrap();
        let out = find_scalar_dilation(&y, 0.3, &budget(500)).unwrap();
        let Some(Dilator::Scalar { n }) = out.dilator else {
            panic!("{out:?}")
        };
        assert!(n <= 500);
        reverify(
            &y,
            &out,
            &IntMatrix::identity(1).map(|x| x * BigInt::from(n)),
        );

        let y = TorusPointSet::from_fractions(1, &[vec![(0, 1)]]).unwrap();
        let out = find_scalar_dilation(&y, 0.45, &budget(300)).unwrap();
        assert!(!out.found && out.scanned == 300);
    }

    #[test]
    fn float_scalar_search() {
        let y = TorusPointSet::from_floats(1, &[vec![0.0], vec![0.001]]).unwrap();
        let out = find_scalar_dilation(&y, 0.3, &budget(500)).unwrap();
        assert!(out.found);
    }

    #[test]
    fn poly_examples() {
        let a = IntPolyMatrix::new(vec![
            IntMatrix::zeros(2, 2),
            IntMatrix::from_i64(&[vec![1, 0], vec![0, 0]]),
            IntMatrix::from_i64(&[vec![0, 0], vec![0, 1]]),
        ])
        .unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let pts: Vec<Vec<f64>> = (1..=60)
            .map(|j| vec![(j as f64 * phi).fract(), (j as f64 * phi * phi).fract()])
            .collect();
        let y = TorusPointSet::from_floats(2, &pts).unwrap();
        assert!(
            find_poly_dilation(&y, &a, 0.25, &budget(100_000))
                .unwrap()
                .found
        );

        let c = IntPolyMatrix::constant(IntMatrix::identity(2)).unwrap();
        let y = TorusPointSet::from_fractions(2, &[vec![(1, 3), (1, 5)], vec![(1, 2), (1, 7)]])
            .unwrap();
        let out = find_poly_dilation(&y, &c, 0.25, &budget(1000)).unwrap();
        assert!(!out.found);
    }

    #[test]
    fn poly_exact_and_big_denominators_agree() {
        let a = IntPolyMatrix::new(vec![
            IntMatrix::zeros(2, 2),
            IntMatrix::from_i64(&[vec![1, 0], vec![0, 0]]),
            IntMatrix::from_i64(&[vec![0, 0], vec![0, 1]]),
        ])
        .unwrap();
        let pts: Vec<Vec<(i64, i64)>> = (1..=12).map(|j| vec![(j, 997), (3 * j, 991)]).collect();
        let y = TorusPointSet::from_fractions(2, &pts).unwrap();
        let out = find_poly_dilation(&y, &a, 0.25, &budget(5000)).unwrap();
        assert!(out.found);
        let Some(Dilator::Poly { n }) = out.dilator else {
            panic!()
        };
        reverify(&y, &out, &a.eval_at(n as i64));
    }

    #[test]
    fn product_examples() {
        let pts: Vec<Vec<(i64, i64)>> = (1..=10)
            .map(|j| vec![(j, 1009), (j * j % 1013, 1013)])
            .collect();
        let y = TorusPointSet::from_fractions(2, &pts).unwrap();
        let out = find_product_dilation(
            &y,
            1,
            (&FactorEngine::Scalar, &FactorEngine::Scalar),
            0.3,
            &budget(200_000),
        )
        .unwrap();
        assert!(out.found, "{out:?}");

        let slice: Vec<Vec<(i64, i64)>> = (1..=5).map(|j| vec![(j, 7), (1, 3)]).collect();
        let y = TorusPointSet::from_fractions(2, &slice).unwrap();
        let err = find_product_dilation(
            &y,
            1,
            (&FactorEngine::Scalar, &FactorEngine::Scalar),
            0.3,
            &budget(10),
        );
        assert_eq!(err.unwrap_err(), Error::NonInjectiveProjection(0, 1));

        let one = TorusPointSet::from_fractions(2, &[vec![(1, 3), (1, 5)]]).unwrap();
        let out = find_product_dilation(
            &one,
            1,
            (&FactorEngine::Scalar, &FactorEngine::Scalar),
            0.45,
            &budget(500),
        )
        .unwrap();
        assert!(!out.found);
    }

    #[test]
    fn group_examples() {
        let s = SemigroupPresentation::sl2_elementary();
        let grid: Vec<Vec<(i64, i64)>> = (0..5)
            .flat_map(|i| (0..5).map(move |j| vec![(i, 5), (j, 5)]))
            .collect();
        let y = TorusPointSet::from_fractions(2, &grid).unwrap();
        let out = find_group_dilation(&y, &s, 0.11, &SearchBudget::default()).unwrap();
        assert_eq!(out.scanned, 1);
        assert!(matches!(out.dilator, Some(Dilator::Matrix { ref word, .. }) if word.is_empty()));

        let y = TorusPointSet::from_fractions(2, &[vec![(0, 1), (0, 1)], vec![(1, 2), (1, 2)]])
            .unwrap();
        let sc =
            SemigroupPresentation::new(2, vec![IntMatrix::from_i64(&[vec![1, 2], vec![0, 1]])])
                .unwrap();
        let out = find_group_dilation(
            &y,
            &sc,
            0.3,
            &SearchBudget {
                ball_radius: 6,
                ..SearchBudget::default()
            },
        )
        .unwrap();
        assert!(!out.found);

        let pts: Vec<Vec<(i64, i64)>> = (0..8)
            .map(|j| vec![(1000 + 7 * j, 10007), (2000 + 11 * j, 10009)])
            .collect();
        let y = TorusPointSet::from_fractions(2, &pts).unwrap();
        let b = SearchBudget {
            ball_radius: 12,
            ..SearchBudget::default()
        };
        let a = find_group_dilation(&y, &s, 0.3, &b).unwrap();
        let again = find_group_dilation(&y, &s, 0.3, &b).unwrap();
        assert_eq!(a, again);
        let small = find_group_dilation(
            &y,
            &s,
            0.3,
            &SearchBudget {
                element_budget: 20,
                ..b
            },
        )
        .unwrap();
        assert!(!small.found || a.found);
    }
}
