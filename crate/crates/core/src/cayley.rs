//! Finitely generated matrix semigroups: Cayley balls, affine-span traces
//! `W_n = span{ga − a : g ∈ G_n}`, unipotent power polynomials, and the
//! univariate polynomialization `A(x) = Q_N(x, x^R, …, x^{R^{N−1}})` of the
//! product `Q_N(n₁, …, n_N) = Π u_i^{n_i}` with cyclic generator order.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{determinant, EchelonBasis, IntMatrix, RatMatrix};
use crate::par;
use crate::polymat::{
    check_condition_1_1, validate_lifts, PolyMatrix, RatPolyMatrix, SetHypothesis,
};

pub const DEFAULT_ELEMENT_BUDGET: usize = 1_000_000;
pub const DEFAULT_TERM_BUDGET: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub struct SemigroupPresentation {
    dim: usize,
    generators: Vec<IntMatrix>,
    unipotent: Vec<bool>,
    determinants: Vec<BigInt>,
}

/// `(u − I)^d = 0`.
pub fn is_unipotent(u: &IntMatrix) -> bool {
    let d = u.rows();
    (u - &IntMatrix::identity(d)).pow(d as u64).is_zero()
}

impl SemigroupPresentation {
    pub fn new(dim: usize, generators: Vec<IntMatrix>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if generators.is_empty() {
            return Err(Error::InvalidArgument("no generators".into()));
        }
        for g in &generators {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: g.rows().max(g.cols()),
                });
            }
        }
        let unipotent = generators.iter().map(is_unipotent).collect();
        let determinants = generators.iter().map(determinant).collect();
        Ok(SemigroupPresentation {
            dim,
            generators,
            unipotent,
            determinants,
        })
    }

    /// The elementary unipotents `[[1,1],[0,1]]` and `[[1,0],[1,1]]` of SL₂(ℤ).
    pub fn sl2_elementary() -> Self {
        Self::new(
            2,
            vec![
                IntMatrix::from_i64(&[vec![1, 1], vec![0, 1]]),
                IntMatrix::from_i64(&[vec![1, 0], vec![1, 1]]),
            ],
        )
        .expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn unipotent_flags(&self) -> &[bool] {
        &self.unipotent
    }

    pub fn determinants(&self) -> &[BigInt] {
        &self.determinants
    }

    pub fn all_unipotent(&self) -> bool {
        self.unipotent.iter().all(|&u| u)
    }

    /// Every generator has determinant 1.
    pub fn in_special_linear(&self) -> bool {
        self.determinants.iter().all(One::is_one)
    }
}

/// Products of at most `radius` generators, deduplicated, in canonical BFS
/// order: by length, then lexicographically by generator indices.
#[derive(Clone, Debug, PartialEq)]
pub struct CayleyBall {
    pub radius: usize,
    pub elements: Vec<IntMatrix>,
    /// Shortest word (generator indices, left to right) for each element.
    pub words: Vec<Vec<usize>>,
    /// `layer_ends[r]` is the number of elements of length ≤ r.
    pub layer_ends: Vec<usize>,
}

impl CayleyBall {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn word_length(&self, index: usize) -> usize {
        self.words[index].len()
    }
}

/// Layer-by-layer Cayley-graph exploration. Each call to [`CayleyBfs::next_layer`]
/// yields the elements of the next word length not seen before.
pub struct CayleyBfs<'a> {
    gens: &'a [IntMatrix],
    seen: HashSet<IntMatrix>,
    frontier: Vec<(IntMatrix, Vec<usize>)>,
    radius: usize,
    budget: usize,
    started: bool,
}

impl<'a> CayleyBfs<'a> {
    pub fn new(s: &'a SemigroupPresentation, budget: usize) -> Self {
        CayleyBfs {
            gens: &s.generators,
            seen: HashSet::new(),
            frontier: Vec::new(),
            radius: 0,
            budget,
            started: false,
        }
    }

    /// Elements discovered so far.
    pub fn count(&self) -> usize {
        self.seen.len()
    }

    /// Radius of the layer most recently returned.
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// `Ok(None)` once the semigroup is exhausted.
    pub fn next_layer(&mut self) -> Result<Option<Vec<(IntMatrix, Vec<usize>)>>> {
        if !self.started {
            self.started = true;
            let id = IntMatrix::identity(self.gens[0].rows());
            self.seen.insert(id.clone());
            self.frontier = vec![(id, Vec::new())];
            return Ok(Some(self.frontier.clone()));
        }
        if self.frontier.is_empty() {
            return Ok(None);
        }
        let gens = self.gens;
        let products = par::map(&self.frontier, |(m, _)| {
            gens.iter().map(|u| m * u).collect::<Vec<_>>()
        });
        let mut layer = Vec::new();
        for ((_, word), prods) in self.frontier.iter().zip(products) {
            for (i, p) in prods.into_iter().enumerate() {
                if self.seen.contains(&p) {
                    continue;
                }
                if self.seen.len() >= self.budget {
                    return Err(Error::BudgetExceeded {
                        what: "Cayley ball elements",
                        limit: self.budget,
                    });
                }
                self.seen.insert(p.clone());
                let mut w = word.clone();
                w.push(i);
                layer.push((p, w));
            }
        }
        self.radius += 1;
        self.frontier = layer.clone();
        if layer.is_empty() {
            return Ok(None);
        }
        Ok(Some(layer))
    }
}

pub fn cayley_ball(s: &SemigroupPresentation, n: usize, budget: usize) -> Result<CayleyBall> {
    let mut bfs = CayleyBfs::new(s, budget);
    let mut elements = Vec::new();
    let mut words = Vec::new();
    let mut layer_ends = Vec::new();
    for _ in 0..=n {
        if let Some(layer) = bfs.next_layer()? {
            for (m, w) in layer {
                elements.push(m);
                words.push(w);
            }
        }
        layer_ends.push(elements.len());
    }
    Ok(CayleyBall {
        radius: n,
        elements,
        words,
        layer_ends,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AffineSpanTrace {
    pub base: Vec<BigRational>,
    /// `dims[n] = dim W_n` for `n = 0..=n_max`.
    pub dims: Vec<usize>,
    /// Echelon basis of `W_n` per radius.
    pub bases: Vec<Vec<Vec<BigRational>>>,
    /// First `n` with `W_n = W_{n+1}`; `None` if no repeat occurs up to `n_max`.
    pub stabilization: Option<usize>,
    pub final_dim: usize,
    /// Orbit vectors `G_{n_max} a` visited.
    pub orbit_size: usize,
}

impl AffineSpanTrace {
    /// The orbit spans `ℝ^d` affinely.
    pub fn is_full(&self) -> bool {
        self.final_dim == self.base.len()
    }

    /// `W_N + a`, a proper invariant affine subspace, when the trace stalls.
    pub fn invariant_subspace(&self) -> Option<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
        if self.is_full() {
            return None;
        }
        Some((
            self.base.clone(),
            self.bases.last().cloned().unwrap_or_default(),
        ))
    }

    /// `W_n` constant from the stabilization radius through `n_max`.
    pub fn constant_after_stabilization(&self) -> bool {
        match self.stabilization {
            Some(n) => self.bases[n..].windows(2).all(|w| w[0] == w[1]),
            None => false,
        }
    }
}

fn rat_mul_vec(m: &IntMatrix, v: &[BigRational]) -> Vec<BigRational> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols()).fold(BigRational::zero(), |acc, j| {
                acc + &v[j] * BigRational::from_integer(m[(i, j)].clone())
            })
        })
        .collect()
}

/// Orbit BFS with left multiplication: `G_{n+1} a = {a} ∪ U·(G_n a)`.
pub fn affine_span_trace(
    s: &SemigroupPresentation,
    a: &[BigRational],
    n_max: usize,
) -> Result<AffineSpanTrace> {
    affine_span_trace_with_budget(s, a, n_max, DEFAULT_ELEMENT_BUDGET)
}

pub fn affine_span_trace_with_budget(
    s: &SemigroupPresentation,
    a: &[BigRational],
    n_max: usize,
    budget: usize,
) -> Result<AffineSpanTrace> {
    let d = s.dim;
    if a.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: a.len(),
        });
    }
    if a.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    if n_max < d {
        return Err(Error::InvalidArgument(format!(
            "n_max {n_max} is below the dimension {d}"
        )));
    }
    let mut seen: HashSet<Vec<BigRational>> = HashSet::from([a.to_vec()]);
    let mut frontier = vec![a.to_vec()];
    let mut span = EchelonBasis::new(d);
    let mut dims = vec![0];
    let mut bases = vec![Vec::new()];
    for _ in 0..n_max {
        let images = par::map(&frontier, |v| {
            s.generators
                .iter()
                .map(|u| rat_mul_vec(u, v))
                .collect::<Vec<_>>()
        });
        let mut next = Vec::new();
        for w in images.into_iter().flatten() {
            if seen.contains(&w) {
                continue;
            }
            if seen.len() >= budget {
                return Err(Error::BudgetExceeded {
                    what: "orbit vectors",
                    limit: budget,
                });
            }
            let diff: Vec<BigRational> = w.iter().zip(a).map(|(x, y)| x - y).collect();
            span.insert(&diff);
            seen.insert(w.clone());
            next.push(w);
        }
        frontier = next;
        dims.push(span.rank());
        bases.push(span.basis().to_vec());
    }
    let stabilization = bases.windows(2).position(|w| w[0] == w[1]);
    let final_dim = *dims.last().expect("nonempty");
    Ok(AffineSpanTrace {
        base: a.to_vec(),
        dims,
        bases,
        stabilization,
        final_dim,
        orbit_size: seen.len(),
    })
}

/// `u(ga − a) − (uga − a) + (ua − a) = 0`.
pub fn proof_identity_holds(u: &IntMatrix, g: &IntMatrix, a: &[BigRational]) -> bool {
    let ga = rat_mul_vec(g, a);
    let lhs = rat_mul_vec(u, &ga.iter().zip(a).map(|(x, y)| x - y).collect::<Vec<_>>());
    let uga = rat_mul_vec(&(u * g), a);
    let ua = rat_mul_vec(u, a);
    (0..a.len()).all(|i| (&lhs[i] - (&uga[i] - &a[i]) + (&ua[i] - &a[i])).is_zero())
}

/// Every pairwise difference of lifts has an orbit reaching full affine dimension by radius `d`.
pub fn check_thmc_hypothesis(
    s: &SemigroupPresentation,
    lifts: &[Vec<BigRational>],
) -> Result<SetHypothesis> {
    validate_lifts(s.dim, lifts)?;
    let pairs: Vec<(usize, usize)> = (0..lifts.len())
        .flat_map(|i| (i + 1..lifts.len()).map(move |j| (i, j)))
        .collect();
    let verdicts = par::map(&pairs, |&(i, j)| {
        let diff: Vec<BigRational> = lifts[i].iter().zip(&lifts[j]).map(|(x, y)| x - y).collect();
        affine_span_trace(s, &diff, s.dim).map(|t| t.is_full())
    });
    for (p, v) in pairs.iter().zip(verdicts) {
        if !v? {
            return Ok(SetHypothesis {
                ok: false,
                bad_pair: Some(*p),
            });
        }
    }
    Ok(SetHypothesis {
        ok: true,
        bad_pair: None,
    })
}

/// Coefficients of `binom(x, j) = x(x−1)⋯(x−j+1)/j!` in the monomial basis.
fn binomial_poly(j: usize) -> Vec<BigRational> {
    let mut p = vec![BigRational::one()];
    for i in 0..j {
        let shift = BigRational::from_integer(BigInt::from(i));
        let mut next = vec![BigRational::zero(); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * &shift;
        }
        p = next;
    }
    let fact: BigInt = (1..=j).map(BigInt::from).product();
    p.into_iter()
        .map(|c| c / BigRational::from_integer(fact.clone()))
        .collect()
}

/// `U(x) = Σ_{j<d} binom(x, j)(u − I)^j`, so `U(n) = uⁿ` for every integer `n`.
/// Coefficients are rational; values at integers are integral.
pub fn unipotent_power_poly(u: &IntMatrix) -> Result<RatPolyMatrix> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch {
            expected: u.rows(),
            got: u.cols(),
        });
    }
    if !is_unipotent(u) {
        return Err(Error::NotUnipotent);
    }
    let d = u.rows();
    let n = (u - &IntMatrix::identity(d)).to_rational();
    let mut coeffs = vec![RatMatrix::zeros(d, d); d.max(1)];
    let mut npow = RatMatrix::identity(d);
    for j in 0..d {
        for (k, c) in binomial_poly(j).into_iter().enumerate() {
            coeffs[k] = &coeffs[k] + &npow.map(|x| x * &c);
        }
        npow = &npow * &n;
    }
    PolyMatrix::new(coeffs)
}

/// Least `R` (one more than the largest exponent) making the base-`R` code
/// `e ↦ Σ e_i R^{i−1}` injective on `E`.
pub fn substitution_exponent(exponents: &[Vec<u32>]) -> Result<u64> {
    if exponents.is_empty() {
        return Err(Error::InvalidArgument("empty exponent set".into()));
    }
    let r = 1 + exponents.iter().flatten().copied().max().unwrap_or(0) as u64;
    let r = r.max(2);
    let codes = substitution_codes(exponents, r)?;
    let distinct: HashSet<&Vec<u32>> = exponents.iter().collect();
    let code_set: HashSet<&BigInt> = codes.iter().collect();
    debug_assert_eq!(distinct.len(), code_set.len());
    if distinct.len() != code_set.len() {
        return Err(Error::InvalidArgument(
            "base-R code is not injective".into(),
        ));
    }
    Ok(r)
}

pub fn substitution_codes(exponents: &[Vec<u32>], r: u64) -> Result<Vec<BigInt>> {
    Ok(exponents
        .iter()
        .map(|e| {
            e.iter().rev().fold(BigInt::zero(), |acc, &x| {
                acc * BigInt::from(r) + BigInt::from(x)
            })
        })
        .collect())
}

/// The univariate matrix `A(x)` together with the data used to build it.
#[derive(Clone, Debug, PartialEq)]
pub struct SubstitutedPolynomial {
    pub poly: RatPolyMatrix,
    /// Number of factors `N = d·m`.
    pub factors: usize,
    /// Generator index of each factor.
    pub order: Vec<usize>,
    pub r: u64,
    /// Monomials of `Q_N` with nonzero coefficient.
    pub terms: usize,
    /// `A` is constant.
    pub degenerate: bool,
    /// Condition (1.1) for `A` and the supplied `a`.
    pub condition_holds: bool,
}

impl SubstitutedPolynomial {
    pub fn flagged(&self) -> bool {
        self.degenerate || !self.condition_holds
    }
}

/// Expands `Π_{i=1}^{N} U_i(n_i)` into a map from exponent vectors to
/// matrices, then substitutes `n_i = x^{R^{i−1}}`.
pub fn thmc_polynomialize(
    s: &SemigroupPresentation,
    a: &[BigRational],
    term_budget: usize,
) -> Result<SubstitutedPolynomial> {
    let d = s.dim;
    if !s.all_unipotent() {
        return Err(Error::NotUnipotent);
    }
    if a.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: a.len(),
        });
    }
    let m = s.generators.len();
    let factors = d * m;
    let order: Vec<usize> = (0..factors).map(|i| i % m).collect();
    let powers = s
        .generators
        .iter()
        .map(unipotent_power_poly)
        .collect::<Result<Vec<_>>>()?;
    let mut terms: BTreeMap<Vec<u32>, RatMatrix> =
        BTreeMap::from([(vec![0; factors], RatMatrix::identity(d))]);
    for (i, &g) in order.iter().enumerate() {
        let p = &powers[g];
        let mut next: BTreeMap<Vec<u32>, RatMatrix> = BTreeMap::new();
        for (e, mat) in &terms {
            for (j, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut e2 = e.clone();
                e2[i] = j as u32;
                let prod = mat * c;
                let slot = next.entry(e2).or_insert_with(|| RatMatrix::zeros(d, d));
                *slot = &*slot + &prod;
            }
            if next.len() > term_budget {
                return Err(Error::BudgetExceeded {
                    what: "polynomial terms",
                    limit: term_budget,
                });
            }
        }
        next.retain(|_, v| !v.is_zero());
        terms = next;
    }
    let exps: Vec<Vec<u32>> = terms.keys().cloned().collect();
    let r = substitution_exponent(&exps)?;
    let codes = substitution_codes(&exps, r)?;
    let degree = codes
        .iter()
        .max()
        .and_then(ToPrimitive::to_usize)
        .unwrap_or(0);
    if degree > term_budget {
        return Err(Error::BudgetExceeded {
            what: "polynomial degree",
            limit: term_budget,
        });
    }
    let mut coeffs = vec![RatMatrix::zeros(d, d); degree + 1];
    for (code, mat) in codes.iter().zip(terms.values()) {
        let k = code.to_usize().expect("bounded above");
        coeffs[k] = &coeffs[k] + mat;
    }
    let poly = PolyMatrix::new(coeffs)?;
    let degenerate = poly.is_constant();
    let condition_holds = if a.iter().all(Zero::is_zero) {
        false
    } else {
        check_condition_1_1(&poly, a)?
    };
    Ok(SubstitutedPolynomial {
        poly,
        factors,
        order,
        r,
        terms: terms.len(),
        degenerate,
        condition_holds,
    })
}

/// `Π_i u_{order[i]}^{n0^{R^{i}}}` computed by repeated squaring, the
/// independent oracle for `A(n0)`.
pub fn substituted_product(
    s: &SemigroupPresentation,
    t: &SubstitutedPolynomial,
    n0: u64,
) -> Result<IntMatrix> {
    let mut acc = IntMatrix::identity(s.dim);
    let mut exp = n0;
    for (i, &g) in t.order.iter().enumerate() {
        if i > 0 {
            exp = (0..t.r)
                .try_fold(1u64, |p, _| p.checked_mul(exp))
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("exponent {n0}^({}^{i}) overflows", t.r))
                })?;
        }
        acc = &acc * &s.generators[g].pow(exp);
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PresentationSummary {
    pub dim: usize,
    pub generators: usize,
    pub unipotent: Vec<bool>,
    pub determinants: Vec<String>,
}

pub fn summarize(s: &SemigroupPresentation) -> PresentationSummary {
    PresentationSummary {
        dim: s.dim,
        generators: s.generators.len(),
        unipotent: s.unipotent.clone(),
        determinants: s.determinants.iter().map(ToString::to_string).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn ball_examples() {
        let id = SemigroupPresentation::new(2, vec![IntMatrix::identity(2)]).unwrap();
        assert_eq!(cayley_ball(&id, 5, 100).unwrap().len(), 1);
        let u = SemigroupPresentation::new(2, vec![m(&[vec![1, 1], vec![0, 1]])]).unwrap();
        let b = cayley_ball(&u, 3, 100).unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!(b.elements[3], m(&[vec![1, 3], vec![0, 1]]));
        let s = SemigroupPresentation::sl2_elementary();
        let b = cayley_ball(&s, 2, 100).unwrap();
        assert_eq!(b.len(), 7);
        assert_eq!(b.layer_ends, vec![1, 3, 7]);
        assert_eq!(b.words[3], vec![0, 0]);
        assert!(matches!(
            cayley_ball(&s, 10, 50),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn flags() {
        let s = SemigroupPresentation::sl2_elementary();
        assert!(s.all_unipotent() && s.in_special_linear());
        let t = SemigroupPresentation::new(2, vec![m(&[vec![2, 1], vec![1, 1]])]).unwrap();
        assert!(!t.all_unipotent() && t.in_special_linear());
    }

    #[test]
    fn span_examples() {
        let s = SemigroupPresentation::sl2_elementary();
        let t = affine_span_trace(&s, &[q(1, 1), q(0, 1)], 2).unwrap();
        assert_eq!(t.dims, vec![0, 1, 2]);
        assert!(t.is_full());
        let id = SemigroupPresentation::new(2, vec![IntMatrix::identity(2)]).unwrap();
        let t = affine_span_trace(&id, &[q(1, 3), q(1, 5)], 3).unwrap();
        assert_eq!((t.stabilization, t.final_dim), (Some(0), 0));
        assert!(t.invariant_subspace().is_some());
        let u = SemigroupPresentation::new(2, vec![m(&[vec![1, 1], vec![0, 1]])]).unwrap();
        let t = affine_span_trace(&u, &[q(0, 1), q(1, 1)], 4).unwrap();
        assert_eq!(t.final_dim, 1);
        assert_eq!(t.bases[4], vec![vec![q(1, 1), q(0, 1)]]);
        assert!(t.constant_after_stabilization());
        assert_eq!(
            affine_span_trace(&u, &[q(0, 1), q(0, 1)], 4).unwrap_err(),
            Error::ZeroVector
        );
        assert!(affine_span_trace(&u, &[q(1, 2), q(0, 1)], 1).is_err());
    }

    #[test]
    fn identity_on_ball() {
        let s = SemigroupPresentation::sl2_elementary();
        let b = cayley_ball(&s, 3, 100).unwrap();
        let a = [q(2, 7), q(-1, 3)];
        for g in &b.elements {
            for u in s.generators() {
                assert!(proof_identity_holds(u, g, &a));
            }
        }
    }

    #[test]
    fn pairwise_hypothesis_examples() {
        let s = SemigroupPresentation::sl2_elementary();
        assert!(
            check_thmc_hypothesis(&s, &[vec![q(1, 3), q(2, 5)]])
                .unwrap()
                .ok
        );
        assert!(
            check_thmc_hypothesis(&s, &[vec![q(1, 3), q(2, 5)], vec![q(1, 7), q(0, 1)]])
                .unwrap()
                .ok
        );
        // differences along the fixed axis of a single shear
        let u = SemigroupPresentation::new(2, vec![m(&[vec![1, 1], vec![0, 1]])]).unwrap();
        let r =
            check_thmc_hypothesis(&u, &[vec![q(1, 3), q(1, 2)], vec![q(2, 3), q(1, 2)]]).unwrap();
        assert_eq!(r.bad_pair, Some((0, 1)));
    }

    #[test]
    fn block_product_spans() {
        // two irreducible 2-dimensional blocks acting on ℝ² × ℝ²
        let e1 = m(&[
            vec![1, 1, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ]);
        let e2 = m(&[
            vec![1, 0, 0, 0],
            vec![1, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ]);
        let f1 = m(&[
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 1],
            vec![0, 0, 0, 1],
        ]);
        let f2 = m(&[
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 1, 1],
        ]);
        let s = SemigroupPresentation::new(4, vec![e1, e2, f1, f2]).unwrap();
        let lifts = vec![
            vec![q(1, 3), q(1, 5), q(1, 7), q(1, 11)],
            vec![q(1, 2), q(0, 1), q(2, 3), q(0, 1)],
        ];
        assert!(check_thmc_hypothesis(&s, &lifts).unwrap().ok);
        let flat = vec![
            vec![q(1, 3), q(1, 5), q(1, 7), q(1, 11)],
            vec![q(1, 2), q(0, 1), q(1, 7), q(1, 11)],
        ];
        assert!(!check_thmc_hypothesis(&s, &flat).unwrap().ok);
    }

    #[test]
    fn unipotent_powers() {
        let id = unipotent_power_poly(&IntMatrix::identity(3)).unwrap();
        assert_eq!(id.degree(), 0);
        let p = unipotent_power_poly(&m(&[vec![1, 1], vec![0, 1]])).unwrap();
        assert_eq!(p.degree(), 1);
        assert_eq!(
            p.coeff(1).to_integer().unwrap(),
            m(&[vec![0, 1], vec![0, 0]])
        );
        let u = m(&[vec![1, 1, 1], vec![0, 1, 1], vec![0, 0, 1]]);
        let p = unipotent_power_poly(&u).unwrap();
        for n in 0..=6u64 {
            assert_eq!(p.eval_integer(&BigInt::from(n)).unwrap(), u.pow(n));
        }
        // entry (1,3) is n(n+1)/2
        assert_eq!(p.coeff(2)[(0, 2)], q(1, 2));
        assert_eq!(
            p.eval_integer(&BigInt::from(-1)).unwrap(),
            m(&[vec![1, -1, 0], vec![0, 1, -1], vec![0, 0, 1]])
        );
        assert_eq!(
            unipotent_power_poly(&m(&[vec![2, 1], vec![1, 1]])),
            Err(Error::NotUnipotent)
        );
    }

    #[test]
    fn substitution_examples() {
        let e = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
        assert_eq!(substitution_exponent(&e).unwrap(), 2);
        let codes = substitution_codes(&e, 2).unwrap();
        assert_eq!(
            codes,
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(2)]
        );
        let e = vec![vec![2, 1], vec![0, 3]];
        assert_eq!(substitution_exponent(&e).unwrap(), 4);
        assert_eq!(
            substitution_codes(&e, 4).unwrap(),
            vec![BigInt::from(6), BigInt::from(12)]
        );
        assert_eq!(substitution_exponent(&[vec![1, 2], vec![1, 2]]).unwrap(), 3);
        assert!(substitution_exponent(&[]).is_err());
    }

    #[test]
    fn polynomialize_sl2() {
        let s = SemigroupPresentation::sl2_elementary();
        let a = [q(1, 3), q(2, 7)];
        let t = thmc_polynomialize(&s, &a, DEFAULT_TERM_BUDGET).unwrap();
        assert_eq!((t.factors, t.r), (4, 2));
        assert!(t.condition_holds && !t.degenerate);
        for n0 in 1..=3u64 {
            let direct = substituted_product(&s, &t, n0).unwrap();
            assert_eq!(t.poly.eval_integer(&BigInt::from(n0)).unwrap(), direct);
        }
        let g = s.generators();
        let prod = &(&(&g[0] * &g[1]) * &g[0]) * &g[1];
        assert_eq!(t.poly.eval_integer(&BigInt::one()).unwrap(), prod);
    }

    #[test]
    fn polynomialize_flags() {
        let u = SemigroupPresentation::new(2, vec![m(&[vec![1, 1], vec![0, 1]])]).unwrap();
        let t = thmc_polynomialize(&u, &[q(1, 2), q(0, 1)], DEFAULT_TERM_BUDGET).unwrap();
        assert!(!t.condition_holds && t.flagged());
        let id = SemigroupPresentation::new(2, vec![IntMatrix::identity(2)]).unwrap();
        let t = thmc_polynomialize(&id, &[q(1, 2), q(1, 3)], DEFAULT_TERM_BUDGET).unwrap();
        assert!(t.degenerate && t.poly.coeff(0).is_identity());
        let bad = SemigroupPresentation::new(2, vec![m(&[vec![2, 1], vec![1, 1]])]).unwrap();
        assert_eq!(
            thmc_polynomialize(&bad, &[q(1, 2), q(0, 1)], 10),
            Err(Error::NotUnipotent)
        );
    }
}
