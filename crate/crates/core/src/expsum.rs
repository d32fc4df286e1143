//! Exponential sums on the torus.
//!
//! `e(t) = exp(2πit)`. Sums over the punctured frequency box
//! `B(M) = {m ∈ ℤ^d : m ≠ 0, ‖m‖∞ ≤ M}` are evaluated coordinate-separably:
//! a table of `e(m_j·u_ij)` per coordinate, then a depth-first walk over the
//! box multiplying one table row per level. Exact points have their angles
//! reduced mod 1 in integer arithmetic before any trig call.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::par;
use crate::torus::{
    frac_f64, is_eps_dense, min_torsion_order, DensityStatus, Mode, TorusPoint, TorusPointSet,
};

/// Largest modulus accepted by [`complete_rational_sum`].
pub const MAX_COMPLETE_SUM_MODULUS: u64 = 1_000_000;

/// Tolerance on `lhs ≤ rhs` comparisons of floating sums.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[inline]
pub fn e(t: f64) -> Complex64 {
    let a = TAU * frac_f64(t);
    Complex64::new(a.cos(), a.sin())
}

/// `e(num/den)` with the numerator reduced mod `den` exactly.
pub fn e_rational(num: &BigInt, den: &BigInt) -> Complex64 {
    let r = num.mod_floor(den);
    let t = BigRational::new(r, den.clone()).to_f64().unwrap_or(0.0);
    e(t)
}

/// `M = ⌈d/ε⌉`, computed from the exact binary value of `eps`.
pub fn box_radius_for(dim: usize, eps: f64) -> Result<u64> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::EpsOutOfRange(eps));
    }
    let e = BigRational::from_f64(eps).ok_or(Error::EpsOutOfRange(eps))?;
    let m = (BigRational::from_integer(BigInt::from(dim)) / e).ceil();
    m.to_integer()
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("box radius overflow".into()))
}

/// The punctured L∞ frequency box `B(M)` in `ℤ^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FreqBox {
    pub dim: usize,
    pub radius: u64,
}

impl FreqBox {
    pub fn new(dim: usize, radius: u64) -> Self {
        FreqBox { dim, radius }
    }

    pub fn for_eps(dim: usize, eps: f64) -> Result<Self> {
        Ok(FreqBox {
            dim,
            radius: box_radius_for(dim, eps)?,
        })
    }

    /// `(2M+1)^d − 1`
    pub fn len(&self) -> u128 {
        (2 * self.radius as u128 + 1).pow(self.dim as u32) - 1
    }

    pub fn is_empty(&self) -> bool {
        self.radius == 0
    }

    /// Lexicographic enumeration, lazily.
    pub fn iter(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        let m = self.radius as i64;
        let mut cur = vec![-m; self.dim];
        let mut done = self.dim == 0;
        std::iter::from_fn(move || loop {
            if done {
                return None;
            }
            let out = cur.clone();
            let mut k = self.dim;
            loop {
                if k == 0 {
                    done = true;
                    break;
                }
                k -= 1;
                if cur[k] < m {
                    cur[k] += 1;
                    break;
                }
                cur[k] = -m;
            }
            if out.iter().any(|&x| x != 0) {
                return Some(out);
            }
        })
    }
}

/// Per-coordinate tables `e(m·u_ij)` for `m ∈ [−M, M]`.
struct PhaseTable {
    dim: usize,
    radius: usize,
    k: usize,
    /// Index `[(j * (2M+1) + (m + M)) * k + i]`.
    data: Vec<Complex64>,
}

impl PhaseTable {
    fn new(points: &[TorusPoint], dim: usize, radius: u64) -> Self {
        let r = radius as usize;
        let width = 2 * r + 1;
        let k = points.len();
        let mut data = vec![Complex64::zero(); dim * width * k];
        for (i, p) in points.iter().enumerate() {
            for j in 0..dim {
                match p {
                    TorusPoint::Exact(c) => {
                        let num = c[j].numer();
                        let den = c[j].denom();
                        for (s, m) in (-(r as i64)..=r as i64).enumerate() {
                            data[(j * width + s) * k + i] = e_rational(&(num * m), den);
                        }
                    }
                    TorusPoint::Float(c) => {
                        for (s, m) in (-(r as i64)..=r as i64).enumerate() {
                            data[(j * width + s) * k + i] = e(frac_f64(m as f64 * c[j]));
                        }
                    }
                }
            }
        }
        PhaseTable {
            dim,
            radius: r,
            k,
            data,
        }
    }

    fn row(&self, j: usize, m: i64) -> &[Complex64] {
        let width = 2 * self.radius + 1;
        let s = (m + self.radius as i64) as usize;
        &self.data[(j * width + s) * self.k..(j * width + s + 1) * self.k]
    }

    /// Visits `(m, Σ_i e(m·u_i))` over the box. With `half`, only vectors whose
    /// first nonzero coordinate is positive are visited.
    fn walk(&self, first: i64, half: bool, visit: &mut dyn FnMut(&[i64], Complex64)) {
        let mut m = vec![0i64; self.dim];
        m[0] = first;
        let prod: Vec<Complex64> = self.row(0, first).to_vec();
        self.walk_rec(1, half && first == 0, &mut m, &prod, visit);
    }

    fn walk_rec(
        &self,
        depth: usize,
        leading_zero: bool,
        m: &mut Vec<i64>,
        prod: &[Complex64],
        visit: &mut dyn FnMut(&[i64], Complex64),
    ) {
        if depth == self.dim {
            if m.iter().any(|&x| x != 0) {
                visit(m, prod.iter().sum());
            }
            return;
        }
        let r = self.radius as i64;
        let lo = if leading_zero { 0 } else { -r };
        let mut next = vec![Complex64::zero(); self.k];
        for mj in lo..=r {
            m[depth] = mj;
            for ((n, p), t) in next.iter_mut().zip(prod).zip(self.row(depth, mj)) {
                *n = p * t;
            }
            self.walk_rec(depth + 1, leading_zero && mj == 0, m, &next, visit);
        }
        m[depth] = 0;
    }
}

fn check_points(points: &[TorusPoint]) -> Result<usize> {
    let first = points.first().ok_or(Error::EmptySet)?;
    let d = first.dim();
    for p in points {
        if p.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.dim(),
            });
        }
        if p.mode() != first.mode() {
            return Err(Error::ModeMismatch);
        }
    }
    Ok(d)
}

/// `Σ_{m∈B(M)} f(Σ_i e(m·u_i))` for a conjugation-symmetric `f`
/// (`f(z) = f(z̄)`), so only half the box is walked. Partial sums over the
/// leading coordinate are combined in a fixed order.
fn symmetric_box_sum(
    points: &[TorusPoint],
    bx: FreqBox,
    f: impl Fn(Complex64) -> f64 + Sync + Send,
) -> f64 {
    let table = PhaseTable::new(points, bx.dim, bx.radius);
    let firsts: Vec<i64> = (0..=bx.radius as i64).collect();
    let partials = par::map(&firsts, |&m0| {
        let mut acc = 0.0;
        table.walk(m0, true, &mut |_, s| acc += f(s));
        acc
    });
    2.0 * partials.iter().sum::<f64>()
}

/// Every term `(m, Σ_i e(m·u_i))` of the box in lexicographic order.
pub fn box_terms(points: &[TorusPoint], bx: FreqBox) -> Result<Vec<(Vec<i64>, Complex64)>> {
    let d = check_points(points)?;
    if d != bx.dim {
        return Err(Error::DimensionMismatch {
            expected: bx.dim,
            got: d,
        });
    }
    let table = PhaseTable::new(points, bx.dim, bx.radius);
    let mut out = Vec::new();
    for m0 in -(bx.radius as i64)..=bx.radius as i64 {
        table.walk(m0, false, &mut |m, s| out.push((m.to_vec(), s)));
    }
    Ok(out)
}

/// `Σ_{m∈B(M)} |Σ_i e(m·u_i)|`.
pub fn box_abs_sum(points: &[TorusPoint], bx: FreqBox) -> Result<f64> {
    check_points(points)?;
    Ok(symmetric_box_sum(points, bx, |s| s.norm()))
}

/// `Σ_{m∈B(M)} |Σ_i e(m·u_i)|²`.
pub fn box_sq_sum(points: &[TorusPoint], bx: FreqBox) -> Result<f64> {
    check_points(points)?;
    Ok(symmetric_box_sum(points, bx, |s| s.norm_sqr()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBoundCheck {
    pub verified: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub radius: u64,
}

/// Evaluates both sides of `k/3 ≤ Σ_{m∈B(M)} |Σ_i e(m·u_i)|`, `M = ⌈d/ε⌉`,
/// for points with `|u_i| > ε`.
pub fn bmv_lower_bound_holds(points: &[TorusPoint], eps: f64) -> Result<LowerBoundCheck> {
    let d = check_points(points)?;
    let bx = FreqBox::for_eps(d, eps)?;
    let eps_q = BigRational::from_f64(eps).ok_or(Error::EpsOutOfRange(eps))?;
    for (index, p) in points.iter().enumerate() {
        let far = match p.norm_exact() {
            Some(n) => n > eps_q,
            None => p.norm() > eps,
        };
        if !far {
            return Err(Error::PointTooClose {
                index,
                norm: p.norm(),
                eps,
            });
        }
    }
    let lhs = points.len() as f64 / 3.0;
    let rhs = box_abs_sum(points, bx)?;
    Ok(LowerBoundCheck {
        verified: lhs <= rhs + SUM_TOLERANCE,
        lhs,
        rhs,
        radius: bx.radius,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NonDensityCertificate {
    /// False when `gY` is not certified NOT_DENSE; the sums are then zero.
    pub applicable: bool,
    /// `k²/9`
    pub raw_lhs: f64,
    /// `|B(M)|·Σ_m |Σ_i e(m·(α − g x_i))|²`
    pub raw_rhs: f64,
    /// `Σ_m Σ_{i,j} e(m·g(x_i − x_j))`, real by symmetry.
    pub pair_form: f64,
    pub witness: Option<TorusPoint>,
    pub radius: u64,
}

impl NonDensityCertificate {
    pub fn holds(&self) -> bool {
        self.applicable && self.raw_lhs <= self.raw_rhs + SUM_TOLERANCE * self.raw_rhs.max(1.0)
    }
}

/// Non-density certificate for `gY`: with `α` an empty-ball witness, every
/// `α − g x_i` is farther than ε from 0, and the squared form of the lower
/// bound above gives `k²/9 ≤ |B(M)|·Σ_m |Σ_i e(m·(α − g x_i))|²`.
pub fn lemma24_certificate(
    y: &TorusPointSet,
    g: &IntMatrix,
    eps: f64,
    max_refinements: u32,
) -> Result<NonDensityCertificate> {
    let d = y.dim();
    let bx = FreqBox::for_eps(d, eps)?;
    let images = y
        .points()
        .iter()
        .map(|p| p.apply(g))
        .collect::<Result<Vec<_>>>()?;
    let image_set = TorusPointSet::new_dedup(d, images.clone())?;
    let verdict = is_eps_dense(&image_set, eps, max_refinements)?;
    if verdict.status != DensityStatus::NotDense {
        return Ok(NonDensityCertificate {
            applicable: false,
            raw_lhs: 0.0,
            raw_rhs: 0.0,
            pair_form: 0.0,
            witness: None,
            radius: bx.radius,
        });
    }
    let alpha = verdict.witness.expect("NOT_DENSE carries a witness");
    let shifted = images
        .iter()
        .map(|gx| alpha.sub(gx))
        .collect::<Result<Vec<_>>>()?;
    let k = y.len() as f64;
    let card = bx.len() as f64;
    Ok(NonDensityCertificate {
        applicable: true,
        raw_lhs: k * k / 9.0,
        raw_rhs: card * box_sq_sum(&shifted, bx)?,
        pair_form: box_sq_sum(&images, bx)?,
        witness: Some(alpha),
        radius: bx.radius,
    })
}

/// Counts of ordered pairs `(i, j)`, `i ≠ j`, by the torsion order of
/// `x_i − x_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionHistogram {
    pub counts: BTreeMap<BigInt, u64>,
    pub k: usize,
}

impl TorsionHistogram {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

pub fn torsion_histogram(y: &TorusPointSet) -> Result<TorsionHistogram> {
    if y.mode() != Mode::Exact {
        return Err(Error::FloatNotAllowed);
    }
    let pts = y.points();
    let mut counts = BTreeMap::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let q = min_torsion_order(&pts[i].sub(&pts[j])?)?;
            // x_j − x_i has the same order.
            *counts.entry(q).or_insert(0) += 2;
        }
    }
    Ok(TorsionHistogram {
        counts,
        k: pts.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HqSum {
    pub sum: f64,
    pub k: usize,
}

/// `Σ_q h_q q^{−r}`.
pub fn hq_sum_scaling(y: &TorusPointSet, r: f64) -> Result<HqSum> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "exponent r = {r} must be positive"
        )));
    }
    let h = torsion_histogram(y)?;
    let sum = h
        .counts
        .iter()
        .map(|(q, &c)| c as f64 * q.to_f64().unwrap_or(f64::INFINITY).powf(-r))
        .sum();
    Ok(HqSum { sum, k: h.k })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `S = (1/q) Σ_{n=1}^{q} e(θ + (1/q) Σ_j b_j n^j)`, with `b[0]` the
/// coefficient of `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompleteSumSpec {
    pub modulus: u64,
    pub coeffs: Vec<i64>,
    pub theta: f64,
}

pub fn complete_rational_sum(spec: &CompleteSumSpec) -> Result<Complex64> {
    let q = spec.modulus;
    if q == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    if q > MAX_COMPLETE_SUM_MODULUS {
        return Err(Error::ModulusTooLarge(q));
    }
    if spec.coeffs.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one coefficient required".into(),
        ));
    }
    let qi = q as i128;
    let b: Vec<u128> = spec
        .coeffs
        .iter()
        .map(|&c| (c as i128).rem_euclid(qi) as u128)
        .collect();
    let q = q as u128;
    let mut acc = Complex64::zero();
    for n in 1..=q {
        let nm = n % q;
        // Horner over n·(b_1 + n·(b_2 + ...)).
        let mut r = 0u128;
        for &c in b.iter().rev() {
            r = (r + c) % q;
            r = r * nm % q;
        }
        acc += e(spec.theta + r as f64 / q as f64);
    }
    Ok(acc / q as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumDecayRow {
    pub modulus: u64,
    pub max_abs: f64,
    /// `max|S|·q^{1/D − δ}`
    pub normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumDecayTable {
    pub degree: u32,
    pub delta: f64,
    pub rows: Vec<SumDecayRow>,
    /// Log-log slope of the normalized column (0 when every sum vanished).
    pub slope: f64,
    pub bounded: bool,
}

/// Default exponent slack in the decay check.
pub const SUM_DECAY_DELTA: f64 = 0.05;

/// Allowed growth of the normalized column before it counts as unbounded.
pub const SUM_DECAY_SLOPE_TOLERANCE: f64 = 0.05;

/// Tabulates `max |S|` over random degree-`D` polynomials mod each `q`
/// (leading coefficient nonzero mod q, coefficients jointly coprime to q) and
/// checks that `max|S|·q^{1/D − δ}` does not grow with `q`.
pub fn hua_decay_check(
    degree: u32,
    moduli: &[u64],
    trials: usize,
    seed: u64,
) -> Result<SumDecayTable> {
    if degree == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if moduli.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("moduli must be increasing".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exponent = 1.0 / degree as f64 - SUM_DECAY_DELTA;
    let mut rows = Vec::with_capacity(moduli.len());
    for &q in moduli {
        if q < 2 {
            return Err(Error::InvalidArgument("moduli must be at least 2".into()));
        }
        let mut max_abs = 0.0f64;
        for _ in 0..trials {
            let coeffs = loop {
                let mut b: Vec<i64> = (0..degree).map(|_| rng.gen_range(0..q as i64)).collect();
                if b[degree as usize - 1] == 0 {
                    b[degree as usize - 1] = rng.gen_range(1..q as i64);
                }
                let g = b.iter().fold(q as i64, |acc, &x| acc.gcd(&x));
                if g == 1 {
                    break b;
                }
            };
            let s = complete_rational_sum(&CompleteSumSpec {
                modulus: q,
                coeffs,
                theta: 0.0,
            })?;
            max_abs = max_abs.max(s.norm());
        }
        rows.push(SumDecayRow {
            modulus: q,
            max_abs,
            normalized: max_abs * (q as f64).powf(exponent),
        });
    }
    let live: Vec<&SumDecayRow> = rows.iter().filter(|r| r.max_abs > 1e-9).collect();
    let slope = if live.len() >= 2 {
        let xs: Vec<f64> = live.iter().map(|r| r.modulus as f64).collect();
        let ys: Vec<f64> = live.iter().map(|r| r.normalized).collect();
        loglog_slope(&xs, &ys)
    } else {
        0.0
    };
    Ok(SumDecayTable {
        degree,
        delta: SUM_DECAY_DELTA,
        rows,
        slope,
        bounded: slope <= SUM_DECAY_SLOPE_TOLERANCE,
    })
}

/// `frac(c·x)` with the rounding error of the product recovered by an FMA.
fn frac_product(c: f64, x: f64) -> f64 {
    let p = c * x;
    let err = c.mul_add(x, -p);
    frac_f64(frac_f64(p) + err)
}

/// `(1/N) Σ_{n=1}^{N} e(c_1 n + … + c_D n^D)`.
pub fn weyl_average(coeffs: &[f64], n_terms: u64) -> Result<Complex64> {
    if n_terms == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let frac_coeffs: Vec<f64> = coeffs.iter().map(|&c| frac_f64(c)).collect();
    let mut acc = Complex64::zero();
    for n in 1..=n_terms {
        let nf = n as f64;
        let mut power = 1.0;
        let mut phase = 0.0;
        for &c in &frac_coeffs {
            power *= nf;
            phase += frac_product(c, power);
        }
        acc += e(phase);
    }
    Ok(acc / n_terms as f64)
}

/// Distance from `x` to the nearest integer.
pub fn dist_to_integer(x: f64) -> f64 {
    let f = frac_f64(x);
    f.min(1.0 - f)
}

/// Exact integer gcd of a slice together with `q`.
pub fn gcd_with(values: &[BigInt], q: &BigInt) -> BigInt {
    values.iter().fold(q.abs(), |acc, v| acc.gcd(v))
}

/// Reference value `q^{−1/2}` used by the quadratic Gauss-sum checks.
pub fn gauss_magnitude(q: u64) -> f64 {
    1.0 / (q as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(c: &[(i64, i64)]) -> TorusPoint {
        TorusPoint::from_fractions(c).unwrap()
    }

    #[test]
    fn box_cardinality_and_enumeration() {
        let bx = FreqBox::new(2, 3);
        assert_eq!(bx.len(), 48);
        let v: Vec<_> = bx.iter().collect();
        assert_eq!(v.len(), 48);
        assert!(!v.contains(&vec![0, 0]));
        assert_eq!(v[0], vec![-3, -3]);
    }

    #[test]
    fn box_radius_uses_exact_ceiling() {
        assert_eq!(box_radius_for(3, 0.1).unwrap(), 30);
        assert_eq!(box_radius_for(1, 0.3).unwrap(), 4);
        assert_eq!(box_radius_for(1, 0.2).unwrap(), 5);
        assert_eq!(box_radius_for(2, 0.25).unwrap(), 8);
    }

    #[test]
    fn bmv_single_half_point() {
        let c = bmv_lower_bound_holds(&[ex(&[(1, 2)])], 0.3).unwrap();
        assert_eq!(c.radius, 4);
        assert!((c.rhs - 8.0).abs() < 1e-12);
        assert!(c.verified);
    }

    #[test]
    fn bmv_thirds_matches_direct_sum() {
        let pts = [ex(&[(1, 3)]), ex(&[(2, 3)])];
        let c = bmv_lower_bound_holds(&pts, 0.2).unwrap();
        assert_eq!(c.radius, 5);
        // direct: Σ_{m≠0, |m|≤5} |e(m/3) + e(2m/3)|
        let direct: f64 = (-5i64..=5)
            .filter(|&m| m != 0)
            .map(|m| (e(m as f64 / 3.0) + e(2.0 * m as f64 / 3.0)).norm())
            .sum();
        assert!((c.rhs - direct).abs() < 1e-12);
        assert!((c.lhs - 2.0 / 3.0).abs() < 1e-15);
        assert!(c.verified);
    }

    #[test]
    fn bmv_rejects_close_points() {
        let err = bmv_lower_bound_holds(&[ex(&[(1, 10)])], 0.1).unwrap_err();
        assert!(matches!(err, Error::PointTooClose { index: 0, .. }));
    }

    #[test]
    fn half_box_matches_full_enumeration() {
        let pts = [
            ex(&[(1, 7), (3, 11)]),
            ex(&[(5, 13), (2, 3)]),
            ex(&[(1, 2), (4, 9)]),
        ];
        let bx = FreqBox::new(2, 4);
        let full: f64 = box_terms(&pts, bx)
            .unwrap()
            .iter()
            .map(|(_, s)| s.norm())
            .sum();
        assert!((box_abs_sum(&pts, bx).unwrap() - full).abs() < 1e-10);
    }

    #[test]
    fn certificate_single_point() {
        let y = TorusPointSet::from_fractions(1, &[vec![(0, 1)]]).unwrap();
        let c = lemma24_certificate(&y, &IntMatrix::identity(1), 0.4, 8).unwrap();
        assert!(c.applicable);
        assert_eq!(c.radius, 3);
        assert!((c.raw_lhs - 1.0 / 9.0).abs() < 1e-15);
        // |B(3)| = 6, six unit-modulus terms.
        assert!((c.raw_rhs - 36.0).abs() < 1e-10);
        assert!(c.holds());
    }

    #[test]
    fn certificate_dense_image_not_applicable() {
        let pts: Vec<Vec<(i64, i64)>> = (0..10).map(|j| vec![(j, 10)]).collect();
        let y = TorusPointSet::from_fractions(1, &pts).unwrap();
        let c = lemma24_certificate(&y, &IntMatrix::identity(1), 0.2, 8).unwrap();
        assert!(!c.applicable);
    }

    #[test]
    fn histogram_examples() {
        let y = TorusPointSet::from_fractions(1, &[vec![(0, 1)], vec![(1, 2)]]).unwrap();
        let h = torsion_histogram(&y).unwrap();
        assert_eq!(
            h.counts.into_iter().collect::<Vec<_>>(),
            vec![(BigInt::from(2), 2)]
        );

        let y =
            TorusPointSet::from_fractions(1, &[vec![(0, 1)], vec![(1, 3)], vec![(2, 3)]]).unwrap();
        let h = torsion_histogram(&y).unwrap();
        assert_eq!(
            h.counts.into_iter().collect::<Vec<_>>(),
            vec![(BigInt::from(3), 6)]
        );

        let y = TorusPointSet::from_fractions(2, &[vec![(0, 1), (0, 1)], vec![(1, 2), (1, 4)]])
            .unwrap();
        let h = torsion_histogram(&y).unwrap();
        assert_eq!(
            h.counts.into_iter().collect::<Vec<_>>(),
            vec![(BigInt::from(4), 2)]
        );
    }

    #[test]
    fn hq_examples() {
        let y = TorusPointSet::from_fractions(1, &[vec![(0, 1)], vec![(1, 2)]]).unwrap();
        assert!((hq_sum_scaling(&y, 1.0).unwrap().sum - 1.0).abs() < 1e-15);
        let q0 = 13;
        let pts: Vec<Vec<(i64, i64)>> = (0..q0).map(|j| vec![(j, q0)]).collect();
        let y = TorusPointSet::from_fractions(1, &pts).unwrap();
        assert!((hq_sum_scaling(&y, 1.0).unwrap().sum - (q0 - 1) as f64).abs() < 1e-12);
        let fl = TorusPointSet::from_floats(1, &[vec![0.5]]).unwrap();
        assert_eq!(torsion_histogram(&fl), Err(Error::FloatNotAllowed));
    }

    #[test]
    fn complete_sum_examples() {
        let s = complete_rational_sum(&CompleteSumSpec {
            modulus: 1,
            coeffs: vec![3],
            theta: 0.25,
        })
        .unwrap();
        assert!((s - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let s = complete_rational_sum(&CompleteSumSpec {
            modulus: 5,
            coeffs: vec![0, 1],
            theta: 0.0,
        })
        .unwrap();
        assert!((s.norm() - 1.0 / 5f64.sqrt()).abs() < 1e-12);
        let s = complete_rational_sum(&CompleteSumSpec {
            modulus: 4,
            coeffs: vec![1],
            theta: 0.0,
        })
        .unwrap();
        assert!(s.norm() < 1e-12);
        assert_eq!(
            complete_rational_sum(&CompleteSumSpec {
                modulus: 2_000_000,
                coeffs: vec![1],
                theta: 0.0
            }),
            Err(Error::ModulusTooLarge(2_000_000))
        );
    }

    #[test]
    fn complete_linear_sums_vanish() {
        let t = hua_decay_check(1, &[5, 7, 11, 13], 10, 1).unwrap();
        assert!(t.rows.iter().all(|r| r.max_abs < 1e-10));
        assert!(t.bounded);
    }

    #[test]
    fn complete_quadratic_sums_have_gauss_magnitude() {
        let primes = [5u64, 7, 11, 13, 101, 997];
        let t = hua_decay_check(2, &primes, 8, 3).unwrap();
        for r in &t.rows {
            assert!(
                (r.max_abs - gauss_magnitude(r.modulus)).abs() < 1e-9,
                "{r:?}"
            );
        }
        assert!(t.bounded);
    }

    #[test]
    fn weyl_examples() {
        assert!((weyl_average(&[0.0, 0.0], 50).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(weyl_average(&[0.5], 1000).unwrap().norm() < 1e-12);
        let alpha = 2f64.sqrt() - 1.0;
        let n = 10_000;
        let bound = 1.0 / (2.0 * n as f64 * dist_to_integer(alpha));
        assert!(weyl_average(&[alpha], n).unwrap().norm() <= bound);
    }
}
