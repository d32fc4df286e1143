//! Polynomial matrices `A(x) = Σ_j C_j x^j`, the frequency maps
//! `T_m u = m·(A(x) − A(0))u`, and the difference-set condition
//!
//! > for all nonzero integer `v` and distinct lifts `ỹ, ỹ'`,
//! > `v·(A(x) − A(0))(ỹ − ỹ') ≠ 0` as a polynomial.
//!
//! With `a = ỹ − ỹ'` rational, a killer `v` exists iff the rational vectors
//! `C_1 a, …, C_D a` fail to span `ℚ^d`: a real orthogonal vector to a
//! rational subspace can be taken rational, hence integral after scaling.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{EchelonBasis, IntMatrix, Matrix, RatMatrix};

/// Condition-number ceiling of the floating rank heuristic.
pub const FLOAT_CONDITION_LIMIT: f64 = 1e8;

#[derive(Clone, PartialEq)]
pub struct PolyMatrix<T> {
    dim: usize,
    coeffs: Vec<Matrix<T>>,
}

pub type IntPolyMatrix = PolyMatrix<BigInt>;
pub type RatPolyMatrix = PolyMatrix<BigRational>;

impl<T: std::fmt::Display> std::fmt::Debug for PolyMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl<T: std::fmt::Display> std::fmt::Debug for FreqMap<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let m: Vec<String> = self.m.iter().map(ToString::to_string).collect();
        f.debug_struct("FreqMap")
            .field("m", &m)
            .field("rows", &self.rows)
            .finish()
    }
}

/// Coefficient rings that embed in ℚ.
pub trait ToRational {
    fn to_rational(&self) -> BigRational;
}

impl ToRational for BigInt {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }
}

impl ToRational for BigRational {
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
}

impl<T: Clone + Num> PolyMatrix<T> {
    /// `coeffs[j]` multiplies `x^j`. Trailing zero coefficients are dropped so
    /// the degree is tight; a zero polynomial keeps its constant term.
    pub fn new(mut coeffs: Vec<Matrix<T>>) -> Result<Self> {
        let dim = coeffs
            .first()
            .ok_or_else(|| Error::InvalidArgument("no coefficient matrices".into()))?
            .rows();
        for c in &coeffs {
            if c.rows() != dim || c.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.cols(),
                });
            }
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(Matrix::is_zero) {
            coeffs.pop();
        }
        Ok(PolyMatrix { dim, coeffs })
    }

    pub fn constant(c0: Matrix<T>) -> Result<Self> {
        Self::new(vec![c0])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &Matrix<T> {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[Matrix<T>] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> Matrix<T> {
        let mut acc = self.coeffs.last().expect("nonempty").clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &acc.map(|e| e.clone() * x.clone()) + c;
        }
        acc
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }
}

impl IntPolyMatrix {
    pub fn to_rational(&self) -> RatPolyMatrix {
        PolyMatrix {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(IntMatrix::to_rational).collect(),
        }
    }

    pub fn eval_at(&self, n: i64) -> IntMatrix {
        self.eval(&BigInt::from(n))
    }
}

impl RatPolyMatrix {
    pub fn to_integer(&self) -> Option<IntPolyMatrix> {
        let coeffs = self
            .coeffs
            .iter()
            .map(RatMatrix::to_integer)
            .collect::<Option<Vec<_>>>()?;
        Some(PolyMatrix {
            dim: self.dim,
            coeffs,
        })
    }

    /// `A(n)` for integer-valued polynomials; `None` if some entry is not integral.
    pub fn eval_integer(&self, n: &BigInt) -> Option<IntMatrix> {
        self.eval(&BigRational::from_integer(n.clone()))
            .to_integer()
    }

    /// Least common denominator of all coefficients.
    pub fn denominator(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| {
            c.to_rows()
                .iter()
                .flatten()
                .fold(acc, |a, x| num_integer::Integer::lcm(&a, x.denom()))
        })
    }
}

/// `A(n)` with exact integers.
pub fn eval_poly_matrix(a: &IntPolyMatrix, n: &BigInt) -> IntMatrix {
    a.eval(n)
}

/// Row `j−1` of `rows` is `mᵀ C_j`, `j = 1..D`.
#[derive(Clone, PartialEq)]
pub struct FreqMap<T> {
    pub m: Vec<T>,
    pub rows: Matrix<T>,
}

impl<T: Clone + Num> FreqMap<T> {
    /// Coefficients of `m·(A(x) − A(0))u` in degrees `1..=D`.
    pub fn apply(&self, u: &[T]) -> Vec<T> {
        if self.rows.rows() == 0 {
            return Vec::new();
        }
        self.rows.mul_vec(u)
    }
}

pub fn freq_map<T: Clone + Num>(a: &PolyMatrix<T>, m: &[T]) -> Result<FreqMap<T>> {
    if m.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: m.len(),
        });
    }
    if m.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let rows: Vec<Vec<T>> = (1..=a.degree()).map(|j| a.coeff(j).vec_mul(m)).collect();
    let rows = if rows.is_empty() {
        Matrix::zeros(0, a.dim())
    } else {
        Matrix::from_rows(rows)?
    };
    Ok(FreqMap {
        m: m.to_vec(),
        rows,
    })
}

/// Span of `C_1 a, …, C_D a`.
fn image_span<T: Clone + Num + ToRational>(
    a: &PolyMatrix<T>,
    diff: &[BigRational],
) -> Result<EchelonBasis> {
    if diff.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: diff.len(),
        });
    }
    if diff.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let mut basis = EchelonBasis::new(a.dim());
    for j in 1..=a.degree() {
        let cj = a.coeff(j).map(ToRational::to_rational);
        basis.insert(&cj.mul_vec(diff));
    }
    Ok(basis)
}

/// True iff no nonzero integer `v` has `vᵀ C_j a = 0` for every `j ≥ 1`.
pub fn check_condition_1_1<T: Clone + Num + ToRational>(
    a: &PolyMatrix<T>,
    diff: &[BigRational],
) -> Result<bool> {
    Ok(image_span(a, diff)?.rank() == a.dim())
}

/// A nonzero integer `v` with `v·(A(x) − A(0))a = 0`, when one exists.
pub fn condition_killer<T: Clone + Num + ToRational>(
    a: &PolyMatrix<T>,
    diff: &[BigRational],
) -> Result<Option<Vec<BigInt>>> {
    Ok(image_span(a, diff)?.integer_null_vector())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetHypothesis {
    pub ok: bool,
    pub bad_pair: Option<(usize, usize)>,
}

/// Checks every unordered pair of lifts in `[0,1)^d`; reports the first
/// failing pair in `(i, j)`, `i < j` order.
pub fn check_set_hypothesis<T: Clone + Num + ToRational>(
    a: &PolyMatrix<T>,
    lifts: &[Vec<BigRational>],
) -> Result<SetHypothesis> {
    validate_lifts(a.dim(), lifts)?;
    for i in 0..lifts.len() {
        for j in i + 1..lifts.len() {
            let diff: Vec<BigRational> =
                lifts[i].iter().zip(&lifts[j]).map(|(x, y)| x - y).collect();
            if !check_condition_1_1(a, &diff)? {
                return Ok(SetHypothesis {
                    ok: false,
                    bad_pair: Some((i, j)),
                });
            }
        }
    }
    Ok(SetHypothesis {
        ok: true,
        bad_pair: None,
    })
}

pub(crate) fn validate_lifts(dim: usize, lifts: &[Vec<BigRational>]) -> Result<()> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut seen = std::collections::HashSet::new();
    for (i, l) in lifts.iter().enumerate() {
        if l.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: l.len(),
            });
        }
        if l.iter().any(|x| *x < zero || *x >= one) {
            return Err(Error::InvalidArgument(format!(
                "lift {i} is outside [0,1)^d"
            )));
        }
        if !seen.insert(l.clone()) {
            return Err(Error::DuplicatePoint(i));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FloatConditionVerdict {
    /// Numerically full rank with condition number under the limit.
    pub likely_holds: bool,
    pub condition_number: f64,
    pub warning: &'static str,
}

/// Floating-point stand-in for [`check_condition_1_1`]. Full numerical rank
/// of `[C_1 a | … | C_D a]` is sufficient for the condition; a deficient
/// rank says nothing about integer killers of irrational differences.
pub fn check_condition_1_1_float(a: &IntPolyMatrix, diff: &[f64]) -> Result<FloatConditionVerdict> {
    let d = a.dim();
    if diff.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: diff.len(),
        });
    }
    let warning = "heuristic: condition (1.1) is not decidable in floating point";
    if a.degree() < d {
        return Ok(FloatConditionVerdict {
            likely_holds: false,
            condition_number: f64::INFINITY,
            warning,
        });
    }
    let mut m = DMatrix::<f64>::zeros(d, a.degree());
    for j in 1..=a.degree() {
        let cj = a.coeff(j);
        for r in 0..d {
            m[(r, j - 1)] = (0..d)
                .map(|c| cj[(r, c)].to_f64().unwrap_or(f64::NAN) * diff[c])
                .sum();
        }
    }
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.iter().take(d).copied().fold(f64::INFINITY, f64::min);
    let cond = if min > 0.0 { max / min } else { f64::INFINITY };
    Ok(FloatConditionVerdict {
        likely_holds: cond < FLOAT_CONDITION_LIMIT,
        condition_number: cond,
        warning,
    })
}
