//! Smith normal form over ℤ with unimodular transforms, and the gcd-bound
//! factorization `T₀ = T·R` built from it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{determinant, int_rank, IntMatrix};

/// `T₀ = L·D·Rp` with `L`, `Rp` unimodular and `D` diagonal, `D₁ | D₂ | …`.
#[derive(Clone, Debug, PartialEq)]
pub struct SnfFactorization {
    pub l: IntMatrix,
    pub d: IntMatrix,
    pub rp: IntMatrix,
    /// Diagonal of `D`, length `min(r, d)`, nonnegative.
    pub divisors: Vec<BigInt>,
    /// Number of nonzero divisors.
    pub k: usize,
}

impl SnfFactorization {
    pub fn reconstructs(&self, t0: &IntMatrix) -> bool {
        &(&self.l * &self.d) * &self.rp == *t0
    }

    pub fn is_unimodular(&self) -> bool {
        determinant(&self.l).abs().is_one() && determinant(&self.rp).abs().is_one()
    }

    pub fn divisor_chain_holds(&self) -> bool {
        let nz = &self.divisors[..self.k];
        nz.iter().all(|x| x.is_positive())
            && nz.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
            && self.divisors[self.k..].iter().all(Zero::is_zero)
    }
}

struct Reducer {
    a: IntMatrix,
    l: IntMatrix,
    rp: IntMatrix,
}

// Invariant: T₀ = l·a·rp. A row operation E on `a` is undone by E⁻¹ on the
// columns of `l`; a column operation F by F⁻¹ on the rows of `rp`.
impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.l.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.rp.swap_rows(i, j);
    }

    /// row_i += c·row_j
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        self.a.add_row_multiple(i, j, c);
        self.l.add_col_multiple(j, i, &-c);
    }

    /// col_i += c·col_j
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        self.a.add_col_multiple(i, j, c);
        self.rp.add_row_multiple(j, i, &-c);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.l.negate_col(i);
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let v = &self.a[(i, j)];
                if !v.is_zero() && best.map_or(true, |(bi, bj)| v.abs() < self.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Diagonalizes position `t`; false once the trailing block is zero.
    fn step(&mut self, t: usize) -> bool {
        let (r, d) = (self.a.rows(), self.a.cols());
        loop {
            let Some((pi, pj)) = self.min_entry(t) else {
                return false;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..r {
                if !self.a[(i, t)].is_zero() {
                    let q = self.a[(i, t)].div_floor(&self.a[(t, t)]);
                    self.add_row(i, t, &-q);
                    clean &= self.a[(i, t)].is_zero();
                }
            }
            for j in t + 1..d {
                if !self.a[(t, j)].is_zero() {
                    let q = self.a[(t, j)].div_floor(&self.a[(t, t)]);
                    self.add_col(j, t, &-q);
                    clean &= self.a[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let p = self.a[(t, t)].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..d).any(|j| !(&self.a[(i, j)] % &p).is_zero()));
            match bad {
                Some(i) => self.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if self.a[(t, t)].is_negative() {
            self.negate_row(t);
        }
        true
    }
}

/// Smith normal form by exact elementary row/column reduction. Signs of the
/// divisors are absorbed into `L`.
pub fn smith_normal_form(t0: &IntMatrix) -> SnfFactorization {
    let (r, d) = (t0.rows(), t0.cols());
    let mut red = Reducer {
        a: t0.clone(),
        l: IntMatrix::identity(r),
        rp: IntMatrix::identity(d),
    };
    let n = r.min(d);
    let mut k = 0;
    while k < n && red.step(k) {
        k += 1;
    }
    let divisors = (0..n).map(|i| red.a[(i, i)].clone()).collect();
    SnfFactorization {
        l: red.l,
        d: red.a,
        rp: red.rp,
        divisors,
        k,
    }
}

/// `T₀ = T·R` with `T: ℤ^{k} → ℤ^r` injective, `R: ℤ^d → ℤ^{k}` surjective,
/// and `gcd(T w, q) ≤ Q` whenever `gcd(w, q) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GcdBoundFactorization {
    pub t: IntMatrix,
    pub r: IntMatrix,
    /// `Q = D_k`, the last nonzero elementary divisor.
    pub q_bound: BigInt,
    pub snf: SnfFactorization,
}

impl GcdBoundFactorization {
    pub fn rank(&self) -> usize {
        self.snf.k
    }

    pub fn t_is_injective(&self) -> bool {
        int_rank(&self.t) == self.rank()
    }

    /// R is onto `ℤ^k` iff its Smith form has k divisors, all equal to 1.
    pub fn r_is_surjective(&self) -> bool {
        let s = smith_normal_form(&self.r);
        s.k == self.rank() && s.divisors.iter().all(One::is_one)
    }
}

/// Restricts `L·D` to `W = span(e₁..e_k)` and projects `Rp` onto `W`.
pub fn gcd_bound_factorize(t0: &IntMatrix) -> Result<GcdBoundFactorization> {
    let snf = smith_normal_form(t0);
    let k = snf.k;
    if k == 0 {
        return Err(Error::ZeroMatrix);
    }
    let t = (&snf.l * &snf.d).col_block(0, k);
    let r = snf.rp.row_block(0, k);
    Ok(GcdBoundFactorization {
        t,
        r,
        q_bound: snf.divisors[k - 1].clone(),
        snf,
    })
}

/// `gcd(entries of T·w, q)`.
pub fn image_gcd(f: &GcdBoundFactorization, w: &[BigInt], q: &BigInt) -> BigInt {
    f.t.mul_vec(w).iter().fold(q.abs(), |acc, x| acc.gcd(x))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GcdFuzzReport {
    pub samples: usize,
    pub violations: usize,
    pub max_gcd: String,
}

/// Samples `(w, q)` with `1 ≤ q ≤ q_max` and `gcd(w, q) = 1`, counting
/// violations of `gcd(T w, q) ≤ Q`.
pub fn gcd_bound_fuzz_report(
    f: &GcdBoundFactorization,
    trials: usize,
    q_max: u64,
    seed: u64,
) -> GcdFuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = f.rank();
    let mut violations = 0;
    let mut max_gcd = BigInt::zero();
    for _ in 0..trials {
        let q = BigInt::from(rng.gen_range(1..=q_max.max(1)));
        let w = loop {
            let w: Vec<BigInt> = (0..k)
                .map(|_| BigInt::from(rng.gen_range(-50i64..=50)))
                .collect();
            if w.iter().fold(q.clone(), |acc, x| acc.gcd(x)).is_one() {
                break w;
            }
        };
        let g = image_gcd(f, &w, &q);
        if g > f.q_bound {
            violations += 1;
        }
        max_gcd = max_gcd.max(g);
    }
    GcdFuzzReport {
        samples: trials,
        violations,
        max_gcd: max_gcd.to_string(),
    }
}

pub fn gcd_bound_fuzz(f: &GcdBoundFactorization, trials: usize, q_max: u64, seed: u64) -> bool {
    gcd_bound_fuzz_report(f, trials, q_max, seed).violations == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn check(t0: &IntMatrix) -> SnfFactorization {
        let s = smith_normal_form(t0);
        assert!(s.reconstructs(t0), "{t0:?}");
        assert!(s.is_unimodular());
        assert!(s.divisor_chain_holds(), "{:?}", s.divisors);
        s
    }

    #[test]
    fn diag_two_three() {
        let s = check(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.divisors, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn identity_and_zero() {
        let s = check(&IntMatrix::identity(3));
        assert!(s.d.is_identity());
        let z = check(&IntMatrix::zeros(2, 2));
        assert_eq!(z.k, 0);
        assert!(z.d.is_zero());
    }

    #[test]
    fn rectangular_and_negative() {
        let s = check(&m(&[vec![2, 4]]));
        assert_eq!(s.divisors, vec![BigInt::from(2)]);
        let s = check(&m(&[
            vec![-6, 4, 0],
            vec![10, -8, 14],
            vec![4, 2, 6],
            vec![0, 0, 0],
        ]));
        assert_eq!(s.k, 3);
        check(&m(&[vec![0, -3], vec![0, 0], vec![5, 0]]));
    }

    #[test]
    fn factorization_examples() {
        let f = gcd_bound_factorize(&m(&[vec![2, 0], vec![0, 3]])).unwrap();
        assert_eq!(f.q_bound, BigInt::from(6));
        assert_eq!(&f.t * &f.r, m(&[vec![2, 0], vec![0, 3]]));
        let w = [BigInt::from(1), BigInt::from(1)];
        assert!(image_gcd(&f, &w, &BigInt::from(5)) <= f.q_bound);

        let f = gcd_bound_factorize(&IntMatrix::identity(2)).unwrap();
        assert_eq!(f.q_bound, BigInt::one());
        assert!(gcd_bound_fuzz(&f, 200, 1000, 9));

        let f = gcd_bound_factorize(&m(&[vec![2, 4]])).unwrap();
        assert_eq!((f.q_bound.clone(), f.rank()), (BigInt::from(2), 1));
        assert!(f.t_is_injective() && f.r_is_surjective());
        assert_eq!(&f.t * &f.r, m(&[vec![2, 4]]));

        assert_eq!(
            gcd_bound_factorize(&IntMatrix::zeros(2, 3)),
            Err(Error::ZeroMatrix)
        );
    }

    #[test]
    fn rank_deficient_factorization() {
        let t0 = m(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        let f = gcd_bound_factorize(&t0).unwrap();
        assert_eq!(f.rank(), 2);
        assert_eq!(&f.t * &f.r, t0);
        assert!(f.t_is_injective() && f.r_is_surjective());
        assert!(gcd_bound_fuzz(&f, 300, 500, 2));
    }
}
