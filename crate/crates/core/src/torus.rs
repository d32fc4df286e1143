//! Points of the d-torus, the L∞ torus metric, and certified ε-density.
//!
//! Density decisions are made on a cell grid. A cell of mesh δ has every
//! point within δ/2 (L∞) of its center, so a center within `ε - δ/2` of the
//! set certifies the whole cell, and a center farther than `ε + δ/2` is a
//! point the set misses by more than ε. Cells in neither case are split in
//! two along every axis and rechecked at the next level.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::par;

/// Margin absorbed into every floating comparison of the density certificate.
/// Coordinates and distances carry at most a few ulps of error, far below this.
pub const CERT_SLACK: f64 = 1e-12;

/// Hard cap on cells examined at one refinement level.
pub const MAX_CELLS_PER_LEVEL: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, PartialEq)]
pub enum TorusPoint {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

pub(crate) fn frac_rational(x: &BigRational) -> BigRational {
    x - x.floor()
}

pub(crate) fn frac_f64(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

fn circle_gap_f64(a: f64, b: f64) -> f64 {
    let t = (a - b).abs();
    t.min(1.0 - t)
}

fn circle_gap_exact(a: &BigRational, b: &BigRational) -> BigRational {
    let t = (a - b).abs();
    let s = BigRational::one() - &t;
    if s < t {
        s
    } else {
        t
    }
}

impl TorusPoint {
    /// Exact point; coordinates are reduced into [0, 1).
    pub fn exact(coords: Vec<BigRational>) -> Self {
        TorusPoint::Exact(coords.iter().map(frac_rational).collect())
    }

    pub fn from_fractions(coords: &[(i64, i64)]) -> Result<Self> {
        let mut v = Vec::with_capacity(coords.len());
        for &(n, d) in coords {
            if d == 0 {
                return Err(Error::InvalidArgument("zero denominator".into()));
            }
            v.push(BigRational::new(n.into(), d.into()));
        }
        Ok(Self::exact(v))
    }

    /// Float point; coordinates are reduced into [0, 1).
    pub fn float(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        Ok(TorusPoint::Float(
            coords.into_iter().map(frac_f64).collect(),
        ))
    }

    pub fn dim(&self) -> usize {
        match self {
            TorusPoint::Exact(c) => c.len(),
            TorusPoint::Float(c) => c.len(),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            TorusPoint::Exact(_) => Mode::Exact,
            TorusPoint::Float(_) => Mode::Float,
        }
    }

    pub fn as_exact(&self) -> Option<&[BigRational]> {
        match self {
            TorusPoint::Exact(c) => Some(c),
            TorusPoint::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            TorusPoint::Exact(c) => c.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect(),
            TorusPoint::Float(c) => c.clone(),
        }
    }

    /// `|u|`: L∞ distance to the origin.
    pub fn norm(&self) -> f64 {
        self.to_f64()
            .into_iter()
            .map(|x| x.min(1.0 - x))
            .fold(0.0, f64::max)
    }

    pub fn norm_exact(&self) -> Option<BigRational> {
        let c = self.as_exact()?;
        let zero = BigRational::zero();
        Some(
            c.iter()
                .map(|x| circle_gap_exact(x, &zero))
                .max()
                .unwrap_or_default(),
        )
    }

    pub fn is_zero(&self) -> bool {
        match self {
            TorusPoint::Exact(c) => c.iter().all(Zero::is_zero),
            TorusPoint::Float(c) => c.iter().all(|&x| x == 0.0),
        }
    }

    /// `self - other` on the torus.
    pub fn sub(&self, other: &TorusPoint) -> Result<TorusPoint> {
        check_compatible(self, other)?;
        Ok(match (self, other) {
            (TorusPoint::Exact(a), TorusPoint::Exact(b)) => {
                TorusPoint::exact(a.iter().zip(b).map(|(x, y)| x - y).collect())
            }
            (TorusPoint::Float(a), TorusPoint::Float(b)) => {
                TorusPoint::Float(a.iter().zip(b).map(|(x, y)| frac_f64(x - y)).collect())
            }
            _ => unreachable!(),
        })
    }

    /// Image `g·self` on the torus; exact points stay exact.
    pub fn apply(&self, g: &IntMatrix) -> Result<TorusPoint> {
        if g.cols() != self.dim() || g.rows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: g.cols(),
            });
        }
        Ok(match self {
            TorusPoint::Exact(c) => TorusPoint::exact(g.to_rational().mul_vec(c)),
            TorusPoint::Float(c) => {
                let img = (0..g.rows())
                    .map(|i| {
                        g.row(i)
                            .iter()
                            .zip(c)
                            .map(|(a, x)| frac_f64(a.to_f64().unwrap_or(f64::NAN) * x))
                            .sum::<f64>()
                    })
                    .collect();
                TorusPoint::float(img)?
            }
        })
    }

    /// Numerator vector and reduced common denominator of an exact point.
    pub fn common_denominator_form(&self) -> Option<(Vec<BigInt>, BigInt)> {
        let c = self.as_exact()?;
        let q = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let v = c.iter().map(|x| x.numer() * (&q / x.denom())).collect();
        Some((v, q))
    }
}

impl fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusPoint::Exact(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
            TorusPoint::Float(c) => write!(f, "{c:?}"),
        }
    }
}

fn check_compatible(u: &TorusPoint, v: &TorusPoint) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: v.dim(),
        });
    }
    if u.mode() != v.mode() {
        return Err(Error::ModeMismatch);
    }
    Ok(())
}

/// L∞ torus distance `max_i min(|u_i - v_i|, 1 - |u_i - v_i|)`.
pub fn torus_dist(u: &TorusPoint, v: &TorusPoint) -> Result<f64> {
    check_compatible(u, v)?;
    Ok(match (u, v) {
        (TorusPoint::Float(a), TorusPoint::Float(b)) => a
            .iter()
            .zip(b)
            .map(|(x, y)| circle_gap_f64(*x, *y))
            .fold(0.0, f64::max),
        _ => torus_dist_exact(u, v)?.to_f64().unwrap_or(f64::NAN),
    })
}

pub fn torus_dist_exact(u: &TorusPoint, v: &TorusPoint) -> Result<BigRational> {
    check_compatible(u, v)?;
    match (u, v) {
        (TorusPoint::Exact(a), TorusPoint::Exact(b)) => Ok(a
            .iter()
            .zip(b)
            .map(|(x, y)| circle_gap_exact(x, y))
            .max()
            .unwrap_or_default()),
        _ => Err(Error::FloatNotAllowed),
    }
}

/// Least q > 0 with qx = 0 in the torus: the lcm of the reduced denominators.
pub fn min_torsion_order(x: &TorusPoint) -> Result<BigInt> {
    let c = x.as_exact().ok_or(Error::FloatNotAllowed)?;
    Ok(c.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom())))
}

/// A finite set of distinct torus points sharing dimension and mode.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPointSet {
    dim: usize,
    mode: Mode,
    points: Vec<TorusPoint>,
}

fn point_key(p: &TorusPoint) -> PointKey {
    match p {
        TorusPoint::Exact(c) => PointKey::Exact(c.clone()),
        TorusPoint::Float(c) => PointKey::Float(c.iter().map(|x| x.to_bits()).collect()),
    }
}

#[derive(Hash, PartialEq, Eq)]
enum PointKey {
    Exact(Vec<BigRational>),
    Float(Vec<u64>),
}

impl TorusPointSet {
    /// Rejects duplicates and mixed dimensions or modes.
    pub fn new(dim: usize, points: Vec<TorusPoint>) -> Result<Self> {
        Self::build(dim, points, false)
    }

    /// Like [`TorusPointSet::new`] but silently drops repeated points. Used
    /// for images `gY`, which may collapse.
    pub fn new_dedup(dim: usize, points: Vec<TorusPoint>) -> Result<Self> {
        Self::build(dim, points, true)
    }

    fn build(dim: usize, points: Vec<TorusPoint>, dedup: bool) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let mode = points.first().map_or(Mode::Exact, TorusPoint::mode);
        let mut seen = HashSet::with_capacity(points.len());
        let mut kept = Vec::with_capacity(points.len());
        for (i, p) in points.into_iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            if p.mode() != mode {
                return Err(Error::ModeMismatch);
            }
            if !seen.insert(point_key(&p)) {
                if dedup {
                    continue;
                }
                return Err(Error::DuplicatePoint(i));
            }
            kept.push(p);
        }
        Ok(TorusPointSet {
            dim,
            mode,
            points: kept,
        })
    }

    pub fn from_fractions(dim: usize, points: &[Vec<(i64, i64)>]) -> Result<Self> {
        let pts = points
            .iter()
            .map(|p| TorusPoint::from_fractions(p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, pts)
    }

    pub fn from_floats(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        let pts = points
            .iter()
            .map(|p| TorusPoint::float(p.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[TorusPoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<TorusPoint> {
        self.points
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(TorusPoint::to_f64).collect()
    }
}

/// Exact nearest-neighbour queries under the torus L∞ metric.
///
/// Points are sorted by their first coordinate; a query walks forward and
/// backward around the circle from its insertion position and stops once the
/// first-coordinate offset alone exceeds the best distance found.
#[derive(Clone, Debug)]
pub struct NearestIndex {
    dim: usize,
    first: Vec<f64>,
    coords: Vec<f64>,
}

impl NearestIndex {
    pub fn new(dim: usize, points: &[Vec<f64>]) -> Self {
        let mut sorted: Vec<&Vec<f64>> = points.iter().collect();
        sorted.sort_by(|a, b| a[0].total_cmp(&b[0]));
        let first = sorted.iter().map(|p| p[0]).collect();
        let coords = sorted.iter().flat_map(|p| p.iter().copied()).collect();
        NearestIndex { dim, first, coords }
    }

    pub fn from_set(set: &TorusPointSet) -> Self {
        Self::new(set.dim(), &set.to_f64_rows())
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    fn dist_to(&self, idx: usize, q: &[f64], cutoff: f64) -> f64 {
        let p = &self.coords[idx * self.dim..(idx + 1) * self.dim];
        let mut m = 0.0f64;
        for (a, b) in p.iter().zip(q) {
            m = m.max(circle_gap_f64(*a, *b));
            if m >= cutoff {
                break;
            }
        }
        m
    }

    /// Distance from `q` to the nearest indexed point.
    pub fn min_dist(&self, q: &[f64]) -> f64 {
        let n = self.first.len();
        if n == 0 {
            return f64::INFINITY;
        }
        let start = self.first.partition_point(|&x| x < q[0]);
        let mut best = f64::INFINITY;
        for step in 0..n {
            let i = (start + step) % n;
            let off = frac_f64(self.first[i] - q[0]);
            if off > best {
                break;
            }
            best = best.min(self.dist_to(i, q, best));
        }
        for step in 1..=n {
            let i = (start + n - step) % n;
            let off = frac_f64(q[0] - self.first[i]);
            if off > best {
                break;
            }
            best = best.min(self.dist_to(i, q, best));
        }
        best
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DensityStatus {
    Dense,
    NotDense,
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityVerdict {
    pub status: DensityStatus,
    /// Center of a cell missed by more than ε, present iff `NotDense`.
    pub witness: Option<TorusPoint>,
    /// Mesh of the last grid examined.
    pub resolution: f64,
    pub refinements: u32,
}

impl DensityVerdict {
    pub fn is_dense(&self) -> bool {
        self.status == DensityStatus::Dense
    }
}

enum CellClass {
    Covered,
    Ambiguous,
    Missed,
}

/// Certified decision of whether every torus point lies within closed
/// L∞ distance `eps` of `y`.
///
/// The initial mesh is the largest `1/m ≤ eps/2`; each refinement halves it.
/// Only ambiguous cells are split, which yields the same verdict as
/// rescanning the full grid at the finer mesh.
pub fn is_eps_dense(y: &TorusPointSet, eps: f64, max_refinements: u32) -> Result<DensityVerdict> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::EpsOutOfRange(eps));
    }
    if y.is_empty() {
        return Err(Error::EmptySet);
    }
    let d = y.dim();
    let index = NearestIndex::from_set(y);
    let m0 = (2.0 / eps).ceil() as u64;

    // Cells at level L are integer vectors in [0, m0·2^L)^d, stored flat.
    let total0 = (m0 as usize)
        .checked_pow(d as u32)
        .filter(|&n| n <= MAX_CELLS_PER_LEVEL);
    let Some(total0) = total0 else {
        return Err(Error::BudgetExceeded {
            what: "initial density grid",
            limit: MAX_CELLS_PER_LEVEL,
        });
    };
    let mut cells: Vec<u64> = Vec::with_capacity(total0 * d);
    for flat in 0..total0 {
        let mut r = flat;
        let mut idx = vec![0u64; d];
        for k in (0..d).rev() {
            idx[k] = (r % m0 as usize) as u64;
            r /= m0 as usize;
        }
        cells.extend(idx);
    }

    let mut level = 0u32;
    loop {
        let m = m0 << level;
        let delta = 1.0 / m as f64;
        let lo = eps - delta / 2.0 - CERT_SLACK;
        let hi = eps + delta / 2.0 + CERT_SLACK;
        let n_cells = cells.len() / d;
        let classes = par::map_range(n_cells, |c| {
            let center: Vec<f64> = cells[c * d..(c + 1) * d]
                .iter()
                .map(|&i| (2 * i + 1) as f64 / (2 * m) as f64)
                .collect();
            let dist = index.min_dist(&center);
            if dist <= lo {
                CellClass::Covered
            } else if dist > hi {
                CellClass::Missed
            } else {
                CellClass::Ambiguous
            }
        });

        if let Some(c) = classes.iter().position(|k| matches!(k, CellClass::Missed)) {
            let idx = &cells[c * d..(c + 1) * d];
            let witness = match y.mode() {
                Mode::Exact => TorusPoint::Exact(
                    idx.iter()
                        .map(|&i| BigRational::new(BigInt::from(2 * i + 1), BigInt::from(2 * m)))
                        .collect(),
                ),
                Mode::Float => TorusPoint::Float(
                    idx.iter()
                        .map(|&i| (2 * i + 1) as f64 / (2 * m) as f64)
                        .collect(),
                ),
            };
            return Ok(DensityVerdict {
                status: DensityStatus::NotDense,
                witness: Some(witness),
                resolution: delta,
                refinements: level,
            });
        }

        let ambiguous: Vec<usize> = classes
            .iter()
            .enumerate()
            .filter(|(_, k)| matches!(k, CellClass::Ambiguous))
            .map(|(i, _)| i)
            .collect();
        if ambiguous.is_empty() {
            return Ok(DensityVerdict {
                status: DensityStatus::Dense,
                witness: None,
                resolution: delta,
                refinements: level,
            });
        }
        let children = ambiguous.len().saturating_mul(1usize << d);
        if level >= max_refinements || children > MAX_CELLS_PER_LEVEL {
            return Ok(DensityVerdict {
                status: DensityStatus::Undecided,
                witness: None,
                resolution: delta,
                refinements: level,
            });
        }
        let mut next = Vec::with_capacity(children * d);
        for c in ambiguous {
            let parent = &cells[c * d..(c + 1) * d];
            for mask in 0..(1u64 << d) {
                for (k, &p) in parent.iter().enumerate() {
                    next.push(2 * p + ((mask >> (d - 1 - k)) & 1));
                }
            }
        }
        cells = next;
        level += 1;
    }
}

/// Necessary condition for density: no center of the initial grid is
/// farther than `eps + δ/2` from the indexed points. Exits at the first miss.
pub fn screen_dense(index: &NearestIndex, eps: f64) -> bool {
    let d = index.dim;
    let m = (2.0 / eps).ceil() as u64;
    let hi = eps + 0.5 / m as f64 + CERT_SLACK;
    let Some(total) = (m as usize).checked_pow(d as u32) else {
        return true;
    };
    let mut center = vec![0.0; d];
    for flat in 0..total {
        let mut r = flat;
        for k in (0..d).rev() {
            center[k] = (2 * (r % m as usize) + 1) as f64 / (2 * m) as f64;
            r /= m as usize;
        }
        if index.min_dist(&center) > hi {
            return false;
        }
    }
    true
}

/// Exact check that `witness` is farther than `eps` from every point of `y`.
pub fn witness_is_valid(y: &TorusPointSet, witness: &TorusPoint, eps: f64) -> Result<bool> {
    match witness.mode() {
        Mode::Exact => {
            let e = BigRational::from_f64(eps).ok_or(Error::EpsOutOfRange(eps))?;
            for p in y.points() {
                if torus_dist_exact(p, witness)? <= e {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Mode::Float => {
            for p in y.points() {
                if torus_dist(p, witness)? <= eps {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fl(c: &[f64]) -> TorusPoint {
        TorusPoint::float(c.to_vec()).unwrap()
    }

    fn ex(c: &[(i64, i64)]) -> TorusPoint {
        TorusPoint::from_fractions(c).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert!((torus_dist(&fl(&[0.1]), &fl(&[0.9])).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(
            torus_dist(&ex(&[(0, 1), (0, 1)]), &ex(&[(1, 2), (1, 2)])).unwrap(),
            0.5
        );
        assert!((torus_dist(&fl(&[0.25, 0.9]), &fl(&[0.25, 0.05])).unwrap() - 0.15).abs() < 1e-12);
    }

    #[test]
    fn distance_rejects_mismatch() {
        assert!(matches!(
            torus_dist(&fl(&[0.1]), &fl(&[0.1, 0.2])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(
            torus_dist(&fl(&[0.1]), &ex(&[(1, 3)])),
            Err(Error::ModeMismatch)
        );
    }

    #[test]
    fn exact_coordinates_are_reduced() {
        let p = ex(&[(7, 3), (-1, 4)]);
        assert_eq!(p, ex(&[(1, 3), (3, 4)]));
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(
            min_torsion_order(&ex(&[(1, 3), (1, 4)])).unwrap(),
            BigInt::from(12)
        );
        assert_eq!(min_torsion_order(&ex(&[(0, 1)])).unwrap(), BigInt::from(1));
        assert_eq!(
            min_torsion_order(&ex(&[(2, 6), (0, 1), (5, 10)])).unwrap(),
            BigInt::from(6)
        );
        assert_eq!(min_torsion_order(&fl(&[0.5])), Err(Error::FloatNotAllowed));
    }

    #[test]
    fn density_examples() {
        let y = TorusPointSet::from_fractions(
            1,
            &[vec![(0, 1)], vec![(1, 4)], vec![(1, 2)], vec![(3, 4)]],
        )
        .unwrap();
        assert_eq!(
            is_eps_dense(&y, 0.13, 8).unwrap().status,
            DensityStatus::Dense
        );

        let single = TorusPointSet::from_fractions(1, &[vec![(0, 1)]]).unwrap();
        let v = is_eps_dense(&single, 0.4, 8).unwrap();
        assert_eq!(v.status, DensityStatus::NotDense);
        let w = v.witness.unwrap();
        assert!((w.to_f64()[0] - 0.5).abs() < 0.1);
        assert!(witness_is_valid(&single, &w, 0.4).unwrap());

        let grid: Vec<Vec<(i64, i64)>> = (0..5)
            .flat_map(|i| (0..5).map(move |j| vec![(i, 5), (j, 5)]))
            .collect();
        let g = TorusPointSet::from_fractions(2, &grid).unwrap();
        assert_eq!(
            is_eps_dense(&g, 0.11, 8).unwrap().status,
            DensityStatus::Dense
        );
    }

    #[test]
    fn boundary_case_stays_undecided() {
        // Covering radius exactly eps: closed-ball dense, but never certifiable.
        let y = TorusPointSet::from_fractions(1, &[vec![(0, 1)], vec![(1, 2)]]).unwrap();
        let v = is_eps_dense(&y, 0.25, 6).unwrap();
        assert_eq!(v.status, DensityStatus::Undecided);
        assert_eq!(v.refinements, 6);
    }

    #[test]
    fn density_errors() {
        let y = TorusPointSet::from_fractions(1, &[vec![(0, 1)]]).unwrap();
        assert_eq!(is_eps_dense(&y, 0.5, 3), Err(Error::EpsOutOfRange(0.5)));
        assert_eq!(is_eps_dense(&y, 0.0, 3), Err(Error::EpsOutOfRange(0.0)));
        let empty = TorusPointSet::new(1, vec![]).unwrap();
        assert_eq!(is_eps_dense(&empty, 0.1, 3), Err(Error::EmptySet));
    }

    #[test]
    fn set_rejects_duplicates_unless_dedup() {
        let pts = vec![ex(&[(1, 2)]), ex(&[(3, 2)])];
        assert_eq!(
            TorusPointSet::new(1, pts.clone()),
            Err(Error::DuplicatePoint(1))
        );
        assert_eq!(TorusPointSet::new_dedup(1, pts).unwrap().len(), 1);
    }

    #[test]
    fn nearest_index_wraps() {
        let idx = NearestIndex::new(2, &[vec![0.95, 0.5], vec![0.4, 0.1]]);
        assert!((idx.min_dist(&[0.02, 0.5]) - 0.07).abs() < 1e-12);
        assert!((idx.min_dist(&[0.4, 0.95]) - 0.15).abs() < 1e-12);
    }
}
