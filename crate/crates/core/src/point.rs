//! Points of ℂⁿ and small complex matrices, with their JSON wire form:
//! complex scalars are `[re, im]` pairs, matrices are row-major arrays of rows.

use std::ops::Index;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite point of ℂⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct CPoint(Vec<Complex64>);

impl CPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Shape("a point needs at least one coordinate".into()));
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(coords))
    }

    /// Builds a point from coordinates known to be finite (internal arithmetic).
    pub(crate) fn from_vec(coords: Vec<Complex64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Self(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// Real coordinates, imaginary parts zero.
    pub fn real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    /// ‖z‖² = Σ|z_j|².
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    /// The bilinear square z•z = Σ z_j².
    pub fn dot_self(&self) -> Complex64 {
        self.0.iter().map(|c| c * c).sum()
    }

    /// Euclidean distance in ℂⁿ ≅ ℝ²ⁿ.
    pub fn distance(&self, other: &CPoint) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> CPoint {
        CPoint(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: self.dim(),
            });
        }
        Ok(())
    }
}

impl Index<usize> for CPoint {
    type Output = Complex64;

    fn index(&self, index: usize) -> &Complex64 {
        &self.0[index]
    }
}

impl Serialize for CPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.0.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        CPoint::new(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// A finite complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MatPoint(DMatrix<Complex64>);

impl MatPoint {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() == 0 || entries.ncols() == 0 {
            return Err(Error::Shape("empty matrix".into()));
        }
        if let Some(index) = entries.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(entries))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Self::new(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
    }

    pub(crate) fn from_2x2(a: [[Complex64; 2]; 2]) -> Self {
        Self(DMatrix::from_fn(2, 2, |i, j| a[i][j]))
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    /// max |A_ij − A_ji|, or infinity for non-square matrices.
    pub fn symmetry_defect(&self) -> f64 {
        self.transpose_defect(1.0)
    }

    /// max |A_ij + A_ji|, or infinity for non-square matrices.
    pub fn skew_defect(&self) -> f64 {
        self.transpose_defect(-1.0)
    }

    fn transpose_defect(&self, sign: f64) -> f64 {
        let (m, n) = self.shape();
        if m != n {
            return f64::INFINITY;
        }
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)] * sign).norm());
            }
        }
        worst
    }
}

impl Serialize for MatPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .0
            .row_iter()
            .map(|row| row.iter().map(|c| [c.re, c.im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(deserializer)?;
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|p| Complex64::new(p[0], p[1])).collect())
            .collect();
        MatPoint::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Either a vector point or a matrix point; matrix domains take the latter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Vector(CPoint),
    Matrix(MatPoint),
}

impl Point {
    pub fn as_vector(&self) -> Result<&CPoint> {
        match self {
            Point::Vector(p) => Ok(p),
            Point::Matrix(_) => Err(Error::Shape("expected a vector point, got a matrix".into())),
        }
    }

    pub fn as_matrix(&self) -> Result<&MatPoint> {
        match self {
            Point::Matrix(m) => Ok(m),
            Point::Vector(_) => Err(Error::Shape("expected a matrix point, got a vector".into())),
        }
    }

    /// Euclidean distance between points of the same kind and shape.
    pub fn distance(&self, other: &Point) -> f64 {
        match (self, other) {
            (Point::Vector(a), Point::Vector(b)) if a.dim() == b.dim() => a.distance(b),
            (Point::Matrix(a), Point::Matrix(b)) if a.shape() == b.shape() => {
                (a.entries() - b.entries()).norm()
            }
            _ => f64::INFINITY,
        }
    }
}

impl From<CPoint> for Point {
    fn from(p: CPoint) -> Self {
        Point::Vector(p)
    }
}

impl From<MatPoint> for Point {
    fn from(m: MatPoint) -> Self {
        Point::Matrix(m)
    }
}

/// Shorthand for building complex literals.
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a point from `(re, im)` pairs; panics on non-finite input.
pub fn cpoint(coords: &[(f64, f64)]) -> CPoint {
    CPoint::new(coords.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
        .expect("finite coordinates")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_empty() {
        assert_eq!(
            CPoint::new(vec![c(0.0, 0.0), c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { index: 1 })
        );
        assert!(CPoint::new(vec![]).is_err());
        assert!(MatPoint::from_rows(&[vec![c(1.0, 0.0)], vec![]]).is_err());
    }

    #[test]
    fn json_wire_form() {
        let p = cpoint(&[(0.7, 0.0), (0.0, 0.5)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[0.7,0.0],[0.0,0.5]]");
        let back: Point = serde_json::from_str(&s).unwrap();
        assert_eq!(back, Point::Vector(p));

        let m: Point = serde_json::from_str("[[[1,0],[0,2]],[[3,0],[4,0]]]").unwrap();
        let m = m.as_matrix().unwrap();
        assert_eq!(m.entries()[(0, 1)], c(0.0, 2.0));
        assert_eq!(m.entries()[(1, 0)], c(3.0, 0.0));
    }

    #[test]
    fn symmetry_defects() {
        let s = MatPoint::from_2x2([[c(1.0, 0.0), c(0.5, 0.1)], [c(0.5, 0.1), c(0.0, 0.0)]]);
        assert_eq!(s.symmetry_defect(), 0.0);
        assert!(s.skew_defect() > 0.0);
    }
}
