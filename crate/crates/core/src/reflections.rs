//! Linear reflections (order-2 pseudoreflections), the basic polynomial map
//! of the group {id, σ}, and exact intertwining residuals θ₂∘P − θ₁.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::point::{CPoint, MatPoint};
use crate::proper_maps::{self, MapId};
use crate::sampling;

/// Tolerance used when an operation has no explicit tolerance argument.
pub const REFLECTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap(DMatrix<Complex64>);

impl LinearMap {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape(format!("linear map must be square, got {:?}", matrix.shape())));
        }
        let m = MatPoint::new(matrix)?;
        Ok(Self(m.entries().clone()))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(MatPoint::from_rows(rows)?.entries().clone())
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// diag(−1, 1, …, 1).
    pub fn sigma(n: usize) -> Self {
        let mut m = DMatrix::identity(n, n);
        m[(0, 0)] = Complex64::new(-1.0, 0.0);
        Self(m)
    }

    /// The swap (z₁, z₂) ↦ (z₂, z₁).
    pub fn swap() -> Self {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        Self(DMatrix::from_row_slice(2, 2, &[o, l, l, o]))
    }

    /// P_ω = diag(ω, ω̄).
    pub fn p_omega(omega: Complex64) -> Self {
        let o = Complex64::new(0.0, 0.0);
        Self(DMatrix::from_row_slice(2, 2, &[omega, o, o, omega.conj()]))
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn apply(&self, z: &CPoint) -> Result<CPoint> {
        z.check_dim(self.dim())?;
        let v = &self.0 * DVector::from_column_slice(z.coords());
        CPoint::new(v.iter().copied().collect())
    }

    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap(&self.0 * &other.0)
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        self.0
            .clone()
            .try_inverse()
            .map(LinearMap)
            .ok_or_else(|| Error::InvalidParameter("linear map is singular".into()))
    }

    /// P·self·P⁻¹.
    pub fn conjugate_by(&self, p: &LinearMap) -> Result<LinearMap> {
        Ok(p.compose(self).compose(&p.inverse()?))
    }

    /// Spectral condition number.
    pub fn condition_number(&self) -> f64 {
        let s = self.0.clone().svd(false, false).singular_values;
        let max = s.iter().copied().fold(0.0, f64::max);
        let min = s.iter().copied().fold(f64::INFINITY, f64::min);
        max / min
    }
}

fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone().svd(false, false).singular_values.iter().copied().fold(0.0, f64::max)
}

impl Serialize for LinearMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatPoint::new(self.0.clone()).expect("finite by construction").serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let m = MatPoint::deserialize(deserializer)?;
        LinearMap::new(m.entries().clone()).map_err(serde::de::Error::custom)
    }
}

/// ‖M² − I‖ < tol·s² and I − M has exactly one singular value above tol·s,
/// with s = max(1, ‖M‖).
pub fn is_reflection(m: &LinearMap, tol: f64) -> bool {
    let n = m.dim();
    let scale = spectral_norm(m.matrix()).max(1.0);
    let identity = DMatrix::<Complex64>::identity(n, n);
    let order_defect = spectral_norm(&(m.matrix() * m.matrix() - &identity));
    if order_defect >= tol * scale * scale {
        return false;
    }
    let rank = (identity - m.matrix())
        .svd(false, false)
        .singular_values
        .iter()
        .filter(|s| **s > tol * scale)
        .count();
    rank == 1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflectionData {
    /// Unit vector v with Mv = −v.
    pub axis: CPoint,
    /// Unit vector ν with ker(I − M) = {x : ν*x = 0}.
    pub hyperplane_normal: CPoint,
}

/// Rotates a unit vector so its first non-negligible component is real positive.
fn normalize_phase(v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let pivot = v.iter().find(|c| c.norm() > 1e-8 * norm).copied().unwrap_or(Complex64::new(1.0, 0.0));
    let phase = pivot.conj() / pivot.norm();
    v.into_iter().map(|c| c * phase / norm).collect()
}

pub fn reflection_data(m: &LinearMap) -> Result<ReflectionData> {
    if !is_reflection(m, REFLECTION_TOL) {
        return Err(Error::NotAReflection);
    }
    let n = m.dim();
    let svd = (DMatrix::<Complex64>::identity(n, n) - m.matrix()).svd(true, true);
    let top = svd
        .singular_values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty");
    let u = svd.u.expect("requested");
    let v_t = svd.v_t.expect("requested");
    let axis = normalize_phase(u.column(top).iter().copied().collect());
    let normal = normalize_phase(v_t.row(top).iter().map(|c| c.conj()).collect());
    Ok(ReflectionData {
        axis: CPoint::new(axis)?,
        hyperplane_normal: CPoint::new(normal)?,
    })
}

/// A frame A adapted to σ: A·axis = e₁ and A maps ker(I − σ) onto
/// {0} × ℂⁿ⁻¹, i.e. AσA⁻¹ = diag(−1, 1, …, 1).
pub fn adapted_frame(sigma: &LinearMap) -> Result<LinearMap> {
    let data = reflection_data(sigma)?;
    let n = sigma.dim();
    let svd = (DMatrix::<Complex64>::identity(n, n) - sigma.matrix()).svd(true, true);
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut basis = DMatrix::<Complex64>::zeros(n, n);
    basis.set_column(0, &DVector::from_column_slice(data.axis.coords()));
    for (col, &k) in order.iter().skip(1).enumerate() {
        let kernel_vec: Vec<Complex64> = v_t.row(k).iter().map(|c| c.conj()).collect();
        basis.set_column(col + 1, &DVector::from_vec(kernel_vec));
    }
    LinearMap::new(basis)?.inverse()
}

/// Anything that maps points of ℂⁿ holomorphically.
pub trait HolomorphicMap {
    fn source_dim(&self) -> usize;
    fn apply(&self, z: &CPoint) -> Result<CPoint>;
}

impl HolomorphicMap for MapId {
    fn source_dim(&self) -> usize {
        MapId::source_dim(self)
    }

    fn apply(&self, z: &CPoint) -> Result<CPoint> {
        proper_maps::eval(self, z)
    }
}

impl HolomorphicMap for LinearMap {
    fn source_dim(&self) -> usize {
        self.dim()
    }

    fn apply(&self, z: &CPoint) -> Result<CPoint> {
        LinearMap::apply(self, z)
    }
}

/// θ(z) = ((A₁z)², A₂z, …, A_nz) for a frame A adapted to a reflection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasicMap {
    pub frame: LinearMap,
}

impl HolomorphicMap for BasicMap {
    fn source_dim(&self) -> usize {
        self.frame.dim()
    }

    fn apply(&self, z: &CPoint) -> Result<CPoint> {
        let mut w = self.frame.apply(z)?.into_vec();
        w[0] = w[0] * w[0];
        CPoint::new(w)
    }
}

/// Builds the basic polynomial map of {id, σ} from an adapted frame `a`.
pub fn basic_map_from_reflection(sigma: &LinearMap, a: &LinearMap) -> Result<BasicMap> {
    if sigma.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.dim(),
            got: a.dim(),
        });
    }
    if !is_reflection(sigma, REFLECTION_TOL) {
        return Err(Error::NotAReflection);
    }
    let cond = a.condition_number();
    if !cond.is_finite() || cond > 1e12 {
        return Err(Error::FrameViolation { residual: f64::INFINITY });
    }
    let residual = spectral_norm(&(sigma.conjugate_by(a)?.matrix() - LinearMap::sigma(a.dim()).matrix()));
    if residual > REFLECTION_TOL * cond {
        return Err(Error::FrameViolation { residual });
    }
    Ok(BasicMap { frame: a.clone() })
}

/// sup over sampled z in the unit polydisc of |θ₂(Pz) − θ₁(z)|.
pub fn intertwine_residual<A, B>(
    theta1: &A,
    theta2: &B,
    p: &LinearMap,
    samples: usize,
    seed: u64,
) -> Result<f64>
where
    A: HolomorphicMap + ?Sized,
    B: HolomorphicMap + ?Sized,
{
    let n = theta1.source_dim();
    if theta2.source_dim() != n || p.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if p.dim() != n { p.dim() } else { theta2.source_dim() },
        });
    }
    let mut rng = sampling::seeded_rng(seed);
    let radii = vec![1.0; n];
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let z = sampling::uniform_polydisc(&mut rng, &radii);
        let lhs = theta2.apply(&p.apply(&z)?)?;
        let rhs = theta1.apply(&z)?;
        if lhs.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                expected: rhs.dim(),
                got: lhs.dim(),
            });
        }
        worst = worst.max(lhs.distance(&rhs));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::{c, cpoint};

    fn real(rows: &[&[f64]]) -> LinearMap {
        LinearMap::from_rows(
            &rows.iter().map(|r| r.iter().map(|&x| c(x, 0.0)).collect()).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn reflection_detection() {
        for n in 1..5 {
            assert!(is_reflection(&LinearMap::sigma(n), 1e-9));
        }
        assert!(is_reflection(&LinearMap::swap(), 1e-9));
        let minus = real(&[&[-1.0, 0.0], &[0.0, -1.0]]);
        assert!(!is_reflection(&minus, 1e-9));
        assert!(!is_reflection(&LinearMap::identity(3), 1e-9));
        // rank one but not of order two
        assert!(!is_reflection(&real(&[&[2.0, 0.0], &[0.0, 1.0]]), 1e-9));
    }

    #[test]
    fn axis_examples() {
        let d = reflection_data(&LinearMap::sigma(2)).unwrap();
        assert!(d.axis.distance(&cpoint(&[(1.0, 0.0), (0.0, 0.0)])) < 1e-12);
        let s = reflection_data(&LinearMap::swap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(s.axis.distance(&cpoint(&[(h, 0.0), (-h, 0.0)])) < 1e-12);
        assert!(s.hyperplane_normal.distance(&cpoint(&[(h, 0.0), (-h, 0.0)])) < 1e-12);
        assert_eq!(reflection_data(&LinearMap::identity(2)), Err(Error::NotAReflection));
    }

    #[test]
    fn conjugated_axis_is_transported() {
        let p = LinearMap::from_rows(&[vec![c(1.0, 0.5), c(0.2, 0.0)], vec![c(0.0, -0.3), c(0.9, 0.1)]]).unwrap();
        let m = LinearMap::sigma(2).conjugate_by(&p).unwrap();
        let axis = reflection_data(&m).unwrap().axis;
        let expected = p.apply(&cpoint(&[(1.0, 0.0), (0.0, 0.0)])).unwrap();
        // parallel: |⟨a, e⟩| = ‖a‖‖e‖
        let inner: Complex64 = axis.coords().iter().zip(expected.coords()).map(|(a, e)| a.conj() * e).sum();
        assert!((inner.norm() - expected.norm_sqr().sqrt()).abs() < 1e-10);
        let moved = m.apply(&axis).unwrap();
        assert!(moved.distance(&axis.scale(c(-1.0, 0.0))) < 1e-10);
    }

    #[test]
    fn basic_map_reduces_to_lambda() {
        let theta = basic_map_from_reflection(&LinearMap::sigma(3), &LinearMap::identity(3)).unwrap();
        let z = cpoint(&[(0.3, 0.1), (0.2, 0.0), (-0.4, 0.2)]);
        let expected = proper_maps::eval(&MapId::LambdaN { n: 3 }, &z).unwrap();
        assert!(theta.apply(&z).unwrap().distance(&expected) < 1e-15);
        assert!(matches!(
            basic_map_from_reflection(&LinearMap::sigma(2), &LinearMap::swap()),
            Err(Error::FrameViolation { .. })
        ));
    }

    #[test]
    fn swap_basic_map_is_symmetric() {
        let a = adapted_frame(&LinearMap::swap()).unwrap();
        let theta = basic_map_from_reflection(&LinearMap::swap(), &a).unwrap();
        let z = cpoint(&[(0.3, 0.1), (-0.2, 0.5)]);
        let swapped = cpoint(&[(-0.2, 0.5), (0.3, 0.1)]);
        assert!(theta.apply(&z).unwrap().distance(&theta.apply(&swapped).unwrap()) < 1e-14);
    }

    #[test]
    fn intertwining_examples() {
        for k in 0..8 {
            let omega = Complex64::from_polar(1.0, 0.7 * k as f64);
            let r = intertwine_residual(
                &MapId::BidiscSym { omega: c(1.0, 0.0) },
                &MapId::BidiscSym { omega },
                &LinearMap::p_omega(omega),
                500,
                k,
            )
            .unwrap();
            assert!(r < 1e-14, "omega={omega} r={r}");
        }
        let same = intertwine_residual(&MapId::TetrablockPhi, &MapId::TetrablockPhi, &LinearMap::identity(3), 100, 1).unwrap();
        assert_eq!(same, 0.0);
        let p = real(&[&[1.0, -1.0], &[1.0, 1.0]]);
        let r = intertwine_residual(&MapId::BidiscSplit, &MapId::BidiscSym { omega: c(1.0, 0.0) }, &p, 100, 2).unwrap();
        assert!(r > 0.1);
    }

    #[test]
    fn conjugate_frames_give_identical_maps() {
        let sigma = LinearMap::swap();
        let a = adapted_frame(&sigma).unwrap();
        let p = LinearMap::from_rows(&[vec![c(0.8, 0.1), c(0.3, 0.0)], vec![c(-0.2, 0.4), c(1.1, 0.0)]]).unwrap();
        let sigma2 = sigma.conjugate_by(&p).unwrap();
        let b = a.compose(&p.inverse().unwrap());
        let theta1 = basic_map_from_reflection(&sigma, &a).unwrap();
        let theta2 = basic_map_from_reflection(&sigma2, &b).unwrap();
        let r = intertwine_residual(&theta1, &theta2, &p, 500, 3).unwrap();
        assert!(r < 1e-12, "r={r}");
    }
}
