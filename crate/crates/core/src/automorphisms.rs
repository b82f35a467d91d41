//! Linear automorphisms z ↦ ωUz of L_n, the rotations ρ_ω of 𝕃_n, the
//! extension of automorphisms of the locus set {0} × L_{n−1} to 𝕃_n, the
//! block scaffolding for extending the involutive automorphisms Ψ_g, and
//! fixed-point sampling.
//!
//! Ψ_g itself is not evaluated here. A user-supplied point map can be
//! checked with [`validate_automorphism`] and [`involution_residual`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::domains::{self, DomainId};
use crate::error::{Error, Result};
use crate::point::{CPoint, MatPoint};
use crate::sampling;

/// Branch residual above which a map is reported as not fiber preserving.
pub const FIBER_RESIDUAL_TOL: f64 = 1e-10;

pub const FIX_TOL: f64 = 1e-8;
pub const FIX_ITERATIONS: usize = 50;
pub const FIX_DEDUP: f64 = 1e-6;

fn check_omega(omega: Complex64) -> Result<()> {
    if !omega.is_finite() || (omega.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "omega must be unimodular, |omega| = {}",
            omega.norm()
        )));
    }
    Ok(())
}

/// z ↦ ω·Uz with |ω| = 1 and U ∈ SO(n).
#[derive(Debug, Clone, PartialEq)]
pub struct LieLinearAut {
    omega: Complex64,
    u: DMatrix<f64>,
}

impl LieLinearAut {
    pub fn new(omega: Complex64, u: DMatrix<f64>) -> Result<Self> {
        check_omega(omega)?;
        if !u.is_square() || u.nrows() == 0 {
            return Err(Error::Shape(format!("U must be square, got {:?}", u.shape())));
        }
        if u.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("U has non-finite entries".into()));
        }
        let n = u.nrows();
        let defect = (u.transpose() * &u - DMatrix::<f64>::identity(n, n)).amax();
        if defect > 1e-10 {
            return Err(Error::InvalidParameter(format!("U is not orthogonal (defect {defect:.3e})")));
        }
        let det = u.determinant();
        if (det - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!("U must have determinant 1, got {det}")));
        }
        Ok(Self { omega, u })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            omega: Complex64::new(1.0, 0.0),
            u: DMatrix::identity(n, n),
        }
    }

    /// ω uniform on the circle and U Haar-distributed on SO(n).
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        let omega = sampling::unit_circle(rng);
        let u = sampling::special_orthogonal(rng, n);
        Self { omega, u }
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    pub fn u(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Serialize, Deserialize)]
struct LieLinearAutWire {
    omega: Complex64,
    #[serde(rename = "U")]
    u: Vec<Vec<Entry>>,
}

impl Serialize for LieLinearAut {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let u = self
            .u
            .row_iter()
            .map(|row| row.iter().map(|&x| Entry::Real(x)).collect())
            .collect();
        LieLinearAutWire { omega: self.omega, u }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LieLinearAut {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = LieLinearAutWire::deserialize(deserializer)?;
        let n = wire.u.len();
        if wire.u.iter().any(|r| r.len() != n) {
            return Err(D::Error::custom("U must be a square matrix"));
        }
        let mut u = DMatrix::<f64>::zeros(n, n);
        for (i, row) in wire.u.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                u[(i, j)] = match *e {
                    Entry::Real(x) => x,
                    Entry::Complex([re, im]) if im == 0.0 => re,
                    Entry::Complex(_) => {
                        return Err(D::Error::custom("U must be real special orthogonal"))
                    }
                };
            }
        }
        LieLinearAut::new(wire.omega, u).map_err(D::Error::custom)
    }
}

pub fn lie_linear_apply(a: &LieLinearAut, z: &CPoint) -> Result<CPoint> {
    z.check_dim(a.dim())?;
    let v = DVector::from_column_slice(z.coords());
    let u = a.u.map(|x| Complex64::new(x, 0.0));
    CPoint::new((u * v * a.omega).iter().copied().collect())
}

/// (z₁, z) ↦ ω(z₁, Uz) on L_{n+1}.
pub fn extend_linear(a: &LieLinearAut) -> LieLinearAut {
    let n = a.dim();
    let mut u = DMatrix::<f64>::identity(n + 1, n + 1);
    u.view_mut((1, 1), (n, n)).copy_from(&a.u);
    LieLinearAut { omega: a.omega, u }
}

/// ρ_ω(w) = (ω²w₁, ωw₂, …, ωw_n).
pub fn rho_omega(omega: Complex64, w: &CPoint) -> Result<CPoint> {
    check_omega(omega)?;
    let mut out: Vec<Complex64> = w.coords().iter().map(|c| c * omega).collect();
    out[0] = w[0] * omega * omega;
    CPoint::new(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedImage {
    pub image: CPoint,
    /// |Λ_n(a(z⁺)) − Λ_n(a(z⁻))| over the two preimages z± of w.
    pub branch_residual: f64,
}

/// F(w) = Λ_n(a(z)) for z ∈ Λ_n⁻¹(w). Fails with
/// [`Error::NotFiberPreserving`] when the two preimages disagree.
pub fn induced_quotient_aut<F>(a: F, w: &CPoint) -> Result<InducedImage>
where
    F: Fn(&CPoint) -> Result<CPoint>,
{
    let mut plus = w.coords().to_vec();
    plus[0] = w[0].sqrt();
    let mut minus = plus.clone();
    minus[0] = -plus[0];
    let image = domains::lambda_n(&a(&CPoint::new(plus)?)?);
    let other = domains::lambda_n(&a(&CPoint::new(minus)?)?);
    if image.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            got: image.dim(),
        });
    }
    let branch_residual = image.distance(&other);
    if branch_residual > FIBER_RESIDUAL_TOL * (1.0 + image.norm_sqr().sqrt()) {
        return Err(Error::NotFiberPreserving {
            residual: branch_residual,
        });
    }
    Ok(InducedImage {
        image,
        branch_residual,
    })
}

/// The automorphism of 𝕃_{n+1} induced by `extend_linear(a)`.
pub fn extended_quotient_aut(a: &LieLinearAut, w: &CPoint) -> Result<InducedImage> {
    let ext = extend_linear(a);
    induced_quotient_aut(|z| lie_linear_apply(&ext, z), w)
}

/// sup over uniform v ∈ L_n of |F(0, v) − (0, a(v))|, where F is the
/// automorphism of 𝕃_{n+1} extended from `a`.
pub fn restriction_residual(a: &LieLinearAut, samples: usize, seed: u64) -> Result<f64> {
    let d = DomainId::LieBall { n: a.dim() };
    let mut rng = sampling::seeded_rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let v = domains::sample_uniform(&d, &mut rng)?;
        let mut w = vec![Complex64::new(0.0, 0.0)];
        w.extend_from_slice(v.coords());
        let lifted = extended_quotient_aut(a, &CPoint::new(w)?)?.image;
        let mut expected = vec![Complex64::new(0.0, 0.0)];
        expected.extend_from_slice(lie_linear_apply(a, &v)?.coords());
        worst = worst.max(lifted.distance(&CPoint::new(expected)?));
    }
    Ok(worst)
}

/// The blocks (Ã, B̃, C̃, D̃) of the extension: Ã = [[1, 0], [0, A]],
/// B̃ = B under a zero row, C̃ = C after a zero column, D̃ = D.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockExtension {
    pub atilde: DMatrix<Complex64>,
    pub btilde: DMatrix<Complex64>,
    pub ctilde: DMatrix<Complex64>,
    pub dtilde: DMatrix<Complex64>,
}

pub fn block_extend(
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
    c: &DMatrix<Complex64>,
    d: &DMatrix<Complex64>,
) -> Result<BlockExtension> {
    let k = a.nrows();
    let shape_error = |name: &str, want: (usize, usize), got: (usize, usize)| {
        Err(Error::Shape(format!("{name} must be {}x{}, got {}x{}", want.0, want.1, got.0, got.1)))
    };
    if a.ncols() != k || k == 0 {
        return shape_error("A", (k.max(1), k.max(1)), a.shape());
    }
    if b.shape() != (k, 2) {
        return shape_error("B", (k, 2), b.shape());
    }
    if c.shape() != (2, k) {
        return shape_error("C", (2, k), c.shape());
    }
    if d.shape() != (2, 2) {
        return shape_error("D", (2, 2), d.shape());
    }
    for m in [a, b, c, d] {
        MatPoint::new(m.clone())?;
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut atilde = DMatrix::from_element(k + 1, k + 1, zero);
    atilde[(0, 0)] = Complex64::new(1.0, 0.0);
    atilde.view_mut((1, 1), (k, k)).copy_from(a);
    let mut btilde = DMatrix::from_element(k + 1, 2, zero);
    btilde.view_mut((1, 0), (k, 2)).copy_from(b);
    let mut ctilde = DMatrix::from_element(2, k + 1, zero);
    ctilde.view_mut((0, 1), (2, k)).copy_from(c);
    Ok(BlockExtension {
        atilde,
        btilde,
        ctilde,
        dtilde: d.clone(),
    })
}

impl BlockExtension {
    /// (A, B, C, D) recovered by dropping the added row and column.
    pub fn extract(&self) -> (DMatrix<Complex64>, DMatrix<Complex64>, DMatrix<Complex64>, DMatrix<Complex64>) {
        let k = self.atilde.nrows() - 1;
        (
            self.atilde.view((1, 1), (k, k)).into_owned(),
            self.btilde.view((1, 0), (k, 2)).into_owned(),
            self.ctilde.view((0, 1), (2, k)).into_owned(),
            self.dtilde.clone(),
        )
    }

    /// The full matrix [[Ã, B̃], [C̃, D̃]].
    pub fn assemble(&self) -> DMatrix<Complex64> {
        let k = self.atilde.nrows();
        let mut g = DMatrix::from_element(k + 2, k + 2, Complex64::new(0.0, 0.0));
        g.view_mut((0, 0), (k, k)).copy_from(&self.atilde);
        g.view_mut((0, k), (k, 2)).copy_from(&self.btilde);
        g.view_mut((k, 0), (2, k)).copy_from(&self.ctilde);
        g.view_mut((k, k), (2, 2)).copy_from(&self.dtilde);
        g
    }
}

/// max |gᵀJg − J| for J = diag(I_k, −I_2): zero when g preserves the
/// quadratic form of signature (k, 2).
pub fn form_residual(g: &DMatrix<Complex64>) -> Result<f64> {
    if !g.is_square() || g.nrows() < 3 {
        return Err(Error::Shape(format!("expected (k+2)x(k+2), got {:?}", g.shape())));
    }
    let n = g.nrows();
    let j = DMatrix::from_fn(n, n, |r, c| {
        let s = if r == c { if r + 2 < n { 1.0 } else { -1.0 } } else { 0.0 };
        Complex64::new(s, 0.0)
    });
    Ok((g.transpose() * &j * g - &j).iter().map(|c| c.norm()).fold(0.0, f64::max))
}

fn apply_checked<F>(f: &F, x: &CPoint) -> Option<CPoint>
where
    F: Fn(&CPoint) -> Result<CPoint>,
{
    f(x).ok().filter(|y| y.dim() == x.dim())
}

/// Sampled points of Fix(f). Uniform samples of `d` are refined by the
/// averaging iteration x ← (x + f(x))/2 and kept when they stay in `d` and
/// satisfy |f(x) − x| < tol. Survivors closer than [`FIX_DEDUP`] are merged.
pub fn fix_points_sample<F>(f: F, d: &DomainId, samples: usize, seed: u64, tol: f64) -> Result<Vec<CPoint>>
where
    F: Fn(&CPoint) -> Result<CPoint>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let mut rng = sampling::seeded_rng(seed);
    let mut found: Vec<CPoint> = Vec::new();
    for _ in 0..samples {
        let x0 = domains::sample_uniform(d, &mut rng)?;
        let fx0 = f(&x0)?;
        if domains::vector_margin(d, &fx0)? <= 0.0 {
            return Err(Error::Inconsistent(format!("the map does not send {x0:?} into {d:?}")));
        }
        let mut x = x0;
        for _ in 0..FIX_ITERATIONS {
            let Some(fx) = apply_checked(&f, &x) else { break };
            if fx.distance(&x) < tol {
                break;
            }
            x = CPoint::new(x.coords().iter().zip(fx.coords()).map(|(a, b)| (a + b) / 2.0).collect())?;
        }
        let inside = domains::vector_margin(d, &x)? > 0.0;
        let fixed = apply_checked(&f, &x).is_some_and(|fx| fx.distance(&x) < tol);
        if inside && fixed && found.iter().all(|p| p.distance(&x) >= FIX_DEDUP) {
            found.push(x);
        }
    }
    Ok(found)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AutomorphismReport {
    pub interior_samples: usize,
    pub interior_violations: usize,
    /// Smallest margin of an image of an interior sample.
    pub min_interior_image_margin: f64,
    pub boundary_samples: usize,
    pub boundary_violations: usize,
    /// Largest |margin| of an image of a boundary sample.
    pub max_boundary_image_margin: f64,
}

impl AutomorphismReport {
    pub fn passed(&self) -> bool {
        self.interior_violations == 0 && self.boundary_violations == 0
    }
}

/// Boundary points kept by [`validate_automorphism`] have |margin| below this.
pub const BOUNDARY_BAND: f64 = 1e-6;
/// Images of boundary points must have |margin| below this.
pub const BOUNDARY_IMAGE_BAND: f64 = 1e-4;

/// Checks that `f` maps interior samples of `d` inside and boundary samples
/// (interior samples pushed out along the quasi-balanced action to the
/// Minkowski level 1) to the boundary.
pub fn validate_automorphism<F>(f: F, d: &DomainId, samples: usize, seed: u64) -> Result<AutomorphismReport>
where
    F: Fn(&CPoint) -> Result<CPoint>,
{
    let weights = d
        .weights()
        .ok_or_else(|| Error::Unsupported(format!("{d:?} is not quasi-balanced")))?;
    let mut rng = sampling::seeded_rng(seed);
    let mut report = AutomorphismReport {
        interior_samples: 0,
        interior_violations: 0,
        min_interior_image_margin: f64::INFINITY,
        boundary_samples: 0,
        boundary_violations: 0,
        max_boundary_image_margin: 0.0,
    };
    let image_margin = |x: &CPoint| -> Option<f64> {
        apply_checked(&f, x).and_then(|y| domains::vector_margin(d, &y).ok())
    };
    for _ in 0..samples {
        let x = domains::sample_uniform(d, &mut rng)?;
        report.interior_samples += 1;
        match image_margin(&x) {
            Some(m) if m > 0.0 => report.min_interior_image_margin = report.min_interior_image_margin.min(m),
            _ => report.interior_violations += 1,
        }
        let level = domains::minkowski(d, &x, 1e-14)?;
        if level <= 0.0 {
            continue;
        }
        let b = domains::dilate(&x, &weights, Complex64::new(1.0 / level, 0.0));
        if domains::vector_margin(d, &b)?.abs() >= BOUNDARY_BAND {
            continue;
        }
        report.boundary_samples += 1;
        match image_margin(&b) {
            Some(m) if m.abs() < BOUNDARY_IMAGE_BAND => {
                report.max_boundary_image_margin = report.max_boundary_image_margin.max(m.abs())
            }
            _ => report.boundary_violations += 1,
        }
    }
    Ok(report)
}

/// sup over uniform samples x of d of |f(f(x)) − x|.
pub fn involution_residual<F>(f: F, d: &DomainId, samples: usize, seed: u64) -> Result<f64>
where
    F: Fn(&CPoint) -> Result<CPoint>,
{
    let mut rng = sampling::seeded_rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = domains::sample_uniform(d, &mut rng)?;
        worst = worst.max(f(&f(&x)?)?.distance(&x));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::{c, cpoint};
    use crate::proper_maps::{self, MapId};
    use std::f64::consts::FRAC_PI_4;

    fn rotation(n: usize, angle: f64) -> DMatrix<f64> {
        let mut u = DMatrix::identity(n, n);
        u[(0, 0)] = angle.cos();
        u[(0, 1)] = -angle.sin();
        u[(1, 0)] = angle.sin();
        u[(1, 1)] = angle.cos();
        u
    }

    #[test]
    fn construction_checks() {
        assert!(LieLinearAut::new(c(1.0, 0.0), rotation(3, 0.3)).is_ok());
        assert!(LieLinearAut::new(c(1.1, 0.0), rotation(3, 0.3)).is_err());
        let mut reflection = DMatrix::identity(2, 2);
        reflection[(0, 0)] = -1.0;
        assert!(LieLinearAut::new(c(1.0, 0.0), reflection).is_err());
        assert!(LieLinearAut::new(c(1.0, 0.0), DMatrix::from_element(2, 2, 0.5)).is_err());
    }

    #[test]
    fn apply_examples() {
        let z = cpoint(&[(0.5, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert_eq!(lie_linear_apply(&LieLinearAut::identity(3), &z).unwrap(), z);
        let a = LieLinearAut::new(c(0.0, 1.0), DMatrix::identity(3, 3)).unwrap();
        let image = lie_linear_apply(&a, &z).unwrap();
        assert!(image.distance(&cpoint(&[(0.0, 0.5), (0.0, 0.0), (0.0, 0.0)])) < 1e-16);
        assert!(domains::lie_ball_margin(image.coords()) > 0.0);

        let a = LieLinearAut::new(c(1.0, 0.0), rotation(2, FRAC_PI_4)).unwrap();
        let z = cpoint(&[(0.3, 0.2), (-0.1, 0.4)]);
        let m0 = domains::lie_ball_margin(z.coords());
        let m1 = domains::lie_ball_margin(lie_linear_apply(&a, &z).unwrap().coords());
        assert!((m0 - m1).abs() < 1e-14);
    }

    #[test]
    fn extension_commutes_with_sigma() {
        let mut rng = sampling::seeded_rng(2);
        let a = LieLinearAut::random(&mut rng, 3);
        let ext = extend_linear(&a);
        assert_eq!(extend_linear(&LieLinearAut::identity(2)), LieLinearAut::identity(3));
        for _ in 0..200 {
            let z = domains::sample_uniform(&DomainId::LieBall { n: 4 }, &mut rng).unwrap();
            let sz = proper_maps::deck_apply(&MapId::LambdaN { n: 4 }, &z).unwrap();
            let lhs = lie_linear_apply(&ext, &sz).unwrap();
            let rhs = proper_maps::deck_apply(&MapId::LambdaN { n: 4 }, &lie_linear_apply(&ext, &z).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        assert!(restriction_residual(&a, 200, 3).unwrap() < 1e-12);
    }

    #[test]
    fn rho_examples() {
        let w = cpoint(&[(0.2, 0.1), (0.3, -0.2), (0.0, 0.1)]);
        assert_eq!(rho_omega(c(1.0, 0.0), &w).unwrap(), w);
        let om = Complex64::from_polar(1.0, 0.4);
        let back = rho_omega(om.conj(), &rho_omega(om, &w).unwrap()).unwrap();
        assert!(back.distance(&w) < 1e-15);
        assert!(rho_omega(c(0.5, 0.0), &w).is_err());
        let z = cpoint(&[(0.2, 0.1), (0.3, -0.2), (0.0, 0.1)]);
        let lhs = rho_omega(om, &domains::lambda_n(&z)).unwrap();
        let rhs = domains::lambda_n(&z.scale(om));
        assert!(lhs.distance(&rhs) < 1e-15);
    }

    #[test]
    fn induced_maps() {
        let w = cpoint(&[(0.1, 0.2), (0.3, 0.0), (0.0, -0.2)]);
        let sigma = |z: &CPoint| proper_maps::deck_apply(&MapId::LambdaN { n: 3 }, z);
        let id = induced_quotient_aut(sigma, &w).unwrap();
        assert!(id.image.distance(&w) < 1e-15);
        assert_eq!(id.branch_residual, 0.0);

        let om = Complex64::from_polar(1.0, 1.1);
        let rot = induced_quotient_aut(|z: &CPoint| Ok(z.scale(om)), &w).unwrap();
        assert!(rot.image.distance(&rho_omega(om, &w).unwrap()) < 1e-15);

        let shift = |z: &CPoint| {
            let mut v = z.coords().to_vec();
            v[1] += z[0];
            CPoint::new(v)
        };
        assert!(matches!(induced_quotient_aut(shift, &w), Err(Error::NotFiberPreserving { .. })));
    }

    #[test]
    fn blocks() {
        let k = 3;
        let eye = |n: usize| DMatrix::<Complex64>::identity(n, n);
        let zeros = |r: usize, c: usize| DMatrix::<Complex64>::zeros(r, c);
        let ext = block_extend(&eye(k), &zeros(k, 2), &zeros(2, k), &eye(2)).unwrap();
        assert_eq!(ext.atilde, eye(k + 1));
        assert_eq!(ext.btilde, zeros(k + 1, 2));
        assert_eq!(ext.ctilde, zeros(2, k + 1));
        assert_eq!(ext.dtilde, eye(2));
        assert!(form_residual(&ext.assemble()).unwrap() < 1e-15);

        let a = DMatrix::from_fn(k, k, |i, j| c(i as f64, j as f64));
        let b = DMatrix::from_fn(k, 2, |i, j| c(1.0 + i as f64, -(j as f64)));
        let cm = DMatrix::from_fn(2, k, |i, j| c(2.0, (i * j) as f64));
        let d = DMatrix::from_fn(2, 2, |i, j| c((i + j) as f64, 1.0));
        let ext = block_extend(&a, &b, &cm, &d).unwrap();
        assert_eq!(ext.atilde.shape(), (k + 1, k + 1));
        assert_eq!(ext.extract(), (a.clone(), b.clone(), cm.clone(), d.clone()));
        assert!(block_extend(&a, &cm, &cm, &d).is_err());
    }

    #[test]
    fn boost_extension_preserves_the_form() {
        let t: f64 = 0.7;
        let (ch, sh) = (c(t.cosh(), 0.0), c(t.sinh(), 0.0));
        let k = 2;
        let mut g = DMatrix::<Complex64>::identity(k + 2, k + 2);
        g[(0, 0)] = ch;
        g[(0, k)] = sh;
        g[(k, 0)] = sh;
        g[(k, k)] = ch;
        assert!(form_residual(&g).unwrap() < 1e-14);
        let ext = block_extend(
            &g.view((0, 0), (k, k)).into_owned(),
            &g.view((0, k), (k, 2)).into_owned(),
            &g.view((k, 0), (2, k)).into_owned(),
            &g.view((k, k), (2, 2)).into_owned(),
        )
        .unwrap();
        assert!(form_residual(&ext.assemble()).unwrap() < 1e-14);
    }

    #[test]
    fn fixed_points() {
        let sigma = |z: &CPoint| proper_maps::deck_apply(&MapId::LambdaN { n: 3 }, z);
        let pts = fix_points_sample(sigma, &DomainId::LieBall { n: 3 }, 200, 1, FIX_TOL).unwrap();
        assert!(!pts.is_empty());
        assert!(pts.iter().all(|p| p[0].norm() < 1e-12));

        let annulus = DomainId::Annulus { r: 0.5 };
        let neg = |z: &CPoint| Ok(z.scale(c(-1.0, 0.0)));
        assert!(fix_points_sample(neg, &annulus, 200, 2, FIX_TOL).unwrap().is_empty());

        let jouk = MapId::Joukowski { r: 0.5, omega: c(1.0, 0.0) };
        let g = |z: &CPoint| proper_maps::deck_apply(&jouk, z);
        let pts = fix_points_sample(g, &annulus, 200, 3, FIX_TOL).unwrap();
        assert_eq!(pts.len(), 2);
        for p in &pts {
            assert!((p[0].norm() - 1.0).abs() < 1e-8 && p[0].im.abs() < 1e-8);
        }
    }

    #[test]
    fn plug_in_validation() {
        let mut rng = sampling::seeded_rng(4);
        let a = LieLinearAut::random(&mut rng, 3);
        let d = DomainId::LieBall { n: 3 };
        let report = validate_automorphism(|z: &CPoint| lie_linear_apply(&a, z), &d, 300, 5).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.boundary_samples > 250);

        let shrink = |z: &CPoint| Ok(z.scale(c(0.5, 0.0)));
        let report = validate_automorphism(shrink, &d, 100, 6).unwrap();
        assert!(!report.passed());

        let sigma = |z: &CPoint| proper_maps::deck_apply(&MapId::LambdaN { n: 3 }, z);
        assert_eq!(involution_residual(sigma, &d, 100, 7).unwrap(), 0.0);
    }

    #[test]
    fn json_form() {
        let a: LieLinearAut = serde_json::from_str(r#"{"omega":[0,1],"U":[[1,0],[0,1]]}"#).unwrap();
        assert_eq!(a.omega(), c(0.0, 1.0));
        assert!(serde_json::from_str::<LieLinearAut>(r#"{"omega":[0,1],"U":[[[0,1],0],[0,[0,1]]]}"#).is_err());
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"omega":[0.0,1.0],"U":[[1.0,0.0],[0.0,1.0]]}"#);
    }
}
