//! Domain descriptors, membership with signed margins, Minkowski
//! functionals, Shilov-boundary samplers and Monte-Carlo volumes.
//!
//! Every membership test reduces to a signed margin: the minimum slack over
//! the domain's defining strict inequalities. Positive means strictly inside.
//! The symmetrized bidisc, the tetrablock and 𝔽 have no intrinsic
//! inequalities here; they are tested by lifting through the fiber of their
//! defining 2-proper map and testing the source domain.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{CPoint, MatPoint, Point};
use crate::proper_maps::{self, MapId};
use crate::sampling;

/// Default band around zero inside which a margin counts as boundary.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Samples per rayon chunk in volume estimation; part of the determinism contract.
const MC_CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", content = "params")]
pub enum DomainId {
    UnitDisc,
    Polydisc { n: usize },
    EuclideanBall { n: usize },
    /// The annulus A(r, 1/r), 0 < r < 1.
    Annulus { r: f64 },
    CartanI { m: usize, n: usize },
    CartanII { n: usize },
    CartanIII { n: usize },
    LieBall { n: usize },
    /// 𝕃_n = Λ_n(L_n), n ≥ 2.
    QuotientL { n: usize },
    /// The complex ellipsoid ℰ(1/2, 1, …, 1).
    Ellipsoid { n: usize },
    SymBidisc,
    Tetrablock,
    FDomain,
}

/// Shape a domain expects its points to have.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointShape {
    Vector(usize),
    Matrix(usize, usize),
}

impl DomainId {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            DomainId::Polydisc { n }
            | DomainId::EuclideanBall { n }
            | DomainId::CartanII { n }
            | DomainId::CartanIII { n }
            | DomainId::LieBall { n }
            | DomainId::Ellipsoid { n }
                if n == 0 =>
            {
                bad(format!("{self:?}: n must be at least 1"))
            }
            DomainId::CartanI { m, n } if m == 0 || n == 0 => {
                bad(format!("{self:?}: m and n must be at least 1"))
            }
            DomainId::QuotientL { n } if n < 2 => bad(format!("QuotientL needs n >= 2, got {n}")),
            DomainId::Annulus { r } if !(r > 0.0 && r < 1.0) => {
                bad(format!("Annulus needs 0 < r < 1, got {r}"))
            }
            _ => Ok(()),
        }
    }

    pub fn shape(&self) -> PointShape {
        match *self {
            DomainId::UnitDisc | DomainId::Annulus { .. } => PointShape::Vector(1),
            DomainId::Polydisc { n }
            | DomainId::EuclideanBall { n }
            | DomainId::LieBall { n }
            | DomainId::QuotientL { n }
            | DomainId::Ellipsoid { n } => PointShape::Vector(n),
            DomainId::SymBidisc => PointShape::Vector(2),
            DomainId::Tetrablock => PointShape::Vector(3),
            DomainId::FDomain => PointShape::Vector(4),
            DomainId::CartanI { m, n } => PointShape::Matrix(m, n),
            DomainId::CartanII { n } | DomainId::CartanIII { n } => PointShape::Matrix(n, n),
        }
    }

    /// Dimension of vector points, or `None` for matrix domains.
    pub fn vector_dim(&self) -> Option<usize> {
        match self.shape() {
            PointShape::Vector(n) => Some(n),
            PointShape::Matrix(..) => None,
        }
    }

    /// Quasi-balancing weights (k_1, …, k_n): the domain is invariant under
    /// z ↦ (λ^{k_1} z_1, …, λ^{k_n} z_n) for |λ| ≤ 1.
    pub fn weights(&self) -> Option<Vec<u32>> {
        let ones = |n: usize| vec![1; n];
        let first_two = |n: usize| {
            let mut w = vec![1; n];
            w[0] = 2;
            w
        };
        match *self {
            DomainId::UnitDisc => Some(ones(1)),
            DomainId::Polydisc { n } | DomainId::EuclideanBall { n } | DomainId::LieBall { n } => {
                Some(ones(n))
            }
            DomainId::QuotientL { n } | DomainId::Ellipsoid { n } => Some(first_two(n)),
            DomainId::SymBidisc => Some(vec![1, 2]),
            DomainId::Tetrablock => Some(vec![1, 1, 2]),
            DomainId::FDomain => Some(vec![1, 1, 2, 1]),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MembershipState {
    Inside,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub state: MembershipState,
    pub margin: f64,
    pub tol: f64,
}

impl MembershipVerdict {
    pub fn from_margin(margin: f64, tol: f64) -> Self {
        let state = if margin.abs() <= tol {
            MembershipState::Boundary
        } else if margin > 0.0 {
            MembershipState::Inside
        } else {
            MembershipState::Outside
        };
        Self { state, margin, tol }
    }

    pub fn is_inside(&self) -> bool {
        self.state == MembershipState::Inside
    }
}

/// Membership verdict with the default boundary tolerance.
pub fn contains(d: &DomainId, p: &Point) -> Result<MembershipVerdict> {
    contains_with_tol(d, p, DEFAULT_TOL)
}

pub fn contains_with_tol(d: &DomainId, p: &Point, tol: f64) -> Result<MembershipVerdict> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be nonnegative, got {tol}")));
    }
    Ok(MembershipVerdict::from_margin(margin(d, p)?, tol))
}

/// Convenience wrapper for vector domains.
pub fn contains_vector(d: &DomainId, z: &CPoint) -> Result<MembershipVerdict> {
    contains(d, &Point::Vector(z.clone()))
}

/// Signed margin of `p` with respect to `d`.
pub fn margin(d: &DomainId, p: &Point) -> Result<f64> {
    d.validate()?;
    match (d.shape(), p) {
        (PointShape::Vector(n), Point::Vector(z)) => {
            z.check_dim(n)?;
            vector_margin(d, z)
        }
        (PointShape::Matrix(m, n), Point::Matrix(a)) => {
            if a.shape() != (m, n) {
                return Err(Error::Shape(format!(
                    "{d:?} needs a {m}x{n} matrix, got {:?}",
                    a.shape()
                )));
            }
            matrix_margin(d, a)
        }
        (PointShape::Vector(_), Point::Matrix(_)) => {
            Err(Error::Shape(format!("{d:?} takes vector points")))
        }
        (PointShape::Matrix(..), Point::Vector(_)) => {
            Err(Error::Shape(format!("{d:?} takes matrix points")))
        }
    }
}

/// Margin of a vector point; caller guarantees the dimension.
pub(crate) fn vector_margin(d: &DomainId, z: &CPoint) -> Result<f64> {
    let zs = z.coords();
    let disc = |c: &Complex64| 1.0 - c.norm_sqr();
    Ok(match *d {
        DomainId::UnitDisc => disc(&zs[0]),
        DomainId::Polydisc { .. } => zs.iter().map(disc).fold(f64::INFINITY, f64::min),
        DomainId::EuclideanBall { .. } => 1.0 - z.norm_sqr(),
        DomainId::Annulus { r } => {
            let m = zs[0].norm_sqr();
            (m - r * r).min(1.0 / (r * r) - m)
        }
        DomainId::LieBall { .. } => lie_ball_margin(zs),
        DomainId::QuotientL { .. } => quotient_margin(zs),
        DomainId::Ellipsoid { .. } => {
            1.0 - zs[0].norm() - zs[1..].iter().map(|c| c.norm_sqr()).sum::<f64>()
        }
        DomainId::SymBidisc => lifted_margin(&MapId::BidiscSym { omega: Complex64::new(1.0, 0.0) }, z)?,
        DomainId::Tetrablock => lifted_margin(&MapId::TetrablockPhi, z)?,
        DomainId::FDomain => lifted_margin(&MapId::FMapPhi4, z)?,
        DomainId::CartanI { .. } | DomainId::CartanII { .. } | DomainId::CartanIII { .. } => {
            unreachable!("matrix domains are dispatched by shape")
        }
    })
}

fn matrix_margin(d: &DomainId, a: &MatPoint) -> Result<f64> {
    let scale = 1.0 + a.entries().norm();
    match d {
        DomainId::CartanII { .. } if a.skew_defect() > 1e-12 * scale => {
            Err(Error::Shape("CartanII needs a skew-symmetric matrix".into()))
        }
        DomainId::CartanIII { .. } if a.symmetry_defect() > 1e-12 * scale => {
            Err(Error::Shape("CartanIII needs a symmetric matrix".into()))
        }
        _ => Ok(1.0 - operator_norm(a.entries())),
    }
}

/// Lie ball margin min(1 − ‖z‖², 1 + |z•z|² − 2‖z‖²).
///
/// The second slack equals (1 − ‖z‖²)² − G with G = ‖z‖⁴ − |z•z|² =
/// 4Σ_{j<k}(x_j y_k − x_k y_j)² for z = x + iy; that sum has no cancellation,
/// which keeps the margin's sign reliable next to the boundary.
pub fn lie_ball_margin(z: &[Complex64]) -> f64 {
    let slack = 1.0 - z.iter().map(|c| c.norm_sqr()).sum::<f64>();
    slack.min(slack * slack - lie_gap_sqr(z))
}

/// ‖z‖⁴ − |z•z|², via the Lagrange identity.
fn lie_gap_sqr(z: &[Complex64]) -> f64 {
    let mut g = 0.0;
    for j in 0..z.len() {
        for k in (j + 1)..z.len() {
            let cross = z[j].re * z[k].im - z[k].re * z[j].im;
            g += cross * cross;
        }
    }
    4.0 * g
}

/// Lie ball margin in the original form: z ∈ 𝔹_n and
/// √(‖z‖⁴ − |z•z|²) < 1 − ‖z‖².
pub fn lie_ball_sqrt_form_margin(z: &[Complex64]) -> f64 {
    let slack = 1.0 - z.iter().map(|c| c.norm_sqr()).sum::<f64>();
    slack.min(slack - lie_gap_sqr(z).sqrt())
}

/// 𝕃_n margin through the principal-branch preimage (√w₁, w₂, …, w_n).
pub fn quotient_margin(w: &[Complex64]) -> f64 {
    let mut z = w.to_vec();
    z[0] = w[0].sqrt();
    lie_ball_margin(&z)
}

/// 𝕃_n margin from the intrinsic description: with a = |w₁| + Σ_{j≥2}|w_j|²
/// and b = |w₁ + Σ_{j≥2} w_j²|, require a < 1 and √(a² − b²) < 1 − a.
pub fn quotient_intrinsic_margin(w: &[Complex64]) -> f64 {
    let a = w[0].norm() + w[1..].iter().map(|c| c.norm_sqr()).sum::<f64>();
    let b = (w[0] + w[1..].iter().map(|c| c * c).sum::<Complex64>()).norm();
    let gap = (a * a - b * b).max(0.0).sqrt();
    (1.0 - a).min(1.0 - a - gap)
}

fn lifted_margin(map: &MapId, w: &CPoint) -> Result<f64> {
    let preimages = proper_maps::algebraic_fiber(map, w)?;
    preimages
        .iter()
        .map(|p| proper_maps::source_margin(map, p))
        .try_fold(f64::NEG_INFINITY, |acc, m| m.map(|m| acc.max(m)))
}

/// Largest singular value. Closed form for 2×2, SVD otherwise.
pub fn operator_norm(a: &DMatrix<Complex64>) -> f64 {
    if a.shape() == (2, 2) {
        let frob = a.iter().map(|c| c.norm_sqr()).sum::<f64>();
        let det = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).norm_sqr();
        let disc = (frob * frob - 4.0 * det).max(0.0).sqrt();
        return ((frob + disc) / 2.0).sqrt();
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Singular values through a general SVD, largest first.
pub fn singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// 2×2 matrix ball test through the two scalar inequalities equivalent to
/// I − AA* > 0: trace 2 > Σ|a_ij|² and determinant 1 + |det A|² > Σ|a_ij|².
pub fn cartan1_contains_2x2(a: &MatPoint) -> Result<MembershipVerdict> {
    if a.shape() != (2, 2) {
        return Err(Error::Shape(format!("expected 2x2, got {:?}", a.shape())));
    }
    let e = a.entries();
    let frob: f64 = e.iter().map(|c| c.norm_sqr()).sum();
    let det = (e[(0, 0)] * e[(1, 1)] - e[(0, 1)] * e[(1, 0)]).norm_sqr();
    let margin = (2.0 - frob).min(1.0 + det - frob);
    Ok(MembershipVerdict::from_margin(margin, DEFAULT_TOL))
}

/// Quasi-homogeneous dilation (λ^{k_1} w_1, …, λ^{k_n} w_n).
pub fn dilate(w: &CPoint, weights: &[u32], lambda: Complex64) -> CPoint {
    CPoint::from_vec(
        w.coords()
            .iter()
            .zip(weights)
            .map(|(c, &k)| c * lambda.powu(k))
            .collect(),
    )
}

/// Minkowski functional inf{t > 0 : (w_j / t^{k_j})_j ∈ d}, bisected to
/// absolute accuracy `tol`.
pub fn minkowski(d: &DomainId, w: &CPoint, tol: f64) -> Result<f64> {
    d.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let weights = d
        .weights()
        .ok_or_else(|| Error::Unsupported(format!("{d:?} is not quasi-balanced")))?;
    let n = d.vector_dim().expect("quasi-balanced domains take vectors");
    let w = CPoint::new(w.coords().to_vec())?;
    w.check_dim(n)?;
    if w.coords().iter().all(|c| c.norm_sqr() == 0.0) {
        return Ok(0.0);
    }
    let inside = |t: f64| -> Result<bool> {
        let scaled = CPoint::from_vec(
            w.coords()
                .iter()
                .zip(&weights)
                .map(|(c, &k)| c / t.powi(k as i32))
                .collect(),
        );
        Ok(vector_margin(d, &scaled)? > 0.0)
    };
    let mut hi = 1.0;
    let mut doublings = 0;
    while !inside(hi)? {
        hi *= 2.0;
        doublings += 1;
        if doublings > 1100 {
            return Err(Error::Inconsistent("Minkowski bracket did not close".into()));
        }
    }
    let mut lo = 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The Lie-ball Shilov point e^{iθ}x for a real unit vector x.
pub fn shilov_point(theta: f64, x: &[f64]) -> CPoint {
    let phase = Complex64::from_polar(1.0, theta);
    CPoint::from_vec(x.iter().map(|&xi| phase * xi).collect())
}

/// Λ_n(z) = (z₁², z₂, …, z_n).
pub(crate) fn lambda_n(z: &CPoint) -> CPoint {
    let mut w = z.coords().to_vec();
    w[0] = w[0] * w[0];
    CPoint::from_vec(w)
}

/// Shilov boundary samples of L_n (points e^{iθ}x with x uniform on the
/// real sphere and θ stratified over [0, π)) or their Λ_n images for 𝕃_n.
pub fn shilov_sample(d: &DomainId, count: usize, seed: u64) -> Result<Vec<CPoint>> {
    d.validate()?;
    let (n, quotient) = match *d {
        DomainId::LieBall { n } => (n, false),
        DomainId::QuotientL { n } => (n, true),
        _ => return Err(Error::Unsupported(format!("no Shilov sampler for {d:?}"))),
    };
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    let mut rng = sampling::seeded_rng(seed);
    Ok((0..count)
        .map(|k| {
            let theta = PI * (k as f64 + rng.random::<f64>()) / count as f64;
            let x = sampling::real_unit_sphere(&mut rng, n);
            let z = shilov_point(theta, &x);
            if quotient {
                lambda_n(&z)
            } else {
                z
            }
        })
        .collect())
}

/// A polynomial Σ c_α z^α with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub terms: Vec<(Complex64, Vec<u32>)>,
}

impl Polynomial {
    /// All monomials of degree ≤ `degree` in `n` variables with standard
    /// complex Gaussian coefficients.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, degree: u32) -> Self {
        fn exponents(n: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if prefix.len() == n {
                out.push(prefix.clone());
                return;
            }
            for k in 0..=budget {
                prefix.push(k);
                exponents(n, budget - k, prefix, out);
                prefix.pop();
            }
        }
        let mut all = Vec::new();
        exponents(n, degree, &mut Vec::with_capacity(n), &mut all);
        Self {
            terms: all.into_iter().map(|e| (sampling::complex_gaussian(&mut *rng), e)).collect(),
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, e)| e.iter().zip(z).fold(*c, |acc, (&k, zj)| acc * zj.powu(k)))
            .sum()
    }
}

/// Sampled maximum principle: the smallest, over `polys` random polynomials
/// of degree ≤ `degree`, of max|p| on `count` Shilov samples divided by
/// max|p| on `count` uniform samples of the domain.
pub fn shilov_max_ratio(d: &DomainId, polys: usize, degree: u32, count: usize, seed: u64) -> Result<f64> {
    let n = d
        .vector_dim()
        .ok_or_else(|| Error::Unsupported(format!("{d:?} takes matrix points")))?;
    let shilov = shilov_sample(d, count, seed)?;
    let mut rng = sampling::substream(seed, 1);
    let interior = (0..count)
        .map(|_| sample_uniform(d, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = sampling::substream(seed, 2);
    let polynomials: Vec<Polynomial> = (0..polys).map(|_| Polynomial::random(&mut rng, n, degree)).collect();
    let max_on = |p: &Polynomial, pts: &[CPoint]| pts.iter().map(|z| p.eval(z.coords()).norm()).fold(0.0, f64::max);
    Ok(polynomials
        .par_iter()
        .map(|p| max_on(p, &shilov) / max_on(p, &interior))
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(f64::INFINITY, f64::min))
}

/// Radii R_j with |p_j| ≤ R_j on the domain (matrix domains: row-major entries).
pub fn bounding_box(d: &DomainId) -> Result<Vec<f64>> {
    d.validate()?;
    Ok(match *d {
        DomainId::Annulus { r } => vec![1.0 / r],
        DomainId::SymBidisc => vec![2.0, 1.0],
        DomainId::FDomain => vec![1.0, 1.0, 1.0, 2.0],
        _ => match d.shape() {
            PointShape::Vector(n) => vec![1.0; n],
            PointShape::Matrix(m, n) => vec![1.0; m * n],
        },
    })
}

/// A uniform point of a vector domain by rejection. Lie balls and
/// Euclidean balls are proposed from the unit ball; 𝕃_n points are Λ_n
/// images of uniform L_n points thinned with acceptance |z₁|², which undoes
/// the Jacobian |2z₁|² of Λ_n. Everything else uses the bounding polydisc.
pub fn sample_uniform<R: Rng + ?Sized>(d: &DomainId, rng: &mut R) -> Result<CPoint> {
    d.validate()?;
    let n = d
        .vector_dim()
        .ok_or_else(|| Error::Unsupported(format!("{d:?} takes matrix points")))?;
    const TRIES: usize = 10_000_000;
    match *d {
        DomainId::EuclideanBall { .. } => return Ok(sampling::uniform_ball(rng, n)),
        DomainId::LieBall { .. } => {
            for _ in 0..TRIES {
                let z = sampling::uniform_ball(&mut *rng, n);
                if lie_ball_margin(z.coords()) > 0.0 {
                    return Ok(z);
                }
            }
        }
        DomainId::QuotientL { .. } => {
            let lie = DomainId::LieBall { n };
            for _ in 0..TRIES {
                let z = sample_uniform(&lie, &mut *rng)?;
                if rng.random::<f64>() < z[0].norm_sqr() {
                    return Ok(lambda_n(&z));
                }
            }
        }
        _ => {
            let radii = bounding_box(d)?;
            for _ in 0..TRIES {
                let z = sampling::uniform_polydisc(&mut *rng, &radii);
                if vector_margin(d, &z)? > 0.0 {
                    return Ok(z);
                }
            }
        }
    }
    Err(Error::Inconsistent(format!("rejection sampler for {d:?} never accepted")))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McVolume {
    pub estimate: f64,
    pub stderr: f64,
    pub hits: u64,
    pub samples: u64,
}

/// Monte-Carlo Lebesgue volume (in ℝ²ⁿ) by hit counting in the bounding
/// polydisc. Work is split into fixed-size chunks with their own
/// sub-streams, so the result depends only on `(d, samples, seed)`.
pub fn mc_volume(d: &DomainId, samples: usize, seed: u64) -> Result<McVolume> {
    d.validate()?;
    if d.vector_dim().is_none() {
        return Err(Error::Unsupported(format!("no volume estimator for {d:?}")));
    }
    if samples < 10_000 {
        return Err(Error::InvalidParameter(format!("need at least 10^4 samples, got {samples}")));
    }
    let radii = bounding_box(d)?;
    let box_volume: f64 = radii.iter().map(|r| PI * r * r).product();
    let chunks = samples.div_ceil(MC_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|k| -> Result<u64> {
            let mut rng = sampling::substream(seed, k as u64);
            let len = MC_CHUNK.min(samples - k * MC_CHUNK);
            let mut hits = 0;
            for _ in 0..len {
                let z = sampling::uniform_polydisc(&mut rng, &radii);
                if vector_margin(d, &z)? > 0.0 {
                    hits += 1;
                }
            }
            Ok(hits)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    let p = hits as f64 / samples as f64;
    Ok(McVolume {
        estimate: box_volume * p,
        stderr: box_volume * (p * (1.0 - p) / samples as f64).sqrt(),
        hits,
        samples: samples as u64,
    })
}
