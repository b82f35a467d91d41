//! The catalogue of 2-proper holomorphic maps: evaluation, closed-form
//! Jacobian determinants, fiber solvers and deck involutions.
//!
//! Matrix-sourced maps work in flat coordinates: `TetrablockPhi` takes
//! (a₁₁, a₂₂, a) for the symmetric matrix [[a₁₁, a], [a, a₂₂]] and
//! `FMapPhi4` takes (a₁₁, a₁₂, a₂₁, a₂₂). That ordering is part of the
//! wire format.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domains::{self, DomainId, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::point::{CPoint, MatPoint};
use crate::sampling;

/// Preimages closer than this are one (critical) fiber point.
pub const CRITICAL_MERGE: f64 = 1e-9;

/// Source points with smaller locus margin are not used as regular probes.
const REGULAR_LOCUS_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NeilSource {
    Ball2,
    Bidisc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum MapId {
    /// z ↦ z² on the unit disc.
    DiscSquare,
    /// z ↦ z² from A(r, 1/r) onto A(r², 1/r²).
    AnnulusSquare { r: f64 },
    /// z ↦ z + ω/z on A(r, 1/r).
    Joukowski { r: f64, omega: Complex64 },
    /// (z₁, z₂) ↦ (z₁², z₂) on the bidisc.
    BidiscSplit,
    /// (z₁, z₂) ↦ (ω̄z₁ + ωz₂, z₁z₂) from the bidisc onto 𝔾₂.
    BidiscSym { omega: Complex64 },
    /// (z₁, z′) ↦ (z₁², z′) from 𝔹_n onto ℰ(1/2, 1, …, 1).
    BallEllipsoid { n: usize },
    /// (a₁₁, a₂₂, a) ↦ (a₁₁, a₂₂, a₁₁a₂₂ − a²) from R_III(2) onto 𝔼.
    TetrablockPhi,
    /// (a₁₁, a₁₂, a₂₁, a₂₂) ↦ (a₁₁, a₂₂, det A, a₁₂ + a₂₁) from R_I(2×2) onto 𝔽.
    FMapPhi4,
    /// Λ_n(z) = (z₁², z₂, …, z_n) from L_n onto 𝕃_n.
    LambdaN { n: usize },
    /// (z₁, z₂) ↦ (z₁², z₂², z₁z₂) onto the Neil parabola; not equidimensional.
    NeilMap { source: NeilSource },
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl MapId {
    /// Every catalogued map, with representative parameters.
    pub fn catalogue() -> Vec<MapId> {
        let omega = Complex64::from_polar(1.0, 0.7);
        vec![
            MapId::DiscSquare,
            MapId::AnnulusSquare { r: 0.5 },
            MapId::Joukowski { r: 0.5, omega: one() },
            MapId::Joukowski { r: 0.6, omega },
            MapId::BidiscSplit,
            MapId::BidiscSym { omega: one() },
            MapId::BidiscSym { omega },
            MapId::BallEllipsoid { n: 2 },
            MapId::BallEllipsoid { n: 4 },
            MapId::TetrablockPhi,
            MapId::FMapPhi4,
            MapId::LambdaN { n: 2 },
            MapId::LambdaN { n: 3 },
            MapId::LambdaN { n: 5 },
            MapId::NeilMap { source: NeilSource::Ball2 },
            MapId::NeilMap { source: NeilSource::Bidisc },
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let check_omega = |omega: Complex64| {
            if (omega.norm() - 1.0).abs() > 1e-12 {
                Err(Error::InvalidParameter(format!("omega must be unimodular, |omega| = {}", omega.norm())))
            } else {
                Ok(())
            }
        };
        let check_r = |r: f64| {
            if r > 0.0 && r < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("annulus parameter must lie in (0, 1), got {r}")))
            }
        };
        match *self {
            MapId::AnnulusSquare { r } => check_r(r),
            MapId::Joukowski { r, omega } => check_r(r).and(check_omega(omega)),
            MapId::BidiscSym { omega } => check_omega(omega),
            MapId::BallEllipsoid { n } | MapId::LambdaN { n } if n < 2 => {
                Err(Error::InvalidParameter(format!("{self:?}: n must be at least 2")))
            }
            _ => Ok(()),
        }
    }

    /// Source domain. Matrix sources are reported as their Cartan domain
    /// even though the map takes flat coordinates.
    pub fn source_domain(&self) -> DomainId {
        match *self {
            MapId::DiscSquare => DomainId::UnitDisc,
            MapId::AnnulusSquare { r } | MapId::Joukowski { r, .. } => DomainId::Annulus { r },
            MapId::BidiscSplit | MapId::BidiscSym { .. } => DomainId::Polydisc { n: 2 },
            MapId::BallEllipsoid { n } => DomainId::EuclideanBall { n },
            MapId::TetrablockPhi => DomainId::CartanIII { n: 2 },
            MapId::FMapPhi4 => DomainId::CartanI { m: 2, n: 2 },
            MapId::LambdaN { n } => DomainId::LieBall { n },
            MapId::NeilMap { source: NeilSource::Ball2 } => DomainId::EuclideanBall { n: 2 },
            MapId::NeilMap { source: NeilSource::Bidisc } => DomainId::Polydisc { n: 2 },
        }
    }

    /// Target domain, when the image is a domain with a membership test here.
    /// The ellipse image of the Joukowski map and the Neil parabola have none.
    pub fn target_domain(&self) -> Option<DomainId> {
        match *self {
            MapId::DiscSquare => Some(DomainId::UnitDisc),
            MapId::AnnulusSquare { r } => Some(DomainId::Annulus { r: r * r }),
            MapId::Joukowski { .. } | MapId::NeilMap { .. } => None,
            MapId::BidiscSplit => Some(DomainId::Polydisc { n: 2 }),
            MapId::BidiscSym { omega } if omega == one() => Some(DomainId::SymBidisc),
            MapId::BidiscSym { .. } => None,
            MapId::BallEllipsoid { n } => Some(DomainId::Ellipsoid { n }),
            MapId::TetrablockPhi => Some(DomainId::Tetrablock),
            MapId::FMapPhi4 => Some(DomainId::FDomain),
            MapId::LambdaN { n } => Some(DomainId::QuotientL { n }),
        }
    }

    pub fn source_dim(&self) -> usize {
        match *self {
            MapId::DiscSquare | MapId::AnnulusSquare { .. } | MapId::Joukowski { .. } => 1,
            MapId::BidiscSplit | MapId::BidiscSym { .. } | MapId::NeilMap { .. } => 2,
            MapId::TetrablockPhi => 3,
            MapId::FMapPhi4 => 4,
            MapId::BallEllipsoid { n } | MapId::LambdaN { n } => n,
        }
    }

    pub fn target_dim(&self) -> usize {
        match self {
            MapId::NeilMap { .. } => 3,
            _ => self.source_dim(),
        }
    }

    /// True when source and target have equal dimension, so det π′ exists.
    pub fn is_equidimensional(&self) -> bool {
        self.source_dim() == self.target_dim()
    }
}

/// Source-domain margin of a point given in the map's source coordinates.
pub fn source_margin(m: &MapId, p: &CPoint) -> Result<f64> {
    m.validate()?;
    p.check_dim(m.source_dim())?;
    match m {
        MapId::TetrablockPhi => {
            let [a11, a22, a] = [p[0], p[1], p[2]];
            Ok(1.0 - domains::operator_norm(MatPoint::from_2x2([[a11, a], [a, a22]]).entries()))
        }
        MapId::FMapPhi4 => Ok(1.0 - domains::operator_norm(flat_to_matrix(p).entries())),
        _ => domains::vector_margin(&m.source_domain(), p),
    }
}

/// (a₁₁, a₁₂, a₂₁, a₂₂) → [[a₁₁, a₁₂], [a₂₁, a₂₂]].
pub fn flat_to_matrix(p: &CPoint) -> MatPoint {
    MatPoint::from_2x2([[p[0], p[1]], [p[2], p[3]]])
}

pub fn eval(m: &MapId, p: &CPoint) -> Result<CPoint> {
    m.validate()?;
    p.check_dim(m.source_dim())?;
    let z = p.coords();
    let out = match *m {
        MapId::DiscSquare | MapId::AnnulusSquare { .. } => vec![z[0] * z[0]],
        MapId::Joukowski { omega, .. } => {
            if z[0].norm_sqr() == 0.0 {
                return Err(Error::Pole("z + omega/z at z = 0"));
            }
            vec![z[0] + omega / z[0]]
        }
        MapId::BidiscSplit => vec![z[0] * z[0], z[1]],
        MapId::BidiscSym { omega } => vec![omega.conj() * z[0] + omega * z[1], z[0] * z[1]],
        MapId::BallEllipsoid { .. } | MapId::LambdaN { .. } => {
            let mut w = z.to_vec();
            w[0] = z[0] * z[0];
            w
        }
        MapId::TetrablockPhi => vec![z[0], z[1], z[0] * z[1] - z[2] * z[2]],
        MapId::FMapPhi4 => vec![z[0], z[3], z[0] * z[3] - z[1] * z[2], z[1] + z[2]],
        MapId::NeilMap { .. } => vec![z[0] * z[0], z[1] * z[1], z[0] * z[1]],
    };
    CPoint::new(out)
}

/// Holomorphic Jacobian matrix ∂π_i/∂z_j from the analytic partials.
pub fn jacobian_matrix(m: &MapId, p: &CPoint) -> Result<DMatrix<Complex64>> {
    m.validate()?;
    p.check_dim(m.source_dim())?;
    let z = p.coords();
    let zero = Complex64::new(0.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let rows = m.target_dim();
    let cols = m.source_dim();
    let mut j = DMatrix::from_element(rows, cols, zero);
    match *m {
        MapId::DiscSquare | MapId::AnnulusSquare { .. } => j[(0, 0)] = two * z[0],
        MapId::Joukowski { omega, .. } => {
            if z[0].norm_sqr() == 0.0 {
                return Err(Error::Pole("z + omega/z at z = 0"));
            }
            j[(0, 0)] = one() - omega / (z[0] * z[0]);
        }
        MapId::BidiscSplit => {
            j[(0, 0)] = two * z[0];
            j[(1, 1)] = one();
        }
        MapId::BidiscSym { omega } => {
            j[(0, 0)] = omega.conj();
            j[(0, 1)] = omega;
            j[(1, 0)] = z[1];
            j[(1, 1)] = z[0];
        }
        MapId::BallEllipsoid { n } | MapId::LambdaN { n } => {
            j[(0, 0)] = two * z[0];
            for k in 1..n {
                j[(k, k)] = one();
            }
        }
        MapId::TetrablockPhi => {
            j[(0, 0)] = one();
            j[(1, 1)] = one();
            j[(2, 0)] = z[1];
            j[(2, 1)] = z[0];
            j[(2, 2)] = -two * z[2];
        }
        MapId::FMapPhi4 => {
            j[(0, 0)] = one();
            j[(1, 3)] = one();
            j[(2, 0)] = z[3];
            j[(2, 1)] = -z[2];
            j[(2, 2)] = -z[1];
            j[(2, 3)] = z[0];
            j[(3, 1)] = one();
            j[(3, 2)] = one();
        }
        MapId::NeilMap { .. } => {
            j[(0, 0)] = two * z[0];
            j[(1, 1)] = two * z[1];
            j[(2, 0)] = z[1];
            j[(2, 1)] = z[0];
        }
    }
    Ok(j)
}

/// Closed-form det π′(p), in the order of the source coordinates.
pub fn jacobian_det(m: &MapId, p: &CPoint) -> Result<Complex64> {
    m.validate()?;
    p.check_dim(m.source_dim())?;
    let z = p.coords();
    let two = Complex64::new(2.0, 0.0);
    match *m {
        MapId::DiscSquare
        | MapId::AnnulusSquare { .. }
        | MapId::BidiscSplit
        | MapId::BallEllipsoid { .. }
        | MapId::LambdaN { .. } => Ok(two * z[0]),
        MapId::Joukowski { omega, .. } => {
            if z[0].norm_sqr() == 0.0 {
                return Err(Error::Pole("z + omega/z at z = 0"));
            }
            Ok(one() - omega / (z[0] * z[0]))
        }
        MapId::BidiscSym { omega } => Ok(omega.conj() * z[0] - omega * z[1]),
        MapId::TetrablockPhi => Ok(-two * z[2]),
        MapId::FMapPhi4 => Ok(z[1] - z[2]),
        MapId::NeilMap { .. } => Err(Error::Unsupported(
            "the Neil map goes from C^2 to C^3 and has no Jacobian determinant".into(),
        )),
    }
}

/// Distance of `p` from the locus set: |det π′(p)| for equidimensional
/// maps, √det(J*J) (zero iff J drops rank) for the Neil map.
pub fn locus_margin(m: &MapId, p: &CPoint) -> Result<f64> {
    match m {
        MapId::NeilMap { .. } => {
            let a = p.check_dim(2).map(|_| p[0].norm_sqr())?;
            let b = p[1].norm_sqr();
            Ok((4.0 * a * a + 16.0 * a * b + 4.0 * b * b).sqrt())
        }
        _ => Ok(jacobian_det(m, p)?.norm()),
    }
}

/// Roots of t² − s·t + p, with the smaller root taken as p/q to avoid
/// cancellation.
pub fn quadratic_roots(s: Complex64, p: Complex64) -> (Complex64, Complex64) {
    let disc = (s * s - 4.0 * p).sqrt();
    let plus = s + disc;
    let minus = s - disc;
    let big = if plus.norm_sqr() >= minus.norm_sqr() { plus } else { minus } / 2.0;
    if big.norm_sqr() == 0.0 {
        return (big, big);
    }
    (big, p / big)
}

/// All algebraic preimages of `target`, ignoring the source domain.
/// Coinciding preimages (within [`CRITICAL_MERGE`]) are merged.
pub fn algebraic_fiber(m: &MapId, target: &CPoint) -> Result<Vec<CPoint>> {
    m.validate()?;
    target.check_dim(m.target_dim())?;
    let w = target.coords();
    let zero = Complex64::new(0.0, 0.0);
    let pair: Vec<Vec<Complex64>> = match *m {
        MapId::DiscSquare | MapId::AnnulusSquare { .. } => {
            let s = w[0].sqrt();
            vec![vec![s], vec![-s]]
        }
        MapId::Joukowski { omega, .. } => {
            let (a, b) = quadratic_roots(w[0], omega);
            if a.norm_sqr() == 0.0 {
                return Ok(vec![]);
            }
            vec![vec![a], vec![b]]
        }
        MapId::BidiscSplit | MapId::BallEllipsoid { .. } | MapId::LambdaN { .. } => {
            let s = w[0].sqrt();
            let mut plus = w.to_vec();
            plus[0] = s;
            let mut minus = w.to_vec();
            minus[0] = -s;
            vec![plus, minus]
        }
        MapId::BidiscSym { omega } => {
            let (u, v) = quadratic_roots(w[0], w[1]);
            vec![vec![omega * u, omega.conj() * v], vec![omega * v, omega.conj() * u]]
        }
        MapId::TetrablockPhi => {
            let a = (w[0] * w[1] - w[2]).sqrt();
            vec![vec![w[0], w[1], a], vec![w[0], w[1], -a]]
        }
        MapId::FMapPhi4 => {
            let (x, y) = quadratic_roots(w[3], w[0] * w[1] - w[2]);
            vec![vec![w[0], x, y, w[1]], vec![w[0], y, x, w[1]]]
        }
        MapId::NeilMap { .. } => {
            let s = w[0].sqrt();
            let t = if s.norm_sqr() > 0.0 { w[2] / s } else { w[1].sqrt() };
            if s.norm_sqr() == 0.0 && w[2].norm_sqr() > 0.0 {
                return Ok(vec![]);
            }
            let candidate = vec![s, t];
            // off the variety there is no preimage
            if (t * t - w[1]).norm() > 1e-9 * (1.0 + w[1].norm()) {
                return Ok(vec![]);
            }
            vec![candidate.clone(), candidate.iter().map(|c| zero - c).collect()]
        }
    };
    let mut out: Vec<CPoint> = Vec::with_capacity(2);
    for coords in pair {
        let q = CPoint::new(coords)?;
        if out.iter().all(|o| o.distance(&q) >= CRITICAL_MERGE) {
            out.push(q);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fiber {
    pub preimages: Vec<CPoint>,
    pub is_critical: bool,
}

/// Preimages of `target` lying in the source domain.
pub fn fiber(m: &MapId, target: &CPoint) -> Result<Fiber> {
    let candidates = algebraic_fiber(m, target)?;
    let mut best = f64::NEG_INFINITY;
    let mut preimages = Vec::with_capacity(2);
    for q in candidates {
        let margin = source_margin(m, &q)?;
        best = best.max(margin);
        if margin > -DEFAULT_TOL {
            preimages.push(q);
        }
    }
    if preimages.is_empty() {
        return Err(Error::OutsideImage { margin: best });
    }
    let is_critical = preimages.len() == 1;
    Ok(Fiber {
        preimages,
        is_critical,
    })
}

/// An element of Deck(π) = {id, g}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeckElement {
    Identity,
    Involution(MapId),
}

impl DeckElement {
    pub fn apply(&self, p: &CPoint) -> Result<CPoint> {
        match self {
            DeckElement::Identity => Ok(p.clone()),
            DeckElement::Involution(m) => deck_apply(m, p),
        }
    }
}

pub fn deck(m: &MapId) -> [DeckElement; 2] {
    [DeckElement::Identity, DeckElement::Involution(*m)]
}

/// The non-trivial deck involution in closed form.
pub fn deck_apply(m: &MapId, p: &CPoint) -> Result<CPoint> {
    m.validate()?;
    p.check_dim(m.source_dim())?;
    let z = p.coords();
    let out = match *m {
        MapId::DiscSquare | MapId::AnnulusSquare { .. } | MapId::NeilMap { .. } => {
            z.iter().map(|c| -c).collect()
        }
        MapId::Joukowski { omega, .. } => {
            if z[0].norm_sqr() == 0.0 {
                return Err(Error::Pole("omega/z at z = 0"));
            }
            vec![omega / z[0]]
        }
        MapId::BidiscSplit | MapId::BallEllipsoid { .. } | MapId::LambdaN { .. } => {
            let mut w = z.to_vec();
            w[0] = -w[0];
            w
        }
        MapId::BidiscSym { omega } => {
            let w2 = omega * omega;
            vec![w2 * z[1], w2.conj() * z[0]]
        }
        MapId::TetrablockPhi => vec![z[0], z[1], -z[2]],
        MapId::FMapPhi4 => vec![z[0], z[2], z[1], z[3]],
    };
    CPoint::new(out)
}

/// The deck involution rebuilt from fibers: the other preimage of π(p),
/// or p itself on the locus set.
pub fn deck_involution_from_fibers(m: &MapId, p: &CPoint) -> Result<CPoint> {
    let target = eval(m, p)?;
    let preimages = algebraic_fiber(m, &target)?;
    let other = preimages
        .into_iter()
        .max_by(|a, b| a.distance(p).total_cmp(&b.distance(p)))
        .ok_or(Error::Inconsistent("a point has an empty fiber over its own image".into()))?;
    if other.distance(p) < CRITICAL_MERGE {
        Ok(p.clone())
    } else {
        Ok(other)
    }
}

/// A uniform source point (in source coordinates) by rejection.
pub fn sample_source<R: Rng + ?Sized>(m: &MapId, rng: &mut R) -> Result<CPoint> {
    let radii = match m.source_domain() {
        DomainId::CartanIII { .. } => vec![1.0; 3],
        DomainId::CartanI { .. } => vec![1.0; 4],
        d => domains::bounding_box(&d)?,
    };
    for _ in 0..1_000_000 {
        let p = sampling::uniform_polydisc(&mut *rng, &radii);
        if source_margin(m, &p)? > 0.0 {
            return Ok(p);
        }
    }
    Err(Error::Inconsistent(format!("could not sample the source of {m:?}")))
}

/// Fiber cardinality over regular values, which must not vary.
pub fn multiplicity_probe(m: &MapId, samples: usize, seed: u64) -> Result<usize> {
    if samples < 100 {
        return Err(Error::InvalidParameter(format!("need at least 100 samples, got {samples}")));
    }
    let mut rng = sampling::seeded_rng(seed);
    let mut observed: Option<usize> = None;
    let mut taken = 0;
    while taken < samples {
        let p = sample_source(m, &mut rng)?;
        if locus_margin(m, &p)? < REGULAR_LOCUS_FLOOR || source_margin(m, &p)? < 1e-9 {
            continue;
        }
        taken += 1;
        let fib = fiber(m, &eval(m, &p)?)?;
        if fib.preimages.iter().all(|q| q.distance(&p) > 1e-10 * (1.0 + p.norm_sqr().sqrt())) {
            return Err(Error::Inconsistent(format!("{m:?}: a source point is missing from its own fiber")));
        }
        let count = fib.preimages.len();
        match observed {
            None => observed = Some(count),
            Some(c) if c != count => {
                return Err(Error::Inconsistent(format!(
                    "{m:?}: fiber cardinality varies between {c} and {count}"
                )))
            }
            _ => {}
        }
    }
    Ok(observed.expect("samples >= 100"))
}

/// A source point on the locus set 𝒥_π, or `None` when the locus is empty
/// (the annulus squaring map).
pub fn sample_locus<R: Rng + ?Sized>(m: &MapId, rng: &mut R) -> Result<Option<CPoint>> {
    m.validate()?;
    let zero = Complex64::new(0.0, 0.0);
    for _ in 0..1_000_000 {
        let p = match *m {
            MapId::AnnulusSquare { .. } => return Ok(None),
            MapId::DiscSquare => vec![zero],
            MapId::NeilMap { .. } => vec![zero, zero],
            MapId::Joukowski { omega, .. } => {
                let root = omega.sqrt();
                vec![if rng.random::<bool>() { root } else { -root }]
            }
            MapId::BidiscSplit => vec![zero, sampling::uniform_disc(rng, 1.0)],
            MapId::BidiscSym { omega } => {
                let l = sampling::uniform_disc(rng, 1.0);
                vec![omega * l, omega.conj() * l]
            }
            MapId::BallEllipsoid { n } | MapId::LambdaN { n } => {
                let mut v = sampling::uniform_polydisc(rng, &vec![1.0; n]).into_vec();
                v[0] = zero;
                v
            }
            MapId::TetrablockPhi => {
                let mut v = sampling::uniform_polydisc(rng, &[1.0; 3]).into_vec();
                v[2] = zero;
                v
            }
            MapId::FMapPhi4 => {
                let mut v = sampling::uniform_polydisc(rng, &[1.0; 4]).into_vec();
                v[2] = v[1];
                v
            }
        };
        let p = CPoint::new(p)?;
        if source_margin(m, &p)? > 0.0 {
            return Ok(Some(p));
        }
    }
    Err(Error::Inconsistent(format!("could not sample the locus of {m:?}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixLocusAgreement {
    pub samples: usize,
    pub locus_samples: usize,
    pub disagreements: usize,
}

/// Compares Fix(g) with 𝒥_π on a mix of uniform source points and points
/// drawn on the locus. A point is fixed when |g(p) − p| ≤ 1e−12 and on the
/// locus when its locus margin is at most 1e−12.
pub fn fix_locus_agreement(m: &MapId, samples: usize, seed: u64) -> Result<FixLocusAgreement> {
    let mut rng = sampling::seeded_rng(seed);
    let mut out = FixLocusAgreement {
        samples,
        locus_samples: 0,
        disagreements: 0,
    };
    for k in 0..samples {
        let p = match (k % 2 == 1).then(|| sample_locus(m, &mut rng)).transpose()?.flatten() {
            Some(p) => {
                out.locus_samples += 1;
                p
            }
            None => sample_source(m, &mut rng)?,
        };
        let fixed = deck_apply(m, &p)?.distance(&p) <= 1e-12;
        let on_locus = locus_margin(m, &p)? <= 1e-12;
        if fixed != on_locus {
            out.disagreements += 1;
        }
    }
    Ok(out)
}

/// w₁w₂ − w₃², zero exactly on the Neil parabola.
pub fn neil_variety_residual(w: &CPoint) -> Result<Complex64> {
    w.check_dim(3)?;
    Ok(w[0] * w[1] - w[2] * w[2])
}
