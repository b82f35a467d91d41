//! Explicit biholomorphisms L₂ ≅ 𝔻², L₃ ≅ R_III(2), L₄ ≅ R_I(2×2) and the
//! induced maps 𝕃₂ ≅ 𝔾₂, 𝕃₃ ≅ 𝔼, 𝕃₄ ≅ 𝔽, with hand-solved inverses.
//!
//! For n = 2, 3, 4 the squares
//!
//! ```text
//!   L_n ──a∘P_n──▶ source of φ
//!    │Λ_n              │φ
//!    ▼                 ▼
//!   𝕃_n ─────b─────▶ target of φ
//! ```
//!
//! commute, with P₂ = id, P₃(z) = (z₂, z₃, z₁) and P₄(z) = (z₃, z₄, z₂, z₁).

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domains::{self, DomainId};
use crate::error::{Error, Result};
use crate::point::{CPoint, MatPoint, Point};
use crate::proper_maps::{self, MapId};
use crate::sampling;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BihTag {
    L2toBidisc,
    L3toR3,
    L4toR1,
    LL2toG2,
    LL3toE,
    LL4toF,
}

impl BihTag {
    pub const ALL: [BihTag; 6] = [
        BihTag::L2toBidisc,
        BihTag::L3toR3,
        BihTag::L4toR1,
        BihTag::LL2toG2,
        BihTag::LL3toE,
        BihTag::LL4toF,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BihId {
    pub tag: BihTag,
    #[serde(default)]
    pub inverse: bool,
}

impl BihId {
    pub fn forward(tag: BihTag) -> Self {
        Self { tag, inverse: false }
    }

    pub fn inverted(&self) -> Self {
        Self {
            tag: self.tag,
            inverse: !self.inverse,
        }
    }

    fn forward_domains(tag: BihTag) -> (DomainId, DomainId) {
        match tag {
            BihTag::L2toBidisc => (DomainId::LieBall { n: 2 }, DomainId::Polydisc { n: 2 }),
            BihTag::L3toR3 => (DomainId::LieBall { n: 3 }, DomainId::CartanIII { n: 2 }),
            BihTag::L4toR1 => (DomainId::LieBall { n: 4 }, DomainId::CartanI { m: 2, n: 2 }),
            BihTag::LL2toG2 => (DomainId::QuotientL { n: 2 }, DomainId::SymBidisc),
            BihTag::LL3toE => (DomainId::QuotientL { n: 3 }, DomainId::Tetrablock),
            BihTag::LL4toF => (DomainId::QuotientL { n: 4 }, DomainId::FDomain),
        }
    }

    pub fn source_domain(&self) -> DomainId {
        let (s, t) = Self::forward_domains(self.tag);
        if self.inverse {
            t
        } else {
            s
        }
    }

    pub fn target_domain(&self) -> DomainId {
        self.inverted().source_domain()
    }
}

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

fn vector_arg(p: &Point, n: usize) -> Result<&CPoint> {
    let z = p.as_vector()?;
    z.check_dim(n)?;
    Ok(z)
}

fn matrix_arg(p: &Point) -> Result<[[Complex64; 2]; 2]> {
    let a = p.as_matrix()?;
    if a.shape() != (2, 2) {
        return Err(Error::Shape(format!("expected a 2x2 matrix, got {:?}", a.shape())));
    }
    let e = a.entries();
    Ok([[e[(0, 0)], e[(0, 1)]], [e[(1, 0)], e[(1, 1)]]])
}

fn vector(coords: Vec<Complex64>) -> Result<Point> {
    Ok(Point::Vector(CPoint::new(coords)?))
}

fn matrix(a: [[Complex64; 2]; 2]) -> Result<Point> {
    Ok(Point::Matrix(MatPoint::from_rows(&[a[0].to_vec(), a[1].to_vec()])?))
}

fn forward(tag: BihTag, p: &Point) -> Result<Point> {
    match tag {
        BihTag::L2toBidisc => {
            let z = vector_arg(p, 2)?;
            vector(vec![z[0] + i() * z[1], -z[0] + i() * z[1]])
        }
        BihTag::L3toR3 => {
            let z = vector_arg(p, 3)?;
            matrix([[z[0] + i() * z[1], z[2]], [z[2], -z[0] + i() * z[1]]])
        }
        BihTag::L4toR1 => {
            let z = vector_arg(p, 4)?;
            matrix([
                [z[0] + i() * z[1], z[2] + i() * z[3]],
                [z[2] - i() * z[3], -z[0] + i() * z[1]],
            ])
        }
        BihTag::LL2toG2 => {
            let w = vector_arg(p, 2)?;
            vector(vec![2.0 * i() * w[1], -w[0] - w[1] * w[1]])
        }
        BihTag::LL3toE => {
            let w = vector_arg(p, 3)?;
            vector(vec![
                w[1] + i() * w[2],
                -w[1] + i() * w[2],
                -w[2] * w[2] - w[1] * w[1] - w[0],
            ])
        }
        BihTag::LL4toF => {
            let w = vector_arg(p, 4)?;
            vector(vec![
                w[2] + i() * w[3],
                -w[2] + i() * w[3],
                -w[1] * w[1] - w[2] * w[2] - w[3] * w[3] - w[0],
                2.0 * w[1],
            ])
        }
    }
}

fn backward(tag: BihTag, q: &Point) -> Result<Point> {
    let half_diff = |x: Complex64, y: Complex64| (x - y) / 2.0;
    let half_sum_over_i = |x: Complex64, y: Complex64| (x + y) / (2.0 * i());
    match tag {
        BihTag::L2toBidisc => {
            let l = vector_arg(q, 2)?;
            vector(vec![half_diff(l[0], l[1]), half_sum_over_i(l[0], l[1])])
        }
        BihTag::L3toR3 => {
            let a = matrix_arg(q)?;
            vector(vec![
                half_diff(a[0][0], a[1][1]),
                half_sum_over_i(a[0][0], a[1][1]),
                (a[0][1] + a[1][0]) / 2.0,
            ])
        }
        BihTag::L4toR1 => {
            let a = matrix_arg(q)?;
            vector(vec![
                half_diff(a[0][0], a[1][1]),
                half_sum_over_i(a[0][0], a[1][1]),
                (a[0][1] + a[1][0]) / 2.0,
                (a[0][1] - a[1][0]) / (2.0 * i()),
            ])
        }
        BihTag::LL2toG2 => {
            let s = vector_arg(q, 2)?;
            let w2 = s[0] / (2.0 * i());
            vector(vec![-s[1] - w2 * w2, w2])
        }
        BihTag::LL3toE => {
            let x = vector_arg(q, 3)?;
            let w2 = half_diff(x[0], x[1]);
            let w3 = half_sum_over_i(x[0], x[1]);
            vector(vec![-x[2] - w2 * w2 - w3 * w3, w2, w3])
        }
        BihTag::LL4toF => {
            let x = vector_arg(q, 4)?;
            let w3 = half_diff(x[0], x[1]);
            let w4 = half_sum_over_i(x[0], x[1]);
            let w2 = x[3] / 2.0;
            vector(vec![-x[2] - w2 * w2 - w3 * w3 - w4 * w4, w2, w3, w4])
        }
    }
}

pub fn bih_eval(b: &BihId, p: &Point) -> Result<Point> {
    if b.inverse {
        backward(b.tag, p)
    } else {
        forward(b.tag, p)
    }
}

/// The inverse of `b` applied to `q`.
pub fn bih_inverse(b: &BihId, q: &Point) -> Result<Point> {
    bih_eval(&b.inverted(), q)
}

/// Like [`bih_eval`], but first requires `p` to lie strictly inside the source domain.
pub fn bih_eval_checked(b: &BihId, p: &Point) -> Result<Point> {
    let margin = domains::margin(&b.source_domain(), p)?;
    if margin <= 0.0 {
        return Err(Error::OutsideDomain { margin });
    }
    bih_eval(b, p)
}

fn check_square_n(n: usize) -> Result<()> {
    if (2..=4).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("commuting squares exist for n in 2..=4, got {n}")))
    }
}

/// The 2-proper map φ on the classical side of the square for L_n.
pub fn square_map(n: usize) -> Result<MapId> {
    check_square_n(n)?;
    Ok(match n {
        2 => MapId::BidiscSym { omega: Complex64::new(1.0, 0.0) },
        3 => MapId::TetrablockPhi,
        _ => MapId::FMapPhi4,
    })
}

/// The biholomorphism b : 𝕃_n → target of φ.
pub fn quotient_bih(n: usize) -> Result<BihId> {
    check_square_n(n)?;
    Ok(BihId::forward([BihTag::LL2toG2, BihTag::LL3toE, BihTag::LL4toF][n - 2]))
}

/// The biholomorphism a : L_n → source of φ.
pub fn lie_bih(n: usize) -> Result<BihId> {
    check_square_n(n)?;
    Ok(BihId::forward([BihTag::L2toBidisc, BihTag::L3toR3, BihTag::L4toR1][n - 2]))
}

/// The coordinate permutation P_n.
pub fn permute(n: usize, z: &CPoint) -> Result<CPoint> {
    check_square_n(n)?;
    z.check_dim(n)?;
    let order: &[usize] = match n {
        2 => &[0, 1],
        3 => &[1, 2, 0],
        _ => &[2, 3, 1, 0],
    };
    CPoint::new(order.iter().map(|&k| z[k]).collect())
}

/// a(P_n z) written in the flat source coordinates of φ.
pub fn square_source_coords(n: usize, z: &CPoint) -> Result<CPoint> {
    let image = bih_eval(&lie_bih(n)?, &Point::Vector(permute(n, z)?))?;
    match image {
        Point::Vector(v) => Ok(v),
        Point::Matrix(a) => {
            let e = a.entries();
            let flat = if n == 3 {
                vec![e[(0, 0)], e[(1, 1)], e[(0, 1)]]
            } else {
                vec![e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)]]
            };
            CPoint::new(flat)
        }
    }
}

/// |b(Λ_n z) − φ(a(P_n z))| at a single point.
pub fn commuting_square_residual_at(n: usize, z: &CPoint) -> Result<f64> {
    let b = quotient_bih(n)?;
    let left = bih_eval(&b, &Point::Vector(domains::lambda_n(z)))?;
    let right = proper_maps::eval(&square_map(n)?, &square_source_coords(n, z)?)?;
    Ok(left.as_vector()?.distance(&right))
}

fn sample_lie_points(n: usize, samples: usize, seed: u64) -> Result<Vec<CPoint>> {
    let d = DomainId::LieBall { n };
    let mut rng = sampling::seeded_rng(seed);
    (0..samples).map(|_| domains::sample_uniform(&d, &mut rng)).collect()
}

/// Supremum of the commuting-square residual over uniform Lie-ball samples.
pub fn commuting_square_residual(n: usize, samples: usize, seed: u64) -> Result<f64> {
    check_square_n(n)?;
    sample_lie_points(n, samples, seed)?
        .iter()
        .map(|z| commuting_square_residual_at(n, z))
        .try_fold(0.0_f64, |acc, r| r.map(|r| acc.max(r)))
}

/// Hausdorff distance between two finite point sets.
fn set_distance(a: &[CPoint], b: &[CPoint]) -> f64 {
    let one_way = |x: &[CPoint], y: &[CPoint]| {
        x.iter()
            .map(|p| y.iter().map(|q| p.distance(q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Distance between a∘P_n applied to the Λ_n-fiber {z, σz} and the φ-fiber
/// over b(Λ_n z).
pub fn deck_transport_residual_at(n: usize, z: &CPoint) -> Result<f64> {
    let mut flipped = z.coords().to_vec();
    flipped[0] = -flipped[0];
    let flipped = CPoint::new(flipped)?;
    let mut transported = vec![square_source_coords(n, z)?];
    let other = square_source_coords(n, &flipped)?;
    if other.distance(&transported[0]) >= proper_maps::CRITICAL_MERGE {
        transported.push(other);
    }
    let target = bih_eval(&quotient_bih(n)?, &Point::Vector(domains::lambda_n(z)))?;
    let fiber = proper_maps::algebraic_fiber(&square_map(n)?, target.as_vector()?)?;
    Ok(set_distance(&transported, &fiber))
}

pub fn deck_transport_residual(n: usize, samples: usize, seed: u64) -> Result<f64> {
    check_square_n(n)?;
    sample_lie_points(n, samples, seed)?
        .iter()
        .map(|z| deck_transport_residual_at(n, z))
        .try_fold(0.0_f64, |acc, r| r.map(|r| acc.max(r)))
}

/// A point of the ambient space of `d`: a uniform point of its bounding
/// polydisc shrunk by a uniform factor in [0, 1], so that both the inside and
/// the outside of thin domains are well represented.
pub fn sample_ambient<R: Rng + ?Sized>(d: &DomainId, rng: &mut R) -> Result<Point> {
    let radii = domains::bounding_box(d)?;
    let shrink: f64 = rng.random();
    let flat = sampling::uniform_polydisc(rng, &radii).scale(Complex64::new(shrink, 0.0));
    Ok(match d.shape() {
        domains::PointShape::Vector(_) => Point::Vector(flat),
        domains::PointShape::Matrix(m, n) => {
            let mut rows: Vec<Vec<Complex64>> = flat.coords().chunks(n).map(<[_]>::to_vec).collect();
            if matches!(d, DomainId::CartanIII { .. }) {
                for r in 0..m {
                    for c in 0..r {
                        rows[r][c] = rows[c][r];
                    }
                }
            }
            if matches!(d, DomainId::CartanII { .. }) {
                for r in 0..m {
                    rows[r][r] = Complex64::new(0.0, 0.0);
                    for c in 0..r {
                        rows[r][c] = -rows[c][r];
                    }
                }
            }
            Point::Matrix(MatPoint::from_rows(&rows)?)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipAgreement {
    pub samples: usize,
    pub inside: usize,
    /// Samples within the band of either boundary, left unclassified.
    pub skipped: usize,
    pub disagreements: usize,
}

/// Compares membership of p in the source with membership of b(p) in the
/// target over ambient samples of the source.
pub fn membership_agreement(b: &BihId, samples: usize, seed: u64, band: f64) -> Result<MembershipAgreement> {
    let source = b.source_domain();
    let target = b.target_domain();
    let mut rng = sampling::seeded_rng(seed);
    let mut out = MembershipAgreement {
        samples,
        inside: 0,
        skipped: 0,
        disagreements: 0,
    };
    for _ in 0..samples {
        let p = sample_ambient(&source, &mut rng)?;
        let ms = domains::margin(&source, &p)?;
        let mt = domains::margin(&target, &bih_eval(b, &p)?)?;
        if ms.abs() <= band || mt.abs() <= band {
            out.skipped += 1;
            continue;
        }
        if ms > 0.0 {
            out.inside += 1;
        }
        if (ms > 0.0) != (mt > 0.0) {
            out.disagreements += 1;
        }
    }
    Ok(out)
}
