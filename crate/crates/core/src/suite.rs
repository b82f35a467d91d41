//! The verification suite: one seeded check per module invariant, listed in
//! a fixed manifest. Results come back in manifest order whatever order the
//! checks ran in, so a report depends only on the configuration.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automorphisms::{self, LieLinearAut};
use crate::bergman;
use crate::biholomorphisms::{self, BihId, BihTag};
use crate::domains::{self, DomainId};
use crate::error::Result;
use crate::point::CPoint;
use crate::proper_maps::{self, MapId};
use crate::reflections::{self, HolomorphicMap, LinearMap};
use crate::sampling;

/// How a check's measured value is compared with its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Passes when value < threshold.
    Below,
    /// Passes when value ≤ threshold (counts that must be zero).
    AtMost,
    /// Passes when value > threshold.
    Above,
    /// Passes when value ≥ threshold.
    AtLeast,
}

impl Comparison {
    fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Comparison::Below => value < threshold,
            Comparison::AtMost => value <= threshold,
            Comparison::Above => value > threshold,
            Comparison::AtLeast => value >= threshold,
        }
    }
}

type CheckFn = fn(u64, usize) -> Result<f64>;

/// One manifest entry.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CheckSpec {
    pub id: &'static str,
    pub module: &'static str,
    pub invariant: &'static str,
    pub samples: usize,
    pub tolerance: f64,
    pub comparison: Comparison,
    /// Excluded unless the full suite is requested.
    pub slow: bool,
    #[serde(skip)]
    run: CheckFn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub module: String,
    pub invariant: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Upper bound on each check's sample count.
    pub max_samples: Option<usize>,
    /// Also run the checks marked slow.
    pub include_slow: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            max_samples: None,
            include_slow: false,
        }
    }
}

pub const DEFAULT_SEED: u64 = 20_240_917;

const fn check(
    id: &'static str,
    module: &'static str,
    invariant: &'static str,
    samples: usize,
    tolerance: f64,
    comparison: Comparison,
    run: CheckFn,
) -> CheckSpec {
    CheckSpec {
        id,
        module,
        invariant,
        samples,
        tolerance,
        comparison,
        slow: false,
        run,
    }
}

const fn slow(spec: CheckSpec) -> CheckSpec {
    CheckSpec { slow: true, ..spec }
}

use Comparison::{AtLeast, AtMost, Above, Below};

/// The manifest, in report order.
pub const MANIFEST: &[CheckSpec] = &[
    check("domains.lie_form_equivalence", "domains", "both forms of the Lie ball inequalities classify alike", 100_000, 0.0, AtMost, lie_form_equivalence),
    check("domains.quotient_branch_consistency", "domains", "QuotientL membership is the same through either square root, and matches the intrinsic form", 100_000, 0.0, AtMost, quotient_branch_consistency),
    check("domains.bimap_equivalences", "domains", "z in L2/L3/L4 iff its image is in the bidisc, R_III(2), R_I(2x2)", 100_000, 0.0, AtMost, bimap_equivalences),
    check("domains.cartan1_2x2_agreement", "domains", "the 2x2 inequality test agrees with the singular value test", 100_000, 0.0, AtMost, cartan1_agreement),
    check("domains.minkowski_homogeneity", "domains", "M(lambda . w) = |lambda| M(w) for the (2,1,...,1) action", 1_000, 2e-12, Below, minkowski_homogeneity),
    check("domains.shilov_maximum", "domains", "max |p| on Shilov samples >= 0.99 max |p| on the domain, degree <= 3", 10_000, 0.99, AtLeast, shilov_maximum),
    check("proper_maps.fiber_contains_source", "proper_maps", "every fiber element maps to the target; the source point is in its fiber", 10_000, 1e-10, Below, fiber_contains_source),
    check("proper_maps.deck_identities", "proper_maps", "g o g = id and pi o g = pi", 10_000, 1e-12, Below, deck_identities),
    check("proper_maps.galois", "proper_maps", "{id, g} acts transitively on regular fibers; the fiber-built involution is g", 10_000, 1e-12, Below, galois),
    check("proper_maps.jacobian_lock", "proper_maps", "closed-form det pi' matches a central finite difference", 1_000, 1e-5, Below, jacobian_lock),
    check("proper_maps.fix_equals_locus", "proper_maps", "Fix(g) equals the locus set", 10_000, 0.0, AtMost, fix_equals_locus),
    check("proper_maps.multiplicity", "proper_maps", "every catalogued map has multiplicity 2", 1_000, 0.0, AtMost, multiplicity),
    check("proper_maps.image_membership", "proper_maps", "images of source points lie in QuotientL, SymBidisc, Tetrablock, FDomain, Ellipsoid", 10_000, 0.0, AtMost, image_membership),
    check("proper_maps.annulus_square_image", "proper_maps", "z^2 maps A(r, 1/r) into A(r^2, 1/r^2)", 10_000, 0.0, AtMost, annulus_square_image),
    check("reflections.conjugation_stability", "reflections", "conjugates of reflections are reflections at tolerance tol cond(P)^2", 1_000, 0.0, AtMost, conjugation_stability),
    check("reflections.basic_map_invariance", "reflections", "theta(sigma z) = theta(z) for the basic map of sigma", 10_000, 1e-12, Below, basic_map_invariance),
    check("reflections.p_omega_intertwining", "reflections", "pi_{2,omega} o P_omega = pi_{2,1}", 1_000, 1e-14, Below, p_omega_intertwining),
    check("biholomorphisms.round_trip", "biholomorphisms", "forward and inverse formulas invert each other", 10_000, 1e-12, Below, bih_round_trip),
    check("biholomorphisms.membership_transport", "biholomorphisms", "p in source iff b(p) in target, all six maps", 100_000, 0.0, AtMost, membership_transport),
    check("biholomorphisms.commuting_squares", "biholomorphisms", "b o Lambda_n = phi o a o P_n for n = 2, 3, 4", 10_000, 1e-12, Below, commuting_squares),
    check("biholomorphisms.deck_transport", "biholomorphisms", "a o P_n maps Lambda_n fibers onto phi fibers", 10_000, 1e-10, Below, deck_transport),
    check("bergman.form_equivalence", "bergman", "difference form equals closed form (relative error), n = 2..8", 10_000, 1e-10, Below, form_equivalence),
    check("bergman.hermitian_symmetry", "bergman", "K(p, q) = conj K(q, p) (relative error)", 10_000, 1e-12, Below, hermitian_symmetry),
    check("bergman.origin_constancy", "bergman", "K(0, q) = n, n = 2..8", 1_000, 1e-12, Below, origin_constancy),
    check("bergman.witness_zero", "bergman", "|K| at the explicit witness relative to |K_L|, n = 3..8, r in {0.7, 0.8, 0.9}", 1, 1e-9, Below, witness_zero),
    check("bergman.branch_independence", "bergman", "difference form unchanged under z -> sigma z (relative error)", 10_000, 1e-10, Below, branch_independence),
    check("bergman.diagonal_positivity", "bergman", "K(p, p) is real and positive: min of Re K minus |Im K| / 1e-10", 10_000, 0.0, Above, diagonal_positivity),
    check("bergman.l2_sampled_minimum", "bergman", "min |K| over random pairs of L_2 quotient points", 100_000, 1e-6, Above, l2_sampled_minimum),
    slow(check("bergman.volume_identity", "bergman", "|n Vol(QuotientL) - Vol(LieBall)| / Vol(LieBall) in combined standard errors, n = 2, 3", 10_000_000, 3.0, Below, volume_identity)),
    check("automorphisms.rho_identities", "automorphisms", "rho_w o rho_v = rho_{wv} and rho preserves QuotientL", 10_000, 1e-14, Below, rho_identities),
    check("automorphisms.extension_restriction", "automorphisms", "the extended automorphism restricts to (0, a) on the locus set", 10_000, 1e-12, Below, extension_restriction),
    check("automorphisms.well_definedness", "automorphisms", "branch residual of induced automorphisms", 10_000, 1e-12, Below, well_definedness),
    check("automorphisms.membership_preservation", "automorphisms", "interior to interior, boundary band 1e-6 to boundary band 1e-4", 10_000, 0.0, AtMost, membership_preservation),
];

/// Stable per-check seed.
fn check_seed(seed: u64, id: &str) -> u64 {
    id.bytes()
        .fold(0xcbf2_9ce4_8422_2325_u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
        ^ seed
}

pub fn run_check(spec: &CheckSpec, config: &SuiteConfig) -> CheckResult {
    let samples = config.max_samples.map_or(spec.samples, |cap| spec.samples.min(cap.max(1)));
    let outcome = (spec.run)(check_seed(config.seed, spec.id), samples);
    let (residual, error) = match outcome {
        Ok(v) => (v, None),
        Err(e) => (f64::NAN, Some(e.to_string())),
    };
    CheckResult {
        id: spec.id.to_string(),
        module: spec.module.to_string(),
        invariant: spec.invariant.to_string(),
        passed: error.is_none() && spec.comparison.holds(residual, spec.tolerance),
        residual,
        tolerance: spec.tolerance,
        comparison: spec.comparison,
        samples,
        error,
    }
}

/// Runs the selected checks (all non-slow ones when `only` is empty).
pub fn run_suite(config: &SuiteConfig, only: &[String]) -> Vec<CheckResult> {
    let selected: Vec<&CheckSpec> = MANIFEST
        .iter()
        .filter(|s| {
            if only.is_empty() {
                config.include_slow || !s.slow
            } else {
                only.iter().any(|id| id == s.id || id == s.module)
            }
        })
        .collect();
    selected.par_iter().map(|s| run_check(s, config)).collect()
}

fn max_of<I: IntoIterator<Item = Result<f64>>>(values: I) -> Result<f64> {
    values.into_iter().try_fold(0.0_f64, |acc, v| v.map(|v| acc.max(v)))
}

fn count<I: IntoIterator<Item = Result<bool>>>(flags: I) -> Result<f64> {
    values_sum(flags.into_iter().map(|f| f.map(|b| b as usize)))
}

fn values_sum<I: IntoIterator<Item = Result<usize>>>(values: I) -> Result<f64> {
    values.into_iter().try_fold(0.0, |acc, v| v.map(|v| acc + v as f64))
}

/// Mixed inside/outside vector points for domain `d`.
fn ambient_vector<R: Rng + ?Sized>(d: &DomainId, rng: &mut R) -> Result<CPoint> {
    Ok(biholomorphisms::sample_ambient(d, rng)?.as_vector()?.clone())
}

// domains

fn lie_form_equivalence(seed: u64, samples: usize) -> Result<f64> {
    let mut rng = sampling::seeded_rng(seed);
    count((0..samples).map(|k| {
        let d = DomainId::LieBall { n: 2 + k % 5 };
        let z = ambient_vector(&d, &mut rng)?;
        let a = domains::lie_ball_margin(z.coords()) > 0.0;
        let b = domains::lie_ball_sqrt_form_margin(z.coords()) > 0.0;
        Ok(a != b)
    }))
}

fn quotient_branch_consistency(seed: u64, samples: usize) -> Result<f64> {
    let mut rng = sampling::seeded_rng(seed);
    count((0..samples).map(|k| {
        let n = 2 + k % 5;
        let w = ambient_vector(&DomainId::QuotientL { n }, &mut rng)?;
        let mut plus = w.coords().to_vec();
        plus[0] = w[0].sqrt();
        let mut minus = plus.clone();
        minus[0] = -plus[0];
        let a = domains::lie_ball_margin(&plus) > 0.0;
        let b = domains::lie_ball_margin(&minus) > 0.0;
        let c = domains::quotient_intrinsic_margin(w.coords()) > 0.0;
        let quotient = domains::contains_vector(&DomainId::QuotientL { n }, &w)?.margin > 0.0;
        Ok(a != b || a != c || a != quotient)
    }))
}

fn bimap_equivalences(seed: u64, samples: usize) -> Result<f64> {
    values_sum([BihTag::L2toBidisc, BihTag::L3toR3, BihTag::L4toR1].iter().enumerate().map(|(k, &tag)| {
        biholomorphisms::membership_agreement(&BihId::forward(tag), samples, seed + k as u64, 1e-9)
            .map(|a| a.disagreements)
    }))
}

fn cartan1_agreement(seed: u64, samples: usize) -> Result<f64> {
    let mut rng = sampling::seeded_rng(seed);
    let d = DomainId::CartanI { m: 2, n: 2 };
    let mut disagreements = 0;
    for _ in 0..samples {
        let p = biholomorphisms::sample_ambient(&d, &mut rng)?;
        let a = p.as_matrix()?;
        let direct = domains::cartan1_contains_2x2(a)?.margin;
        let svd = 1.0 - domains::singular_values(a.entries())[0];
        if direct.abs() > 1e-9 && svd.abs() > 1e-9 && (direct > 0.0) != (svd > 0.0) {
            disagreements += 1;
        }
    }
    Ok(disagreements as f64)
}

fn minkowski_homogeneity(seed: u64, samples: usize) -> Result<f64> {
    const TOL: f64 = 1e-12;
    let mut rng = sampling::seeded_rng(seed);
    max_of((0..samples).map(|k| {
        let d = DomainId::QuotientL { n: 2 + k % 4 };
        let w = ambient_vector(&d, &mut rng)?;
        let lambda = sampling::uniform_disc(&mut rng, 1.0);
        let weights = d.weights().expect("quasi-balanced");
        let lhs = domains::minkowski(&d, &domains::dilate(&w, &weights, lambda), TOL)?;
        let rhs = lambda.norm() * domains::minkowski(&d, &w, TOL)?;
        Ok((lhs - rhs).abs())
    }))
}

fn shilov_maximum(seed: u64, samples: usize) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for n in 2..=4 {
        for (k, d) in [DomainId::LieBall { n }, DomainId::QuotientL { n }].iter().enumerate() {
            let s = seed.wrapping_add((10 * n + k) as u64);
            worst = worst.min(domains::shilov_max_ratio(d, 100, 3, samples, s)?);
        }
    }
    Ok(worst)
}

// proper_maps

fn per_map<F>(seed: u64, samples: usize, mut f: F) -> Result<f64>
where
    F: FnMut(&MapId, &CPoint) -> Result<f64>,
{
    let mut worst: f64 = 0.0;
    for (k, m) in MapId::catalogue().iter().enumerate() {
        let mut rng = sampling::substream(seed, k as u64);
        for _ in 0..samples {
            let p = proper_maps::sample_source(m, &mut rng)?;
            worst = worst.max(f(m, &p)?);
        }
    }
    Ok(worst)
}

fn scale(p: &CPoint) -> f64 {
    1.0 + p.norm_sqr().sqrt()
}

fn fiber_contains_source(seed: u64, samples: usize) -> Result<f64> {
    per_map(seed, samples, |m, p| {
        let target = proper_maps::eval(m, p)?;
        let preimages = proper_maps::algebraic_fiber(m, &target)?;
        let mut worst = preimages
            .iter()
            .map(|q| proper_maps::eval(m, q).map(|w| w.distance(&target) / scale(&target)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let nearest = preimages.iter().map(|q| q.distance(p)).fold(f64::INFINITY, f64::min);
        worst = worst.max(nearest / scale(p));
        Ok(worst)
    })
}

fn deck_identities(seed: u64, samples: usize) -> Result<f64> {
    per_map(seed, samples, |m, p| {
        let g = proper_maps::deck_apply(m, p)?;
        let gg = proper_maps::deck_apply(m, &g)?;
        let same = proper_maps::eval(m, &g)?.distance(&proper_maps::eval(m, p)?);
        Ok((gg.distance(p) / scale(p)).max(same / scale(p)))
    })
}

fn galois(seed: u64, samples: usize) -> Result<f64> {
    per_map(seed, samples, |m, p| {
        let g = proper_maps::deck_apply(m, p)?;
        let from_fibers = proper_maps::deck_involution_from_fibers(m, p)?;
        let fib = proper_maps::fiber(m, &proper_maps::eval(m, p)?)?;
        let orbit = [p.clone(), g];
        let covered = fib
            .preimages
            .iter()
            .map(|q| orbit.iter().map(|o| o.distance(q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        Ok((from_fibers.distance(&orbit[1]) / scale(p)).max(covered / scale(p)))
    })
}

/// Central-difference Jacobian with step h along the real axis of each
/// coordinate (enough for holomorphic maps).
fn fd_jacobian(m: &MapId, p: &CPoint, h: f64) -> Result<DMatrix<Complex64>> {
    let (rows, cols) = (m.target_dim(), m.source_dim());
    let mut j = DMatrix::from_element(rows, cols, Complex64::new(0.0, 0.0));
    for c in 0..cols {
        let shifted = |s: f64| {
            let mut v = p.coords().to_vec();
            v[c] += s;
            CPoint::new(v)
        };
        let plus = proper_maps::eval(m, &shifted(h)?)?;
        let minus = proper_maps::eval(m, &shifted(-h)?)?;
        for r in 0..rows {
            j[(r, c)] = (plus[r] - minus[r]) / (2.0 * h);
        }
    }
    Ok(j)
}

fn gram_det(j: &DMatrix<Complex64>) -> Complex64 {
    (j.adjoint() * j).determinant()
}

fn jacobian_lock(seed: u64, samples: usize) -> Result<f64> {
    per_map(seed, samples, |m, p| {
        let fd = fd_jacobian(m, p, 1e-6)?;
        let (approx, exact) = if m.is_equidimensional() {
            (fd.determinant(), proper_maps::jacobian_det(m, p)?)
        } else {
            (gram_det(&fd), Complex64::new(proper_maps::locus_margin(m, p)?.powi(2), 0.0))
        };
        Ok((approx - exact).norm() / exact.norm())
    })
}

fn fix_equals_locus(seed: u64, samples: usize) -> Result<f64> {
    values_sum(MapId::catalogue().iter().enumerate().map(|(k, m)| {
        proper_maps::fix_locus_agreement(m, samples, seed.wrapping_add(k as u64)).map(|a| a.disagreements)
    }))
}

fn multiplicity(seed: u64, samples: usize) -> Result<f64> {
    count(MapId::catalogue().iter().enumerate().map(|(k, m)| {
        proper_maps::multiplicity_probe(m, samples.max(100), seed.wrapping_add(k as u64)).map(|c| c != 2)
    }))
}

fn image_membership(seed: u64, samples: usize) -> Result<f64> {
    let maps = [
        MapId::LambdaN { n: 2 },
        MapId::LambdaN { n: 3 },
        MapId::LambdaN { n: 5 },
        MapId::BidiscSym { omega: Complex64::new(1.0, 0.0) },
        MapId::TetrablockPhi,
        MapId::FMapPhi4,
        MapId::BallEllipsoid { n: 3 },
        MapId::DiscSquare,
        MapId::BidiscSplit,
    ];
    let mut violations = 0;
    for (k, m) in maps.iter().enumerate() {
        let target = m.target_domain().expect("these maps have target domains");
        let mut rng = sampling::substream(seed, k as u64);
        for _ in 0..samples {
            let p = proper_maps::sample_source(m, &mut rng)?;
            if domains::vector_margin(&target, &proper_maps::eval(m, &p)?)? <= 0.0 {
                violations += 1;
            }
        }
    }
    Ok(violations as f64)
}

fn annulus_square_image(seed: u64, samples: usize) -> Result<f64> {
    let mut rng = sampling::seeded_rng(seed);
    let mut violations = 0;
    for k in 0..samples {
        let r = [0.3, 0.5, 0.8][k % 3];
        let m = MapId::AnnulusSquare { r };
        let p = proper_maps::sample_source(&m, &mut rng)?;
        let w = proper_maps::eval(&m, &p)?;
        if domains::vector_margin(&DomainId::Annulus { r: r * r }, &w)? <= 0.0 {
            violations += 1;
        }
    }
    Ok(violations as f64)
}

// reflections

fn random_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| sampling::complex_gaussian(&mut *rng) * scale)
}

/// I − 2vν*/(ν*v) for random v, ν with |ν*v| not small.
fn random_reflection<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<LinearMap> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| sampling::complex_gaussian(&mut *rng)).collect();
        let nu: Vec<Complex64> = (0..n).map(|_| sampling::complex_gaussian(&mut *rng)).collect();
        let pair: Complex64 = nu.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
        let norms = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() * nu.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if pair.norm() < 0.3 * norms {
            continue;
        }
        let m = DMatrix::from_fn(n, n, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            Complex64::new(id, 0.0) - 2.0 * v[i] * nu[j].conj() / pair
        });
        return LinearMap::new(m);
    }
}

fn conjugation_stability(seed: u64, samples: usize) -> Result<f64> {
    let mut rng = sampling::seeded_rng(seed);
    let mut failures = 0;
    for k in 0..samples {
        let n = 2 + k % 4;
        let m = random_reflection(&mut rng, n)?;
        let p = LinearMap::new(DMatrix::identity(n, n) + random_matrix(&mut rng, n, 0.3))?;
        let cond = p.condition_number();
        if cond > 100.0 {
            continue;
        }
        let tol = reflections::REFLECTION_TOL * cond * cond;
        if !reflections::is_reflection(&m, reflections::REFLECTION_TOL) || !reflections::is_reflection(&m.conjugate_by(&p)?, tol) {
            failures += 1;
        }
    }
    Ok(failures as f64)
}

fn basic_map_invariance(seed: u64, samples: usize) -> Result<f64> {
    let mut rng = sampling::seeded_rng(seed);
    let mut worst: f64 = 0.0;
    let per_map = 100;
    for k in 0..samples.div_ceil(per_map) {
        let n = 2 + k % 4;
        let sigma = random_reflection(&mut rng, n)?;
        let theta = reflections::basic_map_from_reflection(&sigma, &reflections::adapted_frame(&sigma)?)?;
        for _ in 0..per_map {
            let z = sampling::uniform_polydisc(&mut rng, &vec![1.0; n]);
            let a = theta.apply(&sigma.apply(&z)?)?;
            let b = theta.apply(&z)?;
            worst = worst.max(a.distance(&b));
        }
    }
    Ok(worst)
}

fn p_omega_intertwining(seed: u64, samples: usize) -> Result<f64> {
    let base = MapId::BidiscSym { omega: Complex64::new(1.0, 0.0) };
    max_of((0..8).map(|k| {
        let omega = Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / 8.0);
        reflections::intertwine_residual(&base, &MapId::BidiscSym { omega }, &LinearMap::p_omega(omega), samples, seed + k)
    }))
}

// biholomorphisms

fn bih_round_trip(seed: u64, samples: usize) -> Result<f64> {
    let mut rng = sampling::seeded_rng(seed);
    let mut worst: f64 = 0.0;
    for tag in BihTag::ALL {
        let b = BihId::forward(tag);
        for _ in 0..samples {
            let p = biholomorphisms::sample_ambient(&b.source_domain(), &mut rng)?;
            let back = biholomorphisms::bih_inverse(&b, &biholomorphisms::bih_eval(&b, &p)?)?;
            worst = worst.max(back.distance(&p));
        }
    }
    Ok(worst)
}

fn membership_transport(seed: u64, samples: usize) -> Result<f64> {
    values_sum(BihTag::ALL.iter().enumerate().map(|(k, &tag)| {
        biholomorphisms::membership_agreement(&BihId::forward(tag), samples, seed + k as u64, 1e-9)
            .map(|a| a.disagreements)
    }))
}

fn commuting_squares(seed: u64, samples: usize) -> Result<f64> {
    max_of((2..=4).map(|n| biholomorphisms::commuting_square_residual(n, samples, seed + n as u64)))
}

fn deck_transport(seed: u64, samples: usize) -> Result<f64> {
    max_of((2..=4).map(|n| biholomorphisms::deck_transport_residual(n, samples, seed + n as u64)))
}

// bergman

fn lie_pairs(n: usize, samples: usize, seed: u64) -> Result<Vec<(CPoint, CPoint)>> {
    let d = DomainId::LieBall { n };
    let mut rng = sampling::seeded_rng(seed);
    (0..samples)
        .map(|_| Ok((domains::sample_uniform(&d, &mut rng)?, domains::sample_uniform(&d, &mut rng)?)))
        .collect()
}

fn quotient_points(n: usize, samples: usize, seed: u64) -> Result<Vec<CPoint>> {
    let d = DomainId::QuotientL { n };
    let mut rng = sampling::seeded_rng(seed);
    (0..samples).map(|_| domains::sample_uniform(&d, &mut rng)).collect()
}

fn form_equivalence(seed: u64, samples: usize) -> Result<f64> {
    max_of((2..=8).map(|n| {
        max_of(lie_pairs(n, samples, seed + n as u64)?.iter().map(|(z, w)| {
            let diff = bergman::k_quotient_diff(z, w, n)?;
            let closed = bergman::k_quotient_closed(&domains::lambda_n(z), &domains::lambda_n(w), n)?.value;
            Ok((diff - closed).norm() / closed.norm())
        }))
    }))
}

fn hermitian_symmetry(seed: u64, samples: usize) -> Result<f64> {
    max_of((2..=5).map(|n| {
        let pts = quotient_points(n, 2 * samples, seed + n as u64)?;
        max_of(pts.chunks(2).map(|pq| {
            let a = bergman::k_quotient_closed(&pq[0], &pq[1], n)?.value;
            let b = bergman::k_quotient_closed(&pq[1], &pq[0], n)?.value;
            Ok((a - b.conj()).norm() / a.norm())
        }))
    }))
}

fn origin_constancy(seed: u64, samples: usize) -> Result<f64> {
    max_of((2..=8).map(|n| {
        let origin = CPoint::zeros(n);
        max_of(quotient_points(n, samples, seed + n as u64)?.iter().map(|q| {
            Ok((bergman::k_quotient_closed(&origin, q, n)?.value - n as f64).norm())
        }))
    }))
}

fn witness_zero(_seed: u64, _samples: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in 3..=8 {
        for r in [0.7, 0.8, 0.9] {
            if r > bergman::lqk_z0(n).norm() {
                worst = worst.max(bergman::lqk_witness(n, r)?.relative_value());
            }
        }
    }
    Ok(worst)
}

fn branch_independence(seed: u64, samples: usize) -> Result<f64> {
    max_of((2..=6).map(|n| {
        max_of(lie_pairs(n, samples, seed + n as u64)?.iter().map(|(z, w)| {
            let mut flipped = z.coords().to_vec();
            flipped[0] = -flipped[0];
            let a = bergman::k_quotient_diff(z, w, n)?;
            let b = bergman::k_quotient_diff(&CPoint::new(flipped)?, w, n)?;
            Ok((a - b).norm() / a.norm())
        }))
    }))
}

fn diagonal_positivity(seed: u64, samples: usize) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for n in 2..=5 {
        for p in quotient_points(n, samples, seed + n as u64)? {
            let v = bergman::k_quotient_closed(&p, &p, n)?.value;
            worst = worst.min(v.re - v.im.abs() / 1e-10);
        }
    }
    Ok(worst)
}

fn l2_sampled_minimum(seed: u64, samples: usize) -> Result<f64> {
    Ok(bergman::lqk_scan(2, samples.max(1000), seed)?.min_abs)
}

fn volume_identity(seed: u64, samples: usize) -> Result<f64> {
    max_of((2..=3).map(|n| {
        bergman::volume_identity_residual(n, samples.max(1_000_000), seed + n as u64).map(|v| v.sigmas())
    }))
}

// automorphisms

fn rho_identities(seed: u64, samples: usize) -> Result<f64> {
    let mut rng = sampling::seeded_rng(seed);
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let d = DomainId::QuotientL { n: 2 + k % 4 };
        let w = ambient_vector(&d, &mut rng)?;
        let (a, b) = (sampling::unit_circle(&mut rng), sampling::unit_circle(&mut rng));
        let composed = automorphisms::rho_omega(a, &automorphisms::rho_omega(b, &w)?)?;
        let direct = automorphisms::rho_omega(a * b, &w)?;
        worst = worst.max(composed.distance(&direct));
        let before = domains::vector_margin(&d, &w)?;
        let after = domains::vector_margin(&d, &direct)?;
        if before.abs() > 1e-9 && (before > 0.0) != (after > 0.0) {
            worst = f64::INFINITY;
        }
    }
    Ok(worst)
}

fn extension_restriction(seed: u64, samples: usize) -> Result<f64> {
    let mut rng = sampling::seeded_rng(seed);
    let per_aut = 100;
    max_of((0..samples.div_ceil(per_aut)).map(|k| {
        let a = LieLinearAut::random(&mut rng, 1 + k % 5);
        automorphisms::restriction_residual(&a, per_aut, seed.wrapping_add(k as u64))
    }))
}

/// Scalar rotations on odd k, extensions of random linear automorphisms on even k.
fn catalogue_automorphism<R: Rng + ?Sized>(rng: &mut R, n: usize, kind: usize) -> LieLinearAut {
    if kind % 2 == 1 {
        LieLinearAut::new(sampling::unit_circle(rng), DMatrix::identity(n, n)).expect("valid")
    } else {
        extend_random(rng, n)
    }
}

fn extend_random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> LieLinearAut {
    automorphisms::extend_linear(&LieLinearAut::random(rng, n - 1))
}

fn well_definedness(seed: u64, samples: usize) -> Result<f64> {
    let mut rng = sampling::seeded_rng(seed);
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let n = 2 + k % 5;
        let w = domains::sample_uniform(&DomainId::QuotientL { n }, &mut rng)?;
        let residual = if k % 4 == 3 {
            let sigma = |z: &CPoint| proper_maps::deck_apply(&MapId::LambdaN { n }, z);
            automorphisms::induced_quotient_aut(sigma, &w)?.branch_residual
        } else {
            let a = catalogue_automorphism(&mut rng, n, k);
            automorphisms::induced_quotient_aut(|z| automorphisms::lie_linear_apply(&a, z), &w)?.branch_residual
        };
        worst = worst.max(residual);
    }
    Ok(worst)
}

fn membership_preservation(seed: u64, samples: usize) -> Result<f64> {
    let mut rng = sampling::seeded_rng(seed);
    let per_aut = 100;
    let mut violations = 0;
    for k in 0..samples.div_ceil(per_aut) {
        let n = 2 + k % 4;
        let a = LieLinearAut::random(&mut rng, n - 1);
        let s = seed.wrapping_add(k as u64);
        let quotient = automorphisms::validate_automorphism(
            |w: &CPoint| automorphisms::extended_quotient_aut(&a, w).map(|i| i.image),
            &DomainId::QuotientL { n },
            per_aut,
            s,
        )?;
        let lie = automorphisms::validate_automorphism(
            |z: &CPoint| automorphisms::lie_linear_apply(&a, z),
            &DomainId::LieBall { n: n - 1 },
            per_aut,
            s,
        )?;
        violations += quotient.interior_violations + quotient.boundary_violations;
        violations += lie.interior_violations + lie.boundary_violations;
    }
    Ok(violations as f64)
}

/// Serialized manifest: ids, modules, invariants, sizes and thresholds.
pub fn manifest_json() -> serde_json::Value {
    serde_json::to_value(MANIFEST).expect("manifest serializes")
}
