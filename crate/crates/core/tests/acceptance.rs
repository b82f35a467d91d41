//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Values compared against closed forms are computed
//! here from scratch rather than through the library.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use cartan_core::automorphisms::{self, LieLinearAut};
use cartan_core::bergman;
use cartan_core::biholomorphisms::{self, BihId, BihTag};
use cartan_core::domains::{self, DomainId};
use cartan_core::proper_maps::{self, MapId};
use cartan_core::reflections::{self, LinearMap};
use cartan_core::sampling;
use cartan_core::{CPoint, Complex64, Point};
use nalgebra::DMatrix;

const SEED: u64 = 0x5eed_acce;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

type Criterion = fn() -> Result<Outcome, cartan_core::Error>;

// Oracles.

/// K_{L_n}(z, w) = (1 + (z•z)conj(w•w) − 2 z•w̄)^{−n}.
fn oracle_k_lie(z: &[Complex64], w: &[Complex64], n: usize) -> Complex64 {
    let zz: Complex64 = z.iter().map(|a| a * a).sum();
    let ww: Complex64 = w.iter().map(|a| a * a).sum();
    let zw: Complex64 = z.iter().zip(w).map(|(a, b)| a * b.conj()).sum();
    (c(1.0, 0.0) + zz * ww.conj() - 2.0 * zw).powi(-(n as i32))
}

/// Bergman kernel of the quotient through the transformation rule for the
/// 2-to-1 map (z₁, z′) ↦ (z₁², z′) with Jacobian 2z₁.
fn oracle_k_quotient(z: &[Complex64], w: &[Complex64], n: usize) -> Complex64 {
    let mut sw = w.to_vec();
    sw[0] = -sw[0];
    (oracle_k_lie(z, w, n) - oracle_k_lie(z, &sw, n)) / (4.0 * z[0] * w[0].conj())
}

fn square_first(z: &CPoint) -> CPoint {
    let mut v = z.coords().to_vec();
    v[0] = v[0] * v[0];
    CPoint::new(v).unwrap()
}

/// Both sides of the commuting squares, expanded by hand.
fn oracle_square(n: usize, z: &[Complex64]) -> Vec<Complex64> {
    let i = c(0.0, 1.0);
    let sq: Complex64 = z.iter().map(|a| a * a).sum();
    match n {
        2 => vec![2.0 * i * z[1], -sq],
        3 => vec![z[1] + i * z[2], -z[1] + i * z[2], -sq],
        4 => vec![z[2] + i * z[3], -z[2] + i * z[3], -sq, 2.0 * z[1]],
        _ => unreachable!(),
    }
}

fn fd_jacobian(m: &MapId, p: &CPoint, h: f64) -> Result<DMatrix<Complex64>, cartan_core::Error> {
    let (rows, cols) = (m.target_dim(), m.source_dim());
    let mut j = DMatrix::from_element(rows, cols, c(0.0, 0.0));
    for col in 0..cols {
        let mut plus = p.coords().to_vec();
        let mut minus = plus.clone();
        plus[col] += h;
        minus[col] -= h;
        let fp = proper_maps::eval(m, &CPoint::new(plus)?)?;
        let fm = proper_maps::eval(m, &CPoint::new(minus)?)?;
        for row in 0..rows {
            j[(row, col)] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    Ok(j)
}

fn hua_volume(n: usize) -> f64 {
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    PI.powi(n as i32) / (2f64.powi(n as i32 - 1) * fact)
}

// Criteria.

fn kernel_constancy() -> Result<Outcome, cartan_core::Error> {
    let mut worst: f64 = 0.0;
    for n in 2..=8 {
        let d = DomainId::QuotientL { n };
        let mut rng = sampling::substream(SEED, n as u64);
        for _ in 0..1_000 {
            let q = domains::sample_uniform(&d, &mut rng)?;
            let k = bergman::k_quotient_closed(&CPoint::zeros(n), &q, n)?.value;
            worst = worst.max((k - n as f64).norm());
        }
    }
    Ok(outcome(worst < 1e-10, format!("max |K(0,q) - n| = {worst:.3e} (< 1e-10)")))
}

fn lqk_zero() -> Result<Outcome, cartan_core::Error> {
    let r = 0.8;
    let mut worst: f64 = 0.0;
    let mut oracle_worst: f64 = 0.0;
    for n in 3..=8 {
        let omega = Complex64::from_polar(1.0, PI / n as f64);
        let z0 = (omega - 1.0) / (omega + 1.0);
        if r <= z0.norm() {
            continue;
        }
        let w = bergman::lqk_witness(n, r)?;
        worst = worst.max(w.relative_value());
        let mut zhat = vec![c(0.0, 0.0); n];
        let mut what = zhat.clone();
        zhat[0] = z0 / r;
        what[0] = c(r, 0.0);
        let scale = oracle_k_lie(&zhat, &what, n).norm();
        oracle_worst = oracle_worst.max(oracle_k_quotient(&zhat, &what, n).norm() / scale);
    }
    let passed = worst < 1e-9 && oracle_worst < 1e-9;
    Ok(outcome(
        passed,
        format!("max relative |K| = {worst:.3e}, independent = {oracle_worst:.3e} (< 1e-9)"),
    ))
}

fn form_equivalence() -> Result<Outcome, cartan_core::Error> {
    let mut worst: f64 = 0.0;
    let mut oracle_worst: f64 = 0.0;
    for n in 2..=8 {
        let d = DomainId::LieBall { n };
        let mut rng = sampling::substream(SEED ^ 3, n as u64);
        for _ in 0..10_000 {
            let z = domains::sample_uniform(&d, &mut rng)?;
            let w = domains::sample_uniform(&d, &mut rng)?;
            let diff = bergman::k_quotient_diff(&z, &w, n)?;
            let closed = bergman::k_quotient_closed(&square_first(&z), &square_first(&w), n)?.value;
            worst = worst.max((diff - closed).norm() / closed.norm());
            let oracle = oracle_k_quotient(z.coords(), w.coords(), n);
            oracle_worst = oracle_worst.max((oracle - closed).norm() / closed.norm());
        }
    }
    Ok(outcome(
        worst < 1e-10 && oracle_worst < 1e-10,
        format!("max relative error {worst:.3e}, against independent {oracle_worst:.3e} (< 1e-10)"),
    ))
}

fn l2_sampled_minimum() -> Result<Outcome, cartan_core::Error> {
    let scan = bergman::lqk_scan(2, 100_000, SEED ^ 4)?;
    Ok(outcome(scan.min_abs > 1e-6, format!("min |K| = {:.4e} over 1e5 pairs (> 1e-6)", scan.min_abs)))
}

fn commuting_squares() -> Result<Outcome, cartan_core::Error> {
    let mut worst: f64 = 0.0;
    let mut oracle_worst: f64 = 0.0;
    for n in 2..=4 {
        worst = worst.max(biholomorphisms::commuting_square_residual(n, 10_000, SEED ^ 5)?);
        let b = biholomorphisms::quotient_bih(n)?;
        let d = DomainId::LieBall { n };
        let mut rng = sampling::substream(SEED ^ 5, n as u64);
        for _ in 0..10_000 {
            let z = domains::sample_uniform(&d, &mut rng)?;
            let lhs = biholomorphisms::bih_eval(&b, &Point::Vector(square_first(&z)))?;
            let lhs = lhs.as_vector()?;
            let expected = oracle_square(n, z.coords());
            let r = lhs.coords().iter().zip(&expected).map(|(a, e)| (a - e).norm()).fold(0.0, f64::max);
            oracle_worst = oracle_worst.max(r);
        }
    }
    Ok(outcome(
        worst < 1e-12 && oracle_worst < 1e-12,
        format!("max residual {worst:.3e}, against hand expansion {oracle_worst:.3e} (< 1e-12)"),
    ))
}

fn membership_equivalences() -> Result<Outcome, cartan_core::Error> {
    let mut parts = Vec::new();
    let mut total = 0;
    for (k, tag) in [BihTag::L2toBidisc, BihTag::L3toR3, BihTag::L4toR1].into_iter().enumerate() {
        let a = biholomorphisms::membership_agreement(&BihId::forward(tag), 100_000, SEED ^ (60 + k as u64), 1e-9)?;
        total += a.disagreements;
        parts.push(format!("{tag:?} {} ({} inside, {} skipped)", a.disagreements, a.inside, a.skipped));
    }
    Ok(outcome(total == 0, format!("disagreements: {}", parts.join(", "))))
}

fn properness_and_galois() -> Result<Outcome, cartan_core::Error> {
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for (k, m) in MapId::catalogue().iter().enumerate() {
        let seed = SEED ^ (700 + k as u64);
        if proper_maps::multiplicity_probe(m, 10_000, seed)? != 2 {
            bad.push(format!("{m:?} multiplicity"));
        }
        let mut rng = sampling::seeded_rng(seed);
        for _ in 0..10_000 {
            let p = proper_maps::sample_source(m, &mut rng)?;
            let g = proper_maps::deck_apply(m, &p)?;
            let scale = 1.0 + p.norm_sqr().sqrt();
            let gg = proper_maps::deck_apply(m, &g)?.distance(&p);
            let same = proper_maps::eval(m, &g)?.distance(&proper_maps::eval(m, &p)?);
            let fib = proper_maps::deck_involution_from_fibers(m, &p)?.distance(&g);
            worst = worst.max(gg.max(same).max(fib) / scale);
        }
        let fix = proper_maps::fix_locus_agreement(m, 10_000, seed)?;
        if fix.disagreements != 0 {
            bad.push(format!("{m:?} fix/locus {}", fix.disagreements));
        }
    }
    if worst >= 1e-12 {
        bad.push(format!("deck residual {worst:.3e}"));
    }
    let maps = MapId::catalogue().len();
    let detail = if bad.is_empty() {
        format!("{maps} maps, multiplicity 2, deck residual {worst:.3e} (< 1e-12), Fix = locus")
    } else {
        bad.join("; ")
    };
    Ok(outcome(bad.is_empty(), detail))
}

fn jacobian_lock() -> Result<Outcome, cartan_core::Error> {
    let mut worst: f64 = 0.0;
    for (k, m) in MapId::catalogue().iter().enumerate() {
        let mut rng = sampling::substream(SEED ^ 8, k as u64);
        for _ in 0..1_000 {
            let p = proper_maps::sample_source(m, &mut rng)?;
            let j = fd_jacobian(m, &p, 1e-6)?;
            let rel = if m.is_equidimensional() {
                let exact = proper_maps::jacobian_det(m, &p)?;
                (j.determinant() - exact).norm() / exact.norm()
            } else {
                let gram = (j.adjoint() * &j).determinant();
                let exact = proper_maps::locus_margin(m, &p)?.powi(2);
                (gram - exact).norm() / exact
            };
            worst = worst.max(rel);
        }
    }
    Ok(outcome(worst < 1e-5, format!("max relative error {worst:.3e} (< 1e-5)")))
}

fn reflection_intertwining() -> Result<Outcome, cartan_core::Error> {
    let base = MapId::BidiscSym { omega: c(1.0, 0.0) };
    let mut worst: f64 = 0.0;
    for k in 0..8 {
        let omega = Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.37) / 8.0);
        let p = LinearMap::p_omega(omega);
        worst = worst.max(reflections::intertwine_residual(&base, &MapId::BidiscSym { omega }, &p, 1_000, SEED ^ k)?);
    }
    Ok(outcome(worst < 1e-14, format!("max residual {worst:.3e} over 8 omega (< 1e-14)")))
}

fn automorphism_extension() -> Result<Outcome, cartan_core::Error> {
    let mut rng = sampling::seeded_rng(SEED ^ 10);
    let (mut branch, mut restrict): (f64, f64) = (0.0, 0.0);
    let mut violations = 0;
    for k in 0..100 {
        let n = 2 + k % 4;
        let a = LieLinearAut::random(&mut rng, n - 1);
        let d = DomainId::QuotientL { n };
        let seed = SEED ^ (1000 + k as u64);
        let mut prng = sampling::seeded_rng(seed);
        for _ in 0..1_000 {
            let w = domains::sample_uniform(&d, &mut prng)?;
            branch = branch.max(automorphisms::extended_quotient_aut(&a, &w)?.branch_residual);
        }
        let report = automorphisms::validate_automorphism(
            |w: &CPoint| automorphisms::extended_quotient_aut(&a, w).map(|i| i.image),
            &d,
            1_000,
            seed,
        )?;
        violations += report.interior_violations + report.boundary_violations;
        restrict = restrict.max(automorphisms::restriction_residual(&a, 1_000, seed)?);
    }
    let passed = branch < 1e-12 && restrict < 1e-12 && violations == 0;
    Ok(outcome(
        passed,
        format!(
            "100 automorphisms: branch residual {branch:.3e}, restriction {restrict:.3e} (< 1e-12), membership violations {violations}"
        ),
    ))
}

fn volume_identity() -> Result<Outcome, cartan_core::Error> {
    let mut passed = true;
    let mut parts = Vec::new();
    for n in 2..=3 {
        let v = bergman::volume_identity_residual(n, 10_000_000, SEED ^ 11)?;
        let hua = (v.lie.estimate - hua_volume(n)).abs() / v.lie.stderr;
        passed &= v.sigmas() < 3.0 && hua < 4.0;
        parts.push(format!("n={n}: {:.2} sigma (< 3), Vol(L_n) within {hua:.2} se of closed form", v.sigmas()));
    }
    Ok(outcome(passed, parts.join("; ")))
}

fn shilov_maximum() -> Result<Outcome, cartan_core::Error> {
    let mut worst = f64::INFINITY;
    for n in 2..=4 {
        for (k, d) in [DomainId::LieBall { n }, DomainId::QuotientL { n }].iter().enumerate() {
            let r = domains::shilov_max_ratio(d, 100, 3, 10_000, SEED ^ (1200 + 10 * n as u64 + k as u64))?;
            worst = worst.min(r);
        }
    }
    Ok(outcome(worst >= 0.99, format!("min ratio {worst:.4} over 600 polynomials (>= 0.99)")))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 12] = [
        ("kernel constancy", kernel_constancy),
        ("kernel zero witness", lqk_zero),
        ("kernel form equivalence", form_equivalence),
        ("L_2 quotient sampled minimum", l2_sampled_minimum),
        ("commuting squares", commuting_squares),
        ("membership equivalences", membership_equivalences),
        ("2-properness and Galois", properness_and_galois),
        ("Jacobian lock", jacobian_lock),
        ("reflection intertwining", reflection_intertwining),
        ("automorphism extension", automorphism_extension),
        ("volume identity", volume_identity),
        ("Shilov maximum principle", shilov_maximum),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (passed, detail) = match run() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let secs = start.elapsed().as_secs_f64();
        println!("{} {:>2} {name}: {detail} [{secs:.2}s]", if passed { "PASS" } else { "FAIL" }, k + 1);
        failures += usize::from(!passed);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
