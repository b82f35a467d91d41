use serde::Serialize;
use serde_json::{json, Value};

use cartan_core::automorphisms::{self, LieLinearAut};
use cartan_core::bergman;
use cartan_core::biholomorphisms::{self, BihId, BihTag};
use cartan_core::domains;
use cartan_core::proper_maps;
use cartan_core::sampling;
use cartan_core::suite::{self, SuiteConfig};
use cartan_core::{CPoint, Complex64, DomainId, MapId, Point};

use crate::args::{Command, Global};

/// What a subcommand produced.
pub struct Report {
    /// `None` when the subcommand verifies nothing.
    pub passed: Option<bool>,
    pub records: Vec<Value>,
}

/// A failure before any result exists; maps to exit code 1.
pub type CmdResult = Result<Report, String>;

fn info(records: Vec<Value>) -> CmdResult {
    Ok(Report { passed: None, records })
}

fn verdict(passed: bool, records: Vec<Value>) -> CmdResult {
    Ok(Report { passed: Some(passed), records })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn lib<T>(r: cartan_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn parse_point(s: &str) -> Result<Point, String> {
    serde_json::from_str(s).map_err(|e| format!("malformed point JSON: {e}"))
}

fn parse_vector(s: &str) -> Result<CPoint, String> {
    serde_json::from_str(s).map_err(|e| format!("malformed point JSON: {e}"))
}

fn complex(c: Complex64) -> Value {
    json!([c.re, c.im])
}

pub fn run(g: &Global, cmd: &Command) -> CmdResult {
    match cmd {
        Command::Member { domain, point } => member(g, domain, point),
        Command::EvalMap { map, bih, inverse, point } => eval_map(g, map.as_deref(), bih.as_deref(), *inverse, point),
        Command::Fiber { map, point } => fiber(g, map, point),
        Command::Kernel { p, q } => kernel(g, p, q),
        Command::LqkZero => lqk_zero(g),
        Command::LqkScan { near } => lqk_scan(g, *near),
        Command::VerifySuite { all, manifest, checks } => verify_suite(g, *all, *manifest, checks),
        Command::Volume { domain } => volume(g, domain.as_deref()),
        Command::ShilovSample { domain, ratio } => shilov_sample(g, domain, *ratio),
        Command::AutApply { aut, point } => aut_apply(g, aut.as_deref(), point),
        Command::FixScan { map, aut } => fix_scan(g, map.as_deref(), aut.as_deref()),
    }
}

fn member(g: &Global, domain: &str, point: &str) -> CmdResult {
    let d = g.domain(domain)?;
    let p = parse_point(point)?;
    let tol = g.tol.unwrap_or(domains::DEFAULT_TOL);
    let v = lib(domains::contains_with_tol(&d, &p, tol))?;
    info(vec![json!({
        "domain": to_value(&d),
        "point": to_value(&p),
        "state": to_value(&v.state),
        "margin": v.margin,
        "tol": v.tol,
    })])
}

fn parse_bih(tag: &str, inverse: bool) -> Result<BihId, String> {
    let tag: BihTag = serde_json::from_value(Value::String(tag.to_string()))
        .map_err(|_| format!("unknown biholomorphism {tag:?}"))?;
    let b = BihId::forward(tag);
    Ok(if inverse { b.inverted() } else { b })
}

fn eval_map(g: &Global, map: Option<&str>, bih: Option<&str>, inverse: bool, point: &str) -> CmdResult {
    if let Some(tag) = bih {
        let b = parse_bih(tag, inverse)?;
        let p = parse_point(point)?;
        let image = lib(biholomorphisms::bih_eval(&b, &p))?;
        let source_margin = lib(domains::margin(&b.source_domain(), &p))?;
        let target_margin = lib(domains::margin(&b.target_domain(), &image))?;
        return info(vec![json!({
            "bih": to_value(&b),
            "point": to_value(&p),
            "image": to_value(&image),
            "source_margin": source_margin,
            "target_margin": target_margin,
        })]);
    }
    let m = g.map(map.expect("clap requires --map or --bih"))?;
    let p = parse_vector(point)?;
    let image = lib(proper_maps::eval(&m, &p))?;
    let jacobian = if m.is_equidimensional() {
        complex(lib(proper_maps::jacobian_det(&m, &p))?)
    } else {
        Value::Null
    };
    info(vec![json!({
        "map": to_value(&m),
        "point": to_value(&p),
        "image": to_value(&image),
        "jacobian_det": jacobian,
        "locus_margin": lib(proper_maps::locus_margin(&m, &p))?,
        "source_margin": lib(proper_maps::source_margin(&m, &p))?,
    })])
}

fn fiber(g: &Global, map: &str, point: &str) -> CmdResult {
    let m = g.map(map)?;
    let target = parse_vector(point)?;
    let f = lib(proper_maps::fiber(&m, &target))?;
    info(vec![json!({
        "map": to_value(&m),
        "target": to_value(&target),
        "preimages": to_value(&f.preimages),
        "is_critical": f.is_critical,
    })])
}

fn quotient_point(g: &Global, spec: &str, n: usize, stream: u64) -> Result<CPoint, String> {
    match spec.trim() {
        "0" => Ok(CPoint::zeros(n)),
        "random" => {
            let mut rng = sampling::substream(g.seed, stream);
            lib(domains::sample_uniform(&DomainId::QuotientL { n }, &mut rng))
        }
        s => parse_vector(s),
    }
}

fn kernel(g: &Global, p: &str, q: &str) -> CmdResult {
    let n = g.need_n()?;
    let pp = quotient_point(g, p, n, 0)?;
    let qq = quotient_point(g, q, n, 1)?;
    let d = DomainId::QuotientL { n };
    let k = lib(bergman::k_quotient_closed(&pp, &qq, n))?;
    info(vec![json!({
        "n": n,
        "p": to_value(&pp),
        "q": to_value(&qq),
        "value": complex(k.value),
        "abs": k.value.norm(),
        "p_margin": lib(domains::margin(&d, &Point::Vector(pp.clone())))?,
        "q_margin": lib(domains::margin(&d, &Point::Vector(qq.clone())))?,
    })])
}

fn lqk_zero(g: &Global) -> CmdResult {
    let n = g.need_n()?;
    let r = g.r.unwrap_or(0.8);
    let tol = g.tol.unwrap_or(1e-9);
    let w = lib(bergman::lqk_witness(n, r))?;
    let rel = w.relative_value();
    let d = DomainId::LieBall { n };
    let zm = lib(domains::margin(&d, &Point::Vector(w.zhat.clone())))?;
    let wm = lib(domains::margin(&d, &Point::Vector(w.what.clone())))?;
    let passed = rel < tol && zm > 0.0 && wm > 0.0;
    verdict(
        passed,
        vec![json!({
            "n": n,
            "r": r,
            "z0": complex(w.z0),
            "zhat": to_value(&w.zhat),
            "what": to_value(&w.what),
            "value": complex(w.kernel_value),
            "abs": w.kernel_value.norm(),
            "scale": w.lie_kernel_value.norm(),
            "relative": rel,
            "zhat_margin": zm,
            "what_margin": wm,
            "tol": tol,
            "passed": passed,
        })],
    )
}

fn lqk_scan(g: &Global, near: Option<f64>) -> CmdResult {
    let n = g.need_n()?;
    let samples = g.samples.unwrap_or(100_000);
    let scan = match near {
        Some(radius) => lib(bergman::lqk_scan_near(n, g.r.unwrap_or(0.8), radius, samples, g.seed))?,
        None => lib(bergman::lqk_scan(n, samples, g.seed))?,
    };
    let mut record = json!({
        "n": n,
        "samples": scan.samples,
        "min_abs": scan.min_abs,
        "argmin_p": to_value(&scan.argmin.0),
        "argmin_q": to_value(&scan.argmin.1),
    });
    match g.tol {
        Some(tol) => {
            let passed = scan.min_abs > tol;
            record["tol"] = json!(tol);
            record["passed"] = json!(passed);
            verdict(passed, vec![record])
        }
        None => info(vec![record]),
    }
}

fn verify_suite(g: &Global, all: bool, manifest: bool, checks: &[String]) -> CmdResult {
    if manifest {
        let rows = suite::manifest_json().as_array().cloned().unwrap_or_default();
        return info(rows);
    }
    for c in checks {
        if !suite::MANIFEST.iter().any(|s| s.id == c || s.module == c) {
            return Err(format!("unknown check or module {c:?}"));
        }
    }
    let config = SuiteConfig {
        seed: g.seed,
        max_samples: g.samples,
        include_slow: all,
    };
    let results = suite::run_suite(&config, checks);
    let passed = results.iter().all(|r| r.passed);
    verdict(passed, results.iter().map(to_value).collect())
}

fn volume(g: &Global, domain: Option<&str>) -> CmdResult {
    let samples = g.samples.unwrap_or(1_000_000);
    if let Some(spec) = domain {
        let d = g.domain(spec)?;
        let v = lib(domains::mc_volume(&d, samples, g.seed))?;
        return info(vec![json!({
            "domain": to_value(&d),
            "estimate": v.estimate,
            "stderr": v.stderr,
            "hits": v.hits,
            "samples": v.samples,
        })]);
    }
    let n = g.need_n()?;
    let tol = g.tol.unwrap_or(3.0);
    let v = lib(bergman::volume_identity_residual(n, samples, g.seed))?;
    let sigmas = v.sigmas();
    let passed = sigmas < tol;
    verdict(
        passed,
        vec![json!({
            "n": n,
            "samples": samples,
            "lie_volume": v.lie.estimate,
            "lie_stderr": v.lie.stderr,
            "quotient_volume": v.quotient.estimate,
            "quotient_stderr": v.quotient.stderr,
            "residual": v.residual,
            "combined_stderr": v.combined_stderr,
            "sigmas": sigmas,
            "tol": tol,
            "passed": passed,
        })],
    )
}

fn shilov_sample(g: &Global, domain: &str, ratio: bool) -> CmdResult {
    let d = g.domain(domain)?;
    if ratio {
        let count = g.samples.unwrap_or(10_000);
        let tol = g.tol.unwrap_or(0.99);
        let value = lib(domains::shilov_max_ratio(&d, 100, 3, count, g.seed))?;
        let passed = value >= tol;
        return verdict(
            passed,
            vec![json!({
                "domain": to_value(&d),
                "polynomials": 100,
                "degree": 3,
                "samples": count,
                "ratio": value,
                "tol": tol,
                "passed": passed,
            })],
        );
    }
    let count = g.samples.unwrap_or(16);
    let pts = lib(domains::shilov_sample(&d, count, g.seed))?;
    let rows = pts
        .iter()
        .map(|p| {
            Ok(json!({
                "point": to_value(p),
                "margin": lib(domains::margin(&d, &Point::Vector(p.clone())))?,
            }))
        })
        .collect::<Result<Vec<_>, String>>()?;
    info(rows)
}

fn parse_aut(g: &Global, aut: Option<&str>, dim: usize) -> Result<LieLinearAut, String> {
    match aut {
        Some(s) => serde_json::from_str(s).map_err(|e| format!("malformed automorphism JSON: {e}")),
        None => {
            let n = g.n.unwrap_or(dim);
            let omega = g.omega.unwrap_or(Complex64::new(1.0, 0.0));
            lib(LieLinearAut::new(omega, LieLinearAut::identity(n).u().clone()))
        }
    }
}

fn aut_apply(g: &Global, aut: Option<&str>, point: &str) -> CmdResult {
    let p = parse_vector(point)?;
    let a = parse_aut(g, aut, p.dim())?;
    let (d, image, branch) = if p.dim() == a.dim() {
        (DomainId::LieBall { n: a.dim() }, lib(automorphisms::lie_linear_apply(&a, &p))?, None)
    } else if p.dim() == a.dim() + 1 {
        let img = lib(automorphisms::extended_quotient_aut(&a, &p))?;
        (DomainId::QuotientL { n: p.dim() }, img.image, Some(img.branch_residual))
    } else {
        return Err(format!(
            "a {}-dimensional automorphism acts on points of dimension {} or {}, got {}",
            a.dim(),
            a.dim(),
            a.dim() + 1,
            p.dim()
        ));
    };
    let tol = g.tol.unwrap_or(domains::DEFAULT_TOL);
    let before = lib(domains::contains_with_tol(&d, &Point::Vector(p.clone()), tol))?;
    let after = lib(domains::contains_with_tol(&d, &Point::Vector(image.clone()), tol))?;
    let passed = before.state == after.state;
    verdict(
        passed,
        vec![json!({
            "aut": to_value(&a),
            "domain": to_value(&d),
            "point": to_value(&p),
            "image": to_value(&image),
            "branch_residual": branch,
            "point_margin": before.margin,
            "image_margin": after.margin,
            "tol": tol,
            "passed": passed,
        })],
    )
}

fn fix_scan(g: &Global, map: Option<&str>, aut: Option<&str>) -> CmdResult {
    let samples = g.samples.unwrap_or(1_000);
    let tol = g.tol.unwrap_or(automorphisms::FIX_TOL);
    if let Some(spec) = map {
        let m: MapId = g.map(spec)?;
        let agreement = lib(proper_maps::fix_locus_agreement(&m, samples, g.seed))?;
        let d = m.source_domain();
        let fixed = if d.vector_dim().is_some() && m.source_dim() == d.vector_dim().unwrap_or(0) {
            lib(automorphisms::fix_points_sample(|z: &CPoint| proper_maps::deck_apply(&m, z), &d, samples, g.seed, tol))?
        } else {
            Vec::new()
        };
        let passed = agreement.disagreements == 0;
        return verdict(
            passed,
            vec![json!({
                "map": to_value(&m),
                "samples": agreement.samples,
                "locus_samples": agreement.locus_samples,
                "disagreements": agreement.disagreements,
                "fixed_points": to_value(&fixed),
                "tol": tol,
                "passed": passed,
            })],
        );
    }
    let a = parse_aut(g, aut, 2)?;
    let d = DomainId::LieBall { n: a.dim() };
    let fixed = lib(automorphisms::fix_points_sample(
        |z: &CPoint| automorphisms::lie_linear_apply(&a, z),
        &d,
        samples,
        g.seed,
        tol,
    ))?;
    info(vec![json!({
        "aut": to_value(&a),
        "domain": to_value(&d),
        "samples": samples,
        "fixed_points": to_value(&fixed),
        "tol": tol,
    })])
}
