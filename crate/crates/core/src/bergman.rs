//! Bergman kernels of L_n and 𝕃_n, the explicit Lu Qi-Keng zeros of 𝕃_n
//! for n ≥ 3, zero scans, and the volume identity Vol(L_n) = n·Vol(𝕃_n).
//!
//! K_{L_n} is normalized so that K_{L_n}(0, 0) = 1. With that normalization
//! the quotient kernel satisfies K_{𝕃_n}(0, ·) = n.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domains::{self, DomainId, McVolume};
use crate::error::{Error, Result};
use crate::point::CPoint;
use crate::sampling;

/// Largest n with exact binomial coefficients.
pub const MAX_KERNEL_DIM: usize = 64;

/// |X_n² − A²| below this is treated as a pole.
pub const POLE_GUARD: f64 = 1e-30;

const SCAN_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: Complex64,
    pub xn: Complex64,
    pub asq: Complex64,
}

fn check_pair(z: &CPoint, w: &CPoint, n: usize) -> Result<()> {
    if n == 0 || n > MAX_KERNEL_DIM {
        return Err(Error::InvalidParameter(format!("n must lie in 1..={MAX_KERNEL_DIM}, got {n}")));
    }
    z.check_dim(n)?;
    w.check_dim(n)
}

/// K_{L_n}(z, w) = (1 + (z•z)·conj(w•w) − 2Σ z_j w̄_j)^{−n}.
pub fn k_lie(z: &CPoint, w: &CPoint, n: usize) -> Result<Complex64> {
    check_pair(z, w, n)?;
    let cross: Complex64 = z.coords().iter().zip(w.coords()).map(|(a, b)| a * b.conj()).sum();
    let base = 1.0 + z.dot_self() * w.dot_self().conj() - 2.0 * cross;
    if base.norm_sqr() == 0.0 {
        return Err(Error::Pole("the Lie ball kernel"));
    }
    Ok(base.powi(-(n as i32)))
}

/// K_{𝕃_n}(Λ_n z, Λ_n w) through (K_{L_n}(z, w) − K_{L_n}(σz, w)) / (4 z₁ w̄₁).
pub fn k_quotient_diff(z: &CPoint, w: &CPoint, n: usize) -> Result<Complex64> {
    check_pair(z, w, n)?;
    let denom = 4.0 * z[0] * w[0].conj();
    if denom.norm_sqr() == 0.0 {
        return Err(Error::InvalidParameter(
            "the difference form needs z1 and w1 nonzero; use the closed form".into(),
        ));
    }
    let mut flipped = z.coords().to_vec();
    flipped[0] = -flipped[0];
    let flipped = CPoint::new(flipped)?;
    Ok((k_lie(z, w, n)? - k_lie(&flipped, w, n)?) / denom)
}

/// C(n, k) in exact integer arithmetic.
fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
}

/// K_{𝕃_n}(p, q) in quotient coordinates:
/// Σ_{k odd} C(n,k) X^{n−k} (A²)^{(k−1)/2} / (X² − A²)^n.
pub fn k_quotient_closed(p: &CPoint, q: &CPoint, n: usize) -> Result<KernelValue> {
    check_pair(p, q, n)?;
    let (p, q) = (p.coords(), q.coords());
    let tail_sq = |v: &[Complex64]| v[0] + v[1..].iter().map(|c| c * c).sum::<Complex64>();
    let cross: Complex64 = p[1..].iter().zip(&q[1..]).map(|(a, b)| a * b.conj()).sum();
    let xn = 1.0 + tail_sq(p) * tail_sq(q).conj() - 2.0 * cross;
    let asq = 4.0 * p[0] * q[0].conj();
    let denom = xn * xn - asq;
    if denom.norm() < POLE_GUARD {
        return Err(Error::Pole("the quotient kernel (X^2 = A^2)"));
    }
    let numerator: Complex64 = (1..=n)
        .step_by(2)
        .map(|k| binomial(n, k) as f64 * xn.powu((n - k) as u32) * asq.powu(((k - 1) / 2) as u32))
        .sum();
    Ok(KernelValue {
        value: numerator / denom.powu(n as u32),
        xn,
        asq,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LqkWitness {
    pub n: usize,
    pub z0: Complex64,
    pub r: f64,
    pub zhat: CPoint,
    pub what: CPoint,
    /// K_{𝕃_n}(Λ_n ẑ, Λ_n ŵ).
    pub kernel_value: Complex64,
    /// K_{L_n}(ẑ, ŵ) = (1 − z₀)^{−2n}, the natural scale for `kernel_value`.
    pub lie_kernel_value: Complex64,
}

impl LqkWitness {
    /// |K_{𝕃_n}| relative to |K_{L_n}(ẑ, ŵ)|.
    pub fn relative_value(&self) -> f64 {
        self.kernel_value.norm() / self.lie_kernel_value.norm()
    }
}

/// z₀ = (ω_{2n} − 1)/(ω_{2n} + 1) with ω_{2n} = e^{iπ/n}; equals i·tan(π/2n).
pub fn lqk_z0(n: usize) -> Complex64 {
    let omega = Complex64::from_polar(1.0, PI / n as f64);
    (omega - 1.0) / (omega + 1.0)
}

/// The pair ẑ = (z₀/r, 0, …), ŵ = (r, 0, …) at which K_{𝕃_n} vanishes.
pub fn lqk_witness(n: usize, r: f64) -> Result<LqkWitness> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "no witness for n = {n}: |z0| = tan(pi/{}) >= 1",
            2 * n
        )));
    }
    let z0 = lqk_z0(n);
    if !(r > z0.norm() && r < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "r must lie in (|z0|, 1) = ({}, 1), got {r}",
            z0.norm()
        )));
    }
    let mut zhat = vec![Complex64::new(0.0, 0.0); n];
    let mut what = zhat.clone();
    zhat[0] = z0 / r;
    what[0] = Complex64::new(r, 0.0);
    let zhat = CPoint::new(zhat)?;
    let what = CPoint::new(what)?;
    let kernel_value =
        k_quotient_closed(&domains::lambda_n(&zhat), &domains::lambda_n(&what), n)?.value;
    let lie_kernel_value = k_lie(&zhat, &what, n)?;
    Ok(LqkWitness {
        n,
        z0,
        r,
        zhat,
        what,
        kernel_value,
        lie_kernel_value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LqkScan {
    pub min_abs: f64,
    pub argmin: (CPoint, CPoint),
    pub samples: usize,
}

/// Minimum over chunks, ties resolved by chunk order.
fn scan_chunks<F>(samples: usize, seed: u64, draw: F) -> Result<LqkScan>
where
    F: Fn(&mut sampling::SeededRng) -> Result<(CPoint, CPoint, f64)> + Sync,
{
    let chunks = samples.div_ceil(SCAN_CHUNK);
    let best = (0..chunks)
        .into_par_iter()
        .map(|k| -> Result<(f64, CPoint, CPoint)> {
            let mut rng = sampling::substream(seed, k as u64);
            let len = SCAN_CHUNK.min(samples - k * SCAN_CHUNK);
            let mut best: Option<(f64, CPoint, CPoint)> = None;
            for _ in 0..len {
                let (p, q, v) = draw(&mut rng)?;
                if best.as_ref().is_none_or(|b| v < b.0) {
                    best = Some((v, p, q));
                }
            }
            Ok(best.expect("chunks are non-empty"))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
        .expect("samples > 0");
    Ok(LqkScan {
        min_abs: best.0,
        argmin: (best.1, best.2),
        samples,
    })
}

/// Minimum of |K_{𝕃_n}(p, q)| over uniform random pairs in 𝕃_n × 𝕃_n.
pub fn lqk_scan(n: usize, samples: usize, seed: u64) -> Result<LqkScan> {
    if samples < 1000 {
        return Err(Error::InvalidParameter(format!("need at least 10^3 samples, got {samples}")));
    }
    let d = DomainId::QuotientL { n };
    d.validate()?;
    scan_chunks(samples, seed, |rng| {
        let p = domains::sample_uniform(&d, rng)?;
        let q = domains::sample_uniform(&d, rng)?;
        let v = k_quotient_closed(&p, &q, n)?.value.norm();
        Ok((p, q, v))
    })
}

/// Like [`lqk_scan`], with z and w drawn from polydiscs of the given radius
/// around the witness pair (ẑ, ŵ) and kept inside L_n.
pub fn lqk_scan_near(n: usize, r: f64, radius: f64, samples: usize, seed: u64) -> Result<LqkScan> {
    if samples < 1000 {
        return Err(Error::InvalidParameter(format!("need at least 10^3 samples, got {samples}")));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let witness = lqk_witness(n, r)?;
    let radii = vec![radius; n];
    let perturb = |centre: &CPoint, rng: &mut sampling::SeededRng| -> Result<CPoint> {
        for _ in 0..10_000 {
            let delta = sampling::uniform_polydisc(&mut *rng, &radii);
            let z = CPoint::new(centre.coords().iter().zip(delta.coords()).map(|(a, b)| a + b).collect())?;
            if domains::lie_ball_margin(z.coords()) > 0.0 {
                return Ok(z);
            }
        }
        Err(Error::Inconsistent("the witness neighbourhood misses the Lie ball".into()))
    };
    scan_chunks(samples, seed, |rng| {
        let p = domains::lambda_n(&perturb(&witness.zhat, rng)?);
        let q = domains::lambda_n(&perturb(&witness.what, rng)?);
        let v = k_quotient_closed(&p, &q, n)?.value.norm();
        Ok((p, q, v))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeIdentity {
    pub n: usize,
    pub lie: McVolume,
    pub quotient: McVolume,
    /// |n·Vol(𝕃_n) − Vol(L_n)| / Vol(L_n).
    pub residual: f64,
    /// Standard error of the residual: √((n·se_𝕃)² + se_L²) / Vol(L_n).
    pub combined_stderr: f64,
}

impl VolumeIdentity {
    /// Residual in units of the combined standard error.
    pub fn sigmas(&self) -> f64 {
        self.residual / self.combined_stderr
    }
}

/// Monte-Carlo check of Vol(L_n) = n·Vol(𝕃_n). The two volumes use
/// independent streams derived from `seed`.
pub fn volume_identity_residual(n: usize, samples: usize, seed: u64) -> Result<VolumeIdentity> {
    if samples < 1_000_000 {
        return Err(Error::InvalidParameter(format!("need at least 10^6 samples, got {samples}")));
    }
    let lie = domains::mc_volume(&DomainId::LieBall { n }, samples, seed)?;
    let quotient = domains::mc_volume(&DomainId::QuotientL { n }, samples, seed.wrapping_add(1))?;
    let nf = n as f64;
    Ok(VolumeIdentity {
        n,
        lie,
        quotient,
        residual: (nf * quotient.estimate - lie.estimate).abs() / lie.estimate,
        combined_stderr: ((nf * quotient.stderr).powi(2) + lie.stderr.powi(2)).sqrt() / lie.estimate,
    })
}
