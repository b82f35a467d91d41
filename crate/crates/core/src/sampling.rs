//! Seeded samplers. Every random quantity in the crate flows from a
//! `ChaCha8Rng` built here, so a seed fully determines the output.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::point::CPoint;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent sub-stream `stream` of `seed`, for chunked parallel work.
pub fn substream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform point of the closed disc of radius `radius`.
pub fn uniform_disc<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    let rho = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(rho, 2.0 * PI * rng.random::<f64>())
}

/// Uniform point of the polydisc with the given radii.
pub fn uniform_polydisc<R: Rng + ?Sized>(rng: &mut R, radii: &[f64]) -> CPoint {
    CPoint::from_vec(radii.iter().map(|&r| uniform_disc(rng, r)).collect())
}

pub fn unit_circle<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * rng.random::<f64>())
}

/// Standard complex Gaussian (independent N(0,1) real and imaginary parts).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniform point on the real unit sphere S^{n-1} by Gaussian normalization.
pub fn real_unit_sphere<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Uniform point of the unit ball of ℂⁿ ≅ ℝ²ⁿ.
pub fn uniform_ball<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CPoint {
    let dir = real_unit_sphere(rng, 2 * n);
    let rho = rng.random::<f64>().powf(1.0 / (2 * n) as f64);
    CPoint::from_vec(dir.chunks(2).map(|p| Complex64::new(rho * p[0], rho * p[1])).collect())
}

/// Random element of SO(n): Gram–Schmidt on a Gaussian matrix, then a
/// column flip if the determinant came out negative.
pub fn special_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    loop {
        let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let qr = g.qr();
        let mut q = qr.q();
        let r = qr.r();
        if (0..n).any(|i| r[(i, i)].abs() < 1e-8) {
            continue;
        }
        for j in 0..n {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        if q.determinant() < 0.0 {
            q.column_mut(0).neg_mut();
        }
        return q;
    }
}

/// Rejection sampling from a polydisc: returns the first of up to
/// `max_tries` draws accepted by `accept`.
pub fn rejection<R, F>(rng: &mut R, radii: &[f64], max_tries: usize, accept: F) -> Option<CPoint>
where
    R: Rng + ?Sized,
    F: Fn(&CPoint) -> bool,
{
    (0..max_tries)
        .map(|_| uniform_polydisc(rng, radii))
        .find(|p| accept(p))
}
