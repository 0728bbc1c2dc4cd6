//! Seeded, splittable random streams.
//!
//! Every random draw in the crate goes through [`stream`], so that a
//! `(seed, stream)` pair fully determines the output regardless of which
//! thread consumes it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type StreamRng = ChaCha8Rng;

pub fn stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derive a child seed; used to give every trial of a suite its own seed.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A complex number whose real and imaginary parts are independent standard normals.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn complex_normal_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| complex_normal(rng)).collect()
}

/// A uniformly random point on the unit sphere of `ℂ^len`.
pub fn unit_sphere<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Complex64> {
    loop {
        let v = complex_normal_vec(rng, len);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// A random element of ℂ* with log-uniform modulus in `[e⁻¹, e]` and uniform phase.
pub fn nonzero_scalar<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let log_r: f64 = rng.random_range(-1.0..1.0);
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(log_r.exp(), theta)
}

pub fn unit_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(1.0, theta)
}
