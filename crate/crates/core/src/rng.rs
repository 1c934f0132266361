//! Seedable random source shared by all optimizers.
//!
//! The generator is ChaCha8 (`rand_chacha`), seeded through
//! `SeedableRng::seed_from_u64` and optionally moved to an independent
//! stream with `set_stream`. Conversions to floats are done here rather than
//! through `rand`'s distributions so the draw sequence for a given seed stays
//! fixed:
//!
//! * uniform: the top 53 bits of `next_u64`, scaled by 2^-53, giving `[0, 1)`;
//! * standard normal: Box–Muller cosine branch over two uniforms, one value per
//!   call (the sine partner is discarded);
//! * index below `n`: `floor(uniform * n)`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Source of the primitive draws every stochastic operation consumes.
///
/// Optimizer internals are generic over this trait so tests can script exact
/// draw sequences.
pub trait DrawSource {
    /// Uniform draw in `[0, 1)`.
    fn uniform(&mut self) -> f64;

    /// Standard-normal draw (mean 0, variance 1).
    fn standard_normal(&mut self) -> f64 {
        // 1 - u lies in (0, 1], keeping the logarithm finite
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform draw in `[lo, hi)`.
    fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform index in `0..n`. `n` must be non-zero.
    fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }
}

/// Deterministic ChaCha8-backed generator. Single owner per run.
#[derive(Debug, Clone)]
pub struct RandomSource {
    inner: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `stream` of the generator keyed by `seed`.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
}

impl DrawSource for RandomSource {
    fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Replays a fixed list of uniform draws, cycling when exhausted.
///
/// Useful for pinning the branch an optimizer takes in tests and for
/// hand-traceable examples.
#[derive(Debug, Clone)]
pub struct ScriptedDraws {
    uniforms: Vec<f64>,
    normals: Vec<f64>,
    next_uniform: usize,
    next_normal: usize,
}

impl ScriptedDraws {
    pub fn new(uniforms: Vec<f64>) -> Self {
        Self::with_normals(uniforms, Vec::new())
    }

    /// Uniforms and, separately, the values returned by `standard_normal`.
    /// With an empty normal list the Box–Muller default is used.
    pub fn with_normals(uniforms: Vec<f64>, normals: Vec<f64>) -> Self {
        assert!(!uniforms.is_empty(), "scripted draws need at least one uniform");
        Self {
            uniforms,
            normals,
            next_uniform: 0,
            next_normal: 0,
        }
    }

    pub fn constant(u: f64) -> Self {
        Self::new(vec![u])
    }
}

impl DrawSource for ScriptedDraws {
    fn uniform(&mut self) -> f64 {
        let u = self.uniforms[self.next_uniform % self.uniforms.len()];
        self.next_uniform += 1;
        u
    }

    fn standard_normal(&mut self) -> f64 {
        if self.normals.is_empty() {
            let u1 = 1.0 - self.uniform();
            let u2 = self.uniform();
            return (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        }
        let z = self.normals[self.next_normal % self.normals.len()];
        self.next_normal += 1;
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_sequence() {
        let mut a = RandomSource::new(99);
        let mut b = RandomSource::new(99);
        for _ in 0..1000 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
        }
    }

    #[test]
    fn streams_differ() {
        let mut a = RandomSource::with_stream(5, 0);
        let mut b = RandomSource::with_stream(5, 1);
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn uniform_range_and_moments() {
        let mut rng = RandomSource::new(1);
        let n = 200_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let u = rng.uniform();
            assert!((0.0..1.0).contains(&u));
            sum += u;
        }
        assert!((sum / n as f64 - 0.5).abs() < 0.005);
    }

    #[test]
    fn normal_moments() {
        let mut rng = RandomSource::new(2);
        let n = 200_000;
        let zs: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
        let mean = zs.iter().sum::<f64>() / n as f64;
        let var = zs.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn uniform_in_and_index() {
        let mut rng = RandomSource::new(3);
        for _ in 0..10_000 {
            let v = rng.uniform_in(2.0, 4.0);
            assert!((2.0..4.0).contains(&v));
            assert!(rng.index(7) < 7);
        }
        let mut s = ScriptedDraws::new(vec![0.999_999_999_999]);
        assert_eq!(s.index(3), 2);
    }
}
