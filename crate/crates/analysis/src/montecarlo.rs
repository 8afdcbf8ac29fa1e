//! Sampling cross-check for the LWE convolution.

use kcx_core::kc::dist_mod;
use kcx_core::noise::NoiseDist;
use rand::Rng;

/// Failure count over independent draws of one LWE coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tally {
    pub failures: u64,
    pub draws: u64,
}

impl Tally {
    pub fn rate(&self) -> f64 {
        self.failures as f64 / self.draws as f64
    }

    /// Binomial standard error around `p`.
    pub fn std_err(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.draws as f64).sqrt()
    }
}

/// Draws X1ᵀ(E2 + ε) − E1ᵀX2 − Eσ with fresh noise each time, where ε comes
/// from cutting t bits off a uniform value, and counts |·|_q > d.
pub fn lwe_failures<R: Rng + ?Sized>(
    n: usize,
    q: u32,
    t: u32,
    d: u64,
    noise: &NoiseDist,
    draws: u64,
    rng: &mut R,
) -> Tally {
    let s = noise.sampler();
    let mask = (1u32 << t) - 1;
    let half = if t == 0 { 0 } else { 1i64 << (t - 1) };
    let mut failures = 0;
    for _ in 0..draws {
        let mut w = 0i64;
        for _ in 0..n {
            let y: u32 = rng.gen_range(0..q);
            let eps = if t == 0 { 0 } else { half - (y & mask) as i64 };
            w += s.sample(rng) * (s.sample(rng) + eps);
            w -= s.sample(rng) * s.sample(rng);
        }
        w -= s.sample(rng);
        if dist_mod(w, q as u64).expect("q > 0") > d {
            failures += 1;
        }
    }
    Tally { failures, draws }
}
