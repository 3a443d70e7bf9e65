//! Sinusoidal step embedding.

use crate::nn::{real, Real};

/// Embed a step index: component 2i = sin(t / 10000^(2i/dim)),
/// component 2i+1 = cos of the same argument. `dim` must be even.
pub fn sinusoidal_embedding<F: Real>(t: usize, dim: usize) -> Vec<F> {
    assert!(dim % 2 == 0, "embedding dimension must be even");
    let mut out = vec![F::zero(); dim];
    let t = t as f64;
    for i in 0..dim / 2 {
        let freq = 10000f64.powf(2.0 * i as f64 / dim as f64);
        let arg = t / freq;
        out[2 * i] = real(arg.sin());
        out[2 * i + 1] = real(arg.cos());
    }
    out
}
