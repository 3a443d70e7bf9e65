//! Minimal neural-network substrate.
//!
//! Dense tensors, the layers needed by the position regressor (linear,
//! layer norm, multi-head self-attention, set abstraction), exact
//! reverse-mode gradients written by hand per layer, and Adam. Training
//! runs in f32; gradient tests instantiate everything in f64.
//!
//! Forward passes are bitwise deterministic for fixed weights and inputs
//! on a single thread; batch parallelism reduces gradients in fixed index
//! order so multi-threaded training is deterministic too.

pub mod adam;
pub mod attention;
pub mod checkpoint;
pub mod embedding;
pub mod gradcheck;
pub mod layers;
pub mod pointnet;
pub mod regressor;
pub mod tensor;

pub use adam::{adam_step, AdamHyper, AdamState};
pub use attention::{EncoderLayer, MultiHeadAttention};
pub use checkpoint::{load_checkpoint, save_checkpoint, CheckpointHeader, LoadedModel, ModelKind};
pub use embedding::sinusoidal_embedding;
pub use layers::{LayerNorm, Linear};
pub use pointnet::{FeatureCache, FeatureExtractorParams};
pub use regressor::{DenoiserParams, DiffusionModel, RegressionHeadParams, RegressionModel};
pub use tensor::Tensor;

/// Scalar type for network math.
pub trait Real:
    num_traits::Float
    + std::fmt::Debug
    + std::fmt::Display
    + Default
    + Send
    + Sync
    + std::iter::Sum
    + 'static
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
}

impl Real for f32 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
}

/// Shorthand for converting an f64 constant into the network scalar.
#[inline]
pub fn real<F: Real>(x: f64) -> F {
    F::from_f64(x)
}
