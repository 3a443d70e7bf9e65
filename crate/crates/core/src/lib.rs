//! Global LiDAR localization inside a known triangle mesh.
//!
//! The pipeline trains a conditional denoising-diffusion position regressor
//! purely on synthetic ray-cast scans, samples multi-modal position
//! candidates from a single scan, and selects/refines the best candidate
//! with fast global registration. Scan Context retrieval and exhaustive
//! grid registration are included as baselines, along with evaluation
//! tooling and a localizability-variance map.
//!
//! Module layout mirrors the processing stages:
//!
//! - [`geometry`]: mesh loading, BVH construction, ray queries
//! - [`lidar_sim`]: scan patterns, pose sampling, scan synthesis, datasets,
//!   procedural floorplan meshes
//! - [`preprocess`]: deterministic cloud cleanup and normalization
//! - [`nn`]: minimal neural substrate (tensors, layers, exact gradients, Adam)
//! - [`diffusion`]: noise schedule, training loop, reverse sampler
//! - [`registration`]: FPFH + fast global registration, candidate selection
//! - [`baselines`]: Scan Context and grid registration
//! - [`eval`]: metrics, trajectory evaluation, studies, throughput

pub mod baselines;
pub mod config;
pub mod diffusion;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod lidar_sim;
pub mod nn;
pub mod preprocess;
pub mod registration;
pub mod rng;

pub use config::PipelineConfig;
pub use error::{Error, Result};
