//! LiDAR scan patterns, pose sampling, scan synthesis, and dataset output.
//!
//! Scan simulation is embarrassingly parallel over samples; every sample
//! derives its own RNG stream from (seed, sample index), so datasets are
//! byte-identical across runs at any thread count.

pub mod dataset;
pub mod floorplan;
mod pattern;
mod scan;

pub use dataset::{
    eval_seed, generate_dataset, read_scan_file, write_scan_file, Dataset, DatasetManifest,
};
pub use pattern::{make_spinning_pattern, ScanPattern};
pub use scan::{sample_training_pose, simulate_scan, simulate_scan_jittered, Pose, SimScan};
