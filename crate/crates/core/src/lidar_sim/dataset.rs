//! Training dataset generation and the on-disk sample format.
//!
//! Layout: `<dir>/manifest.json` plus `<dir>/samples/NNNNNN.bin`. Each
//! sample file is little-endian: magic "MLSC", u32 version = 1, u32 point
//! count, 6 x f32 pose (x, y, z, roll, pitch, yaw), then count x 3 f32
//! sensor-frame points. Generation is parallel over samples with one RNG
//! stream per (seed, index), so output bytes are identical across runs.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use nalgebra::Point3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{DatasetGenConfig, PatternConfig, PreprocessConfig};
use crate::error::{Error, Result};
use crate::geometry::{Aabb, Bvh, TriangleMesh};
use crate::lidar_sim::{sample_training_pose, simulate_scan, simulate_scan_jittered, Pose};
use crate::preprocess::{filter_scan, subsample, PointCloud};
use crate::rng::{stream_rng2, derive_seed};

const MAGIC: &[u8; 4] = b"MLSC";
const VERSION: u32 = 1;
/// Pose re-draws per sample before giving up.
const SAMPLE_POSE_RETRIES: usize = 1000;

/// Dataset description stored beside the samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub version: u32,
    pub count: usize,
    pub seed: u64,
    pub mesh_path: String,
    pub pattern: PatternConfig,
    pub preprocess: PreprocessConfig,
    /// Normalization constants: scans divide by `max_ray_length`,
    /// positions normalize against `mesh_aabb`.
    pub max_ray_length: f64,
    pub mesh_aabb_min: [f64; 3],
    pub mesh_aabb_max: [f64; 3],
    pub generation: DatasetGenConfig,
}

impl DatasetManifest {
    pub fn mesh_aabb(&self) -> Aabb {
        Aabb {
            min: Point3::from(self.mesh_aabb_min),
            max: Point3::from(self.mesh_aabb_max),
        }
    }
}

/// Serialize one scan record.
pub fn write_scan_file(path: &Path, pose: &Pose, cloud: &PointCloud) -> Result<()> {
    let bytes = encode_scan(pose, cloud);
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn encode_scan(pose: &Pose, cloud: &PointCloud) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(4 + 4 + 4 + 24 + cloud.len() * 12);
    bytes.extend_from_slice(MAGIC);
    bytes.extend_from_slice(&VERSION.to_le_bytes());
    bytes.extend_from_slice(&(cloud.len() as u32).to_le_bytes());
    for v in [
        pose.position.x,
        pose.position.y,
        pose.position.z,
        pose.roll,
        pose.pitch,
        pose.yaw,
    ] {
        bytes.extend_from_slice(&(v as f32).to_le_bytes());
    }
    for p in &cloud.points {
        bytes.extend_from_slice(&p.x.to_le_bytes());
        bytes.extend_from_slice(&p.y.to_le_bytes());
        bytes.extend_from_slice(&p.z.to_le_bytes());
    }
    bytes
}

/// Read one scan record.
pub fn read_scan_file(path: &Path) -> Result<(Pose, PointCloud)> {
    let mut bytes = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|source| Error::Unreadable {
            path: path.display().to_string(),
            source,
        })?;
    decode_scan(&bytes, path)
}

fn decode_scan(bytes: &[u8], path: &Path) -> Result<(Pose, PointCloud)> {
    let malformed = |detail: &str| Error::MalformedRecord {
        path: path.display().to_string(),
        location: "header".into(),
        detail: detail.into(),
    };
    if bytes.len() < 36 || &bytes[0..4] != MAGIC {
        return Err(malformed("missing MLSC magic"));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(malformed(&format!("unsupported version {version}")));
    }
    let count = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let mut pose_vals = [0f32; 6];
    for (i, v) in pose_vals.iter_mut().enumerate() {
        let off = 12 + i * 4;
        *v = f32::from_le_bytes(bytes[off..off + 4].try_into().unwrap());
    }
    let data_off = 36;
    if bytes.len() != data_off + count * 12 {
        return Err(malformed(&format!(
            "expected {} bytes of points, found {}",
            count * 12,
            bytes.len() - data_off
        )));
    }
    let mut points = Vec::with_capacity(count);
    for i in 0..count {
        let off = data_off + i * 12;
        let x = f32::from_le_bytes(bytes[off..off + 4].try_into().unwrap());
        let y = f32::from_le_bytes(bytes[off + 4..off + 8].try_into().unwrap());
        let z = f32::from_le_bytes(bytes[off + 8..off + 12].try_into().unwrap());
        points.push(Point3::new(x, y, z));
    }
    let pose = Pose::new(
        Point3::new(pose_vals[0] as f64, pose_vals[1] as f64, pose_vals[2] as f64),
        pose_vals[3] as f64,
        pose_vals[4] as f64,
        pose_vals[5] as f64,
    );
    Ok((pose, PointCloud::new(points)))
}

fn sample_file_name(index: usize) -> String {
    format!("{index:06}.bin")
}

/// Draw one dataset sample on its own RNG stream: rejection-sample poses
/// until the filtered scan keeps at least `min_points` points.
fn draw_sample(
    bvh: &Bvh,
    mesh: &TriangleMesh,
    pattern: &crate::lidar_sim::ScanPattern,
    pre: &PreprocessConfig,
    gen: &DatasetGenConfig,
    index: usize,
) -> Result<(Pose, PointCloud)> {
    for attempt in 0..SAMPLE_POSE_RETRIES {
        let mut rng = stream_rng2(gen.seed, index as u64, attempt as u64);
        let pose = sample_training_pose(bvh, mesh, &mut rng, gen.clearance, gen.tilt_max_deg)?;
        let scan = if gen.jitter_sigma > 0.0 {
            simulate_scan_jittered(bvh, mesh, &pose, pattern, gen.jitter_sigma, &mut rng)
        } else {
            simulate_scan(bvh, mesh, &pose, pattern)
        };
        let filtered = filter_scan(
            &scan.cloud,
            pre.min_range,
            pattern.max_range,
            pre.back_slice_deg,
        );
        if filtered.len() < gen.min_points {
            continue;
        }
        let stored = match gen.store_subsample {
            Some(k) => subsample(&filtered, k, &mut rng)?,
            None => filtered,
        };
        return Ok((pose, stored));
    }
    Err(Error::RejectionBudget {
        attempts: SAMPLE_POSE_RETRIES,
    })
}

/// Generate `gen.count` synthetic scans into `out_dir`.
pub fn generate_dataset(
    mesh: &TriangleMesh,
    bvh: &Bvh,
    mesh_path: &str,
    pattern_cfg: &PatternConfig,
    pre: &PreprocessConfig,
    gen: &DatasetGenConfig,
    out_dir: &Path,
) -> Result<DatasetManifest> {
    let pattern = pattern_cfg.build()?;
    let samples_dir = out_dir.join("samples");
    fs::create_dir_all(&samples_dir).map_err(|source| Error::Io {
        path: samples_dir.display().to_string(),
        source,
    })?;

    let records: Vec<Result<(Pose, PointCloud)>> = (0..gen.count)
        .into_par_iter()
        .map(|i| draw_sample(bvh, mesh, &pattern, pre, gen, i))
        .collect();

    // Write sequentially in index order.
    for (i, rec) in records.iter().enumerate() {
        let (pose, cloud) = match rec {
            Ok(r) => r,
            Err(e) => {
                return Err(Error::InvalidArgument(format!(
                    "sample {i} failed: {e}"
                )))
            }
        };
        write_scan_file(&samples_dir.join(sample_file_name(i)), pose, cloud)?;
    }

    let manifest = DatasetManifest {
        version: VERSION,
        count: gen.count,
        seed: gen.seed,
        mesh_path: mesh_path.to_string(),
        pattern: pattern_cfg.clone(),
        preprocess: pre.clone(),
        max_ray_length: pattern_cfg.max_range,
        mesh_aabb_min: [mesh.aabb.min.x, mesh.aabb.min.y, mesh.aabb.min.z],
        mesh_aabb_max: [mesh.aabb.max.x, mesh.aabb.max.y, mesh.aabb.max.z],
        generation: gen.clone(),
    };
    let manifest_path = out_dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest)?;
    fs::write(&manifest_path, json).map_err(|source| Error::Io {
        path: manifest_path.display().to_string(),
        source,
    })?;
    Ok(manifest)
}

/// In-memory dataset.
#[derive(Debug)]
pub struct Dataset {
    pub manifest: DatasetManifest,
    pub poses: Vec<Pose>,
    pub clouds: Vec<PointCloud>,
    pub dir: PathBuf,
}

impl Dataset {
    /// Load a dataset directory written by [`generate_dataset`].
    pub fn load(dir: &Path) -> Result<Dataset> {
        let manifest_path = dir.join("manifest.json");
        let text = fs::read_to_string(&manifest_path).map_err(|source| Error::Unreadable {
            path: manifest_path.display().to_string(),
            source,
        })?;
        let manifest: DatasetManifest = serde_json::from_str(&text)?;
        let mut poses = Vec::with_capacity(manifest.count);
        let mut clouds = Vec::with_capacity(manifest.count);
        for i in 0..manifest.count {
            let (pose, cloud) = read_scan_file(&dir.join("samples").join(sample_file_name(i)))?;
            poses.push(pose);
            clouds.push(cloud);
        }
        Ok(Dataset {
            manifest,
            poses,
            clouds,
            dir: dir.to_path_buf(),
        })
    }

    pub fn len(&self) -> usize {
        self.poses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poses.is_empty()
    }
}

/// Derive the evaluation seed space from a training seed; keeps held-out
/// scans disjoint from training by construction.
pub fn eval_seed(train_seed: u64) -> u64 {
    derive_seed(train_seed, 0xE7A1_0551)
}
