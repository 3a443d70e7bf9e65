//! 6-DoF poses and scan synthesis by ray casting.

use nalgebra::{Point3, Rotation3};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::{point_in_free_space, raycast, Bvh, Ray, TriangleMesh};
use crate::lidar_sim::ScanPattern;
use crate::preprocess::PointCloud;

/// Sensor pose: position in meters, intrinsic Z-Y-X Euler angles in
/// radians (rotation = Rz(yaw) * Ry(pitch) * Rx(roll)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub position: Point3<f64>,
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
}

impl Pose {
    pub fn new(position: Point3<f64>, roll: f64, pitch: f64, yaw: f64) -> Self {
        Pose {
            position,
            roll,
            pitch,
            yaw,
        }
    }

    /// Position with identity orientation.
    pub fn at(position: Point3<f64>) -> Self {
        Pose::new(position, 0.0, 0.0, 0.0)
    }

    pub fn rotation(&self) -> Rotation3<f64> {
        Rotation3::from_euler_angles(self.roll, self.pitch, self.yaw)
    }
}

/// Simulated scan: ground-truth pose plus the sensor-frame cloud.
#[derive(Debug, Clone)]
pub struct SimScan {
    pub pose: Pose,
    pub cloud: PointCloud,
}

/// Rejection-sampling attempt budget for pose sampling.
const POSE_BUDGET: usize = 100_000;

/// Uniform valid training pose: position uniform over free space (rejection
/// sampling in the mesh box with the clearance test), yaw uniform over
/// [0, 2pi), roll and pitch uniform over +-tilt_max.
pub fn sample_training_pose(
    bvh: &Bvh,
    mesh: &TriangleMesh,
    rng: &mut impl Rng,
    clearance: f64,
    tilt_max_deg: f64,
) -> Result<Pose> {
    let aabb = &mesh.aabb;
    let mut position = None;
    for _ in 0..POSE_BUDGET {
        let p = Point3::new(
            rng.gen_range(aabb.min.x..=aabb.max.x),
            rng.gen_range(aabb.min.y..=aabb.max.y),
            rng.gen_range(aabb.min.z..=aabb.max.z),
        );
        if point_in_free_space(bvh, mesh, &p, clearance) {
            position = Some(p);
            break;
        }
    }
    let position = position.ok_or(Error::RejectionBudget {
        attempts: POSE_BUDGET,
    })?;
    let tilt = tilt_max_deg.to_radians();
    let yaw = rng.gen_range(0.0..std::f64::consts::TAU);
    let roll = rng.gen_range(-tilt..=tilt);
    let pitch = rng.gen_range(-tilt..=tilt);
    Ok(Pose::new(position, roll, pitch, yaw))
}

/// Cast one ray per beam from the posed sensor; hits are returned in the
/// sensor frame, missed beams are omitted, and point order follows beam
/// order.
pub fn simulate_scan(bvh: &Bvh, mesh: &TriangleMesh, pose: &Pose, pattern: &ScanPattern) -> SimScan {
    simulate_scan_impl(bvh, mesh, pose, pattern, None)
}

/// [`simulate_scan`] with Gaussian range jitter of the given sigma (meters).
pub fn simulate_scan_jittered(
    bvh: &Bvh,
    mesh: &TriangleMesh,
    pose: &Pose,
    pattern: &ScanPattern,
    sigma: f64,
    rng: &mut impl Rng,
) -> SimScan {
    simulate_scan_impl(bvh, mesh, pose, pattern, Some((sigma, rng)))
}

fn simulate_scan_impl(
    bvh: &Bvh,
    mesh: &TriangleMesh,
    pose: &Pose,
    pattern: &ScanPattern,
    mut jitter: Option<(f64, &mut dyn rand::RngCore)>,
) -> SimScan {
    let rot = pose.rotation();
    let inv = rot.inverse();
    let mut points = Vec::with_capacity(pattern.beams.len());
    for beam in &pattern.beams {
        let ray = Ray {
            origin: pose.position,
            direction: rot * beam,
        };
        if let Some(hit) = raycast(bvh, mesh, &ray, pattern.max_range) {
            let distance = match &mut jitter {
                Some((sigma, rng)) if *sigma > 0.0 => {
                    let z: f64 = rng.sample(StandardNormal);
                    (hit.distance + *sigma * z).max(0.0)
                }
                _ => hit.distance,
            };
            // Jitter moves the point along the beam, staying in range.
            let p_world = ray.origin + ray.direction * distance.min(pattern.max_range);
            let p_sensor = inv * (p_world - pose.position);
            points.push(Point3::new(
                p_sensor.x as f32,
                p_sensor.y as f32,
                p_sensor.z as f32,
            ));
        }
    }
    SimScan {
        pose: *pose,
        cloud: PointCloud::new(points),
    }
}
