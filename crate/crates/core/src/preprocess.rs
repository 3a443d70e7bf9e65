//! Deterministic point-cloud cleanup and normalization.
//!
//! Applied identically to simulated and real scans before the model:
//! range/back-slice filtering, range normalization, fixed-size subsampling,
//! and position-label normalization.

use nalgebra::{Point3, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Aabb;

/// Sensor-frame point cloud, stored in 32-bit.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Point3<f32>>,
}

impl PointCloud {
    pub fn new(points: Vec<Point3<f32>>) -> Self {
        PointCloud { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Range-normalized cloud; `scale` is the divisor in meters.
#[derive(Debug, Clone)]
pub struct NormalizedCloud {
    pub points: Vec<Point3<f32>>,
    pub scale: f64,
}

impl NormalizedCloud {
    /// Undo the range normalization.
    pub fn denormalize(&self) -> PointCloud {
        let s = self.scale as f32;
        PointCloud::new(self.points.iter().map(|p| p * s).collect())
    }
}

/// Remove points closer than `min_range`, farther than `max_range`, and
/// points whose azimuth falls in the `back_slice_deg` wedge centered on -x
/// (the sensor rear). Survivor order is preserved.
pub fn filter_scan(
    cloud: &PointCloud,
    min_range: f64,
    max_range: f64,
    back_slice_deg: f64,
) -> PointCloud {
    debug_assert!(min_range >= 0.0 && min_range < max_range);
    debug_assert!((0.0..360.0).contains(&back_slice_deg));
    let half_wedge = back_slice_deg.to_radians() / 2.0;
    let points = cloud
        .points
        .iter()
        .filter(|p| {
            let (x, y, z) = (p.x as f64, p.y as f64, p.z as f64);
            let range = (x * x + y * y + z * z).sqrt();
            if range < min_range || range > max_range {
                return false;
            }
            if back_slice_deg > 0.0 {
                // Angular distance from the -x axis.
                let az = y.atan2(x);
                let from_rear = std::f64::consts::PI - az.abs();
                if from_rear <= half_wedge {
                    return false;
                }
            }
            true
        })
        .copied()
        .collect();
    PointCloud::new(points)
}

/// Divide every point by the maximal possible ray length, preserving
/// relative geometry.
pub fn normalize(cloud: &PointCloud, max_ray_length: f64) -> NormalizedCloud {
    debug_assert!(max_ray_length > 0.0);
    let inv = (1.0 / max_ray_length) as f32;
    NormalizedCloud {
        points: cloud.points.iter().map(|p| p * inv).collect(),
        scale: max_ray_length,
    }
}

/// Resample a cloud to exactly `n` points: a uniform sample without
/// replacement when the cloud is large enough, otherwise all points plus
/// uniform resampling with replacement.
pub fn subsample(cloud: &PointCloud, n: usize, rng: &mut impl Rng) -> Result<PointCloud> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    debug_assert!(n >= 1);
    let len = cloud.len();
    let mut out = Vec::with_capacity(n);
    if len >= n {
        for idx in rand::seq::index::sample(rng, len, n) {
            out.push(cloud.points[idx]);
        }
    } else {
        out.extend_from_slice(&cloud.points);
        for _ in len..n {
            out.push(cloud.points[rng.gen_range(0..len)]);
        }
    }
    Ok(PointCloud::new(out))
}

/// Maps positions to dimensionless labels centered on the mesh bounding box
/// and scaled by half its diagonal, and back.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PositionNormalizer {
    pub center: Point3<f64>,
    pub half_diagonal: f64,
}

impl PositionNormalizer {
    pub fn from_aabb(aabb: &Aabb) -> Self {
        PositionNormalizer {
            center: aabb.center(),
            half_diagonal: aabb.diagonal() / 2.0,
        }
    }

    pub fn normalize(&self, x: &Point3<f64>) -> Vector3<f64> {
        (x - self.center) / self.half_diagonal
    }

    pub fn denormalize(&self, label: &Vector3<f64>) -> Point3<f64> {
        self.center + label * self.half_diagonal
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt(x: f32, y: f32, z: f32) -> Point3<f32> {
        Point3::new(x, y, z)
    }

    #[test]
    fn back_slice_removes_rear_keeps_front() {
        let cloud = PointCloud::new(vec![pt(-5.0, 0.0, 0.0), pt(5.0, 0.0, 0.0)]);
        let out = filter_scan(&cloud, 0.0, 100.0, 90.0);
        assert_eq!(out.points, vec![pt(5.0, 0.0, 0.0)]);
    }

    #[test]
    fn no_op_parameters_are_identity() {
        let cloud = PointCloud::new(vec![pt(1.0, 2.0, 3.0), pt(-4.0, 0.1, 0.0)]);
        let out = filter_scan(&cloud, 0.0, f64::INFINITY, 0.0);
        assert_eq!(out.points, cloud.points);
    }

    /// DERIVED: uniform ring of 360 points, 90 degree wedge removes 90.
    #[test]
    fn uniform_ring_loses_quarter() {
        let points: Vec<_> = (0..360)
            .map(|d| {
                // Offset to keep samples off the wedge boundary.
                let a = (d as f64 + 0.5).to_radians();
                pt(a.cos() as f32 * 3.0, a.sin() as f32 * 3.0, 0.0)
            })
            .collect();
        let out = filter_scan(&PointCloud::new(points), 0.0, 100.0, 90.0);
        assert_eq!(out.len(), 270);
    }

    #[test]
    fn min_range_cut_is_strict() {
        let cloud = PointCloud::new(vec![pt(0.3, 0.0, 0.0), pt(0.5, 0.0, 0.0)]);
        let out = filter_scan(&cloud, 0.5, 100.0, 0.0);
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn normalize_scales_to_unit() {
        let cloud = PointCloud::new(vec![pt(30.0, 0.0, 0.0)]);
        let norm = normalize(&cloud, 30.0);
        assert_eq!(norm.points[0], pt(1.0, 0.0, 0.0));
        assert_eq!(norm.scale, 30.0);
    }

    #[test]
    fn normalize_roundtrip() {
        let cloud = PointCloud::new(vec![pt(3.0, -7.5, 1.25), pt(0.1, 0.2, 0.3)]);
        let back = normalize(&cloud, 30.0).denormalize();
        for (a, b) in cloud.points.iter().zip(&back.points) {
            assert!((a - b).norm() < 1e-6);
        }
    }

    /// DERIVED: pairwise distance ratios are preserved by normalization.
    #[test]
    fn normalize_preserves_distance_ratios() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let points: Vec<_> = (0..20)
            .map(|_| {
                pt(
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-2.0..2.0),
                )
            })
            .collect();
        let cloud = PointCloud::new(points);
        let norm = normalize(&cloud, 25.0);
        let d = |ps: &[Point3<f32>], i: usize, j: usize| (ps[i] - ps[j]).norm() as f64;
        let r_orig = d(&cloud.points, 0, 1) / d(&cloud.points, 2, 3);
        let r_norm = d(&norm.points, 0, 1) / d(&norm.points, 2, 3);
        assert!((r_orig - r_norm).abs() < 1e-6 * r_orig.abs().max(1.0));
    }

    #[test]
    fn subsample_large_cloud_distinct_indices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let points: Vec<_> = (0..10_000).map(|i| pt(i as f32, 0.0, 0.0)).collect();
        let out = subsample(&PointCloud::new(points), 4096, &mut rng).unwrap();
        assert_eq!(out.len(), 4096);
        let mut xs: Vec<i64> = out.points.iter().map(|p| p.x as i64).collect();
        xs.sort_unstable();
        xs.dedup();
        assert_eq!(xs.len(), 4096, "sampling without replacement");
    }

    #[test]
    fn subsample_exact_size_is_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let points: Vec<_> = (0..4096).map(|i| pt(i as f32, 1.0, 2.0)).collect();
        let cloud = PointCloud::new(points);
        let out = subsample(&cloud, 4096, &mut rng).unwrap();
        let mut orig: Vec<i64> = cloud.points.iter().map(|p| p.x as i64).collect();
        let mut got: Vec<i64> = out.points.iter().map(|p| p.x as i64).collect();
        orig.sort_unstable();
        got.sort_unstable();
        assert_eq!(orig, got);
    }

    /// DERIVED: upsampling keeps every original point at least once.
    #[test]
    fn subsample_small_cloud_keeps_all_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let points: Vec<_> = (0..1000).map(|i| pt(i as f32, -1.0, 0.5)).collect();
        let out = subsample(&PointCloud::new(points.clone()), 4096, &mut rng).unwrap();
        assert_eq!(out.len(), 4096);
        let got: std::collections::HashSet<i64> =
            out.points.iter().map(|p| p.x as i64).collect();
        for p in &points {
            assert!(got.contains(&(p.x as i64)));
        }
    }

    #[test]
    fn subsample_empty_cloud_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        assert!(matches!(
            subsample(&PointCloud::default(), 10, &mut rng),
            Err(Error::EmptyCloud)
        ));
    }

    #[test]
    fn position_normalizer_center_and_corner() {
        let aabb = Aabb {
            min: Point3::new(0.0, 0.0, 0.0),
            max: Point3::new(10.0, 6.0, 4.0),
        };
        let n = PositionNormalizer::from_aabb(&aabb);
        assert!(n.normalize(&aabb.center()).norm() < 1e-12);
        assert!((n.normalize(&aabb.max).norm() - 1.0).abs() < 1e-12);
        assert!((n.normalize(&aabb.min).norm() - 1.0).abs() < 1e-12);
    }

    /// DERIVED: round trip on random points.
    #[test]
    fn position_normalizer_roundtrip() {
        let aabb = Aabb {
            min: Point3::new(-3.0, 2.0, 0.0),
            max: Point3::new(9.0, 14.0, 3.0),
        };
        let n = PositionNormalizer::from_aabb(&aabb);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let p = Point3::new(
                rng.gen_range(-5.0..10.0),
                rng.gen_range(0.0..15.0),
                rng.gen_range(0.0..3.0),
            );
            let back = n.denormalize(&n.normalize(&p));
            assert!((back - p).norm() < 1e-9);
        }
    }

    /// With no back slice the pipeline commutes with a yaw rotation
    /// (same subsample seed picks the same indices); with a back slice the
    /// wedge membership changes and it does not.
    #[test]
    fn pipeline_commutes_with_yaw_only_without_back_slice() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let points: Vec<_> = (0..500)
            .map(|_| {
                pt(
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-2.0..2.0),
                )
            })
            .collect();
        let cloud = PointCloud::new(points);
        let yaw = 0.7f32;
        let rot = nalgebra::Rotation3::from_euler_angles(0.0, 0.0, yaw);
        let rotated = PointCloud::new(cloud.points.iter().map(|p| rot * p).collect());

        let pipeline = |c: &PointCloud, slice: f64| {
            let f = filter_scan(c, 0.5, 12.0, slice);
            let n = normalize(&f, 12.0);
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            subsample(&PointCloud::new(n.points), 64, &mut rng).unwrap()
        };

        // back_slice = 0: rotate-then-process equals process-then-rotate.
        let a = pipeline(&rotated, 0.0);
        let b = pipeline(&cloud, 0.0);
        for (pa, pb) in a.points.iter().zip(&b.points) {
            assert!((pa - rot * pb).norm() < 1e-5);
        }

        // back_slice = 90: survivor sets differ, pipeline cannot commute.
        let a = pipeline(&rotated, 90.0);
        let b = pipeline(&cloud, 90.0);
        let differs = a
            .points
            .iter()
            .zip(&b.points)
            .any(|(pa, pb)| (pa - rot * pb).norm() > 1e-3);
        assert!(differs);
    }
}
