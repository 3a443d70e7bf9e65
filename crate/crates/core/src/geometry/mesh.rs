use nalgebra::{Point3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Point3<f64>,
    pub max: Point3<f64>,
}

impl Aabb {
    /// Empty box: grows to contain whatever is merged in.
    pub fn empty() -> Self {
        Aabb {
            min: Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY),
            max: Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Point3<f64>>) -> Self {
        let mut b = Aabb::empty();
        for p in points {
            b.grow(p);
        }
        b
    }

    pub fn grow(&mut self, p: &Point3<f64>) {
        for i in 0..3 {
            self.min[i] = self.min[i].min(p[i]);
            self.max[i] = self.max[i].max(p[i]);
        }
    }

    pub fn merge(&mut self, other: &Aabb) {
        for i in 0..3 {
            self.min[i] = self.min[i].min(other.min[i]);
            self.max[i] = self.max[i].max(other.max[i]);
        }
    }

    pub fn contains(&self, p: &Point3<f64>) -> bool {
        (0..3).all(|i| p[i] >= self.min[i] && p[i] <= self.max[i])
    }

    /// Contains with tolerance, for nested containment checks.
    pub fn contains_aabb(&self, other: &Aabb, tol: f64) -> bool {
        (0..3).all(|i| other.min[i] >= self.min[i] - tol && other.max[i] <= self.max[i] + tol)
    }

    pub fn center(&self) -> Point3<f64> {
        Point3::from((self.min.coords + self.max.coords) * 0.5)
    }

    pub fn extent(&self) -> Vector3<f64> {
        self.max - self.min
    }

    /// Full diagonal length.
    pub fn diagonal(&self) -> f64 {
        self.extent().norm()
    }

    pub fn surface_area(&self) -> f64 {
        let e = self.extent();
        if e.x < 0.0 || e.y < 0.0 || e.z < 0.0 {
            return 0.0;
        }
        2.0 * (e.x * e.y + e.y * e.z + e.z * e.x)
    }

    /// Slab test. Returns entry/exit distances if the ray intersects
    /// [t_min, t_max] of the box.
    pub fn ray_intersect(
        &self,
        origin: &Point3<f64>,
        inv_dir: &Vector3<f64>,
        t_max: f64,
    ) -> Option<(f64, f64)> {
        let mut t0 = 0.0_f64;
        let mut t1 = t_max;
        for i in 0..3 {
            let a = (self.min[i] - origin[i]) * inv_dir[i];
            let b = (self.max[i] - origin[i]) * inv_dir[i];
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            t0 = t0.max(lo);
            t1 = t1.min(hi);
            if t0 > t1 {
                return None;
            }
        }
        Some((t0, t1))
    }
}

/// Indexed triangle mesh in meters.
///
/// Vertex and triangle order are preserved exactly as loaded; the bounding
/// box is derived on construction.
#[derive(Debug, Clone)]
pub struct TriangleMesh {
    pub vertices: Vec<Point3<f64>>,
    pub triangles: Vec<[u32; 3]>,
    pub aabb: Aabb,
}

impl TriangleMesh {
    /// Build a mesh, validating indices and coordinate finiteness.
    pub fn new(vertices: Vec<Point3<f64>>, triangles: Vec<[u32; 3]>) -> Result<Self> {
        for (vi, v) in vertices.iter().enumerate() {
            if !(v.x.is_finite() && v.y.is_finite() && v.z.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "non-finite vertex coordinate at index {vi}"
                )));
            }
        }
        let n = vertices.len();
        for tri in &triangles {
            for &idx in tri {
                if idx as usize >= n {
                    return Err(Error::IndexOutOfRange {
                        path: "<memory>".into(),
                        index: idx as usize,
                        count: n,
                    });
                }
            }
        }
        let aabb = Aabb::from_points(vertices.iter());
        Ok(TriangleMesh {
            vertices,
            triangles,
            aabb,
        })
    }

    pub fn triangle_vertices(&self, t: usize) -> [Point3<f64>; 3] {
        let [a, b, c] = self.triangles[t];
        [
            self.vertices[a as usize],
            self.vertices[b as usize],
            self.vertices[c as usize],
        ]
    }

    pub fn triangle_aabb(&self, t: usize) -> Aabb {
        let vs = self.triangle_vertices(t);
        Aabb::from_points(vs.iter())
    }

    pub fn triangle_centroid(&self, t: usize) -> Point3<f64> {
        let [a, b, c] = self.triangle_vertices(t);
        Point3::from((a.coords + b.coords + c.coords) / 3.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aabb_contains_all_vertices_exactly() {
        let verts = vec![
            Point3::new(-1.0, 2.0, 0.5),
            Point3::new(3.0, -4.0, 1.5),
            Point3::new(0.0, 0.0, 9.0),
        ];
        let mesh = TriangleMesh::new(verts.clone(), vec![[0, 1, 2]]).unwrap();
        assert_eq!(mesh.aabb.min, Point3::new(-1.0, -4.0, 0.5));
        assert_eq!(mesh.aabb.max, Point3::new(3.0, 2.0, 9.0));
        for v in &verts {
            assert!(mesh.aabb.contains(v));
        }
    }

    #[test]
    fn out_of_range_index_rejected() {
        let verts = vec![Point3::new(0.0, 0.0, 0.0); 3];
        let err = TriangleMesh::new(verts, vec![[0, 1, 3]]).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { index: 3, .. }));
    }

    #[test]
    fn non_finite_vertex_rejected() {
        let verts = vec![Point3::new(0.0, f64::NAN, 0.0)];
        assert!(TriangleMesh::new(verts, vec![]).is_err());
    }

    #[test]
    fn aabb_slab_test_hits_box() {
        let b = Aabb {
            min: Point3::new(-1.0, -1.0, -1.0),
            max: Point3::new(1.0, 1.0, 1.0),
        };
        let origin = Point3::new(-5.0, 0.0, 0.0);
        let inv = Vector3::new(1.0, f64::INFINITY, f64::INFINITY);
        let (t0, t1) = b.ray_intersect(&origin, &inv, 100.0).unwrap();
        assert!((t0 - 4.0).abs() < 1e-12);
        assert!((t1 - 6.0).abs() < 1e-12);
        let miss_origin = Point3::new(-5.0, 3.0, 0.0);
        assert!(b.ray_intersect(&miss_origin, &inv, 100.0).is_none());
    }
}
