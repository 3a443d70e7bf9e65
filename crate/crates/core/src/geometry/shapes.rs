//! Primitive mesh constructors.

use nalgebra::Point3;

use crate::geometry::TriangleMesh;

/// Closed axis-aligned box shell between `min` and `max` (12 triangles,
/// outward winding).
pub fn box_mesh(min: Point3<f64>, max: Point3<f64>) -> TriangleMesh {
    let (vertices, triangles) = box_arrays(min, max, 0);
    TriangleMesh::new(vertices, triangles).expect("box mesh is always valid")
}

/// Vertex/triangle arrays for a box, with indices offset by `base` so
/// multiple boxes can be concatenated into one mesh.
pub fn box_arrays(
    min: Point3<f64>,
    max: Point3<f64>,
    base: u32,
) -> (Vec<Point3<f64>>, Vec<[u32; 3]>) {
    let v = vec![
        Point3::new(min.x, min.y, min.z), // 0
        Point3::new(max.x, min.y, min.z), // 1
        Point3::new(max.x, max.y, min.z), // 2
        Point3::new(min.x, max.y, min.z), // 3
        Point3::new(min.x, min.y, max.z), // 4
        Point3::new(max.x, min.y, max.z), // 5
        Point3::new(max.x, max.y, max.z), // 6
        Point3::new(min.x, max.y, max.z), // 7
    ];
    let quads: [[u32; 4]; 6] = [
        [0, 3, 2, 1], // bottom (z-)
        [4, 5, 6, 7], // top (z+)
        [0, 1, 5, 4], // y-
        [2, 3, 7, 6], // y+
        [0, 4, 7, 3], // x-
        [1, 2, 6, 5], // x+
    ];
    let mut tris = Vec::with_capacity(12);
    for q in quads {
        tris.push([base + q[0], base + q[1], base + q[2]]);
        tris.push([base + q[0], base + q[2], base + q[3]]);
    }
    (v, tris)
}

/// Unit cube centered at the origin.
pub fn unit_cube() -> TriangleMesh {
    box_mesh(Point3::new(-0.5, -0.5, -0.5), Point3::new(0.5, 0.5, 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_cube_has_8_vertices_12_triangles() {
        let m = unit_cube();
        assert_eq!(m.vertices.len(), 8);
        assert_eq!(m.triangles.len(), 12);
        assert_eq!(m.aabb.min, Point3::new(-0.5, -0.5, -0.5));
        assert_eq!(m.aabb.max, Point3::new(0.5, 0.5, 0.5));
    }
}
