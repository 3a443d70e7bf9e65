//! Triangle meshes, BVH acceleration, and exact ray queries.
//!
//! All geometry here is 64-bit; downstream point clouds are stored in
//! 32-bit. Meshes and BVHs are immutable after construction, so read-only
//! queries are safe from any number of threads.

mod bvh;
mod io;
mod mesh;
mod raycast;
pub mod shapes;

pub use bvh::{build_bvh, build_bvh_with_leaf_size, Bvh, BvhNode};
pub use io::{load_mesh, save_mesh};
pub use mesh::{Aabb, TriangleMesh};
pub use raycast::{point_in_free_space, raycast, raycast_with_visits, Hit, Ray};
