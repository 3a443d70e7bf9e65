//! Bounding volume hierarchy over mesh triangles.
//!
//! Binned surface-area-heuristic builder (16 bins per axis) with a median
//! split fallback when SAH degenerates. Construction is single-threaded and
//! deterministic; traversal is read-only and thread-safe.

use crate::error::{Error, Result};
use crate::geometry::mesh::{Aabb, TriangleMesh};

const SAH_BINS: usize = 16;

/// Flat BVH node. Children are indices into `Bvh::nodes`; leaves reference
/// a contiguous range of `Bvh::triangle_order`.
#[derive(Debug, Clone)]
pub enum BvhNode {
    Inner {
        aabb: Aabb,
        left: u32,
        right: u32,
    },
    Leaf {
        aabb: Aabb,
        /// Range into the triangle order permutation.
        start: u32,
        count: u32,
    },
}

impl BvhNode {
    pub fn aabb(&self) -> &Aabb {
        match self {
            BvhNode::Inner { aabb, .. } => aabb,
            BvhNode::Leaf { aabb, .. } => aabb,
        }
    }
}

/// Acceleration structure for ray-mesh queries. Immutable once built.
#[derive(Debug, Clone)]
pub struct Bvh {
    pub nodes: Vec<BvhNode>,
    /// Permutation of triangle ids; leaves index into this.
    pub triangle_order: Vec<u32>,
    pub max_leaf_size: usize,
}

/// Build a BVH with the default leaf size (4 triangles).
pub fn build_bvh(mesh: &TriangleMesh) -> Result<Bvh> {
    build_bvh_with_leaf_size(mesh, 4)
}

pub fn build_bvh_with_leaf_size(mesh: &TriangleMesh, max_leaf_size: usize) -> Result<Bvh> {
    if mesh.triangles.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let max_leaf_size = max_leaf_size.max(1);
    let n = mesh.triangles.len();
    let tri_aabbs: Vec<Aabb> = (0..n).map(|t| mesh.triangle_aabb(t)).collect();
    let centroids: Vec<[f64; 3]> = (0..n)
        .map(|t| {
            let c = mesh.triangle_centroid(t);
            [c.x, c.y, c.z]
        })
        .collect();
    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut nodes = Vec::with_capacity(2 * n);
    build_node(
        &tri_aabbs,
        &centroids,
        &mut order,
        0,
        n,
        max_leaf_size,
        &mut nodes,
    );
    Ok(Bvh {
        nodes,
        triangle_order: order,
        max_leaf_size,
    })
}

fn range_aabb(tri_aabbs: &[Aabb], order: &[u32], start: usize, end: usize) -> Aabb {
    let mut b = Aabb::empty();
    for &t in &order[start..end] {
        b.merge(&tri_aabbs[t as usize]);
    }
    b
}

/// Recursively build the subtree for order[start..end]; returns node index.
fn build_node(
    tri_aabbs: &[Aabb],
    centroids: &[[f64; 3]],
    order: &mut [u32],
    start: usize,
    end: usize,
    max_leaf: usize,
    nodes: &mut Vec<BvhNode>,
) -> u32 {
    let aabb = range_aabb(tri_aabbs, order, start, end);
    let count = end - start;
    if count <= max_leaf {
        let idx = nodes.len() as u32;
        nodes.push(BvhNode::Leaf {
            aabb,
            start: start as u32,
            count: count as u32,
        });
        return idx;
    }

    // Centroid bounds drive the binning.
    let mut cb_min = [f64::INFINITY; 3];
    let mut cb_max = [f64::NEG_INFINITY; 3];
    for &t in &order[start..end] {
        for a in 0..3 {
            let c = centroids[t as usize][a];
            cb_min[a] = cb_min[a].min(c);
            cb_max[a] = cb_max[a].max(c);
        }
    }

    let mut best: Option<(f64, usize, f64)> = None; // (cost, axis, split coord)
    for axis in 0..3 {
        let span = cb_max[axis] - cb_min[axis];
        if span <= 0.0 {
            continue;
        }
        let mut bin_aabbs = vec![Aabb::empty(); SAH_BINS];
        let mut bin_counts = vec![0usize; SAH_BINS];
        let scale = SAH_BINS as f64 / span;
        for &t in &order[start..end] {
            let b = (((centroids[t as usize][axis] - cb_min[axis]) * scale) as usize)
                .min(SAH_BINS - 1);
            bin_aabbs[b].merge(&tri_aabbs[t as usize]);
            bin_counts[b] += 1;
        }
        // Prefix/suffix sweeps for the SAH cost of each of the 15 planes.
        let mut left_area = [0.0f64; SAH_BINS];
        let mut left_count = [0usize; SAH_BINS];
        let mut acc = Aabb::empty();
        let mut cnt = 0usize;
        for i in 0..SAH_BINS {
            acc.merge(&bin_aabbs[i]);
            cnt += bin_counts[i];
            left_area[i] = acc.surface_area();
            left_count[i] = cnt;
        }
        let mut acc = Aabb::empty();
        let mut cnt = 0usize;
        for i in (1..SAH_BINS).rev() {
            acc.merge(&bin_aabbs[i]);
            cnt += bin_counts[i];
            let lc = left_count[i - 1];
            let rc = cnt;
            if lc == 0 || rc == 0 {
                continue;
            }
            let cost = left_area[i - 1] * lc as f64 + acc.surface_area() * rc as f64;
            let split = cb_min[axis] + span * (i as f64 / SAH_BINS as f64);
            if best.map_or(true, |(bc, _, _)| cost < bc) {
                best = Some((cost, axis, split));
            }
        }
    }

    // Partition; fall back to a median split when SAH found no usable
    // plane or produced a degenerate partition.
    let mid = match best {
        Some((_, axis, split)) => {
            let mid = partition_by(order, start, end, |t| {
                centroids[t as usize][axis] < split
            });
            if mid == start || mid == end {
                median_split(order, start, end, centroids)
            } else {
                mid
            }
        }
        None => median_split(order, start, end, centroids),
    };

    let idx = nodes.len() as u32;
    nodes.push(BvhNode::Inner {
        aabb,
        left: 0,
        right: 0,
    });
    let left = build_node(tri_aabbs, centroids, order, start, mid, max_leaf, nodes);
    let right = build_node(tri_aabbs, centroids, order, mid, end, max_leaf, nodes);
    if let BvhNode::Inner {
        left: l, right: r, ..
    } = &mut nodes[idx as usize]
    {
        *l = left;
        *r = right;
    }
    idx
}

/// Stable partition of order[start..end]; returns the split point.
fn partition_by(order: &mut [u32], start: usize, end: usize, pred: impl Fn(u32) -> bool) -> usize {
    let mut left: Vec<u32> = Vec::with_capacity(end - start);
    let mut right: Vec<u32> = Vec::with_capacity(end - start);
    for &t in &order[start..end] {
        if pred(t) {
            left.push(t);
        } else {
            right.push(t);
        }
    }
    let mid = start + left.len();
    order[start..mid].copy_from_slice(&left);
    order[mid..end].copy_from_slice(&right);
    mid
}

/// Sort the range along its widest centroid axis and cut at the middle.
fn median_split(order: &mut [u32], start: usize, end: usize, centroids: &[[f64; 3]]) -> usize {
    let mut cb_min = [f64::INFINITY; 3];
    let mut cb_max = [f64::NEG_INFINITY; 3];
    for &t in &order[start..end] {
        for a in 0..3 {
            let c = centroids[t as usize][a];
            cb_min[a] = cb_min[a].min(c);
            cb_max[a] = cb_max[a].max(c);
        }
    }
    let axis = (0..3)
        .max_by(|&a, &b| {
            (cb_max[a] - cb_min[a])
                .partial_cmp(&(cb_max[b] - cb_min[b]))
                .unwrap()
        })
        .unwrap();
    // Ties broken by triangle id so construction stays deterministic.
    order[start..end].sort_by(|&a, &b| {
        centroids[a as usize][axis]
            .partial_cmp(&centroids[b as usize][axis])
            .unwrap()
            .then(a.cmp(&b))
    });
    (start + end) / 2
}

impl Bvh {
    /// Triangle ids stored in the given leaf.
    pub fn leaf_triangles<'a>(&'a self, node: &BvhNode) -> &'a [u32] {
        match node {
            BvhNode::Leaf { start, count, .. } => {
                &self.triangle_order[*start as usize..(*start + *count) as usize]
            }
            _ => &[],
        }
    }
}
