//! Procedural indoor environment meshes.
//!
//! A floorplan is a rectangular outline with axis-aligned rooms, door
//! openings, optional pillars, and optional stacked floors with a
//! stairwell opening in the intermediate slabs.
//!
//! Construction rule: the outer envelope is a single closed box shell
//! enclosing all interior air, while partition walls, lintels, slabs, and
//! pillars are watertight solid boxes inside it. A crossing-parity test
//! then classifies interior air as "inside" (one envelope crossing, even
//! crossings through any solid) and wall interiors/outdoors as "outside".
//! Solids are extended slightly wherever they meet the envelope, a slab,
//! or the floor so that no two surfaces are ever coincident.

use nalgebra::Point3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{shapes, TriangleMesh};

/// Axis-aligned rectangle in floor coordinates.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Rect {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl Rect {
    pub fn new(min: [f64; 2], max: [f64; 2]) -> Self {
        Rect { min, max }
    }

    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        x >= self.min[0] && x <= self.max[0] && y >= self.min[1] && y <= self.max[1]
    }

    fn interiors_overlap(&self, other: &Rect) -> bool {
        self.min[0] < other.max[0]
            && other.min[0] < self.max[0]
            && self.min[1] < other.max[1]
            && other.min[1] < self.max[1]
    }
}

/// Which edge of a room a door sits on.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    North,
    South,
    East,
    West,
}

/// Door opening on one room edge. `center` is the absolute coordinate
/// along the wall (x for north/south edges, y for east/west).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DoorSpec {
    pub edge: Edge,
    pub center: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoomSpec {
    pub rect: Rect,
    #[serde(default)]
    pub doors: Vec<DoorSpec>,
}

/// Full-height obstacle box on one floor.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PillarSpec {
    pub rect: Rect,
    #[serde(default)]
    pub floor: usize,
}

/// Reflection plane; `axis = "y", at = 8` mirrors (x, y, z) to (x, 16-y, z).
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct MirrorPlane {
    pub axis: Axis,
    pub at: f64,
}

impl MirrorPlane {
    /// Mirror image of a point under this plane.
    pub fn reflect(&self, p: &Point3<f64>) -> Point3<f64> {
        let mut q = *p;
        match self.axis {
            Axis::X => q.x = 2.0 * self.at - p.x,
            Axis::Y => q.y = 2.0 * self.at - p.y,
        }
        q
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// Declarative floorplan. Interior extents are `width` x `depth`; each
/// floor's air column is `wall_height` tall. Room layout repeats on every
/// floor; the stairwell (if any) is cut from each intermediate slab.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FloorplanSpec {
    pub width: f64,
    pub depth: f64,
    pub wall_height: f64,
    pub wall_thickness: f64,
    #[serde(default = "default_slab")]
    pub slab_thickness: f64,
    #[serde(default = "default_floors")]
    pub floors: usize,
    #[serde(default = "default_door_height")]
    pub door_height: f64,
    #[serde(default)]
    pub rooms: Vec<RoomSpec>,
    #[serde(default)]
    pub pillars: Vec<PillarSpec>,
    #[serde(default)]
    pub stairwell: Option<Rect>,
    #[serde(default)]
    pub mirror_plane: Option<MirrorPlane>,
}

fn default_slab() -> f64 {
    0.3
}
fn default_floors() -> usize {
    1
}
fn default_door_height() -> f64 {
    2.0
}

/// One straight interior wall line: plane `normal_axis = at`, spanning
/// `[lo, hi]` along the other axis.
#[derive(Debug, Clone)]
struct WallLine {
    normal_axis: Axis,
    at: f64,
    spans: Vec<(f64, f64)>,
    doors: Vec<(f64, f64)>, // (center, width)
}

const MERGE_EPS: f64 = 1e-9;

impl FloorplanSpec {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidFloorplan(msg));
        if !(self.width > 0.0 && self.depth > 0.0 && self.wall_height > 0.0) {
            return fail("outline and wall height must be positive".into());
        }
        if self.wall_thickness <= 0.0 {
            return fail("zero-thickness walls".into());
        }
        if self.slab_thickness <= 0.0 {
            return fail("slab thickness must be positive".into());
        }
        if self.floors == 0 {
            return fail("floor count must be >= 1".into());
        }
        if !(0.0 < self.door_height && self.door_height < self.wall_height) {
            return fail("door height must lie inside the wall height".into());
        }
        for (i, room) in self.rooms.iter().enumerate() {
            let r = &room.rect;
            if r.min[0] >= r.max[0] || r.min[1] >= r.max[1] {
                return fail(format!("room {i} is degenerate"));
            }
            if r.min[0] < -MERGE_EPS
                || r.min[1] < -MERGE_EPS
                || r.max[0] > self.width + MERGE_EPS
                || r.max[1] > self.depth + MERGE_EPS
            {
                return fail(format!("room {i} outside the outline"));
            }
            for (j, other) in self.rooms.iter().enumerate().skip(i + 1) {
                if r.interiors_overlap(&other.rect) {
                    return fail(format!("overlapping rooms {i} and {j}"));
                }
            }
            for (d, door) in room.doors.iter().enumerate() {
                if door.width <= 0.0 {
                    return fail(format!("room {i} door {d} has non-positive width"));
                }
                let (lo, hi) = match door.edge {
                    Edge::North | Edge::South => (r.min[0], r.max[0]),
                    Edge::East | Edge::West => (r.min[1], r.max[1]),
                };
                if door.center - door.width / 2.0 < lo - MERGE_EPS
                    || door.center + door.width / 2.0 > hi + MERGE_EPS
                {
                    return fail(format!("room {i} door {d} extends past its wall"));
                }
            }
        }
        if let Some(sw) = &self.stairwell {
            if self.floors < 2 {
                return fail("stairwell requires at least two floors".into());
            }
            if sw.min[0] >= sw.max[0] || sw.min[1] >= sw.max[1] {
                return fail("stairwell rectangle is degenerate".into());
            }
            if sw.min[0] <= 0.0
                || sw.min[1] <= 0.0
                || sw.max[0] >= self.width
                || sw.max[1] >= self.depth
            {
                return fail("stairwell must lie strictly inside the outline".into());
            }
        }
        Ok(())
    }

    /// Height of one floor cell (air plus the slab above it).
    pub fn floor_pitch(&self) -> f64 {
        self.wall_height + self.slab_thickness
    }

    /// Total vertical extent of the generated mesh.
    pub fn total_height(&self) -> f64 {
        self.floors as f64 * self.floor_pitch()
    }

    /// Interior wall lines derived from room edges, merged per line with
    /// door openings attached.
    fn wall_lines(&self) -> Vec<WallLine> {
        // Key lines by exact f64 bits: identical spec coordinates merge.
        let mut lines: Vec<WallLine> = Vec::new();
        let mut push = |axis: Axis, at: f64, lo: f64, hi: f64, outline_hi: f64| {
            // Edges on the outline boundary belong to the envelope.
            if at.abs() < MERGE_EPS || (at - outline_hi).abs() < MERGE_EPS {
                return;
            }
            if let Some(line) = lines
                .iter_mut()
                .find(|l| l.normal_axis == axis && (l.at - at).abs() < MERGE_EPS)
            {
                line.spans.push((lo, hi));
            } else {
                lines.push(WallLine {
                    normal_axis: axis,
                    at,
                    spans: vec![(lo, hi)],
                    doors: Vec::new(),
                });
            }
        };
        for room in &self.rooms {
            let r = &room.rect;
            push(Axis::Y, r.min[1], r.min[0], r.max[0], self.depth); // south
            push(Axis::Y, r.max[1], r.min[0], r.max[0], self.depth); // north
            push(Axis::X, r.min[0], r.min[1], r.max[1], self.width); // west
            push(Axis::X, r.max[0], r.min[1], r.max[1], self.width); // east
        }
        // Merge spans per line and attach doors.
        for line in &mut lines {
            line.spans.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut merged: Vec<(f64, f64)> = Vec::new();
            for &(lo, hi) in &line.spans {
                if let Some(last) = merged.last_mut() {
                    if lo <= last.1 + MERGE_EPS {
                        last.1 = last.1.max(hi);
                        continue;
                    }
                }
                merged.push((lo, hi));
            }
            line.spans = merged;
        }
        for room in &self.rooms {
            let r = &room.rect;
            for door in &room.doors {
                let (axis, at) = match door.edge {
                    Edge::North => (Axis::Y, r.max[1]),
                    Edge::South => (Axis::Y, r.min[1]),
                    Edge::East => (Axis::X, r.max[0]),
                    Edge::West => (Axis::X, r.min[0]),
                };
                if let Some(line) = lines
                    .iter_mut()
                    .find(|l| l.normal_axis == axis && (l.at - at).abs() < MERGE_EPS)
                {
                    // Same door declared by both adjacent rooms: keep one.
                    if !line
                        .doors
                        .iter()
                        .any(|&(c, w)| (c - door.center).abs() < MERGE_EPS
                            && (w - door.width).abs() < MERGE_EPS)
                    {
                        line.doors.push((door.center, door.width));
                    }
                }
            }
        }
        for line in &mut lines {
            line.doors
                .sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        }
        lines
    }
}

/// Mesh accumulator.
struct MeshBuilder {
    vertices: Vec<Point3<f64>>,
    triangles: Vec<[u32; 3]>,
}

impl MeshBuilder {
    fn new() -> Self {
        MeshBuilder {
            vertices: Vec::new(),
            triangles: Vec::new(),
        }
    }

    fn push_box(&mut self, min: Point3<f64>, max: Point3<f64>) {
        let (v, t) = shapes::box_arrays(min, max, self.vertices.len() as u32);
        self.vertices.extend(v);
        self.triangles.extend(t);
    }

    /// Slab solid with an optional rectangular through-hole.
    fn push_slab_with_hole(
        &mut self,
        min: Point3<f64>,
        max: Point3<f64>,
        hole: Option<&Rect>,
    ) {
        let Some(h) = hole else {
            self.push_box(min, max);
            return;
        };
        // Four side boxes framing the hole keep the solid watertight and
        // parity-even without coplanar-face bookkeeping.
        let (hx0, hy0, hx1, hy1) = (h.min[0], h.min[1], h.max[0], h.max[1]);
        self.push_box(min, Point3::new(hx0, max.y, max.z)); // west frame
        self.push_box(Point3::new(hx1, min.y, min.z), max); // east frame
        self.push_box(
            Point3::new(hx0, min.y, min.z),
            Point3::new(hx1, hy0, max.z),
        ); // south frame
        self.push_box(
            Point3::new(hx0, hy1, min.z),
            Point3::new(hx1, max.y, max.z),
        ); // north frame
    }
}

/// Generate the environment mesh for a validated floorplan spec.
/// Deterministic: identical specs produce identical meshes.
pub fn generate_floorplan_mesh(spec: &FloorplanSpec) -> Result<TriangleMesh> {
    spec.validate()?;
    let mut b = MeshBuilder::new();
    let pitch = spec.floor_pitch();
    let total_h = spec.total_height();
    // Keep solids clear of the envelope/slab planes they touch.
    let ov = 0.25 * spec.wall_thickness.min(spec.slab_thickness);
    let t2 = spec.wall_thickness / 2.0;

    // Envelope shell at the interior surface.
    b.push_box(
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(spec.width, spec.depth, total_h),
    );

    // Intermediate slabs (the top floor's ceiling is the envelope top).
    for k in 0..spec.floors.saturating_sub(1) {
        let z0 = k as f64 * pitch + spec.wall_height;
        let z1 = (k + 1) as f64 * pitch;
        b.push_slab_with_hole(
            Point3::new(-ov, -ov, z0),
            Point3::new(spec.width + ov, spec.depth + ov, z1),
            spec.stairwell.as_ref(),
        );
    }

    let lines = spec.wall_lines();
    for k in 0..spec.floors {
        let z_lo = k as f64 * pitch - ov;
        let z_hi = if k + 1 == spec.floors {
            total_h + ov
        } else {
            k as f64 * pitch + spec.wall_height + ov
        };
        let door_top = k as f64 * pitch + spec.door_height;

        for line in &lines {
            for &(lo, hi) in &line.spans {
                // Poke the ends through the envelope so end faces are
                // never coplanar with it.
                let span_lo = if lo.abs() < MERGE_EPS { lo - ov } else { lo };
                let outline_hi = match line.normal_axis {
                    Axis::X => spec.depth,
                    Axis::Y => spec.width,
                };
                let span_hi = if (hi - outline_hi).abs() < MERGE_EPS {
                    hi + ov
                } else {
                    hi
                };
                let doors: Vec<(f64, f64)> = line
                    .doors
                    .iter()
                    .filter(|&&(c, w)| c - w / 2.0 >= lo - MERGE_EPS && c + w / 2.0 <= hi + MERGE_EPS)
                    .cloned()
                    .collect();
                // Full-height segments between door gaps, lintels above doors.
                let mut cursor = span_lo;
                let emit = |b: &mut MeshBuilder, a: f64, z0: f64, z1: f64, p0: f64, p1: f64| {
                    if p1 - p0 < MERGE_EPS {
                        return;
                    }
                    let (min, max) = match line.normal_axis {
                        Axis::X => (
                            Point3::new(a - t2, p0, z0),
                            Point3::new(a + t2, p1, z1),
                        ),
                        Axis::Y => (
                            Point3::new(p0, a - t2, z0),
                            Point3::new(p1, a + t2, z1),
                        ),
                    };
                    b.push_box(min, max);
                };
                for &(c, w) in &doors {
                    let gap_lo = c - w / 2.0;
                    let gap_hi = c + w / 2.0;
                    emit(&mut b, line.at, z_lo, z_hi, cursor, gap_lo);
                    emit(&mut b, line.at, door_top, z_hi, gap_lo, gap_hi);
                    cursor = gap_hi;
                }
                emit(&mut b, line.at, z_lo, z_hi, cursor, span_hi);
            }
        }

        for pillar in &spec.pillars {
            if pillar.floor != k {
                continue;
            }
            b.push_box(
                Point3::new(pillar.rect.min[0], pillar.rect.min[1], z_lo),
                Point3::new(pillar.rect.max[0], pillar.rect.max[1], z_hi),
            );
        }
    }

    TriangleMesh::new(b.vertices, b.triangles)
}

impl FloorplanSpec {
    /// 8 x 8 m two-by-two room grid; small mesh for geometry tests.
    pub fn four_room_test_spec() -> FloorplanSpec {
        let door = |edge, center| DoorSpec {
            edge,
            center,
            width: 0.9,
        };
        FloorplanSpec {
            width: 8.0,
            depth: 8.0,
            wall_height: 2.5,
            wall_thickness: 0.2,
            slab_thickness: 0.3,
            floors: 1,
            door_height: 2.0,
            rooms: vec![
                RoomSpec {
                    rect: Rect::new([0.0, 0.0], [4.0, 4.0]),
                    doors: vec![door(Edge::East, 2.0)],
                },
                RoomSpec {
                    rect: Rect::new([4.0, 0.0], [8.0, 4.0]),
                    doors: vec![door(Edge::North, 6.0)],
                },
                RoomSpec {
                    rect: Rect::new([0.0, 4.0], [4.0, 8.0]),
                    doors: vec![door(Edge::East, 6.5)],
                },
                RoomSpec {
                    rect: Rect::new([4.0, 4.0], [8.0, 8.0]),
                    doors: vec![],
                },
            ],
            pillars: vec![],
            stairwell: None,
            mirror_plane: None,
        }
    }

    /// 24 x 12 m single-floor six-room environment with asymmetric doors
    /// and pillars, so most viewpoints are distinguishable.
    pub fn six_room() -> FloorplanSpec {
        let door = |edge, center, width| DoorSpec {
            edge,
            center,
            width,
        };
        FloorplanSpec {
            width: 24.0,
            depth: 12.0,
            wall_height: 2.5,
            wall_thickness: 0.2,
            slab_thickness: 0.3,
            floors: 1,
            door_height: 2.0,
            rooms: vec![
                // south row
                RoomSpec {
                    rect: Rect::new([0.0, 0.0], [7.0, 6.0]),
                    doors: vec![door(Edge::East, 2.0, 0.9), door(Edge::North, 3.5, 1.0)],
                },
                RoomSpec {
                    rect: Rect::new([7.0, 0.0], [16.0, 6.0]),
                    doors: vec![door(Edge::East, 4.5, 1.1), door(Edge::North, 11.0, 1.2)],
                },
                RoomSpec {
                    rect: Rect::new([16.0, 0.0], [24.0, 6.0]),
                    doors: vec![door(Edge::North, 20.5, 0.9)],
                },
                // north row
                RoomSpec {
                    rect: Rect::new([0.0, 6.0], [8.5, 12.0]),
                    doors: vec![door(Edge::East, 9.5, 1.0)],
                },
                RoomSpec {
                    rect: Rect::new([8.5, 6.0], [15.5, 12.0]),
                    doors: vec![door(Edge::East, 7.2, 0.9)],
                },
                RoomSpec {
                    rect: Rect::new([15.5, 6.0], [24.0, 12.0]),
                    doors: vec![],
                },
            ],
            pillars: vec![
                PillarSpec {
                    rect: Rect::new([2.0, 1.5], [2.45, 1.95]),
                    floor: 0,
                },
                PillarSpec {
                    rect: Rect::new([21.5, 1.0], [21.9, 1.4]),
                    floor: 0,
                },
                PillarSpec {
                    rect: Rect::new([12.0, 10.5], [12.5, 11.0]),
                    floor: 0,
                },
            ],
            stairwell: None,
            mirror_plane: None,
        }
    }

    /// 10 x 16 m environment with two mirror-symmetric rooms joined by a
    /// corridor. Rooms (including their pillars) are exact mirror images
    /// across y = 8; a single corridor pillar breaks the symmetry there,
    /// so the corridor is localizable while the rooms alias each other.
    pub fn mirror_rooms() -> FloorplanSpec {
        let mut spec = Self::mirror_rooms_symmetric();
        spec.pillars.push(PillarSpec {
            rect: Rect::new([8.2, 6.5], [8.7, 7.0]),
            floor: 0,
        });
        spec
    }

    /// The mirrored-room layout without the corridor pillar: exactly
    /// mirror-symmetric as a point set.
    pub fn mirror_rooms_symmetric() -> FloorplanSpec {
        let door = |edge, center| DoorSpec {
            edge,
            center,
            width: 1.0,
        };
        FloorplanSpec {
            width: 10.0,
            depth: 16.0,
            wall_height: 2.5,
            wall_thickness: 0.2,
            slab_thickness: 0.3,
            floors: 1,
            door_height: 2.0,
            rooms: vec![
                RoomSpec {
                    rect: Rect::new([0.0, 0.0], [10.0, 6.0]),
                    doors: vec![door(Edge::North, 5.0)],
                },
                RoomSpec {
                    rect: Rect::new([0.0, 10.0], [10.0, 16.0]),
                    doors: vec![door(Edge::South, 5.0)],
                },
            ],
            pillars: vec![
                PillarSpec {
                    rect: Rect::new([0.9, 0.9], [1.5, 1.5]),
                    floor: 0,
                },
                PillarSpec {
                    rect: Rect::new([0.9, 14.5], [1.5, 15.1]),
                    floor: 0,
                },
            ],
            stairwell: None,
            mirror_plane: Some(MirrorPlane {
                axis: Axis::Y,
                at: 8.0,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_bvh, point_in_free_space};

    #[test]
    fn single_room_box_interior() {
        let spec = FloorplanSpec {
            width: 4.0,
            depth: 4.0,
            wall_height: 2.5,
            wall_thickness: 0.2,
            slab_thickness: 0.3,
            floors: 1,
            door_height: 2.0,
            rooms: vec![],
            pillars: vec![],
            stairwell: None,
            mirror_plane: None,
        };
        let mesh = generate_floorplan_mesh(&spec).unwrap();
        let bvh = build_bvh(&mesh).unwrap();
        assert!(point_in_free_space(
            &bvh,
            &mesh,
            &Point3::new(2.0, 2.0, 1.25),
            0.1
        ));
        assert!(!point_in_free_space(
            &bvh,
            &mesh,
            &Point3::new(-1.0, 2.0, 1.25),
            0.1
        ));
    }

    /// DERIVED: reflect every vertex across the mirror plane and find its
    /// nearest counterpart; a symmetric layout must map onto itself.
    #[test]
    fn mirrored_rooms_mesh_is_mirror_invariant() {
        let spec = FloorplanSpec::mirror_rooms_symmetric();
        let mesh = generate_floorplan_mesh(&spec).unwrap();
        let plane = spec.mirror_plane.unwrap();
        for v in &mesh.vertices {
            let r = plane.reflect(v);
            let nearest = mesh
                .vertices
                .iter()
                .map(|u| (u - r).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-9, "vertex {v:?} has no mirror image");
        }
    }

    #[test]
    fn two_floor_vertical_extent() {
        let mut spec = FloorplanSpec::four_room_test_spec();
        spec.floors = 2;
        spec.stairwell = Some(Rect::new([1.0, 1.0], [2.5, 3.0]));
        let mesh = generate_floorplan_mesh(&spec).unwrap();
        let extent = mesh.aabb.max.z - mesh.aabb.min.z;
        // Wall overhangs poke past the envelope on both sides.
        let expected = 2.0 * (spec.wall_height + spec.slab_thickness);
        let ov = 0.25 * spec.wall_thickness.min(spec.slab_thickness);
        assert!((extent - (expected + 2.0 * ov)).abs() < 1e-12);
        // Envelope itself spans exactly the floorplan height.
        assert!((spec.total_height() - expected).abs() < 1e-12);
    }

    #[test]
    fn overlapping_rooms_rejected() {
        let mut spec = FloorplanSpec::four_room_test_spec();
        spec.rooms[1].rect = Rect::new([3.0, 0.0], [8.0, 4.0]);
        assert!(matches!(
            generate_floorplan_mesh(&spec),
            Err(Error::InvalidFloorplan(_))
        ));
    }

    #[test]
    fn zero_thickness_walls_rejected() {
        let mut spec = FloorplanSpec::four_room_test_spec();
        spec.wall_thickness = 0.0;
        assert!(matches!(
            generate_floorplan_mesh(&spec),
            Err(Error::InvalidFloorplan(_))
        ));
    }

    #[test]
    fn doors_connect_rooms_though_walls_block() {
        let spec = FloorplanSpec::four_room_test_spec();
        let mesh = generate_floorplan_mesh(&spec).unwrap();
        let bvh = build_bvh(&mesh).unwrap();
        use crate::geometry::{raycast, Ray};
        use nalgebra::Vector3;
        // Through the door at (4.0, 2.0): no wall for a ray at door height.
        let ray = Ray::new(Point3::new(3.0, 2.0, 1.0), Vector3::new(1.0, 0.0, 0.0));
        let hit = raycast(&bvh, &mesh, &ray, 50.0).unwrap();
        assert!(hit.distance > 4.5, "door should be open, hit {hit:?}");
        // Away from the door the wall blocks at x = 4 - t/2 = 3.9.
        let ray = Ray::new(Point3::new(3.0, 0.7, 1.0), Vector3::new(1.0, 0.0, 0.0));
        let hit = raycast(&bvh, &mesh, &ray, 50.0).unwrap();
        assert!((hit.distance - 0.9).abs() < 1e-9, "hit {hit:?}");
        // Above door height the lintel blocks the doorway line.
        let ray = Ray::new(Point3::new(3.0, 2.0, 2.3), Vector3::new(1.0, 0.0, 0.0));
        let hit = raycast(&bvh, &mesh, &ray, 50.0).unwrap();
        assert!((hit.distance - 0.9).abs() < 1e-9, "hit {hit:?}");
    }

    #[test]
    fn pillar_interior_is_not_free_space() {
        let spec = FloorplanSpec::mirror_rooms();
        let mesh = generate_floorplan_mesh(&spec).unwrap();
        let bvh = build_bvh(&mesh).unwrap();
        // Inside the room-A pillar.
        assert!(!point_in_free_space(
            &bvh,
            &mesh,
            &Point3::new(1.2, 1.2, 1.0),
            0.0
        ));
        // Center of room A is free.
        assert!(point_in_free_space(
            &bvh,
            &mesh,
            &Point3::new(5.0, 3.0, 1.25),
            0.3
        ));
    }
}
