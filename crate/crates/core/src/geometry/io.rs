//! OBJ and PLY mesh readers/writers.
//!
//! OBJ: `v` and `f` records only. PLY: ASCII or binary little-endian,
//! vertex x/y/z as float32 or float64, one face list property. Extra
//! vertex properties are skipped. Vertex and face order are preserved.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use nalgebra::Point3;

use crate::error::{Error, Result};
use crate::geometry::TriangleMesh;

/// Load a mesh, dispatching on content (PLY magic) rather than extension.
pub fn load_mesh(path: &Path) -> Result<TriangleMesh> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|source| Error::Unreadable {
            path: path.display().to_string(),
            source,
        })?;
    if bytes.starts_with(b"ply") {
        parse_ply(&bytes, path)
    } else {
        parse_obj(&bytes, path)
    }
}

/// Write a mesh as ASCII OBJ (`.obj`) or binary little-endian PLY with
/// float64 vertices (anything else). Both reload bit-for-bit.
pub fn save_mesh(mesh: &TriangleMesh, path: &Path) -> Result<()> {
    let is_obj = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("obj"))
        .unwrap_or(false);
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut w = BufWriter::new(file);
    let res = if is_obj {
        write_obj(mesh, &mut w)
    } else {
        write_ply(mesh, &mut w)
    };
    res.map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_obj(mesh: &TriangleMesh, w: &mut impl Write) -> std::io::Result<()> {
    // Rust float Display is the shortest representation that round-trips.
    for v in &mesh.vertices {
        writeln!(w, "v {} {} {}", v.x, v.y, v.z)?;
    }
    for t in &mesh.triangles {
        writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    Ok(())
}

fn write_ply(mesh: &TriangleMesh, w: &mut impl Write) -> std::io::Result<()> {
    write!(
        w,
        "ply\nformat binary_little_endian 1.0\nelement vertex {}\n\
         property double x\nproperty double y\nproperty double z\n\
         element face {}\nproperty list uchar uint vertex_indices\nend_header\n",
        mesh.vertices.len(),
        mesh.triangles.len()
    )?;
    for v in &mesh.vertices {
        w.write_all(&v.x.to_le_bytes())?;
        w.write_all(&v.y.to_le_bytes())?;
        w.write_all(&v.z.to_le_bytes())?;
    }
    for t in &mesh.triangles {
        w.write_all(&[3u8])?;
        for &i in t {
            w.write_all(&i.to_le_bytes())?;
        }
    }
    Ok(())
}

fn malformed(path: &Path, location: impl ToString, detail: impl ToString) -> Error {
    Error::MalformedRecord {
        path: path.display().to_string(),
        location: location.to_string(),
        detail: detail.to_string(),
    }
}

fn push_face(
    triangles: &mut Vec<[u32; 3]>,
    indices: &[usize],
    vertex_count: usize,
    path: &Path,
) -> Result<()> {
    for &idx in indices {
        if idx >= vertex_count {
            return Err(Error::IndexOutOfRange {
                path: path.display().to_string(),
                index: idx,
                count: vertex_count,
            });
        }
    }
    // Fan-triangulate polygons with more than three vertices.
    for k in 1..indices.len() - 1 {
        triangles.push([indices[0] as u32, indices[k] as u32, indices[k + 1] as u32]);
    }
    Ok(())
}

fn parse_obj(bytes: &[u8], path: &Path) -> Result<TriangleMesh> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| malformed(path, "file", format!("not valid UTF-8: {e}")))?;
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("v") => {
                let mut coords = [0.0f64; 3];
                for c in &mut coords {
                    let tok = fields
                        .next()
                        .ok_or_else(|| malformed(path, lineno + 1, "vertex needs 3 coordinates"))?;
                    *c = tok
                        .parse()
                        .map_err(|e| malformed(path, lineno + 1, format!("bad coordinate: {e}")))?;
                }
                vertices.push(Point3::new(coords[0], coords[1], coords[2]));
            }
            Some("f") => {
                let mut indices = Vec::new();
                for tok in fields {
                    // "i", "i/t", "i/t/n", "i//n" — vertex index is before the first '/'.
                    let head = tok.split('/').next().unwrap_or("");
                    let idx: i64 = head
                        .parse()
                        .map_err(|e| malformed(path, lineno + 1, format!("bad face index: {e}")))?;
                    if idx < 1 {
                        return Err(malformed(
                            path,
                            lineno + 1,
                            format!("face index must be positive, got {idx}"),
                        ));
                    }
                    indices.push((idx - 1) as usize);
                }
                if indices.len() < 3 {
                    return Err(malformed(path, lineno + 1, "face needs at least 3 indices"));
                }
                push_face(&mut triangles, &indices, vertices.len(), path)?;
            }
            // Other records (vn, vt, comments, groups, ...) are ignored.
            _ => {}
        }
    }
    TriangleMesh::new(vertices, triangles).map_err(|e| relocate(e, path))
}

// TriangleMesh::new reports "<memory>" as the path; substitute the real one.
fn relocate(e: Error, path: &Path) -> Error {
    match e {
        Error::IndexOutOfRange { index, count, .. } => Error::IndexOutOfRange {
            path: path.display().to_string(),
            index,
            count,
        },
        other => other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum PlyFormat {
    Ascii,
    BinaryLe,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum PlyType {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl PlyType {
    fn parse(s: &str) -> Option<PlyType> {
        Some(match s {
            "char" | "int8" => PlyType::I8,
            "uchar" | "uint8" => PlyType::U8,
            "short" | "int16" => PlyType::I16,
            "ushort" | "uint16" => PlyType::U16,
            "int" | "int32" => PlyType::I32,
            "uint" | "uint32" => PlyType::U32,
            "float" | "float32" => PlyType::F32,
            "double" | "float64" => PlyType::F64,
            _ => return None,
        })
    }

    fn size(self) -> usize {
        match self {
            PlyType::I8 | PlyType::U8 => 1,
            PlyType::I16 | PlyType::U16 => 2,
            PlyType::I32 | PlyType::U32 | PlyType::F32 => 4,
            PlyType::F64 => 8,
        }
    }
}

#[derive(Debug)]
enum PlyProperty {
    Scalar { ty: PlyType, name: String },
    List { count_ty: PlyType, item_ty: PlyType },
}

#[derive(Debug)]
struct PlyElement {
    name: String,
    count: usize,
    properties: Vec<PlyProperty>,
}

fn parse_ply(bytes: &[u8], path: &Path) -> Result<TriangleMesh> {
    // Header is ASCII lines terminated by "end_header".
    let header_end = find_header_end(bytes)
        .ok_or_else(|| malformed(path, "header", "missing end_header"))?;
    let header = std::str::from_utf8(&bytes[..header_end])
        .map_err(|e| malformed(path, "header", format!("non-ASCII header: {e}")))?;
    let mut format = None;
    let mut elements: Vec<PlyElement> = Vec::new();
    for (lineno, line) in header.lines().enumerate() {
        let mut f = line.split_whitespace();
        match f.next() {
            Some("ply") | Some("comment") | Some("obj_info") | None => {}
            Some("format") => {
                format = match f.next() {
                    Some("ascii") => Some(PlyFormat::Ascii),
                    Some("binary_little_endian") => Some(PlyFormat::BinaryLe),
                    other => {
                        return Err(malformed(
                            path,
                            lineno + 1,
                            format!("unsupported PLY format {other:?}"),
                        ))
                    }
                };
            }
            Some("element") => {
                let name = f
                    .next()
                    .ok_or_else(|| malformed(path, lineno + 1, "element needs a name"))?;
                let count: usize = f
                    .next()
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| malformed(path, lineno + 1, "element needs a count"))?;
                elements.push(PlyElement {
                    name: name.to_string(),
                    count,
                    properties: Vec::new(),
                });
            }
            Some("property") => {
                let el = elements
                    .last_mut()
                    .ok_or_else(|| malformed(path, lineno + 1, "property before element"))?;
                let kind = f
                    .next()
                    .ok_or_else(|| malformed(path, lineno + 1, "property needs a type"))?;
                if kind == "list" {
                    let count_ty = f
                        .next()
                        .and_then(PlyType::parse)
                        .ok_or_else(|| malformed(path, lineno + 1, "bad list count type"))?;
                    let item_ty = f
                        .next()
                        .and_then(PlyType::parse)
                        .ok_or_else(|| malformed(path, lineno + 1, "bad list item type"))?;
                    el.properties.push(PlyProperty::List { count_ty, item_ty });
                } else {
                    let ty = PlyType::parse(kind)
                        .ok_or_else(|| malformed(path, lineno + 1, format!("bad type {kind}")))?;
                    let name = f
                        .next()
                        .ok_or_else(|| malformed(path, lineno + 1, "property needs a name"))?;
                    el.properties.push(PlyProperty::Scalar {
                        ty,
                        name: name.to_string(),
                    });
                }
            }
            Some(other) if other == "end_header" => break,
            Some(other) => {
                return Err(malformed(
                    path,
                    lineno + 1,
                    format!("unknown header record {other}"),
                ))
            }
        }
    }
    let format = format.ok_or_else(|| malformed(path, "header", "missing format line"))?;
    let body = &bytes[header_end..];

    let mut vertices = Vec::new();
    let mut triangles: Vec<[u32; 3]> = Vec::new();
    match format {
        PlyFormat::Ascii => {
            let text = std::str::from_utf8(body)
                .map_err(|e| malformed(path, "body", format!("non-ASCII body: {e}")))?;
            let mut tokens = text.split_whitespace();
            let mut next_f64 = |what: &str| -> Result<f64> {
                tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| malformed(path, "body", format!("expected {what}")))
            };
            for el in &elements {
                for _ in 0..el.count {
                    let mut xyz = [f64::NAN; 3];
                    let mut face: Vec<usize> = Vec::new();
                    for prop in &el.properties {
                        match prop {
                            PlyProperty::Scalar { name, .. } => {
                                let v = next_f64(&format!("scalar {name}"))?;
                                match name.as_str() {
                                    "x" => xyz[0] = v,
                                    "y" => xyz[1] = v,
                                    "z" => xyz[2] = v,
                                    _ => {}
                                }
                            }
                            PlyProperty::List { .. } => {
                                let n = next_f64("list count")? as usize;
                                for _ in 0..n {
                                    face.push(next_f64("list item")? as usize);
                                }
                            }
                        }
                    }
                    if el.name == "vertex" {
                        if xyz.iter().any(|c| c.is_nan()) {
                            return Err(malformed(path, "body", "vertex missing x/y/z"));
                        }
                        vertices.push(Point3::new(xyz[0], xyz[1], xyz[2]));
                    } else if el.name == "face" && !face.is_empty() {
                        if face.len() < 3 {
                            return Err(malformed(path, "body", "face needs >=3 indices"));
                        }
                        push_face(&mut triangles, &face, vertices.len(), path)?;
                    }
                }
            }
        }
        PlyFormat::BinaryLe => {
            let mut off = 0usize;
            let read_scalar = |data: &[u8], off: &mut usize, ty: PlyType| -> Result<f64> {
                let sz = ty.size();
                if *off + sz > data.len() {
                    return Err(malformed(path, *off, "unexpected end of binary body"));
                }
                let s = &data[*off..*off + sz];
                *off += sz;
                Ok(match ty {
                    PlyType::I8 => s[0] as i8 as f64,
                    PlyType::U8 => s[0] as f64,
                    PlyType::I16 => i16::from_le_bytes([s[0], s[1]]) as f64,
                    PlyType::U16 => u16::from_le_bytes([s[0], s[1]]) as f64,
                    PlyType::I32 => i32::from_le_bytes([s[0], s[1], s[2], s[3]]) as f64,
                    PlyType::U32 => u32::from_le_bytes([s[0], s[1], s[2], s[3]]) as f64,
                    PlyType::F32 => f32::from_le_bytes([s[0], s[1], s[2], s[3]]) as f64,
                    PlyType::F64 => f64::from_le_bytes(s.try_into().unwrap()),
                })
            };
            for el in &elements {
                for _ in 0..el.count {
                    let mut xyz = [f64::NAN; 3];
                    let mut face: Vec<usize> = Vec::new();
                    for prop in &el.properties {
                        match prop {
                            PlyProperty::Scalar { ty, name } => {
                                let v = read_scalar(body, &mut off, *ty)?;
                                match name.as_str() {
                                    "x" => xyz[0] = v,
                                    "y" => xyz[1] = v,
                                    "z" => xyz[2] = v,
                                    _ => {}
                                }
                            }
                            PlyProperty::List { count_ty, item_ty } => {
                                let n = read_scalar(body, &mut off, *count_ty)? as usize;
                                for _ in 0..n {
                                    face.push(read_scalar(body, &mut off, *item_ty)? as usize);
                                }
                            }
                        }
                    }
                    if el.name == "vertex" {
                        if xyz.iter().any(|c| c.is_nan()) {
                            return Err(malformed(path, "body", "vertex missing x/y/z"));
                        }
                        vertices.push(Point3::new(xyz[0], xyz[1], xyz[2]));
                    } else if el.name == "face" && !face.is_empty() {
                        if face.len() < 3 {
                            return Err(malformed(path, "body", "face needs >=3 indices"));
                        }
                        push_face(&mut triangles, &face, vertices.len(), path)?;
                    }
                }
            }
        }
    }
    TriangleMesh::new(vertices, triangles).map_err(|e| relocate(e, path))
}

fn find_header_end(bytes: &[u8]) -> Option<usize> {
    let needle = b"end_header";
    let pos = bytes
        .windows(needle.len())
        .position(|w| w == needle)?;
    let mut end = pos + needle.len();
    // Consume the line terminator after end_header ("\n" or "\r\n").
    if bytes.get(end) == Some(&b'\r') {
        end += 1;
    }
    if bytes.get(end) == Some(&b'\n') {
        end += 1;
    }
    Some(end)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBE_OBJ: &str = "\
v -0.5 -0.5 -0.5
v 0.5 -0.5 -0.5
v 0.5 0.5 -0.5
v -0.5 0.5 -0.5
v -0.5 -0.5 0.5
v 0.5 -0.5 0.5
v 0.5 0.5 0.5
v -0.5 0.5 0.5
f 1 3 2
f 1 4 3
f 5 6 7
f 5 7 8
f 1 2 6
f 1 6 5
f 2 3 7
f 2 7 6
f 3 4 8
f 3 8 7
f 4 1 5
f 4 5 8
";

    fn write_tmp(name: &str, contents: &[u8]) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("meshloc-io-tests");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(format!("{}-{}", std::process::id(), name));
        std::fs::write(&path, contents).unwrap();
        path
    }

    #[test]
    fn obj_unit_cube_loads() {
        let path = write_tmp("cube.obj", CUBE_OBJ.as_bytes());
        let mesh = load_mesh(&path).unwrap();
        assert_eq!(mesh.vertices.len(), 8);
        assert_eq!(mesh.triangles.len(), 12);
        assert_eq!(mesh.vertices[0], Point3::new(-0.5, -0.5, -0.5));
        assert_eq!(mesh.triangles[0], [0, 2, 1]);
    }

    #[test]
    fn ply_out_of_range_face_index() {
        let ply = "\
ply
format ascii 1.0
element vertex 8
property float x
property float y
property float z
element face 1
property list uchar int vertex_indices
end_header
0 0 0
1 0 0
1 1 0
0 1 0
0 0 1
1 0 1
1 1 1
0 1 1
3 0 1 9
";
        let path = write_tmp("bad.ply", ply.as_bytes());
        let err = load_mesh(&path).unwrap_err();
        assert!(matches!(
            err,
            Error::IndexOutOfRange {
                index: 9,
                count: 8,
                ..
            }
        ));
    }

    #[test]
    fn unreadable_file_is_distinct_error() {
        let err = load_mesh(Path::new("/definitely/not/here.obj")).unwrap_err();
        assert!(matches!(err, Error::Unreadable { .. }));
    }

    #[test]
    fn malformed_obj_line() {
        let path = write_tmp("mal.obj", b"v 1.0 oops 2.0\n");
        let err = load_mesh(&path).unwrap_err();
        assert!(matches!(err, Error::MalformedRecord { .. }));
    }

    #[test]
    fn roundtrip_obj_bit_exact() {
        let path = write_tmp("rt_src.obj", CUBE_OBJ.as_bytes());
        let mesh = load_mesh(&path).unwrap();
        let out = write_tmp("rt_out.obj", b"");
        save_mesh(&mesh, &out).unwrap();
        let mesh2 = load_mesh(&out).unwrap();
        assert_eq!(mesh.vertices, mesh2.vertices);
        assert_eq!(mesh.triangles, mesh2.triangles);
    }

    #[test]
    fn roundtrip_binary_ply_bit_exact() {
        let path = write_tmp("rt_src2.obj", CUBE_OBJ.as_bytes());
        let mut mesh = load_mesh(&path).unwrap();
        // Exercise non-representable decimals too.
        mesh.vertices[0].x = 0.1 + 0.2;
        let mesh = TriangleMesh::new(mesh.vertices, mesh.triangles).unwrap();
        let out = write_tmp("rt_out.ply", b"");
        save_mesh(&mesh, &out).unwrap();
        let mesh2 = load_mesh(&out).unwrap();
        assert_eq!(mesh.vertices, mesh2.vertices);
        assert_eq!(mesh.triangles, mesh2.triangles);
    }

    #[test]
    fn quad_faces_fan_triangulated() {
        let obj = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
        let path = write_tmp("quad.obj", obj.as_bytes());
        let mesh = load_mesh(&path).unwrap();
        assert_eq!(mesh.triangles.len(), 2);
        assert_eq!(mesh.triangles[0], [0, 1, 2]);
        assert_eq!(mesh.triangles[1], [0, 2, 3]);
    }

    #[test]
    fn ply_float64_binary_vertices() {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(
            b"ply\nformat binary_little_endian 1.0\nelement vertex 3\n\
              property double x\nproperty double y\nproperty double z\n\
              element face 1\nproperty list uchar uint vertex_indices\nend_header\n",
        );
        for v in [[0.0, 0.0, 0.25], [1.0, 0.0, 0.0], [0.0, 1.5, 0.0]] {
            for c in v {
                bytes.extend_from_slice(&f64::to_le_bytes(c));
            }
        }
        bytes.push(3);
        for i in [0u32, 1, 2] {
            bytes.extend_from_slice(&i.to_le_bytes());
        }
        let path = write_tmp("f64.ply", &bytes);
        let mesh = load_mesh(&path).unwrap();
        assert_eq!(mesh.vertices.len(), 3);
        assert_eq!(mesh.vertices[0].z, 0.25);
        assert_eq!(mesh.triangles, vec![[0, 1, 2]]);
    }
}
