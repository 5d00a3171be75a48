//! OBJ (ASCII) and PLY (binary little-endian) mesh files.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use spincmv::geometry::{LevelSetMesh, Point, Sign};

use crate::error::{CliError, Result};

pub const POSITIVE_RGB: [u8; 3] = [204, 41, 41];
pub const NEGATIVE_RGB: [u8; 3] = [41, 82, 204];

pub fn color(sign: Sign) -> [u8; 3] {
    match sign {
        Sign::Positive => POSITIVE_RGB,
        Sign::Negative => NEGATIVE_RGB,
    }
}

/// Vertices and faces read back from a file.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshData {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[u32; 3]>,
    /// Per-vertex colors (PLY only).
    pub colors: Vec<[u8; 3]>,
}

fn check(mesh: &LevelSetMesh) -> Result<()> {
    if !mesh.indices_valid() {
        return Err(CliError::InvalidMesh(format!(
            "triangle index out of range for {} vertices",
            mesh.vertices.len()
        )));
    }
    if mesh.vertices.len() > u32::MAX as usize {
        return Err(CliError::InvalidMesh("too many vertices".into()));
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| CliError::io(path, e))?))
}

pub fn write_obj(mesh: &LevelSetMesh, scale: f64, path: &Path) -> Result<()> {
    check(mesh)?;
    let mut w = create(path)?;
    let io = |e| CliError::io(path, e);
    writeln!(w, "# spincmv level set, sign {}, level {}", mesh.sign.suffix(), mesh.level).map_err(io)?;
    writeln!(w, "o {}", mesh.sign.suffix()).map_err(io)?;
    for v in &mesh.vertices {
        writeln!(w, "v {} {} {}", v[0] * scale, v[1] * scale, v[2] * scale).map_err(io)?;
    }
    for t in &mesh.triangles {
        writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn write_ply(mesh: &LevelSetMesh, scale: f64, path: &Path) -> Result<()> {
    check(mesh)?;
    let mut w = create(path)?;
    let io = |e| CliError::io(path, e);
    let header = format!(
        "ply\n\
         format binary_little_endian 1.0\n\
         comment spincmv level set, sign {}, level {}\n\
         element vertex {}\n\
         property float x\n\
         property float y\n\
         property float z\n\
         property uchar red\n\
         property uchar green\n\
         property uchar blue\n\
         element face {}\n\
         property list uchar uint vertex_indices\n\
         end_header\n",
        mesh.sign.suffix(),
        mesh.level,
        mesh.vertices.len(),
        mesh.triangles.len()
    );
    w.write_all(header.as_bytes()).map_err(io)?;
    let rgb = color(mesh.sign);
    for v in &mesh.vertices {
        for x in v {
            w.write_all(&((x * scale) as f32).to_le_bytes()).map_err(io)?;
        }
        w.write_all(&rgb).map_err(io)?;
    }
    for t in &mesh.triangles {
        w.write_all(&[3u8]).map_err(io)?;
        for k in t {
            w.write_all(&k.to_le_bytes()).map_err(io)?;
        }
    }
    w.flush().map_err(io)
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).map_err(|e| CliError::io(path, e))?))
}

fn validate(data: MeshData, path: &Path) -> Result<MeshData> {
    let n = data.vertices.len() as u32;
    if data.triangles.iter().flatten().any(|&k| k >= n) {
        return Err(CliError::parse(path, "face index out of range"));
    }
    Ok(data)
}

pub fn read_obj(path: &Path) -> Result<MeshData> {
    let mut data = MeshData {
        vertices: Vec::new(),
        triangles: Vec::new(),
        colors: Vec::new(),
    };
    for (number, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        let bad = |what: &str| CliError::parse(path, format!("line {}: {what}", number + 1));
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("v") => {
                let v: Vec<f64> = fields.map(str::parse).collect::<std::result::Result<_, _>>().map_err(|_| bad("bad vertex"))?;
                let v: Point = v.try_into().map_err(|_| bad("vertex needs three coordinates"))?;
                data.vertices.push(v);
            }
            Some("f") => {
                let f: Vec<u32> = fields.map(str::parse).collect::<std::result::Result<_, _>>().map_err(|_| bad("bad face"))?;
                let f: [u32; 3] = f.try_into().map_err(|_| bad("face is not a triangle"))?;
                if f.contains(&0) {
                    return Err(bad("face index 0"));
                }
                data.triangles.push(f.map(|k| k - 1));
            }
            Some("o") | Some("#") | None => {}
            Some(other) => return Err(bad(&format!("unknown record {other:?}"))),
        }
    }
    validate(data, path)
}

pub fn read_ply(path: &Path) -> Result<MeshData> {
    let mut r = open(path)?;
    let mut n_vertices = None;
    let mut n_faces = None;
    let mut first = true;
    loop {
        let mut line = String::new();
        if r.read_line(&mut line).map_err(|e| CliError::io(path, e))? == 0 {
            return Err(CliError::parse(path, "header ended early"));
        }
        let line = line.trim_end();
        if first {
            if line != "ply" {
                return Err(CliError::parse(path, "not a PLY file"));
            }
            first = false;
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["end_header"] => break,
            ["format", f, _] if *f != "binary_little_endian" => {
                return Err(CliError::parse(path, format!("unsupported format {f}")))
            }
            ["element", "vertex", n] => n_vertices = n.parse::<usize>().ok(),
            ["element", "face", n] => n_faces = n.parse::<usize>().ok(),
            _ => {}
        }
    }
    let (nv, nf) = match (n_vertices, n_faces) {
        (Some(v), Some(f)) => (v, f),
        _ => return Err(CliError::parse(path, "missing element counts")),
    };
    let truncated = |_| CliError::parse(path, "truncated body");
    let mut data = MeshData {
        vertices: Vec::with_capacity(nv),
        triangles: Vec::with_capacity(nf),
        colors: Vec::with_capacity(nv),
    };
    let mut buf = [0u8; 15];
    for _ in 0..nv {
        r.read_exact(&mut buf).map_err(truncated)?;
        let x = |k: usize| f32::from_le_bytes(buf[4 * k..4 * k + 4].try_into().unwrap()) as f64;
        data.vertices.push([x(0), x(1), x(2)]);
        data.colors.push([buf[12], buf[13], buf[14]]);
    }
    let mut face = [0u8; 13];
    for _ in 0..nf {
        r.read_exact(&mut face).map_err(truncated)?;
        if face[0] != 3 {
            return Err(CliError::parse(path, "face is not a triangle"));
        }
        let k = |i: usize| u32::from_le_bytes(face[1 + 4 * i..5 + 4 * i].try_into().unwrap());
        data.triangles.push([k(0), k(1), k(2)]);
    }
    let mut rest = Vec::new();
    r.read_to_end(&mut rest).map_err(|e| CliError::io(path, e))?;
    if !rest.is_empty() {
        return Err(CliError::parse(path, "trailing bytes after the last face"));
    }
    validate(data, path)
}
