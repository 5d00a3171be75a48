//! Signed level-set extraction on a uniform grid.
//!
//! Cells are polygonized face by face: on every cube face the crossing points
//! are joined into directed segments (ambiguous faces are split with the
//! asymptotic decider), and the segments of a cell are chained into closed
//! loops that are fan-triangulated. Vertices live on grid edges and are shared
//! between cells through the edge index, so the result is watertight except
//! where a surface leaves the grid. Each vertex is placed at the root of the
//! exact field along its edge rather than at the linear-interpolation point.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::forms::Point;
use crate::error::{Error, Result};

pub const DEFAULT_HALF_EXTENT: f64 = 4.0;
pub const DEFAULT_RESOLUTION: usize = 96;
pub const DEFAULT_LEVEL: f64 = 0.01;

/// Cube [−h, h]³ sampled with `resolution` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub half_extent: f64,
    pub resolution: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            half_extent: DEFAULT_HALF_EXTENT,
            resolution: DEFAULT_RESOLUTION,
        }
    }
}

impl GridSpec {
    pub fn new(half_extent: f64, resolution: usize) -> Result<Self> {
        let g = Self {
            half_extent,
            resolution,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution < 16 {
            return Err(Error::InvalidParameter(format!(
                "grid resolution {} < 16",
                self.resolution
            )));
        }
        if !(self.half_extent > 0.0) || !self.half_extent.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid half extent {} must be positive",
                self.half_extent
            )));
        }
        Ok(())
    }

    /// Distance between neighbouring samples.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / (self.resolution - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.half_extent + i as f64 * self.spacing()
    }

    fn point(&self, i: usize, j: usize, k: usize) -> Point {
        [self.coord(i), self.coord(j), self.coord(k)]
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.resolution + j) * self.resolution + i
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    /// File-name suffix.
    pub fn suffix(self) -> &'static str {
        match self {
            Sign::Positive => "pos",
            Sign::Negative => "neg",
        }
    }
}

/// Triangle mesh of the surface {field = sign·level}. Triangles are wound so
/// their normals point away from the region where sign·field > level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSetMesh {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[u32; 3]>,
    pub sign: Sign,
    pub level: f64,
}

impl LevelSetMesh {
    pub fn empty(sign: Sign, level: f64) -> Self {
        Self {
            vertices: Vec::new(),
            triangles: Vec::new(),
            sign,
            level,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// True when every triangle index refers to an existing vertex.
    pub fn indices_valid(&self) -> bool {
        let n = self.vertices.len() as u32;
        self.triangles.iter().flatten().all(|&v| v < n)
    }

    /// Undirected edges used by exactly one triangle.
    pub fn open_edges(&self) -> Vec<[u32; 2]> {
        let mut count: HashMap<[u32; 2], u32> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *count.entry([a.min(b), a.max(b)]).or_insert(0) += 1;
            }
        }
        let mut open: Vec<[u32; 2]> = count.into_iter().filter(|&(_, c)| c == 1).map(|(e, _)| e).collect();
        open.sort_unstable();
        open
    }

    /// Signed volume enclosed with the outward winding; meaningful for closed
    /// meshes.
    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|k| self.vertices[k as usize]);
                (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                    + a[2] * (b[0] * c[1] - b[1] * c[0]))
                    / 6.0
            })
            .sum()
    }
}

/// Samples `field` at every grid point, parallel over z-slabs.
pub(crate) fn sample(field: &(dyn Fn(Point) -> f64 + Sync), grid: &GridSpec) -> Vec<f64> {
    let n = grid.resolution;
    let mut values = vec![0.0; n * n * n];
    values.par_chunks_mut(n * n).enumerate().for_each(|(k, slab)| {
        for j in 0..n {
            for i in 0..n {
                slab[j * n + i] = field(grid.point(i, j, k));
            }
        }
    });
    values
}

/// Whether the region sign·field > level reaches the grid boundary.
pub(crate) fn touches_boundary(values: &[f64], grid: &GridSpec, sign: Sign, level: f64) -> bool {
    let n = grid.resolution;
    let last = n - 1;
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let on_face = i == 0 || j == 0 || k == 0 || i == last || j == last || k == last;
                if on_face && sign.factor() * values[grid.index(i, j, k)] > level {
                    return true;
                }
            }
        }
    }
    false
}

/// Corner c of a cell sits at offset (c & 1, (c >> 1) & 1, (c >> 2) & 1).
/// Faces list their corners counter-clockwise seen from outside the cell.
const FACES: [[usize; 4]; 6] = [
    [0, 4, 6, 2], // x = 0
    [1, 3, 7, 5], // x = 1
    [0, 1, 5, 4], // y = 0
    [2, 6, 7, 3], // y = 1
    [0, 2, 3, 1], // z = 0
    [4, 5, 7, 6], // z = 1
];

fn corner_offset(c: usize) -> [usize; 3] {
    [c & 1, (c >> 1) & 1, (c >> 2) & 1]
}

/// Extracts the surface {sign·field = level} from pre-sampled values.
pub(crate) fn polygonize(
    field: &(dyn Fn(Point) -> f64 + Sync),
    values: &[f64],
    grid: &GridSpec,
    sign: Sign,
    level: f64,
) -> LevelSetMesh {
    let n = grid.resolution;
    let s = sign.factor();
    let phi_at = |i: usize, j: usize, k: usize| s * values[grid.index(i, j, k)] - level;
    let phi_exact = |p: Point| s * field(p) - level;

    let mut mesh = LevelSetMesh::empty(sign, level);
    let mut vertex_of_edge: HashMap<usize, u32> = HashMap::new();

    for k in 0..n - 1 {
        for j in 0..n - 1 {
            for i in 0..n - 1 {
                let mut phi = [0.0; 8];
                for (c, v) in phi.iter_mut().enumerate() {
                    let [dx, dy, dz] = corner_offset(c);
                    *v = phi_at(i + dx, j + dy, k + dz);
                }
                let inside = phi.map(|v| v > 0.0);
                if inside.iter().all(|&b| b) || inside.iter().all(|&b| !b) {
                    continue;
                }

                let edge_key = |a: usize, b: usize| {
                    let lo = a.min(b);
                    let axis = (a ^ b).trailing_zeros() as usize;
                    let [dx, dy, dz] = corner_offset(lo);
                    grid.index(i + dx, j + dy, k + dz) * 3 + axis
                };

                let segments = cell_segments(&phi, &inside);
                for lp in chain_loops(&segments) {
                    let ids: Vec<u32> = lp
                        .iter()
                        .map(|&(a, b)| {
                            *vertex_of_edge.entry(edge_key(a, b)).or_insert_with(|| {
                                let pa = corner_point(grid, i, j, k, a);
                                let pb = corner_point(grid, i, j, k, b);
                                mesh.vertices.push(edge_root(&phi_exact, pa, pb, phi[a], phi[b]));
                                (mesh.vertices.len() - 1) as u32
                            })
                        })
                        .collect();
                    for w in 1..ids.len() - 1 {
                        mesh.triangles.push([ids[0], ids[w + 1], ids[w]]);
                    }
                }
            }
        }
    }
    mesh
}

fn corner_point(grid: &GridSpec, i: usize, j: usize, k: usize, c: usize) -> Point {
    let [dx, dy, dz] = corner_offset(c);
    grid.point(i + dx, j + dy, k + dz)
}

/// A cell edge, identified by its two corners (ordered as met on a face).
type CellEdge = (usize, usize);

/// Directed crossing segments on the six faces of a cell. Each runs from a
/// point where the face boundary leaves the inside region to a point where it
/// re-enters, so the inside lies to its left when the face is viewed from
/// outside the cell.
fn cell_segments(phi: &[f64; 8], inside: &[bool; 8]) -> Vec<(CellEdge, CellEdge)> {
    let mut segments = Vec::with_capacity(12);
    for face in FACES {
        let mut crossings: Vec<(usize, bool)> = Vec::with_capacity(4);
        for e in 0..4 {
            let (a, b) = (face[e], face[(e + 1) % 4]);
            if inside[a] != inside[b] {
                crossings.push((e, inside[a]));
            }
        }
        let edge = |e: usize| {
            let (a, b) = (face[e], face[(e + 1) % 4]);
            (a.min(b), a.max(b))
        };
        match crossings.len() {
            0 => {}
            2 => {
                let (exit, entry) = if crossings[0].1 {
                    (crossings[0].0, crossings[1].0)
                } else {
                    (crossings[1].0, crossings[0].0)
                };
                segments.push((edge(exit), edge(entry)));
            }
            4 => {
                let v = face.map(|c| phi[c]);
                let saddle = (v[0] * v[2] - v[1] * v[3]) / (v[0] + v[2] - v[1] - v[3]);
                // Joined inside corners: each exit pairs with the following
                // entry; otherwise with the preceding one.
                let joined = saddle > 0.0;
                for &(e, is_exit) in &crossings {
                    if is_exit {
                        let partner = if joined { (e + 1) % 4 } else { (e + 3) % 4 };
                        segments.push((edge(e), edge(partner)));
                    }
                }
            }
            _ => unreachable!("a face boundary crosses the level an even number of times"),
        }
    }
    segments
}

/// Chains directed segments into closed loops of cell edges.
fn chain_loops(segments: &[(CellEdge, CellEdge)]) -> Vec<Vec<CellEdge>> {
    let mut used = vec![false; segments.len()];
    let mut loops = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let mut lp = vec![segments[start].0];
        let mut current = segments[start].1;
        while current != segments[start].0 {
            lp.push(current);
            let next = (0..segments.len())
                .find(|&s| !used[s] && segments[s].0 == current)
                .expect("crossing segments of a cell close into loops");
            used[next] = true;
            current = segments[next].1;
        }
        loops.push(lp);
    }
    loops
}

/// Root of φ on the segment [pa, pb], bracketed by φ(pa) > 0 ≥ φ(pb) or the
/// reverse, refined by the Illinois variant of regula falsi.
fn edge_root(phi: &dyn Fn(Point) -> f64, pa: Point, pb: Point, fa: f64, fb: f64) -> Point {
    let at = |s: f64| {
        [
            pa[0] + s * (pb[0] - pa[0]),
            pa[1] + s * (pb[1] - pa[1]),
            pa[2] + s * (pb[2] - pa[2]),
        ]
    };
    let (mut lo, mut hi, mut flo, mut fhi) = (0.0_f64, 1.0_f64, fa, fb);
    let mut side = 0i8;
    let mut s = flo / (flo - fhi);
    for _ in 0..64 {
        s = (lo * fhi - hi * flo) / (fhi - flo);
        let fs = phi(at(s));
        if fs == 0.0 || hi - lo < 1e-13 {
            break;
        }
        if (fs > 0.0) == (flo > 0.0) {
            lo = s;
            flo = fs;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = s;
            fhi = fs;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
        if fs.abs() < 1e-15 {
            break;
        }
    }
    at(s)
}
