//! Level-set extraction on the cell-center lattice.
//!
//! d = 2: marching squares over squares of four adjacent cell centers, with
//! the ambiguous saddle cases resolved by the center average. d = 3: marching
//! cubes over a fixed 6-tetrahedra decomposition of each lattice cell; the
//! decomposition shares face diagonals between neighboring cells, so the
//! triangulation is watertight and has no ambiguous configurations. Crossing
//! positions are linear interpolations along lattice edges.
//!
//! On axisymmetric grids that touch the axis the lattice is mirror-padded by
//! one virtual column at rho = -h/2, so contours close across the axis, and
//! every element weight carries the 2*pi*rho revolution factor.
//!
//! Element normals are sampled from -Du/|Du| interpolated to element
//! midpoints; elements where |Du| falls below the caller's floor are flagged
//! degenerate. Orientation of the emitted geometry puts the region above the
//! level on the inside, so geometric normals agree with the sampled ones.

use crate::exec;
use crate::grid::{Coords, Grid, ScalarField, TWO_PI};

#[derive(Clone, Debug)]
pub enum Elements {
    /// Index pairs into `vertices`; inside lies left of a -> b.
    Segments(Vec<[u32; 2]>),
    /// Index triples; right-handed winding points away from the inside.
    Triangles(Vec<[u32; 3]>),
}

/// A discrete level set with per-element quadrature data.
#[derive(Clone, Debug)]
pub struct LevelSetContour {
    pub level: f64,
    pub vertices: Vec<[f64; 3]>,
    pub elements: Elements,
    /// Length (d = 2, times 2*pi*rho when axisymmetric) or area per element.
    pub weights: Vec<f64>,
    pub midpoints: Vec<[f64; 3]>,
    /// Unit -Du/|Du| sampled at midpoints; zero vector when degenerate.
    pub normals: Vec<[f64; 3]>,
    pub degenerate: Vec<bool>,
}

impl LevelSetContour {
    pub fn element_count(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Total measure: length or area, with revolution factors included.
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Geometric unit normal of one element (from its vertices, not the field).
    pub fn geometric_normal(&self, e: usize) -> [f64; 3] {
        match &self.elements {
            Elements::Segments(segs) => {
                let [a, b] = segs[e];
                let (pa, pb) = (self.vertices[a as usize], self.vertices[b as usize]);
                let d = [pb[0] - pa[0], pb[1] - pa[1]];
                let len = (d[0] * d[0] + d[1] * d[1]).sqrt().max(1e-300);
                // right-hand side of the direction: outward
                [d[1] / len, -d[0] / len, 0.0]
            }
            Elements::Triangles(tris) => {
                let [a, b, c] = tris[e];
                let (pa, pb, pc) = (
                    self.vertices[a as usize],
                    self.vertices[b as usize],
                    self.vertices[c as usize],
                );
                let u = [pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2]];
                let v = [pc[0] - pa[0], pc[1] - pa[1], pc[2] - pa[2]];
                let n = cross(u, v);
                let len = norm3(n).max(1e-300);
                [n[0] / len, n[1] / len, n[2] / len]
            }
        }
    }
}

/// Extract the level set `{field = level}`.
///
/// `values` must be meaningful wherever the level set can pass; for arrival
/// times this means the ghost-extended field (negative outside the domain).
/// `eta` is the gradient floor below which an element is flagged degenerate.
pub fn extract_level_set(field: &ScalarField, level: f64, eta: f64) -> LevelSetContour {
    let grad = cell_gradients(field);
    match field.grid.dim() {
        2 => marching_squares(field, &grad, level, eta),
        3 => marching_cubes(field, &grad, level, eta),
        d => panic!("contouring expects dim 2 or 3, got {d}"),
    }
}

/// Cell-centered gradient by centered differences, one-sided at the box
/// edges, mirrored across the axis on axisymmetric grids.
pub fn cell_gradients(field: &ScalarField) -> Vec<[f64; 3]> {
    let g = &field.grid;
    let d = g.dim();
    let h = g.h;
    let v = &field.values;
    let mirror = g.mirrored_axis();
    let mut out = vec![[0.0; 3]; g.len()];
    exec::fill_indexed(&mut out, |idx| {
        let m = g.multi(idx);
        let mut grad = [0.0; 3];
        for a in 0..d {
            let i = m[a];
            let n = g.dims[a];
            let s = g.stride(a);
            grad[a] = if i > 0 && i + 1 < n {
                (v[idx + s] - v[idx - s]) / (2.0 * h)
            } else if i == 0 {
                if a == 0 && mirror {
                    // value at -h/2 equals value at +h/2
                    (v[idx + s] - v[idx]) / (2.0 * h)
                } else {
                    (v[idx + s] - v[idx]) / h
                }
            } else {
                (v[idx] - v[idx - s]) / h
            };
        }
        grad
    });
    out
}

/// Multilinear interpolation of per-cell vectors at a point, on the
/// cell-center lattice (clamped at the box edge).
pub fn sample_vector(grid: &Grid, vals: &[[f64; 3]], x: &[f64]) -> [f64; 3] {
    let d = grid.dim();
    let mut base = [0usize; 4];
    let mut frac = [0.0f64; 4];
    for a in 0..d {
        let t = (x[a] - grid.origin[a]) / grid.h - 0.5;
        let clamped = t.clamp(0.0, (grid.dims[a] - 1) as f64);
        let i = (clamped.floor() as usize).min(grid.dims[a] - 2);
        base[a] = i;
        frac[a] = clamped - i as f64;
    }
    let mut out = [0.0; 3];
    for corner in 0..(1usize << d) {
        let mut w = 1.0;
        let mut idx = 0;
        for a in 0..d {
            let hi = (corner >> a) & 1;
            w *= if hi == 1 { frac[a] } else { 1.0 - frac[a] };
            idx += (base[a] + hi) * grid.stride(a);
        }
        for c in 0..3 {
            out[c] += w * vals[idx][c];
        }
    }
    out
}

/// Scalar version of [`sample_vector`].
pub fn sample_scalar(grid: &Grid, vals: &[f64], x: &[f64]) -> f64 {
    let d = grid.dim();
    let mut base = [0usize; 4];
    let mut frac = [0.0f64; 4];
    for a in 0..d {
        let t = (x[a] - grid.origin[a]) / grid.h - 0.5;
        let clamped = t.clamp(0.0, (grid.dims[a] - 1) as f64);
        let i = (clamped.floor() as usize).min(grid.dims[a] - 2);
        base[a] = i;
        frac[a] = clamped - i as f64;
    }
    let mut out = 0.0;
    for corner in 0..(1usize << d) {
        let mut w = 1.0;
        let mut idx = 0;
        for a in 0..d {
            let hi = (corner >> a) & 1;
            w *= if hi == 1 { frac[a] } else { 1.0 - frac[a] };
            idx += (base[a] + hi) * grid.stride(a);
        }
        out += w * vals[idx];
    }
    out
}

// ---- marching squares ----

/// Segment connectivity per sign case, as (from-edge, to-edge) pairs.
/// Edges: 0 bottom (c0-c1), 1 right (c1-c2), 2 top (c2-c3), 3 left (c3-c0).
/// Corners: bit 0 = (0,0), bit 1 = (1,0), bit 2 = (1,1), bit 3 = (0,1).
/// Cases 5 and 10 are resolved at run time by the center average.
const MS_SEGMENTS: [&[(usize, usize)]; 16] = [
    &[],
    &[(0, 3)],
    &[(1, 0)],
    &[(1, 3)],
    &[(2, 1)],
    &[], // ambiguous, handled separately
    &[(2, 0)],
    &[(2, 3)],
    &[(3, 2)],
    &[(0, 2)],
    &[], // ambiguous, handled separately
    &[(1, 2)],
    &[(3, 1)],
    &[(0, 1)],
    &[(3, 0)],
    &[],
];

fn marching_squares(
    field: &ScalarField,
    grad: &[[f64; 3]],
    level: f64,
    eta: f64,
) -> LevelSetContour {
    let g = &field.grid;
    let (n0, n1) = (g.dims[0], g.dims[1]);
    let mirror = g.mirrored_axis();
    // lattice index -> (cell index along axis 0, coordinate)
    let pad = usize::from(mirror);
    let l0 = n0 + pad; // lattice points along axis 0

    let cell0 = |il: usize| -> usize {
        if mirror && il == 0 {
            0
        } else {
            il - pad
        }
    };
    let coord0 = |il: usize| -> f64 {
        if mirror && il == 0 {
            g.origin[0] - 0.5 * g.h
        } else {
            g.coord(0, il - pad)
        }
    };
    let value = |il: usize, j: usize| -> f64 { field.values[cell0(il) + j * g.stride(1)] };

    // one strip of squares per j, processed in parallel, stitched in order
    let strips = exec::map_indexed(n1 - 1, |j| {
        let mut verts: Vec<[f64; 3]> = Vec::new();
        let mut segs: Vec<[u32; 2]> = Vec::new();
        for il in 0..l0 - 1 {
            let c = [
                (coord0(il), g.coord(1, j), value(il, j)),
                (coord0(il + 1), g.coord(1, j), value(il + 1, j)),
                (coord0(il + 1), g.coord(1, j + 1), value(il + 1, j + 1)),
                (coord0(il), g.coord(1, j + 1), value(il, j + 1)),
            ];
            let mut case = 0usize;
            for (bit, corner) in c.iter().enumerate() {
                if corner.2 > level {
                    case |= 1 << bit;
                }
            }
            if case == 0 || case == 15 {
                continue;
            }
            let edge_point = |e: usize| -> [f64; 3] {
                let (a, b) = match e {
                    0 => (0, 1),
                    1 => (1, 2),
                    2 => (2, 3),
                    _ => (3, 0),
                };
                let (pa, pb) = (c[a], c[b]);
                let denom = pb.2 - pa.2;
                let s = if denom.abs() < 1e-300 { 0.5 } else { (level - pa.2) / denom };
                let s = s.clamp(0.0, 1.0);
                [pa.0 + s * (pb.0 - pa.0), pa.1 + s * (pb.1 - pa.1), 0.0]
            };
            let pairs: &[(usize, usize)] = match case {
                5 => {
                    let center = 0.25 * (c[0].2 + c[1].2 + c[2].2 + c[3].2);
                    if center > level {
                        &[(0, 1), (2, 3)]
                    } else {
                        &[(0, 3), (2, 1)]
                    }
                }
                10 => {
                    let center = 0.25 * (c[0].2 + c[1].2 + c[2].2 + c[3].2);
                    if center > level {
                        &[(3, 0), (1, 2)]
                    } else {
                        &[(1, 0), (3, 2)]
                    }
                }
                _ => MS_SEGMENTS[case],
            };
            for &(ea, eb) in pairs {
                let pa = edge_point(ea);
                let pb = edge_point(eb);
                let len = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
                if len < 1e-300 {
                    continue;
                }
                let v0 = verts.len() as u32;
                verts.push(pa);
                verts.push(pb);
                segs.push([v0, v0 + 1]);
            }
        }
        (verts, segs)
    });

    let mut vertices = Vec::new();
    let mut segments = Vec::new();
    for (vs, ss) in strips {
        let off = vertices.len() as u32;
        vertices.extend(vs);
        segments.extend(ss.into_iter().map(|[a, b]| [a + off, b + off]));
    }

    finish_segments(field, grad, level, eta, vertices, segments)
}

fn finish_segments(
    field: &ScalarField,
    grad: &[[f64; 3]],
    level: f64,
    eta: f64,
    vertices: Vec<[f64; 3]>,
    segments: Vec<[u32; 2]>,
) -> LevelSetContour {
    let g = &field.grid;
    let axisym = g.coords == Coords::Axisym;
    let n = segments.len();
    let mut weights = vec![0.0; n];
    let mut midpoints = vec![[0.0; 3]; n];
    let mut normals = vec![[0.0; 3]; n];
    let mut degenerate = vec![false; n];
    for (e, [a, b]) in segments.iter().enumerate() {
        let (pa, pb) = (vertices[*a as usize], vertices[*b as usize]);
        let mid = [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1]), 0.0];
        let len = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
        weights[e] = if axisym {
            TWO_PI * mid[0].max(0.0) * len
        } else {
            len
        };
        midpoints[e] = mid;
        let gv = sample_vector(g, grad, &mid[..2]);
        let gn = (gv[0] * gv[0] + gv[1] * gv[1]).sqrt();
        if gn < eta.max(1e-300) {
            degenerate[e] = true;
        } else {
            normals[e] = [-gv[0] / gn, -gv[1] / gn, 0.0];
        }
    }
    LevelSetContour {
        level,
        vertices,
        elements: Elements::Segments(segments),
        weights,
        midpoints,
        normals,
        degenerate,
    }
}

// ---- marching cubes (6-tetrahedra decomposition) ----

/// Cube corners in local (dx, dy, dz) offsets.
const CUBE_CORNERS: [[usize; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [1, 1, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 0, 1],
    [1, 1, 1],
    [0, 1, 1],
];

/// Six tetrahedra around the main diagonal 0-6; every cube uses the same
/// decomposition, so shared faces get matching diagonals.
const CUBE_TETS: [[usize; 4]; 6] = [
    [0, 1, 2, 6],
    [0, 2, 3, 6],
    [0, 3, 7, 6],
    [0, 7, 4, 6],
    [0, 4, 5, 6],
    [0, 5, 1, 6],
];

fn marching_cubes(
    field: &ScalarField,
    grad: &[[f64; 3]],
    level: f64,
    eta: f64,
) -> LevelSetContour {
    let g = &field.grid;
    let (n0, n1, n2) = (g.dims[0], g.dims[1], g.dims[2]);
    let (s0, s1, s2) = (g.stride(0), g.stride(1), g.stride(2));
    let v = &field.values;

    let slabs = exec::map_indexed(n2 - 1, |k| {
        let mut verts: Vec<[f64; 3]> = Vec::new();
        let mut tris: Vec<[u32; 3]> = Vec::new();
        let mut cp = [[0.0f64; 4]; 8]; // x, y, z, value per corner
        for j in 0..n1 - 1 {
            for i in 0..n0 - 1 {
                let base = i * s0 + j * s1 + k * s2;
                let mut any_in = false;
                let mut any_out = false;
                for (c, off) in CUBE_CORNERS.iter().enumerate() {
                    let idx = base + off[0] * s0 + off[1] * s1 + off[2] * s2;
                    let val = v[idx];
                    cp[c] = [
                        g.coord(0, i + off[0]),
                        g.coord(1, j + off[1]),
                        g.coord(2, k + off[2]),
                        val,
                    ];
                    if val > level {
                        any_in = true;
                    } else {
                        any_out = true;
                    }
                }
                if !(any_in && any_out) {
                    continue;
                }
                for tet in &CUBE_TETS {
                    emit_tet_triangles(&cp, tet, level, &mut verts, &mut tris);
                }
            }
        }
        (verts, tris)
    });

    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (vs, ts) in slabs {
        let off = vertices.len() as u32;
        vertices.extend(vs);
        triangles.extend(ts.into_iter().map(|[a, b, c]| [a + off, b + off, c + off]));
    }

    let n = triangles.len();
    let mut weights = vec![0.0; n];
    let mut midpoints = vec![[0.0; 3]; n];
    let mut normals = vec![[0.0; 3]; n];
    let mut degenerate = vec![false; n];
    for (e, [a, b, c]) in triangles.iter().enumerate() {
        let (pa, pb, pc) = (
            vertices[*a as usize],
            vertices[*b as usize],
            vertices[*c as usize],
        );
        let u = [pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2]];
        let w = [pc[0] - pa[0], pc[1] - pa[1], pc[2] - pa[2]];
        let cr = cross(u, w);
        weights[e] = 0.5 * norm3(cr);
        let mid = [
            (pa[0] + pb[0] + pc[0]) / 3.0,
            (pa[1] + pb[1] + pc[1]) / 3.0,
            (pa[2] + pb[2] + pc[2]) / 3.0,
        ];
        midpoints[e] = mid;
        let gv = sample_vector(g, grad, &mid);
        let gn = norm3(gv);
        if gn < eta.max(1e-300) {
            degenerate[e] = true;
        } else {
            normals[e] = [-gv[0] / gn, -gv[1] / gn, -gv[2] / gn];
        }
    }
    LevelSetContour {
        level,
        vertices,
        elements: Elements::Triangles(triangles),
        weights,
        midpoints,
        normals,
        degenerate,
    }
}

fn emit_tet_triangles(
    cp: &[[f64; 4]; 8],
    tet: &[usize; 4],
    level: f64,
    verts: &mut Vec<[f64; 3]>,
    tris: &mut Vec<[u32; 3]>,
) {
    let mut inside = [false; 4];
    let mut n_in = 0;
    for (t, &c) in tet.iter().enumerate() {
        inside[t] = cp[c][3] > level;
        if inside[t] {
            n_in += 1;
        }
    }
    if n_in == 0 || n_in == 4 {
        return;
    }
    let point = |a: usize, b: usize| -> [f64; 3] {
        // crossing on the tet edge between local corners a (inside) and b
        let (pa, pb) = (cp[tet[a]], cp[tet[b]]);
        let denom = pb[3] - pa[3];
        let s = if denom.abs() < 1e-300 { 0.5 } else { (level - pa[3]) / denom };
        let s = s.clamp(0.0, 1.0);
        [
            pa[0] + s * (pb[0] - pa[0]),
            pa[1] + s * (pb[1] - pa[1]),
            pa[2] + s * (pb[2] - pa[2]),
        ]
    };
    let mut push_tri = |p0: [f64; 3], p1: [f64; 3], p2: [f64; 3], inward: [f64; 3]| {
        // orient so the normal points away from the inside region
        let u = [p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]];
        let w = [p2[0] - p0[0], p2[1] - p0[1], p2[2] - p0[2]];
        let n = cross(u, w);
        if norm3(n) < 1e-300 {
            return;
        }
        let centroid = [
            (p0[0] + p1[0] + p2[0]) / 3.0,
            (p0[1] + p1[1] + p2[1]) / 3.0,
            (p0[2] + p1[2] + p2[2]) / 3.0,
        ];
        let to_in = [
            inward[0] - centroid[0],
            inward[1] - centroid[1],
            inward[2] - centroid[2],
        ];
        let flip = n[0] * to_in[0] + n[1] * to_in[1] + n[2] * to_in[2] > 0.0;
        let v0 = verts.len() as u32;
        verts.push(p0);
        if flip {
            verts.push(p2);
            verts.push(p1);
        } else {
            verts.push(p1);
            verts.push(p2);
        }
        tris.push([v0, v0 + 1, v0 + 2]);
    };

    if n_in == 1 || n_in == 3 {
        let lone = (0..4).find(|&t| inside[t] == (n_in == 1)).unwrap();
        let others: Vec<usize> = (0..4).filter(|&t| t != lone).collect();
        let p0 = point(lone, others[0]);
        let p1 = point(lone, others[1]);
        let p2 = point(lone, others[2]);
        // the inside reference point: the lone corner when it is inside,
        // otherwise any inside corner
        let inref = if n_in == 1 { tet[lone] } else { tet[others[0]] };
        let q = cp[inref];
        push_tri(p0, p1, p2, [q[0], q[1], q[2]]);
    } else {
        // 2-2 split: quad with corners ordered so neighbors share a tet corner
        let ins: Vec<usize> = (0..4).filter(|&t| inside[t]).collect();
        let outs: Vec<usize> = (0..4).filter(|&t| !inside[t]).collect();
        let (a, b) = (ins[0], ins[1]);
        let (c, d) = (outs[0], outs[1]);
        let q0 = point(a, c);
        let q1 = point(a, d);
        let q2 = point(b, d);
        let q3 = point(b, c);
        let pa = cp[tet[a]];
        let pb = cp[tet[b]];
        let inward = [
            0.5 * (pa[0] + pb[0]),
            0.5 * (pa[1] + pb[1]),
            0.5 * (pa[2] + pb[2]),
        ];
        push_tri(q0, q1, q2, inward);
        push_tri(q0, q2, q3, inward);
    }
}

fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

// ---- export ----

/// Segment soup as CSV rows `x0,y0,x1,y1`.
pub fn write_segments_csv(contour: &LevelSetContour, w: &mut impl std::io::Write) -> std::io::Result<()> {
    writeln!(w, "x0,y0,x1,y1")?;
    if let Elements::Segments(segs) = &contour.elements {
        for [a, b] in segs {
            let pa = contour.vertices[*a as usize];
            let pb = contour.vertices[*b as usize];
            writeln!(w, "{:.17e},{:.17e},{:.17e},{:.17e}", pa[0], pa[1], pb[0], pb[1])?;
        }
    }
    Ok(())
}

/// Triangle soup as Wavefront OBJ.
pub fn write_triangles_obj(contour: &LevelSetContour, w: &mut impl std::io::Write) -> std::io::Result<()> {
    if let Elements::Triangles(tris) = &contour.elements {
        for v in &contour.vertices {
            writeln!(w, "v {:.17e} {:.17e} {:.17e}", v[0], v[1], v[2])?;
        }
        for [a, b, c] in tris {
            writeln!(w, "f {} {} {}", a + 1, b + 1, c + 1)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use approx::assert_relative_eq;

    fn disk_field(n: usize) -> ScalarField {
        let g = GridSpec::around(&[-1.0, -1.0], &[1.0, 1.0], n, Coords::Cartesian)
            .unwrap()
            .build();
        // u = (1 - r^2)/2, negative outside the unit disk as an extension
        ScalarField::from_fn(&g, |x| 0.5 * (1.0 - x[0] * x[0] - x[1] * x[1]))
    }

    #[test]
    fn circle_length_and_normals() {
        let f = disk_field(129);
        let h = f.grid.h;
        // {u = 0.375} is the circle r = 0.5
        let c = extract_level_set(&f, 0.375, 1e-6);
        assert!(!c.is_empty());
        assert_relative_eq!(
            c.total_weight(),
            std::f64::consts::PI,
            max_relative = 2e-3
        );
        // sampled normals match segment geometry within an angle of ~5h
        for e in 0..c.element_count() {
            if c.degenerate[e] {
                continue;
            }
            let ng = c.geometric_normal(e);
            let ns = c.normals[e];
            let dot = (ng[0] * ns[0] + ng[1] * ns[1]).clamp(-1.0, 1.0);
            assert!(dot.acos() < 5.0 * h, "angle {} at element {e}", dot.acos());
            // outward for the disk: aligned with +x direction at the midpoint
            let m = c.midpoints[e];
            let r = (m[0] * m[0] + m[1] * m[1]).sqrt();
            assert!((ns[0] * m[0] + ns[1] * m[1]) / r > 0.9);
            // unit length
            assert_relative_eq!(ns[0] * ns[0] + ns[1] * ns[1], 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn empty_contour_above_max() {
        let f = disk_field(65);
        let c = extract_level_set(&f, 0.9, 1e-6);
        assert!(c.is_empty());
        assert_eq!(c.total_weight(), 0.0);
    }

    #[test]
    fn sphere_area_cartesian() {
        let g = GridSpec::around(&[-1.0; 3], &[1.0; 3], 65, Coords::Cartesian)
            .unwrap()
            .build();
        let f = ScalarField::from_fn(&g, |x| {
            0.25 * (1.0 - x.iter().map(|v| v * v).sum::<f64>())
        });
        // {u = 0.1875} is the sphere r = 0.5
        let c = extract_level_set(&f, 0.1875, 1e-6);
        let area = c.total_weight();
        assert_relative_eq!(area, std::f64::consts::PI, max_relative = 5e-3);
        // orientation consistency: closed surface, so the divergence-theorem
        // volume matches the ball volume and constant-field flux vanishes
        let mut vol = 0.0;
        let mut flux = [0.0; 3];
        for e in 0..c.element_count() {
            let n = c.geometric_normal(e);
            let m = c.midpoints[e];
            let w = c.weights[e];
            vol += w * (m[0] * n[0] + m[1] * n[1] + m[2] * n[2]) / 3.0;
            for a in 0..3 {
                flux[a] += w * n[a];
            }
        }
        let exact_vol = 4.0 / 3.0 * std::f64::consts::PI * 0.125;
        assert_relative_eq!(vol, exact_vol, max_relative = 5e-3);
        for a in 0..3 {
            assert!(flux[a].abs() < 1e-10 * area.max(1.0), "flux {a} = {}", flux[a]);
        }
    }

    #[test]
    fn sphere_area_axisym_closes_across_axis() {
        let g = GridSpec::around(&[0.0, -1.0], &[1.0, 1.0], 129, Coords::Axisym)
            .unwrap()
            .build();
        assert!(g.mirrored_axis());
        let f = ScalarField::from_fn(&g, |x| {
            0.25 * (1.0 - x[0] * x[0] - x[1] * x[1])
        });
        let c = extract_level_set(&f, 0.1875, 1e-6);
        // revolved half-circle r = 0.5: area 4 pi r^2 = pi
        assert_relative_eq!(c.total_weight(), std::f64::consts::PI, max_relative = 5e-3);
    }

    #[test]
    fn area_error_shrinks_under_refinement() {
        let mut errs = Vec::new();
        for n in [33, 65, 129] {
            let f = disk_field(n);
            let c = extract_level_set(&f, 0.375, 1e-6);
            errs.push((c.total_weight() - std::f64::consts::PI).abs());
        }
        assert!(errs[2] < errs[0], "refinement must reduce error: {errs:?}");
    }
}
