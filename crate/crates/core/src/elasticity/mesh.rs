use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fields::Mask2;

/// Smallest allowed triangle area after boundary snapping, relative to the
/// unsnapped area `h^2 / 2`.
const MIN_AREA_FRACTION: f64 = 0.05;

/// Structured triangulation of a masked domain.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    /// Indices of vertices on the domain boundary, ascending.
    pub boundary_vertices: Vec<usize>,
    h: f64,
    origin: [f64; 2],
    ncx: usize,
    ncy: usize,
    /// First triangle of each lattice cell, or `usize::MAX` for empty cells.
    cell_first_tri: Vec<usize>,
    domain: Mask2,
}

impl TriMesh {
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn domain(&self) -> &Mask2 {
        &self.domain
    }

    pub fn is_boundary(&self) -> Vec<bool> {
        let mut b = vec![false; self.vertices.len()];
        for &v in &self.boundary_vertices {
            b[v] = true;
        }
        b
    }

    /// Twice the signed area of triangle `t`.
    pub fn double_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|v| self.vertices[v]);
        (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
    }

    pub fn area(&self, t: usize) -> f64 {
        0.5 * self.double_area(t)
    }

    pub fn centroid(&self, t: usize) -> [f64; 2] {
        let [a, b, c] = self.triangles[t].map(|v| self.vertices[v]);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.area(t)).sum()
    }

    /// Barycentric coordinates of `p` in triangle `t`.
    pub fn barycentric(&self, t: usize, p: [f64; 2]) -> [f64; 3] {
        let [a, b, c] = self.triangles[t].map(|v| self.vertices[v]);
        let d = self.double_area(t);
        let l1 = ((b[0] - p[0]) * (c[1] - p[1]) - (c[0] - p[0]) * (b[1] - p[1])) / d;
        let l2 = ((c[0] - p[0]) * (a[1] - p[1]) - (a[0] - p[0]) * (c[1] - p[1])) / d;
        [l1, l2, 1.0 - l1 - l2]
    }

    fn cell_of(&self, p: [f64; 2]) -> (i64, i64) {
        (
            ((p[0] - self.origin[0]) / self.h).floor() as i64,
            ((p[1] - self.origin[1]) / self.h).floor() as i64,
        )
    }

    fn triangles_near(&self, p: [f64; 2]) -> impl Iterator<Item = usize> + '_ {
        let (ci, cj) = self.cell_of(p);
        (-1..=1).flat_map(move |dj| {
            (-1..=1).flat_map(move |di| {
                let (i, j) = (ci + di, cj + dj);
                let ok = i >= 0 && j >= 0 && (i as usize) < self.ncx && (j as usize) < self.ncy;
                let t = if ok {
                    self.cell_first_tri[j as usize * self.ncx + i as usize]
                } else {
                    usize::MAX
                };
                (t != usize::MAX).then(|| [t, t + 1]).into_iter().flatten()
            })
        })
    }

    /// Triangle containing `p`, if any.
    pub fn locate(&self, p: [f64; 2]) -> Option<usize> {
        const EPS: f64 = 1e-10;
        self.triangles_near(p)
            .find(|&t| self.barycentric(t, p).iter().all(|&l| l >= -EPS))
    }

    /// Triangle whose centroid is closest to `p`.
    pub fn nearest(&self, p: [f64; 2]) -> usize {
        let dist = |t: usize| {
            let c = self.centroid(t);
            (c[0] - p[0]).powi(2) + (c[1] - p[1]).powi(2)
        };
        let local = self
            .triangles_near(p)
            .min_by(|&a, &b| dist(a).total_cmp(&dist(b)));
        local.unwrap_or_else(|| {
            (0..self.triangles.len())
                .min_by(|&a, &b| dist(a).total_cmp(&dist(b)))
                .expect("mesh has triangles")
        })
    }

    /// OFF-style text: `OFF`, counts, `x y 0` rows, `3 a b c` rows.
    pub fn write_off(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let io = |e| Error::io(path, e);
        writeln!(w, "OFF").map_err(io)?;
        writeln!(w, "{} {} 0", self.vertices.len(), self.triangles.len()).map_err(io)?;
        for [x, y] in &self.vertices {
            writeln!(w, "{x} {y} 0").map_err(io)?;
        }
        for [a, b, c] in &self.triangles {
            writeln!(w, "3 {a} {b} {c}").map_err(io)?;
        }
        w.flush().map_err(io)
    }
}

/// Default element size: 0.5% of the larger bounding-box dimension.
pub fn default_target_h(mask: &Mask2) -> f64 {
    let [x0, y0, x1, y1] = mask.bounding_box();
    0.005 * (x1 - x0).max(y1 - y0)
}

/// Triangulates the mask domain with squares of side `target_h`, each split
/// into two triangles; outermost vertices are snapped onto the boundary.
pub fn build_mesh(mask: &Mask2, target_h: f64) -> Result<TriMesh> {
    if !(target_h > 0.0 && target_h.is_finite()) {
        return Err(Error::param(format!("target_h must be positive, got {target_h}")));
    }
    let [x0, y0, x1, y1] = mask.bounding_box();
    if !(x1 > x0 && y1 > y0) {
        return Err(Error::Degenerate("mask has an empty boundary".into()));
    }
    let h = target_h;
    let ncx = ((x1 - x0) / h).ceil().max(1.0) as usize;
    let ncy = ((y1 - y0) / h).ceil().max(1.0) as usize;
    let ox = 0.5 * (x0 + x1) - 0.5 * ncx as f64 * h;
    let oy = 0.5 * (y0 + y1) - 0.5 * ncy as f64 * h;

    let kept: Vec<bool> = (0..ncx * ncy)
        .map(|c| {
            let (i, j) = (c % ncx, c / ncx);
            let cx = ox + (i as f64 + 0.5) * h;
            let cy = oy + (j as f64 + 0.5) * h;
            mask.contains_point(cx, cy)
        })
        .collect();
    if !kept.iter().any(|&k| k) {
        return Err(Error::Degenerate(format!(
            "no mesh cell of size {h} has its centre inside the mask"
        )));
    }

    // Vertex (vi, vj) is used if any of its (up to) four cells is kept; it is
    // on the boundary if any of them is not. Numbering is row-major.
    let nvx = ncx + 1;
    let cell = |i: i64, j: i64| -> bool {
        i >= 0 && j >= 0 && (i as usize) < ncx && (j as usize) < ncy && kept[j as usize * ncx + i as usize]
    };
    let mut index = vec![usize::MAX; nvx * (ncy + 1)];
    let mut vertices = Vec::new();
    let mut boundary = Vec::new();
    for vj in 0..=ncy {
        for vi in 0..=ncx {
            let (i, j) = (vi as i64, vj as i64);
            let around = [cell(i - 1, j - 1), cell(i, j - 1), cell(i - 1, j), cell(i, j)];
            if around.iter().any(|&k| k) {
                index[vj * nvx + vi] = vertices.len();
                if !around.iter().all(|&k| k) {
                    boundary.push(vertices.len());
                }
                vertices.push([ox + vi as f64 * h, oy + vj as f64 * h]);
            }
        }
    }

    if boundary.len() == vertices.len() {
        return Err(Error::Degenerate(format!(
            "mesh of size {h} has no interior vertices"
        )));
    }

    let mut triangles = Vec::new();
    let mut cell_first_tri = vec![usize::MAX; ncx * ncy];
    let mut vertex_tris: HashMap<usize, Vec<usize>> = HashMap::new();
    for j in 0..ncy {
        for i in 0..ncx {
            if !kept[j * ncx + i] {
                continue;
            }
            let v00 = index[j * nvx + i];
            let v10 = index[j * nvx + i + 1];
            let v01 = index[(j + 1) * nvx + i];
            let v11 = index[(j + 1) * nvx + i + 1];
            cell_first_tri[j * ncx + i] = triangles.len();
            for tri in [[v00, v10, v11], [v00, v11, v01]] {
                for v in tri {
                    vertex_tris.entry(v).or_default().push(triangles.len());
                }
                triangles.push(tri);
            }
        }
    }

    let mut mesh = TriMesh {
        vertices,
        triangles,
        boundary_vertices: boundary,
        h,
        origin: [ox, oy],
        ncx,
        ncy,
        cell_first_tri,
        domain: mask.clone(),
    };

    let min_double_area = MIN_AREA_FRACTION * h * h;
    for &v in &mesh.boundary_vertices.clone() {
        let old = mesh.vertices[v];
        let (_, target) = mask.nearest_boundary_point(old[0], old[1]);
        mesh.vertices[v] = target;
        let ok = vertex_tris
            .get(&v)
            .map_or(true, |ts| ts.iter().all(|&t| mesh.double_area(t) > min_double_area));
        if !ok {
            mesh.vertices[v] = old;
        }
    }
    Ok(mesh)
}
